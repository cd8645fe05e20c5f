//! The quadratic form behind `Z_0` for margins `(3,2,1)`, and the
//! divisor-sum identities of its coefficients.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{BowError, Result};
use crate::maya::core_energy;
use crate::series::{z0, QSeries};

/// Sum of the positive divisors of `k`.
pub fn sigma(k: i64) -> Result<i64> {
    if k < 1 {
        return Err(BowError::SigmaDomain(k));
    }
    let mut s = 0;
    let mut d = 1;
    while d * d <= k {
        if k.is_multiple_of(&d) {
            s += d;
            if d * d != k {
                s += k / d;
            }
        }
        d += 1;
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaReport {
    pub residue: i64,
    pub offset: usize,
    /// `[q^{n+offset}] Z_0` for `n = 0..=N`.
    pub coeffs: Vec<i64>,
    /// `σ(3n + residue)`.
    pub expected: Vec<i64>,
    pub first_failure: Option<usize>,
}

impl SigmaReport {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Compares `[q^{n+offset}] Z_0(e, f)` with `σ(3n + residue)` for `0 <= n <= big_n`.
pub fn check_sigma_series(e: &[i64], f: &[i64], residue: i64, offset: usize, big_n: usize) -> Result<SigmaReport> {
    let z: QSeries<i64> = z0(e, f, big_n + offset)?;
    let coeffs: Vec<i64> = (0..=big_n).map(|n| z.coeff(n + offset)).collect();
    let expected = (0..=big_n)
        .map(|n| sigma(3 * n as i64 + residue))
        .collect::<Result<Vec<_>>>()?;
    let first_failure = coeffs.iter().zip(&expected).position(|(a, b)| a != b);
    Ok(SigmaReport {
        residue,
        offset,
        coeffs,
        expected,
        first_failure,
    })
}

/// The named cases of the CLI: `(e, f, residue, offset)`.
pub fn sigma_case(name: &str) -> Option<(Vec<i64>, Vec<i64>, i64, usize)> {
    match name {
        "321" => Some((vec![3, 2, 1], vec![3, 2, 1], 1, 0)),
        "neg111" => Some((vec![-1, -1, -1], vec![-2, -1, 0], 2, 3)),
        _ => None,
    }
}

/// Contingency tables with margins `(3,2,1)` written as
/// `base + [[a, b, -a-b], [c, d, -c-d], [-a-c, -b-d, a+b+c+d]]`, with
/// `F(w) = mᵀAm/2 + d - a` for `m = (a, b, c, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixForm {
    pub a: [[i64; 4]; 4],
    pub x: [Ratio<i64>; 4],
    pub h: [i64; 4],
    pub base: [[i64; 3]; 3],
}

impl Default for AppendixForm {
    fn default() -> Self {
        AppendixForm {
            a: [[4, 2, 2, 1], [2, 4, 1, 2], [2, 1, 4, 2], [1, 2, 2, 4]],
            x: [
                Ratio::new(-1, 3),
                Ratio::from_integer(0),
                Ratio::from_integer(0),
                Ratio::new(1, 3),
            ],
            h: [-3, 0, 0, 3],
            base: [[1, 1, 1], [1, 1, 0], [1, 0, 0]],
        }
    }
}

impl AppendixForm {
    pub fn matrix(&self, m: [i64; 4]) -> [[i64; 3]; 3] {
        let [a, b, c, d] = m;
        let delta = [[a, b, -a - b], [c, d, -c - d], [-a - c, -b - d, a + b + c + d]];
        let mut w = self.base;
        for i in 0..3 {
            for j in 0..3 {
                w[i][j] += delta[i][j];
            }
        }
        w
    }

    /// Inverse of [`matrix`](Self::matrix) on tables with the right margins.
    pub fn params(&self, w: &[[i64; 3]; 3]) -> [i64; 4] {
        [
            w[0][0] - self.base[0][0],
            w[0][1] - self.base[0][1],
            w[1][0] - self.base[1][0],
            w[1][1] - self.base[1][1],
        ]
    }

    /// `mᵀAm`.
    pub fn quad(&self, m: [i64; 4]) -> i64 {
        (0..4).map(|i| (0..4).map(|j| m[i] * self.a[i][j] * m[j]).sum::<i64>()).sum()
    }

    /// `mᵀAm/2 + d - a`; `mᵀAm` is always even.
    pub fn f_value(&self, m: [i64; 4]) -> i64 {
        self.quad(m) / 2 + m[3] - m[0]
    }

    pub fn det(&self) -> Ratio<i64> {
        let mut rows: Vec<Vec<Ratio<i64>>> = self
            .a
            .iter()
            .map(|r| r.iter().map(|&x| Ratio::from_integer(x)).collect())
            .collect();
        let mut det = Ratio::from_integer(1);
        for col in 0..4 {
            let Some(piv) = (col..4).find(|&r| rows[r][col] != Ratio::from_integer(0)) else {
                return Ratio::from_integer(0);
            };
            if piv != col {
                rows.swap(piv, col);
                det = -det;
            }
            let p = rows[col][col];
            det *= p;
            for r in col + 1..4 {
                let factor = rows[r][col] / p;
                for c in col..4 {
                    let sub = factor * rows[col][c];
                    rows[r][c] -= sub;
                }
            }
        }
        det
    }

    /// The stated `9·A^{-1}`.
    pub fn nine_a_inverse() -> [[i64; 4]; 4] {
        [[4, -2, -2, 1], [-2, 4, 1, -2], [-2, 1, 4, -2], [1, -2, -2, 4]]
    }

    pub fn m_a_x(&self, m: [i64; 4]) -> Ratio<i64> {
        let mut s = Ratio::from_integer(0);
        for i in 0..4 {
            for j in 0..4 {
                s += Ratio::from_integer(m[i] * self.a[i][j]) * self.x[j];
            }
        }
        s
    }

    pub fn x_a_x(&self) -> Ratio<i64> {
        let mut s = Ratio::from_integer(0);
        for i in 0..4 {
            for j in 0..4 {
                s += self.x[i] * Ratio::from_integer(self.a[i][j]) * self.x[j];
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub points: usize,
    pub margin_failures: usize,
    pub identity_failures: usize,
    /// Failures of `mᵀAx = d - a`.
    pub linear_failures: usize,
    pub det_is_81: bool,
    pub inverse_ok: bool,
    pub x_a_x_is_two_thirds: bool,
    pub h_is_nine_x: bool,
}

impl AppendixReport {
    pub fn holds(&self) -> bool {
        self.margin_failures == 0
            && self.identity_failures == 0
            && self.linear_failures == 0
            && self.det_is_81
            && self.inverse_ok
            && self.x_a_x_is_two_thirds
            && self.h_is_nine_x
    }
}

/// Checks the parametrization and `Σ w(w-1)/2 = F` on `[-r, r]^4`.
pub fn appendix_f_check(r: i64) -> AppendixReport {
    let form = AppendixForm::default();
    let mut report = AppendixReport {
        points: 0,
        margin_failures: 0,
        identity_failures: 0,
        linear_failures: 0,
        det_is_81: form.det() == Ratio::from_integer(81),
        inverse_ok: true,
        x_a_x_is_two_thirds: form.x_a_x() == Ratio::new(2, 3),
        h_is_nine_x: (0..4).all(|i| Ratio::from_integer(form.h[i]) == form.x[i] * 9),
    };
    let inv = AppendixForm::nine_a_inverse();
    for i in 0..4 {
        for j in 0..4 {
            let s: i64 = (0..4).map(|k| form.a[i][k] * inv[k][j]).sum();
            if s != if i == j { 9 } else { 0 } {
                report.inverse_ok = false;
            }
        }
    }
    let range = -r..=r;
    for a in range.clone() {
        for b in range.clone() {
            for c in range.clone() {
                for d in range.clone() {
                    let m = [a, b, c, d];
                    let w = form.matrix(m);
                    report.points += 1;
                    let rows_ok = w.iter().map(|r| r.iter().sum::<i64>()).eq([3, 2, 1]);
                    let cols_ok = (0..3).map(|j| (0..3).map(|i| w[i][j]).sum::<i64>()).eq([3, 2, 1]);
                    if !(rows_ok && cols_ok) || form.params(&w) != m {
                        report.margin_failures += 1;
                    }
                    let lhs: i64 = w.iter().flatten().map(|&x| core_energy(x)).sum();
                    if lhs != form.f_value(m) {
                        report.identity_failures += 1;
                    }
                    if form.m_a_x(m) != Ratio::from_integer(d - a) {
                        report.linear_failures += 1;
                    }
                }
            }
        }
    }
    report
}

/// `Σ_{m ∈ Z^4} q^{F(m)}` truncated at `order`, an independent computation
/// of `Z_0` for margins `(3,2,1)`.
pub fn theta_z0(order: usize) -> QSeries<i64> {
    let form = AppendixForm::default();
    // smallest eigenvalue of A is 1, so F(m) >= |m|^2/2 - sqrt(2)|m|
    let mut r = 0i64;
    while (r * r) as f64 / 2.0 - 2f64.sqrt() * r as f64 <= order as f64 {
        r += 1;
    }
    let mut out = QSeries::zero(order);
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                for d in -r..=r {
                    let v = form.f_value([a, b, c, d]);
                    if (0..=order as i64).contains(&v) {
                        out.add_at(v as usize, 1);
                    }
                }
            }
        }
    }
    out
}
