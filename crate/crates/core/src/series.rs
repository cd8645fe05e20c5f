//! Truncated generating series: Euler characteristics `Z(q)`, the core
//! series `Z_0(q)`, cell-count series `Z^±(q, t)` and their closed forms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::FromPrimitive;
use serde::{Deserialize, Serialize};

use crate::brane::{check_margins, is_bounded_nondecreasing, is_quiver_like, BraneTriple};
use crate::error::{BowError, Result};
use crate::kclass::GammaOrientation;
use crate::maya::{enumerate_cores, enumerate_fixed_points, for_each_core, par_fold_fixed_points, QuotientTuples};
use crate::scalar::Coeff;
use crate::tangent::{cell_dims, CellDims};

/// Power series in `q` truncated after `q^order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeries<C> {
    #[serde(rename = "q_order")]
    order: usize,
    coeffs: Vec<C>,
}

impl<C: Coeff> QSeries<C> {
    pub fn zero(order: usize) -> Self {
        QSeries {
            order,
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = QSeries::zero(order);
        s.coeffs[0] = C::one();
        s
    }

    /// Pads or truncates `coeffs` to `order + 1` entries.
    pub fn from_coeffs(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        QSeries { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_at(&mut self, k: usize, c: C) {
        if k <= self.order {
            self.coeffs[k] = self.coeffs[k].clone() + c;
        }
    }

    pub fn mul(&self, other: &QSeries<C>) -> QSeries<C> {
        let order = self.order.min(other.order);
        let mut out = QSeries::<C>::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out.coeffs[i + j] = out.coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        out
    }

    /// `∏_{l>=1} (1 - q^l)^{-k}`.
    pub fn eta_inverse_power(k: usize, order: usize) -> Self {
        let mut out = QSeries::<C>::one(order);
        for l in 1..=order {
            for _ in 0..k {
                // multiply by 1/(1 - q^l) in place
                for i in l..=order {
                    let prev = out.coeffs[i - l].clone();
                    out.coeffs[i] = out.coeffs[i].clone() + prev;
                }
            }
        }
        out
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}q")?,
                _ => write!(f, "{c}q^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

/// Series in `q` whose coefficients are Laurent polynomials in `t`, stored
/// sparsely by `t`-exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QTSeries<C> {
    #[serde(rename = "q_order")]
    order: usize,
    coeffs: Vec<BTreeMap<i64, C>>,
}

impl<C: Coeff> QTSeries<C> {
    pub fn zero(order: usize) -> Self {
        QTSeries {
            order,
            coeffs: vec![BTreeMap::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = QTSeries::zero(order);
        s.add_term(0, 0, C::one());
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Adds `c q^{q_deg} t^{t_exp}`; terms past the order are dropped.
    pub fn add_term(&mut self, q_deg: usize, t_exp: i64, c: C) {
        if q_deg > self.order || c.is_zero() {
            return;
        }
        let slot = self.coeffs[q_deg].entry(t_exp).or_insert_with(C::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.coeffs[q_deg].remove(&t_exp);
        }
    }

    /// Coefficient of `q^k` as `t`-exponent → coefficient.
    pub fn coeff(&self, k: usize) -> &BTreeMap<i64, C> {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BTreeMap<i64, C>] {
        &self.coeffs
    }

    pub fn mul(&self, other: &QTSeries<C>) -> QTSeries<C> {
        let order = self.order.min(other.order);
        let mut out = QTSeries::zero(order);
        for i in 0..=order {
            for j in 0..=order - i {
                for (ta, a) in &self.coeffs[i] {
                    for (tb, b) in &other.coeffs[j] {
                        out.add_term(i + j, ta + tb, a.clone() * b.clone());
                    }
                }
            }
        }
        out
    }

    /// Multiplies by `1 / (1 - t^{t_exp} q^{q_deg})`, `q_deg >= 1`.
    pub fn mul_geometric(&mut self, t_exp: i64, q_deg: usize) {
        assert!(q_deg >= 1);
        for i in q_deg..=self.order {
            let prev: Vec<(i64, C)> = self.coeffs[i - q_deg]
                .iter()
                .map(|(t, c)| (t + t_exp, c.clone()))
                .collect();
            for (t, c) in prev {
                self.add_term(i, t, c);
            }
        }
    }

    /// Multiplies by `q^{q_shift} t^{t_shift}`.
    pub fn shifted(&self, q_shift: usize, t_shift: i64) -> QTSeries<C> {
        let mut out = QTSeries::zero(self.order);
        for (k, poly) in self.coeffs.iter().enumerate() {
            for (t, c) in poly {
                out.add_term(k + q_shift, t + t_shift, c.clone());
            }
        }
        out
    }

    /// Specializes `t = 1`.
    pub fn at_t_one(&self) -> QSeries<C> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|poly| poly.values().fold(C::zero(), |acc, c| acc + c.clone()))
            .collect();
        QSeries::from_coeffs(coeffs, self.order)
    }
}

fn fmt_tpoly<C: Coeff + fmt::Display>(f: &mut fmt::Formatter<'_>, poly: &BTreeMap<i64, C>) -> fmt::Result {
    for (k, (t, c)) in poly.iter().enumerate() {
        if k > 0 {
            write!(f, "+")?;
        }
        match (*t, c.is_one()) {
            (0, _) => write!(f, "{c}")?,
            (1, true) => write!(f, "t")?,
            (1, false) => write!(f, "{c}t")?,
            (_, true) => write!(f, "t^{t}")?,
            (_, false) => write!(f, "{c}t^{t}")?,
        }
    }
    Ok(())
}

impl<C: Coeff + fmt::Display> fmt::Display for QTSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, poly) in self.coeffs.iter().enumerate() {
            if poly.is_empty() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "q^{k}(")?;
            fmt_tpoly(f, poly)?;
            write!(f, ")")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

/// Which cells a cell-count series counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellSign {
    /// Repelling cells, `t^{2 dim_-}`.
    Minus,
    /// Attracting cells, `t^{2 dim_+}`.
    Plus,
}

impl CellSign {
    pub fn pick(self, dims: CellDims) -> i64 {
        match self {
            CellSign::Minus => dims.minus,
            CellSign::Plus => dims.plus,
        }
    }
}

fn from_count<C: Coeff + FromPrimitive>(k: u64) -> C {
    C::from_u64(k).expect("count fits the coefficient type")
}

/// `Σ_c q^{Σ c(c-1)/2}` over contingency tables with margins `e`, `f`.
pub fn z0<C: Coeff + FromPrimitive>(e: &[i64], f: &[i64], order: usize) -> Result<QSeries<C>> {
    let mut out = QSeries::zero(order);
    for_each_core(e, f, order as i64, |c| out.add_at(c.energy() as usize, C::one()))?;
    Ok(out)
}

/// `Z_0(q) · ∏ (1 - q^l)^{-nm}`.
pub fn euler_series_formula<C: Coeff + FromPrimitive>(e: &[i64], f: &[i64], order: usize) -> Result<QSeries<C>> {
    let zero = z0::<C>(e, f, order)?;
    Ok(zero.mul(&QSeries::eta_inverse_power(e.len() * f.len(), order)))
}

/// Counts `|M(d, e, f)|` for `d = 0..=order` by enumeration.
pub fn euler_series_enum<C: Coeff + FromPrimitive>(e: &[i64], f: &[i64], order: usize) -> Result<QSeries<C>> {
    let cores = enumerate_cores(e, f, order as i64)?;
    let k = e.len() * f.len();
    let mut counts = vec![0u64; order + 1];
    for core in &cores {
        let energy = core.energy() as usize;
        for d in energy..=order {
            counts[d] += QuotientTuples::new(k, d - energy).count() as u64;
        }
    }
    Ok(QSeries::from_coeffs(counts.into_iter().map(from_count).collect(), order))
}

/// `Σ_d Σ_{M ∈ M(d,e,f)} t^{2 dim_∓(M)} q^d`.
pub fn poincare_series<C: Coeff + FromPrimitive>(
    e: &[i64],
    f: &[i64],
    order: usize,
    sign: CellSign,
    orientation: GammaOrientation,
) -> Result<QTSeries<C>> {
    let counts = par_fold_fixed_points(
        e,
        f,
        order,
        HashMap::<(usize, i64), u64>::new(),
        |acc, d, md| {
            let dims = cell_dims(md, orientation)?;
            *acc.entry((d, 2 * sign.pick(dims))).or_insert(0) += 1;
            Ok(())
        },
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        },
    )?;
    let mut out = QTSeries::zero(order);
    for ((d, t), k) in counts {
        out.add_term(d, t, from_count(k));
    }
    Ok(out)
}

fn binom2(x: i64) -> i64 {
    x * (x - 1) / 2
}

/// Exponent `A = Σ e(e-1)/2` of the leading `q`-power for `m = 1`, and the
/// leading `t`-exponent `2B` of the closed form.
pub fn m1_leading_exponents(e: &[i64], sign: CellSign) -> (i64, i64) {
    let a = e.iter().map(|&x| binom2(x)).sum();
    let n = e.len();
    let mut b = 0;
    for alpha in 0..n {
        for beta in alpha + 1..n {
            b += match sign {
                CellSign::Minus => binom2((e[beta] - e[alpha] - 1).abs()),
                CellSign::Plus => {
                    let l = e[alpha] - e[beta];
                    if l >= 0 {
                        (l + 1) * l / 2
                    } else {
                        (l - 1) * l / 2 - 1
                    }
                }
            };
        }
    }
    (a, 2 * b)
}

/// `q^A t^{2B} ∏_{i=1}^n ∏_{l>=1} (1 - t^{2(nl ∓ i)} q^l)^{-1}` for `m = 1`.
pub fn product_formula_m1<C: Coeff>(e: &[i64], order: usize, sign: CellSign) -> Result<QTSeries<C>> {
    let n = e.len() as i64;
    if n == 0 {
        return Err(BowError::EmptyDiagram { n: 0, m: 1 });
    }
    let (a, t_shift) = m1_leading_exponents(e, sign);
    let mut body = QTSeries::one(order);
    for l in 1..=order as i64 {
        for i in 1..=n {
            let t_exp = match sign {
                CellSign::Minus => 2 * (n * l - i),
                CellSign::Plus => 2 * (n * l + i),
            };
            body.mul_geometric(t_exp, l as usize);
        }
    }
    if a < 0 {
        return Err(BowError::precondition("non-negative leading q-power"));
    }
    Ok(body.shifted(a as usize, t_shift))
}

/// `(Z^-, Z^+)` for `n = 1` in closed form.
pub fn product_formula_n1<C: Coeff>(f: &[i64], order: usize) -> Result<(QTSeries<C>, QTSeries<C>)> {
    let m = f.len();
    if m == 0 {
        return Err(BowError::EmptyDiagram { n: 1, m: 0 });
    }
    let a: i64 = f.iter().map(|&x| binom2(x)).sum();
    let mut minus = QTSeries::one(order);
    let mut plus = QTSeries::one(order);
    for l in 1..=order {
        let li = l as i64;
        minus.mul_geometric(2 * li - 2, l);
        plus.mul_geometric(2 * li + 2, l);
        for _ in 1..m {
            minus.mul_geometric(2 * li, l);
            plus.mul_geometric(2 * li, l);
        }
    }
    Ok((minus.shifted(a as usize, 0), plus.shifted(a as usize, 0)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringReport {
    /// Some `[move-1]` rotation of `e` is `(m+1)`-bounded non-decreasing.
    pub condition: bool,
    /// Number of `[move-1]` steps to the first such rotation.
    pub rotation: Option<usize>,
    /// The gap criterion of [`is_quiver_like`].
    pub quiver_like: bool,
    /// The triple searched for a witness.
    pub searched: BraneTriple,
    pub fixed_points: u64,
    /// A fixed point with no repelling directions exists.
    pub witness_found: bool,
    /// `condition ⇒ witness` (vacuous when there are no fixed points).
    pub implication_holds: bool,
}

pub fn covering_check(d: i64, e: &[i64], f: &[i64], orientation: GammaOrientation) -> Result<CoveringReport> {
    check_margins(e, f)?;
    let m = f.len();
    let start = BraneTriple::new(d, e.to_vec(), f.to_vec())?;
    let mut t = start.clone();
    let mut rotation = None;
    for r in 0..e.len() {
        if is_bounded_nondecreasing(&t.e, m as i64 + 1) {
            rotation = Some(r);
            break;
        }
        t = t.move1();
    }
    let searched = if rotation.is_some() { t } else { start };
    let mut fixed_points = 0;
    let mut witness_found = false;
    if searched.d >= 0 {
        for md in enumerate_fixed_points(searched.d, &searched.e, &searched.f)? {
            fixed_points += 1;
            if cell_dims(&md, orientation)?.minus == 0 {
                witness_found = true;
                break;
            }
        }
    }
    let condition = rotation.is_some();
    Ok(CoveringReport {
        condition,
        rotation,
        quiver_like: is_quiver_like(e, m),
        searched,
        fixed_points,
        witness_found,
        implication_holds: !condition || witness_found || fixed_points == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationRow {
    pub s: usize,
    /// `P_s(t)`: `t`-exponent → coefficient.
    pub poly: BTreeMap<i64, i64>,
    /// Largest `t`-degree through which `P_s` agrees with
    /// `∏ (1 - t^{2r})^{-m}`; `None` if even the constant terms differ.
    pub matched_degree: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationReport {
    /// Lowest `d` with a fixed point.
    pub d0: i64,
    /// Lowest `t`-exponent at `d0`, divided out of every row.
    pub t0: i64,
    pub rows: Vec<StabilizationRow>,
}

/// Smallest `Σ c(c-1)/2` over contingency tables with margins `e`, `f`.
pub fn min_core_energy(e: &[i64], f: &[i64]) -> Result<i64> {
    check_margins(e, f)?;
    let mut bound = 0;
    loop {
        let mut best = None;
        for_each_core(e, f, bound, |c| {
            let en = c.energy();
            best = Some(best.map_or(en, |b: i64| b.min(en)));
        })?;
        if let Some(b) = best {
            return Ok(b);
        }
        bound = 2 * bound + 1;
    }
}

/// Coefficients of `∏_{r>=1} (1 - t^{2r})^{-m}` indexed by `t`-exponent/2.
fn target_series(m: usize, half_degree: usize) -> Vec<i64> {
    QSeries::<i64>::eta_inverse_power(m, half_degree).coeffs().to_vec()
}

/// Compares `P_s(t) = t^{-t0}·[q^{d0+s}] Z^sign(q, t)` with the stable
/// limit for `s = 0..=s_max`.
pub fn stabilization_report(
    e: &[i64],
    f: &[i64],
    s_max: usize,
    sign: CellSign,
    orientation: GammaOrientation,
) -> Result<StabilizationReport> {
    check_margins(e, f)?;
    let d0 = min_core_energy(e, f)?;
    let order = d0 as usize + s_max;
    let series = poincare_series::<i64>(e, f, order, sign, orientation)?;
    let t0 = *series.coeff(d0 as usize).keys().next().expect("d0 has fixed points");
    let m = f.len();
    let mut rows = Vec::new();
    for s in 0..=s_max {
        let poly: BTreeMap<i64, i64> = series
            .coeff(d0 as usize + s)
            .iter()
            .map(|(t, c)| (t - t0, *c))
            .collect();
        let top = poly.keys().next_back().copied().unwrap_or(0).max(0);
        let target = target_series(m, (top / 2) as usize + 1);
        let mut matched = None;
        if poly.keys().all(|&t| t >= 0) {
            for deg in (0..=top + 2).step_by(2) {
                if poly.get(&deg).copied().unwrap_or(0) != target[(deg / 2) as usize] {
                    break;
                }
                matched = Some(deg);
            }
        }
        rows.push(StabilizationRow {
            s,
            poly,
            matched_degree: matched,
        });
    }
    Ok(StabilizationReport { d0, t0, rows })
}
