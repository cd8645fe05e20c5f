//! The parabolic partition function `Σ_M 1 / e(T_M)` evaluated at a point
//! of the equivariant parameter space.

use serde::{Deserialize, Serialize};

use crate::brane::is_bounded_nondecreasing;
use crate::error::{BowError, Result};
use crate::eyd::r_region;
use crate::kclass::{euler_linear_forms, KClass, LinearForm};
use crate::maya::{par_fold_fixed_points, MayaDiagram};
use crate::scalar::Scalar;
use crate::tangent::tangent_via_pairs;

/// Values of `ε1`, `ε2` and `a_1..a_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamPoint<S> {
    pub eps1: S,
    pub eps2: S,
    pub a: Vec<S>,
}

impl<S: Scalar> ParamPoint<S> {
    pub fn new(eps1: S, eps2: S, a: Vec<S>) -> Self {
        ParamPoint { eps1, eps2, a }
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn eval(&self, form: &LinearForm) -> S {
        form.evaluate(&self.eps1, &self.eps2, &self.a)
    }

    /// `a_i ↦ a_i + k_i ε1`.
    pub fn shift_a_by_eps1(&self, k: &[i64]) -> Self {
        let a = self
            .a
            .iter()
            .zip(k)
            .map(|(x, &ki)| x.clone() + S::from_i64(ki) * self.eps1.clone())
            .collect();
        ParamPoint {
            eps1: self.eps1.clone(),
            eps2: self.eps2.clone(),
            a,
        }
    }

    fn check_rank(&self, n: usize) -> Result<()> {
        if self.rank() != n {
            return Err(BowError::RankMismatch(n, self.rank()));
        }
        Ok(())
    }
}

fn nonzero<S: Scalar>(p: &ParamPoint<S>, form: &LinearForm) -> Result<S> {
    let v = p.eval(form);
    if v.is_zero() {
        return Err(BowError::NonGeneric(form.to_string()));
    }
    Ok(v)
}

/// `∏ w^c` over the terms `c·w` of a class, with negative `c` dividing.
pub fn class_weight_product<S: Scalar>(x: &KClass, p: &ParamPoint<S>) -> Result<S> {
    p.check_rank(x.rank())?;
    let mut num = S::one();
    let mut den = S::one();
    for (mono, c) in x.terms() {
        let v = nonzero(p, &LinearForm::from(mono))?;
        for _ in 0..c.abs() {
            if c > 0 {
                num = num * v.clone();
            } else {
                den = den * v.clone();
            }
        }
    }
    Ok(num / den)
}

/// `e(T_M)`, the product of the tangent weights at `M`.
pub fn euler_class_value<S: Scalar>(md: &MayaDiagram, p: &ParamPoint<S>) -> Result<S> {
    p.check_rank(md.n())?;
    let forms = euler_linear_forms(&tangent_via_pairs(md))?;
    let mut out = S::one();
    for form in &forms {
        out = out * nonzero(p, form)?;
    }
    Ok(out)
}

/// `Z_d = Σ_{M ∈ M(d, e, f)} 1 / e(T_M)` for `d = 0..=order`.
pub fn partition_series<S: Scalar>(e: &[i64], f: &[i64], p: &ParamPoint<S>, order: usize) -> Result<Vec<S>> {
    p.check_rank(e.len())?;
    par_fold_fixed_points(
        e,
        f,
        order,
        vec![S::zero(); order + 1],
        |acc, d, md| {
            let v = euler_class_value(md, p)?;
            acc[d] = acc[d].clone() + S::one() / v;
            Ok(())
        },
        |a, b| a.into_iter().zip(b).map(|(x, y)| x + y).collect(),
    )
}

/// Inverse product of the weights `s1 ε1 + s2 ε2 + a_β - a_α` over the
/// regions `R^{eα, eβ}_{α, β}`.
pub fn r_factor<S: Scalar>(e: &[i64], p: &ParamPoint<S>) -> Result<S> {
    let n = e.len();
    p.check_rank(n)?;
    let mut prod = S::one();
    for alpha in 0..n {
        for beta in 0..n {
            for (s1, s2) in r_region(alpha, beta, e[alpha], e[beta]).points {
                let mut w = vec![0; n];
                w[beta] += 1;
                w[alpha] -= 1;
                let form = LinearForm { eps1: s1, eps2: s2, a: w };
                prod = prod * nonzero(p, &form)?;
            }
        }
    }
    Ok(S::one() / prod)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuiverComparison<S> {
    /// `Σ e(e-1)/2`.
    pub a_shift: i64,
    /// Degree offset `k` with `Z_d = Z^0_{d-k} · R`, among `{A, 0}`.
    pub alignment: Option<i64>,
    /// Sign `σ` in the shifted point `a + σ ε1 e` that made equality hold.
    pub a_sign: Option<i64>,
    pub lhs: Vec<S>,
    /// `Z^0_{d-k}(a + σ ε1 e) · R` for the reported alignment, or for
    /// `(A, +1)` if none holds.
    pub rhs: Vec<S>,
    pub holds: bool,
}

/// Compares the `m = 1` partition function with the quiver one at shifted
/// parameters. Tries the degree offsets `A` and `0` and both signs of the
/// shift, and reports the first combination that holds for every degree.
pub fn quiver_comparison<S: Scalar>(e: &[i64], p: &ParamPoint<S>, order: usize) -> Result<QuiverComparison<S>> {
    if !is_bounded_nondecreasing(e, 2) {
        return Err(BowError::precondition("a 2-bounded non-decreasing charge vector"));
    }
    let n = e.len();
    let total: i64 = e.iter().sum();
    let lhs = partition_series(e, &[total], p, order)?;
    let a_shift: i64 = e.iter().map(|x| x * (x - 1) / 2).sum();
    let zeros = vec![0; n];
    let mut first_rhs = None;
    for k in [a_shift, 0] {
        for sign in [1i64, -1] {
            let shift: Vec<i64> = e.iter().map(|x| sign * x).collect();
            let q = p.shift_a_by_eps1(&shift);
            let base = partition_series(&zeros, &[0], &q, order)?;
            let r = r_factor(e, p)?;
            let rhs: Vec<S> = (0..=order as i64)
                .map(|d| {
                    if d - k >= 0 {
                        base[(d - k) as usize].clone() * r.clone()
                    } else {
                        S::zero()
                    }
                })
                .collect();
            if rhs == lhs {
                return Ok(QuiverComparison {
                    a_shift,
                    alignment: Some(k),
                    a_sign: Some(sign),
                    lhs,
                    rhs,
                    holds: true,
                });
            }
            first_rhs.get_or_insert(rhs);
        }
    }
    Ok(QuiverComparison {
        a_shift,
        alignment: None,
        a_sign: None,
        lhs,
        rhs: first_rhs.unwrap(),
        holds: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maya::{enumerate_fixed_points, fixtures::first_2maya};
    use crate::tangent::d5_swap_delta;
    use num_bigint::BigInt;
    use num_rational::BigRational as Q;

    fn q(a: i128, b: i128) -> Q {
        Q::new(BigInt::from(a), BigInt::from(b))
    }

    fn point(n: usize) -> ParamPoint<Q> {
        let a = (0..n as i128).map(|i| q(3 * i + 1, 7 - i)).collect();
        ParamPoint::new(q(2, 3), q(-5, 4), a)
    }

    #[test]
    fn hilbert_scheme_series() {
        let p = ParamPoint::new(q(2, 3), q(-5, 4), vec![q(1, 2)]);
        let z = partition_series(&[0], &[0], &p, 5).unwrap();
        let mut fact = q(1, 1);
        for (d, zd) in z.iter().enumerate() {
            if d > 0 {
                fact *= q(d as i128, 1);
            }
            let mut expect = fact.clone();
            for _ in 0..d {
                expect *= &p.eps1 * &p.eps2;
            }
            assert_eq!(zd * expect, q(1, 1), "d = {d}");
        }
    }

    #[test]
    fn translation_invariant() {
        let p = point(2);
        let shifted = ParamPoint::new(p.eps1.clone(), p.eps2.clone(), p.a.iter().map(|x| x + q(11, 5)).collect());
        let a = partition_series(&[0, 1], &[1], &p, 4).unwrap();
        let b = partition_series(&[0, 1], &[1], &shifted, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn euler_class_matches_weight_product() {
        let p = point(2);
        for md in enumerate_fixed_points(3, &[1, -1], &[-1, 1]).unwrap() {
            let t = tangent_via_pairs(&md);
            assert_eq!(euler_class_value(&md, &p).unwrap(), class_weight_product(&t, &p).unwrap());
        }
    }

    #[test]
    fn d5_swap_ratio() {
        let md = first_2maya();
        let p = point(3);
        let (lhs, rhs) = d5_swap_delta(&md, 1).unwrap();
        assert_eq!(lhs, rhs);
        let sw = md.swap_rows(1).unwrap();
        let mut pa = p.clone();
        pa.a.swap(1, 2);
        let ratio = euler_class_value(&md, &p).unwrap() / euler_class_value(&sw, &pa).unwrap();
        assert_eq!(ratio, class_weight_product(&rhs, &p).unwrap());
    }

    #[test]
    fn errors() {
        let p = ParamPoint::new(q(1, 1), q(1, 1), vec![q(0, 1)]);
        assert!(matches!(partition_series(&[0], &[0], &p, 2), Err(BowError::NonGeneric(_))));
        assert!(matches!(
            partition_series(&[0, 0], &[0], &p, 2),
            Err(BowError::RankMismatch(2, 1))
        ));
        assert!(quiver_comparison(&[0, 3], &point(2), 2).is_err());
    }

    #[test]
    fn quiver_comparison_small() {
        for e in [vec![0, 1], vec![0, 1, 2], vec![1, 2]] {
            let n = e.len();
            let c = quiver_comparison(&e, &point(n), 3).unwrap();
            assert!(c.holds, "{e:?}");
            assert_eq!(c.alignment, Some(c.a_shift));
            assert_eq!(c.a_sign, Some(1));
        }
    }

    #[test]
    fn float_point_runs() {
        let p = ParamPoint::new(0.7f64, -1.3, vec![0.2, 1.9]);
        let z = partition_series(&[0, 1], &[1], &p, 2).unwrap();
        assert!(z.iter().all(|x| x.is_finite()));
    }
}
