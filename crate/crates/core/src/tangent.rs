//! Tangent characters at torus fixed points: the 01-pair formula, the
//! extended Young diagram formula, D5 swaps and cell dimensions.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eyd::{arm, leg, maya_to_eyds, r_region, relative_hook, ExtendedYoungDiagram};
use crate::kclass::{GammaOrientation, KClass, Monomial};
use crate::maya::MayaDiagram;

/// A 1 and a 0 in the same column `j`, with the 0 later in reading order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pair01 {
    /// `(2k1, i1, j)`
    pub one_at: (i64, usize, usize),
    /// `(2k0, i0, j)`
    pub zero_at: (i64, usize, usize),
    pub s1: i64,
    pub s0: i64,
}

impl Pair01 {
    /// The two monomials `μ` and `t1 t2 μ^{-1}` of this pair.
    pub fn monomials(&self, n: usize, m: usize) -> (Monomial, Monomial) {
        let (tk1, i1, _) = self.one_at;
        let (tk0, i0, _) = self.zero_at;
        let ds = self.s1 - self.s0;
        let a = ds + m as i64 * (tk0 - tk1) / 2;
        let mu = if i0 == i1 {
            Monomial::t(n, a, ds)
        } else {
            Monomial::with_ratio(n, a, ds, i0, i1)
        };
        let dual = mu.inverse().mul(&Monomial::t(n, 1, 1));
        (mu, dual)
    }
}

/// `s_{k,i,j}`: the number of 1s in row `i` strictly before block `k`, plus
/// those in columns `..=j` of block `k`.
pub fn prefix_sum(md: &MayaDiagram, two_k: i64, i: usize, j: usize) -> i64 {
    let before: i64 = (md.two_k_lo()..two_k)
        .step_by(2)
        .map(|tk| (0..md.m()).map(|a| md.entry(tk, i, a) as i64).sum::<i64>())
        .sum();
    before + (0..=j).map(|a| md.entry(two_k, i, a) as i64).sum::<i64>()
}

pub fn list_01_pairs(md: &MayaDiagram) -> Vec<Pair01> {
    let (n, m) = (md.n(), md.m());
    let (lo, hi) = (md.two_k_lo(), md.two_k_hi());
    let nb = md.num_blocks();
    // running prefix sums per (block, row, column)
    let mut s = vec![0i64; nb * n * m];
    for i in 0..n {
        let mut acc = 0;
        for b in 0..nb {
            for j in 0..m {
                acc += md.entry(lo + 2 * b as i64, i, j) as i64;
                s[(b * n + i) * m + j] = acc;
            }
        }
    }
    let mut out = Vec::new();
    for j in 0..m {
        for b1 in 0..nb {
            let tk1 = lo + 2 * b1 as i64;
            for i1 in 0..n {
                if md.entry(tk1, i1, j) != 1 {
                    continue;
                }
                for b0 in b1..nb {
                    let tk0 = lo + 2 * b0 as i64;
                    for i0 in 0..n {
                        if (b0 == b1 && i0 >= i1) || md.entry(tk0, i0, j) != 0 {
                            continue;
                        }
                        out.push(Pair01 {
                            one_at: (tk1, i1, j),
                            zero_at: (tk0, i0, j),
                            s1: s[(b1 * n + i1) * m + j],
                            s0: s[(b0 * n + i0) * m + j],
                        });
                    }
                }
            }
        }
    }
    debug_assert!(hi >= lo);
    out
}

pub fn tangent_via_pairs(md: &MayaDiagram) -> KClass {
    let mut out = KClass::zero(md.n());
    for pair in list_01_pairs(md) {
        let (mu, dual) = pair.monomials(md.n(), md.m());
        out.add_term(mu, 1);
        out.add_term(dual, 1);
    }
    out
}

fn congruent(x: i64, y: i64, m: usize) -> bool {
    (x - y).rem_euclid(m as i64) == 0
}

/// Exponents `(a, b)` of `N_{α,β}`, the coefficient of `u_β u_α^{-1}`.
pub fn n_alpha_beta(
    alpha: usize,
    beta: usize,
    b_alpha: &ExtendedYoungDiagram,
    b_beta: &ExtendedYoungDiagram,
    m: usize,
) -> Vec<(i64, i64)> {
    let (ya, yb) = (&b_alpha.y, &b_beta.y);
    let de = b_beta.charge - b_alpha.charge;
    let mut out = Vec::new();
    for s in ya.boxes() {
        if congruent(relative_hook(ya, yb, s), de, m) {
            out.push((de - leg(yb, s), arm(ya, s) + 1));
        }
    }
    for t in yb.boxes() {
        if congruent(relative_hook(yb, ya, t), -de, m) {
            out.push((de + leg(ya, t) + 1, -arm(yb, t)));
        }
    }
    for (s1, s2) in r_region(alpha, beta, b_alpha.charge, b_beta.charge).points {
        if congruent(s1, s2, m) {
            out.push((s1, s2));
        }
    }
    out
}

pub fn tangent_via_eyd(md: &MayaDiagram) -> KClass {
    let n = md.n();
    let eyds = maya_to_eyds(md);
    let mut out = KClass::zero(n);
    for alpha in 0..n {
        for beta in 0..n {
            for (a, b) in n_alpha_beta(alpha, beta, &eyds[alpha], &eyds[beta], md.m()) {
                let mono = if alpha == beta {
                    Monomial::t(n, a, b)
                } else {
                    Monomial::with_ratio(n, a, b, beta, alpha)
                };
                out.add_term(mono, 1);
            }
        }
    }
    out
}

/// Both sides of the D5 swap relation for rows `j`, `j + 1` (0-based).
pub fn d5_swap_delta(md: &MayaDiagram, j: usize) -> Result<(KClass, KClass)> {
    let swapped = md.swap_rows(j)?;
    let lhs = &tangent_via_pairs(md) - &tangent_via_pairs(&swapped).swap_u(j)?;
    let (_, e, _) = md.charges();
    let de = e[j + 1] - e[j];
    let n = md.n();
    let mut w = KClass::zero(n);
    if de >= 0 {
        for i in 1..=de {
            w.add_term(Monomial::with_ratio(n, i, i, j + 1, j), -1);
        }
    } else {
        for i in de + 1..=0 {
            w.add_term(Monomial::with_ratio(n, i, i, j + 1, j), 1);
        }
    }
    let rhs = &w + &w.dual().mul_monomial(&Monomial::t(n, 1, 1));
    Ok((lhs, rhs))
}

/// Dimensions of the attracting (`plus`) and repelling (`minus`) cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellDims {
    pub minus: i64,
    pub plus: i64,
}

pub fn cell_dims_of(tangent: &KClass, orientation: GammaOrientation) -> Result<CellDims> {
    let (minus, plus) = tangent.sign_counts(orientation)?;
    Ok(CellDims { minus, plus })
}

pub fn cell_dims(md: &MayaDiagram, orientation: GammaOrientation) -> Result<CellDims> {
    cell_dims_of(&tangent_via_pairs(md), orientation)
}

/// Closed form of `dim_-` for `m = 1`: `Σ_β n|Y_β| - (n-β+1)·Y_{β,1}` plus
/// `Σ_{α<β} binom(|e_β - e_α - 1|, 2)`, with 1-based `β`.
pub fn zastava_dim_minus(md: &MayaDiagram) -> Result<i64> {
    if md.m() != 1 {
        return Err(crate::error::BowError::precondition("m = 1"));
    }
    let n = md.n() as i64;
    let eyds = maya_to_eyds(md);
    let mut out = 0;
    for (b, yb) in eyds.iter().enumerate() {
        let beta = b as i64 + 1;
        out += n * yb.y.size() as i64 - (n - beta + 1) * yb.y.row(1) as i64;
        for ya in &eyds[..b] {
            let x = (yb.charge - ya.charge - 1).abs();
            out += x * (x - 1) / 2;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eyd::r_region;
    use crate::maya::{enumerate_fixed_points, fixtures, Core};

    #[test]
    fn prefix_sums_of_worked_pair() {
        let md = fixtures::first_2maya();
        assert_eq!(prefix_sum(&md, -1, 2, 0), 1);
        assert_eq!(prefix_sum(&md, 3, 1, 0), 1);
        let vac = MayaDiagram::vacuum(2, 2);
        assert_eq!(prefix_sum(&vac, -5, 1, 1), 0);
        assert_eq!(prefix_sum(&vac, -1, 0, 1), 0);
        assert_eq!(prefix_sum(&vac, 5, 1, 1), 6);
    }

    #[test]
    fn worked_pair_contribution() {
        let md = fixtures::first_2maya();
        let pairs = list_01_pairs(&md);
        assert_eq!(pairs.len(), 18);
        let pair = pairs
            .iter()
            .find(|p| p.one_at == (-1, 2, 0) && p.zero_at == (3, 1, 0))
            .unwrap();
        assert_eq!((pair.s1, pair.s0), (1, 1));
        let (mu, dual) = pair.monomials(3, 2);
        assert_eq!(mu, Monomial::with_ratio(3, 4, 0, 1, 2));
        assert_eq!(dual, Monomial::with_ratio(3, -3, 1, 2, 1));
    }

    /// `[(a, b, coeff)]` for the `u1/u2`, `u2/u1` and trivial parts.
    type Parts = [&'static [(i64, i64, i64)]; 3];

    const PRINTED: [Parts; 5] = [
        [&[(-4, 0, 1), (-3, -1, 1), (-2, 0, 1)], &[(5, 1, 1), (4, 2, 1), (3, 1, 1)], &[]],
        [&[(-2, 2, 1), (-2, 0, 1)], &[(3, -1, 1), (3, 1, 1)], &[(1, -1, 1), (0, 2, 1)]],
        [&[(-1, 1, 1), (-2, 0, 1)], &[(2, 0, 1), (3, 1, 1)], &[(-1, 1, 1), (2, 0, 1)]],
        [&[(-2, 0, 1), (-3, 1, 1)], &[(3, 1, 1), (4, 0, 1)], &[(1, -1, 1), (0, 2, 1)]],
        [&[(-2, 0, 2)], &[(3, 1, 2)], &[(-1, 1, 1), (2, 0, 1)]],
    ];

    fn build(parts: &Parts) -> KClass {
        let mut x = KClass::zero(2);
        for &(a, b, c) in parts[0] {
            x.add_term(Monomial::with_ratio(2, a, b, 0, 1), c);
        }
        for &(a, b, c) in parts[1] {
            x.add_term(Monomial::with_ratio(2, a, b, 1, 0), c);
        }
        for &(a, b, c) in parts[2] {
            x.add_term(Monomial::t(2, a, b), c);
        }
        x
    }

    #[test]
    fn five_printed_classes() {
        let mut expected: Vec<KClass> = PRINTED.iter().map(build).collect();
        let mut got: Vec<KClass> = enumerate_fixed_points(5, &[0, 3], &[-1, 4])
            .unwrap()
            .map(|md| {
                assert_eq!(list_01_pairs(&md).len(), 3);
                tangent_via_pairs(&md)
            })
            .collect();
        let key = |x: &KClass| x.to_string();
        expected.sort_by_key(key);
        got.sort_by_key(key);
        assert_eq!(got, expected);
        assert!(got.iter().all(|x| x.is_symplectic() && x.dimension() == 6));
    }

    #[test]
    fn vacuum_is_zero() {
        let vac = MayaDiagram::vacuum(3, 2);
        assert!(list_01_pairs(&vac).is_empty());
        assert!(tangent_via_pairs(&vac).is_zero());
        assert!(tangent_via_eyd(&vac).is_zero());
        let dims = cell_dims(&vac, GammaOrientation::Standard).unwrap();
        assert_eq!(dims, CellDims { minus: 0, plus: 0 });
    }

    #[test]
    fn pure_core_is_r_region() {
        // n = 2, m = 1 cores: only the R part survives
        for (e0, e1) in [(-2, 3), (3, -2), (1, 1), (0, 4), (-3, -1)] {
            let md = Core::new(2, 1, vec![e0, e1]).unwrap().to_maya();
            let mut expect = KClass::zero(2);
            for (alpha, beta) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let (ea, eb) = ([e0, e1][alpha], [e0, e1][beta]);
                for (s1, s2) in r_region(alpha, beta, ea, eb).points {
                    let mono = if alpha == beta {
                        Monomial::t(2, s1, s2)
                    } else {
                        Monomial::with_ratio(2, s1, s2, beta, alpha)
                    };
                    expect.add_term(mono, 1);
                }
            }
            assert_eq!(tangent_via_pairs(&md), expect, "core ({e0},{e1})");
        }
    }

    #[test]
    fn formulas_agree_on_small_varieties() {
        for (dmax, e, f) in [
            (4, vec![0, 0], vec![0]),
            (4, vec![0, 3], vec![3]),
            (4, vec![-1, 2, 0], vec![1]),
            (5, vec![0, 3], vec![-1, 4]),
            (4, vec![2, 3, 1], vec![2, 4]),
            (4, vec![1, -1], vec![2, 0, -2]),
        ] {
            for d in 0..=dmax {
                for md in enumerate_fixed_points(d, &e, &f).unwrap() {
                    assert_eq!(tangent_via_pairs(&md), tangent_via_eyd(&md), "{md:?}");
                }
            }
        }
    }

    #[test]
    fn d5_swap_with_equal_charges() {
        for md in enumerate_fixed_points(3, &[1, 1], &[2]).unwrap() {
            let (lhs, rhs) = d5_swap_delta(&md, 0).unwrap();
            assert!(rhs.is_zero());
            assert!(lhs.is_zero());
        }
    }

    #[test]
    fn d5_swap_relation() {
        let mut seen = None;
        for md in enumerate_fixed_points(5, &[0, 3], &[-1, 4]).unwrap() {
            let (lhs, rhs) = d5_swap_delta(&md, 0).unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(rhs.dimension(), -6);
            if let Some(prev) = &seen {
                assert_eq!(prev, &lhs);
            }
            seen = Some(lhs);
        }
    }

    #[test]
    fn zastava_closed_form() {
        for e in [vec![0, 3], vec![2, -1, 0], vec![-3, 2, -3, 4]] {
            let f = vec![e.iter().sum::<i64>()];
            let a: i64 = e.iter().map(|x| x * (x - 1) / 2).sum();
            for d in a..a + 4 {
                for md in enumerate_fixed_points(d, &e, &f).unwrap() {
                    let dims = cell_dims(&md, GammaOrientation::Standard).unwrap();
                    assert_eq!(zastava_dim_minus(&md).unwrap(), dims.minus);
                }
            }
        }
        assert!(zastava_dim_minus(&fixtures::first_2maya()).is_err());
    }

    #[test]
    fn printed_cell_dims() {
        let mut minus: Vec<i64> = PRINTED
            .iter()
            .map(|p| cell_dims_of(&build(p), GammaOrientation::Standard).unwrap().minus)
            .collect();
        minus.sort();
        assert_eq!(minus, vec![0, 1, 1, 2, 2]);
    }
}
