//! Extended Young diagrams: one charge and one partition per D5 brane,
//! read off from a Maya diagram after flattening its columns into a single
//! column.

use serde::{Deserialize, Serialize};

use crate::error::{BowError, Result};
use crate::maya::{Core, MayaDiagram, QuotientTuple};
use crate::partition::Partition;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtendedYoungDiagram {
    pub charge: i64,
    pub y: Partition,
}

/// Finite multiset of exponent pairs `(s1, s2)` of `t1^s1 t2^s2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeRegion {
    pub points: Vec<(i64, i64)>,
}

impl LatticeRegion {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn shifted(mut self, ds1: i64, ds2: i64) -> Self {
        for p in &mut self.points {
            p.0 += ds1;
            p.1 += ds2;
        }
        self
    }

    pub fn sorted(mut self) -> Self {
        self.points.sort();
        self
    }
}

/// `l_Y(s) = Y_i - j` for `s = (i, j)`, 1-based. May be negative.
pub fn leg(y: &Partition, s: (usize, usize)) -> i64 {
    y.row(s.0) as i64 - s.1 as i64
}

/// `a_Y(s) = Y'_j - i` for `s = (i, j)`, 1-based. May be negative.
pub fn arm(y: &Partition, s: (usize, usize)) -> i64 {
    let col = (0..y.len()).take_while(|&r| y.parts()[r] >= s.1).count();
    col as i64 - s.0 as i64
}

/// `l_{Yβ}(s) + a_{Yα}(s) + 1`.
pub fn relative_hook(y_alpha: &Partition, y_beta: &Partition, s: (usize, usize)) -> i64 {
    leg(y_beta, s) + arm(y_alpha, s) + 1
}

/// Exponents of the triangle `T_l`.
///
/// `T_l` for `l < 0` is `{(x, y) : l < x <= y <= 0}`, for `l > 0` it is
/// `{(x, y) : 1 <= y <= x <= l}`, and `T_0` is empty. `|T_l| = |l|(|l|+1)/2`.
pub fn triangle_points(l: i64) -> LatticeRegion {
    let mut points = Vec::new();
    if l < 0 {
        for x in l + 1..=0 {
            for y in x..=0 {
                points.push((x, y));
            }
        }
    } else {
        for x in 1..=l {
            for y in 1..=x {
                points.push((x, y));
            }
        }
    }
    LatticeRegion { points }
}

/// The region `R^{eα, eβ}_{α, β}` of monomials that survive when both
/// Young diagram parts are empty. Indices may be 0- or 1-based; only their
/// order matters.
pub fn r_region(alpha: usize, beta: usize, e_alpha: i64, e_beta: i64) -> LatticeRegion {
    let l = e_beta - e_alpha;
    if alpha <= beta {
        if e_alpha >= e_beta {
            triangle_points(l)
        } else {
            triangle_points(l - 1).shifted(1, 0)
        }
    } else if e_alpha <= e_beta {
        triangle_points(l)
    } else {
        triangle_points(l + 1).shifted(-1, 0)
    }
}

/// Position `2k'` in the flattened single-column row of column `j`
/// (0-based) of block `two_k`.
pub fn flat_position(m: usize, two_k: i64, j: usize) -> i64 {
    m as i64 * (two_k - 1) + 2 * j as i64 + 1
}

/// Inverse of [`flat_position`]: `(two_k, j)`.
pub fn unflat_position(m: usize, two_k_flat: i64) -> (i64, usize) {
    let p = (two_k_flat - 1) / 2;
    let (kk, j) = (p.div_euclid(m as i64), p.rem_euclid(m as i64));
    (2 * kk + 1, j as usize)
}

/// Row `i` of `md` as a `1 × 1` Maya diagram, columns laid out left to right
/// inside each block.
pub fn flatten_row(md: &MayaDiagram, i: usize) -> MayaDiagram {
    let m = md.m();
    let lo = flat_position(m, md.two_k_lo(), 0);
    let hi = flat_position(m, md.two_k_hi(), 0);
    let bits = (lo..hi)
        .step_by(2)
        .map(|p| {
            let (tk, j) = unflat_position(m, p);
            md.entry(tk, i, j)
        })
        .collect();
    MayaDiagram::canonicalize(1, 1, lo, bits)
}

pub fn row_to_eyd(md: &MayaDiagram, i: usize) -> Result<ExtendedYoungDiagram> {
    if i >= md.n() {
        return Err(BowError::IndexOutOfRange { index: i, len: md.n() });
    }
    let (core, q) = flatten_row(md, i).core_decompose();
    Ok(ExtendedYoungDiagram {
        charge: core.c[0],
        y: q.parts[0].clone(),
    })
}

pub fn maya_to_eyds(md: &MayaDiagram) -> Vec<ExtendedYoungDiagram> {
    (0..md.n()).map(|i| row_to_eyd(md, i).expect("row in range")).collect()
}

/// Rebuilds the Maya diagram with `m` columns from one extended Young
/// diagram per row.
pub fn eyds_to_maya(m: usize, eyds: &[ExtendedYoungDiagram]) -> Result<MayaDiagram> {
    let n = eyds.len();
    if n == 0 || m == 0 {
        return Err(BowError::EmptyDiagram { n, m });
    }
    let rows: Vec<MayaDiagram> = eyds
        .iter()
        .map(|b| {
            let core = Core::new(1, 1, vec![b.charge]).expect("1x1 core");
            let q = QuotientTuple::new(1, 1, vec![b.y.clone()]).expect("1x1 tuple");
            MayaDiagram::compose(&core, &q).expect("shapes agree")
        })
        .collect();
    // block range covering every flattened row
    let lo = rows.iter().map(|r| unflat_position(m, r.two_k_lo()).0).min().unwrap();
    let hi = rows
        .iter()
        .map(|r| unflat_position(m, r.two_k_hi() - 2).0 + 2)
        .max()
        .unwrap()
        .max(lo);
    let mut bits = Vec::with_capacity(((hi - lo) / 2) as usize * n * m);
    for tk in (lo..hi).step_by(2) {
        for row in &rows {
            for j in 0..m {
                bits.push(row.entry(flat_position(m, tk, j), 0, 0));
            }
        }
    }
    Ok(MayaDiagram::canonicalize(n, m, lo, bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maya::{enumerate_fixed_points, fixtures};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn arm_leg_hook() {
        assert_eq!((arm(&p(&[1]), (1, 1)), leg(&p(&[1]), (1, 1))), (0, 0));
        let y = p(&[3, 1]);
        assert_eq!(leg(&y, (1, 1)), 2);
        assert_eq!(arm(&y, (1, 1)), 1);
        assert_eq!(relative_hook(&y, &y, (1, 1)), 4);
        assert_eq!(relative_hook(&p(&[1]), &Partition::empty(), (1, 1)), 0);
        // classical hook lengths of (3,1): 4 2 1 / 1
        let hooks: Vec<i64> = y.boxes().map(|s| relative_hook(&y, &y, s)).collect();
        assert_eq!(hooks, vec![4, 2, 1, 1]);
    }

    #[test]
    fn triangles() {
        assert!(triangle_points(0).is_empty());
        assert_eq!(triangle_points(1).points, vec![(1, 1)]);
        assert_eq!(triangle_points(-1).points, vec![(0, 0)]);
        assert_eq!(
            triangle_points(-2).sorted().points,
            vec![(-1, -1), (-1, 0), (0, 0)]
        );
        assert_eq!(
            triangle_points(3).sorted().points,
            vec![(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]
        );
        for l in -6i64..=6 {
            assert_eq!(triangle_points(l).len() as i64, l.abs() * (l.abs() + 1) / 2);
        }
    }

    #[test]
    fn r_region_cases() {
        assert_eq!(r_region(1, 2, 3, 1), triangle_points(-2));
        assert_eq!(r_region(1, 2, 0, 2), triangle_points(1).shifted(1, 0));
        assert_eq!(r_region(2, 1, 0, 2), triangle_points(2));
        assert_eq!(r_region(2, 1, 2, 0), triangle_points(-1).shifted(-1, 0));
        assert!(r_region(1, 1, 4, 4).is_empty());
    }

    #[test]
    fn flat_positions_preserve_order() {
        for m in 1..4 {
            let mut prev = i64::MIN;
            for tk in (-7..7).step_by(2) {
                for j in 0..m {
                    let p = flat_position(m, tk, j);
                    assert!(p > prev);
                    assert_eq!(p.signum(), tk.signum());
                    assert_eq!(unflat_position(m, p), (tk, j));
                    prev = p;
                }
            }
        }
    }

    #[test]
    fn vacuum_and_cores() {
        let vac = MayaDiagram::vacuum(2, 3);
        for b in maya_to_eyds(&vac) {
            assert_eq!(b, ExtendedYoungDiagram { charge: 0, y: Partition::empty() });
        }
        let core = Core::new(3, 1, vec![-2, 0, 3]).unwrap().to_maya();
        let eyds = maya_to_eyds(&core);
        assert_eq!(eyds.iter().map(|b| b.charge).collect::<Vec<_>>(), vec![-2, 0, 3]);
        assert!(eyds.iter().all(|b| b.y.is_empty()));
    }

    #[test]
    fn charges_match_and_round_trip() {
        let md = fixtures::first_2maya();
        let eyds = maya_to_eyds(&md);
        assert_eq!(eyds.iter().map(|b| b.charge).collect::<Vec<_>>(), vec![2, 3, 1]);
        assert_eq!(eyds_to_maya(2, &eyds).unwrap(), md);
        for md in enumerate_fixed_points(5, &[-1, -2, 2], &[-1, 0]).unwrap() {
            let eyds = maya_to_eyds(&md);
            assert_eq!(eyds_to_maya(2, &eyds).unwrap(), md);
            let (_, e, _) = md.charges();
            assert_eq!(eyds.iter().map(|b| b.charge).collect::<Vec<_>>(), e);
        }
    }
}
