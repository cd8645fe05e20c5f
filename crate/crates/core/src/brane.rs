//! Standard-form brane triples `(d, e, f)`, Hanany–Witten moves, D5 swaps
//! and the quiver classification.
//!
//! The 5-branes of a standard diagram read `F_1 … F_m E_1 … E_n` along the
//! top arc. `e_i` is the jump of the D3 multiplicity across `E_i`, `f_j` the
//! drop across `F_j`, and `d` sits between `F_m` and `E_1`.

use serde::{Deserialize, Serialize};

use crate::error::{BowError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraneTriple {
    pub d: i64,
    pub e: Vec<i64>,
    pub f: Vec<i64>,
}

/// Result of [`BraneTriple::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleDiagnostics {
    pub sum_e: i64,
    pub sum_f: i64,
    pub margins_match: bool,
    /// Present only when the margins match.
    pub multiplicities: Option<Vec<i64>>,
    pub all_nonnegative: bool,
}

impl TripleDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.margins_match && self.all_nonnegative
    }
}

/// Framed cyclic quiver that is Hanany–Witten equivalent to a triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverData {
    /// Gauge node dimensions, in the order of the framing vector.
    pub node_dims: Vec<i64>,
    /// `(w_{m-1}, …, w_1, w_0)`.
    pub framing: Vec<i64>,
    /// The normalized representative the quiver was read from.
    pub normalized: BraneTriple,
}

impl BraneTriple {
    pub fn new(d: i64, e: Vec<i64>, f: Vec<i64>) -> Result<Self> {
        if e.is_empty() || f.is_empty() {
            return Err(BowError::EmptyDiagram {
                n: e.len(),
                m: f.len(),
            });
        }
        Ok(BraneTriple { d, e, f })
    }

    /// Number of D5 branes.
    pub fn n(&self) -> usize {
        self.e.len()
    }

    /// Number of NS5 branes.
    pub fn m(&self) -> usize {
        self.f.len()
    }

    pub fn check_margins(&self) -> Result<()> {
        check_margins(&self.e, &self.f)
    }

    pub fn validate(&self) -> TripleDiagnostics {
        let sum_e = self.e.iter().sum();
        let sum_f = self.f.iter().sum();
        let margins_match = sum_e == sum_f && !self.e.is_empty() && !self.f.is_empty();
        let multiplicities = margins_match.then(|| self.segments());
        let all_nonnegative = multiplicities
            .as_ref()
            .is_some_and(|ms| ms.iter().all(|&x| x >= 0));
        TripleDiagnostics {
            sum_e,
            sum_f,
            margins_match,
            multiplicities,
            all_nonnegative,
        }
    }

    /// D3 multiplicities in the order `[F_1F_2], …, [F_mE_1], [E_1E_2], …,
    /// [E_nF_1]`, i.e. the segment to the right of each 5-brane, wrap last.
    pub fn multiplicities(&self) -> Result<Vec<i64>> {
        self.check_margins()?;
        Ok(self.segments())
    }

    fn segments(&self) -> Vec<i64> {
        let m = self.m();
        // right of F_j, computed backwards from [F_m E_1] = d
        let mut right_of_f = vec![0; m];
        right_of_f[m - 1] = self.d;
        for j in (0..m - 1).rev() {
            right_of_f[j] = right_of_f[j + 1] + self.f[j + 1];
        }
        let mut out = right_of_f;
        let mut cur = self.d;
        for &ei in &self.e {
            cur += ei;
            out.push(cur);
        }
        out
    }

    /// Move `E_1` through all NS5 branes and around the circle.
    pub fn move1(&self) -> BraneTriple {
        let m = self.m() as i64;
        let mut e: Vec<i64> = self.e[1..].to_vec();
        e.push(self.e[0] + m);
        BraneTriple {
            d: self.d + self.e[0],
            e,
            f: self.f.iter().map(|x| x + 1).collect(),
        }
    }

    pub fn move1_inv(&self) -> BraneTriple {
        let m = self.m() as i64;
        let n = self.n();
        let e1 = self.e[n - 1] - m;
        let mut e = Vec::with_capacity(n);
        e.push(e1);
        e.extend_from_slice(&self.e[..n - 1]);
        BraneTriple {
            d: self.d - e1,
            e,
            f: self.f.iter().map(|x| x - 1).collect(),
        }
    }

    /// Move `F_m` through all D5 branes and around the circle.
    pub fn move2(&self) -> BraneTriple {
        let n = self.n() as i64;
        let m = self.m();
        let fm = self.f[m - 1];
        let mut f = Vec::with_capacity(m);
        f.push(fm + n);
        f.extend_from_slice(&self.f[..m - 1]);
        BraneTriple {
            d: self.d + fm,
            e: self.e.iter().map(|x| x + 1).collect(),
            f,
        }
    }

    pub fn move2_inv(&self) -> BraneTriple {
        let n = self.n() as i64;
        let fm = self.f[0] - n;
        let mut f: Vec<i64> = self.f[1..].to_vec();
        f.push(fm);
        BraneTriple {
            d: self.d - fm,
            e: self.e.iter().map(|x| x - 1).collect(),
            f,
        }
    }

    /// Swap `E_{row+1}` and `E_{row+2}` (0-based `row`): exchanges the two
    /// charges and keeps `d`, `f`.
    pub fn d5_swap(&self, row: usize) -> Result<BraneTriple> {
        if row + 1 >= self.n() {
            return Err(BowError::IndexOutOfRange {
                index: row,
                len: self.n(),
            });
        }
        let mut out = self.clone();
        out.e.swap(row, row + 1);
        Ok(out)
    }

    /// Bring a quiver-type triple to the representative with
    /// `-m < e_1 <= … <= e_n <= 0` by greedy [`move1`](Self::move1) /
    /// [`move1_inv`](Self::move1_inv), then read off the quiver.
    pub fn to_quiver(&self) -> Result<QuiverData> {
        let m = self.m() as i64;
        if !is_quiver(&self.e, self.m()) {
            return Err(BowError::NotQuiver);
        }
        let max_abs = self.e.iter().map(|x| x.abs()).max().unwrap_or(0);
        let budget = self.n() as i64 * (max_abs + m) + self.n() as i64;
        let mut t = self.clone();
        let mut steps = 0;
        while *t.e.last().unwrap() > 0 {
            t = t.move1_inv();
            steps += 1;
            assert!(steps <= budget, "normalization did not terminate");
        }
        while t.e[0] <= -m {
            t = t.move1();
            steps += 1;
            assert!(steps <= budget, "normalization did not terminate");
        }
        debug_assert!(-m < t.e[0] && *t.e.last().unwrap() <= 0);

        let mm = self.m();
        let tail_sum = |l: usize| -> i64 { t.f[l - 1..].iter().sum() };
        let mut node_dims: Vec<i64> = (2..=mm).map(|l| t.d + tail_sum(l)).collect();
        node_dims.push(t.d + tail_sum(1));
        let framing = (0..mm)
            .rev()
            .map(|l| t.e.iter().filter(|&&x| x == -(l as i64)).count() as i64)
            .collect();
        Ok(QuiverData {
            node_dims,
            framing,
            normalized: t,
        })
    }
}

pub fn check_margins(e: &[i64], f: &[i64]) -> Result<()> {
    let sum_e: i64 = e.iter().sum();
    let sum_f: i64 = f.iter().sum();
    if e.is_empty() || f.is_empty() {
        return Err(BowError::EmptyDiagram {
            n: e.len(),
            m: f.len(),
        });
    }
    if sum_e != sum_f {
        return Err(BowError::MarginMismatch { sum_e, sum_f });
    }
    Ok(())
}

/// `e_1 <= e_2 <= … <= e_n <= e_1 + m`.
pub fn is_quiver(e: &[i64], m: usize) -> bool {
    is_bounded_nondecreasing(e, m as i64)
}

/// `e_1 <= … <= e_n <= e_1 + bound`.
pub fn is_bounded_nondecreasing(e: &[i64], bound: i64) -> bool {
    match (e.first(), e.last()) {
        (Some(&first), Some(&last)) => e.windows(2).all(|w| w[0] <= w[1]) && last <= first + bound,
        _ => true,
    }
}

/// Cyclic gaps `δ_i = e_{i+1} - e_i`, `δ_n = e_1 + m - e_n`.
pub fn cyclic_gaps(e: &[i64], m: usize) -> Vec<i64> {
    let n = e.len();
    (0..n)
        .map(|i| {
            if i + 1 < n {
                e[i + 1] - e[i]
            } else {
                e[0] + m as i64 - e[n - 1]
            }
        })
        .collect()
}

/// Whether `e` is [move-1]-equivalent to an `(m+1)`-bounded non-decreasing
/// sequence: at most one gap equals `-1` and all others are `>= 0`.
pub fn is_quiver_like(e: &[i64], m: usize) -> bool {
    let gaps = cyclic_gaps(e, m);
    (0..gaps.len()).any(|j| {
        gaps[j] >= -1
            && gaps
                .iter()
                .enumerate()
                .all(|(i, &g)| i == j || g >= 0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(d: i64, e: &[i64], f: &[i64]) -> BraneTriple {
        BraneTriple::new(d, e.to_vec(), f.to_vec()).unwrap()
    }

    #[test]
    fn validate_examples() {
        let diag = t(6, &[2, 3, 1], &[2, 4]).validate();
        assert!(diag.is_valid());
        assert_eq!((diag.sum_e, diag.sum_f), (6, 6));
        assert!(t(0, &[0], &[0]).validate().is_valid());
        let bad = t(1, &[1], &[0]).validate();
        assert!(!bad.margins_match);
        assert!(bad.multiplicities.is_none());
    }

    #[test]
    fn multiplicities_examples() {
        assert_eq!(
            t(6, &[2, 3, 1], &[2, 4]).multiplicities().unwrap(),
            vec![10, 6, 8, 11, 12]
        );
        assert_eq!(
            t(2, &[0, 0, -1], &[-1, 0, 0]).multiplicities().unwrap(),
            vec![2, 2, 2, 2, 2, 1]
        );
        assert_eq!(t(4, &[0, 0], &[0, 0, 0]).multiplicities().unwrap(), vec![4; 5]);
        assert!(matches!(
            t(1, &[1], &[0]).multiplicities(),
            Err(BowError::MarginMismatch { .. })
        ));
    }

    #[test]
    fn inverse_move1_example() {
        let mut x = t(8, &[-1, -1, 0, 0, 1, 1, 2], &[-4, 4, 2]);
        for _ in 0..3 {
            x = x.move1_inv();
        }
        assert_eq!(x, t(13, &[-2, -2, -1, -1, -1, 0, 0], &[-7, 1, -1]));
    }

    #[test]
    fn hilbert_scheme_normal_form() {
        for k in 0..6i64 {
            let mut x = t(20, &[k], &[k]);
            for _ in 0..k {
                x = x.move1_inv();
            }
            assert_eq!(x, t(20 - k * (k - 1) / 2, &[0], &[0]));
        }
    }

    #[test]
    fn quiver_example() {
        let q = t(8, &[-1, -1, 0, 0, 1, 1, 2], &[-4, 4, 2]).to_quiver().unwrap();
        assert_eq!(q.node_dims, vec![13, 12, 6]);
        assert_eq!(q.framing, vec![2, 3, 2]);
        assert_eq!(q.normalized.d, 13);

        let q = t(3, &[0, 0, 0], &[1, -2, 1]).to_quiver().unwrap();
        assert_eq!(q.framing, vec![0, 0, 3]);
        assert_eq!(q.normalized, t(3, &[0, 0, 0], &[1, -2, 1]));

        assert_eq!(
            t(0, &[3, 2, 1], &[3, 3]).to_quiver(),
            Err(BowError::NotQuiver)
        );
    }

    #[test]
    fn classification_examples() {
        assert!(is_quiver(&[0, 0, 0, 0], 1));
        assert!(is_quiver(&[-2, -2, -1, -1, -1, 0, 0], 3));
        assert!(!is_quiver(&[3, 2, 1], 3));
        assert_eq!(cyclic_gaps(&[0, 3], 1), vec![3, -2]);
        assert!(!is_quiver_like(&[0, 3], 1));
        assert_eq!(cyclic_gaps(&[0, 1, 2], 1), vec![1, 1, -1]);
        assert!(is_quiver_like(&[0, 1, 2], 1));
    }

    #[test]
    fn d5_swap_charges() {
        let x = t(5, &[0, 3], &[-1, 4]);
        assert_eq!(x.d5_swap(0).unwrap(), t(5, &[3, 0], &[-1, 4]));
        assert_eq!(x.d5_swap(0).unwrap().d5_swap(0).unwrap(), x);
        assert!(matches!(
            x.d5_swap(1),
            Err(BowError::IndexOutOfRange { index: 1, len: 2 })
        ));
    }

    fn triple_strategy() -> impl Strategy<Value = BraneTriple> {
        (1usize..5, 1usize..5, -10i64..10)
            .prop_flat_map(|(n, m, d)| {
                (
                    Just(d),
                    prop::collection::vec(-4i64..5, n),
                    prop::collection::vec(-4i64..5, m - 1),
                )
            })
            .prop_map(|(d, e, mut f)| {
                let s: i64 = e.iter().sum::<i64>() - f.iter().sum::<i64>();
                f.push(s);
                BraneTriple { d, e, f }
            })
    }

    proptest! {
        #[test]
        fn moves_are_invertible(x in triple_strategy()) {
            prop_assert_eq!(x.move1().move1_inv(), x.clone());
            prop_assert_eq!(x.move1_inv().move1(), x.clone());
            prop_assert_eq!(x.move2().move2_inv(), x.clone());
            prop_assert_eq!(x.move2_inv().move2(), x.clone());
        }

        #[test]
        fn moves_preserve_margins_and_quiverness(x in triple_strategy()) {
            let m = x.m();
            for y in [x.move1(), x.move1_inv(), x.move2(), x.move2_inv()] {
                prop_assert!(y.check_margins().is_ok());
                prop_assert_eq!(is_quiver(&y.e, m), is_quiver(&x.e, m));
            }
        }

        #[test]
        fn multiplicities_recover_charges(x in triple_strategy()) {
            // segment to the right of each brane; the one to its left is the
            // previous entry cyclically
            for y in [x.clone(), x.move1(), x.move2()] {
                let seg = y.multiplicities().unwrap();
                let (n, m) = (y.n(), y.m());
                let left = |k: usize| seg[(k + n + m - 1) % (n + m)];
                for j in 0..m {
                    prop_assert_eq!(left(j) - seg[j], y.f[j]);
                }
                for i in 0..n {
                    prop_assert_eq!(seg[m + i] - left(m + i), y.e[i]);
                }
                prop_assert_eq!(seg[m - 1], y.d);
            }
        }

        #[test]
        fn normalized_quiver_is_in_window(
            (e, m) in (1usize..6, 1usize..4).prop_flat_map(|(n, m)| {
                (prop::collection::vec(0i64..=(m as i64), n), Just(m))
            }),
            base in -6i64..6,
            d in 0i64..20,
        ) {
            // sorted offsets in [0, m] give an m-bounded non-decreasing e
            let mut e: Vec<i64> = e.iter().map(|x| x + base).collect();
            e.sort();
            if e.last().unwrap() - e[0] > m as i64 {
                return Ok(());
            }
            let s: i64 = e.iter().sum();
            let mut f = vec![0; m];
            f[0] = s;
            let q = BraneTriple::new(d, e, f).unwrap().to_quiver().unwrap();
            let ne = &q.normalized.e;
            prop_assert!(-(m as i64) < ne[0]);
            prop_assert!(*ne.last().unwrap() <= 0);
            prop_assert_eq!(q.framing.iter().sum::<i64>(), ne.len() as i64);
        }
    }
}
