//! Integer partitions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{BowError, Result};

/// A partition stored as its weakly decreasing list of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Trailing zero parts are dropped; any other violation of weak
    /// monotonicity is an error.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(BowError::precondition(format!(
                "weakly decreasing parts, got {parts:?}"
            )));
        }
        Ok(Partition(parts))
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.last() != Some(&0));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` counted from 1, zero past the end.
    pub fn row(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        let cols = (1..=width)
            .map(|j| self.0.iter().take_while(|&&p| p >= j).count())
            .collect();
        Partition(cols)
    }

    /// Boxes `(row, column)`, both counted from 1, in row-major order.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| (i + 1, j)))
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = BowError;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n`, in decreasing lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n, n, &mut current, &mut out);
    out
}

fn fill(rest: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    for p in (1..=rest.min(max_part)).rev() {
        current.push(p);
        fill(rest - p, p, current, out);
        current.pop();
    }
}

/// Memoized tables of `partitions_of(k)` for `k <= max`.
#[derive(Clone, Debug)]
pub(crate) struct PartitionTable {
    by_size: Vec<Vec<Partition>>,
}

impl PartitionTable {
    pub(crate) fn new(max: usize) -> Self {
        PartitionTable {
            by_size: (0..=max).map(partitions_of).collect(),
        }
    }

    pub(crate) fn of(&self, k: usize) -> &[Partition] {
        &self.by_size[k]
    }
}
