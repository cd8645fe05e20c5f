//! Maya diagrams, their core–quotient decomposition, and enumeration of
//! the torus fixed points `M(d, e, f)`.
//!
//! Blocks are indexed by half-integers `k`; we store `two_k = 2k`, which is
//! always odd. Entry `(i, j)` of all blocks read left to right is a 01
//! sequence that starts with 0s and ends with 1s.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brane::check_margins;
use crate::error::{BowError, Result};
use crate::partition::{Partition, PartitionTable};

/// `c (c - 1) / 2`, the energy of a single core entry.
pub fn core_energy(c: i64) -> i64 {
    c * (c - 1) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MayaJson", into = "MayaJson")]
pub struct MayaDiagram {
    n: usize,
    m: usize,
    two_k_lo: i64,
    /// Block-major, then row, then column.
    bits: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct MayaJson {
    n: usize,
    m: usize,
    two_k_lo: i64,
    blocks: Vec<Vec<Vec<u8>>>,
}

impl TryFrom<MayaJson> for MayaDiagram {
    type Error = BowError;

    fn try_from(j: MayaJson) -> Result<Self> {
        MayaDiagram::from_blocks(j.n, j.m, j.two_k_lo, &j.blocks)
    }
}

impl From<MayaDiagram> for MayaJson {
    fn from(md: MayaDiagram) -> Self {
        MayaJson {
            n: md.n,
            m: md.m,
            two_k_lo: md.two_k_lo,
            blocks: md.blocks(),
        }
    }
}

impl MayaDiagram {
    /// The diagram with 0s at negative blocks and 1s at positive blocks.
    pub fn vacuum(n: usize, m: usize) -> Self {
        MayaDiagram {
            n,
            m,
            two_k_lo: 1,
            bits: Vec::new(),
        }
    }

    /// Builds and canonicalizes a diagram from explicit `n × m` blocks, the
    /// first of which sits at `two_k_lo`.
    pub fn from_blocks(n: usize, m: usize, two_k_lo: i64, blocks: &[Vec<Vec<u8>>]) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(BowError::EmptyDiagram { n, m });
        }
        if two_k_lo.rem_euclid(2) != 1 {
            return Err(BowError::InvalidMaya(format!(
                "block index 2k = {two_k_lo} is not odd"
            )));
        }
        let mut bits = Vec::with_capacity(blocks.len() * n * m);
        for (b, block) in blocks.iter().enumerate() {
            if block.len() != n || block.iter().any(|r| r.len() != m) {
                return Err(BowError::InvalidMaya(format!("block {b} is not {n}x{m}")));
            }
            for row in block {
                for &x in row {
                    if x > 1 {
                        return Err(BowError::InvalidMaya(format!("entry {x} in block {b}")));
                    }
                    bits.push(x);
                }
            }
        }
        Ok(MayaDiagram::canonicalize(n, m, two_k_lo, bits))
    }

    /// Trims leading all-0 and trailing all-1 blocks.
    pub fn canonicalize(n: usize, m: usize, mut two_k_lo: i64, mut bits: Vec<u8>) -> Self {
        let bs = n * m;
        assert_eq!(bits.len() % bs, 0, "bit vector is not a whole number of blocks");
        let nblocks = bits.len() / bs;
        let lead = (0..nblocks)
            .take_while(|&b| bits[b * bs..(b + 1) * bs].iter().all(|&x| x == 0))
            .count();
        let trail = (lead..nblocks)
            .rev()
            .take_while(|&b| bits[b * bs..(b + 1) * bs].iter().all(|&x| x == 1))
            .count();
        bits.truncate((nblocks - trail) * bs);
        bits.drain(..lead * bs);
        two_k_lo += 2 * lead as i64;
        MayaDiagram { n, m, two_k_lo, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `2k` of the first stored block.
    pub fn two_k_lo(&self) -> i64 {
        self.two_k_lo
    }

    pub fn num_blocks(&self) -> usize {
        self.bits.len() / (self.n * self.m)
    }

    /// One past the `2k` of the last stored block; every block from here on
    /// is all 1s.
    pub fn two_k_hi(&self) -> i64 {
        self.two_k_lo + 2 * self.num_blocks() as i64
    }

    /// Stored blocks as nested `[block][row][col]` vectors.
    pub fn blocks(&self) -> Vec<Vec<Vec<u8>>> {
        self.bits
            .chunks(self.n * self.m)
            .map(|blk| blk.chunks(self.m).map(|r| r.to_vec()).collect())
            .collect()
    }

    /// Entry at block `two_k / 2`, row `i`, column `j` (0-based), with the
    /// implicit tails.
    pub fn entry(&self, two_k: i64, i: usize, j: usize) -> u8 {
        if two_k < self.two_k_lo {
            0
        } else if two_k >= self.two_k_hi() {
            1
        } else {
            let b = ((two_k - self.two_k_lo) / 2) as usize;
            self.bits[(b * self.n + i) * self.m + j]
        }
    }

    /// Positions `2k` of all 1s of entry `(i, j)` that lie below
    /// `max(two_k_hi, bound)`.
    fn ones_below(&self, i: usize, j: usize, bound: i64) -> impl Iterator<Item = i64> + '_ {
        let hi = self.two_k_hi().max(bound);
        (self.two_k_lo..hi)
            .step_by(2)
            .filter(move |&tk| self.entry(tk, i, j) == 1)
    }

    /// Charge of a single entry: 0s at positive blocks minus 1s at negative
    /// blocks.
    pub fn entry_charge(&self, i: usize, j: usize) -> i64 {
        let (lo, hi) = (self.two_k_lo.min(1), self.two_k_hi().max(1));
        (lo..hi)
            .step_by(2)
            .map(|tk| match (tk > 0, self.entry(tk, i, j)) {
                (true, 0) => 1,
                (false, 1) => -1,
                _ => 0,
            })
            .sum()
    }

    fn entry_energy(&self, i: usize, j: usize) -> i64 {
        let (lo, hi) = (self.two_k_lo.min(1), self.two_k_hi().max(1));
        (lo..hi)
            .step_by(2)
            .map(|tk| match (tk > 0, self.entry(tk, i, j)) {
                (true, 0) => (tk - 1) / 2,
                (false, 1) => (1 - tk) / 2,
                _ => 0,
            })
            .sum()
    }

    /// The triple `(d, e, f)` of the bow variety this diagram is a fixed
    /// point of.
    pub fn charges(&self) -> (i64, Vec<i64>, Vec<i64>) {
        let mut e = vec![0; self.n];
        let mut f = vec![0; self.m];
        let mut d = 0;
        for i in 0..self.n {
            for j in 0..self.m {
                let c = self.entry_charge(i, j);
                e[i] += c;
                f[j] += c;
                d += self.entry_energy(i, j);
            }
        }
        (d, e, f)
    }

    /// Pushes all 1s to the right. Returns the core and the partitions that
    /// record the shifts.
    pub fn core_decompose(&self) -> (Core, QuotientTuple) {
        let mut c = Vec::with_capacity(self.n * self.m);
        let mut parts = Vec::with_capacity(self.n * self.m);
        for i in 0..self.n {
            for j in 0..self.m {
                let cij = self.entry_charge(i, j);
                let start = 2 * cij + 1;
                let lambda: Vec<usize> = self
                    .ones_below(i, j, start)
                    .enumerate()
                    .map(|(t, p)| ((start + 2 * t as i64 - p) / 2) as usize)
                    .take_while(|&x| x > 0)
                    .collect();
                c.push(cij);
                parts.push(Partition::from_parts_unchecked(lambda));
            }
        }
        (
            Core {
                n: self.n,
                m: self.m,
                c,
            },
            QuotientTuple {
                n: self.n,
                m: self.m,
                parts,
            },
        )
    }

    /// Inverse of [`core_decompose`](Self::core_decompose).
    pub fn compose(core: &Core, quotient: &QuotientTuple) -> Result<Self> {
        let (n, m) = (core.n, core.m);
        if quotient.n != n || quotient.m != m {
            return Err(BowError::precondition(format!(
                "quotient of shape {}x{} for a {n}x{m} core",
                quotient.n, quotient.m
            )));
        }
        // 1s of entry (i,j): 2c+1+2(t-1)-2λ_t for t <= len, then everything
        // from 2c+1+2len on
        let first_one = |k: usize| 2 * core.c[k] + 1 - 2 * quotient.parts[k].row(1) as i64;
        let tail_start = |k: usize| 2 * core.c[k] + 1 + 2 * quotient.parts[k].len() as i64;
        let lo = (0..n * m).map(first_one).min().unwrap();
        let hi = (0..n * m).map(tail_start).max().unwrap();
        let nblocks = ((hi - lo) / 2) as usize;
        let mut bits = vec![0u8; nblocks * n * m];
        for k in 0..n * m {
            let (i, j) = (k / m, k % m);
            let start = 2 * core.c[k] + 1;
            let ones = quotient.parts[k]
                .parts()
                .iter()
                .enumerate()
                .map(|(t, &l)| start + 2 * t as i64 - 2 * l as i64)
                .chain((tail_start(k)..hi).step_by(2));
            for p in ones {
                let b = ((p - lo) / 2) as usize;
                bits[(b * n + i) * m + j] = 1;
            }
        }
        Ok(MayaDiagram::canonicalize(n, m, lo, bits))
    }

    /// Exchanges rows `j` and `j + 1` (0-based) in every block.
    pub fn swap_rows(&self, j: usize) -> Result<Self> {
        if j + 1 >= self.n {
            return Err(BowError::IndexOutOfRange {
                index: j,
                len: self.n,
            });
        }
        let mut out = self.clone();
        let m = self.m;
        for blk in out.bits.chunks_mut(self.n * m) {
            let (a, b) = blk.split_at_mut((j + 1) * m);
            a[j * m..].swap_with_slice(&mut b[..m]);
        }
        Ok(out)
    }
}

/// Contingency table `c` (row-major, `n × m`) labelling a core diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Core {
    pub n: usize,
    pub m: usize,
    pub c: Vec<i64>,
}

impl Core {
    pub fn new(n: usize, m: usize, c: Vec<i64>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(BowError::EmptyDiagram { n, m });
        }
        if c.len() != n * m {
            return Err(BowError::precondition(format!("{} entries for a {n}x{m} core", c.len())));
        }
        Ok(Core { n, m, c })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(BowError::precondition("rows of equal length"));
        }
        Core::new(n, m, rows.concat())
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.c[i * self.m + j]
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.c.chunks(self.m).map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<i64> {
        (0..self.m)
            .map(|j| (0..self.n).map(|i| self.get(i, j)).sum())
            .collect()
    }

    /// `Σ c(c-1)/2`, the `d` of the core diagram.
    pub fn energy(&self) -> i64 {
        self.c.iter().map(|&x| core_energy(x)).sum()
    }

    pub fn to_maya(&self) -> MayaDiagram {
        MayaDiagram::compose(self, &QuotientTuple::empty(self.n, self.m))
            .expect("shapes agree by construction")
    }
}

/// `n·m` partitions, indexed like the core.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotientTuple {
    pub n: usize,
    pub m: usize,
    pub parts: Vec<Partition>,
}

impl QuotientTuple {
    pub fn empty(n: usize, m: usize) -> Self {
        QuotientTuple {
            n,
            m,
            parts: vec![Partition::empty(); n * m],
        }
    }

    pub fn new(n: usize, m: usize, parts: Vec<Partition>) -> Result<Self> {
        if parts.len() != n * m {
            return Err(BowError::precondition(format!(
                "{} partitions for a {n}x{m} tuple",
                parts.len()
            )));
        }
        Ok(QuotientTuple { n, m, parts })
    }

    pub fn get(&self, i: usize, j: usize) -> &Partition {
        &self.parts[i * self.m + j]
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(|p| p.size()).sum()
    }
}

fn min_spread_cost(total: i64, cells: usize) -> i64 {
    if cells == 0 {
        return if total == 0 { 0 } else { i64::MAX / 4 };
    }
    let k = cells as i64;
    let q = total.div_euclid(k);
    let r = total.rem_euclid(k);
    (k - r) * core_energy(q) + r * core_energy(q + 1)
}

/// Largest `|c|`-type bound: all `c` with `c(c-1)/2 <= budget`.
fn entry_range(budget: i64) -> (i64, i64) {
    let mut hi = 1;
    while core_energy(hi + 1) <= budget {
        hi += 1;
    }
    (1 - hi, hi)
}

struct CoreSearch<'a, F: FnMut(&Core)> {
    n: usize,
    m: usize,
    e: &'a [i64],
    f: &'a [i64],
    d_max: i64,
    c: Vec<i64>,
    col_used: Vec<i64>,
    visit: F,
}

impl<F: FnMut(&Core)> CoreSearch<'_, F> {
    /// Lower bound on the energy of cells `(i, j..)` onwards, given the
    /// partial row sum `row_used` of row `i`.
    fn lower_bound(&self, i: usize, j: usize, row_used: i64) -> i64 {
        let rows: i64 = min_spread_cost(self.e[i] - row_used, self.m - j)
            + (i + 1..self.n)
                .map(|r| min_spread_cost(self.e[r], self.m))
                .sum::<i64>();
        let cols: i64 = (0..self.m)
            .map(|col| {
                let filled = if col < j { i + 1 } else { i };
                min_spread_cost(self.f[col] - self.col_used[col], self.n - filled)
            })
            .sum();
        rows.max(cols)
    }

    fn place(&mut self, i: usize, j: usize, row_used: i64, cost: i64) {
        if i == self.n {
            let core = Core {
                n: self.n,
                m: self.m,
                c: self.c.clone(),
            };
            (self.visit)(&core);
            return;
        }
        if cost + self.lower_bound(i, j, row_used) > self.d_max {
            return;
        }
        let forced = if i + 1 == self.n {
            Some(self.f[j] - self.col_used[j])
        } else if j + 1 == self.m {
            Some(self.e[i] - row_used)
        } else {
            None
        };
        let (lo, hi) = match forced {
            Some(v) => (v, v),
            None => entry_range(self.d_max - cost),
        };
        for v in lo..=hi {
            let nc = cost + core_energy(v);
            if nc > self.d_max {
                continue;
            }
            if i + 1 == self.n && j + 1 == self.m && row_used + v != self.e[i] {
                continue;
            }
            self.c[i * self.m + j] = v;
            self.col_used[j] += v;
            if j + 1 == self.m {
                self.place(i + 1, 0, 0, nc);
            } else {
                self.place(i, j + 1, row_used + v, nc);
            }
            self.col_used[j] -= v;
        }
    }
}

/// Calls `visit` on every contingency table with row sums `e`, column sums
/// `f` and energy at most `d_max`, in row-major lexicographic order.
pub fn for_each_core(e: &[i64], f: &[i64], d_max: i64, visit: impl FnMut(&Core)) -> Result<()> {
    check_margins(e, f)?;
    if d_max < 0 {
        return Ok(());
    }
    let mut search = CoreSearch {
        n: e.len(),
        m: f.len(),
        e,
        f,
        d_max,
        c: vec![0; e.len() * f.len()],
        col_used: vec![0; f.len()],
        visit,
    };
    search.place(0, 0, 0, 0);
    Ok(())
}

pub fn enumerate_cores(e: &[i64], f: &[i64], d_max: i64) -> Result<Vec<Core>> {
    let mut out = Vec::new();
    for_each_core(e, f, d_max, |c| out.push(c.clone()))?;
    Ok(out)
}

/// All `k`-tuples of partitions of total size `total`: weak compositions in
/// decreasing lexicographic order, each expanded as an odometer over the
/// partitions of its parts.
pub struct QuotientTuples {
    table: Arc<PartitionTable>,
    comp: Vec<usize>,
    idx: Vec<usize>,
    done: bool,
}

impl QuotientTuples {
    pub fn new(k: usize, total: usize) -> Self {
        QuotientTuples::with_table(Arc::new(PartitionTable::new(total)), k, total)
    }

    fn with_table(table: Arc<PartitionTable>, k: usize, total: usize) -> Self {
        let mut comp = vec![0; k];
        let done = if k == 0 {
            total != 0
        } else {
            comp[0] = total;
            false
        };
        QuotientTuples {
            table,
            comp,
            idx: vec![0; k],
            done,
        }
    }

    fn next_composition(&mut self) -> bool {
        let k = self.comp.len();
        if k < 2 {
            return false;
        }
        let Some(i) = (0..k - 1).rev().find(|&i| self.comp[i] > 0) else {
            return false;
        };
        let rest: usize = self.comp[i + 1..].iter().sum();
        self.comp[i] -= 1;
        for x in &mut self.comp[i + 1..] {
            *x = 0;
        }
        self.comp[i + 1] = rest + 1;
        true
    }
}

impl Iterator for QuotientTuples {
    type Item = Vec<Partition>;

    fn next(&mut self) -> Option<Vec<Partition>> {
        if self.done {
            return None;
        }
        let item = self
            .comp
            .iter()
            .zip(&self.idx)
            .map(|(&s, &ix)| self.table.of(s)[ix].clone())
            .collect();
        // advance the odometer, last slot fastest
        let mut pos = self.idx.len();
        loop {
            if pos == 0 {
                if self.next_composition() {
                    self.idx.iter_mut().for_each(|x| *x = 0);
                } else {
                    self.done = true;
                }
                break;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < self.table.of(self.comp[pos]).len() {
                break;
            }
            self.idx[pos] = 0;
        }
        Some(item)
    }
}

/// Streams the fixed points `M(d, e, f)` as (core, quotient) labels, core by
/// core.
pub struct FixedPointLabels {
    n: usize,
    m: usize,
    d: i64,
    cores: Vec<Core>,
    next_core: usize,
    table: Arc<PartitionTable>,
    current: Option<(usize, QuotientTuples)>,
}

impl Iterator for FixedPointLabels {
    type Item = (Core, QuotientTuple);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some((ci, tuples)) = &mut self.current {
                if let Some(parts) = tuples.next() {
                    let core = self.cores[*ci].clone();
                    return Some((
                        core,
                        QuotientTuple {
                            n: self.n,
                            m: self.m,
                            parts,
                        },
                    ));
                }
            }
            if self.next_core >= self.cores.len() {
                return None;
            }
            let ci = self.next_core;
            self.next_core += 1;
            let rest = (self.d - self.cores[ci].energy()) as usize;
            let tuples = QuotientTuples::with_table(self.table.clone(), self.n * self.m, rest);
            self.current = Some((ci, tuples));
        }
    }
}

fn check_d(d: i64) -> Result<()> {
    if d < 0 {
        Err(BowError::NegativeD(d))
    } else {
        Ok(())
    }
}

pub fn fixed_point_labels(d: i64, e: &[i64], f: &[i64]) -> Result<FixedPointLabels> {
    check_d(d)?;
    let cores = enumerate_cores(e, f, d)?;
    Ok(FixedPointLabels {
        n: e.len(),
        m: f.len(),
        d,
        cores,
        next_core: 0,
        table: Arc::new(PartitionTable::new(d as usize)),
        current: None,
    })
}

/// All Maya diagrams with charges `(d, e, f)`.
pub fn enumerate_fixed_points(
    d: i64,
    e: &[i64],
    f: &[i64],
) -> Result<impl Iterator<Item = MayaDiagram>> {
    Ok(fixed_point_labels(d, e, f)?
        .map(|(c, q)| MayaDiagram::compose(&c, &q).expect("label shapes agree")))
}

pub fn count_fixed_points(d: i64, e: &[i64], f: &[i64]) -> Result<u64> {
    Ok(fixed_point_labels(d, e, f)?.count() as u64)
}

/// Calls `visit` on every fixed point of every `M(d, e, f)` with `d <= order`,
/// split by core across the rayon pool. Results are merged by the caller.
pub(crate) fn par_fold_fixed_points<T, F, M>(e: &[i64], f: &[i64], order: usize, init: T, visit: F, merge: M) -> Result<T>
where
    T: Clone + Send + Sync,
    F: Fn(&mut T, usize, &MayaDiagram) -> Result<()> + Sync,
    M: Fn(T, T) -> T + Sync + Send,
{
    let cores = enumerate_cores(e, f, order as i64)?;
    let k = e.len() * f.len();
    cores
        .par_iter()
        .map(|core: &Core| {
            let mut acc = init.clone();
            let energy = core.energy() as usize;
            for d in energy..=order {
                for parts in QuotientTuples::new(k, d - energy) {
                    let q = QuotientTuple::new(core.n, core.m, parts)?;
                    let md = MayaDiagram::compose(core, &q)?;
                    visit(&mut acc, d, &md)?;
                }
            }
            Ok(acc)
        })
        .try_reduce(|| init.clone(), |a, b| Ok(merge(a, b)))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    fn parse(rows: &[&str], m: usize) -> Vec<Vec<Vec<u8>>> {
        // each string is one block, rows separated by spaces
        rows.iter()
            .map(|blk| {
                blk.split(' ')
                    .map(|r| {
                        assert_eq!(r.len(), m);
                        r.bytes().map(|b| b - b'0').collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// First diagram of the `(6,(2,3,1),(2,4))` example, rows E1..E3.
    pub fn first_2maya() -> MayaDiagram {
        let blocks = parse(&["00 00 10", "10 01 10", "01 01 10", "11 10 11"], 2);
        MayaDiagram::from_blocks(3, 2, -1, &blocks).unwrap()
    }

    pub fn second_2maya() -> MayaDiagram {
        let blocks = parse(&["10 00 00", "00 00 01", "10 00 00", "00 10 11"], 2);
        MayaDiagram::from_blocks(3, 2, -3, &blocks).unwrap()
    }

    /// The `(5,(-1,-2,2),(-1,0))` diagram.
    pub fn tie_figure() -> MayaDiagram {
        let blocks = parse(&["00 01 00", "01 10 00", "11 11 10", "11 11 10"], 2);
        MayaDiagram::from_blocks(3, 2, -3, &blocks).unwrap()
    }
}
