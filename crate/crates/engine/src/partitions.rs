//! Integer-partition combinatorics: shapes, cells, arms and legs,
//! conjugation and deterministic enumeration.
//!
//! Cells are stored 0-based: `(row, col)` with `col < parts[row]`. The
//! classical arm/leg formulas are 1-based, so the implementations subtract
//! `col + 1` (resp. `row + 1`) from the stored part lengths.

use crate::error::{EngineError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A weakly decreasing sequence of positive integers. The empty sequence is
/// the empty partition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<u32>", try_from = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = EngineError;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

/// A cell of a Young diagram, 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        let ok = parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p > 0);
        if ok {
            Ok(Partition { parts })
        } else {
            Err(EngineError::MalformedPartition)
        }
    }

    /// Panicking constructor for literals known to be valid.
    pub fn of(parts: &[u32]) -> Self {
        Partition::new(parts.to_vec()).expect("valid partition literal")
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// |λ| = Σ λ_i.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Row length, 0 beyond the last row.
    pub fn part(&self, row: usize) -> u32 {
        self.parts.get(row).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0] as usize;
        let mut out = Vec::with_capacity(cols);
        for c in 0..cols {
            out.push(self.parts.iter().filter(|&&p| p as usize > c).count() as u32);
        }
        Partition { parts: out }
    }

    /// True iff `inner` fits inside `self` row by row.
    pub fn contains(&self, inner: &Partition) -> bool {
        (0..inner.len()).all(|i| inner.part(i) <= self.part(i))
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (0..p as usize).map(move |c| Cell { row: r, col: c }))
    }

    fn check_cell(&self, c: Cell) -> Result<()> {
        if c.row < self.len() && c.col < self.parts[c.row] as usize {
            Ok(())
        } else {
            Err(EngineError::CellOutOfShape { row: c.row, col: c.col })
        }
    }

    /// a(□) = λ_{row} − (col+1): cells strictly to the right.
    pub fn arm(&self, c: Cell) -> Result<i64> {
        self.check_cell(c)?;
        Ok(self.signed_arm(c))
    }

    /// ℓ(□) = λ^t_{col} − (row+1): cells strictly below.
    pub fn leg(&self, c: Cell) -> Result<i64> {
        self.check_cell(c)?;
        Ok(self.signed_leg(c))
    }

    /// Arm without the membership check; negative for cells outside the
    /// diagram. Used by the instanton tangent character.
    pub fn signed_arm(&self, c: Cell) -> i64 {
        self.part(c.row) as i64 - (c.col as i64 + 1)
    }

    /// Leg without the membership check; negative outside the diagram.
    pub fn signed_leg(&self, c: Cell) -> i64 {
        let col_len = self.parts.iter().filter(|&&p| p as usize > c.col).count() as i64;
        col_len - (c.row as i64 + 1)
    }

    /// ‖λ‖² = Σ λ_i².
    pub fn norm_sq(&self) -> i64 {
        self.parts.iter().map(|&p| (p as i64) * (p as i64)).sum()
    }

    /// κ(λ) = ‖λ‖² − ‖λ^t‖². Always even.
    pub fn kappa(&self) -> i64 {
        self.norm_sq() - self.conjugate().norm_sq()
    }

    /// All partitions of `n` in lexicographically descending order.
    pub fn enumerate(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        gen_partitions(n, n, &mut current, &mut out);
        out
    }

    /// All partitions of every size `0..=n`.
    pub fn enumerate_up_to(n: u32) -> Vec<Partition> {
        (0..=n).flat_map(Partition::enumerate).collect()
    }

    /// All partitions contained in `bound` (including the empty one).
    pub fn sub_partitions(bound: &Partition) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        gen_sub(bound, 0, u32::MAX, &mut current, &mut out);
        out
    }

    /// Componentwise minimum of two shapes: the largest shape contained in
    /// both.
    pub fn meet(&self, other: &Partition) -> Partition {
        let n = self.len().min(other.len());
        let parts: Vec<u32> = (0..n).map(|i| self.parts[i].min(other.parts[i])).collect();
        Partition { parts }
    }
}

fn gen_partitions(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    let top = remaining.min(max_part);
    for p in (1..=top).rev() {
        current.push(p);
        gen_partitions(remaining - p, p, current, out);
        current.pop();
    }
}

fn gen_sub(bound: &Partition, row: usize, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    out.push(Partition { parts: current.clone() });
    if row >= bound.len() {
        return;
    }
    let top = bound.part(row).min(max_part);
    for p in (1..=top).rev() {
        current.push(p);
        gen_sub(bound, row + 1, p, current, out);
        current.pop();
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An ordered r-tuple of partitions labeling a torus fixed point.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartitionTuple {
    entries: Vec<Partition>,
}

impl PartitionTuple {
    pub fn new(entries: Vec<Partition>) -> Self {
        PartitionTuple { entries }
    }

    pub fn empty(r: usize) -> Self {
        PartitionTuple { entries: vec![Partition::empty(); r] }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Partition] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &Partition {
        &self.entries[i]
    }

    /// |λ⃗| = Σ |λ^(i)|.
    pub fn size(&self) -> u64 {
        self.entries.iter().map(|p| p.size()).sum()
    }

    /// All r-tuples of total size exactly `n`, lexicographic in the
    /// componentwise enumeration order.
    pub fn tuples(r: usize, n: u32) -> Vec<PartitionTuple> {
        if r == 0 {
            return if n == 0 { vec![PartitionTuple { entries: vec![] }] } else { vec![] };
        }
        let mut out = Vec::new();
        for k in 0..=n {
            for head in Partition::enumerate(k) {
                for tail in PartitionTuple::tuples(r - 1, n - k) {
                    let mut entries = Vec::with_capacity(r);
                    entries.push(head.clone());
                    entries.extend(tail.entries.iter().cloned());
                    out.push(PartitionTuple { entries });
                }
            }
        }
        out
    }

    /// All r-tuples of total size `0..=n`.
    pub fn tuples_up_to(r: usize, n: u32) -> Vec<PartitionTuple> {
        (0..=n).flat_map(|k| PartitionTuple::tuples(r, k)).collect()
    }
}

impl fmt::Debug for PartitionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_examples() {
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(Partition::of(&[3, 1]).conjugate(), Partition::of(&[2, 1, 1]));
        assert_eq!(Partition::of(&[2, 1]).conjugate(), Partition::of(&[2, 1]));
    }

    #[test]
    fn arm_leg_examples() {
        let p = Partition::of(&[3, 1]);
        assert_eq!(p.arm(Cell { row: 0, col: 0 }).unwrap(), 2);
        assert_eq!(p.leg(Cell { row: 0, col: 0 }).unwrap(), 1);
        let single = Partition::of(&[1]);
        assert_eq!(single.arm(Cell { row: 0, col: 0 }).unwrap(), 0);
        assert_eq!(single.leg(Cell { row: 0, col: 0 }).unwrap(), 0);
        let sq = Partition::of(&[2, 2]);
        assert_eq!(sq.arm(Cell { row: 0, col: 1 }).unwrap(), 0);
        assert_eq!(sq.leg(Cell { row: 0, col: 1 }).unwrap(), 1);
        assert!(p.arm(Cell { row: 1, col: 2 }).is_err());
    }

    #[test]
    fn norm_and_kappa() {
        assert_eq!(Partition::of(&[3, 1]).norm_sq(), 10);
        assert_eq!(Partition::of(&[2, 1]).kappa(), 0);
        assert_eq!(Partition::of(&[2]).kappa(), 2);
    }

    #[test]
    fn enumeration_matches_partition_numbers() {
        let expected = [1usize, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, &count) in expected.iter().enumerate() {
            assert_eq!(Partition::enumerate(n as u32).len(), count, "p({n})");
        }
        assert_eq!(Partition::enumerate(0), vec![Partition::empty()]);
        // Lexicographically descending order.
        assert_eq!(
            Partition::enumerate(4),
            vec![
                Partition::of(&[4]),
                Partition::of(&[3, 1]),
                Partition::of(&[2, 2]),
                Partition::of(&[2, 1, 1]),
                Partition::of(&[1, 1, 1, 1]),
            ]
        );
    }

    #[test]
    fn tuple_counts() {
        // Σ_k p(k) p(2−k) = 2 + 1 + 2.
        assert_eq!(PartitionTuple::tuples(2, 2).len(), 5);
        assert_eq!(PartitionTuple::tuples(1, 3).len(), 3);
        assert_eq!(PartitionTuple::tuples(2, 0).len(), 1);
    }

    #[test]
    fn containment() {
        assert!(Partition::of(&[2, 1]).contains(&Partition::empty()));
        assert!(Partition::of(&[2, 1]).contains(&Partition::of(&[1, 1])));
        assert!(!Partition::of(&[1, 1]).contains(&Partition::of(&[2])));
    }

    #[test]
    fn sub_partition_enumeration() {
        let subs = Partition::sub_partitions(&Partition::of(&[2, 1]));
        // ∅, (1), (2), (1,1), (2,1)
        assert_eq!(subs.len(), 5);
        for s in &subs {
            assert!(Partition::of(&[2, 1]).contains(s));
        }
    }

    #[test]
    fn arm_sum_and_leg_sum_identities() {
        for n in 0..=8u32 {
            for p in Partition::enumerate(n) {
                let arm_sum: i64 = p.cells().map(|c| p.arm(c).unwrap()).sum();
                let leg_sum: i64 = p.cells().map(|c| p.leg(c).unwrap()).sum();
                let size = p.size() as i64;
                assert_eq!(2 * arm_sum, p.norm_sq() - size);
                assert_eq!(2 * leg_sum, p.conjugate().norm_sq() - size);
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let p = Partition::of(&[3, 1]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[3,1]");
        let back: Partition = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&Partition::empty()).unwrap(), "[]");
    }
}
