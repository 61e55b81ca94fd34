//! Integer partitions as Young diagrams: interlacing, transposition, strips.

use std::{fmt, str::FromStr};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("bad row length {0:?}")]
    BadRow(String),
    #[error("rows must be weakly decreasing: {0:?}")]
    NotDecreasing(Vec<u32>),
}

/// A partition `λ₁ ≥ λ₂ ≥ ⋯ > 0`, stored without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Builds a partition from rows, dropping zeros. Rows must be weakly decreasing.
    pub fn new(mut rows: Vec<u32>) -> Result<Self, PartitionError> {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotDecreasing(rows));
        }
        Ok(Partition(rows))
    }

    /// Sorts the rows first, so any multiset of lengths is accepted.
    pub fn from_unsorted(mut rows: Vec<u32>) -> Self {
        rows.sort_unstable_by(|a, b| b.cmp(a));
        while rows.last() == Some(&0) {
            rows.pop();
        }
        Partition(rows)
    }

    pub fn rows(&self) -> &[u32] {
        &self.0
    }

    /// Row `i` (0-based), zero beyond the last row.
    pub fn row(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of cells `|λ|`.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn transpose(&self) -> Partition {
        let width = self.row(0) as usize;
        let mut cols = vec![0u32; width];
        for &r in &self.0 {
            for c in cols.iter_mut().take(r as usize) {
                *c += 1;
            }
        }
        Partition(cols)
    }

    /// Whether `self ≻ mu`: `λ₁ ≥ μ₁ ≥ λ₂ ≥ μ₂ ≥ ⋯`.
    pub fn interlaces(&self, mu: &Partition) -> bool {
        let n = self.len().max(mu.len());
        (0..n).all(|i| self.row(i) >= mu.row(i) && mu.row(i) >= self.row(i + 1))
    }

    /// The column form of interlacing: each column of `self` exceeds the
    /// matching column of `mu` by 0 or 1.
    pub fn interlaces_by_columns(&self, mu: &Partition) -> bool {
        let (a, b) = (self.transpose(), mu.transpose());
        let n = a.len().max(b.len());
        (0..n).all(|j| {
            let (x, y) = (a.row(j), b.row(j));
            x == y || x == y + 1
        })
    }

    /// Whether the cell at (row `i`, column `j`) is in the diagram.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        (j as u32) < self.row(i)
    }

    /// Cells `(i, j)` in reading order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| (0..r as usize).map(move |j| (i, j)))
    }

    /// Containment `mu ⊆ self`.
    pub fn contains_partition(&self, mu: &Partition) -> bool {
        mu.len() <= self.len() && mu.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// All `λ ≻ self` with `|λ| - |self| ≤ max_added` (horizontal strips added).
    pub fn add_horizontal_strips(&self, max_added: u32) -> Vec<Partition> {
        // λ_1 ∈ [μ_1, μ_1 + budget], λ_i ∈ [μ_i, μ_{i-1}] for i ≥ 2, with one extra row.
        let n = self.len() + 1;
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(
            mu: &Partition,
            i: usize,
            budget: u32,
            cur: &mut Vec<u32>,
            out: &mut Vec<Partition>,
        ) {
            if i == cur.len() {
                out.push(Partition::from_trimmed(cur));
                return;
            }
            let lo = mu.row(i);
            let hi = if i == 0 {
                lo + budget
            } else {
                mu.row(i - 1).min(lo + budget)
            };
            for v in lo..=hi {
                cur[i] = v;
                rec(mu, i + 1, budget - (v - lo), cur, out);
            }
        }
        rec(self, 0, max_added, &mut cur, &mut out);
        out
    }

    /// All `μ` with `self ≻ μ` (horizontal strips removed).
    pub fn remove_horizontal_strips(&self) -> Vec<Partition> {
        let n = self.len();
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(lam: &Partition, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if i == cur.len() {
                out.push(Partition::from_trimmed(cur));
                return;
            }
            for v in lam.row(i + 1)..=lam.row(i) {
                cur[i] = v;
                rec(lam, i + 1, cur, out);
            }
        }
        rec(self, 0, &mut cur, &mut out);
        out
    }

    /// All `λ` with `λ' ≻ self'` and `|λ| - |self| ≤ max_added` (vertical strips added).
    pub fn add_vertical_strips(&self, max_added: u32) -> Vec<Partition> {
        self.transpose()
            .add_horizontal_strips(max_added)
            .into_iter()
            .map(|p| p.transpose())
            .collect()
    }

    /// All `μ` with `self' ≻ μ'` (vertical strips removed).
    pub fn remove_vertical_strips(&self) -> Vec<Partition> {
        self.transpose()
            .remove_horizontal_strips()
            .into_iter()
            .map(|p| p.transpose())
            .collect()
    }

    fn from_trimmed(rows: &[u32]) -> Partition {
        let end = rows.iter().rposition(|&r| r > 0).map_or(0, |p| p + 1);
        Partition(rows[..end].to_vec())
    }

    /// Beta-numbers `λ_i + L - 1 - i` for `i < L` (padding with zero rows).
    fn beta(&self, l: usize) -> Vec<i64> {
        (0..l)
            .map(|i| self.row(i) as i64 + (l - 1 - i) as i64)
            .collect()
    }

    fn from_beta(beta: &mut [i64]) -> Partition {
        beta.sort_unstable_by(|a, b| b.cmp(a));
        let l = beta.len();
        Partition::from_trimmed(
            &beta
                .iter()
                .enumerate()
                .map(|(i, &b)| (b - (l - 1 - i) as i64) as u32)
                .collect::<Vec<_>>(),
        )
    }

    /// All ways of adding a border strip of length `n`, with sign `(-1)^{h+1}`.
    pub fn border_strip_additions(&self, n: u32) -> Vec<(Partition, i32)> {
        assert!(n >= 1, "border strips have positive length");
        // On the abacus, adding a strip of length n moves one bead from b to
        // b + n; the height is one more than the number of beads jumped over.
        let l = self.len() + n as usize;
        let beta = self.beta(l);
        let mut out = Vec::new();
        for (idx, &b) in beta.iter().enumerate() {
            let target = b + n as i64;
            if beta.contains(&target) {
                continue;
            }
            let jumped = beta.iter().filter(|&&c| c > b && c < target).count();
            let mut nb = beta.clone();
            nb[idx] = target;
            let sign = if jumped % 2 == 0 { 1 } else { -1 };
            out.push((Partition::from_beta(&mut nb), sign));
        }
        out.sort();
        out
    }

    /// All ways of removing a border strip of length `n`, with sign `(-1)^{h+1}`.
    pub fn border_strip_removals(&self, n: u32) -> Vec<(Partition, i32)> {
        assert!(n >= 1, "border strips have positive length");
        let l = self.len();
        let beta = self.beta(l);
        let mut out = Vec::new();
        for (idx, &b) in beta.iter().enumerate() {
            let target = b - n as i64;
            if target < 0 || beta.contains(&target) {
                continue;
            }
            let jumped = beta.iter().filter(|&&c| c < b && c > target).count();
            let mut nb = beta.clone();
            nb[idx] = target;
            let sign = if jumped % 2 == 0 { 1 } else { -1 };
            out.push((Partition::from_beta(&mut nb), sign));
        }
        out.sort();
        out
    }

    /// Every partition of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Every partition of size at most `n`, by size.
    pub fn all_up_to(n: u32) -> Vec<Partition> {
        (0..=n).flat_map(Partition::all_of_size).collect()
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    /// Comma-separated rows, e.g. `"6,3,2"`; the empty string is `∅`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let rows = s
            .split(',')
            .map(|r| {
                r.trim()
                    .parse::<u32>()
                    .map_err(|_| PartitionError::BadRow(r.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(rows)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// A border strip `outer / inner`, checked cell by cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderStrip {
    pub outer: Partition,
    pub inner: Partition,
    pub cells: Vec<(usize, usize)>,
    pub height: usize,
}

impl BorderStrip {
    /// Returns the strip if `outer / inner` is a non-empty, edge-connected skew
    /// shape with no 2×2 block.
    pub fn from_skew(outer: &Partition, inner: &Partition) -> Option<BorderStrip> {
        if !outer.contains_partition(inner) {
            return None;
        }
        let cells: Vec<(usize, usize)> = outer
            .cells()
            .filter(|&(i, j)| !inner.contains(i, j))
            .collect();
        if cells.is_empty() {
            return None;
        }
        let has = |i: usize, j: usize| cells.contains(&(i, j));
        if cells
            .iter()
            .any(|&(i, j)| has(i + 1, j) && has(i, j + 1) && has(i + 1, j + 1))
        {
            return None;
        }
        // edge-connectivity by flood fill
        let mut seen = vec![cells[0]];
        let mut stack = vec![cells[0]];
        while let Some((i, j)) = stack.pop() {
            let mut nbrs = vec![(i + 1, j), (i, j + 1)];
            if i > 0 {
                nbrs.push((i - 1, j));
            }
            if j > 0 {
                nbrs.push((i, j - 1));
            }
            for c in nbrs {
                if has(c.0, c.1) && !seen.contains(&c) {
                    seen.push(c);
                    stack.push(c);
                }
            }
        }
        if seen.len() != cells.len() {
            return None;
        }
        let mut rows: Vec<usize> = cells.iter().map(|c| c.0).collect();
        rows.dedup();
        Some(BorderStrip {
            outer: outer.clone(),
            inner: inner.clone(),
            height: rows.len(),
            cells,
        })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `(-1)^{h+1}`.
    pub fn sign(&self) -> i32 {
        if self.height % 2 == 1 {
            1
        } else {
            -1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("6,3,2").rows(), &[6, 3, 2]);
        assert!(p("").is_empty());
        assert_eq!(p("2,1,0").rows(), &[2, 1]);
        assert!("1,2".parse::<Partition>().is_err());
        assert!("x".parse::<Partition>().is_err());
        assert_eq!(p("3,1").to_string(), "(3,1)");
    }

    #[test]
    fn interlacing_examples() {
        assert!(p("6,3,2").interlaces(&p("4,2")));
        assert!(p("6,3,2").interlaces_by_columns(&p("4,2")));
        assert!(!p("3").interlaces(&p("1,1")));
        assert!(p("2,2").interlaces(&p("2")));
        assert!(p("").interlaces(&p("")));
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p("6,3,2").transpose(), p("3,3,2,1,1,1"));
        assert_eq!(p("").transpose(), p(""));
    }

    #[test]
    fn hooks_of_three() {
        assert_eq!(
            p("").border_strip_additions(3),
            vec![(p("1,1,1"), 1), (p("2,1"), -1), (p("3"), 1)]
        );
    }

    #[test]
    fn strips_of_two_on_a_box() {
        assert_eq!(
            p("1").border_strip_additions(2),
            vec![(p("1,1,1"), -1), (p("3"), 1)]
        );
    }

    #[test]
    fn single_cells_are_corners() {
        let lam = p("4,2,2,1");
        let adds = lam.border_strip_additions(1);
        assert!(adds.iter().all(|(_, s)| *s == 1));
        assert_eq!(adds.len(), 4);
    }

    #[test]
    fn strip_enumerations_match_filters() {
        for mu in Partition::all_up_to(6) {
            let ups: Vec<_> = mu.add_horizontal_strips(3);
            let expect: Vec<_> = Partition::all_up_to(mu.size() + 3)
                .into_iter()
                .filter(|l| l.interlaces(&mu))
                .collect();
            let mut a = ups.clone();
            a.sort();
            let mut b = expect;
            b.sort();
            assert_eq!(a, b, "{mu}");
            let downs = mu.remove_horizontal_strips();
            let expect: Vec<_> = Partition::all_up_to(mu.size())
                .into_iter()
                .filter(|m| mu.interlaces(m))
                .collect();
            let (mut a, mut b) = (downs, expect);
            a.sort();
            b.sort();
            assert_eq!(a, b, "{mu}");
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| Partition::all_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn row_and_column_interlacing_agree_exhaustively() {
        let all = Partition::all_up_to(8);
        for l in &all {
            for m in &all {
                assert_eq!(l.interlaces(m), l.interlaces_by_columns(m), "{l} {m}");
            }
        }
    }

    #[test]
    fn abacus_agrees_with_skew_shape_oracle() {
        let all = Partition::all_up_to(8);
        for lam in Partition::all_up_to(5) {
            for n in 1..=3u32 {
                let mut oracle: Vec<(Partition, i32)> = all
                    .iter()
                    .filter(|mu| mu.size() == lam.size() + n)
                    .filter_map(|mu| BorderStrip::from_skew(mu, &lam).map(|s| (mu.clone(), s.sign())))
                    .collect();
                oracle.sort();
                assert_eq!(lam.border_strip_additions(n), oracle, "{lam} {n}");
            }
        }
    }

    #[test]
    fn additions_and_removals_are_adjoint() {
        for lam in Partition::all_up_to(6) {
            for n in 1..=4u32 {
                for (mu, s) in lam.border_strip_additions(n) {
                    assert!(mu.border_strip_removals(n).contains(&(lam.clone(), s)));
                }
                for (mu, s) in lam.border_strip_removals(n) {
                    assert!(mu.border_strip_additions(n).contains(&(lam.clone(), s)));
                }
            }
        }
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        prop::collection::vec(0u32..7, 0..7).prop_map(Partition::from_unsorted)
    }

    proptest! {
        #[test]
        fn transpose_involution(l in arb_partition()) {
            prop_assert_eq!(l.transpose().transpose(), l.clone());
            prop_assert_eq!(l.transpose().size(), l.size());
        }

        #[test]
        fn interlacing_is_reflexive(l in arb_partition()) {
            prop_assert!(l.interlaces(&l));
        }

        #[test]
        fn row_column_equivalence(l in arb_partition(), m in arb_partition()) {
            prop_assert_eq!(l.interlaces(&m), l.interlaces_by_columns(&m));
        }

        #[test]
        fn parse_round_trip(l in arb_partition()) {
            let text = l.rows().iter().map(u32::to_string).collect::<Vec<_>>().join(",");
            prop_assert_eq!(text.parse::<Partition>().unwrap(), l);
        }
    }
}
