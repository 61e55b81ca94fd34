//! Exhaustive enumeration of 3D Young diagrams through their diagonal slices.
//!
//! A diagram is determined by its column heights `h(x, y)`. Slice `k ≥ 0` has
//! rows `h(k + t, t)` and slice `-k` has rows `h(t, t + k)`, so a diagram is a
//! chain `∅ ≺ ⋯ ≺ π₋₁ ≺ π₀ ≻ π₁ ≻ ⋯ ≻ ∅`. We enumerate the centre slice and
//! then the two descending chains independently.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::{
    colouring::OctantColouring,
    series::{Series, VariableSet},
    young::Partition,
};

pub type Cell = (u32, u32, u32);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("slices {0} and {1} do not interlace")]
    NotInterlacing(i64, i64),
    #[error("box set is not downward closed at {0:?}")]
    NotClosed(Cell),
    #[error("shard index {shard} out of range for {shards} shards")]
    BadShard { shards: usize, shard: usize },
}

/// A finite downward-closed set of boxes.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagram {
    boxes: BTreeSet<Cell>,
}

impl Diagram {
    pub fn new(boxes: impl IntoIterator<Item = Cell>) -> Result<Self, EnumError> {
        let d = Diagram {
            boxes: boxes.into_iter().collect(),
        };
        for &(i, j, k) in &d.boxes {
            for below in [
                i.checked_sub(1).map(|i| (i, j, k)),
                j.checked_sub(1).map(|j| (i, j, k)),
                k.checked_sub(1).map(|k| (i, j, k)),
            ]
            .into_iter()
            .flatten()
            {
                if !d.boxes.contains(&below) {
                    return Err(EnumError::NotClosed((i, j, k)));
                }
            }
        }
        Ok(d)
    }

    pub fn boxes(&self) -> &BTreeSet<Cell> {
        &self.boxes
    }

    pub fn size(&self) -> usize {
        self.boxes.len()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.boxes.contains(&c)
    }

    /// Box counts per colour.
    pub fn colour_counts(&self, c: &OctantColouring) -> Vec<u32> {
        let mut out = vec![0u32; c.group.order() as usize];
        for &b in &self.boxes {
            out[c.colour(b) as usize] += 1;
        }
        out
    }

    /// The column heights as rows of a plane partition.
    fn heights(&self) -> BTreeMap<(u32, u32), u32> {
        let mut h = BTreeMap::new();
        for &(i, j, _) in &self.boxes {
            *h.entry((i, j)).or_insert(0) += 1;
        }
        h
    }

    pub fn to_slices(&self) -> SliceChain {
        let h = self.heights();
        let height = |x: u32, y: u32| h.get(&(x, y)).copied().unwrap_or(0);
        let slice = |k: i64| {
            let mut rows = Vec::new();
            for t in 0u32.. {
                let v = if k >= 0 {
                    height(k as u32 + t, t)
                } else {
                    height(t, t + (-k) as u32)
                };
                if v == 0 {
                    break;
                }
                rows.push(v);
            }
            Partition::new(rows).expect("column heights decrease along diagonals")
        };
        let mut right = Vec::new();
        for k in 1.. {
            let p = slice(k);
            if p.is_empty() {
                break;
            }
            right.push(p);
        }
        let mut left = Vec::new();
        for k in 1.. {
            let p = slice(-k);
            if p.is_empty() {
                break;
            }
            left.push(p);
        }
        SliceChain {
            centre: slice(0),
            right,
            left,
        }
    }
}

/// Diagonal slices `π_k` (boxes with `x - y = k`).
///
/// `right[i]` is `π_{i+1}` and `left[i]` is `π_{-(i+1)}`; trailing empty
/// slices are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SliceChain {
    pub centre: Partition,
    pub right: Vec<Partition>,
    pub left: Vec<Partition>,
}

impl SliceChain {
    /// The slice `π_k`.
    pub fn slice(&self, k: i64) -> Partition {
        let pick = |v: &Vec<Partition>, i: i64| v.get(i as usize - 1).cloned().unwrap_or_default();
        match k {
            0 => self.centre.clone(),
            k if k > 0 => pick(&self.right, k),
            k => pick(&self.left, -k),
        }
    }

    pub fn size(&self) -> u32 {
        self.centre.size()
            + self.right.iter().map(Partition::size).sum::<u32>()
            + self.left.iter().map(Partition::size).sum::<u32>()
    }

    fn check(&self) -> Result<(), EnumError> {
        for (side, v) in [(1i64, &self.right), (-1, &self.left)] {
            let mut prev = &self.centre;
            let mut k = 0i64;
            let empty = Partition::empty();
            for p in v.iter().chain(std::iter::once(&empty)) {
                if !prev.interlaces(p) {
                    return Err(EnumError::NotInterlacing(k, k + side));
                }
                prev = p;
                k += side;
            }
        }
        Ok(())
    }

    /// Rebuilds the diagram; fails unless the chain interlaces.
    pub fn to_diagram(&self) -> Result<Diagram, EnumError> {
        self.check()?;
        let mut boxes = Vec::new();
        let mut push = |x: u32, y: u32, h: u32| boxes.extend((0..h).map(|z| (x, y, z)));
        for (t, &h) in self.centre.rows().iter().enumerate() {
            push(t as u32, t as u32, h);
        }
        for (i, p) in self.right.iter().enumerate() {
            let k = i as u32 + 1;
            for (t, &h) in p.rows().iter().enumerate() {
                push(k + t as u32, t as u32, h);
            }
        }
        for (i, p) in self.left.iter().enumerate() {
            let k = i as u32 + 1;
            for (t, &h) in p.rows().iter().enumerate() {
                push(t as u32, k + t as u32, h);
            }
        }
        Diagram::new(boxes)
    }
}

/// All descending chains `start ≻ p₁ ≻ p₂ ≻ ⋯ ≻ ∅` (excluding `start`, without the
/// final `∅`) whose total size is at most `budget`.
fn descending_chains(start: &Partition, budget: u32) -> Vec<Vec<Partition>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        last: &Partition,
        budget: u32,
        cur: &mut Vec<Partition>,
        out: &mut Vec<Vec<Partition>>,
    ) {
        // mu ranges over μ with last ≻ μ; ∅ ends the chain.
        for mu in last.remove_horizontal_strips() {
            if mu.is_empty() {
                out.push(cur.clone());
                continue;
            }
            if mu.size() > budget {
                continue;
            }
            cur.push(mu.clone());
            rec(&mu, budget - mu.size(), cur, out);
            cur.pop();
        }
    }
    if start.is_empty() {
        out.push(Vec::new());
    } else {
        rec(start, budget, &mut cur, &mut out);
    }
    out.sort();
    out
}

/// Colour counts of the boxes in a chain of slices on one side.
fn side_counts(chain: &[Partition], right: bool, c: &OctantColouring) -> Vec<u32> {
    let mut out = vec![0u32; c.group.order() as usize];
    for (i, p) in chain.iter().enumerate() {
        let k = i as u32 + 1;
        for (t, &h) in p.rows().iter().enumerate() {
            let (x, y) = if right { (k + t as u32, t as u32) } else { (t as u32, k + t as u32) };
            for z in 0..h {
                out[c.colour((x, y, z)) as usize] += 1;
            }
        }
    }
    out
}

fn centre_counts(p: &Partition, c: &OctantColouring) -> Vec<u32> {
    let mut out = vec![0u32; c.group.order() as usize];
    for (t, &h) in p.rows().iter().enumerate() {
        for z in 0..h {
            out[c.colour((t as u32, t as u32, z)) as usize] += 1;
        }
    }
    out
}

/// Centre slices of size at most `n`, in canonical order.
fn centres(n: u32) -> Vec<Partition> {
    Partition::all_up_to(n)
}

fn check_shard(shards: usize, shard: usize) -> Result<(), EnumError> {
    if shards == 0 || shard >= shards {
        Err(EnumError::BadShard { shards, shard })
    } else {
        Ok(())
    }
}

/// Calls `f` on every diagram with at most `n` boxes, exactly once, ordered by
/// centre slice and then lexicographically by the two side chains.
pub fn for_each_chain(n: u32, mut f: impl FnMut(&SliceChain)) {
    for centre in centres(n) {
        let budget = n - centre.size();
        let sides = descending_chains(&centre, budget);
        let sized: Vec<(u32, &Vec<Partition>)> = sides
            .iter()
            .map(|s| (s.iter().map(Partition::size).sum(), s))
            .collect();
        for (rs, right) in &sized {
            for (ls, left) in &sized {
                if rs + ls <= budget {
                    f(&SliceChain {
                        centre: centre.clone(),
                        right: (*right).clone(),
                        left: (*left).clone(),
                    });
                }
            }
        }
    }
}

/// Calls `f` on every diagram with at most `n` boxes.
pub fn for_each_diagram(n: u32, mut f: impl FnMut(&Diagram)) {
    for_each_chain(n, |s| f(&s.to_diagram().expect("enumerated chains interlace")));
}

/// Number of diagrams of each size `0..=n`.
pub fn counts_by_size(n: u32) -> Vec<u64> {
    let mut out = vec![0u64; n as usize + 1];
    for_each_chain(n, |s| out[s.size() as usize] += 1);
    out
}

type CountMap = BTreeMap<Vec<u32>, u64>;

fn merge(mut a: CountMap, b: CountMap) -> CountMap {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

fn centre_contribution(centre: &Partition, n: u32, c: &OctantColouring) -> CountMap {
    let budget = n - centre.size();
    let sides = descending_chains(centre, budget);
    let summarise = |right: bool| -> BTreeMap<(u32, Vec<u32>), u64> {
        let mut m = BTreeMap::new();
        for s in &sides {
            let size = s.iter().map(Partition::size).sum::<u32>();
            *m.entry((size, side_counts(s, right, c))).or_insert(0) += 1;
        }
        m
    };
    let (r, l) = (summarise(true), summarise(false));
    let base = centre_counts(centre, c);
    let mut out = CountMap::new();
    for ((rs, rc), rn) in &r {
        for ((ls, lc), ln) in &l {
            if rs + ls > budget {
                continue;
            }
            let key: Vec<u32> = (0..base.len()).map(|g| base[g] + rc[g] + lc[g]).collect();
            *out.entry(key).or_insert(0) += rn * ln;
        }
    }
    out
}

fn to_series(vars: &VariableSet, n: u32, counts: CountMap) -> Series {
    Series::from_terms(
        vars,
        n,
        counts
            .into_iter()
            .map(|(k, v)| (k.into_iter().map(|e| e as i32).collect(), BigInt::from(v))),
    )
    .expect("exponent vectors match the group order")
}

/// `Σ_{|π| ≤ n} ∏_g q_g^{|π|_g}` over the variables of the colouring's group.
pub fn coloured_series(c: &OctantColouring, n: u32) -> Series {
    coloured_series_shard(c, n, 1, 0).expect("single shard is valid")
}

/// The part of [`coloured_series`] coming from centre slices whose index
/// (in canonical order) is `shard` modulo `shards`. Summing all shards gives
/// the full series.
pub fn coloured_series_shard(
    c: &OctantColouring,
    n: u32,
    shards: usize,
    shard: usize,
) -> Result<Series, EnumError> {
    check_shard(shards, shard)?;
    let counts = centres(n)
        .into_par_iter()
        .enumerate()
        .filter(|(i, _)| i % shards == shard)
        .map(|(_, centre)| centre_contribution(&centre, n, c))
        .reduce(CountMap::new, merge);
    Ok(to_series(&c.group.variables(), n, counts))
}

/// Brute-force oracle: grows diagrams one box at a time, deduplicating by set.
pub fn diagrams_by_closure(n: u32) -> BTreeSet<Diagram> {
    let mut all = BTreeSet::new();
    let mut layer = BTreeSet::from([Diagram::default()]);
    all.extend(layer.iter().cloned());
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for d in &layer {
            let mut candidates = BTreeSet::from([(0, 0, 0)]);
            for &(i, j, k) in &d.boxes {
                candidates.extend([(i + 1, j, k), (i, j + 1, k), (i, j, k + 1)]);
            }
            for cand in candidates {
                if d.boxes.contains(&cand) {
                    continue;
                }
                let mut b = d.boxes.clone();
                b.insert(cand);
                if let Ok(nd) = Diagram::new(b) {
                    next.insert(nd);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::GroupSpec;
    use num_traits::{One, Zero};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(counts_by_size(0), vec![1]);
        assert_eq!(counts_by_size(5), vec![1, 1, 3, 6, 13, 24]);
    }

    #[test]
    fn single_box_and_pair() {
        let d = Diagram::new([(0, 0, 0)]).unwrap();
        let s = d.to_slices();
        assert_eq!(s.centre, p("1"));
        assert!(s.right.is_empty() && s.left.is_empty());
        let d = Diagram::new([(0, 0, 0), (1, 0, 0)]).unwrap();
        let s = d.to_slices();
        assert_eq!((s.slice(0), s.slice(1), s.slice(-1)), (p("1"), p("1"), p("")));
    }

    #[test]
    fn closure_is_checked() {
        assert_eq!(
            Diagram::new([(1, 0, 0)]),
            Err(EnumError::NotClosed((1, 0, 0)))
        );
        let bad = SliceChain {
            centre: p("1"),
            right: vec![p("2")],
            left: vec![],
        };
        assert_eq!(bad.to_diagram(), Err(EnumError::NotInterlacing(0, 1)));
    }

    #[test]
    fn chain_enumeration_matches_closure_oracle() {
        let mut seen = BTreeSet::new();
        for_each_diagram(6, |d| {
            assert!(seen.insert(d.clone()), "duplicate diagram");
        });
        assert_eq!(seen, diagrams_by_closure(6));
    }

    #[test]
    fn slices_round_trip() {
        for d in diagrams_by_closure(6) {
            let s = d.to_slices();
            assert_eq!(s.to_diagram().unwrap(), d);
            assert_eq!(s.size() as usize, d.size());
        }
    }

    #[test]
    fn klein_to_degree_two() {
        let s = coloured_series(&OctantColouring::klein(), 2);
        let expect = Series::from_terms(
            &GroupSpec::Klein.variables(),
            2,
            [
                vec![0, 0, 0, 0],
                vec![1, 0, 0, 0],
                vec![1, 1, 0, 0],
                vec![1, 0, 1, 0],
                vec![1, 0, 0, 1],
            ]
            .into_iter()
            .map(|e| (e, BigInt::one())),
        )
        .unwrap();
        assert_eq!(s, expect);
        assert!(coloured_series(&OctantColouring::cyclic(3), 0).is_one());
    }

    #[test]
    fn series_matches_closure_counts() {
        for c in [
            OctantColouring::cyclic(2),
            OctantColouring::cyclic(3),
            OctantColouring::klein(),
            OctantColouring::z3_diagonal(),
        ] {
            let mut counts: BTreeMap<Vec<i32>, BigInt> = BTreeMap::new();
            for d in diagrams_by_closure(6) {
                let k = d.colour_counts(&c).into_iter().map(|e| e as i32).collect();
                *counts.entry(k).or_insert_with(BigInt::zero) += 1;
            }
            let oracle = Series::from_terms(&c.group.variables(), 6, counts).unwrap();
            assert_eq!(coloured_series(&c, 6), oracle);
        }
    }

    #[test]
    fn shards_sum_to_whole() {
        let c = OctantColouring::klein();
        let whole = coloured_series(&c, 7);
        let mut acc = Series::zero(&c.group.variables(), 7);
        for i in 0..3 {
            acc = &acc + &coloured_series_shard(&c, 7, 3, i).unwrap();
        }
        assert_eq!(acc, whole);
        assert!(coloured_series_shard(&c, 7, 3, 3).is_err());
        assert!(coloured_series_shard(&c, 7, 0, 0).is_err());
    }

    #[test]
    fn adjacent_slices_interlace() {
        for_each_chain(7, |s| {
            let lo = -(s.left.len() as i64);
            let hi = s.right.len() as i64;
            for k in 0..=hi {
                assert!(s.slice(k).interlaces(&s.slice(k + 1)));
            }
            for k in (lo..=0).rev() {
                assert!(s.slice(k).interlaces(&s.slice(k - 1)));
            }
        });
    }
}
