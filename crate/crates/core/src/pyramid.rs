//! Pyramid partitions: prefix-closed sets of bricks in the upside-down pyramid.
//!
//! A brick is the class of an alternating word `v w v w …` in the letters
//! `v₁=(-1,1,0)`, `v₂=(1,1,0)`, `w₁=(0,1,-1)`, `w₂=(0,1,1)`. The relations only
//! permute the v-letters among themselves and the w-letters among themselves,
//! so a brick is determined by its position; see [`words`] for the word-level
//! oracle backing this.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::{
    colouring::{Element, GroupSpec, KLEIN_A, KLEIN_B, KLEIN_C},
    series::Series,
    young::Partition,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PyramidError {
    #[error("no brick at position {0:?}")]
    InvalidBrick((i32, i32, i32)),
    #[error("brick {0:?} is missing a parent")]
    NotPrefixClosed((i32, i32, i32)),
    #[error("shard index {shard} out of range for {shards} shards")]
    BadShard { shards: usize, shard: usize },
}

pub const V1: (i32, i32, i32) = (-1, 1, 0);
pub const V2: (i32, i32, i32) = (1, 1, 0);
pub const W1: (i32, i32, i32) = (0, 1, -1);
pub const W2: (i32, i32, i32) = (0, 1, 1);

/// A brick, identified by its position. Ordered by layer, then `x`, then `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Brick {
    pub y: i32,
    pub x: i32,
    pub z: i32,
}

impl Brick {
    pub const ORIGIN: Brick = Brick { y: 0, x: 0, z: 0 };

    pub fn new(x: i32, y: i32, z: i32) -> Result<Brick, PyramidError> {
        let b = Brick { y, x, z };
        if b.is_valid() {
            Ok(b)
        } else {
            Err(PyramidError::InvalidBrick((x, y, z)))
        }
    }

    pub fn position(&self) -> (i32, i32, i32) {
        (self.x, self.y, self.z)
    }

    /// A word of length `y` has `ceil(y/2)` v-letters and `floor(y/2)` w-letters.
    pub fn is_valid(&self) -> bool {
        if self.y < 0 {
            return false;
        }
        let v = (self.y + 1) / 2;
        let w = self.y / 2;
        self.x.abs() <= v
            && (self.x + v) % 2 == 0
            && self.z.abs() <= w
            && (self.z + w) % 2 == 0
    }

    fn shift(&self, e: (i32, i32, i32), sign: i32) -> Brick {
        Brick {
            x: self.x + sign * e.0,
            y: self.y + sign * e.1,
            z: self.z + sign * e.2,
        }
    }

    /// Letters that can end a word of the given length.
    fn letters(len: i32) -> [(i32, i32, i32); 2] {
        if len % 2 == 1 {
            [V1, V2]
        } else {
            [W1, W2]
        }
    }

    /// The bricks this one rests on: one or two bricks in the layer below.
    pub fn parents(&self) -> Vec<Brick> {
        if self.y == 0 {
            return Vec::new();
        }
        Brick::letters(self.y)
            .iter()
            .map(|&e| self.shift(e, -1))
            .filter(Brick::is_valid)
            .collect()
    }

    /// The bricks resting on this one.
    pub fn children(&self) -> [Brick; 2] {
        let [a, b] = Brick::letters(self.y + 1);
        [self.shift(a, 1), self.shift(b, 1)]
    }

    /// Diagonal index `x - z`.
    pub fn diagonal(&self) -> i32 {
        self.x - self.z
    }

    /// Colour by diagonal `k mod 4`: `0, b, c, a`.
    pub fn colour(&self) -> Element {
        [0, KLEIN_B, KLEIN_C, KLEIN_A][self.diagonal().rem_euclid(4) as usize]
    }
}

/// A prefix-closed finite set of bricks.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PyramidPartition {
    bricks: BTreeSet<Brick>,
}

impl PyramidPartition {
    pub fn new(bricks: impl IntoIterator<Item = Brick>) -> Result<Self, PyramidError> {
        let bricks: BTreeSet<Brick> = bricks.into_iter().collect();
        for b in &bricks {
            if !b.is_valid() {
                return Err(PyramidError::InvalidBrick(b.position()));
            }
            if b.parents().iter().any(|p| !bricks.contains(p)) {
                return Err(PyramidError::NotPrefixClosed(b.position()));
            }
        }
        Ok(PyramidPartition { bricks })
    }

    pub fn bricks(&self) -> &BTreeSet<Brick> {
        &self.bricks
    }

    pub fn size(&self) -> usize {
        self.bricks.len()
    }

    pub fn colour_counts(&self) -> [u32; 4] {
        let mut out = [0u32; 4];
        for b in &self.bricks {
            out[b.colour() as usize] += 1;
        }
        out
    }

    /// The slice `π_k` as a 2D diagram, or `None` if its bricks do not form one.
    pub fn try_slice(&self, k: i32) -> Option<Partition> {
        let apex = slice_apex(k);
        let mut rows: BTreeMap<i32, BTreeSet<i32>> = BTreeMap::new();
        for b in self.bricks.iter().filter(|b| b.diagonal() == k) {
            let (i, j) = slice_cell(&apex, b)?;
            rows.entry(i).or_default().insert(j);
        }
        let mut lens = Vec::new();
        for (n, (i, cols)) in rows.iter().enumerate() {
            let len = cols.len() as i32;
            if *i != n as i32 || cols.iter().copied().ne(0..len) {
                return None;
            }
            lens.push(len as u32);
        }
        Partition::new(lens).ok()
    }

    /// The slice `π_k`; every slice of a pyramid partition is a 2D diagram.
    pub fn slice(&self, k: i32) -> Partition {
        self.try_slice(k).expect("slices of a pyramid partition are Young diagrams")
    }

    /// Range of diagonals that may be non-empty.
    pub fn diagonal_range(&self) -> std::ops::RangeInclusive<i32> {
        let lo = self.bricks.iter().map(Brick::diagonal).min().unwrap_or(0);
        let hi = self.bricks.iter().map(Brick::diagonal).max().unwrap_or(0);
        lo..=hi
    }

    /// Checks the four interlacing families between adjacent slices:
    /// `π_{2k} ≻ π_{2k+1}`, `π'_{2k+1} ≻ π'_{2k+2}`, `π'_{-2k} ≻ π'_{-2k-1}`
    /// and `π_{-2k-1} ≻ π_{-2k-2}`.
    pub fn slices_interlace(&self) -> bool {
        let r = self.diagonal_range();
        let (lo, hi) = (*r.start() - 1, *r.end() + 1);
        let s = |k: i32| self.try_slice(k);
        let mut ok = true;
        for k in 0..=hi {
            let (Some(a), Some(b)) = (s(k), s(k + 1)) else {
                return false;
            };
            ok &= if k % 2 == 0 {
                a.interlaces(&b)
            } else {
                a.transpose().interlaces(&b.transpose())
            };
        }
        for k in (lo..=0).rev() {
            let (Some(a), Some(b)) = (s(k), s(k - 1)) else {
                return false;
            };
            ok &= if k % 2 == 0 {
                a.transpose().interlaces(&b.transpose())
            } else {
                a.interlaces(&b)
            };
        }
        ok
    }
}

/// The first brick of diagonal `k`: `(v₂w₁)^m` or `(v₂w₁)^m v₂` for `k ≥ 0`,
/// and the mirror words in `v₁w₂` for `k < 0`.
pub fn slice_apex(k: i32) -> Brick {
    let a = k.abs();
    let up = (a + 1) / 2;
    let down = a / 2;
    if k >= 0 {
        Brick { x: up, y: a, z: -down }
    } else {
        Brick { x: -up, y: a, z: down }
    }
}

/// Cell `(i, j)` of a brick in its slice: `i` steps of `(1,2,1)` and `j` steps
/// of `(-1,2,-1)` from the apex.
fn slice_cell(apex: &Brick, b: &Brick) -> Option<(i32, i32)> {
    let dx = b.x - apex.x;
    let dy = b.y - apex.y;
    if dy < 0 || dy % 2 != 0 || b.z - apex.z != dx {
        return None;
    }
    let half = dy / 2;
    if (half + dx) % 2 != 0 || (half + dx) < 0 || (half - dx) < 0 {
        return None;
    }
    Some(((half + dx) / 2, (half - dx) / 2))
}

fn check_shard(shards: usize, shard: usize) -> Result<(), PyramidError> {
    if shards == 0 || shard >= shards {
        Err(PyramidError::BadShard { shards, shard })
    } else {
        Ok(())
    }
}

/// Reverse-search state: the canonical parent of a non-empty partition is
/// obtained by removing its largest maximal brick.
struct Search<'a, F> {
    max: usize,
    bricks: BTreeSet<Brick>,
    visit: &'a mut F,
}

impl<F: FnMut(&BTreeSet<Brick>)> Search<'_, F> {
    fn addable(&self) -> Vec<Brick> {
        if self.bricks.is_empty() {
            return vec![Brick::ORIGIN];
        }
        let mut out = BTreeSet::new();
        for b in &self.bricks {
            for c in b.children() {
                if !self.bricks.contains(&c) && c.parents().iter().all(|p| self.bricks.contains(p))
                {
                    out.insert(c);
                }
            }
        }
        out.into_iter().collect()
    }

    fn is_maximal(&self, b: &Brick) -> bool {
        b.children().iter().all(|c| !self.bricks.contains(c))
    }

    /// Whether `b` would be the largest maximal brick after adding it.
    fn is_canonical(&self, b: &Brick) -> bool {
        let parents = b.parents();
        self.bricks
            .iter()
            .rev()
            .take_while(|m| *m > b)
            .all(|m| parents.contains(m) || !self.is_maximal(m))
    }

    fn run(&mut self) {
        (self.visit)(&self.bricks);
        if self.bricks.len() == self.max {
            return;
        }
        for b in self.addable() {
            if self.is_canonical(&b) {
                self.bricks.insert(b);
                self.run();
                self.bricks.remove(&b);
            }
        }
    }
}

/// Calls `f` on every pyramid partition with at most `n` bricks, exactly once.
pub fn for_each_pyramid(n: u32, mut f: impl FnMut(&PyramidPartition)) {
    let mut visit = |b: &BTreeSet<Brick>| {
        f(&PyramidPartition { bricks: b.clone() });
    };
    Search {
        max: n as usize,
        bricks: BTreeSet::new(),
        visit: &mut visit,
    }
    .run();
}

/// Number of pyramid partitions of each size `0..=n`.
pub fn counts_by_size(n: u32) -> Vec<u64> {
    let mut out = vec![0u64; n as usize + 1];
    for_each_pyramid(n, |p| out[p.size()] += 1);
    out
}

/// Splits the search tree into independent subtrees rooted at the partitions
/// of size `depth` (and records all smaller partitions separately).
fn frontier(n: u32, depth: usize) -> (Vec<BTreeSet<Brick>>, Vec<BTreeSet<Brick>>) {
    let mut roots = Vec::new();
    let mut shallow = Vec::new();
    let mut visit = |b: &BTreeSet<Brick>| {
        if b.len() == depth {
            roots.push(b.clone());
        } else {
            shallow.push(b.clone());
        }
    };
    Search {
        max: depth.min(n as usize),
        bricks: BTreeSet::new(),
        visit: &mut visit,
    }
    .run();
    (shallow, roots)
}

type CountMap = BTreeMap<[u32; 4], u64>;

fn record(counts: &mut CountMap, b: &BTreeSet<Brick>) {
    let mut key = [0u32; 4];
    for x in b {
        key[x.colour() as usize] += 1;
    }
    *counts.entry(key).or_insert(0) += 1;
}

/// `Σ_π ∏_g q_g^{|π|_g}` over pyramid partitions with at most `n` bricks,
/// in the variables `q0, qa, qb, qc`.
pub fn pyramid_series(n: u32) -> Series {
    pyramid_series_shard(n, 1, 0).expect("single shard is valid")
}

/// The part of [`pyramid_series`] from the search subtrees whose index is
/// `shard` modulo `shards`. Partitions below the split depth belong to shard 0.
pub fn pyramid_series_shard(n: u32, shards: usize, shard: usize) -> Result<Series, PyramidError> {
    check_shard(shards, shard)?;
    const DEPTH: usize = 4;
    let (shallow, roots) = frontier(n, DEPTH);
    let mut counts = CountMap::new();
    if shard == 0 {
        for b in &shallow {
            record(&mut counts, b);
        }
    }
    let parts: Vec<CountMap> = roots
        .into_par_iter()
        .enumerate()
        .filter(|(i, _)| i % shards == shard)
        .map(|(_, root)| {
            let mut local = CountMap::new();
            let mut visit = |b: &BTreeSet<Brick>| record(&mut local, b);
            Search {
                max: n as usize,
                bricks: root,
                visit: &mut visit,
            }
            .run();
            local
        })
        .collect();
    for part in parts {
        for (k, v) in part {
            *counts.entry(k).or_insert(0) += v;
        }
    }
    Ok(Series::from_terms(
        &GroupSpec::Klein.variables(),
        n,
        counts
            .into_iter()
            .map(|(k, v)| (k.iter().map(|&e| e as i32).collect(), BigInt::from(v))),
    )
    .expect("four colour variables"))
}

/// Brute-force oracle: grows partitions one brick at a time with deduplication.
pub fn pyramids_by_closure(n: u32) -> BTreeSet<PyramidPartition> {
    let mut all = BTreeSet::from([PyramidPartition::default()]);
    let mut layer = all.clone();
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for p in &layer {
            let mut cands = BTreeSet::from([Brick::ORIGIN]);
            for b in &p.bricks {
                cands.extend(b.children());
            }
            for c in cands {
                if p.bricks.contains(&c) {
                    continue;
                }
                let mut bricks = p.bricks.clone();
                bricks.insert(c);
                if let Ok(q) = PyramidPartition::new(bricks) {
                    next.insert(q);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Word-level model of bricks, used as an oracle for the positional one.
pub mod words {
    use std::collections::{BTreeMap, BTreeSet, VecDeque};

    use super::{Brick, V1, V2, W1, W2};
    use crate::colouring::{Element, KLEIN_A, KLEIN_B, KLEIN_C};

    #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
    pub enum Letter {
        V1,
        V2,
        W1,
        W2,
    }

    pub type Word = Vec<Letter>;

    impl Letter {
        pub fn vector(self) -> (i32, i32, i32) {
            match self {
                Letter::V1 => V1,
                Letter::V2 => V2,
                Letter::W1 => W1,
                Letter::W2 => W2,
            }
        }

        fn is_v(self) -> bool {
            matches!(self, Letter::V1 | Letter::V2)
        }
    }

    /// The quiver: from `0` and `c` only v-edges leave, from `a` and `b` only w-edges.
    pub fn step(vertex: Element, l: Letter) -> Option<Element> {
        use Letter::*;
        Some(match (vertex, l) {
            (0, V1) => KLEIN_A,
            (0, V2) => KLEIN_B,
            (KLEIN_A, W1) => 0,
            (KLEIN_A, W2) => KLEIN_C,
            (KLEIN_B, W1) => KLEIN_C,
            (KLEIN_B, W2) => 0,
            (KLEIN_C, V1) => KLEIN_B,
            (KLEIN_C, V2) => KLEIN_A,
            _ => return None,
        })
    }

    /// End vertex of the path with this word based at `0`.
    pub fn end_vertex(w: &[Letter]) -> Option<Element> {
        w.iter().try_fold(0, |v, &l| step(v, l))
    }

    pub fn position(w: &[Letter]) -> Brick {
        let mut b = Brick::ORIGIN;
        for l in w {
            b = b.shift(l.vector(), 1);
        }
        b
    }

    /// All words based at `0` of length at most `n`.
    pub fn all_words(n: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        let mut frontier = vec![(Vec::new(), 0)];
        for _ in 0..n {
            let mut next = Vec::new();
            for (w, v) in frontier {
                for l in [Letter::V1, Letter::V2, Letter::W1, Letter::W2] {
                    if let Some(u) = step(v, l) {
                        let mut nw: Word = w.clone();
                        nw.push(l);
                        out.push(nw.clone());
                        next.push((nw, u));
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// Words reachable by applying `x₁ y x₂ ↔ x₂ y x₁` to any three consecutive
    /// letters, where `x₁ ≠ x₂` are both v-letters or both w-letters.
    pub fn relation_class(w: &[Letter]) -> BTreeSet<Word> {
        let mut seen = BTreeSet::from([w.to_vec()]);
        let mut queue = VecDeque::from([w.to_vec()]);
        while let Some(u) = queue.pop_front() {
            for i in 0..u.len().saturating_sub(2) {
                let (a, b) = (u[i], u[i + 2]);
                if a != b && a.is_v() == b.is_v() && u[i + 1].is_v() != a.is_v() {
                    let mut t = u.clone();
                    t.swap(i, i + 2);
                    if seen.insert(t.clone()) {
                        queue.push_back(t);
                    }
                }
            }
        }
        seen
    }

    /// Residue classes of all words of length at most `n`, keyed by a representative.
    pub fn classes(n: usize) -> Vec<BTreeSet<Word>> {
        let mut done: BTreeSet<Word> = BTreeSet::new();
        let mut out = Vec::new();
        for w in all_words(n) {
            if done.contains(&w) {
                continue;
            }
            let c = relation_class(&w);
            done.extend(c.iter().cloned());
            out.push(c);
        }
        out
    }

    /// For each brick, the bricks of every prefix of every representative word.
    pub fn prefix_bricks(n: usize) -> BTreeMap<Brick, BTreeSet<Brick>> {
        let mut out: BTreeMap<Brick, BTreeSet<Brick>> = BTreeMap::new();
        for w in all_words(n) {
            let entry = out.entry(position(&w)).or_default();
            for i in 0..w.len() {
                entry.insert(position(&w[..i]));
            }
        }
        out
    }
}
