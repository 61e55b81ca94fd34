//! Exact multivariate power series truncated by total degree.
//!
//! Every generating function in this crate lives here: a [`Series`] is a
//! finite map from exponent vectors to arbitrary-precision integers, together
//! with a truncation bound `N` on the total degree. Exponents are stored in
//! half-units so that operator arguments such as `x * sqrt(q_g q_h)` can be
//! carried through intermediate computations; series that leave a module are
//! always integral.
//!
//! Terms are kept in canonical order (total degree, then lexicographic
//! exponent vector), which fixes the serialization order.

use std::{
    collections::BTreeMap,
    fmt,
    ops::{Add, Mul, Neg, Sub},
    sync::Arc,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// Coefficient ring of every series.
pub type Coeff = BigInt;

pub(crate) type Halves = SmallVec<[i32; 8]>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("variable sets differ: {left:?} vs {right:?}")]
    VariableMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("duplicate variable name {0:?}")]
    DuplicateVariable(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("constant term {0} is not a unit")]
    NonUnit(BigInt),
    #[error("monomial {0} has a negative exponent")]
    NegativeExponent(String),
    #[error("factor (1 - {0}) is not invertible: the monomial has degree zero")]
    DegenerateFactor(String),
    #[error("q-argument {0} must have positive degree")]
    NonPositiveDegree(String),
    #[error("{x} does not divide {q}")]
    NotDivisor { x: String, q: String },
    #[error("half-integer exponent in {0}")]
    HalfInteger(String),
    #[error("monomial has {got} exponents, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("malformed series: {0}")]
    Malformed(String),
}

pub type Result<T, E = SeriesError> = std::result::Result<T, E>;

/// Ordered, duplicate-free list of variable names.
#[derive(Clone, Debug, Eq)]
pub struct VariableSet(Arc<[String]>);

impl std::hash::Hash for VariableSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl PartialEq for VariableSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl VariableSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(SeriesError::DuplicateVariable(n.clone()));
            }
        }
        Ok(VariableSet(names.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// The monomial consisting of the single variable `name`.
    pub fn var(&self, name: &str) -> Result<Monomial> {
        let i = self
            .index_of(name)
            .ok_or_else(|| SeriesError::UnknownVariable(name.to_string()))?;
        Ok(Monomial::var_index(self.len(), i))
    }

    /// Product of the named variables (repetition allowed).
    pub fn product(&self, names: &[&str]) -> Result<Monomial> {
        names
            .iter()
            .try_fold(Monomial::one(self.len()), |acc, n| Ok(acc.mul(&self.var(n)?)))
    }

    /// Product of all variables.
    pub fn all(&self) -> Monomial {
        Monomial::from_halves(false, std::iter::repeat_n(2, self.len()))
    }

    fn check_same(&self, other: &VariableSet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(SeriesError::VariableMismatch {
                left: self.0.to_vec(),
                right: other.0.to_vec(),
            })
        }
    }
}

/// A signed monomial `±∏ v_i^{e_i}` with exponents in half-units.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    negative: bool,
    halves: Halves,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            negative: false,
            halves: SmallVec::from_elem(0, nvars),
        }
    }

    pub fn var_index(nvars: usize, i: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.halves[i] = 2;
        m
    }

    /// Builds a monomial from integer exponents.
    pub fn from_exponents(negative: bool, exps: &[i32]) -> Self {
        Monomial {
            negative,
            halves: exps.iter().map(|e| 2 * e).collect(),
        }
    }

    pub fn from_halves(negative: bool, halves: impl IntoIterator<Item = i32>) -> Self {
        Monomial {
            negative,
            halves: halves.into_iter().collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.halves.len()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn halves(&self) -> &[i32] {
        &self.halves
    }

    /// Total degree in half-units.
    pub fn degree_halves(&self) -> i32 {
        self.halves.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.halves.iter().all(|&h| h >= 0)
    }

    pub fn is_integral(&self) -> bool {
        self.halves.iter().all(|h| h % 2 == 0)
    }

    pub fn is_unit_exponent(&self) -> bool {
        self.halves.iter().all(|&h| h == 0)
    }

    pub fn neg(&self) -> Self {
        Monomial {
            negative: !self.negative,
            halves: self.halves.clone(),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Self {
        assert_eq!(self.nvars(), other.nvars(), "monomial arity mismatch");
        Monomial {
            negative: self.negative ^ other.negative,
            halves: self
                .halves
                .iter()
                .zip(&other.halves)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        Monomial {
            negative: self.negative && k % 2 == 1,
            halves: self.halves.iter().map(|h| h * k as i32).collect(),
        }
    }

    /// `1/m`; the sign is its own inverse.
    pub fn inverse(&self) -> Self {
        Monomial {
            negative: self.negative,
            halves: self.halves.iter().map(|h| -h).collect(),
        }
    }

    pub fn div(&self, other: &Monomial) -> Self {
        self.mul(&other.inverse())
    }

    /// Componentwise divisibility of the exponent parts, with `self` non-negative.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.is_nonnegative() && self.halves.iter().zip(&other.halves).all(|(a, b)| a <= b)
    }

    /// Square root of a positive monomial whose half-unit exponents are all even.
    pub fn sqrt(&self) -> Option<Self> {
        if self.negative || self.halves.iter().any(|h| h % 2 != 0) {
            return None;
        }
        Some(Monomial {
            negative: false,
            halves: self.halves.iter().map(|h| h / 2).collect(),
        })
    }

    pub fn display<'a>(&'a self, vars: &'a VariableSet) -> impl fmt::Display + 'a {
        MonomialDisplay { m: self, vars }
    }
}

struct MonomialDisplay<'a> {
    m: &'a Monomial,
    vars: &'a VariableSet,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.negative {
            write!(f, "-")?;
        }
        let mut first = true;
        for (name, &h) in self.vars.names().iter().zip(&self.m.halves) {
            if h == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            match h {
                2 => write!(f, "{name}")?,
                h if h % 2 == 0 => write!(f, "{name}^{}", h / 2)?,
                h => write!(f, "{name}^({h}/2)")?,
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Canonical term key: total degree first, then the exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Key {
    deg: i32,
    halves: Halves,
}

impl Key {
    fn unit(nvars: usize) -> Self {
        Key {
            deg: 0,
            halves: SmallVec::from_elem(0, nvars),
        }
    }

    fn shifted(&self, m: &Monomial, times: i32) -> Key {
        Key {
            deg: self.deg + times * m.degree_halves(),
            halves: self
                .halves
                .iter()
                .zip(&m.halves)
                .map(|(a, b)| a + times * b)
                .collect(),
        }
    }

    fn combined(&self, other: &Key) -> Key {
        Key {
            deg: self.deg + other.deg,
            halves: self
                .halves
                .iter()
                .zip(&other.halves)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// A power series in the variables of a [`VariableSet`], truncated at total
/// degree `N` (all terms of degree `> N` are discarded).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    vars: VariableSet,
    /// Truncation bound in half-units.
    trunc: i32,
    terms: BTreeMap<Key, Coeff>,
}

impl Series {
    pub fn zero(vars: &VariableSet, trunc: u32) -> Self {
        Series {
            vars: vars.clone(),
            trunc: 2 * trunc as i32,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &VariableSet, trunc: u32) -> Self {
        let mut s = Series::zero(vars, trunc);
        s.terms.insert(Key::unit(vars.len()), Coeff::one());
        s
    }

    /// `c * m` for a signed monomial `m` with non-negative exponents.
    pub fn monomial(vars: &VariableSet, m: &Monomial, trunc: u32) -> Result<Self> {
        if m.nvars() != vars.len() {
            return Err(SeriesError::Arity {
                expected: vars.len(),
                got: m.nvars(),
            });
        }
        if !m.is_nonnegative() {
            return Err(SeriesError::NegativeExponent(m.display(vars).to_string()));
        }
        let mut s = Series::zero(vars, trunc);
        let key = Key::unit(vars.len()).shifted(m, 1);
        if key.deg <= s.trunc {
            s.terms.insert(key, if m.negative { -Coeff::one() } else { Coeff::one() });
        }
        Ok(s)
    }

    /// Builds a series from integer exponent vectors; zero coefficients are dropped
    /// and terms above the truncation are discarded.
    pub fn from_terms<I>(vars: &VariableSet, trunc: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, Coeff)>,
    {
        let mut s = Series::zero(vars, trunc);
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(SeriesError::Arity {
                    expected: vars.len(),
                    got: exps.len(),
                });
            }
            if exps.iter().any(|&e| e < 0) {
                return Err(SeriesError::Malformed(format!(
                    "negative exponent in {exps:?}"
                )));
            }
            let halves: Halves = exps.iter().map(|e| 2 * e).collect();
            let key = Key {
                deg: halves.iter().sum(),
                halves,
            };
            s.add_to(key, c);
        }
        Ok(s)
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    /// Truncation degree `N`.
    pub fn trunc(&self) -> u32 {
        (self.trunc / 2) as u32
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(k, c)| k.deg == 0 && c.is_one())
    }

    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(|k| k.halves.iter().all(|h| h % 2 == 0))
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms
            .get(&Key::unit(self.vars.len()))
            .cloned()
            .unwrap_or_default()
    }

    /// Coefficient of the monomial with the given integer exponents.
    pub fn coeff(&self, exps: &[i32]) -> Coeff {
        let halves: Halves = exps.iter().map(|e| 2 * e).collect();
        let key = Key {
            deg: halves.iter().sum(),
            halves,
        };
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Coefficient of the exponent part of `m` (its sign is ignored).
    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        let key = Key::unit(self.vars.len()).shifted(m, 1);
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Terms in canonical order as integer exponent vectors.
    ///
    /// Panics if the series carries half-integer exponents; those never leave
    /// the operator engine.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<i32>, &Coeff)> + '_ {
        self.terms.iter().map(|(k, c)| {
            let exps = k
                .halves
                .iter()
                .map(|h| {
                    assert!(h % 2 == 0, "half-integer exponent at a module boundary");
                    h / 2
                })
                .collect();
            (exps, c)
        })
    }

    /// Terms with their raw half-unit exponents.
    pub fn raw_terms(&self) -> impl Iterator<Item = (&[i32], &Coeff)> + '_ {
        self.terms.iter().map(|(k, c)| (&k.halves[..], c))
    }

    /// Lowest total degree present, in half-units.
    pub(crate) fn min_degree_halves(&self) -> Option<i32> {
        self.terms.keys().next().map(|k| k.deg)
    }

    fn add_to(&mut self, key: Key, c: Coeff) {
        if key.deg > self.trunc || c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-truncates at a lower (or equal) degree.
    pub fn truncate(&self, trunc: u32) -> Series {
        let t = (2 * trunc as i32).min(self.trunc);
        Series {
            vars: self.vars.clone(),
            trunc: t,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.deg <= t)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Series) -> Result<Series> {
        self.vars.check_same(&other.vars)?;
        let mut out = self.truncate_halves(self.trunc.min(other.trunc));
        for (k, c) in &other.terms {
            out.add_to(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Series) -> Result<Series> {
        self.try_add(&-other)
    }

    fn truncate_halves(&self, t: i32) -> Series {
        Series {
            vars: self.vars.clone(),
            trunc: t,
            terms: self
                .terms
                .range(..=Key {
                    deg: t,
                    halves: SmallVec::from_elem(i32::MAX, self.vars.len()),
                })
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Truncated product. The result is truncated at the smaller of the two bounds.
    pub fn try_mul(&self, other: &Series) -> Result<Series> {
        self.vars.check_same(&other.vars)?;
        let t = self.trunc.min(other.trunc);
        let mut acc: BTreeMap<Key, Coeff> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            if ka.deg > t {
                break;
            }
            for (kb, cb) in &other.terms {
                if ka.deg + kb.deg > t {
                    break;
                }
                let c = ca * cb;
                *acc.entry(ka.combined(kb)).or_default() += c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Series {
            vars: self.vars.clone(),
            trunc: t,
            terms: acc,
        })
    }

    /// Multiplies by a signed monomial (exponents may be half-integers but the
    /// product must stay non-negative).
    pub fn mul_monomial(&self, m: &Monomial) -> Series {
        let mut out = Series {
            vars: self.vars.clone(),
            trunc: self.trunc,
            terms: BTreeMap::new(),
        };
        out.add_scaled(self, m);
        out
    }

    /// `self += m * other`, dropping terms beyond the truncation of `self`.
    pub(crate) fn add_scaled(&mut self, other: &Series, m: &Monomial) {
        self.add_scaled_upto(other, m, self.trunc);
    }

    /// [`Series::add_scaled`] keeping only terms of degree at most `limit` half-units.
    pub(crate) fn add_scaled_upto(&mut self, other: &Series, m: &Monomial, limit: i32) {
        debug_assert_eq!(self.vars, other.vars);
        let limit = limit.min(self.trunc);
        let shift = m.degree_halves();
        for (k, c) in &other.terms {
            if k.deg + shift > limit {
                break;
            }
            let key = k.shifted(m, 1);
            debug_assert!(
                key.halves.iter().all(|&h| h >= 0),
                "negative exponent produced"
            );
            if m.negative {
                self.add_to(key, -c);
            } else {
                self.add_to(key, c.clone());
            }
        }
    }

    /// `self += other`, keeping the truncation of `self`.
    pub fn add_assign(&mut self, other: &Series) -> Result<()> {
        self.vars.check_same(&other.vars)?;
        for (k, c) in &other.terms {
            self.add_to(k.clone(), c.clone());
        }
        Ok(())
    }

    /// Multiplies in place by `(1 - m)`.
    pub fn mul_one_minus(&mut self, m: &Monomial) {
        let delta = self.mul_monomial(&m.neg());
        for (k, c) in delta.terms {
            self.add_to(k, c);
        }
    }

    /// Multiplies in place by `(1 - m)^{-1}`; `m` must have positive degree.
    pub fn div_one_minus(&mut self, m: &Monomial) -> Result<()> {
        let step = m.degree_halves();
        if step <= 0 {
            return Err(SeriesError::DegenerateFactor(m.display(&self.vars).to_string()));
        }
        if !m.is_nonnegative() {
            return Err(SeriesError::NegativeExponent(m.display(&self.vars).to_string()));
        }
        let old = std::mem::take(&mut self.terms);
        for (k, c) in old {
            let mut j = 0;
            while k.deg + j * step <= self.trunc {
                let c = if m.negative && j % 2 == 1 { -&c } else { c.clone() };
                self.add_to(k.shifted(m, j), c);
                j += 1;
            }
        }
        Ok(())
    }

    /// Multiplicative inverse of a series whose constant term is `±1`.
    pub fn invert_unit(&self) -> Result<Series> {
        let c0 = self.constant_term();
        if !(c0.is_one() || (-&c0).is_one()) {
            return Err(SeriesError::NonUnit(c0));
        }
        // Group the non-constant part by degree; b_d = -c0 * Σ_{k≥1} a_k b_{d-k}.
        let mut by_deg: BTreeMap<i32, Vec<(&Key, &Coeff)>> = BTreeMap::new();
        for (k, c) in &self.terms {
            if k.deg > 0 {
                by_deg.entry(k.deg).or_default().push((k, c));
            }
        }
        let mut inv: BTreeMap<i32, BTreeMap<Key, Coeff>> = BTreeMap::new();
        inv.entry(0)
            .or_default()
            .insert(Key::unit(self.vars.len()), c0.clone());
        let degrees: Vec<i32> = {
            // Every reachable degree is a sum of degrees present in `self`.
            let mut reach = vec![false; self.trunc.max(0) as usize + 1];
            reach[0] = true;
            for d in 1..=self.trunc {
                reach[d as usize] = by_deg
                    .keys()
                    .any(|&k| k <= d && reach[(d - k) as usize]);
            }
            (1..=self.trunc).filter(|&d| reach[d as usize]).collect()
        };
        for d in degrees {
            let mut bucket: BTreeMap<Key, Coeff> = BTreeMap::new();
            for (&ka, terms_a) in by_deg.range(1..=d) {
                let Some(prev) = inv.get(&(d - ka)) else {
                    continue;
                };
                for (kb, cb) in prev {
                    for (k, ca) in terms_a {
                        *bucket.entry(k.combined(kb)).or_default() -= *ca * cb;
                    }
                }
            }
            if !c0.is_one() {
                for c in bucket.values_mut() {
                    *c = -&*c;
                }
            }
            bucket.retain(|_, c| !c.is_zero());
            if !bucket.is_empty() {
                inv.insert(d, bucket);
            }
        }
        Ok(Series {
            vars: self.vars.clone(),
            trunc: self.trunc,
            terms: inv.into_values().flatten().collect(),
        })
    }

    /// Multiplies each coefficient by `(-1)^{sum of exponents of the flipped variables}`.
    pub fn substitute_signs(&self, flips: &[usize]) -> Series {
        let mut out = self.clone();
        for (k, c) in out.terms.iter_mut() {
            let parity: i32 = flips.iter().map(|&i| k.halves[i] / 2).sum();
            if parity % 2 != 0 {
                *c = -&*c;
            }
        }
        out
    }

    /// [`Series::substitute_signs`] with variables given by name.
    pub fn substitute_signs_named(&self, flips: &[&str]) -> Result<Series> {
        let idx = flips
            .iter()
            .map(|n| {
                self.vars
                    .index_of(n)
                    .ok_or_else(|| SeriesError::UnknownVariable(n.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.substitute_signs(&idx))
    }

    /// Raises to a non-negative power.
    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::one(&self.vars, self.trunc());
        acc.trunc = self.trunc;
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// First monomial (in canonical order) where the two series disagree,
    /// with the left and right coefficients. Compared up to the smaller truncation.
    pub fn first_difference(&self, other: &Series) -> Option<(Vec<i32>, Coeff, Coeff)> {
        let t = self.trunc.min(other.trunc);
        let mut keys: Vec<&Key> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|k| k.deg <= t)
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|k| {
            let a = self.terms.get(k).cloned().unwrap_or_default();
            let b = other.terms.get(k).cloned().unwrap_or_default();
            (a != b).then(|| (k.halves.iter().map(|h| h / 2).collect(), a, b))
        })
    }

    /// Equality of the two series up to the smaller truncation.
    pub fn agrees_with(&self, other: &Series) -> bool {
        self.vars == other.vars && self.first_difference(other).is_none()
    }

    /// Coefficients of a one-variable view: sum of all coefficients by total degree.
    pub fn degree_totals(&self) -> Vec<Coeff> {
        let mut out = vec![Coeff::zero(); self.trunc() as usize + 1];
        for (k, c) in &self.terms {
            if k.deg % 2 == 0 {
                out[(k.deg / 2) as usize] += c;
            }
        }
        out
    }

    pub fn to_json_value(&self) -> Result<SeriesJson> {
        if !self.is_integral() {
            return Err(SeriesError::HalfInteger(self.to_string()));
        }
        Ok(SeriesJson {
            vars: self.vars.names().to_vec(),
            trunc: self.trunc(),
            terms: self
                .terms()
                .map(|(exp, c)| TermJson {
                    exp: exp.into_iter().map(|e| e as u32).collect(),
                    coef: c.to_string(),
                })
                .collect(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let v = self.to_json_value()?;
        serde_json::to_string_pretty(&v).map_err(|e| SeriesError::Malformed(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Series> {
        let v: SeriesJson =
            serde_json::from_str(text).map_err(|e| SeriesError::Malformed(e.to_string()))?;
        Series::from_json_value(v)
    }

    pub fn from_json_value(v: SeriesJson) -> Result<Series> {
        let vars = VariableSet::new(v.vars)?;
        let terms = v
            .terms
            .into_iter()
            .map(|t| {
                let c: Coeff = t
                    .coef
                    .parse()
                    .map_err(|_| SeriesError::Malformed(format!("bad coefficient {:?}", t.coef)))?;
                Ok((t.exp.into_iter().map(|e| e as i32).collect(), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Series::from_terms(&vars, v.trunc, terms)
    }

    /// CSV table: `degree,exponent_<var>...,coefficient`, one row per term.
    pub fn to_csv(&self) -> Result<String> {
        if !self.is_integral() {
            return Err(SeriesError::HalfInteger(self.to_string()));
        }
        let mut out = String::from("degree");
        for n in self.vars.names() {
            out.push_str(",exponent_");
            out.push_str(n);
        }
        out.push_str(",coefficient\n");
        for (exp, c) in self.terms() {
            let deg: i32 = exp.iter().sum();
            out.push_str(&deg.to_string());
            for e in exp {
                out.push(',');
                out.push_str(&e.to_string());
            }
            out.push(',');
            out.push_str(&c.to_string());
            out.push('\n');
        }
        Ok(out)
    }
}

/// Wire form of a [`Series`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub vars: Vec<String>,
    pub trunc: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: String,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let m = Monomial {
                negative: false,
                halves: k.halves.clone(),
            };
            let sign = if c.is_negative() { " - " } else { " + " };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{sign}")?;
            }
            let a = c.abs();
            if k.deg == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", m.display(&self.vars))?;
            } else {
                write!(f, "{a}*{}", m.display(&self.vars))?;
            }
        }
        write!(f, " + O(deg {})", self.trunc())
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &'a Series) -> Series {
        self.try_add(rhs).expect("series variable sets differ")
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &'a Series) -> Series {
        self.try_sub(rhs).expect("series variable sets differ")
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, rhs: &'a Series) -> Series {
        self.try_mul(rhs).expect("series variable sets differ")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }
}

/// `M(x, q) = ∏_{n≥1} (1 - x q^n)^{-n}`, truncated at degree `trunc`.
///
/// Every factor `x q^n` of degree `≤ trunc` must have non-negative exponents
/// and positive degree.
pub fn mac_m(vars: &VariableSet, x: &Monomial, q: &Monomial, trunc: u32) -> Result<Series> {
    let mut s = Series::one(vars, trunc);
    for factor in mac_factors(vars, x, q, trunc)? {
        for _ in 0..factor.1 {
            s.div_one_minus(&factor.0)?;
        }
    }
    Ok(s)
}

/// The monomials `x q^n` (with multiplicity `n`) needed for `M(x, q)` below degree `trunc`.
pub(crate) fn mac_factors(
    vars: &VariableSet,
    x: &Monomial,
    q: &Monomial,
    trunc: u32,
) -> Result<Vec<(Monomial, u32)>> {
    if q.degree_halves() <= 0 {
        return Err(SeriesError::NonPositiveDegree(q.display(vars).to_string()));
    }
    let mut out = Vec::new();
    for n in 1u32.. {
        let f = x.mul(&q.pow(n));
        if f.degree_halves() > 2 * trunc as i32 {
            break;
        }
        if !f.is_nonnegative() {
            return Err(SeriesError::NegativeExponent(f.display(vars).to_string()));
        }
        if f.degree_halves() == 0 {
            return Err(SeriesError::DegenerateFactor(f.display(vars).to_string()));
        }
        out.push((f, n));
    }
    Ok(out)
}

/// `M̃(x, q) = M(x, q) M(x^{-1}, q)`; requires `x` to divide `q`.
pub fn mac_mtilde(vars: &VariableSet, x: &Monomial, q: &Monomial, trunc: u32) -> Result<Series> {
    if !x.divides(q) {
        return Err(SeriesError::NotDivisor {
            x: x.display(vars).to_string(),
            q: q.display(vars).to_string(),
        });
    }
    let a = mac_m(vars, x, q, trunc)?;
    let b = mac_m(vars, &x.inverse(), q, trunc)?;
    a.try_mul(&b)
}
