//! Vertex operators on formal sums of partitions.
//!
//! A [`FockState`] is a finite map `λ ↦ f_λ` with series amplitudes. Operators
//! are plain data ([`Op`]) and an operator string is applied right to left, so
//! `[A, B, C]` acting on `v` means `A(B(C v))`.
//!
//! `Γ±` and `Γ'±` act through interlacing (horizontal and vertical strips);
//! `E±(x)` is produced as `Γ±(x) Γ±(-x)`, which has only even powers of `x`.
//! The exponential forms are kept in [`exp_oracle`] as an independent check.

pub mod exp_oracle;
pub mod identities;
pub mod transfer;

use std::{collections::BTreeMap, fmt};

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::{
    series::{Coeff, Monomial, Series, SeriesError, VariableSet},
    young::Partition,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FockError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("creation operator with a degree-zero argument needs a size cap")]
    Unbounded,
    #[error("operator argument {0} has a negative exponent")]
    NegativeArgument(String),
    #[error("alpha_0 is not a creation or annihilation operator")]
    AlphaZero,
}

pub type Result<T, E = FockError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Annihilation: removes cells.
    Plus,
    /// Creation: adds cells.
    Minus,
}

/// One operator of an operator string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    /// `α_n`; negative `n` adds border strips, positive `n` removes them.
    Alpha(i32),
    /// `Γ±(x)` (or `Γ'±(x)` when primed).
    Gamma {
        side: Side,
        primed: bool,
        arg: Monomial,
    },
    /// `E±(x) = exp Σ_k x^{2k}/k α_{±2k}`.
    E { side: Side, arg: Monomial },
    /// `|λ⟩ ↦ m^{|λ|} |λ⟩`; `Q_g` is `Weight(q_g)`.
    Weight(Monomial),
    /// `Q_{gh}`: cells with `i ≡ j (mod 2)` weigh `g`, the others `h`.
    Checkerboard(Monomial, Monomial),
}

impl Op {
    pub fn gamma(side: Side, arg: Monomial) -> Op {
        Op::Gamma {
            side,
            primed: false,
            arg,
        }
    }

    pub fn gamma_prime(side: Side, arg: Monomial) -> Op {
        Op::Gamma {
            side,
            primed: true,
            arg,
        }
    }

    pub fn e(side: Side, arg: Monomial) -> Op {
        Op::E { side, arg }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "+",
            Side::Minus => "-",
        })
    }
}

/// Number of cells `(i, j)` (0-based) of `λ` with `i ≡ j` and with `i ≢ j` (mod 2).
pub fn checkerboard_counts(lambda: &Partition) -> (u32, u32) {
    let mut even = 0;
    let mut odd = 0;
    for (i, j) in lambda.cells() {
        if (i + j) % 2 == 0 {
            even += 1;
        } else {
            odd += 1;
        }
    }
    (even, odd)
}

/// A finite formal sum `Σ f_λ λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockState {
    vars: VariableSet,
    trunc: u32,
    size_cap: Option<u32>,
    slice_mode: bool,
    amps: BTreeMap<Partition, Series>,
}

impl FockState {
    pub fn zero(vars: &VariableSet, trunc: u32) -> Self {
        FockState {
            vars: vars.clone(),
            trunc,
            size_cap: None,
            slice_mode: false,
            amps: BTreeMap::new(),
        }
    }

    /// The basis vector `|λ⟩`.
    pub fn basis(vars: &VariableSet, trunc: u32, lambda: Partition) -> Self {
        let mut s = FockState::zero(vars, trunc);
        s.amps.insert(lambda, Series::one(vars, trunc));
        s
    }

    /// The vacuum `|∅⟩`.
    pub fn vacuum(vars: &VariableSet, trunc: u32) -> Self {
        FockState::basis(vars, trunc, Partition::empty())
    }

    /// Drops every partition with more than `cap` cells.
    pub fn with_size_cap(mut self, cap: u32) -> Self {
        self.size_cap = Some(cap);
        self.amps.retain(|l, _| l.size() <= cap);
        self
    }

    /// Promises that every cell of the current partition will be weighted by
    /// at least one variable later on, which licenses pruning terms whose
    /// degree plus `|λ|` exceeds the truncation after each `Γ`.
    pub fn with_slice_mode(mut self) -> Self {
        self.slice_mode = true;
        self
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn amplitudes(&self) -> &BTreeMap<Partition, Series> {
        &self.amps
    }

    /// `⟨λ|v⟩`.
    pub fn amplitude(&self, lambda: &Partition) -> Series {
        self.amps
            .get(lambda)
            .cloned()
            .unwrap_or_else(|| Series::zero(&self.vars, self.trunc))
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    fn empty_like(&self) -> FockState {
        FockState {
            vars: self.vars.clone(),
            trunc: self.trunc,
            size_cap: self.size_cap,
            slice_mode: self.slice_mode,
            amps: BTreeMap::new(),
        }
    }

    fn insert(&mut self, lambda: Partition, s: Series) -> Result<()> {
        if s.is_zero() {
            return Ok(());
        }
        use std::collections::btree_map::Entry;
        match self.amps.entry(lambda) {
            Entry::Vacant(v) => {
                v.insert(s);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&s)?;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
        Ok(())
    }

    /// `self + other`.
    pub fn add(&self, other: &FockState) -> Result<FockState> {
        let mut out = self.clone();
        for (l, s) in &other.amps {
            out.insert(l.clone(), s.clone())?;
        }
        Ok(out)
    }

    /// `self - other`.
    pub fn sub(&self, other: &FockState) -> Result<FockState> {
        let mut out = self.clone();
        for (l, s) in &other.amps {
            out.insert(l.clone(), -s)?;
        }
        Ok(out)
    }

    /// Multiplies every amplitude by a scalar series.
    pub fn scale(&self, c: &Series) -> Result<FockState> {
        let mut out = self.empty_like();
        for (l, s) in &self.amps {
            out.insert(l.clone(), s.try_mul(c)?)?;
        }
        Ok(out)
    }

    /// First basis partition and monomial where the two states differ.
    pub fn first_difference(&self, other: &FockState) -> Option<Mismatch> {
        let mut keys: Vec<&Partition> = self.amps.keys().chain(other.amps.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|l| {
            let (a, b) = (self.amplitude(l), other.amplitude(l));
            a.first_difference(&b).map(|(exp, left, right)| Mismatch {
                basis: None,
                target: l.clone(),
                exp,
                left,
                right,
            })
        })
    }

    /// Applies an operator string right to left.
    pub fn apply_string(&self, ops: &[Op]) -> Result<FockState> {
        let mut cur = self.clone();
        for op in ops.iter().rev() {
            cur = cur.apply(op)?;
        }
        Ok(cur)
    }

    pub fn apply(&self, op: &Op) -> Result<FockState> {
        match op {
            Op::Alpha(n) => self.apply_alpha(*n),
            Op::Gamma { side, primed, arg } => self.apply_gamma(*side, *primed, arg),
            Op::E { side, arg } => self
                .apply_gamma(*side, false, &arg.neg())?
                .apply_gamma(*side, false, arg),
            Op::Weight(m) => self.apply_weight(m, m),
            Op::Checkerboard(g, h) => self.apply_weight(g, h),
        }
    }

    fn check_arg(&self, arg: &Monomial) -> Result<()> {
        if arg.nvars() != self.vars.len() {
            return Err(SeriesError::Arity {
                expected: self.vars.len(),
                got: arg.nvars(),
            }
            .into());
        }
        if !arg.is_nonnegative() {
            return Err(FockError::NegativeArgument(
                arg.display(&self.vars).to_string(),
            ));
        }
        Ok(())
    }

    pub fn apply_alpha(&self, n: i32) -> Result<FockState> {
        if n == 0 {
            return Err(FockError::AlphaZero);
        }
        let mut out = self.empty_like();
        for (mu, a) in &self.amps {
            let moves = if n < 0 {
                mu.border_strip_additions(n.unsigned_abs())
            } else {
                mu.border_strip_removals(n as u32)
            };
            for (lam, sign) in moves {
                if self.size_cap.is_some_and(|c| lam.size() > c) {
                    continue;
                }
                let s = if sign < 0 { -a } else { a.clone() };
                out.insert(lam, s)?;
            }
        }
        Ok(out)
    }

    fn apply_weight(&self, even: &Monomial, odd: &Monomial) -> Result<FockState> {
        self.check_arg(even)?;
        self.check_arg(odd)?;
        let mut out = self.empty_like();
        for (l, a) in &self.amps {
            let (e, o) = if even == odd {
                (l.size(), 0)
            } else {
                checkerboard_counts(l)
            };
            let w = even.pow(e).mul(&odd.pow(o));
            out.insert(l.clone(), a.mul_monomial(&w))?;
        }
        Ok(out)
    }

    pub fn apply_gamma(&self, side: Side, primed: bool, arg: &Monomial) -> Result<FockState> {
        self.check_arg(arg)?;
        let trunc_h = 2 * self.trunc as i32;
        let dx = arg.degree_halves();
        if side == Side::Minus && dx == 0 && self.size_cap.is_none() && !self.slice_mode {
            return Err(FockError::Unbounded);
        }
        let slice_mode = self.slice_mode;
        let cap = self.size_cap;
        let parts: Vec<Vec<(Partition, Series)>> = self
            .amps
            .par_iter()
            .map(|(mu, a)| {
                let mind = a.min_degree_halves().unwrap_or(0);
                let room = trunc_h - mind;
                let targets: Vec<Partition> = match side {
                    Side::Minus => {
                        let mut budget = if dx > 0 { room / dx } else { i32::MAX };
                        if slice_mode {
                            budget = budget.min(room / 2 - mu.size() as i32);
                        }
                        if let Some(c) = cap {
                            budget = budget.min(c as i32 - mu.size() as i32);
                        }
                        if budget < 0 {
                            return Vec::new();
                        }
                        if primed {
                            mu.add_vertical_strips(budget as u32)
                        } else {
                            mu.add_horizontal_strips(budget as u32)
                        }
                    }
                    Side::Plus => {
                        if primed {
                            mu.remove_vertical_strips()
                        } else {
                            mu.remove_horizontal_strips()
                        }
                    }
                };
                let mut out = Vec::with_capacity(targets.len());
                for lam in targets {
                    let m = lam.size().abs_diff(mu.size());
                    let limit = if slice_mode {
                        trunc_h - 2 * lam.size() as i32
                    } else {
                        trunc_h
                    };
                    if limit < mind + m as i32 * dx {
                        continue;
                    }
                    let mut s = Series::zero(a.vars(), a.trunc());
                    s.add_scaled_upto(a, &arg.pow(m), limit);
                    if !s.is_zero() {
                        out.push((lam, s));
                    }
                }
                out
            })
            .collect();
        let mut out = self.empty_like();
        for part in parts {
            for (l, s) in part {
                out.insert(l, s)?;
            }
        }
        Ok(out)
    }
}

/// Where two states (or two sides of an identity) first disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    /// Input basis vector, when the comparison ran over a basis.
    pub basis: Option<Partition>,
    pub target: Partition,
    pub exp: Vec<i32>,
    pub left: Coeff,
    pub right: Coeff,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(b) = &self.basis {
            write!(f, "on |{b}⟩: ")?;
        }
        write!(
            f,
            "component {} exponent {:?}: {} vs {}",
            self.target, self.exp, self.left, self.right
        )
    }
}

/// Checks `lhs = scalar · rhs` on every basis partition of size at most `cutoff`.
/// Variables and truncation are taken from `scalar`.
pub fn compare_on_basis(
    lhs: &[Op],
    rhs: &[Op],
    scalar: &Series,
    cutoff: u32,
) -> Result<Option<Mismatch>> {
    for lambda in Partition::all_up_to(cutoff) {
        let v = FockState::basis(scalar.vars(), scalar.trunc(), lambda.clone());
        let left = v.apply_string(lhs)?;
        let right = v.apply_string(rhs)?.scale(scalar)?;
        if let Some(mut m) = left.first_difference(&right) {
            m.basis = Some(lambda);
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// `true` iff `lhs = scalar · rhs` on all basis partitions of size at most `cutoff`.
pub fn verify_commutator(lhs: &[Op], rhs: &[Op], scalar: &Series, cutoff: u32) -> Result<bool> {
    Ok(compare_on_basis(lhs, rhs, scalar, cutoff)?.is_none())
}

/// `∏ (1 - m_i)^{-1}` over the given monomials.
pub fn inverse_one_minus_product(vars: &VariableSet, trunc: u32, ms: &[Monomial]) -> Result<Series> {
    let mut s = Series::one(vars, trunc);
    for m in ms {
        s.div_one_minus(m)?;
    }
    Ok(s)
}

/// `∏ (1 - m_i)` over the given monomials.
pub fn one_minus_product(vars: &VariableSet, trunc: u32, ms: &[Monomial]) -> Series {
    let mut s = Series::one(vars, trunc);
    for m in ms {
        s.mul_one_minus(m);
    }
    s
}

/// Integer coefficient helper for tests and reports.
pub fn coeff(n: i64) -> Coeff {
    BigInt::from(n)
}
