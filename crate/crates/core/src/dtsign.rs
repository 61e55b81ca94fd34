//! Fixed-point signs for orbifold DT counts.
//!
//! For a 3D diagram `π` with box character `Q_π = Σ t1^i t2^j t3^k`, the
//! virtual character `V_π = Q + Q Q̄ (1-t1)(1-t2)/(t1 t2)` (with
//! `t3 = 1/(t1 t2)`) has a `G`-invariant part whose dimension has the parity
//! of the invariant tangent space. The sign of `π` is `(-1)` to that parity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::{
    colouring::{Element, GroupAction, GroupSpec},
    enum3d::{self, Diagram},
    series::{Coeff, Series},
};

/// Box character before eliminating `t3`: exponent triple to multiplicity.
pub type TriChar = BTreeMap<(i64, i64, i64), BigInt>;

/// `Σ_{(i,j,k) ∈ π} t1^i t2^j t3^k`.
pub fn q_char(d: &Diagram) -> TriChar {
    let mut out = TriChar::new();
    for &(i, j, k) in d.boxes() {
        *out.entry((i as i64, j as i64, k as i64)).or_default() += 1;
    }
    out
}

/// A Laurent polynomial in `t1, t2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentChar(BTreeMap<(i64, i64), BigInt>);

impl LaurentChar {
    pub fn zero() -> Self {
        LaurentChar::default()
    }

    pub fn monomial(e1: i64, e2: i64, c: impl Into<BigInt>) -> Self {
        let mut out = LaurentChar::zero();
        out.add_term((e1, e2), c.into());
        out
    }

    /// Substitutes `t3 = t1^{-1} t2^{-1}`.
    pub fn from_tri(q: &TriChar) -> Self {
        let mut out = LaurentChar::zero();
        for (&(i, j, k), c) in q {
            out.add_term((i - k, j - k), c.clone());
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64), BigInt> {
        &self.0
    }

    pub fn coeff(&self, e1: i64, e2: i64) -> BigInt {
        self.0.get(&(e1, e2)).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, e: (i64, i64), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, other: &LaurentChar) -> LaurentChar {
        let mut out = self.clone();
        for (&e, c) in &other.0 {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentChar) -> LaurentChar {
        let mut out = self.clone();
        for (&e, c) in &other.0 {
            out.add_term(e, -c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentChar) -> LaurentChar {
        let mut out = LaurentChar::zero();
        for (&(a1, a2), ca) in &self.0 {
            for (&(b1, b2), cb) in &other.0 {
                out.add_term((a1 + b1, a2 + b2), ca * cb);
            }
        }
        out
    }

    /// `t ↦ t^{-1}`.
    pub fn dual(&self) -> LaurentChar {
        LaurentChar(self.0.iter().map(|(&(a, b), c)| ((-a, -b), c.clone())).collect())
    }

    /// Image in the mod-2 representation ring of the group action.
    pub fn restrict(&self, action: GroupAction) -> ModTwoGroupRing {
        let g = action.group();
        let mut out = ModTwoGroupRing::zero(g);
        for (&(e1, e2), c) in &self.0 {
            if c.is_odd() {
                out.flip(restrict_weight(action, e1, e2));
            }
        }
        out
    }
}

/// Character of `t1^{e1} t2^{e2}` restricted to the group.
///
/// `Z_n` acts by `(ω, ω^{-1}, 1)`, Klein by the sign characters `(α, β)`,
/// and the diagonal `Z_3` by `(ω, ω, ω)`.
pub fn restrict_weight(action: GroupAction, e1: i64, e2: i64) -> Element {
    match action {
        GroupAction::Cyclic(n) => (e1 - e2).rem_euclid(n as i64) as Element,
        GroupAction::Klein => (e1.rem_euclid(2) | (e2.rem_euclid(2) << 1)) as Element,
        GroupAction::Z3Diagonal => (e1 + e2).rem_euclid(3) as Element,
    }
}

/// `(1 - t1)(1 - t2) t1^{-1} t2^{-1}`.
fn tangent_factor() -> LaurentChar {
    let one_minus = |e1, e2| LaurentChar::monomial(0, 0, 1).sub(&LaurentChar::monomial(e1, e2, 1));
    one_minus(1, 0)
        .mul(&one_minus(0, 1))
        .mul(&LaurentChar::monomial(-1, -1, 1))
}

/// `V_π = Q + Q Q̄ (1-t1)(1-t2) t1^{-1} t2^{-1}` with `t3` eliminated.
pub fn v_char(d: &Diagram) -> LaurentChar {
    let q = LaurentChar::from_tri(&q_char(d));
    q.add(&q.mul(&q.dual()).mul(&tangent_factor()))
}

/// `Z/2` coefficients on the elements of a finite abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModTwoGroupRing {
    group: GroupSpec,
    bits: Vec<bool>,
}

impl ModTwoGroupRing {
    pub fn zero(group: GroupSpec) -> Self {
        ModTwoGroupRing {
            group,
            bits: vec![false; group.order() as usize],
        }
    }

    pub fn from_bits(group: GroupSpec, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), group.order() as usize);
        ModTwoGroupRing { group, bits }
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn coeff(&self, g: Element) -> bool {
        self.bits[g as usize]
    }

    /// Coefficient of the trivial character.
    pub fn trivial(&self) -> bool {
        self.bits[0]
    }

    fn flip(&mut self, g: Element) {
        self.bits[g as usize] ^= true;
    }

    pub fn add(&self, other: &Self) -> Self {
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect();
        ModTwoGroupRing { group: self.group, bits }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = ModTwoGroupRing::zero(self.group);
        for g in self.group.elements().filter(|&g| self.coeff(g)) {
            for h in self.group.elements().filter(|&h| other.coeff(h)) {
                out.flip(self.group.add(g, h));
            }
        }
        out
    }

    /// `x²`. For Klein every element squares to 1 and cross terms cancel in
    /// pairs, so only the parity of the number of terms survives.
    pub fn square(&self) -> Self {
        match self.group {
            GroupSpec::Klein => {
                let mut out = ModTwoGroupRing::zero(self.group);
                out.bits[0] = self.bits.iter().filter(|&&b| b).count() % 2 == 1;
                out
            }
            GroupSpec::Cyclic(_) => self.mul(self),
        }
    }
}

/// Parity of the `G`-invariant part of `V_π`.
pub fn invariant_parity(d: &Diagram, action: GroupAction) -> u8 {
    u8::from(v_char(d).restrict(action).trivial())
}

/// The same parity computed in the representation ring, where for Klein
/// `Q Q̄ = Q²` lets the squaring shortcut replace the product.
pub fn invariant_parity_ring(d: &Diagram, action: GroupAction) -> u8 {
    let q = LaurentChar::from_tri(&q_char(d));
    let rq = q.restrict(action);
    let qq = match action {
        GroupAction::Klein => rq.square(),
        _ => rq.mul(&q.dual().restrict(action)),
    };
    let v = rq.add(&qq.mul(&tangent_factor().restrict(action)));
    u8::from(v.trivial())
}

/// Sign from colour counts: `(-1)^{|π|_0}` for `Z_n`, `(-1)^{|π|_a+|π|_b+|π|_c}`
/// for Klein and `(-1)^σ` with `σ = |π|_1 + |π|_2 + |π|_0|π|_1 + |π|_0|π|_2 + |π|_1|π|_2`
/// for the diagonal `Z_3`.
pub fn sign_closed_form(d: &Diagram, action: GroupAction) -> i32 {
    let n = d.colour_counts(&action.colouring());
    let e: u64 = match action {
        GroupAction::Cyclic(_) => n[0] as u64,
        GroupAction::Klein => (n[1] + n[2] + n[3]) as u64,
        GroupAction::Z3Diagonal => {
            let (a, b, c) = (n[0] as u64, n[1] as u64, n[2] as u64);
            b + c + a * b + a * c + b * c
        }
    };
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `Σ_{|π| ≤ trunc} (-1)^{parity(π)} ∏ q_g^{|π|_g}`.
pub fn dt_signed_series(action: GroupAction, trunc: u32) -> Series {
    let colouring = action.colouring();
    let vars = colouring.group.variables();
    let mut diagrams = Vec::new();
    enum3d::for_each_diagram(trunc, |d| diagrams.push(d.clone()));
    let terms: Vec<(Vec<i32>, Coeff)> = diagrams
        .par_iter()
        .map(|d| {
            let exps = d.colour_counts(&colouring).iter().map(|&c| c as i32).collect();
            let c = if invariant_parity(d, action) == 1 {
                -Coeff::one()
            } else {
                Coeff::one()
            };
            (exps, c)
        })
        .collect();
    Series::from_terms(&vars, trunc, terms).expect("exponents match the variables")
}
