//! Partition functions as vacuum expectations of operator products.
//!
//! A diagram is read as its sequence of diagonal slices. The plus half of the
//! product removes slices back to `∅`, the minus half builds them up from `∅`;
//! every slice is charged by exactly one weight operator. Both halves are
//! given as repeating patterns of `(Γ, weight)` pairs in left-to-right
//! operator order. The plus half ends with the weight of the central slice,
//! and the first `Γ` of the minus half creates it.
//!
//! Only the window of slices that can be non-empty below the truncation is
//! kept, so the product is finite.

use super::{FockState, Op, Result, Side};
use crate::{
    colouring::{GroupSpec, KLEIN_A, KLEIN_B, KLEIN_C},
    series::{Monomial, Series, VariableSet},
    young::Partition,
};

/// One `(Γ, weight)` pair of a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub primed: bool,
    pub weight: Op,
}

impl Step {
    pub fn gamma(weight: Op) -> Self {
        Step {
            primed: false,
            weight,
        }
    }

    pub fn gamma_prime(weight: Op) -> Self {
        Step {
            primed: true,
            weight,
        }
    }
}

/// Builds the finite operator string: `plus` and `minus` repeated enough
/// times that every slice with index up to `trunc` on either side is covered.
pub fn operator_string(nvars: usize, trunc: u32, plus: &[Step], minus: &[Step]) -> Vec<Op> {
    let one = Monomial::one(nvars);
    let reps = |len: usize| (trunc as usize).div_ceil(len.max(1)) + 1;
    let mut ops = Vec::new();
    for (side, pattern) in [(Side::Plus, plus), (Side::Minus, minus)] {
        for _ in 0..reps(pattern.len()) {
            for s in pattern {
                ops.push(Op::Gamma {
                    side,
                    primed: s.primed,
                    arg: one.clone(),
                });
                ops.push(s.weight.clone());
            }
        }
    }
    ops
}

/// `⟨∅| plus… minus… |∅⟩` truncated at total degree `trunc`.
pub fn transfer(vars: &VariableSet, trunc: u32, plus: &[Step], minus: &[Step]) -> Result<Series> {
    let ops = operator_string(vars.len(), trunc, plus, minus);
    let out = FockState::vacuum(vars, trunc)
        .with_slice_mode()
        .apply_string(&ops)?;
    Ok(out.amplitude(&Partition::empty()))
}

fn weight(g: &GroupSpec, e: u32) -> Op {
    Op::Weight(g.var(e))
}

fn checkerboard(g: &GroupSpec, even: u32, odd: u32) -> Op {
    Op::Checkerboard(g.var(even), g.var(odd))
}

/// The `Z_n`-coloured generating function of 3D diagrams.
pub fn transfer_zn(n: u32, trunc: u32) -> Result<Series> {
    let g = GroupSpec::Cyclic(n);
    let pattern: Vec<Step> = (1..=n).map(|i| Step::gamma(weight(&g, i % n))).collect();
    transfer(&g.variables(), trunc, &pattern, &pattern)
}

/// Pyramid partitions sliced by `x - z`: alternating `Γ` and `Γ'` with
/// monochrome slices.
pub fn transfer_pyramid(trunc: u32) -> Result<Series> {
    let g = GroupSpec::Klein;
    let pattern = [
        Step::gamma(weight(&g, KLEIN_B)),
        Step::gamma_prime(weight(&g, KLEIN_C)),
        Step::gamma(weight(&g, KLEIN_A)),
        Step::gamma_prime(weight(&g, 0)),
    ];
    transfer(&g.variables(), trunc, &pattern, &pattern)
}

/// Pyramid partitions sliced with two-coloured (checkerboard) slices.
pub fn transfer_pyramid_checkerboard(trunc: u32) -> Result<Series> {
    let g = GroupSpec::Klein;
    let plus = [
        Step::gamma(checkerboard(&g, KLEIN_B, KLEIN_A)),
        Step::gamma_prime(checkerboard(&g, 0, KLEIN_C)),
    ];
    let minus = [
        Step::gamma(checkerboard(&g, KLEIN_A, KLEIN_B)),
        Step::gamma_prime(checkerboard(&g, 0, KLEIN_C)),
    ];
    transfer(&g.variables(), trunc, &plus, &minus)
}

/// The Klein-coloured generating function of 3D diagrams, evaluated directly
/// as an operator product with checkerboard slices.
pub fn transfer_klein(trunc: u32) -> Result<Series> {
    let g = GroupSpec::Klein;
    let plus = [
        Step::gamma(checkerboard(&g, KLEIN_B, KLEIN_A)),
        Step::gamma(checkerboard(&g, 0, KLEIN_C)),
    ];
    let minus = [
        Step::gamma(checkerboard(&g, KLEIN_A, KLEIN_B)),
        Step::gamma(checkerboard(&g, 0, KLEIN_C)),
    ];
    transfer(&g.variables(), trunc, &plus, &minus)
}
