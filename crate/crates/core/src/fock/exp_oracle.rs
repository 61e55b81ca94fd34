//! Vertex operators as exponentials of `α`, over the rationals.
//!
//! Only used to cross-check the interlacing implementation: with
//! `X = Σ_k c_k x^k α_{∓k}` the operator is `Σ_m X^m / m!`, and the result is
//! graded by the power of `x`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Side;
use crate::young::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpKind {
    /// `c_k = 1/k`.
    Gamma,
    /// `c_k = (-1)^{k-1}/k`.
    GammaPrime,
    /// `c_{2j} = 1/j`, odd `k` absent.
    E,
}

/// The coefficient `c_k` of `x^k α_{∓k}` in the exponent.
pub fn exponent_coeff(kind: ExpKind, k: u32) -> BigRational {
    let frac = |n: i64, d: u32| BigRational::new(BigInt::from(n), BigInt::from(d));
    match kind {
        ExpKind::Gamma => frac(1, k),
        ExpKind::GammaPrime => frac(if k % 2 == 1 { 1 } else { -1 }, k),
        ExpKind::E if k.is_multiple_of(2) => frac(1, k / 2),
        ExpKind::E => BigRational::zero(),
    }
}

type Graded = BTreeMap<Partition, BigRational>;

fn add_into(map: &mut Graded, p: Partition, c: BigRational) {
    let e = map.entry(p).or_insert_with(BigRational::zero);
    *e += c;
}

/// The image of `|μ⟩`, keeping every `λ` within `max_degree` powers of `x`.
/// The coefficient of `λ` multiplies `x^{||λ| - |μ||}`.
pub fn apply(kind: ExpKind, side: Side, mu: &Partition, max_degree: u32) -> Graded {
    let base = mu.size();
    let degree = |p: &Partition| p.size().abs_diff(base);
    let mut result: Graded = BTreeMap::new();
    let mut term: Graded = BTreeMap::new();
    term.insert(mu.clone(), BigRational::one());
    let mut m = 0u32;
    while !term.is_empty() {
        for (p, c) in &term {
            add_into(&mut result, p.clone(), c.clone());
        }
        m += 1;
        let mut next: Graded = BTreeMap::new();
        for (p, c) in &term {
            let d = degree(p);
            for k in 1..=max_degree.saturating_sub(d) {
                let ck = exponent_coeff(kind, k);
                if ck.is_zero() {
                    continue;
                }
                let moves = match side {
                    Side::Minus => p.border_strip_additions(k),
                    Side::Plus => p.border_strip_removals(k),
                };
                for (q, sign) in moves {
                    let v = c * &ck / BigInt::from(m) * BigInt::from(sign);
                    add_into(&mut next, q, v);
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        term = next;
    }
    result.retain(|_, c| !c.is_zero());
    result
}

/// `⟨λ| O(x) |μ⟩` as the coefficient of `x^{||λ| - |μ||}`.
pub fn matrix_element(kind: ExpKind, side: Side, lambda: &Partition, mu: &Partition) -> BigRational {
    let d = lambda.size().abs_diff(mu.size());
    apply(kind, side, mu, d)
        .remove(lambda)
        .unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{
        fock::{FockState, Op},
        series::VariableSet,
    };

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn coefficients() {
        assert_eq!(exponent_coeff(ExpKind::Gamma, 3), BigRational::new(1.into(), 3.into()));
        assert_eq!(exponent_coeff(ExpKind::GammaPrime, 2), BigRational::new((-1).into(), 2.into()));
        assert_eq!(exponent_coeff(ExpKind::E, 4), BigRational::new(1.into(), 2.into()));
        assert!(exponent_coeff(ExpKind::E, 3).is_zero());
    }

    #[test]
    fn exponential_is_integral_on_small_cases() {
        assert_eq!(matrix_element(ExpKind::Gamma, Side::Minus, &p("2"), &Partition::empty()), rat(1));
        assert_eq!(matrix_element(ExpKind::Gamma, Side::Minus, &p("1,1"), &Partition::empty()), rat(0));
        assert_eq!(matrix_element(ExpKind::GammaPrime, Side::Minus, &p("1,1"), &Partition::empty()), rat(1));
        assert_eq!(matrix_element(ExpKind::E, Side::Minus, &p("1,1"), &Partition::empty()), rat(-1));
        assert_eq!(matrix_element(ExpKind::Gamma, Side::Plus, &p("2"), &p("3,1")), rat(1));
    }

    fn engine(kind: ExpKind, side: Side, mu: &Partition, max_degree: u32) -> Graded {
        let v = VariableSet::new(["x"]).unwrap();
        let x = v.var("x").unwrap();
        let op = match kind {
            ExpKind::Gamma => Op::gamma(side, x),
            ExpKind::GammaPrime => Op::gamma_prime(side, x),
            ExpKind::E => Op::e(side, x),
        };
        let out = FockState::basis(&v, max_degree, mu.clone()).apply(&op).unwrap();
        out.amplitudes()
            .iter()
            .filter_map(|(l, a)| {
                let d = l.size().abs_diff(mu.size()) as i32;
                let c = a.coeff(&[d]);
                (!c.is_zero()).then(|| (l.clone(), BigRational::from_integer(c)))
            })
            .collect()
    }

    #[test]
    fn agrees_with_interlacing_up_to_size_five() {
        for kind in [ExpKind::Gamma, ExpKind::GammaPrime, ExpKind::E] {
            for mu in Partition::all_up_to(5) {
                let dmax = 5 - mu.size();
                assert_eq!(apply(kind, Side::Minus, &mu, dmax), engine(kind, Side::Minus, &mu, dmax), "{kind:?} - {mu}");
                let dmax = mu.size();
                assert_eq!(apply(kind, Side::Plus, &mu, dmax), engine(kind, Side::Plus, &mu, dmax), "{kind:?} + {mu}");
            }
        }
    }
}
