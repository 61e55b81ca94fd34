//! Vertex operators: exponential oracle, identities and transfer products.

use boxcount_core::{
    colouring::OctantColouring,
    enum3d,
    fock::{
        exp_oracle::{self, ExpKind},
        identities, transfer, FockState, Op, Side,
    },
    series::{Monomial, Series, VariableSet},
    young::Partition,
};
use num_rational::BigRational;
use proptest::prelude::*;

fn x_vars() -> (VariableSet, Monomial) {
    let v = VariableSet::new(["x"]).unwrap();
    let x = v.var("x").unwrap();
    (v, x)
}

#[test]
fn exponential_form_agrees_to_size_six() {
    let (v, x) = x_vars();
    for (kind, op) in [
        (ExpKind::Gamma, Op::gamma(Side::Minus, x.clone())),
        (ExpKind::GammaPrime, Op::gamma_prime(Side::Minus, x.clone())),
        (ExpKind::E, Op::e(Side::Minus, x.clone())),
    ] {
        for mu in Partition::all_up_to(6) {
            let room = 6 - mu.size();
            let oracle = exp_oracle::apply(kind, Side::Minus, &mu, room);
            let engine = FockState::basis(&v, room, mu.clone()).apply(&op).unwrap();
            for lambda in Partition::all_up_to(6) {
                let d = lambda.size() as i32 - mu.size() as i32;
                let e = if d < 0 { 0.into() } else { engine.amplitude(&lambda).coeff(&[d]) };
                let o = oracle.get(&lambda).cloned().unwrap_or_default();
                assert_eq!(BigRational::from_integer(e), o, "{kind:?} {lambda} {mu}");
            }
        }
    }
}

#[test]
fn heisenberg_relation() {
    assert_eq!(identities::heisenberg(4, 8).unwrap(), None);
}

#[test]
fn suites_pass() {
    for suite in ["commutators", "weights", "e-ops", "checkerboard"] {
        for o in identities::run_suite(suite.parse().unwrap(), 6).unwrap() {
            assert!(o.passed(), "{}: {:?}", o.name, o.failure);
        }
    }
}

#[test]
fn checkerboard_with_weight_on_the_wrong_side_fails() {
    for id in identities::checkerboard_swapped(6) {
        let m = id.check(4).unwrap().expect("the swapped form should fail");
        assert_ne!(m.left, m.right);
    }
}

#[test]
fn a_prime_commutator() {
    let id = identities::a_prime_commutator(7).unwrap();
    assert_eq!(id.check(4).unwrap(), None);
}

#[test]
fn a_prime_commutator_detects_a_wrong_factor() {
    let mut id = identities::a_prime_commutator(7).unwrap();
    let v = id.scalar.vars().clone();
    // Drop one numerator factor (1 + t/qa): divide by it again.
    let t_over_qa = v.product(&["x", "y", "q0", "qb", "qc"]).unwrap();
    id.scalar = id
        .scalar
        .try_mul(&Series::one(&v, 7).try_sub(&Series::monomial(&v, &t_over_qa, 7).unwrap()).unwrap())
        .unwrap();
    assert!(id.check(3).unwrap().is_some());
}

#[test]
fn klein_transfer_matches_enumeration() {
    let e = enum3d::coloured_series(&OctantColouring::klein(), 8);
    assert_eq!(transfer::transfer_klein(8).unwrap(), e);
}

#[test]
fn larger_cyclic_transfer() {
    let e = enum3d::coloured_series(&OctantColouring::cyclic(4), 8);
    assert_eq!(transfer::transfer_zn(4, 8).unwrap(), e);
}

fn partition() -> impl Strategy<Value = Partition> {
    proptest::collection::vec(0u32..5, 0..4).prop_map(Partition::from_unsorted)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gamma_minus_is_interlacing(mu in partition(), lambda in partition()) {
        let v = VariableSet::new(["q"]).unwrap();
        let q = v.var("q").unwrap();
        let out = FockState::basis(&v, 20, mu.clone()).apply_gamma(Side::Minus, false, &q).unwrap();
        let amp = out.amplitude(&lambda);
        if lambda.interlaces(&mu) {
            prop_assert_eq!(amp, Series::monomial(&v, &q.pow(lambda.size() - mu.size()), 20).unwrap());
        } else {
            prop_assert!(amp.is_zero());
        }
    }

    #[test]
    fn plus_is_adjoint_of_minus(mu in partition(), lambda in partition(), primed in any::<bool>()) {
        let v = VariableSet::new(Vec::<String>::new()).unwrap();
        let one = Monomial::one(0);
        let down = FockState::basis(&v, 0, lambda.clone()).with_size_cap(20)
            .apply_gamma(Side::Plus, primed, &one).unwrap().amplitude(&mu);
        let up = FockState::basis(&v, 0, mu.clone()).with_size_cap(20)
            .apply_gamma(Side::Minus, primed, &one).unwrap().amplitude(&lambda);
        prop_assert_eq!(down, up);
    }

    #[test]
    fn alpha_is_adjoint(mu in partition(), lambda in partition(), n in 1i32..5) {
        let v = VariableSet::new(Vec::<String>::new()).unwrap();
        let down = FockState::basis(&v, 0, lambda.clone()).apply_alpha(n).unwrap().amplitude(&mu);
        let up = FockState::basis(&v, 0, mu.clone()).apply_alpha(-n).unwrap().amplitude(&lambda);
        prop_assert_eq!(down, up);
    }
}
