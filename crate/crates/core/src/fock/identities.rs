//! Named operator identities, checked on a basis of small partitions.
//!
//! Each [`Identity`] states `lhs = scalar · rhs`. The suites are what the
//! `verify-ops` command runs; tests also use them directly.

use std::{fmt, str::FromStr};

use super::{
    compare_on_basis, inverse_one_minus_product, one_minus_product, FockState, Mismatch, Op,
    Result, Side,
};
use crate::{
    series::{Monomial, Series, VariableSet},
    young::Partition,
};

#[derive(Clone, Debug)]
pub struct Identity {
    pub name: String,
    pub lhs: Vec<Op>,
    pub rhs: Vec<Op>,
    pub scalar: Series,
}

impl Identity {
    fn new(name: impl Into<String>, lhs: Vec<Op>, rhs: Vec<Op>, scalar: Series) -> Self {
        Identity {
            name: name.into(),
            lhs,
            rhs,
            scalar,
        }
    }

    /// First mismatch on the basis partitions of size at most `cutoff`.
    pub fn check(&self, cutoff: u32) -> Result<Option<Mismatch>> {
        compare_on_basis(&self.lhs, &self.rhs, &self.scalar, cutoff)
    }
}

fn vars(names: &[&str]) -> (VariableSet, Vec<Monomial>) {
    let v = VariableSet::new(names.iter().copied()).expect("distinct names");
    let ms = names.iter().map(|n| v.var(n).expect("known name")).collect();
    (v, ms)
}

fn g(side: Side, x: &Monomial) -> Op {
    Op::gamma(side, x.clone())
}

fn gp(side: Side, x: &Monomial) -> Op {
    Op::gamma_prime(side, x.clone())
}

fn e(side: Side, x: &Monomial) -> Op {
    Op::e(side, x.clone())
}

/// `[α_n, α_{-m}] = n δ_{nm}` for `1 ≤ n, m ≤ max`, on partitions up to `cutoff`.
pub fn heisenberg(max: i32, cutoff: u32) -> Result<Option<Mismatch>> {
    let v = VariableSet::new(Vec::<String>::new())?;
    for lambda in Partition::all_up_to(cutoff) {
        let b = FockState::basis(&v, 0, lambda.clone());
        for n in 1..=max {
            for m in 1..=max {
                let ab = b.apply_string(&[Op::Alpha(n), Op::Alpha(-m)])?;
                let ba = b.apply_string(&[Op::Alpha(-m), Op::Alpha(n)])?;
                let lhs = ab.sub(&ba)?;
                let rhs = if n == m {
                    b.scale(&Series::from_terms(&v, 0, [(vec![], n.into())])?)?
                } else {
                    FockState::zero(&v, 0)
                };
                if let Some(mut d) = lhs.first_difference(&rhs) {
                    d.basis = Some(lambda);
                    return Ok(Some(d));
                }
            }
        }
    }
    Ok(None)
}

/// The four `Γ₊ Γ₋` exchange relations with `(1 - ab)^{-1}` or `(1 + ab)`.
pub fn commutators(trunc: u32) -> Result<Vec<Identity>> {
    let (v, m) = vars(&["a", "b"]);
    let (a, b) = (&m[0], &m[1]);
    let ab = a.mul(b);
    let geometric = inverse_one_minus_product(&v, trunc, std::slice::from_ref(&ab))?;
    let linear = one_minus_product(&v, trunc, &[ab.neg()]);
    let (p, mi) = (Side::Plus, Side::Minus);
    Ok(vec![
        Identity::new(
            "G+(a) G-(b) = (1-ab)^-1 G-(b) G+(a)",
            vec![g(p, a), g(mi, b)],
            vec![g(mi, b), g(p, a)],
            geometric.clone(),
        ),
        Identity::new(
            "G+(a) G'-(b) = (1+ab) G'-(b) G+(a)",
            vec![g(p, a), gp(mi, b)],
            vec![gp(mi, b), g(p, a)],
            linear.clone(),
        ),
        Identity::new(
            "G'+(a) G-(b) = (1+ab) G-(b) G'+(a)",
            vec![gp(p, a), g(mi, b)],
            vec![g(mi, b), gp(p, a)],
            linear,
        ),
        Identity::new(
            "G'+(a) G'-(b) = (1-ab)^-1 G'-(b) G'+(a)",
            vec![gp(p, a), gp(mi, b)],
            vec![gp(mi, b), gp(p, a)],
            geometric,
        ),
    ])
}

/// Moving a weight `Q_g` past `Γ` and `Γ'` rescales the argument by `q_g`.
pub fn weight_commutations(trunc: u32) -> Result<Vec<Identity>> {
    let (v, m) = vars(&["x", "q"]);
    let (x, q) = (&m[0], &m[1]);
    let xq = x.mul(q);
    let qop = Op::Weight(q.clone());
    let one = Series::one(&v, trunc);
    let mut out = Vec::new();
    for (primed, tag) in [(false, "G"), (true, "G'")] {
        let mk = |side: Side, arg: &Monomial| Op::Gamma {
            side,
            primed,
            arg: arg.clone(),
        };
        out.push(Identity::new(
            format!("{tag}+(x) Q = Q {tag}+(xq)"),
            vec![mk(Side::Plus, x), qop.clone()],
            vec![qop.clone(), mk(Side::Plus, &xq)],
            one.clone(),
        ));
        out.push(Identity::new(
            format!("Q {tag}-(x) = {tag}-(xq) Q"),
            vec![qop.clone(), mk(Side::Minus, x)],
            vec![mk(Side::Minus, &xq), qop.clone()],
            one.clone(),
        ));
    }
    Ok(out)
}

/// Factorisation of `Γ` through `Γ'` and `E`, and how `E` exchanges with `Γ`, `Γ'`.
pub fn e_identities(trunc: u32) -> Result<Vec<Identity>> {
    let (v, m) = vars(&["x", "y"]);
    let (x, y) = (&m[0], &m[1]);
    let xy2 = x.mul(y).pow(2);
    let one = Series::one(&v, trunc);
    let geometric = inverse_one_minus_product(&v, trunc, std::slice::from_ref(&xy2))?;
    let linear = one_minus_product(&v, trunc, &[xy2]);
    let (p, mi) = (Side::Plus, Side::Minus);
    Ok(vec![
        Identity::new("G+(x) = G'+(x) E+(x)", vec![g(p, x)], vec![gp(p, x), e(p, x)], one.clone()),
        Identity::new("G-(x) = G'-(x) E-(x)", vec![g(mi, x)], vec![gp(mi, x), e(mi, x)], one.clone()),
        Identity::new(
            "E+(x) G+(y) = G+(y) E+(x)",
            vec![e(p, x), g(p, y)],
            vec![g(p, y), e(p, x)],
            one.clone(),
        ),
        Identity::new(
            "E-(x) G-(y) = G-(y) E-(x)",
            vec![e(mi, x), g(mi, y)],
            vec![g(mi, y), e(mi, x)],
            one,
        ),
        Identity::new(
            "E+(x) G-(y) = (1-(xy)^2)^-1 G-(y) E+(x)",
            vec![e(p, x), g(mi, y)],
            vec![g(mi, y), e(p, x)],
            geometric.clone(),
        ),
        Identity::new(
            "G+(x) E-(y) = (1-(xy)^2)^-1 E-(y) G+(x)",
            vec![g(p, x), e(mi, y)],
            vec![e(mi, y), g(p, x)],
            geometric,
        ),
        Identity::new(
            "G'+(x) E-(y) = (1-(xy)^2) E-(y) G'+(x)",
            vec![gp(p, x), e(mi, y)],
            vec![e(mi, y), gp(p, x)],
            linear,
        ),
    ])
}

fn checkerboard_setup() -> (VariableSet, Monomial, Op, Monomial) {
    let (v, m) = vars(&["x", "g", "h"]);
    let x = m[0].clone();
    let root = m[1].mul(&m[2]).sqrt().expect("positive monomial");
    let xs = x.mul(&root);
    let q = Op::Checkerboard(m[1].clone(), m[2].clone());
    (v, x, q, xs)
}

/// `Q_gh E₋(x) = E₋(x√(gh)) Q_gh` and `E₊(x) Q_gh = Q_gh E₊(x√(gh))`.
pub fn checkerboard_identities(trunc: u32) -> Vec<Identity> {
    let (v, x, q, xs) = checkerboard_setup();
    let one = Series::one(&v, trunc);
    vec![
        Identity::new(
            "Qgh E-(x) = E-(x sqrt(gh)) Qgh",
            vec![q.clone(), e(Side::Minus, &x)],
            vec![e(Side::Minus, &xs), q.clone()],
            one.clone(),
        ),
        Identity::new(
            "E+(x) Qgh = Qgh E+(x sqrt(gh))",
            vec![e(Side::Plus, &x), q.clone()],
            vec![q, e(Side::Plus, &xs)],
            one,
        ),
    ]
}

/// The same two relations with the weight on the other side. These are false.
pub fn checkerboard_swapped(trunc: u32) -> Vec<Identity> {
    let (v, x, q, xs) = checkerboard_setup();
    let one = Series::one(&v, trunc);
    vec![
        Identity::new(
            "E-(x) Qgh = Qgh E-(x sqrt(gh))",
            vec![e(Side::Minus, &x), q.clone()],
            vec![q.clone(), e(Side::Minus, &xs)],
            one.clone(),
        ),
        Identity::new(
            "Qgh E+(x) = E+(x sqrt(gh)) Qgh",
            vec![q.clone(), e(Side::Plus, &x)],
            vec![e(Side::Plus, &xs), q],
            one,
        ),
    ]
}

const KLEIN_NAMES: [&str; 6] = ["x", "y", "q0", "qa", "qb", "qc"];

/// `(primed, argument)` for each factor of an operator product.
type Factors = Vec<(bool, Monomial)>;

/// Arguments of the four factors of `A'₊(x)` and `A'₋(y)`.
fn a_prime_args(m: &[Monomial]) -> (Factors, Factors) {
    let (x, y, q0, qa, qb, qc) = (&m[0], &m[1], &m[2], &m[3], &m[4], &m[5]);
    let plus = vec![
        (false, x.mul(q0).mul(qa).mul(qb).mul(qc)),
        (true, x.mul(q0).mul(qa).mul(qc)),
        (false, x.mul(q0).mul(qa)),
        (true, x.mul(q0)),
    ];
    let minus = vec![
        (false, y.clone()),
        (true, y.mul(qb)),
        (false, y.mul(qb).mul(qc)),
        (true, y.mul(qa).mul(qb).mul(qc)),
    ];
    (plus, minus)
}

/// The scalar of `A'₊(x) A'₋(y)` as the product of its sixteen pairwise factors.
pub fn a_prime_pairwise_scalar(trunc: u32) -> Result<Series> {
    let (v, m) = vars(&KLEIN_NAMES);
    let (plus, minus) = a_prime_args(&m);
    let mut s = Series::one(&v, trunc);
    for (pu, u) in &plus {
        for (pv, w) in &minus {
            let uv = u.mul(w);
            if pu == pv {
                s.div_one_minus(&uv)?;
            } else {
                s.mul_one_minus(&uv.neg());
            }
        }
    }
    Ok(s)
}

/// The same scalar in closed form: with `t = xyq` and `q = q0 qa qb qc`,
/// eight factors `(1 + t·w)` over four `(1 - t)` and four `(1 - t·w)`.
pub fn a_prime_closed_scalar(trunc: u32) -> Result<Series> {
    let (v, m) = vars(&KLEIN_NAMES);
    let (x, y, q0, qa, qb, qc) = (&m[0], &m[1], &m[2], &m[3], &m[4], &m[5]);
    let t = x.mul(y).mul(q0).mul(qa).mul(qb).mul(qc);
    let numer: Vec<Monomial> = [
        t.mul(qb),
        t.mul(qa).mul(qb).mul(qc),
        t.div(qb),
        t.mul(qc),
        t.div(qc),
        t.mul(qa),
        t.div(qa).div(qb).div(qc),
        t.div(qa),
    ]
    .iter()
    .map(|w| w.neg())
    .collect();
    let denom = [
        t.clone(),
        t.clone(),
        t.clone(),
        t.clone(),
        t.mul(qb).mul(qc),
        t.mul(qa).mul(qc),
        t.div(qb).div(qc),
        t.div(qa).div(qc),
    ];
    let mut s = one_minus_product(&v, trunc, &numer);
    for d in &denom {
        s.div_one_minus(d)?;
    }
    Ok(s)
}

/// `A'₊(x) A'₋(y) = scalar · A'₋(y) A'₊(x)` with the closed-form scalar.
pub fn a_prime_commutator(trunc: u32) -> Result<Identity> {
    let (_, m) = vars(&KLEIN_NAMES);
    let (plus, minus) = a_prime_args(&m);
    let ap: Vec<Op> = plus
        .iter()
        .map(|(pr, u)| Op::Gamma { side: Side::Plus, primed: *pr, arg: u.clone() })
        .collect();
    let am: Vec<Op> = minus
        .iter()
        .map(|(pr, u)| Op::Gamma { side: Side::Minus, primed: *pr, arg: u.clone() })
        .collect();
    Ok(Identity::new(
        "A'+(x) A'-(y) = C'(x,y) A'-(y) A'+(x)",
        [ap.clone(), am.clone()].concat(),
        [am, ap].concat(),
        a_prime_closed_scalar(trunc)?,
    ))
}

fn zn_setup(n: u32) -> (VariableSet, Monomial, Monomial, Vec<Monomial>) {
    let mut names = vec!["x".to_string(), "y".to_string()];
    names.extend((0..n).map(|i| format!("q{i}")));
    let v = VariableSet::new(names.clone()).expect("distinct names");
    let m: Vec<Monomial> = names.iter().map(|s| v.var(s).unwrap()).collect();
    (v, m[0].clone(), m[1].clone(), m[2..].to_vec())
}

fn interval(q: &[Monomial], a: usize, b: usize) -> Monomial {
    (a..=b).fold(Monomial::one(q[0].nvars()), |acc, i| acc.mul(&q[i]))
}

/// `A₊(x)` and `A₋(x)` for `Z_n`, as operator strings.
pub fn zn_a_operators(n: u32, x: &Monomial, q: &[Monomial]) -> (Vec<Op>, Vec<Op>) {
    let n = n as usize;
    let plus = (1..=n)
        .map(|i| {
            let tail = if i < n { interval(q, i, n - 1) } else { Monomial::one(x.nvars()) };
            g(Side::Plus, &x.mul(&tail).mul(&q[0]))
        })
        .collect();
    let minus = (1..=n)
        .map(|j| {
            let head = if j > 1 { interval(q, 1, j - 1) } else { Monomial::one(x.nvars()) };
            g(Side::Minus, &x.mul(&head))
        })
        .collect();
    (plus, minus)
}

/// `C(x, y)` for `Z_n`: `(1 - qxy)^{-n}` times a pair of factors for every `0 < a ≤ b < n`.
pub fn zn_scalar(n: u32, trunc: u32) -> Result<Series> {
    let (v, x, y, q) = zn_setup(n);
    let t = x.mul(&y).mul(&interval(&q, 0, n as usize - 1));
    let mut ms = vec![t.clone(); n as usize];
    for a in 1..n as usize {
        for b in a..n as usize {
            let w = interval(&q, a, b);
            ms.push(t.mul(&w));
            ms.push(t.div(&w));
        }
    }
    inverse_one_minus_product(&v, trunc, &ms)
}

/// `A₊(x) A₋(y) = C(x,y) A₋(y) A₊(x)` for `Z_n`.
pub fn zn_commutator(n: u32, trunc: u32) -> Result<Identity> {
    let (_, x, y, q) = zn_setup(n);
    let (ap, _) = zn_a_operators(n, &x, &q);
    let (_, am) = zn_a_operators(n, &y, &q);
    Ok(Identity::new(
        format!("A+(x) A-(y) = C(x,y) A-(y) A+(x), n={n}"),
        [ap.clone(), am.clone()].concat(),
        [am, ap].concat(),
        zn_scalar(n, trunc)?,
    ))
}

/// `⟨∅| A₋(x) = ⟨∅|` and `A₊(x) |∅⟩ = |∅⟩` for `Z_n`; returns a description
/// of the first failure.
pub fn zn_vacuum(n: u32, trunc: u32, cutoff: u32) -> Result<Option<String>> {
    let (v, x, _, q) = zn_setup(n);
    let (ap, am) = zn_a_operators(n, &x, &q);
    let vac = FockState::vacuum(&v, trunc);
    if vac.apply_string(&ap)? != vac {
        return Ok(Some("A+(x)|0> != |0>".into()));
    }
    for lambda in Partition::all_up_to(cutoff) {
        let out = FockState::basis(&v, trunc, lambda.clone()).apply_string(&am)?;
        let amp = out.amplitude(&Partition::empty());
        let expect = if lambda.is_empty() {
            Series::one(&v, trunc)
        } else {
            Series::zero(&v, trunc)
        };
        if amp != expect {
            return Ok(Some(format!("<0|A-(x)|{lambda}> = {amp}")));
        }
    }
    Ok(None)
}

/// A group of identities run together.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Heisenberg,
    Commutators,
    Weights,
    EOperators,
    Checkerboard,
    APrime,
    Cyclic,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "heisenberg" => Suite::Heisenberg,
            "commutators" => Suite::Commutators,
            "weights" => Suite::Weights,
            "e-ops" => Suite::EOperators,
            "checkerboard" => Suite::Checkerboard,
            "a-prime" => Suite::APrime,
            "cyclic" => Suite::Cyclic,
            "all" => Suite::All,
            other => {
                return Err(format!(
                    "unknown suite {other:?}; expected heisenberg, commutators, weights, e-ops, checkerboard, a-prime, cyclic or all"
                ))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Heisenberg => "heisenberg",
            Suite::Commutators => "commutators",
            Suite::Weights => "weights",
            Suite::EOperators => "e-ops",
            Suite::Checkerboard => "checkerboard",
            Suite::APrime => "a-prime",
            Suite::Cyclic => "cyclic",
            Suite::All => "all",
        })
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: String,
    pub failure: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn run_identities(ids: Vec<Identity>, cutoff: u32, out: &mut Vec<Outcome>) -> Result<()> {
    for id in ids {
        let failure = id.check(cutoff)?.map(|m| m.to_string());
        out.push(Outcome { name: id.name, failure });
    }
    Ok(())
}

/// Truncation used by the suites: enough to see every factor of the scalars
/// acting on the basis.
pub const SUITE_TRUNC: u32 = 8;

/// Runs a suite on all basis partitions of size at most `cutoff`.
pub fn run_suite(suite: Suite, cutoff: u32) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    let t = SUITE_TRUNC;
    let all = suite == Suite::All;
    if all || suite == Suite::Heisenberg {
        let failure = heisenberg(4, cutoff.max(8))?.map(|m| m.to_string());
        out.push(Outcome { name: "[a_n, a_-m] = n delta_nm, n,m <= 4".into(), failure });
    }
    if all || suite == Suite::Commutators {
        run_identities(commutators(t)?, cutoff, &mut out)?;
    }
    if all || suite == Suite::Weights {
        run_identities(weight_commutations(t)?, cutoff, &mut out)?;
    }
    if all || suite == Suite::EOperators {
        run_identities(e_identities(t)?, cutoff, &mut out)?;
    }
    if all || suite == Suite::Checkerboard {
        run_identities(checkerboard_identities(t), cutoff, &mut out)?;
    }
    if all || suite == Suite::APrime {
        let pairwise = a_prime_pairwise_scalar(t)?;
        let closed = a_prime_closed_scalar(t)?;
        out.push(Outcome {
            name: "C'(x,y): sixteen pairwise factors = eight-factor closed form".into(),
            failure: pairwise
                .first_difference(&closed)
                .map(|(e, l, r)| format!("exponent {e:?}: {l} vs {r}")),
        });
        run_identities(vec![a_prime_commutator(t)?], cutoff, &mut out)?;
    }
    if all || suite == Suite::Cyclic {
        for n in 2..=3 {
            run_identities(vec![zn_commutator(n, t)?], cutoff, &mut out)?;
            out.push(Outcome {
                name: format!("A-(x), A+(x) fix the vacuum, n={n}"),
                failure: zn_vacuum(n, t, cutoff)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_small() {
        assert_eq!(heisenberg(3, 5).unwrap(), None);
    }

    #[test]
    fn commutators_hold() {
        for id in commutators(6).unwrap() {
            assert_eq!(id.check(4).unwrap(), None, "{}", id.name);
        }
    }

    #[test]
    fn swapping_the_scalars_fails() {
        let ids = commutators(6).unwrap();
        let wrong = Identity::new("swapped", ids[0].lhs.clone(), ids[0].rhs.clone(), ids[1].scalar.clone());
        assert!(wrong.check(2).unwrap().is_some());
    }

    #[test]
    fn weights_and_e_hold() {
        for id in weight_commutations(6).unwrap().into_iter().chain(e_identities(6).unwrap()) {
            assert_eq!(id.check(4).unwrap(), None, "{}", id.name);
        }
    }

    #[test]
    fn checkerboard_direction_matters() {
        for id in checkerboard_identities(6) {
            assert_eq!(id.check(4).unwrap(), None, "{}", id.name);
        }
        for id in checkerboard_swapped(6) {
            assert!(id.check(4).unwrap().is_some(), "{}", id.name);
        }
    }

    #[test]
    fn a_prime_scalar_forms_agree() {
        assert_eq!(a_prime_pairwise_scalar(9).unwrap(), a_prime_closed_scalar(9).unwrap());
    }

    #[test]
    fn cyclic_scalar_matches_pairs() {
        // Product of (1 - u_i v_j)^{-1} over the arguments of A₊ and A₋.
        for n in 1..=4 {
            let (v, x, y, q) = zn_setup(n);
            let (ap, _) = zn_a_operators(n, &x, &q);
            let (_, am) = zn_a_operators(n, &y, &q);
            let arg = |o: &Op| match o {
                Op::Gamma { arg, .. } => arg.clone(),
                _ => unreachable!(),
            };
            let pairs: Vec<Monomial> = ap
                .iter()
                .flat_map(|u| am.iter().map(move |w| arg(u).mul(&arg(w))))
                .collect();
            assert_eq!(inverse_one_minus_product(&v, 8, &pairs).unwrap(), zn_scalar(n, 8).unwrap());
        }
    }

    #[test]
    fn cyclic_vacuum() {
        assert_eq!(zn_vacuum(3, 5, 4).unwrap(), None);
    }
}
