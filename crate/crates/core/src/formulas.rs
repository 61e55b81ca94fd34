//! Closed product formulas for the coloured partition functions, their
//! signed (orbifold DT) versions, the resolution side, and the crepant
//! resolution comparison.
//!
//! Every product is a list of MacMahon factors `M(x, q)^e` applied in place
//! to a single series, so no intermediate series is ever inverted.

use std::{fmt, str::FromStr};

use thiserror::Error;

use crate::{
    colouring::{GroupAction, GroupError, GroupSpec, KLEIN_A, KLEIN_B, KLEIN_C},
    series::{mac_factors, Monomial, Series, SeriesError, VariableSet},
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("no product formula for {0}")]
    Unsupported(String),
    #[error("unknown formula {0:?}; expected zn:<n>, klein, pyramid, dt-orb:<group> or dt-res:<group>")]
    Unknown(String),
}

pub type Result<T, E = FormulaError> = std::result::Result<T, E>;

/// `M(x, q)^e`, possibly with negative `e`.
#[derive(Clone, Debug)]
struct Factor {
    x: Monomial,
    e: i32,
}

fn m(x: Monomial, e: i32) -> Factor {
    Factor { x, e }
}

/// `M̃(x, q)^e = M(x, q)^e M(x^{-1}, q)^e`.
fn mt(x: Monomial, e: i32) -> [Factor; 2] {
    let inv = x.inverse();
    [m(x, e), m(inv, e)]
}

/// `∏ M(x_i, q)^{e_i}`.
fn product(vars: &VariableSet, q: &Monomial, factors: &[Factor], trunc: u32) -> Result<Series> {
    let mut s = Series::one(vars, trunc);
    for f in factors {
        for (w, mult) in mac_factors(vars, &f.x, q, trunc)? {
            let times = mult * f.e.unsigned_abs();
            for _ in 0..times {
                if f.e > 0 {
                    s.div_one_minus(&w)?;
                } else {
                    s.mul_one_minus(&w);
                }
            }
        }
    }
    Ok(s)
}

fn ones(n: usize) -> Monomial {
    Monomial::one(n)
}

/// `q_a q_{a+1} ⋯ q_b`.
fn interval(g: &GroupSpec, a: u32, b: u32) -> Monomial {
    (a..=b).fold(ones(g.order() as usize), |acc, i| acc.mul(&g.var(i)))
}

/// `M(1,q)^n ∏_{0<a≤b<n} M̃(q_a⋯q_b, q)` with `q = q_0 ⋯ q_{n-1}`.
pub fn closed_zn(n: u32, trunc: u32) -> Result<Series> {
    let g = GroupSpec::Cyclic(n);
    let vars = g.variables();
    let mut fs = vec![m(ones(n as usize), n as i32)];
    for a in 1..n {
        for b in a..n {
            fs.extend(mt(interval(&g, a, b), 1));
        }
    }
    product(&vars, &vars.all(), &fs, trunc)
}

fn klein_monomials() -> (VariableSet, [Monomial; 3]) {
    let g = GroupSpec::Klein;
    (g.variables(), [g.var(KLEIN_A), g.var(KLEIN_B), g.var(KLEIN_C)])
}

/// The four factors `M̃(-q_a) M̃(-q_b) M̃(-q_c) M̃(-q_a q_b q_c)` to the power `e`.
fn klein_odd(e: i32) -> Vec<Factor> {
    let (_, [a, b, c]) = klein_monomials();
    let abc = a.mul(&b).mul(&c);
    [a, b, c, abc].into_iter().flat_map(|x| mt(x.neg(), e)).collect()
}

/// `M(1,q)^4 M̃(q_aq_b) M̃(q_aq_c) M̃(q_bq_c) / (M̃(-q_a) M̃(-q_b) M̃(-q_c) M̃(-q_aq_bq_c))`.
pub fn closed_klein(trunc: u32) -> Result<Series> {
    let (vars, [a, b, c]) = klein_monomials();
    let mut fs = vec![m(ones(4), 4)];
    fs.extend(mt(a.mul(&b), 1));
    fs.extend(mt(a.mul(&c), 1));
    fs.extend(mt(b.mul(&c), 1));
    fs.extend(klein_odd(-1));
    product(&vars, &vars.all(), &fs, trunc)
}

/// `M(1,q)^4 M̃(q_bq_c) M̃(q_aq_c) / (M̃(-q_a) M̃(-q_b) M̃(-q_c) M̃(-q_aq_bq_c))`.
pub fn closed_pyramid(trunc: u32) -> Result<Series> {
    let (vars, [a, b, c]) = klein_monomials();
    let mut fs = vec![m(ones(4), 4)];
    fs.extend(mt(b.mul(&c), 1));
    fs.extend(mt(a.mul(&c), 1));
    fs.extend(klein_odd(-1));
    product(&vars, &vars.all(), &fs, trunc)
}

/// `M̃(q_a q_b, q) · closed_pyramid`, the Klein function rebuilt from pyramids.
pub fn klein_from_pyramid(trunc: u32) -> Result<Series> {
    let (vars, [a, b, _]) = klein_monomials();
    let extra = product(&vars, &vars.all(), &mt(a.mul(&b), 1), trunc)?;
    Ok(extra.try_mul(&closed_pyramid(trunc)?)?)
}

/// Variables whose sign flips in the orbifold DT function.
pub fn dt_sign_flips(g: &GroupSpec) -> Vec<usize> {
    match g {
        GroupSpec::Cyclic(_) => vec![0],
        GroupSpec::Klein => vec![KLEIN_A as usize, KLEIN_B as usize, KLEIN_C as usize],
    }
}

/// The coloured closed form of a group.
pub fn closed_form(g: &GroupSpec, trunc: u32) -> Result<Series> {
    match g {
        GroupSpec::Cyclic(n) => closed_zn(*n, trunc),
        GroupSpec::Klein => closed_klein(trunc),
    }
}

/// Orbifold DT function: the coloured closed form with signs flipped.
pub fn dt_orbifold(g: &GroupSpec, trunc: u32) -> Result<Series> {
    Ok(closed_form(g, trunc)?.substitute_signs(&dt_sign_flips(g)))
}

/// Shape of the resolution DT function: `M(1,-q)^e ∏ M(v^β, -q)^{s_β}`,
/// with each curve class `β` given as the list of group elements it spans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionShape {
    pub euler: u32,
    pub classes: Vec<(Vec<u32>, i32)>,
}

pub fn resolution_shape(g: &GroupSpec) -> ResolutionShape {
    match g {
        GroupSpec::Cyclic(n) => ResolutionShape {
            euler: *n,
            classes: (1..*n)
                .flat_map(|a| (a..*n).map(move |b| ((a..=b).collect(), 1)))
                .collect(),
        },
        GroupSpec::Klein => {
            let (a, b, c) = (KLEIN_A, KLEIN_B, KLEIN_C);
            ResolutionShape {
                euler: 4,
                classes: vec![
                    (vec![a, b], 1),
                    (vec![b, c], 1),
                    (vec![a, c], 1),
                    (vec![a], -1),
                    (vec![b], -1),
                    (vec![c], -1),
                    (vec![a, b, c], -1),
                ],
            }
        }
    }
}

/// Variables of the resolution side: `q` then one curve variable per
/// non-trivial group element (`v1..` or `va, vb, vc`).
pub fn resolution_variables(g: &GroupSpec) -> VariableSet {
    let mut names = vec!["q".to_string()];
    names.extend(g.elements().skip(1).map(|e| format!("v{}", g.label(e))));
    VariableSet::new(names).expect("distinct names")
}

/// Resolution DT function in the variables of [`resolution_variables`].
pub fn dt_resolution(g: &GroupSpec, trunc: u32) -> Result<Series> {
    let vars = resolution_variables(g);
    let n = vars.len();
    let q = Monomial::var_index(n, 0).neg();
    let shape = resolution_shape(g);
    let mut fs = vec![m(ones(n), shape.euler as i32)];
    for (class, e) in &shape.classes {
        let x = class
            .iter()
            .fold(ones(n), |acc, &i| acc.mul(&Monomial::var_index(n, i as usize)));
        fs.push(m(x, *e));
    }
    product(&vars, &q, &fs, trunc)
}

fn crc_rhs_factors(g: &GroupSpec, euler_power: i32) -> Vec<Factor> {
    let shape = resolution_shape(g);
    let mut fs = vec![m(ones(g.order() as usize), euler_power)];
    for (class, e) in &shape.classes {
        let x = class
            .iter()
            .fold(ones(g.order() as usize), |acc, &i| acc.mul(&g.var(i)));
        fs.extend(mt(x, *e));
    }
    fs
}

/// Both sides of the crepant resolution comparison, in orbifold variables:
/// the orbifold DT function, and the product of the two resolution functions
/// (curve variables `v_i ↦ q_i` and their inverses, `q ↦ q_0 ⋯`) divided by
/// `M(1, -q)^{e}`. Pairing `M(v^β) M(v^{-β})` into `M̃` keeps every factor a
/// power series.
pub fn crc_sides(g: &GroupSpec, trunc: u32) -> Result<(Series, Series)> {
    let vars = g.variables();
    let q = vars.all().neg();
    let e = resolution_shape(g).euler as i32;
    // Two copies contribute M(1,-q)^{2e}; the normalisation removes e of them.
    let rhs = product(&vars, &q, &crc_rhs_factors(g, 2 * e - e), trunc)?;
    Ok((dt_orbifold(g, trunc)?, rhs))
}

/// The same right-hand side normalised by `M(1, q)^{-e}` instead of
/// `M(1, -q)^{-e}`.
pub fn crc_rhs_unsigned_normalisation(g: &GroupSpec, trunc: u32) -> Result<Series> {
    let vars = g.variables();
    let q = vars.all();
    let e = resolution_shape(g).euler as i32;
    let paired = product(&vars, &q.neg(), &crc_rhs_factors(g, 2 * e), trunc)?;
    let norm = product(&vars, &q, &[m(ones(vars.len()), -e)], trunc)?;
    Ok(paired.try_mul(&norm)?)
}

/// `true` iff the two sides of [`crc_sides`] agree to degree `trunc`.
pub fn crc_check(g: &GroupSpec, trunc: u32) -> Result<bool> {
    let (l, r) = crc_sides(g, trunc)?;
    Ok(l == r)
}

/// The groups with product formulas, from their command-line names.
pub fn group_spec(action: GroupAction) -> Result<GroupSpec> {
    match action {
        GroupAction::Cyclic(n) => Ok(GroupSpec::Cyclic(n)),
        GroupAction::Klein => Ok(GroupSpec::Klein),
        GroupAction::Z3Diagonal => Err(FormulaError::Unsupported(action.to_string())),
    }
}

/// A series-valued formula, as named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    Zn(u32),
    Klein,
    Pyramid,
    DtOrbifold(GroupSpec),
    DtResolution(GroupSpec),
}

impl Formula {
    pub fn evaluate(&self, trunc: u32) -> Result<Series> {
        match self {
            Formula::Zn(n) => closed_zn(*n, trunc),
            Formula::Klein => closed_klein(trunc),
            Formula::Pyramid => closed_pyramid(trunc),
            Formula::DtOrbifold(g) => dt_orbifold(g, trunc),
            Formula::DtResolution(g) => dt_resolution(g, trunc),
        }
    }
}

impl FromStr for Formula {
    type Err = FormulaError;

    /// `zn:<n>`, `klein`, `pyramid`, `dt-orb:<group>`, `dt-res:<group>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "pyramid" {
            return Ok(Formula::Pyramid);
        }
        if let Some(rest) = s.strip_prefix("dt-orb:") {
            return Ok(Formula::DtOrbifold(group_spec(rest.parse()?)?));
        }
        if let Some(rest) = s.strip_prefix("dt-res:") {
            return Ok(Formula::DtResolution(group_spec(rest.parse()?)?));
        }
        match s.parse::<GroupAction>() {
            Ok(GroupAction::Cyclic(n)) => Ok(Formula::Zn(n)),
            Ok(GroupAction::Klein) => Ok(Formula::Klein),
            Ok(a) => Err(FormulaError::Unsupported(a.to_string())),
            Err(_) => Err(FormulaError::Unknown(s.to_string())),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Zn(n) => write!(f, "zn:{n}"),
            Formula::Klein => write!(f, "klein"),
            Formula::Pyramid => write!(f, "pyramid"),
            Formula::DtOrbifold(g) => write!(f, "dt-orb:{g}"),
            Formula::DtResolution(g) => write!(f, "dt-res:{g}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{
        colouring::OctantColouring,
        enum3d,
        pyramid,
        series::{mac_m, mac_mtilde, Coeff},
    };

    fn c(n: i64) -> Coeff {
        Coeff::from(n)
    }

    #[test]
    fn trivial_group_is_macmahon() {
        let s = closed_zn(1, 8).unwrap();
        let v = s.vars().clone();
        assert_eq!(s, mac_m(&v, &ones(1), &v.all(), 8).unwrap());
    }

    #[test]
    fn small_coefficients() {
        let s = closed_zn(3, 4).unwrap();
        assert_eq!(s.coeff(&[1, 0, 0]), c(1));
        assert_eq!(s.coeff(&[1, 1, 0]), c(1));
        assert_eq!(s.coeff(&[1, 0, 1]), c(1));
        assert_eq!(s.coeff(&[0, 1, 0]), c(0));
        let k = closed_klein(2).unwrap();
        let expect = Series::from_terms(
            k.vars(),
            2,
            [
                (vec![0, 0, 0, 0], c(1)),
                (vec![1, 0, 0, 0], c(1)),
                (vec![1, 1, 0, 0], c(1)),
                (vec![1, 0, 1, 0], c(1)),
                (vec![1, 0, 0, 1], c(1)),
            ],
        )
        .unwrap();
        assert_eq!(k, expect);
        let p = closed_pyramid(2).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.coeff(&[1, 0, 0, 1]), c(0));
    }

    #[test]
    fn closed_forms_match_enumeration() {
        for n in 2..=3 {
            assert_eq!(closed_zn(n, 6).unwrap(), enum3d::coloured_series(&OctantColouring::cyclic(n), 6));
        }
        assert_eq!(closed_klein(6).unwrap(), enum3d::coloured_series(&OctantColouring::klein(), 6));
        assert_eq!(closed_pyramid(6).unwrap(), pyramid::pyramid_series(6));
    }

    #[test]
    fn klein_splits_off_pyramids() {
        assert_eq!(closed_klein(10).unwrap(), klein_from_pyramid(10).unwrap());
        let (v, [a, b, _]) = klein_monomials();
        let direct = mac_mtilde(&v, &a.mul(&b), &v.all(), 6).unwrap();
        assert_eq!(direct.try_mul(&closed_pyramid(6).unwrap()).unwrap(), closed_klein(6).unwrap());
    }

    #[test]
    fn orbifold_signs() {
        let z = dt_orbifold(&GroupSpec::Cyclic(2), 3).unwrap();
        assert_eq!(z.coeff(&[1, 0]), c(-1));
        assert_eq!(z.constant_term(), c(1));
        let k = dt_orbifold(&GroupSpec::Klein, 3).unwrap();
        assert_eq!(k.coeff(&[1, 0, 0, 0]), c(1));
        assert_eq!(k.coeff(&[1, 1, 0, 0]), c(-1));
    }

    #[test]
    fn resolution_z2() {
        let s = dt_resolution(&GroupSpec::Cyclic(2), 6).unwrap();
        let v = s.vars().clone();
        assert_eq!(v.names(), ["q", "v1"]);
        let mq = v.var("q").unwrap().neg();
        let expect = mac_m(&v, &ones(2), &mq, 6)
            .unwrap()
            .pow(2)
            .try_mul(&mac_m(&v, &v.var("v1").unwrap(), &mq, 6).unwrap())
            .unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn resolution_klein_low_degree() {
        let s = dt_resolution(&GroupSpec::Klein, 4).unwrap();
        assert_eq!(s.vars().names(), ["q", "va", "vb", "vc"]);
        assert_eq!(s.constant_term(), c(1));
        // No pure curve terms: every factor carries a power of q.
        assert_eq!(s.coeff(&[0, 1, 1, 0]), c(0));
        // 1/M(va,-q) contributes (1 + va q) at first order.
        assert_eq!(s.coeff(&[1, 1, 0, 0]), c(1));
    }

    #[test]
    fn crc_holds() {
        for g in [GroupSpec::Cyclic(1), GroupSpec::Cyclic(2), GroupSpec::Cyclic(3), GroupSpec::Klein] {
            assert!(crc_check(&g, 8).unwrap(), "{g}");
            assert!(crc_check(&g, 0).unwrap(), "{g}");
        }
    }

    #[test]
    fn crc_needs_the_signed_normalisation() {
        for g in [GroupSpec::Cyclic(2), GroupSpec::Klein] {
            let (lhs, _) = crc_sides(&g, 4).unwrap();
            assert_ne!(lhs, crc_rhs_unsigned_normalisation(&g, 4).unwrap(), "{g}");
        }
    }

    #[test]
    fn parse_formulas() {
        assert_eq!("zn:3".parse(), Ok(Formula::Zn(3)));
        assert_eq!("klein".parse(), Ok(Formula::Klein));
        assert_eq!("pyramid".parse(), Ok(Formula::Pyramid));
        assert_eq!("dt-orb:zn:3".parse(), Ok(Formula::DtOrbifold(GroupSpec::Cyclic(3))));
        assert_eq!("dt-res:klein".parse(), Ok(Formula::DtResolution(GroupSpec::Klein)));
        assert!("dt-orb:z3diag".parse::<Formula>().is_err());
        assert!("z3diag".parse::<Formula>().is_err());
        assert!("nope".parse::<Formula>().is_err());
        for f in ["zn:2", "klein", "pyramid", "dt-orb:klein", "dt-res:zn:4"] {
            assert_eq!(f.parse::<Formula>().unwrap().to_string(), f);
        }
    }
}
