//! Group colourings of the octant: `Z_n`, the Klein four-group and the
//! diagonal `Z_3` action.

use std::{fmt, str::FromStr};

use thiserror::Error;

use crate::series::{Monomial, VariableSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown group {0:?}; expected zn:<n>, klein or z3diag")]
    Unknown(String),
    #[error("cyclic order must be at least 1, got {0:?}")]
    BadOrder(String),
}

/// Group element: a residue for `Z_n`, a 2-bit vector for Klein (0, a=1, b=2, c=3).
pub type Element = u32;

pub const KLEIN_A: Element = 1;
pub const KLEIN_B: Element = 2;
pub const KLEIN_C: Element = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(u32),
    Klein,
}

impl GroupSpec {
    pub fn order(&self) -> u32 {
        match self {
            GroupSpec::Cyclic(n) => *n,
            GroupSpec::Klein => 4,
        }
    }

    pub fn add(&self, g: Element, h: Element) -> Element {
        match self {
            GroupSpec::Cyclic(n) => (g + h) % n,
            GroupSpec::Klein => g ^ h,
        }
    }

    pub fn neg(&self, g: Element) -> Element {
        match self {
            GroupSpec::Cyclic(n) => (n - g % n) % n,
            GroupSpec::Klein => g,
        }
    }

    /// `k · g` for any integer `k`.
    pub fn scale(&self, k: i64, g: Element) -> Element {
        match self {
            GroupSpec::Cyclic(n) => (k.rem_euclid(*n as i64) as u32 * g) % n,
            GroupSpec::Klein => {
                if k.rem_euclid(2) == 1 {
                    g
                } else {
                    0
                }
            }
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        0..self.order()
    }

    pub fn label(&self, g: Element) -> String {
        match self {
            GroupSpec::Cyclic(_) => g.to_string(),
            GroupSpec::Klein => ["0", "a", "b", "c"][g as usize].to_string(),
        }
    }

    /// Colour variables in canonical order: `q0..q{n-1}` or `q0, qa, qb, qc`.
    pub fn variables(&self) -> VariableSet {
        VariableSet::new(self.elements().map(|g| format!("q{}", self.label(g))))
            .expect("group labels are distinct")
    }

    /// The variable monomial `q_g`.
    pub fn var(&self, g: Element) -> Monomial {
        Monomial::var_index(self.order() as usize, g as usize)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "zn:{n}"),
            GroupSpec::Klein => write!(f, "klein"),
        }
    }
}

/// A monoid homomorphism `N³ → G`, fixed by the images of the unit vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OctantColouring {
    pub group: GroupSpec,
    pub generators: [Element; 3],
}

impl OctantColouring {
    /// `K(1,0,0) = 1`, `K(0,1,0) = -1`, `K(0,0,1) = 0`.
    pub fn cyclic(n: u32) -> Self {
        assert!(n >= 1, "cyclic order must be positive");
        OctantColouring {
            group: GroupSpec::Cyclic(n),
            generators: [1 % n, (n - 1) % n, 0],
        }
    }

    /// `K(1,0,0) = a`, `K(0,1,0) = b`, `K(0,0,1) = c`.
    pub fn klein() -> Self {
        OctantColouring {
            group: GroupSpec::Klein,
            generators: [KLEIN_A, KLEIN_B, KLEIN_C],
        }
    }

    /// `Z_3` acting diagonally: every generator maps to 1.
    pub fn z3_diagonal() -> Self {
        OctantColouring {
            group: GroupSpec::Cyclic(3),
            generators: [1, 1, 1],
        }
    }

    pub fn colour(&self, (i, j, k): (u32, u32, u32)) -> Element {
        let g = &self.group;
        let [x, y, z] = self.generators;
        g.add(
            g.add(g.scale(i as i64, x), g.scale(j as i64, y)),
            g.scale(k as i64, z),
        )
    }
}

/// `(i + j + k) mod 3`.
pub fn diagonal_z3_colour((i, j, k): (u32, u32, u32)) -> Element {
    (i + j + k) % 3
}

/// A group together with its octant action, as named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupAction {
    Cyclic(u32),
    Klein,
    Z3Diagonal,
}

impl GroupAction {
    pub fn colouring(&self) -> OctantColouring {
        match self {
            GroupAction::Cyclic(n) => OctantColouring::cyclic(*n),
            GroupAction::Klein => OctantColouring::klein(),
            GroupAction::Z3Diagonal => OctantColouring::z3_diagonal(),
        }
    }

    pub fn group(&self) -> GroupSpec {
        self.colouring().group
    }
}

impl FromStr for GroupAction {
    type Err = GroupError;

    /// `zn:<n>`, `klein` or `z3diag`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "klein" => Ok(GroupAction::Klein),
            "z3diag" => Ok(GroupAction::Z3Diagonal),
            other => {
                let n = other
                    .strip_prefix("zn:")
                    .ok_or_else(|| GroupError::Unknown(other.to_string()))?;
                match n.parse::<u32>() {
                    Ok(n) if n >= 1 => Ok(GroupAction::Cyclic(n)),
                    _ => Err(GroupError::BadOrder(n.to_string())),
                }
            }
        }
    }
}

impl fmt::Display for GroupAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupAction::Cyclic(n) => write!(f, "zn:{n}"),
            GroupAction::Klein => write!(f, "klein"),
            GroupAction::Z3Diagonal => write!(f, "z3diag"),
        }
    }
}
