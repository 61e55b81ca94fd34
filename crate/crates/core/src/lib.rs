//! Coloured box counting: exact enumeration of 3D Young diagrams and pyramid
//! partitions, closed product formulas, a vertex-operator transfer engine and
//! the fixed-point sign rule for orbifold Donaldson–Thomas counts.

pub mod series;
pub mod young;
pub mod colouring;
pub mod enum3d;
pub mod pyramid;
pub mod fock;
pub mod formulas;
pub mod dtsign;
