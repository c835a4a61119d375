//! Deformed sl₃ foam homology of braid closures and the β₃ transverse
//! invariants, over exact coefficient rings.

pub mod braid;
pub mod coeff;
pub mod complex;
pub mod foamval;
pub mod khsl2;
pub mod linalg;
pub mod transverse;
pub mod web;
