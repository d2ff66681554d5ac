//! Heights on elliptic curves over number fields: exact field arithmetic, curve group
//! law and division polynomials, Néron–Tate height estimation, Galois traces and twists,
//! Northcott-type point searches and doubling dynamics.

pub mod curve;
pub mod dynamics;
pub mod estimate;
pub mod galois;
pub mod heights;
pub mod literal;
pub mod nf;
pub mod northcott;
pub mod serde_fmt;

pub use estimate::HeightEstimate;
