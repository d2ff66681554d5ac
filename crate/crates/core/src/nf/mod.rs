//! Exact arithmetic in Q, quadratic fields and cyclotomic fields, with certified
//! complex embeddings and Weil heights.

mod auto;
mod element;
mod embed;
mod field;
pub(crate) mod fixed;
mod height;
pub(crate) mod kpoly;
mod minpoly;
pub mod qpoly;
pub mod roots;
mod solve;
mod sqrt;

pub use auto::{apply_auto, galois_group, norm_polynomial, Automorphism};
pub use element::{AlgNumber, ArithOp};
pub use embed::{embeddings, house, house_within, Embedding, MAX_PRECISION_RETRIES};
pub use field::{cyclotomic_polynomial, euler_phi, Field, FieldSpec};
pub use height::{is_root_of_unity, weil_height, weil_height_within, DEFAULT_HEIGHT_TOL};
pub use minpoly::{minimal_polynomial, real_cyclotomic_minpoly, IntPoly};
pub use solve::{roots_in_field, FieldRoots};
pub use sqrt::{sqrt_in_field, sqrt_rational, SqrtBranch};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NfError {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precision {requested:e} not reached after {MAX_PRECISION_RETRIES} doublings")]
    PrecisionExhausted { requested: f64 },
}
