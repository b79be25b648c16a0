//! Exact symbolic engine for derived Rees algebras, deformation to the
//! normal bundle, cotangent complexes and derived blow-up charts over the
//! rationals. All verdicts come from exact homological computation
//! (Groebner bases and syzygies); enumeration bounds are always reported.

pub mod error;
pub mod scalar;
pub mod poly;
pub mod text;
pub mod groebner;
pub mod linalg;
pub mod complex;
pub mod homology;
pub mod dg;
pub mod cotangent;
pub mod rees;
pub mod blowup;
pub mod graded;

pub use error::{Error, Result};
pub use scalar::{q, q_ratio, Q, Scalar};

/// Polynomial over the concrete coefficient field.
pub type QPoly = poly::Polynomial<Q>;
/// Groebner basis over the concrete coefficient field.
pub type QGroebnerBasis = groebner::GroebnerBasis<Q>;
