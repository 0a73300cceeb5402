//! General-affine differential geometry of plane and space curves.
//!
//! The crate computes the general-affine (GA), equiaffine and projective
//! differential invariants of nondegenerate curves, reconstructs curves from
//! prescribed curvature data by integrating the associated linear ODEs,
//! evaluates the extremality (variational) equations of the GA length and
//! curvature functionals, recovers graph immersions through the Abel-equation
//! reductions, and classifies constant-curvature curves against the known
//! catalogs.
//!
//! Derivatives are exact: curves are evaluated as truncated Taylor jets
//! ([`jet::Jet`]), so the high-order derivative combinations entering the
//! invariants carry no finite-difference noise (sampled input being the
//! documented exception).

pub mod abel;
pub mod classify;
pub mod curve;
pub mod error;
pub mod expr;
pub mod extremal;
pub mod io;
pub mod jet;
pub mod ode;
pub mod plane;
pub mod quad;
pub mod reconstruct;
pub mod roots;
pub mod space;
pub mod tol;

pub use curve::{CurveSpec, SampleGrid, Source};
pub use error::{Error, Result};
pub use expr::{Bindings, Expr};
pub use jet::Jet;
