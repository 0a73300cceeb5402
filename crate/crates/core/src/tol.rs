//! Centralized tolerances.  Every threshold used by the invariant pipelines
//! is defined here together with its scaling rule, so reports can print the
//! value actually applied.

/// Base factor for declaring an affine inflection point.  The length density
/// L mixes magnitudes of b and a^2, hence the scaled form below.
pub const SINGULAR_BASE: f64 = 1e-9;

/// |L| threshold below which a point counts as an affine inflection.
pub fn singular(a: f64, b: f64) -> f64 {
    SINGULAR_BASE * (1.0 + b.abs() + a * a)
}

/// Frame-determinant degeneracy factor, scaled by the derivative magnitudes.
pub const DEGENERATE_BASE: f64 = 1e-12;

/// Sup-norm threshold on theta_3 over a scan window for declaring a linear
/// complex.  Window-level: theta_3 = 0 is a global property.
pub const LINEAR_COMPLEX: f64 = 1e-8;

/// Root-separation tolerance for multiplicity decisions in the classifiers.
pub const ROOT_SEPARATION: f64 = 1e-8;

/// Extremality verdict: sup-residual <= EXTREMAL_BASE * (1 + sup|k|)^3.
/// Cubic scaling because the residuals are cubic in the curvature.
pub const EXTREMAL_BASE: f64 = 1e-7;

pub fn extremal(sup_k: f64) -> f64 {
    EXTREMAL_BASE * (1.0 + sup_k).powi(3)
}

/// Curvature magnitude treated as a pole; residual grids and reconstruction
/// intervals exclude such windows.
pub const POLE_CUTOFF: f64 = 1e6;

/// Reconstruction segments are trimmed to |k| below this bound: the ODE
/// coefficients scale like k^2, and integrating closer to a pole than this
/// underflows the step size before the cutoff is even reached.
pub const POLE_TRIM: f64 = 1e3;

/// Default integrator tolerances for reconstruction.
pub const RK_REL: f64 = 1e-10;
pub const RK_ABS: f64 = 1e-10;

/// Relative tolerance of the equiaffine reparametrization quadrature.
pub const REPARAM_QUAD: f64 = 1e-10;

/// |a| threshold for accepting a parameter as already equiaffine.
pub const EQUIAFFINE_PARAM: f64 = 1e-8;

/// Internal dual-route agreement (frame route vs reparametrized route).
pub const DUAL_ROUTE: f64 = 1e-8;
