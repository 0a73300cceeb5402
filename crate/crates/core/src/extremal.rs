//! Extremality (variational) equations as pointwise residual functionals of
//! curvature data: the general-affine length equation in the plane, the
//! generalized curvature functional, the space pair, the equiaffine space
//! criterion, and the projective equations for plane and space curves.
//!
//! One related statement is documented here rather than tested at runtime:
//! the first variation of the total curvature integral of k ds vanishes for
//! every compactly supported deformation, identically in the curve.  That is
//! a statement about deformations of the frame, not a property computable
//! from a curvature profile alone, so no residual functional corresponds to
//! it.

use serde::Serialize;

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::expr::{Bindings, Expr};
use crate::jet::Jet;
use crate::reconstruct::ProfileFn;
use crate::space::equiaffine_space_invariants;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquationId {
    GaPlane,
    GaPlaneGeneral,
    GaSpace1,
    GaSpace2,
    EquiaffineSpace,
    ProjPlane,
    ProjSpace1,
    ProjSpace2,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub equation: EquationId,
    pub grid: Vec<f64>,
    pub residuals: Vec<f64>,
    pub sup_norm: f64,
    /// root mean square of the residuals over the grid
    pub l2_norm: f64,
    pub tolerance: f64,
    pub extremal: bool,
}

impl ResidualReport {
    fn assemble(equation: EquationId, grid: Vec<f64>, residuals: Vec<f64>, sup_k: f64) -> Self {
        let sup_norm = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        let l2_norm = if residuals.is_empty() {
            0.0
        } else {
            (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt()
        };
        let tolerance = tol::extremal(sup_k);
        ResidualReport {
            equation,
            grid,
            residuals,
            sup_norm,
            l2_norm,
            tolerance,
            extremal: sup_norm <= tolerance,
        }
    }

    pub fn residuals_csv(&self) -> String {
        use crate::io::fmt_g17;
        let mut out = String::from("t,residual\n");
        for (t, r) in self.grid.iter().zip(&self.residuals) {
            out.push_str(&format!("{},{}\n", fmt_g17(*t), fmt_g17(*r)));
        }
        out
    }
}

/// Grid points where the profiles stay clear of poles.
fn usable_points(grid: &[f64], profiles: &[&ProfileFn]) -> Vec<f64> {
    grid.iter()
        .copied()
        .filter(|t| {
            profiles.iter().all(|p| {
                p.value(*t)
                    .map(|v| v.is_finite() && v.abs() <= tol::POLE_CUTOFF)
                    .unwrap_or(false)
            })
        })
        .collect()
}

fn sup_value(grid: &[f64], p: &ProfileFn) -> f64 {
    grid.iter()
        .filter_map(|t| p.value(*t).ok())
        .fold(0.0f64, |m, v| m.max(v.abs()))
}

/// k''' + (3/2) k k'' + (1/2) k'^2 + (1/2) k^2 k' + eps k'.
pub fn ga_plane_residual(k: &ProfileFn, eps: i8, grid: &[f64]) -> Result<ResidualReport> {
    let pts = usable_points(grid, &[k]);
    let e = eps as f64;
    let mut residuals = Vec::with_capacity(pts.len());
    for &t in &pts {
        let kj = k.jet(t, 3)?;
        let (k0, k1, k2, k3) = (
            kj.value(),
            kj.derivative(1)?,
            kj.derivative(2)?,
            kj.derivative(3)?,
        );
        residuals.push(k3 + 1.5 * k0 * k2 + 0.5 * k1 * k1 + 0.5 * k0 * k0 * k1 + e * k1);
    }
    Ok(ResidualReport::assemble(
        EquationId::GaPlane,
        pts.clone(),
        residuals,
        sup_value(&pts, k),
    ))
}

/// The integrand f(k) of the generalized curvature functional,
/// differentiated through jets in the k variable.
#[derive(Debug, Clone)]
pub struct CurvatureFunctionalSpec {
    expr: Expr,
}

impl CurvatureFunctionalSpec {
    /// Parse a one-variable expression in the symbol `k`.
    pub fn parse(src: &str) -> Result<Self> {
        let raw = Expr::parse(src)?;
        fn remap(e: Expr) -> Result<Expr> {
            Ok(match e {
                Expr::Param(name) if name == "k" => Expr::Var,
                Expr::Var => {
                    return Err(Error::ProfileMismatch(
                        "the functional integrand is a function of k, not t".into(),
                    ))
                }
                Expr::Neg(inner) => Expr::Neg(Box::new(remap(*inner)?)),
                Expr::Bin(op, l, r) => Expr::Bin(op, Box::new(remap(*l)?), Box::new(remap(*r)?)),
                Expr::Call(f, arg) => Expr::Call(f, Box::new(remap(*arg)?)),
                other => other,
            })
        }
        Ok(CurvatureFunctionalSpec { expr: remap(raw)? })
    }

    /// Taylor coefficients of f around `k0`.
    pub fn jet_at(&self, k0: f64, order: usize) -> Result<Jet> {
        self.expr
            .eval_jet(&Jet::variable(k0, order)?, &Bindings::new())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneralResidualReport {
    pub report: ResidualReport,
    /// the assembled G at the grid points
    pub g_values: Vec<f64>,
}

/// Residual of the generalized functional: with
/// G = 4 f''''(k) k'^3 + 12 f'''(k) k' k'' + f''(k)(4 k''' - k' k^2 + 16 eps k')
///     - f'(k) k k' + f(k) k',
/// the equation reads G'' + (3/2) G' k + (1/2) G k' + (1/2) G k^2 + eps G = 0.
pub fn ga_plane_general_residual(
    k: &ProfileFn,
    eps: i8,
    f: &CurvatureFunctionalSpec,
    grid: &[f64],
) -> Result<GeneralResidualReport> {
    let pts = usable_points(grid, &[k]);
    let e = eps as f64;
    let mut residuals = Vec::with_capacity(pts.len());
    let mut g_values = Vec::with_capacity(pts.len());
    for &t in &pts {
        let kj = k.jet(t, 5)?;
        let outer = f.jet_at(kj.value(), 8)?;
        let f0 = Jet::compose(&outer, &kj);
        let f1 = Jet::compose(&outer.deriv(), &kj);
        let f2 = Jet::compose(&outer.deriv().deriv(), &kj);
        let f3 = Jet::compose(&outer.deriv().deriv().deriv(), &kj);
        let f4 = Jet::compose(&outer.deriv().deriv().deriv().deriv(), &kj);
        let kp = kj.deriv();
        let kpp = kp.deriv();
        let kppp = kpp.deriv();
        let g = f4
            .mul(&kp.powi(3)?)
            .scale(4.0)
            .add(&f3.mul(&kp).mul(&kpp).scale(12.0))
            .add(&f2.mul(
                &kppp
                    .scale(4.0)
                    .sub(&kp.mul(&kj.mul(&kj)))
                    .add(&kp.scale(16.0 * e)),
            ))
            .sub(&f1.mul(&kj).mul(&kp))
            .add(&f0.mul(&kp));
        let g0 = g.value();
        let g1 = g.derivative(1)?;
        let g2 = g.derivative(2)?;
        let k0 = kj.value();
        let k1 = kj.derivative(1)?;
        residuals.push(g2 + 1.5 * g1 * k0 + 0.5 * g0 * k1 + 0.5 * g0 * k0 * k0 + e * g0);
        g_values.push(g0);
    }
    Ok(GeneralResidualReport {
        report: ResidualReport::assemble(
            EquationId::GaPlaneGeneral,
            pts.clone(),
            residuals,
            sup_value(&pts, k),
        ),
        g_values,
    })
}

/// The pair of equations for general-affine extremal space curves:
/// k''' + (3/2) k k'' + (1/2) k'^2 + (1/2) k^2 k' - (1/5) eps k' + (6/5) M' = 0,
/// k'' + (2/3) k k' + (5/6) eps k' M - (3/2) eps k M' - eps M'' = 0.
pub fn ga_space_residuals(
    k: &ProfileFn,
    m: &ProfileFn,
    eps: i8,
    grid: &[f64],
) -> Result<(ResidualReport, ResidualReport)> {
    let pts = usable_points(grid, &[k, m]);
    let e = eps as f64;
    let mut r1 = Vec::with_capacity(pts.len());
    let mut r2 = Vec::with_capacity(pts.len());
    for &t in &pts {
        let kj = k.jet(t, 3)?;
        let mj = m.jet(t, 2)?;
        let (k0, k1, k2, k3) = (
            kj.value(),
            kj.derivative(1)?,
            kj.derivative(2)?,
            kj.derivative(3)?,
        );
        let (m0, m1, m2) = (mj.value(), mj.derivative(1)?, mj.derivative(2)?);
        r1.push(
            k3 + 1.5 * k0 * k2 + 0.5 * k1 * k1 + 0.5 * k0 * k0 * k1 - 0.2 * e * k1 + 1.2 * m1,
        );
        r2.push(k2 + 2.0 / 3.0 * k0 * k1 + 5.0 / 6.0 * e * k1 * m0 - 1.5 * e * k0 * m1 - e * m2);
    }
    let sup_k = sup_value(&pts, k).max(sup_value(&pts, m));
    Ok((
        ResidualReport::assemble(EquationId::GaSpace1, pts.clone(), r1, sup_k),
        ResidualReport::assemble(EquationId::GaSpace2, pts, r2, sup_k),
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearComplexReport {
    pub plane: ResidualReport,
    pub space_first: ResidualReport,
    pub space_second: ResidualReport,
    /// the pair reduces to the single plane equation under M = eps k
    pub reduction_holds: bool,
}

/// Under M = eps k (theta_3 = 0) the space pair collapses: the first space
/// equation coincides with the plane extremality equation and the second
/// vanishes identically.
pub fn linear_complex_extremal_check(
    k: &ProfileFn,
    eps: i8,
    grid: &[f64],
) -> Result<LinearComplexReport> {
    let m = k.scaled(eps as f64);
    let plane = ga_plane_residual(k, eps, grid)?;
    let (space_first, space_second) = ga_space_residuals(k, &m, eps, grid)?;
    let scale = 1.0 + plane.sup_norm;
    let mut reduction_holds =
        space_second.sup_norm <= 1e-9 * (1.0 + sup_value(grid, k)).powi(3);
    for (a, b) in plane.residuals.iter().zip(&space_first.residuals) {
        if (a - b).abs() > 1e-9 * scale {
            reduction_holds = false;
        }
    }
    Ok(LinearComplexReport {
        plane,
        space_first,
        space_second,
        reduction_holds,
    })
}

impl ProfileFn {
    /// The profile multiplied by a constant.
    pub fn scaled(&self, factor: f64) -> ProfileFn {
        match self {
            ProfileFn::Constant(v) => ProfileFn::Constant(factor * v),
            ProfileFn::Expr { expr, params } => ProfileFn::Expr {
                expr: Expr::Bin(
                    crate::expr::BinOp::Mul,
                    Box::new(Expr::Number(factor)),
                    Box::new(expr.clone()),
                ),
                params: params.clone(),
            },
            ProfileFn::Samples { ts, values } => ProfileFn::Samples {
                ts: ts.clone(),
                values: values.iter().map(|v| factor * v).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EquiaffineExtremalReport {
    pub sup_ell: f64,
    pub sup_m: f64,
    pub tolerance: f64,
    pub extremal: bool,
}

/// A space curve is equiaffine extremal iff both equiaffine curvatures
/// vanish (the cubic-parabola case).
pub fn equiaffine_space_extremal_check(
    spec: &CurveSpec,
    grid: &[f64],
) -> Result<EquiaffineExtremalReport> {
    let mut sup_ell = 0.0f64;
    let mut sup_m = 0.0f64;
    for &t in grid {
        let d = equiaffine_space_invariants(spec, t, true)?;
        sup_ell = sup_ell.max(d.ell.abs());
        sup_m = sup_m.max(d.m.abs());
    }
    let tolerance = tol::EXTREMAL_BASE;
    Ok(EquiaffineExtremalReport {
        sup_ell,
        sup_m,
        tolerance,
        extremal: sup_ell + sup_m <= tolerance,
    })
}

/// Projective plane extremality: k''' + 8 k k' = 0.
pub fn projective_plane_residual(k: &ProfileFn, grid: &[f64]) -> Result<ResidualReport> {
    let pts = usable_points(grid, &[k]);
    let mut residuals = Vec::with_capacity(pts.len());
    for &t in &pts {
        let kj = k.jet(t, 3)?;
        residuals.push(kj.derivative(3)? + 8.0 * kj.value() * kj.derivative(1)?);
    }
    Ok(ResidualReport::assemble(
        EquationId::ProjPlane,
        pts.clone(),
        residuals,
        sup_value(&pts, k),
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjSpaceReport {
    pub first: ResidualReport,
    pub second: ResidualReport,
    pub extremal: bool,
    /// both curvatures constant over the grid (the theorem's reduction)
    pub curvatures_constant: bool,
}

/// Projective space extremality:
/// k1''' + 16 k1 k1' - k2'/2 = 0 and
/// k1'''' + 16 k1 k1'' + 16 k1'^2 + 6 k1' - k2''/2 = 0,
/// equivalent to both curvatures being constant.
pub fn projective_space_residuals(
    k1: &ProfileFn,
    k2: &ProfileFn,
    grid: &[f64],
) -> Result<ProjSpaceReport> {
    let pts = usable_points(grid, &[k1, k2]);
    let mut r1 = Vec::with_capacity(pts.len());
    let mut r2 = Vec::with_capacity(pts.len());
    let mut max_deriv = 0.0f64;
    for &t in &pts {
        let a = k1.jet(t, 4)?;
        let b = k2.jet(t, 2)?;
        let (a0, a1, a2, a3, a4) = (
            a.value(),
            a.derivative(1)?,
            a.derivative(2)?,
            a.derivative(3)?,
            a.derivative(4)?,
        );
        let (b1, b2) = (b.derivative(1)?, b.derivative(2)?);
        r1.push(a3 + 16.0 * a0 * a1 - 0.5 * b1);
        r2.push(a4 + 16.0 * a0 * a2 + 16.0 * a1 * a1 + 6.0 * a1 - 0.5 * b2);
        max_deriv = max_deriv.max(a1.abs()).max(b1.abs());
    }
    let sup_k = sup_value(&pts, k1).max(sup_value(&pts, k2));
    let first = ResidualReport::assemble(EquationId::ProjSpace1, pts.clone(), r1, sup_k);
    let second = ResidualReport::assemble(EquationId::ProjSpace2, pts, r2, sup_k);
    let extremal = first.extremal && second.extremal;
    let curvatures_constant = max_deriv <= tol::extremal(sup_k);
    Ok(ProjSpaceReport {
        first,
        second,
        extremal,
        curvatures_constant,
    })
}
