//! Space-curve invariants: fourth-order ODE coefficients, general-affine
//! length density and sign, first and second curvatures k and M, the
//! equiaffine specialization (curvature and torsion), and the projective
//! invariants theta_3, theta_4 with linear-complex detection.

use serde::Serialize;

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::jet::{Jet, DEFAULT_ORDER};
use crate::plane::{refine_zero, to_sigma_jet, Event, EventKind};
use crate::tol;

#[derive(Debug, Clone, Serialize)]
pub struct SpaceInvariantRecord {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// L = -(b + 11 a^2/36 - 2 a'/3); ds/dt = sqrt(|L|).
    #[serde(rename = "L")]
    pub l_density: f64,
    pub eps: i8,
    pub ds_dt: f64,
    pub k: Option<f64>,
    #[serde(rename = "M")]
    pub m_curv: Option<f64>,
    pub theta3: Option<f64>,
    pub theta4: Option<f64>,
    /// Equiaffine curvature/torsion, populated when the parameter is already
    /// equiaffine (a = 0) at this point.
    pub ell_equi: Option<f64>,
    pub m_equi: Option<f64>,
    pub flags: Vec<String>,
}

pub const FLAG_INFLECTION: &str = "affine_inflection";
pub const FLAG_INSUFFICIENT: &str = "insufficient_order";
pub const FLAG_LINEAR_COMPLEX: &str = "linear_complex";

/// Solve x'''' = a x''' + b x'' + c x' in the jet ring (3x3 Cramer).
pub fn space_ode_coeffs_jets(x: &[Jet]) -> Result<(Jet, Jet, Jet)> {
    assert_eq!(x.len(), 3, "space curves have three coordinates");
    let n = x.iter().map(|j| j.order()).min().unwrap();
    if n < 4 {
        return Err(Error::InsufficientOrder {
            requested: 4,
            order: n,
        });
    }
    let ord = n - 4;
    let d1: Vec<Jet> = x.iter().map(|c| c.deriv().truncated(ord)).collect();
    let d2: Vec<Jet> = x.iter().map(|c| c.deriv().deriv().truncated(ord)).collect();
    let d3: Vec<Jet> = x
        .iter()
        .map(|c| c.deriv().deriv().deriv().truncated(ord))
        .collect();
    let d4: Vec<Jet> = x
        .iter()
        .map(|c| c.deriv().deriv().deriv().deriv().truncated(ord))
        .collect();

    let den = det3(&d3, &d2, &d1);
    let norm = |v: &[Jet]| -> f64 { v.iter().map(|j| j.value().powi(2)).sum::<f64>().sqrt() };
    if den.value().abs() <= tol::DEGENERATE_BASE * norm(&d1) * norm(&d2) * norm(&d3) {
        return Err(Error::Degenerate {
            t: x[0].value(),
            det: den.value(),
        });
    }
    let a = det3(&d4, &d2, &d1).div(&den)?;
    let b = det3(&d3, &d4, &d1).div(&den)?;
    let c = det3(&d3, &d2, &d4).div(&den)?;
    Ok((a, b, c))
}

fn det3(u: &[Jet], v: &[Jet], w: &[Jet]) -> Jet {
    let m0 = v[1].mul(&w[2]).sub(&v[2].mul(&w[1]));
    let m1 = v[0].mul(&w[2]).sub(&v[2].mul(&w[0]));
    let m2 = v[0].mul(&w[1]).sub(&v[1].mul(&w[0]));
    u[0].mul(&m0).sub(&u[1].mul(&m1)).add(&u[2].mul(&m2))
}

/// `(A, B, C)` of `y'''' = A y''' + B y'' + C y'` after the change of
/// parameter `sigma(t)`, as jets in t.
pub fn space_reparam(a: &Jet, b: &Jet, c: &Jet, sigma: &Jet) -> Result<(Jet, Jet, Jet)> {
    let sp = sigma.deriv();
    let r2 = sp.deriv().div(&sp)?; // sigma''/sigma'
    let r3 = sp.deriv().deriv().div(&sp)?; // sigma'''/sigma'
    let r4 = sp.deriv().deriv().deriv().div(&sp)?; // sigma''''/sigma'
    let sp2 = sp.mul(&sp);
    let a_new = a.sub(&r2.scale(6.0)).div(&sp)?;
    let b_new = b
        .add(&a.mul(&r2).scale(3.0))
        .sub(&r2.mul(&r2).scale(3.0))
        .sub(&r3.scale(4.0))
        .div(&sp2)?;
    let c_new = c
        .add(&b.mul(&r2))
        .add(&a.mul(&r3))
        .sub(&r4)
        .div(&sp2.mul(&sp))?;
    Ok((a_new, b_new, c_new))
}

/// L = -(b + 11 a^2 / 36 - 2 a' / 3) as a jet.
pub fn length_density_jet(a: &Jet, b: &Jet) -> Jet {
    b.add(&a.mul(a).scale(11.0 / 36.0))
        .sub(&a.deriv().scale(2.0 / 3.0))
        .neg()
}

/// m / lambda^3 = -c - ab/6 - a^3/36 + a''/6 - a a'/12 + a^3/216 as a jet.
fn torsion_density_jet(a: &Jet, b: &Jet, c: &Jet) -> Jet {
    let a3 = a.mul(a).mul(a);
    c.neg()
        .sub(&a.mul(b).scale(1.0 / 6.0))
        .sub(&a3.scale(1.0 / 36.0))
        .add(&a.deriv().deriv().scale(1.0 / 6.0))
        .sub(&a.mul(&a.deriv()).scale(1.0 / 12.0))
        .add(&a3.scale(1.0 / 216.0))
}

/// Full invariant record from precomputed coordinate jets.
pub fn space_invariants_from_jets(t: f64, x: &[Jet]) -> Result<SpaceInvariantRecord> {
    let (a, b, c) = space_ode_coeffs_jets(x)?;
    let a0 = a.value();
    let b0 = b.value();
    let c0 = c.value();
    let l_jet = length_density_jet(&a, &b);
    let l0 = l_jet.value();

    let mut flags = Vec::new();
    let tol_sing = tol::singular(a0, b0);

    let (ell_equi, m_equi) = if a0.abs() <= tol::EQUIAFFINE_PARAM {
        (Some(-b0), Some(-c0))
    } else {
        (None, None)
    };

    let mut record = SpaceInvariantRecord {
        t,
        a: a0,
        b: b0,
        c: c0,
        l_density: l0,
        eps: 0,
        ds_dt: l0.abs().sqrt(),
        k: None,
        m_curv: None,
        theta3: None,
        theta4: None,
        ell_equi,
        m_equi,
        flags: Vec::new(),
    };

    if l0.abs() <= tol_sing {
        flags.push(FLAG_INFLECTION.to_string());
        record.flags = flags;
        return Ok(record);
    }
    let eps = if l0 > 0.0 { 1i8 } else { -1i8 };
    record.eps = eps;

    if l_jet.order() < 1 {
        flags.push(FLAG_INSUFFICIENT.to_string());
        record.flags = flags;
        return Ok(record);
    }

    let sprime = l_jet.scale(eps as f64).sqrt()?;

    // first curvature, route 1: k = -(1/3) A(sigma), sigma the arc length
    let sigma = sprime.antideriv(0.0);
    let (a_arc, _, _) = space_reparam(&a, &b, &c, &sigma)?;
    let k_route1 = -a_arc.value() / 3.0;
    // route 2: k = d log(ell)/ds = (-a/3 + L'/L) / sqrt(|L|)
    let k_jet = a
        .scale(-1.0 / 3.0)
        .add(&l_jet.deriv().div(&l_jet)?)
        .div(&sprime)?;
    let k0 = k_jet.value();
    if (k_route1 - k0).abs() > tol::DUAL_ROUTE * (1.0 + k0.abs()) {
        return Err(Error::CrossCheck(format!(
            "first-curvature routes disagree at t = {t}: {k_route1} vs {k0}"
        )));
    }
    record.k = Some(k0);

    // second curvature M = (m / lambda^3) / |L|^(3/2)
    let m_jet = torsion_density_jet(&a, &b, &c).div(&l_jet.scale(eps as f64).powf(1.5)?)?;
    let m0 = m_jet.value();
    record.m_curv = Some(m0);

    // theta_3 = (M - eps k)/4, cross-checked against the reduction of the
    // projectivized equation; theta_4 from the closed form.
    let theta3 = 0.25 * (m0 - eps as f64 * k0);
    let k_sig = to_sigma_jet(&k_jet, &sprime, 2)?;
    let m_sig = to_sigma_jet(&m_jet, &sprime, 2)?;
    let (p1, p2, p3, p4) = ga_to_p_coeffs(&k_sig, &m_sig, eps);
    let (pp2, pp3, _) = semi_canonical(&p1, &p2, &p3, &p4);
    let theta3_proj = pp3.value() - 1.5 * pp2.derivative(1).unwrap_or(f64::NAN);
    // the projective route cancels terms of size ~(|k|+|M|)^3, hence the
    // cubic scale on the agreement tolerance
    let theta_scale = (1.0 + k0.abs() + m0.abs()).powi(3);
    if (theta3 - theta3_proj).abs() > 1e-9 * theta_scale {
        return Err(Error::CrossCheck(format!(
            "theta_3 routes disagree at t = {t}: {theta3} vs {theta3_proj}"
        )));
    }
    record.theta3 = Some(theta3);

    let kdot = k_sig.derivative(1).unwrap();
    let mdot = m_sig.derivative(1).unwrap();
    let e = eps as f64;
    record.theta4 =
        Some(-0.75 * k0 * m0 - 0.5 * mdot + 0.2 * e * kdot + 0.3 * e * k0 * k0 - 0.09);

    record.flags = flags;
    Ok(record)
}

pub fn space_ode_coeffs(spec: &CurveSpec, t: f64) -> Result<(Jet, Jet, Jet)> {
    let order = if spec.is_sampled() { 4 } else { DEFAULT_ORDER };
    space_ode_coeffs_jets(&spec.eval(t, order)?)
}

pub fn space_invariants_at(spec: &CurveSpec, t: f64) -> Result<SpaceInvariantRecord> {
    let order = if spec.is_sampled() { 4 } else { DEFAULT_ORDER };
    space_invariants_from_jets(t, &spec.eval(t, order)?)
}

/// p-coefficients of `x'''' + 4 p1 x''' + 6 p2 x'' + 4 p3 x' + p4 x = 0`
/// for the curve with GA curvatures (k, M) in the arc-length parameter
/// (all jets in that parameter).
pub fn ga_to_p_coeffs(k: &Jet, m: &Jet, eps: i8) -> (Jet, Jet, Jet, Jet) {
    let e = eps as f64;
    let n = k.order();
    let p1 = k.scale(0.75);
    let p2 = k
        .deriv()
        .scale(2.0)
        .add(&k.mul(k).scale(11.0 / 4.0))
        .add_scalar(e)
        .scale(1.0 / 6.0);
    let k3 = k.mul(k).mul(k);
    let p3 = m
        .add(&k.scale(0.5 * e))
        .add(&k.deriv().deriv().scale(0.5))
        .add(&k.mul(&k.deriv()).scale(7.0 / 4.0))
        .add(&k3.scale(0.75))
        .scale(0.25);
    let p4 = Jet::constant(0.0, n);
    (p1, p2, p3, p4)
}

/// Semi-canonical reduction of the projectivized fourth-order equation:
/// the substitution removing the third-derivative term.
pub fn semi_canonical(p1: &Jet, p2: &Jet, p3: &Jet, p4: &Jet) -> (Jet, Jet, Jet) {
    let p1p = p1.deriv();
    let p1pp = p1p.deriv();
    let p1ppp = p1pp.deriv();
    let p1sq = p1.mul(p1);
    let big_p2 = p2.sub(&p1sq).sub(&p1p);
    let big_p3 = p3
        .sub(&p1.mul(p2).scale(3.0))
        .add(&p1sq.mul(p1).scale(2.0))
        .sub(&p1pp);
    let big_p4 = p4
        .sub(&p1.mul(p3).scale(4.0))
        .add(&p1sq.mul(p2).scale(6.0))
        .sub(&p1p.mul(p2).scale(6.0))
        .sub(&p1sq.mul(&p1sq).scale(3.0))
        .add(&p1sq.mul(&p1p).scale(6.0))
        .add(&p1p.mul(&p1p).scale(3.0))
        .sub(&p1ppp);
    (big_p2, big_p3, big_p4)
}

/// Fundamental projective forms from the reduced coefficients:
/// theta_3 = P3 - (3/2) P2', theta_4 = P4 - (9/5) P2'' - (81/25) P2^2 - 2 theta_3'.
pub fn theta_from_p(p2: &Jet, p3: &Jet, p4: &Jet) -> (f64, f64) {
    let theta3_jet = p3.sub(&p2.deriv().scale(1.5));
    let theta4 = p4.value()
        - 9.0 / 5.0 * p2.deriv().deriv().value()
        - 81.0 / 25.0 * p2.value().powi(2)
        - 2.0 * theta3_jet.deriv().value();
    (theta3_jet.value(), theta4)
}

/// The closed forms in the GA curvatures: theta_3 = (M - eps k)/4 and
/// theta_4 = -(3/4) k M - M'/2 + eps k'/5 + (3/10) eps k^2 - 9/100.
pub fn theta_from_ga(k: &Jet, m: &Jet, eps: i8) -> (f64, f64) {
    let e = eps as f64;
    let k0 = k.value();
    let m0 = m.value();
    let kdot = k.derivative(1).unwrap_or(0.0);
    let mdot = m.derivative(1).unwrap_or(0.0);
    (
        0.25 * (m0 - e * k0),
        -0.75 * k0 * m0 - 0.5 * mdot + 0.2 * e * kdot + 0.3 * e * k0 * k0 - 0.09,
    )
}

#[derive(Debug, Clone)]
pub struct EquiaffineSpaceData {
    pub ell: f64,
    pub m: f64,
    /// GA data (ds/du, k, M) recomputed from the equiaffine quantities,
    /// available when ell != 0.
    pub ga: Option<(f64, f64, f64)>,
}

/// Equiaffine curvature and torsion.  With `auto_reparam` the curve is
/// renormalized by du = |det(x', x'', x''')|^(1/6) dt; otherwise `t` must
/// already be an equiaffine length parameter (a = 0).
pub fn equiaffine_space_invariants(
    spec: &CurveSpec,
    t: f64,
    auto_reparam: bool,
) -> Result<EquiaffineSpaceData> {
    let x = spec.eval(t, DEFAULT_ORDER)?;
    let (a, b, c) = space_ode_coeffs_jets(&x)?;

    let (ell_jet, m_val, uprime) = if auto_reparam {
        let d1: Vec<Jet> = x.iter().map(|j| j.deriv()).collect();
        let d2: Vec<Jet> = x.iter().map(|j| j.deriv().deriv()).collect();
        let d3: Vec<Jet> = x.iter().map(|j| j.deriv().deriv().deriv()).collect();
        let det = det3(&d1, &d2, &d3);
        let det_abs = if det.value() < 0.0 { det.neg() } else { det };
        let uprime = det_abs.powf(1.0 / 6.0)?;
        let u = uprime.antideriv(0.0);
        let (a_u, b_u, c_u) = space_reparam(&a, &b, &c, &u)?;
        debug_assert!(a_u.value().abs() <= 1e-7 * (1.0 + a.value().abs()));
        (b_u.neg(), -c_u.value(), uprime)
    } else {
        if a.value().abs() > tol::EQUIAFFINE_PARAM {
            return Err(Error::NotEquiaffineParameter { t, a: a.value() });
        }
        (b.neg(), -c.value(), Jet::constant(1.0, a.order()))
    };

    let ell = ell_jet.value();
    let ga = if ell.abs() > tol::SINGULAR_BASE * (1.0 + ell.abs()) {
        // L = |ell|; ds = sqrt(L) du; k = L' L^(-3/2); M = m L^(-3/2)
        let l_abs = ell.abs();
        let ell_du = ell_jet.deriv().div(&uprime)?.value();
        let k = ell.signum() * ell_du * l_abs.powf(-1.5);
        let m_big = m_val * l_abs.powf(-1.5);
        Some((l_abs.sqrt(), k, m_big))
    } else {
        None
    };

    Ok(EquiaffineSpaceData { ell, m: m_val, ga })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpaceScan {
    pub records: Vec<SpaceInvariantRecord>,
    pub events: Vec<Event>,
    /// sup |theta_3| over the window is below the linear-complex tolerance.
    pub linear_complex: bool,
    pub sup_theta3: f64,
}

pub fn scan_space(spec: &CurveSpec, grid: &[f64]) -> Result<SpaceScan> {
    let order = if spec.is_sampled() { 4 } else { DEFAULT_ORDER };
    let mut records = Vec::with_capacity(grid.len());
    for &t in grid {
        match spec
            .eval(t, order)
            .and_then(|jets| space_invariants_from_jets(t, &jets))
        {
            Ok(r) => records.push(r),
            Err(Error::Degenerate { .. }) => {}
            Err(e) => return Err(e),
        }
    }

    let l_at = |t: f64| -> Option<f64> {
        let jets = spec.eval(t, order).ok()?;
        let (a, b, _) = space_ode_coeffs_jets(&jets).ok()?;
        Some(length_density_jet(&a, &b).value())
    };
    let k_at = |t: f64| -> Option<f64> {
        let jets = spec.eval(t, order).ok()?;
        space_invariants_from_jets(t, &jets).ok()?.k
    };

    let mut events = Vec::new();
    for w in records.windows(2) {
        let (r0, r1) = (&w[0], &w[1]);
        if r0.eps != 0 && r1.eps != 0 && r0.eps != r1.eps {
            if let Some(t) = refine_zero(r0.t, r1.t, r0.l_density, &l_at) {
                events.push(Event {
                    kind: EventKind::AffineInflection,
                    t,
                });
            }
        }
        if r0.eps == 0 {
            events.push(Event {
                kind: EventKind::AffineInflection,
                t: r0.t,
            });
        }
        if let (Some(k0), Some(k1)) = (r0.k, r1.k) {
            if k0 == 0.0 || (k0 > 0.0) != (k1 > 0.0) {
                if let Some(t) = refine_zero(r0.t, r1.t, k0, &k_at) {
                    events.push(Event {
                        kind: EventKind::FlatPoint,
                        t,
                    });
                }
            }
        }
    }
    events.sort_by(|x, y| x.t.partial_cmp(&y.t).unwrap());
    events.dedup_by(|x, y| x.kind == y.kind && (x.t - y.t).abs() < 1e-9);

    let sup_theta3 = records
        .iter()
        .filter_map(|r| r.theta3)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let any_theta = records.iter().any(|r| r.theta3.is_some());
    let linear_complex = any_theta && sup_theta3 <= tol::LINEAR_COMPLEX;
    if linear_complex {
        for r in &mut records {
            r.flags.push(FLAG_LINEAR_COMPLEX.to_string());
        }
    }

    Ok(SpaceScan {
        records,
        events,
        linear_complex,
        sup_theta3,
    })
}

pub fn records_to_csv(records: &[SpaceInvariantRecord]) -> String {
    use crate::io::{fmt_g17, fmt_opt};
    let mut out = String::from("t,a,b,c,L,eps,ds_dt,k,M,theta3,theta4,flags\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_g17(r.t),
            fmt_g17(r.a),
            fmt_g17(r.b),
            fmt_g17(r.c),
            fmt_g17(r.l_density),
            r.eps,
            fmt_g17(r.ds_dt),
            fmt_opt(r.k),
            fmt_opt(r.m_curv),
            fmt_opt(r.theta3),
            fmt_opt(r.theta4),
            r.flags.join(";")
        ));
    }
    out
}
