//! Adaptive explicit Runge-Kutta integration with the Dormand-Prince 5(4)
//! pair, FSAL, PI-free standard step control and Hermite dense output
//! (4th-order accurate between accepted steps).

use crate::error::{Error, Result};

/// Dormand-Prince 5(4) coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// 5th-order weights (row 7 of A, FSAL).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// Embedded 4th-order weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_step: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub fn_evals: usize,
    pub max_error_estimate: f64,
}

/// One accepted step with the data needed for dense output.
#[derive(Debug, Clone)]
struct Step {
    t0: f64,
    t1: f64,
    y0: Vec<f64>,
    y1: Vec<f64>,
    f0: Vec<f64>,
    f1: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct OdeSolution {
    steps: Vec<Step>,
    pub stats: OdeStats,
}

impl OdeSolution {
    pub fn t_start(&self) -> f64 {
        self.steps.first().map(|s| s.t0).unwrap_or(0.0)
    }

    pub fn t_end(&self) -> f64 {
        self.steps.last().map(|s| s.t1).unwrap_or(0.0)
    }

    /// Cubic Hermite interpolation of the state inside an accepted step.
    pub fn sample(&self, t: f64) -> Vec<f64> {
        let step = match self
            .steps
            .binary_search_by(|s| s.t1.partial_cmp(&t).unwrap())
        {
            Ok(i) => &self.steps[i],
            Err(i) => &self.steps[i.min(self.steps.len() - 1)],
        };
        let h = step.t1 - step.t0;
        let s = ((t - step.t0) / h).clamp(0.0, 1.0);
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        step.y0
            .iter()
            .zip(&step.y1)
            .zip(step.f0.iter().zip(&step.f1))
            .map(|((y0, y1), (f0, f1))| h00 * y0 + h * h10 * f0 + h01 * y1 + h * h11 * f1)
            .collect()
    }

    /// Derivative of the state at `t` (from the Hermite interpolant).
    pub fn sample_derivative(&self, t: f64) -> Vec<f64> {
        let step = match self
            .steps
            .binary_search_by(|s| s.t1.partial_cmp(&t).unwrap())
        {
            Ok(i) => &self.steps[i],
            Err(i) => &self.steps[i.min(self.steps.len() - 1)],
        };
        let h = step.t1 - step.t0;
        let s = ((t - step.t0) / h).clamp(0.0, 1.0);
        let d00 = 6.0 * s * (s - 1.0) / h;
        let d10 = (1.0 - s) * (1.0 - 3.0 * s);
        let d01 = -d00;
        let d11 = s * (3.0 * s - 2.0);
        step.y0
            .iter()
            .zip(&step.y1)
            .zip(step.f0.iter().zip(&step.f1))
            .map(|((y0, y1), (f0, f1))| d00 * y0 + d10 * f0 + d01 * y1 + d11 * f1)
            .collect()
    }
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (t1 > t0).
pub fn integrate(
    f: &dyn Fn(f64, &[f64]) -> Vec<f64>,
    t0: f64,
    t1: f64,
    y0: &[f64],
    opts: &OdeOptions,
) -> Result<OdeSolution> {
    let span = t1 - t0;
    if span <= 0.0 {
        return Err(Error::IntegratorFailure {
            t: t0,
            msg: "integration span must be positive".into(),
        });
    }
    let dim = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k0 = f(t, &y);
    let mut stats = OdeStats::default();
    stats.fn_evals += 1;
    let mut h = (span / 100.0).min(opts.max_step);
    let mut steps: Vec<Step> = Vec::new();

    while t < t1 {
        if stats.accepted + stats.rejected > opts.max_steps {
            return Err(Error::IntegratorFailure {
                t,
                msg: format!("step limit {} exceeded", opts.max_steps),
            });
        }
        if h < 1e-14 * span {
            return Err(Error::IntegratorFailure {
                t,
                msg: "step size underflow".into(),
            });
        }
        h = h.min(t1 - t).min(opts.max_step);

        let mut k = vec![k0.clone()];
        for stage in 0..6 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                let a = A[stage][j];
                if a != 0.0 {
                    for (yi, ki) in ys.iter_mut().zip(kj) {
                        *yi += h * a * ki;
                    }
                }
            }
            k.push(f(t + C[stage + 1] * h, &ys));
            stats.fn_evals += 1;
        }

        let mut y5 = y.clone();
        let mut err = vec![0.0; dim];
        for (j, kj) in k.iter().enumerate() {
            for i in 0..dim {
                y5[i] += h * B5[j] * kj[i];
                err[i] += h * (B5[j] - B4[j]) * kj[i];
            }
        }
        let mut norm = 0.0;
        for i in 0..dim {
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y5[i].abs());
            norm += (err[i] / scale).powi(2);
        }
        let norm = (norm / dim as f64).sqrt();

        if norm <= 1.0 || !norm.is_finite() {
            if !norm.is_finite() || y5.iter().any(|v| !v.is_finite()) {
                return Err(Error::IntegratorFailure {
                    t,
                    msg: "non-finite state".into(),
                });
            }
            let f1 = k.pop().unwrap(); // FSAL: stage 7 is f(t+h, y5)
            steps.push(Step {
                t0: t,
                t1: t + h,
                y0: y.clone(),
                y1: y5.clone(),
                f0: k0.clone(),
                f1: f1.clone(),
            });
            stats.accepted += 1;
            stats.max_error_estimate = stats.max_error_estimate.max(norm);
            t += h;
            y = y5;
            k0 = f1;
            let factor = if norm == 0.0 {
                5.0
            } else {
                (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
        } else {
            stats.rejected += 1;
            h *= (0.9 * norm.powf(-0.2)).clamp(0.2, 1.0);
        }
    }

    Ok(OdeSolution { steps, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_oscillator() {
        let f = |_t: f64, y: &[f64]| vec![y[1], -y[0]];
        let sol = integrate(&f, 0.0, 10.0, &[1.0, 0.0], &OdeOptions::default()).unwrap();
        for t in [0.5, 3.3, 7.7, 10.0] {
            let y = sol.sample(t);
            assert_relative_eq!(y[0], t.cos(), epsilon = 1e-8);
            assert_relative_eq!(y[1], -t.sin(), epsilon = 1e-8);
        }
        assert!(sol.stats.accepted > 10);
    }

    #[test]
    fn dense_output_accuracy_with_capped_step() {
        let f = |t: f64, y: &[f64]| vec![y[0] * t.cos()];
        let opts = OdeOptions {
            max_step: 0.01,
            ..OdeOptions::default()
        };
        let sol = integrate(&f, 0.0, 5.0, &[1.0], &opts).unwrap();
        for i in 0..=200 {
            let t = 5.0 * i as f64 / 200.0;
            let y = sol.sample(t);
            assert_relative_eq!(y[0], t.sin().exp(), epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn blowup_reports_failure() {
        // y' = y^2 from y(0)=1 blows up at t=1
        let f = |_t: f64, y: &[f64]| vec![y[0] * y[0]];
        let res = integrate(&f, 0.0, 2.0, &[1.0], &OdeOptions::default());
        assert!(matches!(res, Err(Error::IntegratorFailure { .. })));
    }
}
