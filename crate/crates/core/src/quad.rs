//! Quadrature helpers: adaptive Simpson for smooth integrands and a
//! composite rule for tabulated data.

/// Adaptive Simpson with Richardson acceptance, relative tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, a, b);
    let scale = 1.0 + whole.abs();
    recurse(f, a, b, fa, fm, fb, whole, tol * scale, 48)
}

/// Composite Simpson on tabulated values over a uniform grid; a trapezoid
/// cell absorbs an odd final interval.
pub fn composite_simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    let pairs = (n - 1) / 2;
    for p in 0..pairs {
        let i = 2 * p;
        total += h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
    }
    if (n - 1) % 2 == 1 {
        total += 0.5 * h * (values[n - 2] + values[n - 1]);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn simpson_on_known_integrals() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert_relative_eq!(v, 2.0, max_relative = 1e-11);
        let v = adaptive_simpson(&|x: f64| (-x * x).exp(), -6.0, 6.0, 1e-12);
        assert_relative_eq!(v, std::f64::consts::PI.sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn composite_on_grid() {
        let n = 2001;
        let h = std::f64::consts::PI / (n - 1) as f64;
        let vals: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin()).collect();
        assert_relative_eq!(composite_simpson(&vals, h), 2.0, max_relative = 1e-10);
    }
}
