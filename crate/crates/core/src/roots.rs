//! Polynomial roots via companion-matrix eigenvalues, robust to the repeated
//! roots that the constant-curvature catalogs produce.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Roots of the monic polynomial x^n + c[n-1] x^(n-1) + ... + c[0], returned
/// as (re, im) pairs sorted by real part then imaginary part.
pub fn monic_roots(coeffs: &[f64]) -> Result<Vec<(f64, f64)>> {
    let n = coeffs.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if coeffs.iter().all(|c| *c == 0.0) {
        // nilpotent companion matrix; the QR iteration stalls on it
        return Ok(vec![(0.0, 0.0); n]);
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for (i, c) in coeffs.iter().enumerate() {
        m[(i, n - 1)] = -c;
    }
    let condition = m.norm();
    // spectra symmetric about zero can cycle the QR iteration; a scalar
    // shift breaks the symmetry and the eigenvalues shift back exactly
    let mut eig = None;
    for sigma in [0.0, 0.537_284_965_9 * (1.0 + condition), -1.129_436_2] {
        let shifted = &m - DMatrix::<f64>::identity(n, n) * sigma;
        if let Some(s) = nalgebra::linalg::Schur::try_new(shifted, 1e-14, 10_000) {
            eig = Some(
                s.complex_eigenvalues()
                    .iter()
                    .map(|z| (z.re + sigma, z.im))
                    .collect::<Vec<_>>(),
            );
            break;
        }
    }
    let mut roots = eig.ok_or(Error::RootFinding {
        msg: "companion-matrix Schur iteration did not converge".into(),
        condition,
    })?;
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(roots)
}
