//! Finite-difference weights on uniform grids (Fornberg's recursion) and
//! line-by-line derivative application.

use crate::scalar::Real;
use num_complex::Complex;

/// Weights w such that Σ wᵢ f(xᵢ) ≈ f^(m)(z) for arbitrary nodes xs.
pub fn fd_weights(z: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(n > m, "need more nodes than the derivative order");
    // c[k][j]: weight of node j for the k-th derivative, built incrementally
    let mut c = vec![vec![0.0f64; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = ((xs[i] - z) * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = (xs[i] - z) * c[0][j] / c3;
        }
        c1 = c2;
    }
    c[m].clone()
}

/// m-th derivative of uniformly sampled complex data, with the stated
/// accuracy order. Centered stencils are used wherever they fit; the edges
/// fall back to shifted stencils of the same width (callers should mask a
/// boundary band when sharp error bounds are needed).
pub fn derivative_1d<R: Real>(
    values: &[Complex<R>],
    dx: R,
    m: usize,
    accuracy: usize,
) -> Vec<Complex<R>> {
    let n = values.len();
    if m == 0 {
        return values.to_vec();
    }
    let width = (m + accuracy).max(m + 1);
    let width = if width % 2 == 0 { width + 1 } else { width };
    let width = width.min(n);
    let half = width / 2;

    // offsets in units of dx; weights computed once per distinct window shape
    let xs: Vec<f64> = (0..width).map(|k| k as f64).collect();
    let dxf = dx.to_f();
    let scale = dxf.powi(m as i32);

    let mut out = vec![Complex::new(R::zero(), R::zero()); n];
    let mut cache: Vec<Option<Vec<f64>>> = vec![None; width];
    for i in 0..n {
        let start = i.saturating_sub(half).min(n - width);
        let pos = i - start; // evaluation node inside the window
        if cache[pos].is_none() {
            let w = fd_weights(pos as f64, &xs, m);
            cache[pos] = Some(w.iter().map(|v| v / scale).collect());
        }
        let w = cache[pos].as_ref().unwrap();
        let mut acc = Complex::new(R::zero(), R::zero());
        for (k, wk) in w.iter().enumerate() {
            let c = R::from_f(*wk);
            acc = acc + values[start + k] * c;
        }
        out[i] = acc;
    }
    out
}

/// Boundary band width that should be masked for derivative order ≤ m at the
/// given accuracy.
pub fn stencil_band(m: usize, accuracy: usize) -> usize {
    let width = (m + accuracy).max(m + 1);
    let width = if width % 2 == 0 { width + 1 } else { width };
    width / 2
}
