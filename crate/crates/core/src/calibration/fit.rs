//! Polynomial construction: Newton interpolation and least-squares cubics.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Horner evaluation of ascending-order coefficients.
pub fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Newton divided-difference table for the nodes `xs` and values `ys`.
///
/// Returns `[f[x0], f[x0,x1], ..., f[x0..xn]]`.
pub fn divided_differences(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut table = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    table
}

/// Expands a Newton-form polynomial into ascending monomial coefficients.
///
/// The Newton form is `a0 + a1 (x - x0) + a2 (x - x0)(x - x1) + ...`, expanded
/// by the nested scheme `p = a_k + (x - x_k) p` from the innermost term out.
pub fn newton_to_monomial(newton: &[f64], xs: &[f64]) -> Vec<f64> {
    let n = newton.len();
    let mut coeffs = vec![0.0; n];
    for k in (0..n).rev() {
        // coeffs <- coeffs * (x - xs[k]) + newton[k]
        for j in (1..n).rev() {
            coeffs[j] = coeffs[j - 1] - xs[k] * coeffs[j];
        }
        coeffs[0] = newton[k] - xs[k] * coeffs[0];
    }
    coeffs
}

/// The unique degree `n - 1` polynomial through `n` points with distinct x.
pub fn interpolate(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    newton_to_monomial(&divided_differences(xs, ys), xs)
}

/// Least-squares polynomial of the given degree.
///
/// The abscissae are scaled to `[-1, 1]` before solving so the design matrix
/// stays well conditioned, then the coefficients are mapped back.
pub fn least_squares(xs: &[f64], ys: &[f64], degree: usize) -> Result<Vec<f64>> {
    let n = xs.len();
    let cols = degree + 1;
    if n < cols {
        return Err(Error::TooFewPoints(n));
    }
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let center = (lo + hi) / 2.0;
    let half = ((hi - lo) / 2.0).max(f64::MIN_POSITIVE);

    let design = DMatrix::from_fn(n, cols, |i, j| ((xs[i] - center) / half).powi(j as i32));
    let rhs = DVector::from_column_slice(ys);
    let scaled = design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Domain(format!("least-squares solve failed: {e}")))?;

    // q(t) with t = (x - center) / half; substitute back into x.
    let shift = -center / half;
    let scale = 1.0 / half;
    let mut out = vec![0.0; cols];
    // basis holds the ascending coefficients of (scale x + shift)^j
    let mut basis = vec![0.0; cols];
    basis[0] = 1.0;
    for (j, a) in scaled.iter().enumerate() {
        if j > 0 {
            for k in (0..cols).rev() {
                let lower = if k > 0 { basis[k - 1] } else { 0.0 };
                basis[k] = basis[k] * shift + lower * scale;
            }
        }
        for (o, b) in out.iter_mut().zip(&basis) {
            *o += a * b;
        }
    }
    Ok(out)
}
