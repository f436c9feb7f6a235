//! Real coordinates for `ℂⁿ`: `z = x + iy ↦ (x, y) ∈ ℝ²ⁿ`.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;

pub fn to_real(z: &DVector<C64>) -> DVector<f64> {
    let n = z.len();
    DVector::from_fn(2 * n, |k, _| if k < n { z[k].re } else { z[k - n].im })
}

pub fn from_real(v: &DVector<f64>) -> DVector<C64> {
    let n = v.len() / 2;
    DVector::from_fn(n, |k, _| C64::new(v[k], v[k + n]))
}

/// Multiplication by `i` on `ℝ²ⁿ`.
pub fn i_matrix(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(k, k + n)] = -1.0;
        m[(k + n, k)] = 1.0;
    }
    m
}

/// Coordinatewise complex conjugation on `ℝ²ⁿ`.
pub fn conjugation_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(2 * n, 2 * n, |r, c| match (r == c, r < n) {
        (true, true) => 1.0,
        (true, false) => -1.0,
        _ => 0.0,
    })
}

/// Real form of the complex-linear map `z ↦ Mz`.
pub fn linear_to_real(m: &DMatrix<C64>) -> DMatrix<f64> {
    let (r, c) = m.shape();
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Real form of the antilinear map `z ↦ M z̄`.
pub fn antilinear_to_real(m: &DMatrix<C64>) -> DMatrix<f64> {
    let (r, c) = m.shape();
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) => z.re,
            (false, false) => -z.re,
            _ => z.im,
        }
    })
}

/// Complex matrix of a real `2n × 2n` matrix that commutes with `i`.
pub fn real_to_linear(m: &DMatrix<f64>) -> DMatrix<C64> {
    let n = m.nrows() / 2;
    DMatrix::from_fn(n, n, |i, j| {
        C64::new(
            0.5 * (m[(i, j)] + m[(i + n, j + n)]),
            0.5 * (m[(i + n, j)] - m[(i, j + n)]),
        )
    })
}

/// `M` with `T z = M z̄` for a real `2n × 2n` matrix anticommuting with `i`.
pub fn real_to_antilinear(m: &DMatrix<f64>) -> DMatrix<C64> {
    let n = m.nrows() / 2;
    DMatrix::from_fn(n, n, |i, j| {
        C64::new(
            0.5 * (m[(i, j)] - m[(i + n, j + n)]),
            0.5 * (m[(i + n, j)] + m[(i, j + n)]),
        )
    })
}

/// `‖Ti − iT‖` for real `T`: zero iff `T` is complex linear.
pub fn linearity_defect(m: &DMatrix<f64>) -> f64 {
    let i = i_matrix(m.nrows() / 2);
    crate::linalg::max_abs(&(m * &i - &i * m))
}

/// `‖Ti + iT‖`: zero iff `T` is antilinear.
pub fn antilinearity_defect(m: &DMatrix<f64>) -> f64 {
    let i = i_matrix(m.nrows() / 2);
    crate::linalg::max_abs(&(m * &i + &i * m))
}
