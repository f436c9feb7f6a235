//! Lawson–Hanson non-negative least squares.

use crate::linalg;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Solves `min ‖A x − b‖` subject to `x ≥ 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let (m, n) = a.shape();
    assert_eq!(b.len(), m, "right-hand side length mismatch");
    let mut x = DVector::zeros(n);
    if n == 0 {
        return Ok(x);
    }
    let anorm = a.amax().max(1e-300);
    let tol = 10.0 * f64::EPSILON * anorm * (m.max(n) as f64) * b.amax().max(1.0);
    let mut passive = vec![false; n];
    let max_outer = 3 * n + 30;

    let gradient = |x: &DVector<f64>| a.transpose() * (b - a * x);
    let mut w = gradient(&x);
    let mut outer = 0;
    // Columns that were dropped again without changing x; skipped until x moves.
    let mut blocked = vec![false; n];
    loop {
        let candidate = (0..n)
            .filter(|&j| !passive[j] && !blocked[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        if w[j] <= tol {
            break;
        }
        outer += 1;
        if outer > max_outer {
            return Err(Error::numeric(
                "non-negative least squares did not converge",
                w[j] / tol,
            ));
        }
        passive[j] = true;
        let before = x.clone();
        let mut inner = 0;
        loop {
            inner += 1;
            if inner > 3 * n + 30 {
                return Err(Error::numeric("non-negative least squares inner loop stalled", f64::NAN));
            }
            let s = restricted_lstsq(a, b, &passive);
            let ok = (0..n).filter(|&i| passive[i]).all(|i| s[i] > 0.0);
            if ok {
                x = s;
                break;
            }
            let mut alpha = f64::INFINITY;
            for i in 0..n {
                if passive[i] && s[i] <= 0.0 {
                    let denom = x[i] - s[i];
                    if denom > 0.0 {
                        alpha = alpha.min(x[i] / denom);
                    } else {
                        alpha = 0.0;
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            x = &x + (&s - &x) * alpha;
            for i in 0..n {
                if passive[i] && x[i] <= f64::EPSILON * x.amax().max(1.0) {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
        w = gradient(&x);
        if x == before {
            blocked[j] = true;
        } else {
            blocked.iter_mut().for_each(|b| *b = false);
        }
    }
    Ok(x)
}

fn restricted_lstsq(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let idx: Vec<usize> = (0..passive.len()).filter(|&i| passive[i]).collect();
    let mut sub = DMatrix::zeros(a.nrows(), idx.len());
    for (c, &i) in idx.iter().enumerate() {
        sub.set_column(c, &a.column(i));
    }
    let d = linalg::svd(&sub);
    let tol = 1e-13 * a.amax().max(1.0);
    let mut sol = DVector::zeros(idx.len());
    for (k, &sv) in d.s.iter().enumerate() {
        if sv > tol {
            sol += d.v.column(k) * (d.u.column(k).dot(b) / sv);
        }
    }
    let mut out = DVector::zeros(passive.len());
    for (c, &i) in idx.iter().enumerate() {
        out[i] = sol[c];
    }
    out
}
