//! Dense linear algebra helpers shared by the Lie-theoretic and modular modules.
//!
//! Every rank decision goes through a singular value decomposition with a
//! threshold relative to the largest singular value.

use nalgebra::{Complex, DMatrix, DVector};

/// Singular value decomposition `m = U diag(s) Vᵀ` with `s` nonincreasing.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub s: Vec<f64>,
    pub v: DMatrix<f64>,
}

fn to_faer(m: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Full SVD (`U` is square of size rows, `V` square of size cols).
///
/// Backed by faer: the bidiagonal SVD of nalgebra 0.35 loses accuracy on
/// nearly rank-deficient inputs.
pub fn svd(m: &DMatrix<f64>) -> Svd {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Svd {
            u: DMatrix::identity(r, r),
            s: Vec::new(),
            v: DMatrix::identity(c, c),
        };
    }
    let d = to_faer(m).svd().expect("svd converges for finite input");
    Svd {
        u: from_faer(d.U()),
        s: d.S().column_vector().iter().copied().collect(),
        v: from_faer(d.V()),
    }
}

/// Singular values of `m` in nonincreasing order (empty matrices have none).
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    to_faer(m)
        .singular_values()
        .expect("svd converges for finite input")
}

fn threshold(svals: &[f64], rel_tol: f64) -> f64 {
    let smax = svals.iter().copied().fold(0.0_f64, f64::max);
    rel_tol * smax.max(1.0)
}

/// Numerical rank with singular values compared against `rel_tol * max(1, σ_max)`.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let thr = threshold(&s, rel_tol);
    s.iter().filter(|&&v| v > thr).count()
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn column_space(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let rows = m.nrows();
    if rows == 0 || m.ncols() == 0 {
        return DMatrix::zeros(rows, 0);
    }
    let d = svd(m);
    let thr = threshold(&d.s, rel_tol);
    let keep = d.s.iter().filter(|&&v| v > thr).count();
    d.u.columns(0, keep).into_owned()
}

/// Orthonormal basis (as columns) of the kernel of `m`.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let d = svd(m);
    let thr = threshold(&d.s, rel_tol);
    let keep = d.s.iter().filter(|&&v| v > thr).count();
    d.v.columns(keep, n - keep).into_owned()
}

/// Moore–Penrose pseudo-inverse, dropping singular values below `rel_tol * σ_max`.
pub fn pseudo_inverse(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let (r, c) = m.shape();
    let d = svd(m);
    let smax = d.s.first().copied().unwrap_or(0.0);
    let mut out = DMatrix::zeros(c, r);
    for (k, &sv) in d.s.iter().enumerate() {
        if sv > rel_tol * smax {
            out += d.v.column(k) * d.u.column(k).transpose() / sv;
        }
    }
    out
}

/// Projection residual `‖(I − QQᵀ) a‖` of the columns of `a` against an orthonormal `q`.
pub fn projection_residual(q: &DMatrix<f64>, a: &DMatrix<f64>) -> f64 {
    if a.ncols() == 0 {
        return 0.0;
    }
    let proj = if q.ncols() == 0 {
        DMatrix::zeros(a.nrows(), a.ncols())
    } else {
        q * (q.transpose() * a)
    };
    let r = a - proj;
    spectral_norm(&r)
}

pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Sine of the largest principal angle between two column spans.
///
/// Spans of different dimension are at distance 1.
pub fn subspace_distance(a: &DMatrix<f64>, b: &DMatrix<f64>, rel_tol: f64) -> f64 {
    let qa = column_space(a, rel_tol);
    let qb = column_space(b, rel_tol);
    if qa.ncols() != qb.ncols() {
        return 1.0;
    }
    if qa.ncols() == 0 {
        return 0.0;
    }
    projection_residual(&qb, &qa).max(projection_residual(&qa, &qb))
}

/// Orthonormal basis of the intersection of two column spans.
pub fn intersect(a: &DMatrix<f64>, b: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let qa = column_space(a, rel_tol);
    let qb = column_space(b, rel_tol);
    if qa.ncols() == 0 || qb.ncols() == 0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let mut stacked = DMatrix::zeros(qa.nrows(), qa.ncols() + qb.ncols());
    stacked.view_mut((0, 0), qa.shape()).copy_from(&qa);
    stacked
        .view_mut((0, qa.ncols()), qb.shape())
        .copy_from(&(-&qb));
    let ker = null_space(&stacked, rel_tol);
    let coeffs = ker.rows(0, qa.ncols()).into_owned();
    column_space(&(&qa * coeffs), rel_tol)
}

/// Horizontal concatenation of column blocks with a common row count.
pub fn hstack(blocks: &[&DMatrix<f64>], rows: usize) -> DMatrix<f64> {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((0, at), b.shape()).copy_from(*b);
        at += b.ncols();
    }
    out
}

/// Numerical rank of a complex matrix.
pub fn complex_rank(m: &DMatrix<Complex<f64>>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| faer::c64::new(m[(i, j)].re, m[(i, j)].im))
        .singular_values()
        .expect("svd converges for finite input");
    let thr = threshold(&s, rel_tol);
    s.iter().filter(|&&v| v > thr).count()
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex<f64>> {
    m.map(|v| Complex::new(v, 0.0))
}

/// Square root and inverse square root of a symmetric positive definite matrix.
pub fn spd_sqrt_pair(m: &DMatrix<f64>) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
    let eig = m.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0 || !l.is_finite()) {
        return None;
    }
    let q = &eig.eigenvectors;
    let sq = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|l| l.sqrt()));
    let isq = sq.map(|s| 1.0 / s);
    let root = q * DMatrix::from_diagonal(&sq) * q.transpose();
    let inv_root = q * DMatrix::from_diagonal(&isq) * q.transpose();
    Some((root, inv_root))
}

/// Function of a symmetric matrix through its eigen-decomposition.
pub fn symmetric_function(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let eig = m.clone().symmetric_eigen();
    let q = &eig.eigenvectors;
    let d = eig.eigenvalues.map(f);
    q * DMatrix::from_diagonal(&d) * q.transpose()
}

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
}
