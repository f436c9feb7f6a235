use std::io::Write;

use nalgebra::{DMatrix, DVector};

use super::complex::{i_matrix, to_real, C64};
use crate::error::{Error, Result};
use crate::linalg;

/// Rank tolerance for cyclic/separating decisions.
pub const STANDARD_RANK_TOL: f64 = 1e-10;

/// Real-linear subspace of `ℂⁿ`, held in real coordinates `ℝ²ⁿ`.
#[derive(Clone, Debug)]
pub struct RealSubspace {
    n: usize,
    basis: DMatrix<f64>,
    frame: DMatrix<f64>,
}

impl RealSubspace {
    /// Span of the columns of a `2n × k` real matrix; the columns must be independent.
    pub fn new(n: usize, basis: DMatrix<f64>) -> Result<Self> {
        if basis.nrows() != 2 * n {
            return Err(Error::domain(format!(
                "basis has {} rows, expected {}",
                basis.nrows(),
                2 * n
            )));
        }
        let frame = linalg::column_space(&basis, STANDARD_RANK_TOL);
        if frame.ncols() != basis.ncols() {
            return Err(Error::domain(format!(
                "vectors are not real-linearly independent (rank {} of {})",
                frame.ncols(),
                basis.ncols()
            )));
        }
        Ok(RealSubspace { n, basis, frame })
    }

    pub fn from_complex(n: usize, vectors: &[DVector<C64>]) -> Result<Self> {
        let mut m = DMatrix::zeros(2 * n, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(Error::domain(format!("vector {j} has length {}, expected {n}", v.len())));
            }
            m.set_column(j, &to_real(v));
        }
        Self::new(n, m)
    }

    /// Span of arbitrary columns, dropping dependent directions.
    pub fn span(n: usize, m: &DMatrix<f64>) -> Self {
        let frame = linalg::column_space(m, STANDARD_RANK_TOL);
        RealSubspace {
            n,
            basis: frame.clone(),
            frame,
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::span(n, &DMatrix::zeros(2 * n, 0))
    }

    pub fn whole(n: usize) -> Self {
        Self::span(n, &DMatrix::identity(2 * n, 2 * n))
    }

    /// Complex dimension of the ambient space.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Real dimension.
    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Orthonormal real basis.
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// Orthogonal projection in real coordinates.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.frame * (self.frame.transpose() * v)
    }

    /// Distance from `v` to the subspace relative to `max(1, ‖v‖)`.
    pub fn residual(&self, v: &DVector<f64>) -> f64 {
        (v - self.project(v)).norm() / v.norm().max(1.0)
    }

    pub fn contains(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.residual(v) <= tol
    }

    /// Largest sine of a principal angle of `self` against `other`.
    pub fn containment_residual(&self, other: &RealSubspace) -> f64 {
        linalg::projection_residual(&other.frame, &self.frame)
    }

    /// Largest principal-angle sine; subspaces of different dimension are at distance 1.
    pub fn distance(&self, other: &RealSubspace) -> f64 {
        if self.n != other.n {
            return 1.0;
        }
        linalg::subspace_distance(&self.frame, &other.frame, STANDARD_RANK_TOL)
    }

    pub fn intersect(&self, other: &RealSubspace) -> Result<Self> {
        self.same_ambient(other)?;
        let frame = linalg::intersect(&self.frame, &other.frame, 1e-9);
        Ok(Self::span(self.n, &frame))
    }

    /// `iV`.
    pub fn times_i(&self) -> Self {
        let m = i_matrix(self.n) * &self.basis;
        Self::span(self.n, &m)
    }

    /// Real dimension of `V + iV`.
    pub fn complex_span_dim(&self) -> usize {
        let i = i_matrix(self.n);
        let iv = &i * &self.frame;
        linalg::rank(&linalg::hstack(&[&self.frame, &iv], 2 * self.n), STANDARD_RANK_TOL)
    }

    /// `V + iV = ℂⁿ`.
    pub fn is_cyclic(&self) -> bool {
        self.complex_span_dim() == 2 * self.n
    }

    /// `V ∩ iV = {0}`.
    pub fn is_separating(&self) -> bool {
        self.complex_span_dim() == 2 * self.dim()
    }

    pub fn is_standard(&self) -> bool {
        self.dim() == self.n && self.is_cyclic()
    }

    /// `V' = {ξ : Im⟨ξ, v⟩ = 0 for all v ∈ V}`.
    pub fn symplectic_complement(&self) -> Self {
        if self.dim() == 0 {
            return Self::whole(self.n);
        }
        // Im⟨ξ, v⟩ = ξᵀ(iv) in real coordinates
        let iv = i_matrix(self.n) * &self.frame;
        let ker = linalg::null_space(&iv.transpose(), STANDARD_RANK_TOL);
        Self::span(self.n, &ker)
    }

    /// Writes the basis as a `2n × k` CSV matrix, one row per real coordinate.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        for r in 0..self.basis.nrows() {
            let row: Vec<String> = self.basis.row(r).iter().map(|v| format!("{v:?}")).collect();
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    fn same_ambient(&self, other: &RealSubspace) -> Result<()> {
        if self.n != other.n {
            return Err(Error::domain(format!(
                "subspaces of C^{} and C^{}",
                self.n, other.n
            )));
        }
        Ok(())
    }
}
