use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::algebra::{same_algebra, AlgebraElement, LieAlgebra};
use crate::error::{Error, Result};
use crate::linalg;

/// Linear subspace of an algebra, stored with an orthonormal basis in coefficient space.
#[derive(Clone, Debug)]
pub struct Subspace {
    algebra: Arc<LieAlgebra>,
    basis_vectors: Vec<AlgebraElement>,
    frame: DMatrix<f64>,
}

impl Subspace {
    /// Span of the given elements. Dependent vectors are an error.
    pub fn new(algebra: &Arc<LieAlgebra>, vectors: Vec<AlgebraElement>) -> Result<Self> {
        let d = algebra.dim();
        for v in &vectors {
            if !same_algebra(v.algebra(), algebra) {
                return Err(Error::domain("subspace vector from a different algebra"));
            }
        }
        let mut m = DMatrix::zeros(d, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            m.set_column(j, v.coeffs());
        }
        let frame = linalg::column_space(&m, 1e-9);
        if frame.ncols() != vectors.len() {
            return Err(Error::domain(format!(
                "subspace generators are linearly dependent (rank {} of {})",
                frame.ncols(),
                vectors.len()
            )));
        }
        Ok(Subspace {
            algebra: Arc::clone(algebra),
            basis_vectors: vectors,
            frame,
        })
    }

    /// Span of the columns of a coefficient matrix, keeping an orthonormal basis.
    pub fn from_columns(algebra: &Arc<LieAlgebra>, m: &DMatrix<f64>) -> Self {
        let frame = linalg::column_space(m, 1e-9);
        Self::from_frame(algebra, frame)
    }

    pub(crate) fn from_frame(algebra: &Arc<LieAlgebra>, frame: DMatrix<f64>) -> Self {
        let basis_vectors = (0..frame.ncols())
            .map(|j| algebra.element_from_vector(frame.column(j).into_owned()))
            .collect();
        Subspace {
            algebra: Arc::clone(algebra),
            basis_vectors,
            frame,
        }
    }

    pub fn whole(algebra: &Arc<LieAlgebra>) -> Self {
        let d = algebra.dim();
        Self::from_frame(algebra, DMatrix::identity(d, d))
    }

    pub fn zero(algebra: &Arc<LieAlgebra>) -> Self {
        Self::from_frame(algebra, DMatrix::zeros(algebra.dim(), 0))
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn basis_vectors(&self) -> &[AlgebraElement] {
        &self.basis_vectors
    }

    /// Orthonormal basis as columns of a `d × k` matrix.
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// Orthogonal projection (coefficient inner product).
    pub fn project(&self, x: &AlgebraElement) -> AlgebraElement {
        self.algebra.element_from_vector(self.project_coeffs(x.coeffs()))
    }

    pub fn project_coeffs(&self, v: &DVector<f64>) -> DVector<f64> {
        if self.dim() == 0 {
            return DVector::zeros(v.len());
        }
        &self.frame * (self.frame.transpose() * v)
    }

    /// Coordinates of `v` in the orthonormal frame.
    pub fn local_coords(&self, v: &DVector<f64>) -> DVector<f64> {
        self.frame.transpose() * v
    }

    pub fn residual(&self, x: &AlgebraElement) -> f64 {
        (x.coeffs() - self.project_coeffs(x.coeffs())).norm()
    }

    pub fn contains(&self, x: &AlgebraElement) -> bool {
        self.residual(x) <= self.algebra.tolerance().max(1e-12) * x.norm().max(1.0)
    }

    /// Containment of another subspace.
    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        linalg::projection_residual(&self.frame, other.frame())
            <= self.algebra.tolerance().max(1e-12)
    }

    /// Largest bracket of basis vectors falling outside the subspace.
    pub fn closure_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for a in &self.basis_vectors {
            for b in &self.basis_vectors {
                let c = a.bracket(b).expect("same algebra by construction");
                worst = worst.max(self.residual(&c));
            }
        }
        worst
    }

    pub fn is_subalgebra(&self) -> bool {
        self.closure_residual() <= self.algebra.tolerance().max(1e-12)
    }

    /// Sine of the largest principal angle to another subspace.
    pub fn distance(&self, other: &Subspace) -> f64 {
        linalg::subspace_distance(&self.frame, other.frame(), 1e-9)
    }
}
