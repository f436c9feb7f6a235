use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::algebra::{same_algebra, AlgebraElement, LieAlgebra};
use super::spectrum::grading;
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvolutionKind {
    Cartan,
    TauH,
    Composed,
    Custom,
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvolutionKind::Cartan => "cartan",
            InvolutionKind::TauH => "tau_h",
            InvolutionKind::Composed => "composed",
            InvolutionKind::Custom => "custom",
        })
    }
}

/// Involutive automorphism acting on coefficient vectors.
#[derive(Clone, Debug)]
pub struct Involution {
    algebra: Arc<LieAlgebra>,
    matrix: DMatrix<f64>,
    kind: InvolutionKind,
}

impl Involution {
    /// Validates `σ² = 1` and `σ[x,y] = [σx, σy]` on basis pairs.
    pub fn new(algebra: &Arc<LieAlgebra>, matrix: DMatrix<f64>, kind: InvolutionKind) -> Result<Self> {
        let d = algebra.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::domain("involution matrix has the wrong size"));
        }
        let inv = Involution {
            algebra: Arc::clone(algebra),
            matrix,
            kind,
        };
        let tol = algebra.tolerance().max(1e-12);
        let sq = inv.square_residual();
        if sq > tol {
            return Err(Error::domain(format!("map does not square to the identity (residual {sq:.3e})")));
        }
        let hom = inv.homomorphism_residual();
        if hom > tol {
            return Err(Error::domain(format!(
                "map is not a Lie algebra automorphism (residual {hom:.3e})"
            )));
        }
        Ok(inv)
    }

    pub fn identity(algebra: &Arc<LieAlgebra>) -> Self {
        let d = algebra.dim();
        Involution {
            algebra: Arc::clone(algebra),
            matrix: DMatrix::identity(d, d),
            kind: InvolutionKind::Custom,
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn kind(&self) -> InvolutionKind {
        self.kind
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        x.transform(&self.matrix)
    }

    pub fn square_residual(&self) -> f64 {
        let d = self.algebra.dim();
        linalg::max_abs(&(&self.matrix * &self.matrix - DMatrix::identity(d, d)))
    }

    pub fn homomorphism_residual(&self) -> f64 {
        let d = self.algebra.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let bi = self.algebra.basis_element(i);
                let bj = self.algebra.basis_element(j);
                let lhs = self.apply(&bi.bracket(&bj).expect("same algebra"));
                let rhs = self.apply(&bi).bracket(&self.apply(&bj)).expect("same algebra");
                worst = worst.max((lhs.coeffs() - rhs.coeffs()).amax());
            }
        }
        worst
    }

    /// `max |B(σx,σy) − B(x,y)|` over basis pairs.
    pub fn killing_invariance_residual(&self) -> f64 {
        let k = self.algebra.killing_matrix();
        linalg::max_abs(&(self.matrix.transpose() * k * &self.matrix - k))
    }

    /// `σ ∘ ρ`; requires commuting factors so the result is again an involution.
    pub fn compose(&self, other: &Involution) -> Result<Involution> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::domain("involutions act on different algebras"));
        }
        let comm = linalg::max_abs(&(&self.matrix * &other.matrix - &other.matrix * &self.matrix));
        if comm > self.algebra.tolerance().max(1e-12) {
            return Err(Error::domain(format!(
                "involutions do not commute (residual {comm:.3e})"
            )));
        }
        Involution::new(&self.algebra, &self.matrix * &other.matrix, InvolutionKind::Composed)
    }

    /// Product as a plain automorphism, with no commutation requirement.
    pub fn compose_map(&self, other: &Involution) -> DMatrix<f64> {
        &self.matrix * &other.matrix
    }

    /// `(ker(σ − 1), ker(σ + 1))`.
    pub fn eigenspace_split(&self) -> (Subspace, Subspace) {
        let d = self.algebra.dim();
        let id = DMatrix::<f64>::identity(d, d);
        let fixed = linalg::null_space(&(&self.matrix - &id), 1e-9);
        let anti = linalg::null_space(&(&self.matrix + &id), 1e-9);
        (
            Subspace::from_frame(&self.algebra, fixed),
            Subspace::from_frame(&self.algebra, anti),
        )
    }
}

/// `τ_h`: identity on `g₀(h)`, minus identity on `g₊₁(h) ⊕ g₋₁(h)`.
pub fn tau_h(h: &AlgebraElement) -> Result<Involution> {
    let g = grading(h)?;
    let m = g.projection(0) - g.projection(1) - g.projection(-1);
    Involution::new(h.algebra(), m, InvolutionKind::TauH)
}

/// `θ(x) = −xᵀ`, checked to preserve the span and to be a Cartan involution.
pub fn cartan_involution_transpose(algebra: &Arc<LieAlgebra>) -> Result<Involution> {
    let d = algebra.dim();
    let mut m = DMatrix::zeros(d, d);
    for (j, b) in algebra.basis().iter().enumerate() {
        let (c, resid) = algebra.coordinates_with_residual(&(-b.transpose()))?;
        if resid > algebra.tolerance().max(1e-12) * b.norm().max(1.0) {
            return Err(Error::Unsupported(format!(
                "negative transpose of basis[{j}] leaves the span of {}",
                algebra.name()
            )));
        }
        m.set_column(j, &c);
    }
    let inv = Involution::new(algebra, m, InvolutionKind::Cartan)
        .map_err(|e| Error::Unsupported(format!("x -> -x^T is not an involutive automorphism: {e}")))?;
    // −B(x, θy) must be positive definite.
    let form = -(algebra.killing_matrix() * inv.matrix());
    let sym = (&form + form.transpose()) * 0.5;
    let min_eig = sym.symmetric_eigen().eigenvalues.min();
    if min_eig <= algebra.tolerance().max(1e-12) {
        return Err(Error::Unsupported(format!(
            "x -> -x^T is not a Cartan involution of {} (min eigenvalue {min_eig:.3e})",
            algebra.name()
        )));
    }
    Ok(inv)
}
