use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

const I: C64 = C64::new(0.0, 1.0);

/// Denominators below this magnitude are treated as poles.
const POLE_TOL: f64 = 1e-14;

/// Which of the two Hardy spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelModel {
    /// `H²` of the strip `0 < Im z < π`.
    Strip,
    /// `H²` of the upper half-plane.
    HalfPlane,
}

impl KernelModel {
    pub fn name(self) -> &'static str {
        match self {
            KernelModel::Strip => "strip",
            KernelModel::HalfPlane => "halfplane",
        }
    }

    /// Open domain membership.
    pub fn contains(self, z: C64) -> bool {
        match self {
            KernelModel::Strip => z.im > 0.0 && z.im < PI,
            KernelModel::HalfPlane => z.im > 0.0,
        }
    }

    pub fn kernel(self, z: C64, w: C64) -> Result<C64> {
        match self {
            KernelModel::Strip => strip_kernel(z, w),
            KernelModel::HalfPlane => halfplane_kernel(z, w),
        }
    }

    /// Parameter `w′` with `J K_w = K_{w′}`.
    pub fn j_param(self, w: C64) -> C64 {
        match self {
            KernelModel::Strip => strip_j(w),
            KernelModel::HalfPlane => -w.conj(),
        }
    }

    /// Values of `J f` computed from `f` itself.
    pub fn apply_j(self, f: impl Fn(C64) -> C64, z: C64) -> C64 {
        f(self.j_param(z)).conj()
    }
}

/// `i / (4π sinh((z − w̄)/2))`.
pub fn strip_kernel(z: C64, w: C64) -> Result<C64> {
    let s = ((z - w.conj()) * 0.5).sinh();
    if s.norm() < POLE_TOL {
        return Err(Error::Singularity(format!("strip kernel pole at z = {z}, w = {w}")));
    }
    Ok(I / (s * (4.0 * PI)))
}

/// `J K_w = K_{πi + w̄}`.
pub fn strip_j(w: C64) -> C64 {
    C64::new(0.0, PI) + w.conj()
}

/// `U_t K_w = K_{w − t}`.
pub fn strip_translate(t: f64, w: C64) -> C64 {
    w - t
}

/// `‖α^η(it)‖²` for `η = K_{πi/2}`, i.e. the kernel diagonal at `πi/2 + it`.
pub fn orbit_norm_squared(t: f64) -> Result<f64> {
    if !(t.abs() < PI / 2.0) {
        return Err(Error::domain(format!("|t| = {} must be below π/2", t.abs())));
    }
    let z = C64::new(0.0, PI / 2.0 + t);
    Ok(strip_kernel(z, z)?.re)
}

/// Closed form `1 / (4π sin(π/2 + t))`.
pub fn orbit_norm_squared_closed(t: f64) -> f64 {
    1.0 / (4.0 * PI * (PI / 2.0 + t).sin())
}

/// Boundary component of the strip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// Boundary value of `x ↦ K(x, 0)`-type distributions.
///
/// Lower side: `i / (4π sinh((x + iε)/2))`, which needs `ε > 0` at `x = 0`.
/// Upper side: direct evaluation at `x + πi`, equal to `1 / (4π cosh(x/2))`.
pub fn boundary_distribution(x: f64, side: Side, eps: f64) -> Result<C64> {
    match side {
        Side::Lower => {
            if eps < 0.0 || (eps == 0.0 && x == 0.0) {
                return Err(Error::domain(format!(
                    "regularization ε = {eps} invalid at x = {x}"
                )));
            }
            let s = (C64::new(x, eps) * 0.5).sinh();
            Ok(I / (s * (4.0 * PI)))
        }
        Side::Upper => {
            let s = (C64::new(x, PI) * 0.5).sinh();
            Ok(I / (s * (4.0 * PI)))
        }
    }
}

/// Matrix `D(x_i − x_j)` of the ε-regularized lower boundary distribution.
pub fn boundary_gram(xs: &[f64], eps: f64) -> Result<DMatrix<C64>> {
    let mut g = DMatrix::zeros(xs.len(), xs.len());
    for (i, &a) in xs.iter().enumerate() {
        for (j, &b) in xs.iter().enumerate() {
            g[(i, j)] = boundary_distribution(a - b, Side::Lower, eps)?;
        }
    }
    Ok(g)
}

/// `(1/2π) · i / (z − w̄)`.
pub fn halfplane_kernel(z: C64, w: C64) -> Result<C64> {
    let d = z - w.conj();
    if d.norm() < POLE_TOL {
        return Err(Error::Singularity(format!("half-plane kernel pole at z = {z}, w = {w}")));
    }
    Ok(I / (d * (2.0 * PI)))
}

/// `G_{ij} = K(p_i, p_j) = ⟨K_{p_j}, K_{p_i}⟩`, rows assembled in parallel.
pub fn gram(model: KernelModel, points: &[C64]) -> Result<DMatrix<C64>> {
    let rows: Vec<Vec<C64>> = points
        .par_iter()
        .map(|&z| points.iter().map(|&w| model.kernel(z, w)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(points.len(), points.len(), |i, j| rows[i][j]))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(g: &DMatrix<C64>) -> f64 {
    if g.is_empty() {
        return 0.0;
    }
    let h = (g + g.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Finite combination `Σ c_k K_{w_k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelVector {
    pub model: KernelModel,
    pub coeffs: Vec<C64>,
    pub points: Vec<C64>,
}

impl KernelVector {
    pub fn new(model: KernelModel, coeffs: Vec<C64>, points: Vec<C64>) -> Result<Self> {
        if coeffs.len() != points.len() {
            return Err(Error::domain("coefficient and point counts differ"));
        }
        if let Some(w) = points.iter().find(|&&w| !model.contains(w)) {
            return Err(Error::domain(format!("{w} lies outside the {} domain", model.name())));
        }
        Ok(KernelVector { model, coeffs, points })
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (&c, &w) in self.coeffs.iter().zip(&self.points) {
            acc += c * self.model.kernel(z, w)?;
        }
        Ok(acc)
    }

    /// `⟨self, other⟩`, linear in the first argument.
    pub fn inner(&self, other: &KernelVector) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (&a, &w) in self.coeffs.iter().zip(&self.points) {
            for (&b, &v) in other.coeffs.iter().zip(&other.points) {
                acc += a * b.conj() * self.model.kernel(v, w)?;
            }
        }
        Ok(acc)
    }

    pub fn norm_squared(&self) -> Result<f64> {
        Ok(self.inner(self)?.re)
    }

    /// `J Σ c K_w = Σ c̄ K_{J(w)}`.
    pub fn conjugate(&self) -> Self {
        KernelVector {
            model: self.model,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
            points: self.points.iter().map(|&w| self.model.j_param(w)).collect(),
        }
    }

    /// Strip translation `U_t`.
    pub fn translate(&self, t: f64) -> Result<Self> {
        if self.model != KernelModel::Strip {
            return Err(Error::Unsupported("translation by U_t is defined on the strip".into()));
        }
        Ok(KernelVector {
            model: self.model,
            coeffs: self.coeffs.clone(),
            points: self.points.iter().map(|&w| strip_translate(t, w)).collect(),
        })
    }
}

/// `U(b, a) K_w = a^{1/2} K_{aw − b}`, the kernel form of `(Uf)(z) = a^{−1/2} f((z + b)/a)`.
pub fn affine_action(b: f64, a: f64, v: &KernelVector) -> Result<KernelVector> {
    if v.model != KernelModel::HalfPlane {
        return Err(Error::Unsupported("the affine group acts on the half-plane model".into()));
    }
    if !(a > 0.0) {
        return Err(Error::domain(format!("dilation a = {a} must be positive")));
    }
    let s = a.sqrt();
    Ok(KernelVector {
        model: v.model,
        coeffs: v.coeffs.iter().map(|&c| c * s).collect(),
        points: v.points.iter().map(|&w| w * a - b).collect(),
    })
}

/// `(Jf)(z) = conj f(−z̄)` on half-plane kernel combinations.
pub fn halfplane_j(v: &KernelVector) -> Result<KernelVector> {
    if v.model != KernelModel::HalfPlane {
        return Err(Error::Unsupported("expected a half-plane vector".into()));
    }
    Ok(v.conjugate())
}
