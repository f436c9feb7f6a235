//! `SL(2, ℝ)` as a causal symmetric space of group type.

use std::sync::Arc;

use nalgebra::{DMatrix, Matrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::SampleReport;
use crate::error::{Error, Result};
use crate::lie::{builtin, is_euler, orbit_cone_in_ball, orbit_invariance, AlgebraElement, ConvexCone, LieAlgebra, Subspace};

/// Interior margin demanded of `Ad(g⁻¹)h − h`.
pub const GROUP_WEDGE_MARGIN: f64 = 1e-8;

/// Ball radius and sample count for the default invariant cone.
pub const INVARIANT_CONE_RADIUS: f64 = 4.0;
pub const INVARIANT_CONE_SAMPLES: usize = 1000;

/// Relative distance tolerated when checking sampled `Ad`-invariance of a
/// polyhedral inner approximation.
pub const INVARIANCE_TOL: f64 = 1e-2;

fn to_dmatrix(g: &Matrix2<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]])
}

fn to_matrix2(m: &DMatrix<f64>) -> Matrix2<f64> {
    Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

pub fn det_residual(g: &Matrix2<f64>) -> f64 {
    (g.determinant() - 1.0).abs()
}

pub fn check_group_element(g: &Matrix2<f64>) -> Result<()> {
    let r = det_residual(g);
    if r > 1e-9 * g.norm_squared().max(1.0) {
        return Err(Error::domain(format!("matrix is not in SL(2,R) (det residual {r:.3e})")));
    }
    Ok(())
}

/// `exp(x)` for an element of `sl(2, ℝ)`.
pub fn exp_sl2(x: &AlgebraElement) -> Matrix2<f64> {
    to_matrix2(&x.matrix().exp())
}

/// Group-level involutions of `SL(2, ℝ)` matching the Lie algebra ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupInvolution {
    /// `(a, b; c, d) ↦ (a, −b; −c, d)`.
    TauH,
    /// `g ↦ (gᵀ)⁻¹`.
    Cartan,
    /// Cartan after `τ_h`.
    Composed,
}

impl GroupInvolution {
    pub fn apply(&self, g: &Matrix2<f64>) -> Matrix2<f64> {
        let tau_h = |g: &Matrix2<f64>| Matrix2::new(g[(0, 0)], -g[(0, 1)], -g[(1, 0)], g[(1, 1)]);
        // inverse transpose of a determinant-one matrix
        let cartan = |g: &Matrix2<f64>| Matrix2::new(g[(1, 1)], -g[(1, 0)], -g[(0, 1)], g[(0, 0)]);
        match self {
            GroupInvolution::TauH => tau_h(g),
            GroupInvolution::Cartan => cartan(g),
            GroupInvolution::Composed => cartan(&tau_h(g)),
        }
    }
}

/// `Q(g) = g τ(g)⁻¹`.
pub fn quotient_embedding(g: &Matrix2<f64>, tau: GroupInvolution) -> Result<Matrix2<f64>> {
    check_group_element(g)?;
    let t = tau.apply(g);
    let inv = t
        .try_inverse()
        .ok_or_else(|| Error::numeric("involution image is singular", f64::INFINITY))?;
    Ok(g * inv)
}

/// Modular flow `exp(t h) g exp(−t h)`.
pub fn group_flow(h: &AlgebraElement, t: f64, g: &Matrix2<f64>) -> Matrix2<f64> {
    let a = exp_sl2(&h.scale(t));
    let b = exp_sl2(&h.scale(-t));
    a * g * b
}

/// Sampled `Ad`-invariant cone in `sl(2, ℝ)` from the elliptic seed `e − f`.
pub fn invariant_cone(algebra: &Arc<LieAlgebra>, samples: usize, seed: u64) -> Result<ConvexCone> {
    let seed_elem = algebra.element(&[0.0, 1.0, -1.0]);
    orbit_cone_in_ball(&Subspace::whole(algebra), &seed_elem, samples, seed, INVARIANT_CONE_RADIUS)
}

/// Wedge domain of the group `SL(2, ℝ)` for an Euler element and an invariant cone.
#[derive(Clone, Debug)]
pub struct GroupWedge {
    h: AlgebraElement,
    cone: ConvexCone,
}

impl GroupWedge {
    /// Checks sampled `Ad`-invariance of the cone before accepting it.
    pub fn new(h: &AlgebraElement, cone: ConvexCone, invariance_samples: usize, seed: u64) -> Result<Self> {
        if h.algebra().name() != "sl2" {
            return Err(Error::Unsupported("group wedges are implemented for SL(2,R)".into()));
        }
        if !is_euler(h) {
            return Err(Error::precondition("h is not an Euler element"));
        }
        let whole = Subspace::whole(h.algebra());
        let (_, _, worst) = orbit_invariance(&cone, &whole, invariance_samples, 0.5, seed)?;
        if worst > INVARIANCE_TOL {
            return Err(Error::precondition(format!(
                "cone is not invariant under sampled Ad(G) (relative distance {worst:.3e})"
            )));
        }
        Ok(GroupWedge { h: h.clone(), cone })
    }

    /// Default wedge for `h` in `sl(2, ℝ)` with the sampled invariant cone.
    pub fn standard(h: &AlgebraElement) -> Result<Self> {
        let cone = invariant_cone(h.algebra(), INVARIANT_CONE_SAMPLES, 0x5eed)?;
        Self::new(h, cone, 4, 0xfeed)
    }

    pub fn cone(&self) -> &ConvexCone {
        &self.cone
    }

    /// `Ad(g⁻¹) h − h`.
    pub fn displacement(&self, g: &Matrix2<f64>) -> Result<AlgebraElement> {
        check_group_element(g)?;
        let inv = g.try_inverse().expect("determinant one");
        let hm = to_matrix2(&self.h.matrix());
        let moved = inv * hm * g - hm;
        self.h.algebra().element_from_matrix(&to_dmatrix(&moved))
    }

    pub fn margin(&self, g: &Matrix2<f64>) -> Result<f64> {
        let x = self.displacement(g)?;
        Ok(self.cone.interior_margin(&x)?.unwrap_or(f64::NEG_INFINITY))
    }

    pub fn contains(&self, g: &Matrix2<f64>) -> Result<bool> {
        Ok(self.margin(g)? >= GROUP_WEDGE_MARGIN)
    }

    /// `k exp(s e + u f)` with `k = diag(a, 1/a)`, `|a| = e^v`, `s, u ∈ [0.1, 1]`.
    pub fn sample_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Matrix2<f64> {
        let alg = self.h.algebra();
        let s = rng.random_range(0.1..=1.0);
        let u = rng.random_range(0.1..=1.0);
        let v: f64 = rng.random_range(-1.0..=1.0);
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let a = sign * v.exp();
        let k = Matrix2::new(a, 0.0, 0.0, 1.0 / a);
        k * exp_sl2(&alg.element(&[0.0, s, u]))
    }

    /// Pairs `g₁, g₂` of sampled elements: both factors and the product must be members.
    pub fn semigroup_check(&self, samples: usize, seed: u64) -> Result<(SampleReport, f64)> {
        let results: Vec<Result<(bool, f64)>> = crate::with_thread_pool(|| {
            (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i as u64);
                    let g1 = self.sample_element(&mut rng);
                    let g2 = self.sample_element(&mut rng);
                    let m = self
                        .margin(&g1)?
                        .min(self.margin(&g2)?)
                        .min(self.margin(&(g1 * g2))?);
                    Ok((m >= GROUP_WEDGE_MARGIN, m))
                })
                .collect()
        });
        let mut failures = Vec::new();
        let mut worst = f64::INFINITY;
        for (i, r) in results.into_iter().enumerate() {
            let (ok, m) = r?;
            worst = worst.min(m);
            if !ok {
                failures.push(i);
            }
        }
        Ok((
            SampleReport {
                samples,
                passes: samples - failures.len(),
                failures,
                seed,
            },
            worst,
        ))
    }
}

/// Convenience: `sl(2, ℝ)` Euler element `h = diag(1/2, −1/2)`.
pub fn sl2_euler() -> AlgebraElement {
    builtin::sl2().basis_element(0)
}
