use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::algebra::AlgebraElement;
use super::cone::ConvexCone;
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::linalg;

/// Default radius of the sampling ball for [`orbit_cone`].
pub const ORBIT_RADIUS: f64 = 8.0;

/// Uniform sample from the ball of the given radius in `space`.
pub fn sample_ball<R: Rng + ?Sized>(space: &Subspace, radius: f64, rng: &mut R) -> AlgebraElement {
    let k = space.dim();
    let alg = space.algebra();
    if k == 0 {
        return alg.zero();
    }
    let g: DVector<f64> = DVector::from_fn(k, |_, _| rng.sample(StandardNormal));
    let n = g.norm().max(f64::MIN_POSITIVE);
    let r = radius * rng.random::<f64>().powf(1.0 / k as f64);
    alg.element_from_vector(space.frame() * (g * (r / n)))
}

/// Cone generated by `Ad(exp y_k) seed` for `y_k` uniform in the ball of
/// radius [`ORBIT_RADIUS`] in `h_fix`. The seed itself is always a generator.
pub fn orbit_cone(
    h_fix: &Subspace,
    seed: &AlgebraElement,
    sample_count: usize,
    seed_rng: u64,
) -> Result<ConvexCone> {
    orbit_cone_in_ball(h_fix, seed, sample_count, seed_rng, ORBIT_RADIUS)
}

pub fn orbit_cone_in_ball(
    h_fix: &Subspace,
    seed: &AlgebraElement,
    sample_count: usize,
    seed_rng: u64,
    radius: f64,
) -> Result<ConvexCone> {
    let alg = h_fix.algebra();
    if seed.is_zero(alg.tolerance().max(1e-14)) {
        return Err(Error::precondition("orbit seed must be nonzero"));
    }
    if !h_fix.is_subalgebra() {
        return Err(Error::precondition(format!(
            "sampling space is not a subalgebra (closure residual {:.3e})",
            h_fix.closure_residual()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_rng);
    let mut gens = vec![seed.scale(1.0 / seed.norm())];
    for _ in 0..sample_count {
        let y = sample_ball(h_fix, radius, &mut rng);
        let v = seed.transform(&y.exp_ad());
        let n = v.norm();
        if n.is_finite() && n > 0.0 {
            gens.push(v.scale(1.0 / n));
        }
    }
    let d = alg.dim();
    let mut cols = DMatrix::zeros(d, gens.len());
    for (j, g) in gens.iter().enumerate() {
        cols.set_column(j, g.coeffs());
    }
    let ambient = Subspace::from_frame(alg, linalg::column_space(&cols, 1e-9));
    ConvexCone::new(&ambient, gens)
}

/// Fraction of `Ad(exp y) g` (fresh `y`, every generator `g`) that stay in the cone,
/// together with the worst distance to the cone relative to the vector norm.
pub fn orbit_invariance(
    cone: &ConvexCone,
    h_fix: &Subspace,
    samples: usize,
    radius: f64,
    seed_rng: u64,
) -> Result<(usize, usize, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_rng);
    let mut passes = 0;
    let mut total = 0;
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let y = sample_ball(h_fix, radius, &mut rng);
        let ad = y.exp_ad();
        for g in cone.generators() {
            let v = g.transform(&ad);
            let v = v.scale(1.0 / v.norm());
            let m = cone.membership(&v)?;
            worst = worst.max(m.residual);
            total += 1;
            if m.inside {
                passes += 1;
            }
        }
    }
    Ok((passes, total, worst))
}
