use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::complex::C64;
use super::pair::ModularPair;
use super::subspace::RealSubspace;

/// Span of `n` Gaussian vectors in `ℂⁿ`, redrawn until standard.
pub fn random_standard_subspace<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RealSubspace {
    loop {
        let m = DMatrix::from_fn(2 * n, n, |_, _| rng.sample(StandardNormal));
        if let Ok(v) = RealSubspace::new(n, m) {
            if v.is_standard() {
                return v;
            }
        }
    }
}

/// Haar-like unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let z = DMatrix::from_fn(n, n, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    z.qr().q()
}

/// Random compatible pair: up to `n/2` swapped eigenvalue pairs `λ, 1/λ` with
/// `ln λ ∈ [−3, 3]`, the rest fixed at 1, in a random unitary frame.
pub fn random_modular_pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ModularPair {
    let mut idx: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        idx.swap(k, rng.random_range(0..=k));
    }
    let pairs = rng.random_range(0..=n / 2);
    let mut lambdas = vec![1.0; n];
    let mut pairing: Vec<usize> = (0..n).collect();
    for k in 0..pairs {
        let (a, b) = (idx[2 * k], idx[2 * k + 1]);
        let l = rng.random_range(-3.0..3.0f64).exp();
        lambdas[a] = l;
        lambdas[b] = 1.0 / l;
        pairing[a] = b;
        pairing[b] = a;
    }
    ModularPair::with_frame(lambdas, pairing, random_unitary(rng, n)).expect("valid spectral data")
}
