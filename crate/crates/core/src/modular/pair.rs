use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::complex::{
    antilinear_to_real, antilinearity_defect, i_matrix, linear_to_real, linearity_defect, real_to_antilinear,
    real_to_linear, to_real, C64,
};
use super::subspace::RealSubspace;
use crate::error::{Error, Result};
use crate::linalg;

/// Tolerance on `λ_{p(i)} λ_i = 1`.
pub const PAIRING_TOL: f64 = 1e-12;

/// Tolerance on `JΔJ = Δ⁻¹` for operator input.
pub const INVERSION_TOL: f64 = 1e-10;

/// Relative tolerance of the fixed-point test `Δ^{1/2}ξ = Jξ`.
pub const KMS_TOL: f64 = 1e-9;

const SPECTRAL_SPLIT_TOL: f64 = 1e-8;

/// Modular data `(J, Δ)` in spectral form.
///
/// With frame vectors `f_i`: `Δ f_i = λ_i f_i` and `J(Σ c_i f_i) = Σ c̄_i f_{p(i)}`.
#[derive(Clone, Debug)]
pub struct ModularPair {
    lambdas: Vec<f64>,
    pairing: Vec<usize>,
    frame: DMatrix<C64>,
}

impl ModularPair {
    /// Pair in the standard basis of `ℂⁿ` (swap-conjugate convention).
    pub fn new(lambdas: Vec<f64>, pairing: Vec<usize>) -> Result<Self> {
        let n = lambdas.len();
        Self::with_frame(lambdas, pairing, DMatrix::identity(n, n))
    }

    /// Pair in the orthonormal basis given by the columns of `frame`.
    pub fn with_frame(lambdas: Vec<f64>, pairing: Vec<usize>, frame: DMatrix<C64>) -> Result<Self> {
        validate_spectrum(&lambdas, &pairing).map_err(|(_, msg)| Error::precondition(msg))?;
        let n = lambdas.len();
        if frame.shape() != (n, n) {
            return Err(Error::domain(format!("frame must be {n}x{n}")));
        }
        let unitarity = linalg_c_max_abs(&(frame.adjoint() * &frame - DMatrix::<C64>::identity(n, n)));
        if unitarity > 1e-8 {
            return Err(Error::precondition(format!("frame is not unitary (residual {unitarity:.3e})")));
        }
        Ok(ModularPair {
            lambdas,
            pairing,
            frame,
        })
    }

    /// Spectral form of real `2n × 2n` operators `J` (antiunitary) and `Δ` (positive).
    pub fn from_operators(j: &DMatrix<f64>, delta: &DMatrix<f64>) -> Result<Self> {
        let dim = delta.nrows();
        if !dim.is_multiple_of(2) || !delta.is_square() || j.shape() != delta.shape() {
            return Err(Error::domain("J and Delta must be real 2n x 2n matrices"));
        }
        let scale = linalg::max_abs(delta).max(1.0);
        if linearity_defect(delta) > 1e-10 * scale {
            return Err(Error::precondition("Delta is not complex linear"));
        }
        if antilinearity_defect(j) > 1e-10 {
            return Err(Error::precondition("J is not antilinear"));
        }
        if linalg::max_abs(&(delta - delta.transpose())) > 1e-10 * scale {
            return Err(Error::precondition("Delta is not self-adjoint"));
        }
        let eig = delta.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::precondition("Delta is not positive"));
        }
        let q = &eig.eigenvectors;
        let inv = q * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l)) * q.transpose();
        let inv_scale = linalg::max_abs(&inv).max(1.0);
        let r = linalg::max_abs(&(j * delta * j - &inv)) / inv_scale.max(scale);
        if r > INVERSION_TOL {
            return Err(Error::precondition(format!("J Delta J != Delta^-1 (residual {r:.3e})")));
        }
        let sqrt_delta = q * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * q.transpose();
        spectral_form(&real_to_antilinear(j), &real_to_linear(&sqrt_delta))
    }

    /// Complex dimension.
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn frame(&self) -> &DMatrix<C64> {
        &self.frame
    }

    /// `max |λ_i λ_{p(i)} − 1|`.
    pub fn pairing_residual(&self) -> f64 {
        self.lambdas
            .iter()
            .enumerate()
            .map(|(i, l)| (l * self.lambdas[self.pairing[i]] - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `Δ^s` as a real matrix.
    pub fn delta_power(&self, s: f64) -> DMatrix<f64> {
        self.spectral_real(|l| C64::new(l.powf(s), 0.0))
    }

    pub fn delta(&self) -> DMatrix<f64> {
        self.delta_power(1.0)
    }

    /// `J` as a real matrix.
    pub fn j(&self) -> DMatrix<f64> {
        let n = self.n();
        let perm = DMatrix::from_fn(n, n, |r, c| {
            if self.pairing[c] == r {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let m = &self.frame * perm * self.frame.transpose();
        antilinear_to_real(&m)
    }

    /// `U(eᵗ) = Δ^{−it/2π}`.
    pub fn unitary(&self, t: f64) -> DMatrix<f64> {
        let s = -t / (2.0 * std::f64::consts::PI);
        self.spectral_real(|l| C64::new(0.0, s * l.ln()).exp())
    }

    fn spectral_real(&self, f: impl Fn(f64) -> C64) -> DMatrix<f64> {
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            self.n(),
            self.lambdas.iter().map(|&l| f(l)),
        ));
        linear_to_real(&(&self.frame * d * self.frame.adjoint()))
    }

    /// `‖JΔJ − Δ⁻¹‖` relative to `max(1, ‖Δ‖)`.
    pub fn inversion_residual(&self) -> f64 {
        let j = self.j();
        let d = self.delta();
        let inv = self.delta_power(-1.0);
        let scale = linalg::max_abs(&d).max(linalg::max_abs(&inv)).max(1.0);
        linalg::max_abs(&(&j * &d * &j - inv)) / scale
    }

    /// `Fix(JΔ^{1/2})`, read off from the spectral frame.
    pub fn standard_subspace(&self) -> RealSubspace {
        self.fixed_space(0.5)
    }

    /// `Fix(JΔ^{−1/2})`.
    pub fn dual_standard_subspace(&self) -> RealSubspace {
        self.fixed_space(-0.5)
    }

    // JΔ^s(c f_i + d f_j) = (d̄ λ_j^s) f_i + (c̄ λ_i^s) f_j for j = p(i), so the
    // fixed vectors are c f_i + c̄ λ_i^s f_j with c ∈ {1, i}.
    fn fixed_space(&self, s: f64) -> RealSubspace {
        let n = self.n();
        let mut cols = Vec::with_capacity(n);
        for i in 0..n {
            let p = self.pairing[i];
            if p < i {
                continue;
            }
            let fi = self.frame.column(i).into_owned();
            if p == i {
                cols.push(to_real(&fi));
                continue;
            }
            let fp = self.frame.column(p).into_owned();
            let w = self.lambdas[i].powf(s);
            let one = C64::new(1.0, 0.0);
            let im = C64::new(0.0, 1.0);
            cols.push(to_real(&(&fi * one + &fp * (one.conj() * w))));
            cols.push(to_real(&(&fi * im + &fp * (im.conj() * w))));
        }
        let m = DMatrix::from_columns(&cols);
        RealSubspace::span(n, &m)
    }

    /// `‖Δ^{1/2}ξ − Jξ‖ ≤ 10⁻⁹‖ξ‖` for a real-coordinate vector `ξ`.
    pub fn kms_membership(&self, xi: &DVector<f64>) -> KmsVerdict {
        let norm = xi.norm();
        if norm == 0.0 {
            return KmsVerdict {
                member: true,
                residual: 0.0,
            };
        }
        let r = (self.delta_power(0.5) * xi - self.j() * xi).norm() / norm;
        KmsVerdict {
            member: r <= KMS_TOL,
            residual: r,
        }
    }

    /// Distance to another pair: largest relative difference of `Δ` and of `J`.
    pub fn operator_distance(&self, other: &ModularPair) -> f64 {
        let d1 = self.delta();
        let d2 = other.delta();
        let scale = linalg::max_abs(&d1).max(1.0);
        let dd = linalg::max_abs(&(d1 - d2)) / scale;
        let dj = linalg::max_abs(&(self.j() - other.j()));
        dd.max(dj)
    }

    pub fn to_document(&self) -> ModularPairDocument {
        ModularPairDocument {
            n: self.n(),
            lambdas: self.lambdas.clone(),
            pairing: self.pairing.clone(),
            j_convention: SWAP_CONJUGATE.to_string(),
        }
    }
}

/// Verdict of the fixed-point test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KmsVerdict {
    pub member: bool,
    pub residual: f64,
}

pub const SWAP_CONJUGATE: &str = "swap-conjugate";

/// Serialized form of a pair in the standard basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModularPairDocument {
    pub n: usize,
    pub lambdas: Vec<f64>,
    pub pairing: Vec<usize>,
    #[serde(rename = "J_convention")]
    pub j_convention: String,
}

impl ModularPairDocument {
    /// Parses and validates, reporting the first violation with its location.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: ModularPairDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.j_convention != SWAP_CONJUGATE {
            return Err(Error::invalid(
                "$.J_convention",
                format!("unsupported convention {:?}", self.j_convention),
            ));
        }
        if self.lambdas.len() != self.n {
            return Err(Error::invalid("$.lambdas", format!("expected {} entries", self.n)));
        }
        if self.pairing.len() != self.n {
            return Err(Error::invalid("$.pairing", format!("expected {} entries", self.n)));
        }
        validate_spectrum(&self.lambdas, &self.pairing).map_err(|(loc, msg)| Error::invalid(loc, msg))
    }

    pub fn to_pair(&self) -> Result<ModularPair> {
        self.validate()?;
        ModularPair::new(self.lambdas.clone(), self.pairing.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

fn validate_spectrum(lambdas: &[f64], pairing: &[usize]) -> std::result::Result<(), (String, String)> {
    let n = lambdas.len();
    if pairing.len() != n {
        return Err(("$.pairing".into(), format!("expected {n} entries")));
    }
    for (i, &l) in lambdas.iter().enumerate() {
        if !(l > 0.0) || !l.is_finite() {
            return Err((format!("$.lambdas[{i}]"), format!("eigenvalue {l} is not positive")));
        }
    }
    for (i, &p) in pairing.iter().enumerate() {
        if p >= n {
            return Err((format!("$.pairing[{i}]"), format!("index {p} out of range")));
        }
        if pairing[p] != i {
            return Err((format!("$.pairing[{i}]"), "pairing is not an involution".into()));
        }
        let r = (lambdas[i] * lambdas[p] - 1.0).abs();
        if r > PAIRING_TOL {
            return Err((
                format!("$.lambdas[{i}]"),
                format!("lambda[p(i)] * lambda[i] = {} != 1", lambdas[i] * lambdas[p]),
            ));
        }
    }
    Ok(())
}

fn linalg_c_max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0_f64, |a, z| a.max(z.norm()))
}

// Spectral form from `J z = M z̄` and the complex matrix of `Δ^{1/2}`.
fn spectral_form(jm: &DMatrix<C64>, sqrt_delta: &DMatrix<C64>) -> Result<ModularPair> {
    let n = sqrt_delta.nrows();
    let herm = (sqrt_delta + sqrt_delta.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mu: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    if mu.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::numeric("Delta is not positive", f64::INFINITY));
    }
    let above = mu.iter().filter(|m| m.ln() > SPECTRAL_SPLIT_TOL).count();
    let below = mu.iter().filter(|m| m.ln() < -SPECTRAL_SPLIT_TOL).count();
    let m = above.min(below);
    let vec_of = |k: usize| eig.eigenvectors.column(order[k]).into_owned();
    let apply_j = |v: &DVector<C64>| jm * v.map(|z| z.conj());

    let mut frame = DMatrix::<C64>::zeros(n, n);
    let mut lambdas = vec![1.0; n];
    let mut pairing: Vec<usize> = (0..n).collect();
    for k in 0..m {
        let u = vec_of(k);
        let ju = apply_j(&u);
        // μ_top / μ_bottom = λ with the pairing enforced exactly
        let lambda = mu[k] / mu[n - 1 - k];
        frame.set_column(k, &u);
        frame.set_column(m + k, &ju);
        lambdas[k] = lambda;
        lambdas[m + k] = 1.0 / lambda;
        pairing[k] = m + k;
        pairing[m + k] = k;
    }
    let k_mid = n - 2 * m;
    if k_mid > 0 {
        // J restricted to the λ = 1 block; its real fixed space has an
        // orthonormal real basis that is also complex orthonormal.
        let mut cols = Vec::with_capacity(2 * k_mid);
        for k in m..n - m {
            let e = vec_of(k);
            let je = apply_j(&e);
            cols.push(to_real(&(&e + &je)));
            cols.push(to_real(&((&e - &je) * C64::new(0.0, 1.0))));
        }
        let fixed = linalg::column_space(&DMatrix::from_columns(&cols), 1e-6);
        if fixed.ncols() != k_mid {
            return Err(Error::numeric(
                format!("J fixed space on the unit eigenspace has dimension {} (expected {k_mid})", fixed.ncols()),
                f64::INFINITY,
            ));
        }
        for c in 0..k_mid {
            let v = fixed.column(c).into_owned();
            let z = super::complex::from_real(&v);
            frame.set_column(2 * m + c, &z);
        }
    }
    Ok(ModularPair {
        lambdas,
        pairing,
        frame,
    })
}

/// Tomita operator of a standard subspace: `S = 1` on `V`, `S = −1` on `iV`.
pub fn tomita_operator(v: &RealSubspace) -> Result<DMatrix<f64>> {
    if !v.is_standard() {
        return Err(Error::precondition("subspace is not standard"));
    }
    let n = v.n();
    let f = v.frame();
    let iv = i_matrix(n) * f;
    let src = linalg::hstack(&[f, &iv], 2 * n);
    let dst = linalg::hstack(&[f, &(-&iv)], 2 * n);
    // S src = dst  ⇔  srcᵀ Sᵀ = dstᵀ
    let st = src
        .transpose()
        .lu()
        .solve(&dst.transpose())
        .ok_or_else(|| Error::numeric("V + iV is singular", f64::INFINITY))?;
    Ok(st.transpose())
}

/// `S = JΔ^{1/2}` with `Δ = S*S`.
pub fn polar_modular(s: &DMatrix<f64>) -> Result<ModularPair> {
    let dim = s.nrows();
    if !s.is_square() || !dim.is_multiple_of(2) {
        return Err(Error::domain("S must be a real 2n x 2n matrix"));
    }
    let d = linalg::svd(s);
    let smax = d.s[0];
    let smin = d.s[dim - 1];
    if !(smin > 1e-14 * smax) {
        return Err(Error::numeric("S is singular", smax / smin));
    }
    let sqrt_delta = &d.v * DMatrix::from_diagonal(&DVector::from_vec(d.s.clone())) * d.v.transpose();
    let j = &d.u * d.v.transpose();
    if antilinearity_defect(&j) > 1e-8 || linearity_defect(&sqrt_delta) > 1e-8 * smax.max(1.0) {
        return Err(Error::precondition("S is not antilinear"));
    }
    spectral_form(&real_to_antilinear(&j), &real_to_linear(&sqrt_delta))
}

/// `Fix(JΔ^{1/2})`.
pub fn standard_from_pair(pair: &ModularPair) -> RealSubspace {
    pair.standard_subspace()
}

/// Modular data of a standard subspace.
pub fn modular_pair_of(v: &RealSubspace) -> Result<ModularPair> {
    polar_modular(&tomita_operator(v)?)
}

/// Antiunitary representation of `ℝ^×` attached to a standard subspace:
/// `U(eᵗ) = exp(tA)` with self-adjoint `iA`, and `U(−1) = J`.
#[derive(Clone, Debug)]
pub struct ModularRep {
    generator: DMatrix<f64>,
    conjugation: DMatrix<f64>,
}

impl ModularRep {
    pub fn from_pair(pair: &ModularPair) -> Self {
        // A = −(i/2π) log Δ
        let log_delta = pair.spectral_real(|l| C64::new(l.ln(), 0.0));
        let generator = -(i_matrix(pair.n()) * log_delta) / (2.0 * std::f64::consts::PI);
        ModularRep {
            generator,
            conjugation: pair.j(),
        }
    }

    pub fn generator(&self) -> &DMatrix<f64> {
        &self.generator
    }

    /// `U(eᵗ)`.
    pub fn unitary(&self, t: f64) -> DMatrix<f64> {
        (&self.generator * t).exp()
    }

    /// `U(−1)`.
    pub fn conjugation(&self) -> &DMatrix<f64> {
        &self.conjugation
    }

    /// `Δ = e^{2πi A}` and `J = U(−1)`.
    pub fn to_pair(&self) -> Result<ModularPair> {
        let n = self.generator.nrows() / 2;
        let herm = i_matrix(n) * &self.generator * (2.0 * std::f64::consts::PI);
        let sym = (&herm + herm.transpose()) * 0.5;
        let delta = linalg::symmetric_function(&sym, f64::exp);
        ModularPair::from_operators(&self.conjugation, &delta)
    }
}

/// Representation of `ℝ^×` defined by a standard subspace.
pub fn rep_from_standard(v: &RealSubspace) -> Result<ModularRep> {
    Ok(ModularRep::from_pair(&modular_pair_of(v)?))
}

/// `(J, Δ) → U → V`.
pub fn rep_roundtrip(pair: &ModularPair) -> Result<RealSubspace> {
    Ok(ModularRep::from_pair(pair).to_pair()?.standard_subspace())
}

/// Maximum of `‖U*U − 1‖` for a real matrix.
pub fn unitarity_residual(u: &DMatrix<f64>) -> f64 {
    let n = u.nrows();
    linalg::max_abs(&(u.transpose() * u - DMatrix::identity(n, n)))
}
