//! Half-plane modular data through the Mellin transform.
//!
//! With `f(z) = (1/2π) ∫₀^∞ e^{iqz} g(q) dq` and
//! `G(ν) = (1/2π) ∫₀^∞ g(q) q^{−1/2−iν} dq` one has `‖f‖² = ∫ |G|² dν`,
//! dilations act by `e^{itν}`, `(JG)(ν) = conj G(−ν)` and `Δ^{1/2}` is the
//! multiplier `e^{σπν}` with the frozen sign `σ = DELTA_SIGN`.

use std::f64::consts::PI;

use serde::Serialize;

use super::gamma::ln_gamma;
use super::kernel::{KernelModel, C64};
use super::smear::{MembershipReport, SmearedVector};
use super::quadrature::bump;
use crate::error::{Error, Result};

/// Sign `σ` in `Δ = e^{2πσν}`; fixed by [`calibrate_delta_sign`].
pub const DELTA_SIGN: f64 = -1.0;

/// Membership threshold for the Mellin residual.
pub const HALFPLANE_TOL: f64 = 1e-4;

/// Symmetric trapezoid grid `ν_j = j · step`, `|ν_j| ≤ max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MellinGrid {
    pub max: f64,
    pub step: f64,
}

impl Default for MellinGrid {
    fn default() -> Self {
        MellinGrid { max: 60.0, step: 0.025 }
    }
}

impl MellinGrid {
    pub fn points(&self) -> Vec<f64> {
        let n = (self.max / self.step).round() as i64;
        (-n..=n).map(|j| j as f64 * self.step).collect()
    }
}

fn check_support(xi: &SmearedVector) -> Result<()> {
    if xi.model() != KernelModel::HalfPlane {
        return Err(Error::Unsupported("Mellin route needs a half-plane vector".into()));
    }
    let (a, b) = xi.support();
    if a <= 0.0 && b >= 0.0 {
        return Err(Error::precondition(format!(
            "support [{a}, {b}] touches the boundary singularity at 0"
        )));
    }
    Ok(())
}

/// Node data `w v |p|^{−1/2}` and `ln|p|`, split by the sign of `p`.
struct Nodes {
    pos: Vec<(f64, C64)>,
    neg: Vec<(f64, C64)>,
}

impl Nodes {
    fn new(xi: &SmearedVector) -> Self {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for ((&p, &w), &v) in xi.nodes().iter().zip(xi.weights()).zip(xi.values()) {
            let lp = p.abs().ln();
            let amp = v * (w * (-0.5 * lp).exp());
            if p > 0.0 {
                pos.push((lp, amp));
            } else {
                neg.push((lp, amp));
            }
        }
        Nodes { pos, neg }
    }

    /// `Σ w v |p|^{−s}` over each sign class, `s = 1/2 − iν`.
    fn sums(&self, nu: f64) -> (C64, C64) {
        let sum = |xs: &[(f64, C64)]| {
            xs.iter()
                .map(|&(lp, amp)| amp * C64::from_polar(1.0, nu * lp))
                .sum::<C64>()
        };
        (sum(&self.pos), sum(&self.neg))
    }
}

/// `e^{extra} G(ν)` from the sign-class sums, `extra` folded into the exponent.
fn combine(nu: f64, (pos, neg): (C64, C64), extra: f64) -> C64 {
    let s = C64::new(0.5, -nu);
    let lg = ln_gamma(s);
    // (−ip)^{−s} = |p|^{−s} e^{iπ s sgn(p)/2}
    let half = C64::new(0.0, PI / 2.0) * s;
    let zero = C64::new(0.0, 0.0);
    let mut out = zero;
    if pos != zero {
        out += (lg + half + extra).exp() * pos;
    }
    if neg != zero {
        out += (lg - half + extra).exp() * neg;
    }
    out / (2.0 * PI)
}

/// `G(ν)` on the given points.
pub fn mellin_transform(xi: &SmearedVector, nus: &[f64]) -> Result<Vec<C64>> {
    check_support(xi)?;
    let nodes = Nodes::new(xi);
    Ok(nus.iter().map(|&nu| combine(nu, nodes.sums(nu), 0.0)).collect())
}

/// `‖Δ^{1/2}ξ − Jξ‖ / ‖ξ‖` for `Δ = e^{2πσν}`.
pub fn membership_residual_with_sign(xi: &SmearedVector, grid: MellinGrid, sign: f64) -> Result<f64> {
    check_support(xi)?;
    let nus = grid.points();
    let nodes = Nodes::new(xi);
    let sums: Vec<(C64, C64)> = nus.iter().map(|&nu| nodes.sums(nu)).collect();
    let g: Vec<C64> = nus.iter().zip(&sums).map(|(&nu, &s)| combine(nu, s, 0.0)).collect();
    let n = nus.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, &nu) in nus.iter().enumerate() {
        let half_delta = combine(nu, sums[j], sign * PI * nu);
        let conj = g[n - 1 - j].conj();
        num += (half_delta - conj).norm_sqr();
        den += g[j].norm_sqr();
    }
    if den == 0.0 {
        return Ok(0.0);
    }
    let r = (num / den).sqrt();
    Ok(if r.is_finite() { r } else { f64::INFINITY })
}

pub fn membership_residual(xi: &SmearedVector, grid: MellinGrid) -> Result<f64> {
    membership_residual_with_sign(xi, grid, DELTA_SIGN)
}

/// `max |JΔJG − Δ^{−1}G| / max |Δ^{−1}G|` with the operators applied on the grid one by one.
pub fn inversion_residual(xi: &SmearedVector, grid: MellinGrid, sign: f64) -> Result<f64> {
    let nus = grid.points();
    let g = mellin_transform(xi, &nus)?;
    let n = nus.len();
    let j = |h: &[C64]| -> Vec<C64> { (0..n).map(|k| h[n - 1 - k].conj()).collect() };
    let delta = |h: &[C64], power: f64| -> Vec<C64> {
        h.iter().zip(&nus).map(|(&v, &nu)| v * (2.0 * PI * sign * power * nu).exp()).collect()
    };
    let lhs = j(&delta(&j(&g), 1.0));
    let rhs = delta(&g, -1.0);
    let scale = rhs.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let err = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(err / scale)
}

/// Outcome of the one-off sign calibration.
#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub sign: f64,
    pub residual_minus: f64,
    pub residual_plus: f64,
    pub inversion_residual: f64,
}

/// Picks the sign `σ` for which `e^{−πi/4}` times a bump on `[1, 2]` is a member.
pub fn calibrate_delta_sign() -> Result<Calibration> {
    let grid = MellinGrid::default();
    let xi = reference_vector(512)?;
    let minus = membership_residual_with_sign(&xi, grid, -1.0)?;
    let plus = membership_residual_with_sign(&xi, grid, 1.0)?;
    let sign = match (minus <= HALFPLANE_TOL, plus <= HALFPLANE_TOL) {
        (true, false) => -1.0,
        (false, true) => 1.0,
        _ => {
            return Err(Error::numeric(
                format!("ambiguous Δ sign calibration (residuals {minus:e}, {plus:e})"),
                minus.max(plus),
            ))
        }
    };
    Ok(Calibration {
        sign,
        residual_minus: minus,
        residual_plus: plus,
        inversion_residual: inversion_residual(&xi, grid, sign)?,
    })
}

/// Generating phase of the wedge subspace.
pub fn wedge_phase() -> C64 {
    C64::from_polar(1.0, -PI / 4.0)
}

fn reference_vector(nodes: usize) -> Result<SmearedVector> {
    Ok(SmearedVector::bump(KernelModel::HalfPlane, (1.0, 2.0), nodes)?.with_phase(wedge_phase()))
}

/// Membership report for `phase · ξ_φ` with a bump on `support`.
pub fn halfplane_membership(support: (f64, f64), phase: C64, nodes: usize) -> Result<MembershipReport> {
    let xi = SmearedVector::from_fn(KernelModel::HalfPlane, support, bump(support.0, support.1), nodes)?
        .with_phase(phase);
    let residual = membership_residual(&xi, MellinGrid::default())?;
    Ok(MembershipReport {
        model: KernelModel::HalfPlane,
        phase: [phase.re, phase.im],
        support: [support.0, support.1],
        nodes,
        residual,
        verdict: residual <= HALFPLANE_TOL,
    })
}
