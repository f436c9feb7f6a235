use std::f64::consts::PI;

use serde::Serialize;

use super::kernel::{strip_kernel, KernelModel, C64};
use super::quadrature::{bump, Quadrature, DEFAULT_PANELS};
use crate::error::{Error, Result};

/// Strip continuation residual below which a vector is accepted as a member.
pub const STRIP_KMS_TOL: f64 = 1e-6;

/// Vector `Σ w_k φ(x_k) K_{b(x_k)}` smeared from boundary data.
///
/// On the strip `b(x) = x` is the lower boundary line. On the half-plane the
/// test function lives on `M = ℝ` and `b(p) = −p`, which intertwines `p ↦ b + ap`
/// with `U(b, a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmearedVector {
    model: KernelModel,
    support: (f64, f64),
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<C64>,
}

impl SmearedVector {
    pub fn new(
        model: KernelModel,
        support: (f64, f64),
        quad: Quadrature,
        values: Vec<C64>,
    ) -> Result<Self> {
        let (a, b) = support;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::domain(format!("support [{a}, {b}] is not a bounded interval")));
        }
        if values.len() != quad.len() {
            return Err(Error::domain(format!(
                "{} values for {} nodes",
                values.len(),
                quad.len()
            )));
        }
        if quad.weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::domain("quadrature weights must be positive"));
        }
        if quad.nodes.iter().any(|&x| x < a || x > b) {
            return Err(Error::domain(format!("quadrature node outside [{a}, {b}]")));
        }
        Ok(SmearedVector {
            model,
            support,
            nodes: quad.nodes,
            weights: quad.weights,
            values,
        })
    }

    /// Real test function sampled on a composite Gauss–Legendre rule.
    pub fn from_fn(
        model: KernelModel,
        support: (f64, f64),
        phi: impl Fn(f64) -> f64,
        nodes: usize,
    ) -> Result<Self> {
        let panels = if nodes.is_multiple_of(DEFAULT_PANELS) { DEFAULT_PANELS } else { 1 };
        let quad = Quadrature::gauss_legendre(support.0, support.1, nodes, panels)?;
        let values = quad.nodes.iter().map(|&x| C64::new(phi(x), 0.0)).collect();
        Self::new(model, support, quad, values)
    }

    /// Standard bump on the whole support.
    pub fn bump(model: KernelModel, support: (f64, f64), nodes: usize) -> Result<Self> {
        Self::from_fn(model, support, bump(support.0, support.1), nodes)
    }

    pub fn with_phase(mut self, phase: C64) -> Self {
        for v in &mut self.values {
            *v *= phase;
        }
        self
    }

    pub fn model(&self) -> KernelModel {
        self.model
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == C64::new(0.0, 0.0))
    }

    /// Boundary parameter of node `x`.
    pub fn boundary_point(&self, x: f64) -> C64 {
        match self.model {
            KernelModel::Strip => C64::new(x, 0.0),
            KernelModel::HalfPlane => C64::new(-x, 0.0),
        }
    }

    /// `ξ(z)` for interior `z`.
    pub fn eval(&self, z: C64) -> Result<C64> {
        if !self.model.contains(z) {
            return Err(Error::domain(format!("{z} lies outside the {} domain", self.model.name())));
        }
        self.eval_raw(z)
    }

    /// Kernel sum without the domain check, for closed-form continuations.
    fn eval_raw(&self, z: C64) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for ((&x, &w), &v) in self.nodes.iter().zip(&self.weights).zip(&self.values) {
            acc += v * (w * self.model.kernel(z, self.boundary_point(x))?);
        }
        Ok(acc)
    }

    pub fn eval_on(&self, points: &[C64]) -> Result<Vec<C64>> {
        points.iter().map(|&z| self.eval(z)).collect()
    }

    /// `U(b, a)` on the half-plane: nodes move to `b + ap`, values scale by `a^{1/2}`.
    pub fn affine(&self, b: f64, a: f64) -> Result<Self> {
        if self.model != KernelModel::HalfPlane {
            return Err(Error::Unsupported("the affine group acts on the half-plane model".into()));
        }
        if !(a > 0.0) {
            return Err(Error::domain(format!("dilation a = {a} must be positive")));
        }
        let s = a.sqrt();
        Ok(SmearedVector {
            model: self.model,
            support: (b + a * self.support.0, b + a * self.support.1),
            nodes: self.nodes.iter().map(|&p| b + a * p).collect(),
            weights: self.weights.clone(),
            values: self.values.iter().map(|&v| v * s).collect(),
        })
    }
}

/// Deterministic 32-point strip evaluation set, mapped to itself by `u ↦ πi + ū`.
pub fn strip_evaluation_set() -> Vec<C64> {
    let mut out = Vec::with_capacity(32);
    for k in 1..=4 {
        let y = PI * k as f64 / 5.0;
        for j in 0..8 {
            let x = -3.0 + 6.0 * j as f64 / 7.0;
            out.push(C64::new(x, y));
        }
    }
    out
}

/// Deterministic 32-point half-plane evaluation set, mapped to itself by `z ↦ −z̄`.
pub fn halfplane_evaluation_set() -> Vec<C64> {
    let mut out = Vec::with_capacity(32);
    for &y in &[0.25, 1.0] {
        for j in 0..16 {
            let x = -6.0 + 12.0 * j as f64 / 15.0;
            out.push(C64::new(x, y));
        }
    }
    out
}

pub fn l2_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Continuation `α^ξ(z)(u) = Σ w φ K(u + z, x)` of the translation orbit.
pub fn strip_orbit(xi: &SmearedVector, z: C64, u: C64) -> Result<C64> {
    if xi.model != KernelModel::Strip {
        return Err(Error::Unsupported("the translation orbit is a strip construction".into()));
    }
    let mut acc = C64::new(0.0, 0.0);
    for ((&x, &w), &v) in xi.nodes.iter().zip(&xi.weights).zip(&xi.values) {
        acc += v * (w * strip_kernel(u + z, C64::new(x, 0.0))?);
    }
    Ok(acc)
}

/// `‖α^ξ(πi) − Jξ‖ / ‖ξ‖` over the strip evaluation set; zero for `ξ = 0`.
pub fn strip_kms_test(xi: &SmearedVector) -> Result<f64> {
    if xi.model != KernelModel::Strip {
        return Err(Error::Unsupported("strip continuation test on a non-strip vector".into()));
    }
    let pts = strip_evaluation_set();
    let shift = C64::new(0.0, PI);
    let mut diff = Vec::with_capacity(pts.len());
    let mut base = Vec::with_capacity(pts.len());
    for &u in &pts {
        let continued = strip_orbit(xi, shift, u)?;
        let conj = xi.eval(KernelModel::Strip.j_param(u))?.conj();
        diff.push(continued - conj);
        base.push(xi.eval(u)?);
    }
    let norm = l2_norm(&base);
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(l2_norm(&diff) / norm)
}

/// Machine-readable membership verdict.
#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub model: KernelModel,
    /// `[Re, Im]` of the global phase.
    pub phase: [f64; 2],
    pub support: [f64; 2],
    pub nodes: usize,
    pub residual: f64,
    pub verdict: bool,
}

/// Strip membership report for `phase · ξ_φ` with a bump on `support`.
pub fn strip_membership(support: (f64, f64), phase: C64, nodes: usize) -> Result<MembershipReport> {
    let xi = SmearedVector::bump(KernelModel::Strip, support, nodes)?.with_phase(phase);
    let residual = strip_kms_test(&xi)?;
    Ok(MembershipReport {
        model: KernelModel::Strip,
        phase: [phase.re, phase.im],
        support: [support.0, support.1],
        nodes,
        residual,
        verdict: residual <= STRIP_KMS_TOL,
    })
}

/// Writes `re,im` of `ξ` on the evaluation set, one row per point.
pub fn write_values_csv<W: std::io::Write>(points: &[C64], values: &[C64], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["z_re", "z_im", "re", "im"])?;
    for (z, v) in points.iter().zip(values) {
        w.write_record([
            format!("{:?}", z.re),
            format!("{:?}", z.im),
            format!("{:?}", v.re),
            format!("{:?}", v.im),
        ])?;
    }
    w.flush()?;
    Ok(())
}
