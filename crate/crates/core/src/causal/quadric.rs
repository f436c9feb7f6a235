//! De Sitter and anti-de Sitter space as quadrics in pseudo-Euclidean space.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{builtin, is_euler, AlgebraElement, LieAlgebra};

/// Residual allowed for points on the quadric.
pub const QUADRIC_TOL: f64 = 1e-9;

/// Margin a modular vector field must exceed to count as interior to the cone.
pub const POSITIVITY_MARGIN: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadricKind {
    /// `x₀² − x₁² − ⋯ − x_d² = −1` in `ℝ^{1,d}`.
    DeSitter,
    /// `x₀² + x₁² − x₂² − ⋯ − x_d² = 1` in `ℝ^{2,d−1}`.
    AntiDeSitter,
}

impl fmt::Display for QuadricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadricKind::DeSitter => "ds",
            QuadricKind::AntiDeSitter => "ads",
        })
    }
}

/// A `d`-dimensional (anti-)de Sitter space with its symmetry algebra.
#[derive(Clone, Debug)]
pub struct Quadric {
    kind: QuadricKind,
    d: usize,
    metric: Vec<f64>,
    algebra: Arc<LieAlgebra>,
}

/// Point on a quadric, in ambient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacePoint {
    pub kind: QuadricKind,
    pub coords: DVector<f64>,
}

/// Point of the complexified de Sitter quadric.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoint {
    pub coords: DVector<Complex<f64>>,
}

impl ComplexPoint {
    pub fn real_part(&self) -> DVector<f64> {
        self.coords.map(|z| z.re)
    }

    pub fn imag_part(&self) -> DVector<f64> {
        self.coords.map(|z| z.im)
    }
}

/// Labeled sample from a wedge computation.
#[derive(Clone, Debug, Serialize)]
pub struct LabeledPoint {
    pub index: usize,
    pub coords: Vec<f64>,
    pub label: bool,
    pub margin: f64,
}

impl Quadric {
    pub fn de_sitter(d: usize) -> Result<Self> {
        if !(1..=4).contains(&d) {
            return Err(Error::domain(format!("de Sitter dimension {d} outside 1..=4")));
        }
        let mut metric = vec![-1.0; d + 1];
        metric[0] = 1.0;
        Ok(Quadric {
            kind: QuadricKind::DeSitter,
            d,
            metric,
            algebra: builtin::so_1d(d)?,
        })
    }

    pub fn anti_de_sitter(d: usize) -> Result<Self> {
        if !(2..=5).contains(&d) {
            return Err(Error::domain(format!("anti-de Sitter dimension {d} outside 2..=5")));
        }
        let mut metric = vec![-1.0; d + 1];
        metric[0] = 1.0;
        metric[1] = 1.0;
        Ok(Quadric {
            kind: QuadricKind::AntiDeSitter,
            d,
            metric,
            algebra: builtin::so_2d(d - 1)?,
        })
    }

    pub fn new(kind: QuadricKind, d: usize) -> Result<Self> {
        match kind {
            QuadricKind::DeSitter => Self::de_sitter(d),
            QuadricKind::AntiDeSitter => Self::anti_de_sitter(d),
        }
    }

    pub fn kind(&self) -> QuadricKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn ambient_dim(&self) -> usize {
        self.d + 1
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    /// Value of the quadric equation `η(x, x)` on a point of the model.
    pub fn level(&self) -> f64 {
        match self.kind {
            QuadricKind::DeSitter => -1.0,
            QuadricKind::AntiDeSitter => 1.0,
        }
    }

    /// The standard Euler element: the `x₀x₁` boost for de Sitter, the `x₀x₂` boost for anti-de Sitter.
    pub fn euler(&self) -> AlgebraElement {
        match self.kind {
            QuadricKind::DeSitter => builtin::lorentz_boost(&self.algebra),
            QuadricKind::AntiDeSitter => builtin::so2d_euler(&self.algebra),
        }
    }

    pub fn form(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.iter().zip(b.iter()).zip(&self.metric).map(|((x, y), s)| s * x * y).sum()
    }

    fn form_c(&self, a: &DVector<Complex<f64>>, b: &DVector<Complex<f64>>) -> Complex<f64> {
        a.iter().zip(b.iter()).zip(&self.metric).map(|((x, y), s)| x * y * *s).sum()
    }

    pub fn quadric_residual(&self, x: &DVector<f64>) -> f64 {
        (self.form(x, x) - self.level()).abs()
    }

    /// Validated point.
    pub fn point(&self, coords: &[f64]) -> Result<SpacePoint> {
        if coords.len() != self.ambient_dim() {
            return Err(Error::domain(format!(
                "expected {} coordinates, got {}",
                self.ambient_dim(),
                coords.len()
            )));
        }
        let v = DVector::from_column_slice(coords);
        let r = self.quadric_residual(&v);
        if r > QUADRIC_TOL * v.norm_squared().max(1.0) {
            return Err(Error::domain(format!("point is off the quadric (residual {r:.3e})")));
        }
        Ok(SpacePoint {
            kind: self.kind,
            coords: v,
        })
    }

    /// Basis vector `e_i` (which lies on de Sitter space for `i ≥ 1`).
    pub fn basis_point(&self, i: usize) -> Result<SpacePoint> {
        let mut c = vec![0.0; self.ambient_dim()];
        c[i] = 1.0;
        self.point(&c)
    }

    fn check_generator(&self, h: &AlgebraElement) -> Result<()> {
        if h.algebra().matrix_size() != self.ambient_dim() {
            return Err(Error::domain(format!(
                "generator acts on dimension {}, model needs {}",
                h.algebra().matrix_size(),
                self.ambient_dim()
            )));
        }
        Ok(())
    }

    fn check_point(&self, m: &SpacePoint) -> Result<()> {
        if m.kind != self.kind || m.coords.len() != self.ambient_dim() {
            return Err(Error::domain("point belongs to a different model"));
        }
        Ok(())
    }

    /// `exp(t h) · m`.
    pub fn flow(&self, h: &AlgebraElement, t: f64, m: &SpacePoint) -> Result<SpacePoint> {
        self.check_generator(h)?;
        self.check_point(m)?;
        let g = (h.matrix() * t).exp();
        Ok(SpacePoint {
            kind: self.kind,
            coords: g * &m.coords,
        })
    }

    /// `exp(z h) · m` for complex `z`; only de Sitter space is complexified here.
    pub fn flow_complex(&self, h: &AlgebraElement, z: Complex<f64>, m: &ComplexPoint) -> Result<ComplexPoint> {
        if self.kind != QuadricKind::DeSitter {
            return Err(Error::Unsupported(
                "complex modular flow is only available on de Sitter space".into(),
            ));
        }
        self.check_generator(h)?;
        let g = h.matrix().map(|v| Complex::new(v, 0.0)) * z;
        Ok(ComplexPoint {
            coords: g.exp() * &m.coords,
        })
    }

    /// Derivative of the modular flow at `t = 0`, i.e. `h · m`.
    pub fn vector_field(&self, h: &AlgebraElement, m: &SpacePoint) -> Result<DVector<f64>> {
        self.check_generator(h)?;
        self.check_point(m)?;
        Ok(h.matrix() * &m.coords)
    }

    /// Future time direction used to orient the light cones.
    pub fn time_orientation(&self, m: &DVector<f64>) -> DVector<f64> {
        let mut f = DVector::zeros(self.ambient_dim());
        match self.kind {
            QuadricKind::DeSitter => f[0] = 1.0,
            QuadricKind::AntiDeSitter => {
                f[0] = m[1];
                f[1] = -m[0];
            }
        }
        f
    }

    pub fn tangent_cone(&self, m: &SpacePoint) -> Result<TangentCone> {
        self.check_point(m)?;
        Ok(TangentCone {
            model: self.clone(),
            base: m.coords.clone(),
        })
    }

    /// Signed Lorentzian margin of `h · m` against the open future cone at `m`.
    pub fn positivity_margin(&self, h: &AlgebraElement, m: &SpacePoint) -> Result<f64> {
        let x = self.vector_field(h, m)?;
        Ok(self.cone_margin(&m.coords, &x))
    }

    /// `sign(orientation) · √η(v,v)` for timelike `v`, `−√(−η(v,v))` otherwise.
    pub(crate) fn cone_margin(&self, base: &DVector<f64>, v: &DVector<f64>) -> f64 {
        let q = self.form(v, v);
        if q > 0.0 {
            let o = self.form(v, &self.time_orientation(base));
            if o > 0.0 {
                q.sqrt()
            } else {
                -q.sqrt()
            }
        } else {
            -(-q).sqrt()
        }
    }

    /// Membership in the positivity domain together with the margin.
    pub fn positivity_domain_contains(&self, h: &AlgebraElement, m: &SpacePoint) -> Result<(bool, f64)> {
        let margin = self.positivity_margin(h, m)?;
        Ok((margin >= POSITIVITY_MARGIN, margin))
    }

    /// Deterministic sample point number `index` for the given seed.
    pub fn sample_point(&self, seed: u64, index: usize) -> SpacePoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let n = self.ambient_dim();
        let mut c = DVector::zeros(n);
        match self.kind {
            QuadricKind::DeSitter => {
                let s: f64 = rng.random_range(-2.5..2.5);
                let dir = unit_vector(self.d, &mut rng);
                c[0] = s.sinh();
                for k in 0..self.d {
                    c[k + 1] = s.cosh() * dir[k];
                }
            }
            QuadricKind::AntiDeSitter => {
                let s: f64 = rng.random_range(0.0..2.5);
                let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let dir = unit_vector(self.d - 1, &mut rng);
                c[0] = s.cosh() * phi.cos();
                c[1] = s.cosh() * phi.sin();
                for k in 0..self.d - 1 {
                    c[k + 2] = s.sinh() * dir[k];
                }
            }
        }
        SpacePoint {
            kind: self.kind,
            coords: c,
        }
    }

    /// Labeled point cloud for the positivity domain of `h`.
    pub fn wedge_sample(&self, h: &AlgebraElement, count: usize, seed: u64) -> Result<Vec<LabeledPoint>> {
        self.check_generator(h)?;
        if count == 0 {
            return Err(Error::precondition("sample count must be at least 1"));
        }
        let hm = h.matrix();
        let points = crate::with_thread_pool(|| {
            (0..count)
                .into_par_iter()
                .map(|i| {
                    let p = self.sample_point(seed, i);
                    let x = &hm * &p.coords;
                    let margin = self.cone_margin(&p.coords, &x);
                    LabeledPoint {
                        index: i,
                        coords: p.coords.iter().copied().collect(),
                        label: margin >= POSITIVITY_MARGIN,
                        margin,
                    }
                })
                .collect()
        });
        Ok(points)
    }

    /// Indices where the flow by `t` leaves the positivity domain of a labeled-true point.
    pub fn flow_invariance_failures(
        &self,
        h: &AlgebraElement,
        points: &[LabeledPoint],
        times: &[f64],
    ) -> Result<Vec<usize>> {
        let mut failures = Vec::new();
        let flows: Vec<DMatrix<f64>> = times.iter().map(|t| (h.matrix() * *t).exp()).collect();
        let hm = h.matrix();
        for p in points.iter().filter(|p| p.label) {
            let v = DVector::from_column_slice(&p.coords);
            let ok = flows.iter().all(|g| {
                let w = g * &v;
                self.cone_margin(&w, &(&hm * &w)) >= POSITIVITY_MARGIN
            });
            if !ok {
                failures.push(p.index);
            }
        }
        Ok(failures)
    }

    /// Checks that the points stay on the quadric under the given flows.
    pub fn flow_quadric_residual(&self, h: &AlgebraElement, m: &SpacePoint, times: &[f64]) -> Result<f64> {
        let mut worst = 0.0_f64;
        for &t in times {
            let p = self.flow(h, t, m)?;
            worst = worst.max(self.quadric_residual(&p.coords));
        }
        Ok(worst)
    }
}

fn unit_vector(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// The cone of future-pointing causal tangent vectors at a point.
#[derive(Clone, Debug)]
pub struct TangentCone {
    model: Quadric,
    base: DVector<f64>,
}

impl TangentCone {
    pub fn base(&self) -> &DVector<f64> {
        &self.base
    }

    /// Residual of `η(v, m) = 0`.
    pub fn tangency_residual(&self, v: &DVector<f64>) -> f64 {
        self.model.form(v, &self.base).abs()
    }

    /// Projection of an ambient vector onto the tangent space.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        let level = self.model.level();
        v - &self.base * (self.model.form(v, &self.base) / level)
    }

    pub fn margin(&self, v: &DVector<f64>) -> f64 {
        self.model.cone_margin(&self.base, v)
    }

    pub fn contains(&self, v: &DVector<f64>) -> bool {
        self.margin(v) >= -POSITIVITY_MARGIN
    }

    pub fn contains_interior(&self, v: &DVector<f64>) -> bool {
        self.margin(v) >= POSITIVITY_MARGIN
    }

    /// A unit future timelike tangent vector, witnessing nonempty interior.
    pub fn interior_vector(&self) -> DVector<f64> {
        let f = self.project(&self.model.time_orientation(&self.base));
        let q = self.model.form(&f, &f);
        f / q.sqrt()
    }
}

/// Flow-plus-great-circle path between two points of the de Sitter wedge.
///
/// Each point is boosted to the slice `x₀ = 0`, joined there along the
/// shorter great circle and boosted back. Returns the smallest positivity
/// margin met along the discretized path.
pub fn wedge_path_min_margin(
    model: &Quadric,
    h: &AlgebraElement,
    a: &SpacePoint,
    b: &SpacePoint,
    steps: usize,
) -> Result<f64> {
    if model.kind() != QuadricKind::DeSitter {
        return Err(Error::Unsupported("wedge paths are built for de Sitter space".into()));
    }
    let slice_time = |p: &SpacePoint| -> Result<f64> {
        let (m0, m1) = (p.coords[0], p.coords[1]);
        if m1 <= m0.abs() {
            return Err(Error::domain("path endpoint is outside the wedge"));
        }
        Ok(-(m0 / m1).atanh())
    };
    let (ta, tb) = (slice_time(a)?, slice_time(b)?);
    let mut worst = f64::INFINITY;
    let mut visit = |p: &SpacePoint| -> Result<()> {
        worst = worst.min(model.positivity_margin(h, p)?);
        Ok(())
    };
    let steps = steps.max(1);
    for k in 0..=steps {
        visit(&model.flow(h, ta * k as f64 / steps as f64, a)?)?;
    }
    let pa = model.flow(h, ta, a)?.coords;
    let pb = model.flow(h, tb, b)?.coords;
    let cos = pa.dot(&pb).clamp(-1.0, 1.0);
    let angle = cos.acos();
    for k in 0..=steps {
        let s = k as f64 / steps as f64;
        let c = if angle < 1e-12 {
            pa.clone()
        } else {
            (&pa * ((1.0 - s) * angle).sin() + &pb * (s * angle).sin()) / angle.sin()
        };
        visit(&SpacePoint {
            kind: model.kind(),
            coords: c,
        })?;
    }
    for k in 0..=steps {
        visit(&model.flow(h, tb * k as f64 / steps as f64, b)?)?;
    }
    Ok(worst)
}

/// Sampled positivity domain of `−h` on de Sitter space compared with the
/// reflected wedge `{m₁ < −|m₀|}`.
#[derive(Clone, Debug, Serialize)]
pub struct NegativeEulerReport {
    pub samples: usize,
    pub positives: usize,
    pub mismatches: Vec<usize>,
    pub seed: u64,
}

pub fn negative_euler_check(model: &Quadric, h: &AlgebraElement, count: usize, seed: u64) -> Result<NegativeEulerReport> {
    if h.is_zero(1e-14) {
        return Err(Error::precondition("the Euler element must be nonzero"));
    }
    if !is_euler(h) {
        return Err(Error::precondition("element is not an Euler element"));
    }
    if model.kind() != QuadricKind::DeSitter {
        return Err(Error::Unsupported("the reflected-wedge oracle is stated for de Sitter space".into()));
    }
    let neg = h.scale(-1.0);
    let pts = model.wedge_sample(&neg, count, seed)?;
    let mut mismatches = Vec::new();
    let mut positives = 0;
    for p in &pts {
        if p.label {
            positives += 1;
        }
        if p.margin.abs() > POSITIVITY_MARGIN {
            let oracle = p.coords[1] < -p.coords[0].abs();
            if oracle != p.label {
                mismatches.push(p.index);
            }
        }
    }
    Ok(NegativeEulerReport {
        samples: count,
        positives,
        mismatches,
        seed,
    })
}

/// Lorentzian margin of `y` against the open future light cone `V₊` of `ℝ^{1,d}`.
pub fn light_cone_margin(y: &DVector<f64>) -> f64 {
    let q = y[0] * y[0] - y.rows(1, y.len() - 1).norm_squared();
    if q > 0.0 {
        q.sqrt().copysign(y[0])
    } else {
        -(-q).sqrt()
    }
}

impl Quadric {
    /// Residual of the complexified quadric equation.
    pub fn complex_quadric_residual(&self, z: &ComplexPoint) -> f64 {
        (self.form_c(&z.coords, &z.coords) - Complex::new(self.level(), 0.0)).norm()
    }
}
