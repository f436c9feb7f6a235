//! Crown domain of de Sitter space and the KMS wedge test.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;

use super::quadric::{light_cone_margin, ComplexPoint, Quadric, QuadricKind, SpacePoint, QUADRIC_TOL};
use crate::error::{Error, Result};
use crate::lie::AlgebraElement;

/// Margin required of `Im z` inside the open light cone.
pub const CROWN_MARGIN: f64 = 1e-10;

fn require_de_sitter(model: &Quadric) -> Result<()> {
    if model.kind() != QuadricKind::DeSitter {
        return Err(Error::Unsupported("the crown is implemented for de Sitter space".into()));
    }
    Ok(())
}

/// The point `i e₀` of the complexified quadric.
pub fn crown_base_point(model: &Quadric) -> ComplexPoint {
    let mut c = DVector::from_element(model.ambient_dim(), Complex::new(0.0, 0.0));
    c[0] = Complex::new(0.0, 1.0);
    ComplexPoint { coords: c }
}

/// Margin of `Im z` against `V₊`; errors when `z` is off the complex quadric.
pub fn crown_margin(model: &Quadric, z: &ComplexPoint) -> Result<f64> {
    require_de_sitter(model)?;
    if z.coords.len() != model.ambient_dim() {
        return Err(Error::domain("complex point has the wrong dimension"));
    }
    let r = model.complex_quadric_residual(z);
    let scale = z.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().max(1.0);
    if r > QUADRIC_TOL * scale {
        return Err(Error::precondition(format!(
            "point is off the complexified quadric (residual {r:.3e})"
        )));
    }
    Ok(light_cone_margin(&z.imag_part()))
}

pub fn crown_contains(model: &Quadric, z: &ComplexPoint) -> Result<bool> {
    Ok(crown_margin(model, z)? >= CROWN_MARGIN)
}

/// `exp(±(πi/2) h) · i e₀`, a real point of de Sitter space.
pub fn boundary_orbit_point(model: &Quadric, h: &AlgebraElement, sign: f64) -> Result<SpacePoint> {
    require_de_sitter(model)?;
    let z = Complex::new(0.0, sign.signum() * FRAC_PI_2);
    let p = model.flow_complex(h, z, &crown_base_point(model))?;
    let im = p.imag_part().amax();
    if im > 1e-12 {
        return Err(Error::numeric(
            format!("boundary point has imaginary part {im:.3e}"),
            im,
        ));
    }
    model.point(p.real_part().as_slice())
}

/// Interior grid of the strip `0 < Im z < π`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StripGrid {
    pub real_points: usize,
    pub imag_points: usize,
    /// Real parts range over `[−real_extent, real_extent]`.
    pub real_extent: f64,
    /// Distance kept from the boundary lines `Im z = 0` and `Im z = π`.
    pub boundary_offset: f64,
}

impl Default for StripGrid {
    fn default() -> Self {
        StripGrid {
            real_points: 11,
            imag_points: 11,
            real_extent: 3.0,
            boundary_offset: 0.05,
        }
    }
}

impl StripGrid {
    pub fn square(n: usize) -> Self {
        StripGrid {
            real_points: n,
            imag_points: n,
            ..Default::default()
        }
    }

    pub fn points(&self) -> Vec<Complex<f64>> {
        let lin = |n: usize, a: f64, b: f64| -> Vec<f64> {
            if n <= 1 {
                vec![(a + b) / 2.0]
            } else {
                (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
            }
        };
        let ts = lin(self.real_points, -self.real_extent, self.real_extent);
        let ss = lin(self.imag_points, self.boundary_offset, PI - self.boundary_offset);
        let mut out = Vec::with_capacity(ts.len() * ss.len());
        for &s in &ss {
            for &t in &ts {
                out.push(Complex::new(t, s));
            }
        }
        out
    }
}

/// Which light cone the imaginary parts along the strip are tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KmsOrientation {
    Future,
    Past,
}

/// KMS wedge test on de Sitter space with a frozen orientation.
#[derive(Clone, Debug)]
pub struct KmsTester {
    model: Quadric,
    h: AlgebraElement,
    orientation: KmsOrientation,
}

impl KmsTester {
    /// Calibrates the orientation so that the base point `e₁` is accepted.
    pub fn new(model: &Quadric, h: &AlgebraElement) -> Result<Self> {
        require_de_sitter(model)?;
        let base = model.basis_point(1)?;
        let grid = StripGrid::default();
        let mut chosen = None;
        for o in [KmsOrientation::Future, KmsOrientation::Past] {
            let t = KmsTester {
                model: model.clone(),
                h: h.clone(),
                orientation: o,
            };
            if t.contains(&base, &grid)? {
                chosen = Some(o);
                break;
            }
        }
        let orientation = chosen.ok_or_else(|| {
            Error::precondition("neither orientation accepts the base point; h is not a boost for e1")
        })?;
        Ok(KmsTester {
            model: model.clone(),
            h: h.clone(),
            orientation,
        })
    }

    pub fn orientation(&self) -> KmsOrientation {
        self.orientation
    }

    fn flows(&self, grid: &StripGrid) -> Vec<DMatrix<Complex<f64>>> {
        let hm = self.h.matrix().map(|v| Complex::new(v, 0.0));
        grid.points().into_iter().map(|z| (&hm * z).exp()).collect()
    }

    fn margin_with(&self, flows: &[DMatrix<Complex<f64>>], m: &SpacePoint) -> f64 {
        let start = m.coords.map(|v| Complex::new(v, 0.0));
        let sign = match self.orientation {
            KmsOrientation::Future => 1.0,
            KmsOrientation::Past => -1.0,
        };
        flows
            .iter()
            .map(|g| light_cone_margin(&((g * &start).map(|c| c.im) * sign)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest oriented crown margin of `exp(z h) m` over the grid.
    pub fn min_margin(&self, m: &SpacePoint, grid: &StripGrid) -> Result<f64> {
        Ok(self.min_margins(std::slice::from_ref(m), grid)?[0])
    }

    /// [`Self::min_margin`] for many points, sharing the flow matrices.
    pub fn min_margins(&self, points: &[SpacePoint], grid: &StripGrid) -> Result<Vec<f64>> {
        for m in points {
            if m.kind != QuadricKind::DeSitter || m.coords.len() != self.model.ambient_dim() {
                return Err(Error::domain("point belongs to a different model"));
            }
        }
        let flows = self.flows(grid);
        Ok(points.iter().map(|m| self.margin_with(&flows, m)).collect())
    }

    pub fn contains(&self, m: &SpacePoint, grid: &StripGrid) -> Result<bool> {
        Ok(self.min_margin(m, grid)? >= CROWN_MARGIN)
    }
}
