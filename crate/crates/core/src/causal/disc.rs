//! The unit disc as `SU(1,1)/K` and the strip map `z ↦ tanh(z/2)`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Complex;

use crate::error::{Error, Result};

type C64 = Complex<f64>;

/// Möbius action of `(a, b; b̄, ā)` with `|a|² − |b|² = 1`: `(az + b)/(b̄z + ā)`.
pub fn disc_action(a: C64, b: C64, z: C64) -> Result<C64> {
    let det = a.norm_sqr() - b.norm_sqr();
    if (det - 1.0).abs() > 1e-9 * a.norm_sqr().max(1.0) {
        return Err(Error::domain(format!("|a|^2 - |b|^2 = {det}, expected 1")));
    }
    if z.norm() >= 1.0 {
        return Err(Error::domain("point is not in the open unit disc"));
    }
    Ok((a * z + b) / (b.conj() * z + a.conj()))
}

/// Modular flow of `h = ½(0 1; 1 0)` on the disc: `exp(th)` has `a = cosh(t/2)`, `b = sinh(t/2)`.
pub fn disc_flow(t: f64, z: C64) -> Result<C64> {
    disc_action(
        C64::new((t / 2.0).cosh(), 0.0),
        C64::new((t / 2.0).sinh(), 0.0),
        z,
    )
}

/// `tanh(z/2)`, mapping the strip `|Im z| < π/2` onto the disc. The boundary
/// lines are accepted and land on the unit circle.
pub fn strip_to_disc(z: C64) -> Result<C64> {
    if z.im.abs() > FRAC_PI_2 + 1e-12 {
        return Err(Error::domain("point is outside the strip |Im z| <= pi/2"));
    }
    Ok((z / 2.0).tanh())
}
