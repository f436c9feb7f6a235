//! Complex log-gamma by the Lanczos approximation (g = 7, nine terms).

use std::f64::consts::PI;

use nalgebra::Complex;

type C64 = Complex<f64>;

const G: f64 = 7.0;
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(z)` on the principal branch for `Re z > 0`, continued by reflection elsewhere.
pub fn ln_gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1 − z) = π / sin(πz)
        let s = (z * PI).sin();
        return C64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(C64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut acc = C64::new(COEFFS[0], 0.0);
    for (k, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    let t = z + G + 0.5;
    C64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + acc.ln()
}

pub fn gamma(z: C64) -> C64 {
    ln_gamma(z).exp()
}
