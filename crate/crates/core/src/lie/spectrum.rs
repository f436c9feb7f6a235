use nalgebra::{Complex, DMatrix, DVector};

use super::algebra::AlgebraElement;
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::linalg;

/// Eigenvalues closer than this (relative to `max(1, ‖A‖)`) are reported as one.
pub const CLUSTER_TOL: f64 = 1e-8;

// Defective eigenvalues split under rounding by roughly eps^(1/k) for a
// Jordan block of size k, so the semisimplicity test groups more coarsely.
const DEFECT_MERGE_TOL: f64 = 1e-3;
const MIN_POLY_TOL: f64 = 1e-7;

/// Eigenvalue cluster with its algebraic multiplicity.
#[derive(Clone, Debug)]
pub struct EigenCluster {
    pub value: Complex<f64>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Eigenvalues with repetition, cluster representatives substituted.
    pub eigenvalues: Vec<Complex<f64>>,
    pub clusters: Vec<EigenCluster>,
    pub semisimple: bool,
    scale: f64,
}

impl Spectrum {
    pub fn max_abs_real(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |a, l| a.max(l.re.abs()))
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |a, l| a.max(l.im.abs()))
    }

    /// `max(1, ‖ad x‖_F)`, the scale used for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

fn cluster(values: &[Complex<f64>], tol: f64) -> Vec<(Complex<f64>, Vec<usize>)> {
    let mut groups: Vec<(Complex<f64>, Vec<usize>)> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        // single-linkage against existing members
        let mut hit: Option<usize> = None;
        for (g, (_, members)) in groups.iter().enumerate() {
            if members.iter().any(|&m| (values[m] - v).norm() <= tol) {
                hit = Some(g);
                break;
            }
        }
        match hit {
            Some(g) => groups[g].1.push(i),
            None => groups.push((*v, vec![i])),
        }
    }
    for (center, members) in groups.iter_mut() {
        let sum: Complex<f64> = members.iter().map(|&m| values[m]).sum();
        *center = sum / members.len() as f64;
    }
    groups
}

/// Spectrum of a real square matrix with a diagonalizability flag.
pub fn matrix_spectrum(a: &DMatrix<f64>) -> Result<Spectrum> {
    let d = a.nrows();
    let scale = a.norm().max(1.0);
    if d == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            clusters: Vec::new(),
            semisimple: true,
            scale,
        });
    }
    let schur = nalgebra::Schur::try_new(a.clone(), f64::EPSILON, 10_000).ok_or_else(|| {
        let s = linalg::singular_values(a);
        let smin = s.iter().copied().fold(f64::INFINITY, f64::min);
        let smax = s.iter().copied().fold(0.0, f64::max);
        Error::numeric("Schur iteration did not converge", smax / smin)
    })?;
    let raw: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();

    let coarse = cluster(&raw, DEFECT_MERGE_TOL * scale);
    let fine = cluster(&raw, CLUSTER_TOL * scale);

    // Minimal-polynomial test: A is diagonalizable iff Π (A − μ_c) vanishes.
    let ac = linalg::to_complex(a);
    let mut prod = DMatrix::<Complex<f64>>::identity(d, d);
    for (mu, _) in &coarse {
        let mut shifted = ac.clone();
        for i in 0..d {
            shifted[(i, i)] -= mu;
        }
        prod *= shifted;
    }
    let residual = prod.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    let semisimple_poly = residual <= MIN_POLY_TOL * scale.powi(coarse.len() as i32);

    // Defective blocks make the fine clusters meaningless; report the coarse ones.
    let groups = if semisimple_poly { fine } else { coarse };
    let mut eigenvalues = vec![Complex::new(0.0, 0.0); d];
    let mut clusters = Vec::with_capacity(groups.len());
    for (center, members) in &groups {
        let snapped = snap(*center, scale);
        for &m in members {
            eigenvalues[m] = snapped;
        }
        clusters.push(EigenCluster {
            value: snapped,
            multiplicity: members.len(),
        });
    }

    // Geometric multiplicities must add up to d.
    let mut geometric = 0;
    if semisimple_poly {
        for c in &clusters {
            let mut shifted = ac.clone();
            for i in 0..d {
                shifted[(i, i)] -= c.value;
            }
            geometric += d - linalg::complex_rank(&shifted, CLUSTER_TOL);
        }
    }
    Ok(Spectrum {
        eigenvalues,
        clusters,
        semisimple: semisimple_poly && geometric == d,
        scale,
    })
}

// Removes rounding noise in parts that are zero to working precision.
fn snap(z: Complex<f64>, scale: f64) -> Complex<f64> {
    let eps = 64.0 * f64::EPSILON * scale;
    Complex::new(
        if z.re.abs() <= eps { 0.0 } else { z.re },
        if z.im.abs() <= eps { 0.0 } else { z.im },
    )
}

/// Spectrum of `ad x`.
pub fn spectrum(x: &AlgebraElement) -> Result<Spectrum> {
    matrix_spectrum(&x.ad_matrix())
}

fn rel_tol(x: &AlgebraElement, s: &Spectrum) -> f64 {
    x.algebra().tolerance().max(1e-12) * s.scale()
}

/// Semisimple `ad x` with purely imaginary spectrum.
pub fn is_elliptic(x: &AlgebraElement) -> bool {
    match spectrum(x) {
        Ok(s) => s.semisimple && s.max_abs_real() <= rel_tol(x, &s),
        Err(_) => false,
    }
}

/// Semisimple `ad x` with real spectrum.
pub fn is_hyperbolic(x: &AlgebraElement) -> bool {
    match spectrum(x) {
        Ok(s) => s.semisimple && s.max_abs_imag() <= rel_tol(x, &s),
        Err(_) => false,
    }
}

/// `ad h` is diagonalizable with eigenvalues in {−1, 0, 1}, both ±1 occurring.
pub fn is_euler(h: &AlgebraElement) -> bool {
    let Ok(s) = spectrum(h) else {
        return false;
    };
    if !s.semisimple {
        return false;
    }
    let tol = rel_tol(h, &s);
    let near = |l: &Complex<f64>, t: f64| (l - Complex::new(t, 0.0)).norm() <= tol;
    let allowed = s
        .eigenvalues
        .iter()
        .all(|l| near(l, -1.0) || near(l, 0.0) || near(l, 1.0));
    let plus = s.eigenvalues.iter().any(|l| near(l, 1.0));
    let minus = s.eigenvalues.iter().any(|l| near(l, -1.0));
    allowed && plus && minus
}

/// Decomposition of an algebra into the eigenspaces of `ad h` for eigenvalues 1, 0, −1.
#[derive(Clone, Debug)]
pub struct Grading {
    pub plus: Subspace,
    pub zero: Subspace,
    pub minus: Subspace,
    projections: [DMatrix<f64>; 3],
}

impl Grading {
    /// Projection onto `g_λ` along the other two, `λ ∈ {1, 0, −1}`.
    pub fn projection(&self, lambda: i32) -> &DMatrix<f64> {
        match lambda {
            1 => &self.projections[0],
            0 => &self.projections[1],
            -1 => &self.projections[2],
            _ => panic!("grading degree must be -1, 0 or 1"),
        }
    }

    pub fn component(&self, lambda: i32) -> &Subspace {
        match lambda {
            1 => &self.plus,
            0 => &self.zero,
            -1 => &self.minus,
            _ => panic!("grading degree must be -1, 0 or 1"),
        }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.plus.dim(), self.zero.dim(), self.minus.dim())
    }

    /// Worst residual of `P₊ + P₀ + P₋ = 1` and `P_i P_j = δ_ij P_i`.
    pub fn projection_residual(&self) -> f64 {
        let d = self.projections[0].nrows();
        let sum = &self.projections[0] + &self.projections[1] + &self.projections[2];
        let mut worst = linalg::max_abs(&(sum - DMatrix::identity(d, d)));
        for i in 0..3 {
            for j in 0..3 {
                let prod = &self.projections[i] * &self.projections[j];
                let target = if i == j {
                    self.projections[i].clone()
                } else {
                    DMatrix::zeros(d, d)
                };
                worst = worst.max(linalg::max_abs(&(prod - target)));
            }
        }
        worst
    }

    /// Worst projection residual of `[g_i, g_j]` outside `g_{i+j}` (zero when |i+j| > 1).
    pub fn bracket_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in [-1, 0, 1] {
            for j in [-1, 0, 1] {
                for a in self.component(i).basis_vectors() {
                    for b in self.component(j).basis_vectors() {
                        let c = a.bracket(b).expect("same algebra");
                        let r = if (i + j).abs() > 1 {
                            c.norm()
                        } else {
                            self.component(i + j).residual(&c)
                        };
                        worst = worst.max(r);
                    }
                }
            }
        }
        worst
    }
}

/// Grading rank threshold for eigenspace computation.
pub const GRADING_RANK_TOL: f64 = 1e-9;

/// The three eigenspaces of `ad h` for an Euler element.
pub fn grading(h: &AlgebraElement) -> Result<Grading> {
    if !is_euler(h) {
        return Err(Error::precondition("element is not an Euler element"));
    }
    let alg = h.algebra();
    let d = alg.dim();
    let ad = h.ad_matrix();
    let eig = |lambda: f64| {
        let shifted = &ad - DMatrix::<f64>::identity(d, d) * lambda;
        linalg::null_space(&shifted, GRADING_RANK_TOL)
    };
    let (bp, b0, bm) = (eig(1.0), eig(0.0), eig(-1.0));
    if bp.ncols() + b0.ncols() + bm.ncols() != d {
        return Err(Error::numeric(
            format!(
                "eigenspace dimensions {}+{}+{} do not add up to {d}",
                bp.ncols(),
                b0.ncols(),
                bm.ncols()
            ),
            f64::NAN,
        ));
    }
    let frame = linalg::hstack(&[&bp, &b0, &bm], d);
    let inv = frame
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::numeric("eigenvector frame is singular", f64::INFINITY))?;
    let select = |from: usize, len: usize| {
        let mut diag = DVector::zeros(d);
        for k in from..from + len {
            diag[k] = 1.0;
        }
        &frame * DMatrix::from_diagonal(&diag) * &inv
    };
    let p_plus = select(0, bp.ncols());
    let p_zero = select(bp.ncols(), b0.ncols());
    let p_minus = select(bp.ncols() + b0.ncols(), bm.ncols());
    Ok(Grading {
        plus: Subspace::from_frame(alg, bp),
        zero: Subspace::from_frame(alg, b0),
        minus: Subspace::from_frame(alg, bm),
        projections: [p_plus, p_zero, p_minus],
    })
}
