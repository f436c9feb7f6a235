//! Finite-sample net of real subspaces for the affine group on the half-plane.
//!
//! `ℋ_E(O)` is the real span of `e^{−πi/4} ξ_φ` for bumps `φ` on the dyadic
//! intervals `I ⊆ O` with `2^{−finest} ≤ |I| ≤ 2^{−coarsest}`. Subspaces are
//! compared through their values on a fixed evaluation set.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::kernel::{KernelModel, C64};
use super::mellin::{membership_residual, wedge_phase, MellinGrid, HALFPLANE_TOL};
use super::smear::{halfplane_evaluation_set, SmearedVector};
use crate::error::{Error, Result};
use crate::linalg;

/// Tolerance for range containment and covariance.
pub const NET_TOL: f64 = 1e-8;

/// Relative singular-value cutoff for ranges of evaluation matrices.
const RANGE_TOL: f64 = 1e-12;

/// Coarsest dyadic level used by default (intervals of length 4).
pub const DEFAULT_COARSEST: i32 = -2;

/// Dyadic intervals `[k 2^{−j}, (k+1) 2^{−j}] ⊆ [a, b]` for `coarsest ≤ j ≤ finest`.
pub fn dyadic_dictionary(a: f64, b: f64, coarsest: i32, finest: i32) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for level in coarsest..=finest {
        let h = 2f64.powi(-level);
        let first = (a / h).ceil() as i64;
        let last = (b / h).floor() as i64;
        for k in first..last {
            out.push((k as f64 * h, (k + 1) as f64 * h));
        }
    }
    out
}

/// One region of the net.
#[derive(Clone, Debug)]
pub struct NetEntry {
    pub interval: (f64, f64),
    pub supports: Vec<(f64, f64)>,
    pub vectors: Vec<SmearedVector>,
    /// Real evaluation coordinates, one unit column per vector.
    pub samples: DMatrix<f64>,
}

impl NetEntry {
    pub fn dim_bound(&self) -> usize {
        self.vectors.len()
    }
}

/// Evaluation points plus quadrature size shared by every region.
#[derive(Clone, Debug)]
pub struct AffineNet {
    pub points: Vec<C64>,
    pub nodes: usize,
}

impl Default for AffineNet {
    fn default() -> Self {
        AffineNet {
            points: halfplane_evaluation_set(),
            nodes: 256,
        }
    }
}

impl AffineNet {
    /// Region spanned by bumps on the given supports, each required to lie in `interval`.
    pub fn region(&self, interval: (f64, f64), supports: &[(f64, f64)]) -> Result<NetEntry> {
        let (a, b) = interval;
        if !(a < b) {
            return Err(Error::domain(format!("empty interval [{a}, {b}]")));
        }
        let vectors = supports
            .iter()
            .map(|&(lo, hi)| {
                if lo < a || hi > b {
                    return Err(Error::precondition(format!(
                        "test function on [{lo}, {hi}] escapes [{a}, {b}]"
                    )));
                }
                Ok(SmearedVector::bump(KernelModel::HalfPlane, (lo, hi), self.nodes)?
                    .with_phase(wedge_phase()))
            })
            .collect::<Result<Vec<_>>>()?;
        let samples = self.sample(&vectors)?;
        Ok(NetEntry {
            interval,
            supports: supports.to_vec(),
            vectors,
            samples,
        })
    }

    /// Region spanned by the dyadic dictionary down to level `finest`.
    pub fn dyadic(&self, interval: (f64, f64), finest: i32) -> Result<NetEntry> {
        let supports = dyadic_dictionary(interval.0, interval.1, DEFAULT_COARSEST, finest);
        self.region(interval, &supports)
    }

    fn sample(&self, vectors: &[SmearedVector]) -> Result<DMatrix<f64>> {
        let m = self.points.len();
        let mut out = DMatrix::zeros(2 * m, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            let vals = v.eval_on(&self.points)?;
            let col = DVector::from_fn(2 * m, |k, _| if k < m { vals[k].re } else { vals[k - m].im });
            let norm = col.norm();
            if norm > 0.0 {
                out.set_column(j, &(col / norm));
            }
        }
        Ok(out)
    }

    /// Distance between `U(b, a) ℋ(from)` and `ℋ(to)`, both ways.
    pub fn covariance_residual(&self, from: &NetEntry, to: &NetEntry, b: f64, a: f64) -> Result<f64> {
        let moved = from
            .vectors
            .iter()
            .map(|v| v.affine(b, a))
            .collect::<Result<Vec<_>>>()?;
        let t = self.sample(&moved)?;
        Ok(range_residual(&t, &to.samples).max(range_residual(&to.samples, &t)))
    }

    /// Complex rank of the evaluation matrix of a region.
    pub fn evaluation_rank(&self, entry: &NetEntry) -> Result<usize> {
        let m = self.points.len();
        let mut e = DMatrix::zeros(m, entry.vectors.len());
        for (j, v) in entry.vectors.iter().enumerate() {
            let vals = v.eval_on(&self.points)?;
            let norm = vals.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for (k, z) in vals.into_iter().enumerate() {
                e[(k, j)] = if norm > 0.0 { z / norm } else { C64::new(0.0, 0.0) };
            }
        }
        Ok(linalg::complex_rank(&e, RANGE_TOL))
    }
}

/// Largest relative distance of a column of `a` from the range of `b`.
pub fn range_residual(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    if a.ncols() == 0 {
        return 0.0;
    }
    let q = if b.ncols() == 0 {
        DMatrix::zeros(a.nrows(), 0)
    } else {
        let d = linalg::svd(b);
        let smax = d.s.first().copied().unwrap_or(0.0);
        let keep = d.s.iter().filter(|&&s| s > RANGE_TOL * smax).count();
        d.u.columns(0, keep).into_owned()
    };
    a.column_iter()
        .map(|c| {
            let n = c.norm();
            if n == 0.0 {
                return 0.0;
            }
            (c - &q * (q.transpose() * c)).norm() / n
        })
        .fold(0.0, f64::max)
}

/// A single labelled check.
#[derive(Clone, Debug, Serialize)]
pub struct NetCheck {
    pub label: String,
    pub residual: f64,
    pub pass: bool,
}

/// Parameters of [`net_checks`].
#[derive(Clone, Debug, Serialize)]
pub struct NetConfig {
    pub seed: u64,
    pub pairs: usize,
    pub finest: i32,
    pub nodes: usize,
    /// Truncated wedge `(0, ∞) ∩ [lo, hi]`.
    pub wedge: (f64, f64),
    pub wedge_finest: i32,
    /// Small interval for the finite-sample cyclicity check.
    pub small: (f64, f64),
    pub small_finest: i32,
}

impl Default for NetConfig {
    fn default() -> Self {
        NetConfig {
            seed: 0,
            pairs: 20,
            finest: 3,
            nodes: 256,
            wedge: (0.5, 4.0),
            wedge_finest: 2,
            small: (1.0, 1.5),
            small_finest: 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NetReport {
    pub isotony: Vec<NetCheck>,
    pub covariance: Vec<NetCheck>,
    pub membership: Vec<NetCheck>,
    pub reeh_schlieder: NetCheck,
}

impl NetReport {
    pub fn checks(&self) -> impl Iterator<Item = &NetCheck> {
        self.isotony
            .iter()
            .chain(&self.covariance)
            .chain(&self.membership)
            .chain(std::iter::once(&self.reeh_schlieder))
    }

    pub fn pass(&self) -> bool {
        self.checks().all(|c| c.pass)
    }
}

/// Random nested pairs `O₁ ⊆ O₂` inside `[−4, 4]`, each long enough for a level-1 interval.
pub fn nested_pairs(seed: u64, count: usize) -> Vec<((f64, f64), (f64, f64))> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.random_range(1.0..3.0);
            let a = rng.random_range(-4.0..4.0 - len);
            let inner = rng.random_range(0.5..len);
            let c = a + rng.random_range(0.0..len - inner);
            ((c, c + inner), (a, a + len))
        })
        .collect()
}

fn label(o: (f64, f64)) -> String {
    format!("[{}, {}]", o.0, o.1)
}

/// Isotony, dilation covariance, wedge membership and finite-sample cyclicity.
pub fn net_checks(cfg: &NetConfig) -> Result<NetReport> {
    let net = AffineNet {
        nodes: cfg.nodes,
        ..AffineNet::default()
    };

    let mut pairs = vec![((1.0, 2.0), (0.0, 3.0))];
    pairs.extend(nested_pairs(cfg.seed, cfg.pairs.saturating_sub(1)));
    let mut isotony = Vec::with_capacity(pairs.len());
    for (small, large) in pairs {
        let s = net.dyadic(small, cfg.finest)?;
        let l = net.dyadic(large, cfg.finest)?;
        let residual = range_residual(&s.samples, &l.samples);
        isotony.push(NetCheck {
            label: format!("{} in {}", label(small), label(large)),
            residual,
            pass: residual <= NET_TOL,
        });
    }

    // dilation by 2 moves resolution 2^{-J} to 2^{1-J}
    let mut covariance = Vec::new();
    for (o, a) in [((1.0, 2.0), 2.0), ((0.5, 1.5), 2.0), ((1.0, 2.0), 4.0_f64)] {
        let shift = a.log2().round() as i32;
        let from = net.dyadic(o, cfg.finest)?;
        let image = (a * o.0, a * o.1);
        let to = net.dyadic(image, cfg.finest - shift)?;
        let residual = net.covariance_residual(&from, &to, 0.0, a)?;
        covariance.push(NetCheck {
            label: format!("U(0, {a}) {} = {}", label(o), label(image)),
            residual,
            pass: residual <= NET_TOL,
        });
    }

    let wedge = net.dyadic(cfg.wedge, cfg.wedge_finest)?;
    let grid = MellinGrid::default();
    let membership = wedge
        .vectors
        .iter()
        .zip(&wedge.supports)
        .map(|(v, &s)| {
            let residual = membership_residual(v, grid)?;
            Ok(NetCheck {
                label: format!("bump on {}", label(s)),
                residual,
                pass: residual <= HALFPLANE_TOL,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let small = net.dyadic(cfg.small, cfg.small_finest)?;
    let rank = net.evaluation_rank(&small)?;
    let full = small.vectors.len().min(net.points.len());
    let reeh_schlieder = NetCheck {
        label: format!(
            "rank {rank} of {full} from {} vectors on {}",
            small.vectors.len(),
            label(cfg.small)
        ),
        residual: (full - rank) as f64,
        pass: rank == full,
    };

    Ok(NetReport {
        isotony,
        covariance,
        membership,
        reeh_schlieder,
    })
}
