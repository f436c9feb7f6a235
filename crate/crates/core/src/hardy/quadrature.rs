use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Default node count for membership tests.
pub const DEFAULT_NODES: usize = 2048;

/// Default number of Gauss–Legendre panels per support interval.
pub const DEFAULT_PANELS: usize = 8;

/// Composite Gauss–Legendre rule on `[a, b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    /// `nodes` total points split evenly over `panels` equal panels.
    pub fn gauss_legendre(a: f64, b: f64, nodes: usize, panels: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::domain(format!("invalid interval [{a}, {b}]")));
        }
        if panels == 0 || nodes < panels || !nodes.is_multiple_of(panels) {
            return Err(Error::domain(format!(
                "{nodes} nodes cannot be split into {panels} equal panels"
            )));
        }
        let per = NonZeroUsize::new(nodes / panels).expect("checked above");
        let rule = GaussLegendre::new(per);
        let width = (b - a) / panels as f64;
        let mut xs = Vec::with_capacity(nodes);
        let mut ws = Vec::with_capacity(nodes);
        for p in 0..panels {
            let lo = a + width * p as f64;
            let hi = if p + 1 == panels { b } else { lo + width };
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for &(x, w) in rule.as_node_weight_pairs() {
                xs.push(mid + half * x);
                ws.push(half * w);
            }
        }
        Ok(Quadrature { nodes: xs, weights: ws })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Smooth bump `exp(−1/(1 − t²))` rescaled to `[a, b]`, zero outside.
pub fn bump(a: f64, b: f64) -> impl Fn(f64) -> f64 + Clone {
    move |x: f64| {
        let t = (2.0 * x - a - b) / (b - a);
        if t.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - t * t)).exp()
        }
    }
}
