use std::collections::BTreeMap;

use serde::Serialize;

use super::pair::ModularPair;
use super::subspace::RealSubspace;
use crate::error::{Error, Result};

/// Local subspace of a region: defined only when some wedge covers it.
#[derive(Clone, Debug)]
pub enum NetValue {
    Defined(RealSubspace),
    /// No wedge contains the region.
    Undefined,
}

impl NetValue {
    pub fn subspace(&self) -> Option<&RealSubspace> {
        match self {
            NetValue::Defined(v) => Some(v),
            NetValue::Undefined => None,
        }
    }
}

/// `ℋ(O) = ⋂_{k ∈ cover(O)} Fix(J_k Δ_k^{1/2})`.
pub fn bgl_net(wedges: &[ModularPair], cover: &BTreeMap<String, Vec<usize>>) -> Result<BTreeMap<String, NetValue>> {
    let n = match wedges.first() {
        Some(w) => w.n(),
        None => {
            return Ok(cover.keys().map(|k| (k.clone(), NetValue::Undefined)).collect());
        }
    };
    if wedges.iter().any(|w| w.n() != n) {
        return Err(Error::domain("wedge pairs act on spaces of different dimension"));
    }
    let standard: Vec<RealSubspace> = wedges.iter().map(ModularPair::standard_subspace).collect();
    let mut out = BTreeMap::new();
    for (region, ks) in cover {
        let mut acc: Option<RealSubspace> = None;
        for &k in ks {
            let v = standard
                .get(k)
                .ok_or_else(|| Error::domain(format!("region {region}: wedge index {k} out of range")))?;
            acc = Some(match acc {
                None => v.clone(),
                Some(a) => a.intersect(v)?,
            });
        }
        out.insert(
            region.clone(),
            acc.map(NetValue::Defined).unwrap_or(NetValue::Undefined),
        );
    }
    Ok(out)
}

/// Isotony record for an inclusion `smaller ⊆ larger`.
#[derive(Clone, Debug, Serialize)]
pub struct IsotonyCheck {
    pub smaller: String,
    pub larger: String,
    pub residual: f64,
    pub pass: bool,
}

/// Re-verifies `O₁ ⊆ O₂ ⇒ ℋ(O₁) ⊆ ℋ(O₂)` for the listed inclusions.
/// An undefined smaller side passes trivially; a defined one inside an undefined larger side fails.
pub fn check_isotony(
    net: &BTreeMap<String, NetValue>,
    inclusions: &[(String, String)],
    tol: f64,
) -> Result<Vec<IsotonyCheck>> {
    let mut out = Vec::with_capacity(inclusions.len());
    for (a, b) in inclusions {
        let va = net.get(a).ok_or_else(|| Error::domain(format!("unknown region {a}")))?;
        let vb = net.get(b).ok_or_else(|| Error::domain(format!("unknown region {b}")))?;
        let residual = match (va, vb) {
            (NetValue::Defined(x), NetValue::Defined(y)) => x.containment_residual(y),
            (NetValue::Undefined, _) => 0.0,
            (NetValue::Defined(_), NetValue::Undefined) => f64::INFINITY,
        };
        out.push(IsotonyCheck {
            smaller: a.clone(),
            larger: b.clone(),
            residual,
            pass: residual <= tol,
        });
    }
    Ok(out)
}
