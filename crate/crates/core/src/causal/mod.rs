//! Causal symmetric spaces: de Sitter and anti-de Sitter space, the unit disc
//! and `SL(2, ℝ)` as a group-type space.

mod crown;
mod disc;
mod group;
mod quadric;

use serde::Serialize;

pub use crown::{
    boundary_orbit_point, crown_base_point, crown_contains, crown_margin, KmsOrientation, KmsTester, StripGrid,
    CROWN_MARGIN,
};
pub use disc::{disc_action, disc_flow, strip_to_disc};
pub use group::{
    check_group_element, det_residual, exp_sl2, group_flow, invariant_cone, quotient_embedding, sl2_euler,
    GroupInvolution, GroupWedge, GROUP_WEDGE_MARGIN, INVARIANCE_TOL, INVARIANT_CONE_RADIUS, INVARIANT_CONE_SAMPLES,
};
pub use quadric::{
    light_cone_margin, negative_euler_check, wedge_path_min_margin, ComplexPoint, LabeledPoint, NegativeEulerReport,
    Quadric, QuadricKind, SpacePoint, TangentCone, POSITIVITY_MARGIN, QUADRIC_TOL,
};

/// Pass/fail summary of a sampled check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub samples: usize,
    pub passes: usize,
    pub failures: Vec<usize>,
    pub seed: u64,
}

impl SampleReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}
