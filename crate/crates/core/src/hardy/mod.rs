//! Hardy spaces of the strip and of the upper half-plane.

mod gamma;
mod kernel;
mod mellin;
mod net;
mod quadrature;
mod smear;

pub use gamma::{gamma, ln_gamma};
pub use kernel::{
    affine_action, boundary_distribution, boundary_gram, gram, halfplane_j, halfplane_kernel,
    min_eigenvalue, orbit_norm_squared, orbit_norm_squared_closed, strip_j, strip_kernel,
    strip_translate, KernelModel, KernelVector, Side, C64,
};
pub use mellin::{
    calibrate_delta_sign, halfplane_membership, inversion_residual, mellin_transform,
    membership_residual, membership_residual_with_sign, wedge_phase, Calibration, MellinGrid,
    DELTA_SIGN, HALFPLANE_TOL,
};
pub use net::{
    dyadic_dictionary, nested_pairs, net_checks, range_residual, AffineNet, NetCheck, NetConfig,
    NetEntry, NetReport, DEFAULT_COARSEST, NET_TOL,
};
pub use quadrature::{bump, Quadrature, DEFAULT_NODES, DEFAULT_PANELS};
pub use smear::{
    halfplane_evaluation_set, l2_norm, strip_evaluation_set, strip_kms_test, strip_membership,
    strip_orbit, write_values_csv, MembershipReport, SmearedVector, STRIP_KMS_TOL,
};
