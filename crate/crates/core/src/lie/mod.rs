//! Matrix Lie algebras: brackets, gradings by Euler elements, involutions and convex cones.

mod algebra;
pub mod builtin;
mod cone;
mod involution;
mod nnls;
mod orbit;
mod spectrum;
mod subspace;

pub use algebra::{same_algebra, AlgebraDocument, AlgebraElement, LieAlgebra, BASIS_RANK_TOL, DEFAULT_TOLERANCE};
pub use cone::{ConvexCone, Membership, MEMBERSHIP_TOL};
pub use involution::{cartan_involution_transpose, tau_h, Involution, InvolutionKind};
pub use nnls::nnls;
pub use orbit::{orbit_cone, orbit_cone_in_ball, orbit_invariance, sample_ball, ORBIT_RADIUS};
pub use spectrum::{
    grading, is_elliptic, is_euler, is_hyperbolic, matrix_spectrum, spectrum, EigenCluster, Grading,
    Spectrum, CLUSTER_TOL, GRADING_RANK_TOL,
};
pub use subspace::Subspace;
