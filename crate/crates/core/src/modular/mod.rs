//! Finite-dimensional standard subspaces and their modular data.
//!
//! Vectors of `ℂⁿ` are stored in real coordinates `(Re z, Im z) ∈ ℝ²ⁿ`;
//! antilinear operators such as `S` and `J` are real `2n × 2n` matrices.

pub mod complex;
mod net;
mod pair;
mod sample;
mod subspace;

pub use net::{bgl_net, check_isotony, IsotonyCheck, NetValue};
pub use pair::{
    modular_pair_of, polar_modular, rep_from_standard, rep_roundtrip, standard_from_pair, tomita_operator,
    unitarity_residual, KmsVerdict, ModularPair, ModularPairDocument, ModularRep, INVERSION_TOL, KMS_TOL,
    PAIRING_TOL, SWAP_CONJUGATE,
};
pub use sample::{random_modular_pair, random_standard_subspace, random_unitary};
pub use subspace::{RealSubspace, STANDARD_RANK_TOL};
