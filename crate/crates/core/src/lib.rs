//! The compact exceptional Lie group F4, realized as the automorphism group
//! of the exceptional Jordan algebra J3(O).
//!
//! The crate builds the 52-dimensional derivation algebra f4 over the exact
//! field Q(sqrt2, sqrt3), validates the canonical generator basis and its
//! structure constants with zero tolerance, extracts the root system,
//! constructs generalized Euler-angle charts for the subgroup chain
//! SU(2) ⊂ Spin(4) ⊂ ... ⊂ Spin(9) ⊂ F4, verifies the closed-form Haar
//! densities against exact Maurer-Cartan Jacobians, integrates the densities
//! exactly to reproduce the group volumes, and samples Haar-distributed
//! group elements.

pub mod algebra;
pub mod basis;
pub mod casimir;
pub mod derivations;
pub mod euler;
pub mod expm;
pub mod fixtures;
pub mod haar;
pub mod jordan;
pub mod measure;
pub mod octonion;
pub mod roots;
pub mod scalar;
pub mod structure;
