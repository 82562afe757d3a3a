//! Delocalization power of two-qudit unitary gates.
//!
//! A gate `U` on `H_A ⊗ H_B` delocalizes two unknown product inputs. It is
//! *Class 1* when Bob's input can always be recovered by a one-way LOCC
//! protocol (Alice measures, Bob corrects), which happens exactly when `U` is
//! local-unitary equivalent to a controlled-unitary `Σ_n P^n ⊗ u^n` with the
//! control on A. Every other gate is *Class 2*.
//!
//! The crate decides the class ([`classify`]), extracts the controlled form,
//! synthesizes and simulates the relocalization protocol ([`protocol`]), and
//! provides the two-qubit canonical form ([`canonical`]) and an entangling
//! power estimator ([`entangling`]) for contrasting the two notions.

pub mod canonical;
pub mod classify;
pub mod entangling;
pub mod error;
pub mod gallery;
pub mod jointdiag;
pub mod protocol;
pub mod schmidt;
pub mod tensor;
pub mod tol;

pub use canonical::{kraus_cirac_decompose, theta_distance, CanonicalForm};
pub use classify::{
    classify_gate, classify_gate_swapped, extract_controlled_form, Classification,
    ControlBlock, ControlledForm, GateClass,
};
pub use entangling::{entangling_power_estimate, EntanglingPowerResult};
pub use error::{Error, Result};
pub use gallery::{build, GateSpec};
pub use protocol::{
    adqc_scenario, check_completeness, simulate_branches, synthesize_protocol,
    verify_ancilla_mode, verify_relocalization, OneWayProtocol, SimulationReport,
};
pub use schmidt::{reshuffle, schmidt_decompose, OperatorSchmidt};
pub use tensor::{CMatrix, CVector, Gate, PureState, Side};
