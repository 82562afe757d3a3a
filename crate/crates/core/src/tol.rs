//! Default tolerances. Every public entry point that compares against one of
//! these also has a variant that takes the value explicitly.

/// Unitarity: `‖U†U − I‖_F / √dim`.
pub const UNITARY: f64 = 1e-10;

/// Unit norm of state vectors.
pub const NORM: f64 = 1e-10;

/// Operator Schmidt rank cutoff, relative to the largest coefficient.
pub const RANK: f64 = 1e-8;

/// Structural residuals in classification: commutators, joint
/// diagonalization, block unitarity, reconstruction.
pub const STRUCTURE: f64 = 1e-6;

/// Fidelity deficit, probability defect and trace distance accepted by the
/// protocol verifiers.
pub const VERIFY: f64 = 1e-9;

/// Branches below this probability are not inspected for fidelity.
pub const P_FLOOR: f64 = 1e-12;

/// Entropy terms with eigenvalue below this contribute nothing.
pub const ENTROPY_CUTOFF: f64 = 1e-15;
