//! JSON report payloads. Matrices are rows of `[re, im]` pairs, as in gate
//! files.

use deloc::canonical::CanonicalForm;
use deloc::classify::{Classification, ControlledForm, Diagnostics, GateClass};
use deloc::entangling::EntanglingPowerResult;
use deloc::protocol::{AncillaReport, OneWayProtocol, SimulationReport};
use deloc::schmidt::OperatorSchmidt;
use deloc::tensor::PureState;
use serde::{Deserialize, Serialize};

use crate::gatefile::{matrix_rows, Rows};

pub const TOOL: &str = "deloc";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report<T> {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub input: Option<InputEcho>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerances: Option<Tolerances>,
    pub seed: Option<u64>,
    pub result: T,
}

impl<T> Report<T> {
    pub fn new(
        command: &str,
        input: Option<InputEcho>,
        tolerances: Option<Tolerances>,
        seed: Option<u64>,
        result: T,
    ) -> Self {
        Self {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input,
            tolerances,
            seed,
            result,
        }
    }
}

/// Where the gate came from, plus its matrix so the run can be repeated from
/// the report alone.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InputEcho {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    pub d: usize,
    pub matrix: Rows,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Tolerances {
    pub unitary: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rank: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub structure: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verify: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub probability_floor: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchmidtTerm {
    pub coefficient: f64,
    pub a: Rows,
    pub b: Rows,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchmidtResult {
    pub rank: usize,
    pub coefficients: Vec<f64>,
    pub reconstruction_residual: f64,
    /// The `rank` retained terms.
    pub terms: Vec<SchmidtTerm>,
}

impl SchmidtResult {
    pub fn new(os: &OperatorSchmidt, residual: f64) -> Self {
        Self {
            rank: os.rank,
            coefficients: os.coeffs.clone(),
            reconstruction_residual: residual,
            terms: (0..os.rank)
                .map(|k| SchmidtTerm {
                    coefficient: os.coeffs[k],
                    a: matrix_rows(&os.factors_a[k]),
                    b: matrix_rows(&os.factors_b[k]),
                })
                .collect(),
        }
    }
}

pub fn class_name(label: GateClass) -> &'static str {
    match label {
        GateClass::Class1 => "Class1",
        GateClass::Class2 => "Class2",
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagnosticsOut {
    pub schmidt_rank: usize,
    pub schmidt_coefficients: Vec<f64>,
    pub commutant_residual_left: f64,
    pub commutant_residual_right: f64,
    pub reconstruction_residual: Option<f64>,
    pub theta: Option<[f64; 3]>,
    pub verification_failed: bool,
    pub reason: Option<String>,
}

impl From<&Diagnostics> for DiagnosticsOut {
    fn from(d: &Diagnostics) -> Self {
        Self {
            schmidt_rank: d.schmidt_rank,
            schmidt_coefficients: d.schmidt_coeffs.clone(),
            commutant_residual_left: d.commutant_residual_left,
            commutant_residual_right: d.commutant_residual_right,
            reconstruction_residual: d.reconstruction_residual,
            theta: d.theta,
            verification_failed: d.verification_failed,
            reason: d.reason.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockOut {
    pub projector: Rows,
    pub unitary: Rows,
}

/// `U = (u_a ⊗ u_b) (Σ_n P^n ⊗ u^n) (v_a ⊗ v_b)` up to a global phase.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ControlledFormOut {
    pub d: usize,
    pub u_a: Rows,
    pub u_b: Rows,
    pub v_a: Rows,
    pub v_b: Rows,
    pub blocks: Vec<BlockOut>,
}

impl From<&ControlledForm> for ControlledFormOut {
    fn from(cf: &ControlledForm) -> Self {
        Self {
            d: cf.d,
            u_a: matrix_rows(&cf.u_a),
            u_b: matrix_rows(&cf.u_b),
            v_a: matrix_rows(&cf.v_a),
            v_b: matrix_rows(&cf.v_b),
            blocks: cf
                .blocks
                .iter()
                .map(|b| BlockOut {
                    projector: matrix_rows(&b.projector),
                    unitary: matrix_rows(&b.unitary),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProtocolOut {
    pub d: usize,
    /// Kraus operators of Alice's measurement, one per outcome.
    pub alice_ops: Vec<Rows>,
    /// Bob's correction for each outcome.
    pub bob_corrections: Vec<Rows>,
    pub completeness_residual: f64,
}

impl From<&OneWayProtocol> for ProtocolOut {
    fn from(p: &OneWayProtocol) -> Self {
        Self {
            d: p.d,
            alice_ops: p.alice_ops.iter().map(matrix_rows).collect(),
            bob_corrections: p.bob_corrections.iter().map(matrix_rows).collect(),
            completeness_residual: p.completeness_residual(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SideResult {
    /// The subsystem that acts as control.
    pub control: String,
    pub label: String,
    pub diagnostics: DiagnosticsOut,
    pub controlled_form: Option<ControlledFormOut>,
    pub protocol: Option<ProtocolOut>,
}

impl SideResult {
    pub fn new(control: &str, c: &Classification, protocol: Option<&OneWayProtocol>) -> Self {
        Self {
            control: control.into(),
            label: class_name(c.label).into(),
            diagnostics: (&c.diagnostics).into(),
            controlled_form: c.controlled_form.as_ref().map(Into::into),
            protocol: protocol.map(Into::into),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifyResult {
    pub control_side: String,
    /// `Class1` when any examined side is Class 1.
    pub label: String,
    pub sides: Vec<SideResult>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchOut {
    pub trial: usize,
    pub draw: usize,
    pub outcome: usize,
    pub probability: f64,
    pub bob_fidelity: Option<f64>,
    pub alice_state: Option<Rows>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimulationOut {
    pub trials: usize,
    pub seed: u64,
    pub verdict: bool,
    pub min_fidelity: f64,
    pub mean_fidelity: f64,
    pub max_probability_defect: f64,
    pub max_alice_deviation: f64,
    pub branches: Vec<BranchOut>,
}

impl From<&SimulationReport> for SimulationOut {
    fn from(r: &SimulationReport) -> Self {
        Self {
            trials: r.trials,
            seed: r.seed,
            verdict: r.verdict,
            min_fidelity: r.min_fidelity,
            mean_fidelity: r.mean_fidelity,
            max_probability_defect: r.max_probability_defect,
            max_alice_deviation: r.max_alice_deviation,
            branches: r
                .branches
                .iter()
                .map(|b| BranchOut {
                    trial: b.trial,
                    draw: b.draw,
                    outcome: b.outcome,
                    probability: b.probability,
                    bob_fidelity: b.bob_fidelity,
                    alice_state: b.alice_state.as_ref().map(matrix_rows),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AncillaBranchOut {
    pub outcome: usize,
    pub probability: f64,
    pub fidelity: Option<f64>,
    pub proportionality_residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AncillaOut {
    pub passed: bool,
    pub min_fidelity: f64,
    pub total_probability: f64,
    pub branches: Vec<AncillaBranchOut>,
}

impl From<&AncillaReport> for AncillaOut {
    fn from(r: &AncillaReport) -> Self {
        Self {
            passed: r.passed,
            min_fidelity: r.min_fidelity,
            total_probability: r.total_probability,
            branches: r
                .branches
                .iter()
                .map(|b| AncillaBranchOut {
                    outcome: b.outcome,
                    probability: b.probability,
                    fidelity: b.fidelity,
                    proportionality_residual: b.proportionality_residual,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimulateResult {
    pub mode: String,
    pub verdict: bool,
    /// Present for the modes that need a Class 1 gate.
    pub classification: Option<SideResult>,
    pub protocol: Option<ProtocolOut>,
    pub simulation: Option<SimulationOut>,
    pub ancilla: Option<AncillaOut>,
}

pub fn vector_entries(psi: &PureState) -> Vec<[f64; 2]> {
    psi.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntanglingOut {
    /// Ebits.
    pub value: f64,
    pub argmax_a: Vec<[f64; 2]>,
    pub argmax_b: Vec<[f64; 2]>,
    pub restarts: usize,
    pub converged_restarts: usize,
}

impl From<&EntanglingPowerResult> for EntanglingOut {
    fn from(r: &EntanglingPowerResult) -> Self {
        Self {
            value: r.value,
            argmax_a: vector_entries(&r.argmax_a),
            argmax_b: vector_entries(&r.argmax_b),
            restarts: r.restarts,
            converged_restarts: r.converged_restarts,
        }
    }
}

/// `U = e^{iφ} (pre_a ⊗ pre_b) exp(i Σ θ_k σ_k ⊗ σ_k) (post_a ⊗ post_b)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CanonicalOut {
    pub theta: [f64; 3],
    pub global_phase: f64,
    pub pre_a: Rows,
    pub pre_b: Rows,
    pub post_a: Rows,
    pub post_b: Rows,
    pub reconstruction_residual: f64,
}

impl CanonicalOut {
    pub fn new(form: &CanonicalForm, residual: f64) -> Self {
        Self {
            theta: form.theta,
            global_phase: form.global_phase,
            pre_a: matrix_rows(&form.pre_a),
            pre_b: matrix_rows(&form.pre_b),
            post_a: matrix_rows(&form.post_a),
            post_b: matrix_rows(&form.post_b),
            reconstruction_residual: residual,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GalleryEntry {
    pub name: String,
    /// Parameter names with their defaults, in declaration order.
    pub params: Vec<[String; 2]>,
    pub summary: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GalleryList {
    pub gates: Vec<GalleryEntry>,
}
