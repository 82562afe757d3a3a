//! One-way LOCC relocalization: Alice measures `{M^n}` on A, sends `n`, and
//! Bob applies `w^n` on B. For a controlled form
//! `(u_a ⊗ u_b)(Σ_m P^m ⊗ u^m)(v_a ⊗ v_b)` the choice `M^m = P^m u_a†`,
//! `w^m = (u_b u^m v_b)†` returns Bob's input exactly on every branch.
//!
//! Two-way protocols need not be searched: any LOCC relocalization reduces to
//! a one-way one, so simulating one-way protocols is sufficient.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classify::ControlledForm;
use crate::error::{Error, Result};
use crate::gallery::{hadamard, pauli_z};
use crate::tensor::{
    kron, random_pure_state, reduced_state, state_fidelity, trace_distance, unitarity_residual, CMatrix, CVector,
    Gate, PureState, Side, ONE,
};
use crate::tol;

#[derive(Clone, Debug)]
pub struct OneWayProtocol {
    pub d: usize,
    /// Alice's measurement operators `M^n`.
    pub alice_ops: Vec<CMatrix>,
    /// Bob's correction for outcome `n`.
    pub bob_corrections: Vec<CMatrix>,
}

impl OneWayProtocol {
    pub fn new(d: usize, alice_ops: Vec<CMatrix>, bob_corrections: Vec<CMatrix>) -> Result<Self> {
        let p = Self {
            d,
            alice_ops,
            bob_corrections,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn outcomes(&self) -> usize {
        self.alice_ops.len()
    }

    pub fn completeness_residual(&self) -> f64 {
        check_completeness(&self.alice_ops)
    }

    fn check_shapes(&self) -> Result<()> {
        let d = self.d;
        if self.alice_ops.is_empty() || self.alice_ops.len() != self.bob_corrections.len() {
            return Err(Error::InvalidProtocol(format!(
                "{} measurement operators but {} corrections",
                self.alice_ops.len(),
                self.bob_corrections.len()
            )));
        }
        if self.alice_ops.iter().chain(&self.bob_corrections).any(|m| m.shape() != (d, d)) {
            return Err(Error::DimensionMismatch(format!("protocol operators must be {d}x{d}")));
        }
        Ok(())
    }

    /// Completeness of Alice's measurement and unitarity of Bob's corrections.
    pub fn validate(&self) -> Result<()> {
        self.check_shapes()?;
        let r = self.completeness_residual();
        if r > tol::VERIFY {
            return Err(Error::InvalidProtocol(format!("completeness residual {r:e}")));
        }
        for (n, w) in self.bob_corrections.iter().enumerate() {
            let r = unitarity_residual(w);
            if r > tol::UNITARY {
                return Err(Error::InvalidProtocol(format!("correction {n} is not unitary (residual {r:e})")));
            }
        }
        Ok(())
    }
}

/// `‖Σ_n M^n† M^n − I‖_F`; infinite for an empty or ragged list.
pub fn check_completeness(ops: &[CMatrix]) -> f64 {
    let Some(first) = ops.first() else {
        return f64::INFINITY;
    };
    let n = first.nrows();
    if ops.iter().any(|m| m.shape() != (n, n)) {
        return f64::INFINITY;
    }
    let mut sum = -CMatrix::identity(n, n);
    for m in ops {
        sum += m.adjoint() * m;
    }
    sum.norm()
}

pub fn synthesize_protocol(cf: &ControlledForm) -> Result<OneWayProtocol> {
    cf.validate()?;
    let alice_ops = cf.blocks.iter().map(|b| &b.projector * cf.u_a.adjoint()).collect();
    let bob_corrections = cf
        .blocks
        .iter()
        .map(|b| (&cf.u_b * &b.unitary * &cf.v_b).adjoint())
        .collect();
    OneWayProtocol::new(cf.d, alice_ops, bob_corrections)
}

#[derive(Clone, Debug)]
pub struct BranchOutcome {
    pub outcome: usize,
    pub probability: f64,
    /// `⟨ψ_B|ρ_B|ψ_B⟩` on the normalized branch; `None` below the probability floor.
    pub bob_fidelity: Option<f64>,
    /// Alice's reduced state on the normalized branch.
    pub alice_state: Option<CMatrix>,
}

fn check_dims(g: &Gate, p: &OneWayProtocol) -> Result<()> {
    if p.d != g.d() {
        return Err(Error::DimensionMismatch(format!("protocol has d = {}, gate has d = {}", p.d, g.d())));
    }
    p.check_shapes()
}

/// Every measurement branch `(M^n ⊗ w^n) U (ψ_A ⊗ ψ_B)`.
pub fn simulate_branches(g: &Gate, p: &OneWayProtocol, psi_a: &PureState, psi_b: &PureState) -> Result<Vec<BranchOutcome>> {
    check_dims(g, p)?;
    let d = g.d();
    if psi_a.dim() != d || psi_b.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "inputs have dimensions {} and {}, gate has d = {d}",
            psi_a.dim(),
            psi_b.dim()
        )));
    }
    let out = g.matrix() * psi_a.tensor(psi_b).amplitudes();
    p.alice_ops
        .iter()
        .zip(&p.bob_corrections)
        .enumerate()
        .map(|(n, (m, w))| branch(n, &(kron(m, w) * &out), d, psi_b))
        .collect()
}

fn branch(outcome: usize, v: &CVector, d: usize, psi_b: &PureState) -> Result<BranchOutcome> {
    let probability = v.norm_squared();
    if probability <= tol::P_FLOOR {
        return Ok(BranchOutcome {
            outcome,
            probability,
            bob_fidelity: None,
            alice_state: None,
        });
    }
    let normalized = v.unscale(probability.sqrt());
    let rho_b = reduced_state(&normalized, (d, d), Side::B)?;
    let rho_a = reduced_state(&normalized, (d, d), Side::A)?;
    Ok(BranchOutcome {
        outcome,
        probability,
        bob_fidelity: Some(state_fidelity(psi_b, &rho_b)?),
        alice_state: Some(rho_a),
    })
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    /// Independent `ψ_B` draws per `ψ_A`, used for the ψ_B-independence check.
    pub psi_b_draws: usize,
    pub tol_verify: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            trials: 50,
            seed: 0,
            psi_b_draws: 3,
            tol_verify: tol::VERIFY,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BranchRecord {
    pub trial: usize,
    pub draw: usize,
    pub outcome: usize,
    pub probability: f64,
    pub bob_fidelity: Option<f64>,
    pub alice_state: Option<CMatrix>,
}

#[derive(Clone, Debug)]
pub struct SimulationReport {
    pub branches: Vec<BranchRecord>,
    pub min_fidelity: f64,
    pub mean_fidelity: f64,
    /// Largest `|Σ_n p_n − 1|` over all runs.
    pub max_probability_defect: f64,
    /// Largest trace distance between Alice's branch states for the same
    /// `ψ_A` and different `ψ_B`.
    pub max_alice_deviation: f64,
    pub verdict: bool,
    pub trials: usize,
    pub seed: u64,
}

pub fn verify_relocalization(g: &Gate, p: &OneWayProtocol, trials: usize, seed: u64) -> Result<SimulationReport> {
    verify_relocalization_with(
        g,
        p,
        &VerifyOptions {
            trials,
            seed,
            ..Default::default()
        },
    )
}

/// Random product inputs: trial `t` draws `ψ_A` and then `psi_b_draws`
/// states `ψ_B` from stream `t` of the seeded generator.
pub fn verify_relocalization_with(g: &Gate, p: &OneWayProtocol, opts: &VerifyOptions) -> Result<SimulationReport> {
    run_trials(g, p, opts, None)
}

/// As [`verify_relocalization_with`] with `ψ_A` held fixed.
pub fn verify_fixed_input(g: &Gate, p: &OneWayProtocol, psi_a: &PureState, opts: &VerifyOptions) -> Result<SimulationReport> {
    run_trials(g, p, opts, Some(psi_a))
}

struct TrialResult {
    records: Vec<BranchRecord>,
    probability_defect: f64,
    alice_deviation: f64,
}

fn run_trials(g: &Gate, p: &OneWayProtocol, opts: &VerifyOptions, fixed_a: Option<&PureState>) -> Result<SimulationReport> {
    check_dims(g, p)?;
    if opts.trials == 0 || opts.psi_b_draws == 0 {
        return Err(Error::InvalidParameter("trials and psi_b_draws must be at least 1".into()));
    }
    let d = g.d();
    let results: Vec<Result<TrialResult>> = (0..opts.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(trial as u64);
            let psi_a = match fixed_a {
                Some(a) => a.clone(),
                None => random_pure_state(d, &mut rng),
            };
            let mut records = Vec::new();
            let mut probability_defect = 0.0f64;
            let mut alice_deviation = 0.0f64;
            let mut reference: Option<Vec<BranchOutcome>> = None;
            for draw in 0..opts.psi_b_draws {
                let psi_b = random_pure_state(d, &mut rng);
                let branches = simulate_branches(g, p, &psi_a, &psi_b)?;
                let total: f64 = branches.iter().map(|b| b.probability).sum();
                probability_defect = probability_defect.max((total - 1.0).abs());
                if let Some(first) = &reference {
                    for (b0, b) in first.iter().zip(&branches) {
                        if let (Some(r0), Some(r)) = (&b0.alice_state, &b.alice_state) {
                            alice_deviation = alice_deviation.max(trace_distance(r0, r));
                        }
                    }
                }
                records.extend(branches.iter().map(|b| BranchRecord {
                    trial,
                    draw,
                    outcome: b.outcome,
                    probability: b.probability,
                    bob_fidelity: b.bob_fidelity,
                    alice_state: b.alice_state.clone(),
                }));
                if reference.is_none() {
                    reference = Some(branches);
                }
            }
            Ok(TrialResult {
                records,
                probability_defect,
                alice_deviation,
            })
        })
        .collect();

    let mut branches = Vec::new();
    let mut max_probability_defect = 0.0f64;
    let mut max_alice_deviation = 0.0f64;
    for r in results {
        let r = r?;
        branches.extend(r.records);
        max_probability_defect = max_probability_defect.max(r.probability_defect);
        max_alice_deviation = max_alice_deviation.max(r.alice_deviation);
    }
    let fidelities: Vec<f64> = branches.iter().filter_map(|b| b.bob_fidelity).collect();
    let min_fidelity = fidelities.iter().copied().fold(f64::INFINITY, f64::min);
    let mean_fidelity = fidelities.iter().sum::<f64>() / fidelities.len().max(1) as f64;
    let verdict = !fidelities.is_empty()
        && min_fidelity >= 1.0 - opts.tol_verify
        && max_alice_deviation <= opts.tol_verify
        && max_probability_defect <= opts.tol_verify;
    Ok(SimulationReport {
        branches,
        min_fidelity,
        mean_fidelity,
        max_probability_defect,
        max_alice_deviation,
        verdict,
        trials: opts.trials,
        seed: opts.seed,
    })
}

#[derive(Clone, Debug)]
pub struct AncillaBranch {
    pub outcome: usize,
    pub probability: f64,
    /// Fidelity of Bob's system with its ancilla against `|Φ+⟩`.
    pub fidelity: Option<f64>,
    /// `‖w w† − (Tr(w w†)/d) I‖_F` for the correction used on this branch.
    pub proportionality_residual: f64,
}

#[derive(Clone, Debug)]
pub struct AncillaReport {
    pub branches: Vec<AncillaBranch>,
    pub min_fidelity: f64,
    pub total_probability: f64,
    pub passed: bool,
}

pub fn verify_ancilla_mode(g: &Gate, p: &OneWayProtocol) -> Result<AncillaReport> {
    verify_ancilla_mode_with(g, p, tol::VERIFY)
}

/// Both inputs maximally entangled with ancillas `a`, `b`:
/// `|Φ+⟩_{Aa} ⊗ |Φ+⟩_{Bb}`. Relocalization succeeds on a branch exactly when
/// `B` ends up maximally entangled with `b` again.
pub fn verify_ancilla_mode_with(g: &Gate, p: &OneWayProtocol, tol_verify: f64) -> Result<AncillaReport> {
    check_dims(g, p)?;
    let d = g.d();
    let df = d as f64;
    let mut branches = Vec::with_capacity(p.outcomes());
    for (n, (m, w)) in p.alice_ops.iter().zip(&p.bob_corrections).enumerate() {
        // amplitude of |A,B⟩|a,b⟩ is X[(A,B),(a,b)]
        let x = (kron(m, w) * g.matrix()).unscale(df);
        let probability = x.norm_squared();
        let fidelity = (probability > tol::P_FLOOR).then(|| {
            let mut s = 0.0;
            for big_a in 0..d {
                for small_a in 0..d {
                    let overlap: num_complex::Complex64 =
                        (0..d).map(|b| x[(big_a * d + b, small_a * d + b)]).sum();
                    s += overlap.norm_sqr();
                }
            }
            (s / (df * probability)).clamp(0.0, 1.0)
        });
        let wwd = w * w.adjoint();
        let scale = wwd.trace() / df;
        let proportionality_residual = (&wwd - CMatrix::identity(d, d) * scale).norm();
        branches.push(AncillaBranch {
            outcome: n,
            probability,
            fidelity,
            proportionality_residual,
        });
    }
    let min_fidelity = branches.iter().filter_map(|b| b.fidelity).fold(f64::INFINITY, f64::min);
    let total_probability: f64 = branches.iter().map(|b| b.probability).sum();
    let passed = min_fidelity >= 1.0 - tol_verify && (total_probability - 1.0).abs() <= tol_verify;
    Ok(AncillaReport {
        branches,
        min_fidelity,
        total_probability,
        passed,
    })
}

/// `|+⟩`.
pub fn plus_state() -> PureState {
    PureState::normalized(CVector::from_vec(vec![ONE, ONE])).expect("nonzero")
}

/// Measurement `{|+⟩⟨+|, |−⟩⟨−|}` with corrections `H` and `σz H`: relocalizes
/// Bob's qubit through the ADQC gate when Alice's input is `|+⟩`.
pub fn adqc_protocol() -> OneWayProtocol {
    let h = hadamard();
    let plus = plus_state().density();
    let minus = CMatrix::identity(2, 2) - &plus;
    OneWayProtocol::new(2, vec![plus, minus], vec![h.clone(), pauli_z() * h]).expect("valid protocol")
}

/// ADQC gate with `ψ_A = |+⟩` fixed and random `ψ_B`.
pub fn adqc_scenario(trials: usize, seed: u64) -> Result<SimulationReport> {
    verify_fixed_input(
        &crate::gallery::adqc(),
        &adqc_protocol(),
        &plus_state(),
        &VerifyOptions {
            trials,
            seed,
            ..Default::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_gate, force_controlled_form, ControlBlock, GateClass};
    use crate::gallery::{self, ket_bra, pauli_x};
    use crate::schmidt::schmidt_decompose;
    use crate::tensor::{c64, haar_random_unitary};
    use rand::SeedableRng;

    fn cnot_protocol() -> OneWayProtocol {
        let form = classify_gate(&gallery::cnot(), tol::STRUCTURE).unwrap().controlled_form.unwrap();
        synthesize_protocol(&form).unwrap()
    }

    fn hand_cnot_form() -> ControlledForm {
        let i2 = CMatrix::identity(2, 2);
        ControlledForm {
            d: 2,
            u_a: i2.clone(),
            u_b: i2.clone(),
            v_a: i2.clone(),
            v_b: i2.clone(),
            blocks: vec![
                ControlBlock {
                    projector: ket_bra(2, 0, 0),
                    unitary: i2,
                },
                ControlBlock {
                    projector: ket_bra(2, 1, 1),
                    unitary: pauli_x(),
                },
            ],
        }
    }

    #[test]
    fn completeness_examples() {
        assert!(check_completeness(&[ket_bra(2, 0, 0), ket_bra(2, 1, 1)]) < 1e-15);
        let half = CMatrix::identity(2, 2).scale(std::f64::consts::FRAC_1_SQRT_2);
        assert!(check_completeness(&[half.clone(), half]) < 1e-15);
        let i2 = CMatrix::identity(2, 2);
        assert!((check_completeness(&[i2.clone(), i2]) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(check_completeness(&[]), f64::INFINITY);
    }

    #[test]
    fn synthesizes_cnot_by_substitution() {
        let p = synthesize_protocol(&hand_cnot_form()).unwrap();
        assert_eq!(p.alice_ops, vec![ket_bra(2, 0, 0), ket_bra(2, 1, 1)]);
        assert_eq!(p.bob_corrections, vec![CMatrix::identity(2, 2), pauli_x()]);
    }

    #[test]
    fn identity_has_one_branch() {
        let form = classify_gate(&gallery::identity(2), tol::STRUCTURE).unwrap().controlled_form.unwrap();
        let p = synthesize_protocol(&form).unwrap();
        assert_eq!(p.outcomes(), 1);
        // M⁰ and w⁰ are the identity up to the frame and phase they share
        assert!((p.alice_ops[0].adjoint() * &p.alice_ops[0] - CMatrix::identity(2, 2)).norm() < 1e-12);
        let report = verify_relocalization(&gallery::identity(2), &p, 10, 1).unwrap();
        assert!(report.verdict);
    }

    #[test]
    fn cnot_on_plus_input_splits_evenly() {
        // CNOT |+⟩|ψ⟩: outcome n leaves X^n|ψ⟩ on B with probability 1/2
        let p = synthesize_protocol(&hand_cnot_form()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi_b = random_pure_state(2, &mut rng);
        let branches = simulate_branches(&gallery::cnot(), &p, &plus_state(), &psi_b).unwrap();
        assert_eq!(branches.len(), 2);
        for b in &branches {
            assert!((b.probability - 0.5).abs() < 1e-14);
            assert!((b.bob_fidelity.unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn missing_correction_is_detected() {
        let mut p = synthesize_protocol(&hand_cnot_form()).unwrap();
        p.bob_corrections[1] = CMatrix::identity(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let psi_b = random_pure_state(2, &mut rng);
        let branches = simulate_branches(&gallery::cnot(), &p, &plus_state(), &psi_b).unwrap();
        // branch 1 leaves σx|ψ⟩: fidelity |⟨ψ|σx|ψ⟩|²
        let expected = psi_b.amplitudes().dotc(&(pauli_x() * psi_b.amplitudes())).norm_sqr();
        assert!((branches[1].bob_fidelity.unwrap() - expected).abs() < 1e-12);
        assert!(expected < 1.0 - 1e-3);
        assert!(!verify_relocalization(&gallery::cnot(), &p, 20, 0).unwrap().verdict);
    }

    #[test]
    fn cnot_protocol_verifies() {
        let p = cnot_protocol();
        let report = verify_relocalization(&gallery::cnot(), &p, 50, 7).unwrap();
        assert!(report.verdict);
        assert!(report.min_fidelity >= 1.0 - 1e-9);
        assert!(report.max_probability_defect <= 1e-9);
        let ancilla = verify_ancilla_mode(&gallery::cnot(), &p).unwrap();
        assert!(ancilla.passed);
    }

    #[test]
    fn reports_are_deterministic() {
        let p = cnot_protocol();
        let a = verify_relocalization(&gallery::cnot(), &p, 16, 99).unwrap();
        let b = verify_relocalization(&gallery::cnot(), &p, 16, 99).unwrap();
        assert_eq!(a.branches.len(), b.branches.len());
        for (x, y) in a.branches.iter().zip(&b.branches) {
            assert_eq!(x.probability.to_bits(), y.probability.to_bits());
            assert_eq!(x.trial, y.trial);
        }
    }

    #[test]
    fn corrupted_correction_fails_ancilla_mode() {
        let mut p = cnot_protocol();
        p.bob_corrections[1] = CMatrix::from_row_slice(2, 2, &[ONE, ONE, c64(0.0, 0.0), ONE]);
        assert!(p.validate().is_err());
        let report = verify_ancilla_mode(&gallery::cnot(), &p).unwrap();
        assert!(!report.passed);
        assert!(report.branches[1].proportionality_residual > 0.1);
    }

    #[test]
    fn dressed_cz_and_qutrit_pipelines_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let l: Vec<_> = (0..4).map(|_| haar_random_unitary(2, &mut rng)).collect();
        let cz = gallery::cz().dressed(&l[0], &l[1], &l[2], &l[3]).unwrap();
        let g3 = gallery::controlled_random(3, 3, 12).unwrap();
        for g in [cz, g3] {
            let c = classify_gate(&g, tol::STRUCTURE).unwrap();
            let p = synthesize_protocol(&c.controlled_form.unwrap()).unwrap();
            assert!(verify_relocalization(&g, &p, 20, 3).unwrap().verdict);
            assert!(verify_ancilla_mode(&g, &p).unwrap().passed);
        }
    }

    #[test]
    fn alice_state_is_independent_of_bob_input() {
        let g = gallery::controlled_random(3, 2, 5).unwrap();
        let p = synthesize_protocol(&classify_gate(&g, tol::STRUCTURE).unwrap().controlled_form.unwrap()).unwrap();
        let report = verify_relocalization_with(
            &g,
            &p,
            &VerifyOptions {
                trials: 5,
                seed: 2,
                psi_b_draws: 10,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(report.max_alice_deviation <= 1e-9);
    }

    #[test]
    fn heisenberg_defeats_every_controlled_guess() {
        let g = gallery::heisenberg(0.2);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut bob_pairs = vec![
            (CMatrix::identity(2, 2), CMatrix::identity(2, 2)),
            (CMatrix::identity(2, 2), pauli_x()),
            (CMatrix::identity(2, 2), pauli_z()),
        ];
        for _ in 0..6 {
            bob_pairs.push((haar_random_unitary(2, &mut rng), haar_random_unitary(2, &mut rng)));
        }
        let steps = 6;
        for i in 0..=steps {
            for j in 0..steps {
                let theta = std::f64::consts::PI * i as f64 / steps as f64;
                let phi = std::f64::consts::TAU * j as f64 / steps as f64;
                let up = CVector::from_vec(vec![
                    c64((theta / 2.0).cos(), 0.0),
                    c64(0.0, phi).exp() * (theta / 2.0).sin(),
                ]);
                let p0 = &up * up.adjoint();
                let p1 = CMatrix::identity(2, 2) - &p0;
                for (w0, w1) in &bob_pairs {
                    let p = OneWayProtocol::new(2, vec![p0.clone(), p1.clone()], vec![w0.clone(), w1.clone()]).unwrap();
                    assert!(!verify_relocalization(&g, &p, 10, 0).unwrap().verdict);
                }
            }
        }
        let forced = force_controlled_form(&schmidt_decompose(&g, tol::RANK).unwrap()).unwrap();
        let p = synthesize_protocol(&forced).unwrap();
        assert!(!verify_relocalization(&g, &p, 10, 0).unwrap().verdict);
        assert!(!verify_ancilla_mode(&g, &p).unwrap().passed);
    }

    #[test]
    fn adqc_relocalizes_only_for_plus_input() {
        let report = adqc_scenario(50, 1).unwrap();
        assert!(report.verdict);
        assert!((report.min_fidelity - 1.0).abs() <= 1e-9);

        let zero = PureState::basis(2, 0);
        let opts = VerifyOptions {
            trials: 50,
            seed: 1,
            ..Default::default()
        };
        let fixed_zero = verify_fixed_input(&gallery::adqc(), &adqc_protocol(), &zero, &opts).unwrap();
        assert!(fixed_zero.min_fidelity < 1.0 - 1e-3);

        let general = verify_relocalization_with(&gallery::adqc(), &adqc_protocol(), &opts).unwrap();
        assert!(!general.verdict);
        assert_eq!(classify_gate(&gallery::adqc(), tol::STRUCTURE).unwrap().label, GateClass::Class2);
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let p = cnot_protocol();
        assert!(verify_relocalization(&gallery::identity(3), &p, 1, 0).is_err());
        assert!(verify_relocalization(&gallery::cnot(), &p, 0, 0).is_err());
        assert!(OneWayProtocol::new(2, vec![CMatrix::identity(2, 2)], vec![]).is_err());
    }
}
