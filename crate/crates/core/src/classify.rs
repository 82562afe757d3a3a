//! Class 1 / Class 2 decision and controlled-form extraction.
//!
//! A gate is Class 1 exactly when it is local-unitary equivalent to
//! `Σ_n P^n ⊗ u^n` with orthogonal projectors on A. If so, its Schmidt factors
//! on A all lie in `a · span{P^n} · c`, so the families `{A_k A_l†}` and
//! `{A_k† A_l}` commute; the common eigenbasis of the first family recovers
//! `a`, and the rows of `a† A_k` recover `c` up to per-row phases.
//!
//! For qubits the decision is made on the Schmidt rank (Class 1 iff rank ≤ 2)
//! and the controlled form is read off the canonical form, using
//! `exp(iθ σx⊗σx) = |+⟩⟨+| ⊗ e^{iθσx} + |−⟩⟨−| ⊗ e^{−iθσx}`.
//!
//! Every Class 1 verdict is backed by simulating the synthesized protocol;
//! a failed simulation or any numerical failure yields Class 2.

use nalgebra::DVector;

use crate::canonical::kraus_cirac_decompose;
use crate::error::{Error, Result};
use crate::gallery::{hadamard, pauli_x};
use crate::jointdiag::joint_diagonalize;
use crate::protocol::{synthesize_protocol, verify_ancilla_mode, verify_relocalization_with, VerifyOptions};
use crate::schmidt::{schmidt_decompose, OperatorSchmidt};
use crate::tensor::{
    alignment_phase, c64, distance_up_to_phase, kron, polar_unitary, unitarity_residual, CMatrix, Gate, ONE, ZERO,
};
use crate::tol;

/// Targets closer than this (up to phase) should have been combined.
const DISTINCT_TARGETS: f64 = 1e-12;

/// One control branch `P^n ⊗ u^n`.
#[derive(Clone, Debug)]
pub struct ControlBlock {
    pub projector: CMatrix,
    pub unitary: CMatrix,
}

/// `(u_a ⊗ u_b) · (Σ_n P^n ⊗ u^n) · (v_a ⊗ v_b)`.
#[derive(Clone, Debug)]
pub struct ControlledForm {
    pub d: usize,
    pub u_a: CMatrix,
    pub u_b: CMatrix,
    pub v_a: CMatrix,
    pub v_b: CMatrix,
    pub blocks: Vec<ControlBlock>,
}

impl ControlledForm {
    pub fn controlled_part(&self) -> CMatrix {
        let n = self.d * self.d;
        let mut m = CMatrix::zeros(n, n);
        for block in &self.blocks {
            m += kron(&block.projector, &block.unitary);
        }
        m
    }

    pub fn reconstruct(&self) -> CMatrix {
        kron(&self.u_a, &self.u_b) * self.controlled_part() * kron(&self.v_a, &self.v_b)
    }

    /// Frobenius distance to `target` after optimal global phase alignment.
    pub fn reconstruction_residual(&self, target: &CMatrix) -> f64 {
        distance_up_to_phase(target, &self.reconstruct())
    }

    /// Check the structural invariants: orthogonal projectors resolving the
    /// identity, unitary locals and targets, and pairwise distinct targets.
    pub fn validate(&self) -> Result<()> {
        let d = self.d;
        if self.blocks.is_empty() {
            return Err(Error::InvalidControlledForm("no control blocks".into()));
        }
        for (name, m) in [("u_a", &self.u_a), ("u_b", &self.u_b), ("v_a", &self.v_a), ("v_b", &self.v_b)] {
            if m.shape() != (d, d) {
                return Err(Error::InvalidControlledForm(format!("{name} is not {d}x{d}")));
            }
            let r = unitarity_residual(m);
            if r > tol::UNITARY {
                return Err(Error::InvalidControlledForm(format!("{name} is not unitary (residual {r:e})")));
            }
        }
        let mut sum = CMatrix::zeros(d, d);
        for (n, block) in self.blocks.iter().enumerate() {
            if block.projector.shape() != (d, d) || block.unitary.shape() != (d, d) {
                return Err(Error::InvalidControlledForm(format!("block {n} has the wrong shape")));
            }
            let p = &block.projector;
            if (p * p - p).norm() > 1e-9 || (p - p.adjoint()).norm() > 1e-9 {
                return Err(Error::InvalidControlledForm(format!("block {n} projector is not an orthogonal projector")));
            }
            let r = unitarity_residual(&block.unitary);
            if r > tol::UNITARY {
                return Err(Error::InvalidControlledForm(format!("block {n} target is not unitary (residual {r:e})")));
            }
            for (m, other) in self.blocks.iter().enumerate().skip(n + 1) {
                if (p * &other.projector).norm() > 1e-9 {
                    return Err(Error::InvalidControlledForm(format!("projectors {n} and {m} overlap")));
                }
                if distance_up_to_phase(&block.unitary, &other.unitary) <= DISTINCT_TARGETS {
                    return Err(Error::InvalidControlledForm(format!("blocks {n} and {m} could be combined")));
                }
            }
            sum += p;
        }
        let r = (sum - CMatrix::identity(d, d)).norm();
        if r > 1e-9 {
            return Err(Error::InvalidControlledForm(format!("projectors do not resolve the identity (residual {r:e})")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateClass {
    /// One-piece relocalizable by one-way LOCC.
    Class1,
    Class2,
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub schmidt_rank: usize,
    pub schmidt_coeffs: Vec<f64>,
    /// Largest commutator norm within `{A_k A_l†}`.
    pub commutant_residual_left: f64,
    /// Largest commutator norm within `{A_k† A_l}`.
    pub commutant_residual_right: f64,
    pub reconstruction_residual: Option<f64>,
    /// Canonical coordinates, qubits only.
    pub theta: Option<[f64; 3]>,
    /// Set when a structurally Class 1 candidate failed protocol simulation.
    pub verification_failed: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub label: GateClass,
    pub controlled_form: Option<ControlledForm>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub tol: f64,
    pub tol_rank: f64,
    /// Simulate the synthesized protocol before accepting Class 1.
    pub verify: bool,
    pub verify_trials: usize,
    pub verify_seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            tol: tol::STRUCTURE,
            tol_rank: tol::RANK,
            verify: true,
            verify_trials: 4,
            verify_seed: 0x5eed,
        }
    }
}

pub fn classify_gate(g: &Gate, tol: f64) -> Result<Classification> {
    classify_gate_with(g, &ClassifyOptions { tol, ..Default::default() })
}

/// Classification with the roles of A and B exchanged (control on B).
pub fn classify_gate_swapped(g: &Gate, tol: f64) -> Result<Classification> {
    classify_gate(&g.swapped(), tol)
}

pub fn classify_gate_with(g: &Gate, opts: &ClassifyOptions) -> Result<Classification> {
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tol = {} must be positive", opts.tol)));
    }
    let os = schmidt_decompose(g, opts.tol_rank)?;
    let d = g.d();
    let (left, right) = commutant_residuals(&os);
    let mut diagnostics = Diagnostics {
        schmidt_rank: os.rank,
        schmidt_coeffs: os.coeffs.clone(),
        commutant_residual_left: left,
        commutant_residual_right: right,
        ..Default::default()
    };

    let candidate = if d == 2 {
        qubit_candidate(g, &os, opts.tol, &mut diagnostics)
    } else if os.rank > d {
        Err(format!("Schmidt rank {} exceeds d = {d}", os.rank))
    } else if left > opts.tol || right > opts.tol {
        Err(format!("Schmidt factors do not commute (residuals {left:e}, {right:e})"))
    } else {
        extract_controlled_form(&os, opts.tol).map_err(|e| e.to_string())
    };

    let form = candidate.and_then(|form| {
        let residual = form.reconstruction_residual(g.matrix());
        diagnostics.reconstruction_residual = Some(residual);
        if residual > opts.tol {
            return Err(format!("reconstruction residual {residual:e} exceeds {:e}", opts.tol));
        }
        form.validate().map_err(|e| e.to_string())?;
        Ok(form)
    });

    let form = match form {
        Ok(form) if opts.verify => match backstop(g, &form, opts) {
            Ok(()) => Ok(form),
            Err(reason) => {
                diagnostics.verification_failed = true;
                Err(reason)
            }
        },
        other => other,
    };

    Ok(match form {
        Ok(form) => Classification {
            label: GateClass::Class1,
            controlled_form: Some(form),
            diagnostics,
        },
        Err(reason) => {
            diagnostics.reason = Some(reason);
            Classification {
                label: GateClass::Class2,
                controlled_form: None,
                diagnostics,
            }
        }
    })
}

fn backstop(g: &Gate, form: &ControlledForm, opts: &ClassifyOptions) -> std::result::Result<(), String> {
    let protocol = synthesize_protocol(form).map_err(|e| e.to_string())?;
    let ancilla = verify_ancilla_mode(g, &protocol).map_err(|e| e.to_string())?;
    if !ancilla.passed {
        return Err(format!("ancilla-mode verification failed (min fidelity {:.17e})", ancilla.min_fidelity));
    }
    let report = verify_relocalization_with(
        g,
        &protocol,
        &VerifyOptions {
            trials: opts.verify_trials,
            seed: opts.verify_seed,
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    if !report.verdict {
        return Err(format!("product-input verification failed (min fidelity {:.17e})", report.min_fidelity));
    }
    Ok(())
}

fn qubit_candidate(
    g: &Gate,
    os: &OperatorSchmidt,
    tol: f64,
    diagnostics: &mut Diagnostics,
) -> std::result::Result<ControlledForm, String> {
    let form = kraus_cirac_decompose(g).map_err(|e| e.to_string())?;
    diagnostics.theta = Some(form.theta);
    if os.rank > 2 {
        return Err(format!("Schmidt rank {} exceeds 2", os.rank));
    }
    let h = hadamard();
    let phase = c64(0.0, form.global_phase).exp();
    let rotation = |sign: f64| {
        let t = sign * form.theta[0];
        (CMatrix::identity(2, 2) * c64(t.cos(), 0.0) + pauli_x() * c64(0.0, t.sin())) * phase
    };
    let raw = ControlledForm {
        d: 2,
        u_a: &form.pre_a * &h,
        u_b: form.pre_b.clone(),
        v_a: &h * &form.post_a,
        v_b: form.post_b.clone(),
        blocks: vec![
            ControlBlock {
                projector: diag_projector(2, &[0]),
                unitary: rotation(1.0),
            },
            ControlBlock {
                projector: diag_projector(2, &[1]),
                unitary: rotation(-1.0),
            },
        ],
    };
    Ok(merge_blocks(raw, tol))
}

/// Combine blocks whose targets agree up to a phase, moving the phase into
/// `v_a` (which the projectors commute with).
fn merge_blocks(form: ControlledForm, tol: f64) -> ControlledForm {
    let d = form.d;
    let mut groups: Vec<(CMatrix, CMatrix)> = Vec::new();
    let mut phases = vec![ONE; d];
    for block in &form.blocks {
        let hit = groups
            .iter()
            .position(|(_, rep)| distance_up_to_phase(rep, &block.unitary) <= tol);
        match hit {
            Some(i) => {
                let phase = alignment_phase(&groups[i].1, &block.unitary);
                for level in levels_of(&block.projector) {
                    phases[level] = phase;
                }
                groups[i].0 += &block.projector;
            }
            None => groups.push((block.projector.clone(), block.unitary.clone())),
        }
    }
    let phase_diag = CMatrix::from_diagonal(&DVector::from_vec(phases));
    ControlledForm {
        v_a: phase_diag * &form.v_a,
        blocks: groups
            .into_iter()
            .map(|(projector, unitary)| ControlBlock { projector, unitary })
            .collect(),
        ..form
    }
}

fn levels_of(projector: &CMatrix) -> Vec<usize> {
    (0..projector.nrows()).filter(|&i| projector[(i, i)].re > 0.5).collect()
}

fn diag_projector(d: usize, levels: &[usize]) -> CMatrix {
    let mut p = CMatrix::zeros(d, d);
    for &l in levels {
        p[(l, l)] = ONE;
    }
    p
}

fn max_commutator(family: &[CMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for (i, x) in family.iter().enumerate() {
        for y in &family[i + 1..] {
            worst = worst.max((x * y - y * x).norm());
        }
    }
    worst
}

fn left_family(os: &OperatorSchmidt) -> Vec<CMatrix> {
    let a = &os.factors_a[..os.rank];
    a.iter().flat_map(|x| a.iter().map(move |y| x * y.adjoint())).collect()
}

fn right_family(os: &OperatorSchmidt) -> Vec<CMatrix> {
    let a = &os.factors_a[..os.rank];
    a.iter().flat_map(|x| a.iter().map(move |y| x.adjoint() * y)).collect()
}

/// Commutator residuals of `{A_k A_l†}` and `{A_k† A_l}` over the retained
/// Schmidt factors.
pub fn commutant_residuals(os: &OperatorSchmidt) -> (f64, f64) {
    (max_commutator(&left_family(os)), max_commutator(&right_family(os)))
}

/// Diagonal frame: `a`, the row basis `Y`, and the diagonals of
/// `D_k = a† A_k Y†` for the first `terms` Schmidt factors.
struct Frame {
    a: CMatrix,
    y: CMatrix,
    diagonals: Vec<Vec<num_complex::Complex64>>,
    off_diagonal: f64,
}

fn diagonal_frame(os: &OperatorSchmidt, terms: usize) -> Frame {
    let d = os.d;
    let factors = &os.factors_a[..terms];
    let family: Vec<CMatrix> = factors
        .iter()
        .flat_map(|x| factors.iter().map(move |y| x * y.adjoint()))
        .collect();
    let a = joint_diagonalize(&family).basis;
    let rotated: Vec<CMatrix> = factors.iter().map(|f| a.adjoint() * f).collect();
    let mut y = CMatrix::zeros(d, d);
    for i in 0..d {
        let best = rotated
            .iter()
            .max_by(|p, q| p.row(i).norm().total_cmp(&q.row(i).norm()))
            .expect("at least one Schmidt factor");
        let row = best.row(i);
        let norm = row.norm();
        if norm > 0.0 {
            y.set_row(i, &row.unscale(norm));
        }
    }
    let mut off_diagonal = 0.0f64;
    let diagonals = rotated
        .iter()
        .map(|r| {
            let dk = r * y.adjoint();
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        off_diagonal = off_diagonal.max(dk[(i, j)].norm());
                    }
                }
            }
            (0..d).map(|i| dk[(i, i)]).collect()
        })
        .collect();
    Frame { a, y, diagonals, off_diagonal }
}

fn level_blocks(os: &OperatorSchmidt, frame: &Frame, terms: usize) -> Vec<CMatrix> {
    let d = os.d;
    (0..d)
        .map(|n| {
            let mut c = CMatrix::zeros(d, d);
            for k in 0..terms {
                c += &os.factors_b[k] * (frame.diagonals[k][n] * os.coeffs[k]);
            }
            c
        })
        .collect()
}

/// Controlled form `(a ⊗ I) · (Σ_n P^n ⊗ u^n) · (v_a ⊗ I)` from the retained
/// Schmidt terms. Fails when the factors are not simultaneously diagonal to
/// within `tol` or a level block is not unitary.
pub fn extract_controlled_form(os: &OperatorSchmidt, tol: f64) -> Result<ControlledForm> {
    let d = os.d;
    let terms = os.rank;
    if terms > d {
        return Err(Error::InvalidControlledForm(format!(
            "Schmidt rank {terms} exceeds the local dimension {d}"
        )));
    }
    let frame = diagonal_frame(os, terms);
    let y_residual = unitarity_residual(&frame.y);
    if y_residual > tol {
        return Err(Error::Residual {
            what: "row basis unitarity",
            residual: y_residual,
            tol,
        });
    }
    if frame.off_diagonal > tol {
        return Err(Error::Residual {
            what: "joint diagonalization",
            residual: frame.off_diagonal,
            tol,
        });
    }
    let mut blocks = Vec::with_capacity(d);
    for (n, c) in level_blocks(os, &frame, terms).into_iter().enumerate() {
        let r = unitarity_residual(&c);
        if r > tol {
            return Err(Error::Residual {
                what: "control block unitarity",
                residual: r,
                tol,
            });
        }
        blocks.push(ControlBlock {
            projector: diag_projector(d, &[n]),
            unitary: polar_unitary(&c)?,
        });
    }
    let raw = ControlledForm {
        d,
        u_a: frame.a,
        u_b: CMatrix::identity(d, d),
        v_a: polar_unitary(&frame.y)?,
        v_b: CMatrix::identity(d, d),
        blocks,
    };
    let form = merge_blocks(raw, tol);
    let residual = form.reconstruction_residual(&os.reconstruct());
    if residual > tol {
        return Err(Error::Residual {
            what: "controlled-form reconstruction",
            residual,
            tol,
        });
    }
    Ok(form)
}

/// Best-effort controlled form built without any structural checks: every
/// factor is projected onto the nearest unitary. The result is a well-formed
/// [`ControlledForm`] whose reconstruction need not match the gate; it exists
/// so protocols can be synthesized for gates that are not controlled.
pub fn force_controlled_form(os: &OperatorSchmidt) -> Result<ControlledForm> {
    let d = os.d;
    let terms = os.rank.min(d).max(1);
    let frame = diagonal_frame(os, terms);
    let blocks = level_blocks(os, &frame, terms)
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            let unitary = if c.norm() > 0.0 { polar_unitary(&c)? } else { CMatrix::identity(d, d) };
            Ok(ControlBlock {
                projector: diag_projector(d, &[n]),
                unitary,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let y = if frame.y.iter().any(|z| *z != ZERO) { polar_unitary(&frame.y)? } else { CMatrix::identity(d, d) };
    Ok(merge_blocks(
        ControlledForm {
            d,
            u_a: frame.a,
            u_b: CMatrix::identity(d, d),
            v_a: y,
            v_b: CMatrix::identity(d, d),
            blocks,
        },
        tol::STRUCTURE,
    ))
}
