use std::fs;
use std::path::Path;

use deloc::canonical::kraus_cirac_decompose;
use deloc::classify::{classify_gate_with, Classification, ClassifyOptions, GateClass};
use deloc::entangling::entangling_power_estimate;
use deloc::gallery::{self, GateSpec};
use deloc::protocol::{
    adqc_protocol, plus_state, synthesize_protocol, verify_ancilla_mode_with, verify_fixed_input,
    verify_relocalization_with, OneWayProtocol, VerifyOptions,
};
use deloc::schmidt::schmidt_decompose;
use deloc::tensor::Gate;
use deloc::tol;
use serde::Serialize;
use serde_json::json;

use crate::args::{Command, ControlSide, GateInput, Mode, Output};
use crate::error::CliError;
use crate::gatefile::{matrix_rows, GateFile};
use crate::json;
use crate::report::*;

pub const EXIT_CLASS2: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

struct Loaded {
    gate: Gate,
    echo: InputEcho,
    tol_unitary: f64,
}

fn load(input: &GateInput) -> Result<Loaded, CliError> {
    let source = &input.source;
    if !(input.tol_unitary > 0.0 && input.tol_unitary.is_finite()) {
        return Err(CliError::Parse("--tol-unitary must be positive".into()));
    }
    let (gate, mut echo) = if let Some(spec) = &source.gate {
        let spec: GateSpec = spec.parse()?;
        let gate = gallery::build(&spec)?;
        let gate = Gate::with_tolerance(gate.d(), gate.into_matrix(), input.tol_unitary)?;
        let echo = InputEcho {
            source: "gallery".into(),
            spec: Some(spec.to_string()),
            path: None,
            name: Some(spec.name.clone()),
            d: 0,
            matrix: Vec::new(),
        };
        (gate, echo)
    } else {
        let path = source.file.as_ref().expect("clap requires a source");
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        let file = GateFile::parse(&text)?;
        let gate = file.to_gate(input.tol_unitary)?;
        let echo = InputEcho {
            source: "file".into(),
            spec: None,
            path: Some(path.display().to_string()),
            name: file.name.clone(),
            d: 0,
            matrix: Vec::new(),
        };
        (gate, echo)
    };
    echo.d = gate.d();
    echo.matrix = matrix_rows(gate.matrix());
    Ok(Loaded {
        gate,
        echo,
        tol_unitary: input.tol_unitary,
    })
}

fn write_output<T: Serialize>(output: &Output, report: &T) -> Result<(), CliError> {
    let value = serde_json::to_value(report).map_err(|e| CliError::Invariant(e.to_string()))?;
    let mut text = json::to_string_pretty(&value);
    text.push('\n');
    write_text(output.out.as_deref(), &text)
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn tolerances(input: &Loaded) -> Tolerances {
    Tolerances {
        unitary: input.tol_unitary,
        ..Default::default()
    }
}

/// Runs one subcommand and returns its exit code.
pub fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Schmidt { input, tol_rank, output } => {
            let input = load(&input)?;
            let os = schmidt_decompose(&input.gate, tol_rank)?;
            let residual = os.reconstruction_residual(&input.gate);
            let tols = Tolerances {
                rank: Some(tol_rank),
                ..tolerances(&input)
            };
            let report = Report::new("schmidt", Some(input.echo), Some(tols), None, SchmidtResult::new(&os, residual));
            write_output(&output, &report)?;
            Ok(0)
        }
        Command::Classify {
            input,
            tol,
            tol_rank,
            control_side,
            output,
        } => {
            let input = load(&input)?;
            let opts = ClassifyOptions {
                tol,
                tol_rank,
                ..Default::default()
            };
            let sides: Vec<(&str, Gate)> = match control_side {
                ControlSide::A => vec![("A", input.gate.clone())],
                ControlSide::B => vec![("B", input.gate.swapped())],
                ControlSide::Both => vec![("A", input.gate.clone()), ("B", input.gate.swapped())],
            };
            let mut results = Vec::new();
            for (name, g) in &sides {
                let c = classify_gate_with(g, &opts)?;
                let p = protocol_for(&c)?;
                results.push(SideResult::new(name, &c, p.as_ref()));
            }
            let class1 = results.iter().any(|r| r.label == class_name(GateClass::Class1));
            let result = ClassifyResult {
                control_side: match control_side {
                    ControlSide::A => "A",
                    ControlSide::B => "B",
                    ControlSide::Both => "both",
                }
                .into(),
                label: class_name(if class1 { GateClass::Class1 } else { GateClass::Class2 }).into(),
                sides: results,
            };
            let tols = Tolerances {
                rank: Some(tol_rank),
                structure: Some(tol),
                ..tolerances(&input)
            };
            let seed = Some(opts.verify_seed);
            write_output(&output, &Report::new("classify", Some(input.echo), Some(tols), seed, result))?;
            Ok(if class1 { 0 } else { EXIT_CLASS2 })
        }
        Command::Simulate {
            input,
            trials,
            seed,
            mode,
            tol_verify,
            tol,
            tol_rank,
            output,
        } => simulate(&input, trials, seed, mode, [tol_verify, tol, tol_rank], &output),
        Command::Epower {
            input,
            restarts,
            seed,
            output,
        } => {
            let input = load(&input)?;
            let est = entangling_power_estimate(&input.gate, restarts, seed)?;
            let tols = tolerances(&input);
            let report = Report::new(
                "epower",
                Some(input.echo),
                Some(tols),
                Some(seed),
                EntanglingOut::from(&est),
            );
            write_output(&output, &report)?;
            Ok(0)
        }
        Command::Canonical { input, output } => {
            let input = load(&input)?;
            let form = kraus_cirac_decompose(&input.gate)?;
            let residual = form.reconstruction_residual(&input.gate);
            let tols = tolerances(&input);
            let report = Report::new(
                "canonical",
                Some(input.echo),
                Some(tols),
                None,
                CanonicalOut::new(&form, residual),
            );
            write_output(&output, &report)?;
            Ok(0)
        }
        Command::Gallery { list, emit, output } => {
            if list {
                let gates = gallery::REGISTRY
                    .iter()
                    .map(|g| GalleryEntry {
                        name: g.name.into(),
                        params: g.params.iter().map(|(k, v)| [k.to_string(), v.to_string()]).collect(),
                        summary: g.summary.into(),
                    })
                    .collect();
                write_output(&output, &Report::new("gallery", None, None, None, GalleryList { gates }))?;
            } else {
                let spec: GateSpec = emit.expect("clap requires --list or --emit").parse()?;
                let gate = gallery::build(&spec)?;
                let meta = json!({"source": "gallery", "spec": spec.to_string()});
                let file = GateFile::from_gate(&gate, Some(spec.name.clone()), Some(meta));
                write_text(output.out.as_deref(), &file.emit())?;
            }
            Ok(0)
        }
    }
}

fn protocol_for(c: &Classification) -> Result<Option<OneWayProtocol>, CliError> {
    match (&c.label, &c.controlled_form) {
        (GateClass::Class1, Some(form)) => Ok(Some(synthesize_protocol(form)?)),
        _ => Ok(None),
    }
}

fn simulate(
    input: &GateInput,
    trials: usize,
    seed: u64,
    mode: Mode,
    [tol_verify, tol, tol_rank]: [f64; 3],
    output: &Output,
) -> Result<i32, CliError> {
    if trials == 0 {
        return Err(CliError::Parse("--trials must be at least 1".into()));
    }
    let input = load(input)?;
    let opts = VerifyOptions {
        trials,
        seed,
        tol_verify,
        ..Default::default()
    };
    let mut tols = Tolerances {
        verify: Some(tol_verify),
        probability_floor: Some(tol::P_FLOOR),
        ..tolerances(&input)
    };
    let mut result = SimulateResult {
        mode: match mode {
            Mode::Product => "product",
            Mode::Ancilla => "ancilla",
            Mode::AdqcFixed => "adqc-fixed",
        }
        .into(),
        verdict: false,
        classification: None,
        protocol: None,
        simulation: None,
        ancilla: None,
    };
    let code = match mode {
        Mode::AdqcFixed => {
            if input.gate.d() != 2 {
                return Err(CliError::Invariant(format!(
                    "adqc-fixed mode needs a two-qubit gate, got d = {}",
                    input.gate.d()
                )));
            }
            let p = adqc_protocol();
            let report = verify_fixed_input(&input.gate, &p, &plus_state(), &opts)?;
            result.verdict = report.verdict;
            result.protocol = Some((&p).into());
            result.simulation = Some((&report).into());
            if report.verdict { 0 } else { EXIT_VERIFY_FAILED }
        }
        Mode::Product | Mode::Ancilla => {
            tols.structure = Some(tol);
            tols.rank = Some(tol_rank);
            let copts = ClassifyOptions {
                tol,
                tol_rank,
                ..Default::default()
            };
            let c = classify_gate_with(&input.gate, &copts)?;
            let p = protocol_for(&c)?;
            result.classification = Some(SideResult::new("A", &c, None));
            match p {
                None => EXIT_CLASS2,
                Some(p) => {
                    result.protocol = Some((&p).into());
                    if mode == Mode::Product {
                        let report = verify_relocalization_with(&input.gate, &p, &opts)?;
                        result.verdict = report.verdict;
                        result.simulation = Some((&report).into());
                    } else {
                        let report = verify_ancilla_mode_with(&input.gate, &p, tol_verify)?;
                        result.verdict = report.passed;
                        result.ancilla = Some((&report).into());
                    }
                    if result.verdict { 0 } else { EXIT_VERIFY_FAILED }
                }
            }
        }
    };
    let seed = (mode != Mode::Ancilla).then_some(seed);
    write_output(output, &Report::new("simulate", Some(input.echo), Some(tols), seed, result))?;
    Ok(code)
}
