use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deloc::tol;

#[derive(Debug, Parser)]
#[command(name = "deloc", version, about = "Classify and relocalize two-qudit gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// The gate to analyze: a gallery spec such as `heisenberg:alpha=0.3`, or a
/// gate file.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GateSource {
    #[arg(long, value_name = "SPEC")]
    pub gate: Option<String>,

    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GateInput {
    #[command(flatten)]
    pub source: GateSource,

    /// Largest accepted ‖U†U − I‖ for the input gate.
    #[arg(long, default_value_t = tol::UNITARY)]
    pub tol_unitary: f64,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ControlSide {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Random product inputs through the synthesized protocol.
    Product,
    /// Alice's input maximally entangled with a reference.
    Ancilla,
    /// The fixed `|+⟩` input on A with the ancilla-driven measurement.
    AdqcFixed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Operator Schmidt decomposition.
    Schmidt {
        #[command(flatten)]
        input: GateInput,
        #[arg(long, visible_alias = "tol", default_value_t = tol::RANK)]
        tol_rank: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether the gate is one-piece relocalizable.
    Classify {
        #[command(flatten)]
        input: GateInput,
        #[arg(long, default_value_t = tol::STRUCTURE)]
        tol: f64,
        #[arg(long, default_value_t = tol::RANK)]
        tol_rank: f64,
        #[arg(long, value_enum, ignore_case = true, default_value = "A")]
        control_side: ControlSide,
        #[command(flatten)]
        output: Output,
    },
    /// Simulate relocalization through the gate.
    Simulate {
        #[command(flatten)]
        input: GateInput,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "product")]
        mode: Mode,
        #[arg(long, default_value_t = tol::VERIFY)]
        tol_verify: f64,
        #[arg(long, default_value_t = tol::STRUCTURE)]
        tol: f64,
        #[arg(long, default_value_t = tol::RANK)]
        tol_rank: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Estimate the entangling power in ebits.
    Epower {
        #[command(flatten)]
        input: GateInput,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Two-qubit canonical form.
    Canonical {
        #[command(flatten)]
        input: GateInput,
        #[command(flatten)]
        output: Output,
    },
    /// List the built-in gates or write one as a gate file.
    Gallery {
        #[arg(long, conflicts_with = "emit", required_unless_present = "emit")]
        list: bool,
        #[arg(long, value_name = "SPEC")]
        emit: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}
