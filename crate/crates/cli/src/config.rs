use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use mqg_core::nmr::MAX_STATE_ROWS;
use mqg_core::synth::MAX_N;
use mqg_core::{Boundary, Couplings, EquivMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "mqg",
    version,
    about = "Layered MQG Toffoli networks: synthesis and verification"
)]
pub struct Cli {
    /// Output format. Defaults to json, except `trace` which prints a table.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout (`synth`: the circuit file).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Auto,
    Exhaustive,
    Symbolic,
}

impl Mode {
    pub fn equiv(self) -> Option<EquivMode> {
        match self {
            Mode::Auto => None,
            Mode::Exhaustive => Some(EquivMode::Exhaustive),
            Mode::Symbolic => Some(EquivMode::Symbolic),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Open,
    Periodic,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Open => Boundary::Open,
            BoundaryArg::Periodic => Boundary::Periodic,
        }
    }
}

fn parse_n(s: &str) -> Result<u32, String> {
    let n: u32 = s.parse().map_err(|e| format!("{e}"))?;
    if (1..=MAX_N).contains(&n) {
        Ok(n)
    } else {
        Err(format!("n must be in 1..={MAX_N}"))
    }
}

/// Refocusing kinds selected by `--kind`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kinds(pub Vec<u8>);

fn parse_kinds(s: &str) -> Result<Kinds, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Kinds((1..=6).collect()));
    }
    match s.parse::<u8>() {
        Ok(k) if (1..=6).contains(&k) => Ok(Kinds(vec![k])),
        _ => Err("expected `all` or a kind in 1..=6".into()),
    }
}

fn parse_couplings(s: &str) -> Result<Couplings, String> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let arr: [f64; 6] = vals
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 6 values a,b,c,d,e,f, got {}", v.len()))?;
    if arr.iter().any(|x| !x.is_finite()) {
        return Err("couplings must be finite".into());
    }
    Ok(Couplings::from_array(arr))
}

fn parse_finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(_) => Err("must be finite".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match parse_finite(s)? {
        x if x >= 0.0 => Ok(x),
        _ => Err("must be non-negative".into()),
    }
}

fn parse_rows(s: &str) -> Result<usize, String> {
    let rows: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (2..=MAX_STATE_ROWS).contains(&rows) {
        Ok(rows)
    } else {
        Err(format!("rows must be in 2..={MAX_STATE_ROWS}"))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a network and write it in MQGC1 form.
    #[command(group(ArgGroup::new("what").required(true).args(["n", "baseline_controls"])))]
    Synth {
        #[arg(long, value_parser = parse_n)]
        n: Option<u32>,
        /// Report which controls to pin at 1 for a smaller gate.
        #[arg(long, requires = "n")]
        active_controls: Option<usize>,
        /// Build the one-gate-per-step baseline with this many controls instead.
        #[arg(long)]
        baseline_controls: Option<usize>,
    },
    /// Check a network against the closed-form output law.
    #[command(group(ArgGroup::new("source").required(true).args(["file", "n"])))]
    Verify {
        /// MQGC1 file in the canonical layout.
        file: Option<PathBuf>,
        #[arg(long, value_parser = parse_n)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value = "auto")]
        mode: Mode,
        /// Largest width checked exhaustively; `auto` goes symbolic above it.
        #[arg(long, default_value_t = 24)]
        max_qubits: usize,
    },
    /// Compare unit counts with the baseline construction.
    Compare {
        #[arg(long, value_parser = parse_n)]
        n: u32,
    },
    /// Verify the refocusing sequences on the spin lattice.
    NmrVerify {
        /// `all` or one of 1..=6.
        #[arg(long, default_value = "all", value_parser = parse_kinds)]
        kind: Kinds,
        #[arg(long, default_value = "2", value_parser = parse_rows)]
        rows: usize,
        #[arg(long, value_enum, default_value = "periodic")]
        boundary: BoundaryArg,
        /// `a,b,c,d,e,f`; drawn from the seed in [0.5, 1.5) when absent.
        #[arg(long, value_parser = parse_couplings)]
        couplings: Option<Couplings>,
        #[arg(long, default_value = "0.7", value_parser = parse_finite)]
        t: f64,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value = "1e-10", value_parser = parse_tol)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print wire values at every block boundary next to the recurrences.
    Trace {
        #[arg(long, value_parser = parse_n)]
        n: u32,
        /// Input bits in flat-index order, lowest index first.
        #[arg(long)]
        input: String,
        /// Trace this file instead of the synthesized network.
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// Layer offset (from `4k`) at which `Z_l(k)` is read.
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        z_offset: isize,
        /// Layer offset (from `4k`) at which `A_l(k)` is read.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        a_offset: isize,
    },
}

/// Fully resolved invocation, embedded in every report. Fields that do not
/// apply to the subcommand are null.
#[derive(Debug, Clone, Serialize, Default)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub n: Option<u32>,
    pub m_controls: Option<usize>,
    pub active_controls: Option<usize>,
    pub file: Option<String>,
    pub mode: Option<Mode>,
    pub max_qubits: Option<usize>,
    pub kinds: Option<Vec<u8>>,
    pub rows: Option<usize>,
    pub boundary: Option<Boundary>,
    pub couplings: Option<Couplings>,
    pub t: Option<f64>,
    pub trials: Option<u64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub input: Option<String>,
    pub z_offset: Option<isize>,
    pub a_offset: Option<isize>,
    pub out: Option<String>,
    pub format: Option<Format>,
}

/// Couplings drawn uniformly from `[0.5, 1.5)` by a ChaCha stream keyed on
/// the seed.
pub fn seeded_couplings(seed: u64) -> Couplings {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from_le_bytes(*b"coupling"));
    Couplings::from_array(std::array::from_fn(|_| rng.random_range(0.5..1.5)))
}

impl Cli {
    pub fn format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::Trace { .. } => Format::Text,
            _ => Format::Json,
        })
    }

    pub fn resolve(&self) -> RunConfig {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let base = RunConfig {
            out: path(&self.out),
            format: Some(self.format()),
            ..Default::default()
        };
        match &self.command {
            Command::Synth {
                n,
                active_controls,
                baseline_controls,
            } => RunConfig {
                subcommand: "synth",
                n: *n,
                active_controls: *active_controls,
                m_controls: *baseline_controls,
                ..base
            },
            Command::Verify {
                file,
                n,
                mode,
                max_qubits,
            } => RunConfig {
                subcommand: "verify",
                n: *n,
                file: path(file),
                mode: Some(*mode),
                max_qubits: Some(*max_qubits),
                ..base
            },
            Command::Compare { n } => RunConfig {
                subcommand: "compare",
                n: Some(*n),
                ..base
            },
            Command::NmrVerify {
                kind,
                rows,
                boundary,
                couplings,
                t,
                trials,
                tol,
                seed,
            } => RunConfig {
                subcommand: "nmr-verify",
                kinds: Some(kind.0.clone()),
                rows: Some(*rows),
                boundary: Some((*boundary).into()),
                couplings: Some(couplings.unwrap_or_else(|| seeded_couplings(*seed))),
                t: Some(*t),
                trials: Some(*trials),
                tol: Some(*tol),
                seed: Some(*seed),
                ..base
            },
            Command::Trace {
                n,
                input,
                circuit,
                z_offset,
                a_offset,
            } => RunConfig {
                subcommand: "trace",
                n: Some(*n),
                input: Some(input.clone()),
                file: path(circuit),
                z_offset: Some(*z_offset),
                a_offset: Some(*a_offset),
                ..base
            },
        }
    }
}
