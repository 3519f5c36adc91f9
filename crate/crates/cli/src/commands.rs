use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use mqg_core::circuit::{bit_string, parse_bit_string};
use mqg_core::nmr::{verify_identity, VerifyOptions};
use mqg_core::sim::{check_network, trace_blocks, BlockObservation, LayerMap};
use mqg_core::synth::BaselineLayout;
use mqg_core::{
    parse, serialize, synth_baseline_dirty, synth_mqg_network, synth_padded, table1_compare,
    BlockRecurrence, Circuit, LatticeConfig, PaddedSpec, SynthesisSpec,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Cli, Command, Format, RunConfig};

/// Runs the subcommand; `Ok(pass)` on completion, `Err` for usage and input
/// problems.
pub fn run(cli: &Cli) -> Result<bool> {
    let cfg = cli.resolve();
    match &cli.command {
        Command::Synth {
            n,
            active_controls,
            baseline_controls,
        } => synth(cli, &cfg, *n, *active_controls, *baseline_controls),
        Command::Verify {
            file,
            n,
            mode,
            max_qubits,
        } => {
            let (spec, circuit) = match (file, n) {
                (Some(path), _) => {
                    let c = read_circuit(path)?;
                    (infer_spec(&c)?, c)
                }
                (None, Some(n)) => {
                    let s = SynthesisSpec::new(*n)?;
                    (s, synth_mqg_network(s))
                }
                (None, None) => bail!("give a circuit file or --n"),
            };
            let r = check_network(&circuit, spec, mode.equiv(), *max_qubits)?;
            let mut text = format!(
                "verify n={} ({} qubits, {} layers): {} {}, {} {}",
                spec.n(),
                circuit.num_qubits(),
                circuit.layers().len(),
                verdict(r.pass),
                format!("{:?}", r.mode).to_lowercase(),
                r.states_checked,
                if r.mode == mqg_core::EquivMode::Symbolic {
                    "wires"
                } else {
                    "states"
                },
            );
            if let Some(b) = r.bijective {
                let _ = write!(text, ", bijective={b}");
            }
            if let Some(cx) = &r.counterexample {
                let _ = write!(
                    text,
                    "\n  counterexample input={} expected={} actual={}",
                    cx.input, cx.expected, cx.actual
                );
            }
            let pass = r.pass;
            let report = json!({
                "n": spec.n(),
                "qubits": circuit.num_qubits(),
                "layers": circuit.layers().len(),
                "equivalence": r,
            });
            emit(cli, &cfg, pass, report, text)?;
            Ok(pass)
        }
        Command::Compare { n } => {
            let row = table1_compare(SynthesisSpec::new(*n)?);
            let text = format!(
                "n={} N={}: proposed {} MQG units (measured {}, {} qubits); \
                 baseline {} Toffolis (measured {}, {} qubits): {}",
                row.n,
                row.simulated_gate_qubits,
                row.proposed_units,
                row.proposed_units_measured,
                row.proposed_qubits,
                row.baseline_units,
                row.baseline_units_measured,
                row.baseline_qubits,
                if row.consistent {
                    "consistent"
                } else {
                    "MISMATCH"
                },
            );
            emit(cli, &cfg, row.consistent, to_value(&row)?, text)?;
            Ok(row.consistent)
        }
        Command::NmrVerify { .. } => nmr_verify(cli, &cfg),
        Command::Trace {
            n,
            input,
            circuit,
            z_offset,
            a_offset,
        } => {
            let spec = SynthesisSpec::new(*n)?;
            let c = match circuit {
                Some(path) => read_circuit(path)?,
                None => synth_mqg_network(spec),
            };
            let bits = parse_bit_string(input)
                .with_context(|| format!("input {input:?} is not a string of 0s and 1s"))?;
            let rec = BlockRecurrence::new(spec)?;
            let map = LayerMap {
                z_offset: *z_offset,
                a_offset: *a_offset,
            };
            let obs = trace_blocks(&c, &rec, &bits, map)?;
            let mismatches = obs.iter().filter(|o| !o.matches()).count();
            let pass = mismatches == 0;
            let text = trace_table(&obs, mismatches);
            let report = json!({
                "n": spec.n(),
                "input": bit_string(&bits),
                "observations": obs,
                "mismatches": mismatches,
            });
            emit(cli, &cfg, pass, report, text)?;
            Ok(pass)
        }
    }
}

fn synth(
    cli: &Cli,
    cfg: &RunConfig,
    n: Option<u32>,
    active: Option<usize>,
    baseline: Option<usize>,
) -> Result<bool> {
    let (circuit, mut report) = match (n, baseline) {
        (_, Some(m)) => {
            let c = synth_baseline_dirty(m)?;
            let lay = BaselineLayout { controls: m };
            let role = |i| c.role(i).expect("in range").to_string();
            let report = json!({
                "construction": "baseline",
                "controls": (1..=m).map(|i| role(lay.control(i))).collect::<Vec<_>>(),
                "target": role(lay.target()),
            });
            (c, report)
        }
        (Some(n), None) => match active {
            Some(a) => {
                let p = synth_padded(&PaddedSpec::new(n, a)?);
                let report = json!({
                    "construction": "padded",
                    "pinned": p.pinned,
                    "controls": p.active_controls,
                    "target": p.target,
                });
                (p.circuit, report)
            }
            None => {
                let s = SynthesisSpec::new(n)?;
                let c = synth_mqg_network(s);
                let lay = s.layout();
                let role = |i| c.role(i).expect("in range");
                let report = json!({
                    "construction": "mqg",
                    "controls": lay.controls().into_iter().map(role).collect::<Vec<_>>(),
                    "target": role(lay.target()),
                });
                (c, report)
            }
        },
        (None, None) => bail!("give --n or --baseline-controls"),
    };
    let text = serialize(&circuit);
    let Some(out) = &cli.out else {
        // no destination: the circuit itself is the output
        print!("{text}");
        return Ok(true);
    };
    fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
    let m = circuit.metrics();
    report["metrics"] = to_value(&m)?;
    report["path"] = json!(out.display().to_string());
    let mut summary = format!(
        "wrote {}: {} qubits, {} layers, {} Toffolis, depth {}",
        out.display(),
        m.qubit_count,
        m.mqg_count,
        m.toffoli_count,
        m.depth
    );
    if let Some(pinned) = report.get("pinned").and_then(Value::as_array) {
        let names: Vec<&str> = pinned.iter().filter_map(Value::as_str).collect();
        let _ = write!(summary, "; pin to 1: {}", names.join(" "));
    }
    print_report(cli.format(), &envelope(cfg, true, report), &summary);
    Ok(true)
}

fn nmr_verify(cli: &Cli, cfg: &RunConfig) -> Result<bool> {
    let (Some(rows), Some(boundary), Some(couplings), Some(t)) =
        (cfg.rows, cfg.boundary, cfg.couplings, cfg.t)
    else {
        unreachable!("resolved by Cli::resolve")
    };
    let lattice = LatticeConfig::new(rows, couplings, boundary)?;
    let opts = VerifyOptions {
        trials: cfg.trials.unwrap_or(20) as usize,
        tol: cfg.tol.unwrap_or(1e-10),
        seed: cfg.seed.unwrap_or(0),
    };
    let mut reports = Vec::new();
    let mut text = String::new();
    for &kind in cfg.kinds.as_deref().unwrap_or(&[]) {
        let r = verify_identity(kind, &lattice, t, opts)?;
        let _ = writeln!(
            text,
            "kind {kind} (J_{}): {} min_fidelity={:.15} phase={:+.6}{:+.6}i flips={}",
            r.target,
            verdict(r.pass),
            r.min_fidelity,
            r.global_phase.re,
            r.global_phase.im,
            r.segment_flips.join(" "),
        );
        reports.push(r);
    }
    let pass = reports.iter().all(|r| r.pass);
    let _ = write!(
        text,
        "{}/{} identities hold (rows={rows}, {boundary:?}, t={t})",
        reports.iter().filter(|r| r.pass).count(),
        reports.len()
    );
    emit(cli, cfg, pass, json!({ "reports": reports }), text)?;
    Ok(pass)
}

fn trace_table(obs: &[BlockObservation], mismatches: usize) -> String {
    let b = |v: bool| if v { '1' } else { '0' };
    let mut s = String::from(" l  k  Z  Z*  A  A*  D  BD=A^Z  D_restored  match\n");
    for o in obs {
        let restored = match o.d_restored {
            Some(true) => "yes",
            Some(false) => "NO",
            None => "-",
        };
        let _ = writeln!(
            s,
            "{:>2} {:>2}  {}  {}   {}  {}   {}  {:<6}  {:<10}  {}",
            o.l,
            o.k,
            b(o.z),
            b(o.z_oracle),
            b(o.a),
            b(o.a_oracle),
            b(o.d),
            if o.d_relation { "ok" } else { "BAD" },
            restored,
            if o.matches() { "ok" } else { "MISMATCH" },
        );
    }
    let _ = write!(s, "{} blocks, {mismatches} mismatches", obs.len());
    s
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Recovers `n` from a file's width and insists on the canonical role layout,
/// since the reference is defined on flat indices.
fn infer_spec(c: &Circuit) -> Result<SynthesisSpec> {
    let q = c.num_qubits();
    let rows = q.saturating_sub(1) / 4;
    ensure!(
        q % 4 == 1 && rows >= 2 && rows.is_power_of_two(),
        "{q} qubits is not 2^(n+2)+1 for any n >= 1"
    );
    let spec = SynthesisSpec::new(rows.trailing_zeros())?;
    ensure!(
        c.roles() == spec.layout().roles().as_slice(),
        "qubit roles are not in the canonical order A0, B1, C1, D1, A1, ..."
    );
    Ok(spec)
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn envelope(cfg: &RunConfig, pass: bool, report: Value) -> Value {
    json!({
        "tool": "mqg",
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "pass": pass,
        "report": report,
    })
}

fn render(format: Format, doc: &Value, text: &str) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("json values serialize") + "\n",
        Format::Text => format!("{text}\n"),
    }
}

fn print_report(format: Format, doc: &Value, text: &str) {
    print!("{}", render(format, doc, text));
}

fn emit(cli: &Cli, cfg: &RunConfig, pass: bool, report: Value, text: String) -> Result<()> {
    let doc = envelope(cfg, pass, report);
    match &cli.out {
        Some(path) => fs::write(path, render(cli.format(), &doc, &text))
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print_report(cli.format(), &doc, &text);
            Ok(())
        }
    }
}
