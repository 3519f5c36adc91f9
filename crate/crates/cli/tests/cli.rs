use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mqg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mqg"))
        .args(args)
        .output()
        .expect("spawn mqg")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&o.stdout)
        )
    })
}

fn keys(v: &Value) -> Vec<&str> {
    let mut k: Vec<&str> = v
        .as_object()
        .expect("object")
        .keys()
        .map(String::as_str)
        .collect();
    k.sort_unstable();
    k
}

const CONFIG_KEYS: [&str; 20] = [
    "a_offset",
    "active_controls",
    "boundary",
    "couplings",
    "file",
    "format",
    "input",
    "kinds",
    "m_controls",
    "max_qubits",
    "mode",
    "n",
    "out",
    "rows",
    "seed",
    "subcommand",
    "t",
    "tol",
    "trials",
    "z_offset",
];

fn check_envelope(v: &Value, subcommand: &str) {
    assert_eq!(keys(v), ["config", "pass", "report", "tool", "version"]);
    assert_eq!(v["tool"], "mqg");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(keys(&v["config"]), CONFIG_KEYS);
    assert_eq!(v["config"]["subcommand"], subcommand);
}

fn synth_to(dir: &Path, n: &str) -> String {
    let path = dir.join(format!("n{n}.mqgc"));
    let p = path.to_str().unwrap().to_owned();
    let o = mqg(&["synth", "--n", n, "--out", &p]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn synth_writes_file_and_metrics() {
    let dir = tempfile::tempdir().unwrap();
    for (n, qubits, layers) in [("1", 9, 8), ("2", 17, 16)] {
        let path = synth_to(dir.path(), n);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("MQGC1\n"));
        assert!(text.contains(&format!("qubits {qubits}\n")));
        assert_eq!(text.lines().filter(|l| *l == "layer").count(), layers);

        let o = mqg(&["synth", "--n", n, "--out", &path]);
        let v = json(&o);
        check_envelope(&v, "synth");
        assert_eq!(v["report"]["metrics"]["qubit_count"], qubits);
        assert_eq!(v["report"]["metrics"]["mqg_count"], layers);
    }
}

#[test]
fn synth_without_out_prints_circuit() {
    let o = mqg(&["synth", "--n", "1"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let c = mqg_core::parse(&text).unwrap();
    assert_eq!(c.num_qubits(), 9);
}

#[test]
fn synth_padded_reports_pinned_set() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.mqgc");
    let o = mqg(&[
        "synth",
        "--n",
        "1",
        "--active-controls",
        "4",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["report"]["pinned"], serde_json::json!(["C2"]));
    assert_eq!(
        v["report"]["controls"],
        serde_json::json!(["A0", "B1", "C1", "B2"])
    );
    assert_eq!(v["report"]["target"], "A2");

    let o = mqg(&["synth", "--n", "1", "--active-controls", "6"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["synth", "--n", "0"][..],
        &["synth"],
        &["verify"],
        &["compare", "--n", "x"],
        &["nmr-verify", "--kind", "7"],
        &["nmr-verify", "--rows", "1"],
        &["nmr-verify", "--couplings", "1,2,3"],
        &["nmr-verify", "--tol", "-1"],
        &["trace", "--n", "1", "--input", "0101"],
        &["no-such-command"],
    ] {
        let o = mqg(args);
        assert_eq!(code(&o), 2, "{args:?}");
    }
}

#[test]
fn verify_file_passes_and_mutation_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = synth_to(dir.path(), "1");
    let o = mqg(&["verify", &path]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    check_envelope(&v, "verify");
    assert_eq!(keys(&v["report"]), ["equivalence", "layers", "n", "qubits"]);
    let eq = &v["report"]["equivalence"];
    assert_eq!(eq["mode"], "exhaustive");
    assert_eq!(eq["states_checked"], 512);
    assert_eq!(eq["pass"], true);
    assert!(eq["counterexample"].is_null());

    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let last_toff = lines.iter().rposition(|l| l.starts_with("toff")).unwrap();
    lines.remove(last_toff);
    let mutated = dir.path().join("mut.mqgc");
    fs::write(&mutated, lines.join("\n") + "\n").unwrap();
    let o = mqg(&["verify", mutated.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["pass"], false);
    let cx = &v["report"]["equivalence"]["counterexample"];
    assert_eq!(cx["input"].as_str().unwrap().len(), 9);
}

#[test]
fn verify_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mqgc");
    fs::write(&bad, "MQGC1\nqubits 2\n").unwrap();
    assert_eq!(code(&mqg(&["verify", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&mqg(&["verify", "/nonexistent/x.mqgc"])), 2);

    // valid file, wrong width for any n
    fs::write(&bad, "MQGC1\nqubits 3\nrole 0 A0\nrole 1 B1\nrole 2 C1\n").unwrap();
    assert_eq!(code(&mqg(&["verify", bad.to_str().unwrap()])), 2);
}

#[test]
fn verify_auto_mode_switches_to_symbolic() {
    let o = mqg(&["verify", "--n", "3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["report"]["equivalence"]["mode"], "symbolic");
    assert_eq!(v["report"]["qubits"], 33);

    let o = mqg(&["verify", "--n", "2", "--mode", "symbolic"]);
    assert_eq!(json(&o)["report"]["equivalence"]["mode"], "symbolic");

    let o = mqg(&["verify", "--n", "1", "--max-qubits", "4"]);
    assert_eq!(json(&o)["report"]["equivalence"]["mode"], "symbolic");

    let o = mqg(&["verify", "--n", "3", "--mode", "exhaustive"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn compare_rows() {
    for (n, proposed, baseline) in [("1", 8, 12), ("3", 32, 60)] {
        let o = mqg(&["compare", "--n", n]);
        assert_eq!(code(&o), 0);
        let v = json(&o);
        check_envelope(&v, "compare");
        assert_eq!(
            keys(&v["report"]),
            [
                "N",
                "baseline_qubits",
                "baseline_units",
                "baseline_units_measured",
                "consistent",
                "n",
                "proposed_qubits",
                "proposed_units",
                "proposed_units_measured"
            ]
        );
        assert_eq!(v["report"]["proposed_units"], proposed);
        assert_eq!(v["report"]["baseline_units"], baseline);
        assert_eq!(v["report"]["consistent"], true);
    }
}

#[test]
fn nmr_verify_all_kinds_rows_2() {
    let o = mqg(&[
        "nmr-verify",
        "--kind",
        "all",
        "--rows",
        "2",
        "--boundary",
        "periodic",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v = json(&o);
    check_envelope(&v, "nmr-verify");
    let reports = v["report"]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 6);
    for (i, r) in reports.iter().enumerate() {
        assert_eq!(r["kind"], i + 1);
        assert_eq!(r["pass"], true);
        for k in [
            "kind",
            "rows",
            "boundary",
            "couplings",
            "t",
            "trials",
            "seed",
            "min_fidelity",
            "global_phase",
            "sign_table",
            "pass",
        ] {
            assert!(r.get(k).is_some(), "missing {k}");
        }
    }
    // couplings came from the seed and are recorded
    let c = &v["config"]["couplings"];
    for k in ["a", "b", "c", "d", "e", "f"] {
        let x = c[k].as_f64().unwrap();
        assert!((0.5..1.5).contains(&x));
    }
}

#[test]
fn nmr_verify_zero_tolerance_fails() {
    let o = mqg(&["nmr-verify", "--kind", "1", "--tol", "0", "--trials", "3"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn nmr_verify_explicit_couplings_and_open_boundary() {
    let o = mqg(&[
        "nmr-verify",
        "--rows",
        "3",
        "--boundary",
        "open",
        "--couplings",
        "0.9,1.3,0.7,1.1,0.6,1.45",
        "--trials",
        "4",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["config"]["couplings"]["f"], 1.45);
    assert_eq!(v["config"]["boundary"], "open");
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        &["nmr-verify", "--seed", "11", "--trials", "5"][..],
        &["verify", "--n", "2"],
        &[
            "trace",
            "--n",
            "2",
            "--input",
            "10110011101001011",
            "--format",
            "json",
        ],
        &["compare", "--n", "2"],
    ] {
        let a = mqg(args);
        let b = mqg(args);
        assert_eq!(code(&a), code(&b));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = mqg(&["nmr-verify", "--seed", "11", "--trials", "5"]);
    let b = mqg(&["nmr-verify", "--seed", "12", "--trials", "5"]);
    assert_ne!(
        json(&a)["config"]["couplings"],
        json(&b)["config"]["couplings"]
    );
}

#[test]
fn trace_table_and_json() {
    let o = mqg(&["trace", "--n", "1", "--input", "111110000"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.ends_with("4 blocks, 0 mismatches\n"), "{text}");

    let o = mqg(&[
        "trace",
        "--n",
        "1",
        "--input",
        "000000000",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    check_envelope(&v, "trace");
    let obs = v["report"]["observations"].as_array().unwrap();
    assert_eq!(obs.len(), 4);
    for ob in obs {
        for k in ["z", "z_oracle", "a", "a_oracle", "d"] {
            assert_eq!(ob[k], false);
        }
    }
}

#[test]
fn trace_flags_wrong_layer_map() {
    let o = mqg(&[
        "trace",
        "--n",
        "1",
        "--input",
        "111111111",
        "--a-offset",
        "-2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["report"]["mismatches"].as_u64().unwrap() > 0);
}

#[test]
fn trace_reads_circuit_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = synth_to(dir.path(), "1");
    let o = mqg(&[
        "trace",
        "--n",
        "1",
        "--input",
        "101010101",
        "--circuit",
        &path,
    ]);
    assert_eq!(code(&o), 0);
    // the n=2 oracle cannot trace an n=1 file
    let o = mqg(&[
        "trace",
        "--n",
        "2",
        "--input",
        "101010101",
        "--circuit",
        &path,
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn report_goes_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = mqg(&["compare", "--n", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["report"]["N"], 10);
}
