//! The `MQGC1` text format for circuits.
//!
//! ```text
//! MQGC1
//! qubits <M>
//! role <flat-index> <label>      (M lines)
//! layer
//! toff <c1> <c2> <t>             (one or more per layer)
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, QubitRef, Toffoli};

pub const MAGIC: &str = "MQGC1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn serialize(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(out, "qubits {}", circuit.num_qubits());
    for (i, r) in circuit.roles().iter().enumerate() {
        let _ = writeln!(out, "role {i} {r}");
    }
    for layer in circuit.layers() {
        out.push_str("layer\n");
        for g in layer.gates() {
            let _ = writeln!(out, "toff {} {} {}", g.ctrl1, g.ctrl2, g.target);
        }
    }
    out
}

pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));

    match lines.next() {
        Some((_, MAGIC)) => {}
        Some((n, other)) => return Err(err(n, format!("expected `{MAGIC}`, found {other:?}"))),
        None => return Err(err(1, "empty input")),
    }

    let num_qubits = match lines.next() {
        Some((n, l)) => {
            let toks: Vec<&str> = l.split(' ').collect();
            match toks.as_slice() {
                ["qubits", m] => m
                    .parse::<usize>()
                    .map_err(|_| err(n, format!("bad qubit count {m:?}")))?,
                _ => return Err(err(n, format!("expected `qubits <M>`, found {l:?}"))),
            }
        }
        None => return Err(err(2, "missing `qubits` header")),
    };

    let mut entries = Vec::with_capacity(num_qubits);
    for k in 0..num_qubits {
        let (n, l) = lines
            .next()
            .ok_or_else(|| err(3 + k, "missing `role` line"))?;
        let toks: Vec<&str> = l.split(' ').collect();
        match toks.as_slice() {
            ["role", idx, label] => {
                let idx = idx
                    .parse::<usize>()
                    .map_err(|_| err(n, format!("bad index {idx:?}")))?;
                let label: QubitRef = label
                    .parse()
                    .map_err(|e: CircuitError| err(n, e.to_string()))?;
                entries.push((idx, label));
            }
            _ => {
                return Err(err(
                    n,
                    format!("expected `role <index> <label>`, found {l:?}"),
                ))
            }
        }
    }
    let mut circuit = Circuit::from_role_map(num_qubits, entries)
        .map_err(|e| err(2 + num_qubits, e.to_string()))?;

    // (line of the `layer` keyword, gates)
    let mut pending: Option<(usize, Vec<Toffoli>)> = None;
    let flush = |circuit: &mut Circuit, pending: Option<(usize, Vec<Toffoli>)>| {
        if let Some((line, gates)) = pending {
            circuit
                .push_layer(gates)
                .map_err(|e| err(line, e.to_string()))?;
        }
        Ok::<_, ParseError>(())
    };

    for (n, l) in lines {
        let toks: Vec<&str> = l.split(' ').collect();
        match toks.as_slice() {
            ["layer"] => {
                flush(&mut circuit, pending.take())?;
                pending = Some((n, Vec::new()));
            }
            ["toff", c1, c2, t] => {
                let (_, gates) = pending
                    .as_mut()
                    .ok_or_else(|| err(n, "`toff` before any `layer`"))?;
                let parse_idx = |s: &str| {
                    let i = s
                        .parse::<usize>()
                        .map_err(|_| err(n, format!("bad index {s:?}")))?;
                    if i >= num_qubits {
                        return Err(err(n, format!("index {i} out of range")));
                    }
                    Ok(i)
                };
                let g = Toffoli::new(parse_idx(c1)?, parse_idx(c2)?, parse_idx(t)?);
                if g.ctrl1 == g.ctrl2 || g.ctrl1 == g.target || g.ctrl2 == g.target {
                    return Err(err(n, format!("gate {g} repeats a qubit")));
                }
                gates.push(g);
            }
            _ => return Err(err(n, format!("unexpected line {l:?}"))),
        }
    }
    flush(&mut circuit, pending)?;
    Ok(circuit)
}
