//! Execution backends over a [`Circuit`] and equivalence checks against the
//! oracles in [`crate::oracle`].
//!
//! * basis-state simulation on bit vectors or 64-bit words,
//! * exhaustive and sampled comparison against a reference permutation,
//! * symbolic simulation producing one [`Anf`] per wire,
//! * dense state-vector simulation (Toffoli circuits act as permutations),
//! * block tracing of the MQG network against the block recurrences.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anf::{Anf, Var, MAX_VARS};
use crate::circuit::{bit_string, word_to_bits, Circuit};
use crate::oracle::{var_namer, BlockRecurrence, OracleError};
use crate::state::StateVector;
use crate::synth::{MqgLayout, SynthesisSpec};

/// Default qubit limit for exhaustive enumeration.
pub const DEFAULT_MAX_EXHAUSTIVE: usize = 24;
/// Exhaustive outputs are held as `u32`, so this is a hard ceiling.
pub const HARD_MAX_EXHAUSTIVE: usize = 32;
/// State-vector backend ceiling.
pub const MAX_STATEVECTOR_QUBITS: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("input has {got} bits but the circuit has {expected} qubits")]
    WidthMismatch { expected: usize, got: usize },
    #[error("{qubits} qubits exceed the {limit}-qubit limit of this backend; use {hint}")]
    TooWide {
        qubits: usize,
        limit: usize,
        hint: &'static str,
    },
    #[error("circuit is not the block-structured MQG network: {0}")]
    NotBlockStructured(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Gates flattened to `(control mask, target bit)` pairs for word simulation.
#[derive(Debug, Clone)]
pub struct CompiledCircuit {
    num_qubits: usize,
    ops: Vec<(u64, u64)>,
    layer_ends: Vec<usize>,
}

impl CompiledCircuit {
    pub fn new(circuit: &Circuit) -> Result<Self, SimError> {
        if circuit.num_qubits() > 64 {
            return Err(SimError::TooWide {
                qubits: circuit.num_qubits(),
                limit: 64,
                hint: "run_anf",
            });
        }
        let mut ops = Vec::new();
        let mut layer_ends = Vec::with_capacity(circuit.layers().len());
        for layer in circuit.layers() {
            for g in layer.gates() {
                ops.push(((1u64 << g.ctrl1) | (1u64 << g.ctrl2), 1u64 << g.target));
            }
            layer_ends.push(ops.len());
        }
        Ok(CompiledCircuit {
            num_qubits: circuit.num_qubits(),
            ops,
            layer_ends,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn apply(&self, mut w: u64) -> u64 {
        for &(mask, flip) in &self.ops {
            if w & mask == mask {
                w ^= flip;
            }
        }
        w
    }

    /// Word after each layer; entry 0 is the input.
    pub fn snapshots(&self, mut w: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.layer_ends.len() + 1);
        out.push(w);
        let mut start = 0;
        for &end in &self.layer_ends {
            for &(mask, flip) in &self.ops[start..end] {
                if w & mask == mask {
                    w ^= flip;
                }
            }
            out.push(w);
            start = end;
        }
        out
    }
}

/// Runs the circuit on one basis state given as bits in flat-index order.
pub fn run_basis(circuit: &Circuit, input: &[bool]) -> Result<Vec<bool>, SimError> {
    if input.len() != circuit.num_qubits() {
        return Err(SimError::WidthMismatch {
            expected: circuit.num_qubits(),
            got: input.len(),
        });
    }
    let mut bits = input.to_vec();
    for layer in circuit.layers() {
        layer.apply(&mut bits);
    }
    Ok(bits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivMode {
    Exhaustive,
    Symbolic,
    Sampled,
}

/// First disagreement found. For basis modes the fields are bit strings in
/// flat-index order; in symbolic mode `input` names the wire and the other
/// two fields are ANFs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivReport {
    pub mode: EquivMode,
    pub states_checked: u64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bijective: Option<bool>,
    pub counterexample: Option<Counterexample>,
}

impl EquivReport {
    fn from_mismatch(
        mode: EquivMode,
        states_checked: u64,
        bijective: Option<bool>,
        counterexample: Option<Counterexample>,
    ) -> Self {
        EquivReport {
            mode,
            states_checked,
            pass: counterexample.is_none() && bijective != Some(false),
            bijective,
            counterexample,
        }
    }
}

fn basis_counterexample(width: usize, input: u64, expected: u64, actual: u64) -> Counterexample {
    Counterexample {
        input: bit_string(&word_to_bits(input, width)),
        expected: bit_string(&word_to_bits(expected, width)),
        actual: bit_string(&word_to_bits(actual, width)),
    }
}

/// Compares the circuit with `reference` on every basis state and checks
/// that the circuit's map is a bijection.
pub fn run_all<F>(
    circuit: &Circuit,
    reference: F,
    max_qubits: usize,
) -> Result<EquivReport, SimError>
where
    F: Fn(u64) -> u64 + Sync,
{
    let width = circuit.num_qubits();
    let limit = max_qubits.min(HARD_MAX_EXHAUSTIVE);
    if width > limit {
        return Err(SimError::TooWide {
            qubits: width,
            limit,
            hint: "the symbolic backend (run_anf)",
        });
    }
    let compiled = CompiledCircuit::new(circuit)?;
    let total = 1u64 << width;
    let outputs: Vec<u32> = (0..total)
        .into_par_iter()
        .map(|w| compiled.apply(w) as u32)
        .collect();

    let mismatch = (0..total)
        .into_par_iter()
        .find_first(|&w| outputs[w as usize] as u64 != reference(w));

    let mut seen = vec![false; total as usize];
    let mut bijective = true;
    for &o in &outputs {
        if std::mem::replace(&mut seen[o as usize], true) {
            bijective = false;
            break;
        }
    }

    let cx =
        mismatch.map(|w| basis_counterexample(width, w, reference(w), outputs[w as usize] as u64));
    Ok(EquivReport::from_mismatch(
        EquivMode::Exhaustive,
        total,
        Some(bijective),
        cx,
    ))
}

/// Exhaustive comparison over the `free` qubits with every other qubit held
/// at the value it has in `base`.
pub fn run_all_restricted<F>(
    circuit: &Circuit,
    reference: F,
    free: &[usize],
    base: u64,
    max_qubits: usize,
) -> Result<EquivReport, SimError>
where
    F: Fn(u64) -> u64 + Sync,
{
    let width = circuit.num_qubits();
    if free.len() > max_qubits.min(HARD_MAX_EXHAUSTIVE) {
        return Err(SimError::TooWide {
            qubits: free.len(),
            limit: max_qubits,
            hint: "the symbolic backend (run_anf)",
        });
    }
    let compiled = CompiledCircuit::new(circuit)?;
    let free_mask = free.iter().fold(0u64, |m, &q| m | (1 << q));
    let spread = |mut x: u64| {
        let mut w = base & !free_mask;
        for &q in free {
            w |= (x & 1) << q;
            x >>= 1;
        }
        w
    };
    let total = 1u64 << free.len();
    let mismatch = (0..total).into_par_iter().find_first(|&x| {
        let w = spread(x);
        compiled.apply(w) != reference(w)
    });
    let cx = mismatch.map(|x| {
        let w = spread(x);
        basis_counterexample(width, w, reference(w), compiled.apply(w))
    });
    Ok(EquivReport::from_mismatch(
        EquivMode::Exhaustive,
        total,
        None,
        cx,
    ))
}

/// Seeded random-input comparison for circuits up to 64 qubits.
pub fn run_sampled<F>(
    circuit: &Circuit,
    reference: F,
    samples: u64,
    seed: u64,
) -> Result<EquivReport, SimError>
where
    F: Fn(u64) -> u64 + Sync,
{
    let compiled = CompiledCircuit::new(circuit)?;
    let width = circuit.num_qubits();
    let mask = if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<u64> = (0..samples).map(|_| rng.random::<u64>() & mask).collect();
    let mismatch = inputs
        .par_iter()
        .copied()
        .find_first(|&w| compiled.apply(w) != reference(w));
    let cx = mismatch.map(|w| basis_counterexample(width, w, reference(w), compiled.apply(w)));
    Ok(EquivReport::from_mismatch(
        EquivMode::Sampled,
        samples,
        None,
        cx,
    ))
}

/// Symbolic simulation: wire `i` starts as variable `i`, and every Toffoli
/// updates its target ANF to `t ⊕ c1 c2`.
pub fn run_anf(circuit: &Circuit) -> Result<Vec<Anf>, SimError> {
    if circuit.num_qubits() > MAX_VARS {
        return Err(SimError::TooWide {
            qubits: circuit.num_qubits(),
            limit: MAX_VARS,
            hint: "a narrower circuit",
        });
    }
    let mut wires: Vec<Anf> = (0..circuit.num_qubits())
        .map(|i| Anf::var(Var::new(i)))
        .collect();
    for g in circuit.gates() {
        let prod = &wires[g.ctrl1] & &wires[g.ctrl2];
        wires[g.target] = &wires[g.target] ^ &prod;
    }
    Ok(wires)
}

/// Compares symbolic outputs with expected ANFs wire by wire.
pub fn check_symbolic<N: Fn(Var) -> String>(
    circuit: &Circuit,
    expected: &[Anf],
    name: N,
) -> Result<EquivReport, SimError> {
    if expected.len() != circuit.num_qubits() {
        return Err(SimError::WidthMismatch {
            expected: circuit.num_qubits(),
            got: expected.len(),
        });
    }
    let actual = run_anf(circuit)?;
    let cx = actual
        .iter()
        .zip(expected)
        .enumerate()
        .find(|(_, (a, e))| a != e)
        .map(|(wire, (a, e))| Counterexample {
            input: circuit
                .role(wire)
                .map(|r| r.to_string())
                .unwrap_or_else(|| wire.to_string()),
            expected: e.render(&name),
            actual: a.render(&name),
        });
    Ok(EquivReport::from_mismatch(
        EquivMode::Symbolic,
        circuit.num_qubits() as u64,
        None,
        cx,
    ))
}

/// Applies the circuit's basis permutation to a state vector.
pub fn run_statevector(circuit: &Circuit, state: &StateVector) -> Result<StateVector, SimError> {
    if state.num_qubits() != circuit.num_qubits() {
        return Err(SimError::WidthMismatch {
            expected: circuit.num_qubits(),
            got: state.num_qubits(),
        });
    }
    if circuit.num_qubits() > MAX_STATEVECTOR_QUBITS {
        return Err(SimError::TooWide {
            qubits: circuit.num_qubits(),
            limit: MAX_STATEVECTOR_QUBITS,
            hint: "run_anf",
        });
    }
    let mut s = state.clone();
    for layer in circuit.layers() {
        s = s.permuted(|i| layer.apply_word(i as u64) as usize);
    }
    Ok(s)
}

/// Result of the dirty-ancilla grouping check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AncillaReport {
    pub groups: u64,
    pub states_checked: u64,
    pub independent: bool,
    pub counterexample: Option<Counterexample>,
}

/// Enumerates every basis state grouped by the non-ancilla wires and checks
/// that within each group the non-ancilla outputs do not depend on the
/// ancilla values and that ancillas come back unchanged.
pub fn check_dirty_ancillas(
    circuit: &Circuit,
    ancillas: &[usize],
    max_qubits: usize,
) -> Result<AncillaReport, SimError> {
    let width = circuit.num_qubits();
    let limit = max_qubits.min(HARD_MAX_EXHAUSTIVE);
    if width > limit {
        return Err(SimError::TooWide {
            qubits: width,
            limit,
            hint: "the symbolic backend (run_anf)",
        });
    }
    let compiled = CompiledCircuit::new(circuit)?;
    let anc_mask = ancillas.iter().fold(0u64, |m, &q| m | (1 << q));
    let others: Vec<usize> = (0..width).filter(|q| anc_mask >> q & 1 == 0).collect();
    let spread = |mut x: u64, qs: &[usize]| {
        let mut w = 0u64;
        for &q in qs {
            w |= (x & 1) << q;
            x >>= 1;
        }
        w
    };
    let groups = 1u64 << others.len();
    let per_group = 1u64 << ancillas.len();
    let bad = (0..groups).into_par_iter().find_map_first(|g| {
        let base = spread(g, &others);
        let reference = compiled.apply(base) & !anc_mask;
        (0..per_group).find_map(|x| {
            let w = base | spread(x, ancillas);
            let out = compiled.apply(w);
            let ok = out & !anc_mask == reference && out & anc_mask == w & anc_mask;
            (!ok).then(|| basis_counterexample(width, w, reference | (w & anc_mask), out))
        })
    });
    Ok(AncillaReport {
        groups,
        states_checked: groups * per_group,
        independent: bad.is_none(),
        counterexample: bad,
    })
}

/// Which layer snapshots carry `Z_l(k)` and `A_l(k)` (1-based layer counts).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerMap {
    pub z_offset: isize,
    pub a_offset: isize,
}

impl Default for LayerMap {
    /// Block `k` spans layers `4k-3..=4k`: `Z` after `4k-2`, `A` after `4k`.
    fn default() -> Self {
        LayerMap {
            z_offset: -2,
            a_offset: 0,
        }
    }
}

impl LayerMap {
    fn after(offset: isize, k: usize, layers: usize) -> usize {
        (4 * k as isize + offset).clamp(0, layers as isize) as usize
    }
}

/// Observed and predicted wire values at one block boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockObservation {
    pub l: usize,
    pub k: usize,
    pub z: bool,
    pub z_oracle: bool,
    pub a: bool,
    pub a_oracle: bool,
    pub d: bool,
    /// `B_l ∧ d == A_l(k) ⊕ Z_l(k)` evaluated on the input.
    pub d_relation: bool,
    /// At the last stage, whether `d_l` is back to its input value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_restored: Option<bool>,
}

impl BlockObservation {
    pub fn matches(&self) -> bool {
        self.z == self.z_oracle
            && self.a == self.a_oracle
            && self.d_relation
            && self.d_restored != Some(false)
    }
}

/// Reads `a_l` and `d_l` at every block boundary of the `n` network and
/// pairs them with the oracle values of the block recurrences.
pub fn trace_blocks(
    circuit: &Circuit,
    oracle: &BlockRecurrence,
    input: &[bool],
    map: LayerMap,
) -> Result<Vec<BlockObservation>, SimError> {
    let layout: MqgLayout = oracle.layout();
    let m = layout.rows();
    if circuit.num_qubits() != layout.num_qubits() {
        return Err(SimError::NotBlockStructured(format!(
            "expected {} qubits, found {}",
            layout.num_qubits(),
            circuit.num_qubits()
        )));
    }
    if circuit.layers().len() != 4 * m || circuit.layers().iter().any(|l| l.len() != m) {
        return Err(SimError::NotBlockStructured(format!(
            "expected {} layers of {} gates",
            4 * m,
            m
        )));
    }
    if input.len() != circuit.num_qubits() {
        return Err(SimError::WidthMismatch {
            expected: circuit.num_qubits(),
            got: input.len(),
        });
    }
    let compiled = CompiledCircuit::new(circuit)?;
    let word = crate::circuit::bits_to_word(input);
    let snaps = compiled.snapshots(word);
    let assign = word as u128;
    let bit = |w: u64, q: usize| (w >> q) & 1 == 1;
    let layers = circuit.layers().len();

    let mut out = Vec::with_capacity(m * m);
    for k in 1..=m {
        let zs = snaps[LayerMap::after(map.z_offset, k, layers)];
        let as_ = snaps[LayerMap::after(map.a_offset, k, layers)];
        for l in 1..=m {
            let z_oracle = oracle.z(l, k)?.eval_word(assign);
            let a_oracle = oracle.a(l, k)?.eval_word(assign);
            let d = bit(as_, layout.d(l));
            out.push(BlockObservation {
                l,
                k,
                z: bit(zs, layout.a(l)),
                z_oracle,
                a: bit(as_, layout.a(l)),
                a_oracle,
                d,
                d_relation: (bit(word, layout.b(l)) && d) == (a_oracle ^ z_oracle),
                d_restored: (k == m).then(|| d == bit(word, layout.d(l))),
            });
        }
    }
    Ok(out)
}

/// Verifies an `n` network: exhaustively when it fits under `max_qubits`,
/// otherwise symbolically against the closed form.
pub fn check_network(
    circuit: &Circuit,
    spec: SynthesisSpec,
    mode: Option<EquivMode>,
    max_qubits: usize,
) -> Result<EquivReport, SimError> {
    let width = circuit.num_qubits();
    let mode = mode.unwrap_or(if width <= max_qubits {
        EquivMode::Exhaustive
    } else {
        EquivMode::Symbolic
    });
    match mode {
        EquivMode::Exhaustive => {
            run_all(circuit, crate::oracle::network_reference(spec), max_qubits)
        }
        EquivMode::Symbolic => {
            let expected = crate::oracle::closed_form_outputs(spec)?;
            check_symbolic(circuit, &expected, var_namer(spec.layout()))
        }
        EquivMode::Sampled => {
            run_sampled(circuit, crate::oracle::network_reference(spec), 100_000, 0)
        }
    }
}
