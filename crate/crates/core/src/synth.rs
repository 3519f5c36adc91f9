//! Network constructors: the layered MQG network, its padded variant for
//! smaller control counts, and the conventional one-gate-per-step baseline.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, QubitRef, Role, Toffoli};

/// Largest `n` accepted. The network for `n` has `2^(n+2)+1` qubits and
/// `2^(2n+2)` gates.
pub const MAX_N: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("n must be in 1..={MAX_N}, got {0}")]
    BadN(u32),
    #[error("active control count {active} outside 2..={max}")]
    BadActiveControls { active: usize, max: usize },
    #[error("baseline needs at least 3 controls, got {0}")]
    TooFewControls(usize),
}

/// Size parameters of the MQG network for a given `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisSpec {
    n: u32,
}

impl SynthesisSpec {
    pub fn new(n: u32) -> Result<Self, SynthError> {
        if (1..=MAX_N).contains(&n) {
            Ok(SynthesisSpec { n })
        } else {
            Err(SynthError::BadN(n))
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of rows `m = 2^n`.
    pub fn rows(&self) -> usize {
        1 << self.n
    }

    pub fn qubit_count(&self) -> usize {
        4 * self.rows() + 1
    }

    pub fn control_count(&self) -> usize {
        2 * self.rows() + 1
    }

    /// Qubits of the simulated gate, `N = 2^(n+1) + 2` (controls plus target).
    pub fn simulated_gate_qubits(&self) -> usize {
        2 * self.rows() + 2
    }

    pub fn layer_count(&self) -> usize {
        4 * self.rows()
    }

    pub fn layout(&self) -> MqgLayout {
        MqgLayout { rows: self.rows() }
    }
}

/// Flat-index layout of the MQG network: `a_0` first, then for each row
/// `l = 1..=m` the block `(b_l, c_l, d_l, a_l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MqgLayout {
    rows: usize,
}

impl MqgLayout {
    pub fn for_rows(rows: usize) -> Self {
        MqgLayout { rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn num_qubits(&self) -> usize {
        4 * self.rows + 1
    }

    pub fn a(&self, l: usize) -> usize {
        debug_assert!(l <= self.rows);
        if l == 0 {
            0
        } else {
            4 * l
        }
    }

    pub fn b(&self, l: usize) -> usize {
        debug_assert!((1..=self.rows).contains(&l));
        4 * l - 3
    }

    pub fn c(&self, l: usize) -> usize {
        debug_assert!((1..=self.rows).contains(&l));
        4 * l - 2
    }

    pub fn d(&self, l: usize) -> usize {
        debug_assert!((1..=self.rows).contains(&l));
        4 * l - 1
    }

    pub fn target(&self) -> usize {
        self.a(self.rows)
    }

    /// `a_0` followed by `b_l, c_l` for every row.
    pub fn controls(&self) -> Vec<usize> {
        std::iter::once(self.a(0))
            .chain((1..=self.rows).flat_map(|l| [self.b(l), self.c(l)]))
            .collect()
    }

    /// Dirty work wires: `a_1..a_(m-1)` and every `d_l`.
    pub fn ancillas(&self) -> Vec<usize> {
        (1..self.rows)
            .map(|l| self.a(l))
            .chain((1..=self.rows).map(|l| self.d(l)))
            .collect()
    }

    pub fn flat(&self, q: QubitRef) -> Option<usize> {
        let l = q.index as usize;
        match q.role {
            Role::A if l <= self.rows => Some(self.a(l)),
            Role::B if (1..=self.rows).contains(&l) => Some(self.b(l)),
            Role::C if (1..=self.rows).contains(&l) => Some(self.c(l)),
            Role::D if (1..=self.rows).contains(&l) => Some(self.d(l)),
            _ => None,
        }
    }

    pub fn roles(&self) -> Vec<QubitRef> {
        let mut roles = vec![QubitRef::a(0)];
        for l in 1..=self.rows as u32 {
            roles.extend([
                QubitRef::b(l),
                QubitRef::c(l),
                QubitRef::d(l),
                QubitRef::a(l),
            ]);
        }
        roles
    }

    /// Solid-triangle layer: `d_l ^= a_(l-1) & c_l` for every row.
    pub fn type1_layer(&self) -> Vec<Toffoli> {
        (1..=self.rows)
            .map(|l| Toffoli::new(self.a(l - 1), self.c(l), self.d(l)))
            .collect()
    }

    /// Dotted-triangle layer: `a_l ^= b_l & d_l` for every row.
    pub fn type2_layer(&self) -> Vec<Toffoli> {
        (1..=self.rows)
            .map(|l| Toffoli::new(self.b(l), self.d(l), self.a(l)))
            .collect()
    }
}

/// Builds the `2^(n+2)`-layer network simulating a `C^(2^(n+1)+1)`-NOT.
///
/// Layers alternate type 1 and type 2, starting with type 1, and the pair is
/// repeated `2^(n+1)` times. Only `a_(2^n)` changes on net; every ancilla is
/// returned to its initial value whatever that value was.
pub fn synth_mqg_network(spec: SynthesisSpec) -> Circuit {
    let layout = spec.layout();
    let mut circuit = Circuit::new(layout.roles()).expect("layout roles are distinct");
    let t1 = layout.type1_layer();
    let t2 = layout.type2_layer();
    for _ in 0..2 * spec.rows() {
        circuit
            .push_layer(t1.clone())
            .expect("type-1 supports are disjoint");
        circuit
            .push_layer(t2.clone())
            .expect("type-2 supports are disjoint");
    }
    circuit
}

/// The network run with some controls pinned to `|1⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaddedSpec {
    pub base: SynthesisSpec,
    pub active_controls: usize,
}

impl PaddedSpec {
    pub fn new(n: u32, active_controls: usize) -> Result<Self, SynthError> {
        let base = SynthesisSpec::new(n)?;
        let max = base.control_count();
        if !(2..=max).contains(&active_controls) {
            return Err(SynthError::BadActiveControls {
                active: active_controls,
                max,
            });
        }
        Ok(PaddedSpec {
            base,
            active_controls,
        })
    }

    /// Controls to hold at 1, highest row first, `c` before `b` within a row.
    pub fn pinned(&self) -> Vec<QubitRef> {
        let surplus = self.base.control_count() - self.active_controls;
        (1..=self.base.rows() as u32)
            .rev()
            .flat_map(|l| [QubitRef::c(l), QubitRef::b(l)])
            .take(surplus)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedCircuit {
    pub circuit: Circuit,
    pub pinned: Vec<QubitRef>,
    pub active_controls: Vec<QubitRef>,
    pub target: QubitRef,
}

pub fn synth_padded(spec: &PaddedSpec) -> PaddedCircuit {
    let circuit = synth_mqg_network(spec.base);
    let pinned = spec.pinned();
    let layout = spec.base.layout();
    let active_controls = layout
        .controls()
        .into_iter()
        .map(|i| circuit.role(i).expect("control in range"))
        .filter(|q| !pinned.contains(q))
        .collect();
    PaddedCircuit {
        target: circuit.role(layout.target()).expect("target in range"),
        circuit,
        pinned,
        active_controls,
    }
}

/// Flat layout of the baseline: controls `0..m`, ancillas `m..2m-2`, target
/// `2m-2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaselineLayout {
    pub controls: usize,
}

impl BaselineLayout {
    /// `c_i`, 1-based.
    pub fn control(&self, i: usize) -> usize {
        i - 1
    }
    /// `x_j`, 1-based.
    pub fn ancilla(&self, j: usize) -> usize {
        self.controls + j - 1
    }
    pub fn target(&self) -> usize {
        2 * self.controls - 2
    }
    pub fn num_qubits(&self) -> usize {
        2 * self.controls - 1
    }
    pub fn roles(&self) -> Vec<QubitRef> {
        let m = self.controls as u32;
        (1..=m)
            .map(QubitRef::c)
            .chain((1..=m - 2).map(QubitRef::d))
            .chain(std::iter::once(QubitRef::a(1)))
            .collect()
    }
}

/// Conventional `C^m`-NOT from `4(m-2)` Toffolis with `m-2` dirty ancillas,
/// one gate per layer.
pub fn synth_baseline_dirty(m_controls: usize) -> Result<Circuit, SynthError> {
    if m_controls < 3 {
        return Err(SynthError::TooFewControls(m_controls));
    }
    let m = m_controls;
    let lay = BaselineLayout { controls: m };
    // Descending chain: t first, then x_(m-2) .. x_2.
    let mut down = vec![Toffoli::new(
        lay.control(m),
        lay.ancilla(m - 2),
        lay.target(),
    )];
    for i in (3..m).rev() {
        down.push(Toffoli::new(
            lay.control(i),
            lay.ancilla(i - 2),
            lay.ancilla(i - 1),
        ));
    }
    let peak = Toffoli::new(lay.control(1), lay.control(2), lay.ancilla(1));
    let restore: Vec<Toffoli> = down[1..].to_vec();

    let mut seq = Vec::with_capacity(4 * (m - 2));
    seq.extend(down.iter().copied());
    seq.push(peak);
    seq.extend(down.iter().rev().copied());
    seq.extend(restore.iter().copied());
    seq.push(peak);
    seq.extend(restore.iter().rev().copied());

    let mut circuit = Circuit::new(lay.roles()).expect("baseline roles are distinct");
    for g in seq {
        circuit.push_layer(vec![g]).expect("single gate layer");
    }
    Ok(circuit)
}

/// One row of the unit-count comparison between the two constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub n: u32,
    /// Qubits of the simulated `C^(N-1)`-NOT.
    #[serde(rename = "N")]
    pub simulated_gate_qubits: usize,
    pub proposed_units: usize,
    pub proposed_units_measured: usize,
    pub proposed_qubits: usize,
    pub baseline_units: usize,
    pub baseline_units_measured: usize,
    pub baseline_qubits: usize,
    pub consistent: bool,
}

pub fn table1_compare(spec: SynthesisSpec) -> ComparisonRow {
    let big_n = spec.simulated_gate_qubits();
    let proposed = synth_mqg_network(spec).metrics();
    let baseline = synth_baseline_dirty(big_n - 1).expect("N-1 >= 5").metrics();
    let proposed_units = 2 * big_n - 4;
    let baseline_units = 4 * (big_n - 3);
    ComparisonRow {
        n: spec.n(),
        simulated_gate_qubits: big_n,
        proposed_units,
        proposed_units_measured: proposed.mqg_count,
        proposed_qubits: proposed.qubit_count,
        baseline_units,
        baseline_units_measured: baseline.toffoli_count,
        baseline_qubits: baseline.qubit_count,
        consistent: proposed_units == proposed.mqg_count
            && baseline_units == baseline.toffoli_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_bounds() {
        assert!(SynthesisSpec::new(0).is_err());
        let s = SynthesisSpec::new(1).unwrap();
        assert_eq!(
            (
                s.rows(),
                s.qubit_count(),
                s.control_count(),
                s.simulated_gate_qubits()
            ),
            (2, 9, 5, 6)
        );
    }

    #[test]
    fn n1_layout() {
        let c = synth_mqg_network(SynthesisSpec::new(1).unwrap());
        let t = |a, b, t| c.toffoli(a, b, t).unwrap();
        use QubitRef as Q;
        let l1 = vec![t(Q::a(0), Q::c(1), Q::d(1)), t(Q::a(1), Q::c(2), Q::d(2))];
        let l2 = vec![t(Q::b(1), Q::d(1), Q::a(1)), t(Q::b(2), Q::d(2), Q::a(2))];
        assert_eq!(c.layers().len(), 8);
        for (i, layer) in c.layers().iter().enumerate() {
            let want = if i % 2 == 0 { &l1 } else { &l2 };
            assert_eq!(layer.gates(), want.as_slice());
        }
        let m = c.metrics();
        assert_eq!(
            (m.qubit_count, m.mqg_count, m.toffoli_count, m.depth),
            (9, 8, 16, 8)
        );
    }

    #[test]
    fn n2_metrics() {
        let m = synth_mqg_network(SynthesisSpec::new(2).unwrap()).metrics();
        assert_eq!((m.qubit_count, m.mqg_count, m.toffoli_count), (17, 16, 64));
    }

    #[test]
    fn layers_touch_three_m_qubits() {
        for n in 1..=3 {
            let s = SynthesisSpec::new(n).unwrap();
            let c = synth_mqg_network(s);
            for layer in c.layers() {
                assert_eq!(layer.len() * 3, 3 * s.rows());
            }
        }
    }

    #[test]
    fn controls_never_targeted() {
        for n in 1..=3 {
            let s = SynthesisSpec::new(n).unwrap();
            let c = synth_mqg_network(s);
            let controls = s.layout().controls();
            assert!(c.gates().all(|g| !controls.contains(&g.target)));
        }
    }

    #[test]
    fn padding_choice() {
        assert_eq!(
            PaddedSpec::new(1, 4).unwrap().pinned(),
            vec![QubitRef::c(2)]
        );
        assert!(PaddedSpec::new(1, 5).unwrap().pinned().is_empty());
        assert_eq!(
            PaddedSpec::new(1, 2).unwrap().pinned(),
            vec![QubitRef::c(2), QubitRef::b(2), QubitRef::c(1)]
        );
        assert!(PaddedSpec::new(1, 6).is_err());
        assert!(PaddedSpec::new(1, 1).is_err());
        let p = synth_padded(&PaddedSpec::new(1, 4).unwrap());
        assert_eq!(
            p.active_controls,
            vec![
                QubitRef::a(0),
                QubitRef::b(1),
                QubitRef::c(1),
                QubitRef::b(2)
            ]
        );
        assert_eq!(p.target, QubitRef::a(2));
        assert_eq!(p.circuit, synth_mqg_network(SynthesisSpec::new(1).unwrap()));
    }

    #[test]
    fn baseline_m3_gates() {
        let c = synth_baseline_dirty(3).unwrap();
        // c1=0 c2=1 c3=2 x1=3 t=4
        let seq: Vec<Toffoli> = c.gates().copied().collect();
        assert_eq!(
            seq,
            vec![
                Toffoli::new(2, 3, 4),
                Toffoli::new(0, 1, 3),
                Toffoli::new(2, 3, 4),
                Toffoli::new(0, 1, 3)
            ]
        );
        assert!(synth_baseline_dirty(2).is_err());
    }

    #[test]
    fn baseline_counts() {
        for m in 3..=12 {
            let metrics = synth_baseline_dirty(m).unwrap().metrics();
            assert_eq!(metrics.toffoli_count, 4 * (m - 2));
            assert_eq!(metrics.mqg_count, 4 * (m - 2));
            assert_eq!(metrics.qubit_count, 2 * m - 1);
        }
    }

    #[test]
    fn comparison_rows() {
        let r = table1_compare(SynthesisSpec::new(1).unwrap());
        assert_eq!(
            (r.simulated_gate_qubits, r.proposed_units, r.baseline_units),
            (6, 8, 12)
        );
        let r = table1_compare(SynthesisSpec::new(2).unwrap());
        assert_eq!(
            (r.simulated_gate_qubits, r.proposed_units, r.baseline_units),
            (10, 16, 28)
        );
        let r = table1_compare(SynthesisSpec::new(3).unwrap());
        assert_eq!((r.proposed_units, r.baseline_units), (32, 60));
        for n in 1..=4 {
            assert!(table1_compare(SynthesisSpec::new(n).unwrap()).consistent);
        }
    }
}
