//! Role-labeled Toffoli circuits organised into layers of simultaneous gates.
//!
//! A [`Circuit`] owns a bijective map from flat qubit indices to role labels
//! ([`QubitRef`]) and a list of [`MqgLayer`]s. Every layer is a set of
//! Toffoli gates with pairwise-disjoint supports, so the gates inside a layer
//! commute and can be executed at the same time.
//!
//! Basis states are little-endian: bit `i` of a basis word is flat qubit `i`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("role map is not a bijection onto 0..{num_qubits}: {reason}")]
    NotBijective { num_qubits: usize, reason: String },
    #[error("qubit index {index} out of range for a {num_qubits}-qubit circuit")]
    IndexOutOfRange { index: usize, num_qubits: usize },
    #[error("gate {gate} uses qubit {qubit} more than once")]
    DuplicateQubit { gate: Toffoli, qubit: usize },
    #[error("gates in one layer share qubit {qubit}")]
    OverlappingSupport { qubit: usize },
    #[error("a layer must contain at least one gate")]
    EmptyLayer,
    #[error("unknown qubit label {0}")]
    UnknownQubit(QubitRef),
    #[error("invalid qubit label {0:?}")]
    BadLabel(String),
}

/// The four wire families of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    A,
    B,
    C,
    D,
}

impl Role {
    pub fn letter(self) -> char {
        match self {
            Role::A => 'A',
            Role::B => 'B',
            Role::C => 'C',
            Role::D => 'D',
        }
    }
}

/// A role-labeled qubit such as `A0` or `D2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitRef {
    pub role: Role,
    pub index: u32,
}

impl QubitRef {
    pub const fn new(role: Role, index: u32) -> Self {
        QubitRef { role, index }
    }
    pub const fn a(index: u32) -> Self {
        QubitRef::new(Role::A, index)
    }
    pub const fn b(index: u32) -> Self {
        QubitRef::new(Role::B, index)
    }
    pub const fn c(index: u32) -> Self {
        QubitRef::new(Role::C, index)
    }
    pub const fn d(index: u32) -> Self {
        QubitRef::new(Role::D, index)
    }
}

impl fmt::Display for QubitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.role.letter(), self.index)
    }
}

impl FromStr for QubitRef {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let role = match chars.next() {
            Some('A') => Role::A,
            Some('B') => Role::B,
            Some('C') => Role::C,
            Some('D') => Role::D,
            _ => return Err(CircuitError::BadLabel(s.to_string())),
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CircuitError::BadLabel(s.to_string()));
        }
        let index = digits
            .parse()
            .map_err(|_| CircuitError::BadLabel(s.to_string()))?;
        Ok(QubitRef { role, index })
    }
}

impl Serialize for QubitRef {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QubitRef {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A C²-NOT gate on flat qubit indices: `target ^= ctrl1 & ctrl2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Toffoli {
    pub ctrl1: usize,
    pub ctrl2: usize,
    pub target: usize,
}

impl Toffoli {
    pub const fn new(ctrl1: usize, ctrl2: usize, target: usize) -> Self {
        Toffoli {
            ctrl1,
            ctrl2,
            target,
        }
    }

    pub fn support(&self) -> [usize; 3] {
        [self.ctrl1, self.ctrl2, self.target]
    }

    fn check_distinct(&self) -> Result<(), CircuitError> {
        let dup = if self.ctrl1 == self.ctrl2 || self.ctrl1 == self.target {
            Some(self.ctrl1)
        } else if self.ctrl2 == self.target {
            Some(self.ctrl2)
        } else {
            None
        };
        match dup {
            Some(qubit) => Err(CircuitError::DuplicateQubit { gate: *self, qubit }),
            None => Ok(()),
        }
    }

    /// Applies the gate to a bit assignment indexed by flat qubit.
    pub fn apply(&self, bits: &mut [bool]) {
        if bits[self.ctrl1] && bits[self.ctrl2] {
            bits[self.target] = !bits[self.target];
        }
    }

    /// Applies the gate to a little-endian basis word.
    #[inline]
    pub fn apply_word(&self, word: u64) -> u64 {
        let ctrl = (1u64 << self.ctrl1) | (1u64 << self.ctrl2);
        if word & ctrl == ctrl {
            word ^ (1u64 << self.target)
        } else {
            word
        }
    }
}

impl fmt::Display for Toffoli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{}->{})", self.ctrl1, self.ctrl2, self.target)
    }
}

/// One multi-qubit gate: Toffolis with pairwise-disjoint supports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MqgLayer {
    gates: Vec<Toffoli>,
}

impl MqgLayer {
    /// Validates gate shape and support disjointness against a qubit count.
    pub fn new(gates: Vec<Toffoli>, num_qubits: usize) -> Result<Self, CircuitError> {
        if gates.is_empty() {
            return Err(CircuitError::EmptyLayer);
        }
        let mut used = vec![false; num_qubits];
        for gate in &gates {
            for q in gate.support() {
                if q >= num_qubits {
                    return Err(CircuitError::IndexOutOfRange {
                        index: q,
                        num_qubits,
                    });
                }
            }
            gate.check_distinct()?;
            for q in gate.support() {
                if std::mem::replace(&mut used[q], true) {
                    return Err(CircuitError::OverlappingSupport { qubit: q });
                }
            }
        }
        Ok(MqgLayer { gates })
    }

    pub fn gates(&self) -> &[Toffoli] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn apply(&self, bits: &mut [bool]) {
        for g in &self.gates {
            g.apply(bits);
        }
    }

    #[inline]
    pub fn apply_word(&self, word: u64) -> u64 {
        self.gates.iter().fold(word, |w, g| g.apply_word(w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub qubit_count: usize,
    pub mqg_count: usize,
    pub toffoli_count: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    roles: Vec<QubitRef>,
    index_of: HashMap<QubitRef, usize>,
    layers: Vec<MqgLayer>,
}

impl Circuit {
    /// Builds an empty circuit; `roles[i]` labels flat qubit `i`.
    pub fn new(roles: Vec<QubitRef>) -> Result<Self, CircuitError> {
        let mut index_of = HashMap::with_capacity(roles.len());
        for (i, r) in roles.iter().enumerate() {
            if let Some(prev) = index_of.insert(*r, i) {
                return Err(CircuitError::NotBijective {
                    num_qubits: roles.len(),
                    reason: format!("label {r} assigned to both {prev} and {i}"),
                });
            }
        }
        Ok(Circuit {
            roles,
            index_of,
            layers: Vec::new(),
        })
    }

    /// Builds an empty circuit from a sparse `(flat index, label)` list,
    /// checking that every index in `0..num_qubits` appears exactly once.
    pub fn from_role_map<I>(num_qubits: usize, entries: I) -> Result<Self, CircuitError>
    where
        I: IntoIterator<Item = (usize, QubitRef)>,
    {
        let mut slots: Vec<Option<QubitRef>> = vec![None; num_qubits];
        for (i, r) in entries {
            if i >= num_qubits {
                return Err(CircuitError::NotBijective {
                    num_qubits,
                    reason: format!("index {i} out of range"),
                });
            }
            if slots[i].replace(r).is_some() {
                return Err(CircuitError::NotBijective {
                    num_qubits,
                    reason: format!("index {i} assigned twice"),
                });
            }
        }
        let roles = slots
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| CircuitError::NotBijective {
                    num_qubits,
                    reason: format!("index {i} has no label"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Circuit::new(roles)
    }

    pub fn num_qubits(&self) -> usize {
        self.roles.len()
    }

    pub fn roles(&self) -> &[QubitRef] {
        &self.roles
    }

    pub fn role(&self, index: usize) -> Option<QubitRef> {
        self.roles.get(index).copied()
    }

    pub fn index_of(&self, q: QubitRef) -> Option<usize> {
        self.index_of.get(&q).copied()
    }

    pub fn layers(&self) -> &[MqgLayer] {
        &self.layers
    }

    /// Resolves a gate written in role labels to flat indices.
    pub fn toffoli(
        &self,
        ctrl1: QubitRef,
        ctrl2: QubitRef,
        target: QubitRef,
    ) -> Result<Toffoli, CircuitError> {
        let look = |q| self.index_of(q).ok_or(CircuitError::UnknownQubit(q));
        Ok(Toffoli::new(look(ctrl1)?, look(ctrl2)?, look(target)?))
    }

    pub fn push_layer(&mut self, gates: Vec<Toffoli>) -> Result<(), CircuitError> {
        let layer = MqgLayer::new(gates, self.num_qubits())?;
        self.layers.push(layer);
        Ok(())
    }

    /// Builder-style variant of [`Circuit::push_layer`].
    pub fn with_layer(mut self, gates: Vec<Toffoli>) -> Result<Self, CircuitError> {
        self.push_layer(gates)?;
        Ok(self)
    }

    /// Returns a copy with layer `index` removed. Used for mutation tests.
    pub fn without_layer(&self, index: usize) -> Circuit {
        let mut c = self.clone();
        c.layers.remove(index);
        c
    }

    pub fn metrics(&self) -> Metrics {
        Metrics {
            qubit_count: self.num_qubits(),
            mqg_count: self.layers.len(),
            toffoli_count: self.layers.iter().map(MqgLayer::len).sum(),
            depth: self.layers.len(),
        }
    }

    pub fn gates(&self) -> impl Iterator<Item = &Toffoli> {
        self.layers.iter().flat_map(|l| l.gates.iter())
    }
}

/// Splits a basis word into a bit vector of the given width.
pub fn word_to_bits(word: u64, width: usize) -> Vec<bool> {
    (0..width).map(|i| (word >> i) & 1 == 1).collect()
}

/// Packs bits (index 0 = least significant) into a basis word.
pub fn bits_to_word(bits: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0, |w, (i, &b)| w | (u64::from(b) << i))
}

/// Formats bits in flat-index order, lowest index first.
pub fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bit_string(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six() -> Circuit {
        Circuit::new(vec![
            QubitRef::a(0),
            QubitRef::c(1),
            QubitRef::d(1),
            QubitRef::a(1),
            QubitRef::c(2),
            QubitRef::d(2),
            QubitRef::b(1),
        ])
        .unwrap()
    }

    #[test]
    fn empty_construction() {
        let c = Circuit::new(vec![QubitRef::a(0)]).unwrap();
        assert_eq!(c.num_qubits(), 1);
        assert!(c.layers().is_empty());
        assert_eq!(
            c.metrics(),
            Metrics {
                qubit_count: 1,
                mqg_count: 0,
                toffoli_count: 0,
                depth: 0
            }
        );
    }

    #[test]
    fn role_map_missing_index_rejected() {
        let entries = (0..9)
            .filter(|&i| i != 4)
            .map(|i| (i, QubitRef::b(i as u32)));
        assert!(matches!(
            Circuit::from_role_map(9, entries),
            Err(CircuitError::NotBijective { .. })
        ));
    }

    #[test]
    fn duplicate_label_rejected() {
        assert!(Circuit::new(vec![QubitRef::a(0), QubitRef::a(0)]).is_err());
    }

    #[test]
    fn push_layer_disjoint_accepted() {
        let mut c = six();
        let g1 = c
            .toffoli(QubitRef::a(0), QubitRef::c(1), QubitRef::d(1))
            .unwrap();
        let g2 = c
            .toffoli(QubitRef::a(1), QubitRef::c(2), QubitRef::d(2))
            .unwrap();
        c.push_layer(vec![g1, g2]).unwrap();
        assert_eq!(c.metrics().toffoli_count, 2);
    }

    #[test]
    fn push_layer_overlap_rejected() {
        let mut c = six();
        let g1 = c
            .toffoli(QubitRef::a(0), QubitRef::c(1), QubitRef::d(1))
            .unwrap();
        let g2 = c
            .toffoli(QubitRef::c(1), QubitRef::b(1), QubitRef::a(1))
            .unwrap();
        assert_eq!(
            c.push_layer(vec![g1, g2]),
            Err(CircuitError::OverlappingSupport { qubit: 1 })
        );
    }

    #[test]
    fn push_layer_duplicate_ref_rejected() {
        let mut c = six();
        let g = c
            .toffoli(QubitRef::a(0), QubitRef::a(0), QubitRef::d(1))
            .unwrap();
        assert!(matches!(
            c.push_layer(vec![g]),
            Err(CircuitError::DuplicateQubit { qubit: 0, .. })
        ));
        assert_eq!(c.push_layer(vec![]), Err(CircuitError::EmptyLayer));
    }

    #[test]
    fn toffoli_truth() {
        let g = Toffoli::new(0, 1, 2);
        let mut bits = vec![true, true, false];
        g.apply(&mut bits);
        assert_eq!(bits, vec![true, true, true]);
        let mut bits = vec![true, false, true];
        g.apply(&mut bits);
        assert_eq!(bits, vec![true, false, true]);
        for w in 0..8u64 {
            assert_eq!(g.apply_word(g.apply_word(w)), w);
            assert_eq!(
                bits_to_word(&{
                    let mut b = word_to_bits(w, 3);
                    g.apply(&mut b);
                    b
                }),
                g.apply_word(w)
            );
        }
    }

    #[test]
    fn labels_round_trip() {
        for s in ["A0", "B12", "C3", "D2"] {
            assert_eq!(s.parse::<QubitRef>().unwrap().to_string(), s);
        }
        for s in ["", "A", "E1", "a1", "A-1", "A1x"] {
            assert!(s.parse::<QubitRef>().is_err(), "{s}");
        }
    }
}
