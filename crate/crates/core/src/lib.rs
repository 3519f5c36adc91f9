//! Layered multi-qubit-gate (MQG) construction of large Toffoli gates.
//!
//! The crate builds a network of `2^(n+2)` layers, each layer `2^n`
//! simultaneous C²-NOT gates, that acts as a `C^(2^(n+1)+1)`-NOT with dirty
//! ancillas, and checks it several independent ways:
//!
//! * [`sim`] runs circuits on basis states, exhaustively, symbolically over
//!   GF(2) and on dense state vectors;
//! * [`oracle`] holds the closed-form output law and the block recurrences as
//!   exact [`anf::Anf`] polynomials;
//! * [`nmr`] models the triangular ZZ spin lattice and the π-pulse
//!   refocusing sequences that isolate each coupling needed by a layer.

pub mod anf;
pub mod circuit;
pub mod format;
pub mod nmr;
pub mod oracle;
pub mod sim;
pub mod state;
pub mod synth;

pub use anf::{Anf, Var};
pub use circuit::{Circuit, CircuitError, Metrics, MqgLayer, QubitRef, Role, Toffoli};
pub use format::{parse, serialize, ParseError};
pub use nmr::{
    canonical_sequence, effective_evolution, verify_identity, Boundary, Coupling, Couplings,
    LatticeConfig, NmrError, PulseClass, RefocusSequence, VerifyOptions, VerifyReport,
};
pub use oracle::{closed_form_outputs, verify_recurrences, BlockRecurrence, RecurrenceReport};
pub use sim::{EquivMode, EquivReport, SimError};
pub use state::StateVector;
pub use synth::{
    synth_baseline_dirty, synth_mqg_network, synth_padded, table1_compare, ComparisonRow,
    PaddedSpec, SynthError, SynthesisSpec,
};
