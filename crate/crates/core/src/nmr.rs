//! Triangular spin lattice with Ising ZZ couplings and the π-pulse
//! refocusing sequences that isolate one coupling class.
//!
//! Each row `l` holds spins `A_l, B_l, C_l, D_l`. The couplings are
//!
//! ```text
//! a: A_l–C_l   b: C_l–D_l   c: D_l–A_l        (solid triangle)
//! d: D_l–B_l   e: B_l–A_(l+1)   f: A_(l+1)–D_l  (dotted triangle)
//! ```
//!
//! Conventions: evolution is `exp(-iHt)` with ħ = 1, a qubit in basis bit 0
//! has `Z = +1`, and a π pulse on one spin is `exp(-iπX/2) = -iX`. All
//! Hamiltonian terms are diagonal, so every evolution here is exact.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Role;
use crate::state::StateVector;

/// Largest row count the state-vector routines accept (20 spins).
pub const MAX_STATE_ROWS: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NmrError {
    #[error("lattice needs at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("coupling {0} is not finite")]
    NonFiniteCoupling(Coupling),
    #[error("sequence kind must be 1..=6, got {0}")]
    BadKind(u8),
    #[error("state has {got} qubits, lattice has {expected} spins")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{rows} rows exceed the state-vector limit of {MAX_STATE_ROWS}")]
    TooManyRows { rows: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    #[default]
    Periodic,
}

/// The six coupling classes of the lattice Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Coupling {
    pub const ALL: [Coupling; 6] = [
        Coupling::A,
        Coupling::B,
        Coupling::C,
        Coupling::D,
        Coupling::E,
        Coupling::F,
    ];

    /// Solid-triangle couplings drive the first MQG type, dotted the second.
    pub fn is_solid(self) -> bool {
        matches!(self, Coupling::A | Coupling::B | Coupling::C)
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Coupling::A => "a",
            Coupling::B => "b",
            Coupling::C => "c",
            Coupling::D => "d",
            Coupling::E => "e",
            Coupling::F => "f",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl Couplings {
    pub fn uniform(j: f64) -> Self {
        Couplings {
            a: j,
            b: j,
            c: j,
            d: j,
            e: j,
            f: j,
        }
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Couplings {
            a: v[0],
            b: v[1],
            c: v[2],
            d: v[3],
            e: v[4],
            f: v[5],
        }
    }

    pub fn get(&self, c: Coupling) -> f64 {
        match c {
            Coupling::A => self.a,
            Coupling::B => self.b,
            Coupling::C => self.c,
            Coupling::D => self.d,
            Coupling::E => self.e,
            Coupling::F => self.f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub rows: usize,
    pub couplings: Couplings,
    pub boundary: Boundary,
}

impl LatticeConfig {
    pub fn new(rows: usize, couplings: Couplings, boundary: Boundary) -> Result<Self, NmrError> {
        if rows < 2 {
            return Err(NmrError::TooFewRows(rows));
        }
        for c in Coupling::ALL {
            if !couplings.get(c).is_finite() {
                return Err(NmrError::NonFiniteCoupling(c));
            }
        }
        Ok(LatticeConfig {
            rows,
            couplings,
            boundary,
        })
    }

    pub fn num_spins(&self) -> usize {
        4 * self.rows
    }

    /// Every spin in flat order.
    pub fn spins(&self) -> impl Iterator<Item = SpinRef> {
        (1..=self.rows).flat_map(|row| {
            [Role::A, Role::B, Role::C, Role::D]
                .into_iter()
                .map(move |role| SpinRef { role, row })
        })
    }
}

/// A spin of the lattice: role and 1-based row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinRef {
    pub role: Role,
    pub row: usize,
}

impl SpinRef {
    pub fn new(role: Role, row: usize) -> Self {
        SpinRef { role, row }
    }

    /// Flat index `4(row-1) + {A:0, B:1, C:2, D:3}`.
    pub fn flat(&self) -> usize {
        let off = match self.role {
            Role::A => 0,
            Role::B => 1,
            Role::C => 2,
            Role::D => 3,
        };
        4 * (self.row - 1) + off
    }

    /// Resonance class of this spin; A and D split by row parity.
    pub fn class(&self) -> PulseClass {
        let odd = self.row % 2 == 1;
        match self.role {
            Role::A if odd => PulseClass::A,
            Role::A => PulseClass::APrime,
            Role::B => PulseClass::B,
            Role::C => PulseClass::C,
            Role::D if odd => PulseClass::D,
            Role::D => PulseClass::DPrime,
        }
    }
}

impl fmt::Display for SpinRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.role.letter(), self.row)
    }
}

/// One `Z_i Z_j` term of the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZZTerm {
    pub i: SpinRef,
    pub j: SpinRef,
    pub coupling: Coupling,
    /// Row `l` of the sum the term belongs to.
    pub row: usize,
    pub coeff: f64,
}

impl ZZTerm {
    fn mask(&self) -> u64 {
        (1u64 << self.i.flat()) | (1u64 << self.j.flat())
    }
}

/// All ZZ terms, six per row; with an open boundary the `e` and `f` terms of
/// the last row are dropped.
pub fn build_hamiltonian(cfg: &LatticeConfig) -> Vec<ZZTerm> {
    let big_l = cfg.rows;
    let mut terms = Vec::with_capacity(6 * big_l);
    for l in 1..=big_l {
        let s = |role| SpinRef::new(role, l);
        let next = match (l == big_l, cfg.boundary) {
            (false, _) => Some(SpinRef::new(Role::A, l + 1)),
            (true, Boundary::Periodic) => Some(SpinRef::new(Role::A, 1)),
            (true, Boundary::Open) => None,
        };
        let mut push = |i, j, coupling| {
            terms.push(ZZTerm {
                i,
                j,
                coupling,
                row: l,
                coeff: cfg.couplings.get(coupling),
            })
        };
        push(s(Role::A), s(Role::C), Coupling::A);
        push(s(Role::C), s(Role::D), Coupling::B);
        push(s(Role::D), s(Role::A), Coupling::C);
        push(s(Role::D), s(Role::B), Coupling::D);
        if let Some(a_next) = next {
            push(s(Role::B), a_next, Coupling::E);
            push(a_next, s(Role::D), Coupling::F);
        }
    }
    terms
}

/// Diagonal energies `Σ J z_i z_j` for every basis state.
pub fn diagonal_energies(terms: &[ZZTerm], num_spins: usize) -> Vec<f64> {
    let masks: Vec<(u64, f64)> = terms.iter().map(|t| (t.mask(), t.coeff)).collect();
    (0..1u64 << num_spins)
        .map(|x| {
            masks
                .iter()
                .map(|&(m, j)| if (x & m).count_ones() % 2 == 0 { j } else { -j })
                .sum()
        })
        .collect()
}

/// Multiplies each amplitude by `exp(-i t E(x))`.
fn evolve_diagonal(state: &mut StateVector, energies: &[f64], t: f64) {
    for (amp, &e) in state.amplitudes_mut().iter_mut().zip(energies) {
        *amp *= Complex64::from_polar(1.0, -e * t);
    }
}

/// The six resonance classes, each addressed by one pulse frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PulseClass {
    /// `A` spins in odd rows.
    #[serde(rename = "A")]
    A,
    /// `A` spins in even rows.
    #[serde(rename = "A'")]
    APrime,
    #[serde(rename = "B")]
    B,
    #[serde(rename = "C")]
    C,
    #[serde(rename = "D")]
    D,
    #[serde(rename = "D'")]
    DPrime,
}

impl fmt::Display for PulseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PulseClass::A => "A",
            PulseClass::APrime => "A'",
            PulseClass::B => "B",
            PulseClass::C => "C",
            PulseClass::D => "D",
            PulseClass::DPrime => "D'",
        };
        f.write_str(s)
    }
}

/// Spins flipped by a pulse and the phase `(-i)^count` it contributes.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseOperator {
    pub flipped: Vec<SpinRef>,
    pub mask: u64,
    pub phase: Complex64,
}

fn minus_i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Simultaneous π rotation about x of every spin in `class`.
pub fn pulse_operator(class: PulseClass, cfg: &LatticeConfig) -> PulseOperator {
    group_operator(&PulseGroup::from([class]), cfg)
}

fn group_operator(group: &PulseGroup, cfg: &LatticeConfig) -> PulseOperator {
    let flipped: Vec<SpinRef> = cfg
        .spins()
        .filter(|s| group.classes.contains(&s.class()))
        .collect();
    PulseOperator {
        mask: flipped.iter().fold(0, |m, s| m | (1 << s.flat())),
        phase: minus_i_pow(flipped.len()),
        flipped,
    }
}

/// A set of classes pulsed at the same instant.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PulseGroup {
    pub classes: BTreeSet<PulseClass>,
}

impl<const N: usize> From<[PulseClass; N]> for PulseGroup {
    fn from(v: [PulseClass; N]) -> Self {
        PulseGroup {
            classes: v.into_iter().collect(),
        }
    }
}

impl PulseGroup {
    fn symmetric_difference(&self, other: &PulseGroup) -> PulseGroup {
        PulseGroup {
            classes: self
                .classes
                .symmetric_difference(&other.classes)
                .copied()
                .collect(),
        }
    }
}

impl fmt::Display for PulseGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `U = E·P1·E·P2·E·P3·E·P4` with `E = exp(-iHt)`, written in operator order:
/// `P4` acts first and the leftmost `E` last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefocusSequence {
    pub kind: Option<u8>,
    pub t: f64,
    pub groups: [PulseGroup; 4],
}

impl RefocusSequence {
    pub fn new(t: f64, p1: PulseGroup, p2: PulseGroup, p3: PulseGroup, p4: PulseGroup) -> Self {
        RefocusSequence {
            kind: None,
            t,
            groups: [p1, p2, p3, p4],
        }
    }

    /// Copy with one class removed from group `index` (0-based, operator order).
    pub fn without_pulse(&self, index: usize, class: PulseClass) -> Self {
        let mut s = self.clone();
        s.groups[index].classes.remove(&class);
        s.kind = None;
        s
    }

    /// Flip set seen by segment `i` (0-based, operator order): the symmetric
    /// difference of the pulse groups to its left.
    pub fn segment_flips(&self) -> [PulseGroup; 4] {
        let mut out: [PulseGroup; 4] = Default::default();
        for i in 1..4 {
            out[i] = out[i - 1].symmetric_difference(&self.groups[i - 1]);
        }
        out
    }

    /// Classes flipped an odd number of times over the whole sequence.
    pub fn residual_flips(&self) -> PulseGroup {
        self.groups
            .iter()
            .fold(PulseGroup::default(), |acc, g| acc.symmetric_difference(g))
    }
}

/// Coupling each canonical sequence isolates.
pub fn target_coupling(kind: u8) -> Result<Coupling, NmrError> {
    match kind {
        1..=6 => Ok(Coupling::ALL[kind as usize - 1]),
        _ => Err(NmrError::BadKind(kind)),
    }
}

fn two_group_sequence(kind: u8, t: f64, first: PulseGroup, second: PulseGroup) -> RefocusSequence {
    RefocusSequence {
        kind: Some(kind),
        t,
        groups: [first.clone(), second.clone(), first, second],
    }
}

/// The pulse pattern of each identity exactly as it is usually quoted. Kind 6
/// in this form pulses `A` and `D` of the same row parity and therefore
/// isolates coupling `c`, not `f`; see [`canonical_sequence`].
pub fn printed_sequence(kind: u8, t: f64) -> Result<RefocusSequence, NmrError> {
    use PulseClass::*;
    let (p1, p2): (PulseGroup, PulseGroup) = match kind {
        1 => ([D, DPrime].into(), [D, DPrime, B].into()),
        2 => ([A, APrime].into(), [A, APrime, B].into()),
        3 => ([B, C].into(), [B, C, APrime, DPrime].into()),
        4 => ([A, APrime].into(), [A, APrime, C].into()),
        5 => ([D, DPrime].into(), [D, DPrime, C].into()),
        6 => ([B, C].into(), [B, C, A, D].into()),
        _ => return Err(NmrError::BadKind(kind)),
    };
    Ok(two_group_sequence(kind, t, p1, p2))
}

/// Refocusing sequence `kind` (1..=6) isolating coupling a..f respectively.
///
/// Kind 6 pulses `A` (odd rows) with `D'` (even rows) so that `A_(l+1)` and
/// `D_l` are always flipped together.
pub fn canonical_sequence(kind: u8, t: f64) -> Result<RefocusSequence, NmrError> {
    use PulseClass::*;
    if kind == 6 {
        return Ok(two_group_sequence(
            6,
            t,
            [B, C].into(),
            [B, C, A, DPrime].into(),
        ));
    }
    printed_sequence(kind, t)
}

/// Per-term sign pattern and accumulated coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignRow {
    pub coupling: Coupling,
    pub row: usize,
    pub i: SpinRef,
    pub j: SpinRef,
    /// Sign of the term in each segment, operator order.
    pub signs: [i8; 4],
    /// `t · Σ signs · J`.
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveEvolution {
    pub segment_flips: [PulseGroup; 4],
    pub terms: Vec<SignRow>,
    /// Product of all pulse phases.
    pub global_phase: Complex64,
    /// Spins left flipped at the end (empty for a proper refocusing sequence).
    pub residual_flips: Vec<SpinRef>,
}

impl EffectiveEvolution {
    /// Coupling classes whose signs do not cancel in at least one row.
    pub fn surviving_couplings(&self) -> BTreeSet<Coupling> {
        self.terms
            .iter()
            .filter(|r| r.signs.iter().map(|&s| s as i32).sum::<i32>() != 0)
            .map(|r| r.coupling)
            .collect()
    }

    /// True iff exactly the terms of `target` survive, each with weight 4,
    /// and no spin is left flipped.
    pub fn isolates(&self, target: Coupling) -> bool {
        self.residual_flips.is_empty()
            && self.terms.iter().all(|r| {
                let sum: i32 = r.signs.iter().map(|&s| s as i32).sum();
                if r.coupling == target {
                    sum == 4
                } else {
                    sum == 0
                }
            })
    }
}

/// Symbolic sign bookkeeping: conjugating a ZZ term by X on its spins
/// multiplies it by `(-1)^(#flipped endpoints)`.
pub fn effective_evolution(seq: &RefocusSequence, cfg: &LatticeConfig) -> EffectiveEvolution {
    let flips = seq.segment_flips();
    let masks: Vec<u64> = flips.iter().map(|g| group_operator(g, cfg).mask).collect();
    let terms = build_hamiltonian(cfg)
        .into_iter()
        .map(|term| {
            let mut signs = [0i8; 4];
            for (s, &m) in signs.iter_mut().zip(&masks) {
                *s = if (m & term.mask()).count_ones() % 2 == 0 {
                    1
                } else {
                    -1
                };
            }
            let sum: f64 = signs.iter().map(|&s| f64::from(s)).sum();
            SignRow {
                coupling: term.coupling,
                row: term.row,
                i: term.i,
                j: term.j,
                signs,
                coeff: seq.t * sum * term.coeff,
            }
        })
        .collect();
    let global_phase = seq
        .groups
        .iter()
        .map(|g| group_operator(g, cfg).phase)
        .product();
    EffectiveEvolution {
        segment_flips: flips,
        terms,
        global_phase,
        residual_flips: group_operator(&seq.residual_flips(), cfg).flipped,
    }
}

fn check_state(cfg: &LatticeConfig, state: &StateVector) -> Result<(), NmrError> {
    if cfg.rows > MAX_STATE_ROWS {
        return Err(NmrError::TooManyRows { rows: cfg.rows });
    }
    if state.num_qubits() != cfg.num_spins() {
        return Err(NmrError::DimensionMismatch {
            expected: cfg.num_spins(),
            got: state.num_qubits(),
        });
    }
    Ok(())
}

fn apply_group(state: &StateVector, op: &PulseOperator) -> StateVector {
    let mut s = state.permuted(|x| x ^ op.mask as usize);
    for a in s.amplitudes_mut() {
        *a *= op.phase;
    }
    s
}

fn apply_with_energies(
    seq: &RefocusSequence,
    cfg: &LatticeConfig,
    energies: &[f64],
    state: &StateVector,
) -> StateVector {
    let mut s = state.clone();
    for g in seq.groups.iter().rev() {
        s = apply_group(&s, &group_operator(g, cfg));
        evolve_diagonal(&mut s, energies, seq.t);
    }
    s
}

/// Exact application of the sequence to a state, pulse by pulse.
pub fn apply_sequence(
    seq: &RefocusSequence,
    cfg: &LatticeConfig,
    state: &StateVector,
) -> Result<StateVector, NmrError> {
    check_state(cfg, state)?;
    let energies = diagonal_energies(&build_hamiltonian(cfg), cfg.num_spins());
    Ok(apply_with_energies(seq, cfg, &energies, state))
}

/// `exp(-i 4t Σ_l J Z Z)` restricted to one coupling class.
pub fn apply_target(
    target: Coupling,
    cfg: &LatticeConfig,
    t: f64,
    state: &StateVector,
) -> Result<StateVector, NmrError> {
    check_state(cfg, state)?;
    let terms: Vec<ZZTerm> = build_hamiltonian(cfg)
        .into_iter()
        .filter(|x| x.coupling == target)
        .collect();
    let energies = diagonal_energies(&terms, cfg.num_spins());
    let mut s = state.clone();
    evolve_diagonal(&mut s, &energies, 4.0 * t);
    Ok(s)
}

/// `phase · exp(-i Σ coeff Z Z) · X_residual` from the symbolic model.
fn apply_effective(
    eff: &EffectiveEvolution,
    cfg: &LatticeConfig,
    state: &StateVector,
) -> StateVector {
    let residual = eff
        .residual_flips
        .iter()
        .fold(0usize, |m, s| m | (1 << s.flat()));
    let terms: Vec<ZZTerm> = eff
        .terms
        .iter()
        .map(|r| ZZTerm {
            i: r.i,
            j: r.j,
            coupling: r.coupling,
            row: r.row,
            coeff: r.coeff,
        })
        .collect();
    let energies = diagonal_energies(&terms, cfg.num_spins());
    let mut s = state.permuted(|x| x ^ residual);
    evolve_diagonal(&mut s, &energies, 1.0);
    for a in s.amplitudes_mut() {
        *a *= eff.global_phase;
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 20,
            tol: 1e-10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Phase {
    fn from(c: Complex64) -> Self {
        Phase { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub kind: Option<u8>,
    pub target: Coupling,
    pub rows: usize,
    pub boundary: Boundary,
    pub couplings: Couplings,
    pub t: f64,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub min_fidelity: f64,
    /// `⟨target|actual⟩ / |⟨target|actual⟩|` on the first trial.
    pub global_phase: Phase,
    /// Phase predicted by the pulse bookkeeping.
    pub predicted_phase: Phase,
    pub segment_flips: Vec<String>,
    pub sign_table: Vec<SignRow>,
    /// Whether the sign bookkeeping predicts exactly the target coupling.
    pub symbolic_isolates_target: bool,
    /// Largest amplitude gap between the pulse-by-pulse result and the
    /// symbolic effective evolution (phase included), over all trials.
    pub symbolic_max_error: f64,
    pub pass: bool,
}

/// Checks `seq` against `exp(-i 4t Σ J_target Z Z)` on random states.
///
/// Trial `i` draws its state from a ChaCha stream `(seed, i)`, so results do
/// not depend on how trials are scheduled.
pub fn verify_sequence(
    seq: &RefocusSequence,
    target: Coupling,
    cfg: &LatticeConfig,
    opts: VerifyOptions,
) -> Result<VerifyReport, NmrError> {
    if cfg.rows > MAX_STATE_ROWS {
        return Err(NmrError::TooManyRows { rows: cfg.rows });
    }
    let energies = diagonal_energies(&build_hamiltonian(cfg), cfg.num_spins());
    let eff = effective_evolution(seq, cfg);

    let per_trial: Vec<(f64, Complex64, f64)> = (0..opts.trials.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(i as u64);
            let psi = StateVector::random(cfg.num_spins(), &mut rng);
            let actual = apply_with_energies(seq, cfg, &energies, &psi);
            let want = apply_target(target, cfg, seq.t, &psi).expect("checked above");
            let overlap = want.inner(&actual);
            let sym_err = actual.max_abs_diff(&apply_effective(&eff, cfg, &psi));
            (overlap.norm(), overlap, sym_err)
        })
        .collect();

    let min_fidelity = per_trial.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let first = per_trial[0].1;
    let global_phase = if first.norm() > 0.0 {
        first / first.norm()
    } else {
        first
    };
    let symbolic_max_error = per_trial.iter().map(|p| p.2).fold(0.0, f64::max);

    Ok(VerifyReport {
        kind: seq.kind,
        target,
        rows: cfg.rows,
        boundary: cfg.boundary,
        couplings: cfg.couplings,
        t: seq.t,
        trials: opts.trials.max(1),
        seed: opts.seed,
        tol: opts.tol,
        min_fidelity,
        global_phase: global_phase.into(),
        predicted_phase: eff.global_phase.into(),
        segment_flips: eff.segment_flips.iter().map(|g| g.to_string()).collect(),
        symbolic_isolates_target: eff.isolates(target),
        sign_table: eff.terms,
        symbolic_max_error,
        pass: min_fidelity >= 1.0 - opts.tol,
    })
}

/// Verifies canonical sequence `kind` at time `t`.
pub fn verify_identity(
    kind: u8,
    cfg: &LatticeConfig,
    t: f64,
    opts: VerifyOptions,
) -> Result<VerifyReport, NmrError> {
    let seq = canonical_sequence(kind, t)?;
    verify_sequence(&seq, target_coupling(kind)?, cfg, opts)
}
