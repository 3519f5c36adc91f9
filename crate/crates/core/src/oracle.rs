//! Independent GF(2) oracles for the MQG network.
//!
//! Nothing here looks at a [`Circuit`](crate::circuit::Circuit): the closed
//! form and the block recurrences are written directly in terms of the input
//! variables, so they can be compared against any simulator output.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anf::{Anf, Var, MAX_VARS};
use crate::synth::{MqgLayout, SynthesisSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("block index (l={l}, k={k}) outside 0..={rows}")]
    OutOfRange { l: usize, k: usize, rows: usize },
    #[error("Z_{l}(0) is not defined for l >= 1")]
    UndefinedZ { l: usize },
    #[error("{qubits} wires exceed the {MAX_VARS}-variable ANF engine")]
    TooWide { qubits: usize },
}

/// Input variable of wire `flat`.
fn v(flat: usize) -> Var {
    Var::new(flat)
}

fn var_anf(flat: usize) -> Anf {
    Anf::var(v(flat))
}

/// Human-readable variable names (`A0`, `B1`, ...) for the MQG layout.
pub fn var_namer(layout: MqgLayout) -> impl Fn(Var) -> String {
    let roles = layout.roles();
    move |var| roles[var.index()].to_string()
}

/// `∧_(l=1..m) B_l C_l ∧ A_0`.
fn full_product(layout: MqgLayout) -> Anf {
    Anf::product(layout.controls().into_iter().map(v))
}

/// Output ANF of every wire, indexed by flat index: the target picks up the
/// product of all controls, every other wire is unchanged.
pub fn closed_form_outputs(spec: SynthesisSpec) -> Result<Vec<Anf>, OracleError> {
    let layout = spec.layout();
    if layout.num_qubits() > MAX_VARS {
        return Err(OracleError::TooWide {
            qubits: layout.num_qubits(),
        });
    }
    let target = layout.target();
    Ok((0..layout.num_qubits())
        .map(|w| {
            if w == target {
                &full_product(layout) ^ &var_anf(w)
            } else {
                var_anf(w)
            }
        })
        .collect())
}

/// Reference permutation on basis words for a `C^k`-NOT: flip `target` iff
/// every control bit is set.
pub fn mcx_reference(controls: &[usize], target: usize) -> impl Fn(u64) -> u64 + Sync + Send {
    let mask = controls.iter().fold(0u64, |m, &c| m | (1 << c));
    let flip = 1u64 << target;
    move |w| if w & mask == mask { w ^ flip } else { w }
}

/// The closed-form permutation of the `n` network on basis words.
pub fn network_reference(spec: SynthesisSpec) -> impl Fn(u64) -> u64 + Sync + Send {
    let layout = spec.layout();
    mcx_reference(&layout.controls(), layout.target())
}

/// Memoised block recurrences `A_l(k)` and `Z_l(k)`, `0 <= l, k <= 2^n`.
///
/// ```text
/// A_l(k) = B_l C_l Z_(l-1)(k) ⊕ A_l(k-1)
/// Z_l(k) = B_l C_l A_(l-1)(k-1) ⊕ Z_l(k-1)        (k >= 2)
/// A_0(k) = Z_0(k) = A_0,  A_l(0) = A_l,  Z_l(1) = B_l (A_(l-1) C_l ⊕ D_l) ⊕ A_l
/// ```
#[derive(Debug, Clone)]
pub struct BlockRecurrence {
    layout: MqgLayout,
    a: Vec<Vec<Anf>>,
    z: Vec<Vec<Option<Anf>>>,
}

impl BlockRecurrence {
    pub fn new(spec: SynthesisSpec) -> Result<Self, OracleError> {
        let layout = spec.layout();
        if layout.num_qubits() > MAX_VARS {
            return Err(OracleError::TooWide {
                qubits: layout.num_qubits(),
            });
        }
        let m = layout.rows();
        let mut a = vec![vec![Anf::zero(); m + 1]; m + 1];
        let mut z: Vec<Vec<Option<Anf>>> = vec![vec![None; m + 1]; m + 1];
        let bc = |l: usize| Anf::product([v(layout.b(l)), v(layout.c(l))]);

        for k in 0..=m {
            a[0][k] = var_anf(layout.a(0));
            z[0][k] = Some(var_anf(layout.a(0)));
        }
        for (l, row) in a.iter_mut().enumerate().skip(1) {
            row[0] = var_anf(layout.a(l));
        }
        for k in 1..=m {
            for l in 1..=m {
                let zk = if k == 1 {
                    let inner = &(&var_anf(layout.a(l - 1)) & &var_anf(layout.c(l)))
                        ^ &var_anf(layout.d(l));
                    &(&var_anf(layout.b(l)) & &inner) ^ &var_anf(layout.a(l))
                } else {
                    let prev = z[l][k - 1].as_ref().expect("computed at k-1");
                    &(&bc(l) & &a[l - 1][k - 1]) ^ prev
                };
                let zl1 = z[l - 1][k].as_ref().expect("row l-1 computed first");
                a[l][k] = &(&bc(l) & zl1) ^ &a[l][k - 1];
                z[l][k] = Some(zk);
            }
        }
        Ok(BlockRecurrence { layout, a, z })
    }

    pub fn layout(&self) -> MqgLayout {
        self.layout
    }

    fn check(&self, l: usize, k: usize) -> Result<(), OracleError> {
        let rows = self.layout.rows();
        if l > rows || k > rows {
            Err(OracleError::OutOfRange { l, k, rows })
        } else {
            Ok(())
        }
    }

    pub fn a(&self, l: usize, k: usize) -> Result<&Anf, OracleError> {
        self.check(l, k)?;
        Ok(&self.a[l][k])
    }

    pub fn z(&self, l: usize, k: usize) -> Result<&Anf, OracleError> {
        self.check(l, k)?;
        self.z[l][k].as_ref().ok_or(OracleError::UndefinedZ { l })
    }

    /// `∧_(p=lo..=hi) B_(l-p) C_(l-p)`.
    fn bc_chain(&self, l: usize, lo: usize, hi: usize) -> Anf {
        Anf::product((lo..=hi).flat_map(|p| [v(self.layout.b(l - p)), v(self.layout.c(l - p))]))
    }
}

/// A failed identity with both sides rendered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFailure {
    pub identity: String,
    pub l: usize,
    pub k: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceReport {
    pub n: u32,
    pub checked: usize,
    pub failures: Vec<IdentityFailure>,
}

impl RecurrenceReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Checker<'a, F: Fn(Var) -> String> {
    name: F,
    report: &'a mut RecurrenceReport,
}

impl<F: Fn(Var) -> String> Checker<'_, F> {
    fn check(&mut self, identity: &str, l: usize, k: usize, lhs: &Anf, rhs: &Anf) {
        self.report.checked += 1;
        if lhs != rhs {
            self.report.failures.push(IdentityFailure {
                identity: identity.to_string(),
                l,
                k,
                lhs: lhs.render(&self.name),
                rhs: rhs.render(&self.name),
            });
        }
    }
}

/// Checks the inductive closed forms of the block recurrences as exact ANF
/// identities:
///
/// * doubling: `A_l(k) = [∧_(p<2^j) B_(l-p)C_(l-p)] A_(l-2^j)(k-2^(j-1)) ⊕ A_l(k-2^j)`
///   for every `j >= 1` with `l, k >= 2^j`;
/// * target: `A_m(m) = A_0 ∧_l B_l C_l ⊕ A_m`;
/// * restoration: `A_l(m) = A_l` for `l < m`;
/// * `Z_l(m) = B_l D_l ⊕ A_l` for `l < m`, and the target row carries the
///   extra full product;
/// * `B_l D_l = A_l(m) ⊕ Z_l(m)` for every row, which gives `D_l(m) = D_l`.
pub fn verify_recurrences(spec: SynthesisSpec) -> Result<RecurrenceReport, OracleError> {
    let rec = BlockRecurrence::new(spec)?;
    let layout = rec.layout();
    let m = layout.rows();
    let mut report = RecurrenceReport {
        n: spec.n(),
        checked: 0,
        failures: Vec::new(),
    };
    let mut ck = Checker {
        name: var_namer(layout),
        report: &mut report,
    };

    let mut j = 1;
    while (1 << j) <= m {
        let step = 1usize << j;
        for l in step..=m {
            for k in step..=m {
                let rhs = &(&rec.bc_chain(l, 0, step - 1) & rec.a(l - step, k - step / 2)?)
                    ^ rec.a(l, k - step)?;
                ck.check(&format!("doubling j={j}"), l, k, rec.a(l, k)?, &rhs);
            }
        }
        j += 1;
    }

    let product = full_product(layout);
    let target_rhs = &product ^ &var_anf(layout.a(m));
    ck.check("target output", m, m, rec.a(m, m)?, &target_rhs);

    for l in 1..m {
        ck.check("restored a_l", l, m, rec.a(l, m)?, &var_anf(layout.a(l)));
    }

    for l in 1..=m {
        let bd = Anf::product([v(layout.b(l)), v(layout.d(l))]);
        let mut z_rhs = &bd ^ &var_anf(layout.a(l));
        if l == m {
            z_rhs = &z_rhs ^ &product;
        }
        ck.check("Z_l(m)", l, m, rec.z(l, m)?, &z_rhs);
        ck.check(
            "B_l D_l = A_l(m) + Z_l(m)",
            l,
            m,
            &bd,
            &(rec.a(l, m)? ^ rec.z(l, m)?),
        );
    }

    Ok(report)
}
