//! Algebraic normal form over GF(2).
//!
//! An [`Anf`] is an XOR of monomials, each monomial an AND of distinct
//! variables. Monomials are stored as `u128` bitsets (bit `i` = variable `i`)
//! in a strictly increasing vector, which makes the representation canonical:
//! two polynomials are equal as boolean functions iff their `Anf`s are equal.

use std::fmt;
use std::ops::{BitAnd, BitXor};

use thiserror::Error;

/// Number of variables a monomial bitset can hold.
pub const MAX_VARS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnfError {
    #[error("assignment has {len} entries but the polynomial uses variable {var}")]
    MissingVariable { var: usize, len: usize },
}

/// A symbolic input variable, identified by the flat index of its wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u8);

impl Var {
    pub fn new(index: usize) -> Self {
        assert!(
            index < MAX_VARS,
            "variable index {index} exceeds {MAX_VARS}"
        );
        Var(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

type Monomial = u128;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Anf {
    monomials: Vec<Monomial>,
}

impl Anf {
    pub fn zero() -> Self {
        Anf::default()
    }

    pub fn one() -> Self {
        Anf { monomials: vec![0] }
    }

    pub fn var(v: Var) -> Self {
        Anf {
            monomials: vec![1u128 << v.0],
        }
    }

    /// The single monomial `v_1 v_2 ... v_k` (the empty product is 1).
    pub fn product<I: IntoIterator<Item = Var>>(vars: I) -> Self {
        let m = vars.into_iter().fold(0u128, |m, v| m | (1u128 << v.0));
        Anf { monomials: vec![m] }
    }

    /// Builds a polynomial from monomials given as variable lists; repeated
    /// monomials cancel in pairs.
    pub fn from_monomials<I, M>(monomials: I) -> Self
    where
        I: IntoIterator<Item = M>,
        M: IntoIterator<Item = Var>,
    {
        let raw = monomials
            .into_iter()
            .map(|m| m.into_iter().fold(0u128, |acc, v| acc | (1u128 << v.0)))
            .collect();
        Anf::canonical(raw)
    }

    fn canonical(mut raw: Vec<Monomial>) -> Self {
        raw.sort_unstable();
        let mut out: Vec<Monomial> = Vec::with_capacity(raw.len());
        for m in raw {
            if out.last() == Some(&m) {
                out.pop();
            } else {
                out.push(m);
            }
        }
        Anf { monomials: out }
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.monomials == [0]
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.monomials
            .iter()
            .map(|m| m.count_ones())
            .max()
            .unwrap_or(0)
    }

    /// Monomials as sorted variable lists, in canonical order.
    pub fn monomials(&self) -> impl Iterator<Item = Vec<Var>> + '_ {
        self.monomials
            .iter()
            .map(|&m| bits_of(m).map(|i| Var(i as u8)).collect())
    }

    /// Highest variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        let all = self.monomials.iter().fold(0u128, |a, m| a | m);
        (all != 0).then(|| 127 - all.leading_zeros() as usize)
    }

    pub fn xor(&self, other: &Anf) -> Anf {
        let (a, b) = (&self.monomials, &other.monomials);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Anf { monomials: out }
    }

    pub fn and(&self, other: &Anf) -> Anf {
        if self.is_zero() || other.is_zero() {
            return Anf::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut raw = Vec::with_capacity(self.len() * other.len());
        for &p in &self.monomials {
            for &q in &other.monomials {
                raw.push(p | q);
            }
        }
        Anf::canonical(raw)
    }

    /// Evaluates under an assignment indexed by variable.
    pub fn eval(&self, assignment: &[bool]) -> Result<bool, AnfError> {
        if let Some(var) = self.max_var() {
            if var >= assignment.len() {
                return Err(AnfError::MissingVariable {
                    var,
                    len: assignment.len(),
                });
            }
        }
        let word = assignment.iter().enumerate().fold(0u128, |w, (i, &b)| {
            if b && i < MAX_VARS {
                w | (1 << i)
            } else {
                w
            }
        });
        Ok(self.eval_word(word))
    }

    /// Evaluates under a bitset assignment (bit `i` = value of variable `i`).
    #[inline]
    pub fn eval_word(&self, word: u128) -> bool {
        self.monomials.iter().filter(|&&m| m & !word == 0).count() % 2 == 1
    }

    /// Renders with caller-supplied variable names.
    pub fn render<F: Fn(Var) -> String>(&self, name: F) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.monomials
            .iter()
            .map(|&m| {
                if m == 0 {
                    "1".to_string()
                } else {
                    bits_of(m)
                        .map(|i| name(Var(i as u8)))
                        .collect::<Vec<_>>()
                        .join(" ")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn bits_of(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

impl fmt::Display for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|v| format!("x{}", v.index())))
    }
}

impl BitXor for &Anf {
    type Output = Anf;
    fn bitxor(self, rhs: &Anf) -> Anf {
        self.xor(rhs)
    }
}

impl BitAnd for &Anf {
    type Output = Anf;
    fn bitand(self, rhs: &Anf) -> Anf {
        self.and(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(i: usize) -> Anf {
        Anf::var(Var::new(i))
    }

    #[test]
    fn xor_examples() {
        let one = Anf::one();
        assert_eq!(&(&x(1) ^ &one) ^ &x(1), one);
        let p = &(&x(1) & &x(2)) ^ &x(3);
        assert!((&p ^ &p).is_zero());
        assert_eq!(&p ^ &Anf::zero(), p);
    }

    #[test]
    fn and_examples() {
        let lhs = &(&x(1) ^ &x(2)) & &x(1);
        assert_eq!(lhs, &x(1) ^ &(&x(1) & &x(2)));
        let p = &(&x(1) & &x(2)) ^ &x(3);
        assert_eq!(&p & &Anf::one(), p);
        assert!((&p & &Anf::zero()).is_zero());
        assert_eq!(&x(4) & &x(4), x(4));
    }

    #[test]
    fn eval_examples() {
        let p = &(&x(0) & &x(1)) ^ &x(2);
        assert!(p.eval(&[true, true, false]).unwrap());
        assert!(Anf::one().eval(&[]).unwrap());
        assert!(!Anf::zero().eval(&[true]).unwrap());
        assert_eq!(
            p.eval(&[true, true]),
            Err(AnfError::MissingVariable { var: 2, len: 2 })
        );
    }

    #[test]
    fn rendering() {
        let names = ["A0", "B1", "C1", "A2"];
        let p = &Anf::product([Var::new(0), Var::new(1), Var::new(2)]) ^ &x(3);
        assert_eq!(p.render(|v| names[v.index()].to_string()), "A0 B1 C1 + A2");
        assert_eq!(Anf::zero().to_string(), "0");
        assert_eq!((&Anf::one() ^ &x(0)).to_string(), "1 + x0");
    }

    fn arb_anf(vars: usize) -> impl Strategy<Value = Anf> {
        prop::collection::vec(prop::collection::vec(0..vars, 0..4), 0..6)
            .prop_map(|ms| Anf::from_monomials(ms.into_iter().map(|m| m.into_iter().map(Var::new))))
    }

    /// Brute-force truth table over 6 variables.
    fn table(p: &Anf) -> Vec<bool> {
        (0..64u128).map(|w| p.eval_word(w)).collect()
    }

    proptest! {
        #[test]
        fn ring_laws(p in arb_anf(6), q in arb_anf(6), r in arb_anf(6)) {
            prop_assert_eq!(&p ^ &q, &q ^ &p);
            prop_assert_eq!(&p & &q, &q & &p);
            prop_assert_eq!(&(&p ^ &q) ^ &r, &p ^ &(&q ^ &r));
            prop_assert_eq!(&(&p & &q) & &r, &p & &(&q & &r));
            prop_assert_eq!(&p & &(&q ^ &r), &(&p & &q) ^ &(&p & &r));
            prop_assert!((&p ^ &p).is_zero());
            prop_assert_eq!(&p & &p, p.clone());
        }

        #[test]
        fn ops_match_truth_tables(p in arb_anf(6), q in arb_anf(6)) {
            let (tp, tq) = (table(&p), table(&q));
            let tx: Vec<bool> = tp.iter().zip(&tq).map(|(a, b)| a ^ b).collect();
            let ta: Vec<bool> = tp.iter().zip(&tq).map(|(a, b)| a & b).collect();
            prop_assert_eq!(table(&(&p ^ &q)), tx);
            prop_assert_eq!(table(&(&p & &q)), ta);
        }
    }
}
