use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Dense state over `2^num_qubits` computational basis states; bit `i` of a
/// basis index is qubit `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    /// Wraps amplitudes; `None` unless the length is a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Option<Self> {
        let len = amps.len();
        (len.is_power_of_two()).then(|| StateVector {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// Haar-like random state: i.i.d. complex Gaussians, normalised.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Self {
        let amps = (0..1usize << num_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let mut s = StateVector { num_qubits, amps };
        s.normalize();
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        for a in &mut self.amps {
            *a /= n;
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm()
    }

    /// `new[f(i)] = old[i]`; `f` must be a bijection on basis indices.
    pub fn permuted<F: Fn(usize) -> usize>(&self, f: F) -> StateVector {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            out[f(i)] = a;
        }
        StateVector {
            num_qubits: self.num_qubits,
            amps: out,
        }
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn random_is_normalised() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let s = StateVector::random(5, &mut rng);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!((s.fidelity(&s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn permutation_moves_amplitude() {
        let s = StateVector::basis(2, 1);
        let p = s.permuted(|i| i ^ 0b11);
        assert_eq!(p.amplitudes()[2], Complex64::new(1.0, 0.0));
        assert!(StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 3]).is_none());
    }
}
