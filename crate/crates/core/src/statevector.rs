//! Dense complex statevector kernel.
//!
//! Qubit 0 is the top wire of a circuit diagram and maps to the most
//! significant bit of the amplitude index, so bitstrings read left to right
//! in the same order as kets are written: `"0100"` is index 4.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::gates::GateMatrix;

/// Largest register the dense kernel accepts.
pub const MAX_QUBITS: usize = 26;

/// Tolerance used when validating gate unitarity on application.
pub const UNITARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        if n < 1 {
            return invalid("a state needs at least one qubit");
        }
        if n > MAX_QUBITS {
            return invalid(format!(
                "{n} qubits exceeds the dense limit of {MAX_QUBITS}"
            ));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Computational basis state from a bitstring such as `"0100"`.
    pub fn basis(bits: &str) -> Result<Self> {
        let index = bitstring_to_index(bits)?;
        let mut state = Self::zero(bits.len())?;
        state.amps[0] = Complex64::new(0.0, 0.0);
        state.amps[index] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    pub fn basis_index(n: usize, index: usize) -> Result<Self> {
        let mut state = Self::zero(n)?;
        if index >= state.dim() {
            return invalid(format!("basis index {index} out of range for {n} qubits"));
        }
        state.amps[0] = Complex64::new(0.0, 0.0);
        state.amps[index] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    /// Wraps raw amplitudes. The length must be a power of two; no
    /// normalization is applied.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return invalid(format!("amplitude count {len} is not 2^n with n >= 1"));
        }
        Ok(Self {
            n: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// Normalized random state with uniformly drawn real and imaginary parts.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let mut state = Self::zero(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for a in state.amps.iter_mut() {
            *a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let norm = state.norm();
        state.scale(Complex64::new(1.0 / norm, 0.0));
        Ok(state)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, bits: &str) -> Result<Complex64> {
        if bits.len() != self.n {
            return invalid(format!(
                "bitstring length {} != {} qubits",
                bits.len(),
                self.n
            ));
        }
        Ok(self.amps[bitstring_to_index(bits)?])
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return invalid("inner product of states with different qubit counts");
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in self.amps.iter_mut() {
            *a *= factor;
        }
    }

    /// Largest elementwise distance to another state of the same size.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Born probabilities `|amp|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies a one- or two-qubit gate, validating targets and unitarity.
    pub fn apply_gate(&mut self, gate: &GateMatrix, targets: &[usize]) -> Result<()> {
        check_targets(self.n, gate, targets)?;
        let err = gate.unitarity_error();
        if err >= UNITARITY_TOL {
            return invalid(format!(
                "gate {} is not unitary (max |U†U - I| = {err:e})",
                gate.name()
            ));
        }
        self.apply_gate_unchecked(gate, targets);
        Ok(())
    }

    /// Kernel without validation. Targets must be distinct, in range and
    /// match the gate arity.
    pub(crate) fn apply_gate_unchecked(&mut self, gate: &GateMatrix, targets: &[usize]) {
        let m = gate.data();
        match targets {
            [q] => {
                let mask = 1usize << (self.n - 1 - q);
                for i in 0..self.dim() {
                    if i & mask != 0 {
                        continue;
                    }
                    let j = i | mask;
                    let (a0, a1) = (self.amps[i], self.amps[j]);
                    self.amps[i] = m[0] * a0 + m[1] * a1;
                    self.amps[j] = m[2] * a0 + m[3] * a1;
                }
            }
            [qa, qb] => {
                let ma = 1usize << (self.n - 1 - qa);
                let mb = 1usize << (self.n - 1 - qb);
                for i in 0..self.dim() {
                    if i & (ma | mb) != 0 {
                        continue;
                    }
                    // local index = 2·bit(a) + bit(b)
                    let idx = [i, i | mb, i | ma, i | ma | mb];
                    let v = idx.map(|k| self.amps[k]);
                    for (r, &k) in idx.iter().enumerate() {
                        let row = &m[4 * r..4 * r + 4];
                        self.amps[k] =
                            row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
                    }
                }
            }
            _ => unreachable!("gate arity is validated before application"),
        }
    }

    /// Draws `shots` basis indices i.i.d. from the Born distribution.
    pub fn sample_indices<R: Rng + ?Sized>(&self, shots: usize, rng: &mut R) -> Result<Vec<usize>> {
        if shots < 1 {
            return invalid("shots must be >= 1");
        }
        let dist = WeightedIndex::new(self.probabilities())
            .map_err(|e| crate::Error::InvalidArgument(format!("cannot sample state: {e}")))?;
        Ok((0..shots).map(|_| dist.sample(rng)).collect())
    }

    /// Seeded Born-rule sampling into a bitstring histogram.
    pub fn sample_counts(&self, shots: usize, seed: u64) -> Result<ShotCounts> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for idx in self.sample_indices(shots, &mut rng)? {
            *counts.entry(index_to_bitstring(idx, self.n)).or_insert(0) += 1;
        }
        Ok(ShotCounts {
            counts,
            shots,
            seed,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    pub counts: BTreeMap<String, usize>,
    pub shots: usize,
    pub seed: u64,
}

impl ShotCounts {
    pub fn get(&self, bits: &str) -> usize {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    pub fn frequency(&self, bits: &str) -> f64 {
        self.get(bits) as f64 / self.shots as f64
    }
}

pub(crate) fn check_targets(n: usize, gate: &GateMatrix, targets: &[usize]) -> Result<()> {
    if targets.len() != gate.arity() {
        return invalid(format!(
            "gate {} acts on {} qubit(s) but {} target(s) given",
            gate.name(),
            gate.arity(),
            targets.len()
        ));
    }
    if let Some(&q) = targets.iter().find(|&&q| q >= n) {
        return invalid(format!("target qubit {q} out of range for {n} qubits"));
    }
    if targets.len() == 2 && targets[0] == targets[1] {
        return invalid(format!("duplicate target qubit {}", targets[0]));
    }
    Ok(())
}

pub fn bitstring_to_index(bits: &str) -> Result<usize> {
    if bits.is_empty() {
        return invalid("empty bitstring");
    }
    if bits.len() > MAX_QUBITS {
        return invalid(format!("bitstring longer than {MAX_QUBITS} qubits"));
    }
    bits.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        other => invalid(format!("invalid bitstring character {other:?}")),
    })
}

pub fn index_to_bitstring(index: usize, n: usize) -> String {
    (0..n)
        .map(|p| {
            if (index >> (n - 1 - p)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Bit of qubit `p` in basis index `index` for an `n`-qubit register.
#[inline]
pub fn bit(index: usize, p: usize, n: usize) -> u8 {
    ((index >> (n - 1 - p)) & 1) as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;

    const C0: Complex64 = Complex64::new(0.0, 0.0);
    const C1: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn zero_state_layout() {
        assert_eq!(StateVector::zero(1).unwrap().amplitudes(), &[C1, C0]);
        let s = StateVector::zero(4).unwrap();
        assert_eq!(s.amplitude("0000").unwrap(), C1);
        let s = StateVector::zero(8).unwrap();
        assert_eq!(s.dim(), 256);
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!(StateVector::zero(0).is_err());
    }

    #[test]
    fn basis_state_is_big_endian() {
        for (bits, idx) in [("0000", 0), ("0100", 4), ("1111", 15), ("10", 2)] {
            let s = StateVector::basis(bits).unwrap();
            assert_eq!(s.amplitudes()[idx], C1, "{bits}");
            assert!((s.norm() - 1.0).abs() < 1e-15);
        }
        assert!(matches!(
            StateVector::basis("01a0"),
            Err(crate::Error::InvalidArgument(_))
        ));
        assert!(StateVector::basis("").is_err());
        assert_eq!(index_to_bitstring(4, 4), "0100");
    }

    #[test]
    fn elementary_actions() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(&gates::x(), &[0]).unwrap();
        assert_eq!(s, StateVector::basis("1").unwrap());

        let mut s = StateVector::basis("11").unwrap();
        s.apply_gate(&gates::fswap(), &[0, 1]).unwrap();
        assert_eq!(s.amplitude("11").unwrap(), -C1);

        let mut s = StateVector::basis("11").unwrap();
        s.apply_gate(&gates::cz(), &[0, 1]).unwrap();
        assert_eq!(s.amplitude("11").unwrap(), -C1);

        // CNOT with control on qubit 2 and target qubit 0 (non-adjacent, reversed)
        let mut s = StateVector::basis("001").unwrap();
        s.apply_gate(&gates::cnot(), &[2, 0]).unwrap();
        assert_eq!(s, StateVector::basis("101").unwrap());
    }

    #[test]
    fn apply_gate_rejects_bad_input() {
        let mut s = StateVector::zero(3).unwrap();
        assert!(s.apply_gate(&gates::x(), &[3]).is_err());
        assert!(s.apply_gate(&gates::cz(), &[1, 1]).is_err());
        assert!(s.apply_gate(&gates::cz(), &[1]).is_err());
        let bad = GateMatrix::custom("scale", vec![C1 * 2.0, C0, C0, C1]).unwrap();
        assert!(matches!(
            s.apply_gate(&bad, &[0]),
            Err(crate::Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn deterministic_sampling() {
        let s = StateVector::zero(4).unwrap();
        let c = s.sample_counts(1000, 7).unwrap();
        assert_eq!(c.get("0000"), 1000);
        assert_eq!(c.counts.len(), 1);

        let mut plus = StateVector::zero(1).unwrap();
        plus.apply_gate(&gates::h(), &[0]).unwrap();
        let a = plus.sample_counts(500, 99).unwrap();
        let b = plus.sample_counts(500, 99).unwrap();
        assert_eq!(a, b);
        assert!(plus.sample_counts(0, 1).is_err());
    }

    #[test]
    fn binomial_frequency_of_plus_state() {
        let mut plus = StateVector::zero(1).unwrap();
        plus.apply_gate(&gates::h(), &[0]).unwrap();
        let shots = 10_000;
        let c = plus.sample_counts(shots, 2024).unwrap();
        let sigma = 0.5 / (shots as f64).sqrt();
        assert!((c.frequency("0") - 0.5).abs() < 5.0 * sigma);
        assert_eq!(c.counts.values().sum::<usize>(), shots);
    }
}
