//! Exact expectation values and shot-based estimators.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuits::u_dis;
use crate::error::{invalid, Result};
use crate::gates;
use crate::statevector::{bit, StateVector};
use crate::xymodel::{
    all_eigen_energies, dense_hamiltonian, hamiltonian_pauli_terms, ModelParams, Pauli, PauliString,
};

/// Sample mean of a quantity with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateRecord {
    pub mean: f64,
    pub std_error: f64,
    pub shots: usize,
    pub basis_groups: usize,
}

/// `⟨ψ|P|ψ⟩` for the letters of `string`; the coefficient is not applied.
pub fn pauli_expectation(state: &StateVector, string: &PauliString) -> Result<f64> {
    if string.n() != state.n() {
        return invalid(format!(
            "Pauli string on {} qubits, state has {}",
            string.n(),
            state.n()
        ));
    }
    let amps = state.amplitudes();
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for (idx, &a) in amps.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let (image, phase) = string.apply_to_basis(idx);
        acc += amps[image].conj() * phase * a;
    }
    Ok(acc.re)
}

/// `Σ_i ⟨σ^z_i⟩`.
pub fn mz_total(state: &StateVector) -> f64 {
    let n = state.n();
    state
        .probabilities()
        .iter()
        .enumerate()
        .map(|(idx, p)| {
            p * (0..n)
                .map(|q| 1.0 - 2.0 * bit(idx, q, n) as f64)
                .sum::<f64>()
        })
        .sum()
}

/// `(1/n) Σ_i ⟨σ^z_i⟩`.
pub fn mz_per_site(state: &StateVector) -> f64 {
    mz_total(state) / state.n() as f64
}

/// `⟨ψ|H|ψ⟩` against the dense Hamiltonian.
pub fn energy_exact(state: &StateVector, params: &ModelParams) -> Result<f64> {
    if state.n() != params.n() {
        return invalid("state and model sizes differ");
    }
    Ok(dense_hamiltonian(params)?.expectation(state)?.re)
}

/// `Σ_terms c·⟨P⟩`, without building the dense matrix.
pub fn energy_termwise(state: &StateVector, params: &ModelParams) -> Result<f64> {
    hamiltonian_pauli_terms(params)
        .iter()
        .map(|t| Ok(t.coefficient * pauli_expectation(state, t)?))
        .sum()
}

/// Pauli terms measured together in one per-qubit basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGroup {
    pub label: String,
    /// Basis letter per qubit; `I` where nothing is measured.
    pub basis: Vec<Pauli>,
    pub terms: Vec<PauliString>,
}

impl MeasurementGroup {
    /// No two terms ask for different non-identity letters on any qubit.
    pub fn is_qubitwise_commuting(&self) -> bool {
        self.terms.iter().all(|t| {
            t.letters
                .iter()
                .zip(&self.basis)
                .all(|(&l, &b)| l == Pauli::I || l == b)
        })
    }
}

/// Groups of the Hamiltonian terms: all-Z, neighbour XX, neighbour YY,
/// and the two boundary strings on their own. Empty groups are dropped.
pub fn measurement_groups(params: &ModelParams) -> Vec<MeasurementGroup> {
    let n = params.n();
    let mut groups: Vec<MeasurementGroup> = Vec::new();
    for term in hamiltonian_pauli_terms(params) {
        let key = group_key(&term);
        match groups.iter_mut().find(|g| g.label == key) {
            Some(g) => {
                for (b, &l) in g.basis.iter_mut().zip(&term.letters) {
                    if l != Pauli::I {
                        *b = l;
                    }
                }
                g.terms.push(term);
            }
            None => {
                let mut basis = vec![Pauli::I; n];
                for (b, &l) in basis.iter_mut().zip(&term.letters) {
                    *b = l;
                }
                groups.push(MeasurementGroup {
                    label: key,
                    basis,
                    terms: vec![term],
                });
            }
        }
    }
    groups
}

fn group_key(term: &PauliString) -> String {
    let has = |p: Pauli| term.letters.contains(&p);
    match (has(Pauli::X), has(Pauli::Y), has(Pauli::Z)) {
        (false, false, _) => "z".into(),
        (true, false, false) => "xx".into(),
        (false, true, false) => "yy".into(),
        (true, false, true) => "x-string".into(),
        (false, true, true) => "y-string".into(),
        _ => term.label(),
    }
}

/// Mean and standard error `s/√N` of `values[idx]` over sampled indices.
fn sample_statistics(samples: &[usize], values: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().map(|&i| values[i]).sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples
        .iter()
        .map(|&i| (values[i] - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn check_shots(shots: usize) -> Result<()> {
    if shots < 1 {
        return invalid("shots must be at least 1");
    }
    Ok(())
}

/// Rotates `state` into the group's basis: `H` for X, `S†` then `H` for Y.
fn rotate_into(state: &StateVector, basis: &[Pauli]) -> Result<StateVector> {
    let mut s = state.clone();
    for (q, &b) in basis.iter().enumerate() {
        match b {
            Pauli::X => s.apply_gate(&gates::h(), &[q])?,
            Pauli::Y => {
                s.apply_gate(&gates::sdg(), &[q])?;
                s.apply_gate(&gates::h(), &[q])?;
            }
            _ => {}
        }
    }
    Ok(s)
}

/// Shot estimate of the energy from the spin-basis Pauli groups. Each
/// group gets the full `shots` budget; per-group standard errors combine
/// in quadrature.
pub fn estimate_energy_grouped(
    state: &StateVector,
    params: &ModelParams,
    shots: usize,
    seed: u64,
) -> Result<EstimateRecord> {
    check_shots(shots)?;
    if state.n() != params.n() {
        return invalid("state and model sizes differ");
    }
    let n = state.n();
    let groups = measurement_groups(params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut mean, mut var) = (0.0, 0.0);
    for g in &groups {
        let rotated = rotate_into(state, &g.basis)?;
        let values: Vec<f64> = (0..rotated.dim())
            .map(|idx| {
                g.terms
                    .iter()
                    .map(|t| {
                        let sign: i32 = t
                            .letters
                            .iter()
                            .enumerate()
                            .filter(|(_, &l)| l != Pauli::I)
                            .map(|(q, _)| 1 - 2 * bit(idx, q, n) as i32)
                            .product();
                        t.coefficient * sign as f64
                    })
                    .sum()
            })
            .collect();
        let samples = rotated.sample_indices(shots, &mut rng)?;
        let (m, se) = sample_statistics(&samples, &values);
        mean += m;
        var += se * se;
    }
    Ok(EstimateRecord {
        mean,
        std_error: var.sqrt(),
        shots,
        basis_groups: groups.len(),
    })
}

/// Shot estimate of the energy from bitstrings measured after `U_dis`,
/// each scored with its diagonal-basis energy. Zero variance on
/// eigenstates.
pub fn estimate_energy_diagonal(
    state: &StateVector,
    params: &ModelParams,
    shots: usize,
    seed: u64,
) -> Result<EstimateRecord> {
    check_shots(shots)?;
    let diag = u_dis(params)?.apply_to(state)?;
    let values = all_eigen_energies(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = diag.sample_indices(shots, &mut rng)?;
    let (mean, std_error) = sample_statistics(&samples, &values);
    Ok(EstimateRecord {
        mean,
        std_error,
        shots,
        basis_groups: 1,
    })
}

/// Shot estimate of the per-site magnetization from computational-basis
/// samples.
pub fn estimate_mz_shots(state: &StateVector, shots: usize, seed: u64) -> Result<EstimateRecord> {
    check_shots(shots)?;
    let n = state.n();
    let values: Vec<f64> = (0..state.dim())
        .map(|idx| {
            (0..n)
                .map(|q| 1.0 - 2.0 * bit(idx, q, n) as f64)
                .sum::<f64>()
                / n as f64
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = state.sample_indices(shots, &mut rng)?;
    let (mean, std_error) = sample_statistics(&samples, &values);
    Ok(EstimateRecord {
        mean,
        std_error,
        shots,
        basis_groups: 1,
    })
}
