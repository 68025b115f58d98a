//! The boundary-corrected XY chain: parameters, quasi-particle dispersion,
//! diagonal-basis energies, closed-form observables and the dense
//! Hamiltonian used as an exact-diagonalization oracle.
//!
//! The spin Hamiltonian is
//!
//! ```text
//! H = J Σ_{i<n} [ (1+γ)/2 X_i X_{i+1} + (1−γ)/2 Y_i Y_{i+1} ] + λ Σ_i Z_i
//!     + J (1+γ)/2 Y_1 Z_2 ⋯ Z_{n−1} Y_n + J (1−γ)/2 X_1 Z_2 ⋯ Z_{n−1} X_n
//! ```
//!
//! whose string boundary terms make the Jordan-Wigner fermions exactly
//! periodic in every parity sector.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::dense::{check_dense_size, DenseOperator};
use crate::error::{invalid, Result};
use crate::statevector::{bit, bitstring_to_index, index_to_bitstring};

/// `|2e_k|` at or below this counts as a zero mode when picking occupations.
pub const ZERO_MODE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: usize,
    j: f64,
    gamma: f64,
    lambda: f64,
}

impl ModelParams {
    pub fn new(n: usize, j: f64, gamma: f64, lambda: f64) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return invalid(format!("chain length {n} must be a power of two >= 4"));
        }
        if ![j, gamma, lambda].iter().all(|v| v.is_finite()) {
            return invalid("J, gamma and lambda must be finite");
        }
        Ok(Self {
            n,
            j,
            gamma,
            lambda,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.n, self.j, self.gamma, lambda)
    }
}

/// Dispersion record of one momentum mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiParticleData {
    pub k: i64,
    /// `ε_k = λ + J cos(2πk/n)`
    pub eps: f64,
    /// `Δ_k = Jγ sin(2πk/n)`
    pub delta: f64,
    /// `E_k = √(ε² + Δ²)`
    pub big_e: f64,
    /// Bogoliubov angle, principal branch of `arctan(Δ/ε)`.
    pub theta: f64,
    /// Signed quasi-energy `ε cos θ + Δ sin θ`, equal to `±E_k`.
    pub e: f64,
}

/// `(cos, sin)` of `2πk/n`, exact at quarter turns.
fn mode_trig(k: i64, n: usize) -> (f64, f64) {
    let n = n as i64;
    let r = k.rem_euclid(n);
    if (4 * r) % n == 0 {
        match 4 * r / n {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        let phi = 2.0 * PI * k as f64 / n as f64;
        (phi.cos(), phi.sin())
    }
}

pub fn dispersion(params: &ModelParams, k: i64) -> Result<QuasiParticleData> {
    let half = (params.n / 2) as i64;
    if k <= -half || k > half {
        return invalid(format!("mode {k} outside {}..={half}", -half + 1));
    }
    let (cos, sin) = mode_trig(k, params.n);
    let eps = params.lambda + params.j * cos;
    let delta = params.j * params.gamma * sin;
    let theta = if eps == 0.0 {
        if delta == 0.0 {
            0.0
        } else {
            FRAC_PI_2.copysign(delta)
        }
    } else {
        (delta / eps).atan()
    };
    Ok(QuasiParticleData {
        k,
        eps,
        delta,
        big_e: eps.hypot(delta),
        theta,
        e: eps * theta.cos() + delta * theta.sin(),
    })
}

/// Momentum label carried by each wire at the output of the diagonalizing
/// circuit: `[0, n/2, 1, −1, 2, −2, …, n/2−1, −(n/2−1)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeTable {
    pub order: Vec<i64>,
}

impl ModeTable {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return invalid(format!("chain length {n} must be a power of two >= 4"));
        }
        let half = (n / 2) as i64;
        let mut order = vec![0, half];
        for k in 1..half {
            order.push(k);
            order.push(-k);
        }
        Ok(Self { order })
    }

    pub fn mode_at(&self, position: usize) -> i64 {
        self.order[position]
    }

    pub fn position_of(&self, k: i64) -> Option<usize> {
        self.order.iter().position(|&m| m == k)
    }
}

/// Dispersion of the mode on each wire, in wire order.
pub fn wire_modes(params: &ModelParams) -> Result<Vec<QuasiParticleData>> {
    ModeTable::new(params.n)?
        .order
        .iter()
        .map(|&k| dispersion(params, k))
        .collect()
}

fn check_bits(bits: &str, params: &ModelParams) -> Result<()> {
    if bits.len() != params.n {
        return invalid(format!(
            "bitstring length {} != chain length {}",
            bits.len(),
            params.n
        ));
    }
    bitstring_to_index(bits).map(|_| ())
}

/// Energy of a diagonal-basis occupation pattern:
/// `Σ_p [2 e_k (n_p − ½) + ε_k − λ]` with `k` the mode on wire `p`.
pub fn eigen_energy(bits: &str, params: &ModelParams) -> Result<f64> {
    check_bits(bits, params)?;
    let modes = wire_modes(params)?;
    Ok(energy_from_modes(
        bits.bytes().map(|b| b - b'0'),
        &modes,
        params.lambda,
    ))
}

fn energy_from_modes(
    occ: impl Iterator<Item = u8>,
    modes: &[QuasiParticleData],
    lambda: f64,
) -> f64 {
    occ.zip(modes)
        .map(|(o, m)| 2.0 * m.e * (o as f64 - 0.5) + m.eps - lambda)
        .sum()
}

/// `eigen_energy` for every basis index, in index order.
pub fn all_eigen_energies(params: &ModelParams) -> Result<Vec<f64>> {
    let n = params.n;
    if n > 20 {
        return Err(crate::Error::ResourceLimit(format!(
            "2^{n} energies is too many to enumerate"
        )));
    }
    let modes = wire_modes(params)?;
    Ok((0..1usize << n)
        .map(|idx| energy_from_modes((0..n).map(|p| bit(idx, p, n)), &modes, params.lambda))
        .collect())
}

/// Number-basis energy `Σ_k 2ε_k n_k − λn`; equals `eigen_energy` when γ = 0.
pub fn number_basis_energy(bits: &str, params: &ModelParams) -> Result<f64> {
    check_bits(bits, params)?;
    let modes = wire_modes(params)?;
    let occ: f64 = bits
        .bytes()
        .zip(&modes)
        .map(|(b, m)| 2.0 * m.eps * (b - b'0') as f64)
        .sum();
    Ok(occ - params.lambda * params.n as f64)
}

/// A chosen diagonal-basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub bits: String,
    pub energy: f64,
    /// Another occupation pattern reaches the same energy within tolerance.
    pub degenerate: bool,
}

/// Occupy exactly the modes with `2e_k < 0`; zero modes stay empty, which
/// yields the lexicographically smallest minimizer.
pub fn ground_bitstring(params: &ModelParams) -> Result<Selection> {
    let modes = wire_modes(params)?;
    let bits: String = modes
        .iter()
        .map(|m| if 2.0 * m.e < -ZERO_MODE_TOL { '1' } else { '0' })
        .collect();
    let degenerate = modes.iter().any(|m| (2.0 * m.e).abs() <= ZERO_MODE_TOL);
    let energy = eigen_energy(&bits, params)?;
    Ok(Selection {
        bits,
        energy,
        degenerate,
    })
}

/// Ground state with the cheapest single occupation flipped. Ties go to
/// the smallest `|k|`, then to positive `k`.
pub fn first_excited_bitstring(params: &ModelParams) -> Result<Selection> {
    let gs = ground_bitstring(params)?;
    let modes = wire_modes(params)?;
    let cost = |m: &QuasiParticleData| (2.0 * m.e).abs();
    let min_cost = modes.iter().map(cost).fold(f64::INFINITY, f64::min);
    let tied: Vec<usize> = (0..modes.len())
        .filter(|&p| cost(&modes[p]) - min_cost <= ZERO_MODE_TOL)
        .collect();
    let pick = *tied
        .iter()
        .min_by_key(|&&p| (modes[p].k.abs(), modes[p].k < 0))
        .expect("at least one mode");
    let mut bits: Vec<u8> = gs.bits.bytes().collect();
    bits[pick] = if bits[pick] == b'1' { b'0' } else { b'1' };
    let bits = String::from_utf8(bits).expect("ascii");
    let energy = eigen_energy(&bits, params)?;
    Ok(Selection {
        bits,
        energy,
        degenerate: tied.len() > 1 || gs.degenerate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => invalid(format!("invalid Pauli letter {other:?}")),
        }
    }
}

/// Real coefficient times a tensor product of Pauli letters, one per qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub coefficient: f64,
    pub letters: Vec<Pauli>,
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.letters.iter().map(|p| p.symbol()).collect();
        write!(f, "{:+}·{}", self.coefficient, s)
    }
}

impl PauliString {
    pub fn new(coefficient: f64, letters: Vec<Pauli>) -> Self {
        Self {
            coefficient,
            letters,
        }
    }

    /// Parses letters such as `"XZZX"`.
    pub fn parse(coefficient: f64, letters: &str) -> Result<Self> {
        let letters = letters
            .chars()
            .map(Pauli::from_symbol)
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return invalid("empty Pauli string");
        }
        Ok(Self {
            coefficient,
            letters,
        })
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn label(&self) -> String {
        self.letters.iter().map(|p| p.symbol()).collect()
    }

    /// Action of the letters (without the coefficient) on a basis state:
    /// `P|index⟩ = phase·|image⟩`.
    pub fn apply_to_basis(&self, index: usize) -> (usize, Complex64) {
        let n = self.n();
        let mut image = index;
        let mut phase = Complex64::new(1.0, 0.0);
        for (p, letter) in self.letters.iter().enumerate() {
            let mask = 1usize << (n - 1 - p);
            let one = index & mask != 0;
            match letter {
                Pauli::I => {}
                Pauli::X => image ^= mask,
                Pauli::Y => {
                    image ^= mask;
                    // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                    phase *= if one {
                        Complex64::new(0.0, -1.0)
                    } else {
                        Complex64::new(0.0, 1.0)
                    };
                }
                Pauli::Z => {
                    if one {
                        phase = -phase;
                    }
                }
            }
        }
        (image, phase)
    }

    /// Dense matrix of `coefficient · P`.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        let mut op = DenseOperator::zeros(self.n())?;
        self.accumulate_into(&mut op);
        Ok(op)
    }

    fn accumulate_into(&self, op: &mut DenseOperator) {
        for col in 0..op.dim() {
            let (row, phase) = self.apply_to_basis(col);
            op.add_to(row, col, phase * self.coefficient);
        }
    }
}

/// Pauli terms of the boundary-corrected Hamiltonian. Terms whose
/// coefficient is exactly zero are omitted.
pub fn hamiltonian_pauli_terms(params: &ModelParams) -> Vec<PauliString> {
    let n = params.n;
    let cxx = params.j * (1.0 + params.gamma) / 2.0;
    let cyy = params.j * (1.0 - params.gamma) / 2.0;
    let mut terms = Vec::new();
    let with = |base: Pauli, sites: &[(usize, Pauli)]| {
        let mut letters = vec![base; n];
        for &(p, l) in sites {
            letters[p] = l;
        }
        letters
    };
    for i in 0..n - 1 {
        terms.push(PauliString::new(
            cxx,
            with(Pauli::I, &[(i, Pauli::X), (i + 1, Pauli::X)]),
        ));
        terms.push(PauliString::new(
            cyy,
            with(Pauli::I, &[(i, Pauli::Y), (i + 1, Pauli::Y)]),
        ));
    }
    for i in 0..n {
        terms.push(PauliString::new(
            params.lambda,
            with(Pauli::I, &[(i, Pauli::Z)]),
        ));
    }
    terms.push(PauliString::new(
        cxx,
        with(Pauli::Z, &[(0, Pauli::Y), (n - 1, Pauli::Y)]),
    ));
    terms.push(PauliString::new(
        cyy,
        with(Pauli::Z, &[(0, Pauli::X), (n - 1, Pauli::X)]),
    ));
    terms.retain(|t| t.coefficient != 0.0);
    terms
}

/// Dense Hamiltonian as the sum of its Pauli-term embeddings.
pub fn dense_hamiltonian(params: &ModelParams) -> Result<DenseOperator> {
    check_dense_size(params.n)?;
    let mut op = DenseOperator::zeros(params.n)?;
    for term in hamiltonian_pauli_terms(params) {
        term.accumulate_into(&mut op);
    }
    Ok(op)
}

/// Per-site ground-state magnetization of the n=4 transverse Ising chain
/// (J = 1, γ = 1). The `λ ≤ 1` branch is used at `λ = 1`.
pub fn gs_mz_closed_form(lambda: f64) -> f64 {
    let tail = lambda / (2.0 * (1.0 + lambda * lambda).sqrt());
    if lambda <= 1.0 {
        -tail
    } else {
        -0.5 - tail
    }
}

/// Per-site magnetization at time `t` of the n=4 transverse Ising chain
/// (J = 1, γ = 1) started from all spins up.
pub fn mz_time_closed_form(lambda: f64, t: f64) -> f64 {
    let l2 = lambda * lambda;
    (1.0 + 2.0 * l2 + (4.0 * t * (1.0 + l2).sqrt()).cos()) / (2.0 + 2.0 * l2)
}

/// All bitstrings of length `n` in index order.
pub fn all_bitstrings(n: usize) -> impl Iterator<Item = String> {
    (0..1usize << n).map(move |i| index_to_bitstring(i, n))
}
