//! Gate matrices: the elementary set plus the fermionic building blocks of
//! the diagonalizing circuit (fSWAP, the two-mode Fourier gate, the
//! Bogoliubov gate and the single-mode time-evolution gate), together with
//! their basic-gate decompositions.
//!
//! Two-qubit matrices are written in the local basis `|q0 q1⟩` where `q0` is
//! the first target and the high bit of the local index.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::circuits::{Circuit, GateOp};
use crate::error::{invalid, Error, Result};

/// Identity of a gate together with its real parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    X,
    H,
    S,
    Sdg,
    Cz,
    Cnot,
    /// Controlled Hadamard, control on the first target.
    Ch,
    Swap,
    /// `diag(1, e^{iφ})`.
    Phase(f64),
    /// Controlled `R_X(θ)`, control on the first target.
    Crx(f64),
    Fswap,
    Fourier {
        n: usize,
        k: usize,
    },
    FourierDg {
        n: usize,
        k: usize,
    },
    Bogoliubov(f64),
    TimeEvolution {
        e: f64,
        eps: f64,
        lambda: f64,
        t: f64,
    },
    Custom {
        name: String,
        params: Vec<f64>,
    },
}

impl GateKind {
    pub fn name(&self) -> &str {
        match self {
            GateKind::X => "x",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::Cz => "cz",
            GateKind::Cnot => "cnot",
            GateKind::Ch => "ch",
            GateKind::Swap => "swap",
            GateKind::Phase(_) => "ph",
            GateKind::Crx(_) => "crx",
            GateKind::Fswap => "fswap",
            GateKind::Fourier { .. } => "fourier",
            GateKind::FourierDg { .. } => "fourier_dg",
            GateKind::Bogoliubov(_) => "bogoliubov",
            GateKind::TimeEvolution { .. } => "time_evolution",
            GateKind::Custom { name, .. } => name,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            GateKind::Phase(p) | GateKind::Crx(p) | GateKind::Bogoliubov(p) => vec![p],
            GateKind::Fourier { n, k } | GateKind::FourierDg { n, k } => vec![n as f64, k as f64],
            GateKind::TimeEvolution { e, eps, lambda, t } => vec![e, eps, lambda, t],
            GateKind::Custom { ref params, .. } => params.clone(),
            _ => Vec::new(),
        }
    }

    /// True for gates in the basic set a decomposition may emit.
    pub fn is_elementary(&self) -> bool {
        matches!(
            self,
            GateKind::X
                | GateKind::H
                | GateKind::S
                | GateKind::Sdg
                | GateKind::Cz
                | GateKind::Cnot
                | GateKind::Ch
                | GateKind::Swap
                | GateKind::Phase(_)
                | GateKind::Crx(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    kind: GateKind,
    /// Row-major 2×2 or 4×4.
    data: Vec<Complex64>,
}

impl fmt::Display for GateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.kind.params();
        if params.is_empty() {
            write!(f, "{}", self.name())
        } else {
            let p: Vec<String> = params.iter().map(|v| format!("{v:.6}")).collect();
            write!(f, "{}({})", self.name(), p.join(", "))
        }
    }
}

impl GateMatrix {
    fn new(kind: GateKind, data: Vec<Complex64>) -> Self {
        debug_assert!(data.len() == 4 || data.len() == 16);
        Self { kind, data }
    }

    /// Arbitrary 2×2 or 4×4 matrix. Unitarity is not enforced here; the
    /// statevector kernel rejects non-unitary gates on application.
    pub fn custom(name: &str, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != 4 && data.len() != 16 {
            return invalid(format!(
                "custom gate needs 4 or 16 entries, got {}",
                data.len()
            ));
        }
        Ok(Self::new(
            GateKind::Custom {
                name: name.to_string(),
                params: Vec::new(),
            },
            data,
        ))
    }

    /// Rebuilds a gate from its serialized name and parameters.
    pub fn from_name_params(name: &str, params: &[f64]) -> Result<Self> {
        let want = |count: usize| -> Result<()> {
            if params.len() != count {
                return Err(Error::Serialization(format!(
                    "gate {name} expects {count} parameter(s), got {}",
                    params.len()
                )));
            }
            Ok(())
        };
        let as_index = |v: f64| -> Result<usize> {
            if v >= 0.0 && v.fract() == 0.0 && v < 1e9 {
                Ok(v as usize)
            } else {
                Err(Error::Serialization(format!(
                    "gate {name}: {v} is not an index"
                )))
            }
        };
        let fixed = |g: GateMatrix| -> Result<GateMatrix> {
            want(0)?;
            Ok(g)
        };
        match name {
            "x" => fixed(x()),
            "h" => fixed(h()),
            "s" => fixed(s()),
            "sdg" => fixed(sdg()),
            "cz" => fixed(cz()),
            "cnot" => fixed(cnot()),
            "ch" => fixed(ch()),
            "swap" => fixed(swap()),
            "fswap" => fixed(fswap()),
            "ph" => {
                want(1)?;
                Ok(phase(params[0]))
            }
            "crx" => {
                want(1)?;
                Ok(crx(params[0]))
            }
            "fourier" => {
                want(2)?;
                fourier_gate(as_index(params[0])?, as_index(params[1])?)
            }
            "fourier_dg" => {
                want(2)?;
                Ok(fourier_gate(as_index(params[0])?, as_index(params[1])?)?.dagger())
            }
            "bogoliubov" => {
                want(1)?;
                bogoliubov_gate(params[0])
            }
            "time_evolution" => {
                want(4)?;
                time_evolution_gate(params[0], params[1], params[2], params[3])
            }
            other => Err(Error::Serialization(format!("unknown gate name {other:?}"))),
        }
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        self.kind.name()
    }

    pub fn params(&self) -> Vec<f64> {
        self.kind.params()
    }

    pub fn dim(&self) -> usize {
        if self.data.len() == 4 {
            2
        } else {
            4
        }
    }

    pub fn arity(&self) -> usize {
        if self.data.len() == 4 {
            1
        } else {
            2
        }
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    /// Conjugate transpose. The kind maps to the matching inverse kind so
    /// that taking the adjoint twice gives back the original gate.
    pub fn dagger(&self) -> Self {
        let d = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        let kind = match &self.kind {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::Phase(p) => GateKind::Phase(-p),
            GateKind::Crx(t) => GateKind::Crx(-t),
            GateKind::Bogoliubov(t) => GateKind::Bogoliubov(-t),
            GateKind::Fourier { n, k } => GateKind::FourierDg { n: *n, k: *k },
            GateKind::FourierDg { n, k } => GateKind::Fourier { n: *n, k: *k },
            GateKind::TimeEvolution { e, eps, lambda, t } => GateKind::TimeEvolution {
                e: *e,
                eps: *eps,
                lambda: *lambda,
                t: -t,
            },
            GateKind::Custom { name, params } => {
                let name = match name.strip_suffix("_dg") {
                    Some(base) => base.to_string(),
                    None => format!("{name}_dg"),
                };
                GateKind::Custom {
                    name,
                    params: params.clone(),
                }
            }
            k => k.clone(),
        };
        Self::new(kind, data)
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &GateMatrix) -> Result<Vec<Complex64>> {
        if self.dim() != other.dim() {
            return invalid("matrix product of gates with different dimensions");
        }
        Ok(matmul(&self.data, &other.data, self.dim()))
    }

    /// `max |U†U − I|` over all entries.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.data[k * d + r].conj() * self.data[k * d + c];
                }
                if r == c {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() < tol
    }
}

pub(crate) fn matmul(a: &[Complex64], b: &[Complex64], d: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    for r in 0..d {
        for c in 0..d {
            out[r * d + c] = (0..d).map(|k| a[r * d + k] * b[k * d + c]).sum();
        }
    }
    out
}

/// Phase-invariant overlap `|tr(U†V)| / dim`; 1 means equal up to a global phase.
pub fn phase_fidelity(u: &[Complex64], v: &[Complex64], dim: usize) -> f64 {
    assert_eq!(u.len(), dim * dim);
    assert_eq!(v.len(), dim * dim);
    let tr: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    tr.norm() / dim as f64
}

/// `|tr(U†V)| ≥ dim·(1 − tol)`.
pub fn equivalent_up_to_phase(u: &[Complex64], v: &[Complex64], dim: usize, tol: f64) -> bool {
    phase_fidelity(u, v, dim) >= 1.0 - tol
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn real(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| c(x, 0.0)).collect()
}

pub fn x() -> GateMatrix {
    GateMatrix::new(GateKind::X, real(&[0., 1., 1., 0.]))
}

pub fn h() -> GateMatrix {
    let s = FRAC_1_SQRT_2;
    GateMatrix::new(GateKind::H, real(&[s, s, s, -s]))
}

pub fn s() -> GateMatrix {
    GateMatrix::new(
        GateKind::S,
        vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)],
    )
}

pub fn sdg() -> GateMatrix {
    s().dagger()
}

pub fn phase(phi: f64) -> GateMatrix {
    GateMatrix::new(
        GateKind::Phase(phi),
        vec![
            c(1., 0.),
            c(0., 0.),
            c(0., 0.),
            Complex64::from_polar(1.0, phi),
        ],
    )
}

fn controlled(kind: GateKind, u: [Complex64; 4]) -> GateMatrix {
    let mut data = real(&[
        1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0.,
    ]);
    data[10] = u[0];
    data[11] = u[1];
    data[14] = u[2];
    data[15] = u[3];
    GateMatrix::new(kind, data)
}

pub fn cnot() -> GateMatrix {
    controlled(GateKind::Cnot, [c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn cz() -> GateMatrix {
    controlled(GateKind::Cz, [c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

pub fn ch() -> GateMatrix {
    let s = FRAC_1_SQRT_2;
    controlled(GateKind::Ch, [c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)])
}

pub fn crx(theta: f64) -> GateMatrix {
    let (cs, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    controlled(
        GateKind::Crx(theta),
        [c(cs, 0.), c(0., -sn), c(0., -sn), c(cs, 0.)],
    )
}

pub fn swap() -> GateMatrix {
    GateMatrix::new(
        GateKind::Swap,
        real(&[
            1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.,
        ]),
    )
}

/// Fermionic SWAP: exchanges two modes and picks up −1 when both are occupied.
pub fn fswap() -> GateMatrix {
    GateMatrix::new(
        GateKind::Fswap,
        real(&[
            1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., -1.,
        ]),
    )
}

/// Two-mode Fourier gate `F^n_k`.
///
/// Maps the pair (mode `k` of the even sub-transform, mode `k` of the odd
/// sub-transform) onto modes `k` and `k + n/2` of the `n`-point transform.
/// The matrix is assembled from the images of the four occupation states,
/// with `w = e^{i2πk/n}`:
///
/// ```text
/// |00⟩_b = |00⟩
/// |01⟩_b = (|10⟩ − w|01⟩)/√2
/// |10⟩_b = (|10⟩ + w|01⟩)/√2
/// |11⟩_b = −w|11⟩
/// ```
///
/// and the gate is the adjoint of the matrix whose columns are those images,
/// so it takes amplitudes in the sub-transform basis to amplitudes in the
/// full-transform basis.
pub fn fourier_gate(n: usize, k: usize) -> Result<GateMatrix> {
    if n < 2 || !n.is_power_of_two() {
        return invalid(format!("fourier gate size {n} is not a power of two >= 2"));
    }
    if k >= n / 2 {
        return invalid(format!("fourier gate mode {k} out of range 0..{}", n / 2));
    }
    let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
    let s = c(FRAC_1_SQRT_2, 0.);
    let z = c(0., 0.);
    let one = c(1., 0.);
    // columns: images of |00⟩_b, |01⟩_b, |10⟩_b, |11⟩_b in the (a, d) basis
    let images = [
        [one, z, z, z],
        [z, -w * s, s, z],
        [z, w * s, s, z],
        [z, z, z, -w],
    ];
    let mut data = vec![z; 16];
    for (r, image) in images.iter().enumerate() {
        for (col, amp) in image.iter().enumerate() {
            data[r * 4 + col] = amp.conj();
        }
    }
    let gate = GateMatrix::new(GateKind::Fourier { n, k }, data);
    debug_assert!(gate.is_unitary(1e-12));
    Ok(gate)
}

/// Bogoliubov gate `B(θ)`: mixes `|00⟩` and `|11⟩` of a `(k, −k)` pair.
pub fn bogoliubov_gate(theta: f64) -> Result<GateMatrix> {
    if !theta.is_finite() {
        return invalid(format!("bogoliubov angle {theta} is not finite"));
    }
    let (cs, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let z = c(0., 0.);
    let one = c(1., 0.);
    let data = vec![
        c(cs, 0.),
        z,
        z,
        c(0., sn),
        z,
        one,
        z,
        z,
        z,
        z,
        one,
        z,
        c(0., sn),
        z,
        z,
        c(cs, 0.),
    ];
    Ok(GateMatrix::new(GateKind::Bogoliubov(theta), data))
}

/// Single-mode evolution `e^{−it[−e+ε−λ]}·diag(1, e^{−i2te})` for a mode with
/// signed quasi-energy `e` and bare dispersion `ε`.
pub fn time_evolution_gate(e: f64, eps: f64, lambda: f64, t: f64) -> Result<GateMatrix> {
    if ![e, eps, lambda, t].iter().all(|v| v.is_finite()) {
        return invalid("time evolution parameters must be finite");
    }
    let base = Complex64::from_polar(1.0, -t * (-e + eps - lambda));
    let excited = base * Complex64::from_polar(1.0, -2.0 * t * e);
    let z = c(0., 0.);
    Ok(GateMatrix::new(
        GateKind::TimeEvolution { e, eps, lambda, t },
        vec![base, z, z, excited],
    ))
}

fn op(gate: GateMatrix, targets: &[usize]) -> GateOp {
    GateOp::new(gate, targets.to_vec())
}

fn fourier_sequence(n: usize, k: usize) -> Vec<GateOp> {
    let phi = -2.0 * PI * k as f64 / n as f64;
    let hh = || [op(h(), &[0]), op(h(), &[1])];
    let mut seq = vec![op(phase(phi), &[1])];
    seq.extend(hh());
    seq.push(op(cnot(), &[0, 1]));
    seq.extend(hh());
    seq.push(op(ch(), &[0, 1]));
    seq.extend(hh());
    seq.push(op(cnot(), &[0, 1]));
    seq.extend(hh());
    seq.push(op(cz(), &[0, 1]));
    seq
}

/// Basic-gate sequence for one of the composite gates, on local qubits
/// `0` (and `1`). Its product equals the gate up to a global phase.
pub fn decompose(gate: &GateMatrix) -> Result<Vec<GateOp>> {
    match *gate.kind() {
        GateKind::Fswap => Ok(vec![op(swap(), &[0, 1]), op(cz(), &[0, 1])]),
        GateKind::Fourier { n, k } => Ok(fourier_sequence(n, k)),
        GateKind::FourierDg { n, k } => Ok(fourier_sequence(n, k)
            .into_iter()
            .rev()
            .map(|o| o.dagger())
            .collect()),
        GateKind::Bogoliubov(theta) => Ok(vec![
            op(cnot(), &[0, 1]),
            op(x(), &[1]),
            // control on the lower wire, rotation on the upper one
            op(crx(-theta), &[1, 0]),
            op(x(), &[1]),
            op(cnot(), &[0, 1]),
        ]),
        GateKind::TimeEvolution { e, eps, lambda, t } => {
            let varphi = -2.0 * t * e;
            let big_phi = -2.0 * t * (-e + eps - lambda);
            Ok(vec![
                op(phase(varphi), &[0]),
                op(phase(big_phi / 2.0), &[0]),
                op(x(), &[0]),
                op(phase(big_phi / 2.0), &[0]),
                op(x(), &[0]),
            ])
        }
        _ => Err(Error::UnsupportedGate(gate.name().to_string())),
    }
}

/// Matrix of a decomposition sequence acting on `arity` local qubits.
pub fn sequence_matrix(seq: &[GateOp], arity: usize) -> Result<Vec<Complex64>> {
    let mut circ = Circuit::new(arity)?;
    for o in seq {
        circ.push(o.clone())?;
    }
    Ok(circ.to_unitary()?.to_row_major())
}
