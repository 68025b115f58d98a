//! Independent reference implementations shared by the integration tests.
//! Nothing here calls the library's model code.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

pub type CMat = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli(letter: char) -> CMat {
    let z = c(0., 0.);
    let o = c(1., 0.);
    let entries = match letter {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, c(0., -1.), c(0., 1.), z],
        'Z' => [o, z, z, -o],
        _ => panic!("bad letter"),
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

/// Kronecker product of single-qubit letters, qubit 0 leftmost.
pub fn kron_string(letters: &str) -> CMat {
    letters
        .chars()
        .fold(DMatrix::from_element(1, 1, c(1., 0.)), |acc, l| {
            acc.kronecker(&pauli(l))
        })
}

fn letters(n: usize, fill: char, sites: &[(usize, char)]) -> String {
    let mut v = vec![fill; n];
    for &(p, l) in sites {
        v[p] = l;
    }
    v.into_iter().collect()
}

/// Boundary-corrected XY Hamiltonian built from Kronecker products.
pub fn hamiltonian(n: usize, j: f64, g: f64, l: f64) -> CMat {
    let d = 1 << n;
    let mut h = CMat::zeros(d, d);
    let a = j * (1. + g) / 2.;
    let b = j * (1. - g) / 2.;
    for i in 0..n - 1 {
        h += kron_string(&letters(n, 'I', &[(i, 'X'), (i + 1, 'X')])) * c(a, 0.);
        h += kron_string(&letters(n, 'I', &[(i, 'Y'), (i + 1, 'Y')])) * c(b, 0.);
    }
    for i in 0..n {
        h += kron_string(&letters(n, 'I', &[(i, 'Z')])) * c(l, 0.);
    }
    h += kron_string(&letters(n, 'Z', &[(0, 'Y'), (n - 1, 'Y')])) * c(a, 0.);
    h += kron_string(&letters(n, 'Z', &[(0, 'X'), (n - 1, 'X')])) * c(b, 0.);
    h
}

pub fn mz_operator(n: usize) -> CMat {
    let d = 1 << n;
    let mut m = CMat::zeros(d, d);
    for i in 0..n {
        m += kron_string(&letters(n, 'I', &[(i, 'Z')]));
    }
    m / c(n as f64, 0.)
}

pub fn sorted_eigenvalues(h: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = h
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Ground eigenspace (eigenvalues within `tol` of the minimum) as columns.
pub fn ground_space(h: &CMat, tol: f64) -> (f64, Vec<Vec<Complex64>>) {
    let eig = h.clone().symmetric_eigen();
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let cols = (0..h.nrows())
        .filter(|&i| eig.eigenvalues[i] - min <= tol)
        .map(|i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    (min, cols)
}

pub fn expectation(m: &CMat, v: &[Complex64]) -> f64 {
    let x = nalgebra::DVector::from_column_slice(v);
    (x.adjoint() * m * &x)[(0, 0)].re
}

/// Wire-order mode labels `[0, n/2, 1, −1, …]`.
pub fn modes(n: usize) -> Vec<i64> {
    let mut m = vec![0, n as i64 / 2];
    for k in 1..n as i64 / 2 {
        m.push(k);
        m.push(-k);
    }
    m
}

/// `(ε, signed quasi-energy)` of mode `k`; the sign follows ε, and a zero
/// ε gives `+|Δ|`.
pub fn mode_energy(n: usize, j: f64, g: f64, l: f64, k: i64) -> (f64, f64) {
    let phi = 2. * PI * k as f64 / n as f64;
    let (cos, sin) = if 4 * k.rem_euclid(n as i64) % n as i64 == 0 {
        (phi.cos().round(), phi.sin().round())
    } else {
        (phi.cos(), phi.sin())
    };
    let eps = l + j * cos;
    let delta = j * g * sin;
    let e_abs = (eps * eps + delta * delta).sqrt();
    (eps, if eps < 0. { -e_abs } else { e_abs })
}

pub fn bit(idx: usize, p: usize, n: usize) -> usize {
    (idx >> (n - 1 - p)) & 1
}

pub fn bits_of(idx: usize, n: usize) -> String {
    (0..n)
        .map(|p| if bit(idx, p, n) == 1 { '1' } else { '0' })
        .collect()
}

/// Diagonal-basis energy of basis index `idx`.
pub fn diag_energy(idx: usize, n: usize, j: f64, g: f64, l: f64) -> f64 {
    modes(n)
        .iter()
        .enumerate()
        .map(|(p, &k)| {
            let (eps, e) = mode_energy(n, j, g, l, k);
            2. * e * (bit(idx, p, n) as f64 - 0.5) + eps - l
        })
        .sum()
}

/// γ = 0 number-basis energy `Σ 2ε_k n_k − λn`.
pub fn gamma0_energy(idx: usize, n: usize, j: f64, l: f64) -> f64 {
    modes(n)
        .iter()
        .enumerate()
        .map(|(p, &k)| 2. * mode_energy(n, j, 0., l, k).0 * bit(idx, p, n) as f64)
        .sum::<f64>()
        - l * n as f64
}

pub fn gs_mz_closed(l: f64) -> f64 {
    let tail = l / (2. * (1. + l * l).sqrt());
    if l <= 1. {
        -tail
    } else {
        -0.5 - tail
    }
}

pub fn mz_t_closed(l: f64, t: f64) -> f64 {
    (1. + 2. * l * l + (4. * t * (1. + l * l).sqrt()).cos()) / (2. + 2. * l * l)
}

/// Residual `‖H v − E v‖`.
pub fn residual(h: &CMat, v: &[Complex64], e: f64) -> f64 {
    let x = nalgebra::DVector::from_column_slice(v);
    (h * &x - x * c(e, 0.)).norm()
}

pub fn lambda_grid() -> Vec<f64> {
    (0..=8).map(|i| 0.25 * i as f64).collect()
}
