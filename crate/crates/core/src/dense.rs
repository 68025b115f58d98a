//! Dense `2^n × 2^n` operators, used for the exact-diagonalization oracle and
//! for materializing circuits as unitaries.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::statevector::StateVector;

/// Largest register for which dense operators are built.
pub const MAX_DENSE_QUBITS: usize = 12;

pub(crate) fn check_dense_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "{n} qubits exceeds the dense operator limit of {MAX_DENSE_QUBITS}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n: usize,
    m: DMatrix<Complex64>,
}

/// Eigen-decomposition of a Hermitian operator, sorted by ascending eigenvalue.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Vec<StateVector>,
}

impl DenseOperator {
    pub fn zeros(n: usize) -> Result<Self> {
        check_dense_size(n)?;
        let dim = 1usize << n;
        Ok(Self {
            n,
            m: DMatrix::zeros(dim, dim),
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_dense_size(n)?;
        let dim = 1usize << n;
        Ok(Self {
            n,
            m: DMatrix::identity(dim, dim),
        })
    }

    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        let dim = m.nrows();
        if dim != m.ncols() || dim < 2 || !dim.is_power_of_two() {
            return invalid(format!(
                "operator shape {}x{} is not 2^n square",
                m.nrows(),
                m.ncols()
            ));
        }
        let n = dim.trailing_zeros() as usize;
        check_dense_size(n)?;
        Ok(Self { n, m })
    }

    /// Builds an operator whose column `j` is `columns[j]`.
    pub fn from_columns(columns: &[StateVector]) -> Result<Self> {
        let dim = columns.len();
        if columns.iter().any(|c| c.dim() != dim) {
            return invalid("column count does not match column length");
        }
        let m = DMatrix::from_fn(dim, dim, |r, c| columns[c].amplitudes()[r]);
        Self::from_matrix(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.m[(r, c)]
    }

    pub(crate) fn add_to(&mut self, r: usize, c: usize, v: Complex64) {
        self.m[(r, c)] += v;
    }

    pub fn to_row_major(&self) -> Vec<Complex64> {
        let d = self.dim();
        (0..d * d).map(|i| self.m[(i / d, i % d)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n: self.n,
            m: self.m.adjoint(),
        }
    }

    pub fn mul(&self, other: &DenseOperator) -> Result<Self> {
        if self.n != other.n {
            return invalid("operator product of different sizes");
        }
        Ok(Self {
            n: self.n,
            m: &self.m * &other.m,
        })
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &DenseOperator) -> Result<Self> {
        if self.n != u.n {
            return invalid("conjugation by an operator of a different size");
        }
        Ok(Self {
            n: self.n,
            m: &u.m * &self.m * u.m.adjoint(),
        })
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.dim() {
            return invalid("operator and state sizes differ");
        }
        let d = self.dim();
        let amps = state.amplitudes();
        let out = (0..d)
            .map(|r| (0..d).map(|c| self.m[(r, c)] * amps[c]).sum())
            .collect();
        StateVector::from_amplitudes(out)
    }

    /// `⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<Complex64> {
        state.inner(&self.apply(state)?)
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn off_diagonal_norm(&self) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for r in 0..d {
            for c in 0..d {
                if r != c {
                    acc += self.m[(r, c)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.m[(i, i)]).collect()
    }

    pub fn hermitian_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.m[(r, c)] - self.m[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim();
        let p = self.m.adjoint() * &self.m;
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let want = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((p[(r, c)] - want).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Hermitian eigen-decomposition, ascending.
    pub fn eigh(&self) -> Result<Spectrum> {
        let herm = self.hermitian_error();
        if herm > 1e-9 {
            return invalid(format!("operator is not Hermitian (error {herm:e})"));
        }
        let eig = SymmetricEigen::new(self.m.clone());
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = order
            .iter()
            .map(|&i| {
                StateVector::from_amplitudes(eig.eigenvectors.column(i).iter().copied().collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Spectrum { values, vectors })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eigh()?.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_limit() {
        assert!(matches!(
            DenseOperator::zeros(13),
            Err(Error::ResourceLimit(_))
        ));
        assert!(DenseOperator::identity(3).is_ok());
    }

    #[test]
    fn eigh_of_pauli_x() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0., 0.),
                Complex64::new(1., 0.),
                Complex64::new(1., 0.),
                Complex64::new(0., 0.),
            ],
        );
        let op = DenseOperator::from_matrix(m).unwrap();
        let eig = op.eigh().unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        let v = &eig.vectors[1];
        let e = op.expectation(v).unwrap();
        assert!((e.re - 1.0).abs() < 1e-12);
    }
}
