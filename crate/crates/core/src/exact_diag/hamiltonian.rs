use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::csr::{CsrMatrix, LinearOperator};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::par::Execution;

/// Truncated Fock space times the symmetric Dicke sector `j = N/2`.
///
/// Basis states are `|n, m>` with `n` photons and `m` excited qubits, so the
/// `J_z` eigenvalue is `m - N/2`. Flat index `n (N + 1) + m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpace {
    pub n_max: usize,
    pub n_spins: usize,
}

impl HilbertSpace {
    pub fn new(n_max: usize, n_spins: usize) -> Result<Self> {
        if n_spins == 0 {
            return Err(Error::InvalidParams("N must be >= 1".into()));
        }
        Ok(HilbertSpace { n_max, n_spins })
    }

    pub fn dim(&self) -> usize {
        (self.n_max + 1) * (self.n_spins + 1)
    }

    #[inline]
    pub fn index(&self, n: usize, m: usize) -> usize {
        n * (self.n_spins + 1) + m
    }

    #[inline]
    pub fn state(&self, idx: usize) -> (usize, usize) {
        (idx / (self.n_spins + 1), idx % (self.n_spins + 1))
    }

    /// `J_z` eigenvalue of Dicke index `m`.
    #[inline]
    pub fn jz(&self, m: usize) -> f64 {
        m as f64 - self.n_spins as f64 / 2.0
    }

    /// `<m+1| J_+ |m> = sqrt((N - m)(m + 1))`.
    #[inline]
    pub fn j_plus(&self, m: usize) -> f64 {
        (((self.n_spins - m) * (m + 1)) as f64).sqrt()
    }

    /// `<m-1| J_- |m> = sqrt(m (N - m + 1))`.
    #[inline]
    pub fn j_minus(&self, m: usize) -> f64 {
        ((m * (self.n_spins - m + 1)) as f64).sqrt()
    }

    /// Eigenvalue of the parity operator on `|n, m>`: `(-1)^m i^n`.
    pub fn parity(&self, idx: usize) -> Complex64 {
        let (n, m) = self.state(idx);
        let spin = if m % 2 == 0 { 1.0 } else { -1.0 };
        let photon = match n % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        photon * spin
    }

    /// Basis indices lying in the parity sector with eigenvalue `eigenvalue`.
    pub fn sector_mask(&self, eigenvalue: Complex64) -> Vec<bool> {
        (0..self.dim()).map(|i| (self.parity(i) - eigenvalue).norm() < 1e-12).collect()
    }
}

/// Entries of column `(n, m)` of the Hamiltonian; equal to row `(n, m)`
/// because every element is real.
fn hamiltonian_column(p: &ModelParams, space: &HilbertSpace, idx: usize) -> Vec<(usize, Complex64)> {
    let (n, m) = space.state(idx);
    let mt = space.jz(m);
    let nf = n as f64;
    let mut out = Vec::with_capacity(5);
    out.push((idx, Complex64::new(p.omega_c * nf + p.omega_q * mt + p.u * nf * mt, 0.0)));
    let k = p.g / p.n_f64();
    if k == 0.0 {
        return out;
    }
    let mut spin_moves = Vec::with_capacity(2);
    if m < space.n_spins {
        spin_moves.push((m + 1, space.j_plus(m)));
    }
    if m > 0 {
        spin_moves.push((m - 1, space.j_minus(m)));
    }
    for (m2, js) in spin_moves {
        if n >= 2 {
            out.push((space.index(n - 2, m2), Complex64::new(k * js * (nf * (nf - 1.0)).sqrt(), 0.0)));
        }
        if n + 2 <= space.n_max {
            out.push((space.index(n + 2, m2), Complex64::new(k * js * ((nf + 1.0) * (nf + 2.0)).sqrt(), 0.0)));
        }
    }
    out
}

/// Sparse Hamiltonian on `space`. Rows are built in parallel.
pub fn build_hamiltonian(p: &ModelParams, space: &HilbertSpace, exec: Execution) -> Result<CsrMatrix> {
    if space.n_max < 2 {
        return Err(Error::CutoffTooSmall { n_max: space.n_max, min: 2 });
    }
    if space.n_spins != p.n {
        return Err(Error::DimensionMismatch { expected: p.n, actual: space.n_spins });
    }
    let rows = exec.map_range(space.dim(), |i| hamiltonian_column(p, space, i));
    CsrMatrix::hermitian_from_rows(space.dim(), rows)
}

/// Diagonal parity operator.
pub fn build_parity(space: &HilbertSpace) -> CsrMatrix {
    let rows = (0..space.dim()).map(|i| vec![(i, space.parity(i))]).collect();
    CsrMatrix::from_rows(space.dim(), rows).expect("diagonal rows are in range")
}

/// The Hamiltonian applied without storing it.
#[derive(Debug, Clone, Copy)]
pub struct MatrixFreeHamiltonian {
    pub params: ModelParams,
    pub space: HilbertSpace,
}

impl MatrixFreeHamiltonian {
    pub fn new(params: ModelParams, space: HilbertSpace) -> Result<Self> {
        if space.n_max < 2 {
            return Err(Error::CutoffTooSmall { n_max: space.n_max, min: 2 });
        }
        if space.n_spins != params.n {
            return Err(Error::DimensionMismatch { expected: params.n, actual: space.n_spins });
        }
        Ok(MatrixFreeHamiltonian { params, space })
    }
}

impl LinearOperator for MatrixFreeHamiltonian {
    fn dim(&self) -> usize {
        self.space.dim()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64], exec: Execution) {
        exec.fill(y, |i| {
            hamiltonian_column(&self.params, &self.space, i)
                .into_iter()
                .map(|(j, v)| v * x[j])
                .sum()
        });
    }
}
