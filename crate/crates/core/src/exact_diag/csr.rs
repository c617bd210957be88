use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par::Execution;

/// Square operator that can act on a complex vector.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// `y = A x`.
    fn apply(&self, x: &[Complex64], y: &mut [Complex64], exec: Execution);
}

/// Row-compressed complex matrix. Explicit zeros are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

/// Hermiticity tolerance applied on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

impl CsrMatrix {
    /// Assemble from per-row `(column, value)` lists. Duplicate columns are
    /// summed, zeros dropped, columns sorted.
    pub fn from_rows(dim: usize, rows: Vec<Vec<(usize, Complex64)>>) -> Result<Self> {
        if rows.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: rows.len() });
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut k = 0;
            while k < row.len() {
                let (c, mut v) = row[k];
                if c >= dim {
                    return Err(Error::DimensionMismatch { expected: dim, actual: c + 1 });
                }
                k += 1;
                while k < row.len() && row[k].0 == c {
                    v += row[k].1;
                    k += 1;
                }
                if v != Complex64::new(0.0, 0.0) {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(CsrMatrix { dim, row_ptr, col_idx, values })
    }

    /// Like [`from_rows`](Self::from_rows) but rejects non-Hermitian input.
    pub fn hermitian_from_rows(dim: usize, rows: Vec<Vec<(usize, Complex64)>>) -> Result<Self> {
        let m = Self::from_rows(dim, rows)?;
        let dev = m.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn from_raw(
        dim: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if row_ptr.len() != dim + 1 || row_ptr.last() != Some(&col_idx.len()) || col_idx.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: dim + 1, actual: row_ptr.len() });
        }
        if row_ptr.windows(2).any(|w| w[1] < w[0]) || col_idx.iter().any(|&c| c >= dim) {
            return Err(Error::DimensionMismatch { expected: dim, actual: col_idx.len() });
        }
        Ok(CsrMatrix { dim, row_ptr, col_idx, values })
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[a..b].iter().copied().zip(self.values[a..b].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        match self.col_idx[a..b].binary_search(&j) {
            Ok(k) => self.values[a + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// `max |A_ij - conj(A_ji)|` over stored entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                dev = dev.max((v - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| self.row(i).all(|(j, _)| j == i))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// `max |(AB - BA)_ij|` through dense products; for small test sizes.
    pub fn commutator_max(&self, other: &CsrMatrix) -> f64 {
        let a = self.to_dense();
        let b = other.to_dense();
        (&a * &b - &b * &a).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn matvec(&self, x: &[Complex64], exec: Execution) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.apply(x, &mut y, exec);
        y
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64], exec: Execution) {
        exec.fill(y, |i| self.row(i).map(|(j, v)| v * x[j]).sum());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn assembly_drops_zeros_and_merges() {
        let rows = vec![
            vec![(1, c(1.0, 1.0)), (0, c(0.0, 0.0))],
            vec![(0, c(0.5, -1.0)), (0, c(0.5, 0.0)), (1, c(2.0, 0.0))],
        ];
        let m = CsrMatrix::from_rows(2, rows).unwrap();
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(1, 0), c(1.0, -1.0));
        assert_eq!(m.hermiticity_deviation(), 0.0);
    }

    #[test]
    fn non_hermitian_rejected() {
        let rows = vec![vec![(1, c(1.0, 0.0))], vec![]];
        assert!(matches!(
            CsrMatrix::hermitian_from_rows(2, rows),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn matvec_paths_agree() {
        let dim = 50;
        let rows = (0..dim)
            .map(|i| {
                let mut r = vec![(i, c(i as f64, 0.0))];
                if i + 3 < dim {
                    r.push((i + 3, c(0.3, 0.1 * i as f64)));
                }
                if i >= 3 {
                    r.push((i - 3, c(0.3, -0.1 * (i - 3) as f64)));
                }
                r
            })
            .collect();
        let m = CsrMatrix::hermitian_from_rows(dim, rows).unwrap();
        let x: Vec<Complex64> = (0..dim).map(|i| c((i as f64).sin(), (i as f64).cos())).collect();
        let a = m.matvec(&x, Execution::Parallel);
        let b = m.matvec(&x, Execution::Sequential);
        assert_eq!(a, b);
        let dense = m.to_dense() * nalgebra::DVector::from_vec(x);
        for i in 0..dim {
            assert!((dense[i] - a[i]).norm() < 1e-12);
        }
    }
}
