//! Restarted Lanczos with full reorthogonalization.
//!
//! Each cycle builds a Krylov basis of at most `krylov_dim` vectors, keeps all
//! of them orthogonal (two passes of classical Gram-Schmidt), diagonalizes
//! the tridiagonal projection and restarts from the lowest Ritz vector.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::csr::LinearOperator;
use crate::error::{Error, Result};
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Target residual `||H psi - E psi||`.
    pub tol: f64,
    /// Budget of operator applications.
    pub max_iter: usize,
    pub krylov_dim: usize,
    pub exec: Execution,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { tol: 1e-9, max_iter: 20_000, krylov_dim: 80, exec: Execution::Parallel }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateResult {
    pub energy: f64,
    pub vector: Vec<Complex64>,
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn scale(a: &mut [Complex64], s: f64) {
    a.iter_mut().for_each(|z| *z *= s);
}

fn mask_vec(v: &mut [Complex64], mask: Option<&[bool]>) {
    if let Some(m) = mask {
        v.iter_mut().zip(m).filter(|(_, &keep)| !keep).for_each(|(z, _)| *z = Complex64::default());
    }
}

/// Deterministic start vector with support on every (allowed) basis state.
fn start_vector(dim: usize, mask: Option<&[bool]>) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|i| Complex64::new(1.0 + 0.5 * ((i * 7919 % 1009) as f64 / 1009.0), 0.0))
        .collect();
    mask_vec(&mut v, mask);
    let nv = norm(&v);
    scale(&mut v, 1.0 / nv);
    v
}

/// Lowest eigenpair of a Hermitian operator.
pub fn ground_state<O: LinearOperator>(op: &O, opts: &LanczosOptions) -> Result<GroundStateResult> {
    require_converged(lanczos(op, None, opts)?)
}

fn require_converged(r: GroundStateResult) -> Result<GroundStateResult> {
    if r.converged {
        Ok(r)
    } else {
        Err(Error::NoConvergence { iterations: r.iterations, residual: r.residual })
    }
}

/// Lowest eigenpair restricted to the basis states where `mask` is true.
/// The operator must not couple the masked subspace to its complement.
pub fn ground_state_in_sector<O: LinearOperator>(
    op: &O,
    mask: &[bool],
    opts: &LanczosOptions,
) -> Result<GroundStateResult> {
    if mask.len() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), actual: mask.len() });
    }
    if !mask.iter().any(|&b| b) {
        return Err(Error::InvalidParams("empty symmetry sector".into()));
    }
    require_converged(lanczos(op, Some(mask), opts)?)
}

fn lanczos<O: LinearOperator>(
    op: &O,
    mask: Option<&[bool]>,
    opts: &LanczosOptions,
) -> Result<GroundStateResult> {
    let dim = op.dim();
    if dim == 0 {
        return Err(Error::InvalidParams("empty operator".into()));
    }
    let sector_dim = mask.map_or(dim, |m| m.iter().filter(|&&b| b).count());
    let k_max = opts.krylov_dim.max(2).min(sector_dim);
    let mut x = start_vector(dim, mask);
    let mut w = vec![Complex64::default(); dim];
    let mut iterations = 0;
    let mut best = (f64::INFINITY, f64::INFINITY, x.clone());

    loop {
        let mut basis: Vec<Vec<Complex64>> = vec![x.clone()];
        let mut alpha = Vec::with_capacity(k_max);
        let mut beta: Vec<f64> = Vec::with_capacity(k_max);
        for j in 0..k_max {
            op.apply(&basis[j], &mut w, opts.exec);
            mask_vec(&mut w, mask);
            iterations += 1;
            alpha.push(dot(&basis[j], &w).re);
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(q, &w);
                    w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
                }
            }
            let b = norm(&w);
            if j + 1 == k_max || b < 1e-14 {
                break;
            }
            beta.push(b);
            let mut next = w.clone();
            scale(&mut next, 1.0 / b);
            basis.push(next);
        }
        let k = alpha.len();
        let t = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let (i0, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty tridiagonal");
        let s = eig.eigenvectors.column(i0);
        x = vec![Complex64::default(); dim];
        for (q, &c) in basis.iter().zip(s.iter()) {
            x.iter_mut().zip(q).for_each(|(xi, qi)| *xi += qi * c);
        }
        let nx = norm(&x);
        scale(&mut x, 1.0 / nx);

        op.apply(&x, &mut w, opts.exec);
        mask_vec(&mut w, mask);
        iterations += 1;
        let energy = dot(&x, &w).re;
        let residual = norm(&w.iter().zip(&x).map(|(a, b)| a - b * energy).collect::<Vec<_>>());
        if residual < best.1 {
            best = (energy, residual, x.clone());
        }
        if residual < opts.tol || k == sector_dim {
            return Ok(GroundStateResult { energy, vector: x, residual, converged: true, iterations });
        }
        if iterations >= opts.max_iter {
            let (energy, residual, vector) = best;
            return Ok(GroundStateResult { energy, vector, residual, converged: false, iterations });
        }
    }
}

/// Like [`ground_state`] but returns the best iterate, flagged
/// `converged = false`, when the budget runs out.
pub fn ground_state_best_effort<O: LinearOperator>(
    op: &O,
    opts: &LanczosOptions,
) -> Result<GroundStateResult> {
    lanczos(op, None, opts)
}
