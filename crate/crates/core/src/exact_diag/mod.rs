//! Exact diagonalization in the symmetric Dicke sector.
//!
//! The Hilbert space is a truncated Fock space times the `j = N/2` Dicke
//! multiplet. The Hamiltonian is stored in CSR form (or applied matrix-free)
//! and its ground state found by restarted Lanczos.
//!
//! A finite system never breaks the parity symmetry, so `<J_x>` vanishes in
//! every parity eigenstate. Superradiance shows up in `<n>` and `<J_x^2>`
//! instead.

mod collapse;
mod csr;
pub mod dump;
mod hamiltonian;
mod lanczos;
mod observables;

pub use collapse::{auto_cutoff, classify_differences, collapse_scan, CollapseReport, CollapseVerdict, CAUCHY_TOL};
pub use csr::{CsrMatrix, LinearOperator, HERMITIAN_TOL};
pub use hamiltonian::{build_hamiltonian, build_parity, HilbertSpace, MatrixFreeHamiltonian};
pub use lanczos::{
    ground_state, ground_state_best_effort, ground_state_in_sector, GroundStateResult, LanczosOptions,
};
pub use observables::{observables, state_observables, Observables};

use num_complex::Complex64;

use crate::error::Result;
use crate::model::ModelParams;
use crate::par::Execution;

/// Ground state in the even sector (parity eigenvalue `+1`, the sector of
/// `|0 photons, all down>`) together with its observables.
pub fn parity_ground_state(
    params: &ModelParams,
    n_max: usize,
    opts: &LanczosOptions,
) -> Result<(GroundStateResult, Observables)> {
    let space = HilbertSpace::new(n_max, params.n)?;
    let h = build_hamiltonian(params, &space, opts.exec)?;
    let mask = space.sector_mask(Complex64::new(1.0, 0.0));
    let gs = ground_state_in_sector(&h, &mask, opts)?;
    let obs = observables(&gs, &space)?;
    Ok((gs, obs))
}

/// One row of an exact-diagonalization sweep.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EdPoint {
    pub g: f64,
    pub u: f64,
    pub energy: f64,
    pub residual: f64,
    pub observables: Observables,
}

/// Parity-resolved ground states over a list of parameter points, run in
/// parallel across points.
pub fn ed_sweep(
    points: &[ModelParams],
    n_max: usize,
    tol: f64,
    exec: Execution,
) -> Result<Vec<EdPoint>> {
    let opts = LanczosOptions { tol, exec: Execution::Sequential, ..Default::default() };
    exec.map(points, |p| {
        let (gs, obs) = parity_ground_state(p, n_max, &opts)?;
        Ok(EdPoint { g: p.g, u: p.u, energy: gs.energy, residual: gs.residual, observables: obs })
    })
    .into_iter()
    .collect()
}
