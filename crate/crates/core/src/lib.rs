//! Workbench for the two-photon Dicke-Stark model.
//!
//! * [`model`]: parameters, phase boundaries, phase labels
//! * [`meanfield`]: mean-field energy functional and order parameter
//! * [`fluctuations`]: Bogoliubov treatment of the quadratic fluctuations
//! * [`exact_diag`]: sparse Hamiltonian and Lanczos ground states
//! * [`ion`]: trapped-ion parameter map and drive diagnostics
//! * [`dynamics`]: time evolution of the full drive against the effective model

pub mod config;
pub mod dynamics;
pub mod error;
pub mod exact_diag;
pub mod fluctuations;
pub mod fock;
pub mod ion;
pub mod meanfield;
pub mod model;
pub mod par;

pub use error::{Error, Result};
pub use model::{classify_phase, collapse_coupling, critical_rabi, ModelParams, PhaseLabel};
pub use par::Execution;

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}
