use serde::{Deserialize, Serialize};

use super::hamiltonian::{build_hamiltonian, HilbertSpace};
use super::lanczos::{ground_state_best_effort, LanczosOptions};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CollapseVerdict {
    Converged,
    Diverging,
    Indeterminate,
}

impl CollapseVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            CollapseVerdict::Converged => "converged",
            CollapseVerdict::Diverging => "diverging",
            CollapseVerdict::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseReport {
    pub cutoffs: Vec<usize>,
    pub energies: Vec<f64>,
    /// `energies[k+1] - energies[k]`.
    pub differences: Vec<f64>,
    /// Energy change per added Fock state over the last step.
    pub divergence_rate: f64,
    pub all_converged: bool,
    pub verdict: CollapseVerdict,
}

/// Cauchy threshold on the last energy difference.
pub const CAUCHY_TOL: f64 = 1e-8;

/// Verdict from successive energy differences.
///
/// * `Converged`: last difference below [`CAUCHY_TOL`].
/// * `Diverging`: energy still falling and the differences are not shrinking.
/// * `Indeterminate`: anything else, including slow convergence at the boundary.
pub fn classify_differences(diffs: &[f64]) -> CollapseVerdict {
    let Some(&last) = diffs.last() else { return CollapseVerdict::Indeterminate };
    if last.abs() < CAUCHY_TOL {
        return CollapseVerdict::Converged;
    }
    if diffs.len() >= 2 {
        let prev = diffs[diffs.len() - 2];
        if last < 0.0 && prev < 0.0 && last.abs() >= prev.abs() {
            return CollapseVerdict::Diverging;
        }
    }
    CollapseVerdict::Indeterminate
}

/// Ground energy along an ascending ladder of Fock cutoffs.
pub fn collapse_scan(params: &ModelParams, ladder: &[usize], exec: Execution) -> Result<CollapseReport> {
    if ladder.len() < 2 || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams("cutoff ladder must be ascending with >= 2 entries".into()));
    }
    let opts = LanczosOptions { tol: 1e-10, exec: Execution::Sequential, ..Default::default() };
    let runs: Vec<Result<(f64, bool)>> = exec.map(ladder, |&n_max| {
        let space = HilbertSpace::new(n_max, params.n)?;
        let h = build_hamiltonian(params, &space, Execution::Sequential)?;
        let r = ground_state_best_effort(&h, &opts)?;
        Ok((r.energy, r.converged))
    });
    let mut energies = Vec::with_capacity(ladder.len());
    let mut all_converged = true;
    for r in runs {
        let (e, c) = r?;
        energies.push(e);
        all_converged &= c;
    }
    let differences: Vec<f64> = energies.windows(2).map(|w| w[1] - w[0]).collect();
    let k = ladder.len() - 1;
    let divergence_rate = differences[k - 1] / (ladder[k] - ladder[k - 1]) as f64;
    Ok(CollapseReport {
        cutoffs: ladder.to_vec(),
        verdict: classify_differences(&differences),
        energies,
        differences,
        divergence_rate,
        all_converged,
    })
}

/// Double the cutoff from `start` until the ground energy moves by less than
/// `tol`; fails with `NoConvergence` past `ceiling`.
pub fn auto_cutoff(
    params: &ModelParams,
    start: usize,
    tol: f64,
    ceiling: usize,
    opts: &LanczosOptions,
) -> Result<(usize, f64)> {
    let energy = |n_max: usize| -> Result<f64> {
        let space = HilbertSpace::new(n_max, params.n)?;
        let h = build_hamiltonian(params, &space, opts.exec)?;
        Ok(super::lanczos::ground_state(&h, opts)?.energy)
    };
    let mut n_max = start.max(2);
    let mut e = energy(n_max)?;
    let mut steps = 0;
    while 2 * n_max <= ceiling {
        let e2 = energy(2 * n_max)?;
        steps += 1;
        if (e2 - e).abs() < tol {
            return Ok((2 * n_max, e2));
        }
        n_max *= 2;
        e = e2;
    }
    Err(Error::NoConvergence { iterations: steps, residual: f64::NAN })
}
