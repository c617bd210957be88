//! Time evolution of the single-ion three-drive Hamiltonian against the
//! effective two-photon Rabi-Stark model.
//!
//! States live in qubit (x) Fock(`n_max`), index `q (n_max + 1) + n` with
//! `q = 0` the upper level. The full drive is integrated with fixed-step RK4
//! in the frame rotating at `Omega`; the effective model is static and is
//! propagated exactly. The two are compared after [`frame_transform`].

mod drive;
mod frame;
mod integrate;

pub use drive::{
    build_effective, build_full_drive, effective_couplings, max_cycle_frequency, qubit_fock_index, Denominators,
    DriveOp, DriveTerm, DrivenHamiltonian,
};
pub use frame::{frame_transform, qubit_basis_rotation, qubit_basis_rotation_inv, rotating_frame};
pub use integrate::{
    evolve, fidelity, inner, max_step, norm, EvolveOptions, ExactPropagator, Generator, StaticHamiltonian,
    Trajectory, NORM_TOL,
};

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ion::{drive_at_ratios, IonDriveParams};
use crate::par::Execution;

/// Default Fock cutoff for dynamics.
pub const DEFAULT_N_MAX: usize = 20;

/// `|g> (x) |0>` in the effective frame.
pub fn ground_vacuum(n_max: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 2 * (n_max + 1)];
    v[qubit_fock_index(1, 0, n_max)] = Complex64::new(1.0, 0.0);
    v
}

/// Total population on odd Fock states.
pub fn odd_population(psi: &[Complex64], n_max: usize) -> f64 {
    (0..2)
        .flat_map(|q| (1..=n_max).step_by(2).map(move |n| qubit_fock_index(q, n, n_max)))
        .map(|k| psi[k].norm_sqr())
        .sum()
}

/// Population on the two highest Fock states (truncation monitor).
pub fn edge_population(psi: &[Complex64], n_max: usize) -> f64 {
    (0..2)
        .flat_map(|q| [n_max - 1, n_max].map(move |n| qubit_fock_index(q, n, n_max)))
        .map(|k| psi[k].norm_sqr())
        .sum()
}

/// `<n>` on qubit (x) Fock.
pub fn mean_phonon(psi: &[Complex64], n_max: usize) -> f64 {
    (0..2)
        .flat_map(|q| (0..=n_max).map(move |n| (n, qubit_fock_index(q, n, n_max))))
        .map(|(n, k)| n as f64 * psi[k].norm_sqr())
        .sum()
}

/// `<sigma_z>` on qubit (x) Fock.
pub fn mean_sigma_z(psi: &[Complex64], n_max: usize) -> f64 {
    (0..=n_max)
        .map(|n| psi[qubit_fock_index(0, n, n_max)].norm_sqr() - psi[qubit_fock_index(1, n, n_max)].norm_sqr())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub n_max: usize,
    /// Evolution time; `None` uses `2 pi / (10 lambda)`.
    pub duration: Option<f64>,
    pub dt: Option<f64>,
    pub denominators: Denominators,
    /// Number of equal intervals at which the two evolutions are compared.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n_max: DEFAULT_N_MAX,
            duration: None,
            dt: None,
            denominators: Denominators::Approximate,
            samples: 1000,
        }
    }
}

/// Comparison of the two evolutions at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationSample {
    pub t: f64,
    pub infidelity: f64,
    pub mean_n_full: f64,
    pub mean_n_effective: f64,
    pub sigma_z_full: f64,
    pub sigma_z_effective: f64,
    pub norm_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub omega_r: f64,
    pub omega_trap: f64,
    pub lambda: f64,
    pub duration: f64,
    pub dt: f64,
    pub steps: usize,
    /// Fidelity at the final time.
    pub fidelity: f64,
    pub infidelity: f64,
    /// Infidelity averaged over the sampled times. The final-time value
    /// carries a fast oscillation from the off-resonant terms; the average
    /// does not depend on where the run happens to stop.
    pub mean_infidelity: f64,
    pub max_infidelity: f64,
    pub max_norm_drift: f64,
    /// Odd-Fock population of the full evolution (first-sideband leakage).
    pub odd_population_full: f64,
    pub odd_population_effective: f64,
    pub edge_population: f64,
    pub mean_n_full: f64,
    pub mean_n_effective: f64,
    pub samples: Vec<VerificationSample>,
}

/// Evolve `|g>|0>` (effective frame) under the full drive and the effective
/// model for the same time and compare.
pub fn verify_effective(drive: &IonDriveParams, omega_c: f64, opts: &VerifyOptions) -> Result<VerificationReport> {
    let n_max = opts.n_max;
    let full = build_full_drive(drive, n_max)?;
    let h_eff = build_effective(drive, omega_c, n_max, opts.denominators)?;
    let (lr, lb) = effective_couplings(drive, opts.denominators);
    let lambda = 0.5 * (lr + lb);
    if !(lambda.abs() > 0.0) {
        return Err(Error::InvalidParams("two-photon coupling vanishes".into()));
    }
    let duration = opts.duration.unwrap_or(TAU / (10.0 * lambda.abs()));
    let psi_eff0 = ground_vacuum(n_max);
    let psi_full0 = qubit_basis_rotation_inv(&psi_eff0, n_max);
    let evolve_opts = EvolveOptions { dt: opts.dt, samples: opts.samples.max(1), ..Default::default() };
    let tr = evolve(&full, &psi_full0, duration, &evolve_opts)?;
    let prop = ExactPropagator::new(&h_eff)?;
    let samples: Vec<VerificationSample> = tr
        .times
        .iter()
        .zip(&tr.states)
        .zip(&tr.norms)
        .map(|((&t, st), &nd)| {
            let full_t = frame_transform(st, n_max, drive.omega_big, omega_c, t);
            let eff_t = prop.propagate(&psi_eff0, t);
            VerificationSample {
                t,
                infidelity: 1.0 - fidelity(&full_t, &eff_t),
                mean_n_full: mean_phonon(&full_t, n_max),
                mean_n_effective: mean_phonon(&eff_t, n_max),
                sigma_z_full: mean_sigma_z(&full_t, n_max),
                sigma_z_effective: mean_sigma_z(&eff_t, n_max),
                norm_deviation: nd,
            }
        })
        .collect();
    let later = &samples[1..];
    let mean_infidelity = later.iter().map(|s| s.infidelity).sum::<f64>() / later.len() as f64;
    let max_infidelity = later.iter().map(|s| s.infidelity).fold(f64::NEG_INFINITY, f64::max);
    let full_t = frame_transform(tr.final_state(), n_max, drive.omega_big, omega_c, duration);
    let eff_t = prop.propagate(&psi_eff0, duration);
    let f = fidelity(&full_t, &eff_t);
    Ok(VerificationReport {
        omega_r: drive.omega_r,
        omega_trap: drive.omega_trap,
        lambda,
        duration,
        dt: tr.dt,
        steps: tr.steps,
        fidelity: f,
        infidelity: 1.0 - f,
        mean_infidelity,
        max_infidelity,
        max_norm_drift: tr.max_norm_drift,
        odd_population_full: odd_population(&full_t, n_max),
        odd_population_effective: odd_population(&eff_t, n_max),
        edge_population: edge_population(&full_t, n_max),
        mean_n_full: mean_phonon(&full_t, n_max),
        mean_n_effective: mean_phonon(&eff_t, n_max),
        samples,
    })
}

/// Settings for a sweep of the red Rabi frequency at fixed ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwaSweep {
    pub eta: f64,
    pub omega_trap: f64,
    /// `Omega_S / Omega_r`.
    pub carrier_ratio: f64,
    /// `U / w_c`.
    pub u_ratio: f64,
    /// `w_q / w_c`.
    pub wq_ratio: f64,
}

impl Default for RwaSweep {
    fn default() -> Self {
        RwaSweep {
            eta: 0.1,
            omega_trap: crate::ion::two_pi_khz(4980.0),
            carrier_ratio: 0.6,
            u_ratio: 0.0168,
            wq_ratio: 0.015,
        }
    }
}

impl RwaSweep {
    pub fn drive(&self, omega_r: f64) -> (IonDriveParams, f64) {
        drive_at_ratios(self.eta, self.omega_trap, omega_r, self.carrier_ratio * omega_r, self.u_ratio, self.wq_ratio, 1)
    }
}

/// Full-vs-effective verification at each red Rabi frequency, in parallel.
pub fn rwa_sweep(
    sweep: &RwaSweep,
    omega_r: &[f64],
    opts: &VerifyOptions,
    exec: Execution,
) -> Result<Vec<VerificationReport>> {
    exec.map(omega_r, |&w| {
        let (d, wc) = sweep.drive(w);
        verify_effective(&d, wc, opts)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ion::canonical_drive;

    #[test]
    fn effective_keeps_photon_pairs() {
        let (d, wc) = canonical_drive(1);
        let h = build_effective(&d, wc, 20, Denominators::Approximate).unwrap();
        let p = ExactPropagator::new(&h).unwrap();
        let psi0 = ground_vacuum(20);
        for k in 1..=5 {
            let psi = p.propagate(&psi0, 0.1 * k as f64);
            assert!(odd_population(&psi, 20) < 1e-10);
            assert!((norm(&psi) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn full_matches_effective_short_time() {
        let (d, wc) = canonical_drive(1);
        let opts = VerifyOptions { n_max: 8, duration: Some(0.02), samples: 10, ..Default::default() };
        let r = verify_effective(&d, wc, &opts).unwrap();
        assert!(r.fidelity > 0.999, "{r:?}");
        assert!(r.max_norm_drift < NORM_TOL);
        assert_eq!(r.samples.len(), 11);
        assert!(r.samples[0].infidelity.abs() < 1e-12);
        assert!((r.samples[10].infidelity - r.infidelity).abs() < 1e-15);
        assert!(r.max_infidelity >= r.mean_infidelity);
    }
}
