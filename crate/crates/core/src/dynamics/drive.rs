use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ion::IonDriveParams;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Index of `|q> (x) |n>` with `q = 0` the excited (`sigma_z = +1`) level.
#[inline]
pub fn qubit_fock_index(q: usize, n: usize, n_max: usize) -> usize {
    q * (n_max + 1) + n
}

/// Boson factor multiplying `sigma_+` in a drive term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DriveOp {
    /// `sigma_+ a^2`
    SigmaPlusA2,
    /// `sigma_+ a^dag^2`
    SigmaPlusAd2,
    /// `sigma_+`
    SigmaPlus,
    /// `sigma_+ a`
    SigmaPlusA,
    /// `sigma_+ a^dag`
    SigmaPlusAd,
    /// `sigma_+ n`
    SigmaPlusN,
}

impl DriveOp {
    pub fn as_str(&self) -> &'static str {
        match self {
            DriveOp::SigmaPlusA2 => "sp_a2",
            DriveOp::SigmaPlusAd2 => "sp_ad2",
            DriveOp::SigmaPlus => "sp",
            DriveOp::SigmaPlusA => "sp_a",
            DriveOp::SigmaPlusAd => "sp_ad",
            DriveOp::SigmaPlusN => "sp_n",
        }
    }

    /// Nonzero entries `(row, col, value)` of the boson factor on `0..=n_max`.
    fn boson_entries(&self, n_max: usize) -> Vec<(usize, usize, f64)> {
        let nf = |n: usize| n as f64;
        match self {
            DriveOp::SigmaPlusA2 => (2..=n_max).map(|n| (n - 2, n, (nf(n) * nf(n - 1)).sqrt())).collect(),
            DriveOp::SigmaPlusAd2 => (0..=n_max.saturating_sub(2))
                .map(|n| (n + 2, n, (nf(n + 1) * nf(n + 2)).sqrt()))
                .collect(),
            DriveOp::SigmaPlus => (0..=n_max).map(|n| (n, n, 1.0)).collect(),
            DriveOp::SigmaPlusA => (1..=n_max).map(|n| (n - 1, n, nf(n).sqrt())).collect(),
            DriveOp::SigmaPlusAd => (0..n_max).map(|n| (n + 1, n, nf(n + 1).sqrt())).collect(),
            DriveOp::SigmaPlusN => (1..=n_max).map(|n| (n, n, nf(n))).collect(),
        }
    }
}

/// `amplitude * op * exp(-i frequency t)` plus its Hermitian conjugate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveTerm {
    pub op: DriveOp,
    pub amplitude: Complex64,
    /// Angular frequency (rad/ms).
    pub frequency: f64,
    /// Entries of `op` on qubit (x) Fock space.
    entries: Vec<(usize, usize, f64)>,
}

impl DriveTerm {
    pub fn new(op: DriveOp, amplitude: Complex64, frequency: f64, n_max: usize) -> Self {
        let entries = op
            .boson_entries(n_max)
            .into_iter()
            .map(|(i, j, v)| (qubit_fock_index(0, i, n_max), qubit_fock_index(1, j, n_max), v))
            .collect();
        DriveTerm { op, amplitude, frequency, entries }
    }

    /// Largest matrix element of `op`; `op` has at most one entry per row and
    /// column, so this is its operator norm.
    fn op_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.2.abs()).fold(0.0, f64::max)
    }
}

/// Time-dependent Hamiltonian given as a sum of drive terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrivenHamiltonian {
    pub n_max: usize,
    pub terms: Vec<DriveTerm>,
}

impl DrivenHamiltonian {
    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    /// `y = H(t) x`.
    pub fn apply(&self, t: f64, x: &[Complex64], y: &mut [Complex64]) {
        y.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for term in &self.terms {
            let c = term.amplitude * Complex64::from_polar(1.0, -term.frequency * t);
            let cc = c.conj();
            for &(i, j, v) in &term.entries {
                y[i] += c * v * x[j];
                y[j] += cc * v * x[i];
            }
        }
    }

    /// Dense `H(t)`.
    pub fn at(&self, t: f64) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut h = DMatrix::zeros(d, d);
        for term in &self.terms {
            let c = term.amplitude * Complex64::from_polar(1.0, -term.frequency * t);
            for &(i, j, v) in &term.entries {
                h[(i, j)] += c * v;
                h[(j, i)] += c.conj() * v;
            }
        }
        h
    }

    /// Upper bound on the fastest angular frequency in the dynamics:
    /// largest drive frequency plus the operator-norm bound of `H`.
    pub fn max_angular_frequency(&self) -> f64 {
        let f = self.terms.iter().map(|t| t.frequency.abs()).fold(0.0, f64::max);
        let h: f64 = self.terms.iter().map(|t| 2.0 * t.amplitude.norm() * t.op_norm()).sum();
        f + h
    }
}

/// Single-ion Hamiltonian of the three drives in the frame rotating at the
/// reference frequency `Omega`, expanded to second order in `eta`:
///
/// * second red/blue sidebands `-i eta^2 Omega_{r,b}/4 sigma_+ a^2, a^dag^2` at `delta_{r,b}`
/// * carrier `-(Omega_0/2) sigma_+` and Stark term `U sigma_+ n`
/// * off-resonant first sidebands of the red/blue tones at `-w + delta_r`, `w + delta_b`
/// * first sidebands of the carrier at `+-w`
///
/// Terms with zero amplitude are dropped.
pub fn build_full_drive(drive: &IonDriveParams, n_max: usize) -> Result<DrivenHamiltonian> {
    drive.validate()?;
    if n_max < 4 {
        return Err(Error::CutoffTooSmall { n_max, min: 4 });
    }
    let d = drive;
    let eta2 = d.eta * d.eta;
    let w = d.omega_trap;
    let u = eta2 * d.omega_s / 2.0;
    let r = |x: f64| Complex64::new(x, 0.0);
    let candidates = [
        (DriveOp::SigmaPlusA2, -I * eta2 * d.omega_r / 4.0, d.delta_r),
        (DriveOp::SigmaPlusAd2, -I * eta2 * d.omega_b / 4.0, d.delta_b),
        (DriveOp::SigmaPlus, r(-d.omega_0() / 2.0), 0.0),
        (DriveOp::SigmaPlusN, r(u), 0.0),
        (DriveOp::SigmaPlusA, r(-d.eta * d.omega_r / 2.0), -w + d.delta_r),
        (DriveOp::SigmaPlusAd, r(-d.eta * d.omega_b / 2.0), w + d.delta_b),
        (DriveOp::SigmaPlusA, -I * d.eta * d.omega_s / 2.0, w),
        (DriveOp::SigmaPlusAd, -I * d.eta * d.omega_s / 2.0, -w),
    ];
    let terms = candidates
        .into_iter()
        .filter(|(_, a, _)| a.norm() > 0.0)
        .map(|(op, a, f)| DriveTerm::new(op, a, f, n_max))
        .collect();
    Ok(DrivenHamiltonian { n_max, terms })
}

/// Treatment of the second-order denominators `1/(w -+ delta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Denominators {
    /// `1/(w -+ delta) ~ 1/w`.
    #[default]
    Approximate,
    /// Average of `1/w` and the exact detuned denominator.
    Exact,
}

/// Two-photon couplings `(lambda_r, lambda_b)` including the Stark-induced
/// second-order correction.
pub fn effective_couplings(drive: &IonDriveParams, den: Denominators) -> (f64, f64) {
    let d = drive;
    let eta2 = d.eta * d.eta;
    let w = d.omega_trap;
    let (inv_r, inv_b) = match den {
        Denominators::Approximate => (1.0 / w, 1.0 / w),
        Denominators::Exact => (
            0.5 * (1.0 / w + 1.0 / (w - d.delta_r)),
            0.5 * (1.0 / w + 1.0 / (w + d.delta_b)),
        ),
    };
    let lambda_r = eta2 * d.omega_r / 8.0 - eta2 * d.omega_s * d.omega_r / 4.0 * inv_r;
    let lambda_b = eta2 * d.omega_b / 8.0 + eta2 * d.omega_s * d.omega_b / 4.0 * inv_b;
    (lambda_r, lambda_b)
}

/// Dense effective two-photon Rabi-Stark Hamiltonian on qubit (x) Fock:
/// `w_c n + (w_q/2) sigma_z + U n sigma_z
///  + lambda_r (sigma_+ a^2 + h.c.) + lambda_b (sigma_+ a^dag^2 + h.c.)`.
/// With balanced drives `lambda_r = lambda_b = lambda` and the coupling is
/// `lambda sigma_x (a^2 + a^dag^2)`.
pub fn build_effective(
    drive: &IonDriveParams,
    omega_c: f64,
    n_max: usize,
    den: Denominators,
) -> Result<DMatrix<Complex64>> {
    drive.validate()?;
    if n_max < 2 {
        return Err(Error::CutoffTooSmall { n_max, min: 2 });
    }
    let u = drive.eta * drive.eta * drive.omega_s / 2.0;
    let omega_q = -drive.omega_0() - drive.omega_big;
    let (lr, lb) = effective_couplings(drive, den);
    Ok(effective_matrix(omega_c, omega_q, u, lr, lb, n_max))
}

pub(crate) fn effective_matrix(
    omega_c: f64,
    omega_q: f64,
    u: f64,
    lambda_r: f64,
    lambda_b: f64,
    n_max: usize,
) -> DMatrix<Complex64> {
    let d = 2 * (n_max + 1);
    let mut h = DMatrix::<Complex64>::zeros(d, d);
    for q in 0..2 {
        let sz = if q == 0 { 1.0 } else { -1.0 };
        for n in 0..=n_max {
            let k = qubit_fock_index(q, n, n_max);
            h[(k, k)] = Complex64::new(omega_c * n as f64 + sz * (omega_q / 2.0 + u * n as f64), 0.0);
        }
    }
    for (op, lam) in [(DriveOp::SigmaPlusA2, lambda_r), (DriveOp::SigmaPlusAd2, lambda_b)] {
        for (i, j, v) in op.boson_entries(n_max) {
            let (r, c) = (qubit_fock_index(0, i, n_max), qubit_fock_index(1, j, n_max));
            h[(r, c)] += lam * v;
            h[(c, r)] += lam * v;
        }
    }
    h
}

/// Fastest frequency in cycles for a drive, `max_angular_frequency / 2 pi`.
pub fn max_cycle_frequency(h: &DrivenHamiltonian) -> f64 {
    h.max_angular_frequency() / TAU
}
