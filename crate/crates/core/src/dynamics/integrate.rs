use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::drive::DrivenHamiltonian;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Norm drift tolerated over an accepted trajectory.
pub const NORM_TOL: f64 = 1e-8;

/// A (possibly time-dependent) Hamiltonian acting on state vectors.
pub trait Generator {
    fn dim(&self) -> usize;
    /// `y = H(t) x`.
    fn apply(&self, t: f64, x: &[Complex64], y: &mut [Complex64]);
    /// Upper bound on the fastest angular frequency of the dynamics.
    fn max_angular_frequency(&self) -> f64;
}

impl Generator for DrivenHamiltonian {
    fn dim(&self) -> usize {
        DrivenHamiltonian::dim(self)
    }
    fn apply(&self, t: f64, x: &[Complex64], y: &mut [Complex64]) {
        DrivenHamiltonian::apply(self, t, x, y)
    }
    fn max_angular_frequency(&self) -> f64 {
        DrivenHamiltonian::max_angular_frequency(self)
    }
}

/// Time-independent dense Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticHamiltonian(pub DMatrix<Complex64>);

impl Generator for StaticHamiltonian {
    fn dim(&self) -> usize {
        self.0.nrows()
    }
    fn apply(&self, _t: f64, x: &[Complex64], y: &mut [Complex64]) {
        let h = &self.0;
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = (0..h.ncols()).map(|j| h[(i, j)] * x[j]).sum();
        }
    }
    fn max_angular_frequency(&self) -> f64 {
        // Gershgorin bound on the spectral radius
        self.0.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    /// Time step; `None` picks `1/(80 f_max)`.
    pub dt: Option<f64>,
    /// Number of recorded intervals; states are stored at `samples + 1` times.
    pub samples: usize,
    pub norm_tol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { dt: None, samples: 1, norm_tol: NORM_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    /// `|psi| - 1` at each recorded time.
    pub norms: Vec<f64>,
    /// Largest `| |psi| - 1 |` over every step.
    pub max_norm_drift: f64,
    pub dt: f64,
    pub steps: usize,
}

impl Trajectory {
    pub fn final_state(&self) -> &[Complex64] {
        self.states.last().expect("trajectory has at least one state")
    }
}

pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<x|y>`.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// `|<x|y>|^2`.
pub fn fidelity(x: &[Complex64], y: &[Complex64]) -> f64 {
    inner(x, y).norm_sqr()
}

/// Largest admissible step, `1/(20 f_max)` with `f_max` in cycles.
pub fn max_step<G: Generator + ?Sized>(h: &G) -> f64 {
    TAU / (20.0 * h.max_angular_frequency())
}

/// Fixed-step fourth-order Runge-Kutta for `i dpsi/dt = H(t) psi`, with the
/// Hamiltonian sampled at the step midpoint for the two inner stages.
pub fn evolve<G: Generator + ?Sized>(
    h: &G,
    psi0: &[Complex64],
    duration: f64,
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    let dim = h.dim();
    if psi0.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: psi0.len() });
    }
    if (norm(psi0) - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParams("initial state is not normalized".into()));
    }
    if !(duration >= 0.0) || !duration.is_finite() {
        return Err(Error::InvalidParams(format!("duration {duration} must be finite and >= 0")));
    }
    let max_dt = max_step(h);
    let dt_req = match opts.dt {
        Some(dt) if !(dt > 0.0) => return Err(Error::InvalidParams(format!("dt = {dt} must be > 0"))),
        Some(dt) if dt > max_dt => return Err(Error::StepTooLarge { dt, max_dt }),
        Some(dt) => dt,
        None => max_dt / 4.0,
    };
    let samples = opts.samples.max(1);
    // whole number of steps per sample interval
    let per_sample = ((duration / samples as f64) / dt_req).ceil().max(1.0) as usize;
    let steps = per_sample * samples;
    let dt = if duration == 0.0 { 0.0 } else { duration / steps as f64 };

    let mut psi = psi0.to_vec();
    let mut times = vec![0.0];
    let mut states = vec![psi.clone()];
    let mut norms = vec![norm(&psi) - 1.0];
    let mut max_drift = norms[0].abs();
    let mut k1 = vec![ZERO; dim];
    let mut k2 = vec![ZERO; dim];
    let mut k3 = vec![ZERO; dim];
    let mut k4 = vec![ZERO; dim];
    let mut tmp = vec![ZERO; dim];
    let mi = Complex64::new(0.0, -1.0);
    if dt > 0.0 {
        for step in 0..steps {
            let t = step as f64 * dt;
            let tm = t + dt / 2.0;
            h.apply(t, &psi, &mut k1);
            k1.iter_mut().for_each(|z| *z *= mi);
            for i in 0..dim {
                tmp[i] = psi[i] + k1[i] * (dt / 2.0);
            }
            h.apply(tm, &tmp, &mut k2);
            k2.iter_mut().for_each(|z| *z *= mi);
            for i in 0..dim {
                tmp[i] = psi[i] + k2[i] * (dt / 2.0);
            }
            h.apply(tm, &tmp, &mut k3);
            k3.iter_mut().for_each(|z| *z *= mi);
            for i in 0..dim {
                tmp[i] = psi[i] + k3[i] * dt;
            }
            h.apply(t + dt, &tmp, &mut k4);
            k4.iter_mut().for_each(|z| *z *= mi);
            for i in 0..dim {
                psi[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
            }
            let drift = norm(&psi) - 1.0;
            max_drift = max_drift.max(drift.abs());
            if max_drift > opts.norm_tol {
                return Err(Error::NormDrift { drift: max_drift, tolerance: opts.norm_tol });
            }
            if (step + 1) % per_sample == 0 {
                times.push((step + 1) as f64 * dt);
                states.push(psi.clone());
                norms.push(drift);
            }
        }
    } else {
        for _ in 0..samples {
            times.push(0.0);
            states.push(psi.clone());
            norms.push(norms[0]);
        }
    }
    Ok(Trajectory { times, states, norms, max_norm_drift: max_drift, dt, steps })
}

/// Exact propagator of a static Hermitian matrix through its eigenbasis.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    vectors: DMatrix<Complex64>,
    values: DVector<f64>,
}

impl ExactPropagator {
    pub fn new(h: &DMatrix<Complex64>) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::DimensionMismatch { expected: h.nrows(), actual: h.ncols() });
        }
        let dev = (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if dev > 1e-10 * h.iter().map(|z| z.norm()).fold(1.0, f64::max) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let eig = h.clone().symmetric_eigen();
        Ok(ExactPropagator { vectors: eig.eigenvectors, values: eig.eigenvalues })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.values
    }

    /// `exp(-i H t) psi`.
    pub fn propagate(&self, psi: &[Complex64], t: f64) -> Vec<Complex64> {
        let v = DVector::from_column_slice(psi);
        let mut c = self.vectors.adjoint() * v;
        for (ci, e) in c.iter_mut().zip(self.values.iter()) {
            *ci *= Complex64::from_polar(1.0, -e * t);
        }
        (&self.vectors * c).iter().copied().collect()
    }
}
