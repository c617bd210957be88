//! Model parameters, phase boundaries and phase classification.
//!
//! All quantities are expressed in units of the cavity frequency unless a
//! caller builds [`ModelParams`] with a physical `omega_c`; in that case every
//! coupling carries the same unit and [`ModelParams::normalized`] returns the
//! dimensionless ratios.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five numbers defining the two-photon Dicke-Stark Hamiltonian
/// `w_c a^dag a + w_q J_z + (g/N)(J_+ + J_-)(a^2 + a^dag^2) + U a^dag a J_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega_c: f64,
    pub omega_q: f64,
    pub g: f64,
    pub u: f64,
    pub n: usize,
}

/// Phase label of the mean-field ground state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseLabel {
    NormalPhase,
    SuperradiantPhase,
    CollapseRegion,
}

impl PhaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseLabel::NormalPhase => "NP",
            PhaseLabel::SuperradiantPhase => "SP",
            PhaseLabel::CollapseRegion => "collapse",
        }
    }
}

impl ModelParams {
    /// Checked constructor. Requires `omega_c > 0`, `omega_q >= 0`, `N >= 1`,
    /// `g >= 0` and the well-posedness condition `U N < 2 omega_c`.
    pub fn new(omega_c: f64, omega_q: f64, g: f64, u: f64, n: usize) -> Result<Self> {
        let p = ModelParams { omega_c, omega_q, g, u, n };
        p.validate()?;
        Ok(p)
    }

    /// The canonical operating point (`w_c = 1`, `w_q = 0.015`, `N = 50`).
    pub fn canonical(g: f64, u: f64) -> Result<Self> {
        Self::new(1.0, 0.015, g, u, 50)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega_c, self.omega_q, self.g, self.u]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if self.omega_c <= 0.0 {
            return Err(Error::InvalidParams(format!("omega_c = {} must be > 0", self.omega_c)));
        }
        if self.omega_q < 0.0 {
            return Err(Error::InvalidParams(format!("omega_q = {} must be >= 0", self.omega_q)));
        }
        if self.g < 0.0 {
            return Err(Error::InvalidParams(format!("g = {} must be >= 0", self.g)));
        }
        if self.n == 0 {
            return Err(Error::InvalidParams("N must be >= 1".into()));
        }
        if !self.is_well_posed() {
            return Err(Error::InvalidParams(format!(
                "U N = {} must be < 2 omega_c = {}",
                self.u * self.n_f64(),
                2.0 * self.omega_c
            )));
        }
        Ok(())
    }

    /// `U N < 2 w_c`: the bare displaced cavity frequency at beta = 0 is positive.
    pub fn is_well_posed(&self) -> bool {
        self.u * self.n_f64() < 2.0 * self.omega_c
    }

    #[inline]
    pub fn n_f64(&self) -> f64 {
        self.n as f64
    }

    pub fn with_g(&self, g: f64) -> Self {
        ModelParams { g, ..*self }
    }

    pub fn with_u(&self, u: f64) -> Self {
        ModelParams { u, ..*self }
    }

    /// Same model with every frequency divided by `omega_c`.
    pub fn normalized(&self) -> Self {
        let w = self.omega_c;
        ModelParams {
            omega_c: 1.0,
            omega_q: self.omega_q / w,
            g: self.g / w,
            u: self.u / w,
            n: self.n,
        }
    }

    /// Same model with every frequency multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        ModelParams {
            omega_c: self.omega_c * factor,
            omega_q: self.omega_q * factor,
            g: self.g * factor,
            u: self.u * factor,
            n: self.n,
        }
    }
}

/// Critical Rabi coupling `g_t = sqrt(w_c w_q N - U w_q N^2 / 2) / 2`.
pub fn critical_rabi(params: &ModelParams) -> Result<f64> {
    let n = params.n_f64();
    let disc = params.omega_c * params.omega_q * n - params.u * params.omega_q * n * n / 2.0;
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant { quantity: "g_t", value: disc });
    }
    Ok(disc.sqrt() / 2.0)
}

/// Spectral-collapse coupling `g_c = sqrt(w_c^2 - U^2 N^2 / 4) / 2`.
pub fn collapse_coupling(params: &ModelParams) -> Result<f64> {
    let un = params.u * params.n_f64();
    let disc = params.omega_c * params.omega_c - un * un / 4.0;
    if disc < 0.0 {
        // exact tie U N = 2 w_c can round to a tiny negative number
        if disc > -1e-14 * params.omega_c * params.omega_c {
            return Ok(0.0);
        }
        return Err(Error::NegativeDiscriminant { quantity: "g_c", value: disc });
    }
    Ok(disc.sqrt() / 2.0)
}

/// Mean-field phase. Ties: `g == g_t` is superradiant, `g == g_c` is collapse.
pub fn classify_phase(params: &ModelParams) -> PhaseLabel {
    let g_c = collapse_coupling(params).unwrap_or(0.0);
    if params.g >= g_c {
        return PhaseLabel::CollapseRegion;
    }
    match critical_rabi(params) {
        Ok(g_t) if params.g < g_t => PhaseLabel::NormalPhase,
        _ => PhaseLabel::SuperradiantPhase,
    }
}
