//! Trapped-ion implementation: laser parameters to model parameters and back.
//!
//! Frequencies are angular and stored in rad/ms, so `2 pi x 1 kHz` is
//! `2 pi`. Use [`two_pi_khz`] to write values the way they are usually quoted.
//!
//! Two second-sideband tones (red `delta_r`, blue `delta_b`) and a carrier of
//! Rabi frequency `Omega_S` give, after the rotating-wave and second-order
//! eliminations, the two-photon Rabi-Stark Hamiltonian with
//!
//! * `U = eta^2 Omega_S / 2`
//! * `lambda = eta^2 Omega_r (1 - 2 eps_S) / 8`, `eps_S = Omega_S / omega_trap`
//! * `w_q = -Omega_0 - Omega`, `Omega_0 = Omega_S (1 - eta^2/2)`
//! * `delta_{r,b} = Omega +- 2 w_c` (two-photon resonance)
//!
//! For `N` ions the collective coupling is `g = N lambda`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::config::{render, Config};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// `x` in units of `2 pi x kHz`, as rad/ms.
pub fn two_pi_khz(x: f64) -> f64 {
    TAU * x
}

/// Inverse of [`two_pi_khz`].
pub fn to_two_pi_khz(w: f64) -> f64 {
    w / TAU
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IonDriveParams {
    pub eta: f64,
    pub omega_trap: f64,
    pub omega_r: f64,
    pub omega_b: f64,
    pub omega_s: f64,
    /// Rotating-frame frequency `Omega`.
    pub omega_big: f64,
    pub delta_r: f64,
    pub delta_b: f64,
    pub n_ions: usize,
}

impl IonDriveParams {
    pub fn validate(&self) -> Result<()> {
        let vals = [
            self.eta,
            self.omega_trap,
            self.omega_r,
            self.omega_b,
            self.omega_s,
            self.omega_big,
            self.delta_r,
            self.delta_b,
        ];
        if vals.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("non-finite drive parameter".into()));
        }
        if !(self.eta > 0.0 && self.eta <= 0.3) {
            return Err(Error::InvalidParams(format!("eta = {} outside (0, 0.3]", self.eta)));
        }
        if self.omega_r < 0.0 || self.omega_b < 0.0 || self.omega_s < 0.0 {
            return Err(Error::InvalidParams("Rabi frequencies must be >= 0".into()));
        }
        if self.omega_trap <= 0.0 {
            return Err(Error::InvalidParams("omega_trap must be > 0".into()));
        }
        if self.n_ions == 0 {
            return Err(Error::InvalidParams("n_ions must be >= 1".into()));
        }
        Ok(())
    }

    pub fn epsilon_s(&self) -> f64 {
        self.omega_s / self.omega_trap
    }

    /// `Omega_0 = Omega_S (1 - eta^2/2)`.
    pub fn omega_0(&self) -> f64 {
        self.omega_s * (1.0 - self.eta * self.eta / 2.0)
    }

    pub const CONFIG_KEYS: &'static [&'static str] = &[
        "eta",
        "omega_trap_2pi_khz",
        "omega_r_2pi_khz",
        "omega_b_2pi_khz",
        "omega_s_2pi_khz",
        "omega_big_2pi_khz",
        "delta_r_2pi_khz",
        "delta_b_2pi_khz",
        "n_ions",
    ];

    pub fn to_config(&self) -> String {
        let f = |w: f64| format!("{}", to_two_pi_khz(w));
        render(&[
            ("eta", format!("{}", self.eta)),
            ("omega_trap_2pi_khz", f(self.omega_trap)),
            ("omega_r_2pi_khz", f(self.omega_r)),
            ("omega_b_2pi_khz", f(self.omega_b)),
            ("omega_s_2pi_khz", f(self.omega_s)),
            ("omega_big_2pi_khz", f(self.omega_big)),
            ("delta_r_2pi_khz", f(self.delta_r)),
            ("delta_b_2pi_khz", f(self.delta_b)),
            ("n_ions", format!("{}", self.n_ions)),
        ])
    }

    /// Every key is required.
    pub fn from_config(text: &str) -> Result<Self> {
        let c = Config::parse(text, Self::CONFIG_KEYS)?;
        Self::from_parsed(&c)
    }

    pub fn from_parsed(c: &Config) -> Result<Self> {
        let req = |k: &str| -> Result<f64> {
            c.f64(k)?.ok_or_else(|| Error::Config { line: 0, message: format!("missing key `{k}`") })
        };
        let khz = |k: &str| req(k).map(two_pi_khz);
        let d = IonDriveParams {
            eta: req("eta")?,
            omega_trap: khz("omega_trap_2pi_khz")?,
            omega_r: khz("omega_r_2pi_khz")?,
            omega_b: khz("omega_b_2pi_khz")?,
            omega_s: khz("omega_s_2pi_khz")?,
            omega_big: khz("omega_big_2pi_khz")?,
            delta_r: khz("delta_r_2pi_khz")?,
            delta_b: khz("delta_b_2pi_khz")?,
            n_ions: c
                .usize("n_ions")?
                .ok_or_else(|| Error::Config { line: 0, message: "missing key `n_ions`".into() })?,
        };
        d.validate().map_err(|e| Error::Config { line: 0, message: e.to_string() })?;
        Ok(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    Pass,
    Marginal,
    Fail,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Marginal => "marginal",
            CheckStatus::Fail => "fail",
        }
    }
}

/// One approximation-validity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub name: String,
    pub value: f64,
    /// Pass while `value` is on the good side of this threshold.
    pub pass_threshold: f64,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappedModel {
    /// Model parameters in angular kHz.
    pub params: ModelParams,
    /// Single-ion two-photon coupling `lambda = g / N`.
    pub lambda: f64,
    pub epsilon_s: f64,
    pub drive: IonDriveParams,
    pub diagnostics: Vec<Diagnostic>,
}

impl MappedModel {
    /// Dimensionless ratios to `w_c`.
    pub fn normalized(&self) -> ModelParams {
        self.params.normalized()
    }
}

/// Relative tolerance on the detuning consistency check.
pub const DETUNING_RTOL: f64 = 1e-9;

/// Model parameters realized by `drive` for a cavity frequency `omega_c`.
pub fn forward_map(drive: &IonDriveParams, omega_c: f64) -> Result<MappedModel> {
    drive.validate()?;
    if !(omega_c > 0.0) {
        return Err(Error::InvalidParams(format!("omega_c = {omega_c} must be > 0")));
    }
    let difference = drive.delta_r - drive.delta_b;
    let expected = 4.0 * omega_c;
    if (difference - expected).abs() > DETUNING_RTOL * expected {
        return Err(Error::InconsistentDetunings { difference, expected });
    }
    let eta2 = drive.eta * drive.eta;
    let eps = drive.epsilon_s();
    let u = eta2 * drive.omega_s / 2.0;
    let lambda = eta2 * drive.omega_r / 8.0 * (1.0 - 2.0 * eps);
    let omega_q = -drive.omega_0() - drive.omega_big;
    let params = ModelParams::new(omega_c, omega_q, lambda * drive.n_ions as f64, u, drive.n_ions)?;
    Ok(MappedModel {
        params,
        lambda,
        epsilon_s: eps,
        drive: *drive,
        diagnostics: rwa_diagnostics(drive, &DiagnosticThresholds::default()),
    })
}

/// Blue-sideband Rabi frequency that balances the Stark-shifted red coupling,
/// `Omega_b = Omega_r (1 - 2 eps_S) / (1 + 2 eps_S)`.
pub fn balanced_blue_rabi(omega_r: f64, epsilon_s: f64) -> Result<f64> {
    if !(epsilon_s < 0.5) {
        return Err(Error::DegenerateBalance { epsilon_s });
    }
    Ok(omega_r * (1.0 - 2.0 * epsilon_s) / (1.0 + 2.0 * epsilon_s))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardwareLimits {
    pub max_rabi: f64,
    pub min_trap: f64,
    pub max_trap: f64,
}

impl Default for HardwareLimits {
    fn default() -> Self {
        HardwareLimits {
            max_rabi: two_pi_khz(500.0),
            min_trap: two_pi_khz(100.0),
            max_trap: two_pi_khz(10_000.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IonConstraints {
    pub eta: f64,
    pub omega_trap: f64,
    pub n_ions: usize,
    pub limits: HardwareLimits,
}

impl IonConstraints {
    pub fn new(eta: f64, omega_trap: f64, n_ions: usize) -> Self {
        IonConstraints { eta, omega_trap, n_ions, limits: HardwareLimits::default() }
    }
}

/// Drive parameters realizing `target` (angular kHz) under `constraints`.
pub fn inverse_map(target: &ModelParams, constraints: &IonConstraints) -> Result<IonDriveParams> {
    target.validate()?;
    let c = constraints;
    if c.n_ions != target.n {
        return Err(Error::DimensionMismatch { expected: target.n, actual: c.n_ions });
    }
    if !(c.eta > 0.0 && c.eta <= 0.3) {
        return Err(Error::InvalidParams(format!("eta = {} outside (0, 0.3]", c.eta)));
    }
    if c.omega_trap < c.limits.min_trap {
        return Err(Error::Infeasible { constraint: "omega_trap_min", value: c.omega_trap, limit: c.limits.min_trap });
    }
    if c.omega_trap > c.limits.max_trap {
        return Err(Error::Infeasible { constraint: "omega_trap", value: c.omega_trap, limit: c.limits.max_trap });
    }
    let eta2 = c.eta * c.eta;
    let omega_s = 2.0 * target.u / eta2;
    if omega_s > c.limits.max_rabi {
        return Err(Error::Infeasible { constraint: "Omega_S", value: omega_s, limit: c.limits.max_rabi });
    }
    let eps = omega_s / c.omega_trap;
    if !(eps < 0.5) {
        return Err(Error::DegenerateBalance { epsilon_s: eps });
    }
    let lambda = target.g / target.n_f64();
    let omega_r = 8.0 * lambda / (eta2 * (1.0 - 2.0 * eps));
    if omega_r > c.limits.max_rabi {
        return Err(Error::Infeasible { constraint: "Omega_r", value: omega_r, limit: c.limits.max_rabi });
    }
    let omega_b = balanced_blue_rabi(omega_r, eps)?;
    let omega_0 = omega_s * (1.0 - eta2 / 2.0);
    let omega_big = -(omega_0 + target.omega_q);
    let drive = IonDriveParams {
        eta: c.eta,
        omega_trap: c.omega_trap,
        omega_r,
        omega_b,
        omega_s,
        omega_big,
        delta_r: omega_big + 2.0 * target.omega_c,
        delta_b: omega_big - 2.0 * target.omega_c,
        n_ions: c.n_ions,
    };
    drive.validate()?;
    Ok(drive)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticThresholds {
    /// Drive-to-trap ratio below which the RWA passes.
    pub rwa_pass: f64,
    pub rwa_marginal: f64,
    /// Breathing-mode margin in units of the trap frequency.
    pub breathing_pass: f64,
    pub breathing_marginal: f64,
    pub lamb_dicke_pass: f64,
    pub lamb_dicke_marginal: f64,
    /// Mean phonon number for the Lamb-Dicke check.
    pub n_bar: f64,
}

impl Default for DiagnosticThresholds {
    fn default() -> Self {
        DiagnosticThresholds {
            rwa_pass: 0.1,
            rwa_marginal: 0.3,
            breathing_pass: 0.05,
            breathing_marginal: 0.01,
            lamb_dicke_pass: 0.3,
            lamb_dicke_marginal: 0.6,
            n_bar: 1.0,
        }
    }
}

fn upper(name: &str, value: f64, pass: f64, marginal: f64) -> Diagnostic {
    let status = if value < pass {
        CheckStatus::Pass
    } else if value < marginal {
        CheckStatus::Marginal
    } else {
        CheckStatus::Fail
    };
    Diagnostic { name: name.into(), value, pass_threshold: pass, status }
}

fn lower(name: &str, value: f64, pass: f64, marginal: f64) -> Diagnostic {
    let status = if value >= pass {
        CheckStatus::Pass
    } else if value >= marginal {
        CheckStatus::Marginal
    } else {
        CheckStatus::Fail
    };
    Diagnostic { name: name.into(), value, pass_threshold: pass, status }
}

/// Validity margins of the approximations behind the effective model.
///
/// * RWA: drive strengths and sideband detunings relative to `omega_trap`
/// * breathing mode at `sqrt(3) omega_trap`: distance (in units of
///   `omega_trap`) of the second-sideband tones `-2 omega + delta_r` and
///   `2 omega + delta_b` from its first and second sidebands
/// * Lamb-Dicke: `eta sqrt(n_bar + 1)`
pub fn rwa_diagnostics(drive: &IonDriveParams, th: &DiagnosticThresholds) -> Vec<Diagnostic> {
    let w = drive.omega_trap;
    let mut out = vec![
        upper("rwa_omega_r", drive.omega_r / w, th.rwa_pass, th.rwa_marginal),
        upper("rwa_omega_b", drive.omega_b / w, th.rwa_pass, th.rwa_marginal),
        upper("rwa_omega_s", drive.omega_s / w, th.rwa_pass, th.rwa_marginal),
        upper("rwa_delta_r", drive.delta_r.abs() / w, th.rwa_pass, th.rwa_marginal),
        upper("rwa_delta_b", drive.delta_b.abs() / w, th.rwa_pass, th.rwa_marginal),
    ];
    let s3 = 3f64.sqrt();
    let breathing = [-2.0 * s3 * w, -s3 * w, s3 * w, 2.0 * s3 * w];
    for (name, tone) in [
        ("breathing_red", -2.0 * w + drive.delta_r),
        ("breathing_blue", 2.0 * w + drive.delta_b),
    ] {
        let margin = breathing.iter().map(|b| (tone - b).abs()).fold(f64::INFINITY, f64::min) / w;
        out.push(lower(name, margin, th.breathing_pass, th.breathing_marginal));
    }
    out.push(upper(
        "lamb_dicke",
        drive.eta * (th.n_bar + 1.0).sqrt(),
        th.lamb_dicke_pass,
        th.lamb_dicke_marginal,
    ));
    out
}

/// Drive at the canonical operating point: `eta = 0.1`,
/// `omega_trap = 2 pi x 4980 kHz`, `Omega_r = 2 pi x 200 kHz`,
/// `Omega_S = 2 pi x 120 kHz`, balanced `Omega_b`, `U/w_c = 0.0168`,
/// `w_q/w_c = 0.015`. Returns the drive and `w_c`.
pub fn canonical_drive(n_ions: usize) -> (IonDriveParams, f64) {
    drive_at_ratios(0.1, two_pi_khz(4980.0), two_pi_khz(200.0), two_pi_khz(120.0), 0.0168, 0.015, n_ions)
}

/// Drive realizing `U/w_c = u_ratio`, `w_q/w_c = wq_ratio` from laser settings.
pub fn drive_at_ratios(
    eta: f64,
    omega_trap: f64,
    omega_r: f64,
    omega_s: f64,
    u_ratio: f64,
    wq_ratio: f64,
    n_ions: usize,
) -> (IonDriveParams, f64) {
    let u = eta * eta * omega_s / 2.0;
    let omega_c = u / u_ratio;
    let omega_q = wq_ratio * omega_c;
    let eps = omega_s / omega_trap;
    let omega_b = omega_r * (1.0 - 2.0 * eps) / (1.0 + 2.0 * eps);
    let omega_0 = omega_s * (1.0 - eta * eta / 2.0);
    let omega_big = -(omega_0 + omega_q);
    let drive = IonDriveParams {
        eta,
        omega_trap,
        omega_r,
        omega_b,
        omega_s,
        omega_big,
        delta_r: omega_big + 2.0 * omega_c,
        delta_b: omega_big - 2.0 * omega_c,
        n_ions,
    };
    (drive, omega_c)
}
