//! Mean-field energy functional and order parameter.
//!
//! After the Holstein-Primakoff mapping `b -> beta + d` and dropping the
//! fluctuation `d`, the cavity sees the quadratic Hamiltonian
//! `w_beta a^dag a + g'(a^2 + a^dag^2) + w_q beta^2 - w_q N/2` with
//!
//! * `w_beta = w_c + U (beta^2 - N/2)`
//! * `g' = 2 g beta sqrt(N - beta^2) / N`
//!
//! whose Bogoliubov ground energy is the functional `E_G(beta)` minimised here.
//! It is even in `beta`; every routine works on the nonnegative branch.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{classify_phase, collapse_coupling, critical_rabi, ModelParams, PhaseLabel};
use crate::par::Execution;

/// Displaced cavity frequency `w_beta`.
pub fn omega_beta(p: &ModelParams, beta: f64) -> f64 {
    p.omega_c + p.u * (beta * beta - p.n_f64() / 2.0)
}

/// Effective two-photon coupling `g'`.
pub fn g_prime(p: &ModelParams, beta: f64) -> f64 {
    let n = p.n_f64();
    2.0 * p.g * beta * (n - beta * beta).max(0.0).sqrt() / n
}

/// Squeezing parameter of the cavity, `r_beta = artanh(2 g' / w_beta) / 2`.
pub fn r_beta(p: &ModelParams, beta: f64) -> Result<f64> {
    let (w, gp) = checked_quadratic(p, beta)?;
    Ok(0.5 * (2.0 * gp / w).atanh())
}

fn checked_quadratic(p: &ModelParams, beta: f64) -> Result<(f64, f64)> {
    let n = p.n_f64();
    if !beta.is_finite() || beta * beta > n * (1.0 + 1e-12) {
        return Err(Error::DomainError(format!(
            "beta = {beta} outside the Holstein-Primakoff domain [-sqrt(N), sqrt(N)]"
        )));
    }
    let w = omega_beta(p, beta);
    let gp = g_prime(p, beta);
    if w <= 0.0 || 2.0 * gp.abs() >= w {
        return Err(Error::BogoliubovUnstable { two_g_prime: 2.0 * gp.abs(), omega: w });
    }
    Ok((w, gp))
}

/// Mean-field ground-state energy `E_G(beta)`.
pub fn ground_energy(p: &ModelParams, beta: f64) -> Result<f64> {
    let (w, gp) = checked_quadratic(p, beta)?;
    let n = p.n_f64();
    // |g'| keeps the result exactly even: libm atanh is not exactly odd
    let r = 0.5 * (2.0 * gp.abs() / w).atanh();
    let b2 = beta * beta;
    Ok((w * w - 4.0 * gp * gp) / (2.0 * w) * (2.0 * r).cosh()
        + (p.omega_q - p.u / 2.0) * b2
        - p.omega_q * n / 2.0
        - p.omega_c / 2.0
        + p.u * n / 4.0)
}

/// `E_G(beta) - E_G(0)` evaluated without the cancellation between the
/// Bogoliubov root and the `w_beta/2` offset. Used by the minimiser.
pub fn energy_offset(p: &ModelParams, beta: f64) -> Result<f64> {
    checked_quadratic(p, beta)?;
    let n = p.n_f64();
    let s = beta * beta;
    let w0 = p.omega_c - p.u * n / 2.0;
    let a = p.u * p.u + 16.0 * p.g * p.g / (n * n);
    let b = 2.0 * p.u * w0 - 16.0 * p.g * p.g / n;
    let d = (w0 + p.u * s).powi(2) - 16.0 * p.g * p.g * s * (n - s) / (n * n);
    let root = d.max(0.0).sqrt();
    Ok((a * s * s + b * s) / (2.0 * (root + w0)) + (p.omega_q - p.u / 2.0) * s)
}

/// Polynomial coefficients used by the order-parameter closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxCoefficients {
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub u4: f64,
    pub u5: f64,
}

impl AuxCoefficients {
    pub fn new(p: &ModelParams) -> Self {
        let n2 = p.n_f64() * p.n_f64();
        let g2 = p.g * p.g;
        let u1 = g2 * n2;
        let u2 = p.u * p.u * n2;
        let u3 = p.omega_q * p.omega_q * n2;
        let u4 = p.g * p.omega_q * n2;
        let u5 = p.u * p.omega_q * n2;
        let u0 = u2 * (4.0 * u5 - u2 - 4.0 * u3 + 4.0 * p.omega_c * p.omega_c - 16.0 * g2);
        AuxCoefficients { u0, u1, u2, u3, u4, u5 }
    }
}

/// Positive order parameter from the stationarity condition of `E_G` in
/// `s = beta^2`.
///
/// `s = N(16g^2 + u2 - 2 w_c U N) / (2(16g^2 + u2)) - sgn(w_q - U/2) sqrt(R)`
/// with `R = u1 [u0 + 64 g^2 (u5 - u3) + 16 w_c^2 (u3 - u5)] / ((16g^2 + u2)^2 (4g^2 + u5 - u3))`.
/// The negative branch is `-beta`.
pub fn order_parameter_closed_form(p: &ModelParams) -> Result<f64> {
    let g_t = critical_rabi(p)?;
    if p.g <= g_t {
        return Err(Error::BelowThreshold { g: p.g, g_t });
    }
    let n = p.n_f64();
    let c = AuxCoefficients::new(p);
    let g2 = p.g * p.g;
    let w2 = p.omega_c * p.omega_c;
    let denom_a = 16.0 * g2 + c.u2;
    let denom_b = 4.0 * g2 + c.u5 - c.u3;
    if denom_b <= 0.0 {
        return Err(Error::DomainError(format!(
            "stationary point undefined: 4g^2 + u5 - u3 = {denom_b:.3e}"
        )));
    }
    let radicand = c.u1 * (c.u0 + 64.0 * g2 * (c.u5 - c.u3) + 16.0 * w2 * (c.u3 - c.u5))
        / (denom_a * denom_a * denom_b);
    if radicand < 0.0 {
        return Err(Error::DomainError(format!("negative radicand {radicand:.3e}")));
    }
    let centre = n * (denom_a - 2.0 * p.omega_c * p.u * n) / (2.0 * denom_a);
    let k = p.omega_q - p.u / 2.0;
    let s = centre - k.signum() * radicand.sqrt() * if k == 0.0 { 0.0 } else { 1.0 };
    if s <= 0.0 {
        return Err(Error::BelowThreshold { g: p.g, g_t });
    }
    if s >= n {
        return Err(Error::DomainError(format!("beta^2 = {s} exceeds N")));
    }
    Ok(s.sqrt())
}

/// Closed form with the uncorrected coefficients (returns its right-hand
/// side as `beta`). Disagrees with the minimiser; kept for comparison.
#[cfg(feature = "uncorrected-closed-form")]
pub fn order_parameter_uncorrected(p: &ModelParams) -> f64 {
    let n = p.n_f64();
    let c = AuxCoefficients::new(p);
    let g2 = p.g * p.g;
    let inner = c.u1
        * (c.u0 + 64.0 * g2 * (c.u4 - c.u3) + 16.0 * p.omega_c * p.omega_c * (c.u3 - c.u5))
        / ((16.0 * g2 + c.u2).powi(2) * (4.0 * g2 + c.u5 - c.u3));
    inner.sqrt() + n * (16.0 * g2 + c.u2 - 2.0 * p.omega_c * c.u2.sqrt()) / (2.0 * (16.0 * g2 + c.u2))
}

const GRID_STEP: f64 = 1e-3;
const GOLDEN_TOL: f64 = 1e-10;

/// Global minimiser of `E_G` over `beta in [0, sqrt(N)(1 - 1e-9)]`: a grid
/// pre-scan with step `1e-3` followed by golden-section refinement.
pub fn order_parameter_numeric(p: &ModelParams) -> Result<f64> {
    let beta_max = p.n_f64().sqrt() * (1.0 - 1e-9);
    let steps = (beta_max / GRID_STEP).ceil() as usize;
    let mut best: Option<(usize, f64)> = None;
    for i in 0..=steps {
        let beta = (i as f64 * GRID_STEP).min(beta_max);
        if let Ok(e) = energy_offset(p, beta) {
            if best.is_none_or(|(_, eb)| e < eb) {
                best = Some((i, e));
            }
        }
    }
    let (i_best, _) = best.ok_or(Error::LandscapeUnstable)?;
    let lo = (i_best.saturating_sub(1) as f64 * GRID_STEP).min(beta_max);
    let hi = ((i_best + 1) as f64 * GRID_STEP).min(beta_max);
    let f = |b: f64| energy_offset(p, b).unwrap_or(f64::INFINITY);
    let beta = golden_section(f, lo, hi, GOLDEN_TOL);
    // the bracket may include 0 where the true minimiser sits exactly
    if beta < 1e-8 && f(0.0) <= f(beta) {
        return Ok(0.0);
    }
    Ok(beta)
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let m = 0.5 * (a + b);
    // endpoints can win when the minimum sits on the bracket edge
    [a, m, b]
        .into_iter()
        .min_by(|x, y| f(*x).total_cmp(&f(*y)))
        .unwrap_or(m)
}

/// Mean-field ground state: order parameter and the quantities derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldSolution {
    pub beta: f64,
    pub omega_beta: f64,
    pub g_prime: f64,
    pub r_beta: f64,
    pub energy: f64,
    pub phase: PhaseLabel,
}

impl MeanFieldSolution {
    pub fn at_beta(p: &ModelParams, beta: f64) -> Result<Self> {
        Ok(MeanFieldSolution {
            beta,
            omega_beta: omega_beta(p, beta),
            g_prime: g_prime(p, beta),
            r_beta: r_beta(p, beta)?,
            energy: ground_energy(p, beta)?,
            phase: classify_phase(p),
        })
    }

    /// Solve with the closed form (zero in the normal phase).
    pub fn solve(p: &ModelParams) -> Result<Self> {
        let beta = match classify_phase(p) {
            PhaseLabel::NormalPhase => 0.0,
            PhaseLabel::SuperradiantPhase => match order_parameter_closed_form(p) {
                Ok(b) => b,
                // g == g_t exactly
                Err(Error::BelowThreshold { .. }) => 0.0,
                Err(e) => return Err(e),
            },
            PhaseLabel::CollapseRegion => return Err(Error::LandscapeUnstable),
        };
        Self::at_beta(p, beta)
    }
}

/// Status of one landscape sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointStatus {
    Ok,
    BogoliubovUnstable,
    OutsideDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapePoint {
    pub beta: f64,
    pub energy: Option<f64>,
    pub status: PointStatus,
}

/// `E_G` on a grid of `beta`. Invalid points are kept and tagged.
pub fn energy_landscape(p: &ModelParams, beta_grid: &[f64]) -> Vec<LandscapePoint> {
    beta_grid
        .iter()
        .map(|&beta| match ground_energy(p, beta) {
            Ok(e) => LandscapePoint { beta, energy: Some(e), status: PointStatus::Ok },
            Err(Error::BogoliubovUnstable { .. }) => {
                LandscapePoint { beta, energy: None, status: PointStatus::BogoliubovUnstable }
            }
            Err(_) => LandscapePoint { beta, energy: None, status: PointStatus::OutsideDomain },
        })
        .collect()
}

/// Input of a phase-diagram sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSweep {
    pub u_values: Vec<f64>,
    pub g_values: Vec<f64>,
    pub omega_c: f64,
    pub omega_q: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub u: f64,
    pub g_t: Option<f64>,
    pub g_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub u_values: Vec<f64>,
    pub g_values: Vec<f64>,
    /// `labels[i][j]` is the phase at `(u_values[i], g_values[j])`.
    pub labels: Vec<Vec<PhaseLabel>>,
    pub boundary: Vec<BoundaryPoint>,
}

pub fn phase_diagram(sweep: &PhaseSweep, exec: Execution) -> Result<PhaseDiagram> {
    if sweep.u_values.is_empty() || sweep.g_values.is_empty() {
        return Err(Error::InvalidParams("empty U or g range".into()));
    }
    let base = ModelParams::new(sweep.omega_c, sweep.omega_q, 0.0, 0.0, sweep.n)?;
    for &u in &sweep.u_values {
        base.with_u(u).validate()?;
    }
    let labels = exec.map(&sweep.u_values, |&u| {
        sweep
            .g_values
            .iter()
            .map(|&g| classify_phase(&ModelParams { g, u, ..base }))
            .collect()
    });
    let boundary = sweep
        .u_values
        .iter()
        .map(|&u| {
            let p = base.with_u(u);
            BoundaryPoint { u, g_t: critical_rabi(&p).ok(), g_c: collapse_coupling(&p).ok() }
        })
        .collect();
    Ok(PhaseDiagram {
        u_values: sweep.u_values.clone(),
        g_values: sweep.g_values.clone(),
        labels,
        boundary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderParameterPoint {
    pub g: f64,
    pub beta: Option<f64>,
    pub energy: Option<f64>,
    pub phase: PhaseLabel,
}

/// `beta(g)` at fixed remaining parameters; collapse points carry `None`.
pub fn order_parameter_sweep(
    base: &ModelParams,
    g_values: &[f64],
    exec: Execution,
) -> Vec<OrderParameterPoint> {
    exec.map(g_values, |&g| {
        let p = base.with_g(g);
        let phase = classify_phase(&p);
        match MeanFieldSolution::solve(&p) {
            Ok(s) => OrderParameterPoint { g, beta: Some(s.beta), energy: Some(s.energy), phase },
            Err(_) => OrderParameterPoint { g, beta: None, energy: None, phase },
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linspace;

    fn canon(g: f64, u: f64) -> ModelParams {
        ModelParams::canonical(g, u).unwrap()
    }

    #[test]
    fn energy_at_origin_is_exact() {
        for u in [0.0, 0.0168, 0.03] {
            for g in [0.1, 0.3, 0.44] {
                let p = canon(g, u);
                assert!((ground_energy(&p, 0.0).unwrap() + 0.375).abs() < 1e-12);
                assert_eq!(energy_offset(&p, 0.0).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn offset_form_agrees_with_direct_form() {
        let p = canon(0.4, 0.0168);
        for beta in linspace(0.0, 7.0, 50) {
            let direct = ground_energy(&p, beta).unwrap() - ground_energy(&p, 0.0).unwrap();
            let off = energy_offset(&p, beta).unwrap();
            assert!((direct - off).abs() < 1e-13, "beta={beta}: {direct} vs {off}");
        }
    }

    #[test]
    fn double_well_above_threshold() {
        let p = canon(0.45, 0.0);
        let beta = order_parameter_numeric(&p).unwrap();
        assert!(beta > 0.0);
        assert!(ground_energy(&p, beta).unwrap() < -0.375);
    }

    #[test]
    fn closed_form_below_threshold_errors() {
        assert!(matches!(
            order_parameter_closed_form(&canon(0.30, 0.0168)),
            Err(Error::BelowThreshold { .. })
        ));
    }

    #[test]
    fn closed_form_matches_numeric() {
        for (g, u) in [(0.40, 0.0168), (0.45, 0.0), (0.25, 0.03), (0.40, 0.01)] {
            let p = canon(g, u);
            let a = order_parameter_closed_form(&p).unwrap();
            let b = order_parameter_numeric(&p).unwrap();
            assert!((a - b).abs() < 1e-6, "g={g} U={u}: {a} vs {b}");
        }
    }

    #[test]
    fn numeric_is_zero_in_normal_phase() {
        assert_eq!(order_parameter_numeric(&canon(0.2, 0.0168)).unwrap(), 0.0);
        assert_eq!(order_parameter_numeric(&canon(0.1, 0.0)).unwrap(), 0.0);
        assert!(order_parameter_numeric(&canon(0.25, 0.03)).unwrap() > 0.0);
    }

    #[test]
    fn continuity_at_threshold() {
        let p = canon(0.0, 0.0);
        let g_t = critical_rabi(&p).unwrap();
        let betas: Vec<f64> = [1e-3, 1e-4, 1e-5, 1e-6]
            .iter()
            .map(|e| order_parameter_closed_form(&p.with_g(g_t + e)).unwrap())
            .collect();
        assert!(betas.windows(2).all(|w| w[1] < w[0]), "{betas:?}");
        // beta ~ sqrt(g - g_t)
        assert!(betas[3] < 0.05, "{betas:?}");
    }

    #[test]
    fn unstable_points_are_flagged() {
        // beyond g_c the landscape contains Bogoliubov-unstable points
        let p = ModelParams { g: 0.6, ..canon(0.1, 0.0) };
        let pts = energy_landscape(&p, &[0.0, 5.0, 8.0]);
        assert_eq!(pts[0].status, PointStatus::Ok);
        assert_eq!(pts[1].status, PointStatus::BogoliubovUnstable);
        assert_eq!(pts[2].status, PointStatus::OutsideDomain);
        assert!(pts[1].energy.is_none());
    }

    #[test]
    fn landscape_single_and_double_well() {
        let grid = linspace(-7.0, 7.0, 1401);
        let argmin = |p: &ModelParams| {
            let pts = energy_landscape(p, &grid);
            let mut minima = vec![];
            for i in 1..pts.len() - 1 {
                let (a, b, c) = (pts[i - 1].energy, pts[i].energy, pts[i + 1].energy);
                if let (Some(a), Some(b), Some(c)) = (a, b, c) {
                    if b < a && b < c {
                        minima.push(pts[i].beta);
                    }
                }
            }
            minima
        };
        let single = argmin(&canon(0.2, 0.0168));
        assert_eq!(single.len(), 1);
        assert!(single[0].abs() < 1e-9);
        let double = argmin(&canon(0.4, 0.0168));
        assert_eq!(double.len(), 2);
        assert!((double[0] + double[1]).abs() < 1e-9);
    }

    #[test]
    fn solution_invariants() {
        let p = canon(0.4, 0.0168);
        let s = MeanFieldSolution::solve(&p).unwrap();
        let n = 50.0;
        assert!((s.omega_beta - (1.0 + 0.0168 * (s.beta * s.beta - n / 2.0))).abs() < 1e-14);
        assert!((s.g_prime - 2.0 * 0.4 * s.beta * (n - s.beta * s.beta).sqrt() / n).abs() < 1e-14);
        assert!(2.0 * s.g_prime.abs() < s.omega_beta);
        assert_eq!(s.phase, PhaseLabel::SuperradiantPhase);
    }

    #[test]
    fn aux_coefficients_are_direct_products() {
        let p = canon(0.4, 0.0168);
        let c = AuxCoefficients::new(&p);
        assert!((c.u1 - 0.16 * 2500.0).abs() < 1e-9);
        assert!((c.u2 - 0.0168f64.powi(2) * 2500.0).abs() < 1e-12);
        assert!((c.u3 - 0.015f64.powi(2) * 2500.0).abs() < 1e-12);
        assert!((c.u4 - 0.4 * 0.015 * 2500.0).abs() < 1e-12);
        assert!((c.u5 - 0.0168 * 0.015 * 2500.0).abs() < 1e-12);
    }

    #[test]
    fn phase_diagram_rejects_empty_ranges() {
        let sweep = PhaseSweep {
            u_values: vec![0.0],
            g_values: vec![],
            omega_c: 1.0,
            omega_q: 0.015,
            n: 50,
        };
        assert!(phase_diagram(&sweep, Execution::Sequential).is_err());
    }

    #[cfg(feature = "uncorrected-closed-form")]
    #[test]
    fn uncorrected_closed_form_disagrees_with_minimiser() {
        let p = canon(0.40, 0.0168);
        let uncorrected = order_parameter_uncorrected(&p);
        let numeric = order_parameter_numeric(&p).unwrap();
        assert!((uncorrected - numeric).abs() > 1.0, "{uncorrected} vs {numeric}");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn energy_is_even(beta in 0.0..7.07f64, g in 0.0..0.45f64, u in 0.0..0.03f64) {
                let p = canon(g, u);
                if let Ok(e) = ground_energy(&p, beta) {
                    prop_assert_eq!(e, ground_energy(&p, -beta).unwrap());
                }
            }
        }
    }
}
