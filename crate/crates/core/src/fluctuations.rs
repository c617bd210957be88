//! Quadratic fluctuations above mean field.
//!
//! Both phases reduce to a single-mode quadratic form in the Holstein-Primakoff
//! fluctuation `d`. Quadratures are `X = (d + d^dag)/2`, `P = (d - d^dag)/(2i)`
//! with vacuum variance 1/4; a squeezed vacuum with parameter `r` has
//! `var X = e^{-2r}/4` and `var P = e^{2r}/4`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meanfield::order_parameter_closed_form;
use crate::model::{classify_phase, ModelParams, PhaseLabel};

/// Which pair operator the `lambda` coefficient multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormShape {
    /// `omega n + lambda (d^2 + d^dag^2) + constant`
    NumberPlusPair,
    /// `omega n + lambda (d + d^dag)^2 + constant`
    NumberPlusQuadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticBosonForm {
    pub omega: f64,
    pub lambda: f64,
    pub constant: f64,
    pub shape: FormShape,
}

impl QuadraticBosonForm {
    pub fn number_plus_pair(omega: f64, lambda: f64, constant: f64) -> Self {
        QuadraticBosonForm { omega, lambda, constant, shape: FormShape::NumberPlusPair }
    }

    pub fn number_plus_quadrature(omega: f64, lambda: f64, constant: f64) -> Self {
        QuadraticBosonForm { omega, lambda, constant, shape: FormShape::NumberPlusQuadrature }
    }

    /// Exact rewrite using `(d + d^dag)^2 = d^2 + d^dag^2 + 2 d^dag d + 1`.
    pub fn to_pair_shape(&self) -> Self {
        match self.shape {
            FormShape::NumberPlusPair => *self,
            FormShape::NumberPlusQuadrature => Self::number_plus_pair(
                self.omega + 2.0 * self.lambda,
                self.lambda,
                self.constant + self.lambda,
            ),
        }
    }

    /// Inverse of [`to_pair_shape`](Self::to_pair_shape).
    pub fn to_quadrature_shape(&self) -> Self {
        match self.shape {
            FormShape::NumberPlusQuadrature => *self,
            FormShape::NumberPlusPair => Self::number_plus_quadrature(
                self.omega - 2.0 * self.lambda,
                self.lambda,
                self.constant - self.lambda,
            ),
        }
    }

    pub fn is_stable(&self) -> bool {
        let f = self.to_pair_shape();
        2.0 * f.lambda.abs() < f.omega
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovResult {
    pub excitation_energy: f64,
    pub squeeze_r: f64,
    pub ground_shift: f64,
}

impl BogoliubovResult {
    pub fn var_x(&self) -> f64 {
        (-2.0 * self.squeeze_r).exp() / 4.0
    }

    pub fn var_p(&self) -> f64 {
        (2.0 * self.squeeze_r).exp() / 4.0
    }
}

/// Diagonalize `omega n + lambda (d^2 + d^dag^2) + c` after normal-form reduction:
/// `tanh 2r = 2 lambda / omega`, `eps = sqrt(omega^2 - 4 lambda^2)`.
pub fn bogoliubov_diagonalize(form: &QuadraticBosonForm) -> Result<BogoliubovResult> {
    let f = form.to_pair_shape();
    if !(2.0 * f.lambda.abs() < f.omega) {
        return Err(Error::Unstable { two_lambda: 2.0 * f.lambda.abs(), omega: f.omega });
    }
    let eps = ((f.omega - 2.0 * f.lambda) * (f.omega + 2.0 * f.lambda)).sqrt();
    Ok(BogoliubovResult {
        excitation_energy: eps,
        squeeze_r: 0.5 * (2.0 * f.lambda / f.omega).atanh(),
        ground_shift: (eps - f.omega) / 2.0 + f.constant,
    })
}

fn require_phase(params: &ModelParams, expected: PhaseLabel) -> Result<()> {
    let actual = classify_phase(params);
    if actual != expected {
        return Err(Error::WrongPhase { expected, actual });
    }
    Ok(())
}

/// Normal-phase effective Hamiltonian
/// `w_q d^dag d - 2 g^2 / (N (2 w_c - N U)) (d + d^dag)^2 - w_q N / 2`.
pub fn np_effective(params: &ModelParams) -> Result<QuadraticBosonForm> {
    params.validate()?;
    require_phase(params, PhaseLabel::NormalPhase)?;
    let n = params.n_f64();
    let lambda = -2.0 * params.g * params.g / (n * (2.0 * params.omega_c - n * params.u));
    Ok(QuadraticBosonForm::number_plus_quadrature(params.omega_q, lambda, -params.omega_q * n / 2.0))
}

/// Argument of the normal-phase squeezing logarithm,
/// `1 - 8 g^2 / (w_q N (2 w_c - U N))`; reaches zero at `g_t`.
pub fn np_stability_ratio(params: &ModelParams) -> f64 {
    let n = params.n_f64();
    1.0 - 8.0 * params.g * params.g / (params.omega_q * n * (2.0 * params.omega_c - params.u * n))
}

/// `r_s = ln(1 - 8 g^2 / (w_q N (2 w_c - U N))) / 4`, nonpositive (P is squeezed).
pub fn np_squeezing(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    require_phase(params, PhaseLabel::NormalPhase)?;
    let arg = np_stability_ratio(params);
    if !(arg > 0.0) {
        return Err(Error::DomainError(format!("log argument {arg:.3e} <= 0")));
    }
    Ok(0.25 * arg.ln())
}

/// Which coefficient set to use for the superradiant effective Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SpTranscription {
    /// Re-derived coefficients; the linear term vanishes at the mean-field `beta`.
    #[default]
    Corrected,
    /// Uncorrected coefficients; the linear term does not vanish.
    Uncorrected,
}

/// Coefficients of the superradiant effective Hamiltonian
/// `lambda0/4 + omega1 d^dag d + omega2 (d + d^dag)^2`, in units of
/// `energy_scale = 2 w_c'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpEffectiveParams {
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda4: f64,
    pub lambda5: f64,
    pub lambda6: f64,
    pub omega1: f64,
    pub omega2: f64,
    /// `x = 2 r_a`
    pub x: f64,
    pub alpha: f64,
    pub alpha_prime: f64,
    pub chi: f64,
    pub delta: f64,
    pub omega_c_prime: f64,
    pub energy_scale: f64,
    /// Order parameter passed in.
    pub beta_meanfield: f64,
    /// Order parameter actually used (differs only after a re-solve).
    pub beta_used: f64,
    /// Linear coefficient `lambda1 + lambda3/4` at `beta_used`.
    pub residual: f64,
}

/// Residual tolerance on the linear fluctuation term.
pub const LINEAR_RESIDUAL_TOL: f64 = 1e-6;

fn sp_coefficients(p: &ModelParams, beta: f64, t: SpTranscription) -> Result<SpEffectiveParams> {
    let n = p.n_f64();
    let (g, u) = (p.g, p.u);
    let alpha = beta / n.sqrt();
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::DomainError(format!("alpha = {alpha} outside (0, 1)")));
    }
    let chi = (1.0 - alpha * alpha).sqrt();
    let delta = 1.0 - beta * beta / (n - beta * beta);
    let wcp = p.omega_c + u * beta * beta - u * n / 2.0;
    if wcp <= 0.0 {
        return Err(Error::DomainError(format!("w_c' = {wcp} <= 0")));
    }
    let lead = 4.0 * g * alpha * chi / wcp;
    let arg = match t {
        SpTranscription::Corrected => lead,
        SpTranscription::Uncorrected => g * alpha / (wcp * n * chi) + lead,
    };
    if arg.abs() >= 1.0 {
        return Err(Error::Unstable { two_lambda: arg.abs(), omega: 1.0 });
    }
    let x = arg.atanh();
    let (ch, sh) = (x.cosh(), x.sinh());
    let alpha_prime = alpha / (2.0 * chi) + alpha.powi(3) / (4.0 * chi.powi(3));
    let lambda0 = ch - arg * sh;
    let (wq_eff, g3) = match t {
        SpTranscription::Corrected => (p.omega_q - u / 2.0, 2.0 * g * chi * delta / wcp),
        SpTranscription::Uncorrected => (p.omega_q, g * chi * delta / (2.0 * wcp)),
    };
    let lambda1 = wq_eff * n * alpha / (2.0 * wcp);
    let lambda2 = g * chi * delta / wcp * ch - alpha * u * n / (2.0 * wcp) * sh;
    let lambda3 = -g3 * sh + alpha * u * n / wcp * ch;
    let lambda4 = wq_eff * n / (2.0 * wcp);
    let lambda5 = u * n / wcp * ch;
    let lambda6 = u * n / (2.0 * wcp) * sh;
    let omega1 = lambda4 / n + g * alpha / (2.0 * wcp * chi * n) * sh + lambda5 / (4.0 * n);
    let omega2 = g * alpha_prime / (2.0 * wcp * n) * sh - lambda2 * lambda2 / (2.0 * n * lambda0);
    Ok(SpEffectiveParams {
        lambda0,
        lambda1,
        lambda2,
        lambda3,
        lambda4,
        lambda5,
        lambda6,
        omega1,
        omega2,
        x,
        alpha,
        alpha_prime,
        chi,
        delta,
        omega_c_prime: wcp,
        energy_scale: 2.0 * wcp,
        beta_meanfield: beta,
        beta_used: beta,
        residual: lambda1 + lambda3 / 4.0,
    })
}

/// Superradiant effective Hamiltonian at order parameter `beta`.
///
/// If the linear residual exceeds [`LINEAR_RESIDUAL_TOL`], `beta` is re-solved
/// locally so that the residual vanishes; both values are reported.
pub fn sp_effective(
    params: &ModelParams,
    beta: f64,
    transcription: SpTranscription,
) -> Result<(SpEffectiveParams, QuadraticBosonForm)> {
    params.validate()?;
    require_phase(params, PhaseLabel::SuperradiantPhase)?;
    let mut sp = sp_coefficients(params, beta, transcription)?;
    if sp.residual.abs() > LINEAR_RESIDUAL_TOL {
        let root = resolve_linear_term(params, beta, transcription)
            .ok_or(Error::LinearTermUnresolved { residual: sp.residual })?;
        sp = sp_coefficients(params, root, transcription)?;
        sp.beta_meanfield = beta;
        if sp.residual.abs() > LINEAR_RESIDUAL_TOL {
            return Err(Error::LinearTermUnresolved { residual: sp.residual });
        }
    }
    let form = QuadraticBosonForm::number_plus_quadrature(sp.omega1, sp.omega2, sp.lambda0 / 4.0);
    Ok((sp, form))
}

/// Root of the linear residual in `beta` nearest to `beta0`, if any.
fn resolve_linear_term(p: &ModelParams, beta0: f64, t: SpTranscription) -> Option<f64> {
    let res = |b: f64| sp_coefficients(p, b, t).ok().map(|s| s.residual);
    let b_max = p.n_f64().sqrt();
    let samples = 2000;
    let grid: Vec<f64> = (1..samples).map(|i| b_max * i as f64 / samples as f64).collect();
    let mut best: Option<(f64, f64, f64)> = None;
    for w in grid.windows(2) {
        let (Some(ra), Some(rb)) = (res(w[0]), res(w[1])) else { continue };
        if ra.signum() != rb.signum() {
            let dist = (0.5 * (w[0] + w[1]) - beta0).abs();
            if best.is_none_or(|(_, _, d)| dist < d) {
                best = Some((w[0], w[1], dist));
            }
        }
    }
    let (mut a, mut b, _) = best?;
    let mut ra = res(a)?;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let rm = res(m)?;
        if rm.signum() == ra.signum() {
            a = m;
            ra = rm;
        } else {
            b = m;
        }
        if b - a < 1e-14 {
            break;
        }
    }
    Some(0.5 * (a + b))
}

/// Bogoliubov parameter of `omega1 d^dag d + omega2 (d + d^dag)^2`:
/// `ln(1 + 4 omega2/omega1) / 4`.
pub fn sp_squeezing(sp: &SpEffectiveParams) -> Result<f64> {
    let arg = 1.0 + 4.0 * sp.omega2 / sp.omega1;
    if !(arg > 0.0) || !(sp.omega1 > 0.0) {
        return Err(Error::Unstable { two_lambda: 2.0 * sp.omega2.abs(), omega: sp.omega1 + 2.0 * sp.omega2 });
    }
    Ok(0.25 * arg.ln())
}

/// The uncorrected expression `-ln(1 + omega2/omega1) / 4`, for comparison only.
pub fn sp_squeezing_uncorrected(sp: &SpEffectiveParams) -> f64 {
    -0.25 * (1.0 + sp.omega2 / sp.omega1).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinMoments {
    pub mean_jx: f64,
    pub mean_jy: f64,
    pub mean_jz: f64,
    pub var_jx: f64,
    pub var_jy: f64,
    pub var_jz: f64,
    pub squeeze_r: f64,
    pub phase: PhaseLabel,
}

impl SpinMoments {
    /// Semi-axes `(sqrt var Jx, sqrt var Jy)` of the fluctuation ellipse.
    pub fn ellipse_axes(&self) -> (f64, f64) {
        (self.var_jx.sqrt(), self.var_jy.sqrt())
    }
}

/// Collective-spin means and variances at leading Holstein-Primakoff order.
pub fn spin_moments(params: &ModelParams) -> Result<SpinMoments> {
    let n = params.n_f64();
    match classify_phase(params) {
        PhaseLabel::NormalPhase => {
            let b = bogoliubov_diagonalize(&np_effective(params)?)?;
            let r = b.squeeze_r;
            Ok(SpinMoments {
                mean_jx: 0.0,
                mean_jy: 0.0,
                mean_jz: -n / 2.0,
                var_jx: n * b.var_x(),
                var_jy: n * b.var_p(),
                var_jz: (2.0 * r).sinh().powi(2) / 2.0,
                squeeze_r: r,
                phase: PhaseLabel::NormalPhase,
            })
        }
        PhaseLabel::SuperradiantPhase => {
            let beta = order_parameter_closed_form(params)?;
            let (sp, form) = sp_effective(params, beta, SpTranscription::Corrected)?;
            let b = bogoliubov_diagonalize(&form)?;
            let beta = sp.beta_used;
            Ok(SpinMoments {
                mean_jx: beta * (n - beta * beta).sqrt(),
                mean_jy: 0.0,
                mean_jz: beta * beta - n / 2.0,
                var_jx: n * sp.chi * sp.chi * sp.delta * sp.delta * b.var_x(),
                var_jy: n * sp.chi * sp.chi * b.var_p(),
                var_jz: 4.0 * beta * beta * b.var_x(),
                squeeze_r: b.squeeze_r,
                phase: PhaseLabel::SuperradiantPhase,
            })
        }
        actual => Err(Error::WrongPhase { expected: PhaseLabel::SuperradiantPhase, actual }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::diagonalize_form;
    use crate::model::critical_rabi;

    fn canon(g: f64, u: f64) -> ModelParams {
        ModelParams::canonical(g, u).unwrap()
    }

    #[test]
    fn diagonal_form() {
        let b = bogoliubov_diagonalize(&QuadraticBosonForm::number_plus_pair(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(b.excitation_energy, 1.0);
        assert_eq!(b.squeeze_r, 0.0);
        assert_eq!(b.ground_shift, 0.0);
    }

    #[test]
    fn quarter_pair_coupling() {
        let f = QuadraticBosonForm::number_plus_pair(1.0, 0.25, 0.0);
        let b = bogoliubov_diagonalize(&f).unwrap();
        assert!((b.excitation_energy - 0.75f64.sqrt()).abs() < 1e-15);
        assert!((b.squeeze_r - 0.25 * 3f64.ln()).abs() < 1e-15);
        let dense = diagonalize_form(&f, 80);
        assert!((dense.gap - b.excitation_energy).abs() < 1e-10);
        assert!((dense.var_x - b.var_x()).abs() < 1e-10);
        assert!((-(4.0 * dense.var_x).ln() / 2.0 - b.squeeze_r).abs() < 1e-9);
    }

    #[test]
    fn marginal_form_is_unstable() {
        let f = QuadraticBosonForm::number_plus_pair(1.0, 0.5, 0.0);
        assert!(matches!(bogoliubov_diagonalize(&f), Err(Error::Unstable { .. })));
    }

    #[test]
    fn shape_round_trip() {
        let f = QuadraticBosonForm::number_plus_quadrature(0.7, -0.1, 0.3);
        let back = f.to_pair_shape().to_quadrature_shape();
        assert!((back.omega - f.omega).abs() < 1e-15);
        assert!((back.constant - f.constant).abs() < 1e-15);
        assert_eq!(back.shape, f.shape);
    }

    #[test]
    fn np_decoupled_limit() {
        let f = np_effective(&canon(0.0, 0.0168)).unwrap();
        assert_eq!(f.omega, 0.015);
        assert_eq!(f.lambda, 0.0);
        assert!((f.constant + 0.375).abs() < 1e-15);
        assert_eq!(np_squeezing(&canon(0.0, 0.0168)).unwrap(), 0.0);
    }

    #[test]
    fn np_coefficient_and_squeezing() {
        let p = canon(0.2, 0.0168);
        let f = np_effective(&p).unwrap();
        assert!((f.lambda + 0.08 / (50.0 * 1.16)).abs() < 1e-15);
        let r = np_squeezing(&p).unwrap();
        assert!((r - (-0.1146437)).abs() < 1e-6, "{r}");
        let b = bogoliubov_diagonalize(&f).unwrap();
        assert!((b.squeeze_r - r).abs() < 1e-12);
    }

    #[test]
    fn np_wrong_phase() {
        assert!(matches!(np_effective(&canon(0.4, 0.0168)), Err(Error::WrongPhase { .. })));
        assert!(matches!(np_squeezing(&canon(0.46, 0.0168)), Err(Error::WrongPhase { .. })));
    }

    #[test]
    fn np_log_argument_vanishes_at_threshold() {
        let g_t = critical_rabi(&canon(0.0, 0.0168)).unwrap();
        let arg = np_stability_ratio(&canon(g_t * (1.0 - 1e-4), 0.0168));
        assert!(arg > 0.0 && arg < 3e-4, "{arg}");
    }

    #[test]
    fn sp_linear_term_vanishes() {
        let p = canon(0.40, 0.0168);
        let beta = order_parameter_closed_form(&p).unwrap();
        let (sp, form) = sp_effective(&p, beta, SpTranscription::Corrected).unwrap();
        assert!(sp.residual.abs() < 1e-10, "{}", sp.residual);
        assert_eq!(sp.beta_used, beta);
        assert!(form.is_stable());
    }

    #[test]
    fn sp_uncorrected_coefficients_leave_linear_term() {
        let p = canon(0.40, 0.0168);
        let beta = order_parameter_closed_form(&p).unwrap();
        assert!(matches!(
            sp_effective(&p, beta, SpTranscription::Uncorrected),
            Err(Error::LinearTermUnresolved { .. })
        ));
    }

    #[test]
    fn sp_squeezing_matches_diagonalizer() {
        let p = canon(0.40, 0.0168);
        let beta = order_parameter_closed_form(&p).unwrap();
        let (sp, form) = sp_effective(&p, beta, SpTranscription::Corrected).unwrap();
        let b = bogoliubov_diagonalize(&form).unwrap();
        assert!((sp_squeezing(&sp).unwrap() - b.squeeze_r).abs() < 1e-10);
        assert!(sp_squeezing_uncorrected(&sp).is_finite());
    }

    #[test]
    fn sp_wrong_phase() {
        assert!(matches!(
            sp_effective(&canon(0.2, 0.0168), 1.0, SpTranscription::Corrected),
            Err(Error::WrongPhase { .. })
        ));
    }

    #[test]
    fn spin_moment_means() {
        let np = spin_moments(&canon(0.2, 0.0168)).unwrap();
        assert_eq!(np.mean_jz, -25.0);
        assert_eq!(np.mean_jx, 0.0);
        let p = canon(0.40, 0.0168);
        let sp = spin_moments(&p).unwrap();
        let beta = order_parameter_closed_form(&p).unwrap();
        assert!((sp.mean_jx - beta * (50.0 - beta * beta).sqrt()).abs() < 1e-12);
        assert!((sp.mean_jz - (beta * beta - 25.0)).abs() < 1e-12);
    }

    #[test]
    fn np_fluctuations_trend_toward_threshold() {
        let gs = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.32];
        let m: Vec<_> = gs.iter().map(|&g| spin_moments(&canon(g, 0.0168)).unwrap()).collect();
        for w in m.windows(2) {
            assert!(w[1].var_jy < w[0].var_jy);
            assert!(w[1].var_jx > w[0].var_jx);
        }
    }
}
