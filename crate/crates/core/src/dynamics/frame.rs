use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::drive::qubit_fock_index;

/// Fixed qubit rotation `B = [[1, 1], [i, -i]] / sqrt 2` taking the `sigma_x`
/// eigenbasis of the drive frame to the `sigma_z` basis of the effective model.
pub fn qubit_basis_rotation(psi: &[Complex64], n_max: usize) -> Vec<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for n in 0..=n_max {
        let (e, g) = (qubit_fock_index(0, n, n_max), qubit_fock_index(1, n, n_max));
        out[e] = (psi[e] + psi[g]) * FRAC_1_SQRT_2;
        out[g] = (psi[e] - psi[g]) * i * FRAC_1_SQRT_2;
    }
    out
}

/// Inverse of [`qubit_basis_rotation`].
pub fn qubit_basis_rotation_inv(psi: &[Complex64], n_max: usize) -> Vec<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for n in 0..=n_max {
        let (e, g) = (qubit_fock_index(0, n, n_max), qubit_fock_index(1, n, n_max));
        out[e] = (psi[e] - i * psi[g]) * FRAC_1_SQRT_2;
        out[g] = (psi[e] + i * psi[g]) * FRAC_1_SQRT_2;
    }
    out
}

/// `exp(-i w_c t n) exp(i Omega t sigma_x / 2) psi`.
pub fn rotating_frame(psi: &[Complex64], n_max: usize, omega_big: f64, omega_c: f64, t: f64) -> Vec<Complex64> {
    let (c, s) = ((omega_big * t / 2.0).cos(), (omega_big * t / 2.0).sin());
    let is = Complex64::new(0.0, s);
    let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
    for n in 0..=n_max {
        let (e, g) = (qubit_fock_index(0, n, n_max), qubit_fock_index(1, n, n_max));
        let ph = Complex64::from_polar(1.0, -omega_c * t * n as f64);
        out[e] = (psi[e] * c + is * psi[g]) * ph;
        out[g] = (is * psi[e] + psi[g] * c) * ph;
    }
    out
}

/// Drive-frame state at time `t` expressed in the frame of the effective model.
pub fn frame_transform(psi: &[Complex64], n_max: usize, omega_big: f64, omega_c: f64, t: f64) -> Vec<Complex64> {
    qubit_basis_rotation(&rotating_frame(psi, n_max, omega_big, omega_c, t), n_max)
}
