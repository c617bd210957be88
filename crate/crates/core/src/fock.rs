//! Dense truncated-Fock operators.
//!
//! Used as brute-force oracles for the analytic Bogoliubov results and as
//! building blocks of the small qubit-oscillator propagators.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::fluctuations::QuadraticBosonForm;

/// Annihilation operator on `{|0>, ..., |cutoff>}`.
pub fn annihilation(cutoff: usize) -> DMatrix<f64> {
    let dim = cutoff + 1;
    DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

/// Number operator on `{|0>, ..., |cutoff>}`.
pub fn number(cutoff: usize) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_fn(cutoff + 1, |i, _| i as f64))
}

/// `X = (a + a^dag)/2`.
pub fn quadrature_x(cutoff: usize) -> DMatrix<f64> {
    let a = annihilation(cutoff);
    (&a + a.transpose()) * 0.5
}

/// `i P = (a - a^dag)/2`; `P^2 = -(iP)^2`.
pub fn quadrature_ip(cutoff: usize) -> DMatrix<f64> {
    let a = annihilation(cutoff);
    (&a - a.transpose()) * 0.5
}

/// Dense matrix of a quadratic form in the truncated space.
pub fn form_matrix(form: &QuadraticBosonForm, cutoff: usize) -> DMatrix<f64> {
    let f = form.to_pair_shape();
    let a = annihilation(cutoff);
    let ad = a.transpose();
    let pair = &a * &a + &ad * &ad;
    number(cutoff) * f.omega + pair * f.lambda
        + DMatrix::identity(cutoff + 1, cutoff + 1) * f.constant
}

/// Spectrum summary of a dense quadratic form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseFormSpectrum {
    pub ground: f64,
    pub gap: f64,
    pub var_x: f64,
    pub var_p: f64,
}

/// Ground energy, first gap and ground-state quadrature variances.
pub fn diagonalize_form(form: &QuadraticBosonForm, cutoff: usize) -> DenseFormSpectrum {
    let h = form_matrix(form, cutoff);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let psi = eig.eigenvectors.column(order[0]).into_owned();
    let x = quadrature_x(cutoff);
    let ip = quadrature_ip(cutoff);
    let x2 = (&x * &x * &psi).dot(&psi);
    let p2 = -(&ip * &ip * &psi).dot(&psi);
    DenseFormSpectrum {
        ground: eig.eigenvalues[order[0]],
        gap: eig.eigenvalues[order[1]] - eig.eigenvalues[order[0]],
        var_x: x2,
        var_p: p2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_commutator_below_cutoff() {
        let a = annihilation(10);
        let c = &a * a.transpose() - a.transpose() * &a;
        for i in 0..10 {
            assert!((c[(i, i)] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn vacuum_variances() {
        let f = QuadraticBosonForm::number_plus_pair(1.0, 0.0, 0.0);
        let s = diagonalize_form(&f, 20);
        assert!((s.var_x - 0.25).abs() < 1e-14);
        assert!((s.var_p - 0.25).abs() < 1e-14);
        assert!((s.gap - 1.0).abs() < 1e-14);
    }
}
