use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hamiltonian::HilbertSpace;
use super::lanczos::GroundStateResult;
use crate::error::{Error, Result};

/// Ground-state expectation values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub mean_n: f64,
    pub mean_jz: f64,
    pub mean_jx: f64,
    pub mean_jx2: f64,
    pub var_jx: f64,
    pub var_jy: f64,
    pub parity_expectation: Complex64,
}

/// `(J_+ + s J_-) psi / 2`; `s = 1` gives `J_x`, `s = -1` gives `i J_y`.
fn apply_jx(space: &HilbertSpace, psi: &[Complex64], sign_minus: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); psi.len()];
    for (idx, &amp) in psi.iter().enumerate() {
        if amp == Complex64::default() {
            continue;
        }
        let (n, m) = space.state(idx);
        if m < space.n_spins {
            out[space.index(n, m + 1)] += amp * (0.5 * space.j_plus(m));
        }
        if m > 0 {
            out[space.index(n, m - 1)] += amp * (0.5 * sign_minus * space.j_minus(m));
        }
    }
    out
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Photon number, collective-spin moments and parity of a state.
pub fn state_observables(space: &HilbertSpace, psi: &[Complex64]) -> Result<Observables> {
    if psi.len() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), actual: psi.len() });
    }
    let mut mean_n = 0.0;
    let mut mean_jz = 0.0;
    let mut parity = Complex64::default();
    for (idx, z) in psi.iter().enumerate() {
        let (n, m) = space.state(idx);
        let w = z.norm_sqr();
        mean_n += n as f64 * w;
        mean_jz += space.jz(m) * w;
        parity += space.parity(idx) * w;
    }
    let jx = apply_jx(space, psi, 1.0);
    let ijy = apply_jx(space, psi, -1.0);
    let mean_jx = inner(psi, &jx).re;
    let mean_jx2 = inner(&jx, &jx).re;
    // (J_+ - J_-)/2 = i J_y
    let mean_jy = inner(psi, &ijy).im;
    let mean_jy2 = inner(&ijy, &ijy).re;
    Ok(Observables {
        mean_n,
        mean_jz,
        mean_jx,
        mean_jx2,
        var_jx: mean_jx2 - mean_jx * mean_jx,
        var_jy: mean_jy2 - mean_jy * mean_jy,
        parity_expectation: parity,
    })
}

pub fn observables(state: &GroundStateResult, space: &HilbertSpace) -> Result<Observables> {
    state_observables(space, &state.vector)
}
