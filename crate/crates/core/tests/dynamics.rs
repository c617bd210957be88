use std::f64::consts::TAU;

use dicke_stark::dynamics::{
    build_effective, build_full_drive, evolve, ground_vacuum, odd_population, rwa_sweep, verify_effective,
    Denominators, EvolveOptions, ExactPropagator, RwaSweep, VerifyOptions,
};
use dicke_stark::ion::{canonical_drive, two_pi_khz};
use dicke_stark::Execution;

#[test]
fn exact_denominators_verify_at_canonical_point() {
    let (d, wc) = canonical_drive(1);
    let opts = VerifyOptions { n_max: 12, denominators: Denominators::Exact, samples: 20, ..Default::default() };
    let r = verify_effective(&d, wc, &opts).unwrap();
    assert!(r.fidelity > 0.999, "{}", r.fidelity);
    assert!(r.edge_population < 1e-12);
    // first sidebands leak a little population into odd Fock states
    assert!(r.odd_population_full > 0.0 && r.odd_population_full < 1e-3);
    assert!(r.odd_population_effective < 1e-20);
}

#[test]
fn effective_spectrum_is_cutoff_converged() {
    let (d, wc) = canonical_drive(1);
    let low = |n_max: usize| {
        let h = build_effective(&d, wc, n_max, Denominators::Approximate).unwrap();
        ExactPropagator::new(&h).unwrap().eigenvalues().min()
    };
    assert!((low(20) - low(40)).abs() < 1e-9);
    // the two-photon coupling lowers the ground energy below -w_q/2
    let wq = -d.omega_0() - d.omega_big;
    assert!(low(20) < -wq / 2.0);
}

#[test]
fn full_drive_without_carrier_keeps_vacuum_in_effective_frame() {
    let (mut d, _) = canonical_drive(1);
    d.omega_s = 0.0;
    let h = build_full_drive(&d, 8).unwrap();
    let psi0 = ground_vacuum(8);
    let tr = evolve(&h, &psi0, 0.01, &EvolveOptions::default()).unwrap();
    assert!(tr.max_norm_drift < 1e-8);
    assert!(odd_population(tr.final_state(), 8) < 1e-3);
}

#[test]
fn sweep_is_execution_independent() {
    let omega_r = [two_pi_khz(100.0), two_pi_khz(200.0)];
    let opts = VerifyOptions { n_max: 8, duration: Some(0.05), samples: 5, ..Default::default() };
    let a = rwa_sweep(&RwaSweep::default(), &omega_r, &opts, Execution::Parallel).unwrap();
    let b = rwa_sweep(&RwaSweep::default(), &omega_r, &opts, Execution::Sequential).unwrap();
    assert_eq!(a, b);
    assert!((a[0].omega_r / TAU - 100.0).abs() < 1e-12);
}
