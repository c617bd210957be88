use dicke_stark::meanfield::{
    energy_landscape, ground_energy, order_parameter_closed_form, order_parameter_numeric, order_parameter_sweep,
    phase_diagram, MeanFieldSolution, PhaseSweep, PointStatus,
};
use dicke_stark::{classify_phase, critical_rabi, linspace, Execution, ModelParams, PhaseLabel};
use proptest::prelude::*;

fn canon(g: f64, u: f64) -> ModelParams {
    ModelParams::canonical(g, u).unwrap()
}

#[test]
fn stationary_at_closed_form() {
    let h = 1e-5;
    for (g, u) in [(0.40, 0.0168), (0.45, 0.0), (0.30, 0.03), (0.35, 0.0168)] {
        let p = canon(g, u);
        let beta = order_parameter_closed_form(&p).unwrap();
        let d = (ground_energy(&p, beta + h).unwrap() - ground_energy(&p, beta - h).unwrap()) / (2.0 * h);
        assert!(d.abs() < 1e-6, "g={g} U={u}: dE/dbeta = {d}");
        let c = ground_energy(&p, beta + h).unwrap() - 2.0 * ground_energy(&p, beta).unwrap()
            + ground_energy(&p, beta - h).unwrap();
        assert!(c > 0.0);
    }
}

#[test]
fn minimum_lies_below_origin() {
    for (g, u) in [(0.40, 0.0168), (0.34, 0.0168), (0.25, 0.03)] {
        let s = MeanFieldSolution::solve(&canon(g, u)).unwrap();
        assert!(s.energy < ground_energy(&canon(g, u), 0.0).unwrap());
        assert!(s.r_beta > 0.0);
    }
}

#[test]
fn landscape_tags_invalid_points() {
    let p = canon(0.45, 0.0);
    let pts = energy_landscape(&p, &[-7.0, 0.0, 3.0, 7.2, f64::NAN]);
    assert_eq!(pts[1].status, PointStatus::Ok);
    assert_eq!(pts[3].status, PointStatus::OutsideDomain);
    assert_eq!(pts[4].status, PointStatus::OutsideDomain);
    assert_eq!(pts[0].energy, energy_landscape(&p, &[7.0])[0].energy);
    // collapse side: some betas have |2g'| >= w_beta
    let q = canon(0.6, 0.0);
    let pts = energy_landscape(&q, &linspace(0.0, 7.0, 71));
    assert!(pts.iter().any(|x| x.status == PointStatus::BogoliubovUnstable));
}

#[test]
fn phase_diagram_matches_boundaries() {
    let sweep = PhaseSweep {
        u_values: linspace(0.0, 0.035, 8),
        g_values: linspace(0.0, 0.6, 61),
        omega_c: 1.0,
        omega_q: 0.015,
        n: 50,
    };
    let par = phase_diagram(&sweep, Execution::Parallel).unwrap();
    let seq = phase_diagram(&sweep, Execution::Sequential).unwrap();
    assert_eq!(par, seq);
    for (i, b) in par.boundary.iter().enumerate() {
        for (j, &g) in par.g_values.iter().enumerate() {
            let label = par.labels[i][j];
            match (b.g_t, b.g_c) {
                (Some(gt), _) if g < gt => assert_eq!(label, PhaseLabel::NormalPhase),
                (Some(gt), Some(gc)) if g > gt && g < gc => assert_eq!(label, PhaseLabel::SuperradiantPhase),
                (_, Some(gc)) if g > gc => assert_eq!(label, PhaseLabel::CollapseRegion),
                _ => {}
            }
        }
    }
    let empty = PhaseSweep { g_values: vec![], ..sweep };
    assert!(phase_diagram(&empty, Execution::Sequential).is_err());
}

#[test]
fn order_parameter_sweep_shape() {
    let base = canon(0.0, 0.0168);
    let gs = linspace(0.0, 0.55, 56);
    let pts = order_parameter_sweep(&base, &gs, Execution::Parallel);
    let g_t = critical_rabi(&base).unwrap();
    for p in &pts {
        match p.phase {
            PhaseLabel::NormalPhase => assert_eq!(p.beta, Some(0.0)),
            PhaseLabel::SuperradiantPhase => assert!(p.beta.unwrap() > 0.0 && p.g > g_t),
            PhaseLabel::CollapseRegion => assert!(p.beta.is_none()),
        }
    }
    let sp: Vec<f64> = pts.iter().filter_map(|p| (p.phase == PhaseLabel::SuperradiantPhase).then(|| p.beta.unwrap())).collect();
    assert!(sp.windows(2).all(|w| w[1] > w[0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_is_even(g in 0.0..0.49f64, u in 0.0..0.035f64, beta in 0.0..7.0f64) {
        let p = canon(g, u);
        match (ground_energy(&p, beta), ground_energy(&p, -beta)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn numeric_minimum_is_global_on_grid(g in 0.0..0.47f64, u in 0.0..0.03f64) {
        let p = canon(g, u);
        prop_assume!(classify_phase(&p) != PhaseLabel::CollapseRegion);
        let beta = order_parameter_numeric(&p).unwrap();
        let e = ground_energy(&p, beta).unwrap();
        for b in linspace(0.0, 7.0, 141) {
            if let Ok(x) = ground_energy(&p, b) {
                prop_assert!(e <= x + 1e-12);
            }
        }
    }
}
