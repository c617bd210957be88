//! One runner per subcommand. Each returns the tables to write.

use dicke_stark::dynamics::{rwa_sweep, Denominators, RwaSweep, VerifyOptions};
use dicke_stark::exact_diag::{collapse_scan, parity_ground_state, LanczosOptions};
use dicke_stark::fluctuations::{np_squeezing, sp_effective, sp_squeezing, spin_moments, SpTranscription};
use dicke_stark::ion::{
    drive_at_ratios, forward_map, inverse_map, to_two_pi_khz, two_pi_khz, HardwareLimits, IonConstraints,
    IonDriveParams,
};
use dicke_stark::meanfield::{energy_landscape, order_parameter_closed_form, order_parameter_sweep, phase_diagram, PhaseSweep};
use dicke_stark::{classify_phase, critical_rabi, Error, Execution, ModelParams, PhaseLabel, Result};

use crate::output::{Cell, Table};
use crate::settings::Settings;

/// Input errors raised while building a run are reported against `key`.
fn at<T>(s: &Settings, key: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config { .. } | Error::Io(_) => e,
        e if e.is_numerical() => e,
        e => s.error(key, e.to_string()),
    })
}

fn model(s: &Settings, g: f64, u: f64) -> Result<ModelParams> {
    let wq = s.positive("omega_q_over_wc")?;
    let n = s.count("n_spins")?;
    at(s, "omega_q_over_wc", ModelParams::new(1.0, wq, g, u, n))
}

pub fn phase_diagram_cmd(s: &Settings, exec: Execution) -> Result<Vec<Table>> {
    let mut u_values = s.grid("u", "_over_wc")?;
    u_values.extend(s.f64_list("u_marks_over_wc")?);
    u_values.sort_by(f64::total_cmp);
    u_values.dedup();
    let g_values = s.grid("g", "_over_wc")?;
    let base = model(s, 0.0, 0.0)?;
    for &u in &u_values {
        at(s, "u_max_over_wc", base.with_u(u).validate())?;
    }
    let sweep = PhaseSweep { u_values, g_values, omega_c: 1.0, omega_q: base.omega_q, n: base.n };
    let d = at(s, "g_points", phase_diagram(&sweep, exec))?;

    let mut grid = Table::new("phase_grid", &["u_over_wc", "g_over_wc", "phase"]);
    for (u, row) in d.u_values.iter().zip(&d.labels) {
        for (g, label) in d.g_values.iter().zip(row) {
            grid.push(vec![(*u).into(), (*g).into(), label.as_str().into()]);
        }
    }
    let mut boundary = Table::new("phase_boundary", &["u_over_wc", "g_t_over_wc", "g_c_over_wc"]);
    for b in &d.boundary {
        boundary.push(vec![b.u.into(), b.g_t.into(), b.g_c.into()]);
    }
    Ok(vec![grid, boundary])
}

pub fn order_parameter_cmd(s: &Settings, exec: Execution) -> Result<Vec<Table>> {
    let g_values = s.grid("g", "_over_wc")?;
    let mut t = Table::new("order_parameter", &["u_over_wc", "g_over_wc", "phase", "beta", "energy_over_wc"]);
    for u in s.f64_list("u_values_over_wc")? {
        let base = model(s, 0.0, u)?;
        at(s, "u_values_over_wc", base.validate())?;
        for p in order_parameter_sweep(&base, &g_values, exec) {
            t.push(vec![u.into(), p.g.into(), p.phase.as_str().into(), p.beta.into(), p.energy.into()]);
        }
    }
    Ok(vec![t])
}

pub fn landscape_cmd(s: &Settings, _exec: Execution) -> Result<Vec<Table>> {
    let u = s.nonnegative("u_over_wc")?;
    let betas = s.grid("beta", "")?;
    let mut t = Table::new("landscape", &["g_over_wc", "phase", "beta", "energy_over_wc", "status"]);
    for g in s.f64_list("g_values_over_wc")? {
        let p = model(s, g, u)?;
        let phase = classify_phase(&p);
        for pt in energy_landscape(&p, &betas) {
            t.push(vec![g.into(), phase.as_str().into(), pt.beta.into(), pt.energy.into(), format!("{:?}", pt.status).as_str().into()]);
        }
    }
    Ok(vec![t])
}

pub fn squeezing_cmd(s: &Settings, exec: Execution) -> Result<Vec<Table>> {
    let u = s.nonnegative("u_over_wc")?;
    let base = model(s, 0.0, u)?;
    let gs = s.grid("g", "_over_wc")?;
    let mut t = Table::new(
        "squeezing",
        &[
            "g_over_wc", "phase", "r_np", "r_sp", "mean_jx", "mean_jz", "var_jx", "var_jy", "var_jz", "ellipse_x",
            "ellipse_y",
        ],
    );
    let rows = exec.map(&gs, |&g| {
        let p = base.with_g(g);
        let phase = classify_phase(&p);
        let r_np = match phase {
            PhaseLabel::NormalPhase => np_squeezing(&p).ok(),
            _ => None,
        };
        let r_sp = match phase {
            PhaseLabel::SuperradiantPhase => order_parameter_closed_form(&p)
                .and_then(|b| sp_effective(&p, b, SpTranscription::Corrected))
                .and_then(|(sp, _)| sp_squeezing(&sp))
                .ok(),
            _ => None,
        };
        let m = spin_moments(&p).ok();
        let f = |x: fn(&dicke_stark::fluctuations::SpinMoments) -> f64| Cell::from(m.as_ref().map(x));
        vec![
            g.into(),
            phase.as_str().into(),
            r_np.into(),
            r_sp.into(),
            f(|m| m.mean_jx),
            f(|m| m.mean_jz),
            f(|m| m.var_jx),
            f(|m| m.var_jy),
            f(|m| m.var_jz),
            f(|m| m.ellipse_axes().0),
            f(|m| m.ellipse_axes().1),
        ]
    });
    rows.into_iter().for_each(|r| t.push(r));
    Ok(vec![t])
}

pub fn ed_cmd(s: &Settings, exec: Execution) -> Result<Vec<Table>> {
    let axis = s.string("sweep")?.to_string();
    let values = s.grid("sweep", "_over_wc")?;
    let (g0, u0) = (s.nonnegative("g_over_wc")?, s.nonnegative("u_over_wc")?);
    let points: Vec<ModelParams> = values
        .iter()
        .map(|&x| match axis.as_str() {
            "u" => model(s, g0, x),
            "g" => model(s, x, u0),
            other => Err(s.error("sweep", format!("`sweep` must be `u` or `g`, got `{other}`"))),
        })
        .collect::<Result<_>>()?;
    for p in &points {
        at(s, "sweep_max_over_wc", p.validate())?;
    }
    let n_max = s.count("n_max")?;
    let opts = LanczosOptions {
        tol: s.positive("lanczos_tol")?,
        max_iter: s.count("lanczos_max_iter")?,
        exec: Execution::Sequential,
        ..Default::default()
    };
    let results = exec.map(&points, |p| parity_ground_state(p, n_max, &opts));
    let mut t = Table::new(
        "ed",
        &[
            "g_over_wc", "u_over_wc", "energy_over_wc", "residual_over_wc", "mean_n", "mean_jz", "mean_jx2", "var_jx",
            "var_jy",
        ],
    );
    for (p, r) in points.iter().zip(results) {
        let (gs, o) = at(s, "n_max", r)?;
        t.push(vec![
            p.g.into(),
            p.u.into(),
            gs.energy.into(),
            gs.residual.into(),
            o.mean_n.into(),
            o.mean_jz.into(),
            o.mean_jx2.into(),
            o.var_jx.into(),
            o.var_jy.into(),
        ]);
    }
    Ok(vec![t])
}

pub fn collapse_cmd(s: &Settings, exec: Execution) -> Result<Vec<Table>> {
    let u = s.nonnegative("u_over_wc")?;
    let ladder = s.usize_list("cutoffs")?;
    let mut t = Table::new(
        "collapse",
        &["g_over_wc", "cutoff", "energy_over_wc", "difference_over_wc", "verdict", "all_converged"],
    );
    for g in s.f64_list("g_values_over_wc")? {
        let p = model(s, g, u)?;
        let r = at(s, "cutoffs", collapse_scan(&p, &ladder, exec))?;
        for (k, (&n, &e)) in r.cutoffs.iter().zip(&r.energies).enumerate() {
            let diff = k.checked_sub(1).map(|j| r.differences[j]);
            t.push(vec![g.into(), n.into(), e.into(), diff.into(), r.verdict.as_str().into(), r.all_converged.into()]);
        }
    }
    Ok(vec![t])
}

const KHZ: &str = "2pi_khz";

fn quantity(t: &mut Table, name: &str, value: impl Into<Cell>, unit: &str) {
    t.push(vec![name.into(), value.into(), unit.into()]);
}

fn drive_rows(t: &mut Table, prefix: &str, d: &IonDriveParams) {
    for (name, v) in [
        ("omega_trap", d.omega_trap),
        ("omega_r", d.omega_r),
        ("omega_b", d.omega_b),
        ("omega_s", d.omega_s),
        ("omega_big", d.omega_big),
        ("delta_r", d.delta_r),
        ("delta_b", d.delta_b),
    ] {
        quantity(t, &format!("{prefix}{name}"), to_two_pi_khz(v), KHZ);
    }
}

fn max_relative_difference(a: &IonDriveParams, b: &IonDriveParams) -> f64 {
    [
        (a.omega_r, b.omega_r),
        (a.omega_b, b.omega_b),
        (a.omega_s, b.omega_s),
        (a.omega_big, b.omega_big),
        (a.delta_r, b.delta_r),
        (a.delta_b, b.delta_b),
    ]
    .iter()
    .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE))
    .fold(0.0, f64::max)
}

pub fn ion_cmd(s: &Settings, _exec: Execution) -> Result<Vec<Table>> {
    let eta = s.positive("eta")?;
    let trap = two_pi_khz(s.positive("omega_trap_2pi_khz")?);
    let omega_r = two_pi_khz(s.positive("omega_r_2pi_khz")?);
    let omega_s = two_pi_khz(s.positive("omega_s_2pi_khz")?);
    let u_ratio = s.positive("u_over_wc")?;
    let wq_ratio = s.positive("omega_q_over_wc")?;
    let n_ions = s.count("n_ions")?;
    let (drive, omega_c) = drive_at_ratios(eta, trap, omega_r, omega_s, u_ratio, wq_ratio, n_ions);
    let mapped = at(s, "omega_s_2pi_khz", forward_map(&drive, omega_c))?;
    let norm = mapped.normalized();

    let mut t = Table::new("ion_map", &["quantity", "value", "unit"]);
    quantity(&mut t, "eta", eta, "1");
    quantity(&mut t, "n_ions", n_ions, "1");
    drive_rows(&mut t, "", &drive);
    quantity(&mut t, "omega_c", to_two_pi_khz(omega_c), KHZ);
    quantity(&mut t, "epsilon_s", mapped.epsilon_s, "1");
    quantity(&mut t, "lambda", to_two_pi_khz(mapped.lambda), KHZ);
    quantity(&mut t, "g", norm.g, "omega_c");
    quantity(&mut t, "u", norm.u, "omega_c");
    quantity(&mut t, "omega_q", norm.omega_q, "omega_c");
    quantity(&mut t, "g_t", critical_rabi(&norm).ok(), "omega_c");
    t.push(vec!["phase".into(), Cell::Empty, classify_phase(&norm).as_str().into()]);

    let limits = HardwareLimits {
        max_rabi: two_pi_khz(s.positive("max_rabi_2pi_khz")?),
        min_trap: two_pi_khz(s.positive("min_trap_2pi_khz")?),
        max_trap: two_pi_khz(s.positive("max_trap_2pi_khz")?),
    };
    let constraints = IonConstraints { eta, omega_trap: trap, n_ions, limits };
    match inverse_map(&mapped.params, &constraints) {
        Ok(back) => {
            t.push(vec!["inverse".into(), Cell::Empty, "feasible".into()]);
            drive_rows(&mut t, "inverse_", &back);
            quantity(&mut t, "round_trip_max_rel_error", max_relative_difference(&drive, &back), "1");
        }
        Err(Error::Infeasible { constraint, .. }) => {
            t.push(vec!["inverse".into(), Cell::Empty, format!("infeasible:{constraint}").as_str().into()]);
        }
        Err(e) => return at(s, "max_rabi_2pi_khz", Err(e)),
    }

    let mut d = Table::new("ion_diagnostics", &["check", "value", "pass_threshold", "status"]);
    for x in &mapped.diagnostics {
        d.push(vec![x.name.as_str().into(), x.value.into(), x.pass_threshold.into(), x.status.as_str().into()]);
    }
    Ok(vec![t, d])
}

pub fn verify_cmd(s: &Settings, exec: Execution) -> Result<Vec<Table>> {
    let sweep = RwaSweep {
        eta: s.positive("eta")?,
        omega_trap: two_pi_khz(s.positive("omega_trap_2pi_khz")?),
        carrier_ratio: s.nonnegative("carrier_ratio")?,
        u_ratio: s.positive("u_over_wc")?,
        wq_ratio: s.positive("omega_q_over_wc")?,
    };
    let omega_r: Vec<f64> = s.f64_list("omega_r_values_2pi_khz")?.into_iter().map(two_pi_khz).collect();
    if omega_r.iter().any(|w| !(*w > 0.0)) {
        return Err(s.error("omega_r_values_2pi_khz", "Rabi frequencies must be > 0"));
    }
    let denominators = match s.string("denominators")? {
        "approximate" => Denominators::Approximate,
        "exact" => Denominators::Exact,
        other => {
            return Err(s.error("denominators", format!("`denominators` must be `approximate` or `exact`, got `{other}`")))
        }
    };
    let opts = VerifyOptions {
        n_max: s.usize("n_max")?,
        duration: s.f64_or_auto("duration_ms")?,
        dt: s.f64_or_auto("dt_ms")?,
        denominators,
        samples: s.count("samples")?,
    };
    let reports = at(s, "omega_r_values_2pi_khz", rwa_sweep(&sweep, &omega_r, &opts, exec))?;

    let mut summary = Table::new(
        "verify_summary",
        &[
            "omega_r_2pi_khz", "omega_r_over_trap", "lambda_2pi_khz", "duration_ms", "dt_ms", "steps", "fidelity",
            "infidelity", "mean_infidelity", "max_infidelity", "max_norm_drift", "odd_population_full",
            "edge_population", "mean_n_full", "mean_n_effective",
        ],
    );
    let mut samples = Table::new(
        "verify_samples",
        &[
            "omega_r_2pi_khz", "t_ms", "infidelity", "mean_n_full", "mean_n_effective", "sigma_z_full",
            "sigma_z_effective", "norm_deviation",
        ],
    );
    for r in &reports {
        let w = to_two_pi_khz(r.omega_r);
        summary.push(vec![
            w.into(),
            (r.omega_r / r.omega_trap).into(),
            to_two_pi_khz(r.lambda).into(),
            r.duration.into(),
            r.dt.into(),
            r.steps.into(),
            r.fidelity.into(),
            r.infidelity.into(),
            r.mean_infidelity.into(),
            r.max_infidelity.into(),
            r.max_norm_drift.into(),
            r.odd_population_full.into(),
            r.edge_population.into(),
            r.mean_n_full.into(),
            r.mean_n_effective.into(),
        ]);
        for x in &r.samples {
            samples.push(vec![
                w.into(),
                x.t.into(),
                x.infidelity.into(),
                x.mean_n_full.into(),
                x.mean_n_effective.into(),
                x.sigma_z_full.into(),
                x.sigma_z_effective.into(),
                x.norm_deviation.into(),
            ]);
        }
    }
    Ok(vec![summary, samples])
}
