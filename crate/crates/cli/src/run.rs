//! Command dispatch.

use std::f64::consts::PI;

use bosegas::bogolubov::{
    correlation_diagnostic, foldy_comparison, foldy_dimensionless_integral, foldy_integral_closed_form,
    fock_oracle_converged, pair_mode_bound, two_component_scaling,
};
use bosegas::gp::{
    default_gp_grid, gp_grid, gp_minimize, gp_tf_limit, mean_density, profile_rows, tf_density_square, tf_energy,
    tf_mu_closed_form, tf_solve,
};
use bosegas::homogeneous::{
    cell_lower_bound, dyson_upper_ratio, lhy_energy, lsy_lower_ratio, schick_2d_bounds, temple_condition_2d,
    upper_bound_2d_intermediate, CellAnsatz, DiluteParams, SchickConstants, DYSON_LOWER_RATIO,
};
use bosegas::potentials::{parse_potential, parse_trap, PairPotential, TrapPotential};
use bosegas::scattering::{born_integral, default_grid, energy_integral, kinetic_fraction, solve_zero_energy};
use bosegas::{Dimension, Tolerances};
use rayon::prelude::*;

use crate::config::{parse_values, Command, RunConfig};
use crate::report::{Cell, Column, Report};
use crate::CliError;

fn number(config: &RunConfig, key: &str) -> Result<f64, CliError> {
    let text = config.get(key).ok_or_else(|| CliError::Parse {
        location: format!("--{}", key.replace('_', "-")),
        message: format!("`{}` requires `{key}`", config.command),
    })?;
    text.trim().parse().map_err(|_| CliError::Parse { location: key.into(), message: format!("`{text}` is not a number") })
}

fn optional_number(config: &RunConfig, key: &str) -> Result<Option<f64>, CliError> {
    config.get(key).map(|_| number(config, key)).transpose()
}

fn count(config: &RunConfig, key: &str) -> Result<usize, CliError> {
    let x = number(config, key)?;
    if x < 0.0 || x.fract() != 0.0 {
        return Err(CliError::Parse { location: key.into(), message: format!("`{x}` is not a count") });
    }
    Ok(x as usize)
}

fn values(config: &RunConfig, key: &str) -> Result<Vec<f64>, CliError> {
    let text = config.get(key).unwrap_or_default();
    parse_values(text).map_err(|message| CliError::Parse { location: key.into(), message })
}

fn dimension(config: &RunConfig) -> Result<Dimension, CliError> {
    let d = count(config, "dim")?;
    Dimension::from_usize(d).ok_or_else(|| CliError::Parse { location: "--dim".into(), message: format!("dimension must be 2 or 3, got {d}") })
}

fn tolerances(config: &RunConfig, base: Tolerances) -> Result<Tolerances, CliError> {
    let t = &config.tolerances;
    Tolerances::new(
        t.abs_tol.unwrap_or(base.abs_tol),
        t.rel_tol.unwrap_or(base.rel_tol),
        t.max_iterations.unwrap_or(base.max_iterations),
    )
    .map_err(|e| CliError::Parse { location: "tolerances".into(), message: e.to_string() })
}

fn potential(config: &RunConfig, d: Dimension) -> Result<PairPotential, CliError> {
    let spec = config.get("potential").unwrap_or_default();
    parse_potential(spec, d).map_err(|e| CliError::Parse { location: "--potential".into(), message: e.to_string() })
}

fn trap(config: &RunConfig, d: Dimension) -> Result<TrapPotential, CliError> {
    let spec = config.get("trap").unwrap_or_default();
    parse_trap(spec, d).map_err(|e| CliError::Parse { location: "--trap".into(), message: e.to_string() })
}

/// Runs `f` on every input in parallel, keeping input order.
fn sweep<T: Sync, R: Send>(inputs: &[T], f: impl Fn(&T) -> Result<R, CliError> + Sync) -> Result<Vec<R>, CliError> {
    let pool = match std::env::var("BOSEGAS_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        _ => rayon::ThreadPoolBuilder::new().build(),
    }
    .map_err(|e| CliError::Io(e.to_string()))?;
    pool.install(|| inputs.par_iter().map(&f).collect())
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    match config.command {
        Command::Scatter => scatter(config),
        Command::Bounds => bounds(config),
        Command::Gp => gp(config),
        Command::Tf => tf(config),
        Command::GpTfLimit => gp_tf(config),
        Command::Foldy => foldy(config),
        Command::Bogolubov => bogolubov(config),
        Command::Verify => crate::verify::verify(config),
    }
}

fn scatter(config: &RunConfig) -> Result<Report, CliError> {
    let d = dimension(config)?;
    let p = potential(config, d)?;
    let spec = config.get("potential").unwrap_or_default().to_string();
    let mus = values(config, "mu")?;
    let points = count(config, "grid_points")?;
    let radius = optional_number(config, "radius")?;
    let tol = tolerances(config, Tolerances::new(1e-13, 1e-11, 50_000).expect("valid"))?;

    let born = born_integral(&p, &tol).map_err(|e| CliError::numerical("born_integral", spec.clone(), e))?;
    let grid = default_grid(&p, points).map_err(|e| CliError::numerical("default_grid", spec.clone(), e))?;
    let rows = sweep(&mus, |&mu| {
        let params = format!("{spec}, mu={mu}");
        let sol = solve_zero_energy(&p, mu, &grid, &tol).map_err(|e| CliError::numerical("solve_zero_energy", params.clone(), e))?;
        let s = kinetic_fraction(&sol).map_err(|e| CliError::numerical("kinetic_fraction", params.clone(), e))?;
        let mut row: Vec<Cell> = vec![mu.into(), sol.a().into(), s.into(), born.to_f64().into(), sol.match_radius().into()];
        if let Some(r) = radius {
            let e = energy_integral(&sol, r).map_err(|e| CliError::numerical("energy_integral", params.clone(), e))?;
            row.push(e.into());
        }
        Ok(row)
    })?;

    let dd = d.as_usize();
    let mut columns = vec![
        Column::new("mu", "energy*length^2"),
        Column::new("a", "length"),
        Column::new("s", "1"),
        Column::new("born", &format!("energy*length^{dd}")),
        Column::new("match_radius", "length"),
    ];
    if radius.is_some() {
        columns.push(Column::new("energy_integral", "energy*length^3"));
    }
    let mut report = Report::new(config, columns);
    report.note("dimension", dd);
    if let Some(r) = radius {
        report.note("radius", r);
    }
    rows.into_iter().for_each(|r| report.push(r));
    Ok(report)
}

fn bounds(config: &RunConfig) -> Result<Report, CliError> {
    let d = dimension(config)?;
    let ys = values(config, "y_grid")?;
    let a = number(config, "a")?;
    let mu = number(config, "mu")?;
    let c = number(config, "c_lsy")?;
    let rows = sweep(&ys, |&y| {
        let params = format!("Y={y}, a={a}, mu={mu}");
        let err = |op: &str| {
            let params = params.clone();
            let op = op.to_string();
            move |e| CliError::numerical(&op, params, e)
        };
        match d {
            Dimension::Three => {
                let upper = dyson_upper_ratio(y, false).map_err(err("dyson_upper_ratio"))?;
                let improved = dyson_upper_ratio(y, true).map_err(err("dyson_upper_ratio"))?;
                let lsy = lsy_lower_ratio(y, c).map_err(err("lsy_lower_ratio"))?;
                let p = DiluteParams::from_y(y, a, mu).map_err(err("dilute_params"))?;
                let lead = 4.0 * PI * mu * p.rho * a;
                let lhy = lhy_energy(&p).map_err(err("lhy_energy"))?.value / lead;
                let cell = match cell_lower_bound(&p, &CellAnsatz::default_for(d)) {
                    Ok(b) => b.estimate.value / lead,
                    Err(_) => f64::NAN,
                };
                Ok(vec![
                    y.into(),
                    upper.into(),
                    lsy.value.into(),
                    DYSON_LOWER_RATIO.into(),
                    improved.into(),
                    lhy.into(),
                    cell.into(),
                ])
            }
            Dimension::Two => {
                let p = DiluteParams::new(y / (a * a), a, mu, d).map_err(err("dilute_params"))?;
                let lead = 4.0 * PI * mu * p.rho / p.log_parameter();
                let (upper, lower) = schick_2d_bounds(&p, SchickConstants::default()).map_err(err("schick_2d_bounds"))?;
                let mid = upper_bound_2d_intermediate(&p, None).map_err(err("upper_bound_2d_intermediate"))?;
                let temple = temple_condition_2d(&p).unwrap_or(false);
                let cell = match cell_lower_bound(&p, &CellAnsatz::default_for(d)) {
                    Ok(b) => b.estimate.value / lead,
                    Err(_) => f64::NAN,
                };
                Ok(vec![
                    y.into(),
                    p.log_parameter().into(),
                    (upper.value / lead).into(),
                    (lower.value / lead).into(),
                    (mid.value / lead).into(),
                    cell.into(),
                    temple.into(),
                ])
            }
        }
    })?;
    let columns = match d {
        Dimension::Three => vec![
            Column::new("Y", "1"),
            Column::new("upper_ratio", "1"),
            Column::new("lsy_lower", "1"),
            Column::new("dyson_lower", "1"),
            Column::new("upper_ratio_finite_range", "1"),
            Column::new("lhy_ratio", "1"),
            Column::new("cell_lower_ratio", "1"),
        ],
        Dimension::Two => vec![
            Column::new("Y", "1"),
            Column::new("log_parameter", "1"),
            Column::new("upper_ratio", "1"),
            Column::new("lower_ratio", "1"),
            Column::new("upper_ratio_optimal_b", "1"),
            Column::new("cell_lower_ratio", "1"),
            Column::new("temple_condition", "-"),
        ],
    };
    let mut report = Report::new(config, columns);
    report.note("ratios", "energy per particle over the leading term");
    rows.into_iter().for_each(|r| report.push(r));
    Ok(report)
}

fn gp_tolerances(config: &RunConfig) -> Result<Tolerances, CliError> {
    tolerances(config, Tolerances::new(1e-14, 1e-10, 50_000).expect("valid"))
}

fn gp(config: &RunConfig) -> Result<Report, CliError> {
    let d = dimension(config)?;
    let trap = trap(config, d)?;
    let n = number(config, "n")?;
    let g = number(config, "a")?;
    let mu = number(config, "mu")?;
    let cells = count(config, "cells")?;
    let tol = gp_tolerances(config)?;
    let params = format!("trap={}, N={n}, g={g}", config.get("trap").unwrap_or_default());
    let grid = match optional_number(config, "r_max")? {
        Some(r) => gp_grid(r, cells),
        None => default_gp_grid(&trap, n, g, mu, cells),
    }
    .map_err(|e| CliError::numerical("gp_grid", params.clone(), e))?;
    let st = gp_minimize(&trap, n, g, mu, &grid, &tol).map_err(|e| CliError::numerical("gp_minimize", params.clone(), e))?;
    let rho_bar = mean_density(&st).map_err(|e| CliError::numerical("mean_density", params.clone(), e))?;

    let dd = d.as_usize();
    let mut report = Report::new(
        config,
        vec![
            Column::new("r", "length"),
            Column::new("phi", &format!("length^-{}", dd as f64 / 2.0)),
            Column::new("rho", &format!("length^-{dd}")),
        ],
    );
    report.note("energy", st.energy);
    report.note("kinetic", st.energy_breakdown.kinetic);
    report.note("trap_energy", st.energy_breakdown.trap);
    report.note("interaction", st.energy_breakdown.interaction);
    report.note("chemical_potential", st.mu_gp);
    report.note("mean_density", rho_bar);
    report.note("residual", st.residual);
    report.note("iterations", st.iterations);
    for [r, phi, rho] in profile_rows(&st) {
        report.push(vec![r.into(), phi.into(), rho.into()]);
    }
    Ok(report)
}

fn tf(config: &RunConfig) -> Result<Report, CliError> {
    let d = dimension(config)?;
    let trap = trap(config, d)?;
    let ns = values(config, "n")?;
    let g = number(config, "a")?;
    let mu = number(config, "mu")?;
    let rows = sweep(&ns, |&n| {
        let params = format!("trap={}, N={n}, g={g}", config.get("trap").unwrap_or_default());
        let err = |op: &'static str| {
            let params = params.clone();
            move |e| CliError::numerical(op, params, e)
        };
        let st = tf_solve(&trap, n, g, mu).map_err(err("tf_solve"))?;
        let e = tf_energy(&st).map_err(err("tf_energy"))?;
        let rho2 = tf_density_square(&st).map_err(err("tf_energy"))?;
        let closed = tf_mu_closed_form(&trap, n, g, mu).map_err(err("tf_mu_closed_form"))?;
        let identity = e / n + 4.0 * PI * mu * g / n * rho2;
        Ok(vec![n.into(), st.mu_tf.into(), closed.into(), identity.into(), e.into(), st.support_radius.into()])
    })?;
    let mut report = Report::new(
        config,
        vec![
            Column::new("n", "1"),
            Column::new("mu_tf", "energy"),
            Column::new("mu_closed_form", "energy"),
            Column::new("mu_identity", "energy"),
            Column::new("energy", "energy"),
            Column::new("support_radius", "length"),
        ],
    );
    rows.into_iter().for_each(|r| report.push(r));
    Ok(report)
}

fn gp_tf(config: &RunConfig) -> Result<Report, CliError> {
    let d = dimension(config)?;
    let trap = trap(config, d)?;
    let gs = values(config, "g_grid")?;
    let mu = number(config, "mu")?;
    let cells = count(config, "cells")?;
    let tol = gp_tolerances(config)?;
    let rows = sweep(&gs, |&g| {
        let p = gp_tf_limit(&trap, &[g], mu, cells, &tol).map_err(|e| CliError::numerical("gp_tf_limit", format!("g={g}"), e))?[0];
        Ok(vec![p.g.into(), p.e_gp.into(), p.e_tf.into(), p.ratio.into(), p.l1_distance.into()])
    })?;
    let mut report = Report::new(
        config,
        vec![
            Column::new("g", "1"),
            Column::new("e_gp", "energy"),
            Column::new("e_tf", "energy"),
            Column::new("ratio", "1"),
            Column::new("l1_distance", "1"),
        ],
    );
    rows.into_iter().for_each(|r| report.push(r));
    Ok(report)
}

fn foldy(config: &RunConfig) -> Result<Report, CliError> {
    let mu = number(config, "mu")?;
    let tol = tolerances(config, Tolerances::new(1e-15, 1e-12, 2000).expect("valid"))?;
    let quadrature = foldy_dimensionless_integral(&tol).map_err(|e| CliError::numerical("foldy_dimensionless_integral", String::new(), e))?;
    if config.parameters.contains_key("scaling_n") {
        let ns = values(config, "scaling_n")?;
        let s = two_component_scaling(&ns).map_err(|e| CliError::numerical("two_component_scaling", format!("{ns:?}"), e))?;
        let mut report = Report::new(
            config,
            vec![
                Column::new("n", "1"),
                Column::new("l_opt", "length"),
                Column::new("e_opt", "energy"),
                Column::new("l_numeric", "length"),
                Column::new("e_numeric", "energy"),
            ],
        );
        report.note("energy_exponent", s.energy_exponent);
        report.note("length_exponent", s.length_exponent);
        for r in s.records {
            report.push(vec![r.n.into(), r.l_opt.into(), r.e_opt.into(), r.l_numeric.into(), r.e_numeric.into()]);
        }
        return Ok(report);
    }
    let rhos = values(config, "rho_grid")?;
    let rows = sweep(&rhos, |&rho| {
        let params = format!("rho={rho}, mu={mu}");
        let c = foldy_comparison(rho, mu, &tol).map_err(|e| CliError::numerical("foldy_comparison", params.clone(), e))?;
        let diag = correlation_diagnostic(rho).map_err(|e| CliError::numerical("correlation_diagnostic", params, e))?;
        Ok(vec![
            rho.into(),
            c.mode_energy.into(),
            c.closed_form.into(),
            c.ratio.into(),
            diag.ell_cor.into(),
            diag.spacing.into(),
            diag.ratio.into(),
        ])
    })?;
    let mut report = Report::new(
        config,
        vec![
            Column::new("rho", "length^-3"),
            Column::new("mode_energy", "energy"),
            Column::new("closed_form", "energy"),
            Column::new("ratio", "1"),
            Column::new("ell_cor", "length"),
            Column::new("spacing", "length"),
            Column::new("ell_ratio", "1"),
        ],
    );
    report.note("integral_quadrature", quadrature);
    report.note("integral_closed_form", foldy_integral_closed_form());
    rows.into_iter().for_each(|r| report.push(r));
    Ok(report)
}

fn bogolubov(config: &RunConfig) -> Result<Report, CliError> {
    let a = number(config, "mode_a")?;
    let bs = values(config, "mode_b")?;
    let n_max = count(config, "n_max")?;
    let tol = config.tolerances.abs_tol.unwrap_or(1e-10);
    let rows = sweep(&bs, |&b| {
        let params = format!("A={a}, B={b}");
        let m = pair_mode_bound(a, b).map_err(|e| CliError::numerical("pair_mode_bound", params.clone(), e))?;
        let (n_used, oracle) = fock_oracle_converged(a, b, n_max, tol).map_err(|e| CliError::numerical("fock_oracle", params, e))?;
        Ok(vec![
            a.into(),
            b.into(),
            m.alpha.into(),
            m.d.into(),
            m.ground_bound_coeff.into(),
            oracle.into(),
            (-2.0 * m.ground_bound_coeff).into(),
            n_used.into(),
        ])
    })?;
    let mut report = Report::new(
        config,
        vec![
            Column::new("A", "energy"),
            Column::new("B", "energy"),
            Column::new("alpha", "1"),
            Column::new("D", "energy"),
            Column::new("bound_coeff", "energy"),
            Column::new("oracle", "energy"),
            Column::new("bound", "energy"),
            Column::new("n_used", "1"),
        ],
    );
    rows.into_iter().for_each(|r| report.push(r));
    Ok(report)
}
