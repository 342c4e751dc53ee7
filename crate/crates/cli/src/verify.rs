//! Invariant battery run by `bosegas verify`.

use std::f64::consts::PI;

use bosegas::bogolubov::{
    foldy_comparison, foldy_dimensionless_integral, foldy_integral_closed_form, fock_oracle_converged,
    kinetic_cutoff, pair_mode_bound, two_component_scaling, FoldyParams,
};
use bosegas::gp::{
    default_gp_grid, gp_minimize, gp_minimize_refined, gp_tf_limit, tf_density_square, tf_energy, tf_mu_closed_form,
    tf_solve,
};
use bosegas::homogeneous::{
    cell_k, cell_lower_bound, dyson_upper_ratio, lemma_xb_gap, lsy_lower_ratio, occupation_min, temple_bound,
    CellAnsatz, CellMethodParams, DiluteParams, LSY_CONSTANT,
};
use bosegas::potentials::{PairPotential, TrapPotential};
use bosegas::scattering::{
    default_grid, energy_integral, kinetic_fraction, solve_zero_energy, ScatteringError, ScatteringSolution,
};
use bosegas::{Dimension, Tolerances};
use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::report::{Column, Report};
use crate::CliError;

/// Outcome of one check: the worst deviation over its cases against a
/// tolerance, plus the number of cases that failed outright.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.worst <= self.tolerance
    }
}

struct Tally {
    cases: usize,
    failures: usize,
    worst: f64,
}

impl Tally {
    fn new() -> Self {
        Self { cases: 0, failures: 0, worst: 0.0 }
    }

    fn deviation(&mut self, x: f64) {
        self.cases += 1;
        if x.is_nan() {
            self.failures += 1;
        } else {
            self.worst = self.worst.max(x);
        }
    }

    fn holds(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn finish(self, suite: &'static str, name: &'static str, tolerance: f64) -> CheckResult {
        CheckResult { suite, name, cases: self.cases, failures: self.failures, worst: self.worst, tolerance }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn scatter_tol() -> Tolerances {
    Tolerances::new(1e-13, 1e-11, 50_000).expect("valid")
}

fn solve(p: &PairPotential, mu: f64) -> Result<ScatteringSolution, ScatteringError> {
    solve_zero_energy(p, mu, &default_grid(p, 1000)?, &scatter_tol())
}

fn hard_sphere() -> CheckResult {
    let mut t = Tally::new();
    for r0 in [0.1, 1.0, 10.0] {
        for mu in [0.5, 1.0, 2.0] {
            let p = PairPotential::hard_core(r0, Dimension::Three).expect("valid");
            t.deviation(solve(&p, mu).map(|s| rel(s.a(), r0)).unwrap_or(f64::NAN));
        }
    }
    t.finish("scattering", "hard_sphere_a_equals_radius", 1e-8)
}

fn square_wells(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..20 {
        let (r0, v0, mu): (f64, f64, f64) = (rng.random_range(0.2..3.0), rng.random_range(0.01..50.0), rng.random_range(0.2..2.0));
        let k: f64 = (v0 / (2.0 * mu)).sqrt() * r0;
        let exact = r0 * (1.0 - k.tanh() / k);
        let p = PairPotential::square_well(r0, v0, Dimension::Three).expect("valid");
        t.deviation(solve(&p, mu).map(|s| rel(s.a(), exact)).unwrap_or(f64::NAN));
    }
    t.finish("scattering", "square_well_closed_form", 1e-8)
}

fn energy_identity() -> CheckResult {
    let mut t = Tally::new();
    for p in [
        PairPotential::hard_core(1.0, Dimension::Three).expect("valid"),
        PairPotential::square_well(1.0, 5.0, Dimension::Three).expect("valid"),
    ] {
        let Ok(sol) = solve(&p, 1.0) else {
            t.deviation(f64::NAN);
            continue;
        };
        for ratio in [2.0, 10.0, 100.0] {
            let exact = 8.0 * PI * sol.a() * (1.0 - sol.a() / ratio);
            t.deviation(energy_integral(&sol, ratio).map(|e| rel(e, exact)).unwrap_or(f64::NAN));
        }
    }
    t.finish("scattering", "energy_integral_identity", 1e-6)
}

fn hard_disc() -> CheckResult {
    let mut t = Tally::new();
    for r0 in [0.5, 2.0] {
        let p = PairPotential::hard_core(r0, Dimension::Two).expect("valid");
        t.deviation(solve(&p, 1.0).map(|s| rel(s.a(), r0)).unwrap_or(f64::NAN));
    }
    let zero = PairPotential::zero(Dimension::Two);
    t.holds(matches!(solve(&zero, 1.0), Err(ScatteringError::NoLogAsymptote)));
    t.finish("scattering", "hard_disc_and_free_2d", 1e-8)
}

fn kinetic_fractions() -> CheckResult {
    let mut t = Tally::new();
    let hs = PairPotential::hard_core(1.0, Dimension::Three).expect("valid");
    t.deviation(solve(&hs, 1.0).and_then(|s| kinetic_fraction(&s)).map(|s| (s - 1.0).abs()).unwrap_or(f64::NAN));
    for v0 in [0.5, 5.0, 50.0] {
        let p = PairPotential::square_well(1.0, v0, Dimension::Three).expect("valid");
        let s = solve(&p, 1.0).and_then(|s| kinetic_fraction(&s)).unwrap_or(f64::NAN);
        t.holds(s > 0.0 && s <= 1.0);
    }
    t.finish("scattering", "kinetic_fraction", 1e-6)
}

fn bound_sandwich() -> CheckResult {
    let mut t = Tally::new();
    for i in 0..50 {
        let y = 10f64.powf(-20.0 + 16.0 * (i as f64 + 0.5) / 50.0);
        let lower = lsy_lower_ratio(y, LSY_CONSTANT).map(|l| l.value).unwrap_or(f64::NAN);
        let upper = dyson_upper_ratio(y, false).unwrap_or(f64::NAN);
        t.holds(lower <= 1.0 && upper >= 1.0);
        let p = DiluteParams::from_y(y, 1.0, 1.0).expect("valid");
        let cell = cell_lower_bound(&p, &CellAnsatz::default_for(Dimension::Three))
            .map(|b| b.estimate.value <= 4.0 * PI * p.rho * p.a * (1.0 + 1e-12))
            .unwrap_or(true);
        t.holds(cell);
    }
    t.finish("homogeneous", "bound_sandwich", 0.0)
}

fn temple(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    let mut attempts = 0;
    while t.cases < 200 && attempts < 20_000 {
        attempts += 1;
        let mut c = || Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let m = DMatrix::from_fn(5, 5, |_, _| c());
        let h = (&m + m.adjoint()) * Complex::new(0.5, 0.0);
        let psi = DVector::from_fn(5, |_, _| c()).normalize();
        let eig = SymmetricEigen::new(h.clone());
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let h_psi = &h * &psi;
        let mean = psi.dotc(&h_psi).re;
        let second = h_psi.norm_squared();
        if mean >= ev[1] {
            continue;
        }
        let bound = temple_bound(mean, second, ev[1]).unwrap_or(f64::NAN);
        t.deviation((bound - ev[0]).max(0.0));
    }
    t.finish("homogeneous", "temple_below_ground_state", 1e-10)
}

fn lemma(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..10_000 {
        let (x, b, k) = (rng.random_range(1e-9..1.0 - 1e-9), rng.random_range(1e-9..1.0 - 1e-9), rng.random_range(1.0..10.0));
        t.deviation(lemma_xb_gap(x, b, k).map(|g| (-g).max(0.0)).unwrap_or(f64::NAN));
    }
    t.finish("homogeneous", "lemma_xb_gap", 1e-14)
}

fn occupation() -> CheckResult {
    let mut t = Tally::new();
    for k in 1..=20 {
        let k = k as f64;
        for p in [4.0 * k, 4.0 * k + 3.0, 10.0 * k] {
            t.deviation(occupation_min(k, p).map(|v| (v - k * (k - 1.0)).abs()).unwrap_or(f64::NAN));
        }
    }
    t.finish("homogeneous", "occupation_large_p", 0.0)
}

fn k_monotone() -> CheckResult {
    let mut t = Tally::new();
    for y in [1e-12f64, 1e-14, 1e-16] {
        let ell = y.powf(-6.0 / 17.0);
        let r = (1.0 + y.powf(3.0 / 17.0) * ell.powi(3)).cbrt();
        let base = CellMethodParams::new(2.0, ell, r, 1.0, y.powf(1.0 / 17.0), Dimension::Three).expect("valid");
        let mut last = f64::INFINITY;
        for n in 2..=10_000 {
            let k = cell_k(&CellMethodParams { n: n as f64, ..base }, 1.0, 1.0, Dimension::Three);
            t.holds(k <= last);
            last = k;
        }
    }
    t.finish("homogeneous", "k_nonincreasing_in_n", 0.0)
}

fn gp_tol() -> Tolerances {
    Tolerances::new(1e-14, 1e-10, 50_000).expect("valid")
}

fn gp_linear() -> CheckResult {
    let mut t = Tally::new();
    let trap = TrapPotential::harmonic(1.0, Dimension::Three).expect("valid");
    match gp_minimize_refined(&trap, 1.0, 0.0, 1.0, 8.0, 400, &gp_tol(), 1e-3) {
        Ok(r) => {
            t.deviation((r.extrapolated_energy - 3.0).abs());
            t.holds(r.fine.residual <= 1e-6);
        }
        Err(_) => t.deviation(f64::NAN),
    }
    t.finish("gp", "harmonic_linear_limit", 1e-4)
}

fn gp_scaling() -> CheckResult {
    let mut t = Tally::new();
    let trap = TrapPotential::harmonic(1.0, Dimension::Three).expect("valid");
    for (n, a) in [(10.0, 0.01), (100.0, 0.001)] {
        let dev = default_gp_grid(&trap, 1.0, n * a, 1.0, 1500).and_then(|grid| {
            let many = gp_minimize(&trap, n, a, 1.0, &grid, &gp_tol())?;
            let one = gp_minimize(&trap, 1.0, n * a, 1.0, &grid, &gp_tol())?;
            Ok(rel(many.energy, n * one.energy))
        });
        t.deviation(dev.unwrap_or(f64::NAN));
    }
    t.finish("gp", "particle_number_scaling", 1e-6)
}

fn tf_forms() -> CheckResult {
    let mut t = Tally::new();
    for (d, n, a) in [(Dimension::Three, 10.0, 0.1), (Dimension::Three, 1e4, 0.01), (Dimension::Two, 1.0, 1.0)] {
        let trap = TrapPotential::harmonic(1.0, d).expect("valid");
        let dev = tf_solve(&trap, n, a, 1.0).and_then(|st| {
            let closed = tf_mu_closed_form(&trap, n, a, 1.0)?;
            let identity = tf_energy(&st)? / n + 4.0 * PI * a / n * tf_density_square(&st)?;
            Ok(rel(st.mu_tf, closed).max(rel(identity, st.mu_tf) / 10.0))
        });
        t.deviation(dev.unwrap_or(f64::NAN));
    }
    t.finish("gp", "thomas_fermi_closed_forms", 1e-10)
}

fn gp_tf() -> CheckResult {
    let mut t = Tally::new();
    let trap = TrapPotential::harmonic(1.0, Dimension::Three).expect("valid");
    match gp_tf_limit(&trap, &[10.0, 100.0, 1e3, 1e4], 1.0, 3000, &gp_tol()) {
        Ok(points) => {
            for w in points.windows(2) {
                t.holds(w[1].ratio < w[0].ratio);
            }
            t.deviation(points.last().map(|p| p.ratio - 1.0).unwrap_or(f64::NAN));
        }
        Err(_) => t.deviation(f64::NAN),
    }
    t.finish("gp", "gp_to_tf_limit", 0.05)
}

fn fock(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..10 {
        let a: f64 = rng.random_range(0.1..10.0);
        let b = a * rng.random_range(0.01..0.99);
        let exact = (a * a - b * b).sqrt() - a;
        match (fock_oracle_converged(a, b, 200, 1e-10), pair_mode_bound(a, b)) {
            (Ok((_, v)), Ok(m)) => {
                t.deviation((v - exact).abs());
                t.holds(v >= -2.0 * m.ground_bound_coeff - 1e-9);
            }
            _ => t.deviation(f64::NAN),
        }
    }
    t.finish("bogolubov", "fock_oracle_converges_to_bound", 1e-6)
}

fn completed_square(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..1000 {
        let a = rng.random_range(1e-3..1e3);
        let b = a * rng.random_range(1e-6..1.0);
        let dev = pair_mode_bound(a, b)
            .map(|m| rel(m.d * (1.0 + m.alpha * m.alpha), a).max(rel(2.0 * m.d * m.alpha, b)))
            .unwrap_or(f64::NAN);
        t.deviation(dev);
    }
    t.finish("bogolubov", "completed_square_identity", 1e-12)
}

fn foldy() -> CheckResult {
    let mut t = Tally::new();
    let tol = Tolerances::new(1e-15, 1e-12, 2000).expect("valid");
    t.deviation(foldy_dimensionless_integral(&tol).map(|q| rel(q, foldy_integral_closed_form())).unwrap_or(f64::NAN));
    for rho in [1.0, 16.0, 256.0] {
        t.deviation(foldy_comparison(rho, 1.0, &tol).map(|c| (c.ratio - 1.0).abs()).unwrap_or(f64::NAN));
    }
    t.finish("bogolubov", "foldy_integral_and_mode_sum", 1e-9)
}

fn cutoff(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new();
    for _ in 0..1000 {
        let tt = rng.random_range(1e-3..0.999);
        let v = rng.random_range(0.0..1e3);
        let ok = FoldyParams::new(1.0, 1.0, 1.0, rng.random_range(0.1..10.0), tt, 1.0, 4)
            .and_then(|p| kinetic_cutoff(v, &p))
            .map(|f| f >= 0.0 && f <= (1.0 - tt) * v * (1.0 + 1e-15))
            .unwrap_or(false);
        t.holds(ok);
    }
    t.finish("bogolubov", "kinetic_cutoff_range", 0.0)
}

fn two_component() -> CheckResult {
    let mut t = Tally::new();
    let ns: Vec<f64> = (3..=9).map(|p| 10f64.powi(p)).collect();
    match two_component_scaling(&ns) {
        Ok(s) => {
            t.deviation((s.energy_exponent - 1.4).abs());
            t.deviation((s.length_exponent + 0.2).abs());
        }
        Err(_) => t.deviation(f64::NAN),
    }
    t.finish("bogolubov", "two_component_exponents", 1e-6)
}

/// Runs every check; the order of the result is fixed.
pub fn battery(seed: u64) -> Vec<CheckResult> {
    let checks: Vec<Box<dyn Fn() -> CheckResult + Send + Sync>> = vec![
        Box::new(hard_sphere),
        Box::new(move || square_wells(seed)),
        Box::new(energy_identity),
        Box::new(hard_disc),
        Box::new(kinetic_fractions),
        Box::new(bound_sandwich),
        Box::new(move || temple(seed)),
        Box::new(move || lemma(seed)),
        Box::new(occupation),
        Box::new(k_monotone),
        Box::new(gp_linear),
        Box::new(gp_scaling),
        Box::new(tf_forms),
        Box::new(gp_tf),
        Box::new(move || fock(seed)),
        Box::new(move || completed_square(seed)),
        Box::new(foldy),
        Box::new(move || cutoff(seed)),
        Box::new(two_component),
    ];
    checks.par_iter().map(|c| c()).collect()
}

pub fn verify(config: &RunConfig) -> Result<Report, CliError> {
    let seed: u64 = config
        .get("seed")
        .unwrap_or("1")
        .parse()
        .map_err(|_| CliError::Parse { location: "--seed".into(), message: "seed must be a count".into() })?;
    let results = battery(seed);
    let mut report = Report::new(
        config,
        vec![
            Column::new("suite", "-"),
            Column::new("check", "-"),
            Column::new("cases", "1"),
            Column::new("failures", "1"),
            Column::new("worst", "1"),
            Column::new("tolerance", "1"),
            Column::new("passed", "-"),
        ],
    );
    let passed = results.iter().filter(|r| r.passed()).count();
    report.note("passed", passed);
    report.note("failed", results.len() - passed);
    for r in results {
        let ok = r.passed();
        report.push(vec![
            r.suite.into(),
            r.name.into(),
            r.cases.into(),
            r.failures.into(),
            r.worst.into(),
            r.tolerance.into(),
            ok.into(),
        ]);
    }
    Ok(report)
}
