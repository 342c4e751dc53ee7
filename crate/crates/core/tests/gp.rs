use std::f64::consts::PI;
use std::time::Instant;

use bosegas::gp::{
    chemical_potential, default_gp_grid, gp_energy, gp_grid, gp_minimize, gp_minimize_refined, gp_residual,
    gp_tf_limit, mean_density, profile_rows, tf_density_square, tf_energy, tf_scaling, tf_solve,
};
use bosegas::potentials::TrapPotential;
use bosegas::{Dimension, Tolerances};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::new(1e-14, 1e-10, 50_000).unwrap()
}

fn harmonic(d: Dimension) -> TrapPotential {
    TrapPotential::harmonic(1.0, d).unwrap()
}

#[test]
fn harmonic_ground_state_energy() {
    for (d, exact) in [(Dimension::Three, 3.0), (Dimension::Two, 2.0)] {
        let refined = gp_minimize_refined(&harmonic(d), 1.0, 0.0, 1.0, 8.0, 400, &tol(), 1e-3).unwrap();
        assert!((refined.extrapolated_energy - exact).abs() < 1e-4, "{d}: {}", refined.extrapolated_energy);
        assert!((refined.fine.energy - exact).abs() <= 4.0 * refined.error_estimate + 1e-8);
        assert!(refined.fine.residual <= 1e-6);
    }
}

#[test]
fn gaussian_energy_on_grid() {
    // φ = π^{-3/4} e^{-r²/2} has kinetic and trap energy 3/2 each.
    let grid = gp_grid(10.0, 4000).unwrap();
    let phi: Vec<f64> = grid.nodes().iter().map(|&r| PI.powf(-0.75) * (-0.5 * r * r).exp()).collect();
    let e = gp_energy(&phi, &grid, &harmonic(Dimension::Three), 0.0, 1.0, Dimension::Three).unwrap();
    assert!((e.kinetic - 1.5).abs() < 1e-5 && (e.trap - 1.5).abs() < 1e-5);
    assert_eq!(e.interaction, 0.0);
    // ∫φ⁴ = (2π)^{-3/2}
    let e = gp_energy(&phi, &grid, &harmonic(Dimension::Three), 0.5, 1.0, Dimension::Three).unwrap();
    assert!((e.interaction - 4.0 * PI * 0.5 * (2.0 * PI).powf(-1.5)).abs() < 1e-6);
}

#[test]
fn energy_scales_with_particle_number() {
    let trap = harmonic(Dimension::Three);
    for (n, a) in [(10.0, 0.01), (100.0, 0.001)] {
        let grid = default_gp_grid(&trap, 1.0, n * a, 1.0, 1500).unwrap();
        let many = gp_minimize(&trap, n, a, 1.0, &grid, &tol()).unwrap();
        let one = gp_minimize(&trap, 1.0, n * a, 1.0, &grid, &tol()).unwrap();
        assert!((many.energy - n * one.energy).abs() <= 1e-6 * many.energy, "{} vs {}", many.energy, n * one.energy);
    }
}

#[test]
fn chemical_potential_matches_lagrange_multiplier() {
    let trap = harmonic(Dimension::Three);
    let grid = default_gp_grid(&trap, 1.0, 5.0, 1.0, 1200).unwrap();
    let st = gp_minimize(&trap, 1.0, 5.0, 1.0, &grid, &tol()).unwrap();
    let rho_bar = mean_density(&st).unwrap();
    let mu = chemical_potential(&st).unwrap();
    assert!((mu - (st.energy + 4.0 * PI * 5.0 * rho_bar)).abs() < 1e-12 * mu);
    // μ_GP is also <φ,Hφ>/N; a small perturbation changes E by second order.
    assert!(gp_residual(&st).unwrap() <= 1e-10);
    assert!(st.energy_breakdown.kinetic > 0.0 && st.energy_breakdown.interaction > 0.0);
    let rows = profile_rows(&st);
    assert_eq!(rows.len(), grid.len());
    assert!(rows.iter().all(|r| (r[2] - r[1] * r[1]).abs() == 0.0));
}

#[test]
fn residual_decreases_at_the_end_of_the_flow() {
    let trap = harmonic(Dimension::Three);
    let grid = default_gp_grid(&trap, 1.0, 1.0, 1.0, 800).unwrap();
    let st = gp_minimize(&trap, 1.0, 1.0, 1.0, &grid, &tol()).unwrap();
    let tail = &st.residual_history[st.residual_history.len().saturating_sub(10)..];
    assert!(tail.windows(2).all(|w| w[1] <= w[0]), "{tail:?}");
}

#[test]
fn thomas_fermi_closed_forms() {
    for (n, a) in [(1.0, 1.0), (10.0, 0.1), (1e4, 0.01)] {
        let st = tf_solve(&harmonic(Dimension::Three), n, a, 1.0).unwrap();
        let exact = (15.0 * n * a).powf(0.4);
        assert!((st.mu_tf - exact).abs() <= 1e-10 * exact);
        let e = tf_energy(&st).unwrap();
        let identity = e / n + 4.0 * PI * a / n * tf_density_square(&st).unwrap();
        assert!((st.mu_tf - identity).abs() <= 1e-9 * st.mu_tf);
        // E_TF = (5/7) N μ_TF for a harmonic trap in 3D.
        assert!((e - 5.0 / 7.0 * n * st.mu_tf).abs() <= 1e-9 * e);
    }
    let st = tf_solve(&harmonic(Dimension::Two), 1.0, 1.0, 1.0).unwrap();
    assert!((st.mu_tf - 4.0).abs() <= 1e-10 * 4.0);
    let e = tf_energy(&st).unwrap();
    assert!((st.mu_tf - (e + 4.0 * PI * tf_density_square(&st).unwrap())).abs() <= 1e-9 * 4.0);
}

#[test]
fn tf_energy_scaling() {
    for (s, d) in [(2.0, Dimension::Three), (4.0, Dimension::Three), (2.0, Dimension::Two), (3.0, Dimension::Two)] {
        let trap = TrapPotential::power_law(s, 1.0, d).unwrap();
        let e1 = tf_energy(&tf_solve(&trap, 1.0, 1.0, 1.0).unwrap()).unwrap();
        for g in [10.0, 1e3] {
            let eg = tf_energy(&tf_solve(&trap, 1.0, g, 1.0).unwrap()).unwrap();
            assert!((eg / e1 - tf_scaling(g, s, d)).abs() <= 1e-8 * eg / e1, "s={s} d={d} g={g}");
        }
    }
}

#[test]
fn gp_approaches_thomas_fermi() {
    let start = Instant::now();
    let trap = harmonic(Dimension::Three);
    let g = [10.0, 100.0, 1e3, 1e4];
    let points = gp_tf_limit(&trap, &g, 1.0, 3000, &tol()).unwrap();
    assert!(start.elapsed().as_secs_f64() < 60.0);
    for w in points.windows(2) {
        assert!(w[1].ratio < w[0].ratio && w[1].l1_distance < w[0].l1_distance);
    }
    let last = points.last().unwrap();
    assert!(last.ratio > 1.0 && last.ratio < 1.05, "{}", last.ratio);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn minimizer_invariants(g in 0.0f64..20.0, n in 0.5f64..5.0) {
        let trap = harmonic(Dimension::Three);
        let grid = default_gp_grid(&trap, n, g, 1.0, 400).unwrap();
        let st = gp_minimize(&trap, n, g, 1.0, &grid, &tol()).unwrap();
        let norm: f64 = grid.nodes().iter().zip(&st.phi)
            .map(|(&r, &p)| 4.0 * PI * r * r * p * p * (grid.nodes()[1] - grid.nodes()[0]))
            .sum();
        prop_assert!((norm - n).abs() <= 1e-10 * n);
        prop_assert!(st.phi.iter().all(|&p| p >= 0.0));
        // Gaussian trial of the linear problem is an upper bound.
        prop_assert!(st.energy >= 3.0 * n * (1.0 - 1e-3));
        let tf = tf_energy(&tf_solve(&trap, n, g.max(1e-6), 1.0).unwrap()).unwrap();
        prop_assert!(g == 0.0 || st.energy >= tf);
    }
}
