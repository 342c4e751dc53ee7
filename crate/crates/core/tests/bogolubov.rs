use std::f64::consts::PI;
use std::time::Instant;

use bosegas::bogolubov::{
    correlation_diagnostic, foldy_comparison, foldy_dimensionless_integral, foldy_dimensionless_integrand,
    foldy_energy, foldy_integral_closed_form, foldy_mode_energy, foldy_mode_integrand, fock_oracle,
    fock_oracle_converged, kinetic_cutoff, pair_mode_bound, two_component_energy, two_component_scaling,
    yukawa_ft, yukawa_ft_quadrature, FoldyParams,
};
use bosegas::Tolerances;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::new(1e-15, 1e-12, 2000).unwrap()
}

// Two modes on the full product space {0..m}², ground state by dense
// diagonalization; the Bogolubov spectrum is √(A²-B²) - A.
fn product_space_ground(a: f64, b: f64, m: usize) -> f64 {
    let dim = m + 1;
    let lower = DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 });
    let eye = DMatrix::<f64>::identity(dim, dim);
    let b1 = lower.kronecker(&eye);
    let b2 = eye.kronecker(&lower);
    let n = b1.transpose() * &b1 + b2.transpose() * &b2;
    let pair = b1.transpose() * b2.transpose();
    let h = n * a + (&pair + pair.transpose()) * b;
    SymmetricEigen::new(h).eigenvalues.min()
}

#[test]
fn fock_oracle_three_four_five() {
    let v = fock_oracle(5.0, 3.0, 60, 1e-9).unwrap();
    assert!((v + 1.0).abs() < 1e-6, "{v}");
    assert!((v - product_space_ground(5.0, 3.0, 30)).abs() < 1e-8);
}

#[test]
fn fock_oracle_respects_bound_and_converges() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let a = rng.random_range(0.1..10.0);
        let b = a * rng.random_range(0.01..0.99);
        let (n, v) = fock_oracle_converged(a, b, 200, 1e-10).unwrap();
        let exact = (a * a - b * b).sqrt() - a;
        let bound = -2.0 * pair_mode_bound(a, b).unwrap().ground_bound_coeff;
        assert!(n <= 200);
        assert!((v - exact).abs() < 1e-6, "A={a} B={b}: {v} vs {exact}");
        assert!(v >= bound - 1e-9);
        let mut last = 0.0;
        for m in [4, 8, 16, 32] {
            let coarse = fock_oracle(a, b, m, f64::INFINITY).unwrap();
            assert!(coarse <= last + 1e-12 && coarse >= bound - 1e-9 && coarse <= 0.0);
            last = coarse;
        }
    }
}

#[test]
fn yukawa_transform_against_quadrature() {
    let t = Tolerances::new(1e-14, 1e-11, 5000).unwrap();
    for (k, w) in [(0.0, 1.0), (2.0, 1.0), (0.5, 3.0)] {
        let q = yukawa_ft_quadrature(k, w, &t).unwrap();
        let c = yukawa_ft(k, w).unwrap();
        assert!((q - c).abs() <= 1e-8 * c, "k={k} w={w}: {q} vs {c}");
    }
    assert!((yukawa_ft(0.0, 1.0).unwrap() - 4.0 * PI).abs() < 1e-15);
    assert!((yukawa_ft(1e6, 1.0).unwrap() * 1e12 / (4.0 * PI) - 1.0).abs() < 1e-11);
    assert!(yukawa_ft(1.0, 0.0).is_err());
}

#[test]
fn foldy_integral_matches_gamma_expression() {
    let start = Instant::now();
    let q = foldy_dimensionless_integral(&tol()).unwrap();
    let closed = foldy_integral_closed_form();
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert!((q - closed).abs() <= 1e-9 * closed, "{q} vs {closed}");
}

#[test]
fn mode_integrand_asymptotics_and_substitution() {
    let (rho, mu): (f64, f64) = (2.0, 0.7);
    // Large k: f - √(f² - g²) ≈ g²/(2f) ≈ 8π²ρ/(μ k⁶)
    for k in [1e2f64, 1e3] {
        let asymptote = 8.0 * PI * PI * rho / (mu * k.powi(6));
        assert!((foldy_mode_integrand(k, rho, mu).unwrap() / asymptote - 1.0).abs() < 1e-4);
    }
    // With k = λx and λ⁴ = 4πρ/μ, k²·(f - √(f² - g²)) = 4π I(x).
    let lambda = (4.0 * PI * rho / mu).powf(0.25);
    for i in 1..=20 {
        let x = 0.15 * i as f64;
        let k = lambda * x;
        let lhs = k * k * foldy_mode_integrand(k, rho, mu).unwrap();
        let rhs = 4.0 * PI * foldy_dimensionless_integrand(x);
        assert!((lhs - rhs).abs() <= 1e-12 * rhs, "x={x}");
        assert!(lhs > 0.0);
    }
}

#[test]
fn mode_sum_reproduces_foldy_law() {
    for (rho, mu) in [(1.0, 1.0), (16.0, 0.5), (0.01, 3.0)] {
        let c = foldy_comparison(rho, mu, &tol()).unwrap();
        assert!(c.closed_form < 0.0);
        assert!((c.ratio - 1.0).abs() < 1e-9, "rho={rho} mu={mu}: ratio {}", c.ratio);
    }
    // ρ^(1/4) law from the mode sum alone.
    let rhos = [1.0f64, 16.0, 256.0];
    let e: Vec<f64> = rhos.iter().map(|&r| foldy_mode_energy(r, 1.0, &tol()).unwrap().abs().ln()).collect();
    let slope = (e[2] - e[0]) / (rhos[2].ln() - rhos[0].ln());
    assert!((slope - 0.25).abs() < 1e-6);
    assert!((e[1] - e[0] - 0.25 * 16f64.ln()).abs() < 1e-6);
}

#[test]
fn foldy_energy_regression() {
    let e = foldy_energy(1.0, 1.0).unwrap();
    // 0.4 · Γ(3/4)/Γ(5/4) · (2/π)^(1/4), Γ values from tables.
    let expected = -0.4 * (1.2254167024651776 / 0.9064024770554771) * (2.0 / PI).powf(0.25);
    assert!((e - expected).abs() < 1e-12);
    assert!((foldy_energy(16.0, 1.0).unwrap() / e - 2.0).abs() < 1e-14);
    assert!(foldy_energy(1.0, 1e12).unwrap() > -1e-2);
}

#[test]
fn kinetic_cutoff_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let t = rng.random_range(1e-3..0.999);
        let p = FoldyParams::new(1.0, 1.0, 1.0, rng.random_range(0.1..10.0), t, 1.0, 4).unwrap();
        let v = rng.random_range(0.0..1e3);
        let f = kinetic_cutoff(v, &p).unwrap();
        assert!(f >= 0.0 && f <= (1.0 - t) * v * (1.0 + 1e-15) && f <= v);
    }
}

#[test]
fn correlation_length_diagnostic() {
    let d = correlation_diagnostic(1e4).unwrap();
    assert!((d.ell_cor - 0.1).abs() < 1e-15);
    assert!(d.ratio > 1.0);
}

#[test]
fn two_component_exponents() {
    let ns: Vec<f64> = (3..=9).map(|p| 10f64.powi(p)).collect();
    let s = two_component_scaling(&ns).unwrap();
    assert!((s.energy_exponent - 1.4).abs() < 1e-6, "{}", s.energy_exponent);
    assert!((s.length_exponent + 0.2).abs() < 1e-6, "{}", s.length_exponent);
    for r in &s.records {
        assert!(r.e_opt < 0.0 && r.e_numeric < 0.0);
        assert!((r.l_numeric / r.l_opt - 1.0).abs() < 1e-6);
        assert!((r.e_numeric / r.e_opt - 1.0).abs() < 1e-10);
        // Stationary point of E(L) by finite differences.
        let h = 1e-4 * r.l_opt;
        let slope = (two_component_energy(r.n, r.l_opt + h) - two_component_energy(r.n, r.l_opt - h)) / (2.0 * h);
        assert!(slope.abs() < 1e-6 * r.e_opt.abs() / r.l_opt);
    }
    assert!(two_component_scaling(&[1.0, 2.0]).is_err());
}

proptest! {
    #[test]
    fn completed_square_identities(a in 1e-3f64..1e3, frac in 1e-6f64..1.0) {
        let b = a * frac;
        let m = pair_mode_bound(a, b).unwrap();
        prop_assert!((m.d * (1.0 + m.alpha * m.alpha) - a).abs() <= 1e-12 * a);
        prop_assert!((2.0 * m.d * m.alpha - b).abs() <= 1e-12 * b);
        prop_assert!(m.alpha > 0.0 && m.alpha <= 1.0);
        prop_assert!(m.ground_bound_coeff >= 0.0 && m.ground_bound_coeff <= 0.5 * a);
    }
}
