use std::f64::consts::PI;

use bosegas::potentials::PairPotential;
use bosegas::scattering::{
    born_integral, default_grid, energy_integral, kinetic_fraction, kinetic_share, scattering_length,
    solve_zero_energy, ScatteringSolution,
};
use bosegas::{Dimension, Tolerances};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::new(1e-13, 1e-11, 50_000).unwrap()
}

fn solve(p: &PairPotential, mu: f64) -> ScatteringSolution {
    let grid = default_grid(p, 1000).unwrap();
    solve_zero_energy(p, mu, &grid, &tol()).unwrap()
}

// Interior solution sinh(κr) matched to r - a at R0.
fn square_well_a(r0: f64, v0: f64, mu: f64) -> f64 {
    let k = (v0 / (2.0 * mu)).sqrt();
    r0 * (1.0 - (k * r0).tanh() / (k * r0))
}

// Power series for the modified Bessel functions I0 and I1.
fn bessel_i(order: u32, x: f64) -> f64 {
    let mut term = (0.5 * x).powi(order as i32) / (1..=order).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        term *= 0.25 * x * x / (k as f64 * (k + order) as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

#[test]
fn random_square_wells_match_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let r0 = rng.random_range(0.2..3.0);
        let v0 = rng.random_range(0.01..50.0);
        let mu = rng.random_range(0.2..2.0);
        let p = PairPotential::square_well(r0, v0, Dimension::Three).unwrap();
        let a = scattering_length(&solve(&p, mu)).unwrap();
        let exact = square_well_a(r0, v0, mu);
        assert!((a - exact).abs() <= 1e-8 * exact, "r0={r0} v0={v0} mu={mu}: {a} vs {exact}");
    }
}

#[test]
fn two_dimensional_square_well_matches_bessel_matching() {
    for (r0, v0) in [(1.0, 0.5), (1.0, 10.0), (2.0, 3.0)] {
        let mu: f64 = 1.0;
        let k = (v0 / (2.0 * mu)).sqrt();
        let x = k * r0;
        // I0(κr) inside, ln(r/a) outside; log-derivatives agree at R0.
        let exact = r0 * (-bessel_i(0, x) / (x * bessel_i(1, x))).exp();
        let p = PairPotential::square_well(r0, v0, Dimension::Two).unwrap();
        let a = solve(&p, mu).a();
        assert!((a - exact).abs() <= 1e-8 * exact, "{a} vs {exact}");
    }
}

#[test]
fn hard_core_with_inverse_quartic_tail() {
    // u'' = k² r^-4 u has solutions r e^{±k/r}; u(1) = 0 gives a = k coth k.
    for c in [0.5, 2.0] {
        let mu: f64 = 1.0;
        let k = (c / (2.0 * mu)).sqrt();
        let exact = k / k.tanh();
        let p = PairPotential::hard_core(1.0, Dimension::Three).unwrap().with_tail(c, 4.0, 1.0).unwrap();
        let a = solve(&p, mu).a();
        assert!((a - exact).abs() <= 1e-6 * exact, "C={c}: {a} vs {exact}");
    }
}

#[test]
fn soft_sphere_weak_coupling_approaches_born() {
    let r0 = 1.3;
    let mu = 0.7;
    let mut last_err = f64::INFINITY;
    for v0 in [1e-1, 1e-2, 1e-3] {
        let p = PairPotential::soft_sphere(r0, v0, Dimension::Three).unwrap();
        let a = solve(&p, mu).a();
        let born = born_integral(&p, &tol()).unwrap().finite().unwrap();
        // ∫ V0 (1 - r²/R0²)² 4π r² dr = 32π V0 R0³ / 105
        assert!((born - 32.0 * PI * v0 * r0.powi(3) / 105.0).abs() < 1e-12 * born);
        let err = (a / (born / (8.0 * PI * mu)) - 1.0).abs();
        assert!(err < last_err);
        last_err = err;
    }
    assert!(last_err < 1e-3);
}

#[test]
fn energy_integral_identity() {
    let mu = 1.0;
    let p = PairPotential::square_well(1.0, 5.0, Dimension::Three).unwrap();
    let sol = solve(&p, mu);
    let a = sol.a();
    let mut previous = 0.0;
    for radius in [1.0, 1.5, 2.0, 5.0, 50.0, 1e6] {
        let e = energy_integral(&sol, radius).unwrap();
        let exact = 8.0 * PI * mu * a * (1.0 - a / radius);
        assert!((e - exact).abs() <= 1e-6 * exact, "R={radius}: {e} vs {exact}");
        assert!(e >= previous && e <= 8.0 * PI * mu * a * (1.0 + 1e-9));
        previous = e;
    }
}

#[test]
fn kinetic_fraction_is_derivative_of_mu_a() {
    let p = PairPotential::square_well(1.0, 4.0, Dimension::Three).unwrap();
    let mu = 1.0;
    let h = 1e-3;
    let mua = |m: f64| m * solve(&p, m).a();
    let derivative = (mua(mu + h) - mua(mu - h)) / (2.0 * h);
    let sol = solve(&p, mu);
    let s = kinetic_fraction(&sol).unwrap();
    // (1/4π) ∫|∇ψ|² = s a
    assert!((derivative - s * sol.a()).abs() < 1e-5, "{derivative} vs {}", s * sol.a());
    assert!(s > 0.0 && s <= 1.0);
}

#[test]
fn two_dimensional_kinetic_share_tends_to_one() {
    let p = PairPotential::square_well(1.0, 2.0, Dimension::Two).unwrap();
    let sol = solve(&p, 1.0);
    assert_eq!(kinetic_fraction(&sol).unwrap(), 1.0);
    let near = kinetic_share(&sol, 2.0).unwrap();
    let far = kinetic_share(&sol, 1e100).unwrap();
    assert!(near < far && far <= 1.0);
    assert!((far - 1.0).abs() < 0.01, "{far}");
}

#[test]
fn born_of_tabulated_triangle_matches_trapezoid() {
    let table = vec![(0.0, 0.0), (0.5, 2.0), (1.0, 0.0)];
    let p = PairPotential::tabulated(table.clone(), Dimension::Three).unwrap();
    let born = born_integral(&p, &tol()).unwrap().finite().unwrap();
    let n = 200_000;
    let h = 1.0 / n as f64;
    let f = |r: f64| {
        let v = if r <= 0.5 { 4.0 * r } else { 4.0 * (1.0 - r) };
        4.0 * PI * r * r * v
    };
    let trapezoid: f64 = (0..n).map(|i| 0.5 * h * (f(i as f64 * h) + f((i + 1) as f64 * h))).sum();
    assert!((born - trapezoid).abs() <= 1e-10 * trapezoid);
}

#[test]
fn scattering_length_grows_with_strength() {
    let mut last = 0.0;
    for v0 in [0.1, 0.5, 1.0, 5.0, 20.0, 100.0, 1e3, 1e4] {
        let p = PairPotential::soft_sphere(1.0, v0, Dimension::Three).unwrap();
        let a = solve(&p, 1.0).a();
        assert!(a >= last && a <= 1.0);
        last = a;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn solution_invariants(r0 in 0.2f64..2.5, v0 in 0.01f64..200.0, mu in 0.2f64..3.0, soft in any::<bool>()) {
        let p = if soft {
            PairPotential::soft_sphere(r0, v0, Dimension::Three).unwrap()
        } else {
            PairPotential::square_well(r0, v0, Dimension::Three).unwrap()
        };
        let sol = solve(&p, mu);
        let a = sol.a();
        prop_assert!(a >= 0.0 && a <= r0);
        let born = born_integral(&p, &tol()).unwrap().finite().unwrap();
        prop_assert!(8.0 * PI * mu * a <= born * (1.0 + 1e-10));
        let s = kinetic_fraction(&sol).unwrap();
        prop_assert!(s > 0.0 && s <= 1.0 + 1e-10);
        for (&r, &u) in sol.grid().nodes().iter().zip(sol.u_values()) {
            if r > r0 {
                prop_assert!((u - (r - a)).abs() <= 1e-8 * r);
            }
        }
        prop_assert_eq!(sol.u_values()[0], 0.0);
    }
}
