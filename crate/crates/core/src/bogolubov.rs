//! Bogolubov pair modes, the Foldy mode integral and the two-component
//! scaling model for the charged Bose gas.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

use crate::numerics::{gamma_fn, minimize_scalar, quad, NumericsError, Tolerances};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BogolubovError {
    #[error("argument outside domain: {0}")]
    DomainError(String),
    #[error("truncated Fock eigenvalue {value} still moves by {change:e} between successive truncations")]
    TruncationNotConverged { value: f64, change: f64 },
    #[error(transparent)]
    NoConvergence(#[from] NumericsError),
}

type Result<T> = std::result::Result<T, BogolubovError>;

fn domain<T>(msg: String) -> Result<T> {
    Err(BogolubovError::DomainError(msg))
}

/// Completed-square form `A(b†b + b̃†b̃) + B(b†b̃† + bb̃) = D(...)(...)† - ...`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogolubovMode {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub d: f64,
    /// `½(A - √(A² - B²))`, the bound per unit commutator.
    pub ground_bound_coeff: f64,
}

pub fn pair_mode_bound(a: f64, b: f64) -> Result<BogolubovMode> {
    if !(b > 0.0) || !(a >= b) || !a.is_finite() {
        return domain(format!("need A >= B > 0, got A = {a}, B = {b}"));
    }
    let root = ((a - b) * (a + b)).sqrt();
    // Rationalized forms avoid cancellation when B << A.
    let alpha = b / (a + root);
    Ok(BogolubovMode { a, b, alpha, d: b / (2.0 * alpha), ground_bound_coeff: 0.5 * b * b / (a + root) })
}

fn pair_hamiltonian(a: f64, b: f64, n_max: usize) -> DMatrix<f64> {
    let dim = n_max + 1;
    // Elementary mode: ⟨m+1|c†|m⟩ = √(m+1), so [c, c†] = 1 below the cutoff.
    let raise = DMatrix::from_fn(dim, dim, |i, j| if i == j + 1 { (i as f64).sqrt() } else { 0.0 });
    let number = &raise * raise.transpose();
    // Lowest state lies in the sector with equal occupations |m, m⟩, where
    // b†b̃† acts as the product of the two single-mode matrix elements.
    DMatrix::from_fn(dim, dim, |i, j| {
        let kinetic = if i == j { 2.0 * a * number[(i, i)] } else { 0.0 };
        let pair = raise[(i, j)] * raise[(i, j)] + raise[(j, i)] * raise[(j, i)];
        kinetic + b * pair
    })
}

fn lowest_eigenvalue(m: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Lowest eigenvalue of the two-mode quadratic form on the space with at
/// most `n_max` pair quanta.
pub fn fock_oracle(a: f64, b: f64, n_max: usize, tol: f64) -> Result<f64> {
    if n_max < 4 {
        return domain(format!("n_max must be at least 4, got {n_max}"));
    }
    if b == 0.0 && a >= 0.0 {
        return Ok(0.0);
    }
    pair_mode_bound(a, b)?;
    let values: Vec<f64> = (n_max - 2..=n_max).map(|n| lowest_eigenvalue(pair_hamiltonian(a, b, n))).collect();
    let change = (values[1] - values[0]).abs().max((values[2] - values[1]).abs());
    if change > tol {
        return Err(BogolubovError::TruncationNotConverged { value: values[2], change });
    }
    Ok(values[2])
}

/// Smallest truncation in `4..=n_limit` at which the oracle is converged.
pub fn fock_oracle_converged(a: f64, b: f64, n_limit: usize, tol: f64) -> Result<(usize, f64)> {
    let mut n = 4;
    loop {
        match fock_oracle(a, b, n, tol) {
            Ok(v) => return Ok((n, v)),
            Err(BogolubovError::TruncationNotConverged { .. }) if n < n_limit => n = (n + n / 4).min(n_limit),
            Err(e) => return Err(e),
        }
    }
}

/// Fourier transform of `e^(-ω|x|)/|x|` in 3D.
pub fn yukawa_ft(k: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return domain(format!("omega must be positive, got {omega}"));
    }
    Ok(4.0 * PI / (k * k + omega * omega))
}

/// The same transform by radial quadrature of `4π ∫ r e^(-ωr) sinc(kr) dr`.
pub fn yukawa_ft_quadrature(k: f64, omega: f64, tol: &Tolerances) -> Result<f64> {
    if !(omega > 0.0) {
        return domain(format!("omega must be positive, got {omega}"));
    }
    let kernel = |r: f64| {
        let x = k * r;
        let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
        r * (-omega * r).exp() * sinc
    };
    Ok(4.0 * PI * quad(kernel, 0.0, f64::INFINITY, tol)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldyParams {
    pub rho: f64,
    pub mu_const: f64,
    pub omega: f64,
    pub ell: f64,
    pub t: f64,
    pub c_univ: f64,
    pub n: usize,
    pub ell_cor: f64,
}

impl FoldyParams {
    pub fn new(rho: f64, mu_const: f64, omega: f64, ell: f64, t: f64, c_univ: f64, n: usize) -> Result<Self> {
        if !(rho > 0.0 && mu_const > 0.0 && omega > 0.0 && ell > 0.0 && c_univ > 0.0) {
            return domain("rho, mu, omega, ell and C must be positive".into());
        }
        if !(t > 0.0 && t < 1.0 / c_univ) {
            return domain(format!("t must lie in (0, 1/C), got {t} with C = {c_univ}"));
        }
        Ok(Self { rho, mu_const, omega, ell, t, c_univ, n, ell_cor: rho.powf(-0.25) })
    }
}

/// `F(v) = (1 - Ct) v² / (v + (ℓt³)⁻²)`.
pub fn kinetic_cutoff(v: f64, params: &FoldyParams) -> Result<f64> {
    if !(v >= 0.0) {
        return domain(format!("v must be nonnegative, got {v}"));
    }
    let shift = (params.ell * params.t.powi(3)).powi(-2);
    if v.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok((1.0 - params.c_univ * params.t) * v * v / (v + shift))
}

/// `f - √(f² - g²)` with `g = 4π/k²` and `f = g + μk²/ρ`.
pub fn foldy_mode_integrand(k: f64, rho: f64, mu_const: f64) -> Result<f64> {
    if !(k > 0.0) || !(rho > 0.0) || !(mu_const > 0.0) {
        return domain(format!("need k, rho, mu > 0, got {k}, {rho}, {mu_const}"));
    }
    let g = 4.0 * PI / (k * k);
    let f = g + mu_const * k * k / rho;
    Ok(g * g / (f + ((f - g) * (f + g)).sqrt()))
}

/// `1 + x⁴ - x²√(2 + x⁴)`.
pub fn foldy_dimensionless_integrand(x: f64) -> f64 {
    let x4 = x.powi(4);
    1.0 / (1.0 + x4 + x * x * (2.0 + x4).sqrt())
}

pub fn foldy_dimensionless_integral(tol: &Tolerances) -> Result<f64> {
    Ok(quad(foldy_dimensionless_integrand, 0.0, f64::INFINITY, tol)?)
}

/// `2^(3/4) √π Γ(3/4) / (5 Γ(5/4))`.
pub fn foldy_integral_closed_form() -> f64 {
    let g34 = gamma_fn(0.75).expect("positive argument");
    let g54 = gamma_fn(1.25).expect("positive argument");
    2f64.powf(0.75) * PI.sqrt() * g34 / (5.0 * g54)
}

/// Foldy's energy per particle `-(2/5) Γ(3/4)/Γ(5/4) (2/(μπ))^(1/4) ρ^(1/4)`.
pub fn foldy_energy(rho: f64, mu_const: f64) -> Result<f64> {
    if !(rho > 0.0) || !(mu_const > 0.0) {
        return domain(format!("need rho, mu > 0, got {rho}, {mu_const}"));
    }
    let ratio = gamma_fn(0.75)? / gamma_fn(1.25)?;
    Ok(-0.4 * ratio * (2.0 / (mu_const * PI)).powf(0.25) * rho.powf(0.25))
}

/// Energy per particle from summing `-½(A - √(A² - B²))` over all modes,
/// `-(1/4π²) ∫ k² (f - √(f² - g²)) dk`.
pub fn foldy_mode_energy(rho: f64, mu_const: f64, tol: &Tolerances) -> Result<f64> {
    if !(rho > 0.0) || !(mu_const > 0.0) {
        return domain(format!("need rho, mu > 0, got {rho}, {mu_const}"));
    }
    let scale = (4.0 * PI * rho / mu_const).powf(0.25);
    let integrand = |x: f64| {
        let k = x * scale;
        if k == 0.0 {
            // k² g²/(f + √(f² - g²)) → k² g/2 = 2π
            return 2.0 * PI * scale;
        }
        k * k * foldy_mode_integrand(k, rho, mu_const).unwrap_or(f64::NAN) * scale
    };
    Ok(-quad(integrand, 0.0, f64::INFINITY, tol)? / (4.0 * PI * PI))
}

/// Mode-sum energy next to the closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldyComparison {
    pub mode_energy: f64,
    pub closed_form: f64,
    pub ratio: f64,
}

pub fn foldy_comparison(rho: f64, mu_const: f64, tol: &Tolerances) -> Result<FoldyComparison> {
    let mode_energy = foldy_mode_energy(rho, mu_const, tol)?;
    let closed_form = foldy_energy(rho, mu_const)?;
    Ok(FoldyComparison { mode_energy, closed_form, ratio: mode_energy / closed_form })
}

/// Correlation length `ρ^(-1/4)` against the mean spacing `ρ^(-1/3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationDiagnostic {
    pub ell_cor: f64,
    pub spacing: f64,
    pub ratio: f64,
}

pub fn correlation_diagnostic(rho: f64) -> Result<CorrelationDiagnostic> {
    if !(rho > 0.0) {
        return domain(format!("rho must be positive, got {rho}"));
    }
    let ell_cor = rho.powf(-0.25);
    let spacing = rho.powf(-1.0 / 3.0);
    Ok(CorrelationDiagnostic { ell_cor, spacing, ratio: ell_cor / spacing })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRecord {
    pub n: f64,
    pub l_opt: f64,
    pub e_opt: f64,
    pub l_numeric: f64,
    pub e_numeric: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoComponentScaling {
    pub records: Vec<ScalingRecord>,
    /// Fitted slope of `log|E_opt|` against `log N`.
    pub energy_exponent: f64,
    /// Fitted slope of `log L_opt` against `log N`.
    pub length_exponent: f64,
}

/// `E(L) = N L⁻² - N^(5/4) L^(-3/4)`.
pub fn two_component_energy(n: f64, l: f64) -> f64 {
    n / (l * l) - n.powf(1.25) * l.powf(-0.75)
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

pub fn two_component_scaling(n_sequence: &[f64]) -> Result<TwoComponentScaling> {
    if n_sequence.len() < 3 || n_sequence.windows(2).any(|w| w[1] <= w[0]) || n_sequence[0] <= 0.0 {
        return domain("need at least 3 increasing positive particle numbers".into());
    }
    // Stationarity: 2N L⁻³ = (3/4) N^(5/4) L^(-7/4).
    let c = (8.0f64 / 3.0).powf(0.8);
    let tol = Tolerances::new(1e-15, 1e-12, 500)?;
    let mut records = Vec::with_capacity(n_sequence.len());
    for &n in n_sequence {
        let l_opt = c * n.powf(-0.2);
        let e_opt = two_component_energy(n, l_opt);
        // Search in ln L over a bracket that does not use the closed form.
        let (x, e_numeric) = minimize_scalar(|x| two_component_energy(n, x.exp()), -30.0, 30.0, &tol)?;
        records.push(ScalingRecord { n, l_opt, e_opt, l_numeric: x.exp(), e_numeric });
    }
    let log_n: Vec<f64> = records.iter().map(|r| r.n.ln()).collect();
    let log_e: Vec<f64> = records.iter().map(|r| r.e_numeric.abs().ln()).collect();
    let log_l: Vec<f64> = records.iter().map(|r| r.l_numeric.ln()).collect();
    Ok(TwoComponentScaling { energy_exponent: slope(&log_n, &log_e), length_exponent: slope(&log_n, &log_l), records })
}
