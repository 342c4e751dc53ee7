//! Energy per particle of the homogeneous dilute gas: leading terms, the
//! LHY correction, Dyson-type upper bounds, Temple's inequality and the
//! cell-method lower bound.

use std::f64::consts::PI;

use thiserror::Error;

use crate::numerics::{quad, Tolerances};
use crate::Dimension;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomogeneousError {
    #[error("argument outside domain: {0}")]
    DomainError(String),
    #[error("Temple inequality needs e1 > <H>: e1 = {e1}, <H> = {h_mean}")]
    GapViolation { e1: f64, h_mean: f64 },
    #[error("negative variance {variance}")]
    VarianceNegative { variance: f64 },
    #[error("cell-method ansatz infeasible: {0}")]
    AnsatzInfeasible(String),
}

type Result<T> = std::result::Result<T, HomogeneousError>;

fn domain<T>(msg: String) -> Result<T> {
    Err(HomogeneousError::DomainError(msg))
}

/// Density, scattering length and `μ = ħ²/2m` of a homogeneous gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiluteParams {
    pub rho: f64,
    pub a: f64,
    pub mu: f64,
    pub dimension: Dimension,
}

impl DiluteParams {
    pub fn new(rho: f64, a: f64, mu: f64, dimension: Dimension) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return domain(format!("density {rho} must be positive"));
        }
        if !(a >= 0.0) || !a.is_finite() {
            return domain(format!("scattering length {a} must be nonnegative"));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return domain(format!("mu {mu} must be positive"));
        }
        Ok(Self { rho, a, mu, dimension })
    }

    /// 3D parameters from the gas parameter `Y = 4πρa³/3`.
    pub fn from_y(y: f64, a: f64, mu: f64) -> Result<Self> {
        if !(y > 0.0) || !(a > 0.0) {
            return domain(format!("Y = {y}, a = {a} must be positive"));
        }
        Self::new(3.0 * y / (4.0 * PI * a.powi(3)), a, mu, Dimension::Three)
    }

    /// `Y = 4πρa³/3`.
    pub fn y(&self) -> f64 {
        4.0 * PI * self.rho * self.a.powi(3) / 3.0
    }

    pub fn rho_a2(&self) -> f64 {
        self.rho * self.a * self.a
    }

    pub fn rho_a3(&self) -> f64 {
        self.rho * self.a.powi(3)
    }

    /// `|ln(ρa²)|`.
    pub fn log_parameter(&self) -> f64 {
        self.rho_a2().ln().abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateKind {
    Upper,
    Lower,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    pub formula_id: &'static str,
    pub params: DiluteParams,
}

/// `4πμρa` in 3D, `4πμρ/|ln ρa²|` in 2D.
pub fn leading_energy(p: &DiluteParams) -> Result<EnergyEstimate> {
    let value = match p.dimension {
        Dimension::Three => 4.0 * PI * p.mu * p.rho * p.a,
        Dimension::Two => {
            if p.a == 0.0 {
                0.0
            } else if p.rho_a2() >= 1.0 {
                return domain(format!("2D leading term needs ρa² < 1, got {}", p.rho_a2()));
            } else {
                4.0 * PI * p.mu * p.rho / p.log_parameter()
            }
        }
    };
    Ok(EnergyEstimate { value, kind: EstimateKind::Asymptotic, formula_id: "leading", params: *p })
}

/// Leading 3D term with the Lee-Huang-Yang and logarithmic corrections.
pub fn lhy_energy(p: &DiluteParams) -> Result<EnergyEstimate> {
    if p.dimension != Dimension::Three {
        return domain("LHY expansion is three-dimensional".into());
    }
    let x = p.rho_a3();
    if !(x < 1.0) {
        return domain(format!("LHY expansion needs ρa³ < 1, got {x}"));
    }
    let c1 = 128.0 / (15.0 * PI.sqrt());
    let c2 = 8.0 * (4.0 * PI / 3.0 - 3f64.sqrt());
    let log_term = if x > 0.0 { x * x.ln() } else { 0.0 };
    let value = 4.0 * PI * p.mu * p.rho * p.a * (1.0 + c1 * x.sqrt() + c2 * log_term);
    Ok(EnergyEstimate { value, kind: EstimateKind::Asymptotic, formula_id: "lhy", params: *p })
}

/// Upper bound on `e₀/(4πμρa)`; the improved form applies to finite-range
/// potentials with `b = (4πρ/3)^(-1/3)` beyond the range.
pub fn dyson_upper_ratio(y: f64, finite_range_improved: bool) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return domain(format!("upper bound needs 0 < Y < 1, got {y}"));
    }
    let x = y.cbrt();
    Ok(if finite_range_improved {
        (1.0 - x * x + 0.5 * y) / (1.0 - x).powi(4)
    } else {
        (1.0 - x + x * x - 0.5 * y) / (1.0 - x).powi(8)
    })
}

pub const LSY_CONSTANT: f64 = 8.9;

/// `1/(10√2)`, the old hard-sphere lower bound on `e₀/(4πμρa)`.
pub const DYSON_LOWER_RATIO: f64 = 0.070_710_678_118_654_75;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerRatio {
    pub value: f64,
    /// The bound carries information only when positive.
    pub valid: bool,
}

/// `1 - C Y^(1/17)`, unclamped.
pub fn lsy_lower_ratio(y: f64, c: f64) -> Result<LowerRatio> {
    if !(y > 0.0) || !y.is_finite() {
        return domain(format!("Y = {y} must be positive"));
    }
    let value = 1.0 - c * y.powf(1.0 / 17.0);
    Ok(LowerRatio { value, valid: value > 0.0 })
}

/// `Y` where `1 - C Y^(1/17)` meets the Dyson constant.
pub fn lsy_dyson_crossover(c: f64) -> f64 {
    ((1.0 - DYSON_LOWER_RATIO) / c).powi(17)
}

/// Constants multiplying the unspecified error terms of the 2D bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchickConstants {
    pub upper: f64,
    pub lower: f64,
}

impl Default for SchickConstants {
    fn default() -> Self {
        Self { upper: 1.0, lower: 1.0 }
    }
}

/// 2D upper and lower bounds around `4πμρ/|ln ρa²|`.
pub fn schick_2d_bounds(p: &DiluteParams, c: SchickConstants) -> Result<(EnergyEstimate, EnergyEstimate)> {
    if p.dimension != Dimension::Two {
        return domain("2D bounds need d = 2".into());
    }
    if !(p.a > 0.0) || !(p.log_parameter() > 1.0) || p.rho_a2() >= 1.0 {
        return domain(format!("2D bounds need |ln ρa²| > 1, got ρa² = {}", p.rho_a2()));
    }
    let l = p.log_parameter();
    let lead = 4.0 * PI * p.mu * p.rho / l;
    let upper = EnergyEstimate {
        value: lead * (1.0 + c.upper / l),
        kind: EstimateKind::Upper,
        formula_id: "schick-upper",
        params: *p,
    };
    let lower = EnergyEstimate {
        value: lead * (1.0 - c.lower * l.powf(-0.2)),
        kind: EstimateKind::Lower,
        formula_id: "schick-lower",
        params: *p,
    };
    Ok((upper, lower))
}

/// `2πμρ/(ln(b/a) - πρb²)`; `b = None` uses the optimal `(2πρ)^(-1/2)`.
pub fn upper_bound_2d_intermediate(p: &DiluteParams, b: Option<f64>) -> Result<EnergyEstimate> {
    if p.dimension != Dimension::Two || !(p.a > 0.0) {
        return domain("intermediate-b bound needs d = 2 and a > 0".into());
    }
    let b = b.unwrap_or_else(|| (2.0 * PI * p.rho).powf(-0.5));
    let denom = (b / p.a).ln() - PI * p.rho * b * b;
    if !(b > p.a) || !(denom > 0.0) {
        return domain(format!("b = {b} gives a nonpositive denominator {denom}"));
    }
    Ok(EnergyEstimate {
        value: 2.0 * PI * p.mu * p.rho / denom,
        kind: EstimateKind::Upper,
        formula_id: "upper-2d-b",
        params: *p,
    })
}

/// Temple's lower bound `<H> - (<H²> - <H>²)/(E₁ - <H>)`.
pub fn temple_bound(h_mean: f64, h2_mean: f64, e1: f64) -> Result<f64> {
    if !(e1 > h_mean) {
        return Err(HomogeneousError::GapViolation { e1, h_mean });
    }
    let variance = h2_mean - h_mean * h_mean;
    let slack = 1e-12 * h2_mean.abs().max(h_mean * h_mean);
    if variance < -slack {
        return Err(HomogeneousError::VarianceNegative { variance });
    }
    Ok(h_mean - variance.max(0.0) / (e1 - h_mean))
}

/// Exponents of the cell-method ansatz `ε ∝ Y^α`, `a/ℓ ∝ Y^β`,
/// `(R³ - R0³)/ℓ³ ∝ Y^γ`. In 2D they are powers of `1/|ln ρa²|` for
/// `ε`, `ℓ√ρ` (inverted) and `R√ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Exponents {
    pub fn default_for(d: Dimension) -> Self {
        match d {
            Dimension::Three => Self { alpha: 1.0 / 17.0, beta: 6.0 / 17.0, gamma: 3.0 / 17.0 },
            Dimension::Two => Self { alpha: 0.2, beta: 0.1, gamma: 0.1 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzConstants {
    pub c_eps: f64,
    pub c_ell: f64,
    pub c_r: f64,
}

impl Default for AnsatzConstants {
    fn default() -> Self {
        Self { c_eps: 1.0, c_ell: 1.0, c_r: 1.0 }
    }
}

/// Cell-method parameters for `n` particles in a cell of side `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellMethodParams {
    pub n: f64,
    pub ell: f64,
    pub r: f64,
    pub r0: f64,
    pub eps: f64,
    pub exponents: Exponents,
    pub constants: AnsatzConstants,
}

impl CellMethodParams {
    pub fn new(n: f64, ell: f64, r: f64, r0: f64, eps: f64, d: Dimension) -> Result<Self> {
        let p = Self {
            n,
            ell,
            r,
            r0,
            eps,
            exponents: Exponents::default_for(d),
            constants: AnsatzConstants::default(),
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.n >= 2.0) {
            return domain(format!("cell needs n >= 2, got {}", self.n));
        }
        if !(self.r0 >= 0.0 && self.r0 < self.r && self.r < 0.5 * self.ell) {
            return domain(format!("need R0 < R < ℓ/2: R0 = {}, R = {}, ℓ = {}", self.r0, self.r, self.ell));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return domain(format!("ε = {} outside (0, 1]", self.eps));
        }
        Ok(())
    }

    /// `R³ - R0³`.
    pub fn shell_cube(&self) -> f64 {
        self.r.powi(3) - self.r0.powi(3)
    }
}

/// Softened interaction `U_R` supported on `R0 < r < R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftenedInteraction {
    pub amplitude: f64,
    /// Quadrature of the normalization integral; equals 1 by construction.
    pub normalization: f64,
    /// 3D: `(4π/3)(R³ - R0³)`; 2D: `π(R² - R0²)`.
    pub support_volume: f64,
}

/// `ν(R) = ∫_{R0}^R ln(r/a) r dr` in closed form.
pub fn nu_2d(r: f64, r0: f64, a: f64) -> f64 {
    let term = |x: f64| if x == 0.0 { 0.0 } else { x * x * ((x * x / (a * a)).ln() - 1.0) };
    0.25 * (term(r) - term(r0))
}

pub fn softened_interaction(params: &CellMethodParams, a: f64, d: Dimension) -> Result<SoftenedInteraction> {
    let (r, r0) = (params.r, params.r0);
    if !(r > r0) {
        return domain(format!("need R > R0, got R = {r}, R0 = {r0}"));
    }
    let tol = Tolerances::tight();
    match d {
        Dimension::Three => {
            let amplitude = 3.0 / params.shell_cube();
            let normalization = quad(|x| amplitude * x * x, r0, r, &tol).map_err(|e| HomogeneousError::DomainError(e.to_string()))?;
            Ok(SoftenedInteraction { amplitude, normalization, support_volume: 4.0 * PI * params.shell_cube() / 3.0 })
        }
        Dimension::Two => {
            if !(a > 0.0) || r0 < a {
                return domain(format!("2D softening needs R0 >= a > 0, got R0 = {r0}, a = {a}"));
            }
            let amplitude = 1.0 / nu_2d(r, r0, a);
            let normalization =
                quad(|x| amplitude * (x / a).ln() * x, r0, r, &tol).map_err(|e| HomogeneousError::DomainError(e.to_string()))?;
            Ok(SoftenedInteraction { amplitude, normalization, support_volume: PI * (r * r - r0 * r0) })
        }
    }
}

/// Lower and upper bounds on `<W_R>₀ / n`.
///
/// 3D uses the given cell density. 2D depends on `a` through `ν(R)` and on
/// the cell only through `Q = A(R)/ℓ²`.
pub fn first_order_expectation(params: &CellMethodParams, a: f64, rho_cell: f64, d: Dimension) -> Result<(f64, f64)> {
    params.validate()?;
    let n = params.n;
    let boundary = 1.0 - 2.0 * params.r / params.ell;
    match d {
        Dimension::Three => {
            if !(rho_cell > 0.0) {
                return domain(format!("cell density {rho_cell} must be positive"));
            }
            let upper = 4.0 * PI * rho_cell * (1.0 - 1.0 / n);
            let lower = upper * boundary.powi(3) / (1.0 + upper * params.shell_cube() / 3.0);
            Ok((lower, upper))
        }
        Dimension::Two => {
            let nu = nu_2d(params.r, params.r0, a);
            if !(nu > 0.0) {
                return domain(format!("ν(R) = {nu} must be positive"));
            }
            let q = PI * (params.r.powi(2) - params.r0.powi(2)) / params.ell.powi(2);
            let upper = (n - 1.0) * q / nu;
            let lower = boundary.powi(2) * (n - 1.0) / nu * q / (1.0 + (n - 1.0) * q);
            Ok((lower, upper))
        }
    }
}

/// The factors whose product is `K(n, ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KFactors {
    pub kinetic: f64,
    pub boundary: f64,
    pub local_density: f64,
    pub temple: f64,
    /// Denominator of the Temple factor; the formula needs it positive.
    pub temple_denominator: f64,
}

impl KFactors {
    pub fn product(&self) -> f64 {
        if !(self.temple_denominator > 0.0) {
            return 0.0;
        }
        (self.kinetic * self.boundary * self.local_density * self.temple).max(0.0)
    }
}

pub fn cell_k_factors(params: &CellMethodParams, a: f64, d: Dimension) -> KFactors {
    let (n, ell, eps) = (params.n, params.ell, params.eps);
    let boundary_base = 1.0 - 2.0 * params.r / ell;
    match d {
        Dimension::Three => {
            let shell = params.shell_cube();
            let rho = n / ell.powi(3);
            let local_density = 1.0 / (1.0 + 4.0 * PI / 3.0 * rho * (1.0 - 1.0 / n) * shell);
            let denom = eps / (ell * ell) - 4.0 * a / ell.powi(3) * n * (n - 1.0);
            KFactors {
                kinetic: 1.0 - eps,
                boundary: boundary_base.powi(3),
                local_density,
                temple: 1.0 - 3.0 / PI * a * n / (shell * denom),
                temple_denominator: denom,
            }
        }
        Dimension::Two => {
            let nu = nu_2d(params.r, params.r0, a);
            let q = PI * (params.r.powi(2) - params.r0.powi(2)) / (ell * ell);
            let denom = eps * nu / (ell * ell) - n * (n - 1.0) * q;
            KFactors {
                kinetic: 1.0 - eps,
                boundary: boundary_base.powi(2),
                local_density: 1.0 / (1.0 + (n - 1.0) * q),
                temple: 1.0 - n / denom,
                temple_denominator: denom,
            }
        }
    }
}

/// `K(n, ℓ)`, or 0 outside the region where Temple's inequality applies.
/// The dependence on `μ` cancels between `E₁` and the interaction.
pub fn cell_k(params: &CellMethodParams, a: f64, _mu: f64, d: Dimension) -> f64 {
    cell_k_factors(params, a, d).product()
}

/// Lower bound on `E₀(n, ℓ)` from `K`, with `p` the monotonicity cutoff:
/// `n(n-1)K(p)` below `p` and the superadditive extension above.
pub fn cell_energy_bound(params: &CellMethodParams, a: f64, mu: f64, p: f64, d: Dimension) -> f64 {
    let at = |n: f64| CellMethodParams { n, ..*params };
    let prefactor = match d {
        Dimension::Three => 4.0 * PI * mu * a / params.ell.powi(3),
        Dimension::Two => {
            let area = PI * (params.r.powi(2) - params.r0.powi(2));
            mu * area / (params.ell.powi(2) * nu_2d(params.r, params.r0, a))
        }
    };
    let kp = cell_k(&at(p), a, mu, d);
    let n = params.n;
    if n < p {
        prefactor * n * (n - 1.0) * kp
    } else {
        n / (2.0 * p) * prefactor * p * (p - 1.0) * kp
    }
}

/// Minimum over `t ∈ [1, k]` of `t(t-1) + (k-t)(p-1)/2`.
pub fn occupation_min(k: f64, p: f64) -> Result<f64> {
    if !(k >= 1.0) || !k.is_finite() {
        return domain(format!("k = {k} must be >= 1"));
    }
    if !(p >= 2.0) || !p.is_finite() {
        return domain(format!("p = {p} must be >= 2"));
    }
    let t = (0.25 * (p + 1.0)).clamp(1.0, k);
    Ok(t * (t - 1.0) + 0.5 * (k - t) * (p - 1.0))
}

/// `x²/|ln x| - 2(b/|ln b|)xk + (b²/|ln b|)(1 + 1/(2|ln b|)²)k²`.
pub fn lemma_xb_gap(x: f64, b: f64, k: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) || !(b > 0.0 && b < 1.0) || !(k >= 1.0) || !k.is_finite() {
        return domain(format!("need 0 < x, b < 1 and k >= 1, got x = {x}, b = {b}, k = {k}"));
    }
    let lx = x.ln().abs();
    let lb = b.ln().abs();
    Ok(x * x / lx - 2.0 * b / lb * x * k + b * b / lb * (1.0 + 1.0 / (4.0 * lb * lb)) * k * k)
}

/// Cell-method bound together with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellBound {
    pub estimate: EnergyEstimate,
    pub cell: CellMethodParams,
    pub k: f64,
    /// 3D: `ε`, `1/ρℓ³`, `2R/ℓ`, `(4π/3)ρ(R³-R0³)` and the Temple term.
    /// 2D: `ε`, `1/ρℓ²`, `R/ℓ`, `ρR²`, `ρℓ⁴/(εR² ln(R²/a²))`.
    pub error_terms: [f64; 5],
}

/// Ansatz of the cell method; `r0` defaults to `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellAnsatz {
    pub constants: AnsatzConstants,
    pub exponents: Exponents,
    pub r0: Option<f64>,
}

impl CellAnsatz {
    pub fn default_for(d: Dimension) -> Self {
        Self { constants: AnsatzConstants::default(), exponents: Exponents::default_for(d), r0: None }
    }
}

fn infeasible<T>(msg: String) -> Result<T> {
    Err(HomogeneousError::AnsatzInfeasible(msg))
}

/// Instantiates the ansatz and evaluates the resulting lower bound on the
/// energy per particle.
pub fn cell_lower_bound(p: &DiluteParams, ansatz: &CellAnsatz) -> Result<CellBound> {
    if !(p.a > 0.0) {
        return domain("cell bound needs a > 0".into());
    }
    let (c, e) = (ansatz.constants, ansatz.exponents);
    let a = p.a;
    let r0 = ansatz.r0.unwrap_or(a);
    match p.dimension {
        Dimension::Three => {
            let y = p.y();
            let eps = c.c_eps * y.powf(e.alpha);
            let ell = a / (c.c_ell * y.powf(e.beta));
            let shell = c.c_r * y.powf(e.gamma) * ell.powi(3);
            let r = (r0.powi(3) + shell).cbrt();
            let k_cells = p.rho * ell.powi(3);
            check_common(eps, k_cells, r, r0, ell)?;
            let n = 4.0 * k_cells;
            let cell = CellMethodParams { n, ell, r, r0, eps, exponents: e, constants: c };
            let f = cell_k_factors(&cell, a, Dimension::Three);
            if !(f.temple_denominator > 0.0) {
                return infeasible(format!("Temple denominator {} is not positive", f.temple_denominator));
            }
            let k = f.product();
            if !(k > 0.0) {
                return infeasible("K vanishes".into());
            }
            let value = 4.0 * PI * p.mu * a * p.rho * (1.0 - 1.0 / k_cells) * k;
            Ok(CellBound {
                estimate: EnergyEstimate { value, kind: EstimateKind::Lower, formula_id: "cell-3d", params: *p },
                cell,
                k,
                error_terms: [eps, 1.0 / k_cells, 2.0 * r / ell, 1.0 / f.local_density - 1.0, 1.0 - f.temple],
            })
        }
        Dimension::Two => {
            if !(p.rho_a2() < 1.0) {
                return domain(format!("2D cell bound needs ρa² < 1, got {}", p.rho_a2()));
            }
            let l = p.log_parameter();
            let eps = c.c_eps * l.powf(-e.alpha);
            let ell = c.c_ell * p.rho.powf(-0.5) * l.powf(e.beta);
            let r = c.c_r * p.rho.powf(-0.5) * l.powf(-e.gamma);
            let k_cells = p.rho * ell * ell;
            check_common(eps, k_cells, r, r0, ell)?;
            if r0 < a {
                return infeasible(format!("R0 = {r0} below a = {a}"));
            }
            let n = 4.0 * k_cells;
            let cell = CellMethodParams { n, ell, r, r0, eps, exponents: e, constants: c };
            let f = cell_k_factors(&cell, a, Dimension::Two);
            if !(f.temple_denominator > 0.0) {
                return infeasible(format!("Temple denominator {} is not positive", f.temple_denominator));
            }
            let k = f.product();
            if !(k > 0.0) {
                return infeasible("K vanishes".into());
            }
            let area = PI * (r * r - r0 * r0);
            let value = p.mu * p.rho * area / nu_2d(r, r0, a) * (1.0 - 1.0 / k_cells) * k;
            let log_r = (r * r / (a * a)).ln();
            Ok(CellBound {
                estimate: EnergyEstimate { value, kind: EstimateKind::Lower, formula_id: "cell-2d", params: *p },
                cell,
                k,
                error_terms: [eps, 1.0 / k_cells, r / ell, p.rho * r * r, p.rho * ell.powi(4) / (eps * r * r * log_r)],
            })
        }
    }
}

fn check_common(eps: f64, k_cells: f64, r: f64, r0: f64, ell: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return infeasible(format!("ε = {eps} outside (0, 1)"));
    }
    if !(k_cells > 1.0) {
        return infeasible(format!("mean cell occupation {k_cells} is not above 1"));
    }
    if !(r > r0) {
        return infeasible(format!("R = {r} not above R0 = {r0}"));
    }
    if !(r < 0.5 * ell) {
        return infeasible(format!("R = {r} not below ℓ/2 = {}", 0.5 * ell));
    }
    Ok(())
}

/// The dimensionless 2D Temple condition `ε ln(R²/a²) > ρ²ℓ⁴` for the
/// logarithmic parameter choices with unit constants.
pub fn temple_condition_2d(p: &DiluteParams) -> Result<bool> {
    if p.dimension != Dimension::Two || !(p.rho_a2() < 1.0) || !(p.a > 0.0) {
        return domain("2D Temple condition needs d = 2 and 0 < ρa² < 1".into());
    }
    let l = p.log_parameter();
    let eps = l.powf(-0.2);
    let ell = p.rho.powf(-0.5) * l.powf(0.1);
    let r = p.rho.powf(-0.5) * l.powf(-0.1);
    Ok(eps * (r * r / (p.a * p.a)).ln() > (p.rho * ell * ell).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    const D3: Dimension = Dimension::Three;

    #[test]
    fn leading_examples() {
        let p = DiluteParams::new(1.0, 0.01, 1.0, D3).unwrap();
        assert!((leading_energy(&p).unwrap().value - 0.04 * PI).abs() < 1e-15);
        let p = DiluteParams::new(1.0, 0.0, 1.0, D3).unwrap();
        assert_eq!(leading_energy(&p).unwrap().value, 0.0);
        let p = DiluteParams::new(1.0, (-5.0f64).exp(), 1.0, Dimension::Two).unwrap();
        assert!((leading_energy(&p).unwrap().value - 0.4 * PI).abs() < 1e-14);
        let p = DiluteParams::new(1.0, 2.0, 1.0, Dimension::Two).unwrap();
        assert!(leading_energy(&p).is_err());
    }

    #[test]
    fn upper_ratio_domain() {
        assert!(dyson_upper_ratio(1.0, false).is_err());
        assert!(dyson_upper_ratio(0.0, true).is_err());
        assert!((dyson_upper_ratio(1e-15, false).unwrap() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn temple_cases() {
        assert_eq!(temple_bound(0.3, 0.09, 1.0).unwrap(), 0.3);
        assert!(matches!(temple_bound(1.0, 2.0, 1.0), Err(HomogeneousError::GapViolation { .. })));
        assert!(matches!(temple_bound(1.0, 0.5, 2.0), Err(HomogeneousError::VarianceNegative { .. })));
    }

    #[test]
    fn occupation_limits() {
        assert_eq!(occupation_min(1.0, 10.0).unwrap(), 0.0);
        assert_eq!(occupation_min(3.0, 12.0).unwrap(), 6.0);
        assert!(occupation_min(0.5, 3.0).is_err());
        assert!(occupation_min(2.0, 1.0).is_err());
    }

    #[test]
    fn k_vanishes_at_full_eps() {
        let params = CellMethodParams::new(5.0, 100.0, 10.0, 1.0, 1.0, D3).unwrap();
        assert_eq!(cell_k(&params, 1.0, 1.0, D3), 0.0);
    }

    #[test]
    fn geometry_validated() {
        assert!(CellMethodParams::new(5.0, 10.0, 6.0, 1.0, 0.5, D3).is_err());
        assert!(CellMethodParams::new(5.0, 10.0, 1.0, 1.0, 0.5, D3).is_err());
        assert!(CellMethodParams::new(1.0, 10.0, 2.0, 1.0, 0.5, D3).is_err());
    }
}
