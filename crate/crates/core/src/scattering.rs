//! Zero-energy scattering in two and three dimensions.
//!
//! In 3D the radial function `u(r) = r ψ(r)` solves `2μ u'' = v u` with
//! `u(0) = 0`; beyond the range `u ∝ r - a`. In 2D `ψ` itself solves
//! `2μ (ψ'' + ψ'/r) = v ψ` and behaves like `ln(r/a)` at large `r`.
//! Stored solutions are normalized to exactly these exterior forms.

use std::f64::consts::PI;

use thiserror::Error;

use crate::numerics::{integrate_ode, quad, NumericsError, RadialGrid, Spacing, State, Tolerances};
use crate::potentials::{tail_integrability, PairPotential, PotentialValue};
use crate::Dimension;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatteringError {
    #[error("potential tail decays too slowly for a finite scattering length")]
    NonIntegrableTail,
    #[error("2D solution has no logarithmic asymptote (potential vanishes identically)")]
    NoLogAsymptote,
    #[error("grid too coarse: a = {coarse} on the grid, {fine} on the refined grid")]
    GridTooCoarse { coarse: f64, fine: f64 },
    #[error("scattering solution did not pass the convergence gate")]
    NotConverged,
    #[error("radius {radius} lies inside the potential range {range}")]
    RadiusInsideRange { radius: f64, range: f64 },
    #[error("scattering length is zero")]
    ZeroScatteringLength,
    #[error("invalid scattering input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Regular zero-energy solution together with the derived scattering length.
#[derive(Debug, Clone)]
pub struct ScatteringSolution {
    dimension: Dimension,
    mu: f64,
    potential: PairPotential,
    grid: RadialGrid,
    u_values: Vec<f64>,
    derivatives: Vec<f64>,
    a: f64,
    match_radius: f64,
    s: Option<f64>,
    converged: bool,
}

impl ScatteringSolution {
    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn potential(&self) -> &PairPotential {
        &self.potential
    }

    /// Integration grid; nodes inside a hard core are not part of it.
    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    /// 3D: `u(r)` normalized to `r - a` outside the range. 2D: `ψ(r)`
    /// normalized to `ln(r/a)`.
    pub fn u_values(&self) -> &[f64] {
        &self.u_values
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.derivatives
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn match_radius(&self) -> f64 {
        self.match_radius
    }

    /// Kinetic fraction; `None` when `a = 0`.
    pub fn s(&self) -> Option<f64> {
        self.s
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Interpolated `(u, u')` at `r`, using the exterior form past the
    /// match radius and zero inside a hard core.
    pub fn state_at(&self, r: f64) -> State {
        let nodes = self.grid.nodes();
        if r < nodes[0] {
            return [0.0, 0.0];
        }
        if r >= self.match_radius {
            return match self.dimension {
                Dimension::Three => [r - self.a, 1.0],
                Dimension::Two => [(r / self.a).ln(), 1.0 / r],
            };
        }
        let i = self.grid.interval_of(r);
        hermite(nodes[i], nodes[i + 1], self.state(i), self.state(i + 1), r)
    }

    fn state(&self, i: usize) -> State {
        [self.u_values[i], self.derivatives[i]]
    }
}

/// Cubic Hermite interpolation of value and derivative.
fn hermite(r0: f64, r1: f64, y0: State, y1: State, r: f64) -> State {
    let h = r1 - r0;
    let t = (r - r0) / h;
    let (t2, t3) = (t * t, t * t * t);
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let value = h00 * y0[0] + h10 * h * y0[1] + h01 * y1[0] + h11 * h * y1[1];
    let d00 = (6.0 * t2 - 6.0 * t) / h;
    let d10 = 3.0 * t2 - 4.0 * t + 1.0;
    let d01 = (-6.0 * t2 + 6.0 * t) / h;
    let d11 = 3.0 * t2 - 2.0 * t;
    let deriv = d00 * y0[0] + d10 * y0[1] + d01 * y1[0] + d11 * y1[1];
    [value, deriv]
}

// Four-point Gauss-Legendre on [-1, 1].
const GL_X: [f64; 4] = [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GL_W: [f64; 4] = [0.347_854_845_137_453_9, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_9];

/// A grid from 0 (or the hard-core radius) to a match radius past the
/// range, with `n` uniform nodes over the range and a geometric exterior.
pub fn default_grid(p: &PairPotential, n: usize) -> Result<RadialGrid, ScatteringError> {
    let range = p.short_range();
    let onset = p.tail().map_or(0.0, |t| t.onset);
    let scale = range.max(onset);
    if scale == 0.0 {
        return Ok(RadialGrid::uniform(0.0, 1.0, n.max(16))?);
    }
    let start = if p.is_hard_core() { range } else { 0.0 };
    // Tails are integrated far out; the remainder enters only through the
    // first-order tail correction.
    let outer = if p.range().is_some() { 2.0 * scale } else { 1e3 * scale };
    let inner_end = if p.is_hard_core() { 2.0 * range } else { scale };
    let inner = RadialGrid::uniform(start, inner_end, n.max(16))?;
    let mut nodes = inner.nodes().to_vec();
    if outer > inner_end * (1.0 + 1e-12) {
        let ext = RadialGrid::geometric(inner_end, outer, (n / 4).max(16), 1.02)?;
        nodes.extend_from_slice(&ext.nodes()[1..]);
    }
    Ok(RadialGrid::from_nodes(nodes, Spacing::Uniform)?.with_breakpoints(&p.breakpoints()))
}

/// Solves the zero-energy equation on `grid` and its refinement and
/// accepts when the two scattering lengths agree to `10 rel_tol`.
pub fn solve_zero_energy(
    p: &PairPotential,
    mu: f64,
    grid: &RadialGrid,
    tol: &Tolerances,
) -> Result<ScatteringSolution, ScatteringError> {
    let mut coarse = solve_zero_energy_unchecked(p, mu, grid, tol)?;
    let fine = solve_zero_energy_unchecked(p, mu, &grid.refined(), tol)?;
    let gate = 10.0 * tol.rel_tol * fine.a.abs() + tol.abs_tol;
    if (coarse.a - fine.a).abs() > gate {
        return Err(ScatteringError::GridTooCoarse { coarse: coarse.a, fine: fine.a });
    }
    coarse.converged = true;
    Ok(coarse)
}

/// Single solve without the refinement gate; the result is flagged as not
/// converged.
pub fn solve_zero_energy_unchecked(
    p: &PairPotential,
    mu: f64,
    grid: &RadialGrid,
    tol: &Tolerances,
) -> Result<ScatteringSolution, ScatteringError> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(ScatteringError::InvalidInput(format!("mu = {mu} must be positive")));
    }
    if !tail_integrability(p, tol.rel_tol).integrable {
        return Err(ScatteringError::NonIntegrableTail);
    }
    let range = p.short_range();
    if grid.r_max() < range || (p.is_hard_core() && grid.r_max() <= range) {
        return Err(ScatteringError::InvalidInput(format!(
            "grid ends at {} inside the range {range}",
            grid.r_max()
        )));
    }
    let dim = p.dimension();
    if dim == Dimension::Two && p.is_zero() {
        return Err(ScatteringError::NoLogAsymptote);
    }

    let grid = interior_grid(p, grid)?;
    let nodes = grid.nodes().to_vec();
    let initial = initial_state(p, dim, mu, nodes[0]);
    let mut breaks = p.breakpoints();
    breaks.retain(|&b| b > nodes[0] && b < nodes[nodes.len() - 1]);
    let states = integrate_piecewise(p, dim, mu, &nodes, &breaks, initial, tol)?;

    let last = states[states.len() - 1];
    let rm = nodes[nodes.len() - 1];
    let (scale, a_match) = match dim {
        Dimension::Three => {
            if last[1] <= 0.0 {
                return Err(ScatteringError::InvalidInput("non-monotone radial solution".into()));
            }
            (last[1], rm - last[0] / last[1])
        }
        Dimension::Two => {
            let c = rm * last[1];
            if !(c > 0.0) {
                return Err(ScatteringError::NoLogAsymptote);
            }
            (c, rm * (-last[0] / c).exp())
        }
    };
    // The free solution u = r is exact; skip the roundoff in r - u/u'.
    let a = if p.is_zero() { 0.0 } else { tail_corrected(p, dim, mu, rm, a_match, tol)? };
    let u_values: Vec<f64> = states.iter().map(|y| y[0] / scale).collect();
    let derivatives: Vec<f64> = states.iter().map(|y| y[1] / scale).collect();
    let mut sol = ScatteringSolution {
        dimension: dim,
        mu,
        potential: p.clone(),
        grid,
        u_values,
        derivatives,
        a,
        match_radius: rm,
        s: None,
        converged: false,
    };
    sol.s = match dim {
        Dimension::Two => Some(1.0),
        Dimension::Three if a > 0.0 => Some(gradient_integral(&sol, f64::INFINITY) / (4.0 * PI * a)),
        Dimension::Three => None,
    };
    Ok(sol)
}

/// Drops nodes inside a hard core and makes sure every breakpoint is a node.
fn interior_grid(p: &PairPotential, grid: &RadialGrid) -> Result<RadialGrid, ScatteringError> {
    let g = grid.with_breakpoints(&p.breakpoints());
    let mut nodes: Vec<f64> = g.nodes().to_vec();
    if p.is_hard_core() {
        let r0 = p.core_radius();
        nodes.retain(|&r| r > r0);
        nodes.insert(0, r0);
    } else if p.dimension() == Dimension::Three && nodes[0] > 0.0 {
        nodes.insert(0, 0.0);
    }
    if p.dimension() == Dimension::Two && !p.is_hard_core() {
        // The 2D equation is singular at the origin; start just off it.
        let first_positive = nodes.iter().copied().find(|&r| r > 0.0).unwrap_or(1.0);
        nodes.retain(|&r| r > 0.0);
        nodes.insert(0, 1e-6 * first_positive);
    }
    Ok(RadialGrid::from_nodes(nodes, grid.spacing())?)
}

fn initial_state(p: &PairPotential, dim: Dimension, mu: f64, r: f64) -> State {
    match (dim, p.is_hard_core()) {
        (Dimension::Three, _) => [0.0, 1.0],
        (Dimension::Two, true) => [0.0, 1.0 / r],
        (Dimension::Two, false) => {
            let v0 = p.value(r);
            [1.0 + v0 * r * r / (8.0 * mu), v0 * r / (4.0 * mu)]
        }
    }
}

/// Integrates segment by segment between breakpoints so the potential is
/// always evaluated on the correct side of a jump.
fn integrate_piecewise(
    p: &PairPotential,
    dim: Dimension,
    mu: f64,
    nodes: &[f64],
    breaks: &[f64],
    initial: State,
    tol: &Tolerances,
) -> Result<Vec<State>, ScatteringError> {
    let mut out = vec![initial];
    let mut start = 0;
    let mut y = initial;
    let mut ends: Vec<usize> = breaks
        .iter()
        .filter_map(|b| nodes.iter().position(|&r| r == *b))
        .collect();
    ends.push(nodes.len() - 1);
    ends.sort_unstable();
    ends.dedup();
    for end in ends {
        if end <= start {
            continue;
        }
        let seg = &nodes[start..=end];
        let (lo, hi) = (seg[0], seg[seg.len() - 1]);
        let shrink = 1e-12 * (hi - lo);
        let v = |r: f64| p.value(r.clamp(lo + shrink, hi - shrink));
        let rhs = |r: f64, s: State| -> State {
            match dim {
                Dimension::Three => [s[1], v(r) * s[0] / (2.0 * mu)],
                Dimension::Two => [s[1], v(r) * s[0] / (2.0 * mu) - s[1] / r],
            }
        };
        let sub = RadialGrid::from_nodes(seg.to_vec(), Spacing::Uniform)?;
        let states = integrate_ode(rhs, y, &sub, tol)?;
        y = states[states.len() - 1];
        out.extend_from_slice(&states[1..]);
        start = end;
    }
    Ok(out)
}

/// Accounts for the part of the potential beyond the match radius.
fn tail_corrected(
    p: &PairPotential,
    dim: Dimension,
    mu: f64,
    rm: f64,
    a_match: f64,
    tol: &Tolerances,
) -> Result<f64, ScatteringError> {
    let tail = match p.tail() {
        Some(t) if t.coefficient > 0.0 => t,
        _ => return Ok(a_match),
    };
    let lo = rm.max(tail.onset);
    let v = |r: f64| tail.coefficient * r.powf(-tail.exponent);
    Ok(match dim {
        Dimension::Three => {
            let corr = quad(|r| v(r) * (r - a_match).powi(2), lo, f64::INFINITY, tol)?;
            a_match + corr / (2.0 * mu)
        }
        Dimension::Two => {
            let corr = quad(|r| r * v(r) * (r / a_match).ln().powi(2), lo, f64::INFINITY, tol)?;
            a_match * (corr / (2.0 * mu)).exp()
        }
    })
}

/// Gauss-Legendre sum of `f(r, u, u')` over the stored grid up to `radius`.
fn grid_integral<F: Fn(f64, State) -> f64>(sol: &ScatteringSolution, radius: f64, f: F) -> f64 {
    let nodes = sol.grid.nodes();
    let mut total = 0.0;
    for i in 0..nodes.len() - 1 {
        let (lo, hi) = (nodes[i], nodes[i + 1].min(radius));
        if hi <= lo {
            break;
        }
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let (y0, y1) = (sol.state(i), sol.state(i + 1));
        for (x, w) in GL_X.iter().zip(GL_W) {
            let r = mid + half * x;
            total += w * half * f(r, hermite(nodes[i], nodes[i + 1], y0, y1, r));
        }
    }
    total
}

/// `∫_{|x|<=radius} |∇ψ|²`, with the exact exterior continuation past the
/// match radius (3D only for the continuation).
fn gradient_integral(sol: &ScatteringSolution, radius: f64) -> f64 {
    let rm = sol.match_radius;
    match sol.dimension {
        Dimension::Three => {
            let inner = grid_integral(sol, radius.min(rm), |r, y| (y[1] - y[0] / r).powi(2));
            let a = sol.a;
            let outer = if radius > rm { a * a * (1.0 / rm - 1.0 / radius) } else { 0.0 };
            4.0 * PI * (inner + outer)
        }
        Dimension::Two => {
            let inner = grid_integral(sol, radius.min(rm), |r, y| r * y[1] * y[1]);
            let outer = if radius > rm { (radius / rm).ln() } else { 0.0 };
            2.0 * PI * (inner + outer)
        }
    }
}

fn potential_integral(sol: &ScatteringSolution, radius: f64) -> f64 {
    let p = &sol.potential;
    let rm = sol.match_radius;
    let upto = radius.min(rm);
    // Evaluate the potential strictly inside each grid interval.
    let v = |r: f64| match p.pair_value(r) {
        Ok(PotentialValue::Finite(x)) => x,
        _ => 0.0,
    };
    match sol.dimension {
        Dimension::Three => 4.0 * PI * grid_integral(sol, upto, |r, y| v(r) * y[0] * y[0]),
        Dimension::Two => 2.0 * PI * grid_integral(sol, upto, |r, y| r * v(r) * y[0] * y[0]),
    }
}

/// Scattering length of a converged solution.
pub fn scattering_length(sol: &ScatteringSolution) -> Result<f64, ScatteringError> {
    if !sol.converged {
        return Err(ScatteringError::NotConverged);
    }
    Ok(sol.a)
}

/// `∫_{|x|<=R} (2μ|∇ψ|² + v ψ²) d³x` with `ψ = u/r`, by quadrature.
pub fn energy_integral(sol: &ScatteringSolution, radius: f64) -> Result<f64, ScatteringError> {
    if sol.dimension != Dimension::Three {
        return Err(ScatteringError::InvalidInput("energy integral is defined in 3D".into()));
    }
    let range = sol.potential.short_range();
    if radius < range {
        return Err(ScatteringError::RadiusInsideRange { radius, range });
    }
    Ok(2.0 * sol.mu * gradient_integral(sol, radius) + potential_integral(sol, radius))
}

/// `s = ∫|∇ψ|² / (4π a)`; identically 1 in 2D.
pub fn kinetic_fraction(sol: &ScatteringSolution) -> Result<f64, ScatteringError> {
    match sol.dimension {
        Dimension::Two => Ok(1.0),
        Dimension::Three => sol.s.ok_or(ScatteringError::ZeroScatteringLength),
    }
}

/// Share of the energy inside `|x| <= R` that is kinetic. In 3D this tends
/// to `s`; in 2D it tends to 1 as `R` grows.
pub fn kinetic_share(sol: &ScatteringSolution, radius: f64) -> Result<f64, ScatteringError> {
    let range = sol.potential.short_range();
    if radius < range {
        return Err(ScatteringError::RadiusInsideRange { radius, range });
    }
    let kinetic = 2.0 * sol.mu * gradient_integral(sol, radius);
    let total = kinetic + potential_integral(sol, radius);
    if total == 0.0 {
        return Err(ScatteringError::ZeroScatteringLength);
    }
    Ok(kinetic / total)
}

/// `∫ v(|x|) d^d x`; the hard core gives the infinite marker.
pub fn born_integral(p: &PairPotential, tol: &Tolerances) -> Result<PotentialValue, ScatteringError> {
    if p.is_hard_core() && p.core_radius() > 0.0 {
        return Ok(PotentialValue::Infinite);
    }
    if !tail_integrability(p, tol.rel_tol).integrable {
        return Err(ScatteringError::NonIntegrableTail);
    }
    let dim = p.dimension();
    let d = dim.as_usize() as i32;
    let f = |r: f64| p.value(r) * r.powi(d - 1);
    let mut points = vec![0.0];
    points.extend(p.breakpoints());
    let mut inner = 0.0;
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let shrink = 1e-12 * (hi - lo);
        inner += quad(|r: f64| f(r.clamp(lo + shrink, hi - shrink)), lo, hi, tol)?;
    }
    let outer = match p.tail() {
        Some(t) if t.coefficient > 0.0 => {
            let from = points[points.len() - 1].max(t.onset);
            quad(f, from, f64::INFINITY, tol)?
        }
        _ => 0.0,
    };
    Ok(PotentialValue::Finite(dim.unit_sphere_area() * (inner + outer)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::new(1e-13, 1e-11, 20_000).unwrap()
    }

    fn solve(p: &PairPotential) -> ScatteringSolution {
        let g = default_grid(p, 800).unwrap();
        solve_zero_energy(p, 1.0, &g, &tol()).unwrap()
    }

    #[test]
    fn hard_core_lengths() {
        for r0 in [1.0, 2.0] {
            let sol = solve(&PairPotential::hard_core(r0, Dimension::Three).unwrap());
            assert!((scattering_length(&sol).unwrap() - r0).abs() < 1e-12);
            let s = kinetic_fraction(&sol).unwrap();
            assert!((s - 1.0).abs() < 1e-10, "s = {s}");
        }
        let sol = solve(&PairPotential::hard_core(1.0, Dimension::Two).unwrap());
        assert!((sol.a() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn free_particle() {
        let sol = solve(&PairPotential::zero(Dimension::Three));
        assert_eq!(sol.a(), 0.0);
        assert!(matches!(kinetic_fraction(&sol), Err(ScatteringError::ZeroScatteringLength)));
        let g = default_grid(&PairPotential::zero(Dimension::Two), 100).unwrap();
        let err = solve_zero_energy(&PairPotential::zero(Dimension::Two), 1.0, &g, &tol()).unwrap_err();
        assert_eq!(err, ScatteringError::NoLogAsymptote);
    }

    #[test]
    fn hard_core_energy_integral() {
        let sol = solve(&PairPotential::hard_core(1.0, Dimension::Three).unwrap());
        let e = energy_integral(&sol, 2.0).unwrap();
        assert!((e - 4.0 * PI).abs() < 1e-9);
        assert!(matches!(energy_integral(&sol, 0.5), Err(ScatteringError::RadiusInsideRange { .. })));
    }

    #[test]
    fn unchecked_solution_is_not_converged() {
        let p = PairPotential::square_well(1.0, 1.0, Dimension::Three).unwrap();
        let g = default_grid(&p, 100).unwrap();
        let sol = solve_zero_energy_unchecked(&p, 1.0, &g, &tol()).unwrap();
        assert_eq!(scattering_length(&sol), Err(ScatteringError::NotConverged));
    }

    #[test]
    fn non_integrable_tail_rejected() {
        let p = PairPotential::zero(Dimension::Three).with_tail(1.0, 3.0, 1.0).unwrap();
        let g = RadialGrid::uniform(0.0, 5.0, 100).unwrap();
        assert_eq!(solve_zero_energy(&p, 1.0, &g, &tol()).unwrap_err(), ScatteringError::NonIntegrableTail);
        assert_eq!(born_integral(&p, &tol()).unwrap_err(), ScatteringError::NonIntegrableTail);
    }

    #[test]
    fn born_integrals() {
        let sw = PairPotential::square_well(1.0, 3.0, Dimension::Three).unwrap();
        let b = born_integral(&sw, &tol()).unwrap().finite().unwrap();
        assert!((b - 4.0 * PI).abs() < 1e-12);
        let hc = PairPotential::hard_core(1.0, Dimension::Three).unwrap();
        assert!(born_integral(&hc, &tol()).unwrap().is_infinite());
    }
}
