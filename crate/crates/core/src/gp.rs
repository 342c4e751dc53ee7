//! Gross-Pitaevskii and Thomas-Fermi functionals for radially symmetric
//! traps.
//!
//! The GP functional `∫ μ|∇φ|² + V|φ|² + 4πμg|φ|⁴` (with `g = a` in 3D and
//! `g = α` in 2D) is discretized with a cell-centred, flux-form scheme:
//! cells `r_i = (i + 1/2)h`, zero flux through the origin and `φ = 0` on the
//! outer face. The minimizer is found by a normalized gradient flow with
//! backward-Euler steps.

use std::f64::consts::PI;

use thiserror::Error;

use crate::numerics::{find_root, quad, NumericsError, RadialGrid, Spacing, Tolerances};
use crate::potentials::{TrapKind, TrapPotential};
use crate::Dimension;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GpError {
    #[error("coupling {0} must be nonnegative")]
    NegativeCoupling(f64),
    #[error("gradient flow did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("state did not converge")]
    NotConverged,
    #[error("grid too coarse: energies {coarse} and {fine} differ by more than the tolerance")]
    GridTooCoarse { coarse: f64, fine: f64 },
    #[error("argument outside domain: {0}")]
    DomainError(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

type Result<T> = std::result::Result<T, GpError>;

fn domain<T>(msg: String) -> Result<T> {
    Err(GpError::DomainError(msg))
}

/// Kinetic, trap and interaction parts of the GP energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub trap: f64,
    pub interaction: f64,
}

impl EnergyBreakdown {
    pub fn total(&self) -> f64 {
        self.kinetic + self.trap + self.interaction
    }
}

#[derive(Debug, Clone)]
pub struct GpState {
    pub dimension: Dimension,
    pub trap: TrapPotential,
    pub n_particles: f64,
    pub coupling: f64,
    pub mu_const: f64,
    pub grid: RadialGrid,
    pub phi: Vec<f64>,
    pub energy_breakdown: EnergyBreakdown,
    pub energy: f64,
    pub mu_gp: f64,
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Residual after each accepted flow step.
    pub residual_history: Vec<f64>,
}

/// Cell-centred grid with `n` cells on `[0, r_max]`.
pub fn gp_grid(r_max: f64, n: usize) -> Result<RadialGrid> {
    if !(r_max > 0.0) || n < 2 {
        return domain(format!("GP grid needs r_max > 0 and n >= 2, got {r_max}, {n}"));
    }
    let h = r_max / n as f64;
    let nodes = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
    Ok(RadialGrid::from_nodes(nodes, Spacing::Uniform)?)
}

/// Grid reaching 8 oscillator lengths past the TF radius.
pub fn default_gp_grid(trap: &TrapPotential, n_particles: f64, coupling: f64, mu_const: f64, n: usize) -> Result<RadialGrid> {
    let s = trap
        .homogeneity_degree()
        .ok_or_else(|| GpError::DomainError("default grid needs a power-law trap".into()))?;
    let osc = (mu_const / trap.scale()).powf(1.0 / (s + 2.0));
    let r_tf = if coupling > 0.0 {
        tf_solve(trap, n_particles, coupling, mu_const)?.support_radius
    } else {
        0.0
    };
    gp_grid(r_tf + 8.0 * osc, n)
}

/// Geometry of the cell-centred discretization.
struct Mesh {
    r: Vec<f64>,
    /// Cell volumes `S_d r_i^(d-1) h`.
    volume: Vec<f64>,
    /// Face couplings `μ S_d r_j^(d-1) / h` for faces `j = 0..=n`; the
    /// outer face carries the Dirichlet half-cell factor 2.
    face: Vec<f64>,
}

impl Mesh {
    fn new(grid: &RadialGrid, d: Dimension, mu_const: f64) -> Result<Self> {
        let r = grid.nodes().to_vec();
        let h = r[1] - r[0];
        let uniform = r.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
        if !uniform || (r[0] - 0.5 * h).abs() > 1e-9 * h {
            return domain("GP grid must be cell-centred and uniform (see gp_grid)".into());
        }
        let area = d.unit_sphere_area();
        let pow = d.as_usize() as i32 - 1;
        let n = r.len();
        let volume = r.iter().map(|&x| area * x.powi(pow) * h).collect();
        let mut face: Vec<f64> = (0..=n).map(|j| mu_const * area * (j as f64 * h).powi(pow) / h).collect();
        face[n] *= 2.0;
        Ok(Self { r, volume, face })
    }

    fn n(&self) -> usize {
        self.r.len()
    }

    fn norm2(&self, phi: &[f64]) -> f64 {
        phi.iter().zip(&self.volume).map(|(p, v)| p * p * v).sum()
    }

    fn kinetic(&self, phi: &[f64]) -> f64 {
        let n = self.n();
        let mut e = self.face[n] * phi[n - 1] * phi[n - 1];
        for j in 1..n {
            let d = phi[j] - phi[j - 1];
            e += self.face[j] * d * d;
        }
        e
    }

    /// `(-μΔφ)_i`.
    fn laplacian(&self, phi: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| {
                let mut flux = 0.0;
                if i > 0 {
                    flux += self.face[i] * (phi[i] - phi[i - 1]);
                }
                if i + 1 < n {
                    flux += self.face[i + 1] * (phi[i] - phi[i + 1]);
                } else {
                    flux += self.face[n] * phi[i];
                }
                flux / self.volume[i]
            })
            .collect()
    }
}

fn trap_values(trap: &TrapPotential, r: &[f64]) -> Vec<f64> {
    r.iter().map(|&x| trap.radial_value(x)).collect()
}

fn breakdown(mesh: &Mesh, v: &[f64], phi: &[f64], kappa: f64) -> EnergyBreakdown {
    let mut trap = 0.0;
    let mut inter = 0.0;
    for i in 0..mesh.n() {
        let p2 = phi[i] * phi[i];
        trap += mesh.volume[i] * v[i] * p2;
        inter += mesh.volume[i] * p2 * p2;
    }
    EnergyBreakdown { kinetic: mesh.kinetic(phi), trap, interaction: 4.0 * PI * kappa * inter }
}

/// Discrete GP energy of `phi` given at the cell centres of `grid`.
pub fn gp_energy(
    phi: &[f64],
    grid: &RadialGrid,
    trap: &TrapPotential,
    coupling: f64,
    mu_const: f64,
    d: Dimension,
) -> Result<EnergyBreakdown> {
    if phi.len() != grid.len() {
        return domain(format!("{} values for {} cells", phi.len(), grid.len()));
    }
    if let TrapKind::Box { .. } = trap.kind() {
        return domain("box traps use the constant-φ closed form".into());
    }
    let mesh = Mesh::new(grid, d, mu_const)?;
    let v = trap_values(trap, &mesh.r);
    Ok(breakdown(&mesh, &v, phi, mu_const * coupling))
}

/// Relative residual `‖Hφ - λφ‖ / ‖Hφ‖` with `λ = <φ,Hφ>/<φ,φ>`.
fn residual_and_lambda(mesh: &Mesh, v: &[f64], phi: &[f64], kappa: f64) -> (f64, f64) {
    let lap = mesh.laplacian(phi);
    let h_phi: Vec<f64> = (0..mesh.n())
        .map(|i| lap[i] + v[i] * phi[i] + 8.0 * PI * kappa * phi[i].powi(3))
        .collect();
    let dot: f64 = (0..mesh.n()).map(|i| mesh.volume[i] * phi[i] * h_phi[i]).sum();
    let lambda = dot / mesh.norm2(phi);
    let num: f64 = (0..mesh.n()).map(|i| mesh.volume[i] * (h_phi[i] - lambda * phi[i]).powi(2)).sum();
    let den: f64 = (0..mesh.n()).map(|i| mesh.volume[i] * h_phi[i] * h_phi[i]).sum();
    ((num / den).sqrt(), lambda)
}

/// `-μΔφ + Vφ + 8πμgφ³ - μ_GP φ`, relative to `‖Hφ‖`.
pub fn gp_residual(state: &GpState) -> Result<f64> {
    if let TrapKind::Box { .. } = state.trap.kind() {
        return Ok(0.0);
    }
    let mesh = Mesh::new(&state.grid, state.dimension, state.mu_const)?;
    let v = trap_values(&state.trap, &mesh.r);
    Ok(residual_and_lambda(&mesh, &v, &state.phi, state.mu_const * state.coupling).0)
}

/// Solves the tridiagonal system `(I + dt H_lin) x = rhs`.
fn backward_euler(mesh: &Mesh, v: &[f64], phi: &[f64], kappa: f64, dt: f64) -> Vec<f64> {
    let n = mesh.n();
    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    for i in 0..n {
        let vol = mesh.volume[i];
        let left = if i > 0 { mesh.face[i] } else { 0.0 };
        let right = mesh.face[i + 1];
        lower[i] = -dt * left / vol;
        upper[i] = if i + 1 < n { -dt * right / vol } else { 0.0 };
        diag[i] = 1.0 + dt * ((left + right) / vol + v[i] + 8.0 * PI * kappa * phi[i] * phi[i]);
    }
    // Thomas algorithm; the matrix is an M-matrix so no pivoting is needed.
    let mut c = vec![0.0; n];
    let mut x = phi.to_vec();
    c[0] = upper[0] / diag[0];
    x[0] /= diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        x[i] = (x[i] - lower[i] * x[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    x
}

fn normalize(mesh: &Mesh, phi: &mut [f64], n_particles: f64) {
    let scale = (n_particles / mesh.norm2(phi)).sqrt();
    phi.iter_mut().for_each(|p| *p *= scale);
}

/// Minimizes the GP functional with `∫|φ|² = N`.
///
/// Convergence requires the residual to be below `tol.rel_tol` and the
/// relative energy change to stay below `tol.rel_tol` over the last five
/// accepted steps.
pub fn gp_minimize(
    trap: &TrapPotential,
    n_particles: f64,
    coupling: f64,
    mu_const: f64,
    grid: &RadialGrid,
    tol: &Tolerances,
) -> Result<GpState> {
    if !(coupling >= 0.0) {
        return Err(GpError::NegativeCoupling(coupling));
    }
    if !(n_particles > 0.0) || !(mu_const > 0.0) {
        return domain(format!("need N > 0 and mu > 0, got N = {n_particles}, mu = {mu_const}"));
    }
    let d = trap.dimension();
    if let TrapKind::Box { side } = trap.kind() {
        return Ok(box_state(trap, side, n_particles, coupling, mu_const, d));
    }
    let s = trap.homogeneity_degree().unwrap_or(2.0);
    let mesh = Mesh::new(grid, d, mu_const)?;
    let v = trap_values(trap, &mesh.r);
    let kappa = mu_const * coupling;

    let osc = (mu_const / trap.scale()).powf(1.0 / (s + 2.0));
    let mut phi: Vec<f64> = mesh.r.iter().map(|&r| (-0.5 * (r / osc).powi(2)).exp()).collect();
    normalize(&mesh, &mut phi, n_particles);
    let mut energy = breakdown(&mesh, &v, &phi, kappa).total();

    let mut dt = 0.1 * osc * osc / mu_const;
    let mut history = Vec::new();
    let mut energy_changes: Vec<f64> = Vec::new();
    let mut residual = f64::INFINITY;
    for iteration in 0..tol.max_iterations {
        let mut trial = backward_euler(&mesh, &v, &phi, kappa, dt);
        normalize(&mesh, &mut trial, n_particles);
        let e_trial = breakdown(&mesh, &v, &trial, kappa).total();
        // Energy changes below ~1e-12 are rounding noise near the minimum.
        if e_trial > energy + 1e-12 * energy.abs() && dt > 1e-12 {
            dt *= 0.5;
            continue;
        }
        energy_changes.push((e_trial - energy).abs() / e_trial.abs().max(f64::MIN_POSITIVE));
        phi = trial;
        energy = e_trial;
        dt = (dt * 1.5).min(1e8);
        residual = residual_and_lambda(&mesh, &v, &phi, kappa).0;
        history.push(residual);
        let stable = energy_changes.len() >= 5 && energy_changes[energy_changes.len() - 5..].iter().all(|&c| c <= tol.rel_tol);
        if residual <= tol.rel_tol && stable {
            return Ok(finish(trap, n_particles, coupling, mu_const, grid, &mesh, &v, phi, residual, iteration + 1, history));
        }
    }
    Err(GpError::NoConvergence { iterations: tol.max_iterations, residual })
}

#[allow(clippy::too_many_arguments)]
fn finish(
    trap: &TrapPotential,
    n_particles: f64,
    coupling: f64,
    mu_const: f64,
    grid: &RadialGrid,
    mesh: &Mesh,
    v: &[f64],
    phi: Vec<f64>,
    residual: f64,
    iterations: usize,
    residual_history: Vec<f64>,
) -> GpState {
    let parts = breakdown(mesh, v, &phi, mu_const * coupling);
    let energy = parts.total();
    GpState {
        dimension: trap.dimension(),
        trap: *trap,
        n_particles,
        coupling,
        mu_const,
        grid: grid.clone(),
        phi,
        energy_breakdown: parts,
        energy,
        mu_gp: (energy + parts.interaction) / n_particles,
        residual,
        converged: true,
        iterations,
        residual_history,
    }
}

/// Constant `φ = √(N/L^d)` in a box of side `L`.
fn box_state(trap: &TrapPotential, side: f64, n_particles: f64, coupling: f64, mu_const: f64, d: Dimension) -> GpState {
    let volume = side.powi(d.as_usize() as i32);
    let value = (n_particles / volume).sqrt();
    let interaction = 4.0 * PI * mu_const * coupling * n_particles * n_particles / volume;
    let parts = EnergyBreakdown { kinetic: 0.0, trap: 0.0, interaction };
    let grid = RadialGrid::uniform(0.0, 0.5 * side, crate::numerics::MIN_GRID_NODES).expect("positive side");
    GpState {
        dimension: d,
        trap: *trap,
        n_particles,
        coupling,
        mu_const,
        phi: vec![value; grid.len()],
        grid,
        energy_breakdown: parts,
        energy: interaction,
        mu_gp: 2.0 * interaction / n_particles,
        residual: 0.0,
        converged: true,
        iterations: 0,
        residual_history: Vec::new(),
    }
}

/// GP energies on a grid and its half-spacing refinement, with the
/// second-order Richardson extrapolation.
#[derive(Debug, Clone)]
pub struct RefinedGp {
    pub coarse: GpState,
    pub fine: GpState,
    pub extrapolated_energy: f64,
    /// Estimated discretization error of the fine-grid energy.
    pub error_estimate: f64,
}

pub fn gp_minimize_refined(
    trap: &TrapPotential,
    n_particles: f64,
    coupling: f64,
    mu_const: f64,
    r_max: f64,
    cells: usize,
    tol: &Tolerances,
    max_error: f64,
) -> Result<RefinedGp> {
    let coarse = gp_minimize(trap, n_particles, coupling, mu_const, &gp_grid(r_max, cells)?, tol)?;
    let fine = gp_minimize(trap, n_particles, coupling, mu_const, &gp_grid(r_max, 2 * cells)?, tol)?;
    let error_estimate = (fine.energy - coarse.energy).abs() / 3.0;
    if error_estimate > max_error * fine.energy.abs() {
        return Err(GpError::GridTooCoarse { coarse: coarse.energy, fine: fine.energy });
    }
    let extrapolated_energy = (4.0 * fine.energy - coarse.energy) / 3.0;
    Ok(RefinedGp { coarse, fine, extrapolated_energy, error_estimate })
}

/// `E/N + (4πμg/N)∫|φ|⁴`.
pub fn chemical_potential(state: &GpState) -> Result<f64> {
    if !state.converged {
        return Err(GpError::NotConverged);
    }
    Ok(state.mu_gp)
}

/// `ρ̄ = (1/N)∫|φ|⁴`.
pub fn mean_density(state: &GpState) -> Result<f64> {
    if !state.converged {
        return Err(GpError::NotConverged);
    }
    if let TrapKind::Box { side } = state.trap.kind() {
        return Ok(state.n_particles / side.powi(state.dimension.as_usize() as i32));
    }
    let mesh = Mesh::new(&state.grid, state.dimension, state.mu_const)?;
    let integral: f64 = state.phi.iter().zip(&mesh.volume).map(|(p, v)| v * p.powi(4)).sum();
    Ok(integral / state.n_particles)
}

/// `α = 1/|ln(ρ̄a²)|`.
pub fn coupling_2d(rho_bar: f64, a: f64) -> Result<f64> {
    let x = rho_bar * a * a;
    if !(x > 0.0 && x < 1.0) {
        return domain(format!("2D coupling needs 0 < ρ̄a² < 1, got {x}"));
    }
    Ok(1.0 / x.ln().abs())
}

/// Thomas-Fermi solution for a power-law trap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfState {
    pub dimension: Dimension,
    pub trap: TrapPotential,
    pub n_particles: f64,
    /// `a` in 3D, `α` (conventionally 1) in 2D.
    pub coupling: f64,
    pub mu_const: f64,
    pub mu_tf: f64,
    pub support_radius: f64,
}

impl TfState {
    /// `[μ_TF - V(r)]₊ / (8πμg)`; exactly zero beyond the support.
    pub fn density(&self, r: f64) -> f64 {
        if r >= self.support_radius {
            return 0.0;
        }
        ((self.mu_tf - self.trap.radial_value(r)) / (8.0 * PI * self.mu_const * self.coupling)).max(0.0)
    }
}

fn radial_moment<F: Fn(f64) -> f64>(f: F, d: Dimension, radius: f64) -> Result<f64> {
    let pow = d.as_usize() as i32 - 1;
    let tol = Tolerances::tight();
    Ok(d.unit_sphere_area() * quad(|r| f(r) * r.powi(pow), 0.0, radius, &tol)?)
}

/// Finds `μ_TF` by root-finding the normalization `∫ρ = N`.
pub fn tf_solve(trap: &TrapPotential, n_particles: f64, coupling: f64, mu_const: f64) -> Result<TfState> {
    if trap.homogeneity_degree().is_none() {
        return domain("TF solution needs a power-law trap".into());
    }
    if !(coupling > 0.0) || !(n_particles > 0.0) || !(mu_const > 0.0) {
        return domain(format!("need positive N, coupling and mu, got {n_particles}, {coupling}, {mu_const}"));
    }
    let d = trap.dimension();
    let state = |mu: f64| TfState {
        dimension: d,
        trap: *trap,
        n_particles,
        coupling,
        mu_const,
        mu_tf: mu,
        support_radius: trap.inverse_radial(mu).unwrap_or(0.0),
    };
    let mass = |mu: f64| -> f64 {
        let st = state(mu);
        radial_moment(|r| st.density(r), d, st.support_radius).unwrap_or(f64::NAN) - n_particles
    };
    let mut hi = 1.0;
    while mass(hi) < 0.0 {
        hi *= 4.0;
        if !hi.is_finite() {
            return domain("TF chemical potential diverges".into());
        }
    }
    let tol = Tolerances::new(1e-300, 1e-15, 500)?;
    let mu = find_root(mass, 0.0, hi, &tol)?;
    Ok(state(mu))
}

/// `μ_TF` from the normalization integral done by hand for `V = c r^s`.
pub fn tf_mu_closed_form(trap: &TrapPotential, n_particles: f64, coupling: f64, mu_const: f64) -> Result<f64> {
    let s = trap
        .homogeneity_degree()
        .ok_or_else(|| GpError::DomainError("closed form needs a power-law trap".into()))?;
    let d = trap.dimension();
    let dd = d.as_usize() as f64;
    let c = trap.scale();
    let kappa = mu_const * coupling;
    let base = n_particles * 8.0 * PI * kappa * dd * (s + dd) * c.powf(dd / s) / (d.unit_sphere_area() * s);
    Ok(base.powf(s / (s + dd)))
}

/// `∫ Vρ + 4πμgρ²` over the support.
pub fn tf_energy(state: &TfState) -> Result<f64> {
    let kappa = state.mu_const * state.coupling;
    radial_moment(
        |r| {
            let rho = state.density(r);
            state.trap.radial_value(r) * rho + 4.0 * PI * kappa * rho * rho
        },
        state.dimension,
        state.support_radius,
    )
}

/// `∫ρ²` over the support.
pub fn tf_density_square(state: &TfState) -> Result<f64> {
    radial_moment(|r| state.density(r).powi(2), state.dimension, state.support_radius)
}

/// `g^(s/(s+d))`, the scaling of `E_TF(1, g)`.
pub fn tf_scaling(g: f64, s: f64, d: Dimension) -> f64 {
    g.powf(s / (s + d.as_usize() as f64))
}

/// One point of the GP to TF comparison at coupling `g` (`N = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpTfPoint {
    pub g: f64,
    pub e_gp: f64,
    pub e_tf: f64,
    pub ratio: f64,
    /// L¹ distance between the rescaled GP and TF densities.
    pub l1_distance: f64,
}

/// Ratios `E_GP(1,g)/E_TF(1,g)` along an increasing sequence of couplings.
///
/// The L¹ distance of the densities is invariant under the rescaling
/// `ρ ↦ g^(d/(s+d)) ρ(g^(1/(s+d)) x)`, so it is evaluated directly on the GP
/// grid.
pub fn gp_tf_limit(
    trap: &TrapPotential,
    g_sequence: &[f64],
    mu_const: f64,
    cells: usize,
    tol: &Tolerances,
) -> Result<Vec<GpTfPoint>> {
    if g_sequence.windows(2).any(|w| w[1] <= w[0]) {
        return domain("coupling sequence must be increasing".into());
    }
    let d = trap.dimension();
    g_sequence
        .iter()
        .map(|&g| {
            let grid = default_gp_grid(trap, 1.0, g, mu_const, cells)?;
            let gp = gp_minimize(trap, 1.0, g, mu_const, &grid, tol)?;
            let tf = tf_solve(trap, 1.0, g, mu_const)?;
            let e_tf = tf_energy(&tf)?;
            let mesh = Mesh::new(&grid, d, mu_const)?;
            let l1 = (0..mesh.n())
                .map(|i| mesh.volume[i] * (gp.phi[i] * gp.phi[i] - tf.density(mesh.r[i])).abs())
                .sum();
            Ok(GpTfPoint { g, e_gp: gp.energy, e_tf, ratio: gp.energy / e_tf, l1_distance: l1 })
        })
        .collect()
}

/// `(r, φ, ρ)` rows of a GP profile.
pub fn profile_rows(state: &GpState) -> Vec<[f64; 3]> {
    state
        .grid
        .nodes()
        .iter()
        .zip(&state.phi)
        .map(|(&r, &p)| [r, p, p * p])
        .collect()
}
