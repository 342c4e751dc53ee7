//! Shared numerical kernels: radial grids, adaptive ODE integration,
//! Gauss-Kronrod quadrature on finite and semi-infinite intervals,
//! bracketing root finding / minimization and the Gamma function.
//!
//! Everything here is deterministic: the same inputs always produce the
//! same floating-point outputs.

mod grid;
mod ode;
mod quad;
mod roots;
mod special;

pub use grid::{RadialGrid, Spacing, MIN_GRID_NODES};
pub use ode::{integrate_ode, State};
pub use quad::{quad, quad_with_breaks};
pub use roots::{find_root, minimize_scalar};
pub use special::gamma_fn;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("step size underflow at r = {r}")]
    StepSizeUnderflow { r: f64 },
    #[error("right-hand side is not finite at r = {r}")]
    NonFiniteRhs { r: f64 },
    #[error("no convergence after {iterations} iterations (error estimate {error_estimate:e})")]
    NoConvergence { iterations: usize, error_estimate: f64 },
    #[error("tail contribution does not shrink; integrand decays too slowly")]
    DivergentTail,
    #[error("invalid bracket [{lo}, {hi}]: endpoint values f = {f_lo:e}, {f_hi:e} have the same sign")]
    InvalidBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("argument outside domain: {0}")]
    DomainError(String),
}

/// Error-control settings shared by the adaptive kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iterations: usize,
}

impl Tolerances {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iterations: usize) -> Result<Self, NumericsError> {
        if !(abs_tol >= 0.0 && rel_tol >= 0.0) || !abs_tol.is_finite() || !rel_tol.is_finite() {
            return Err(NumericsError::InvalidTolerances(format!(
                "abs_tol = {abs_tol}, rel_tol = {rel_tol} must be finite and nonnegative"
            )));
        }
        if abs_tol + rel_tol <= 0.0 {
            return Err(NumericsError::InvalidTolerances(
                "abs_tol + rel_tol must be positive".into(),
            ));
        }
        if max_iterations == 0 {
            return Err(NumericsError::InvalidTolerances(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(Self { abs_tol, rel_tol, max_iterations })
    }

    /// Tight settings used by the closed-form regression checks.
    pub fn tight() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-13, max_iterations: 20_000 }
    }

    /// Tolerance threshold for a quantity of magnitude `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale.abs())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_iterations: 10_000 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_validation() {
        assert!(Tolerances::new(0.0, 0.0, 10).is_err());
        assert!(Tolerances::new(1e-8, 0.0, 0).is_err());
        assert!(Tolerances::new(-1.0, 1.0, 10).is_err());
        assert!(Tolerances::new(0.0, 1e-8, 1).is_ok());
    }
}
