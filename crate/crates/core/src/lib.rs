//! Numerical laboratory for the ground state of the dilute and the charged
//! Bose gas.
//!
//! * [`numerics`]: ODE, quadrature, root finding and Gamma kernels.
//! * [`potentials`]: pair and trap potentials.
//! * [`scattering`]: zero-energy scattering solutions and the scattering length.
//! * [`homogeneous`]: closed-form energy bounds and the Temple / cell-method machinery.
//! * [`gp`]: Gross-Pitaevskii and Thomas-Fermi minimizers.
//! * [`bogolubov`]: pair-mode diagonalization and Foldy's law for the charged gas.

pub mod bogolubov;
pub mod gp;
pub mod homogeneous;
pub mod numerics;
pub mod potentials;
pub mod scattering;

pub use numerics::{RadialGrid, Tolerances};

/// Spatial dimension of a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn as_usize(self) -> usize {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    pub fn from_usize(d: usize) -> Option<Self> {
        match d {
            2 => Some(Dimension::Two),
            3 => Some(Dimension::Three),
            _ => None,
        }
    }

    /// Surface area of the unit sphere, 2π or 4π.
    pub fn unit_sphere_area(self) -> f64 {
        match self {
            Dimension::Two => 2.0 * std::f64::consts::PI,
            Dimension::Three => 4.0 * std::f64::consts::PI,
        }
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_usize())
    }
}
