//! Nonnegative pair potentials `v(r)` and confining trap potentials `V(x)`.

use std::path::Path;

use thiserror::Error;

use crate::Dimension;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("argument outside domain: {0}")]
    DomainError(String),
    #[error("invalid potential parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse potential spec `{spec}`: {reason}")]
    Parse { spec: String, reason: String },
    #[error("cannot read potential table {path}: {reason}")]
    Io { path: String, reason: String },
}

/// Either a finite energy or the hard-core / hard-wall marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialValue {
    Finite(f64),
    Infinite,
}

impl PotentialValue {
    pub fn is_infinite(self) -> bool {
        matches!(self, PotentialValue::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            PotentialValue::Finite(v) => Some(v),
            PotentialValue::Infinite => None,
        }
    }

    /// `f64::INFINITY` for the marker.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PairKind {
    /// `v = ∞` for `r < R0`, zero outside.
    HardCore,
    /// Constant `V0` for `r < R0`.
    SquareWell { strength: f64 },
    /// Smooth bump `V0 (1 - r²/R0²)²` for `r < R0`.
    SoftSphere { strength: f64 },
    /// Linear interpolation of `(radius, value)` pairs, zero beyond the last radius.
    Tabulated { table: Vec<(f64, f64)> },
}

/// Power-law tail `C r^(-p)` added for `r >= onset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tail {
    pub coefficient: f64,
    pub exponent: f64,
    pub onset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairPotential {
    kind: PairKind,
    core_radius: f64,
    tail: Option<Tail>,
    dimension: Dimension,
}

impl PairPotential {
    pub fn hard_core(r0: f64, dimension: Dimension) -> Result<Self, PotentialError> {
        check_radius(r0)?;
        Ok(Self { kind: PairKind::HardCore, core_radius: r0, tail: None, dimension })
    }

    pub fn square_well(r0: f64, v0: f64, dimension: Dimension) -> Result<Self, PotentialError> {
        check_radius(r0)?;
        check_strength(v0)?;
        Ok(Self { kind: PairKind::SquareWell { strength: v0 }, core_radius: r0, tail: None, dimension })
    }

    pub fn soft_sphere(r0: f64, v0: f64, dimension: Dimension) -> Result<Self, PotentialError> {
        check_radius(r0)?;
        check_strength(v0)?;
        Ok(Self { kind: PairKind::SoftSphere { strength: v0 }, core_radius: r0, tail: None, dimension })
    }

    /// The identically vanishing potential.
    pub fn zero(dimension: Dimension) -> Self {
        Self { kind: PairKind::SquareWell { strength: 0.0 }, core_radius: 0.0, tail: None, dimension }
    }

    pub fn tabulated(table: Vec<(f64, f64)>, dimension: Dimension) -> Result<Self, PotentialError> {
        if table.len() < 2 {
            return Err(PotentialError::InvalidParameter("table needs at least two rows".into()));
        }
        if table.iter().any(|&(r, v)| !r.is_finite() || !v.is_finite()) {
            return Err(PotentialError::InvalidParameter("table entries must be finite".into()));
        }
        if let Some(&(r, v)) = table.iter().find(|&&(_, v)| v < 0.0) {
            return Err(PotentialError::InvalidParameter(format!("negative value {v} at r = {r}")));
        }
        if table[0].0 < 0.0 || table.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(PotentialError::InvalidParameter(
                "table radii must be nonnegative and strictly increasing".into(),
            ));
        }
        let core_radius = table[table.len() - 1].0;
        Ok(Self { kind: PairKind::Tabulated { table }, core_radius, tail: None, dimension })
    }

    /// Adds `C r^(-p)` for `r >= onset`. Exponents `p <= d` are accepted so
    /// that [`tail_integrability`] can flag them; solvers reject them.
    pub fn with_tail(mut self, coefficient: f64, exponent: f64, onset: f64) -> Result<Self, PotentialError> {
        if !(coefficient >= 0.0) || !coefficient.is_finite() {
            return Err(PotentialError::InvalidParameter(format!("tail coefficient {coefficient}")));
        }
        if !(exponent > 0.0) || !exponent.is_finite() {
            return Err(PotentialError::InvalidParameter(format!("tail exponent {exponent}")));
        }
        if !(onset > 0.0) || !onset.is_finite() {
            return Err(PotentialError::InvalidParameter(format!("tail onset {onset}")));
        }
        self.tail = Some(Tail { coefficient, exponent, onset });
        Ok(self)
    }

    pub fn kind(&self) -> &PairKind {
        &self.kind
    }

    pub fn core_radius(&self) -> f64 {
        self.core_radius
    }

    pub fn tail(&self) -> Option<Tail> {
        self.tail
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn is_hard_core(&self) -> bool {
        matches!(self.kind, PairKind::HardCore)
    }

    /// True when `v` vanishes identically.
    pub fn is_zero(&self) -> bool {
        let base_zero = match &self.kind {
            PairKind::HardCore => self.core_radius == 0.0,
            PairKind::SquareWell { strength } | PairKind::SoftSphere { strength } => {
                *strength == 0.0 || self.core_radius == 0.0
            }
            PairKind::Tabulated { table } => table.iter().all(|&(_, v)| v == 0.0),
        };
        base_zero && self.tail.map_or(true, |t| t.coefficient == 0.0)
    }

    /// Radius beyond which the short-range part vanishes.
    pub fn short_range(&self) -> f64 {
        self.core_radius
    }

    /// Finite range, or `None` when a nonzero tail is attached.
    pub fn range(&self) -> Option<f64> {
        match self.tail {
            Some(t) if t.coefficient > 0.0 => None,
            _ => Some(self.core_radius),
        }
    }

    /// Radii where `v` or its derivative may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = match &self.kind {
            PairKind::Tabulated { table } => table.iter().map(|&(r, _)| r).collect(),
            _ => vec![self.core_radius],
        };
        if let Some(t) = self.tail {
            pts.push(t.onset);
        }
        pts.retain(|&r| r > 0.0);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// `v(r)`; the hard core is reported as [`PotentialValue::Infinite`].
    pub fn pair_value(&self, r: f64) -> Result<PotentialValue, PotentialError> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(PotentialError::DomainError(format!("pair potential needs r > 0, got {r}")));
        }
        Ok(self.eval(r))
    }

    /// Same as [`pair_value`](Self::pair_value) for `r >= 0`, as a plain
    /// float (`INFINITY` inside a hard core).
    pub fn value(&self, r: f64) -> f64 {
        self.eval(r).to_f64()
    }

    fn eval(&self, r: f64) -> PotentialValue {
        let r0 = self.core_radius;
        let base = match &self.kind {
            PairKind::HardCore => {
                if r < r0 {
                    return PotentialValue::Infinite;
                }
                0.0
            }
            PairKind::SquareWell { strength } => {
                if r < r0 {
                    *strength
                } else {
                    0.0
                }
            }
            PairKind::SoftSphere { strength } => {
                if r < r0 {
                    let x = 1.0 - (r / r0) * (r / r0);
                    strength * x * x
                } else {
                    0.0
                }
            }
            PairKind::Tabulated { table } => interpolate(table, r),
        };
        let tail = match self.tail {
            Some(t) if r >= t.onset => t.coefficient * r.powf(-t.exponent),
            _ => 0.0,
        };
        PotentialValue::Finite(base + tail)
    }
}

fn interpolate(table: &[(f64, f64)], r: f64) -> f64 {
    let last = table[table.len() - 1];
    if r > last.0 {
        return 0.0;
    }
    if r <= table[0].0 {
        return table[0].1;
    }
    let i = table.partition_point(|&(x, _)| x <= r).min(table.len() - 1);
    let (r1, v1) = table[i - 1];
    let (r2, v2) = table[i];
    if r2 == r1 {
        return v2;
    }
    v1 + (v2 - v1) * (r - r1) / (r2 - r1)
}

fn check_radius(r0: f64) -> Result<(), PotentialError> {
    if !(r0 >= 0.0) || !r0.is_finite() {
        return Err(PotentialError::InvalidParameter(format!("core radius {r0} must be finite and >= 0")));
    }
    Ok(())
}

fn check_strength(v0: f64) -> Result<(), PotentialError> {
    if !(v0 >= 0.0) || !v0.is_finite() {
        return Err(PotentialError::InvalidParameter(format!("strength {v0} must be finite and >= 0")));
    }
    Ok(())
}

/// Integrability diagnostic for the tail of a pair potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailReport {
    pub finite_range: bool,
    pub integrable: bool,
    /// `∫_onset^∞ v(r) r^(d-1) dr` of the tail (infinite when not integrable).
    pub tail_integral: f64,
    /// Radius beyond which the neglected Born contribution is below the
    /// requested tolerance; `None` when the tail is not integrable.
    pub cut_radius: Option<f64>,
}

pub fn tail_integrability(p: &PairPotential, tolerance: f64) -> TailReport {
    let d = p.dimension().as_usize() as f64;
    match p.tail() {
        Some(t) if t.coefficient > 0.0 => {
            if t.exponent <= d {
                return TailReport { finite_range: false, integrable: false, tail_integral: f64::INFINITY, cut_radius: None };
            }
            let excess = t.exponent - d;
            let tail_integral = t.coefficient * t.onset.powf(-excess) / excess;
            let area = p.dimension().unit_sphere_area();
            // S_d C R^(d-p) / (p-d) <= tolerance
            let cut = (area * t.coefficient / (excess * tolerance.max(f64::MIN_POSITIVE))).powf(1.0 / excess);
            TailReport {
                finite_range: false,
                integrable: true,
                tail_integral,
                cut_radius: Some(cut.max(t.onset).max(p.short_range())),
            }
        }
        _ => TailReport { finite_range: true, integrable: true, tail_integral: 0.0, cut_radius: Some(p.short_range()) },
    }
}

/// Parses `hardcore:r0=<x>`, `squarewell:r0=<x>,v0=<y>`,
/// `softsphere:r0=<x>,v0=<y>` or `table:path=<file>`. An optional
/// `tail=<C>/<p>@<onset>` entry attaches a power-law tail.
pub fn parse_potential(spec: &str, dimension: Dimension) -> Result<PairPotential, PotentialError> {
    let err = |reason: String| PotentialError::Parse { spec: spec.to_string(), reason };
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut r0 = None;
    let mut v0 = None;
    let mut path = None;
    let mut tail = None;
    for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| err(format!("`{item}` is not key=value")))?;
        let num = || v.trim().parse::<f64>().map_err(|_| err(format!("`{v}` is not a number")));
        match k.trim() {
            "r0" => r0 = Some(num()?),
            "v0" => v0 = Some(num()?),
            "path" => path = Some(v.trim().to_string()),
            "tail" => tail = Some(parse_tail(v).ok_or_else(|| err(format!("tail `{v}` is not C/p@onset")))?),
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    let need = |x: Option<f64>, key: &str| x.ok_or_else(|| err(format!("missing `{key}`")));
    let base = match name.trim() {
        "hardcore" => PairPotential::hard_core(need(r0, "r0")?, dimension)?,
        "squarewell" => PairPotential::square_well(need(r0, "r0")?, need(v0, "v0")?, dimension)?,
        "softsphere" => PairPotential::soft_sphere(need(r0, "r0")?, need(v0, "v0")?, dimension)?,
        "table" => {
            let path = path.ok_or_else(|| err("missing `path`".into()))?;
            PairPotential::tabulated(read_table(Path::new(&path))?, dimension)?
        }
        "zero" => PairPotential::zero(dimension),
        other => return Err(err(format!("unknown potential kind `{other}`"))),
    };
    match tail {
        Some((c, p, onset)) => base.with_tail(c, p, onset),
        None => Ok(base),
    }
}

fn parse_tail(v: &str) -> Option<(f64, f64, f64)> {
    let (c, rest) = v.split_once('/')?;
    let (p, onset) = rest.split_once('@')?;
    Some((c.trim().parse().ok()?, p.trim().parse().ok()?, onset.trim().parse().ok()?))
}

/// Reads a two-column `(radius, value)` CSV file; a header line is optional.
pub fn read_table(path: &Path) -> Result<Vec<(f64, f64)>, PotentialError> {
    let io = |reason: String| PotentialError::Io { path: path.display().to_string(), reason };
    let text = std::fs::read_to_string(path).map_err(|e| io(e.to_string()))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (a, b) = match (cols.next(), cols.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(io(format!("line {}: expected two columns", lineno + 1))),
        };
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(r), Ok(v)) => rows.push((r, v)),
            _ if rows.is_empty() => continue, // header
            _ => return Err(io(format!("line {}: not numeric", lineno + 1))),
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrapKind {
    /// Hard-walled cube of side `L` centred at the origin.
    Box { side: f64 },
    /// `scale |x|²`.
    Harmonic,
    /// `scale |x|^s`.
    PowerLaw { degree: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapPotential {
    kind: TrapKind,
    scale: f64,
    dimension: Dimension,
}

impl TrapPotential {
    pub fn box_trap(side: f64, dimension: Dimension) -> Result<Self, PotentialError> {
        if !(side > 0.0) || !side.is_finite() {
            return Err(PotentialError::InvalidParameter(format!("box side {side} must be positive")));
        }
        Ok(Self { kind: TrapKind::Box { side }, scale: 0.0, dimension })
    }

    pub fn harmonic(scale: f64, dimension: Dimension) -> Result<Self, PotentialError> {
        check_scale(scale)?;
        Ok(Self { kind: TrapKind::Harmonic, scale, dimension })
    }

    pub fn power_law(degree: f64, scale: f64, dimension: Dimension) -> Result<Self, PotentialError> {
        check_scale(scale)?;
        if !(degree > 0.0) || !degree.is_finite() {
            return Err(PotentialError::InvalidParameter(format!("homogeneity degree {degree} must be positive")));
        }
        Ok(Self { kind: TrapKind::PowerLaw { degree }, scale, dimension })
    }

    pub fn kind(&self) -> TrapKind {
        self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    /// Degree `s` with `V(λx) = λ^s V(x)`; `None` for a box.
    pub fn homogeneity_degree(&self) -> Option<f64> {
        match self.kind {
            TrapKind::Box { .. } => None,
            TrapKind::Harmonic => Some(2.0),
            TrapKind::PowerLaw { degree } => Some(degree),
        }
    }

    /// `V(x)` at a point given by its Cartesian coordinates.
    pub fn trap_value(&self, x: &[f64]) -> PotentialValue {
        match self.kind {
            TrapKind::Box { side } => {
                if x.iter().all(|c| c.abs() <= 0.5 * side) {
                    PotentialValue::Finite(0.0)
                } else {
                    PotentialValue::Infinite
                }
            }
            _ => {
                let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                PotentialValue::Finite(self.radial_value(r))
            }
        }
    }

    /// `V` as a function of `|x|` for the radially symmetric kinds (zero for a box).
    pub fn radial_value(&self, r: f64) -> f64 {
        match self.kind {
            TrapKind::Box { .. } => 0.0,
            TrapKind::Harmonic => self.scale * r * r,
            TrapKind::PowerLaw { degree } => self.scale * r.abs().powf(degree),
        }
    }

    /// Radius where `V(r) = level` along any ray (power-law kinds).
    pub fn inverse_radial(&self, level: f64) -> Option<f64> {
        let s = self.homogeneity_degree()?;
        if level <= 0.0 {
            return Some(0.0);
        }
        Some((level / self.scale).powf(1.0 / s))
    }
}

fn check_scale(scale: f64) -> Result<(), PotentialError> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(PotentialError::InvalidParameter(format!("trap scale {scale} must be positive")));
    }
    Ok(())
}

/// Parses `harmonic:scale=<x>`, `power:s=<x>,scale=<y>` or `box:l=<x>`.
pub fn parse_trap(spec: &str, dimension: Dimension) -> Result<TrapPotential, PotentialError> {
    let err = |reason: String| PotentialError::Parse { spec: spec.to_string(), reason };
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut scale = 1.0;
    let mut degree = None;
    let mut side = None;
    for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| err(format!("`{item}` is not key=value")))?;
        let x = v.trim().parse::<f64>().map_err(|_| err(format!("`{v}` is not a number")))?;
        match k.trim() {
            "scale" => scale = x,
            "s" => degree = Some(x),
            "l" | "L" => side = Some(x),
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    match name.trim() {
        "harmonic" => TrapPotential::harmonic(scale, dimension),
        "power" => TrapPotential::power_law(degree.ok_or_else(|| err("missing `s`".into()))?, scale, dimension),
        "box" => TrapPotential::box_trap(side.ok_or_else(|| err("missing `l`".into()))?, dimension),
        other => Err(err(format!("unknown trap kind `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const D3: Dimension = Dimension::Three;

    #[test]
    fn hard_core_marker() {
        let p = PairPotential::hard_core(1.0, D3).unwrap();
        assert_eq!(p.pair_value(0.5).unwrap(), PotentialValue::Infinite);
        assert_eq!(p.pair_value(1.5).unwrap(), PotentialValue::Finite(0.0));
    }

    #[test]
    fn square_well_values() {
        let p = PairPotential::square_well(1.0, 10.0, D3).unwrap();
        assert_eq!(p.pair_value(0.5).unwrap(), PotentialValue::Finite(10.0));
        assert_eq!(p.pair_value(2.0).unwrap(), PotentialValue::Finite(0.0));
    }

    #[test]
    fn table_interpolates_and_vanishes_beyond() {
        let p = PairPotential::tabulated(vec![(1.0, 2.0), (2.0, 0.0)], D3).unwrap();
        assert_eq!(p.pair_value(1.5).unwrap(), PotentialValue::Finite(1.0));
        assert_eq!(p.pair_value(3.0).unwrap(), PotentialValue::Finite(0.0));
        assert_eq!(p.pair_value(0.5).unwrap(), PotentialValue::Finite(2.0));
    }

    #[test]
    fn table_rejects_negative_entries() {
        let err = PairPotential::tabulated(vec![(1.0, 2.0), (2.0, -0.1)], D3).unwrap_err();
        assert!(matches!(err, PotentialError::InvalidParameter(_)));
        assert!(PairPotential::tabulated(vec![(1.0, 2.0), (1.0, 0.0)], D3).is_err());
    }

    #[test]
    fn nonpositive_radius_rejected() {
        let p = PairPotential::square_well(1.0, 1.0, D3).unwrap();
        assert!(p.pair_value(0.0).is_err());
        assert!(p.pair_value(-1.0).is_err());
    }

    #[test]
    fn trap_examples() {
        let h = TrapPotential::harmonic(1.0, D3).unwrap();
        assert_eq!(h.trap_value(&[2.0, 0.0, 0.0]), PotentialValue::Finite(4.0));
        let b = TrapPotential::box_trap(1.0, D3).unwrap();
        assert_eq!(b.trap_value(&[0.1, -0.2, 0.4]), PotentialValue::Finite(0.0));
        assert_eq!(b.trap_value(&[0.6, 0.0, 0.0]), PotentialValue::Infinite);
        let p = TrapPotential::power_law(3.0, 2.0, D3).unwrap();
        assert_eq!(p.trap_value(&[0.0, 2.0, 0.0]), PotentialValue::Finite(16.0));
    }

    #[test]
    fn tail_reports() {
        let sw = PairPotential::square_well(1.0, 1.0, D3).unwrap();
        let rep = tail_integrability(&sw, 1e-8);
        assert!(rep.finite_range && rep.integrable);
        assert_eq!(rep.tail_integral, 0.0);

        let t4 = PairPotential::zero(D3).with_tail(1.0, 4.0, 1.0).unwrap();
        let rep = tail_integrability(&t4, 1e-8);
        assert!(!rep.finite_range && rep.integrable);
        assert!((rep.tail_integral - 1.0).abs() < 1e-15);
        let cut = rep.cut_radius.unwrap();
        assert!((4.0 * std::f64::consts::PI / cut - 1e-8).abs() < 1e-14);

        let t3 = PairPotential::zero(D3).with_tail(1.0, 3.0, 1.0).unwrap();
        let rep = tail_integrability(&t3, 1e-8);
        assert!(!rep.integrable);
        assert!(rep.cut_radius.is_none());

        let t3_2d = PairPotential::zero(Dimension::Two).with_tail(1.0, 3.0, 1.0).unwrap();
        assert!(tail_integrability(&t3_2d, 1e-8).integrable);
    }

    #[test]
    fn spec_strings() {
        let p = parse_potential("hardcore:r0=1", D3).unwrap();
        assert!(p.is_hard_core());
        let p = parse_potential("squarewell:r0=2,v0=3", D3).unwrap();
        assert_eq!(p.kind(), &PairKind::SquareWell { strength: 3.0 });
        let p = parse_potential("softsphere:r0=1,v0=0.5,tail=1/5@2", D3).unwrap();
        assert_eq!(p.tail().unwrap().exponent, 5.0);
        assert!(parse_potential("squarewell:r0=2", D3).is_err());
        assert!(parse_potential("blob:r0=2", D3).is_err());
        assert!(parse_potential("hardcore:r0=x", D3).is_err());
    }

    #[test]
    fn table_file_with_and_without_header() {
        let dir = std::env::temp_dir().join(format!("bosegas-table-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let with = dir.join("with.csv");
        std::fs::write(&with, "r,v\n0,3\n1,1\n2,0\n").unwrap();
        let without = dir.join("without.csv");
        std::fs::write(&without, "0,3\n1,1\n2,0\n").unwrap();
        let a = parse_potential(&format!("table:path={}", with.display()), D3).unwrap();
        let b = parse_potential(&format!("table:path={}", without.display()), D3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.value(0.5), 2.0);
        std::fs::remove_dir_all(&dir).ok();
    }

    proptest! {
        #[test]
        fn step_kinds_are_nonincreasing(r0 in 0.1f64..5.0, v0 in 0.0f64..100.0, r in 0.01f64..10.0, dr in 0.0f64..1.0) {
            for p in [PairPotential::square_well(r0, v0, D3).unwrap(), PairPotential::soft_sphere(r0, v0, D3).unwrap()] {
                prop_assert!(p.value(r + dr) <= p.value(r));
                prop_assert!(p.value(r) >= 0.0);
            }
        }

        #[test]
        fn power_law_homogeneity(s in 0.5f64..6.0, scale in 0.1f64..10.0, lambda in 0.1f64..10.0,
                                 x in prop::array::uniform3(-3.0f64..3.0)) {
            let t = TrapPotential::power_law(s, scale, D3).unwrap();
            let scaled: Vec<f64> = x.iter().map(|c| lambda * c).collect();
            let lhs = t.trap_value(&scaled).to_f64();
            let rhs = lambda.powf(s) * t.trap_value(&x).to_f64();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }
    }
}
