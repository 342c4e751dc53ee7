use super::NumericsError;

pub const MIN_GRID_NODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Uniform,
    Geometric,
}

/// Strictly increasing set of radii on `[r_min, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    spacing: Spacing,
}

impl RadialGrid {
    pub fn uniform(r_min: f64, r_max: f64, n: usize) -> Result<Self, NumericsError> {
        check_bounds(r_min, r_max, n)?;
        let h = (r_max - r_min) / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| r_min + h * i as f64).collect();
        nodes[n - 1] = r_max;
        Ok(Self { nodes, spacing: Spacing::Uniform })
    }

    /// Nodes whose consecutive spacings grow by the factor `growth`.
    pub fn geometric(r_min: f64, r_max: f64, n: usize, growth: f64) -> Result<Self, NumericsError> {
        check_bounds(r_min, r_max, n)?;
        if !(growth > 0.0) || !growth.is_finite() {
            return Err(NumericsError::InvalidGrid(format!("growth factor {growth} must be positive")));
        }
        if (growth - 1.0).abs() < 1e-12 {
            return Ok(Self { spacing: Spacing::Geometric, ..Self::uniform(r_min, r_max, n)? });
        }
        let m = (n - 1) as i32;
        let total = (growth.powi(m) - 1.0) / (growth - 1.0);
        let h0 = (r_max - r_min) / total;
        let mut nodes = Vec::with_capacity(n);
        let mut r = r_min;
        let mut h = h0;
        nodes.push(r);
        for _ in 1..n - 1 {
            r += h;
            h *= growth;
            nodes.push(r);
        }
        nodes.push(r_max);
        Self::from_nodes(nodes, Spacing::Geometric)
    }

    pub fn from_nodes(nodes: Vec<f64>, spacing: Spacing) -> Result<Self, NumericsError> {
        if nodes.len() < MIN_GRID_NODES {
            return Err(NumericsError::InvalidGrid(format!(
                "{} nodes given, at least {MIN_GRID_NODES} required",
                nodes.len()
            )));
        }
        if nodes[0] < 0.0 || nodes.iter().any(|r| !r.is_finite()) {
            return Err(NumericsError::InvalidGrid("radii must be finite and nonnegative".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(NumericsError::InvalidGrid("nodes must be strictly increasing".into()));
        }
        Ok(Self { nodes, spacing })
    }

    /// Copy of the grid with extra nodes inserted. Points outside the grid
    /// are ignored; a node lying within roundoff of a point is moved onto it.
    pub fn with_breakpoints(&self, points: &[f64]) -> Self {
        let mut nodes = self.nodes.clone();
        let span = self.r_max() - self.r_min();
        for &p in points {
            if p > self.r_min() && p < self.r_max() {
                match nodes.iter().position(|&r| (r - p).abs() <= 1e-14 * span) {
                    Some(i) => nodes[i] = p,
                    None => nodes.push(p),
                }
            }
        }
        nodes.sort_by(f64::total_cmp);
        Self { nodes, spacing: self.spacing }
    }

    /// Grid with the midpoint of every interval inserted.
    pub fn refined(&self) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(self.r_max());
        Self { nodes, spacing: self.spacing }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_max(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    /// Index `i` with `nodes[i] <= r < nodes[i + 1]`, clamped to the last interval.
    pub fn interval_of(&self, r: f64) -> usize {
        let idx = self.nodes.partition_point(|&x| x <= r);
        idx.saturating_sub(1).min(self.nodes.len() - 2)
    }
}

fn check_bounds(r_min: f64, r_max: f64, n: usize) -> Result<(), NumericsError> {
    if !(r_min >= 0.0) || !r_max.is_finite() || r_max <= r_min {
        return Err(NumericsError::InvalidGrid(format!(
            "need 0 <= r_min < r_max < inf, got [{r_min}, {r_max}]"
        )));
    }
    if n < MIN_GRID_NODES {
        return Err(NumericsError::InvalidGrid(format!(
            "{n} nodes requested, at least {MIN_GRID_NODES} required"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_endpoints() {
        let g = RadialGrid::uniform(0.0, 2.0, 21).unwrap();
        assert_eq!(g.r_min(), 0.0);
        assert_eq!(g.r_max(), 2.0);
        assert!((g.nodes()[10] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn geometric_is_increasing() {
        let g = RadialGrid::geometric(0.0, 10.0, 50, 1.05).unwrap();
        assert_eq!(g.len(), 50);
        assert_eq!(g.r_max(), 10.0);
        let d: Vec<f64> = g.nodes().windows(2).map(|w| w[1] - w[0]).collect();
        assert!(d.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn too_few_nodes() {
        assert!(RadialGrid::uniform(0.0, 1.0, 15).is_err());
        assert!(RadialGrid::uniform(1.0, 1.0, 20).is_err());
    }

    #[test]
    fn breakpoints_and_refinement() {
        let g = RadialGrid::uniform(0.0, 1.0, 16).unwrap().with_breakpoints(&[0.5, 0.0, 2.0]);
        assert_eq!(g.len(), 17);
        let r = g.refined();
        assert_eq!(r.len(), 33);
        assert_eq!(r.interval_of(0.0), 0);
        assert_eq!(r.interval_of(1.0), 31);
    }
}
