use super::{NumericsError, RadialGrid, Tolerances};

/// Value/derivative pair of a second-order radial problem.
pub type State = [f64; 2];

/// Integrates `y' = rhs(r, y)` across the grid with classical RK4 steps and
/// step-doubling error control, returning the state at every node.
///
/// Each grid interval is integrated independently (steps never straddle a
/// node), so callers put potential discontinuities on nodes.
pub fn integrate_ode<F>(
    rhs: F,
    initial: State,
    grid: &RadialGrid,
    tol: &Tolerances,
) -> Result<Vec<State>, NumericsError>
where
    F: Fn(f64, State) -> State,
{
    let nodes = grid.nodes();
    let mut out = Vec::with_capacity(nodes.len());
    let mut y = initial;
    out.push(y);
    let mut h_guess = f64::INFINITY;
    for w in nodes.windows(2) {
        let (r0, r1) = (w[0], w[1]);
        let (y1, h_last) = integrate_interval(&rhs, r0, r1, y, h_guess, tol)?;
        y = y1;
        h_guess = h_last;
        out.push(y);
    }
    Ok(out)
}

fn integrate_interval<F>(
    rhs: &F,
    r0: f64,
    r1: f64,
    y0: State,
    h_guess: f64,
    tol: &Tolerances,
) -> Result<(State, f64), NumericsError>
where
    F: Fn(f64, State) -> State,
{
    let mut r = r0;
    let mut y = y0;
    let mut h = h_guess.min(r1 - r0);
    let mut last_good = h;
    let mut steps = 0usize;
    while r < r1 {
        if r + h >= r1 || (r1 - (r + h)) < 1e-12 * h {
            h = r1 - r;
        }
        let full = rk4_step(rhs, r, y, h)?;
        let half = rk4_step(rhs, r, y, 0.5 * h)?;
        let two_halves = rk4_step(rhs, r + 0.5 * h, half, 0.5 * h)?;

        let mut err_ratio: f64 = 0.0;
        for k in 0..2 {
            let diff = (two_halves[k] - full[k]).abs() / 15.0;
            let scale = tol.abs_tol + tol.rel_tol * two_halves[k].abs().max(y[k].abs());
            err_ratio = err_ratio.max(diff / scale);
        }
        if !err_ratio.is_finite() {
            return Err(NumericsError::NonFiniteRhs { r });
        }
        if err_ratio <= 1.0 {
            r = if r + h >= r1 { r1 } else { r + h };
            for k in 0..2 {
                y[k] = two_halves[k] + (two_halves[k] - full[k]) / 15.0;
            }
            last_good = h;
        }
        let factor = if err_ratio == 0.0 { 4.0 } else { (0.9 * err_ratio.powf(-0.2)).clamp(0.1, 4.0) };
        h *= factor;
        if h < 1e-14 * (r.abs() + 1.0) {
            return Err(NumericsError::StepSizeUnderflow { r });
        }
        steps += 1;
        if steps > tol.max_iterations {
            return Err(NumericsError::StepSizeUnderflow { r });
        }
    }
    Ok((y, last_good.max(h.min(last_good * 4.0))))
}

fn rk4_step<F>(rhs: &F, r: f64, y: State, h: f64) -> Result<State, NumericsError>
where
    F: Fn(f64, State) -> State,
{
    let eval = |r: f64, y: State| -> Result<State, NumericsError> {
        let d = rhs(r, y);
        if d[0].is_finite() && d[1].is_finite() {
            Ok(d)
        } else {
            Err(NumericsError::NonFiniteRhs { r })
        }
    };
    let k1 = eval(r, y)?;
    let k2 = eval(r + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]])?;
    let k3 = eval(r + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]])?;
    let k4 = eval(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]])?;
    Ok([
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ])
}
