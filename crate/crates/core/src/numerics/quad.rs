use super::{NumericsError, Tolerances};

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Segment, NumericsError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut finite = fc.is_finite();
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        finite &= s.is_finite();
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    if !finite {
        return Err(NumericsError::DomainError(format!(
            "integrand is not finite on [{lo}, {hi}]"
        )));
    }
    Ok(Segment { lo, hi, value: kronrod * half, error: ((kronrod - gauss) * half).abs() })
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: &Tolerances) -> Result<f64, NumericsError> {
    if lo == hi {
        return Ok(0.0);
    }
    let mut segments = vec![gauss_kronrod(f, lo, hi)?];
    for iteration in 0..tol.max_iterations {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= tol.threshold(total) {
            return Ok(total);
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("nonempty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi {
            // Interval can no longer be split in floating point.
            return Err(NumericsError::NoConvergence { iterations: iteration, error_estimate: error });
        }
        segments.push(gauss_kronrod(f, seg.lo, mid)?);
        segments.push(gauss_kronrod(f, mid, seg.hi)?);
    }
    let error: f64 = segments.iter().map(|s| s.error).sum();
    Err(NumericsError::NoConvergence { iterations: tol.max_iterations, error_estimate: error })
}

/// Adaptive Gauss-Kronrod quadrature of `f` over `[lo, hi]`.
///
/// `hi` may be `f64::INFINITY`; the half line is mapped onto `[0, 1)` by
/// `x = lo + t / (1 - t)`. Slowly decaying integrands are rejected with
/// [`NumericsError::DivergentTail`].
pub fn quad<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: &Tolerances) -> Result<f64, NumericsError> {
    if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || lo == f64::NEG_INFINITY {
        return Err(NumericsError::DomainError(format!("invalid interval [{lo}, {hi}]")));
    }
    if hi < lo {
        return quad(f, hi, lo, tol).map(|v| -v);
    }
    if hi.is_finite() {
        return adaptive(&f, lo, hi, tol);
    }
    let mapped = |t: f64| {
        let s = 1.0 - t;
        if s <= 0.0 {
            return 0.0;
        }
        f(lo + t / s) / (s * s)
    };
    check_tail(&mapped)?;
    adaptive(&mapped, 0.0, 1.0, tol)
}

/// Integral over `[points[0], points[last]]`, split at every interior point.
pub fn quad_with_breaks<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: &Tolerances) -> Result<f64, NumericsError> {
    if points.len() < 2 {
        return Err(NumericsError::DomainError("need at least two points".into()));
    }
    let mut sum = 0.0;
    for w in points.windows(2) {
        sum += quad(&f, w[0], w[1], tol)?;
    }
    Ok(sum)
}

/// Dyadic shells approaching t = 1 must carry geometrically shrinking
/// weight; an integrand decaying like 1/x or slower gives equal shells.
fn check_tail<F: Fn(f64) -> f64>(mapped: &F) -> Result<(), NumericsError> {
    let shell = |k: i32| -> Result<f64, NumericsError> {
        let a = 1.0 - 0.5f64.powi(k);
        let b = 1.0 - 0.5f64.powi(k + 1);
        Ok(gauss_kronrod(mapped, a, b)?.value.abs())
    };
    let shells = [shell(16)?, shell(18)?, shell(20)?, shell(22)?];
    if shells[0] == 0.0 {
        return Ok(());
    }
    let shrinking = shells.windows(2).all(|w| w[1] <= 0.8 * w[0] || w[1] < 1e-300);
    if shrinking {
        Ok(())
    } else {
        Err(NumericsError::DivergentTail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::new(1e-14, 1e-12, 2000).unwrap()
    }

    #[test]
    fn polynomial() {
        let v = quad(|x| x * x, 0.0, 1.0, &tol()).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_half_line() {
        let v = quad(|x| (-x).exp(), 0.0, f64::INFINITY, &tol()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_interval() {
        let v = quad(|x| x, 1.0, 0.0, &tol()).unwrap();
        assert!((v + 0.5).abs() < 1e-15);
    }

    #[test]
    fn inverse_square_tail_converges() {
        let v = quad(|x| 1.0 / (1.0 + x * x), 0.0, f64::INFINITY, &tol()).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    }

    #[test]
    fn inverse_tail_is_divergent() {
        let err = quad(|x| 1.0 / (1.0 + x), 0.0, f64::INFINITY, &tol()).unwrap_err();
        assert_eq!(err, NumericsError::DivergentTail);
    }

    #[test]
    fn stalls_report_no_convergence() {
        let t = Tolerances::new(1e-15, 0.0, 3).unwrap();
        let err = quad(|x: f64| x.abs().sqrt().recip().min(1e8), -1.0, 1.0, &t).unwrap_err();
        assert!(matches!(err, NumericsError::NoConvergence { .. }));
    }

    #[test]
    fn breaks_sum() {
        let v = quad_with_breaks(|x| if x < 1.0 { 1.0 } else { 2.0 }, &[0.0, 1.0, 3.0], &tol()).unwrap();
        assert!((v - 5.0).abs() < 1e-14);
    }
}
