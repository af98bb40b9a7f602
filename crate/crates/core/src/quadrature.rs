//! Adaptive Simpson quadrature.

use crate::error::{Result, ShapeError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_depth: 50,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(ShapeError::InvalidArgument(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_depth < 10 {
            return Err(ShapeError::InvalidArgument(format!(
                "quadrature max_depth must be at least 10, got {}",
                self.max_depth
            )));
        }
        Ok(())
    }
}

/// Hard cap on integrand evaluations per call.
pub const MAX_EVALUATIONS: u64 = 20_000_000;

struct Worst {
    lo: f64,
    hi: f64,
    err: f64,
}

/// Integrates `f` over `[lo, hi]` by recursive Simpson bisection.
///
/// An interval is accepted when the two-panel and one-panel estimates
/// differ by at most 15 times its share of `max(abs_tol, rel_tol * |I|)`,
/// where the share halves with each split; the accepted value includes
/// the Richardson correction. Intervals that would need more than
/// `max_depth` splits make the whole call fail, reporting the interval
/// with the largest remaining error estimate. Exceeding
/// [`MAX_EVALUATIONS`] also fails, naming the abscissa where it stopped.
pub fn adaptive_integrate(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(ShapeError::InvalidArgument(format!(
            "integration limits must be finite, got [{lo}, {hi}]"
        )));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let calls = std::cell::Cell::new(0_u64);
    let eval = |x: f64| -> Result<f64> {
        calls.set(calls.get() + 1);
        if calls.get() > MAX_EVALUATIONS {
            return Err(ShapeError::Quadrature {
                lo: x,
                hi: x,
                error_estimate: f64::NAN,
            });
        }
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(ShapeError::Domain(format!("integrand is not finite at x = {x}")))
        }
    };
    let fa = eval(lo)?;
    let fb = eval(hi)?;
    let mid = 0.5 * (lo + hi);
    let fm = eval(mid)?;
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    let tol = cfg.abs_tol.max(cfg.rel_tol * whole.abs());

    let mut worst: Option<Worst> = None;
    let value = step(&eval, lo, hi, fa, fm, fb, whole, tol, cfg.max_depth, &mut worst)?;
    match worst {
        Some(w) => Err(ShapeError::Quadrature {
            lo: w.lo,
            hi: w.hi,
            error_estimate: w.err,
        }),
        None => Ok(value),
    }
}

#[allow(clippy::too_many_arguments)]
fn step(
    eval: &impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    worst: &mut Option<Worst>,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(lm)?;
    let frm = eval(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        let err = delta.abs() / 15.0;
        if worst.as_ref().is_none_or(|w| err > w.err) {
            *worst = Some(Worst { lo: a, hi: b, err });
        }
        return Ok(left + right + delta / 15.0);
    }
    Ok(step(eval, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, worst)?
        + step(eval, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, worst)?)
}
