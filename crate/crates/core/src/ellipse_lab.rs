//! Half-ellipse curvature experiments.
//!
//! A half-ellipse `x = a cos θ, y = b sin θ` for θ in [-π/2, π/2] bulges a
//! distance `a` out from its straight base of length `2b`. Its squared
//! curvature integrates to the same value for `(a, b)` and `(b, a)`, so a
//! plain sum of squared curvature differences against a straight line
//! cannot tell the two apart. Weighting by a position parameter (a first
//! moment) can.
//!
//! The moment weight used here is `t(θ) = π/2 - |θ|`, the parameter
//! distance from the nearer end of the base. It is non-negative on the
//! whole arc and grows toward the apex, which is where a protruding
//! half-ellipse concentrates its curvature.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Result, ShapeError};
use crate::quadrature::{adaptive_integrate, QuadratureConfig};
use crate::shape_tree::log_moment_term;

/// Relative tolerance for calling two gap integrals equal.
pub const EQUALITY_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfEllipse {
    pub a: f64,
    pub b: f64,
}

impl HalfEllipse {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(ShapeError::InvalidArgument(format!(
                "half-ellipse semi-axes must be positive, got ({a}, {b})"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn swapped(self) -> Self {
        Self { a: self.b, b: self.a }
    }
}

/// `ab / (a² sin²θ + b² cos²θ)^{3/2}`.
pub fn ellipse_curvature(e: HalfEllipse, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let q = e.a * e.a * s * s + e.b * e.b * c * c;
    e.a * e.b / (q * q.sqrt())
}

/// `∫ κ(θ)² dθ` over [-π/2, π/2]: the squared-curvature distance to a
/// straight line (whose curvature is zero).
pub fn curvature_gap_integral(e: HalfEllipse, cfg: &QuadratureConfig) -> Result<f64> {
    adaptive_integrate(|t| ellipse_curvature(e, t).powi(2), -FRAC_PI_2, FRAC_PI_2, cfg)
}

/// Plot data for the difference of the two gap integrals, shifted by
/// `offset`.
///
/// For each of `n` start angles θ₀ spread over [-π/2, π/2] the value is
/// `∫_{θ₀}^{θ₀+π} (κ₂² - κ₁²) dθ + offset`. Squared curvature has period π,
/// so every window covers the full arc once and the curve is flat at
/// `D₂ - D₁ + offset`.
pub fn gap_curve(
    e1: HalfEllipse,
    e2: HalfEllipse,
    offset: f64,
    n: usize,
    cfg: &QuadratureConfig,
) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(ShapeError::InvalidArgument(format!(
            "gap curve needs n >= 2 points, got {n}"
        )));
    }
    let diff = |t: f64| ellipse_curvature(e2, t).powi(2) - ellipse_curvature(e1, t).powi(2);
    (0..n)
        .map(|k| {
            let theta = -FRAC_PI_2 + PI * k as f64 / (n - 1) as f64;
            let v = adaptive_integrate(diff, theta, theta + PI, cfg)?;
            Ok((theta, v + offset))
        })
        .collect()
}

/// Moment weight `π/2 - |θ|`.
pub fn moment_weight(theta: f64) -> f64 {
    FRAC_PI_2 - theta.abs()
}

/// `ln ∫ t(θ) κ(θ)² dθ` against a straight line, with `t = π/2 - |θ|`.
pub fn log_moment(e: HalfEllipse, cfg: &QuadratureConfig) -> Result<f64> {
    let f = |t: f64| moment_weight(t) * ellipse_curvature(e, t).powi(2);
    // Split at the kink of the weight.
    let integral = adaptive_integrate(f, -FRAC_PI_2, 0.0, cfg)? + adaptive_integrate(f, 0.0, FRAC_PI_2, cfg)?;
    if integral <= 0.0 {
        return Err(ShapeError::Domain(format!(
            "moment integral is not positive ({integral})"
        )));
    }
    Ok(integral.ln())
}

/// `ln(w3 * sum_k k (δ_k - κ_k)²)`, floored like the full matching cost.
pub fn discrete_log_moment(delta: &[f64], kappa: &[f64], w3: f64) -> Result<f64> {
    log_moment_term(delta, kappa, w3)
}

/// Curvature at `n` equally spaced θ, listed in increasing moment weight
/// (base ends first, apex last; ties in θ order).
pub fn sampled_curvature_by_weight(e: HalfEllipse, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(ShapeError::InvalidArgument(format!(
            "need n >= 2 samples, got {n}"
        )));
    }
    let mut thetas: Vec<f64> = (0..n)
        .map(|k| -FRAC_PI_2 + PI * k as f64 / (n - 1) as f64)
        .collect();
    thetas.sort_by(|x, y| {
        moment_weight(*x)
            .total_cmp(&moment_weight(*y))
            .then(x.total_cmp(y))
    });
    Ok(thetas.iter().map(|&t| ellipse_curvature(e, t)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub a: f64,
    pub b: f64,
    pub m: f64,
}

/// Log moments for the family `(k, 21/k)`, `k = 3..=12`; protrusion `a/b`
/// grows with `k` at fixed area.
pub fn protrusion_table(cfg: &QuadratureConfig) -> Result<Vec<TableRow>> {
    (3..=12)
        .map(|k| {
            let a = k as f64;
            let b = 21.0 / a;
            Ok(TableRow {
                a,
                b,
                m: log_moment(HalfEllipse::new(a, b)?, cfg)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub d1: f64,
    pub d2: f64,
    pub equal_within_tol: bool,
    pub m1: f64,
    pub m2: f64,
    pub m_orders_by_protrusion: bool,
}

/// `(θ₀, value)` samples of one gap curve, keyed by the first ellipse's `(a, b)`.
pub type GapCurve = ((f64, f64), Vec<(f64, f64)>);

#[derive(Debug, Clone, PartialEq)]
pub struct EllipseReport {
    pub verdict: Verdict,
    /// `(a, b)` pairs checked for equal gap integrals, with both values.
    pub pair_checks: Vec<((f64, f64), f64, f64)>,
    pub gap_curves: Vec<GapCurve>,
    pub table: Vec<TableRow>,
}

fn rel_equal(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs())
}

/// Runs the (3,7)/(7,3) and (17,69)/(69,17) checks, their gap curves with
/// offset 5, and the protrusion table.
pub fn verify(cfg: &QuadratureConfig, curve_points: usize) -> Result<EllipseReport> {
    let pairs = [(3.0, 7.0), (17.0, 69.0)];
    let mut pair_checks = Vec::new();
    let mut gap_curves = Vec::new();
    for &(a, b) in &pairs {
        let e1 = HalfEllipse::new(a, b)?;
        let e2 = e1.swapped();
        pair_checks.push((
            (a, b),
            curvature_gap_integral(e1, cfg)?,
            curvature_gap_integral(e2, cfg)?,
        ));
        gap_curves.push(((a, b), gap_curve(e1, e2, 5.0, curve_points, cfg)?));
    }
    let table = protrusion_table(cfg)?;
    let first = HalfEllipse::new(3.0, 7.0)?;
    let m1 = log_moment(first, cfg)?;
    let m2 = log_moment(first.swapped(), cfg)?;
    let increasing = table.windows(2).all(|w| w[1].m > w[0].m);
    let verdict = Verdict {
        d1: pair_checks[0].1,
        d2: pair_checks[0].2,
        equal_within_tol: pair_checks
            .iter()
            .all(|&(_, x, y)| rel_equal(x, y, EQUALITY_REL_TOL)),
        m1,
        m2,
        m_orders_by_protrusion: m2 > m1 && increasing,
    };
    Ok(EllipseReport {
        verdict,
        pair_checks,
        gap_curves,
        table,
    })
}
