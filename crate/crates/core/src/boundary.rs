//! Closed shape boundaries: ingestion, arc length, centroid, resampling and
//! discrete curvature.
//!
//! Arc length is always the chord length of the polyline. Every boundary is
//! stored counter-clockwise (positive signed area); ingestion reverses
//! clockwise input while keeping the first listed point first.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Result, ShapeError};
use crate::geometry::Point;

/// Ordered, counter-clockwise closed polyline with cumulative chord lengths.
///
/// The last point connects back to the first; the closing chord is not
/// repeated in `points`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledBoundary {
    points: Vec<Point>,
    cum_arc: Vec<f64>,
    total: f64,
}

/// Signed curvature at each boundary point (units of 1/length).
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    pub values: Vec<f64>,
}

impl SampledBoundary {
    /// Builds a boundary from an ordered contour.
    ///
    /// Consecutive duplicates (including last == first) are collapsed and
    /// clockwise input is re-oriented. Fewer than three distinct points or a
    /// zero enclosed area is rejected.
    pub fn from_points(points: Vec<Point>) -> Result<Self> {
        if let Some(bad) = points.iter().find(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(ShapeError::InvalidArgument(format!(
                "non-finite coordinate ({}, {})",
                bad.x, bad.y
            )));
        }
        let mut pts: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        if pts.len() < 3 {
            return Err(ShapeError::Degenerate(format!(
                "{} distinct point(s); at least 3 are required",
                pts.len()
            )));
        }

        let area = signed_area(&pts);
        let diag = bbox_diagonal(&pts);
        if area.abs() <= 1e-12 * diag * diag {
            return Err(ShapeError::Degenerate("zero enclosed area".into()));
        }
        if area < 0.0 {
            pts[1..].reverse();
        }

        let mut cum_arc = Vec::with_capacity(pts.len());
        let mut acc = 0.0;
        cum_arc.push(0.0);
        for w in pts.windows(2) {
            acc += w[0].distance(w[1]);
            cum_arc.push(acc);
        }
        let total = acc + pts[pts.len() - 1].distance(pts[0]);
        Ok(Self {
            points: pts,
            cum_arc,
            total,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Cumulative chord length at each point; the first entry is zero.
    pub fn cum_arc(&self) -> &[f64] {
        &self.cum_arc
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Boundaries are always closed.
    pub fn is_closed(&self) -> bool {
        true
    }

    /// Sum of all chords including the closing one.
    pub fn total_arc_length(&self) -> f64 {
        self.total
    }

    /// Shoelace signed area; always positive for a stored boundary.
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.points)
    }

    /// Area centroid of the enclosed polygon.
    pub fn centroid(&self) -> Result<Point> {
        // Shift to the first vertex so large offsets do not cost precision.
        let o = self.points[0];
        let n = self.points.len();
        let (mut a2, mut cx, mut cy) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = self.points[i] - o;
            let q = self.points[(i + 1) % n] - o;
            let c = p.cross(q);
            a2 += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        if a2.abs() <= f64::MIN_POSITIVE {
            return Err(ShapeError::Degenerate("zero enclosed area".into()));
        }
        Ok(Point::new(o.x + cx / (3.0 * a2), o.y + cy / (3.0 * a2)))
    }

    /// Length of the chord leaving point `i` (the closing chord for the last point).
    pub fn segment_length(&self, i: usize) -> f64 {
        let next = if i + 1 < self.cum_arc.len() {
            self.cum_arc[i + 1]
        } else {
            self.total
        };
        next - self.cum_arc[i]
    }

    /// Point at arc length `s` (taken modulo the total length), by linear
    /// interpolation along the polyline.
    pub fn point_at(&self, s: f64) -> Point {
        let s = s.rem_euclid(self.total);
        let i = self.cum_arc.partition_point(|&c| c <= s).saturating_sub(1);
        let len = self.segment_length(i);
        let t = ((s - self.cum_arc[i]) / len).clamp(0.0, 1.0);
        let a = self.points[i];
        let b = self.points[(i + 1) % self.points.len()];
        a.lerp(b, t)
    }

    /// `n` points at arc lengths `seed_arc + k * s_t / n`; the first output
    /// point is the seed point.
    pub fn resample_uniform(&self, n: usize, seed_arc: f64) -> Result<Self> {
        if n < 3 {
            return Err(ShapeError::InvalidArgument(format!(
                "resampling needs n >= 3, got {n}"
            )));
        }
        if !(0.0..self.total).contains(&seed_arc) {
            return Err(ShapeError::InvalidArgument(format!(
                "seed arc {seed_arc} outside [0, {})",
                self.total
            )));
        }
        let step = self.total / n as f64;
        let pts = (0..n)
            .map(|k| self.point_at(seed_arc + k as f64 * step))
            .collect();
        Self::from_points(pts)
    }

    /// Discrete curvature from central differences of x and y with respect
    /// to cumulative arc length, wrapping at the seam.
    ///
    /// Uses the three-point non-uniform stencil, which is second order on
    /// uniformly spaced samples. Positive on counter-clockwise convex arcs.
    pub fn curvature_profile(&self) -> Result<CurvatureProfile> {
        let n = self.points.len();
        if n < 5 {
            return Err(ShapeError::InvalidArgument(format!(
                "curvature needs at least 5 boundary points, got {n}"
            )));
        }
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let prev = self.points[(i + n - 1) % n];
            let cur = self.points[i];
            let next = self.points[(i + 1) % n];
            let h1 = self.segment_length((i + n - 1) % n);
            let h2 = self.segment_length(i);
            if h1 <= 0.0 || h2 <= 0.0 {
                return Err(ShapeError::Degenerate(format!(
                    "repeated point at index {i}"
                )));
            }
            let denom = h1 * h2 * (h1 + h2);
            let d1 = |a: f64, b: f64, c: f64| (h1 * h1 * c - h2 * h2 * a + (h2 * h2 - h1 * h1) * b) / denom;
            let d2 = |a: f64, b: f64, c: f64| 2.0 * (h1 * c - (h1 + h2) * b + h2 * a) / denom;
            let xs = d1(prev.x, cur.x, next.x);
            let ys = d1(prev.y, cur.y, next.y);
            let xss = d2(prev.x, cur.x, next.x);
            let yss = d2(prev.y, cur.y, next.y);
            let speed2 = xs * xs + ys * ys;
            values.push((xs * yss - ys * xss) / speed2.powf(1.5));
        }
        Ok(CurvatureProfile { values })
    }

    /// Applies `f` to every point and rebuilds the boundary.
    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        Self::from_points(self.points.iter().map(|&p| f(p)).collect())
    }
}

fn signed_area(pts: &[Point]) -> f64 {
    let o = pts[0];
    let n = pts.len();
    let mut a2 = 0.0;
    for i in 0..n {
        a2 += (pts[i] - o).cross(pts[(i + 1) % n] - o);
    }
    0.5 * a2
}

fn bbox_diagonal(pts: &[Point]) -> f64 {
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in pts {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    lo.distance(hi)
}

/// Parses the `x,y` point-list format: UTF-8 CSV with a header row, one
/// point per row, closure implicit.
pub fn parse_boundary(text: &str) -> Result<SampledBoundary> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| ShapeError::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
        return Err(ShapeError::Parse {
            line: 1,
            message: format!("expected header `x,y`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| ShapeError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(ShapeError::Parse {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let field = |k: usize| -> Result<f64> {
            let v: f64 = record[k].parse().map_err(|_| ShapeError::Parse {
                line,
                message: format!("`{}` is not a number", &record[k]),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(ShapeError::Parse {
                    line,
                    message: format!("`{}` is not finite", &record[k]),
                })
            }
        };
        points.push(Point::new(field(0)?, field(1)?));
    }
    SampledBoundary::from_points(points)
}

/// Writes a boundary in the `x,y` point-list format.
pub fn format_boundary(b: &SampledBoundary) -> String {
    let mut out = String::from("x,y\n");
    for p in b.points() {
        out.push_str(&format!(
            "{},{}\n",
            crate::format::float(p.x),
            crate::format::float(p.y)
        ));
    }
    out
}

/// Ellipse `x = a cos t, y = b sin t` sampled at uniformly spaced `t`.
///
/// With `half`, the samples cover `t` in `[-pi/2, pi/2]` (both ends
/// included) and the closing chord runs along the y-axis.
pub fn make_ellipse(a: f64, b: f64, n: usize, half: bool) -> Result<SampledBoundary> {
    if !(a > 0.0 && b > 0.0) {
        return Err(ShapeError::InvalidArgument(format!(
            "semi-axes must be positive, got a={a}, b={b}"
        )));
    }
    if n < 3 {
        return Err(ShapeError::InvalidArgument(format!(
            "ellipse needs n >= 3, got {n}"
        )));
    }
    let pts = (0..n)
        .map(|k| {
            let t = if half {
                -FRAC_PI_2 + PI * k as f64 / (n - 1) as f64
            } else {
                TAU * k as f64 / n as f64
            };
            Point::new(a * t.cos(), b * t.sin())
        })
        .collect();
    SampledBoundary::from_points(pts)
}
