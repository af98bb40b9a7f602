//! Deterministic synthetic shapes for experiments and tests.

use std::f64::consts::TAU;

use crate::boundary::SampledBoundary;
use crate::error::{Result, ShapeError};
use crate::geometry::{Point, Similarity};

/// One harmonic of a star-shaped blob's radius function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub order: u32,
    pub amplitude: f64,
    pub phase: f64,
}

/// Star-shaped blob `r(φ) = 1 + Σ c_m cos(mφ + ψ_m)`, sampled at `n`
/// equally spaced polar angles.
pub fn harmonic_blob(harmonics: &[Harmonic], n: usize) -> Result<SampledBoundary> {
    let budget: f64 = harmonics.iter().map(|h| h.amplitude.abs()).sum();
    if budget >= 1.0 {
        return Err(ShapeError::InvalidArgument(format!(
            "harmonic amplitudes sum to {budget}; radius would not stay positive"
        )));
    }
    let pts = (0..n)
        .map(|k| {
            let phi = TAU * k as f64 / n as f64;
            let r = 1.0
                + harmonics
                    .iter()
                    .map(|h| h.amplitude * (h.order as f64 * phi + h.phase).cos())
                    .sum::<f64>();
            Point::from_polar(r, phi)
        })
        .collect();
    SampledBoundary::from_points(pts)
}

/// `|x|^p + |y|^p = 1` scaled by `radius`; `p = 4` gives a rounded square
/// whose corners lie on the diagonals.
pub fn superellipse(radius: f64, p: f64, n: usize) -> Result<SampledBoundary> {
    let pts = (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            let (s, c) = t.sin_cos();
            let e = 2.0 / p;
            Point::new(radius * c.signum() * c.abs().powf(e), radius * s.signum() * s.abs().powf(e))
        })
        .collect();
    SampledBoundary::from_points(pts)
}

/// Regular `sides`-gon of circumradius `radius` with a vertex on +x.
pub fn regular_polygon(sides: usize, radius: f64) -> Result<SampledBoundary> {
    let pts = (0..sides)
        .map(|k| Point::from_polar(radius, TAU * k as f64 / sides as f64))
        .collect();
    SampledBoundary::from_points(pts)
}

/// Applies `t` to every point and rotates the listing so it starts at
/// vertex `start`.
pub fn transformed(b: &SampledBoundary, t: &Similarity, start: usize) -> Result<SampledBoundary> {
    let n = b.len();
    let pts = (0..n).map(|k| t.apply(b.points()[(start + k) % n])).collect();
    SampledBoundary::from_points(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blob_with_no_harmonics_is_a_circle() {
        let b = harmonic_blob(&[], 100).unwrap();
        assert!(b.points().iter().all(|p| (p.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn oversized_harmonics_are_rejected() {
        let h = Harmonic { order: 2, amplitude: 1.2, phase: 0.0 };
        assert!(harmonic_blob(&[h], 50).is_err());
    }

    #[test]
    fn superellipse_corners_bulge_past_the_circle() {
        let b = superellipse(1.0, 4.0, 400).unwrap();
        let d = b.points()[50]; // t = π/4
        assert!((d.norm() - 2f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn transform_keeps_point_count_and_orientation() {
        let b = regular_polygon(6, 2.0).unwrap();
        let t = Similarity::new(0.5, 1.0, Point::new(3.0, 3.0));
        let c = transformed(&b, &t, 2).unwrap();
        assert_eq!(c.len(), 6);
        assert!((c.total_arc_length() - 0.5 * b.total_arc_length()).abs() < 1e-12);
        assert_eq!(c.points()[0], t.apply(b.points()[2]));
    }
}
