//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shapetree::boundary::SampledBoundary;
use shapetree::geometry::{Point, Similarity};
use shapetree::sampling::{centroid_distance_profile, find_absolute_extrema, ExtremumKind, DEFAULT_EXTREMA_REL_TOL};
use shapetree::synth::{harmonic_blob, Harmonic};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Smooth star-shaped blob with harmonics 2..=5 of random amplitude and phase.
pub fn random_blob(rng: &mut ChaCha8Rng, vertices: usize) -> SampledBoundary {
    let harmonics: Vec<Harmonic> = (2..=5)
        .map(|order| Harmonic {
            order,
            amplitude: rng.gen_range(0.02..0.12),
            phase: rng.gen_range(0.0..TAU),
        })
        .collect();
    harmonic_blob(&harmonics, vertices).expect("amplitudes stay below 1")
}

/// Blob with `fold`-fold rotational symmetry (harmonics that are multiples
/// of `fold` only).
pub fn symmetric_blob(rng: &mut ChaCha8Rng, fold: u32, vertices: usize) -> SampledBoundary {
    let harmonics: Vec<Harmonic> = (1..=2)
        .map(|k| Harmonic {
            order: fold * k,
            amplitude: rng.gen_range(0.05..0.2),
            phase: rng.gen_range(0.0..TAU),
        })
        .collect();
    harmonic_blob(&harmonics, vertices).expect("amplitudes stay below 1")
}

pub fn random_similarity(rng: &mut ChaCha8Rng) -> Similarity {
    Similarity::new(
        rng.gen_range(0.2..5.0),
        rng.gen_range(0.0..TAU),
        Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)),
    )
}

/// Whether the centroid-distance maximum of `b` is attained once.
pub fn has_unique_max(b: &SampledBoundary) -> bool {
    let p = centroid_distance_profile(b).unwrap();
    find_absolute_extrema(&p, ExtremumKind::Maxima, DEFAULT_EXTREMA_REL_TOL)
        .map(|e| e.len() == 1)
        .unwrap_or(false)
}

/// `count` random blobs whose farthest-from-centroid point is unique.
pub fn unique_max_corpus(seed: u64, count: usize, vertices: usize) -> Vec<SampledBoundary> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let b = random_blob(&mut r, vertices);
        if has_unique_max(&b) {
            out.push(b);
        }
    }
    out
}

/// Random simple polygon: sorted random angles with random radii.
pub fn random_star_polygon(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    angles
        .iter()
        .map(|&a| Point::from_polar(rng.gen_range(0.5..2.0), a))
        .collect()
}

/// Index of the point in `candidates` nearest to `p`.
pub fn nearest(candidates: &[Point], p: Point) -> usize {
    (0..candidates.len())
        .min_by(|&a, &b| candidates[a].distance(p).total_cmp(&candidates[b].distance(p)))
        .unwrap()
}
