//! Scale- and rotation-invariant sampling of closed boundaries.
//!
//! Three samplers are provided:
//!
//! * recursive bisection (`n` must be a power of two),
//! * equal spacing from a seed at an absolute extremum of the
//!   centroid-distance profile,
//! * the local maxima of curvature, topped up by marking off the smallest
//!   inter-maximum gap.
//!
//! When a profile has several equivalent extrema, the seed is the one whose
//! cyclic sequence of normalized gaps is lexicographically smallest, and two
//! shapes are aligned by minimizing the arc-length correspondence score over
//! all pairings (see [`best_alignment`]).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::boundary::SampledBoundary;
use crate::error::{Result, ShapeError};

/// Relative tolerance (of the profile range) for absolute extrema.
pub const DEFAULT_EXTREMA_REL_TOL: f64 = 1e-3;
/// Minimum prominence (fraction of the profile range) for a curvature peak.
pub const DEFAULT_PROMINENCE: f64 = 0.05;
/// Normalized gaps closer than this compare equal.
const GAP_TIE_TOL: f64 = 1e-9;
/// Correspondence scores closer than this compare equal.
const SCORE_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplingMethod {
    Bisection,
    CentroidDistance,
    CurvatureMaxima,
    /// The boundary's own vertices, taken as given.
    Vertices,
}

impl SamplingMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::Bisection => "bisection",
            Self::CentroidDistance => "centroid-distance",
            Self::CurvatureMaxima => "curvature-maxima",
            Self::Vertices => "vertices",
        }
    }
}

impl fmt::Display for SamplingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplingMethod {
    type Err = ShapeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bisection" => Ok(Self::Bisection),
            "centroid-distance" => Ok(Self::CentroidDistance),
            "curvature-maxima" => Ok(Self::CurvatureMaxima),
            "vertices" => Ok(Self::Vertices),
            other => Err(ShapeError::InvalidArgument(format!(
                "unknown sampling method `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremumKind {
    Minima,
    Maxima,
}

/// A scalar sampled along a closed boundary at increasing arc positions.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcProfile {
    pub positions: Vec<f64>,
    pub values: Vec<f64>,
    pub total_length: f64,
}

impl ArcProfile {
    pub fn new(positions: Vec<f64>, values: Vec<f64>, total_length: f64) -> Result<Self> {
        if positions.is_empty() || positions.len() != values.len() {
            return Err(ShapeError::InvalidArgument(format!(
                "profile needs matching non-empty positions/values ({} vs {})",
                positions.len(),
                values.len()
            )));
        }
        Ok(Self {
            positions,
            values,
            total_length,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Linear interpolation at arc position `s`, wrapping at the seam.
    pub fn value_at(&self, s: f64) -> f64 {
        interpolate_cyclic(&self.positions, &self.values, self.total_length, s)
    }

    fn range(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    fn check_distinct(&self) -> Result<(f64, f64)> {
        let (lo, hi) = self.range();
        if hi - lo < 1e-9 * lo.abs().max(hi.abs()) || hi - lo <= 0.0 {
            return Err(ShapeError::NoDistinctExtrema(
                "profile is constant along the boundary".into(),
            ));
        }
        Ok((lo, hi))
    }
}

pub(crate) fn interpolate_cyclic(positions: &[f64], values: &[f64], total: f64, s: f64) -> f64 {
    let n = positions.len();
    let s = s.rem_euclid(total);
    let i = positions.partition_point(|&p| p <= s).saturating_sub(1);
    let (start, end) = if i + 1 < n {
        (positions[i], positions[i + 1])
    } else {
        (positions[i], positions[0] + total)
    };
    let t = if end > start { (s - start) / (end - start) } else { 0.0 };
    values[i] + (values[(i + 1) % n] - values[i]) * t
}

/// Positions of (equivalent) extrema of a boundary profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremaSet {
    pub positions: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: ExtremumKind,
    pub total_length: f64,
}

impl ExtremaSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Arc lengths between consecutive members, read counter-clockwise from
    /// member `start` and closing back to it, divided by the total length.
    pub fn normalized_gaps(&self, start: usize) -> Vec<f64> {
        let l = self.positions.len();
        if l == 1 {
            return vec![1.0];
        }
        (1..=l)
            .map(|k| {
                let from = self.positions[(start + k - 1) % l];
                let to = self.positions[(start + k) % l];
                (to - from).rem_euclid(self.total_length) / self.total_length
            })
            .collect()
    }
}

/// Ordered sample positions (arc lengths) on one boundary.
///
/// `positions[0]` is the seed; offsets from the seed increase strictly
/// along the list.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePointSet {
    pub positions: Vec<f64>,
    pub seed_arc: f64,
    pub total_length: f64,
    pub method: SamplingMethod,
    /// Extrema the samples were anchored on, when the method uses any.
    pub anchors: Option<ExtremaSet>,
}

impl SamplePointSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Arc distance of each sample from the seed, in `[0, s_t)`.
    pub fn offsets(&self) -> Vec<f64> {
        self.positions
            .iter()
            .map(|&p| (p - self.seed_arc).rem_euclid(self.total_length))
            .collect()
    }

    /// Uses every vertex of the boundary as a sample.
    pub fn from_vertices(b: &SampledBoundary) -> Self {
        Self {
            positions: b.cum_arc().to_vec(),
            seed_arc: 0.0,
            total_length: b.total_arc_length(),
            method: SamplingMethod::Vertices,
            anchors: None,
        }
    }
}

fn uniform_positions(seed: f64, total: f64, n: usize) -> Vec<f64> {
    let w = total / n as f64;
    (0..n)
        .map(|k| (seed + k as f64 * w).rem_euclid(total))
        .collect()
}

/// `n = 2^k` points by recursive halving of the boundary, seeded at the
/// boundary's first point.
pub fn sample_bisection(b: &SampledBoundary, n: usize) -> Result<SamplePointSet> {
    if n < 4 || !n.is_power_of_two() {
        return Err(ShapeError::InvalidArgument(format!(
            "bisection sampling needs n = 2^k >= 4, got n = {n}"
        )));
    }
    fn split(start: f64, len: f64, depth: u32, out: &mut Vec<f64>) {
        if depth == 0 {
            out.push(start);
        } else {
            split(start, len / 2.0, depth - 1, out);
            split(start + len / 2.0, len / 2.0, depth - 1, out);
        }
    }
    let total = b.total_arc_length();
    let mut positions = Vec::with_capacity(n);
    split(0.0, total, n.trailing_zeros(), &mut positions);
    Ok(SamplePointSet {
        positions,
        seed_arc: 0.0,
        total_length: total,
        method: SamplingMethod::Bisection,
        anchors: None,
    })
}

/// Distance from the area centroid to each boundary point.
pub fn centroid_distance_profile(b: &SampledBoundary) -> Result<ArcProfile> {
    let c = b.centroid()?;
    let values = b.points().iter().map(|p| p.distance(c)).collect();
    ArcProfile::new(b.cum_arc().to_vec(), values, b.total_arc_length())
}

/// Discrete curvature at each boundary point.
pub fn curvature_arc_profile(b: &SampledBoundary) -> Result<ArcProfile> {
    let k = b.curvature_profile()?;
    ArcProfile::new(b.cum_arc().to_vec(), k.values, b.total_arc_length())
}

/// Every position whose value is within `rel_tol * (max - min)` of the
/// global extremum.
///
/// Candidate samples separated by at most one non-candidate sample are
/// merged; each cluster is represented by the mean of its arc positions.
pub fn find_absolute_extrema(
    profile: &ArcProfile,
    kind: ExtremumKind,
    rel_tol: f64,
) -> Result<ExtremaSet> {
    let (lo, hi) = profile.check_distinct()?;
    let sign = match kind {
        ExtremumKind::Maxima => 1.0,
        ExtremumKind::Minima => -1.0,
    };
    let best = if sign > 0.0 { hi } else { -lo };
    let threshold = best - rel_tol * (hi - lo);
    let candidates: Vec<usize> = (0..profile.len())
        .filter(|&i| sign * profile.values[i] >= threshold)
        .collect();

    let n = profile.len();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &candidates {
        match clusters.last_mut() {
            Some(c) if i - c[c.len() - 1] <= 2 => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    if clusters.len() > 1 {
        let first = clusters[0][0];
        let last = *clusters[clusters.len() - 1].last().expect("non-empty");
        if first + n - last <= 2 {
            let head = clusters.remove(0);
            clusters.last_mut().expect("non-empty").extend(head);
        }
    }

    let total = profile.total_length;
    let mut reps: Vec<(f64, f64)> = clusters
        .iter()
        .map(|c| {
            let origin = profile.positions[c[0]];
            let mean = c
                .iter()
                .map(|&i| (profile.positions[i] - origin).rem_euclid(total))
                .sum::<f64>()
                / c.len() as f64;
            let value = c
                .iter()
                .map(|&i| profile.values[i])
                .fold(f64::NAN, |acc, v| if acc.is_nan() || sign * v > sign * acc { v } else { acc });
            ((origin + mean).rem_euclid(total), value)
        })
        .collect();
    reps.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(ExtremaSet {
        positions: reps.iter().map(|r| r.0).collect(),
        values: reps.iter().map(|r| r.1).collect(),
        kind,
        total_length: total,
    })
}

/// Local maxima of a cyclic profile whose topographic prominence is at
/// least `min_prominence * (max - min)`. Plateaus count once, at their
/// midpoint.
pub fn find_local_maxima(profile: &ArcProfile, min_prominence: f64) -> Result<ExtremaSet> {
    let (lo, hi) = profile.check_distinct()?;
    let v = &profile.values;
    let n = v.len();
    let total = profile.total_length;

    // (first index, plateau length)
    let mut peaks: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        let prev = v[(i + n - 1) % n];
        if v[i] <= prev {
            continue;
        }
        let mut len = 1;
        while len < n && v[(i + len) % n] == v[i] {
            len += 1;
        }
        if v[(i + len) % n] < v[i] {
            peaks.push((i, len));
        }
    }

    let mut out: Vec<(f64, f64)> = Vec::new();
    for &(start, len) in &peaks {
        let h = v[start];
        let walk = |step: isize, from: usize| -> f64 {
            let mut m = h;
            let mut idx = from as isize;
            for _ in 0..n {
                idx = (idx + step).rem_euclid(n as isize);
                let x = v[idx as usize];
                if x > h {
                    break;
                }
                m = m.min(x);
            }
            m
        };
        let left = walk(-1, start);
        let right = walk(1, (start + len - 1) % n);
        let prominence = h - left.max(right);
        if prominence >= min_prominence * (hi - lo) {
            let a = profile.positions[start];
            let b = profile.positions[(start + len - 1) % n];
            let mid = a + (b - a).rem_euclid(total) / 2.0;
            out.push((mid.rem_euclid(total), h));
        }
    }
    if out.is_empty() {
        return Err(ShapeError::NoDistinctExtrema(
            "no sufficiently prominent local maximum".into(),
        ));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(ExtremaSet {
        positions: out.iter().map(|r| r.0).collect(),
        values: out.iter().map(|r| r.1).collect(),
        kind: ExtremumKind::Maxima,
        total_length: total,
    })
}

/// Arc-length correspondence score between member `i` of `a` and member
/// `j` of `b`: the sum of squared differences of their normalized gap
/// sequences.
pub fn correspondence_score(a: &ExtremaSet, i: usize, b: &ExtremaSet, j: usize) -> Result<f64> {
    if a.len() != b.len() {
        return Err(ShapeError::Alignment {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(ShapeError::InvalidArgument("empty extrema sets".into()));
    }
    if i >= a.len() || j >= b.len() {
        return Err(ShapeError::InvalidArgument(format!(
            "extremum index out of range: ({i}, {j}) for L = {}",
            a.len()
        )));
    }
    Ok(a
        .normalized_gaps(i)
        .iter()
        .zip(b.normalized_gaps(j))
        .map(|(x, y)| (x - y).powi(2))
        .sum())
}

/// Pairing `(i, j)` with the smallest correspondence score; ties go to the
/// smallest `(i, j)`.
pub fn best_alignment(a: &ExtremaSet, b: &ExtremaSet) -> Result<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..a.len() {
        for j in 0..b.len() {
            let s = correspondence_score(a, i, b, j)?;
            if best.is_none_or(|(_, _, bs)| s < bs - SCORE_TIE_TOL) {
                best = Some((i, j, s));
            }
        }
    }
    best.ok_or_else(|| ShapeError::InvalidArgument("empty extrema sets".into()))
}

/// Member whose cyclic normalized gap sequence is lexicographically
/// smallest (smallest index on ties).
pub fn canonical_seed(a: &ExtremaSet) -> usize {
    let mut best = 0;
    let mut best_gaps = a.normalized_gaps(0);
    for i in 1..a.len() {
        let gaps = a.normalized_gaps(i);
        if lex_cmp(&gaps, &best_gaps) == Ordering::Less {
            best = i;
            best_gaps = gaps;
        }
    }
    best
}

fn lex_cmp(x: &[f64], y: &[f64]) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        if (a - b).abs() > GAP_TIE_TOL {
            return a.total_cmp(b);
        }
    }
    Ordering::Equal
}

/// Equal spacing `s_t / n` from a seed at an absolute extremum of the
/// centroid-distance profile.
pub fn sample_by_distance_seed(
    b: &SampledBoundary,
    n: usize,
    kind: ExtremumKind,
) -> Result<SamplePointSet> {
    if n < 3 {
        return Err(ShapeError::InvalidArgument(format!(
            "sampling needs n >= 3, got {n}"
        )));
    }
    let profile = centroid_distance_profile(b)?;
    let extrema = find_absolute_extrema(&profile, kind, DEFAULT_EXTREMA_REL_TOL)?;
    let seed = extrema.positions[canonical_seed(&extrema)];
    let total = b.total_arc_length();
    Ok(SamplePointSet {
        positions: uniform_positions(seed, total, n),
        seed_arc: seed,
        total_length: total,
        method: SamplingMethod::CentroidDistance,
        anchors: Some(extrema),
    })
}

/// Samples at the prominent local maxima of curvature, with extra points
/// marked off when `n` exceeds the number of maxima.
pub fn sample_by_curvature_maxima(b: &SampledBoundary, n: usize) -> Result<SamplePointSet> {
    if n < 3 {
        return Err(ShapeError::InvalidArgument(format!(
            "sampling needs n >= 3, got {n}"
        )));
    }
    let profile = curvature_arc_profile(b)?;
    let maxima = find_local_maxima(&profile, DEFAULT_PROMINENCE)?;
    let seed = canonical_seed(&maxima);
    curvature_samples(maxima, seed, n)
}

fn curvature_samples(maxima: ExtremaSet, seed_index: usize, n: usize) -> Result<SamplePointSet> {
    let total = maxima.total_length;
    let l = maxima.len();
    let seed = maxima.positions[seed_index];
    let offset = |p: f64| (p - seed).rem_euclid(total);

    // (offset from seed, curvature) in counter-clockwise order from the seed.
    let ordered: Vec<(f64, f64)> = (0..l)
        .map(|k| {
            let idx = (seed_index + k) % l;
            (offset(maxima.positions[idx]), maxima.values[idx])
        })
        .collect();

    let mut offsets: Vec<f64> = if n <= l {
        let mut by_value: Vec<&(f64, f64)> = ordered.iter().collect();
        by_value.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
        by_value.iter().take(n).map(|r| r.0).collect()
    } else {
        let starts: Vec<f64> = ordered.iter().map(|r| r.0).collect();
        let lengths: Vec<f64> = (0..l)
            .map(|k| if k + 1 < l { starts[k + 1] - starts[k] } else { total - starts[k] })
            .collect();
        let mut all = starts.clone();
        all.extend(subdivision_marks(&starts, &lengths, n - l, total)?);
        all
    };
    offsets.sort_by(|a, b| a.total_cmp(b));
    let first = offsets[0];
    let seed_arc = (seed + first).rem_euclid(total);
    Ok(SamplePointSet {
        positions: offsets.iter().map(|&o| (seed + o).rem_euclid(total)).collect(),
        seed_arc,
        total_length: total,
        method: SamplingMethod::CurvatureMaxima,
        anchors: Some(maxima),
    })
}

/// Extra sample offsets: starting with the smallest interval length as the
/// mark-off step, walk the intervals from largest to smallest marking
/// points at `start + k * step` strictly inside each interval, until
/// `needed` points exist. If a full pass falls short, the step is halved
/// and the pass restarts.
fn subdivision_marks(starts: &[f64], lengths: &[f64], needed: usize, total: f64) -> Result<Vec<f64>> {
    let tie = GAP_TIE_TOL * total;
    // Largest first; near-equal lengths keep counter-clockwise order.
    let mut order: Vec<usize> = Vec::with_capacity(lengths.len());
    let mut remaining: Vec<usize> = (0..lengths.len()).collect();
    while !remaining.is_empty() {
        let mut pick = 0;
        for r in 1..remaining.len() {
            if lengths[remaining[r]] > lengths[remaining[pick]] + tie {
                pick = r;
            }
        }
        order.push(remaining.remove(pick));
    }

    let mut step = lengths.iter().copied().fold(f64::INFINITY, f64::min);
    loop {
        if step <= 1e-12 * total {
            return Err(ShapeError::Degenerate(
                "cannot subdivide curvature-maxima intervals further".into(),
            ));
        }
        let mut marks = Vec::with_capacity(needed);
        'intervals: for &k in &order {
            let end = starts[k] + lengths[k];
            let mut j = 1.0;
            while starts[k] + j * step < end - tie {
                if marks.len() == needed {
                    break 'intervals;
                }
                marks.push(starts[k] + j * step);
                j += 1.0;
            }
        }
        if marks.len() == needed {
            return Ok(marks);
        }
        step /= 2.0;
    }
}

/// Re-seeds `set` at anchor `anchor_index`, regenerating positions by the
/// set's own method.
pub fn reseed(set: &SamplePointSet, anchor_index: usize) -> Result<SamplePointSet> {
    let anchors = set.anchors.clone().ok_or_else(|| {
        ShapeError::InvalidArgument(format!("{} samples carry no anchors", set.method))
    })?;
    if anchor_index >= anchors.len() {
        return Err(ShapeError::InvalidArgument(format!(
            "anchor {anchor_index} out of range for L = {}",
            anchors.len()
        )));
    }
    let n = set.len();
    match set.method {
        SamplingMethod::CentroidDistance => {
            let seed = anchors.positions[anchor_index];
            Ok(SamplePointSet {
                positions: uniform_positions(seed, set.total_length, n),
                seed_arc: seed,
                total_length: set.total_length,
                method: set.method,
                anchors: Some(anchors),
            })
        }
        SamplingMethod::CurvatureMaxima => curvature_samples(anchors, anchor_index, n),
        other => Err(ShapeError::InvalidArgument(format!(
            "{other} samples cannot be re-seeded"
        ))),
    }
}

/// Aligns the seeds of two sample sets drawn by the same method by
/// minimizing the correspondence score over all extrema pairings.
///
/// Returns the re-seeded sets and the winning score. Sets without anchors
/// are returned unchanged with score 0.
pub fn align_pair(
    p: &SamplePointSet,
    q: &SamplePointSet,
) -> Result<(SamplePointSet, SamplePointSet, f64)> {
    if p.method != q.method {
        return Err(ShapeError::InvalidArgument(format!(
            "cannot align {} samples with {} samples",
            p.method, q.method
        )));
    }
    match (&p.anchors, &q.anchors) {
        (Some(a), Some(b)) => {
            let (i, j, score) = best_alignment(a, b)?;
            Ok((reseed(p, i)?, reseed(q, j)?, score))
        }
        _ => Ok((p.clone(), q.clone(), 0.0)),
    }
}
