//! Compact shape trees and O(n²) shape correspondence.
//!
//! A tree rooted at sample `p_i` holds the `n - 1` vectors from the root to
//! every other sample, in counter-clockwise order starting after the root,
//! plus the curvature at each sample. The curvature list follows the tips
//! first and ends with the root's curvature.
//!
//! Matching fixes one tree on the first shape and scans all `n` roots on the
//! second; the cheapest root gives the correspondence by walking both
//! boundaries in step.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::boundary::SampledBoundary;
use crate::error::{Result, ShapeError};
use crate::geometry::{Point, Vector};
use crate::sampling::{interpolate_cyclic, SamplePointSet};

/// Floor applied to the moment sum inside the logarithm of the full cost.
pub const LOG_FLOOR: f64 = 1e-30;

/// Sample points of one shape together with the curvature at each.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSamples {
    pub points: Vec<Point>,
    pub curvatures: Vec<f64>,
    /// Largest |curvature| over the dense boundary; the similarity frame
    /// divides curvatures by it.
    pub curvature_scale: f64,
    pub set: SamplePointSet,
}

impl ShapeSamples {
    /// Locates the samples on `b` and interpolates the boundary's discrete
    /// curvature at each sample's arc position.
    pub fn new(b: &SampledBoundary, set: SamplePointSet) -> Result<Self> {
        let profile = b.curvature_profile()?;
        let total = b.total_arc_length();
        let points = set.positions.iter().map(|&s| b.point_at(s)).collect();
        let curvatures = set
            .positions
            .iter()
            .map(|&s| interpolate_cyclic(b.cum_arc(), &profile.values, total, s))
            .collect();
        let curvature_scale = max_abs(&profile.values);
        Ok(Self {
            points,
            curvatures,
            curvature_scale,
            set,
        })
    }

    /// Samples given directly as points with their curvatures. Arc
    /// positions are the cumulative chord lengths of the closed polygon.
    pub fn from_parts(points: Vec<Point>, curvatures: Vec<f64>) -> Result<Self> {
        if points.len() != curvatures.len() {
            return Err(ShapeError::InvalidArgument(format!(
                "{} points but {} curvatures",
                points.len(),
                curvatures.len()
            )));
        }
        if points.len() < 3 {
            return Err(ShapeError::InvalidArgument(format!(
                "need at least 3 samples, got {}",
                points.len()
            )));
        }
        let mut positions = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        for k in 0..points.len() {
            positions.push(acc);
            acc += points[k].distance(points[(k + 1) % points.len()]);
        }
        let curvature_scale = max_abs(&curvatures);
        Ok(Self {
            points,
            curvatures,
            curvature_scale,
            set: SamplePointSet {
                positions,
                seed_arc: 0.0,
                total_length: acc,
                method: crate::sampling::SamplingMethod::Vertices,
                anchors: None,
            },
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Coordinate frame in which trees are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Frame {
    /// Vectors and curvatures as measured.
    Raw,
    /// Vectors rotated so the first one points along +x and divided by the
    /// longest; curvatures divided by the shape's largest |curvature|.
    #[default]
    Similarity,
}

impl FromStr for Frame {
    type Err = ShapeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Self::Raw),
            "similarity" => Ok(Self::Similarity),
            other => Err(ShapeError::InvalidArgument(format!("unknown frame `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompactShapeTree {
    pub root: Point,
    pub root_index: usize,
    /// `vectors[k - 1]` points from the root to the k-th sample after it.
    pub vectors: Vec<Vector>,
    /// Tip curvatures in vector order, then the root's curvature.
    pub curvatures: Vec<f64>,
}

impl CompactShapeTree {
    /// Number of samples (vectors + 1).
    pub fn len(&self) -> usize {
        self.curvatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curvatures.is_empty()
    }

    /// Applies `f` to every vector, leaving the root and curvatures alone.
    pub fn map_vectors(&self, f: impl Fn(Vector) -> Vector) -> Self {
        Self {
            vectors: self.vectors.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    /// Re-expresses the tree in the similarity frame.
    pub fn normalized(&self, curvature_scale: f64) -> Result<Self> {
        let first = self.vectors[0];
        let longest = self.vectors.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        if longest == 0.0 || first.norm() == 0.0 {
            return Err(ShapeError::Degenerate(
                "zero-length tree vector (duplicate samples)".into(),
            ));
        }
        let turn = -first.angle();
        let kscale = if curvature_scale > 0.0 { curvature_scale } else { 1.0 };
        Ok(Self {
            root: self.root,
            root_index: self.root_index,
            vectors: self
                .vectors
                .iter()
                .map(|&v| v.rotated(turn) * (1.0 / longest))
                .collect(),
            curvatures: self.curvatures.iter().map(|k| k / kscale).collect(),
        })
    }
}

/// Tree rooted at sample `root_index`, in raw coordinates.
pub fn build_tree(samples: &ShapeSamples, root_index: usize) -> Result<CompactShapeTree> {
    let n = samples.len();
    if n < 3 {
        return Err(ShapeError::InvalidArgument(format!(
            "a shape tree needs n >= 3 samples, got {n}"
        )));
    }
    if root_index >= n {
        return Err(ShapeError::InvalidArgument(format!(
            "root index {root_index} out of range for n = {n}"
        )));
    }
    let root = samples.points[root_index];
    let mut vectors = Vec::with_capacity(n - 1);
    let mut curvatures = Vec::with_capacity(n);
    for k in 1..n {
        let idx = (root_index + k) % n;
        vectors.push(samples.points[idx] - root);
        curvatures.push(samples.curvatures[idx]);
    }
    curvatures.push(samples.curvatures[root_index]);
    Ok(CompactShapeTree {
        root,
        root_index,
        vectors,
        curvatures,
    })
}

/// Tree rooted at `root_index`, expressed in `frame`.
pub fn build_tree_in(
    samples: &ShapeSamples,
    root_index: usize,
    frame: Frame,
) -> Result<CompactShapeTree> {
    let tree = build_tree(samples, root_index)?;
    match frame {
        Frame::Raw => Ok(tree),
        Frame::Similarity => tree.normalized(samples.curvature_scale),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Weights {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Self {
            w1: 1.0,
            w2: 1.0,
            w3: 1.0,
        }
    }
}

impl Weights {
    pub fn new(w1: f64, w2: f64, w3: f64) -> Result<Self> {
        for (name, w) in [("w1", w1), ("w2", w2), ("w3", w3)] {
            if !(w.is_finite() && w >= 0.0) {
                return Err(ShapeError::InvalidArgument(format!(
                    "weight {name} must be finite and non-negative, got {w}"
                )));
            }
        }
        Ok(Self { w1, w2, w3 })
    }
}

impl FromStr for Weights {
    type Err = ShapeError;
    /// Parses `w1,w2,w3`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(ShapeError::InvalidArgument(format!(
                "weights must be `w1,w2,w3`, got `{s}`"
            )));
        }
        let mut w = [0.0; 3];
        for (slot, p) in w.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| {
                ShapeError::InvalidArgument(format!("weight `{p}` is not a number"))
            })?;
        }
        Self::new(w[0], w[1], w[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostKind {
    /// Vector and curvature terms only.
    #[default]
    Tentative,
    /// Adds the log first-moment curvature term.
    Full,
}

impl fmt::Display for CostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Tentative => "tentative",
            Self::Full => "full",
        })
    }
}

impl FromStr for CostKind {
    type Err = ShapeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tentative" => Ok(Self::Tentative),
            "full" => Ok(Self::Full),
            other => Err(ShapeError::InvalidArgument(format!("unknown cost `{other}`"))),
        }
    }
}

fn check_sizes(tp: &CompactShapeTree, tq: &CompactShapeTree) -> Result<()> {
    if tp.len() != tq.len() || tp.vectors.len() != tq.vectors.len() {
        return Err(ShapeError::InvalidArgument(format!(
            "tree sizes differ: {} vs {}",
            tp.len(),
            tq.len()
        )));
    }
    Ok(())
}

/// `log(w3 * max(sum_k k * (d_k - c_k)^2, floor))` with `k` counted from 1.
pub fn log_moment_term(delta: &[f64], kappa: &[f64], w3: f64) -> Result<f64> {
    if delta.len() != kappa.len() {
        return Err(ShapeError::InvalidArgument(format!(
            "curvature sequences differ in length: {} vs {}",
            delta.len(),
            kappa.len()
        )));
    }
    if !(w3 > 0.0 && w3.is_finite()) {
        return Err(ShapeError::InvalidArgument(format!(
            "w3 must be positive for the log-moment term, got {w3}"
        )));
    }
    let moment: f64 = delta
        .iter()
        .zip(kappa)
        .enumerate()
        .map(|(k, (d, c))| (k + 1) as f64 * (d - c).powi(2))
        .sum();
    Ok((w3 * moment.max(LOG_FLOOR)).ln())
}

/// The three weighted cost terms. The third is 0 for the tentative cost.
pub fn cost_terms(
    tp: &CompactShapeTree,
    tq: &CompactShapeTree,
    w: Weights,
    kind: CostKind,
) -> Result<[f64; 3]> {
    check_sizes(tp, tq)?;
    let vec_sum: f64 = tp
        .vectors
        .iter()
        .zip(&tq.vectors)
        .map(|(&u, &v)| (u - v).norm_squared())
        .sum();
    let curv_sum: f64 = tp
        .curvatures
        .iter()
        .zip(&tq.curvatures)
        .map(|(d, k)| (d - k).powi(2))
        .sum();
    let t3 = match kind {
        CostKind::Tentative => 0.0,
        CostKind::Full => log_moment_term(&tp.curvatures, &tq.curvatures, w.w3)?,
    };
    Ok([w.w1 * vec_sum, w.w2 * curv_sum, t3])
}

/// Vector term plus curvature term.
pub fn tentative_cost(tp: &CompactShapeTree, tq: &CompactShapeTree, w: Weights) -> Result<f64> {
    let t = cost_terms(tp, tq, w, CostKind::Tentative)?;
    Ok(t[0] + t[1])
}

/// Tentative cost plus the log first-moment term (floored at [`LOG_FLOOR`]).
pub fn full_cost(tp: &CompactShapeTree, tq: &CompactShapeTree, w: Weights) -> Result<f64> {
    let t = cost_terms(tp, tq, w, CostKind::Full)?;
    Ok(t[0] + t[1] + t[2])
}

/// Work counters from one matching run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MatchStats {
    pub tree_builds: u64,
    pub cost_evaluations: u64,
    /// Individual vector and curvature differences evaluated.
    pub term_evaluations: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootMatch {
    pub root_q: usize,
    pub cost: f64,
    pub cost_terms: [f64; 3],
    pub stats: MatchStats,
}

/// Scans every root on `q` against `tp` and returns the cheapest; ties go
/// to the smallest index. Candidates are evaluated in parallel and reduced
/// deterministically.
pub fn best_match_root(
    tp: &CompactShapeTree,
    q: &ShapeSamples,
    w: Weights,
    kind: CostKind,
    frame: Frame,
) -> Result<RootMatch> {
    if tp.len() != q.len() {
        return Err(ShapeError::InvalidArgument(format!(
            "sample counts differ: {} vs {}",
            tp.len(),
            q.len()
        )));
    }
    let candidates: Vec<(usize, f64, [f64; 3], u64)> = (0..q.len())
        .into_par_iter()
        .map(|j| {
            let tq = build_tree_in(q, j, frame)?;
            let terms = cost_terms(tp, &tq, w, kind)?;
            let work = (tq.vectors.len() + tq.curvatures.len()) as u64;
            Ok((j, terms.iter().sum::<f64>(), terms, work))
        })
        .collect::<Result<_>>()?;

    let mut best = candidates[0];
    for &c in &candidates[1..] {
        if c.1 < best.1 {
            best = c;
        }
    }
    let n = candidates.len() as u64;
    Ok(RootMatch {
        root_q: best.0,
        cost: best.1,
        cost_terms: best.2,
        stats: MatchStats {
            tree_builds: n,
            cost_evaluations: n,
            term_evaluations: candidates.iter().map(|c| c.3).sum(),
        },
    })
}

/// Index pairs between two shapes with their matching cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrespondenceMap {
    pub pairs: Vec<(usize, usize)>,
    pub cost: f64,
    pub cost_terms: [f64; 3],
}

/// Pairs the roots, then the k-th tips of both trees.
pub fn retrieve_correspondences(
    tp: &CompactShapeTree,
    tq: &CompactShapeTree,
    w: Weights,
    kind: CostKind,
) -> Result<CorrespondenceMap> {
    let cost_terms = cost_terms(tp, tq, w, kind)?;
    let n = tp.len();
    let pairs = (0..n)
        .map(|k| ((tp.root_index + k) % n, (tq.root_index + k) % n))
        .collect();
    Ok(CorrespondenceMap {
        pairs,
        cost: cost_terms.iter().sum(),
        cost_terms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MatchConfig {
    pub weights: Weights,
    pub cost: CostKind,
    /// Root on the first shape; sample 0 (the seed) when unset.
    pub root: Option<usize>,
    pub frame: Frame,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub root_p: usize,
    pub root_q: usize,
    pub cost: f64,
    pub cost_terms: [f64; 3],
    pub pairs: Vec<[usize; 2]>,
    #[serde(skip)]
    pub stats: MatchStats,
}

/// Builds one tree on `p`, finds its best root on `q` and reads off the
/// correspondence.
pub fn match_shapes(p: &ShapeSamples, q: &ShapeSamples, cfg: &MatchConfig) -> Result<MatchReport> {
    if p.len() != q.len() {
        return Err(ShapeError::InvalidArgument(format!(
            "sample counts differ: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    let tp = build_tree_in(p, cfg.root.unwrap_or(0), cfg.frame)?;
    let best = best_match_root(&tp, q, cfg.weights, cfg.cost, cfg.frame)?;
    let tq = build_tree_in(q, best.root_q, cfg.frame)?;
    let map = retrieve_correspondences(&tp, &tq, cfg.weights, cfg.cost)?;
    let mut stats = best.stats;
    stats.tree_builds += 2;
    Ok(MatchReport {
        root_p: tp.root_index,
        root_q: best.root_q,
        cost: map.cost,
        cost_terms: map.cost_terms,
        pairs: map.pairs.iter().map(|&(i, j)| [i, j]).collect(),
        stats,
    })
}

/// Length and direction of the line from sample `i` to sample `j`, read
/// off the tree's vectors alone.
///
/// Returns `(length, angle)` with the angle in (-pi, pi].
pub fn forest_line(t: &CompactShapeTree, i: usize, j: usize) -> Result<(f64, f64)> {
    let n = t.len();
    if i == j || i >= n || j >= n {
        return Err(ShapeError::InvalidArgument(format!(
            "forest line needs distinct indices below {n}, got ({i}, {j})"
        )));
    }
    let tip = |idx: usize| t.vectors[(idx + n - t.root_index) % n - 1];
    let line = if i == t.root_index {
        tip(j)
    } else if j == t.root_index {
        -tip(i)
    } else {
        tip(j) - tip(i)
    };
    Ok((line.norm(), line.angle()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn square() -> ShapeSamples {
        ShapeSamples::from_parts(
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(1.0, 1.0),
                Point::new(0.0, 1.0),
            ],
            vec![0.1, 0.2, 0.3, 0.4],
        )
        .unwrap()
    }

    #[test]
    fn square_tree_vectors_and_curvature_order() {
        let t = build_tree(&square(), 0).unwrap();
        assert_eq!(
            t.vectors,
            vec![Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)]
        );
        assert_eq!(t.curvatures, vec![0.2, 0.3, 0.4, 0.1]);
        let t2 = build_tree(&square(), 2).unwrap();
        assert_eq!(t2.curvatures, vec![0.4, 0.1, 0.2, 0.3]);
        assert_eq!(t2.vectors[0], Point::new(-1.0, 0.0));
    }

    #[test]
    fn bad_roots_and_sizes_are_rejected() {
        assert!(build_tree(&square(), 4).is_err());
        assert!(ShapeSamples::from_parts(vec![Point::new(0.0, 0.0); 2], vec![0.0; 2]).is_err());
    }

    #[test]
    fn single_vector_difference_of_three_four() {
        let t = build_tree(&square(), 0).unwrap();
        let mut u = t.clone();
        u.vectors[1] = u.vectors[1] + Point::new(3.0, 4.0);
        let w = Weights::new(1.0, 0.0, 1.0).unwrap();
        assert_eq!(tentative_cost(&t, &u, w).unwrap(), 25.0);
        assert_eq!(tentative_cost(&t, &t, Weights::default()).unwrap(), 0.0);
    }

    #[test]
    fn identical_trees_hit_the_log_floor() {
        let t = build_tree(&square(), 1).unwrap();
        let terms = cost_terms(&t, &t, Weights::default(), CostKind::Full).unwrap();
        assert_eq!(terms, [0.0, 0.0, LOG_FLOOR.ln()]);
        let w = Weights::new(1.0, 1.0, 2.0).unwrap();
        assert_eq!(full_cost(&t, &t, w).unwrap(), (2.0 * LOG_FLOOR).ln());
        let zero = Weights::new(1.0, 1.0, 0.0).unwrap();
        assert!(full_cost(&t, &t, zero).is_err());
    }

    #[test]
    fn hand_moment_sequence() {
        assert_eq!(log_moment_term(&[1.0, 0.0], &[0.0, 0.0], 1.0).unwrap(), 0.0);
        assert!(log_moment_term(&[1.0], &[0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn weights_parse_and_validate() {
        assert_eq!("1, 2,3".parse::<Weights>().unwrap(), Weights::new(1.0, 2.0, 3.0).unwrap());
        assert!("1,2".parse::<Weights>().is_err());
        assert!("1,-2,3".parse::<Weights>().is_err());
        assert!("1,x,3".parse::<Weights>().is_err());
    }

    #[test]
    fn self_match_is_identity() {
        let s = square();
        let report = match_shapes(&s, &s, &MatchConfig::default()).unwrap();
        assert_eq!(report.root_q, 0);
        assert_eq!(report.cost, 0.0);
        assert_eq!(report.pairs, vec![[0, 0], [1, 1], [2, 2], [3, 3]]);
        assert_eq!(report.stats.cost_evaluations, 4);
        assert_eq!(report.stats.term_evaluations, 4 * 7);
    }

    #[test]
    fn correspondences_follow_both_roots() {
        let s = square();
        let tp = build_tree(&s, 3).unwrap();
        let tq = build_tree(&s, 1).unwrap();
        let m = retrieve_correspondences(&tp, &tq, Weights::default(), CostKind::Tentative).unwrap();
        assert_eq!(m.pairs, vec![(3, 1), (0, 2), (1, 3), (2, 0)]);
    }

    #[test]
    fn forest_lines_of_the_square() {
        let t = build_tree(&square(), 0).unwrap();
        let (l, a) = forest_line(&t, 1, 3).unwrap();
        assert!((l - 2f64.sqrt()).abs() < 1e-15);
        assert!((a - 3.0 * PI / 4.0).abs() < 1e-15);
        let (l, a) = forest_line(&t, 0, 2).unwrap();
        assert!((l - 2f64.sqrt()).abs() < 1e-15 && (a - PI / 4.0).abs() < 1e-15);
        let (_, a) = forest_line(&t, 1, 0).unwrap();
        assert_eq!(a, PI);
        assert!(forest_line(&t, 2, 2).is_err());
    }

    #[test]
    fn similarity_frame_removes_rotation_and_scale() {
        let s = square();
        let moved = ShapeSamples::from_parts(
            s.points
                .iter()
                .map(|p| p.rotated(1.1) * 3.0 + Point::new(5.0, -2.0))
                .collect(),
            s.curvatures.iter().map(|k| k / 3.0).collect(),
        )
        .unwrap();
        let a = build_tree_in(&s, 2, Frame::Similarity).unwrap();
        let b = build_tree_in(&moved, 2, Frame::Similarity).unwrap();
        assert!(tentative_cost(&a, &b, Weights::default()).unwrap() < 1e-24);
    }
}
