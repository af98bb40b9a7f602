//! Rotation- and scale-normalized descriptors of a shape tree in the
//! spatial domain.

use crate::error::{Result, ShapeError};
use crate::geometry::wrap_angle;
use crate::shape_tree::CompactShapeTree;

#[derive(Debug, Clone, PartialEq)]
pub struct SpatialDescriptor {
    /// `wrap(alpha[k+1] - alpha[k])`, closing with `wrap(alpha[0] - alpha[last])`.
    pub angle_diffs: Vec<f64>,
    /// Vector lengths over the longest length.
    pub norm_moduli: Vec<f64>,
    /// Curvature at the root, then at each tip, divided by the largest
    /// |curvature| in the tree (all zero if the tree is flat).
    pub feature_values: Vec<f64>,
}

pub fn spatial_descriptor(t: &CompactShapeTree) -> Result<SpatialDescriptor> {
    let m = t.vectors.len();
    if m < 2 {
        return Err(ShapeError::InvalidArgument(format!(
            "spatial descriptor needs n >= 3 samples, got {}",
            m + 1
        )));
    }
    if let Some(k) = t.vectors.iter().position(|v| v.norm() == 0.0) {
        return Err(ShapeError::Degenerate(format!(
            "tree vector {} has zero length",
            k + 1
        )));
    }
    let angles: Vec<f64> = t.vectors.iter().map(|v| v.angle()).collect();
    let angle_diffs = (0..m)
        .map(|k| wrap_angle(angles[(k + 1) % m] - angles[k]))
        .collect();

    let moduli: Vec<f64> = t.vectors.iter().map(|v| v.norm()).collect();
    let longest = moduli.iter().copied().fold(0.0, f64::max);
    let norm_moduli = moduli.iter().map(|r| r / longest).collect();

    let mut features = Vec::with_capacity(t.curvatures.len());
    features.push(t.curvatures[m]);
    features.extend_from_slice(&t.curvatures[..m]);
    let kmax = features.iter().fold(0.0_f64, |a, k| a.max(k.abs()));
    if kmax > 0.0 {
        features.iter_mut().for_each(|k| *k /= kmax);
    }

    Ok(SpatialDescriptor {
        angle_diffs,
        norm_moduli,
        feature_values: features,
    })
}

/// Sum of squared (wrapped) angle-difference gaps plus squared modulus gaps.
pub fn spatial_distance(d1: &SpatialDescriptor, d2: &SpatialDescriptor) -> Result<f64> {
    if d1.angle_diffs.len() != d2.angle_diffs.len() || d1.norm_moduli.len() != d2.norm_moduli.len()
    {
        return Err(ShapeError::InvalidArgument(format!(
            "descriptor lengths differ: {} vs {}",
            d1.angle_diffs.len(),
            d2.angle_diffs.len()
        )));
    }
    let angle: f64 = d1
        .angle_diffs
        .iter()
        .zip(&d2.angle_diffs)
        .map(|(a, b)| wrap_angle(a - b).powi(2))
        .sum();
    let moduli: f64 = d1
        .norm_moduli
        .iter()
        .zip(&d2.norm_moduli)
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    Ok(angle + moduli)
}
