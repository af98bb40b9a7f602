//! Compact shape trees for 2-D shape correspondence.
//!
//! A shape boundary is sampled in a scale- and rotation-invariant way
//! ([`sampling`]), a tree of vectors is rooted at one sample
//! ([`shape_tree`]), and the best matching root on a second shape yields the
//! point correspondences in O(n²) time. Invariant descriptors live in
//! [`spatial`] and [`fourier`]; [`ellipse_lab`] holds the half-ellipse
//! curvature experiments.

pub mod boundary;
pub mod ellipse_lab;
pub mod error;
pub mod format;
pub mod fourier;
pub mod geometry;
pub mod quadrature;
pub mod raster;
pub mod sampling;
pub mod shape_tree;
pub mod spatial;
pub mod synth;

pub use boundary::{make_ellipse, parse_boundary, CurvatureProfile, SampledBoundary};
pub use error::{Result, ShapeError};
pub use geometry::{wrap_angle, Point, Similarity, Vector};
pub use raster::{trace_raster_boundary, BinaryRaster};
pub use sampling::{ExtremaSet, ExtremumKind, SamplePointSet, SamplingMethod};
pub use shape_tree::{
    build_tree, build_tree_in, match_shapes, CompactShapeTree, CostKind, Frame, MatchConfig,
    MatchReport, ShapeSamples, Weights,
};
