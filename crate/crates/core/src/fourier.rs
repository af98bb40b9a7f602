//! Aperiodic discrete Fourier transforms of a tree's vector angles and
//! moduli, and their frequency ratios.
//!
//! The transform of a finite sequence `x_1..x_m` at any real frequency is
//! `X(w) = sum_i x_i * exp(-j*w*i)`, with `i` counted from 1.
//!
//! For the angle signal the sequence is `exp(theta_i)`. Raw `atan2` angles
//! jump by 2π at the negative x-axis, so the angles are first unwrapped
//! (successive steps kept in (-π, π], first angle in (-π, π]) and then
//! shifted to zero mean. The shift only multiplies the spectrum by a
//! positive constant, which ratios cancel, and it keeps `exp` in range.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Result, ShapeError};
use crate::geometry::wrap_angle;
use crate::shape_tree::CompactShapeTree;

/// Denominators at or below this magnitude make a ratio unstable.
pub const RATIO_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    Angle,
    Modulus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub values: Vec<Complex64>,
    pub kind: SpectrumKind,
}

/// `sum_{i=1}^{m} x_i exp(-j w i)` at each frequency.
pub fn aperiodic_dft(signal: &[f64], omegas: &[f64]) -> Vec<Complex64> {
    omegas
        .iter()
        .map(|&w| {
            signal
                .iter()
                .enumerate()
                .map(|(i, &x)| x * Complex64::from_polar(1.0, -w * (i + 1) as f64))
                .sum()
        })
        .collect()
}

/// Transform of `exp(theta_i)` with the angles used as given.
pub fn exp_angle_transform(thetas: &[f64], omegas: &[f64]) -> Vec<Complex64> {
    let e: Vec<f64> = thetas.iter().map(|t| t.exp()).collect();
    aperiodic_dft(&e, omegas)
}

/// Vector angles with 2π jumps removed; the first lies in (-π, π].
pub fn unwrapped_angles(t: &CompactShapeTree) -> Result<Vec<f64>> {
    check_vectors(t)?;
    let mut out = Vec::with_capacity(t.vectors.len());
    let mut prev = t.vectors[0].angle();
    out.push(prev);
    for v in &t.vectors[1..] {
        prev += wrap_angle(v.angle() - prev);
        out.push(prev);
    }
    Ok(out)
}

fn check_vectors(t: &CompactShapeTree) -> Result<()> {
    if t.vectors.len() < 2 {
        return Err(ShapeError::InvalidArgument(format!(
            "spectra need n >= 3 samples, got {}",
            t.vectors.len() + 1
        )));
    }
    if let Some(k) = t.vectors.iter().position(|v| v.norm() == 0.0) {
        return Err(ShapeError::Degenerate(format!(
            "tree vector {} has zero length",
            k + 1
        )));
    }
    Ok(())
}

pub fn angle_spectrum(t: &CompactShapeTree, omegas: &[f64]) -> Result<Spectrum> {
    let mut theta = unwrapped_angles(t)?;
    let mean = theta.iter().sum::<f64>() / theta.len() as f64;
    theta.iter_mut().for_each(|x| *x -= mean);
    Ok(Spectrum {
        omegas: omegas.to_vec(),
        values: exp_angle_transform(&theta, omegas),
        kind: SpectrumKind::Angle,
    })
}

pub fn modulus_spectrum(t: &CompactShapeTree, omegas: &[f64]) -> Result<Spectrum> {
    check_vectors(t)?;
    let moduli: Vec<f64> = t.vectors.iter().map(|v| v.norm()).collect();
    Ok(Spectrum {
        omegas: omegas.to_vec(),
        values: aperiodic_dft(&moduli, omegas),
        kind: SpectrumKind::Modulus,
    })
}

/// Grid frequency `2πm / (n - 1)` for a tree of `n` samples.
pub fn grid_omega(n: usize, m: usize) -> f64 {
    TAU * m as f64 / (n - 1) as f64
}

/// `2πm / (n - 1)` for `m = 1..=(n - 1) / 2`.
pub fn default_omegas(n: usize) -> Vec<f64> {
    (1..=(n.saturating_sub(1)) / 2).map(|m| grid_omega(n, m)).collect()
}

fn lookup(s: &Spectrum, w: f64) -> Result<usize> {
    s.omegas
        .iter()
        .position(|&o| (o - w).abs() <= 1e-12 * w.abs().max(1.0))
        .ok_or(ShapeError::FrequencyNotSampled(w))
}

/// `X(w1) / X(w2)`, both frequencies taken from the spectrum's grid.
///
/// A denominator with magnitude at most [`RATIO_GUARD`] is rejected; the
/// error suggests the sampled frequency with the largest magnitude.
pub fn spectral_ratio(s: &Spectrum, w1: f64, w2: f64) -> Result<Complex64> {
    let i = lookup(s, w1)?;
    let j = lookup(s, w2)?;
    let den = s.values[j];
    if den.norm() <= RATIO_GUARD {
        let suggested = (0..s.values.len())
            .filter(|&k| k != j && s.values[k].norm() > RATIO_GUARD)
            .max_by(|&a, &b| s.values[a].norm().total_cmp(&s.values[b].norm()))
            .map(|k| s.omegas[k]);
        return Err(ShapeError::UnstableFrequencyPair {
            omega2: w2,
            suggested,
        });
    }
    if i == j {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(s.values[i] / den)
}

/// Whether an anchored first angle sits within `margin` of the ±π seam.
pub fn near_seam(theta1: f64, margin: f64) -> bool {
    PI - theta1.abs() <= margin
}
