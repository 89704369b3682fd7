//! Moment tensors of boundary chords.
//!
//! Far from a curve its winding number equals that of the chord joining its
//! endpoints, so every curve is summarized by the exact moments of that chord.
//! With tangent `t = b - a` the (unnormalized) normal is `n = (t_y, -t_x)`,
//! which gives counter-clockwise loops a winding number of +1 inside.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Point2, RationalBezierCurve, Tensor2, Tensor22, Tensor222};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MomentError {
    #[error("cannot sum centered moment sets")]
    MixedCentering,
    #[error("moments are already centered about ({}, {})", .0.x, .0.y)]
    AlreadyCentered(Point2),
    #[error("moments are not centered")]
    NotCentered,
    #[error("cluster has zero total chord length")]
    ZeroMeasure,
}

/// Moments of orders 0 to 2 plus centroid bookkeeping.
///
/// * `m0 = ∫ n̂ dx`
/// * `m1[i][j] = ∫ (x - x0)_i n̂_j dx`
/// * `m2[i][j][k] = ∫ (x - x0)_i (x - x0)_j n̂_k dx`
///
/// where `x0` is `centered_about`, or the origin for uncentered sets.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct MomentSet {
    pub m0: Tensor2,
    pub m1: Tensor22,
    pub m2: Tensor222,
    pub centered_about: Option<Point2>,
    pub weight_length: f64,
    pub weighted_centroid: Tensor2,
}

impl MomentSet {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_centered(&self) -> bool {
        self.centered_about.is_some()
    }

    /// Componentwise sum, ignoring centering. Callers check compatibility.
    pub fn accumulate(&mut self, other: &MomentSet) {
        for k in 0..2 {
            self.m0[k] += other.m0[k];
            self.weighted_centroid[k] += other.weighted_centroid[k];
        }
        for i in 0..2 {
            for j in 0..2 {
                self.m1[i][j] += other.m1[i][j];
                for k in 0..2 {
                    self.m2[i][j][k] += other.m2[i][j][k];
                }
            }
        }
        self.weight_length += other.weight_length;
    }

    /// Moves the expansion center to `x0`.
    pub fn center(&self, x0: Point2) -> Result<MomentSet, MomentError> {
        if let Some(c) = self.centered_about {
            return Err(MomentError::AlreadyCentered(c));
        }
        Ok(self.shifted(x0.to_array(), Some(x0)))
    }

    /// Inverse of [`MomentSet::center`].
    pub fn uncenter(&self) -> Result<MomentSet, MomentError> {
        let c = self.centered_about.ok_or(MomentError::NotCentered)?;
        Ok(self.shifted([-c.x, -c.y], None))
    }

    fn shifted(&self, s: Tensor2, centered_about: Option<Point2>) -> MomentSet {
        let (m0, m1, m2) = (self.m0, self.m1, self.m2);
        let mut c1 = [[0.0; 2]; 2];
        let mut c2 = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c1[i][j] = m1[i][j] - s[i] * m0[j];
                for k in 0..2 {
                    // grouped so that swapping i and j is bitwise symmetric
                    let cross = s[i] * m1[j][k] + s[j] * m1[i][k];
                    c2[i][j][k] = m2[i][j][k] - cross + s[i] * s[j] * m0[k];
                }
            }
        }
        MomentSet {
            m0,
            m1: c1,
            m2: c2,
            centered_about,
            weight_length: self.weight_length,
            weighted_centroid: self.weighted_centroid,
        }
    }

    pub fn centroid(&self) -> Result<Point2, MomentError> {
        if self.weight_length > 0.0 {
            Ok(Point2::new(
                self.weighted_centroid[0] / self.weight_length,
                self.weighted_centroid[1] / self.weight_length,
            ))
        } else {
            Err(MomentError::ZeroMeasure)
        }
    }

    /// Rounds every moment entry to `digits` significant digits.
    pub fn truncated(&self, digits: u32) -> MomentSet {
        let round = |v: f64| {
            if v == 0.0 || !v.is_finite() {
                return v;
            }
            let mag = v.abs().log10().floor() as i32;
            let scale = 10f64.powi(digits as i32 - 1 - mag);
            (v * scale).round() / scale
        };
        let mut out = *self;
        for k in 0..2 {
            out.m0[k] = round(self.m0[k]);
        }
        for i in 0..2 {
            for j in 0..2 {
                out.m1[i][j] = round(self.m1[i][j]);
                for k in 0..2 {
                    out.m2[i][j][k] = round(self.m2[i][j][k]);
                }
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.m0.iter().all(|v| v.is_finite())
            && self.m1.iter().flatten().all(|v| v.is_finite())
            && self.m2.iter().flatten().flatten().all(|v| v.is_finite())
    }
}

/// Exact uncentered moments of the segment from `a` to `b`.
pub fn segment_moments(a: Point2, b: Point2) -> MomentSet {
    let d = b - a;
    let m0 = [d.y, -d.x];
    let mid = a.midpoint(b);
    let (av, dv) = (a.to_array(), d.to_array());

    let mut m1 = [[0.0; 2]; 2];
    let mut m2 = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m1[i][j] = mid.coord(i) * m0[j];
            // ∫₀¹ x_i(s) x_j(s) ds along x(s) = a + s d
            let xx = av[i] * av[j] + 0.5 * (av[i] * dv[j] + av[j] * dv[i]) + dv[i] * dv[j] / 3.0;
            for k in 0..2 {
                m2[i][j][k] = xx * m0[k];
            }
        }
    }
    let length = d.norm();
    MomentSet {
        m0,
        m1,
        m2,
        centered_about: None,
        weight_length: length,
        weighted_centroid: [length * mid.x, length * mid.y],
    }
}

/// Uncentered moments of the curve's chord.
pub fn curve_moments(curve: &RationalBezierCurve) -> MomentSet {
    segment_moments(curve.first(), curve.last())
}

pub fn sum_moments<'a, I>(parts: I) -> Result<MomentSet, MomentError>
where
    I: IntoIterator<Item = &'a MomentSet>,
{
    let mut total = MomentSet::zero();
    for part in parts {
        if part.is_centered() {
            return Err(MomentError::MixedCentering);
        }
        total.accumulate(part);
    }
    Ok(total)
}

pub fn center_moments(m: &MomentSet, x0: Point2) -> Result<MomentSet, MomentError> {
    m.center(x0)
}

pub fn centroid(m: &MomentSet) -> Result<Point2, MomentError> {
    m.centroid()
}
