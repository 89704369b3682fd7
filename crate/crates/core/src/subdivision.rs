use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::RationalBezierCurve;
use crate::shape::Shape2D;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubdivisionError {
    #[error("max_diag_fraction must lie in (0, 1], got {0}")]
    InvalidFraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubdivisionConfig {
    pub max_diag_fraction: f64,
    pub max_depth: u32,
}

impl Default for SubdivisionConfig {
    fn default() -> Self {
        Self {
            max_diag_fraction: 0.10,
            max_depth: 20,
        }
    }
}

impl SubdivisionConfig {
    pub fn new(max_diag_fraction: f64, max_depth: u32) -> Result<Self, SubdivisionError> {
        if !(max_diag_fraction > 0.0 && max_diag_fraction <= 1.0) {
            return Err(SubdivisionError::InvalidFraction(max_diag_fraction));
        }
        Ok(Self {
            max_diag_fraction,
            max_depth,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SubdividedShape {
    pub shape: Shape2D,
    /// `source_ids[i]` is the id of the input curve that output curve `i` came from.
    pub source_ids: Vec<usize>,
    /// Input curves that reached `max_depth` while still above the threshold.
    pub depth_cap_hits: usize,
    pub threshold: f64,
}

/// Bisects curves at `t = 0.5` until every control box diagonal is at most
/// `max_diag_fraction` of the input's global diagonal.
pub fn adaptive_subdivide(shape: &Shape2D, cfg: &SubdivisionConfig) -> SubdividedShape {
    let threshold = cfg.max_diag_fraction * shape.diagonal();
    let mut curves = Vec::with_capacity(shape.len());
    let mut source_ids = Vec::with_capacity(shape.len());
    let mut depth_cap_hits = 0;

    if threshold > 0.0 {
        for curve in &shape.curves {
            let before = curves.len();
            let capped = split(curve.clone(), threshold, cfg.max_depth, &mut curves);
            depth_cap_hits += usize::from(capped);
            source_ids.extend(std::iter::repeat_n(curve.id, curves.len() - before));
        }
    } else {
        curves = shape.curves.clone();
        source_ids = shape.curves.iter().map(|c| c.id).collect();
    }

    let mut out = Shape2D::new(curves, shape.source_name.clone());
    // the threshold is relative to the input box, which already contains every piece
    out.global_aabb = shape.global_aabb;
    SubdividedShape {
        shape: out,
        source_ids,
        depth_cap_hits,
        threshold,
    }
}

/// Depth-first, left before right, so pieces stay in path order.
fn split(curve: RationalBezierCurve, threshold: f64, max_depth: u32, out: &mut Vec<RationalBezierCurve>) -> bool {
    let mut capped = false;
    let mut stack = vec![(curve, 0u32)];
    while let Some((c, depth)) = stack.pop() {
        if c.aabb().diagonal() <= threshold {
            out.push(c);
        } else if depth >= max_depth {
            capped = true;
            out.push(c);
        } else {
            let (left, right) = c.subdivide(0.5);
            stack.push((right, depth + 1));
            stack.push((left, depth + 1));
        }
    }
    capped
}
