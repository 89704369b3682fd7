//! Derivatives of the 2D Laplace Green's function `G(x; q) = ln‖x − q‖ / 2π`
//! and the truncated far-field winding-number expansion built from them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Point2, Tensor2, Tensor22, Tensor222};
use crate::moments::MomentSet;

const INV_TWO_PI: f64 = 1.0 / (2.0 * PI);

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum TaylorError {
    #[error("expansion center and query are {distance} apart, below the singular cutoff {epsilon}")]
    SingularEvaluation { distance: f64, epsilon: f64 },
    #[error("moments must be centered before evaluating the expansion")]
    Uncentered,
    #[error("expansion order {0} is not one of 0, 1, 2")]
    InvalidOrder(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum ExpansionOrder {
    Zero,
    One,
    Two,
}

impl ExpansionOrder {
    pub const ALL: [ExpansionOrder; 3] = [ExpansionOrder::Zero, ExpansionOrder::One, ExpansionOrder::Two];

    pub fn value(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for ExpansionOrder {
    type Error = TaylorError;
    fn try_from(v: u8) -> Result<Self, TaylorError> {
        match v {
            0 => Ok(ExpansionOrder::Zero),
            1 => Ok(ExpansionOrder::One),
            2 => Ok(ExpansionOrder::Two),
            other => Err(TaylorError::InvalidOrder(other)),
        }
    }
}

impl From<ExpansionOrder> for u8 {
    fn from(o: ExpansionOrder) -> u8 {
        o.value()
    }
}

impl std::fmt::Display for ExpansionOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}

#[inline]
fn check(x0: Point2, q: Point2, epsilon: f64) -> Result<(Tensor2, f64), TaylorError> {
    let d = x0 - q;
    let r2 = d.norm_squared();
    let distance = r2.sqrt();
    if !(distance >= epsilon) || r2 == 0.0 {
        return Err(TaylorError::SingularEvaluation { distance, epsilon });
    }
    Ok((d.to_array(), r2))
}

#[inline]
fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

#[inline]
fn grad_kernel(d: Tensor2, r2: f64) -> Tensor2 {
    let s = INV_TWO_PI / r2;
    [d[0] * s, d[1] * s]
}

#[inline]
fn hessian_kernel(d: Tensor2, r2: f64) -> Tensor22 {
    let s = INV_TWO_PI / (r2 * r2);
    let mut h = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            h[i][j] = (delta(i, j) * r2 - 2.0 * d[i] * d[j]) * s;
        }
    }
    h
}

#[inline]
fn third_kernel(d: Tensor2, r2: f64) -> Tensor222 {
    let s = INV_TWO_PI / (r2 * r2 * r2);
    // The tensor is fully symmetric: an entry depends only on how many of its
    // indices are 1. Computing one value per count keeps symmetry bitwise exact.
    let (x, y) = (d[0], d[1]);
    let by_count = [
        (8.0 * x * x * x - 6.0 * x * r2) * s,
        (8.0 * x * x * y - 2.0 * y * r2) * s,
        (8.0 * x * y * y - 2.0 * x * r2) * s,
        (8.0 * y * y * y - 6.0 * y * r2) * s,
    ];
    let mut t = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                t[i][j][k] = by_count[i + j + k];
            }
        }
    }
    t
}

/// `∇ₓG` at `x0`: `(x0 − q) / (2π r²)`.
pub fn grad_g(x0: Point2, q: Point2, epsilon: f64) -> Result<Tensor2, TaylorError> {
    let (d, r2) = check(x0, q, epsilon)?;
    Ok(grad_kernel(d, r2))
}

/// Hessian of `G` at `x0`: `(δᵢⱼ r² − 2 dᵢ dⱼ) / (2π r⁴)`.
pub fn grad2_g(x0: Point2, q: Point2, epsilon: f64) -> Result<Tensor22, TaylorError> {
    let (d, r2) = check(x0, q, epsilon)?;
    Ok(hessian_kernel(d, r2))
}

/// Third derivative of `G` at `x0`:
/// `(8 dᵢ dⱼ dₖ − 2 r² (δᵢⱼ dₖ + δᵢₖ dⱼ + δⱼₖ dᵢ)) / (2π r⁶)`.
pub fn grad3_g(x0: Point2, q: Point2, epsilon: f64) -> Result<Tensor222, TaylorError> {
    let (d, r2) = check(x0, q, epsilon)?;
    Ok(third_kernel(d, r2))
}

/// Far-field winding number of a cluster with centered moments `m` at query `q`.
pub fn approx_winding(
    m: &MomentSet,
    q: Point2,
    order: ExpansionOrder,
    epsilon: f64,
) -> Result<f64, TaylorError> {
    let x0 = m.centered_about.ok_or(TaylorError::Uncentered)?;
    let (d, r2) = check(x0, q, epsilon)?;

    let g1 = grad_kernel(d, r2);
    let mut w = m.m0[0] * g1[0] + m.m0[1] * g1[1];
    if order == ExpansionOrder::Zero {
        return Ok(w);
    }

    let g2 = hessian_kernel(d, r2);
    for i in 0..2 {
        for j in 0..2 {
            w += m.m1[i][j] * g2[i][j];
        }
    }
    if order == ExpansionOrder::One {
        return Ok(w);
    }

    let g3 = third_kernel(d, r2);
    let mut third = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                third += m.m2[i][j][k] * g3[i][j][k];
            }
        }
    }
    Ok(w + 0.5 * third)
}
