//! Points, boxes, small tensors and rational Bézier curves.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// Rank-1 tensor in the plane.
pub type Tensor2 = [f64; 2];
/// Rank-2 tensor, indexed `[i][j]`.
pub type Tensor22 = [[f64; 2]; 2];
/// Rank-3 tensor, indexed `[i][j][k]`.
pub type Tensor222 = [[[f64; 2]; 2]; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("a curve needs at least two control points, got {0}")]
    TooFewControlPoints(usize),
    #[error("{points} control points but {weights} weights")]
    WeightCountMismatch { points: usize, weights: usize },
    #[error("weight {index} is {value}, weights must be finite and positive")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("control point {0} is not finite")]
    NonFinitePoint(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        Point2::new(self.x + t * (other.x - self.x), self.y + t * (other.y - self.y))
    }

    #[inline]
    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn to_array(self) -> Tensor2 {
        [self.x, self.y]
    }

    #[inline]
    pub fn coord(self, axis: usize) -> f64 {
        if axis == 0 {
            self.x
        } else {
            self.y
        }
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

/// Axis-aligned bounding box. `min <= max` componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Point2,
    pub max: Point2,
}

impl Aabb {
    pub fn new(min: Point2, max: Point2) -> Self {
        debug_assert!(min.x <= max.x && min.y <= max.y);
        Self { min, max }
    }

    pub fn from_point(p: Point2) -> Self {
        Self { min: p, max: p }
    }

    /// Box around a non-empty point set; `None` for an empty iterator.
    pub fn from_points<I: IntoIterator<Item = Point2>>(points: I) -> Option<Self> {
        let mut iter = points.into_iter();
        let first = iter.next()?;
        let mut aabb = Aabb::from_point(first);
        for p in iter {
            aabb.include(p);
        }
        Some(aabb)
    }

    #[inline]
    pub fn include(&mut self, p: Point2) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: Point2::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point2::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }

    /// Closed containment test.
    #[inline]
    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Closed containment test against the box grown by `pad` on every side.
    #[inline]
    pub fn contains_padded(&self, p: Point2, pad: f64) -> bool {
        p.x >= self.min.x - pad
            && p.x <= self.max.x + pad
            && p.y >= self.min.y - pad
            && p.y <= self.max.y + pad
    }

    pub fn contains_box(&self, other: &Aabb) -> bool {
        self.contains(other.min) && self.contains(other.max)
    }

    pub fn expanded(&self, pad: f64) -> Aabb {
        Aabb {
            min: Point2::new(self.min.x - pad, self.min.y - pad),
            max: Point2::new(self.max.x + pad, self.max.y + pad),
        }
    }

    /// Scale about the center by `factor`.
    pub fn scaled(&self, factor: f64) -> Aabb {
        let c = self.center();
        let hw = 0.5 * self.width() * factor;
        let hh = 0.5 * self.height() * factor;
        Aabb {
            min: Point2::new(c.x - hw, c.y - hh),
            max: Point2::new(c.x + hw, c.y + hh),
        }
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    #[inline]
    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    #[inline]
    pub fn diagonal(&self) -> f64 {
        (self.max - self.min).norm()
    }

    #[inline]
    pub fn center(&self) -> Point2 {
        self.min.midpoint(self.max)
    }

    /// 0 for x, 1 for y.
    pub fn longest_axis(&self) -> usize {
        if self.height() > self.width() {
            1
        } else {
            0
        }
    }

    pub fn corners(&self) -> [Point2; 4] {
        [
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ]
    }
}

/// Homogeneous control point `(w x, w y, w)`.
#[derive(Debug, Clone, Copy)]
struct Homogeneous {
    wx: f64,
    wy: f64,
    w: f64,
}

impl Homogeneous {
    #[inline]
    fn lift(p: Point2, w: f64) -> Self {
        Self { wx: w * p.x, wy: w * p.y, w }
    }

    #[inline]
    fn lerp(self, other: Homogeneous, t: f64) -> Homogeneous {
        Homogeneous {
            wx: self.wx + t * (other.wx - self.wx),
            wy: self.wy + t * (other.wy - self.wy),
            w: self.w + t * (other.w - self.w),
        }
    }

    #[inline]
    fn project(self) -> Point2 {
        Point2::new(self.wx / self.w, self.wy / self.w)
    }
}

/// Control points stored inline up to cubic degree.
pub type ControlPoints = SmallVec<[Point2; 4]>;
pub type Weights = SmallVec<[f64; 4]>;

/// A rational Bézier curve with positive, unnormalized weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalBezierCurve {
    control_points: ControlPoints,
    weights: Weights,
    pub id: usize,
}

impl RationalBezierCurve {
    pub fn new(
        control_points: impl IntoIterator<Item = Point2>,
        weights: impl IntoIterator<Item = f64>,
        id: usize,
    ) -> Result<Self, GeometryError> {
        let control_points: ControlPoints = control_points.into_iter().collect();
        let weights: Weights = weights.into_iter().collect();
        if control_points.len() < 2 {
            return Err(GeometryError::TooFewControlPoints(control_points.len()));
        }
        if weights.len() != control_points.len() {
            return Err(GeometryError::WeightCountMismatch {
                points: control_points.len(),
                weights: weights.len(),
            });
        }
        if let Some(i) = control_points.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinitePoint(i));
        }
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(GeometryError::NonPositiveWeight { index, value });
        }
        Ok(Self {
            control_points,
            weights,
            id,
        })
    }

    /// Polynomial (unit-weight) Bézier curve.
    pub fn polynomial(
        control_points: impl IntoIterator<Item = Point2>,
        id: usize,
    ) -> Result<Self, GeometryError> {
        let control_points: ControlPoints = control_points.into_iter().collect();
        let n = control_points.len();
        Self::new(control_points, std::iter::repeat_n(1.0, n), id)
    }

    pub fn line(a: Point2, b: Point2, id: usize) -> Self {
        Self {
            control_points: smallvec::smallvec![a, b],
            weights: smallvec::smallvec![1.0, 1.0],
            id,
        }
    }

    pub fn control_points(&self) -> &[Point2] {
        &self.control_points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn degree(&self) -> usize {
        self.control_points.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        let w0 = self.weights[0];
        self.weights.iter().any(|&w| w != w0)
    }

    #[inline]
    pub fn first(&self) -> Point2 {
        self.control_points[0]
    }

    #[inline]
    pub fn last(&self) -> Point2 {
        self.control_points[self.control_points.len() - 1]
    }

    pub fn with_id(mut self, id: usize) -> Self {
        self.id = id;
        self
    }

    /// Same point set traced in the opposite direction.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.control_points.reverse();
        out.weights.reverse();
        out
    }

    /// Applies a point map to every control point. Exact for affine maps.
    pub fn map_points(&self, f: impl Fn(Point2) -> Point2) -> Self {
        Self {
            control_points: self.control_points.iter().map(|&p| f(p)).collect(),
            weights: self.weights.clone(),
            id: self.id,
        }
    }

    /// All control points coincide.
    pub fn is_degenerate(&self) -> bool {
        let p0 = self.control_points[0];
        self.control_points.iter().all(|&p| p == p0)
    }

    fn lifted(&self) -> SmallVec<[Homogeneous; 4]> {
        self.control_points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| Homogeneous::lift(p, w))
            .collect()
    }

    /// Rational de Casteljau evaluation, `t` in `[0, 1]`.
    pub fn evaluate(&self, t: f64) -> Point2 {
        if t <= 0.0 {
            return self.first();
        }
        if t >= 1.0 {
            return self.last();
        }
        let mut pts = self.lifted();
        let n = pts.len();
        for level in 1..n {
            for i in 0..n - level {
                pts[i] = pts[i].lerp(pts[i + 1], t);
            }
        }
        pts[0].project()
    }

    /// Splits at `t` in `(0, 1)`. The left piece ends exactly where the right begins.
    pub fn subdivide(&self, t: f64) -> (Self, Self) {
        let mut pts = self.lifted();
        let n = pts.len();
        let mut left: SmallVec<[Homogeneous; 4]> = SmallVec::with_capacity(n);
        let mut right: SmallVec<[Homogeneous; 4]> = SmallVec::with_capacity(n);
        left.push(pts[0]);
        right.push(pts[n - 1]);
        for level in 1..n {
            for i in 0..n - level {
                pts[i] = pts[i].lerp(pts[i + 1], t);
            }
            left.push(pts[0]);
            right.push(pts[n - 1 - level]);
        }
        right.reverse();

        let split = left[n - 1].project();
        let build = |h: &[Homogeneous], first: Point2, last: Point2| {
            let mut control_points: ControlPoints = h.iter().map(|p| p.project()).collect();
            let weights: Weights = h.iter().map(|p| p.w).collect();
            control_points[0] = first;
            control_points[n - 1] = last;
            Self {
                control_points,
                weights,
                id: self.id,
            }
        };
        (
            build(&left, self.first(), split),
            build(&right, split, self.last()),
        )
    }

    /// Control-point box; contains the curve since all weights are positive.
    pub fn aabb(&self) -> Aabb {
        let mut aabb = Aabb::from_point(self.control_points[0]);
        for &p in &self.control_points[1..] {
            aabb.include(p);
        }
        aabb
    }

    /// `n + 1` uniformly spaced parameter samples, endpoints included.
    pub fn sample(&self, n: usize) -> Vec<Point2> {
        (0..=n).map(|i| self.evaluate(i as f64 / n as f64)).collect()
    }
}
