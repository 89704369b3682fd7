//! Constructed and seeded random test geometry.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point2, RationalBezierCurve};
use crate::shape::Shape2D;

fn polar(center: Point2, r: f64, theta: f64) -> Point2 {
    Point2::new(center.x + r * theta.cos(), center.y + r * theta.sin())
}

/// Exact conic arc of the circle from `theta0` to `theta1`, split into pieces
/// of at most a quarter turn. Counter-clockwise when `theta1 > theta0`.
pub fn circle_arcs(
    center: Point2,
    r: f64,
    theta0: f64,
    theta1: f64,
    id_start: usize,
) -> Vec<RationalBezierCurve> {
    let sweep = theta1 - theta0;
    let pieces = ((sweep.abs() / FRAC_PI_2) - 1e-9).ceil().max(1.0) as usize;
    let step = sweep / pieces as f64;
    let w = (0.5 * step).cos();
    let ends: Vec<Point2> = (0..=pieces)
        .map(|k| polar(center, r, theta0 + step * k as f64))
        .collect();
    (0..pieces)
        .map(|k| {
            let mid = theta0 + step * (k as f64 + 0.5);
            let ctrl = polar(center, r / w, mid);
            RationalBezierCurve::new([ends[k], ctrl, ends[k + 1]], [1.0, w, 1.0], id_start + k)
                .expect("positive weights")
        })
        .collect()
}

/// Closed counter-clockwise circle made of four quarter arcs.
pub fn circle(center: Point2, r: f64, id_start: usize) -> Vec<RationalBezierCurve> {
    let mut arcs = circle_arcs(center, r, 0.0, TAU, id_start);
    close_loop(&mut arcs);
    arcs
}

/// Snaps each curve's start onto the previous curve's end, and the last end
/// onto the first start, so the loop is exactly watertight.
fn close_loop(curves: &mut [RationalBezierCurve]) {
    let n = curves.len();
    for k in 0..n {
        let target = curves[(k + n - 1) % n].last();
        let mut pts = curves[k].control_points().to_vec();
        pts[0] = target;
        curves[k] = RationalBezierCurve::new(pts, curves[k].weights().to_vec(), curves[k].id)
            .expect("unchanged weights");
    }
}

/// Closed cubic loop tracing `r (1 + amp cos(petals θ))`, counter-clockwise.
pub fn flower(
    center: Point2,
    r: f64,
    petals: usize,
    amp: f64,
    id_start: usize,
) -> Vec<RationalBezierCurve> {
    let n = (4 * petals).max(8);
    let h = TAU / n as f64;
    let radius = |t: f64| r * (1.0 + amp * (petals as f64 * t).cos());
    let d_radius = |t: f64| -r * amp * petals as f64 * (petals as f64 * t).sin();
    let point = |t: f64| polar(center, radius(t), t);
    let tangent = |t: f64| {
        let (s, c) = t.sin_cos();
        let (rr, dr) = (radius(t), d_radius(t));
        Point2::new(dr * c - rr * s, dr * s + rr * c)
    };
    let nodes: Vec<(Point2, Point2)> = (0..n).map(|k| {
        let t = k as f64 * h;
        (point(t), tangent(t))
    }).collect();
    (0..n)
        .map(|k| {
            let (p0, t0) = nodes[k];
            let (p1, t1) = nodes[(k + 1) % n];
            RationalBezierCurve::polynomial(
                [p0, p0 + t0 * (h / 3.0), p1 - t1 * (h / 3.0), p1],
                id_start + k,
            )
            .expect("four points")
        })
        .collect()
}

/// Closed regular polygon, counter-clockwise.
pub fn regular_polygon(
    center: Point2,
    r: f64,
    sides: usize,
    phase: f64,
    id_start: usize,
) -> Vec<RationalBezierCurve> {
    let pts: Vec<Point2> = (0..sides)
        .map(|k| polar(center, r, phase + TAU * k as f64 / sides as f64))
        .collect();
    polygon(&pts, id_start)
}

/// Closed polyline through `pts` in order.
pub fn polygon(pts: &[Point2], id_start: usize) -> Vec<RationalBezierCurve> {
    let n = pts.len();
    (0..n)
        .map(|k| RationalBezierCurve::line(pts[k], pts[(k + 1) % n], id_start + k))
        .collect()
}

pub fn reversed(curves: &[RationalBezierCurve]) -> Vec<RationalBezierCurve> {
    curves.iter().rev().map(|c| c.reversed()).collect()
}

/// `k` closed, nearly coincident regular polygons.
pub fn stacked_polygons(k: usize, sides: usize, seed: u64) -> Shape2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut curves = Vec::new();
    for _ in 0..k {
        let c = Point2::new(rng.random_range(-0.01..0.01), rng.random_range(-0.01..0.01));
        let r = 1.0 + rng.random_range(-0.01..0.01);
        let phase = rng.random_range(-0.01..0.01);
        curves.extend(regular_polygon(c, r, sides, phase, 0));
    }
    Shape2D::new(curves, format!("stacked-{k}x{sides}-gon"))
}

/// A random closed loop with one to three of its curves removed.
pub fn opened_loop(seed: u64) -> Shape2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let petals = rng.random_range(2..7);
    let amp = rng.random_range(0.1..0.4);
    let mut curves = flower(Point2::ORIGIN, 1.0, petals, amp, 0);
    if rng.random_bool(0.5) {
        let inner = rng.random_range(0.2..0.5);
        curves.extend(circle(Point2::new(rng.random_range(-0.2..0.2), 0.0), inner, 0));
    }
    let removals = rng.random_range(1..4);
    for _ in 0..removals {
        let idx = rng.random_range(0..curves.len());
        curves.remove(idx);
    }
    Shape2D::new(curves, format!("opened-{seed}"))
}

/// `n` short circular arcs with random centers in the unit square; arc size
/// shrinks like `1/sqrt(n)` so density stays comparable across `n`.
pub fn random_small_arcs(n: usize, seed: u64) -> Shape2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 0.5 / (n as f64).sqrt();
    let curves = (0..n)
        .map(|_| {
            let c = Point2::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
            let r = scale * rng.random_range(0.5..1.0);
            let start = rng.random_range(0.0..TAU);
            let sweep = rng.random_range(PI / 6.0..FRAC_PI_2);
            circle_arcs(c, r, start, start + sweep, 0).remove(0)
        })
        .collect();
    Shape2D::new(curves, format!("arcs-{n}"))
}

/// Closed rounded rectangle: straight edges joined by quarter-circle conics.
pub fn rounded_rectangle(half_w: f64, half_h: f64, corner: f64) -> Vec<RationalBezierCurve> {
    let (x, y) = (half_w - corner, half_h - corner);
    let line = |ax, ay, bx, by| RationalBezierCurve::line(Point2::new(ax, ay), Point2::new(bx, by), 0);
    let mut out = vec![line(-x, -half_h, x, -half_h)];
    out.extend(circle_arcs(Point2::new(x, -y), corner, -FRAC_PI_2, 0.0, 0));
    out.push(line(half_w, -y, half_w, y));
    out.extend(circle_arcs(Point2::new(x, y), corner, 0.0, FRAC_PI_2, 0));
    out.push(line(x, half_h, -x, half_h));
    out.extend(circle_arcs(Point2::new(-x, y), corner, FRAC_PI_2, PI, 0));
    out.push(line(-half_w, y, -half_w, -y));
    out.extend(circle_arcs(Point2::new(-x, -y), corner, PI, 1.5 * PI, 0));
    close_loop(&mut out);
    out
}

/// Two single-outline watertight shapes used for the accuracy experiments.
pub fn watertight_pair() -> Vec<Shape2D> {
    vec![
        Shape2D::new(flower(Point2::ORIGIN, 1.0, 5, 0.3, 0), "flower"),
        Shape2D::new(rounded_rectangle(1.0, 0.6, 0.3), "rounded-rectangle"),
    ]
}

/// Outer circle, a clockwise polygonal hole and a counter-clockwise island.
pub fn ring_with_island() -> Shape2D {
    let mut ring = circle(Point2::ORIGIN, 1.0, 0);
    ring.extend(reversed(&regular_polygon(Point2::new(0.1, 0.0), 0.5, 9, 0.2, 0)));
    ring.extend(circle(Point2::new(0.15, 0.05), 0.2, 0));
    Shape2D::new(ring, "ring-with-island")
}

/// Ten constructed shapes covering closed loops, open arcs and nesting.
pub fn constructed_shapes() -> Vec<Shape2D> {
    let o = Point2::ORIGIN;
    let mut out = Vec::new();
    out.push(Shape2D::new(circle(o, 1.0, 0), "circle"));
    out.push(Shape2D::new(regular_polygon(o, 1.0, 4, PI / 4.0, 0), "square"));
    out.push(Shape2D::new(flower(o, 1.0, 7, 0.3, 0), "flower"));

    let star: Vec<Point2> = (0..10)
        .map(|k| polar(o, if k % 2 == 0 { 1.0 } else { 0.4 }, TAU * k as f64 / 10.0))
        .collect();
    out.push(Shape2D::new(polygon(&star, 0), "star"));

    let mut nested = circle(o, 1.0, 0);
    nested.extend(circle(Point2::new(0.2, 0.1), 0.5, 0));
    out.push(Shape2D::new(nested, "nested-circles"));

    let mut annulus = circle(o, 1.0, 0);
    annulus.extend(reversed(&circle(o, 0.6, 0)));
    out.push(Shape2D::new(annulus, "annulus"));

    out.push(Shape2D::new(circle_arcs(o, 1.0, 0.0, PI, 0), "half-circle-arc"));

    let s_curve = vec![
        RationalBezierCurve::polynomial(
            [Point2::new(-1.0, 0.0), Point2::new(-0.5, 1.0), Point2::new(0.0, -1.0), Point2::new(0.5, 0.0)],
            0,
        )
        .expect("cubic"),
        RationalBezierCurve::polynomial(
            [Point2::new(0.5, 0.0), Point2::new(1.0, 0.8), Point2::new(1.2, -0.3)],
            1,
        )
        .expect("quadratic"),
    ];
    out.push(Shape2D::new(s_curve, "open-s-curve"));

    let mut overlap = circle(Point2::new(-0.3, 0.0), 0.8, 0);
    overlap.extend(circle(Point2::new(0.3, 0.0), 0.8, 0));
    out.push(Shape2D::new(overlap, "overlapping-circles"));

    // half disk: arc over the top, diameter back along the x axis
    let mut d_shape = circle_arcs(o, 1.0, 0.0, PI, 0);
    d_shape.push(RationalBezierCurve::line(Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0), 0));
    close_loop(&mut d_shape);
    out.push(Shape2D::new(d_shape, "half-disk"));
    out
}
