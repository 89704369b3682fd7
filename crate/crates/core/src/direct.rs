//! Exact winding number of a single curve at a query point.
//!
//! A curve is bisected only while the query lies inside its (padded) control
//! point box. Outside that box the query is also outside the control hull, so
//! the curve subtends exactly the same angle as its chord.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::geometry::{Aabb, Point2, RationalBezierCurve};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectConfig {
    pub max_depth: u32,
    pub edge_tolerance: f64,
    pub cache_enabled: bool,
}

impl Default for DirectConfig {
    fn default() -> Self {
        Self {
            max_depth: 30,
            edge_tolerance: 0.0,
            cache_enabled: true,
        }
    }
}

impl DirectConfig {
    /// Defaults with the edge tolerance scaled to a shape of the given diagonal.
    pub fn for_diagonal(diagonal: f64) -> Self {
        Self {
            edge_tolerance: 1e-10 * diagonal,
            ..Self::default()
        }
    }
}

/// Signed angle subtended by segment `a -> b` at `q`, in turns.
#[inline]
pub fn segment_winding(q: Point2, a: Point2, b: Point2) -> f64 {
    let u = a - q;
    let v = b - q;
    let cross = u.cross(v);
    let dot = u.dot(v);
    if cross == 0.0 && dot == 0.0 {
        // q at an endpoint, or a zero-length segment at q
        return 0.0;
    }
    cross.atan2(dot) / TAU
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DirectOutcome {
    pub value: f64,
    /// The query came within `edge_tolerance` of the curve, or recursion hit
    /// `max_depth`; `value` is a principal value.
    pub on_boundary: bool,
}

pub fn curve_winding(q: Point2, curve: &RationalBezierCurve, cfg: &DirectConfig) -> f64 {
    curve_winding_flagged(q, curve, cfg).value
}

pub fn curve_winding_flagged(
    q: Point2,
    curve: &RationalBezierCurve,
    cfg: &DirectConfig,
) -> DirectOutcome {
    let mut on_boundary = false;
    let value = recurse(q, curve, &curve.aabb(), 0, cfg, &mut on_boundary);
    DirectOutcome { value, on_boundary }
}

fn recurse(
    q: Point2,
    curve: &RationalBezierCurve,
    aabb: &Aabb,
    depth: u32,
    cfg: &DirectConfig,
    on_boundary: &mut bool,
) -> f64 {
    if !aabb.contains_padded(q, cfg.edge_tolerance) {
        return segment_winding(q, curve.first(), curve.last());
    }
    if depth >= cfg.max_depth || aabb.diagonal() <= cfg.edge_tolerance {
        *on_boundary = true;
        return segment_winding(q, curve.first(), curve.last());
    }
    let (left, right) = curve.subdivide(0.5);
    recurse(q, &left, &left.aabb(), depth + 1, cfg, on_boundary)
        + recurse(q, &right, &right.aabb(), depth + 1, cfg, on_boundary)
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct CacheNode {
    curve: RationalBezierCurve,
    aabb: Aabb,
    children: [u32; 2],
}

impl CacheNode {
    fn new(curve: RationalBezierCurve) -> Self {
        let aabb = curve.aabb();
        Self {
            curve,
            aabb,
            children: [NONE; 2],
        }
    }
}

/// Memoized bisection trees, one per curve slot, owned by a single worker.
///
/// A node is addressed by its curve slot and the binary path of halves taken
/// from the root; each stores the piece's control points and box. Results are
/// bitwise identical to the uncached recursion.
#[derive(Debug, Clone)]
pub struct SubdivisionCache {
    roots: Vec<u32>,
    nodes: Vec<CacheNode>,
    node_limit: usize,
}

impl SubdivisionCache {
    pub const DEFAULT_NODE_LIMIT: usize = 1 << 18;

    pub fn new(curve_slots: usize) -> Self {
        Self::with_limit(curve_slots, Self::DEFAULT_NODE_LIMIT)
    }

    pub fn with_limit(curve_slots: usize, node_limit: usize) -> Self {
        Self {
            roots: vec![NONE; curve_slots],
            nodes: Vec::new(),
            node_limit,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn clear(&mut self) {
        self.roots.iter_mut().for_each(|r| *r = NONE);
        self.nodes.clear();
    }

    /// Winding number of `curve`, which occupies `slot` for the cache's lifetime.
    pub fn winding(
        &mut self,
        q: Point2,
        slot: usize,
        curve: &RationalBezierCurve,
        cfg: &DirectConfig,
    ) -> DirectOutcome {
        // Fast path: most curves are far from the query.
        if !curve.aabb().contains_padded(q, cfg.edge_tolerance) {
            return DirectOutcome {
                value: segment_winding(q, curve.first(), curve.last()),
                on_boundary: false,
            };
        }
        if self.nodes.len() >= self.node_limit {
            self.clear();
        }
        if slot >= self.roots.len() {
            self.roots.resize(slot + 1, NONE);
        }
        if self.roots[slot] == NONE {
            self.roots[slot] = self.push(curve.clone());
        }
        let mut on_boundary = false;
        let value = self.recurse(q, self.roots[slot], 0, cfg, &mut on_boundary);
        DirectOutcome { value, on_boundary }
    }

    fn push(&mut self, curve: RationalBezierCurve) -> u32 {
        self.nodes.push(CacheNode::new(curve));
        (self.nodes.len() - 1) as u32
    }

    fn children(&mut self, node: u32) -> [u32; 2] {
        let existing = self.nodes[node as usize].children;
        if existing[0] != NONE {
            return existing;
        }
        let (left, right) = self.nodes[node as usize].curve.subdivide(0.5);
        let children = [self.push(left), self.push(right)];
        self.nodes[node as usize].children = children;
        children
    }

    fn recurse(
        &mut self,
        q: Point2,
        node: u32,
        depth: u32,
        cfg: &DirectConfig,
        on_boundary: &mut bool,
    ) -> f64 {
        let n = &self.nodes[node as usize];
        let chord = |q| segment_winding(q, n.curve.first(), n.curve.last());
        if !n.aabb.contains_padded(q, cfg.edge_tolerance) {
            return chord(q);
        }
        if depth >= cfg.max_depth || n.aabb.diagonal() <= cfg.edge_tolerance {
            *on_boundary = true;
            return chord(q);
        }
        let [left, right] = self.children(node);
        self.recurse(q, left, depth + 1, cfg, on_boundary)
            + self.recurse(q, right, depth + 1, cfg, on_boundary)
    }
}
