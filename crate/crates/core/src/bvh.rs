//! Binary bounding volume hierarchy carrying centered far-field moments.
//!
//! Nodes are stored in preorder with the root at index 0, so every child has
//! a larger index than its parent and a reverse sweep visits children first.

use std::cmp::Ordering;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Aabb, Point2, RationalBezierCurve};
use crate::moments::{curve_moments, MomentSet};
use crate::shape::Shape2D;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BvhError {
    #[error("cannot build a hierarchy over an empty shape")]
    EmptyShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Internal { children: [u32; 2] },
    Leaf { curve: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BvhNode {
    #[serde(rename = "box")]
    pub aabb: Aabb,
    pub centroid: Point2,
    pub radius: f64,
    pub moments: MomentSet,
    pub kind: NodeKind,
    pub depth: u32,
}

impl BvhNode {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { .. })
    }
}

/// Far-field test: strictly outside the sphere of radius `beta * radius`.
///
/// An infinite `beta` never reports far.
#[inline]
pub fn is_far(node: &BvhNode, q: Point2, beta: f64) -> bool {
    q.distance(node.centroid) > beta * node.radius
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct BuildTimings {
    pub topology_seconds: f64,
    pub moments_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct Bvh {
    pub nodes: Vec<BvhNode>,
    pub curves: Vec<RationalBezierCurve>,
    pub leaf_count: usize,
    pub max_depth_reached: u32,
    /// Distance below which a Taylor evaluation is refused.
    pub singular_epsilon: f64,
    pub timings: BuildTimings,
}

impl Bvh {
    pub const ROOT: u32 = 0;

    pub fn build(shape: &Shape2D) -> Result<Bvh, BvhError> {
        build(shape)
    }

    pub fn root(&self) -> &BvhNode {
        &self.nodes[Self::ROOT as usize]
    }

    pub fn node(&self, index: u32) -> &BvhNode {
        &self.nodes[index as usize]
    }

    /// Curve indices below `index`, in traversal order.
    pub fn leaves_under(&self, index: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut stack = vec![index];
        while let Some(i) = stack.pop() {
            match self.node(i).kind {
                NodeKind::Leaf { curve } => out.push(curve),
                NodeKind::Internal { children } => {
                    stack.push(children[1]);
                    stack.push(children[0]);
                }
            }
        }
        out
    }

    pub fn dump(&self) -> TreeDump {
        TreeDump {
            leaf_count: self.leaf_count,
            node_count: self.nodes.len(),
            max_depth_reached: self.max_depth_reached,
            nodes: self
                .nodes
                .iter()
                .map(|n| DumpNode {
                    min: n.aabb.min.to_array(),
                    max: n.aabb.max.to_array(),
                    centroid: n.centroid.to_array(),
                    radius: n.radius,
                    depth: n.depth,
                    children: match n.kind {
                        NodeKind::Internal { children } => Some(children),
                        NodeKind::Leaf { .. } => None,
                    },
                    curve: match n.kind {
                        NodeKind::Leaf { curve } => Some(self.curves[curve as usize].id),
                        NodeKind::Internal { .. } => None,
                    },
                })
                .collect(),
        }
    }
}

/// Serializable view of the tree for visualization and golden files.
#[derive(Debug, Clone, Serialize)]
pub struct TreeDump {
    pub leaf_count: usize,
    pub node_count: usize,
    pub max_depth_reached: u32,
    pub nodes: Vec<DumpNode>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DumpNode {
    pub min: [f64; 2],
    pub max: [f64; 2],
    pub centroid: [f64; 2],
    pub radius: f64,
    pub depth: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub children: Option<[u32; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<usize>,
}

struct Item {
    curve: u32,
    aabb: Aabb,
    key: Point2,
}

fn key_order(axis: usize) -> impl Fn(&Item, &Item) -> Ordering {
    move |a, b| {
        a.key
            .coord(axis)
            .total_cmp(&b.key.coord(axis))
            .then_with(|| a.key.coord(1 - axis).total_cmp(&b.key.coord(1 - axis)))
            .then_with(|| a.curve.cmp(&b.curve))
    }
}

pub fn build(shape: &Shape2D) -> Result<Bvh, BvhError> {
    if shape.is_empty() {
        return Err(BvhError::EmptyShape);
    }
    let start = Instant::now();
    let mut items: Vec<Item> = shape
        .curves
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let aabb = c.aabb();
            Item {
                curve: i as u32,
                aabb,
                key: aabb.center(),
            }
        })
        .collect();
    let mut nodes = Vec::with_capacity(2 * items.len() - 1);
    let mut max_depth = 0;
    build_range(&mut items, 0, &mut nodes, &mut max_depth);
    let topology_seconds = start.elapsed().as_secs_f64();

    let start = Instant::now();
    // uncentered sums, children before parents
    for i in (0..nodes.len()).rev() {
        let m = match nodes[i].kind {
            NodeKind::Leaf { curve } => curve_moments(&shape.curves[curve as usize]),
            NodeKind::Internal { children: [l, r] } => {
                let mut m = nodes[l as usize].moments;
                m.accumulate(&nodes[r as usize].moments);
                m
            }
        };
        nodes[i].moments = m;
    }
    // centering happens only after all sums are complete
    for node in &mut nodes {
        let centroid = node.moments.centroid().unwrap_or_else(|_| node.aabb.center());
        node.centroid = centroid;
        node.radius = 0.5 * node.aabb.diagonal();
        if !node.aabb.contains(centroid) {
            node.radius = node
                .aabb
                .corners()
                .iter()
                .map(|c| c.distance(centroid))
                .fold(0.0, f64::max);
        }
        node.moments = node.moments.center(centroid).expect("uncentered sums");
    }
    let moments_seconds = start.elapsed().as_secs_f64();

    Ok(Bvh {
        leaf_count: shape.len(),
        max_depth_reached: max_depth,
        singular_epsilon: 1e-12 * shape.diagonal(),
        curves: shape.curves.clone(),
        nodes,
        timings: BuildTimings {
            topology_seconds,
            moments_seconds,
        },
    })
}

/// Longest-axis median split over box centers. Returns the node index.
fn build_range(items: &mut [Item], depth: u32, nodes: &mut Vec<BvhNode>, max_depth: &mut u32) -> u32 {
    *max_depth = (*max_depth).max(depth);
    let aabb = items
        .iter()
        .map(|it| it.aabb)
        .reduce(|a, b| a.union(&b))
        .expect("non-empty range");
    let index = nodes.len() as u32;
    nodes.push(BvhNode {
        aabb,
        centroid: aabb.center(),
        radius: 0.0,
        moments: MomentSet::zero(),
        kind: NodeKind::Leaf { curve: items[0].curve },
        depth,
    });
    if items.len() == 1 {
        return index;
    }
    let axis = Aabb::from_points(items.iter().map(|it| it.key))
        .expect("non-empty")
        .longest_axis();
    let mid = items.len() / 2;
    items.select_nth_unstable_by(mid, key_order(axis));
    let (lo, hi) = items.split_at_mut(mid);
    let left = build_range(lo, depth + 1, nodes, max_depth);
    let right = build_range(hi, depth + 1, nodes, max_depth);
    nodes[index as usize].kind = NodeKind::Internal {
        children: [left, right],
    };
    index
}
