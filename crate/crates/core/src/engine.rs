//! Batched winding-number queries over a [`Bvh`].
//!
//! Each query walks the tree with an explicit stack: leaves are evaluated
//! exactly, far internal nodes use their Taylor expansion, and near internal
//! nodes push their children (left then right).

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bvh::{is_far, Bvh, NodeKind};
use crate::direct::{DirectConfig, SubdivisionCache};
use crate::geometry::{Point2, RationalBezierCurve};
use crate::taylor::{approx_winding, ExpansionOrder};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("beta must be positive, got {0}")]
    InvalidBeta(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundingRule {
    /// Nearest integer, halves rounded away from zero.
    #[default]
    HalfAwayFromZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryConfig {
    pub beta: f64,
    pub order: ExpansionOrder,
    pub direct: DirectConfig,
    pub containment_rule: RoundingRule,
}

impl Default for QueryConfig {
    fn default() -> Self {
        Self {
            beta: 2.0,
            order: ExpansionOrder::Two,
            direct: DirectConfig::default(),
            containment_rule: RoundingRule::HalfAwayFromZero,
        }
    }
}

impl QueryConfig {
    pub fn new(beta: f64, order: ExpansionOrder, direct: DirectConfig) -> Result<Self, EngineError> {
        let cfg = Self {
            beta,
            order,
            direct,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.beta > 0.0 {
            Ok(())
        } else {
            Err(EngineError::InvalidBeta(self.beta))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct QueryStats {
    pub leaves_visited: u32,
    pub approximations_used: u32,
    pub on_boundary: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FieldResult {
    pub values: Vec<f64>,
    pub stats: Vec<QueryStats>,
    pub preprocessing_seconds: f64,
    pub query_seconds: f64,
}

impl FieldResult {
    pub fn mean_leaves_visited(&self) -> f64 {
        mean(self.stats.iter().map(|s| s.leaves_visited as f64))
    }

    pub fn mean_approximations(&self) -> f64 {
        mean(self.stats.iter().map(|s| s.approximations_used as f64))
    }

    pub fn on_boundary_count(&self) -> usize {
        self.stats.iter().filter(|s| s.on_boundary).count()
    }
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    if n == 0 {
        0.0
    } else {
        values.sum::<f64>() / n as f64
    }
}

/// One term of a query's sum: an exactly evaluated curve or an approximated
/// cluster node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contribution {
    Direct { curve: u32, value: f64 },
    Approximated { node: u32, value: f64 },
}

/// The terms summed for one query, in summation order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Partition {
    pub parts: Vec<Contribution>,
}

impl Partition {
    pub fn total(&self) -> f64 {
        self.parts
            .iter()
            .map(|c| match *c {
                Contribution::Direct { value, .. } | Contribution::Approximated { value, .. } => value,
            })
            .sum()
    }

    pub fn direct_curves(&self) -> impl Iterator<Item = u32> + '_ {
        self.parts.iter().filter_map(|c| match *c {
            Contribution::Direct { curve, .. } => Some(curve),
            _ => None,
        })
    }

    pub fn approximated_nodes(&self) -> impl Iterator<Item = u32> + '_ {
        self.parts.iter().filter_map(|c| match *c {
            Contribution::Approximated { node, .. } => Some(node),
            _ => None,
        })
    }
}

fn traverse(
    bvh: &Bvh,
    q: Point2,
    cfg: &QueryConfig,
    cache: &mut Option<SubdivisionCache>,
    stack: &mut Vec<u32>,
    mut trace: Option<&mut Partition>,
) -> (f64, QueryStats) {
    let mut stats = QueryStats::default();
    let mut total = 0.0;
    stack.clear();
    stack.push(Bvh::ROOT);
    while let Some(index) = stack.pop() {
        let node = bvh.node(index);
        match node.kind {
            NodeKind::Leaf { curve } => {
                let c = &bvh.curves[curve as usize];
                let out = match cache {
                    Some(cache) => cache.winding(q, curve as usize, c, &cfg.direct),
                    None => crate::direct::curve_winding_flagged(q, c, &cfg.direct),
                };
                stats.leaves_visited += 1;
                stats.on_boundary |= out.on_boundary;
                total += out.value;
                if let Some(t) = trace.as_deref_mut() {
                    t.parts.push(Contribution::Direct { curve, value: out.value });
                }
            }
            NodeKind::Internal { children } => {
                if is_far(node, q, cfg.beta) {
                    if let Ok(w) = approx_winding(&node.moments, q, cfg.order, bvh.singular_epsilon) {
                        stats.approximations_used += 1;
                        total += w;
                        if let Some(t) = trace.as_deref_mut() {
                            t.parts.push(Contribution::Approximated { node: index, value: w });
                        }
                        continue;
                    }
                }
                // popped in push-reverse order: left subtree first
                stack.push(children[1]);
                stack.push(children[0]);
            }
        }
    }
    (total, stats)
}

fn new_cache(cfg: &QueryConfig, slots: usize) -> Option<SubdivisionCache> {
    cfg.direct.cache_enabled.then(|| SubdivisionCache::new(slots))
}

/// Single query, also returning the partition used.
pub fn evaluate_traced(bvh: &Bvh, q: Point2, cfg: &QueryConfig) -> (f64, QueryStats, Partition) {
    let mut partition = Partition::default();
    let mut cache = new_cache(cfg, bvh.curves.len());
    let (w, stats) = traverse(bvh, q, cfg, &mut cache, &mut Vec::new(), Some(&mut partition));
    (w, stats, partition)
}

/// Agglomerated winding numbers for all queries.
///
/// Runs on the current rayon pool; every worker owns its own subdivision
/// cache, and each value is independent of the worker count.
pub fn evaluate_batch(bvh: &Bvh, queries: &[Point2], cfg: &QueryConfig) -> Result<FieldResult, EngineError> {
    cfg.validate()?;
    let start = Instant::now();
    let slots = bvh.curves.len();
    let (values, stats): (Vec<f64>, Vec<QueryStats>) = queries
        .par_iter()
        .map_init(
            || (new_cache(cfg, slots), Vec::with_capacity(64)),
            |(cache, stack), &q| traverse(bvh, q, cfg, cache, stack, None),
        )
        .unzip();
    Ok(FieldResult {
        values,
        stats,
        preprocessing_seconds: bvh.timings.topology_seconds + bvh.timings.moments_seconds,
        query_seconds: if queries.is_empty() { 0.0 } else { start.elapsed().as_secs_f64() },
    })
}

/// Exact winding numbers summed over every curve, in curve order.
pub fn direct_field(curves: &[RationalBezierCurve], queries: &[Point2], cfg: &DirectConfig) -> FieldResult {
    let start = Instant::now();
    let (values, stats): (Vec<f64>, Vec<QueryStats>) = queries
        .par_iter()
        .map_init(
            || cfg.cache_enabled.then(|| SubdivisionCache::new(curves.len())),
            |cache, &q| {
                let mut stats = QueryStats::default();
                let mut total = 0.0;
                for (slot, c) in curves.iter().enumerate() {
                    let out = match cache {
                        Some(cache) => cache.winding(q, slot, c, cfg),
                        None => crate::direct::curve_winding_flagged(q, c, cfg),
                    };
                    total += out.value;
                    stats.on_boundary |= out.on_boundary;
                }
                stats.leaves_visited = curves.len() as u32;
                (total, stats)
            },
        )
        .unzip();
    FieldResult {
        values,
        stats,
        preprocessing_seconds: 0.0,
        query_seconds: if queries.is_empty() { 0.0 } else { start.elapsed().as_secs_f64() },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Containment {
    pub inside: bool,
    pub rounded: f64,
    /// Distance of the fractional part from one half, in `[0, 0.5]`.
    pub confidence: f64,
}

pub fn round_winding(w: f64, rule: RoundingRule) -> f64 {
    match rule {
        RoundingRule::HalfAwayFromZero => w.round(),
    }
}

pub fn fractional_part(w: f64) -> f64 {
    w - w.floor()
}

pub fn containment(w: f64, rule: RoundingRule) -> Containment {
    let rounded = round_winding(w, rule);
    Containment {
        inside: rounded != 0.0,
        rounded,
        confidence: (fractional_part(w) - 0.5).abs(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Misclassification {
    pub index: usize,
    pub point: Point2,
    pub truth: f64,
    pub approx: f64,
    pub fractional_part: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub linf: f64,
    /// Root mean square error.
    pub l2: f64,
    pub median: f64,
    pub misclassifications: Vec<Misclassification>,
    #[serde(skip)]
    pub abs_errors: Vec<f64>,
    #[serde(skip)]
    pub truth: FieldResult,
    #[serde(skip)]
    pub approx: FieldResult,
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Summary of `approx` against `truth` at the same points.
pub fn error_report(queries: &[Point2], truth: FieldResult, approx: FieldResult, rule: RoundingRule) -> ErrorReport {
    let abs_errors: Vec<f64> = truth
        .values
        .iter()
        .zip(&approx.values)
        .map(|(t, a)| (t - a).abs())
        .collect();
    let linf = abs_errors.iter().copied().fold(0.0, f64::max);
    let l2 = if abs_errors.is_empty() {
        0.0
    } else {
        (abs_errors.iter().map(|e| e * e).sum::<f64>() / abs_errors.len() as f64).sqrt()
    };
    let misclassifications = truth
        .values
        .iter()
        .zip(&approx.values)
        .enumerate()
        .filter(|(_, (t, a))| round_winding(**t, rule) != round_winding(**a, rule))
        .map(|(index, (&t, &a))| Misclassification {
            index,
            point: queries[index],
            truth: t,
            approx: a,
            fractional_part: fractional_part(t),
        })
        .collect();
    ErrorReport {
        linf,
        l2,
        median: median(&abs_errors),
        misclassifications,
        abs_errors,
        truth,
        approx,
    }
}

/// Agglomerated field of `bvh` against the all-curve direct field of `curves`.
pub fn compare_to_direct(
    bvh: &Bvh,
    curves: &[RationalBezierCurve],
    queries: &[Point2],
    cfg: &QueryConfig,
) -> Result<ErrorReport, EngineError> {
    let approx = evaluate_batch(bvh, queries, cfg)?;
    let truth = direct_field(curves, queries, &cfg.direct);
    Ok(error_report(queries, truth, approx, cfg.containment_rule))
}
