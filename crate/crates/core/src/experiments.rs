//! Parameter sweeps comparing the agglomerated field with direct evaluation.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::bvh::{Bvh, BvhError};
use crate::direct::DirectConfig;
use crate::engine::{direct_field, error_report, evaluate_batch, EngineError, ErrorReport, FieldResult, QueryConfig};
use crate::geometry::Point2;
use crate::shape::Shape2D;
use crate::subdivision::{adaptive_subdivide, SubdividedShape, SubdivisionConfig};
use crate::svg::grid_points;
use crate::synth;
use crate::taylor::ExpansionOrder;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error(transparent)]
    Bvh(#[from] BvhError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentName {
    OrderSweep,
    BetaSweep,
    SubdivSweep,
    Overlap,
    Disagreement,
    Scaling,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 6] = [
        ExperimentName::OrderSweep,
        ExperimentName::BetaSweep,
        ExperimentName::SubdivSweep,
        ExperimentName::Overlap,
        ExperimentName::Disagreement,
        ExperimentName::Scaling,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentName::OrderSweep => "order-sweep",
            ExperimentName::BetaSweep => "beta-sweep",
            ExperimentName::SubdivSweep => "subdiv-sweep",
            ExperimentName::Overlap => "overlap",
            ExperimentName::Disagreement => "disagreement",
            ExperimentName::Scaling => "scaling",
        }
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentName {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| ExperimentError::UnknownExperiment(s.to_string()))
    }
}

/// A shape ready for agglomerated queries.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub original: Shape2D,
    pub subdivided: SubdividedShape,
    pub bvh: Bvh,
    pub subdivide_seconds: f64,
}

impl Prepared {
    pub fn new(shape: &Shape2D, sub: &SubdivisionConfig) -> Result<Self, BvhError> {
        let start = Instant::now();
        let subdivided = adaptive_subdivide(shape, sub);
        let subdivide_seconds = start.elapsed().as_secs_f64();
        let bvh = Bvh::build(&subdivided.shape)?;
        Ok(Self {
            original: shape.clone(),
            subdivided,
            bvh,
            subdivide_seconds,
        })
    }

    pub fn direct_config(&self) -> DirectConfig {
        DirectConfig::for_diagonal(self.original.diagonal())
    }

    pub fn query_config(&self, beta: f64, order: ExpansionOrder) -> Result<QueryConfig, EngineError> {
        QueryConfig::new(beta, order, self.direct_config())
    }

    /// Cell-centered grid over the shape box enlarged by 20%.
    pub fn grid(&self, nx: usize, ny: usize) -> Vec<Point2> {
        grid_points(&self.original.global_aabb.scaled(1.2), nx, ny)
    }

    pub fn truth(&self, queries: &[Point2]) -> FieldResult {
        direct_field(&self.original.curves, queries, &self.direct_config())
    }

    /// Agglomerated field; the reported query time is the fastest of `repeats` runs.
    pub fn agglomerated(&self, queries: &[Point2], cfg: &QueryConfig, repeats: usize) -> Result<FieldResult, EngineError> {
        let mut best = evaluate_batch(&self.bvh, queries, cfg)?;
        for _ in 1..repeats {
            let again = evaluate_batch(&self.bvh, queries, cfg)?;
            best.query_seconds = best.query_seconds.min(again.query_seconds);
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub grid: (usize, usize),
    pub subdivision: SubdivisionConfig,
    /// Timed runs per configuration; the minimum is reported.
    pub repeats: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            grid: (500, 500),
            subdivision: SubdivisionConfig::default(),
            repeats: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub shape: String,
    pub beta: f64,
    pub order: u8,
    pub linf: f64,
    pub l2: f64,
    pub median: f64,
    pub misclassified: usize,
    pub query_seconds: f64,
    pub mean_leaves_visited: f64,
    pub mean_approximations: f64,
}

fn sweep_row(shape: &str, cfg: &QueryConfig, report: &ErrorReport) -> SweepRow {
    SweepRow {
        shape: shape.to_string(),
        beta: cfg.beta,
        order: cfg.order.value(),
        linf: report.linf,
        l2: report.l2,
        median: report.median,
        misclassified: report.misclassifications.len(),
        query_seconds: report.approx.query_seconds,
        mean_leaves_visited: report.approx.mean_leaves_visited(),
        mean_approximations: report.approx.mean_approximations(),
    }
}

/// Error and runtime for every combination of `betas` and `orders`.
pub fn sweep(
    shapes: &[Shape2D],
    betas: &[f64],
    orders: &[ExpansionOrder],
    cfg: &ExperimentConfig,
) -> Result<Vec<SweepRow>, ExperimentError> {
    let mut rows = Vec::new();
    for shape in shapes {
        let prep = Prepared::new(shape, &cfg.subdivision)?;
        let grid = prep.grid(cfg.grid.0, cfg.grid.1);
        let truth = prep.truth(&grid);
        for &beta in betas {
            for &order in orders {
                let qc = prep.query_config(beta, order)?;
                let approx = prep.agglomerated(&grid, &qc, cfg.repeats)?;
                let report = error_report(&grid, truth.clone(), approx, qc.containment_rule);
                rows.push(sweep_row(&shape.source_name, &qc, &report));
            }
        }
    }
    Ok(rows)
}

/// The accuracy pair plus a nested, mixed-orientation shape.
pub fn order_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>, ExperimentError> {
    let mut shapes = synth::watertight_pair();
    shapes.push(synth::ring_with_island());
    sweep(&shapes, &[2.0], &ExpansionOrder::ALL, cfg)
}

pub fn beta_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>, ExperimentError> {
    sweep(&synth::watertight_pair(), &[1.0, 2.0, 4.0, 8.0], &ExpansionOrder::ALL, cfg)
}

#[derive(Debug, Clone, Serialize)]
pub struct SubdivRow {
    pub shape: String,
    pub fraction: f64,
    pub curves: usize,
    pub depth_cap_hits: usize,
    pub linf: f64,
    pub l2: f64,
    pub mean_leaves_visited: f64,
    pub subdivide_seconds: f64,
    pub build_seconds: f64,
    pub query_seconds: f64,
}

pub const SUBDIV_FRACTIONS: [f64; 6] = [0.025, 0.05, 0.1, 0.2, 0.4, 1.0];

pub fn subdiv_sweep(cfg: &ExperimentConfig) -> Result<Vec<SubdivRow>, ExperimentError> {
    let mut rows = Vec::new();
    for shape in synth::watertight_pair() {
        let mut truth: Option<(Vec<Point2>, FieldResult)> = None;
        for fraction in SUBDIV_FRACTIONS {
            let sub = SubdivisionConfig {
                max_diag_fraction: fraction,
                ..cfg.subdivision
            };
            let prep = Prepared::new(&shape, &sub)?;
            let (grid, t) = truth.get_or_insert_with(|| {
                let g = prep.grid(cfg.grid.0, cfg.grid.1);
                let t = prep.truth(&g);
                (g, t)
            });
            let qc = prep.query_config(2.0, ExpansionOrder::Two)?;
            let approx = prep.agglomerated(grid, &qc, cfg.repeats)?;
            let report = error_report(grid, t.clone(), approx, qc.containment_rule);
            rows.push(SubdivRow {
                shape: shape.source_name.clone(),
                fraction,
                curves: prep.subdivided.shape.len(),
                depth_cap_hits: prep.subdivided.depth_cap_hits,
                linf: report.linf,
                l2: report.l2,
                mean_leaves_visited: report.approx.mean_leaves_visited(),
                subdivide_seconds: prep.subdivide_seconds,
                build_seconds: prep.bvh.timings.topology_seconds + prep.bvh.timings.moments_seconds,
                query_seconds: report.approx.query_seconds,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct OverlapRow {
    pub k: usize,
    pub curves: usize,
    pub linf_abs: f64,
    /// `linf_abs / max |truth|`.
    pub linf_rel: f64,
    /// Largest `|err| / |truth|` over points with `|truth| >= 0.5`.
    pub linf_rel_pointwise: f64,
    pub l2: f64,
    pub max_truth: f64,
    pub misclassified: usize,
}

pub const OVERLAP_COUNTS: [usize; 5] = [1, 2, 4, 8, 16];

/// Stacks of `k` nearly coincident 15-gons at β = 2, order 0.
pub fn overlap(cfg: &ExperimentConfig) -> Result<Vec<OverlapRow>, ExperimentError> {
    let mut rows = Vec::new();
    for k in OVERLAP_COUNTS {
        let shape = synth::stacked_polygons(k, 15, cfg.seed);
        let prep = Prepared::new(&shape, &cfg.subdivision)?;
        let grid = prep.grid(cfg.grid.0, cfg.grid.1);
        let qc = prep.query_config(2.0, ExpansionOrder::Zero)?;
        let truth = prep.truth(&grid);
        let approx = prep.agglomerated(&grid, &qc, 1)?;
        let report = error_report(&grid, truth, approx, qc.containment_rule);
        let max_abs_truth = report.truth.values.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        let linf_rel_pointwise = report
            .truth
            .values
            .iter()
            .zip(&report.abs_errors)
            .filter(|(t, _)| t.abs() >= 0.5)
            .map(|(t, e)| e / t.abs())
            .fold(0.0, f64::max);
        rows.push(OverlapRow {
            k,
            curves: shape.len(),
            linf_abs: report.linf,
            linf_rel: report.linf / max_abs_truth,
            linf_rel_pointwise,
            l2: report.l2,
            max_truth: report.truth.values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            misclassified: report.misclassifications.len(),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct DisagreementRow {
    pub shape: String,
    pub x: f64,
    pub y: f64,
    pub truth: f64,
    pub approx: f64,
    pub fractional_part: f64,
    pub confidence: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DisagreementResult {
    pub shapes: usize,
    pub points: usize,
    pub rows: Vec<DisagreementRow>,
}

pub const DISAGREEMENT_SHAPES: usize = 20;

/// Rounding disagreements on randomly opened loops at β = 4, order 2.
pub fn disagreement(cfg: &ExperimentConfig) -> Result<DisagreementResult, ExperimentError> {
    let mut rows = Vec::new();
    let mut points = 0;
    for i in 0..DISAGREEMENT_SHAPES as u64 {
        let shape = synth::opened_loop(cfg.seed.wrapping_mul(1000).wrapping_add(i));
        let prep = Prepared::new(&shape, &cfg.subdivision)?;
        let grid = prep.grid(cfg.grid.0, cfg.grid.1);
        points += grid.len();
        let qc = prep.query_config(4.0, ExpansionOrder::Two)?;
        let truth = prep.truth(&grid);
        let approx = prep.agglomerated(&grid, &qc, 1)?;
        let report = error_report(&grid, truth, approx, qc.containment_rule);
        rows.extend(report.misclassifications.iter().map(|m| DisagreementRow {
            shape: shape.source_name.clone(),
            x: m.point.x,
            y: m.point.y,
            truth: m.truth,
            approx: m.approx,
            fractional_part: m.fractional_part,
            confidence: (m.fractional_part - 0.5).abs(),
        }));
    }
    Ok(DisagreementResult {
        shapes: DISAGREEMENT_SHAPES,
        points,
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub curves_after_subdivision: usize,
    pub preprocessing_seconds: f64,
    pub direct_seconds: f64,
    pub agglomerated_seconds: f64,
    pub speedup: f64,
    pub mean_leaves_visited: f64,
    pub linf: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingResult {
    pub rows: Vec<ScalingRow>,
    pub direct_slope: f64,
    pub agglomerated_slope: f64,
}

pub const SCALING_SIZES: [usize; 5] = [100, 300, 1000, 3000, 10_000];

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Query time against curve count for random small arcs, β = 2, order 2.
pub fn scaling(sizes: &[usize], cfg: &ExperimentConfig) -> Result<ScalingResult, ExperimentError> {
    let mut rows = Vec::new();
    for &n in sizes {
        let shape = synth::random_small_arcs(n, cfg.seed.wrapping_add(n as u64));
        let prep = Prepared::new(&shape, &cfg.subdivision)?;
        let grid = grid_points(&shape.global_aabb, cfg.grid.0, cfg.grid.1);
        let qc = prep.query_config(2.0, ExpansionOrder::Two)?;
        let approx = prep.agglomerated(&grid, &qc, cfg.repeats)?;
        let truth = prep.truth(&grid);
        let report = error_report(&grid, truth, approx, qc.containment_rule);
        let (d, a) = (report.truth.query_seconds, report.approx.query_seconds);
        rows.push(ScalingRow {
            n,
            curves_after_subdivision: prep.subdivided.shape.len(),
            preprocessing_seconds: prep.subdivide_seconds + report.approx.preprocessing_seconds,
            direct_seconds: d,
            agglomerated_seconds: a,
            speedup: d / a,
            mean_leaves_visited: report.approx.mean_leaves_visited(),
            linf: report.linf,
        });
    }
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let direct: Vec<f64> = rows.iter().map(|r| r.direct_seconds).collect();
    let agg: Vec<f64> = rows.iter().map(|r| r.agglomerated_seconds).collect();
    Ok(ScalingResult {
        direct_slope: log_log_slope(&ns, &direct),
        agglomerated_slope: log_log_slope(&ns, &agg),
        rows,
    })
}
