use serde::{Serialize, Serializer};

/// Summary of one field evaluation, written as `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool_version: &'static str,
    pub input: String,
    pub method: &'static str,
    #[serde(serialize_with = "beta_value")]
    pub beta: Option<f64>,
    pub order: Option<u8>,
    pub seed: u64,
    pub threads: usize,
    pub grid: GridInfo,
    pub curves: CurveCounts,
    pub subdivision: Option<SubdivisionInfo>,
    pub bvh: Option<BvhInfo>,
    pub timings: Timings,
    pub queries: QueryInfo,
    pub warnings: Vec<String>,
    pub comparison: Option<Comparison>,
    pub misclassifications: Vec<MisclassificationRecord>,
}

/// Finite values as numbers, infinity as the string `"inf"`.
fn beta_value<S: Serializer>(beta: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match beta {
        Some(b) if b.is_infinite() => s.serialize_str("inf"),
        Some(b) => s.serialize_f64(*b),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub nx: usize,
    pub ny: usize,
    pub min: [f64; 2],
    pub max: [f64; 2],
    /// `"viewBox"` or `"shape"`.
    pub bounds_from: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveCounts {
    pub raw: usize,
    pub subdivided: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubdivisionInfo {
    pub max_diag_fraction: f64,
    pub max_depth: u32,
    pub depth_cap_hits: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BvhInfo {
    pub depth: u32,
    pub nodes: usize,
    pub leaves: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub parse: f64,
    pub subdivide: f64,
    pub moments: f64,
    pub build: f64,
    pub query: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryInfo {
    pub count: usize,
    pub inside: usize,
    pub on_boundary: usize,
    pub mean_leaves_visited: f64,
    pub mean_approximations: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub linf: f64,
    pub l2_rms: f64,
    pub median: f64,
    pub direct_query_seconds: f64,
    pub misclassified: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MisclassificationRecord {
    pub index: usize,
    pub x: f64,
    pub y: f64,
    pub truth: f64,
    pub approx: f64,
    pub fractional_part: f64,
}
