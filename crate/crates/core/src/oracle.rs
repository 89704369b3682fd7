//! Brute-force references for tests and acceptance runs: dense polylines,
//! Gauss-Legendre moment quadrature and central finite differences.
//!
//! Nothing here is used on the query path.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::path::Path;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::direct::segment_winding;
use crate::geometry::{Point2, RationalBezierCurve, Tensor2};
use crate::moments::MomentSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub polyline_segments_per_curve: usize,
    pub quadrature_points: usize,
    pub fd_step_factor: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self::acceptance()
    }
}

impl OracleConfig {
    pub fn acceptance() -> Self {
        Self {
            polyline_segments_per_curve: 100_000,
            quadrature_points: 64,
            fd_step_factor: 1e-5,
        }
    }

    pub fn quick() -> Self {
        Self {
            polyline_segments_per_curve: 1_000,
            ..Self::acceptance()
        }
    }

    fn header(&self) -> String {
        format!(
            "# oracle polyline_segments_per_curve={} quadrature_points={} fd_step_factor={:e}",
            self.polyline_segments_per_curve, self.quadrature_points, self.fd_step_factor
        )
    }
}

/// Winding number of `curve` replaced by `n` uniform-parameter chords.
pub fn polyline_winding(q: Point2, curve: &RationalBezierCurve, n: usize) -> f64 {
    assert!(n >= 1);
    let mut prev = curve.first();
    let mut total = 0.0;
    for i in 1..=n {
        let next = curve.evaluate(i as f64 / n as f64);
        total += segment_winding(q, prev, next);
        prev = next;
    }
    total
}

fn segment_distance(q: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    let t = if len2 > 0.0 { ((q - a).dot(d) / len2).clamp(0.0, 1.0) } else { 0.0 };
    q.distance(a + d * t)
}

/// Distance from `q` to `curve` replaced by `n` uniform-parameter chords.
pub fn polyline_distance(q: Point2, curve: &RationalBezierCurve, n: usize) -> f64 {
    let pts = curve.sample(n);
    pts.windows(2)
        .map(|w| segment_distance(q, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Moments of the segment `a -> b` about `x0`, integrated with an `n`-point
/// Gauss-Legendre rule.
pub fn quadrature_moments(a: Point2, b: Point2, x0: Point2, n: usize) -> MomentSet {
    let rule = GaussLegendre::new(n.max(2)).expect("at least two nodes");
    let d = b - a;
    let length = d.norm();
    // unit normal times |dx/ds| ds
    let normal = [d.y, -d.x];

    let mut out = MomentSet {
        centered_about: Some(x0),
        ..MomentSet::zero()
    };
    for &(node, weight) in rule.as_node_weight_pairs() {
        let s = 0.5 * (node + 1.0);
        let w = 0.5 * weight;
        let x = a + d * s - x0;
        let xv = x.to_array();
        for k in 0..2 {
            out.m0[k] += w * normal[k];
        }
        for i in 0..2 {
            for j in 0..2 {
                out.m1[i][j] += w * xv[i] * normal[j];
                for k in 0..2 {
                    out.m2[i][j][k] += w * xv[i] * xv[j] * normal[k];
                }
            }
        }
        let p = a + d * s;
        out.weighted_centroid[0] += w * length * p.x;
        out.weighted_centroid[1] += w * length * p.y;
    }
    out.weight_length = length;
    out
}

/// Central-difference gradient of a scalar field.
pub fn fd_gradient(f: impl Fn(Point2) -> f64, at: Point2, h: f64) -> Tensor2 {
    let dx = Point2::new(h, 0.0);
    let dy = Point2::new(0.0, h);
    [
        (f(at + dx) - f(at - dx)) / (2.0 * h),
        (f(at + dy) - f(at - dy)) / (2.0 * h),
    ]
}

/// Central differences of a vector field; `result[axis][component]`.
pub fn fd_jacobian<const N: usize>(
    f: impl Fn(Point2) -> [f64; N],
    at: Point2,
    h: f64,
) -> [[f64; N]; 2] {
    let mut out = [[0.0; N]; 2];
    for (axis, step) in [Point2::new(h, 0.0), Point2::new(0.0, h)].into_iter().enumerate() {
        let hi = f(at + step);
        let lo = f(at - step);
        for c in 0..N {
            out[axis][c] = (hi[c] - lo[c]) / (2.0 * h);
        }
    }
    out
}

/// Reference values persisted with the configuration that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub provenance: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Fixture {
    pub fn new(cfg: &OracleConfig, note: &str, columns: &[&str]) -> Self {
        let mut provenance = cfg.header();
        if !note.is_empty() {
            let _ = write!(provenance, " source={note}");
        }
        Self {
            provenance,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "{}", self.provenance)?;
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_to(io::BufWriter::new(file))
    }

    pub fn read_from(input: impl BufRead) -> io::Result<Self> {
        let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
        let mut lines = input.lines();
        let provenance = lines.next().ok_or_else(|| bad("empty fixture"))??;
        if !provenance.starts_with("# oracle") {
            return Err(bad("missing oracle provenance header"));
        }
        let columns: Vec<String> = lines
            .next()
            .ok_or_else(|| bad("missing column header"))??
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for line in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|v| v.parse::<f64>().map_err(|_| bad("non-numeric fixture value")))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != columns.len() {
                return Err(bad("row width does not match header"));
            }
            rows.push(row);
        }
        Ok(Self {
            provenance,
            columns,
            rows,
        })
    }

    pub fn load(path: &Path) -> io::Result<Self> {
        Self::read_from(io::BufReader::new(std::fs::File::open(path)?))
    }
}
