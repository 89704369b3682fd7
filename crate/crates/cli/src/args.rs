use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use curvewind::experiments::ExperimentName;

#[derive(Debug, Parser)]
#[command(name = "curvewind", version, about = "Generalized winding numbers for SVG outlines")]
pub struct Cli {
    /// SVG file to evaluate; `-` reads standard input.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Query grid resolution.
    #[arg(long, default_value = "500x500", value_parser = parse_grid)]
    pub grid: Grid,

    #[arg(long, value_enum, default_value_t = Method::Agglomerated)]
    pub method: Method,

    /// Far-field factor; `inf` disables approximation.
    #[arg(long, default_value = "2", value_parser = parse_beta)]
    pub beta: f64,

    /// Taylor expansion order.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub order: u8,

    /// Largest curve box diagonal after subdivision, as a fraction of the shape diagonal.
    #[arg(long, default_value_t = 0.1, value_parser = parse_fraction)]
    pub subdiv_frac: f64,

    #[arg(long, default_value_t = 20)]
    pub subdiv_max_depth: u32,

    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    /// Also evaluate the direct field and report errors against it.
    #[arg(long)]
    pub compare: bool,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output directory, created if missing.
    #[arg(long, default_value = "curvewind-out")]
    pub out: PathBuf,

    /// Run a named experiment instead of evaluating `--input`.
    #[arg(long, value_parser = parse_experiment)]
    pub experiment: Option<ExperimentName>,

    /// Timed repetitions per configuration in experiments; the fastest is kept.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeats: u32,

    /// Also write the normalized geometry and the BVH layout.
    #[arg(long)]
    pub dump: bool,

    /// Skip the PGM field image.
    #[arg(long)]
    pub no_image: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Agglomerated,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Agglomerated => "agglomerated",
        }
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got {s:?}"))?;
    let dim = |t: &str| match usize::from_str(t.trim()) {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("grid dimensions must be positive integers, got {s:?}")),
    };
    Ok(Grid { nx: dim(w)?, ny: dim(h)? })
}

fn parse_beta(s: &str) -> Result<f64, String> {
    let beta = match s.to_ascii_lowercase().as_str() {
        "inf" | "infinity" => f64::INFINITY,
        other => f64::from_str(other).map_err(|e| e.to_string())?,
    };
    if beta > 0.0 {
        Ok(beta)
    } else {
        Err(format!("beta must be positive, got {s}"))
    }
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let f = f64::from_str(s).map_err(|e| e.to_string())?;
    if f > 0.0 && f <= 1.0 {
        Ok(f)
    } else {
        Err(format!("fraction must lie in (0, 1], got {s}"))
    }
}

fn parse_experiment(s: &str) -> Result<ExperimentName, String> {
    ExperimentName::from_str(s).map_err(|e| {
        let names: Vec<&str> = ExperimentName::ALL.iter().map(|n| n.as_str()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}
