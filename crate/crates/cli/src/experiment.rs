use curvewind::experiments::{self, ExperimentConfig, ExperimentError, ExperimentName};
use curvewind::SubdivisionConfig;
use serde::Serialize;

use crate::args::Cli;
use crate::error::CliError;
use crate::output::OutDir;

#[derive(Serialize)]
struct SlopeRow {
    method: &'static str,
    slope: f64,
}

fn failed(e: ExperimentError) -> CliError {
    match e {
        ExperimentError::UnknownExperiment(_) => CliError::Usage(e.to_string()),
        other => CliError::Parse(other.to_string()),
    }
}

pub fn run_experiment(cli: &Cli, name: ExperimentName) -> Result<OutDir, CliError> {
    let cfg = ExperimentConfig {
        seed: cli.seed,
        grid: (cli.grid.nx, cli.grid.ny),
        subdivision: SubdivisionConfig::new(cli.subdiv_frac, cli.subdiv_max_depth)
            .map_err(|e| CliError::Usage(e.to_string()))?,
        repeats: cli.repeats as usize,
    };
    if cli.input.is_some() {
        log::warn!("--input is ignored by experiments; they synthesize their own shapes");
    }
    log::info!("running {name} on a {}x{} grid", cfg.grid.0, cfg.grid.1);

    let mut out = OutDir::create(&cli.out)?;
    let file = format!("{}.csv", name.as_str().replace('-', "_"));
    match name {
        ExperimentName::OrderSweep => out.csv(&file, experiments::order_sweep(&cfg).map_err(failed)?)?,
        ExperimentName::BetaSweep => out.csv(&file, experiments::beta_sweep(&cfg).map_err(failed)?)?,
        ExperimentName::SubdivSweep => out.csv(&file, experiments::subdiv_sweep(&cfg).map_err(failed)?)?,
        ExperimentName::Overlap => out.csv(&file, experiments::overlap(&cfg).map_err(failed)?)?,
        ExperimentName::Disagreement => {
            let result = experiments::disagreement(&cfg).map_err(failed)?;
            log::info!(
                "{} disagreements over {} points in {} shapes",
                result.rows.len(),
                result.points,
                result.shapes
            );
            out.csv(&file, result.rows)?;
        }
        ExperimentName::Scaling => {
            let result = experiments::scaling(&experiments::SCALING_SIZES, &cfg).map_err(failed)?;
            out.csv(&file, &result.rows)?;
            out.csv(
                "scaling_fit.csv",
                [
                    SlopeRow { method: "direct", slope: result.direct_slope },
                    SlopeRow { method: "agglomerated", slope: result.agglomerated_slope },
                ],
            )?;
        }
    }
    Ok(out)
}
