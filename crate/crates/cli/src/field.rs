use std::io::Read;
use std::path::Path;
use std::time::Instant;

use curvewind::engine::{containment, direct_field, error_report, evaluate_batch, QueryConfig};
use curvewind::experiments::Prepared;
use curvewind::svg::{grid_points, parse_svg_document_named, SvgDocument, SvgWarning};
use curvewind::{Aabb, DirectConfig, ErrorReport, ExpansionOrder, Point2, SubdivisionConfig};
use serde::Serialize;

use crate::args::{Cli, Method};
use crate::error::CliError;
use crate::output::{write_pgm, OutDir};
use crate::report::*;

#[derive(Serialize)]
struct FieldRow {
    x: f64,
    y: f64,
    w: f64,
    inside: u8,
    confidence: f64,
}

#[derive(Serialize)]
struct ErrorRow {
    x: f64,
    y: f64,
    truth: f64,
    approx: f64,
    abs_error: f64,
}

fn read_input(path: &Path) -> Result<(String, String), CliError> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::io(Path::new("<stdin>"), e))?;
        return Ok((text, "<stdin>".to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok((text, name))
}

fn warning_text(w: &SvgWarning) -> String {
    match w {
        SvgWarning::UnsupportedFeature { feature, offset } => format!("{feature} at offset {offset}"),
    }
}

/// Query bounds: the viewBox when present, otherwise the shape box enlarged by 20%.
fn grid_bounds(doc: &SvgDocument) -> (Aabb, &'static str) {
    match doc.view_box {
        Some(vb) => (vb, "viewBox"),
        None => (doc.shape.global_aabb.scaled(1.2), "shape"),
    }
}

pub fn run_field(cli: &Cli, threads: usize) -> Result<OutDir, CliError> {
    let input = cli
        .input
        .as_deref()
        .ok_or_else(|| CliError::Usage("either --input or --experiment is required".into()))?;
    let (text, name) = read_input(input)?;

    let start = Instant::now();
    let doc = parse_svg_document_named(&text, &name).map_err(|e| CliError::Parse(format!("{}: {e}", input.display())))?;
    let parse_seconds = start.elapsed().as_secs_f64();
    if doc.shape.is_empty() {
        return Err(CliError::Parse(format!("{}: no path geometry", input.display())));
    }
    for w in &doc.warnings {
        log::warn!("{}", warning_text(w));
    }
    log::info!("parsed {} curves from {}", doc.shape.len(), input.display());

    let (bounds, bounds_from) = grid_bounds(&doc);
    let queries = grid_points(&bounds, cli.grid.nx, cli.grid.ny);
    let subdivision = SubdivisionConfig::new(cli.subdiv_frac, cli.subdiv_max_depth)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let order = ExpansionOrder::try_from(cli.order).map_err(|e| CliError::Usage(e.to_string()))?;

    let mut timings = Timings {
        parse: parse_seconds,
        ..Timings::default()
    };
    let mut report = RunReport {
        tool_version: env!("CARGO_PKG_VERSION"),
        input: input.display().to_string(),
        method: cli.method.as_str(),
        beta: None,
        order: None,
        seed: cli.seed,
        threads,
        grid: GridInfo {
            nx: cli.grid.nx,
            ny: cli.grid.ny,
            min: [bounds.min.x, bounds.min.y],
            max: [bounds.max.x, bounds.max.y],
            bounds_from,
        },
        curves: CurveCounts {
            raw: doc.shape.len(),
            subdivided: None,
        },
        subdivision: None,
        bvh: None,
        timings: Timings::default(),
        queries: QueryInfo {
            count: queries.len(),
            inside: 0,
            on_boundary: 0,
            mean_leaves_visited: 0.0,
            mean_approximations: 0.0,
        },
        warnings: doc.warnings.iter().map(warning_text).collect(),
        comparison: None,
        misclassifications: Vec::new(),
    };

    let direct_cfg = DirectConfig::for_diagonal(doc.shape.diagonal());
    let mut prepared = None;
    let (field, cfg) = match cli.method {
        Method::Direct => {
            let field = direct_field(&doc.shape.curves, &queries, &direct_cfg);
            let cfg = QueryConfig::new(f64::INFINITY, order, direct_cfg).expect("infinite beta is valid");
            (field, cfg)
        }
        Method::Agglomerated => {
            let prep = Prepared::new(&doc.shape, &subdivision).map_err(|e| CliError::Parse(e.to_string()))?;
            let cfg = prep.query_config(cli.beta, order).map_err(|e| CliError::Usage(e.to_string()))?;
            let field = evaluate_batch(&prep.bvh, &queries, &cfg).map_err(|e| CliError::Usage(e.to_string()))?;
            timings.subdivide = prep.subdivide_seconds;
            timings.build = prep.bvh.timings.topology_seconds;
            timings.moments = prep.bvh.timings.moments_seconds;
            report.beta = Some(cli.beta);
            report.order = Some(cli.order);
            report.curves.subdivided = Some(prep.subdivided.shape.len());
            report.subdivision = Some(SubdivisionInfo {
                max_diag_fraction: subdivision.max_diag_fraction,
                max_depth: subdivision.max_depth,
                depth_cap_hits: prep.subdivided.depth_cap_hits,
            });
            report.bvh = Some(BvhInfo {
                depth: prep.bvh.max_depth_reached,
                nodes: prep.bvh.nodes.len(),
                leaves: prep.bvh.leaf_count,
            });
            prepared = Some(prep);
            (field, cfg)
        }
    };
    timings.query = field.query_seconds;
    report.timings = timings;
    log::info!("evaluated {} queries in {:.3} s", queries.len(), field.query_seconds);

    let rule = cfg.containment_rule;
    let cells: Vec<_> = field.values.iter().map(|&w| containment(w, rule)).collect();
    report.queries.inside = cells.iter().filter(|c| c.inside).count();
    report.queries.on_boundary = field.on_boundary_count();
    report.queries.mean_leaves_visited = field.mean_leaves_visited();
    report.queries.mean_approximations = field.mean_approximations();

    let mut out = OutDir::create(&cli.out)?;
    out.csv(
        "field.csv",
        queries.iter().zip(&field.values).zip(&cells).map(|((q, &w), c)| FieldRow {
            x: q.x,
            y: q.y,
            w,
            inside: c.inside as u8,
            confidence: c.confidence,
        }),
    )?;
    if !cli.no_image {
        out.with_writer("field.pgm", |f| write_pgm(f, &field.values, cli.grid.nx, cli.grid.ny))?;
    }

    if cli.compare {
        let truth = match cli.method {
            Method::Direct => field.clone(),
            Method::Agglomerated => direct_field(&doc.shape.curves, &queries, &direct_cfg),
        };
        let errors = error_report(&queries, truth, field, rule);
        write_comparison(&mut out, &queries, &errors)?;
        report.comparison = Some(Comparison {
            linf: errors.linf,
            l2_rms: errors.l2,
            median: errors.median,
            direct_query_seconds: errors.truth.query_seconds,
            misclassified: errors.misclassifications.len(),
        });
        report.misclassifications = misclassification_records(&errors);
    }

    if cli.dump {
        out.with_writer("geometry.csv", |f| doc.shape.write_geometry_csv(f))?;
        if let Some(prep) = &prepared {
            out.json("bvh.json", &prep.bvh.dump())?;
        }
    }

    out.json("report.json", &report)?;
    Ok(out)
}

fn misclassification_records(errors: &ErrorReport) -> Vec<MisclassificationRecord> {
    errors
        .misclassifications
        .iter()
        .map(|m| MisclassificationRecord {
            index: m.index,
            x: m.point.x,
            y: m.point.y,
            truth: m.truth,
            approx: m.approx,
            fractional_part: m.fractional_part,
        })
        .collect()
}

fn write_comparison(out: &mut OutDir, queries: &[Point2], errors: &ErrorReport) -> Result<(), CliError> {
    out.csv(
        "errors.csv",
        queries
            .iter()
            .zip(&errors.truth.values)
            .zip(&errors.approx.values)
            .zip(&errors.abs_errors)
            .map(|(((q, &truth), &approx), &abs_error)| ErrorRow {
                x: q.x,
                y: q.y,
                truth,
                approx,
                abs_error,
            }),
    )?;
    out.csv("misclassifications.csv", misclassification_records(errors))
}

