use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const RING: &str = r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">
  <path d="M 20 50 A 30 30 0 1 1 80 50 A 30 30 0 1 1 20 50 Z"/>
  <g transform="translate(10 0)"><path d="M 40 40 L 60 40 L 60 60 Z"/></g>
</svg>"#;

fn curvewind(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvewind"))
        .args(args)
        .env("CURVEWIND_LOG", "error")
        .output()
        .expect("binary runs")
}

fn svg_file(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("shape.svg");
    fs::write(&path, text).unwrap();
    path
}

fn run_field(dir: &Path, input: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let mut args = vec!["--input", input.to_str().unwrap(), "--out", out.to_str().unwrap(), "--grid", "40x30"];
    args.extend_from_slice(extra);
    let output = curvewind(&args);
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    out
}

fn field_values(dir: &Path) -> Vec<[f64; 3]> {
    let mut reader = csv::Reader::from_path(dir.join("field.csv")).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["x", "y", "w", "inside", "confidence"]);
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            [r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap()]
        })
        .collect()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn assert_schema_valid(instance: &Value) {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/run_report.schema.json");
    let schema: Value = serde_json::from_str(&fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn agglomerated_run_writes_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let input = svg_file(tmp.path(), RING);
    let out = run_field(tmp.path(), &input, "agg", &["--compare", "--dump"]);
    for name in ["field.csv", "field.pgm", "report.json", "errors.csv", "misclassifications.csv", "geometry.csv", "bvh.json"] {
        assert!(out.join(name).is_file(), "missing {name}");
    }
    let values = field_values(&out);
    assert_eq!(values.len(), 40 * 30);

    let r = report(&out);
    assert_schema_valid(&r);
    assert_eq!(r["method"], "agglomerated");
    assert_eq!(r["curves"]["raw"], 7);
    assert_eq!(r["queries"]["count"], 1200);
    assert!(r["comparison"]["linf"].as_f64().unwrap() < 0.1);

    let pgm = fs::read(out.join("field.pgm")).unwrap();
    let header = b"\n40 30\n65535\n";
    let at = pgm.windows(header.len()).position(|w| w == header).expect("pgm header");
    assert_eq!(pgm.len(), at + header.len() + 40 * 30 * 2);
}

#[test]
fn direct_run_and_infinite_beta_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let input = svg_file(tmp.path(), RING);
    let direct = run_field(tmp.path(), &input, "direct", &["--method", "direct", "--compare"]);
    let exact = run_field(tmp.path(), &input, "exact", &["--beta", "inf"]);

    let r = report(&direct);
    assert_schema_valid(&r);
    assert_eq!(r["bvh"], Value::Null);
    assert_eq!(r["comparison"]["linf"], 0.0);
    assert_schema_valid(&report(&exact));
    assert_eq!(report(&exact)["beta"], "inf");

    let (a, b) = (field_values(&direct), field_values(&exact));
    for (p, q) in a.iter().zip(&b) {
        assert_eq!((p[0], p[1]), (q[0], q[1]));
        assert!((p[2] - q[2]).abs() < 1e-12);
    }
    // the disk of radius 30 about (50, 50) holds w = 1 away from the triangle
    let d = |v: &[f64; 3]| (v[0] - 31.0).hypot(v[1] - 52.0);
    let inside = a.iter().min_by(|p, q| d(p).total_cmp(&d(q))).unwrap();
    assert!((inside[2] - 1.0).abs() < 1e-9);
}

#[test]
fn field_bytes_are_reproducible_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let input = svg_file(tmp.path(), RING);
    let one = run_field(tmp.path(), &input, "one", &["--threads", "1", "--compare"]);
    let four = run_field(tmp.path(), &input, "four", &["--threads", "4", "--compare"]);
    for name in ["field.csv", "field.pgm", "errors.csv", "misclassifications.csv"] {
        assert_eq!(fs::read(one.join(name)).unwrap(), fs::read(four.join(name)).unwrap(), "{name}");
    }
    assert_eq!(report(&four)["threads"], 4);
}

#[test]
fn reads_standard_input() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("stdin");
    let mut child = Command::new(env!("CARGO_BIN_EXE_curvewind"))
        .args(["--input", "-", "--grid", "8x8", "--out", out.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::null())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(RING.as_bytes()).unwrap();
    assert!(child.wait().unwrap().success());
    assert_eq!(field_values(&out).len(), 64);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let good = svg_file(tmp.path(), RING);
    let good = good.to_str().unwrap();
    let out = tmp.path().join("o");
    let out = out.to_str().unwrap();

    let bad = tmp.path().join("bad.svg");
    fs::write(&bad, r#"<svg><path d="L 1 2"/></svg>"#).unwrap();
    let empty = tmp.path().join("empty.svg");
    fs::write(&empty, "<svg/>").unwrap();
    for input in [&bad, &empty] {
        assert_eq!(curvewind(&["--input", input.to_str().unwrap(), "--out", out]).status.code(), Some(1));
    }

    let usage: [&[&str]; 7] = [
        &["--input", good, "--grid", "0x5"],
        &["--input", good, "--order", "3"],
        &["--input", good, "--beta", "-2"],
        &["--input", good, "--subdiv-frac", "1.5"],
        &["--input", good, "--method", "fast"],
        &["--experiment", "nope"],
        &[],
    ];
    for args in usage {
        assert_eq!(curvewind(args).status.code(), Some(2), "{args:?}");
    }

    let missing = tmp.path().join("missing.svg");
    assert_eq!(curvewind(&["--input", missing.to_str().unwrap(), "--out", out]).status.code(), Some(3));
    let blocked = tmp.path().join("file");
    fs::write(&blocked, "").unwrap();
    let nested = blocked.join("sub");
    assert_eq!(curvewind(&["--input", good, "--out", nested.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn overlap_experiment_table() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("exp");
    let output = curvewind(&["--experiment", "overlap", "--grid", "40x40", "--out", out.to_str().unwrap()]);
    assert!(output.status.success());
    let mut reader = csv::Reader::from_path(out.join("overlap.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    let k = headers.iter().position(|h| h == "k").unwrap();
    let linf = headers.iter().position(|h| h == "linf_abs").unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let ks: Vec<&str> = rows.iter().map(|r| &r[k]).collect();
    assert_eq!(ks, ["1", "2", "4", "8", "16"]);
    let first: f64 = rows[0][linf].parse().unwrap();
    let last: f64 = rows[4][linf].parse().unwrap();
    assert!(last > 4.0 * first);
}
