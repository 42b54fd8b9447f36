//! End-to-end tests of the batch interface: column contracts, exit codes,
//! configuration layering, and byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gribov-lab"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .env_remove("GRIBOV_LAB_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn trace_csv_contract_and_diagonal_zero_residuals() {
    let out = run(&[
        "trace",
        "--lambda2",
        "1",
        "--mu",
        "1",
        "--lambda",
        "0",
        "--m",
        "3..8",
        "--j-max",
        "4",
        "--nodes",
        "256",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# schema: gribov-lab-report/1"));
    assert!(lines.next().unwrap().starts_with("# config: "));
    assert!(lines.next().unwrap().starts_with("# diagnostics: "));
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "m,partial_sum_re,partial_sum_im,corr_1_re,corr_1_im,corr_2_re,corr_2_im,\
         corr_3_re,corr_3_im,corr_4_re,corr_4_im,residual_re,residual_im,quad_err,n"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        let residual_re: f64 = fields[11].parse().unwrap();
        let residual_im: f64 = fields[12].parse().unwrap();
        assert!(residual_re.abs() < 1e-9 && residual_im.abs() < 1e-9);
    }
}

#[test]
fn byte_identical_reruns() {
    let args = [
        "trace",
        "--lambda2",
        "1",
        "--mu",
        "1",
        "--lambda",
        "0.1",
        "--m",
        "3,5",
        "--j-max",
        "3",
        "--nodes",
        "512",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let bounds_args = [
        "bounds",
        "--check",
        "interpolation",
        "--samples",
        "2000",
        "--seed",
        "9",
    ];
    let c = run(&bounds_args);
    let d = run(&bounds_args);
    assert!(c.status.success());
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn sturm_json_reaches_gelfand_levitan_target() {
    let out = run(&[
        "sturm",
        "--potential",
        "cos2x",
        "--grids",
        "2048,4096",
        "--n-max",
        "40",
        "--format",
        "json",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema"], "gribov-lab-report/1");
    assert_eq!(doc["config"]["command"], "sturm");
    let sum = doc["diagnostics"]["extrapolated_sum"].as_f64().unwrap();
    assert!((sum - 0.5).abs() < 1e-2, "extrapolated sum {sum}");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn spectrum_reports_sorted_eigenvalues() {
    let out = run(&[
        "spectrum",
        "--lambda2",
        "1",
        "--mu",
        "1",
        "--lambda",
        "0.1",
        "--dim",
        "40",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(4).collect();
    assert_eq!(rows.len(), 40);
    let mut prev = f64::NEG_INFINITY;
    for row in rows {
        let re: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(re >= prev);
        prev = re;
    }
}

#[test]
fn determinant_pole_collision_exits_3() {
    let out = run(&[
        "determinant",
        "--lambda2",
        "1",
        "--mu",
        "1",
        "--lambda",
        "0.1",
        "--sigma-re",
        "6",
        "--dim",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["kind"], "PoleCollision");
}

#[test]
fn invalid_parameters_exit_2() {
    // m below the degenerate-radius cutoff.
    let out = run(&["trace", "--m", "2..4"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["kind"], "InvalidParameters");

    // Unknown flag: clap's usage error also exits 2.
    let out = run(&["trace", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));

    // Missing required selection.
    let out = run(&["bounds"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_layering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lab.conf");
    std::fs::write(
        &path,
        "# defaults for the sweep\nmu = 2\nlambda = 0\nm = 3..4\nnodes = 256\nj_max = 1\n",
    )
    .unwrap();

    // Config file supplies mu = 2; the first correction is -mu m(m+1)/2 = -12 at m = 3.
    let out = bin()
        .args(["trace", "--config", path.to_str().unwrap()])
        .env_remove("GRIBOV_LAB_CONFIG")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let first_row = text.lines().nth(4).unwrap();
    let corr1: f64 = first_row.split(',').nth(3).unwrap().parse().unwrap();
    assert!((corr1 + 12.0).abs() < 1e-8, "corr1 {corr1}");

    // A flag overrides the file value: mu = 1 gives -6.
    let out = bin()
        .args(["trace", "--config", path.to_str().unwrap(), "--mu", "1"])
        .env_remove("GRIBOV_LAB_CONFIG")
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let first_row = text.lines().nth(4).unwrap();
    let corr1: f64 = first_row.split(',').nth(3).unwrap().parse().unwrap();
    assert!((corr1 + 6.0).abs() < 1e-8, "corr1 {corr1}");

    // The environment variable names the same default file.
    let out = bin()
        .args(["trace"])
        .env("GRIBOV_LAB_CONFIG", path.as_os_str())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"mu\":2.0"));
}

#[test]
fn describe_documents_every_command() {
    let out = run(&["describe"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for needle in [
        "spectrum",
        "trace",
        "corrections",
        "determinant",
        "bounds",
        "sturm",
        "schema",
        "GRIBOV_LAB_CONFIG",
        "quad_err",
    ] {
        assert!(text.contains(needle), "describe misses '{needle}'");
    }
}

#[test]
fn output_file_writing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run(&[
        "corrections",
        "--m",
        "3",
        "--j-max",
        "2",
        "--nodes",
        "256",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(Path::new(&path)).unwrap();
    assert!(text.lines().nth(3).unwrap().starts_with("m,j,"));
    assert_eq!(text.lines().count(), 6); // 3 comments + header + 2 rows
}

#[test]
fn bounds_nuclear_decay_reports_slope() {
    let out = run(&[
        "bounds",
        "--check",
        "nuclear-decay",
        "--m",
        "10,20,30",
        "--format",
        "json",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let slope = doc["diagnostics"]["fitted_slope"].as_f64().unwrap();
    assert!(slope < 0.0);
    assert_eq!(doc["diagnostics"]["pass"], true);
}
