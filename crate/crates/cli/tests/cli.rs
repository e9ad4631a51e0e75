use std::fs;
use std::path::PathBuf;
use std::process::Command as Process;

use clap::Parser;
use conceptua_cli::commands::{BellResult, CognitonsResult, DilationResult, EbrResult, InterferenceResult};
use conceptua_cli::{run, Cli, Report, RunOutput};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run_args(args: &[&str]) -> Result<RunOutput, conceptua_cli::CliError> {
    let cli = Cli::try_parse_from(std::iter::once("conceptua").chain(args.iter().copied())).unwrap();
    run(&cli.command)
}

fn report<T: for<'de> serde::Deserialize<'de>>(out: &RunOutput) -> Report<T> {
    serde_json::from_slice(&out.report).unwrap()
}

fn binary() -> Process {
    Process::new(env!("CARGO_BIN_EXE_conceptua"))
}

fn write_temp(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, contents).unwrap();
    p
}

#[test]
fn ebr_symmetric_qubit() {
    let out = run_args(&["ebr", "--input", &fixture("qubit_plus.json"), "--samples", "100000"]).unwrap();
    let r: Report<EbrResult> = report(&out);
    assert_eq!(r.seed, 0);
    assert_eq!(r.format_version, "1");
    for o in &r.result.outcomes {
        assert!((o.born_probability - 0.5).abs() < 1e-12);
        assert!(o.z_score.unwrap().abs() < 4.0, "{o:?}");
    }
}

#[test]
fn ebr_seeded_runs_identical() {
    let args = ["ebr", "--input", &fixture("qutrit_grouped.json"), "--seed", "7", "--samples", "20000"];
    let a = run_args(&args).unwrap();
    let b = run_args(&args).unwrap();
    assert_eq!(a.report, b.report);
    let c = run_args(&["ebr", "--input", &fixture("qutrit_grouped.json"), "--seed", "8", "--samples", "20000"]).unwrap();
    assert_ne!(a.report, c.report);
}

#[test]
fn ebr_groups_in_oracle_fields() {
    let out = run_args(&["ebr", "--input", &fixture("qutrit_grouped.json"), "--samples", "1000"]).unwrap();
    let r: Report<EbrResult> = report(&out);
    assert!(r.result.grouped);
    let probs: Vec<f64> = r.result.outcomes.iter().map(|o| o.born_probability).collect();
    assert!((probs[0] - 2.0 / 3.0).abs() < 1e-12 && (probs[1] - 1.0 / 3.0).abs() < 1e-12);
    let post = r.result.outcomes[0].post_state.as_ref().unwrap();
    assert!((post[0][1][0] - 0.5).abs() < 1e-12);
    assert!(post[2][2][0].abs() < 1e-15);
}

#[test]
fn ebr_reports_warp() {
    let out = run_args(&["ebr", "--input", &fixture("qubit_warp.json"), "--samples", "10"]).unwrap();
    let r: Report<EbrResult> = report(&out);
    let w = r.result.warp.unwrap();
    assert!(w.equilibrium_distance <= w.surface_distance);
}

#[test]
fn report_round_trips_losslessly() {
    let out = run_args(&["ebr", "--input", &fixture("qubit_warp.json"), "--samples", "500"]).unwrap();
    let r: Report<EbrResult> = report(&out);
    assert_eq!(conceptua_cli::json::to_report_bytes(&r).unwrap(), out.report);

    let out = run_args(&["dilation", "--na", "10", "--nb", "4", "--L", "0.3", "--c", "7"]).unwrap();
    let r: Report<DilationResult> = report(&out);
    assert_eq!(conceptua_cli::json::to_report_bytes(&r).unwrap(), out.report);
}

#[test]
fn interference_classical_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "c.csv", "exemplar,mu_a,mu_b,mu_obs\nx,0.5,0.25,0.375\ny,0.25,0.25,0.25\nz,0.25,0.5,0.375\n");
    let out = run_args(&["interference", "--input", p.to_str().unwrap()]).unwrap();
    let r: Report<InterferenceResult> = report(&out);
    assert!(r.result.rows.iter().all(|row| row.extension == "classical"));
}

#[test]
fn interference_fixture_round_trip() {
    let out = run_args(&["interference", "--input", &fixture("disjunction_synthetic.csv")]).unwrap();
    let r: Report<InterferenceResult> = report(&out);
    assert!(!r.result.any_clamped);
    assert!(r.result.consistency.abs() < 1e-9);
    assert!(r.result.deviation_sum.abs() < 1e-9);
    for row in &r.result.rows {
        assert!((row.predicted - row.mu_obs).abs() < 1e-12, "{row:?}");
        assert!(row.cos_theta.abs() <= 1.0);
    }
}

#[test]
fn interference_builtin_dataset() {
    let out = run_args(&["interference"]).unwrap();
    let r: Report<InterferenceResult> = report(&out);
    assert_eq!(r.result.rows.len(), 8);
    assert_eq!(r.input["input"], "builtin synthetic dataset");
}

#[test]
fn interference_bad_column() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "bad.csv", "exemplar,mu_a,mu_b,mu_obs\nx,0.5,0.6,0.5\ny,0.5,0.6,0.5\n");
    let err = run_args(&["interference", "--input", p.to_str().unwrap()]).unwrap_err();
    assert_eq!(err.exit_code(), conceptua_cli::error::EXIT_VALIDATION);
    assert!(err.to_string().contains("mu_b"), "{err}");
}

#[test]
fn bell_singlet_and_tables() {
    let out = run_args(&["bell", "--singlet", "0,-pi/2,pi/4,3pi/4"]).unwrap();
    let r: Report<BellResult> = report(&out);
    assert!((r.result.s_value - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    assert!(r.result.violates_classical && !r.result.exceeds_tsirelson);

    let r: Report<BellResult> = report(&run_args(&["bell", "--input", &fixture("bell_counts.json")]).unwrap());
    assert!((r.result.s_value - 1.0).abs() < 1e-15);

    let r: Report<BellResult> = report(&run_args(&["bell", "--input", &fixture("bell_pr_box.json")]).unwrap());
    assert_eq!(r.result.s_value, 4.0);

    let dir = tempfile::tempdir().unwrap();
    let uniform = r#"{"tables":{"AB":{"counts":[1,1,1,1]},"ABp":{"counts":[1,1,1,1]},"ApB":{"counts":[1,1,1,1]},"ApBp":{"counts":[1,1,1,1]}}}"#;
    let p = write_temp(&dir, "u.json", uniform);
    let r: Report<BellResult> = report(&run_args(&["bell", "--input", p.to_str().unwrap()]).unwrap());
    assert_eq!(r.result.s_value, 0.0);
}

#[test]
fn bell_missing_table() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "m.json", r#"{"tables":{"AB":{"counts":[1,1,1,1]},"ABp":{"counts":[1,1,1,1]},"ApB":{"counts":[1,1,1,1]}}}"#);
    let err = run_args(&["bell", "--input", p.to_str().unwrap()]).unwrap_err();
    assert_eq!(err.exit_code(), conceptua_cli::error::EXIT_VALIDATION);
    assert!(err.to_string().contains("ApBp"));
}

#[test]
fn cognitons_zoo() {
    let out = run_args(&["cognitons", "--input", &fixture("zoo.txt")]).unwrap();
    let r: Report<CognitonsResult> = report(&out);
    let table = &r.result.rank_table;
    assert_eq!((table[0].word.as_str(), table[0].count), ("the", 6));
    assert_eq!((table[1].word.as_str(), table[1].count), ("and", 3));
    assert_eq!(r.result.zipf.top_products, vec![6, 6, 6]);
}

#[test]
fn cognitons_keep_case_changes_counts() {
    let out = run_args(&["cognitons", "--input", &fixture("zoo.txt"), "--keep-case"]).unwrap();
    let r: Report<CognitonsResult> = report(&out);
    let the = r.result.rank_table.iter().find(|e| e.word == "the").unwrap();
    assert_eq!(the.count, 5);
}

#[test]
fn cognitons_synthetic_be_corpus() {
    let (a, b, mu) = (400.0f64, 6.0, -2.0);
    let mut text = String::new();
    for i in 1..=40 {
        let n = (a / (((i as f64 - mu) / b).exp() - 1.0)).round() as usize;
        for _ in 0..n.max(1) {
            text.push_str(&format!("w{i:02} "));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "be.txt", &text);
    let r: Report<CognitonsResult> = report(&run_args(&["cognitons", "--input", p.to_str().unwrap()]).unwrap());
    assert_eq!(r.result.fits.winner, "bose_einstein");
}

#[test]
fn cognitons_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "empty.txt", " ... \n");
    let err = run_args(&["cognitons", "--input", p.to_str().unwrap()]).unwrap_err();
    assert!(err.to_string().contains("empty corpus"), "{err}");
}

#[test]
fn dilation_cases() {
    let r: Report<DilationResult> = report(&run_args(&["dilation", "--na", "8", "--nb", "4"]).unwrap());
    assert!((r.result.beta - 0.8660254).abs() < 1e-7);
    assert_eq!(r.result.trajectory_b.last().unwrap(), &[8.0, 0.0]);

    let r: Report<DilationResult> = report(&run_args(&["dilation", "--na", "6", "--nb", "6"]).unwrap());
    assert_eq!(r.result.velocity, 0.0);
    assert_eq!(r.result.euclidean_length_a, r.result.euclidean_length_b);
    assert_eq!(r.result.minkowski_length_a, r.result.minkowski_length_b);

    let err = run_args(&["dilation", "--na", "4", "--nb", "8"]).unwrap_err();
    assert_eq!(err.exit_code(), conceptua_cli::error::EXIT_VALIDATION);
    assert!(err.to_string().contains("invalid input"));
}

fn read_plot(bytes: &[u8]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::ReaderBuilder::new().delimiter(b'\t').from_reader(bytes);
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn dilation_plot_reproduces_report_bitwise() {
    let out = run_args(&["dilation", "--na", "12", "--nb", "6", "--L", "0.7", "--c", "3"]).unwrap();
    let r: Report<DilationResult> = report(&out);
    let (header, rows) = read_plot(&out.plot.to_bytes());
    assert_eq!(header, ["series", "t", "x"]);
    let parse = |series: &str| -> Vec<[f64; 2]> {
        rows.iter().filter(|row| row[0] == series).map(|row| [row[1].parse().unwrap(), row[2].parse().unwrap()]).collect()
    };
    let bits = |v: Vec<[f64; 2]>| v.iter().flat_map(|p| p.map(f64::to_bits)).collect::<Vec<_>>();
    assert_eq!(bits(parse("A")), bits(r.result.trajectory_a.clone()));
    assert_eq!(bits(parse("B")), bits(r.result.trajectory_b.clone()));
}

#[test]
fn cognitons_plot_reproduces_report_bitwise() {
    let out = run_args(&["cognitons", "--input", &fixture("harbor.txt")]).unwrap();
    let r: Report<CognitonsResult> = report(&out);
    let (header, rows) = read_plot(&out.plot.to_bytes());
    assert_eq!(header.len(), 8);
    assert_eq!(rows.len(), r.result.rank_table.len());
    for (row, entry) in rows.iter().zip(&r.result.rank_table) {
        assert_eq!(row[1], entry.word);
        assert_eq!(row[2].parse::<f64>().unwrap().to_bits(), entry.energy.to_bits());
        assert_eq!(row[4].parse::<u64>().unwrap(), entry.count);
    }
}

#[test]
fn binary_writes_files_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run_once = |tag: &str| {
        let report = dir.path().join(format!("r{tag}.json"));
        let plot = dir.path().join(format!("p{tag}.tsv"));
        let status = binary()
            .args(["ebr", "--input", &fixture("qubit_plus.json"), "--samples", "5000", "--seed", "7"])
            .arg("--output")
            .arg(&report)
            .arg("--emit-plot")
            .arg(&plot)
            .status()
            .unwrap();
        assert!(status.success());
        (fs::read(report).unwrap(), fs::read(plot).unwrap())
    };
    assert_eq!(run_once("1"), run_once("2"));
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = write_temp(&dir, "bad.json", "{\"state\": {\"amplitudes\": [[1, 0], ]}}");
    let code = |args: &[&str]| binary().args(args).output().unwrap().status.code().unwrap();

    assert_eq!(code(&["dilation", "--na", "8", "--nb", "4"]), 0);
    assert_eq!(code(&["ebr", "--input", bad_json.to_str().unwrap()]), 2);
    assert_eq!(code(&["dilation", "--na", "8"]), 2);
    assert_eq!(code(&["dilation", "--na", "8", "--nb", "3"]), 3);
    assert_eq!(code(&["ebr", "--input", dir.path().join("missing.json").to_str().unwrap()]), 1);

    let out = binary().args(["ebr", "--input", bad_json.to_str().unwrap()]).output().unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 1"), "{stderr}");
}

#[test]
fn help_documents_exit_codes() {
    let out = binary().arg("--help").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Exit status") && text.contains("numeric failure"));
}
