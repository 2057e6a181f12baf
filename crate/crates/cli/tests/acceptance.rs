//! End-to-end checks through the compiled binary: the bench → report → chart
//! pipeline, reduce → solve composition, and the exit-code protocol
//! (0 success, 1 usage, 2 singular, 3 insufficient data). Run with
//! `cargo test --test acceptance -- --nocapture` to see the criterion line.

use std::fs;
use std::io::BufReader;
use std::path::Path;
use std::process::{Command, Output};

use symband::band::{write_solution, write_system};
use symband::{
    generate_system, read_csv, reduce_chain, solve, Backend, BandSystem, GenSpec, Generated,
    Rational, ReduceError, StorageKind,
};
use tempfile::TempDir;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_symband")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("launch symband")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exact_system(spec: &GenSpec) -> BandSystem<Rational> {
    match generate_system(spec).expect("generate") {
        Generated::Exact { system, .. } => system,
        Generated::Float { .. } => unreachable!("spec is exact"),
    }
}

/// First seeded heptadiagonal system whose full reduction chain is
/// divisor-free, so the reduce half of the round trip cannot fail for
/// fixture reasons.
fn reducible_hd_system() -> BandSystem<Rational> {
    for seed in 0..200u64 {
        let spec = GenSpec::plain(16, 3, seed, Backend::Exact, StorageKind::Fixed);
        let sys = exact_system(&spec);
        if reduce_chain(&sys, 1).is_ok() {
            return sys;
        }
    }
    panic!("no divisor-free heptadiagonal fixture within 200 seeds");
}

/// Exact byte slice of the `"solution"` array in a solution document.
/// Entries are quoted `p/q` strings, so the first `]` closes the array.
fn solution_array_slice(doc: &str) -> &str {
    let key = "\"solution\":";
    let start = doc.find(key).expect("solution key") + key.len();
    let open = doc[start..].find('[').expect("array open") + start;
    let close = doc[open..].find(']').expect("array close") + open;
    &doc[open..=close]
}

fn criterion(id: u32, name: &str, run: impl FnOnce() -> Result<String, String>) {
    match run() {
        Ok(detail) => println!("criterion {id} ({name}): PASS - {detail}"),
        Err(detail) => {
            println!("criterion {id} ({name}): FAIL - {detail}");
            panic!("criterion {id} ({name}) failed: {detail}");
        }
    }
}

#[test]
fn criterion_9_cli_round_trip() {
    criterion(9, "cli round trip", || {
        let dir = TempDir::new().map_err(|e| e.to_string())?;
        let root = dir.path();
        let csv = root.join("runs.csv");
        let svg = root.join("chart.svg");

        // Bench: 3 algorithms x 2 sizes x 2 reps on the fixed backend.
        let out = run_in(
            root,
            &[
                "bench",
                "--sizes",
                "50,100",
                "--algorithms",
                "td,pd,hd",
                "--storage",
                "fixed",
                "--backend",
                "exact",
                "--reps",
                "2",
                "--seed",
                "7",
                "--csv",
                csv.to_str().unwrap(),
            ],
        );
        if code(&out) != 0 {
            return Err(format!("bench exited {}: {}", code(&out), stderr_text(&out)));
        }
        let text = fs::read_to_string(&csv).map_err(|e| e.to_string())?;
        let lines = text.lines().count();
        if lines != 13 {
            return Err(format!("expected header + 12 rows, got {lines} lines"));
        }
        let file = fs::File::open(&csv).map_err(|e| e.to_string())?;
        let records = read_csv(BufReader::new(file)).map_err(|e| e.to_string())?;
        if records.len() != 12 {
            return Err(format!("CSV reparse lost rows: {} of 12", records.len()));
        }

        // Report: growth table, ratios, and the chart.
        let out = run_in(
            root,
            &[
                "report",
                "--csv",
                csv.to_str().unwrap(),
                "--alpha",
                "--ratios",
                "--svg",
                svg.to_str().unwrap(),
            ],
        );
        if code(&out) != 0 {
            return Err(format!("report exited {}: {}", code(&out), stderr_text(&out)));
        }
        let stdout = stdout_text(&out);
        for needle in ["alpha", "STDM", "SPDM", "SHDM", "pd/td"] {
            if !stdout.contains(needle) {
                return Err(format!("report output lacks {needle:?}"));
            }
        }
        let chart = fs::read_to_string(&svg).map_err(|e| e.to_string())?;
        if !chart.starts_with("<svg") {
            return Err("chart does not begin with an svg element".into());
        }
        let bars = chart.matches("class=\"bar\"").count();
        if bars != 6 {
            return Err(format!("expected one bar per (n, algorithm) = 6, got {bars}"));
        }
        if !chart.contains("seconds (log scale)") || !chart.contains(">n</text>") {
            return Err("chart lacks axis labels".into());
        }

        // Reduce → solve equals direct solve, byte for byte on the array.
        let sys = reducible_hd_system();
        let input = root.join("hd.json");
        fs::write(&input, write_system(&sys)).map_err(|e| e.to_string())?;
        let reduced = root.join("td.json");
        let out = run_in(
            root,
            &[
                "reduce",
                "--input",
                input.to_str().unwrap(),
                "--to",
                "td",
                "--output",
                reduced.to_str().unwrap(),
            ],
        );
        if code(&out) != 0 {
            return Err(format!("reduce exited {}: {}", code(&out), stderr_text(&out)));
        }
        let report_text =
            fs::read_to_string(root.join("td.report.json")).map_err(|e| e.to_string())?;
        for key in ["\"w_from\"", "\"w_to\"", "\"ops_counted\"", "\"reference_ops\""] {
            if !report_text.contains(key) {
                return Err(format!("reduction report lacks {key}"));
            }
        }
        let via = run_in(root, &["solve", "--input", reduced.to_str().unwrap()]);
        let direct = run_in(root, &["solve", "--input", input.to_str().unwrap()]);
        if code(&via) != 0 || code(&direct) != 0 {
            return Err(format!(
                "solve exited {} (reduced) / {} (direct)",
                code(&via),
                code(&direct)
            ));
        }
        let via_doc = stdout_text(&via);
        let direct_doc = stdout_text(&direct);
        if solution_array_slice(&via_doc) != solution_array_slice(&direct_doc) {
            return Err("solution arrays differ between piped and direct solves".into());
        }

        // The CLI's direct solve matches the in-process composition verbatim.
        let mut owned = sys.clone();
        let result = solve(&mut owned).map_err(|e| e.to_string())?;
        if direct_doc != write_solution(&result.to_document()) {
            return Err("CLI solve output differs from the in-process solve".into());
        }

        Ok(format!(
            "12 CSV rows reparsed losslessly, {bars} chart bars, solution arrays byte-identical"
        ))
    });
}

#[test]
fn solve_reports_singular_inputs_with_exit_2() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    let path = root.join("singular.json");
    // Rows 1 and 2 are identical, so the matrix drops rank.
    let doc = r#"{"n": 3, "w": 1, "diagonals": {"-1": [1, 0], "0": [1, 1, 1], "1": [1, 0]}, "rhs": [1, 1, 1]}"#;
    fs::write(&path, doc).unwrap();
    let out = run_in(root, &["solve", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr_text(&out).contains("singular"),
        "stderr: {}",
        stderr_text(&out)
    );
}

#[test]
fn malformed_input_exits_1() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    let path = root.join("bad.json");
    fs::write(&path, "not json {{{").unwrap();
    let out = run_in(root, &["solve", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "stderr: {}", stderr_text(&out));
}

#[test]
fn bench_gates_sizes_below_the_minimum() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    let csv = root.join("gate.csv");
    let out = run_in(
        root,
        &[
            "bench",
            "--sizes",
            "5",
            "--algorithms",
            "hd",
            "--csv",
            csv.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 1, "stderr: {}", stderr_text(&out));
    assert!(!csv.exists(), "a gated invocation must not write rows");
}

#[test]
fn report_needs_two_sizes_per_series_for_alpha() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    let csv = root.join("single.csv");
    let out = run_in(
        root,
        &[
            "bench",
            "--sizes",
            "50",
            "--algorithms",
            "td",
            "--reps",
            "1",
            "--csv",
            csv.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    let out = run_in(root, &["report", "--csv", csv.to_str().unwrap(), "--alpha"]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr_text(&out));
    // Without --alpha the same CSV still summarizes fine.
    let out = run_in(root, &["report", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout_text(&out).contains("mean_seconds"));
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    assert_eq!(code(&run_in(root, &["solve", "--nope"])), 1);
    assert_eq!(code(&run_in(root, &["frobnicate"])), 1);
    assert_eq!(code(&run_in(root, &["--help"])), 0);
    assert_eq!(code(&run_in(root, &["--version"])), 0);
    let missing = root.join("absent.json");
    let out = run_in(
        root,
        &[
            "solve",
            "--input",
            missing.to_str().unwrap(),
            "--storage",
            "bogus",
        ],
    );
    assert_eq!(code(&out), 1);
}

#[test]
fn bench_reruns_append_identical_row_keys() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    let (a, b) = (root.join("a.csv"), root.join("b.csv"));
    for csv in [&a, &b] {
        let out = run_in(
            root,
            &[
                "bench",
                "--sizes",
                "50",
                "--algorithms",
                "td",
                "--reps",
                "2",
                "--seed",
                "3",
                "--csv",
                csv.to_str().unwrap(),
            ],
        );
        assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    }
    let parse = |path: &Path| {
        read_csv(BufReader::new(fs::File::open(path).unwrap())).expect("parseable CSV")
    };
    let (ra, rb) = (parse(&a), parse(&b));
    assert_eq!(ra.len(), 2);
    let keys = |rs: &[symband::BenchRecord]| {
        rs.iter()
            .map(|r| (r.algorithm, r.storage, r.backend, r.n, r.rep))
            .collect::<Vec<_>>()
    };
    assert_eq!(keys(&ra), keys(&rb));
    assert!(ra.iter().all(|r| r.seconds > 0.0));

    // A second append to the same file adds rows but no second header.
    let out = run_in(
        root,
        &[
            "bench",
            "--sizes",
            "50",
            "--algorithms",
            "td",
            "--reps",
            "2",
            "--seed",
            "3",
            "--csv",
            a.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.matches("algorithm,storage").count(), 1);
}

#[test]
fn reduce_reports_zero_divisors_with_exit_2() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    let sys = (0..200u64)
        .find_map(|seed| {
            let spec = GenSpec::plain(12, 3, seed, Backend::Exact, StorageKind::Fixed);
            let sys = exact_system(&spec);
            matches!(
                reduce_chain(&sys, 1),
                Err(ReduceError::ReductionPivotZero { .. })
            )
            .then_some(sys)
        })
        .expect("a divisor-stuck system within 200 seeds");
    let input = root.join("stuck.json");
    fs::write(&input, write_system(&sys)).unwrap();
    let out = run_in(
        root,
        &[
            "reduce",
            "--input",
            input.to_str().unwrap(),
            "--to",
            "td",
            "--output",
            root.join("r.json").to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 2, "stderr: {}", stderr_text(&out));
    assert!(stderr_text(&out).contains("zero divisor"));
}

#[test]
fn float_backend_writes_numeric_documents() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    let input = root.join("diag.json");
    let doc = r#"{"n": 3, "w": 1, "diagonals": {"-1": [0, 0], "0": [2, 2, 2], "1": [0, 0]}, "rhs": [2, 4, 6]}"#;
    fs::write(&input, doc).unwrap();
    let output = root.join("out.json");
    let out = run_in(
        root,
        &[
            "solve",
            "--input",
            input.to_str().unwrap(),
            "--backend",
            "float",
            "--output",
            output.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr_text(&out));
    assert!(stdout_text(&out).is_empty(), "--output must bypass stdout");
    let text = fs::read_to_string(&output).unwrap();
    assert!(text.contains("\"det\""));
    assert!(text.contains("2.0") && text.contains("3.0"));
}
