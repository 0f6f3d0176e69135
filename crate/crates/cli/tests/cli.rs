use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use discern::{load_result, EvaluationReport, Format, LabelVector};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn discern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discern"))
        .args(args)
        .env_remove("DISCERN_THREADS")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn estimates_k_on_iris_with_discern() {
    let iris = fixture("iris.csv");
    let out = discern(&["estimate-k", "--data", path_str(&iris), "--metric", "cosine", "--method", "discern"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "3");
}

#[test]
fn estimates_k_on_wine_with_elbow() {
    let wine = fixture("wine.csv");
    let out = discern(&["estimate-k", "--data", path_str(&wine), "--method", "elbow", "--k-max", "10"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "4");
}

#[test]
fn writes_scan_table() {
    let dir = tempfile::tempdir().unwrap();
    let wine = fixture("wine.csv");
    let out = discern(&[
        "estimate-k", "--data", path_str(&wine), "--method", "silhouette", "--k-max", "6", "--runs-per-k", "3",
        "--out-dir", path_str(dir.path()),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let table = fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert!(table.starts_with("method,k,score,mean_score,chosen,runs_per_k,seed,low_confidence\n"));
    assert_eq!(table.lines().count(), 6);
}

#[test]
fn missing_file_exits_with_input_error() {
    let out = discern(&["estimate-k", "--data", "/definitely/not/here.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/definitely/not/here.csv"));
}

#[test]
fn k_below_two_is_rejected() {
    let iris = fixture("iris.csv");
    let out = discern(&["cluster", "--data", path_str(&iris), "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("k must be ≥ 2"), "{}", stderr(&out));
}

#[test]
fn numeric_domain_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("tiny.csv");
    fs::write(&data, "1,0\n0,1\n1,1\n").unwrap();
    let out = discern(&["cluster", "--data", path_str(&data), "--k", "5", "--out-dir", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));

    fs::write(&data, "1,0\n0,0\n1,1\n").unwrap();
    let out = discern(&["curve", "--data", path_str(&data), "--metric", "cosine"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn discern_clustering_of_iris() {
    let dir = tempfile::tempdir().unwrap();
    let iris = fixture("iris.csv");
    let out = discern(&[
        "cluster", "--data", path_str(&iris), "--init", "discern", "--estimate", "--metric", "cosine",
        "--out-dir", path_str(dir.path()),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: EvaluationReport = load_result(&dir.path().join("report.csv"), Format::Csv).unwrap();
    assert_eq!(report.k, 3);
    assert!(report.purity.unwrap() >= 0.95, "{report:?}");
    let labels: LabelVector = load_result(&dir.path().join("labels.csv"), Format::Csv).unwrap();
    assert_eq!(labels.len(), 150);
    assert!(dir.path().join("curve.csv").exists());
    assert!(dir.path().join("centroids.csv").exists());
}

#[test]
fn seeded_runs_are_identical() {
    let iris = fixture("iris.csv");
    let run = |dir: &Path| {
        let out = discern(&[
            "cluster", "--data", path_str(&iris), "--init", "pp", "--k", "3", "--seed", "7", "--out-dir",
            path_str(dir),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        (stdout(&out), dir_contents(dir))
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run(a.path()), run(b.path()));
}

#[test]
fn discern_runs_are_bit_identical() {
    for (name, metric) in [("iris.csv", "cosine"), ("wine.csv", "euclidean")] {
        let data = fixture(name);
        for format in ["csv", "json"] {
            let run = |dir: &Path, threads: Option<&str>| {
                let mut cmd = Command::new(env!("CARGO_BIN_EXE_discern"));
                cmd.args([
                    "cluster", "--data", path_str(&data), "--init", "discern", "--estimate", "--metric", metric,
                    "--format", format, "--out-dir", path_str(dir),
                ]);
                match threads {
                    Some(t) => cmd.env("DISCERN_THREADS", t),
                    None => cmd.env_remove("DISCERN_THREADS"),
                };
                let out = cmd.output().unwrap();
                assert!(out.status.success(), "{}", stderr(&out));
                dir_contents(dir)
            };
            let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
            let first = run(dirs[0].path(), None);
            assert_eq!(first.len(), 4);
            assert_eq!(first, run(dirs[1].path(), None), "{name} {format}");
            assert_eq!(first, run(dirs[2].path(), Some("1")), "{name} {format} single thread");
        }
    }
}

#[test]
fn json_outputs_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let wine = fixture("wine.csv");
    let out = discern(&[
        "cluster", "--data", path_str(&wine), "--k", "3", "--format", "json", "--out-dir", path_str(dir.path()),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let labels: LabelVector = load_result(&dir.path().join("labels.json"), Format::Json).unwrap();
    assert_eq!((labels.len(), labels.k()), (178, 3));
    let report: EvaluationReport = load_result(&dir.path().join("report.json"), Format::Json).unwrap();
    assert!(report.ari.is_some());
}

#[test]
fn compare_table() {
    let dir = tempfile::tempdir().unwrap();
    let iris = fixture("iris.csv");
    let external = dir.path().join("external.csv");
    let labels: String = (0..150).map(|i| format!("{}\n", i / 50)).collect();
    fs::write(&external, labels).unwrap();
    let out = discern(&[
        "compare", "--data", path_str(&iris), "--metric", "cosine", "--repeats", "3", "--external",
        &format!("truth={}", path_str(&external)), "--out-dir", path_str(dir.path()),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("method"));
    assert!(lines[1].starts_with("discern    3     1"), "{text}");
    assert!(lines[2].starts_with("pp         3     3"), "{text}");
    assert!(lines[4].ends_with("1.000   1.000"), "{text}");
    let csv = fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    assert!(csv.starts_with("method,k,runs,asc,purity,ari\ndiscern,3,1,"));
}

#[test]
fn compare_needs_ground_truth() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("x.csv");
    fs::write(&data, "1,0\n0,1\n1,1\n2,1\n").unwrap();
    let out = discern(&["compare", "--data", path_str(&data), "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_scores_saved_labels() {
    let dir = tempfile::tempdir().unwrap();
    let iris = fixture("iris.csv");
    let out = discern(&[
        "cluster", "--data", path_str(&iris), "--estimate", "--metric", "cosine", "--out-dir", path_str(dir.path()),
    ]);
    assert!(out.status.success());
    let cluster_report = fs::read_to_string(dir.path().join("report.csv")).unwrap();

    let eval_dir = dir.path().join("eval");
    let out = discern(&[
        "eval", "--data", path_str(&iris), "--metric", "cosine", "--predicted",
        path_str(&dir.path().join("labels.csv")), "--out-dir", path_str(&eval_dir),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(fs::read_to_string(eval_dir.join("report.csv")).unwrap(), cluster_report);
    assert!(stdout(&out).contains("purity      0.973333"));
}

#[test]
fn curve_prints_csv() {
    let iris = fixture("iris.csv");
    let out = discern(&["curve", "--data", path_str(&iris), "--metric", "cosine", "--k-max", "8"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("l,R,kappa\n0,0,"));
    assert_eq!(text.lines().count(), 1 + 11);
}

#[test]
fn separate_labels_file() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.csv");
    let y = dir.path().join("y.csv");
    fs::write(&x, "0,1\n0,1.1\n5,5\n5,5.2\n").unwrap();
    fs::write(&y, "class\nb\nb\na\na\n").unwrap();
    let out = discern(&[
        "cluster", "--data", path_str(&x), "--labels", path_str(&y), "--k", "2", "--out-dir", path_str(dir.path()),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("purity      1.000000"));

    fs::write(&y, "0\n1\n").unwrap();
    let out = discern(&["cluster", "--data", path_str(&x), "--labels", path_str(&y), "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("4 feature rows but 2 labels"), "{}", stderr(&out));
}

#[test]
fn zero_threads_is_rejected() {
    let iris = fixture("iris.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_discern"))
        .args(["estimate-k", "--data", path_str(&iris)])
        .env("DISCERN_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
