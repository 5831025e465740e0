use std::fs;
use std::path::Path;
use std::process::Command;

use linkprop::cli::{self, run};
use linkprop::io;
use linkprop::propagation::{apply_normalized_operator, propagate, PropagationConfig, SeedLabels};
use linkprop::synth::{generate, PlantedParams};

fn linkprop(args: &[&str]) -> linkprop::Result<()> {
    run(std::iter::once("linkprop").chain(args.iter().copied()))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Generates the default planted dataset into `dir` and ingests it.
fn prepared(dir: &Path) {
    linkprop(&["gen", "--out-dir", p(dir)]).unwrap();
    linkprop(&["ingest", "--edges", p(&dir.join("edges.tsv")), "--out-dir", p(dir)]).unwrap();
}

#[test]
fn snapshot_round_trips_to_equal_graph() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("edges.tsv"),
        "# site\timage\n\
         http://1.regularhost.com/a.html\timg1\n\
         2.regularhost.com\timg2\t640\t480\n\
         user1.livejournal.com\timg1\n\
         user2.livejournal.com\ticon\t16\t16\n\
         user2.livejournal.com\timg3\n",
    )
    .unwrap();
    fs::write(dir.path().join("hostings.txt"), "livejournal.com\n").unwrap();
    linkprop(&[
        "ingest",
        "--edges",
        p(&dir.path().join("edges.tsv")),
        "--exceptions",
        p(&dir.path().join("hostings.txt")),
        "--out-dir",
        p(dir.path()),
    ])
    .unwrap();
    let g = io::load_snapshot(&dir.path().join(cli::SNAPSHOT_FILE)).unwrap();
    assert_eq!(g.site_keys(), ["regularhost.com", "user1.livejournal.com", "user2.livejournal.com"]);
    assert_eq!(g.image_keys(), ["img1", "img2", "img3"]);
    assert_eq!(g.edge_count(), 4);
    let mut buf = Vec::new();
    io::write_snapshot(&mut buf, &g).unwrap();
    assert_eq!(io::read_snapshot(buf.as_slice(), Path::new("mem")).unwrap(), g);
    let summary = fs::read_to_string(dir.path().join(cli::SUMMARY_FILE)).unwrap();
    assert!(summary.contains("records_read=5"));
    assert!(summary.contains("small_images=1"));
}

#[test]
fn empty_edge_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("edges.tsv"), "# nothing here\n").unwrap();
    let err = linkprop(&["ingest", "--edges", p(&dir.path().join("edges.tsv")), "--out-dir", p(dir.path())]).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn malformed_lines_are_counted() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for n in 0..100 {
        if n % 10 == 0 {
            text.push_str("garbage line without tabs\n");
        } else {
            text.push_str(&format!("site{}.com\timg{}\n", n % 7, n));
        }
    }
    fs::write(dir.path().join("edges.tsv"), text).unwrap();
    linkprop(&["ingest", "--edges", p(&dir.path().join("edges.tsv")), "--out-dir", p(dir.path())]).unwrap();
    let summary = fs::read_to_string(dir.path().join(cli::SUMMARY_FILE)).unwrap();
    assert!(summary.contains("records_read=100\n"));
    assert!(summary.contains("records_skipped=10\n"));
    assert!(summary.contains("edges=90"));
}

#[test]
fn propagate_matches_library_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    prepared(d);
    let seeds = d.join("seeds.tsv");
    linkprop(&["propagate", "--seeds", p(&seeds), "--out-dir", p(d)]).unwrap();
    let first = fs::read(d.join(cli::SCORES_FILE)).unwrap();
    let first_trace = fs::read(d.join(cli::TRACE_FILE)).unwrap();
    linkprop(&["propagate", "--seeds", p(&seeds), "--out-dir", p(d)]).unwrap();
    assert_eq!(fs::read(d.join(cli::SCORES_FILE)).unwrap(), first);
    assert_eq!(fs::read(d.join(cli::TRACE_FILE)).unwrap(), first_trace);
    assert_eq!(String::from_utf8(first_trace).unwrap().lines().count(), 5);

    let g = io::load_snapshot(&d.join(cli::SNAPSHOT_FILE)).unwrap();
    let labels = io::read_labels(&seeds).unwrap();
    let (y, _) = SeedLabels::from_site_labels(&g, labels.iter().map(|(k, l)| (k.as_str(), *l)));
    let (f, _) = propagate(&g, &y, &PropagationConfig::default()).unwrap();
    assert_eq!(io::read_scores(&d.join(cli::SCORES_FILE), &g).unwrap(), f);

    linkprop(&["propagate", "--seeds", p(&seeds), "--iterations", "1", "--out-dir", p(d)]).unwrap();
    let one = io::read_scores(&d.join(cli::SCORES_FILE), &g).unwrap();
    let yf = linkprop::ScoreMatrix::from_rows(y.seeds().iter().map(|s| s.row()).collect());
    let ay = apply_normalized_operator(&g, &yf).unwrap();
    for v in 0..g.vertex_count() {
        for c in 0..2 {
            assert_eq!(one.row(v)[c], 0.5 * ay.row(v)[c] + 0.5 * yf.row(v)[c]);
        }
    }
}

#[test]
fn generated_files_match_generator() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    prepared(d);
    let inst = generate(&PlantedParams::default()).unwrap();
    let g = io::load_snapshot(&d.join(cli::SNAPSHOT_FILE)).unwrap();
    // Isolated vertices cannot travel through an edge file.
    assert_eq!(g.edge_count(), inst.graph.edge_count());
    assert!(g.vertex_count() <= inst.graph.vertex_count());
    assert_eq!(io::read_truth(&d.join("truth.tsv")).unwrap(), inst.truth);
}

#[test]
fn classify_writes_ranked_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    prepared(d);
    linkprop(&["propagate", "--seeds", p(&d.join("seeds.tsv")), "--out-dir", p(d)]).unwrap();
    linkprop(&["classify", "--out-dir", p(d)]).unwrap();
    let g = io::load_snapshot(&d.join(cli::SNAPSHOT_FILE)).unwrap();
    let text = fs::read_to_string(d.join(cli::VERDICTS_FILE)).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), g.image_count());
    let adult = rows.iter().filter(|r| r[1] == "adult").count();
    assert_eq!(adult, g.image_count() * 4 / 100);
    for (n, r) in rows.iter().enumerate() {
        assert_eq!(r[3], (n + 1).to_string());
    }
    let ratios: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(ratios.windows(2).all(|w| w[0] >= w[1]));

    linkprop(&["classify", "--population", "all", "--k", "0.1", "--out-dir", p(d)]).unwrap();
    let text = fs::read_to_string(d.join(cli::VERDICTS_FILE)).unwrap();
    assert_eq!(text.lines().count(), g.vertex_count());
    assert_eq!(text.lines().filter(|l| l.contains("\tadult\t")).count(), g.vertex_count() / 10);
}

fn report_value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing"))
        .to_string()
}

#[test]
fn evaluate_and_singleton_sweep_agree() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    prepared(d);
    let seeds = d.join("seeds.tsv");
    let truth = d.join("truth.tsv");
    linkprop(&["evaluate", "--seeds", p(&seeds), "--truth", p(&truth), "--out-dir", p(d)]).unwrap();
    let report = fs::read_to_string(d.join(cli::REPORT_FILE)).unwrap();
    let curve = fs::read_to_string(d.join(cli::CURVE_FILE)).unwrap();
    assert_eq!(curve.lines().count(), 8);
    assert!(report_value(&report, "recall_delta").parse::<f64>().unwrap() > 0.0);

    linkprop(&["sweep", "--seeds", p(&seeds), "--truth", p(&truth), "--n-grid", "5", "--alpha-grid", "0.5", "--k-grid", "0.04", "--out-dir", p(d)]).unwrap();
    let sweep = fs::read_to_string(d.join(cli::SWEEP_FILE)).unwrap();
    let row: Vec<&str> = sweep.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(sweep.lines().count(), 2);
    assert_eq!(row[3], report_value(&report, "propagation_precision"));
    assert_eq!(row[4], report_value(&report, "propagation_recall"));
}

#[test]
fn sweep_grid_size_is_axis_product() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    prepared(d);
    fs::write(
        d.join("sweep.conf"),
        format!(
            "seeds = {}\ntruth = {}\nout_dir = {}\nn_grid = 1..30\nalpha_grid = 0.2,0.4,0.6,0.8\nk_grid = 0.04,0.08\n",
            p(&d.join("seeds.tsv")),
            p(&d.join("truth.tsv")),
            p(d)
        ),
    )
    .unwrap();
    linkprop(&["--config", p(&d.join("sweep.conf")), "sweep"]).unwrap();
    let sweep = fs::read_to_string(d.join(cli::SWEEP_FILE)).unwrap();
    assert_eq!(sweep.lines().filter(|l| !l.starts_with('#')).count(), 30 * 4 * 2);
    // a flag overrides the file
    linkprop(&["--config", p(&d.join("sweep.conf")), "sweep", "--n-grid", "5"]).unwrap();
    let sweep = fs::read_to_string(d.join(cli::SWEEP_FILE)).unwrap();
    assert_eq!(sweep.lines().filter(|l| !l.starts_with('#')).count(), 4 * 2);
}

#[test]
fn seed_keys_are_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("edges.tsv"), "a.com\tx\nb.com\tx\nb.com\ty\n").unwrap();
    fs::write(d.join("seeds.tsv"), "http://www.A.com/\tadult\nb.com\tdecent\n").unwrap();
    linkprop(&["ingest", "--edges", p(&d.join("edges.tsv")), "--out-dir", p(d)]).unwrap();
    linkprop(&["propagate", "--seeds", p(&d.join("seeds.tsv")), "--out-dir", p(d)]).unwrap();
    let g = io::load_snapshot(&d.join(cli::SNAPSHOT_FILE)).unwrap();
    let f = io::read_scores(&d.join(cli::SCORES_FILE), &g).unwrap();
    assert!(f.adultness(0) > 0.0);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_linkprop");
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let ok = Command::new(bin).args(["gen", "--adult-sites", "3", "--out-dir", p(d)]).status().unwrap();
    assert_eq!(ok.code(), Some(0));
    let invalid = Command::new(bin).args(["propagate", "--alpha", "1.5", "--seeds", p(&d.join("seeds.tsv")), "--out-dir", p(d)]).output().unwrap();
    assert_eq!(invalid.status.code(), Some(2));
    let missing = Command::new(bin).args(["ingest", "--edges", p(&d.join("nope.tsv")), "--out-dir", p(d)]).status().unwrap();
    assert_eq!(missing.code(), Some(2));
    fs::write(d.join("edges.tsv"), "a.com\tx\n").unwrap();
    let unwritable = Command::new(bin)
        .args(["ingest", "--edges", p(&d.join("edges.tsv")), "--out-dir", p(&d.join("edges.tsv").join("sub"))])
        .status()
        .unwrap();
    assert_eq!(unwritable.code(), Some(3));
    let help = Command::new(bin).args(["sweep", "--help"]).output().unwrap();
    assert!(String::from_utf8_lossy(&help.stdout).contains("--alpha-grid"));
}
