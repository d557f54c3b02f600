use std::fs;
use std::path::Path;
use std::process::Command;

use polybench::generators::FamilyId;
use polybench::vem::ModelProblem;
use polybench::Error;
use polybench_cli::analyze::{analyze, write_analysis};
use polybench_cli::dataset::{generate, Manifest};
use polybench_cli::measure::{measure, metrics_header, write_metrics};
use polybench_cli::report::write_report;
use polybench_cli::solve::{solve, write_solve, SOLVER_CSV};
use polybench_cli::table::CsvTable;
use polybench_cli::BenchmarkConfig;

fn small(out: &Path) -> BenchmarkConfig {
    BenchmarkConfig {
        families: vec![FamilyId::NSided, FamilyId::Star, FamilyId::Random],
        t_samples: 3,
        random_count: 2,
        levels: 2,
        seed: 7,
        out: out.to_path_buf(),
        ..Default::default()
    }
}

fn run_all(root: &Path, config: &BenchmarkConfig) -> Manifest {
    let manifest = generate(config).unwrap();
    let (rows, failures) = measure(root, &manifest);
    write_metrics(root, &rows, &failures).unwrap();
    let out = solve(root, &manifest, config.problem).unwrap();
    write_solve(root, &out, config.problem).unwrap();
    write_analysis(root, &analyze(root).unwrap()).unwrap();
    manifest
}

#[test]
fn full_pipeline_writes_every_output() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let manifest = run_all(root, &small(root));
    assert_eq!(manifest.entries.len(), 8);
    assert!(manifest.failures.is_empty());
    assert_eq!(manifest.entries[0].mesh_id, "nsided_00");
    assert_eq!(manifest.entries[7].mesh_id, "random_001");
    assert_eq!(manifest.entries[7].seed, Some(8));

    let metrics = CsvTable::read(&root.join("metrics.csv")).unwrap();
    assert_eq!(metrics.headers, metrics_header());
    assert_eq!(metrics.rows.len(), 16);
    let solver = CsvTable::read(&root.join(SOLVER_CSV)).unwrap();
    assert_eq!(solver.rows.len(), 16);
    assert!(solver.floats("eps_inf").unwrap().iter().all(|e| e.is_finite() && *e > 0.0));
    let conv = CsvTable::read(&root.join("convergence.csv")).unwrap();
    assert_eq!(conv.rows.len(), 8);

    for name in ["corr_geometry", "corr_solver", "corr_geometry_solver"] {
        let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(root.join(format!("{name}.json"))).unwrap()).unwrap();
        let k = json["labels"].as_array().unwrap().len();
        assert_eq!(json["rho"].as_array().unwrap().len(), k);
        assert_eq!(json["class"].as_array().unwrap().len(), k);
        assert!(root.join(format!("{name}.csv")).exists());
    }
    let a: serde_json::Value = serde_json::from_str(&fs::read_to_string(root.join("analysis.json")).unwrap()).unwrap();
    assert_eq!(a["level"], 1);
    assert_eq!(a["geometry_solver"]["labels"].as_array().unwrap().len(), 10);

    let report = write_report(root).unwrap();
    assert_eq!(report["solver"].as_array().unwrap().len(), 16);
    assert_eq!(report["manifest"]["entries"].as_array().unwrap().len(), 8);
}

#[test]
fn generation_is_byte_identical_per_seed() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    generate(&small(a.path())).unwrap();
    generate(&small(b.path())).unwrap();
    let listing = |root: &Path, sub: &str| {
        let mut v: Vec<_> = fs::read_dir(root.join(sub)).unwrap().map(|e| e.unwrap().file_name()).collect();
        v.sort();
        v
    };
    for sub in ["polygons", "meshes"] {
        let names = listing(a.path(), sub);
        assert_eq!(names, listing(b.path(), sub));
        for n in names {
            assert_eq!(fs::read(a.path().join(sub).join(&n)).unwrap(), fs::read(b.path().join(sub).join(&n)).unwrap());
        }
    }
    assert_eq!(fs::read(a.path().join("manifest.json")).unwrap(), fs::read(b.path().join("manifest.json")).unwrap());
}

#[test]
fn a_different_seed_changes_the_random_polygons() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    generate(&small(a.path())).unwrap();
    generate(&BenchmarkConfig { seed: 8, ..small(b.path()) }).unwrap();
    let read = |root: &Path, id: &str| fs::read(root.join(format!("polygons/{id}.txt"))).unwrap();
    assert_ne!(read(a.path(), "random_000"), read(b.path(), "random_000"));
    assert_eq!(read(a.path(), "random_001"), read(b.path(), "random_000"));
    assert_eq!(read(a.path(), "star_01"), read(b.path(), "star_01"));
}

/// Replaces one mesh level with a square plus a collinear cell.
fn break_mesh(root: &Path, manifest: &Manifest, index: usize) -> String {
    let entry = &manifest.entries[index];
    let files = &entry.levels[0];
    let off = "OFF\n5 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n0.5 0 0\n5 0 4 1 2 3\n3 0 4 1\n";
    fs::write(root.join(&files.off), off).unwrap();
    fs::write(root.join(&files.tags), "P\nP\n").unwrap();
    entry.mesh_id.clone()
}

#[test]
fn a_degenerate_cell_fails_only_its_row() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let manifest = generate(&small(root)).unwrap();
    let broken = break_mesh(root, &manifest, 2);

    let (rows, failures) = measure(root, &manifest);
    assert_eq!(rows.len(), 16);
    assert_eq!(failures.len(), 1);
    assert_eq!((failures[0].mesh_id.as_str(), failures[0].level), (broken.as_str(), Some(0)));
    let bad = rows.iter().find(|r| r.mesh_id == broken && r.level == 0).unwrap();
    assert!(bad.worst.iter().all(|v| v.is_nan()));

    let out = solve(root, &manifest, ModelProblem::SinSin).unwrap();
    write_solve(root, &out, ModelProblem::SinSin).unwrap();
    assert!(out.rows.iter().filter(|r| r.mesh_id != broken).all(|r| r.report.is_some()));
    assert!(out.rows.iter().any(|r| r.mesh_id == broken && r.report.is_none()));
    assert!(out.failures.iter().any(|f| f.mesh_id == broken && f.level == Some(0)));
    let fit = out.convergence.iter().find(|c| c.mesh_id == broken).unwrap();
    assert!(fit.fit.is_none());
    let text = fs::read_to_string(root.join(SOLVER_CSV)).unwrap();
    assert!(text.lines().any(|l| l.starts_with(&format!("{broken},")) && l.ends_with("NaN,NaN,NaN,NaN")));
}

#[test]
fn mismatched_ids_are_a_join_error() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    run_all(root, &small(root));
    let text = fs::read_to_string(root.join(SOLVER_CSV)).unwrap();
    let kept: Vec<&str> = text.lines().filter(|l| !l.starts_with("star_02,")).collect();
    fs::write(root.join(SOLVER_CSV), kept.join("\n") + "\n").unwrap();
    assert!(matches!(analyze(root), Err(Error::MissingJoin(id)) if id == "star_02@1"));
}

#[test]
fn without_canvas_only_polygons_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let config = BenchmarkConfig { canvas: false, ..small(root) };
    let manifest = generate(&config).unwrap();
    assert!(!root.join("meshes").exists());
    assert!(manifest.entries.iter().all(|e| e.levels.is_empty()));
    let (rows, failures) = measure(root, &manifest);
    assert!(failures.is_empty());
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.level == 0 && r.polygons.iter().all(|s| s[0] == s[2])));
    assert!(solve(root, &manifest, ModelProblem::SinSin).is_err());
}

#[test]
fn linear_problem_skips_the_fit() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let config = BenchmarkConfig { families: vec![FamilyId::Star], t_samples: 2, ..small(root) };
    let manifest = generate(&config).unwrap();
    let out = solve(root, &manifest, ModelProblem::Linear).unwrap();
    write_solve(root, &out, ModelProblem::Linear).unwrap();
    assert!(out.convergence.is_empty());
    assert!(out.rows.iter().all(|r| r.report.unwrap().eps_inf < 1e-10));
    assert!(!root.join("convergence.csv").exists());
}

#[test]
fn binary_reports_failures_in_its_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let bin = env!("CARGO_BIN_EXE_polybench");
    let run = |cmd: &str| {
        Command::new(bin)
            .args([cmd, "--families", "nsided,star", "--t-samples", "2", "--levels", "2", "--out"])
            .arg(root)
            .status()
            .unwrap()
            .code()
    };
    assert_eq!(run("generate"), Some(0));
    assert_eq!(run("measure"), Some(0));
    let manifest = Manifest::load(root).unwrap();
    break_mesh(root, &manifest, 0);
    assert_eq!(run("solve"), Some(1));
    assert_eq!(run("report"), Some(1));
    assert!(root.join("report.json").exists());
    let missing = Command::new(bin).args(["measure", "--out"]).arg(root.join("nothing")).status().unwrap();
    assert_eq!(missing.code(), Some(2));
    let bad = Command::new(bin).args(["generate", "--families", "hexagons"]).status().unwrap();
    assert_eq!(bad.code(), Some(2));
}
