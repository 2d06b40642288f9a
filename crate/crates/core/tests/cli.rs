use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use induct::mip::{build_mip, encode_solution, oracle_solve, write_values, MipOptions, OracleLimits};
use induct::model::io::{read_instance, read_solution};
use induct::model::validate_solution;
use tempfile::TempDir;

fn induct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_induct")).args(args).env_remove("INDUCT_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn catalog(dir: &Path) -> PathBuf {
    let o = induct(&["catalog", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    dir.to_path_buf()
}

fn golden(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_and_bad_arguments() {
    assert_eq!(induct(&["--help"]).status.code(), Some(0));
    assert_eq!(induct(&["solve"]).status.code(), Some(1));
    assert_eq!(induct(&["no-such-command"]).status.code(), Some(1));
    let o = induct(&["validate", "--instance", "/nonexistent.json", "--solution", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn solve_writes_every_output_and_validates() {
    let tmp = TempDir::new().unwrap();
    let inst = catalog(&tmp.path().join("inst")).join("fig3-toy.json");
    let out = tmp.path().join("run");
    let o = induct(&["solve", "--instance", s(&inst), "--out", s(&out), "--max-iterations", "30", "--time-limit", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("fig3-toy: total "));
    for ext in ["solution.json", "costs.csv", "trajectory.csv", "operators.csv", "meta.json"] {
        assert!(out.join(format!("fig3-toy.{ext}")).is_file(), "{ext}");
    }
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("fig3-toy.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["status"], "feasible");
    assert_eq!(meta["stopped_by"], "iterations");
    assert_eq!(meta["iterations"], 30);

    let doc = read_solution(&out.join("fig3-toy.solution.json")).unwrap();
    let instance = read_instance(&inst).unwrap();
    assert!(validate_solution(&instance, &doc.solution).is_ok());
    let costs = fs::read_to_string(out.join("fig3-toy.costs.csv")).unwrap();
    let total: f64 = costs.lines().last().unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((total - doc.solution.total_cost).abs() < 1e-8);

    let sol = out.join("fig3-toy.solution.json");
    let o = induct(&["validate", "--instance", s(&inst), "--solution", s(&sol)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid"));
}

#[test]
fn tampered_solution_fails_validation() {
    let tmp = TempDir::new().unwrap();
    let dir = catalog(tmp.path());
    let inst = dir.join("fig3-toy.json");
    let sol = tmp.path().join("opt.json");
    assert_eq!(induct(&["oracle", "--instance", s(&inst), "--out", s(&sol)]).status.code(), Some(0));
    let mut doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sol).unwrap()).unwrap();
    doc["solution"]["total_cost"] = serde_json::json!(0.0);
    fs::write(&sol, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = induct(&["validate", "--instance", s(&inst), "--solution", s(&sol)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("invalid"));
}

#[test]
fn infeasible_instance_exits_with_two() {
    let tmp = TempDir::new().unwrap();
    let inst = catalog(tmp.path()).join("infeasible-window.json");
    let o = induct(&["oracle", "--instance", s(&inst)]);
    assert_eq!(o.status.code(), Some(2));
    let out = tmp.path().join("run");
    let o = induct(&["solve", "--instance", s(&inst), "--out", s(&out), "--max-iterations", "5", "--time-limit", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("infeasible-window.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["status"], "infeasible");
    assert!(!out.join("infeasible-window.solution.json").exists());
}

#[test]
fn batch_writes_an_aggregate_row_per_instance() {
    let tmp = TempDir::new().unwrap();
    let dir = catalog(tmp.path());
    let out = tmp.path().join("run");
    let a = dir.join("fig3-toy.json");
    let b = dir.join("single-station.json");
    let o = induct(&[
        "solve", "--instance", s(&a), s(&b), s(&a), "--out", s(&out), "--max-iterations", "10", "--time-limit", "0",
        "--threads", "2", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let agg = fs::read_to_string(out.join("aggregate.csv")).unwrap();
    let names: Vec<&str> = agg.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(names, ["fig3-toy", "single-station", "fig3-toy-2"]);
    assert_eq!(stdout(&o), agg);
}

#[test]
fn dump_graph_and_lp_match_the_goldens() {
    let tmp = TempDir::new().unwrap();
    let inst = catalog(tmp.path()).join("fig4-triangle.json");
    let o = induct(&["dump-graph", "--instance", s(&inst)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("fig4-triangle.graph.txt"));
    let lp = tmp.path().join("t.lp");
    let o = induct(&["export-mip", "--instance", s(&inst), "--out", s(&lp)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&lp).unwrap(), golden("fig4-triangle.lp"));
    assert_eq!(induct(&["dump-graph", "--instance", s(&inst), "--config", "y=11"]).status.code(), Some(1));
    assert_eq!(induct(&["dump-graph", "--instance", s(&inst), "--vehicle", "9"]).status.code(), Some(1));
}

/// Row names and variable names read back from the LP text alone.
fn parse_lp(text: &str) -> (usize, BTreeSet<String>) {
    let mut section = "";
    let mut rows = 0;
    let mut vars = BTreeSet::new();
    for line in text.lines() {
        let t = line.trim();
        if t.starts_with('\\') || t.is_empty() {
            continue;
        }
        match t {
            "Minimize" | "Subject To" | "Bounds" | "Generals" | "Binaries" | "End" => {
                section = t;
                continue;
            }
            _ => {}
        }
        let body = match t.split_once(':') {
            Some((_, rest)) => {
                if section == "Subject To" {
                    rows += 1;
                }
                rest
            }
            None => t,
        };
        for tok in body.split_whitespace() {
            let name_like = tok.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) && !tok.eq_ignore_ascii_case("inf");
            if name_like && !matches!(tok, "free" | "Free") {
                vars.insert(tok.to_string());
            }
        }
    }
    (rows, vars)
}

#[test]
fn golden_lp_counts_match_the_header_and_the_model() {
    let text = golden("fig4-triangle.lp");
    let (rows, vars) = parse_lp(&text);
    let header = text.lines().nth(1).unwrap();
    assert_eq!(header, format!("\\ variables {} rows {rows}", vars.len()));
    let inst = induct::instances::tiny::tiny_family("fig4-triangle").unwrap();
    let model = build_mip(&inst, MipOptions::default()).unwrap();
    assert_eq!((model.vars.len(), model.rows.len()), (vars.len(), rows));
}

#[test]
fn oracle_optimum_survives_export_and_import() {
    let tmp = TempDir::new().unwrap();
    let inst_path = catalog(tmp.path()).join("fig3-toy.json");
    let instance = read_instance(&inst_path).unwrap();
    let opt = oracle_solve(&instance, &OracleLimits::default()).unwrap().solution.unwrap();

    let sol = tmp.path().join("opt.json");
    assert_eq!(induct(&["oracle", "--instance", s(&inst_path), "--out", s(&sol)]).status.code(), Some(0));
    let lp = tmp.path().join("m.lp");
    let o = induct(&["export-mip", "--instance", s(&inst_path), "--out", s(&lp), "--warm-start", s(&sol)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(lp.with_extension("mst").is_file());

    let model = build_mip(&instance, MipOptions::default()).unwrap();
    let values = tmp.path().join("values.txt");
    fs::write(&values, write_values(&model, &encode_solution(&instance, &model, &opt).unwrap())).unwrap();
    let back = tmp.path().join("back.json");
    let o = induct(&["import-mip", "--instance", s(&inst_path), "--values", s(&values), "--out", s(&back)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc = read_solution(&back).unwrap();
    assert!((doc.solution.total_cost - opt.total_cost).abs() < 1e-6);
}

#[test]
fn generate_is_seeded() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for d in [&a, &b] {
        let o = induct(&["generate", "--out", s(d), "--seed", "5", "--count", "2"]);
        assert_eq!(o.status.code(), Some(0));
    }
    let files: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(files.len(), 2);
    for f in files {
        assert_eq!(fs::read(a.join(&f)).unwrap(), fs::read(b.join(&f)).unwrap());
    }
}
