use std::path::Path;
use std::process::{Command, Output};

fn simquery(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simquery"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_graph(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

const BRIDGE: &str = "n=4\n0,1,1\n2,3,1\n1,2,0.5\n";

#[test]
fn identical_graphs_pass_both_checks() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "g.csv", BRIDGE);
    for kind in ["cut", "spectral"] {
        let out = simquery(&["check", kind, "--g", "g.csv", "--gtilde", "g.csv", "--eps", "0.1"], dir.path());
        assert_eq!(out.status.code(), Some(0), "{kind}");
        let report = json(&out);
        assert_eq!(report["holds"], true);
        assert_eq!(report["kind"], kind);
    }
}

#[test]
fn failed_check_exits_3_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "g.csv", BRIDGE);
    write_graph(dir.path(), "h.csv", "n=4\n0,1,1\n2,3,1\n1,2,1\n");
    let out = simquery(&["check", "cut", "--g", "g.csv", "--gtilde", "h.csv", "--eps", "0.1"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let report = json(&out);
    assert_eq!(report["holds"], false);
    assert_eq!(report["worstRatio"], 2.0);
    assert!(report["witness"].is_array());
}

#[test]
fn bounds_print_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = simquery(&["bounds", "theorem2", "--n", "20", "--c", "1", "--delta", "0.5"], dir.path());
    assert!(out.status.success());
    assert_eq!(json(&out)["value"], 95.0);

    let out = simquery(
        &["bounds", "theorem4", "--n", "30", "--c-in", "10", "--c-out", "1", "--ell", "3", "--delta", "0.1"],
        dir.path(),
    );
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["exceedsAllPairs"], true);
    assert_eq!(v["totalPairs"], 435);
}

#[test]
fn violated_assumption_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = simquery(
        &["bounds", "theorem4", "--n", "30", "--c-in", "4", "--c-out", "1", "--ell", "3", "--delta", "0.1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "no_such_key = 1\n").unwrap();
    let out = simquery(&["experiment", "run", "--config", "bad.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = simquery(&["experiment", "run", "--config", "missing.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "n_per_class = 10\nrepetitions = 2\nbudgets = [20, 60]\noutput = \"out.csv\"\n";
    std::fs::write(dir.path().join("exp.toml"), cfg).unwrap();
    let out = simquery(&["experiment", "run", "--config", "exp.toml"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert!(rows.starts_with("scheme,budget,rep,seed,purity,wallMillis\n"));
    assert_eq!(rows.lines().count(), 1 + 2 * 2 * 2);
    let summary = std::fs::read_to_string(dir.path().join("out.summary.csv")).unwrap();
    assert!(summary.starts_with("scheme,budget,reps,meanPurity,stdPurity\n"));
    assert_eq!(summary.lines().count(), 1 + 2 * 2);
}

#[test]
fn default_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = simquery(&["experiment", "default-config"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("sigma_scale = 0.1"));
    simquery::experiment::ExperimentConfig::from_toml_str(&text).unwrap();
}

#[test]
fn sample_full_budget_reproduces_graph() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "g.csv", BRIDGE);
    for scheme in ["uniform", "clus2k", "cjoin"] {
        let out = simquery(
            &["sample", scheme, "--graph", "g.csv", "--m", "6", "--out", "s.csv", "--trajectory", "t.csv"],
            dir.path(),
        );
        assert!(out.status.success(), "{scheme}");
        assert_eq!(json(&out)["observedPairs"], 6);
        let sampled = simquery::graph::Graph::from_csv_str(&std::fs::read_to_string(dir.path().join("s.csv")).unwrap())
            .unwrap();
        let hidden = simquery::graph::Graph::from_csv_str(BRIDGE).unwrap();
        assert_eq!(sampled.weights(), hidden.weights(), "{scheme}");
        let trajectory = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
        assert_eq!(trajectory.lines().count(), 7);
    }
}

#[test]
fn oversized_budget_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "g.csv", BRIDGE);
    let out = simquery(&["sample", "uniform", "--graph", "g.csv", "--m", "7"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generated_planted_graph_reports_structure() {
    let dir = tempfile::tempdir().unwrap();
    let out = simquery(
        &["generate", "planted", "--sizes", "6,6", "--cross", "uniform", "--cross-edges", "1", "--out", "p.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["n"], 12);
    assert_eq!(v["cIn"], 5.0);
    assert_eq!(v["cOut"], 1.0);
    assert_eq!(v["separated"], true);
}
