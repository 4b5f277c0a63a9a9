use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn relvc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relvc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn metric<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["metrics"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["name"] == name)
        .unwrap_or_else(|| panic!("no metric {name}"))
}

#[test]
fn bound_expected_error() {
    let report = json(&relvc(&["bound", "--d", "1", "--n", "200", "--k", "2"]));
    let bound = report["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["name"] == "expected-error")
        .unwrap();
    let raw = bound["raw"].as_f64().unwrap();
    assert!((raw - 0.709_834_761_986_085_7).abs() < 1e-12, "{raw}");
}

#[test]
fn q_exact_on_smokers_fixture() {
    let out = relvc(&[
        "q-exact",
        "--generator",
        "smokers-probability",
        "--formula",
        "forall X : sm(X)",
        "--k",
        "1",
    ]);
    let report = json(&out);
    assert_eq!(metric(&report, "q")["rational"], "2/3");
}

#[test]
fn vc_of_thresholds_is_one() {
    let report = json(&relvc(&[
        "vc",
        "--generator",
        "smokers",
        "--threshold",
        "atom-count:fr",
        "--k",
        "2",
    ]));
    assert_eq!(metric(&report, "dimension")["value"], 1);
    assert_eq!(metric(&report, "exact")["value"], true);
}

#[test]
fn vc_over_omega() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.txt");
    std::fs::write(&path, "domain: alice\nsm(alice)\n").unwrap();
    let report = json(&relvc(&[
        "vc",
        "--example",
        path.to_str().unwrap(),
        "--formula",
        "forall X : sm(X)",
        "--k",
        "1",
        "--omega",
    ]));
    assert_eq!(metric(&report, "universe_size")["value"], 2);
    assert_eq!(metric(&report, "dimension")["value"], 0);
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn ablation_fails_with_its_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "ablation.toml",
        "[experiment]\nname = \"distribution-equality\"\n[params]\ncases = [[4, 3, 1]]\nablation = true\n",
    );
    let out = relvc(&["experiment", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(13));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdicts"][0]["pass"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));

    let clean = write_config(
        dir.path(),
        "clean.toml",
        "[experiment]\nname = \"distribution-equality\"\n[params]\ncases = [[4, 3, 1]]\n",
    );
    let report = json(&relvc(&["experiment", "--config", &clean]));
    assert_eq!(metric(&report, "tv(4,3,1)")["rational"], "0");
    assert_eq!(metric(&report, "outcomes_iid(4,3,1)")["value"], 64);
}

#[test]
fn config_relative_paths_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("smokers.txt"),
        "domain: alice bob eve\nfr(alice,bob)\nsm(alice)\nsm(eve)\n",
    )
    .unwrap();
    let cfg = write_config(
        dir.path(),
        "q.toml",
        "[experiment]\nname = \"q-exact\"\nseed = 4\n[generator]\nkind = \"explicit-file\"\npath = \"smokers.txt\"\n[class]\nformula = \"exists X Y : fr(X, Y)\"\n[params]\nk = 2\n",
    );
    let report = json(&relvc(&["experiment", "--config", &cfg, "--seed", "8"]));
    assert_eq!(report["seed"], 8);
    assert_eq!(metric(&report, "q")["rational"], "1/3");
    let named = json(&relvc(&["experiment", "q-exact", "--config", &cfg]));
    assert_eq!(metric(&named, "q")["rational"], "1/3");
}

#[test]
fn csv_and_plot_formats() {
    let csv = relvc(&[
        "bound", "--d", "2", "--n", "50", "--k", "1", "--q", "40", "--format", "csv",
    ]);
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "experiment,record,series,x,value,hits,trials,bound_raw,bound_clamped,sigma,vacuous,pass,margin"
    );
    assert_eq!(text.lines().filter(|l| l.contains(",grid,tail,")).count(), 20);
    assert_eq!(
        text.lines().filter(|l| l.contains(",grid,hoeffding-blocks,")).count(),
        20
    );

    let plot = relvc(&["bound", "--d", "2", "--n", "50", "--k", "1", "--format", "plot"]);
    let text = String::from_utf8(plot.stdout).unwrap();
    assert!(text.contains("# tail\n"));
    let first = text.lines().find(|l| !l.starts_with('#') && !l.is_empty()).unwrap();
    assert_eq!(first.split_whitespace().count(), 2);
}

#[test]
fn out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = relvc(&[
        "q-mc",
        "--generator",
        "erdos-renyi",
        "--nodes",
        "10",
        "--probability",
        "0.3",
        "--formula",
        "exists X Y : edge(X, Y)",
        "--k",
        "2",
        "--trials",
        "500",
        "--seed",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let first: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(metric(&first, "trials")["value"], 500);
    let again = json(&relvc(&[
        "q-mc",
        "--generator",
        "erdos-renyi",
        "--nodes",
        "10",
        "--probability",
        "0.3",
        "--formula",
        "exists X Y : edge(X, Y)",
        "--k",
        "2",
        "--trials",
        "500",
        "--seed",
        "3",
    ]));
    assert_eq!(metric(&first, "q_mc"), metric(&again, "q_mc"));
}

#[test]
fn errors_exit_with_two() {
    let out = relvc(&[
        "q-exact",
        "--generator",
        "smokers",
        "--formula",
        "forall X : sm(Y)",
        "--k",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let out = relvc(&["experiment"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_configs_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            relvc::experiments::ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert!(seen >= 5);
    let q = json(&relvc(&["experiment", "--config", dir.join("q-exact.toml").to_str().unwrap()]));
    assert_eq!(metric(&q, "q")["rational"], "1/3");
}
