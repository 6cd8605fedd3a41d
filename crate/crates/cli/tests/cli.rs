use std::path::Path;
use std::process::{Command, Output};

use poincare_cli::config::{RunConfig, Schedule, OUTPUT_DIR_ENV};
use poincare_core::dynamics::TheoryId;
use poincare_core::kinematics::{GridSpec, PacketSpec, Placement};
use poincare_core::representation::{GroupElement, RepClass};
use proptest::prelude::*;
use serde_json::Value;

fn poincare(cwd: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poincare"))
        .args(args)
        .current_dir(cwd)
        .env_remove(OUTPUT_DIR_ENV)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn entries(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    names
}

#[test]
fn classify_prints_eight_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = poincare(dir.path(), &["classify"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).filter(|l| !l.starts_with("K:")).collect();
    assert_eq!(rows.len(), 8);
    let t3 = rows.iter().find(|r| r.trim_end().ends_with("T3")).unwrap();
    assert!(t3.contains("unitary      antiunitary"), "{t3}");
    assert!(entries(dir.path()).is_empty());
}

#[test]
fn forbidden_query_names_the_rule() {
    let dir = tempfile::tempdir().unwrap();
    let o = poincare(dir.path(), &["classify", "--forbidden", "down/unitary/antiunitary/+"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("unitary time reversal requires"));
    let o = poincare(dir.path(), &["classify", "--forbidden", "up/antiunitary/antiunitary/+"]);
    assert!(stdout(&o).contains("anti-unitary space inversion requires"));
    let o = poincare(dir.path(), &["classify", "--forbidden", "sideways/unitary/unitary/+"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn determine_reports_four_unique_classes() {
    let dir = tempfile::tempdir().unwrap();
    let o = poincare(dir.path(), &["determine", "--seed", "3", "--out", "out"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&dir.path().join("out/determination.json"));
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 8);
    let unique = reports.iter().filter(|r| r["verdict"] == "unique").count();
    assert_eq!(unique, 4);
    let dims: Vec<u64> = ["UU+", "UU-", "UA.i", "AA.i"]
        .iter()
        .map(|case| {
            let r = reports.iter().find(|r| r["case"] == *case).unwrap();
            r["shells"].as_array().unwrap().iter().map(|s| s["nullspace_dim"].as_u64().unwrap()).max().unwrap()
        })
        .collect();
    assert_eq!(dims, [2, 1, 1, 1]);

    let o = poincare(dir.path(), &["determine", "--seed", "3", "--out", "one", "--class", "U3"]);
    assert!(o.status.success());
    assert_eq!(read_json(&dir.path().join("one/determination.json"))["reports"].as_array().unwrap().len(), 1);
}

#[test]
fn seed_is_mandatory() {
    let dir = tempfile::tempdir().unwrap();
    let o = poincare(dir.path(), &["determine", "--out", "out"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn evolve_keeps_norms_and_tracks_velocity() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["evolve", "--seed", "5", "--out", "ev", "--theory", "T1", "--center", "0.6,0,0", "--snapshots", "5"];
    let o = poincare(dir.path(), &args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = read_json(&dir.path().join("ev/evolve.json"));
    let norms: Vec<f64> = m["norms"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(norms.len(), 5);
    assert!(norms.iter().all(|n| (n - norms[0]).abs() < 1e-10));
    let drift = m["residuals"]["drift"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).fold(0.0, f64::max);
    assert!(drift < 1e-3, "{drift}");
    assert!(m["velocity"][0].as_f64().unwrap() > 0.1);
    let csv = std::fs::read_to_string(dir.path().join("ev/density-000.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x1,x2,x3,value"));
    assert_eq!(csv.lines().count(), 1 + 32 * 32);
}

#[test]
fn zero_snapshots_write_only_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = poincare(dir.path(), &["evolve", "--seed", "5", "--out", "ev", "--theory", "T3", "--snapshots", "0"]);
    assert!(o.status.success());
    assert_eq!(entries(&dir.path().join("ev")), ["evolve.json"]);
}

#[test]
fn evolve_without_theory_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = poincare(dir.path(), &["evolve", "--seed", "5", "--out", "ev"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mismatched_packet_sector_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = poincare(dir.path(), &["evolve", "--seed", "5", "--out", "ev", "--theory", "T1", "--sector", "plus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn demo_reports_negative_rho_hat_and_non_negative_rho() {
    let dir = tempfile::tempdir().unwrap();
    let o = poincare(dir.path(), &["demo-negative-density", "--seed", "9", "--out", "demo"]);
    assert!(o.status.success());
    let m = read_json(&dir.path().join("demo/demo.json"));
    assert!(m["min_rho_hat"]["value"].as_f64().unwrap() < 0.0);
    assert!(m["min_rho"]["value"].as_f64().unwrap() >= 0.0);
    assert!(m["charge_drift"].as_f64().unwrap() < 1e-8);
    assert!((m["rho_integral"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    for f in ["demo-state.json", "demo-state.bin", "rho-hat.csv", "rho.csv"] {
        assert!(dir.path().join("demo").join(f).exists(), "{f}");
    }
}

#[test]
fn verify_only_runs_one_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = poincare(dir.path(), &["verify", "--seed", "1", "--out", "v", "--only", "mass-shell"]);
    assert_eq!(o.status.code(), Some(0));
    let r = read_json(&dir.path().join("v/report.json"));
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["check"], "mass-shell");
}

#[test]
fn verify_exit_status_follows_the_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = poincare(dir.path(), &["verify", "--seed", "1", "--out", "v", "--only", "canonical-commutator"]);
    let r = read_json(&dir.path().join("v/report.json"));
    let expected = if r["pass"].as_bool().unwrap() { 0 } else { 1 };
    assert_eq!(o.status.code(), Some(expected));
}

#[test]
fn bad_check_name_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = poincare(dir.path(), &["verify", "--seed", "1", "--out", "v", "--only", "no-such-check"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("v").exists());
}

#[test]
fn output_dir_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_poincare"))
        .args(["determine", "--seed", "2", "--class", "up"])
        .current_dir(dir.path())
        .env(OUTPUT_DIR_ENV, "from-env")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(entries(dir.path()), ["from-env"]);
    assert_eq!(entries(&dir.path().join("from-env")), ["determination.json"]);
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        grid: GridSpec::new(16, 10.0, 1.0),
        theory: Some(TheoryId::T2),
        schedule: Schedule { t_start: 0.0, t_end: 0.5, snapshots: 2 },
        output_dir: Some("from-config".into()),
        ..Default::default()
    };
    std::fs::write(dir.path().join("run.json"), serde_json::to_string(&cfg).unwrap()).unwrap();
    let o = poincare(dir.path(), &["evolve", "--seed", "4", "--config", "run.json", "--snapshots", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = read_json(&dir.path().join("from-config/evolve.json"));
    assert_eq!(m["theory"], "T2");
    assert_eq!(m["grid"]["n"], 16);
    assert_eq!(m["times"].as_array().unwrap().len(), 3);
    assert_eq!(m["seed"], 4);
    assert_eq!(entries(dir.path()), ["from-config", "run.json"]);
}

fn arb_config() -> impl Strategy<Value = RunConfig> {
    (
        (4usize..20, 1.0f64..20.0, 0.1f64..5.0),
        prop::option::of(any::<u64>()),
        prop::option::of(0usize..4),
        prop::option::of(prop::collection::vec(0usize..8, 0..4)),
        prop::collection::vec(((-1.0f64..1.0), 0.5f64..2.0, prop::bool::ANY), 0..3),
        prop::option::of(-0.5f64..0.5),
        (0.0f64..2.0, 0usize..10),
        prop::option::of(prop::collection::vec("[a-z-]{1,10}", 0..3)),
    )
        .prop_map(|(g, seed, theory, classes, packets, boost, (t, k), checks)| RunConfig {
            grid: GridSpec::new(2 * g.0, g.1, g.2),
            seed,
            theory: theory.map(|i| TheoryId::ALL[i]),
            classes: classes.map(|v| v.into_iter().map(|i| RepClass::ALL[i]).collect()),
            packets: packets
                .into_iter()
                .map(|(c, w, off)| {
                    let p = PacketSpec::new([c, 0.0, -c], w, Placement::Plus);
                    if off {
                        p.with_offset([0.1, c, 0.0])
                    } else {
                        p
                    }
                })
                .collect(),
            boost: boost.map(|rapidity| GroupElement::Boost { axis: [0.0, 1.0, 0.0], rapidity }),
            schedule: Schedule { t_start: t, t_end: t + 1.0, snapshots: k },
            output_dir: None,
            checks,
            probe_count: 12,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trips(cfg in arb_config()) {
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
