use std::process::Command;

use proptest::prelude::*;
use zeta_omega_cli::config::{Format, GridOverrides, RunConfig, TolOverrides, ZValue};
use zeta_omega_cli::report::Report;
use zeta_omega_cli::run::run;

fn cfg(ids: &[&str], digits: u32) -> RunConfig {
    RunConfig { identities: ids.iter().map(|s| s.to_string()).collect(), digits: Some(digits), ..Default::default() }
}

/// Report with the fields that legitimately differ between runs blanked.
fn stable(mut r: Report) -> String {
    r.meta.timestamp.clear();
    for rec in &mut r.records {
        rec.runtime_ms = 0;
    }
    r.to_json()
}

#[test]
fn schloemilch_single_pass() {
    let r = run(&cfg(&["R7"], 30)).unwrap();
    assert_eq!(r.records.len(), 1);
    assert_eq!(r.records[0].status, "pass");
    assert_eq!((r.summary.pass, r.summary.fail, r.summary.skipped), (1, 0, 0));
}

#[test]
fn excluded_z_is_skipped_with_reason() {
    let mut c = cfg(&["T2"], 30);
    c.grid.z = vec![ZValue { re: 3.0, im: 0.0 }];
    let r = run(&c).unwrap();
    assert!(!r.records.is_empty());
    for rec in &r.records {
        assert_eq!(rec.status, "skipped");
        assert!(rec.reason.as_deref().unwrap().contains("z in exclusion set"));
    }
    assert_eq!(r.summary.skipped, r.records.len());
}

#[test]
fn summary_matches_records() {
    let r = run(&cfg(&["R1", "R5", "K2"], 30)).unwrap();
    let count = |s: &str| r.records.iter().filter(|x| x.status == s).count();
    assert_eq!(r.summary.pass, count("pass"));
    assert_eq!(r.summary.fail, count("fail"));
    assert_eq!(r.summary.skipped, count("skipped"));
}

#[test]
fn runs_are_deterministic_and_width_independent() {
    let mut c = cfg(&["R1", "R8", "T1", "C3"], 30);
    let serial = stable(run(&c).unwrap());
    assert_eq!(serial, stable(run(&c).unwrap()));
    c.jobs = 8;
    assert_eq!(serial, stable(run(&c).unwrap()));
}

#[test]
fn report_parses_back() {
    let r = run(&cfg(&["R6"], 30)).unwrap();
    let back: Report = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
    let csv = r.to_csv().unwrap();
    assert_eq!(csv.lines().count(), r.records.len() + 1);
}

#[test]
fn records_rerun_exactly() {
    let r = run(&cfg(&["T2"], 30)).unwrap();
    let rec = r.records.iter().find(|x| x.status == "pass").unwrap();
    let p = &rec.params;
    let mut c = cfg(&["T2"], 30);
    c.grid = GridOverrides {
        t: vec![p.t.parse().unwrap()],
        m: vec![p.m],
        z: vec![ZValue { re: p.z.as_ref().unwrap().re.parse().unwrap(), im: p.z.as_ref().unwrap().im.parse().unwrap() }],
        ..Default::default()
    };
    let again = run(&c).unwrap();
    assert_eq!(again.records.len(), 1);
    assert_eq!(again.records[0].lhs, rec.lhs);
    assert_eq!(again.records[0].rhs, rec.rhs);
}

#[test]
fn atomic_write_replaces_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    std::fs::write(&path, "old").unwrap();
    Report::write_atomic("new\n", &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "new\n");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

fn zomega(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_zomega")).args(args).env_remove("ZOMEGA_DIGITS").output().unwrap()
}

#[test]
fn binary_exit_codes() {
    let ok = zomega(&["verify", "-i", "R7", "--digits", "30"]);
    assert_eq!(ok.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report.summary.pass, 1);

    let bad = zomega(&["verify", "-i", "R7", "-i", "Q9", "--digits", "30"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("Q9"));

    let skipped = zomega(&["verify", "-i", "T2", "--z", "3", "--m", "-2", "--t", "1", "--digits", "30"]);
    assert_eq!(skipped.status.code(), Some(0));
}

#[test]
fn binary_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = zomega(&["verify", "-i", "R6", "--digits", "30", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("id,form,t,"));
    assert!(text.lines().nth(1).unwrap().starts_with("R6,"));
}

#[test]
fn config_file_and_flags_merge() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"identities": ["R7"], "digits": 25, "format": "csv"}"#).unwrap();
    let out = zomega(&["verify", "--config", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.meta.digits, 25);
}

#[test]
fn explain_and_probe() {
    let out = zomega(&["explain", "T8"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("h != (N+1)/2"));
    let out = zomega(&["explain", "T1"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("alpha*beta = pi^2"));
    let out = zomega(&["probe", "bessel-k", "--order", "0", "--arg", "1", "--digits", "30"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("4.21024438240708333335627379213e-1"));
    assert_eq!(zomega(&["explain", "X1"]).status.code(), Some(2));
}

fn id_strategy() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["all", "R1", "R7", "T2", "C5", "t9", "K1"]).prop_map(String::from)
}

fn z_strategy() -> impl Strategy<Value = ZValue> {
    (-4i32..4, -4i32..4).prop_map(|(a, b)| ZValue { re: f64::from(a) / 4.0, im: f64::from(b) / 8.0 })
}

proptest! {
    #[test]
    fn config_round_trips(
        ids in prop::collection::vec(id_strategy(), 1..4),
        t in prop::collection::vec(0.1f64..5.0, 0..3),
        m in prop::collection::vec(-6i64..6, 0..3),
        z in prop::collection::vec(z_strategy(), 0..3),
        n in prop::collection::vec(1u32..6, 0..2),
        digits in prop::option::of(15u32..120),
        rel in prop::option::of(1e-40f64..1e-5),
        out in prop::option::of("[a-z]{1,8}\\.json"),
        csv in any::<bool>(),
        jobs in 1usize..16,
    ) {
        let c = RunConfig {
            identities: ids,
            grid: GridOverrides { t, m, z, n, ..Default::default() },
            digits,
            tol: TolOverrides { rel, ..Default::default() },
            out,
            format: if csv { Format::Csv } else { Format::Json },
            jobs,
        };
        prop_assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
    }
}
