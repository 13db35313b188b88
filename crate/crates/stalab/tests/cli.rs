use std::process::{Command, Output};

fn stalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stalab")).args(args).output().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn simulate_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"add": {"alpha": {"theta_dot": 2}}, "integrator": {"step": 1e-3, "record_every": 100}}"#,
    )
    .unwrap();
    let out = stalab(&["simulate", "--config", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,p1,p2,p1_rel,p2_rel,norm"));
    let last: Vec<f64> = lines.last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 1.0);
    assert!(last[2] > 0.98);

    let csv = dir.path().join("run.csv");
    let out = stalab(&["simulate", "--config", config.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(csv).unwrap(), text);
}

#[test]
fn simulate_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(&config, r#"{"schedule": {"zeta": 9}}"#).unwrap();
    let out = stalab(&["simulate", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown field `zeta`"), "{}", stderr(&out));

    let out = stalab(&["simulate", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read config"));
}

#[test]
fn figure_argument_errors() {
    let out = stalab(&["figure", "fig7"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("unknown figure"));
    let out = stalab(&["figure", "fig1a", "--grid", "0:1"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("invalid grid"));
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = stalab(&["figure", "fig3", "--protect", "3", "--out", d]);
    assert_eq!(out.status.code(), Some(2));
    let out = stalab(&["figure", "fig1a", "--step", "0.5", "--out", d]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("step"));
    let out = stalab(&["figure", "fig1a", "--tf", "-1", "--out", d]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure_options_shape_the_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = stalab(&[
        "figure",
        "fig2b",
        "--tf",
        "2",
        "--zeta2",
        "4",
        "--grid",
        "1:3:2",
        "--step",
        "1e-3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("fig2b.csv")).unwrap();
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 2 * 4001);
    assert_eq!((rows[0][0], rows[0][1]), (1.0, -2.0));
    assert_eq!((rows[rows.len() - 1][0], rows[rows.len() - 1][1]), (3.0, 2.0));
}

#[test]
fn protect_flag_switches_the_start() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let final_p2 = |protect: &str| {
        let out = stalab(&["figure", "fig3", "--step", "1e-3", "--protect", protect, "--out", d]);
        assert!(out.status.success());
        let text = std::fs::read_to_string(dir.path().join("fig3.csv")).unwrap();
        let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        last[4]
    };
    assert!(final_p2("1") < 0.01);
    assert!(final_p2("2") > 0.99);
}

#[test]
fn verify_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = stalab(&["verify", "--report", path.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().filter(|l| l.starts_with("[PASS]")).count(), 10);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    let criteria = report["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 10);
    for (k, c) in criteria.iter().enumerate() {
        assert_eq!(c["id"], k as u64 + 1);
        for check in c["checks"].as_array().unwrap() {
            assert!(check["measured"].is_number());
            assert!(check["threshold"].is_number());
            assert_eq!(check["pass"], true);
        }
    }
}
