use std::path::Path;
use std::process::{Command, Output};

fn ddqsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddqsl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().to_string())
        .collect()
}

#[test]
fn trace_starts_excited() {
    let out = ddqsl(&[
        "population-trace",
        "--gamma0",
        "5",
        "--n",
        "4",
        "--grid",
        "16",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,P"));
    assert_eq!(
        lines.next(),
        Some("0.0000000000000000e0,1.0000000000000000e0")
    );
    assert_eq!(text.lines().count(), 1 + 5 * 16 + 1);
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(last[0], 10.0);
}

#[test]
fn population_sweep_columns() {
    let out = ddqsl(&["population-sweep", "--gamma0", "0.2", "--n-max", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("gamma0,n,p_tau"));
    assert_eq!(column(&text, "n"), ["0", "1", "2", "3"]);
    let p: Vec<f64> = column(&text, "p_tau")
        .iter()
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((p[0] - 0.137_729_236_418_401_2).abs() < 1e-14);
}

#[test]
fn presets_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for preset in ["fig2", "fig3", "fig4"] {
        let a = dir.path().join(format!("{preset}_a.csv"));
        let b = dir.path().join(format!("{preset}_b.csv"));
        for path in [&a, &b] {
            let out = ddqsl(&[
                preset_command(preset),
                "--preset",
                preset,
                "--out",
                path.to_str().unwrap(),
            ]);
            assert!(
                out.status.success(),
                "{}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        let text = std::fs::read_to_string(&a).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * 26);
    }
}

fn preset_command(preset: &str) -> &'static str {
    match preset {
        "fig2" => "qslt-sweep",
        "fig3" => "population-sweep",
        "fig4" => "nonmarkov-sweep",
        _ => "population-trace",
    }
}

#[test]
fn trace_preset_writes_one_file_per_pulse_count() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("trace.csv");
    let out = ddqsl(&[
        "population-trace",
        "--preset",
        "fig5b",
        "--grid",
        "8",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for n in [0, 5, 10, 20] {
        let path = dir.path().join(format!("trace_g5_n{n}.csv"));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 1 + (n + 1) * 8 + 1);
    }
}

#[test]
fn verify_passes_and_detects_wrong_sign() {
    let ok = ddqsl(&["verify"]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    let text = stdout(&ok);
    assert!(text.starts_with("check,gamma0,n,max_deviation,tolerance,status\n"));
    assert!(column(&text, "status").iter().all(|s| s == "pass"));

    let bad = ddqsl(&["verify", "--inject-wrong-sign"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(column(&stdout(&bad), "status").iter().any(|s| s == "fail"));
}

#[test]
fn invalid_input_exits_with_one() {
    for args in [
        &["population-sweep", "--gamma0", "-1", "--n-max", "2"][..],
        &[
            "population-sweep",
            "--gamma0",
            "0.2",
            "--n",
            "2",
            "--n-max",
            "3",
        ],
        &["qslt-sweep", "--preset", "fig4"],
        &["population-trace", "--preset", "fig5a", "--gamma0", "1"],
        &[
            "population-trace",
            "--gamma0",
            "0.2",
            "--n",
            "2",
            "--grid",
            "1",
        ],
        &["population-sweep", "--n-max", "2"],
    ] {
        assert_eq!(ddqsl(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_with_three() {
    let out = ddqsl(&[
        "population-sweep",
        "--gamma0",
        "0.2",
        "--n-max",
        "1",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# strong coupling\ngamma0 = 5\nn_max = 2\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = stdout(&ddqsl(&["population-sweep", "--config", cfg]));
    assert_eq!(
        column(&from_file, "gamma0"),
        vec!["5.0000000000000000e0"; 3]
    );

    let overridden = stdout(&ddqsl(&[
        "population-sweep",
        "--config",
        cfg,
        "--gamma0",
        "0.2",
    ]));
    assert_eq!(
        column(&overridden, "gamma0"),
        vec!["2.0000000000000001e-1"; 3]
    );

    assert!(!Path::new(cfg).with_extension("csv").exists());
}

#[test]
fn nonmarkov_labels() {
    let text = stdout(&ddqsl(&["nonmarkov-sweep", "--gamma0", "5", "--n", "0"]));
    assert_eq!(column(&text, "optimal"), ["equator-pair"]);
    let text = stdout(&ddqsl(&["nonmarkov-sweep", "--gamma0", "5", "--n", "20"]));
    assert_eq!(column(&text, "optimal"), ["pole-pair"]);
}
