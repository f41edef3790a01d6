use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leaf-ldp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect()
}

#[test]
fn pressure_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&[
            "pressure",
            "--alpha",
            "2",
            "--lambda-grid",
            "-5:5:0.1",
            "--no-header-timestamp",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(
        text.contains("# alpha: 2\n")
            && text.contains("# k0: 1\n")
            && text.contains("# kind: linear\n")
    );
    assert!(!text.contains("# generated:"));
    assert!(text.contains("alpha,lambda,pressure,dpressure,d2pressure,ode_residual\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 101);
    // 17 significant digits.
    let lambda = rows[60].split(',').nth(1).unwrap();
    assert_eq!(lambda, "1.0000000000000000e0");
}

#[test]
fn timestamp_is_on_by_default() {
    let o = run(&["pressure", "--lambda-grid", "0:1:1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("# generated: "));
}

#[test]
fn path_emits_one_trajectory_per_x() {
    let o = run(&[
        "path",
        "--alpha",
        "2",
        "--x",
        "0.13",
        "--x",
        "0.85",
        "--no-header-timestamp",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2 * 1001);
    assert!(text.contains("# x=0.13: cost="));
    let last_low: Vec<f64> = rows[1000].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last_low[3] - 0.13).abs() < 1e-8);
}

#[test]
fn json_rates() {
    let o = run(&[
        "rate",
        "--model",
        "yule",
        "--x",
        "0.2",
        "--x",
        "0.6",
        "--format",
        "json",
        "--no-header-timestamp",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["header"]["model"], "yule");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0]["rate"].as_f64().unwrap() > 0.0);
    assert!(
        rows[1]["rate"].is_string(),
        "x above the max slope has rate inf"
    );
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let args = [
        "simulate",
        "--model",
        "plane_oriented",
        "--n",
        "500",
        "--reps",
        "20",
        "--seed",
        "3",
        "--no-header-timestamp",
    ];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    assert_eq!(data_rows(&a).len(), 20);
    let mut other = args.to_vec();
    other[8] = "4";
    assert_ne!(a, stdout(&run(&other)));
    let tree = run(&[
        "simulate", "--object", "tree", "--model", "yule", "--n", "200", "--reps", "5",
    ]);
    assert!(stdout(&tree).contains("yule_cherries,200,"));
}

#[test]
fn pmf_modes() {
    let law = stdout(&run(&[
        "pmf",
        "--model",
        "uniform",
        "--n",
        "4",
        "--no-header-timestamp",
    ]));
    assert_eq!(data_rows(&law).len(), 4);
    let est = stdout(&run(&[
        "pmf",
        "--n",
        "50",
        "--mode",
        "estimators",
        "--lambda-grid",
        "-1:1:1",
    ]));
    assert!(est.contains("model,lambda,n,per_n,ratio,logderiv"));
    let roots = stdout(&run(&["pmf", "--n", "20", "--mode", "roots"]));
    assert!(roots.lines().last().unwrap().ends_with(",1,1"));
    let o = run(&["pmf", "--n", "50", "--mode", "roots"]);
    assert_eq!(o.status.code(), Some(1), "above the exact cap");
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "model = \"yule\"\nlambda_grid = \"0:1:0.5\"\nno_header_timestamp = true\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let o = stdout(&run(&["pressure", "--config", c]));
    assert!(o.contains("# model: yule\n") && o.contains("# alpha: 0.5\n"));
    assert_eq!(data_rows(&o).len(), 3);
    let o = stdout(&run(&[
        "pressure",
        "--config",
        c,
        "--lambda-grid",
        "0:2:0.5",
    ]));
    assert_eq!(data_rows(&o).len(), 5);
}

#[test]
fn exit_codes() {
    for args in [
        &["pressure", "--lambda-grid", "1:0:0.1"][..],
        &["pressure", "--model", "tree"],
        &["pressure", "--config", "/nonexistent/run.toml"],
        &["pressure", "--method", "closed", "--alpha", "3"],
        &[
            "simulate",
            "--object",
            "tree",
            "--model",
            "linear:alpha=3,k0=1",
        ],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(
        run(&["path", "--alpha", "0.5", "--x", "0.2"]).status.code(),
        Some(2),
        "k0 = 1 exceeds s_1"
    );
    assert_eq!(
        run(&["path", "--model", "yule", "--x", "0.2"])
            .status
            .code(),
        Some(1)
    );
    let ok = run(&["verify", "--suite", "roots", "--budget", "smoke"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("0 failed"));
}

#[test]
fn verify_reports_failures_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verify.json");
    let o = run(&[
        "verify",
        "--suite",
        "combinatorial",
        "--budget",
        "smoke",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(&out)).unwrap()).unwrap();
    assert_eq!(v["passed"], false);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.iter().all(|n| n.contains("graph")), "{failed:?}");
}
