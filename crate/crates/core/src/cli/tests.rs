use super::*;

fn resolve(args: &[&str]) -> Result<RunConfig> {
    let mut argv = vec!["leaf-ldp"];
    argv.extend_from_slice(args);
    RunConfig::resolve(&Cli::try_parse_from(argv).expect("clap accepts"))
}

#[test]
fn grids() {
    let g = parse_grid("g", "-5:5:0.1").unwrap();
    assert_eq!(g.len(), 101);
    assert_eq!(g[0], -5.0);
    assert_eq!(g[50], 0.0);
    assert_eq!(g[53], 0.3);
    assert_eq!(g[100], 5.0);
    assert_eq!(parse_grid("g", "1:1:0.5").unwrap(), vec![1.0]);
    for bad in ["1:2", "a:1:0.1", "1:0:0.1", "0:1:0", "0:1:-1", "0:inf:1"] {
        assert!(
            matches!(parse_grid("g", bad), Err(Error::Config { .. })),
            "{bad}"
        );
    }
}

#[test]
fn defaults() {
    let c = resolve(&["pressure"]).unwrap();
    assert_eq!(c.command, CommandName::Pressure);
    assert_eq!(c.model.to_string(), "plane_oriented");
    assert_eq!(c.alpha, 2.0);
    assert_eq!(c.seed, DEFAULT_SEED);
    assert_eq!(c.lambda_grid.len(), 101);
    assert!(c.timestamp);
}

#[test]
fn alpha_without_model_builds_a_linear_chain() {
    let c = resolve(&["rate", "--alpha", "1.5", "--x", "0.3"]).unwrap();
    assert_eq!(c.alpha, 1.5);
    assert_eq!(c.model.alpha().to_f64(), 1.5);
    assert_eq!(c.x, vec![0.3]);
}

#[test]
fn k0_override() {
    let c = resolve(&["pmf", "--model", "pa:beta=0", "--k0", "1"]).unwrap();
    assert_eq!(c.model.k0(), 1);
    let e = resolve(&["pmf", "--model", "plane_oriented", "--k0", "3"]).unwrap_err();
    assert_eq!(exit_code(&e), 2);
}

#[test]
fn config_errors() {
    for args in [
        &["pressure", "--model", "nonsense"][..],
        &["pressure", "--lambda-grid", "0:1"],
        &["pressure", "--format", "xml"],
        &["rate", "--model", "yule", "--alpha", "2"],
        &["verify", "--suite", "bogus"],
        &["simulate", "--n", "0"],
    ] {
        let e = resolve(args).unwrap_err();
        assert_eq!(exit_code(&e), 2, "{args:?}: {e}");
    }
}

#[test]
fn file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("run.toml");
    std::fs::write(
        &p,
        "model = \"yule\"\nn = 50\nseed = 9\nlambda_grid = \"0:1:0.5\"\n",
    )
    .unwrap();
    let path = p.to_str().unwrap();
    let c = resolve(&["pressure", "--config", path]).unwrap();
    assert_eq!(c.model.to_string(), "yule");
    assert_eq!((c.n, c.seed), (50, 9));
    assert_eq!(c.lambda_grid, vec![0.0, 0.5, 1.0]);
    let c = resolve(&[
        "pressure",
        "--config",
        path,
        "--seed",
        "4",
        "--lambda-grid",
        "0:2:1",
    ])
    .unwrap();
    assert_eq!(c.seed, 4);
    assert_eq!(c.lambda_grid, vec![0.0, 1.0, 2.0]);

    std::fs::write(&p, "colour = \"red\"\n").unwrap();
    assert_eq!(
        exit_code(&resolve(&["pressure", "--config", path]).unwrap_err()),
        2
    );
}
