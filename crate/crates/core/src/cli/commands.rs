use super::{CommandName, MethodChoice, Object, PmfMode, RunConfig};
use crate::chain::{simulate_final, ModelSpec, SlopeKind};
use crate::dist::{certify_real_rooted, exact_poly, Estimators, Pmf};
use crate::error::{Error, Result};
use crate::output::{Cell, Format, Header, Table};
use crate::path::{euler_solve_sampled, EulerSolution};
use crate::pressure::PressureEval;
use crate::trees::{
    plateaux, recursive_tree_leaves, replicate, stirling_permutation, yule_cherries, PaGraph,
    StatReport, TreeKind, DEFAULT_BUDGET,
};
use crate::verify;
use rayon::prelude::*;
use serde_json::json;
use std::io::Write;

/// Runs one command, writing its table to `--out` or to `stdout`. Returns
/// `false` when a verification check failed.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<bool> {
    let mut buf = Vec::new();
    let ok = match cfg.command {
        CommandName::Verify => run_verify(cfg, &mut buf)?,
        _ => {
            let table = match cfg.command {
                CommandName::Pressure => pressure(cfg)?,
                CommandName::Rate => rate(cfg)?,
                CommandName::Path => path(cfg)?,
                CommandName::Pmf => pmf(cfg)?,
                CommandName::Simulate => simulate(cfg)?,
                CommandName::Verify => unreachable!("handled above"),
            };
            table.write(cfg.format, &mut buf)?;
            true
        }
    };
    match &cfg.out {
        Some(p) => std::fs::write(p, &buf)?,
        None => stdout.write_all(&buf)?,
    }
    Ok(ok)
}

fn header(cfg: &RunConfig) -> Header {
    let mut h = Header::new(cfg.command.as_str());
    let info = cfg.model.info();
    h.push("model", &info.model)
        .push("kind", info.kind)
        .push("alpha", cfg.alpha)
        .push("k0", info.k0)
        .push("seed", cfg.seed)
        .push("format", cfg.format);
    if cfg.timestamp {
        h.timestamp();
    }
    h
}

fn evaluator(cfg: &RunConfig) -> Result<PressureEval> {
    let ev = match cfg.method {
        MethodChoice::Auto => PressureEval::auto(cfg.alpha)?,
        MethodChoice::Quadrature => PressureEval::quadrature(cfg.alpha)?,
        MethodChoice::Closed => {
            let ev = PressureEval::auto(cfg.alpha)?;
            if ev.method() == crate::pressure::Method::Quadrature {
                return Err(Error::Config {
                    field: "method".into(),
                    reason: format!("no closed form for alpha = {}", cfg.alpha),
                });
            }
            ev
        }
    };
    ev.with_quad_tol(cfg.quad_tol)
}

fn pressure(cfg: &RunConfig) -> Result<Table> {
    let ev = evaluator(cfg)?;
    let mut h = header(cfg);
    h.push("method", ev.method())
        .push("quad_tol", cfg.quad_tol)
        .push("scope", format!("{:?}", ev.scope()).to_lowercase())
        .push("lambda_grid", &cfg.lambda_grid_spec);
    let rows: Vec<Vec<Cell>> = cfg
        .lambda_grid
        .par_iter()
        .map(|&l| {
            let p = ev.pressure(l)?;
            let (d1, d2) = ev.derivatives(l)?;
            let res = if l == 0.0 { 0.0 } else { ev.ode_residual(l)? };
            Ok(vec![
                cfg.alpha.into(),
                l.into(),
                p.into(),
                d1.into(),
                d2.into(),
                res.into(),
            ])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(
        h,
        &[
            "alpha",
            "lambda",
            "pressure",
            "dpressure",
            "d2pressure",
            "ode_residual",
        ],
    );
    for r in rows {
        t.push(r)?;
    }
    Ok(t)
}

fn rate(cfg: &RunConfig) -> Result<Table> {
    let ev = evaluator(cfg)?;
    let mut h = header(cfg);
    h.push("method", ev.method())
        .push("max_slope", ev.max_slope())
        .push("boundary_rate", ev.boundary_rate());
    let rows: Vec<Vec<Cell>> = cfg
        .x
        .par_iter()
        .map(|&x| {
            let r = ev.rate(x)?;
            Ok(vec![
                cfg.alpha.into(),
                x.into(),
                r.lambda_star.into(),
                r.rate.into(),
            ])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(h, &["alpha", "x", "lambda_star", "rate"]);
    for r in rows {
        t.push(r)?;
    }
    Ok(t)
}

fn path(cfg: &RunConfig) -> Result<Table> {
    let ev = PressureEval::auto(cfg.alpha)?;
    let solutions: Vec<(EulerSolution, f64)> = cfg
        .x
        .par_iter()
        .map(|&x| {
            let s = euler_solve_sampled(cfg.alpha, x, cfg.tol, cfg.samples)?;
            Ok((s, ev.rate(x)?.rate))
        })
        .collect::<Result<_>>()?;
    let mut h = header(cfg);
    h.push("tol", cfg.tol).push("samples", cfg.samples);
    let mut summary = Vec::new();
    for (s, rate) in &solutions {
        h.push(
            format!("x={}", s.x_target),
            format!(
                "cost={:.16e} rate_from_legendre={:.16e} gap={:.3e}",
                s.cost,
                rate,
                s.cost - rate
            ),
        );
        summary.push(json!({
            "alpha": s.alpha,
            "x": s.x_target,
            "cost": s.cost,
            "sampled_cost": s.sampled_cost,
            "rate_from_legendre": rate,
            "gap": s.cost - rate,
            "shoot_param": s.shoot_param,
            "roots": s.roots,
            "monotone": s.monotone,
        }));
    }
    let mut t = Table::new(h, &["alpha", "x", "t", "phi", "phidot"]);
    for (s, _) in &solutions {
        let knots = s.path.knots();
        let values = s.path.values();
        for i in 0..knots.len() {
            t.push(vec![
                s.alpha.into(),
                s.x_target.into(),
                knots[i].into(),
                values[i].into(),
                s.slopes[i].into(),
            ])?;
        }
    }
    t.summary = Some(json!(summary));
    Ok(t)
}

fn pmf(cfg: &RunConfig) -> Result<Table> {
    let mut h = header(cfg);
    h.push("n", cfg.n)
        .push("mode", format!("{:?}", cfg.mode).to_lowercase());
    match cfg.mode {
        PmfMode::Law => {
            let p = Pmf::at(&cfg.model, cfg.n)?;
            let mut t = Table::new(h, &["n", "k", "log_prob"]);
            for (k, lp) in p.iter() {
                t.push(vec![cfg.n.into(), k.into(), lp.into()])?;
            }
            Ok(t)
        }
        PmfMode::Estimators => {
            if cfg.n < 2 {
                return Err(Error::Config {
                    field: "n".into(),
                    reason: "estimators need n >= 2".into(),
                });
            }
            h.push("lambda_grid", &cfg.lambda_grid_spec);
            let current = Pmf::at(&cfg.model, cfg.n)?;
            let next = current.advance(&cfg.model)?;
            let model = cfg.model.to_string();
            let mut t = Table::new(h, &["model", "lambda", "n", "per_n", "ratio", "logderiv"]);
            for &l in &cfg.lambda_grid {
                let e = Estimators::from_pmfs(&current, &next, l)?;
                t.push(vec![
                    model.as_str().into(),
                    l.into(),
                    e.n.into(),
                    e.per_n.into(),
                    e.ratio.into(),
                    e.logderiv.into(),
                ])?;
            }
            Ok(t)
        }
        PmfMode::Roots => {
            let p = exact_poly(&cfg.model, cfg.n, cfg.max_exact)?;
            let r = certify_real_rooted(&p);
            let mut t = Table::new(
                h,
                &[
                    "n",
                    "degree",
                    "zero_multiplicity",
                    "negative_roots",
                    "distinct_negative_roots",
                    "positive_roots",
                    "nonreal_roots",
                    "real_rooted_nonpositive",
                    "structure_ok",
                ],
            );
            let flag = |b: bool| Cell::from(u64::from(b));
            t.push(vec![
                cfg.n.into(),
                (r.degree as u64).into(),
                (r.zero_multiplicity as u64).into(),
                (r.negative_roots as u64).into(),
                (r.distinct_negative_roots as u64).into(),
                (r.positive_roots as u64).into(),
                (r.nonreal_roots as u64).into(),
                flag(r.real_rooted_nonpositive),
                flag(r.structure_ok),
            ])?;
            t.summary = Some(serde_json::to_value(&r).map_err(|e| Error::Io(e.to_string()))?);
            Ok(t)
        }
    }
}

type Simulator<'a> = Box<dyn Fn(u64, &mut rand_chacha::ChaCha8Rng) -> Result<u64> + Sync + 'a>;

/// What `simulate --object tree` grows for a model.
fn tree_simulator(model: &ModelSpec) -> Result<(&'static str, Simulator<'_>)> {
    let k0 = model.k0();
    let unsupported = || Error::Config {
        field: "model".into(),
        reason: format!("no tree or graph simulator for `{model}`"),
    };
    Ok(match model.slopes().kind() {
        SlopeKind::UniformRecursive if k0 == 1 => (
            "uniform_tree_leaves",
            Box::new(|n, r| recursive_tree_leaves(TreeKind::Uniform, n, r)),
        ),
        SlopeKind::PlaneOriented if k0 == 1 => (
            "plane_oriented_tree_leaves",
            Box::new(|n, r| recursive_tree_leaves(TreeKind::PlaneOriented, n, r)),
        ),
        SlopeKind::Yule if k0 == 0 => ("yule_cherries", Box::new(yule_cherries)),
        SlopeKind::PrefAttach {
            beta,
            seed_degree: 2,
            seed_vertices: 2,
        } if k0 == 2 => {
            let beta = beta.to_f64();
            (
                "pa_graph_leaves",
                Box::new(move |n, r| PaGraph::grow(beta, n, None, r).map(|g| g.leaves())),
            )
        }
        SlopeKind::RandomizedPa {
            beta,
            seed_degree: 2,
            seed_vertices: 2,
            gamma,
        } if k0 == 2 => {
            let beta = beta.to_f64();
            (
                "pa_graph_buds",
                Box::new(move |n, r| PaGraph::grow(beta, n, Some(gamma), r).map(|g| g.buds())),
            )
        }
        _ => return Err(unsupported()),
    })
}

fn simulate(cfg: &RunConfig) -> Result<Table> {
    let (n, reps, seed) = (cfg.n, cfg.reps, cfg.seed);
    let work = match cfg.object {
        Object::Stirling => n.saturating_mul(n).saturating_mul(reps),
        _ => n.saturating_mul(reps),
    };
    if work > DEFAULT_BUDGET {
        return Err(Error::Budget(format!(
            "{work} steps exceed the budget {DEFAULT_BUDGET}"
        )));
    }
    let (name, alpha, finals) = match cfg.object {
        Object::Chain => {
            let slopes = cfg.model.slopes().values(n - 1);
            let finals = (0..reps)
                .into_par_iter()
                .map(|r| simulate_final(&cfg.model, &slopes, n, seed, r))
                .collect::<Result<Vec<u64>>>()?;
            (cfg.model.to_string(), cfg.model.alpha().to_f64(), finals)
        }
        Object::Tree => {
            let (name, sim) = tree_simulator(&cfg.model)?;
            let finals = replicate(reps, seed, |r| sim(n, r))?;
            (name.to_string(), cfg.model.alpha().to_f64(), finals)
        }
        Object::Stirling => {
            if n < 2 {
                return Err(Error::Config {
                    field: "n".into(),
                    reason: "stirling needs n >= 2 (order n - 1)".into(),
                });
            }
            let finals = replicate(reps, seed, |r| {
                stirling_permutation(n - 1, r).map(|w| plateaux(&w))
            })?;
            ("stirling_plateaux".to_string(), 2.0, finals)
        }
    };
    let mut h = header(cfg);
    h.push("object", format!("{:?}", cfg.object).to_lowercase())
        .push("n", n)
        .push("reps", reps);
    let report = if finals.len() >= 2 {
        let r = StatReport::from_finals(name.clone(), alpha, n, seed, &finals)?;
        h.push("empirical_mean", r.empirical_mean)
            .push("mean_std_error", r.mean_std_error)
            .push("lln_mean", r.lln_mean)
            .push("empirical_var", r.empirical_var)
            .push("clt_variance", r.clt_variance)
            .push("ks_distance", r.ks_distance);
        Some(r)
    } else {
        None
    };
    let mut t = Table::new(h, &["model", "n", "seed", "replicate", "statistic"]);
    for (i, z) in finals.iter().enumerate() {
        t.push(vec![
            name.as_str().into(),
            n.into(),
            seed.into(),
            (i as u64).into(),
            (*z).into(),
        ])?;
    }
    if let Some(r) = report {
        t.summary = Some(serde_json::to_value(&r).map_err(|e| Error::Io(e.to_string()))?);
    }
    Ok(t)
}

fn run_verify(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<bool> {
    let checks = verify::run(cfg.suite, cfg.budget, cfg.seed)?;
    let passed = verify::all_passed(&checks);
    match cfg.format {
        Format::Csv => {
            writeln!(
                out,
                "suite={} budget={} seed={}",
                cfg.suite, cfg.budget, cfg.seed
            )?;
            out.extend_from_slice(verify::render(&checks).as_bytes());
        }
        Format::Json => {
            let v = json!({
                "suite": cfg.suite,
                "budget": cfg.budget,
                "seed": cfg.seed,
                "passed": passed,
                "checks": checks,
            });
            serde_json::to_writer_pretty(&mut *out, &v).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(passed)
}
