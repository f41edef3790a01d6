//! The property suite behind `leaf-ldp verify`.
//!
//! Every check reports the measured quantity next to its tolerance. The
//! `quick` budget uses the full acceptance sizes; `smoke` shrinks the Monte
//! Carlo work and widens sampling tolerances in proportion.

use crate::chain::{simulate_final, GammaPmf, GammaSequence, ModelSpec, Scalar, SlopeKind};
use crate::dist::{certify_real_rooted, exact_poly, pressure_estimators, Pmf};
use crate::error::{Error, Result};
use crate::path::euler_solve;
use crate::pressure::{clt_variance, lln_mean, PressureEval};
use crate::trees::{
    empirical_pmf, plateaux, recursive_tree_leaves, replicate, stirling_permutation, summarize,
    total_variation, verify_clt, yule_cherries, PaGraph, TreeKind, DEFAULT_BUDGET,
};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Pressure,
    Ode,
    Clt,
    Mgf,
    Ldp,
    Path,
    Roots,
    Combinatorial,
    All,
}

impl Suite {
    const EACH: [Suite; 8] = [
        Suite::Pressure,
        Suite::Ode,
        Suite::Clt,
        Suite::Mgf,
        Suite::Ldp,
        Suite::Path,
        Suite::Roots,
        Suite::Combinatorial,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::Pressure => "pressure",
            Suite::Ode => "ode",
            Suite::Clt => "clt",
            Suite::Mgf => "mgf",
            Suite::Ldp => "ldp",
            Suite::Path => "path",
            Suite::Roots => "roots",
            Suite::Combinatorial => "combinatorial",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|v| v.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Config {
                field: "suite".into(),
                reason: format!("unknown suite `{s}`"),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Smoke,
    #[default]
    Quick,
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Budget::Smoke => "smoke",
            Budget::Quick => "quick",
        })
    }
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "smoke" => Ok(Budget::Smoke),
            "quick" => Ok(Budget::Quick),
            _ => Err(Error::Config {
                field: "budget".into(),
                reason: format!("expected smoke or quick, got `{s}`"),
            }),
        }
    }
}

struct Sizes {
    mean_n: u64,
    mean_reps: u64,
    var_n: u64,
    var_reps: u64,
    samples: u64,
    tv_tol: f64,
}

impl Budget {
    fn sizes(self) -> Sizes {
        match self {
            Budget::Quick => Sizes {
                mean_n: 100_000,
                mean_reps: 200,
                var_n: 100_000,
                var_reps: 10_000,
                samples: 1_000_000,
                tv_tol: 5e-3,
            },
            Budget::Smoke => Sizes {
                mean_n: 10_000,
                mean_reps: 100,
                var_n: 2_000,
                var_reps: 4_000,
                samples: 100_000,
                tv_tol: 5e-3 * 10f64.sqrt(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    /// How `measured` must relate to `tolerance`: `<=`, `<` or `>`.
    pub relation: &'static str,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

impl Check {
    fn new(
        suite: Suite,
        name: impl Into<String>,
        measured: f64,
        relation: &'static str,
        tolerance: f64,
    ) -> Self {
        let passed = match relation {
            "<=" => measured <= tolerance,
            "<" => measured < tolerance,
            ">" => measured > tolerance,
            _ => false,
        };
        Check {
            suite,
            name: name.into(),
            measured,
            relation,
            tolerance,
            passed,
            note: String::new(),
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Fixed-width pass/fail table.
pub fn render(checks: &[Check]) -> String {
    let width = checks
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(4)
        .max(4);
    let mut s = format!(
        "{:<6} {:<13} {:<width$} {:>24} {:<2} {:>12}  note\n",
        "status", "suite", "check", "measured", "", "tolerance"
    );
    for c in checks {
        s.push_str(&format!(
            "{:<6} {:<13} {:<width$} {:>24} {:<2} {:>12.3e}  {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.suite.name(),
            c.name,
            format!("{:.6e}", c.measured),
            c.relation,
            c.tolerance,
            c.note
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    s.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    s
}

pub fn run(suite: Suite, budget: Budget, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    let sizes = budget.sizes();
    for s in suites {
        out.extend(match s {
            Suite::Pressure => pressure_checks()?,
            Suite::Ode => ode_checks()?,
            Suite::Clt => clt_checks(&sizes, seed)?,
            Suite::Mgf => mgf_checks()?,
            Suite::Ldp => ldp_checks()?,
            Suite::Path => path_checks()?,
            Suite::Roots => root_checks()?,
            Suite::Combinatorial => combinatorial_checks(&sizes, seed)?,
            Suite::All => unreachable!("expanded above"),
        });
    }
    Ok(out)
}

fn lambda_grid() -> Vec<f64> {
    (-50..=50)
        .map(|i| i as f64 * 0.1)
        .filter(|l: &f64| l.abs() >= 1e-3)
        .collect()
}

fn pressure_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for alpha in [0.5, 1.0, 2.0] {
        let closed = PressureEval::auto(alpha)?;
        let quad = PressureEval::quadrature(alpha)?;
        let mut worst = 0.0f64;
        for l in lambda_grid() {
            worst = worst.max((quad.pressure(l)? - closed.pressure(l)?).abs());
        }
        out.push(Check::new(
            Suite::Pressure,
            format!("quadrature vs closed form, alpha={alpha}"),
            worst,
            "<=",
            1e-8,
        ));
        let values: Vec<f64> = (-50..=50)
            .map(|i| closed.pressure(i as f64 * 0.1))
            .collect::<Result<_>>()?;
        let min_second = values
            .windows(3)
            .map(|w| w[0] - 2.0 * w[1] + w[2])
            .fold(f64::INFINITY, f64::min);
        out.push(Check::new(
            Suite::Pressure,
            format!("convexity (-min second difference), alpha={alpha}"),
            -min_second,
            "<=",
            1e-9,
        ));
    }
    let ev = PressureEval::auto(2.0)?;
    let mut worst = 0.0f64;
    for i in -20..=20 {
        let l = i as f64 * 0.2;
        let (x, _) = ev.derivatives(l)?;
        worst = worst.max((ev.rate(x)?.lambda_star - l).abs());
    }
    out.push(Check::new(
        Suite::Pressure,
        "duality round trip |lambda* - lambda|",
        worst,
        "<=",
        1e-6,
    ));
    let (fd, _) = ev.finite_difference(1.0)?;
    let (an, _) = ev.derivatives(1.0)?;
    out.push(Check::new(
        Suite::Pressure,
        "analytic vs finite-difference derivative at 1",
        (fd - an).abs(),
        "<=",
        1e-6,
    ));
    Ok(out)
}

fn ode_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for alpha in [0.5, 1.0, 1.5, 2.0] {
        let ev = PressureEval::auto(alpha)?;
        let mut worst = 0.0f64;
        for l in lambda_grid() {
            worst = worst.max(ev.ode_residual(l)?.abs());
        }
        out.push(Check::new(
            Suite::Ode,
            format!("max |ode residual|, alpha={alpha} ({})", ev.method()),
            worst,
            "<=",
            1e-6,
        ));
    }
    Ok(out)
}

fn clt_checks(sizes: &Sizes, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for alpha in [0.5, 1.0, 2.0] {
        let (d1, d2) = PressureEval::auto(alpha)?.derivatives(0.0)?;
        let err = (d1 - lln_mean(alpha))
            .abs()
            .max((d2 - clt_variance(alpha)).abs());
        out.push(Check::new(
            Suite::Clt,
            format!("Taylor anchor, alpha={alpha}"),
            err,
            "<=",
            0.0,
        ));
    }
    let n = sizes.mean_n;
    let reps = sizes.mean_reps;
    let nf = n as f64;
    type Sim = fn(u64, &mut rand_chacha::ChaCha8Rng) -> Result<u64>;
    let sims: [(&str, f64, Sim); 3] = [
        ("plane-oriented tree leaves", 2.0 / 3.0, |n, r| {
            recursive_tree_leaves(TreeKind::PlaneOriented, n, r)
        }),
        ("uniform tree leaves", 0.5, |n, r| {
            recursive_tree_leaves(TreeKind::Uniform, n, r)
        }),
        ("yule cherries", 1.0 / 3.0, yule_cherries),
    ];
    for (i, (name, mean, sim)) in sims.into_iter().enumerate() {
        let v: Vec<f64> = replicate(reps, seed.wrapping_add(i as u64), |r| sim(n, r))?
            .into_iter()
            .map(|z| z as f64 / nf)
            .collect();
        let s = summarize(&v);
        out.push(
            Check::new(
                Suite::Clt,
                format!("{name}: |mean - {mean:.4}| / SE"),
                (s.mean - mean).abs() / s.std_error,
                "<=",
                3.0,
            )
            .note(format!("n={n}, reps={reps}, mean={:.6}", s.mean)),
        );
    }
    for (i, model) in [ModelSpec::plane_oriented(), ModelSpec::yule()]
        .into_iter()
        .enumerate()
    {
        let r = verify_clt(
            &model,
            sizes.var_n,
            sizes.var_reps,
            seed.wrapping_add(10 + i as u64),
            DEFAULT_BUDGET,
        )?;
        out.push(
            Check::new(
                Suite::Clt,
                format!("{model}: variance relative error"),
                (r.empirical_var / r.clt_variance - 1.0).abs(),
                "<=",
                0.1,
            )
            .note(format!(
                "n={}, reps={}, var={:.5}, ks={:.4}",
                r.n, r.replicates, r.empirical_var, r.ks_distance
            )),
        );
    }
    Ok(out)
}

fn mgf_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let model = ModelSpec::plane_oriented();
    let ev = PressureEval::auto(2.0)?;
    for l in [-1.0, 1.0] {
        let target = ev.pressure(l)?;
        let e1000 = (pressure_estimators(&model, 1000, l)?.ratio - target).abs();
        let e4000 = (pressure_estimators(&model, 4000, l)?.ratio - target).abs();
        out.push(Check::new(
            Suite::Mgf,
            format!("ratio error at n=4000, lambda={l}"),
            e4000,
            "<=",
            1e-3,
        ));
        out.push(
            Check::new(
                Suite::Mgf,
                format!("error(4000) - error(1000), lambda={l}"),
                e4000 - e1000,
                "<",
                0.0,
            )
            .note(format!("error(1000)={e1000:.3e}")),
        );
    }
    Ok(out)
}

fn ldp_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let model = ModelSpec::plane_oriented();
    let ev = PressureEval::auto(2.0)?;
    let sizes = [500u64, 1000, 2000];
    let mut pmfs = Vec::new();
    Pmf::scan(&model, 2000, |p| {
        if sizes.contains(&p.n()) {
            pmfs.push(p.clone());
        }
    })?;
    for x in [0.85, 1.0] {
        let rate = ev.rate(x)?.rate;
        let d: Vec<f64> = pmfs
            .iter()
            .map(|p| p.tail_log_prob(x).map(|v| (v - rate).abs()))
            .collect::<Result<_>>()?;
        let worst_increase = d
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max);
        out.push(
            Check::new(
                Suite::Ldp,
                format!("tail distance trend, x={x}"),
                worst_increase,
                "<",
                0.0,
            )
            .note(format!("distances {:.4e} {:.4e} {:.4e}", d[0], d[1], d[2])),
        );
        if x == 1.0 {
            out.push(Check::new(
                Suite::Ldp,
                "tail at x=1, n=2000, vs log 2",
                d[2],
                "<=",
                0.02,
            ));
        }
    }
    Ok(out)
}

fn path_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let ev = PressureEval::auto(2.0)?;
    for x in [0.13, 0.5, 2.0 / 3.0, 0.85] {
        let s = euler_solve(2.0, x, 1e-10)?;
        let rate = ev.rate(x)?.rate;
        out.push(
            Check::new(
                Suite::Path,
                format!("|euler cost - rate|, x={x:.4}"),
                (s.cost - rate).abs(),
                "<=",
                1e-3,
            )
            .note(format!("cost={:.6e}, roots={}", s.cost, s.roots.len())),
        );
        if x == 0.13 || x == 0.85 {
            out.push(Check::new(
                Suite::Path,
                format!("chord deviation, x={x}"),
                s.path.max_chord_deviation(),
                ">",
                1e-3,
            ));
        }
    }
    Ok(out)
}

fn preset_models() -> Result<Vec<ModelSpec>> {
    Ok(vec![
        ModelSpec::uniform_recursive(),
        ModelSpec::plane_oriented(),
        ModelSpec::yule(),
        ModelSpec::pref_attach(Scalar::int(0))?,
        ModelSpec::pref_attach(Scalar::ratio(1, 2))?,
        ModelSpec::randomized_pa(Scalar::int(0), GammaPmf::uniform(1, 2)?, 1)?,
    ])
}

fn root_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for m in preset_models()? {
        let mut failures = 0;
        for n in 1..=30 {
            let p = exact_poly(&m, n, 40)?;
            if !certify_real_rooted(&p).structure_ok {
                failures += 1;
            }
        }
        out.push(Check::new(
            Suite::Roots,
            format!("{m}: uncertified n <= 30"),
            failures as f64,
            "<=",
            0.0,
        ));
    }
    Ok(out)
}

fn combinatorial_checks(sizes: &Sizes, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let samples = sizes.samples;
    let tv = |name: &str, model: &ModelSpec, chain_n: u64, data: Vec<u64>| -> Result<Check> {
        let pmf = Pmf::at(model, chain_n)?;
        Ok(Check::new(
            Suite::Combinatorial,
            format!("TV {name}"),
            total_variation(&empirical_pmf(&data), &pmf),
            "<=",
            sizes.tv_tol,
        )
        .note(format!("{samples} samples")))
    };
    out.push(tv(
        "yule cherries n=12",
        &ModelSpec::yule(),
        12,
        replicate(samples, seed, |r| yule_cherries(12, r))?,
    )?);
    out.push(tv(
        "uniform tree leaves n=12",
        &ModelSpec::uniform_recursive(),
        12,
        replicate(samples, seed + 1, |r| {
            recursive_tree_leaves(TreeKind::Uniform, 12, r)
        })?,
    )?);
    out.push(tv(
        "plane-oriented tree leaves n=12",
        &ModelSpec::plane_oriented(),
        12,
        replicate(samples, seed + 2, |r| {
            recursive_tree_leaves(TreeKind::PlaneOriented, 12, r)
        })?,
    )?);
    out.push(tv(
        "pa(beta=0) graph leaves n=11",
        &ModelSpec::pref_attach(Scalar::int(0))?,
        11,
        replicate(samples, seed + 3, |r| {
            PaGraph::grow(0.0, 11, None, r).map(|g| g.leaves())
        })?,
    )?);
    out.push(tv(
        "stirling plateaux order 7 vs plane-oriented n=8",
        &ModelSpec::plane_oriented(),
        8,
        replicate(samples, seed + 4, |r| {
            stirling_permutation(7, r).map(|w| plateaux(&w))
        })?,
    )?);

    // Buds with γ uniform on {1, 2}: α = 3, LLN mean 3/4.
    let rpa = ModelSpec::randomized_pa(Scalar::int(0), GammaPmf::uniform(1, 2)?, seed)?;
    let SlopeKind::RandomizedPa { gamma, .. } = rpa.slopes().kind() else {
        unreachable!("randomized_pa builds a RandomizedPa slope")
    };
    let gamma: &GammaSequence = gamma;
    let n = sizes.mean_n;
    let reps = sizes.mean_reps;
    let slopes = rpa.slopes().values(n - 1);
    let chain: Vec<f64> = (0..reps)
        .map(|r| simulate_final(&rpa, &slopes, n, seed + 5, r).map(|z| z as f64 / n as f64))
        .collect::<Result<_>>()?;
    let s = summarize(&chain);
    out.push(
        Check::new(
            Suite::Combinatorial,
            "quenched bud LLN (chain): |mean - 3/4| / SE",
            (s.mean - 0.75).abs() / s.std_error,
            "<=",
            3.0,
        )
        .note(format!("n={n}, reps={reps}, mean={:.6}", s.mean)),
    );
    let graph: Vec<f64> = replicate(reps, seed + 6, |r| {
        PaGraph::grow(0.0, n, Some(gamma), r).map(|g| g.buds())
    })?
    .into_iter()
    .map(|b| b as f64 / n as f64)
    .collect();
    let g = summarize(&graph);
    out.push(
        Check::new(
            Suite::Combinatorial,
            "quenched bud LLN (graph): |mean - 3/4| / SE",
            (g.mean - 0.75).abs() / g.std_error,
            "<=",
            3.0,
        )
        .note(format!(
            "mean={:.6}; buds are chosen with weight d_x, not 1",
            g.mean
        )),
    );
    out.push(tv(
        "graph buds vs chain, n=10, same gamma",
        &rpa,
        10,
        replicate(samples, seed + 7, |r| {
            PaGraph::grow(0.0, 10, Some(gamma), r).map(|g| g.buds())
        })?,
    )?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::EACH {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
        assert_eq!("smoke".parse::<Budget>().unwrap(), Budget::Smoke);
        assert!("huge".parse::<Budget>().is_err());
    }

    #[test]
    fn fast_suites_pass() {
        for suite in [Suite::Pressure, Suite::Ode, Suite::Roots] {
            let checks = run(suite, Budget::Smoke, 1).unwrap();
            assert!(all_passed(&checks), "{}", render(&checks));
        }
    }

    #[test]
    fn table_marks_failures() {
        let c = vec![
            Check::new(Suite::Ode, "a", 1.0, "<=", 2.0),
            Check::new(Suite::Ode, "b", 3.0, "<=", 2.0),
        ];
        let t = render(&c);
        assert!(t.contains("PASS") && t.contains("FAIL"));
        assert!(t.ends_with("2 checks, 1 failed\n"));
        assert!(!all_passed(&c));
    }
}
