//! Simulators of the combinatorial objects behind each chain, and the
//! harness that checks them against the chain's exact law and limit
//! theorems.
//!
//! Size conventions, matched against the exact pmfs:
//! a recursive tree on `n` vertices and a Yule tree with `n` leaves give
//! `Z_n`; the graph `G_n` (`n + 1` vertices) gives `Z_n` of the `pa` preset;
//! a Stirling permutation of order `n` gives `Z_{n+1}` of `plane_oriented`.

pub mod graph;
pub mod recursive;
pub mod stats;

pub use graph::PaGraph;
pub use recursive::{
    plateaux, recursive_tree_leaves, stirling_permutation, yule_cherries, TreeKind,
};
pub use stats::{
    empirical_pmf, ks_distance_normal, replicate, summarize, total_variation, verify_clt,
    StatReport, Summary, DEFAULT_BUDGET,
};

use crate::chain::GammaSequence;
use crate::error::Result;
use crate::rng;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthResult {
    pub model: String,
    pub n: u64,
    pub statistic: u64,
    pub seed: u64,
}

fn result(model: &str, n: u64, statistic: u64, seed: u64) -> GrowthResult {
    GrowthResult {
        model: model.to_string(),
        n,
        statistic,
        seed,
    }
}

/// Leaves of `G_n`, or buds when a multi-edge sequence is given.
pub fn grow_pa_graph(
    beta: f64,
    n: u64,
    seed: u64,
    multi_edge: Option<&GammaSequence>,
) -> Result<GrowthResult> {
    let g = PaGraph::grow(beta, n, multi_edge, &mut rng::stream(seed, 0))?;
    Ok(match multi_edge {
        None => result("pa_graph_leaves", n, g.leaves(), seed),
        Some(_) => result("pa_graph_buds", n, g.buds(), seed),
    })
}

pub fn grow_yule(n: u64, seed: u64) -> Result<GrowthResult> {
    let c = yule_cherries(n, &mut rng::stream(seed, 0))?;
    Ok(result("yule_cherries", n, c, seed))
}

pub fn grow_recursive(kind: TreeKind, n: u64, seed: u64) -> Result<GrowthResult> {
    let l = recursive_tree_leaves(kind, n, &mut rng::stream(seed, 0))?;
    let name = match kind {
        TreeKind::Uniform => "uniform_tree_leaves",
        TreeKind::PlaneOriented => "plane_oriented_tree_leaves",
    };
    Ok(result(name, n, l, seed))
}

pub fn grow_stirling(n: u64, seed: u64) -> Result<GrowthResult> {
    let w = stirling_permutation(n, &mut rng::stream(seed, 0))?;
    Ok(result("stirling_plateaux", n, plateaux(&w), seed))
}
