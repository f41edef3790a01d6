//! Preferential-attachment graphs grown from a single edge.

use crate::chain::GammaSequence;
use crate::error::{Error, Result};
use rand::Rng;

/// Fenwick tree over nonnegative weights with prefix-sum sampling.
struct Fenwick {
    tree: Vec<f64>,
    total: f64,
}

impl Fenwick {
    fn with_capacity(n: usize) -> Self {
        Fenwick {
            tree: vec![0.0; n + 1],
            total: 0.0,
        }
    }

    fn add(&mut self, index: usize, delta: f64) {
        self.total += delta;
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Smallest index whose prefix sum exceeds `target`.
    fn find(&self, mut target: f64) -> usize {
        let mut pos = 0;
        let mut bit = (self.tree.len() - 1).next_power_of_two();
        while bit > 0 {
            let next = pos + bit;
            if next < self.tree.len() && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            bit >>= 1;
        }
        pos.min(self.tree.len() - 2)
    }
}

enum Sampler {
    /// Each unit of degree owns one slot (`β = 0`).
    Endpoints(Vec<u32>),
    /// Weights `d_x + β`.
    Weighted { fenwick: Fenwick, beta: f64 },
}

/// A multigraph where every vertex after the seed edge arrived with a bundle
/// of parallel edges to one earlier vertex.
pub struct PaGraph {
    /// `(older, newer, multiplicity)` per bundle.
    edges: Vec<(u32, u32, u32)>,
    degree: Vec<u64>,
    neighbours: Vec<u32>,
    leaves: u64,
    buds: u64,
}

impl PaGraph {
    /// Grows `G_n` (`n + 1` vertices) from the seed edge `G_1`. Step `i`
    /// attaches the new vertex with `γ_i` edges (1 without a sequence) to a
    /// vertex chosen with probability proportional to `d_x + β`.
    pub fn grow(
        beta: f64,
        n: u64,
        gamma: Option<&GammaSequence>,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        if !(beta > -1.0 && beta.is_finite()) {
            return Err(Error::Domain(format!("beta = {beta} must exceed -1")));
        }
        if n == 0 {
            return Err(Error::Domain("graph size n must be >= 1".into()));
        }
        let vertices = n as usize + 1;
        let mut g = PaGraph {
            edges: Vec::with_capacity(vertices - 1),
            degree: vec![0; vertices],
            neighbours: vec![0; vertices],
            leaves: 0,
            buds: 0,
        };
        let mut sampler = if beta == 0.0 {
            Sampler::Endpoints(Vec::new())
        } else {
            Sampler::Weighted {
                fenwick: Fenwick::with_capacity(vertices),
                beta,
            }
        };
        g.connect(0, 1, 1, &mut sampler);
        for i in 1..n {
            let multiplicity = gamma.map_or(1, |s| s.gamma(i));
            let target = match &sampler {
                Sampler::Endpoints(slots) => slots[rng.gen_range(0..slots.len())],
                Sampler::Weighted { fenwick, .. } => {
                    fenwick.find(rng.gen::<f64>() * fenwick.total) as u32
                }
            };
            g.connect(target, i as u32 + 1, multiplicity, &mut sampler);
        }
        Ok(g)
    }

    fn connect(&mut self, old: u32, new: u32, multiplicity: u64, sampler: &mut Sampler) {
        let (o, v) = (old as usize, new as usize);
        let m = multiplicity;
        // Counts before the change.
        let was_leaf = self.degree[o] == 1;
        let was_bud = self.neighbours[o] == 1;
        let first = self.degree[o] == 0;
        self.degree[o] += m;
        self.neighbours[o] += 1;
        self.degree[v] = m;
        self.neighbours[v] = 1;
        self.edges.push((old, new, m as u32));

        if first {
            self.leaves += u64::from(m == 1);
            self.buds += 1;
        } else {
            self.leaves -= u64::from(was_leaf);
            self.buds -= u64::from(was_bud);
        }
        self.leaves += u64::from(m == 1);
        self.buds += 1;

        match sampler {
            Sampler::Endpoints(slots) => {
                for _ in 0..m {
                    slots.push(old);
                    slots.push(new);
                }
            }
            Sampler::Weighted { fenwick, beta } => {
                let (b, mf) = (*beta, m as f64);
                fenwick.add(o, if first { mf + b } else { mf });
                fenwick.add(v, mf + b);
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.degree.len()
    }

    /// Degree-one vertices, maintained while growing.
    pub fn leaves(&self) -> u64 {
        self.leaves
    }

    /// Vertices with exactly one neighbour, maintained while growing.
    pub fn buds(&self) -> u64 {
        self.buds
    }

    /// `(leaves, buds)` recounted from the edge list.
    pub fn recount(&self) -> (u64, u64) {
        let mut degree = vec![0u64; self.degree.len()];
        let mut adjacent = vec![0u64; self.degree.len()];
        for &(a, b, m) in &self.edges {
            for v in [a as usize, b as usize] {
                degree[v] += u64::from(m);
                adjacent[v] += 1;
            }
        }
        (
            degree.iter().filter(|&&d| d == 1).count() as u64,
            adjacent.iter().filter(|&&d| d == 1).count() as u64,
        )
    }

    pub fn total_degree(&self) -> u64 {
        self.degree.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::GammaPmf;
    use crate::rng;

    #[test]
    fn fenwick_sampling_respects_weights() {
        let mut f = Fenwick::with_capacity(4);
        for (i, w) in [1.0, 0.0, 3.0, 4.0].iter().enumerate() {
            f.add(i, *w);
        }
        assert_eq!(f.find(0.5), 0);
        assert_eq!(f.find(1.0), 2);
        assert_eq!(f.find(3.99), 2);
        assert_eq!(f.find(4.0), 3);
        assert_eq!(f.find(7.99), 3);
    }

    #[test]
    fn seed_edge_has_two_leaves() {
        let g = PaGraph::grow(0.0, 1, None, &mut rng::stream(1, 0)).unwrap();
        assert_eq!((g.leaves(), g.buds()), (2, 2));
        let g = PaGraph::grow(0.0, 2, None, &mut rng::stream(1, 0)).unwrap();
        assert_eq!(g.leaves(), 2);
        assert_eq!(g.vertex_count(), 3);
    }

    #[test]
    fn incremental_counts_match_recount() {
        let gamma = GammaSequence::new(GammaPmf::uniform(1, 3).unwrap(), 5);
        for (beta, seq) in [
            (0.0, None),
            (0.7, None),
            (-0.5, Some(&gamma)),
            (0.0, Some(&gamma)),
        ] {
            for seed in 0..5 {
                let g = PaGraph::grow(beta, 3000, seq, &mut rng::stream(seed, 0)).unwrap();
                assert_eq!((g.leaves(), g.buds()), g.recount());
                let edges: u64 = 1
                    + (1..3000)
                        .map(|i| seq.map_or(1, |s| s.gamma(i)))
                        .sum::<u64>();
                assert_eq!(g.total_degree(), 2 * edges);
            }
        }
    }

    #[test]
    fn rejects_bad_beta() {
        assert!(PaGraph::grow(-1.0, 5, None, &mut rng::stream(1, 0)).is_err());
    }
}
