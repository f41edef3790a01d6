//! Recursive trees, Yule trees and Stirling permutations.

use crate::error::{Error, Result};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    /// New vertices pick a parent uniformly.
    Uniform,
    /// New vertices pick a parent with probability proportional to its
    /// out-degree plus one.
    PlaneOriented,
}

/// Childless vertices of a random recursive tree on `n` vertices. The lone
/// root counts as childless.
pub fn recursive_tree_leaves(kind: TreeKind, n: u64, rng: &mut impl Rng) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("tree needs n >= 1 vertices".into()));
    }
    let n = n as usize;
    let mut childless = vec![false; n];
    childless[0] = true;
    let mut leaves = 1u64;
    // For plane-oriented trees: one slot per unit of (out-degree + 1).
    let mut slots: Vec<u32> = match kind {
        TreeKind::Uniform => Vec::new(),
        TreeKind::PlaneOriented => {
            let mut v = Vec::with_capacity(2 * n);
            v.push(0);
            v
        }
    };
    for v in 1..n {
        let parent = match kind {
            TreeKind::Uniform => rng.gen_range(0..v),
            TreeKind::PlaneOriented => slots[rng.gen_range(0..slots.len())] as usize,
        };
        if childless[parent] {
            childless[parent] = false;
        } else {
            leaves += 1;
        }
        childless[v] = true;
        if kind == TreeKind::PlaneOriented {
            slots.push(parent as u32);
            slots.push(v as u32);
        }
    }
    Ok(leaves)
}

const NO_PARTNER: u32 = u32::MAX;

/// Cherries of a Yule tree grown to `n` leaves by splitting a uniformly
/// chosen leaf at every step.
pub fn yule_cherries(n: u64, rng: &mut impl Rng) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("yule tree needs n >= 1 leaves".into()));
    }
    let n = n as usize;
    // partner[leaf] is the sibling leaf when the two form a cherry.
    let mut partner: Vec<u32> = Vec::with_capacity(2 * n);
    partner.push(NO_PARTNER);
    let mut leaves: Vec<u32> = Vec::with_capacity(n);
    leaves.push(0);
    let mut cherries = 0u64;
    while leaves.len() < n {
        let slot = rng.gen_range(0..leaves.len());
        let leaf = leaves[slot] as usize;
        let sibling = partner[leaf];
        if sibling == NO_PARTNER {
            cherries += 1;
        } else {
            partner[sibling as usize] = NO_PARTNER;
        }
        let a = partner.len() as u32;
        let b = a + 1;
        partner.push(b);
        partner.push(a);
        leaves[slot] = a;
        leaves.push(b);
    }
    Ok(cherries)
}

/// A uniformly grown Stirling permutation of `{1,1,...,n,n}`: the pair
/// `(k+1)(k+1)` goes into one of the `2k+1` gaps of the current word.
/// Quadratic in `n`.
pub fn stirling_permutation(n: u64, rng: &mut impl Rng) -> Result<Vec<u32>> {
    if n == 0 {
        return Err(Error::Domain("stirling permutation needs n >= 1".into()));
    }
    let mut word = Vec::with_capacity(2 * n as usize);
    word.extend([1u32, 1]);
    for k in 1..n as u32 {
        let gap = rng.gen_range(0..=word.len());
        word.splice(gap..gap, [k + 1, k + 1]);
    }
    Ok(word)
}

/// Adjacent equal pairs `a_i = a_{i+1}`, `1 <= i <= 2n - 1`.
pub fn plateaux(word: &[u32]) -> u64 {
    word.windows(2).filter(|w| w[0] == w[1]).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn small_trees() {
        let mut r = rng::stream(3, 0);
        assert_eq!(
            recursive_tree_leaves(TreeKind::Uniform, 1, &mut r).unwrap(),
            1
        );
        assert_eq!(
            recursive_tree_leaves(TreeKind::PlaneOriented, 2, &mut r).unwrap(),
            1
        );
        for _ in 0..50 {
            let l = recursive_tree_leaves(TreeKind::Uniform, 3, &mut r).unwrap();
            assert!(l == 1 || l == 2);
        }
    }

    #[test]
    fn small_yule_trees() {
        let mut r = rng::stream(3, 0);
        assert_eq!(yule_cherries(1, &mut r).unwrap(), 0);
        assert_eq!(yule_cherries(2, &mut r).unwrap(), 1);
        for _ in 0..50 {
            assert_eq!(yule_cherries(3, &mut r).unwrap(), 1);
        }
    }

    #[test]
    fn stirling_words_are_well_formed() {
        let mut r = rng::stream(9, 0);
        assert_eq!(stirling_permutation(1, &mut r).unwrap(), vec![1, 1]);
        for n in 1..20u64 {
            let w = stirling_permutation(n, &mut r).unwrap();
            assert_eq!(w.len() as u64, 2 * n);
            let mut seen = vec![0; n as usize + 1];
            for &a in &w {
                seen[a as usize] += 1;
            }
            assert!(seen[1..].iter().all(|&c| c == 2));
            // Everything between the two copies of i exceeds i.
            for i in 1..=n as u32 {
                let first = w.iter().position(|&a| a == i).unwrap();
                let last = w.iter().rposition(|&a| a == i).unwrap();
                assert!(w[first + 1..last].iter().all(|&a| a > i));
            }
        }
    }

    #[test]
    fn plateau_examples() {
        assert_eq!(plateaux(&[1, 1]), 1);
        assert_eq!(plateaux(&[1, 2, 2, 1]), 1);
        assert_eq!(plateaux(&[2, 2, 1, 1]), 2);
        assert_eq!(plateaux(&[1, 1, 2, 2]), 2);
    }
}
