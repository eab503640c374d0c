//! Exhaustive strong chromatic index, independent of the main solver.
//!
//! Edges are coloured in fixed index order with a direct distance check
//! against every earlier edge. The only symmetry reduction is fixing the
//! first edge's colour.

use thiserror::Error;

use crate::graph::Graph;

/// Default guard on the edge count accepted by [`brute_force_index`].
pub const DEFAULT_EDGE_GUARD: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruteForceError {
    #[error("graph has {edges} edges; exhaustive enumeration is limited to {guard}")]
    TooManyEdges { edges: usize, guard: usize },
    #[error("k_max must be at least 1")]
    ZeroColors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexBound {
    /// The strong chromatic index. Zero for an edgeless graph.
    Exactly(usize),
    /// No colouring with `k_max` colours exists.
    Above(usize),
}

impl IndexBound {
    /// Whether a `k`-colouring exists, as far as this bound can tell.
    pub fn admits(self, k: usize) -> Option<bool> {
        match self {
            IndexBound::Exactly(i) => Some(i <= k),
            IndexBound::Above(kmax) if k <= kmax => Some(false),
            IndexBound::Above(_) => None,
        }
    }
}

pub fn brute_force_index(g: &Graph, k_max: usize) -> Result<IndexBound, BruteForceError> {
    brute_force_index_guarded(g, k_max, DEFAULT_EDGE_GUARD)
}

pub fn brute_force_index_guarded(
    g: &Graph,
    k_max: usize,
    guard: usize,
) -> Result<IndexBound, BruteForceError> {
    if k_max == 0 {
        return Err(BruteForceError::ZeroColors);
    }
    let m = g.edge_count();
    if m > guard {
        return Err(BruteForceError::TooManyEdges { edges: m, guard });
    }
    if m == 0 {
        return Ok(IndexBound::Exactly(0));
    }
    let ends: Vec<(usize, usize)> = g.edge_ids().map(|e| g.endpoints(e)).collect();
    let touch = |a: (usize, usize), b: (usize, usize)| a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
    let mut near = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            near[i][j] = touch(ends[i], ends[j])
                || (0..m).any(|h| h != i && h != j && touch(ends[h], ends[i]) && touch(ends[h], ends[j]));
        }
    }
    for k in 1..=k_max {
        let mut colors = vec![0usize; m];
        if extend(&near, &mut colors, 1, k) {
            return Ok(IndexBound::Exactly(k));
        }
    }
    Ok(IndexBound::Above(k_max))
}

fn extend(near: &[Vec<bool>], colors: &mut [usize], i: usize, k: usize) -> bool {
    if i == colors.len() {
        return true;
    }
    for c in 0..k {
        if (0..i).all(|j| !near[i][j] || colors[j] != c) {
            colors[i] = c;
            if extend(near, colors, i + 1, k) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn anchors() {
        assert_eq!(brute_force_index(&star(3), 5), Ok(IndexBound::Exactly(3)));
        assert_eq!(brute_force_index(&cycle(5), 5), Ok(IndexBound::Exactly(5)));
        assert_eq!(brute_force_index(&path(1), 5), Ok(IndexBound::Exactly(1)));
        assert_eq!(brute_force_index(&cycle(6), 5), Ok(IndexBound::Exactly(3)));
        assert_eq!(brute_force_index(&cycle(5), 4), Ok(IndexBound::Above(4)));
    }

    #[test]
    fn guard_rejects_large_graphs() {
        assert_eq!(
            brute_force_index(&path(17), 5),
            Err(BruteForceError::TooManyEdges { edges: 17, guard: 16 })
        );
    }
}
