use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spanning tree of the complete bipartite graph on ordered left vertices
/// `1..=left` and right vertices `1..=right` with no crossing pair of edges:
/// no `(p, q)`, `(t, u)` with `p < t` and `q > u`.
///
/// Edges are stored as `(left, right)` pairs, 1-based, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NoncrossingTree {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize)>,
}

impl NoncrossingTree {
    /// Validates the spanning and noncrossing conditions.
    pub fn new(left: usize, right: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        edges.sort_unstable();
        let tree = NoncrossingTree { left, right, edges };
        if !tree.is_spanning_tree() || !tree.is_noncrossing() {
            return Err(Error::InvalidArgument(format!("{tree} is not a noncrossing spanning tree")));
        }
        Ok(tree)
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn left_degree(&self, p: usize) -> usize {
        self.edges.iter().filter(|&&(x, _)| x == p).count()
    }

    pub fn is_spanning_tree(&self) -> bool {
        let (l, r) = (self.left, self.right);
        if l == 0 || r == 0 || self.edges.len() != l + r - 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..l + r).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(p, q) in &self.edges {
            if p == 0 || p > l || q == 0 || q > r {
                return false;
            }
            let a = find(&mut parent, p - 1);
            let b = find(&mut parent, l + q - 1);
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    pub fn is_noncrossing(&self) -> bool {
        self.edges.iter().all(|&(p, q)| {
            self.edges
                .iter()
                .all(|&(t, u)| !(p < t && q > u))
        })
    }
}

impl fmt::Display for NoncrossingTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|(p, q)| format!("({p},{q})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All noncrossing spanning trees for `left` x `right` ordered vertices.
///
/// Such a tree always contains `(1,1)` and `(left,right)`, and its edges,
/// sorted, form a monotone lattice path between them where each step
/// advances exactly one side. Enumerating those paths gives
/// `binomial(left + right - 2, left - 1)` trees; the order is lexicographic
/// in the step sequence with "advance right" before "advance left".
pub fn enumerate_noncrossing_trees(left: usize, right: usize) -> Result<Vec<NoncrossingTree>> {
    if left == 0 || right == 0 {
        return Err(Error::InvalidArgument(format!(
            "noncrossing trees need nonempty sides, got {left}x{right}"
        )));
    }
    let mut out = Vec::new();
    let mut path = vec![(1, 1)];
    fn walk(
        left: usize,
        right: usize,
        path: &mut Vec<(usize, usize)>,
        out: &mut Vec<NoncrossingTree>,
    ) {
        let (p, q) = *path.last().expect("path starts nonempty");
        if (p, q) == (left, right) {
            out.push(NoncrossingTree {
                left,
                right,
                edges: path.clone(),
            });
            return;
        }
        if q < right {
            path.push((p, q + 1));
            walk(left, right, path, out);
            path.pop();
        }
        if p < left {
            path.push((p + 1, q));
            walk(left, right, path, out);
            path.pop();
        }
    }
    walk(left, right, &mut path, &mut out);
    Ok(out)
}
