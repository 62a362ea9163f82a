//! Exhaustive families of small test graphs and parameter vectors.

use serde::{Deserialize, Serialize};

use crate::graph::{DirectedMultigraph, Edge, Vertex};

/// Bounds for the exhaustive graph family: every multigraph on `[1, v]` with
/// `min_vertices <= v <= max_vertices`, at most `max_edges` edges, parallel
/// multiplicity at most `max_multiplicity`, and at least one out-edge at every
/// non-sink vertex (which makes it connected).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyBounds {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_multiplicity: u32,
}

impl Default for FamilyBounds {
    fn default() -> Self {
        FamilyBounds {
            min_vertices: 3,
            max_vertices: 5,
            max_edges: 8,
            max_multiplicity: 2,
        }
    }
}

impl FamilyBounds {
    pub fn with_max_edges(self, max_edges: usize) -> Self {
        FamilyBounds { max_edges, ..self }
    }

    /// All graphs in the family, each in canonical edge order, ordered by
    /// vertex count and then by multiplicity vector.
    pub fn graphs(&self) -> Vec<DirectedMultigraph> {
        let mut out = Vec::new();
        for v in self.min_vertices.max(1)..=self.max_vertices {
            let pairs: Vec<(Vertex, Vertex)> = (1..=v as Vertex)
                .flat_map(|t| (t + 1..=v as Vertex).map(move |h| (t, h)))
                .collect();
            let mut mult = vec![0u32; pairs.len()];
            loop {
                let total: u32 = mult.iter().sum();
                if total as usize <= self.max_edges {
                    let mut outdeg = vec![0u32; v + 1];
                    for (&(t, _), &m) in pairs.iter().zip(&mult) {
                        outdeg[t as usize] += m;
                    }
                    if (1..v).all(|i| outdeg[i] > 0) {
                        let edges = pairs
                            .iter()
                            .zip(&mult)
                            .flat_map(|(&(t, h), &m)| (0..m).map(move |_| Edge::new(t, h)))
                            .collect();
                        let g = DirectedMultigraph::new(1, v, edges).expect("valid by construction");
                        if g.is_connected() {
                            out.push(g);
                        }
                    }
                }
                // odometer increment
                let mut k = 0;
                while k < mult.len() && mult[k] == self.max_multiplicity {
                    mult[k] = 0;
                    k += 1;
                }
                if k == mult.len() {
                    break;
                }
                mult[k] += 1;
            }
        }
        out
    }
}

/// Every vector of length `len` with entries in `lo..=hi`, lexicographically.
pub fn integer_vectors(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    if hi < lo {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut v = vec![lo; len];
    loop {
        out.push(v.clone());
        let mut k = len;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if v[k] < hi {
                v[k] += 1;
                for x in &mut v[k + 1..] {
                    *x = lo;
                }
                break;
            }
        }
    }
}
