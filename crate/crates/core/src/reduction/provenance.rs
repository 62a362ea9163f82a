use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{DirectedMultigraph, Edge, Vertex};

use super::noncrossing::NoncrossingTree;

/// A graph reached from a fixed root by reductions. Every edge `e` records
/// `s(e)`, the sorted set of root edges whose sum it stands for; those root
/// edges form a directed path from `tail(e)` to `head(e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvenancedGraph {
    root: Arc<DirectedMultigraph>,
    graph: DirectedMultigraph,
    provenance: Vec<Vec<usize>>,
}

impl ProvenancedGraph {
    /// The root itself, with `s(e) = {e}`.
    pub fn root(graph: DirectedMultigraph) -> Self {
        let provenance = (0..graph.edge_count()).map(|k| vec![k]).collect();
        ProvenancedGraph {
            root: Arc::new(graph.clone()),
            graph,
            provenance,
        }
    }

    /// Assembles a node and checks every provenance set against the root.
    pub fn from_parts(
        root: Arc<DirectedMultigraph>,
        graph: DirectedMultigraph,
        provenance: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let node = ProvenancedGraph {
            root,
            graph,
            provenance,
        };
        node.check_provenance()?;
        Ok(node)
    }

    pub fn graph(&self) -> &DirectedMultigraph {
        &self.graph
    }

    pub fn provenance(&self) -> &[Vec<usize>] {
        &self.provenance
    }

    pub fn root_graph(&self) -> &DirectedMultigraph {
        &self.root
    }

    pub fn root_arc(&self) -> &Arc<DirectedMultigraph> {
        &self.root
    }

    pub fn is_root(&self) -> bool {
        *self.graph.edges() == *self.root.edges()
            && self.provenance.iter().enumerate().all(|(k, s)| s == &[k])
    }

    /// Checks that each `s(e)` is nonempty and chains root edges from
    /// `tail(e)` to `head(e)`.
    pub fn check_provenance(&self) -> Result<()> {
        if self.provenance.len() != self.graph.edge_count() {
            return Err(Error::LengthMismatch {
                expected: self.graph.edge_count(),
                actual: self.provenance.len(),
            });
        }
        let root_edges = self.root.edge_count();
        for (k, (e, s)) in self.graph.edges().iter().zip(&self.provenance).enumerate() {
            let bad = |reason: String| Error::BadReductionEdge { edge: k, reason };
            if s.is_empty() {
                return Err(bad("empty provenance".into()));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&d| d >= root_edges) {
                return Err(bad(format!("provenance {s:?} is not a sorted set of root edges")));
            }
            let mut chain: Vec<Edge> = s.iter().map(|&d| self.root.edge(d)).collect();
            chain.sort();
            let mut at = e.tail;
            for step in &chain {
                if step.tail != at {
                    return Err(bad(format!("provenance {s:?} is not a path from {}", e.tail)));
                }
                at = step.head;
            }
            if at != e.head {
                return Err(bad(format!("provenance {s:?} ends at {at}, not {}", e.head)));
            }
        }
        Ok(())
    }

    /// The linear map from this node's edge coordinates to the root's.
    pub fn phi(&self) -> PhiMap {
        phi_map(self)
    }

    /// Replaces the edges `incoming ∪ outgoing` at `i` by one edge per edge
    /// of `tree`, where the left side is `incoming` followed by `i` itself and
    /// the right side is `outgoing`. A tree edge `(p, q)` with `p <= |incoming|`
    /// becomes `(tail(incoming[p]), head(outgoing[q]))`, carrying the union of
    /// both provenances; `(|incoming|+1, q)` keeps `outgoing[q]` unchanged.
    ///
    /// Untouched edges come first, then the new ones in tree-edge order; the
    /// result is stably sorted by `(tail, head)`.
    pub fn reduce_at_vertex(
        &self,
        i: Vertex,
        incoming: &[usize],
        outgoing: &[usize],
        tree: &NoncrossingTree,
    ) -> Result<Self> {
        let g = &self.graph;
        if i <= g.first() || i >= g.last() {
            return Err(Error::Precondition {
                vertex: i,
                reason: "reductions need an interior vertex".into(),
            });
        }
        let mut used = vec![false; g.edge_count()];
        for (list, incident_head) in [(incoming, true), (outgoing, false)] {
            for &k in list {
                if k >= g.edge_count() {
                    return Err(Error::BadReductionEdge {
                        edge: k,
                        reason: format!("graph has {} edges", g.edge_count()),
                    });
                }
                let e = g.edge(k);
                let ok = if incident_head { e.head == i } else { e.tail == i };
                if !ok {
                    let side = if incident_head { "incoming" } else { "outgoing" };
                    return Err(Error::BadReductionEdge {
                        edge: k,
                        reason: format!("{e} is not {side} at {i}"),
                    });
                }
                if std::mem::replace(&mut used[k], true) {
                    return Err(Error::BadReductionEdge {
                        edge: k,
                        reason: "listed twice".into(),
                    });
                }
            }
        }
        if tree.left() != incoming.len() + 1 || tree.right() != outgoing.len() {
            return Err(Error::TreeShapeMismatch {
                left: tree.left(),
                right: tree.right(),
                expected_left: incoming.len() + 1,
                expected_right: outgoing.len(),
            });
        }

        let mut edges = Vec::with_capacity(g.edge_count());
        let mut provenance = Vec::with_capacity(g.edge_count());
        for (k, e) in g.edges().iter().enumerate() {
            if !used[k] {
                edges.push(*e);
                provenance.push(self.provenance[k].clone());
            }
        }
        for &(p, q) in tree.edges() {
            let out = outgoing[q - 1];
            if p <= incoming.len() {
                let inc = incoming[p - 1];
                edges.push(Edge::new(g.edge(inc).tail, g.edge(out).head));
                provenance.push(disjoint_union(&self.provenance[inc], &self.provenance[out])?);
            } else {
                edges.push(g.edge(out));
                provenance.push(self.provenance[out].clone());
            }
        }

        let unsorted = DirectedMultigraph::new(g.first(), g.vertex_count(), edges)?;
        let perm = unsorted.canonical_permutation();
        let graph = unsorted.canonicalized();
        let provenance = perm.iter().map(|&k| std::mem::take(&mut provenance[k])).collect();
        Ok(ProvenancedGraph {
            root: Arc::clone(&self.root),
            graph,
            provenance,
        })
    }
}

fn disjoint_union(a: &[usize], b: &[usize]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() || y < b.len() {
        match (a.get(x), b.get(y)) {
            (Some(&u), Some(&v)) if u == v => return Err(Error::ProvenanceOverlap(u)),
            (Some(&u), Some(&v)) if u < v => {
                out.push(u);
                x += 1;
            }
            (Some(&u), None) => {
                out.push(u);
                x += 1;
            }
            (_, Some(&v)) => {
                out.push(v);
                y += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(out)
}

/// `φ`: column `e` is the indicator vector of `s(e)` among root edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiMap {
    root_edges: usize,
    columns: Vec<Vec<usize>>,
}

pub fn phi_map(node: &ProvenancedGraph) -> PhiMap {
    PhiMap {
        root_edges: node.root.edge_count(),
        columns: node.provenance.clone(),
    }
}

impl PhiMap {
    pub fn source_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn target_dim(&self) -> usize {
        self.root_edges
    }

    pub fn apply(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.check_len(x.len())?;
        let mut y = vec![0i64; self.root_edges];
        for (s, &v) in self.columns.iter().zip(x) {
            for &d in s {
                y[d] += v;
            }
        }
        Ok(y)
    }

    pub fn apply_rational(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        self.check_len(x.len())?;
        let mut y = vec![BigRational::zero(); self.root_edges];
        for (s, v) in self.columns.iter().zip(x) {
            for &d in s {
                y[d] += v;
            }
        }
        Ok(y)
    }

    /// Dense 0/1 matrix, one row per root edge.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.columns.len()]; self.root_edges];
        for (e, s) in self.columns.iter().enumerate() {
            for &d in s {
                m[d][e] = 1;
            }
        }
        m
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.columns.len() {
            return Err(Error::LengthMismatch {
                expected: self.columns.len(),
                actual: len,
            });
        }
        Ok(())
    }
}
