//! Directed multigraphs with edges oriented from smaller to larger vertex
//! labels, netflow vectors, and the `G[m]` / `G(c)` constructions.

mod format;

pub use format::{parse_graph, write_graph};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub tail: Vertex,
    pub head: Vertex,
}

impl Edge {
    pub fn new(tail: Vertex, head: Vertex) -> Self {
        Edge { tail, head }
    }

    pub fn length(&self) -> u32 {
        self.head - self.tail
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.tail, self.head)
    }
}

/// A loopless multigraph on the consecutive labels `first..=last` whose edges
/// all point from the smaller to the larger endpoint.
///
/// Edges are identified by their position in the edge list; parallel edges
/// are distinct edges with distinct indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedMultigraph {
    first: Vertex,
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl DirectedMultigraph {
    pub fn new(first: Vertex, vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyVertexSet);
        }
        let last = first + vertex_count as Vertex - 1;
        for e in &edges {
            if e.tail >= e.head || e.tail < first || e.head > last {
                return Err(Error::InvalidEdge {
                    tail: e.tail,
                    head: e.head,
                    first,
                    last,
                });
            }
        }
        Ok(DirectedMultigraph {
            first,
            vertex_count,
            edges,
        })
    }

    /// Graph on the vertex set `[1, vertex_count]`.
    pub fn on_vertices(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        Self::new(
            1,
            vertex_count,
            edges.iter().map(|&(t, h)| Edge::new(t, h)).collect(),
        )
    }

    /// Complete graph `K_{n}` on `[1, n]` in canonical edge order.
    pub fn complete(vertex_count: usize) -> Self {
        let n = vertex_count as Vertex;
        let edges = (1..=n)
            .flat_map(|t| (t + 1..=n).map(move |h| Edge::new(t, h)))
            .collect();
        DirectedMultigraph {
            first: 1,
            vertex_count,
            edges,
        }
    }

    /// Directed path `1 -> 2 -> ... -> vertex_count`.
    pub fn path(vertex_count: usize) -> Self {
        let edges = (1..vertex_count as Vertex).map(|t| Edge::new(t, t + 1)).collect();
        DirectedMultigraph {
            first: 1,
            vertex_count,
            edges,
        }
    }

    pub fn first(&self) -> Vertex {
        self.first
    }

    pub fn last(&self) -> Vertex {
        self.first + self.vertex_count as Vertex - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Edge {
        self.edges[index]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        self.first..=self.last()
    }

    /// Position of a vertex label in per-vertex vectors.
    pub fn position(&self, v: Vertex) -> usize {
        (v - self.first) as usize
    }

    pub fn label(&self, position: usize) -> Vertex {
        self.first + position as Vertex
    }

    pub fn outdegrees(&self) -> Vec<usize> {
        let mut out = vec![0; self.vertex_count];
        for e in &self.edges {
            out[self.position(e.tail)] += 1;
        }
        out
    }

    pub fn indegrees(&self) -> Vec<usize> {
        let mut ind = vec![0; self.vertex_count];
        for e in &self.edges {
            ind[self.position(e.head)] += 1;
        }
        ind
    }

    pub fn incoming(&self, v: Vertex) -> Vec<usize> {
        (0..self.edges.len()).filter(|&k| self.edges[k].head == v).collect()
    }

    pub fn outgoing(&self, v: Vertex) -> Vec<usize> {
        (0..self.edges.len()).filter(|&k| self.edges[k].tail == v).collect()
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.vertex_count;
        for e in &self.edges {
            let a = find(&mut parent, self.position(e.tail));
            let b = find(&mut parent, self.position(e.head));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components
    }

    /// Permutation that sorts edges by `(tail, head)`, keeping insertion
    /// order among equal pairs. `perm[k]` is the old index of new edge `k`.
    pub fn canonical_permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.edges.len()).collect();
        perm.sort_by_key(|&k| (self.edges[k].tail, self.edges[k].head));
        perm
    }

    pub fn canonicalized(&self) -> Self {
        let edges = self
            .canonical_permutation()
            .into_iter()
            .map(|k| self.edges[k])
            .collect();
        DirectedMultigraph { edges, ..*self }
    }

    /// Sorted `(tail, head)` multiset; two graphs are the same shape iff these agree.
    pub fn edge_multiset(&self) -> Vec<Edge> {
        let mut edges = self.edges.clone();
        edges.sort();
        edges
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.first == other.first
            && self.vertex_count == other.vertex_count
            && self.edge_multiset() == other.edge_multiset()
    }

    /// Drops the first vertex and every edge incident to it.
    pub fn without_first_vertex(&self) -> Result<Self> {
        if self.vertex_count < 2 {
            return Err(Error::InvalidArgument(
                "cannot remove the only vertex".into(),
            ));
        }
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| e.tail != self.first)
            .collect();
        Ok(DirectedMultigraph {
            first: self.first + 1,
            vertex_count: self.vertex_count - 1,
            edges,
        })
    }

    /// `M_G`: one row per vertex, one column per edge, column `(i,j)` is `e_i - e_j`.
    pub fn incidence_matrix(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.edges.len()]; self.vertex_count];
        for (k, e) in self.edges.iter().enumerate() {
            m[self.position(e.tail)][k] += 1;
            m[self.position(e.head)][k] -= 1;
        }
        m
    }

    /// `M_G f`, the netflow produced by an edge flow.
    pub fn netflow_of(&self, flow: &[i64]) -> Vec<i64> {
        assert_eq!(flow.len(), self.edges.len());
        let mut a = vec![0i64; self.vertex_count];
        for (e, &x) in self.edges.iter().zip(flow) {
            a[self.position(e.tail)] += x;
            a[self.position(e.head)] -= x;
        }
        a
    }

    pub fn degree_stats(&self) -> DegreeStats {
        degree_stats(self)
    }
}

impl fmt::Display for DirectedMultigraph {
    /// Edge multiset with run-length multiplicities, e.g. `(1,4)x4 (2,4) (3,4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges = self.edge_multiset();
        let mut first = true;
        let mut k = 0;
        while k < edges.len() {
            let mut run = 1;
            while k + run < edges.len() && edges[k + run] == edges[k] {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}", edges[k])?;
            if run > 1 {
                write!(f, "x{run}")?;
            }
            k += run;
        }
        if first {
            f.write_str("(no edges)")?;
        }
        Ok(())
    }
}

/// Per-vertex degrees together with the shifted values `outdeg - 1` and
/// `indeg - 1` used by the Lidskii formulas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub outdeg: Vec<usize>,
    pub indeg: Vec<usize>,
    /// `outdeg(i) - 1` for every vertex but the sink.
    pub out_shift: Vec<i64>,
    /// `indeg(i) - 1` for every vertex but the sink.
    pub in_shift: Vec<i64>,
}

pub fn degree_stats(g: &DirectedMultigraph) -> DegreeStats {
    let outdeg = g.outdegrees();
    let indeg = g.indegrees();
    let n = g.vertex_count() - 1;
    let out_shift = outdeg[..n].iter().map(|&d| d as i64 - 1).collect();
    let in_shift = indeg[..n].iter().map(|&d| d as i64 - 1).collect();
    DegreeStats {
        outdeg,
        indeg,
        out_shift,
        in_shift,
    }
}

/// `G[m]`: the graph on `[n+1]` with `m_i` parallel edges `(i, n+1)`.
pub fn build_gm(m: &[i64]) -> Result<DirectedMultigraph> {
    let sink = m.len() as Vertex + 1;
    let mut edges = Vec::new();
    for (position, &mi) in m.iter().enumerate() {
        if mi <= 0 {
            return Err(Error::NonPositiveMultiplicity {
                position,
                value: mi,
            });
        }
        edges.extend((0..mi).map(|_| Edge::new(position as Vertex + 1, sink)));
    }
    DirectedMultigraph::new(1, m.len() + 1, edges)
}

/// `G(c)`: adds a source vertex 0 and `c_i` parallel edges `(0, i)`, placed
/// ahead of the edges of `G`.
pub fn attach_source(g: &DirectedMultigraph, c: &[i64]) -> Result<DirectedMultigraph> {
    if g.first() != 1 {
        return Err(Error::InvalidArgument(
            "attach_source expects a graph on [1, n+1]".into(),
        ));
    }
    let n = g.vertex_count() - 1;
    if c.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: c.len(),
        });
    }
    let mut edges = Vec::with_capacity(g.edge_count() + c.iter().sum::<i64>().max(0) as usize);
    for (position, &ci) in c.iter().enumerate() {
        if ci <= 0 {
            return Err(Error::NonPositiveMultiplicity {
                position,
                value: ci,
            });
        }
        edges.extend((0..ci).map(|_| Edge::new(0, position as Vertex + 1)));
    }
    edges.extend_from_slice(g.edges());
    DirectedMultigraph::new(0, g.vertex_count() + 1, edges)
}

/// Integer vertex supplies summing to zero, indexed by vertex position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetflowVector(Vec<i64>);

impl NetflowVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        let sum: i64 = entries.iter().sum();
        if sum != 0 {
            return Err(Error::NetflowNotBalanced(sum));
        }
        Ok(NetflowVector(entries))
    }

    /// `(a_1, ..., a_n, -sum a_i)`.
    pub fn from_supplies(supplies: &[i64]) -> Self {
        let mut entries = supplies.to_vec();
        entries.push(-supplies.iter().sum::<i64>());
        NetflowVector(entries)
    }

    /// Unit flow from the first to the last of `len` vertices.
    pub fn unit(len: usize) -> Self {
        let mut entries = vec![0; len];
        entries[0] = 1;
        entries[len - 1] = -1;
        NetflowVector(entries)
    }

    pub fn zero(len: usize) -> Self {
        NetflowVector(vec![0; len])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn supplies(&self) -> &[i64] {
        &self.0[..self.0.len().saturating_sub(1)]
    }

    /// All entries except the last are nonnegative.
    pub fn is_nice_chamber(&self) -> bool {
        self.supplies().iter().all(|&x| x >= 0)
    }

    pub fn dilate(&self, t: i64) -> Self {
        NetflowVector(self.0.iter().map(|&x| x * t).collect())
    }
}

impl fmt::Display for NetflowVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}
