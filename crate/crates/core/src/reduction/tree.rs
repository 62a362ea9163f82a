use std::cmp::Reverse;
use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{attach_source, DirectedMultigraph, Vertex};
use crate::kostant::FlowCounter;
use crate::lidskii::LidskiiExpansion;

use super::noncrossing::{enumerate_noncrossing_trees, NoncrossingTree};
use super::provenance::ProvenancedGraph;

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionOptions {
    /// Upper bound on the number of tree nodes (or dissection cells) built.
    pub node_cap: usize,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

/// The reduction that produced a node: at `vertex`, with the ordered edge
/// lists and the chosen noncrossing tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub vertex: Vertex,
    pub incoming: Vec<usize>,
    pub outgoing: Vec<usize>,
    pub tree: NoncrossingTree,
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub graph: ProvenancedGraph,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub step: Option<ReductionStep>,
    pub depth: usize,
}

/// Which vertices get reduced, in order, and which incoming edges are left
/// alone (the source edges of `G(c)`).
#[derive(Debug, Clone)]
struct Schedule {
    vertices: Vec<Vertex>,
    skip_tail: Option<Vertex>,
}

impl Schedule {
    fn canonical(g: &DirectedMultigraph, skip_tail: Option<Vertex>) -> Self {
        // vertices n, n-1, ..., 2 of the graph on [1, n+1]
        let vertices = (2..g.last()).rev().collect();
        Schedule { vertices, skip_tail }
    }
}

/// `indices` sorted by decreasing edge length, ties by ascending index.
pub fn order_by_length(g: &DirectedMultigraph, mut indices: Vec<usize>) -> Vec<usize> {
    indices.sort_by_key(|&k| (Reverse(g.edge(k).length()), k));
    indices
}

/// All children of `node` for the full reduction at `vertex`, in tree
/// enumeration order. Incoming edges with tail `skip_tail` are not reduced.
pub fn full_reduction_children(
    node: &ProvenancedGraph,
    vertex: Vertex,
    skip_tail: Option<Vertex>,
) -> Result<Vec<(ReductionStep, ProvenancedGraph)>> {
    let g = node.graph();
    let incoming: Vec<usize> = g
        .incoming(vertex)
        .into_iter()
        .filter(|&k| Some(g.edge(k).tail) != skip_tail)
        .collect();
    let incoming = order_by_length(g, incoming);
    let outgoing = order_by_length(g, g.outgoing(vertex));
    if outgoing.is_empty() {
        return Err(Error::Precondition {
            vertex,
            reason: "no outgoing edges left to reduce".into(),
        });
    }
    enumerate_noncrossing_trees(incoming.len() + 1, outgoing.len())?
        .into_iter()
        .map(|tree| {
            let child = node.reduce_at_vertex(vertex, &incoming, &outgoing, &tree)?;
            let step = ReductionStep {
                vertex,
                incoming: incoming.clone(),
                outgoing: outgoing.clone(),
                tree,
            };
            Ok((step, child))
        })
        .collect()
}

fn check_reducible(g: &DirectedMultigraph) -> Result<()> {
    if g.first() != 1 {
        return Err(Error::InvalidArgument("reduction trees expect a graph on [1, n+1]".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let outdeg = g.outdegrees();
    if let Some(pos) = (0..g.vertex_count() - 1).find(|&p| outdeg[p] == 0) {
        return Err(Error::Precondition {
            vertex: g.label(pos),
            reason: "outdegree 0 at a non-sink vertex".into(),
        });
    }
    Ok(())
}

fn root_and_schedule(g: &DirectedMultigraph, c: Option<&[i64]>) -> Result<(ProvenancedGraph, Schedule)> {
    check_reducible(g)?;
    match c {
        None => Ok((ProvenancedGraph::root(g.clone()), Schedule::canonical(g, None))),
        Some(c) => {
            let gc = attach_source(g, c)?;
            Ok((ProvenancedGraph::root(gc), Schedule::canonical(g, Some(0))))
        }
    }
}

/// A materialized reduction tree; node 0 is the root and nodes are stored in
/// breadth-first order.
#[derive(Debug, Clone)]
pub struct ReductionTree {
    nodes: Vec<TreeNode>,
    source: Option<Vec<i64>>,
}

/// `R_G`: full reductions at `n, ..., 2`.
pub fn canonical_reduction_tree(g: &DirectedMultigraph, options: &ReductionOptions) -> Result<ReductionTree> {
    ReductionTree::build(g, None, options)
}

/// `R_G^c`: the same schedule on `G(c)`, never reducing the source edges.
pub fn reduction_tree_with_source(
    g: &DirectedMultigraph,
    c: &[i64],
    options: &ReductionOptions,
) -> Result<ReductionTree> {
    ReductionTree::build(g, Some(c), options)
}

impl ReductionTree {
    fn build(g: &DirectedMultigraph, c: Option<&[i64]>, options: &ReductionOptions) -> Result<Self> {
        let (root, schedule) = root_and_schedule(g, c)?;
        let mut nodes = vec![TreeNode {
            graph: root,
            parent: None,
            children: Vec::new(),
            step: None,
            depth: 0,
        }];
        let mut queue = VecDeque::from([0usize]);
        while let Some(idx) = queue.pop_front() {
            let depth = nodes[idx].depth;
            let Some(&vertex) = schedule.vertices.get(depth) else {
                continue;
            };
            for (step, child) in full_reduction_children(&nodes[idx].graph, vertex, schedule.skip_tail)? {
                if nodes.len() >= options.node_cap {
                    return Err(Error::NodeCapExceeded {
                        cap: options.node_cap,
                    });
                }
                let id = nodes.len();
                nodes.push(TreeNode {
                    graph: child,
                    parent: Some(idx),
                    children: Vec::new(),
                    step: Some(step),
                    depth: depth + 1,
                });
                nodes[idx].children.push(id);
                queue.push_back(id);
            }
        }
        Ok(ReductionTree {
            nodes,
            source: c.map(<[i64]>::to_vec),
        })
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The source multiplicities `c` for `R_G^c`, `None` for `R_G`.
    pub fn source(&self) -> Option<&[i64]> {
        self.source.as_deref()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.children.is_empty())
    }

    pub fn leaf_census(&self) -> Result<LeafCensus> {
        let mut census = CensusBuilder::default();
        for leaf in self.leaves() {
            census.add(&leaf_composition(leaf.graph.graph(), self.source())?);
        }
        Ok(census.finish())
    }

    /// Graphviz rendering: nodes labeled with edge multisets, arcs with the
    /// reduction vertex and noncrossing tree.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph reduction {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (id, node) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{id} [label=\"{}\"];", node.graph.graph());
        }
        for (id, node) in self.nodes.iter().enumerate() {
            if let (Some(parent), Some(step)) = (node.parent, &node.step) {
                let _ = writeln!(out, "  n{parent} -> n{id} [label=\"i={} T={}\"];", step.vertex, step.tree);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Walks `R_G` (or `R_G^c` when `c` is given) depth-first, handing each leaf
/// to `visit` without keeping the tree. Returns the number of nodes visited.
pub fn visit_leaves<F>(
    g: &DirectedMultigraph,
    c: Option<&[i64]>,
    options: &ReductionOptions,
    mut visit: F,
) -> Result<usize>
where
    F: FnMut(&ProvenancedGraph) -> Result<()>,
{
    let (root, schedule) = root_and_schedule(g, c)?;
    let mut visited = 1usize;
    let mut stack = vec![(root, 0usize)];
    while let Some((node, depth)) = stack.pop() {
        let Some(&vertex) = schedule.vertices.get(depth) else {
            visit(&node)?;
            continue;
        };
        let children = full_reduction_children(&node, vertex, schedule.skip_tail)?;
        visited += children.len();
        if visited > options.node_cap {
            return Err(Error::NodeCapExceeded {
                cap: options.node_cap,
            });
        }
        // reversed so leaves come out in the same order as breadth-first
        stack.extend(children.into_iter().rev().map(|(_, child)| (child, depth + 1)));
    }
    Ok(visited)
}

/// Census without materializing the tree.
pub fn stream_leaf_census(
    g: &DirectedMultigraph,
    c: Option<&[i64]>,
    options: &ReductionOptions,
) -> Result<LeafCensus> {
    let mut census = CensusBuilder::default();
    visit_leaves(g, c, options, |leaf| {
        census.add(&leaf_composition(leaf.graph(), c)?);
        Ok(())
    })?;
    Ok(census.finish())
}

/// Reads `j` off a leaf of the form `G[j+1]` (or `G[j+1](c)`), or explains
/// why the leaf has some other shape.
pub fn leaf_composition(leaf: &DirectedMultigraph, c: Option<&[i64]>) -> Result<Vec<u64>> {
    let unexpected = |reason: String| Error::UnexpectedLeaf {
        leaf: leaf.to_string(),
        reason,
    };
    let expected_first = if c.is_some() { 0 } else { 1 };
    if leaf.first() != expected_first {
        return Err(unexpected(format!("vertex set starts at {}", leaf.first())));
    }
    let sink = leaf.last();
    let n = (sink - 1) as usize;
    let mut to_sink = vec![0i64; n];
    let mut from_source = vec![0i64; n];
    for e in leaf.edges() {
        if c.is_some() && e.tail == 0 {
            if e.head == sink {
                return Err(unexpected("edge from the source straight to the sink".into()));
            }
            from_source[e.head as usize - 1] += 1;
        } else if e.head == sink {
            to_sink[e.tail as usize - 1] += 1;
        } else {
            return Err(unexpected(format!("edge {e} does not end at the sink")));
        }
    }
    if let Some(c) = c {
        if from_source != c {
            return Err(unexpected(format!("source multiplicities {from_source:?}, expected {c:?}")));
        }
    }
    to_sink
        .iter()
        .enumerate()
        .map(|(p, &m)| {
            if m == 0 {
                Err(unexpected(format!("vertex {} has no edge to the sink", p + 1)))
            } else {
                Ok(m as u64 - 1)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub composition: Vec<u64>,
    pub count: u64,
}

/// Multiset of leaf compositions `j`, sorted by composition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LeafCensus {
    pub entries: Vec<CensusEntry>,
}

impl LeafCensus {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }

    pub fn count_of(&self, composition: &[u64]) -> u64 {
        self.entries
            .iter()
            .find(|e| e.composition == composition)
            .map_or(0, |e| e.count)
    }
}

impl FromIterator<Vec<u64>> for LeafCensus {
    fn from_iter<I: IntoIterator<Item = Vec<u64>>>(iter: I) -> Self {
        let mut census = CensusBuilder::default();
        for j in iter {
            census.add(&j);
        }
        census.finish()
    }
}

#[derive(Default)]
struct CensusBuilder(BTreeMap<Vec<u64>, u64>);

impl CensusBuilder {
    fn add(&mut self, composition: &[u64]) {
        *self.0.entry(composition.to_vec()).or_default() += 1;
    }

    fn finish(self) -> LeafCensus {
        LeafCensus {
            entries: self
                .0
                .into_iter()
                .map(|(composition, count)| CensusEntry { composition, count })
                .collect(),
        }
    }
}

/// The census predicted from Kostant partition function values:
/// `K_G(j - out_G, 0)` copies of each dominant `j`.
pub fn expected_census(counter: &mut FlowCounter) -> Result<LeafCensus> {
    let expansion = LidskiiExpansion::with_counter(counter)?;
    let entries = expansion
        .terms()
        .iter()
        .filter(|t| t.kernel > 0u32.into())
        .map(|t| {
            let count = u64::try_from(&t.kernel)
                .map_err(|_| Error::InvalidArgument(format!("census count {} overflows", t.kernel)))?;
            Ok(CensusEntry {
                composition: t.composition.0.clone(),
                count,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LeafCensus { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_gm, NetflowVector};
    use crate::kostant::normalized_volume_oracle;
    use crate::FlowInstance;

    fn opts() -> ReductionOptions {
        ReductionOptions::default()
    }

    #[test]
    fn k4_leaves() {
        let k4 = DirectedMultigraph::complete(4);
        let tree = canonical_reduction_tree(&k4, &opts()).unwrap();
        let leaves: Vec<_> = tree.leaves().collect();
        assert_eq!(leaves.len(), 2);
        assert!(leaves.iter().any(|l| l.graph.graph().same_shape(&build_gm(&[4, 1, 1]).unwrap())));
        assert!(leaves.iter().any(|l| l.graph.graph().same_shape(&build_gm(&[3, 2, 1]).unwrap())));
        let census = tree.leaf_census().unwrap();
        assert_eq!(serde_json::to_string(&census).unwrap(),
            r#"[{"composition":[2,1,0],"count":1},{"composition":[3,0,0],"count":1}]"#);
        assert_eq!(census, stream_leaf_census(&k4, None, &opts()).unwrap());
        assert_eq!(census, expected_census(&mut FlowCounter::new(&k4)).unwrap());
    }

    #[test]
    fn k4_with_source() {
        let k4 = DirectedMultigraph::complete(4);
        let c = [3, 2, 2];
        let with = reduction_tree_with_source(&k4, &c, &opts()).unwrap();
        let plain = canonical_reduction_tree(&k4, &opts()).unwrap();
        assert_eq!(with.len(), plain.len());
        for (a, b) in with.nodes().iter().zip(plain.nodes()) {
            assert_eq!(&a.graph.graph().without_first_vertex().unwrap(), b.graph.graph());
            assert_eq!(a.parent, b.parent);
        }
        assert_eq!(with.leaf_census().unwrap(), plain.leaf_census().unwrap());
        for leaf in with.leaves() {
            let j = leaf_composition(leaf.graph.graph(), Some(&c)).unwrap();
            let m: Vec<i64> = j.iter().map(|&x| x as i64 + 1).collect();
            let expect = attach_source(&build_gm(&m).unwrap(), &c).unwrap();
            assert!(leaf.graph.graph().same_shape(&expect));
        }
    }

    #[test]
    fn path_and_single_edge() {
        let path = DirectedMultigraph::path(3);
        let tree = canonical_reduction_tree(&path, &opts()).unwrap();
        assert_eq!(tree.len(), 2);
        let census = tree.leaf_census().unwrap();
        assert_eq!(census.entries, vec![CensusEntry { composition: vec![0, 0], count: 1 }]);
        assert_eq!(reduction_tree_with_source(&path, &[1, 1], &opts()).unwrap().leaves().count(), 1);

        let edge = DirectedMultigraph::path(2);
        let tree = canonical_reduction_tree(&edge, &opts()).unwrap();
        assert_eq!(tree.len(), 1);
        assert!(tree.root().graph.is_root());
    }

    #[test]
    fn node_cap_aborts() {
        let k5 = DirectedMultigraph::complete(5);
        let err = canonical_reduction_tree(&k5, &ReductionOptions { node_cap: 3 }).unwrap_err();
        assert!(matches!(err, Error::NodeCapExceeded { cap: 3 }));
        assert!(stream_leaf_census(&k5, None, &ReductionOptions { node_cap: 3 }).is_err());
    }

    #[test]
    fn preconditions() {
        let g = DirectedMultigraph::on_vertices(4, &[(1, 2), (1, 4)]).unwrap();
        assert!(matches!(
            canonical_reduction_tree(&g, &opts()),
            Err(Error::Precondition { vertex: 3, .. }) | Err(Error::Disconnected)
        ));
        let g = DirectedMultigraph::on_vertices(3, &[(1, 3), (2, 3)]).unwrap();
        assert!(canonical_reduction_tree(&g, &opts()).is_ok());
    }

    #[test]
    fn edge_count_and_dimension_preserved() {
        let k5 = DirectedMultigraph::complete(5);
        let tree = canonical_reduction_tree(&k5, &opts()).unwrap();
        for node in tree.nodes() {
            assert_eq!(node.graph.graph().edge_count(), 10);
            node.graph.check_provenance().unwrap();
            if let (Some(p), Some(step)) = (node.parent, &node.step) {
                let parent = tree.node(p);
                assert_eq!(
                    node.graph.graph().edge_count(),
                    parent.graph.graph().edge_count() - step.incoming.len() - step.outgoing.len()
                        + step.tree.edges().len()
                );
            }
        }
        assert_eq!(tree.leaf_census().unwrap(), expected_census(&mut FlowCounter::new(&k5)).unwrap());
    }

    #[test]
    fn leaf_volumes_add_up() {
        let k4 = DirectedMultigraph::complete(4);
        let a = NetflowVector::from_supplies(&[1, 2, 1]);
        let whole = normalized_volume_oracle(&FlowInstance::new(k4.clone(), a.clone()).unwrap()).unwrap();
        let tree = canonical_reduction_tree(&k4, &opts()).unwrap();
        let parts: num_bigint::BigUint = tree
            .leaves()
            .map(|l| normalized_volume_oracle(&FlowInstance::new(l.graph.graph().clone(), a.clone()).unwrap()).unwrap())
            .sum();
        assert_eq!(parts, whole);
    }

    #[test]
    fn dot_export() {
        let tree = canonical_reduction_tree(&DirectedMultigraph::path(3), &opts()).unwrap();
        let dot = tree.to_dot();
        assert!(dot.starts_with("digraph reduction {"));
        assert!(dot.contains("n0 [label=\"(1,2) (2,3)\"];"));
        assert!(dot.contains("n0 -> n1 [label=\"i=2 T={(1,1),(2,1)}\"];"));
    }

    #[test]
    fn unexpected_leaf_shapes() {
        let g = DirectedMultigraph::path(3);
        assert!(matches!(leaf_composition(&g, None), Err(Error::UnexpectedLeaf { .. })));
        let g = DirectedMultigraph::on_vertices(3, &[(1, 3)]).unwrap();
        assert!(matches!(leaf_composition(&g, None), Err(Error::UnexpectedLeaf { .. })));
    }

    #[test]
    fn census_json_round_trip() {
        let census = stream_leaf_census(&DirectedMultigraph::complete(5), None, &opts()).unwrap();
        let json = serde_json::to_string(&census).unwrap();
        assert_eq!(serde_json::from_str::<LeafCensus>(&json).unwrap(), census);
    }
}
