use crate::error::{Error, Result};
use crate::geometry::{path_flow_vertices, SimplexCell};
use crate::graph::{DirectedMultigraph, Vertex};

use super::provenance::ProvenancedGraph;
use super::tree::{full_reduction_children, leaf_composition, visit_leaves, ReductionOptions};

/// Full reduction at `i` keeping only the trees in which the appended left
/// vertex `i` has exactly one edge. When the netflow vanishes at `i` the
/// discarded children are lower-dimensional, and the kept ones dissect the
/// node's polytope.
pub fn zero_vertex_dissection_children(node: &ProvenancedGraph, i: Vertex) -> Result<Vec<ProvenancedGraph>> {
    Ok(full_reduction_children(node, i, None)?
        .into_iter()
        .filter(|(step, _)| step.tree.left_degree(step.tree.left()) == 1)
        .map(|(_, child)| child)
        .collect())
}

/// Streams the cells of the dissection of `F_{G(c)}(e_0 - e_{n+1})`: every
/// leaf `G[j+1](c)` of `R_G^c` is cut at vertices `1, ..., n` in turn by
/// [`zero_vertex_dissection_children`], and each terminal graph contributes
/// the simplex spanned by its source-to-sink paths, mapped to root
/// coordinates. Returns the number of cells.
pub fn visit_dissection<F>(
    g: &DirectedMultigraph,
    c: &[i64],
    options: &ReductionOptions,
    mut visit: F,
) -> Result<usize>
where
    F: FnMut(SimplexCell) -> Result<()>,
{
    let n = g.vertex_count().saturating_sub(1);
    if c.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: c.len(),
        });
    }
    let mut leaf_index = 0usize;
    let mut cells = 0usize;
    visit_leaves(g, Some(c), options, |leaf| {
        let composition = leaf_composition(leaf.graph(), Some(c))?;
        let mut frontier: Vec<(ProvenancedGraph, Vec<usize>)> = vec![(leaf.clone(), Vec::new())];
        for i in 1..=n as Vertex {
            let mut next = Vec::new();
            for (node, choices) in &frontier {
                for (k, child) in zero_vertex_dissection_children(node, i)?.into_iter().enumerate() {
                    let mut path = choices.clone();
                    path.push(k);
                    next.push((child, path));
                }
            }
            if cells + next.len() > options.node_cap {
                return Err(Error::NodeCapExceeded {
                    cap: options.node_cap,
                });
            }
            frontier = next;
        }
        for (terminal, choices) in frontier {
            let phi = terminal.phi();
            let vertices = path_flow_vertices(terminal.graph())
                .iter()
                .map(|f| phi.apply(f))
                .collect::<Result<Vec<_>>>()?;
            cells += 1;
            visit(SimplexCell {
                vertices,
                leaf: leaf_index,
                composition: composition.clone(),
                choices,
            })?;
        }
        leaf_index += 1;
        Ok(())
    })?;
    Ok(cells)
}

/// All cells of the dissection, in leaf order.
pub fn unimodular_dissection(g: &DirectedMultigraph, c: &[i64], options: &ReductionOptions) -> Result<Vec<SimplexCell>> {
    let mut cells = Vec::new();
    visit_dissection(g, c, options, |cell| {
        cells.push(cell);
        Ok(())
    })?;
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::binomial;
    use crate::graph::{attach_source, build_gm};
    use crate::reduction::noncrossing::enumerate_noncrossing_trees;

    fn opts() -> ReductionOptions {
        ReductionOptions::default()
    }

    #[test]
    fn cell_counts() {
        let k4 = DirectedMultigraph::complete(4);
        assert_eq!(unimodular_dissection(&k4, &[1, 1, 1], &opts()).unwrap().len(), 2);
        assert_eq!(unimodular_dissection(&k4, &[3, 2, 2], &opts()).unwrap().len(), 22);
        let path = DirectedMultigraph::path(3);
        let cells = unimodular_dissection(&path, &[1, 1], &opts()).unwrap();
        assert_eq!(cells.len(), 1);
        // G(1,1) for the path has 4 edges and dimension 1
        assert_eq!(cells[0].vertices.len(), 2);
    }

    #[test]
    fn kept_children_count() {
        // ℓ = 2, r = 2: one of the two trees has a single edge at the appended vertex
        let trees = enumerate_noncrossing_trees(2, 2).unwrap();
        assert_eq!(trees.iter().filter(|t| t.left_degree(2) == 1).count(), 1);

        for (ci, ji) in [(1i64, 0i64), (1, 3), (2, 2), (3, 1), (3, 4)] {
            // vertex 1 of G[j+1](c) on [0, 2]: c_1 edges in, j_1 + 1 out
            let leaf = attach_source(&build_gm(&[ji + 1]).unwrap(), &[ci]).unwrap();
            let kept = zero_vertex_dissection_children(&ProvenancedGraph::root(leaf), 1).unwrap();
            assert_eq!(binomial((ci + ji - 1) as u64, (ci - 1) as u64), kept.len().into());
            for child in &kept {
                // the vertex keeps exactly one (now dead) edge to the sink
                assert_eq!(child.graph().outgoing(1).len(), 1);
                assert!(child.graph().incoming(1).is_empty());
            }
        }
    }

    #[test]
    fn cells_record_choices() {
        let k4 = DirectedMultigraph::complete(4);
        let cells = unimodular_dissection(&k4, &[3, 2, 2], &opts()).unwrap();
        let mut keys: Vec<_> = cells.iter().map(|c| (c.leaf, c.choices.clone())).collect();
        keys.dedup();
        assert_eq!(keys.len(), 22);
        assert!(cells.iter().all(|c| c.choices.len() == 3));
        // F_{K4(3,2,2)} has 13 edges and 5 vertices, so dimension 9
        assert!(cells.iter().all(|c| c.vertices.len() == 10 && c.vertices[0].len() == 13));
    }

    #[test]
    fn cap_and_length_checks() {
        let k4 = DirectedMultigraph::complete(4);
        assert!(matches!(
            unimodular_dissection(&k4, &[3, 2, 2], &ReductionOptions { node_cap: 5 }),
            Err(Error::NodeCapExceeded { .. })
        ));
        assert!(matches!(
            unimodular_dissection(&k4, &[1, 1], &opts()),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(unimodular_dissection(&k4, &[1, 0, 1], &opts()).is_err());
    }
}
