//! Simplex extraction, lattice unimodularity, polytope membership and the
//! verification reports built on them.

mod lattice;
mod verify;

pub use lattice::{determinant, solve_rational, LatticeBasis};
pub use verify::{
    verify_dissection, verify_in_vector_bijection, verify_integral_equivalence, Check, Report, VerifyOptions,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DirectedMultigraph;
use crate::kostant::FlowInstance;

/// A lattice simplex in root edge coordinates, together with where it came
/// from: the index of the `R_G^c` leaf, that leaf's composition `j`, and
/// the index of the kept child chosen at each vertex `1, ..., n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexCell {
    pub vertices: Vec<Vec<i64>>,
    pub leaf: usize,
    pub composition: Vec<u64>,
    pub choices: Vec<usize>,
}

/// Indicator vectors of the directed paths from the first to the last vertex,
/// i.e. the vertices of `F_H(e_first - e_last)`.
pub fn path_flow_vertices(h: &DirectedMultigraph) -> Vec<Vec<i64>> {
    let outgoing: Vec<Vec<usize>> = h.vertices().map(|v| h.outgoing(v)).collect();
    let mut out = Vec::new();
    let mut current = vec![0i64; h.edge_count()];
    fn walk(
        h: &DirectedMultigraph,
        outgoing: &[Vec<usize>],
        at: usize,
        current: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if at == h.vertex_count() - 1 {
            out.push(current.clone());
            return;
        }
        for &k in &outgoing[at] {
            current[k] = 1;
            walk(h, outgoing, h.position(h.edge(k).head), current, out);
            current[k] = 0;
        }
    }
    walk(h, &outgoing, 0, &mut current, &mut out);
    out
}

/// Exact membership in `F_G(a)`: nonnegative with `M_G x = a`.
pub fn contains_flow(inst: &FlowInstance, point: &[BigRational]) -> Result<bool> {
    let g = inst.graph();
    if point.len() != g.edge_count() {
        return Err(Error::LengthMismatch {
            expected: g.edge_count(),
            actual: point.len(),
        });
    }
    if point.iter().any(Signed::is_negative) {
        return Ok(false);
    }
    let mut net = vec![BigRational::zero(); g.vertex_count()];
    for (e, x) in g.edges().iter().zip(point) {
        net[g.position(e.tail)] += x;
        net[g.position(e.head)] -= x;
    }
    Ok(net
        .iter()
        .zip(inst.netflow().entries())
        .all(|(x, &a)| *x == BigRational::from_integer(BigInt::from(a))))
}

pub fn contains_integer_flow(inst: &FlowInstance, point: &[i64]) -> Result<bool> {
    let g = inst.graph();
    if point.len() != g.edge_count() {
        return Err(Error::LengthMismatch {
            expected: g.edge_count(),
            actual: point.len(),
        });
    }
    Ok(point.iter().all(|&x| x >= 0) && g.netflow_of(point) == inst.netflow().entries())
}

/// Whether `cell` is a full-dimensional unimodular simplex in the lattice of
/// the ambient polytope's affine span. Computes the lattice basis afresh;
/// use [`LatticeBasis`] directly to amortize it over many cells.
pub fn is_unimodular(cell: &SimplexCell, ambient: &FlowInstance) -> Result<bool> {
    LatticeBasis::for_graph(ambient.graph())?.is_unimodular(&cell.vertices)
}
