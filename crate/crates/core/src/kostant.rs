//! Brute-force ground truth: the generalized Kostant partition function
//! `K_G(a)` (integer points of the flow polytope), Ehrhart polynomials by
//! interpolation, and normalized volumes from their leading coefficients.
//!
//! Nothing here knows about the Lidskii formulas.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::arith::binomial;
use crate::ehrhart::EhrhartPolynomial;
use crate::error::{Error, Result};
use crate::graph::{DirectedMultigraph, NetflowVector};

/// A graph together with a netflow vector: the flow polytope `F_G(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowInstance {
    graph: DirectedMultigraph,
    netflow: NetflowVector,
}

impl FlowInstance {
    pub fn new(graph: DirectedMultigraph, netflow: NetflowVector) -> Result<Self> {
        if netflow.len() != graph.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: graph.vertex_count(),
                actual: netflow.len(),
            });
        }
        Ok(FlowInstance {
            graph,
            netflow,
        })
    }

    pub fn graph(&self) -> &DirectedMultigraph {
        &self.graph
    }

    pub fn netflow(&self) -> &NetflowVector {
        &self.netflow
    }

    pub fn dilate(&self, t: i64) -> Self {
        FlowInstance {
            graph: self.graph.clone(),
            netflow: self.netflow.dilate(t),
        }
    }

    /// `|E| - |V| + 1`, an upper bound on the polytope dimension for a
    /// connected graph.
    pub fn dimension_bound(&self) -> usize {
        (self.graph().edge_count() + 1).saturating_sub(self.graph().vertex_count())
    }
}

/// Distinct heads of the out-edges of each vertex with their multiplicities.
fn grouped_out_edges(g: &DirectedMultigraph) -> Vec<Vec<(usize, u64)>> {
    let mut groups: Vec<Vec<(usize, u64)>> = vec![Vec::new(); g.vertex_count()];
    for e in g.edges() {
        let list = &mut groups[g.position(e.tail)];
        let head = g.position(e.head);
        match list.iter_mut().find(|(h, _)| *h == head) {
            Some((_, m)) => *m += 1,
            None => list.push((head, 1)),
        }
    }
    for list in &mut groups {
        list.sort_unstable();
    }
    groups
}

/// Memoized counter for integer flows on a fixed graph.
///
/// Vertices are processed in increasing order; once every edge into a vertex
/// has a value, the vertex's outflow is forced and gets split among its
/// out-neighbours (parallel edges contribute a multiset-coefficient weight).
/// The memo key is the next vertex together with the residual netflow on the
/// vertices not yet processed, so one counter can be reused across netflow
/// vectors and dilations of the same graph.
pub struct FlowCounter {
    graph: DirectedMultigraph,
    out_groups: Vec<Vec<(usize, u64)>>,
    memo: Vec<HashMap<Vec<i64>, BigUint>>,
}

impl FlowCounter {
    pub fn new(graph: &DirectedMultigraph) -> Self {
        FlowCounter {
            out_groups: grouped_out_edges(graph),
            memo: vec![HashMap::new(); graph.vertex_count()],
            graph: graph.clone(),
        }
    }

    pub fn graph(&self) -> &DirectedMultigraph {
        &self.graph
    }

    /// `K_G(a)`; zero when `a` has the wrong length or no flow exists.
    pub fn count(&mut self, netflow: &[i64]) -> BigUint {
        if netflow.len() != self.graph.vertex_count() || netflow.iter().sum::<i64>() != 0 {
            return BigUint::zero();
        }
        let mut residual = netflow.to_vec();
        self.count_from(0, &mut residual)
    }

    fn count_from(&mut self, v: usize, residual: &mut Vec<i64>) -> BigUint {
        let last = residual.len() - 1;
        if v == last {
            return if residual[v] == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        if residual[v] < 0 {
            return BigUint::zero();
        }
        if let Some(hit) = self.memo[v].get(&residual[v..]) {
            return hit.clone();
        }
        let key = residual[v..].to_vec();
        let out = residual[v] as u64;
        let result = if self.out_groups[v].is_empty() {
            if out == 0 {
                self.count_from(v + 1, residual)
            } else {
                BigUint::zero()
            }
        } else {
            self.spread(v, 0, out, residual)
        };
        self.memo[v].insert(key, result.clone());
        result
    }

    fn spread(&mut self, v: usize, group: usize, remaining: u64, residual: &mut Vec<i64>) -> BigUint {
        let (head, mult) = self.out_groups[v][group];
        if group + 1 == self.out_groups[v].len() {
            residual[head] += remaining as i64;
            let sub = self.count_from(v + 1, residual);
            residual[head] -= remaining as i64;
            return sub * binomial(remaining + mult - 1, mult - 1);
        }
        let mut total = BigUint::zero();
        for x in 0..=remaining {
            residual[head] += x as i64;
            let sub = self.spread(v, group + 1, remaining - x, residual);
            residual[head] -= x as i64;
            if !sub.is_zero() {
                total += sub * binomial(x + mult - 1, mult - 1);
            }
        }
        total
    }

    /// Ehrhart polynomial of `F_G(a)`: interpolates `K_G(t a)` at
    /// `t = 0..=|E|-|V|+1`. An empty polytope gets the zero polynomial.
    pub fn ehrhart(&mut self, netflow: &NetflowVector) -> Result<EhrhartPolynomial> {
        if !self.graph.is_connected() {
            return Err(Error::Disconnected);
        }
        if netflow.len() != self.graph.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: self.graph.vertex_count(),
                actual: netflow.len(),
            });
        }
        if self.count(netflow.entries()).is_zero() {
            return Ok(EhrhartPolynomial::zero());
        }
        let bound = (self.graph.edge_count() + 1).saturating_sub(self.graph.vertex_count());
        let values: Vec<BigInt> = (0..=bound as i64)
            .map(|t| BigInt::from(self.count(netflow.dilate(t).entries())))
            .collect();
        Ok(EhrhartPolynomial::interpolate(&values))
    }

    pub fn normalized_volume(&mut self, netflow: &NetflowVector) -> Result<BigUint> {
        self.ehrhart(netflow)?.normalized_volume()
    }
}

/// Number of integer points of `F_G(a)`.
pub fn count_flows(inst: &FlowInstance) -> BigUint {
    FlowCounter::new(inst.graph()).count(inst.netflow().entries())
}

/// Depth-first walk over every integer flow, assigning edge values one at a
/// time in canonical edge order. Each vertex's outflow is fixed once its
/// incoming edges are assigned; a value never exceeds what is left to send.
fn walk_flows(g: &DirectedMultigraph, netflow: &[i64], visit: &mut dyn FnMut(&[i64])) {
    if netflow.len() != g.vertex_count() || netflow.iter().sum::<i64>() != 0 {
        return;
    }
    let perm = g.canonical_permutation();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for &k in &perm {
        out_edges[g.position(g.edge(k).tail)].push(k);
    }

    struct Walk<'a> {
        g: &'a DirectedMultigraph,
        out_edges: Vec<Vec<usize>>,
        residual: Vec<i64>,
        flow: Vec<i64>,
    }

    impl Walk<'_> {
        fn vertex(&mut self, v: usize, visit: &mut dyn FnMut(&[i64])) {
            if v + 1 == self.residual.len() {
                if self.residual[v] == 0 {
                    visit(&self.flow);
                }
                return;
            }
            let out = self.residual[v];
            if out < 0 {
                return;
            }
            if self.out_edges[v].is_empty() {
                if out == 0 {
                    self.vertex(v + 1, visit);
                }
                return;
            }
            self.edge(v, 0, out, visit);
        }

        fn edge(&mut self, v: usize, k: usize, remaining: i64, visit: &mut dyn FnMut(&[i64])) {
            let e = self.out_edges[v][k];
            let head = self.g.position(self.g.edge(e).head);
            let is_last = k + 1 == self.out_edges[v].len();
            let range = if is_last { remaining..=remaining } else { 0..=remaining };
            for x in range {
                self.flow[e] = x;
                self.residual[head] += x;
                if is_last {
                    self.vertex(v + 1, visit);
                } else {
                    self.edge(v, k + 1, remaining - x, visit);
                }
                self.residual[head] -= x;
            }
            self.flow[e] = 0;
        }
    }

    let mut walk = Walk {
        g,
        out_edges,
        residual: netflow.to_vec(),
        flow: vec![0; g.edge_count()],
    };
    walk.vertex(0, visit);
}

/// Every integer `a`-flow, each a vector indexed by edge position.
pub fn enumerate_flows(inst: &FlowInstance) -> Vec<Vec<i64>> {
    let mut flows = Vec::new();
    walk_flows(inst.graph(), inst.netflow().entries(), &mut |f| flows.push(f.to_vec()));
    flows
}

/// `K_G(a)` by plain enumeration, without memoization.
pub fn count_flows_naive(inst: &FlowInstance) -> BigUint {
    let mut n = 0u64;
    walk_flows(inst.graph(), inst.netflow().entries(), &mut |_| n += 1);
    BigUint::from(n)
}

/// Unique polynomial `t -> K_G(t a)`; rejects disconnected graphs.
pub fn ehrhart_polynomial(inst: &FlowInstance) -> Result<EhrhartPolynomial> {
    FlowCounter::new(inst.graph()).ehrhart(inst.netflow())
}

/// `d! * leading coefficient` of the Ehrhart polynomial. A point has volume 1
/// and an empty polytope volume 0.
pub fn normalized_volume_oracle(inst: &FlowInstance) -> Result<BigUint> {
    ehrhart_polynomial(inst)?.normalized_volume()
}
