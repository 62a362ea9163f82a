use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Result;
use crate::graph::{attach_source, DirectedMultigraph, NetflowVector};
use crate::kostant::{count_flows, enumerate_flows, normalized_volume_oracle, FlowInstance};
use crate::lidskii::LidskiiExpansion;
use crate::reduction::{visit_dissection, ProvenancedGraph, ReductionOptions};

use super::{contains_integer_flow, LatticeBasis, SimplexCell};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

/// Named pass/fail checks about one subject, with counterexamples attached
/// to failures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
            counterexample: None,
        });
    }

    pub fn fail_with(&mut self, name: impl Into<String>, detail: impl Into<String>, counterexample: Value) {
        self.checks.push(Check {
            name: name.into(),
            passed: false,
            detail: detail.into(),
            counterexample: Some(counterexample),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "  {tag} {}: {}", c.name, c.detail)?;
            if let Some(cex) = &c.counterexample {
                writeln!(f, "       counterexample: {cex}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub reduction: ReductionOptions,
    /// Also probe every pair of cells for overlapping interiors. Quadratic in
    /// the number of cells, with rational linear solves; debugging only.
    pub pairwise_disjoint: bool,
}

fn cell_json(cell: &SimplexCell) -> Value {
    json!({ "leaf": cell.leaf, "composition": cell.composition, "choices": cell.choices, "vertices": cell.vertices })
}

/// Checks the dissection of `F_{G(c)}(e_0 - e_{n+1})`:
/// containment of every cell vertex, unimodularity and distinctness of every
/// cell, and the cell count against the volume oracle, the lattice-point
/// count of `F_G(in_G + c)` and the closed formula.
pub fn verify_dissection(g: &DirectedMultigraph, c: &[i64], options: &VerifyOptions) -> Result<Report> {
    let gc = attach_source(g, c)?;
    let ambient = FlowInstance::new(gc.clone(), NetflowVector::unit(gc.vertex_count()))?;
    let lattice = LatticeBasis::for_graph(&gc)?;
    let d = lattice.dimension();
    let mut report = Report::new(format!("dissection of F_G(c) for G = {g}, c = {c:?}"));

    let mut outside: Option<Value> = None;
    let mut not_unimodular: Option<Value> = None;
    let mut duplicate: Option<Value> = None;
    let mut seen = HashSet::new();
    let mut kept = Vec::new();
    let cells = visit_dissection(g, c, &options.reduction, |cell| {
        if outside.is_none() {
            for v in &cell.vertices {
                if !contains_integer_flow(&ambient, v)? {
                    outside = Some(json!({ "cell": cell_json(&cell), "vertex": v }));
                    break;
                }
            }
        }
        if not_unimodular.is_none() {
            let distinct = cell.vertices.iter().collect::<HashSet<_>>().len() == cell.vertices.len();
            let verdict = if cell.vertices.len() != d + 1 {
                Some(format!("{} vertices, expected {}", cell.vertices.len(), d + 1))
            } else if !distinct {
                Some("repeated vertex".to_string())
            } else {
                match lattice.simplex_determinant(&cell.vertices) {
                    Ok(det) if det.abs() == 1u32.into() => None,
                    Ok(det) => Some(format!("lattice determinant {det}")),
                    Err(e) => Some(e.to_string()),
                }
            };
            if let Some(reason) = verdict {
                not_unimodular = Some(json!({ "cell": cell_json(&cell), "reason": reason }));
            }
        }
        let mut key = cell.vertices.clone();
        key.sort();
        if !seen.insert(key) && duplicate.is_none() {
            duplicate = Some(cell_json(&cell));
        }
        if options.pairwise_disjoint {
            kept.push(cell);
        }
        Ok(())
    })?;

    match outside {
        None => report.check("cells contained", true, format!("all vertices of {cells} cells are flows of G(c)")),
        Some(cex) => report.fail_with("cells contained", "a cell vertex is not in the polytope", cex),
    }
    match not_unimodular {
        None => report.check("cells unimodular", true, format!("{cells} cells, each {d}-dimensional with determinant ±1")),
        Some(cex) => report.fail_with("cells unimodular", "a cell is degenerate or not unimodular", cex),
    }
    match duplicate {
        None => report.check("cells distinct", true, format!("{cells} distinct vertex sets")),
        Some(cex) => report.fail_with("cells distinct", "the same simplex appears twice", cex),
    }

    let volume = normalized_volume_oracle(&ambient)?;
    report.check(
        "count equals volume",
        volume == cells.into(),
        format!("{cells} cells, normalized volume {volume}"),
    );
    let expansion = LidskiiExpansion::new(g)?;
    let a = expansion.netflow_for_c(c);
    let flows = count_flows(&FlowInstance::new(g.clone(), a.clone())?);
    report.check(
        "count equals lattice points",
        flows == cells.into(),
        format!("{cells} cells, {flows} integer flows of G with netflow {a}"),
    );
    let formula = expansion.count_c_form(c)?;
    report.check(
        "count equals formula",
        formula == cells.into(),
        format!("{cells} cells, closed formula {formula}"),
    );

    if options.pairwise_disjoint {
        report.checks.push(pairwise_probe(&lattice, &kept)?);
    }
    Ok(report)
}

/// For each pair of cells: the barycenter of one must not lie strictly inside
/// the other, and when they share a facet their opposite vertices must lie on
/// opposite sides of it.
fn pairwise_probe(lattice: &LatticeBasis, cells: &[SimplexCell]) -> Result<Check> {
    let name = "pairwise interiors disjoint";
    let to_q = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>();
    let barycenters: Vec<Vec<BigRational>> = cells
        .iter()
        .map(|cell| {
            let k = BigRational::from_integer((cell.vertices.len() as i64).into());
            let mut sum = vec![BigRational::zero(); lattice.ambient_dimension()];
            for v in &cell.vertices {
                for (s, &x) in sum.iter_mut().zip(v) {
                    *s += BigRational::from_integer(x.into());
                }
            }
            sum.into_iter().map(|s| s / &k).collect()
        })
        .collect();
    let fail = |a: &SimplexCell, b: &SimplexCell, why: &str| Check {
        name: name.into(),
        passed: false,
        detail: why.into(),
        counterexample: Some(json!({ "first": cell_json(a), "second": cell_json(b) })),
    };
    for (x, a) in cells.iter().enumerate() {
        for (y, b) in cells.iter().enumerate() {
            if x == y {
                continue;
            }
            if let Some(coords) = lattice.barycentric(&b.vertices, &barycenters[x])? {
                if coords.iter().all(Signed::is_positive) {
                    return Ok(fail(a, b, "barycenter of the first cell is interior to the second"));
                }
            }
            if x > y {
                continue;
            }
            let in_b: Vec<bool> = a.vertices.iter().map(|v| b.vertices.contains(v)).collect();
            if in_b.iter().filter(|&&s| s).count() + 1 != a.vertices.len() {
                continue;
            }
            let apex_a = &a.vertices[in_b.iter().position(|&s| !s).expect("one vertex not shared")];
            let apex_b = b
                .vertices
                .iter()
                .position(|v| !a.vertices.contains(v))
                .expect("one vertex not shared");
            if let Some(coords) = lattice.barycentric(&b.vertices, &to_q(apex_a))? {
                if !coords[apex_b].is_negative() {
                    return Ok(fail(a, b, "cells sharing a facet lie on the same side of it"));
                }
            }
        }
    }
    Ok(Check {
        name: name.into(),
        passed: true,
        detail: format!("{} cells probed pairwise", cells.len()),
        counterexample: None,
    })
}

/// Compares `F_G(in_G + c)` with `F_{G(c)}(0, in_G + c, ...)`: equal counts,
/// and restricting the larger instance's flows to the edges of `G` is a
/// bijection onto the smaller instance's flows.
pub fn verify_in_vector_bijection(g: &DirectedMultigraph, c: &[i64]) -> Result<Report> {
    let expansion = LidskiiExpansion::new(g)?;
    let a = expansion.netflow_for_c(c);
    let gc = attach_source(g, c)?;
    let mut big_netflow = vec![0];
    big_netflow.extend_from_slice(a.entries());
    let small = FlowInstance::new(g.clone(), a.clone())?;
    let big = FlowInstance::new(gc, NetflowVector::new(big_netflow)?)?;
    let mut report = Report::new(format!("in-vector restriction for G = {g}, c = {c:?}"));

    let small_count = count_flows(&small);
    let big_count = count_flows(&big);
    report.check(
        "counts agree",
        small_count == big_count,
        format!("G: {small_count} flows with netflow {a}; G(c): {big_count} flows with netflow {}", big.netflow()),
    );

    let sources = big.graph().edge_count() - g.edge_count();
    let big_flows = enumerate_flows(&big);
    let small_flows: HashSet<Vec<i64>> = enumerate_flows(&small).into_iter().collect();
    let mut images = HashSet::new();
    let mut stray = None;
    for f in &big_flows {
        let restricted = f[sources..].to_vec();
        if !small_flows.contains(&restricted) && stray.is_none() {
            stray = Some(json!({ "flow": f, "restricted": restricted }));
        }
        images.insert(restricted);
    }
    match stray {
        None => report.check("restriction lands in F_G", true, format!("{} restricted flows", big_flows.len())),
        Some(cex) => report.fail_with("restriction lands in F_G", "restricted flow is not a flow of G", cex),
    }
    report.check(
        "restriction injective",
        images.len() == big_flows.len(),
        format!("{} flows, {} distinct restrictions", big_flows.len(), images.len()),
    );
    report.check(
        "restriction onto",
        images.len() == small_flows.len(),
        format!("{} restrictions, {} flows of G", images.len(), small_flows.len()),
    );
    Ok(report)
}

/// For `t = 1, 2`: `φ` maps the node's integer `t·a`-flows injectively into
/// the root's, and the image has `count_flows(node, t·a)` points.
pub fn verify_integral_equivalence(node: &ProvenancedGraph, a: &NetflowVector) -> Result<Report> {
    let phi = node.phi();
    let mut report = Report::new(format!("φ lattice fidelity for node {} with netflow {a}", node.graph()));
    for t in [1, 2] {
        let at = a.dilate(t);
        let small = FlowInstance::new(node.graph().clone(), at.clone())?;
        let root = FlowInstance::new(node.root_graph().clone(), at)?;
        let flows = enumerate_flows(&small);
        let mut images = HashSet::new();
        let mut stray = None;
        for f in &flows {
            let y = phi.apply(f)?;
            if stray.is_none() && !contains_integer_flow(&root, &y)? {
                stray = Some(json!({ "flow": f, "image": y }));
            }
            images.insert(y);
        }
        match stray {
            None => report.check(format!("t={t}: image in root polytope"), true, format!("{} images", flows.len())),
            Some(cex) => report.fail_with(format!("t={t}: image in root polytope"), "φ image is not a root flow", cex),
        }
        report.check(
            format!("t={t}: injective"),
            images.len() == flows.len(),
            format!("{} flows, {} distinct images", flows.len(), images.len()),
        );
        let count = count_flows(&small);
        report.check(
            format!("t={t}: count preserved"),
            count == images.len().into(),
            format!("count_flows {count}, image size {}", images.len()),
        );
    }
    Ok(report)
}
