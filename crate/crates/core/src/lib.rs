//! Exact volumes and lattice-point counts of flow polytopes.
//!
//! The crate pairs closed-form Lidskii evaluators ([`lidskii`]) with an
//! independent brute-force oracle ([`kostant`]) and realizes the geometric
//! side mechanically: noncrossing-tree reductions, canonical reduction trees
//! and a dissection of the source-augmented flow polytope into unimodular
//! simplices ([`reduction`]), checked cell by cell in [`geometry`].

pub mod arith;
pub mod ehrhart;
pub mod error;
pub mod family;
pub mod geometry;
pub mod graph;
pub mod kostant;
pub mod lidskii;
pub mod reduction;
pub mod suite;
pub(crate) mod serde_big;

pub use ehrhart::EhrhartPolynomial;
pub use error::{Error, Result};
pub use graph::{attach_source, build_gm, degree_stats, DegreeStats, DirectedMultigraph, Edge, NetflowVector, Vertex};
pub use kostant::{count_flows, enumerate_flows, ehrhart_polynomial, normalized_volume_oracle, FlowCounter, FlowInstance};
pub use lidskii::{
    dominant_compositions, lidskii_count, lidskii_count_c_form, lidskii_volume, multiset_coeff,
    rising_factorial_over_fact, LidskiiExpansion, WeakComposition,
};
pub use geometry::{
    contains_flow, is_unimodular, path_flow_vertices, verify_dissection, verify_in_vector_bijection,
    verify_integral_equivalence, LatticeBasis, Report, SimplexCell,
};
pub use reduction::{
    canonical_reduction_tree, enumerate_noncrossing_trees, phi_map, reduction_tree_with_source, unimodular_dissection,
    zero_vertex_dissection_children, LeafCensus, NoncrossingTree, ProvenancedGraph, ReductionOptions, ReductionTree,
};
