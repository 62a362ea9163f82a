//! Noncrossing-tree reductions with edge provenance, canonical reduction
//! trees, leaf censuses and the unimodular dissection of `F_{G(c)}`.

mod dissection;
mod noncrossing;
mod provenance;
mod tree;

pub use dissection::{unimodular_dissection, visit_dissection, zero_vertex_dissection_children};
pub use noncrossing::{enumerate_noncrossing_trees, NoncrossingTree};
pub use provenance::{phi_map, PhiMap, ProvenancedGraph};
pub use tree::{
    canonical_reduction_tree, expected_census, full_reduction_children, leaf_composition, order_by_length,
    reduction_tree_with_source, stream_leaf_census, visit_leaves, CensusEntry, LeafCensus, ReductionOptions,
    ReductionStep, ReductionTree, TreeNode, DEFAULT_NODE_CAP,
};
