//! Arboreal, DAG- and Kelly-decompositions of digraphs built from a
//! depth-first search tree, with exact circumference and independent
//! checking of every decomposition axiom.
//!
//! The constructions work on one strongly connected component at a time;
//! [`pipeline::decompose`] runs them over all components of a digraph.

pub mod builders;
pub mod cycle;
pub mod decomp;
pub mod dfs;
pub mod generate;
pub mod graph;
pub mod pipeline;
pub mod validate;

pub use builders::{build_arboreal, build_dag, build_kelly, hooks, BackEdgeIndex};
pub use cycle::{circumference, circumference_oracle, CircumferenceResult};
pub use decomp::{
    parse_bundle, parse_decomposition, ArborealDecomposition, DagDecomposition, Decomposition,
    DecompositionBundle, KellyDecomposition, Kind,
};
pub use dfs::{AugmentedDag, DfsForest, EdgeClass};
pub use generate::{gen, to_bidirected, Family, FamilySpec};
pub use graph::{
    is_directed_union, parse_digraph, strongly_connected_components, Digraph, SccPartition,
    VertexSet,
};
pub use validate::{guards, is_x_normal, validate, Axiom, ValidationReport, Witness};
