//! Information measures over discrete joint distributions.
//!
//! The crate is organised bottom-up:
//!
//! - [`distribution`] and [`dataset`]: schemas, dense joint tables, marginals,
//!   conditionals, products and plugin estimation from counts.
//! - [`lattice`]: entropies and interaction informations over the subset
//!   lattice, both directions of the Möbius duality, conditional interaction
//!   and multi-information.
//! - [`expansion`]: cross-entropy, KL divergence, the degree-ordered expansion
//!   of the divergence and the factorized approximations induced by
//!   truncating it.
//! - [`metric`] and [`witness`]: the reference-function distance
//!   `|D(P‖R) − D(P‖S)|`, its closed forms for uniform, Gaussian, Dirac and
//!   Poisson references, and a search for distinct pairs at zero distance.
//! - [`graph`]: mutual-information weighted graphs, maximum spanning forests
//!   and tree-factorized distributions.
//!
//! Everything is `no_std` with `alloc`. File formats and the command-line
//! front end live in the `infolattice-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod dataset;
pub mod distribution;
mod error;
pub mod expansion;
pub mod graph;
pub mod lattice;
mod math;
pub mod metric;
pub mod subset;
pub mod witness;

pub use dataset::{estimate_joint, DatasetTable};
pub use distribution::{
    conditional, marginal, normalize, product, uniform, ConditionalTable, JointDistribution,
    Schema, Variable, DEFAULT_STATE_CAP,
};
pub use error::{Error, Result};
pub use expansion::{
    convergence_profile, cross_entropy, delta_relation, expand_divergence, kl_divergence,
    truncated_approximation, truncation_coefficients, truncation_distance, truncation_divergence,
    DeltaReport, Divergence, ExpansionReport, TruncationDivergence, TruncationFamily,
};
pub use graph::{
    chowliu_tree, graph_distance_direct, graph_distance_mi, graph_distance_report,
    graph_distribution, mi_weighted_graph, Edge, EdgeContribution, GraphDistanceReport, GraphDistribution,
    WeightedGraph,
};
pub use lattice::{
    conditional_interaction, entropy, entropy_from_interactions, interaction_information,
    multi_information, mutual_information, omega_decomposition, InfoProfile, LogBase,
    OmegaDecomposition,
};
pub use metric::{
    dirac_distance, gaussian_distance, independence_distance, poisson_distance,
    reference_distance, surprisal_coordinates, uniform_distance, ClosedForm, DistanceResult,
    GaussianParams, IndependenceDistance, ReferenceMetricSpec, Unit,
};
pub use subset::Subset;
pub use witness::{find_pseudometric_witness, Grid, SearchFamily, Witness};
