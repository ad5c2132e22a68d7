//! Reaction-network analysis: exact stoichiometric factorization, cone
//! construction, and numerical verification of monotonicity and weak
//! contractivity for mass-action systems.
//!
//! The pipeline runs parse → factorize (Γ = P·N·D over exact rationals) →
//! classify → viable set → lifted cone → contraction norm → verification,
//! with each stage usable on its own.

pub mod ball;
pub mod cones;
pub mod corpus;
pub mod factorize;
pub mod geometry;
pub mod graphs;
pub mod kinetics;
pub mod matrix;
pub mod network;
pub mod rational;
pub mod verify;

pub use ball::{norm_ball, BallError, NormBall};
pub use cones::{build_cone, orthant_cone, ConeConstruction, ConeError, ConeRepr, ViableSet};
pub use factorize::{
    classify, pnd_factorize, ClassificationReport, ConeFamily, NClass, NoFactorization,
    PNDFactorization, Stage,
};
pub use graphs::{
    bipartite_graph, orthant_sign_assignment, positive_flux_vector, r_graph, ri_graph,
    signed_loop_property, strongly_connected, Digraph, SignedGraph,
};
pub use kinetics::{KineticsSpec, RateEvaluator};
pub use matrix::QMatrix;
pub use network::{parse_network, to_crn_text, to_json, NetworkError, Reaction, ReactionNetwork};
pub use rational::Q;
pub use verify::{
    contractivity_check, convergence_check, integrate_checkpoints, monotonicity_oracle,
    strong_witnesses, ContractivityReport, ConvergenceReport, MonotonicityReport,
    StrongWitnessReport,
};
