//! Exact-arithmetic toolkit for certifying left-invariant Riemannian metrics
//! on simply connected Lie groups as maximal, via an isolated-orbit
//! criterion for the scaling-automorphism action on inner products.
//!
//! The crate provides:
//!
//! - exact metric Lie algebras with derivation algebras, orbit tangent and
//!   normal spaces, and transitivity detection ([`algebra`]);
//! - finite orthogonal automorphism groups and the one-sided maximality
//!   certificate ([`symmetry`]);
//! - exact Ricci curvature and the algebraic Ricci-soliton decomposition
//!   ([`curvature`]);
//! - 2-step nilpotent algebras attached to graphs, graph automorphisms and
//!   their orthogonal lifts ([`graph`]);
//! - the built-in example families ([`families`]);
//! - floating-point integration of the Ricci/Yamabe flow family with
//!   self-similarity diagnostics ([`flow`]).
//!
//! All certification arithmetic is exact rational; floating point appears
//! only in the flow integrator.

pub mod algebra;
pub mod curvature;
pub mod error;
pub mod families;
pub mod flow;
pub mod graph;
pub mod json;
pub mod linalg;
pub mod pipeline;
pub mod symmetry;

pub use algebra::{
    default_labels, is_derivation, validate_brackets, InnerProduct, LieAlgebra, MatrixSubspace,
    RawBracket, SymForm, TransitivityReport, ValidationReport,
};
pub use curvature::{
    einstein_check, ricci_char_poly, ricci_soliton_check, ricci_tensor, scalar_curvature,
    EinsteinResult, RicciData, SolitonDecomposition,
};
pub use error::Error;
pub use families::{build as build_family, w_permutation_equivalence, FamilyBuild, FamilySpec};
pub use flow::{
    flow_field, integrate, self_similarity_diagnostics, FloatBrackets, FloatMat, FlowDiagnostics,
    FlowProblem, FlowStatus, FlowTrajectory, Normalization,
};
pub use graph::{
    attach_algebra, edge_transitivity_check, graph_automorphisms, graph_isomorphic,
    lift_automorphism, parse_graph_text, vertex_reflections, DirectedGraph, GraphAutomorphism,
    GraphLimits, SimpleGraph,
};
pub use linalg::{parse_rat, rat, rat_int, rat_to_string, Rat, RatMat};
pub use pipeline::{
    certify, direction_independence_check, standard_group, DirectionReport, Limits,
};
pub use symmetry::{
    invariant_forms_subspace, invariant_normal_intersection, is_orthogonal_automorphism,
    maximality_certificate, sign_diagonal_subgroup, two_reversible_check, CertStatus, Certificate,
    Provenance, SymmetryGroup, TwoReversibility,
};
