//! End-to-end assemblies shared by the CLI and the test suites: default
//! symmetry-group construction, one-call certification, and the direction
//! independence sweep for graph algebras.

use crate::algebra::{InnerProduct, LieAlgebra};
use crate::curvature::{ricci_char_poly, ricci_soliton_check};
use crate::error::Error;
use crate::graph::{
    all_directions, attach_algebra, graph_automorphisms, lift_automorphism,
    select_orbit_generators, DirectedGraph, GraphLimits, SimpleGraph,
};
use crate::linalg::Rat;
use crate::symmetry::{
    maximality_certificate, sign_diagonal_subgroup, CertStatus, Certificate, Provenance,
    SymmetryGroup,
};

/// Resource limits threaded through the pipeline.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub graph: GraphLimits,
    /// Element cap for group closure searches.
    pub group_cap: usize,
    /// Largest edge count for the 2^q direction sweep.
    pub max_direction_edges: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            graph: GraphLimits::default(),
            group_cap: 1_000_000,
            max_direction_edges: 8,
        }
    }
}

/// Default certification group: the sign-diagonal subgroup always, plus
/// orbit-covering graph-automorphism lifts when the algebra comes from a
/// graph. The selected lifts realize the same vertex and edge orbits as the
/// full automorphism group.
pub fn standard_group(
    alg: &LieAlgebra,
    graph_ctx: Option<&DirectedGraph>,
    limits: &Limits,
) -> Result<SymmetryGroup, Error> {
    let mut group = sign_diagonal_subgroup(alg)?;
    if let Some(dg) = graph_ctx {
        let g = dg.graph();
        let auts = graph_automorphisms(g, &limits.graph)?;
        let selected = select_orbit_generators(&auts, g.vertex_count(), g.edge_count());
        let gens = selected
            .into_iter()
            .map(|idx| (lift_automorphism(dg, &auts[idx]), Provenance::GraphLift))
            .collect();
        group = group.merge(SymmetryGroup::new(alg, gens)?)?;
    }
    Ok(group)
}

/// Certify an algebra with the default group plus optional extra generators.
pub fn certify(
    alg: &LieAlgebra,
    graph_ctx: Option<&DirectedGraph>,
    extra: Option<SymmetryGroup>,
    limits: &Limits,
) -> Result<Certificate, Error> {
    let mut group = standard_group(alg, graph_ctx, limits)?;
    if let Some(extra) = extra {
        group = group.merge(extra)?;
    }
    maximality_certificate(alg, &group)
}

/// Exact per-direction summary used by the independence sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionResult {
    /// Characteristic polynomial coefficients of the Ricci operator: an
    /// exact fingerprint of the Ricci spectrum.
    pub ricci_char_poly: Vec<Rat>,
    pub soliton_residual_zero: Option<bool>,
    pub certificate_status: Option<CertStatus>,
}

#[derive(Debug, Clone)]
pub struct DirectionReport {
    pub directions_checked: usize,
    pub consistent: bool,
    pub reference: DirectionResult,
    /// Human-readable mismatch descriptions; any entry indicates an
    /// implementation bug, not mathematics.
    pub mismatches: Vec<String>,
}

fn direction_result(
    dg: &DirectedGraph,
    with_certificate: bool,
    limits: &Limits,
) -> Result<DirectionResult, Error> {
    let alg = attach_algebra(dg)?;
    let char_poly = ricci_char_poly(&alg)?;
    let soliton = ricci_soliton_check(&alg, &InnerProduct::identity(alg.dim()))?
        .map(|s| s.residual_zero);
    let status = if with_certificate {
        Some(certify(&alg, Some(dg), None, limits)?.status)
    } else {
        None
    };
    Ok(DirectionResult {
        ricci_char_poly: char_poly,
        soliton_residual_zero: soliton,
        certificate_status: status,
    })
}

/// Runs every direction of the graph and compares the exact Ricci spectrum,
/// the soliton decomposition existence, and (optionally) the certificate
/// status against the canonical direction.
pub fn direction_independence_check(
    g: &SimpleGraph,
    with_certificate: bool,
    limits: &Limits,
) -> Result<DirectionReport, Error> {
    let directions = all_directions(g, limits.max_direction_edges)?;
    let reference = direction_result(&directions[0], with_certificate, limits)?;
    let mut mismatches = Vec::new();
    for (idx, dg) in directions.iter().enumerate().skip(1) {
        let result = direction_result(dg, with_certificate, limits)?;
        if result.ricci_char_poly != reference.ricci_char_poly {
            mismatches.push(format!("direction {} changes the Ricci spectrum", idx));
        }
        if result.soliton_residual_zero != reference.soliton_residual_zero {
            mismatches.push(format!(
                "direction {} changes the soliton decomposition",
                idx
            ));
        }
        if result.certificate_status != reference.certificate_status {
            mismatches.push(format!("direction {} changes the certificate", idx));
        }
    }
    Ok(DirectionReport {
        directions_checked: directions.len(),
        consistent: mismatches.is_empty(),
        reference,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, path_graph, star_graph};

    #[test]
    fn complete_and_cycle_graphs_certify_maximal() {
        let limits = Limits::default();
        for g in [complete_graph(3), complete_graph(4), cycle_graph(5)] {
            let dg = DirectedGraph::canonical(g);
            let alg = attach_algebra(&dg).unwrap();
            let cert = certify(&alg, Some(&dg), None, &limits).unwrap();
            assert_eq!(cert.status, CertStatus::Maximal, "{:?}", cert);
        }
    }

    #[test]
    fn path_graph_is_inconclusive_with_edge_supported_witness() {
        let limits = Limits::default();
        let dg = DirectedGraph::canonical(path_graph(4));
        let alg = attach_algebra(&dg).unwrap();
        let cert = certify(&alg, Some(&dg), None, &limits).unwrap();
        assert_eq!(cert.status, CertStatus::Inconclusive);
        let witness = cert.witness.expect("inconclusive needs a witness");
        assert!(!witness.is_zero());
        assert!(witness.is_diagonal());
    }

    #[test]
    fn adding_generators_never_grows_the_intersection() {
        let limits = Limits::default();
        let dg = DirectedGraph::canonical(path_graph(4));
        let alg = attach_algebra(&dg).unwrap();
        let sign_only = sign_diagonal_subgroup(&alg).unwrap();
        let with_lifts = standard_group(&alg, Some(&dg), &limits).unwrap();
        let c1 = maximality_certificate(&alg, &sign_only).unwrap();
        let c2 = maximality_certificate(&alg, &with_lifts).unwrap();
        assert!(c2.dim_invariant_normal <= c1.dim_invariant_normal);
    }

    #[test]
    fn direction_sweep_on_small_graphs() {
        let limits = Limits::default();
        for g in [complete_graph(2), star_graph(3), cycle_graph(3)] {
            let report = direction_independence_check(&g, true, &limits).unwrap();
            assert_eq!(report.directions_checked, 1 << g.edge_count());
            assert!(report.consistent, "{:?}", report.mismatches);
        }
    }

    #[test]
    fn direction_sweep_respects_edge_limit() {
        let limits = Limits {
            max_direction_edges: 2,
            ..Limits::default()
        };
        assert!(direction_independence_check(&cycle_graph(3), false, &limits).is_err());
    }
}
