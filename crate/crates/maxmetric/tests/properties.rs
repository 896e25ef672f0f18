//! Property tests for the exact invariants: bilinearity, orthogonal
//! invariance of the bracket norm, spectrum invariance under weight
//! permutations, and stability of certificates under basis relabeling.

use proptest::prelude::*;

use maxmetric::algebra::InnerProduct;
use maxmetric::curvature::{ricci_char_poly, ricci_tensor};
use maxmetric::families::{almost_abelian_algebra, w_permutation_equivalence};
use maxmetric::graph::{attach_algebra, DirectedGraph, SimpleGraph};
use maxmetric::json::AlgebraJson;
use maxmetric::linalg::{rat, rat_int, Rat, RatMat};
use maxmetric::pipeline::{certify, Limits};
use maxmetric::symmetry::maximality_certificate;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn weights_strategy(max_len: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(rat_strategy(), 1..=max_len)
}

/// Random signed permutation matrix on n coordinates.
fn signed_permutation_strategy(n: usize) -> impl Strategy<Value = RatMat> {
    (
        Just(n),
        prop::collection::vec(0usize..1_000_000, n),
        prop::collection::vec(prop::bool::ANY, n),
    )
        .prop_map(|(n, keys, signs)| {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&i| (keys[i], i));
            let mut m = RatMat::zeros(n, n);
            for (col, &row) in order.iter().enumerate() {
                m.set(row, col, if signs[col] { rat_int(1) } else { rat_int(-1) });
            }
            m
        })
}

fn small_graph_strategy() -> impl Strategy<Value = SimpleGraph> {
    (2usize..=6).prop_flat_map(|p| {
        let pairs: Vec<(usize, usize)> = (0..p)
            .flat_map(|u| ((u + 1)..p).map(move |v| (u, v)))
            .collect();
        prop::collection::vec(prop::bool::ANY, pairs.len()).prop_map(move |mask| {
            let edges = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, keep)| **keep)
                .map(|(e, _)| *e)
                .collect();
            SimpleGraph::on_numbered_vertices(p, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_bilinear_and_alternating(
        w in weights_strategy(4),
        seed_x in prop::collection::vec(rat_strategy(), 5),
        seed_y in prop::collection::vec(rat_strategy(), 5),
        scale in rat_strategy(),
    ) {
        let alg = almost_abelian_algebra(&w).unwrap();
        let n = alg.dim();
        let x: Vec<Rat> = seed_x.into_iter().cycle().take(n).collect();
        let y: Vec<Rat> = seed_y.into_iter().cycle().take(n).collect();

        let xy = alg.bracket(&x, &y).unwrap();
        let yx = alg.bracket(&y, &x).unwrap();
        for (a, b) in xy.iter().zip(&yx) {
            prop_assert_eq!(a, &(-b.clone()));
        }
        prop_assert!(alg.bracket(&x, &x).unwrap().iter().all(|v| v == &rat_int(0)));

        let scaled: Vec<Rat> = x.iter().map(|v| v * &scale).collect();
        let lhs = alg.bracket(&scaled, &y).unwrap();
        for (a, b) in lhs.iter().zip(&xy) {
            prop_assert_eq!(a, &(b * &scale));
        }
    }

    #[test]
    fn bracket_norm_invariant_under_signed_permutations(
        w in weights_strategy(4),
        perm_seed in prop::collection::vec(0usize..1_000_000, 8),
        signs in prop::collection::vec(prop::bool::ANY, 8),
    ) {
        let alg = almost_abelian_algebra(&w).unwrap();
        let n = alg.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (perm_seed[i], i));
        let mut p = RatMat::zeros(n, n);
        for (col, &row) in order.iter().enumerate() {
            p.set(row, col, if signs[col] { rat_int(1) } else { rat_int(-1) });
        }
        let conj = alg.change_of_basis(&p).unwrap();
        let id = InnerProduct::identity(n);
        prop_assert_eq!(
            alg.bracket_norm_sq(&id).unwrap(),
            conj.bracket_norm_sq(&id).unwrap()
        );
    }

    #[test]
    fn weight_multisets_determine_ricci_spectra(
        w in weights_strategy(5),
        perm_seed in prop::collection::vec(0usize..1_000_000, 5),
    ) {
        let mut order: Vec<usize> = (0..w.len()).collect();
        order.sort_by_key(|&i| (perm_seed[i], i));
        let shuffled: Vec<Rat> = order.iter().map(|&i| w[i].clone()).collect();
        prop_assert!(w_permutation_equivalence(&w, &shuffled));
        let a = almost_abelian_algebra(&w).unwrap();
        let b = almost_abelian_algebra(&shuffled).unwrap();
        prop_assert_eq!(ricci_char_poly(&a).unwrap(), ricci_char_poly(&b).unwrap());
    }

    #[test]
    fn ricci_is_equivariant(
        w in weights_strategy(4),
        perm in (4usize..=5).prop_flat_map(signed_permutation_strategy),
    ) {
        let alg = almost_abelian_algebra(&w).unwrap();
        let n = alg.dim();
        prop_assume!(perm.n_rows() == n);
        let conj = alg.change_of_basis(&perm).unwrap();
        let id = InnerProduct::identity(n);
        let r1 = ricci_tensor(&alg, &id).unwrap().operator;
        let r2 = ricci_tensor(&conj, &id).unwrap().operator;
        let pulled = perm.inverse().unwrap().matmul(&r1).matmul(&perm);
        prop_assert_eq!(r2, pulled);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn attached_algebras_are_nilpotent_lie_algebras(g in small_graph_strategy()) {
        let alg = attach_algebra(&DirectedGraph::canonical(g.clone())).unwrap();
        prop_assert_eq!(alg.dim(), g.vertex_count() + g.edge_count());
        prop_assert!(alg.is_unimodular());
    }

    #[test]
    fn certificates_survive_vertex_relabeling(g in small_graph_strategy(), shift in 1usize..5) {
        let limits = Limits::default();
        let dg = DirectedGraph::canonical(g.clone());
        let alg = attach_algebra(&dg).unwrap();
        let c1 = certify(&alg, Some(&dg), None, &limits).unwrap();

        // rotate vertex labels: same graph up to isomorphism
        let p = g.vertex_count();
        let relabeled_edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|(u, v)| ((u + shift) % p, (v + shift) % p))
            .collect();
        let g2 = SimpleGraph::on_numbered_vertices(p, relabeled_edges).unwrap();
        let dg2 = DirectedGraph::canonical(g2);
        let alg2 = attach_algebra(&dg2).unwrap();
        let c2 = certify(&alg2, Some(&dg2), None, &limits).unwrap();

        prop_assert_eq!(c1.status, c2.status);
        prop_assert_eq!(c1.dim_normal, c2.dim_normal);
        prop_assert_eq!(c1.dim_invariant_normal, c2.dim_invariant_normal);
        prop_assert_eq!(
            ricci_char_poly(&alg).unwrap(),
            ricci_char_poly(&alg2).unwrap()
        );
    }

    #[test]
    fn algebra_json_roundtrip(w in weights_strategy(5)) {
        let alg = almost_abelian_algebra(&w).unwrap();
        let wire = AlgebraJson::from_algebra(&alg).unwrap();
        let text = serde_json::to_string(&wire).unwrap();
        let back = AlgebraJson::parse(&text).unwrap().to_algebra().unwrap();
        prop_assert_eq!(&alg, &back);
        prop_assert_eq!(alg.fingerprint(), back.fingerprint());
    }

    #[test]
    fn monotone_generators_never_grow_the_intersection(g in small_graph_strategy()) {
        let dg = DirectedGraph::canonical(g);
        let alg = attach_algebra(&dg).unwrap();
        let sign_only = maxmetric::symmetry::sign_diagonal_subgroup(&alg).unwrap();
        let larger = maxmetric::pipeline::standard_group(&alg, Some(&dg), &Limits::default()).unwrap();
        let c_small = maximality_certificate(&alg, &sign_only).unwrap();
        let c_large = maximality_certificate(&alg, &larger).unwrap();
        prop_assert!(c_large.dim_invariant_normal <= c_small.dim_invariant_normal);
    }
}

#[test]
fn heisenberg_vectors_bracket_reference() {
    // deterministic pin alongside the property: h3 through the graph path
    let k2 = SimpleGraph::on_numbered_vertices(2, vec![(0, 1)]).unwrap();
    let alg = attach_algebra(&DirectedGraph::canonical(k2)).unwrap();
    let x = vec![rat_int(1), rat_int(0), rat_int(0)];
    let y = vec![rat_int(0), rat_int(1), rat_int(0)];
    assert_eq!(
        alg.bracket(&x, &y).unwrap(),
        vec![rat_int(0), rat_int(0), rat_int(1)]
    );
}
