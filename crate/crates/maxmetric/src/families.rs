//! Built-in metric Lie algebra families, so tests and the CLI can reference
//! them by name. Each constructor returns the algebra with the identity Gram
//! matrix and metadata recording the documented expectations.

use num_traits::Zero;

use crate::algebra::{default_labels, InnerProduct, LieAlgebra, RawBracket};
use crate::error::Error;
use crate::graph::{attach_algebra, DirectedGraph, SimpleGraph};
use crate::linalg::{rat, Rat};
use crate::symmetry::CertStatus;

/// Family selector with parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Abelian { n: usize },
    HeisenbergSum { n: usize },
    AlmostAbelian { w: Vec<Rat> },
    BorelHyperbolic { n: usize },
    MotionGroupR2,
    ComplexHyperbolic { n: usize },
    Graph { graph: SimpleGraph },
}

/// Documented expectations attached to a built family. The complete
/// solvability flag is untrusted metadata, not a computed certificate.
#[derive(Debug, Clone, Default)]
pub struct FamilyMetadata {
    pub name: String,
    pub expected_transitive: Option<bool>,
    pub expected_certificate: Option<CertStatus>,
    pub expected_ricci_diagonal: Option<Vec<Rat>>,
    pub completely_solvable: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct FamilyBuild {
    pub algebra: LieAlgebra,
    pub inner: InnerProduct,
    pub metadata: FamilyMetadata,
}

/// The almost-abelian algebra with weights w: `[v1, v_i] = w_i v_i`.
pub fn almost_abelian_algebra(w: &[Rat]) -> Result<LieAlgebra, Error> {
    let n = w.len() + 1;
    let raw = w
        .iter()
        .enumerate()
        .filter(|(_, wi)| !wi.is_zero())
        .map(|(idx, wi)| RawBracket {
            i: 0,
            j: idx + 1,
            terms: vec![(idx + 1, wi.clone())],
        })
        .collect();
    LieAlgebra::new(default_labels(n), raw)
}

/// Expected Ricci diagonal of the almost-abelian metric:
/// `(-|w|^2, -w_2 a_w, ..., -w_n a_w)` with `a_w` the weight sum.
pub fn almost_abelian_ricci_diagonal(w: &[Rat]) -> Vec<Rat> {
    let norm_sq: Rat = w.iter().map(|x| x * x).fold(Rat::zero(), |s, v| s + v);
    let alpha: Rat = w.iter().fold(Rat::zero(), |s, v| s + v);
    let mut diag = vec![-norm_sq];
    diag.extend(w.iter().map(|wi| -(wi * &alpha)));
    diag
}

pub fn build(spec: &FamilySpec) -> Result<FamilyBuild, Error> {
    match spec {
        FamilySpec::Abelian { n } => {
            if *n < 1 {
                return Err(Error::InvalidFamily("abelian needs n >= 1".into()));
            }
            let algebra = LieAlgebra::abelian(*n);
            Ok(FamilyBuild {
                inner: InnerProduct::identity(*n),
                metadata: FamilyMetadata {
                    name: format!("abelian({})", n),
                    expected_transitive: Some(true),
                    expected_certificate: Some(CertStatus::Maximal),
                    expected_ricci_diagonal: Some(vec![Rat::zero(); *n]),
                    completely_solvable: Some(true),
                },
                algebra,
            })
        }
        FamilySpec::HeisenbergSum { n } => {
            if *n < 3 {
                return Err(Error::InvalidFamily("heisenberg-sum needs n >= 3".into()));
            }
            // abelian factor first, then the Heisenberg triple
            let raw = vec![RawBracket {
                i: n - 3,
                j: n - 2,
                terms: vec![(n - 1, rat(1, 1))],
            }];
            let algebra = LieAlgebra::new(default_labels(*n), raw)?;
            Ok(FamilyBuild {
                inner: InnerProduct::identity(*n),
                metadata: FamilyMetadata {
                    name: format!("heisenberg-sum({})", n),
                    expected_transitive: Some(true),
                    expected_certificate: Some(CertStatus::Maximal),
                    expected_ricci_diagonal: None,
                    completely_solvable: Some(true),
                },
                algebra,
            })
        }
        FamilySpec::AlmostAbelian { w } => {
            if w.is_empty() {
                return Err(Error::InvalidFamily(
                    "almost-abelian needs at least one weight".into(),
                ));
            }
            let algebra = almost_abelian_algebra(w)?;
            let all_equal = w.windows(2).all(|p| p[0] == p[1]);
            Ok(FamilyBuild {
                inner: InnerProduct::identity(w.len() + 1),
                metadata: FamilyMetadata {
                    name: format!(
                        "almost-abelian({})",
                        w.iter()
                            .map(crate::linalg::rat_to_string)
                            .collect::<Vec<_>>()
                            .join(",")
                    ),
                    expected_transitive: Some(all_equal),
                    expected_certificate: Some(CertStatus::Maximal),
                    expected_ricci_diagonal: Some(almost_abelian_ricci_diagonal(w)),
                    completely_solvable: Some(true),
                },
                algebra,
            })
        }
        FamilySpec::BorelHyperbolic { n } => {
            if *n < 2 {
                return Err(Error::InvalidFamily("borel-hyperbolic needs n >= 2".into()));
            }
            let w = vec![rat(1, 1); n - 1];
            let algebra = almost_abelian_algebra(&w)?;
            Ok(FamilyBuild {
                inner: InnerProduct::identity(*n),
                metadata: FamilyMetadata {
                    name: format!("borel-hyperbolic({})", n),
                    expected_transitive: Some(true),
                    expected_certificate: Some(CertStatus::Maximal),
                    expected_ricci_diagonal: Some(almost_abelian_ricci_diagonal(&w)),
                    completely_solvable: Some(true),
                },
                algebra,
            })
        }
        FamilySpec::MotionGroupR2 => {
            // [v1, v3] = -v2, [v2, v3] = v1
            let raw = vec![
                RawBracket {
                    i: 0,
                    j: 2,
                    terms: vec![(1, rat(-1, 1))],
                },
                RawBracket {
                    i: 1,
                    j: 2,
                    terms: vec![(0, rat(1, 1))],
                },
            ];
            let algebra = LieAlgebra::new(default_labels(3), raw)?;
            Ok(FamilyBuild {
                inner: InnerProduct::identity(3),
                metadata: FamilyMetadata {
                    name: "motion-group-r2".into(),
                    expected_transitive: Some(false),
                    expected_certificate: None,
                    expected_ricci_diagonal: None,
                    completely_solvable: Some(false),
                },
                algebra,
            })
        }
        FamilySpec::ComplexHyperbolic { n } => {
            if *n < 1 {
                return Err(Error::InvalidFamily(
                    "complex-hyperbolic needs n >= 1".into(),
                ));
            }
            // basis x_1..x_n, y_1..y_n, z, v
            let mut labels = Vec::with_capacity(2 * n + 2);
            labels.extend((1..=*n).map(|i| format!("x{}", i)));
            labels.extend((1..=*n).map(|i| format!("y{}", i)));
            labels.push("z".into());
            labels.push("v".into());
            let z = 2 * n;
            let v = 2 * n + 1;
            let mut raw = Vec::new();
            for i in 0..*n {
                raw.push(RawBracket {
                    i,
                    j: n + i,
                    terms: vec![(z, rat(1, 1))],
                });
                raw.push(RawBracket {
                    i,
                    j: v,
                    terms: vec![(i, rat(1, 2))],
                });
                raw.push(RawBracket {
                    i: n + i,
                    j: v,
                    terms: vec![(n + i, rat(1, 2))],
                });
            }
            raw.push(RawBracket {
                i: z,
                j: v,
                terms: vec![(z, rat(1, 1))],
            });
            let algebra = LieAlgebra::new(labels, raw)?;
            Ok(FamilyBuild {
                inner: InnerProduct::identity(2 * n + 2),
                metadata: FamilyMetadata {
                    name: format!("complex-hyperbolic({})", n),
                    expected_transitive: Some(false),
                    // the orbit is known not to be isolated; the one-sided
                    // finite-group certificate cannot decide this metric
                    expected_certificate: Some(CertStatus::Inconclusive),
                    expected_ricci_diagonal: None,
                    completely_solvable: Some(true),
                },
                algebra,
            })
        }
        FamilySpec::Graph { graph } => {
            let dg = DirectedGraph::canonical(graph.clone());
            let algebra = attach_algebra(&dg)?;
            let q = graph.edge_count();
            Ok(FamilyBuild {
                inner: InnerProduct::identity(algebra.dim()),
                metadata: FamilyMetadata {
                    name: format!("graph(p={},q={})", graph.vertex_count(), q),
                    // a single edge gives an abelian factor plus the
                    // Heisenberg algebra; two or more central directions
                    // leave the transitive classes
                    expected_transitive: Some(q <= 1),
                    expected_certificate: None,
                    expected_ricci_diagonal: None,
                    completely_solvable: Some(true),
                },
                algebra,
            })
        }
    }
}

/// True iff the two weight vectors agree as multisets, which is exactly when
/// the corresponding metrics are isometric.
pub fn w_permutation_equivalence(w: &[Rat], w_prime: &[Rat]) -> bool {
    if w.len() != w_prime.len() {
        return false;
    }
    let mut a = w.to_vec();
    let mut b = w_prime.to_vec();
    a.sort();
    b.sort();
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{ricci_char_poly, ricci_tensor};
    use crate::linalg::rat_int;

    #[test]
    fn almost_abelian_brackets() {
        let b = build(&FamilySpec::AlmostAbelian {
            w: vec![rat_int(1), rat_int(2)],
        })
        .unwrap();
        assert_eq!(b.algebra.dim(), 3);
        assert_eq!(b.algebra.bracket_basis(0, 1), vec![(1, rat_int(1))]);
        assert_eq!(b.algebra.bracket_basis(0, 2), vec![(2, rat_int(2))]);
        assert_eq!(
            b.metadata.expected_ricci_diagonal.unwrap(),
            vec![rat_int(-5), rat_int(-3), rat_int(-6)]
        );
    }

    #[test]
    fn heisenberg_sum_structure() {
        let b = build(&FamilySpec::HeisenbergSum { n: 4 }).unwrap();
        assert_eq!(b.algebra.dim(), 4);
        assert_eq!(b.algebra.bracket_table().len(), 1);
        assert_eq!(b.algebra.bracket_basis(1, 2), vec![(3, rat_int(1))]);
    }

    #[test]
    fn complex_hyperbolic_line() {
        let b = build(&FamilySpec::ComplexHyperbolic { n: 1 }).unwrap();
        assert_eq!(b.algebra.dim(), 4);
        assert_eq!(b.algebra.bracket_basis(0, 1), vec![(2, rat_int(1))]);
        assert_eq!(b.algebra.bracket_basis(0, 3), vec![(0, rat(1, 2))]);
        assert_eq!(b.algebra.bracket_basis(1, 3), vec![(1, rat(1, 2))]);
        assert_eq!(b.algebra.bracket_basis(2, 3), vec![(2, rat_int(1))]);
    }

    #[test]
    fn borel_is_almost_abelian_with_unit_weights() {
        let b = build(&FamilySpec::BorelHyperbolic { n: 4 }).unwrap();
        let a = build(&FamilySpec::AlmostAbelian {
            w: vec![rat_int(1), rat_int(1), rat_int(1)],
        })
        .unwrap();
        assert_eq!(b.algebra, a.algebra);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(build(&FamilySpec::Abelian { n: 0 }).is_err());
        assert!(build(&FamilySpec::HeisenbergSum { n: 2 }).is_err());
        assert!(build(&FamilySpec::ComplexHyperbolic { n: 0 }).is_err());
    }

    #[test]
    fn families_validate_and_match_expected_ricci() {
        for spec in [
            FamilySpec::Abelian { n: 4 },
            FamilySpec::AlmostAbelian {
                w: vec![rat_int(1), rat_int(2), rat(1, 3)],
            },
            FamilySpec::BorelHyperbolic { n: 3 },
        ] {
            let b = build(&spec).unwrap();
            if let Some(diag) = &b.metadata.expected_ricci_diagonal {
                let ric = ricci_tensor(&b.algebra, &b.inner).unwrap().operator;
                assert_eq!(ric, crate::linalg::RatMat::diagonal(diag));
            }
        }
    }

    #[test]
    fn w_permutation_equivalence_cases() {
        assert!(w_permutation_equivalence(
            &[rat_int(1), rat_int(2)],
            &[rat_int(2), rat_int(1)]
        ));
        assert!(!w_permutation_equivalence(
            &[rat_int(1), rat_int(2)],
            &[rat_int(1), rat_int(3)]
        ));
        assert!(w_permutation_equivalence(
            &[rat_int(0), rat_int(0)],
            &[rat_int(0), rat_int(0)]
        ));
        assert!(!w_permutation_equivalence(&[rat_int(1)], &[]));
    }

    #[test]
    fn permutation_equivalent_weights_share_ricci_spectra() {
        let a = almost_abelian_algebra(&[rat_int(1), rat_int(2), rat_int(3)]).unwrap();
        let b = almost_abelian_algebra(&[rat_int(3), rat_int(1), rat_int(2)]).unwrap();
        assert_eq!(ricci_char_poly(&a).unwrap(), ricci_char_poly(&b).unwrap());
    }
}
