//! Finite orthogonal automorphism groups and the maximality certificate:
//! intersecting the orbit normal space with the group-invariant symmetric
//! forms, all in exact arithmetic.
//!
//! The certificate is one-sided. The finite group only ever cuts out a
//! superset of the forms invariant under the full compact isotropy group, so
//! an empty intersection proves maximality while a nonzero witness proves
//! nothing.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};

use crate::algebra::{InnerProduct, LieAlgebra, SymForm};
use crate::error::Error;
use crate::linalg::{
    canonical_row_basis, gf2_null_basis, rref_sparse, sym_dim, sym_index, vec_to_sym, Rat, RatMat,
    SparseRow,
};

/// How a generator entered the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    SignDiagonal,
    GraphLift,
    VertexReflection,
    User,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::SignDiagonal => "sign_diagonal",
            Provenance::GraphLift => "graph_lift",
            Provenance::VertexReflection => "vertex_reflection",
            Provenance::User => "user",
        }
    }
}

/// Finite set of exact orthogonal automorphisms, stored by generators.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    dim: usize,
    generators: Vec<(RatMat, Provenance)>,
}

impl SymmetryGroup {
    /// Validates every generator as an orthogonal automorphism of `alg`.
    pub fn new(alg: &LieAlgebra, generators: Vec<(RatMat, Provenance)>) -> Result<Self, Error> {
        for (g, prov) in &generators {
            if !is_orthogonal_automorphism(alg, g)? {
                return Err(Error::NotAutomorphism(format!(
                    "generator with provenance {} fails the orthogonal automorphism check",
                    prov.as_str()
                )));
            }
        }
        Ok(SymmetryGroup {
            dim: alg.dim(),
            generators,
        })
    }

    /// Group with no generators (the trivial group).
    pub fn trivial(dim: usize) -> Self {
        SymmetryGroup {
            dim,
            generators: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = &RatMat> {
        self.generators.iter().map(|(g, _)| g)
    }

    pub fn provenance_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut counts = BTreeMap::new();
        for (_, p) in &self.generators {
            *counts.entry(p.as_str()).or_insert(0) += 1;
        }
        counts
    }

    /// Merges another group over the same algebra dimension.
    pub fn merge(mut self, other: SymmetryGroup) -> Result<Self, Error> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch("merging symmetry groups".into()));
        }
        self.generators.extend(other.generators);
        Ok(self)
    }

    /// Enumerates the generated group by breadth-first closure, up to `cap`
    /// elements (identity included).
    pub fn elements(&self, cap: usize) -> Result<Vec<RatMat>, Error> {
        let id = RatMat::identity(self.dim);
        let mut seen: HashSet<Vec<Rat>> = HashSet::new();
        seen.insert(id.flatten());
        let mut out = vec![id];
        let mut frontier: Vec<usize> = vec![0];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &idx in &frontier {
                for (g, _) in &self.generators {
                    let y = out[idx].matmul(g);
                    if seen.insert(y.flatten()) {
                        out.push(y);
                        if out.len() > cap {
                            return Err(Error::LimitExceeded(format!(
                                "group closure exceeded {} elements",
                                cap
                            )));
                        }
                        next.push(out.len() - 1);
                    }
                }
            }
            frontier = next;
        }
        Ok(out)
    }
}

/// Exact check that `g` is orthogonal and preserves the bracket.
pub fn is_orthogonal_automorphism(alg: &LieAlgebra, g: &RatMat) -> Result<bool, Error> {
    let n = alg.dim();
    if g.n_rows() != n || g.n_cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected a {n}x{n} matrix"
        )));
    }
    if !g.transpose().matmul(g).is_identity() {
        return Ok(false);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            // g [v_i, v_j]
            let mut lhs = vec![Rat::zero(); n];
            for (k, v) in alg.bracket_basis(i, j) {
                for r in 0..n {
                    let e = g.at(r, k);
                    if !e.is_zero() {
                        lhs[r] += e * &v;
                    }
                }
            }
            let rhs = alg.bracket(&g.col(i), &g.col(j))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All diagonal +-1 automorphisms, found by solving the sign-pattern
/// condition `eps_i eps_j = eps_k` (one GF(2) equation per nonzero structure
/// constant) rather than scanning 2^n matrices. The returned generators are
/// a GF(2) kernel basis; the generated group is the full sign-diagonal
/// subgroup, of order 2^(number of generators).
pub fn sign_diagonal_subgroup(alg: &LieAlgebra) -> Result<SymmetryGroup, Error> {
    let n = alg.dim();
    if n > 64 {
        return Err(Error::LimitExceeded(
            "sign-diagonal solver supports dimension <= 64".into(),
        ));
    }
    let mut rows: Vec<u64> = Vec::new();
    for ((i, j), terms) in alg.bracket_table() {
        for (k, _) in terms {
            let mut mask: u64 = 0;
            mask ^= 1 << i;
            mask ^= 1 << j;
            mask ^= 1 << k;
            if mask != 0 {
                rows.push(mask);
            }
        }
    }
    let basis = gf2_null_basis(&rows, n);
    let generators = basis
        .into_iter()
        .map(|mask| {
            let mut m = RatMat::identity(n);
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    m.set(i, i, -Rat::one());
                }
            }
            (m, Provenance::SignDiagonal)
        })
        .collect();
    SymmetryGroup::new(alg, generators)
}

/// Outcome of the pairwise reversal search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoReversibility {
    Reversible,
    /// Basis pair (i, j) for which no group element reverses one vector
    /// against the other; asserted only after full closure.
    FailingPair(usize, usize),
    /// The element cap was hit before the search could decide.
    Undecided,
}

fn resolves_pair(g: &RatMat, i: usize, j: usize) -> bool {
    // g v_i = a v_i and g v_j = -a v_j for some a in {-1, 1}
    let n = g.n_rows();
    for a in [Rat::one(), -Rat::one()] {
        let mut ok = true;
        for r in 0..n {
            let want_i = if r == i { a.clone() } else { Rat::zero() };
            let want_j = if r == j { -a.clone() } else { Rat::zero() };
            if *g.at(r, i) != want_i || *g.at(r, j) != want_j {
                ok = false;
                break;
            }
        }
        if ok {
            return true;
        }
    }
    false
}

/// Searches the generated group for reversing elements for every basis pair.
/// Explores breadth-first and stops as soon as all pairs are resolved, so
/// the closure is only enumerated when actually needed.
pub fn two_reversible_check(
    alg: &LieAlgebra,
    group: &SymmetryGroup,
    cap: usize,
) -> TwoReversibility {
    let n = alg.dim();
    let mut unresolved: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    if unresolved.is_empty() {
        return TwoReversibility::Reversible;
    }

    let id = RatMat::identity(n);
    let mut seen: HashSet<Vec<Rat>> = HashSet::new();
    seen.insert(id.flatten());
    let mut elements = vec![id];
    let mut cursor = 0;

    while cursor < elements.len() {
        let current = elements[cursor].clone();
        unresolved.retain(|&(i, j)| !resolves_pair(&current, i, j));
        if unresolved.is_empty() {
            return TwoReversibility::Reversible;
        }
        for g in group.generators() {
            let y = current.matmul(g);
            if seen.insert(y.flatten()) {
                elements.push(y);
                if elements.len() > cap {
                    return TwoReversibility::Undecided;
                }
            }
        }
        cursor += 1;
    }
    let (i, j) = unresolved[0];
    TwoReversibility::FailingPair(i, j)
}

/// Constraint rows over upper-triangle symmetric coordinates expressing
/// `g^T Theta g = Theta` for one generator.
fn invariance_rows(g: &RatMat) -> Vec<SparseRow> {
    let n = g.n_rows();
    // nonzero entries of g as (row, col, value)
    let nz: Vec<(usize, usize, Rat)> = (0..n)
        .flat_map(|r| {
            (0..n).filter_map(move |c| {
                let v = g.at(r, c);
                if v.is_zero() {
                    None
                } else {
                    Some((r, c, v.clone()))
                }
            })
        })
        .collect();
    // coefficient of Theta_{pq} (p <= q) at output position (r, s):
    // (g^T Theta g)[r][s] = sum_{p,q} g[p][r] Theta[p][q] g[q][s]
    let mut per_pos: BTreeMap<usize, Vec<(usize, Rat)>> = BTreeMap::new();
    for (p, r, a) in &nz {
        for (q, s, b) in &nz {
            let (rr, ss) = if r <= s { (*r, *s) } else { (*s, *r) };
            let pos = sym_index(rr, ss, n);
            let (pp, qq) = if p <= q { (*p, *q) } else { (*q, *p) };
            let coeff = if r <= s { a * b } else { Rat::zero() };
            if !coeff.is_zero() {
                per_pos
                    .entry(pos)
                    .or_default()
                    .push((sym_index(pp, qq, n), coeff));
            }
        }
    }
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            let pos = sym_index(i, j, n);
            let mut row = per_pos.remove(&pos).unwrap_or_default();
            row.push((pos, -Rat::one()));
            rows.push(row);
        }
    }
    rows
}

/// Canonical basis of the symmetric forms fixed by every generator.
pub fn invariant_forms_subspace(group: &SymmetryGroup) -> Vec<SymForm> {
    let n = group.dim();
    let rows = group.generators().flat_map(invariance_rows);
    let null = rref_sparse(rows, sym_dim(n)).null_space();
    canonical_row_basis(&null, sym_dim(n))
        .into_iter()
        .map(|v| SymForm::new(vec_to_sym(&v, n)).expect("invariant forms are symmetric"))
        .collect()
}

/// Certificate status. `Maximal` is trusted; `Inconclusive` asserts nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertStatus {
    Maximal,
    Inconclusive,
}

impl CertStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertStatus::Maximal => "MAXIMAL",
            CertStatus::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Result of the maximality test for the metric with orthonormal basis.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub status: CertStatus,
    pub dim_normal: usize,
    pub dim_invariant_normal: usize,
    /// First canonical basis vector of the invariant-normal intersection,
    /// when it is nonzero.
    pub witness: Option<SymForm>,
    pub generator_count: usize,
    pub provenance_counts: BTreeMap<&'static str, usize>,
    pub algebra_hash: String,
}

/// Canonical basis of the intersection of the orbit normal space with the
/// group-invariant symmetric forms, at the identity Gram matrix.
pub fn invariant_normal_intersection(
    alg: &LieAlgebra,
    group: &SymmetryGroup,
) -> Result<Vec<SymForm>, Error> {
    if group.dim() != alg.dim() {
        return Err(Error::DimensionMismatch(
            "group and algebra dimensions differ".into(),
        ));
    }
    let n = alg.dim();
    let stacked = alg
        .orbit_tangent_rows()
        .into_iter()
        .chain(group.generators().flat_map(invariance_rows));
    let null = rref_sparse(stacked, sym_dim(n)).null_space();
    Ok(canonical_row_basis(&null, sym_dim(n))
        .into_iter()
        .map(|v| SymForm::new(vec_to_sym(&v, n)).expect("kernel vectors are symmetric"))
        .collect())
}

/// Intersects the orbit normal space with the group-invariant forms at the
/// identity Gram matrix. An empty intersection certifies that the metric is
/// maximal; a nonzero witness leaves the question open.
pub fn maximality_certificate(
    alg: &LieAlgebra,
    group: &SymmetryGroup,
) -> Result<Certificate, Error> {
    if group.dim() != alg.dim() {
        return Err(Error::DimensionMismatch(
            "group and algebra dimensions differ".into(),
        ));
    }
    let n = alg.dim();
    let normal_rows = alg.orbit_tangent_rows();
    let dim_normal = sym_dim(n) - rref_sparse(normal_rows.iter().cloned(), sym_dim(n)).rank();

    let basis = invariant_normal_intersection(alg, group)?;
    let dim_invariant_normal = basis.len();
    let witness = basis.into_iter().next().filter(|w| !w.is_zero());

    let status = if dim_invariant_normal == 0 {
        CertStatus::Maximal
    } else {
        CertStatus::Inconclusive
    };
    Ok(Certificate {
        status,
        dim_normal,
        dim_invariant_normal,
        witness,
        generator_count: group.generator_count(),
        provenance_counts: group.provenance_counts(),
        algebra_hash: alg.fingerprint(),
    })
}

/// Certificate at an explicitly supplied inner product; only the identity
/// Gram matrix is supported (change basis first otherwise).
pub fn maximality_certificate_at(
    alg: &LieAlgebra,
    ip: &InnerProduct,
    group: &SymmetryGroup,
) -> Result<Certificate, Error> {
    if !ip.is_identity() {
        return Err(Error::NonIdentityGram);
    }
    maximality_certificate(alg, group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{default_labels, LieAlgebra, RawBracket};
    use crate::linalg::rat_int;

    fn heisenberg3() -> LieAlgebra {
        LieAlgebra::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![RawBracket {
                i: 0,
                j: 1,
                terms: vec![(2, rat_int(1))],
            }],
        )
        .unwrap()
    }

    fn almost_abelian(w: &[i64]) -> LieAlgebra {
        let n = w.len() + 1;
        let raw = w
            .iter()
            .enumerate()
            .filter(|(_, wi)| **wi != 0)
            .map(|(idx, wi)| RawBracket {
                i: 0,
                j: idx + 1,
                terms: vec![(idx + 1, rat_int(*wi))],
            })
            .collect();
        LieAlgebra::new(default_labels(n), raw).unwrap()
    }

    #[test]
    fn identity_is_an_orthogonal_automorphism() {
        let alg = heisenberg3();
        assert!(is_orthogonal_automorphism(&alg, &RatMat::identity(3)).unwrap());
    }

    #[test]
    fn sign_flip_on_almost_abelian() {
        let s = almost_abelian(&[1, 2]);
        let mut g = RatMat::identity(3);
        g.set(1, 1, rat_int(-1));
        assert!(is_orthogonal_automorphism(&s, &g).unwrap());
        // flipping the first coordinate breaks the bracket when weights are nonzero
        let mut h = RatMat::identity(3);
        h.set(0, 0, rat_int(-1));
        assert!(!is_orthogonal_automorphism(&s, &h).unwrap());
    }

    #[test]
    fn quarter_turn_on_heisenberg() {
        let alg = heisenberg3();
        // x -> y, y -> -x, z -> z satisfies [y, -x] = z
        let rot = RatMat::from_rows(vec![
            vec![rat_int(0), rat_int(-1), rat_int(0)],
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(1)],
        ]);
        assert!(is_orthogonal_automorphism(&alg, &rot).unwrap());
        // the plain swap x <-> y negates the bracket
        let swap = RatMat::from_rows(vec![
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(1)],
        ]);
        assert!(!is_orthogonal_automorphism(&alg, &swap).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let alg = heisenberg3();
        assert!(is_orthogonal_automorphism(&alg, &RatMat::identity(2)).is_err());
    }

    #[test]
    fn sign_diagonal_group_of_abelian_has_all_patterns() {
        let group = sign_diagonal_subgroup(&LieAlgebra::abelian(3)).unwrap();
        assert_eq!(group.generator_count(), 3);
        assert_eq!(group.elements(1 << 10).unwrap().len(), 8);
    }

    #[test]
    fn sign_diagonal_group_of_heisenberg() {
        let group = sign_diagonal_subgroup(&heisenberg3()).unwrap();
        let elems = group.elements(1 << 10).unwrap();
        assert_eq!(elems.len(), 4);
        for m in &elems {
            // eps_x eps_y = eps_z
            let prod = m.at(0, 0) * m.at(1, 1);
            assert_eq!(&prod, m.at(2, 2));
        }
    }

    #[test]
    fn sign_diagonal_group_of_almost_abelian_fixes_first_axis() {
        let s = almost_abelian(&[1, 2, 3]);
        let group = sign_diagonal_subgroup(&s).unwrap();
        let elems = group.elements(1 << 10).unwrap();
        assert_eq!(elems.len(), 8); // 2^(n-1) with n = 4
        for m in &elems {
            assert_eq!(m.at(0, 0), &rat_int(1));
        }
    }

    #[test]
    fn almost_abelian_basis_is_two_reversible() {
        let s = almost_abelian(&[1, 2]);
        let group = sign_diagonal_subgroup(&s).unwrap();
        assert_eq!(
            two_reversible_check(&s, &group, 1 << 20),
            TwoReversibility::Reversible
        );
    }

    #[test]
    fn trivial_group_fails_two_reversibility() {
        let ab = LieAlgebra::abelian(2);
        let group = SymmetryGroup::trivial(2);
        assert_eq!(
            two_reversible_check(&ab, &group, 1 << 20),
            TwoReversibility::FailingPair(0, 1)
        );
    }

    #[test]
    fn cap_yields_undecided() {
        let ab = LieAlgebra::abelian(4);
        let group = sign_diagonal_subgroup(&ab).unwrap();
        assert_eq!(
            two_reversible_check(&ab, &group, 2),
            TwoReversibility::Undecided
        );
    }

    #[test]
    fn invariant_forms_of_free_sign_group_are_diagonal() {
        let ab = LieAlgebra::abelian(3);
        let group = sign_diagonal_subgroup(&ab).unwrap();
        let forms = invariant_forms_subspace(&group);
        assert_eq!(forms.len(), 3);
        for f in &forms {
            assert!(f.is_diagonal());
        }
    }

    #[test]
    fn invariant_forms_of_trivial_group_fill_sym() {
        let group = SymmetryGroup::trivial(3);
        assert_eq!(invariant_forms_subspace(&group).len(), 6);
    }

    #[test]
    fn invariant_forms_are_pointwise_fixed() {
        let s = almost_abelian(&[1, 2]);
        let group = sign_diagonal_subgroup(&s).unwrap();
        for f in invariant_forms_subspace(&group) {
            for g in group.generators() {
                let conj = g.transpose().matmul(f.matrix()).matmul(g);
                assert_eq!(&conj, f.matrix());
            }
        }
    }

    #[test]
    fn certificate_for_almost_abelian_is_maximal() {
        let s = almost_abelian(&[1, 2]);
        let group = sign_diagonal_subgroup(&s).unwrap();
        let cert = maximality_certificate(&s, &group).unwrap();
        assert_eq!(cert.status, CertStatus::Maximal);
        assert_eq!(cert.dim_invariant_normal, 0);
        assert!(cert.witness.is_none());
    }

    #[test]
    fn certificate_with_zero_normal_space_ignores_group() {
        // R + h3 has a transitive scaling-automorphism action, so even the
        // trivial group certifies it
        let alg = LieAlgebra::new(
            default_labels(4),
            vec![RawBracket {
                i: 1,
                j: 2,
                terms: vec![(3, rat_int(1))],
            }],
        )
        .unwrap();
        let cert = maximality_certificate(&alg, &SymmetryGroup::trivial(4)).unwrap();
        assert_eq!(cert.status, CertStatus::Maximal);
        assert_eq!(cert.dim_normal, 0);
    }

    #[test]
    fn certificate_status_invariant_under_basis_permutation() {
        let s = almost_abelian(&[1, 2]);
        // permute (v1, v2, v3) -> (v3, v1, v2)
        let p = RatMat::from_rows(vec![
            vec![rat_int(0), rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
        ]);
        let permuted = s.change_of_basis(&p).unwrap();
        let c1 =
            maximality_certificate(&s, &sign_diagonal_subgroup(&s).unwrap()).unwrap();
        let c2 = maximality_certificate(&permuted, &sign_diagonal_subgroup(&permuted).unwrap())
            .unwrap();
        assert_eq!(c1.status, c2.status);
        assert_eq!(c1.dim_normal, c2.dim_normal);
        assert_eq!(c1.dim_invariant_normal, c2.dim_invariant_normal);
    }

    #[test]
    fn bad_generator_is_rejected() {
        let s = almost_abelian(&[1, 2]);
        let mut bad = RatMat::identity(3);
        bad.set(0, 0, rat_int(-1));
        assert!(SymmetryGroup::new(&s, vec![(bad, Provenance::User)]).is_err());
    }
}
