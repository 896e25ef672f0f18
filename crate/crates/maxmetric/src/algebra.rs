//! Metric Lie algebras over exact rationals: structure constants, brackets,
//! derivation algebras, orbit tangent/normal spaces and transitivity of the
//! scaling-automorphism action on inner products.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::linalg::{
    canonical_row_basis, rat_to_string, rref_sparse, sym_dim, sym_index, sym_to_vec, vec_to_sym,
    Echelon, Rat, RatMat, SparseRow,
};

/// A bracket relation `[v_i, v_j] = sum_k terms[k] v_k` given over arbitrary
/// index pairs, before antisymmetry normalization. Indices are 0-based.
#[derive(Debug, Clone)]
pub struct RawBracket {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<(usize, Rat)>,
}

/// Outcome of checking the Lie algebra identities on raw structure constants.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    /// Triples (i, j, k) where c[i][j][k] != -c[j][i][k] (or i == j with a
    /// nonzero term).
    pub antisymmetry: Vec<(usize, usize, usize)>,
    /// Triples (i, j, k) where the Jacobi sum is nonzero.
    pub jacobi: Vec<(usize, usize, usize)>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.antisymmetry.is_empty() && self.jacobi.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (i, j, k) in &self.antisymmetry {
            writeln!(
                f,
                "antisymmetry violated at ({}, {}, {})",
                i + 1,
                j + 1,
                k + 1
            )?;
        }
        for (i, j, k) in &self.jacobi {
            writeln!(f, "Jacobi violated at ({}, {}, {})", i + 1, j + 1, k + 1)?;
        }
        Ok(())
    }
}

/// A finite-dimensional Lie algebra with rational structure constants over a
/// labeled basis. Construction validates antisymmetry and the Jacobi
/// identity exactly, so every value of this type is a genuine Lie algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    labels: Vec<String>,
    /// Normalized sparse table: key (i, j) with i < j, values sorted by k.
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
}

/// Checks antisymmetry and Jacobi on raw entries without aborting.
pub fn validate_brackets(dim: usize, raw: &[RawBracket]) -> ValidationReport {
    let mut report = ValidationReport::default();

    // accumulate the full (i, j) -> coefficient table
    let mut table: BTreeMap<(usize, usize), BTreeMap<usize, Rat>> = BTreeMap::new();
    for rb in raw {
        let slot = table.entry((rb.i, rb.j)).or_default();
        for (k, v) in &rb.terms {
            *slot.entry(*k).or_insert_with(Rat::zero) += v;
        }
    }

    // antisymmetry: c[i][i] = 0 and c[i][j] = -c[j][i] wherever both given
    for ((i, j), terms) in &table {
        if i == j {
            for (k, v) in terms {
                if !v.is_zero() {
                    report.antisymmetry.push((*i, *j, *k));
                }
            }
            continue;
        }
        if i < j {
            if let Some(opp) = table.get(&(*j, *i)) {
                let mut ks: Vec<usize> = terms.keys().copied().collect();
                ks.extend(opp.keys().copied());
                ks.sort_unstable();
                ks.dedup();
                for k in ks {
                    let a = terms.get(&k).cloned().unwrap_or_else(Rat::zero);
                    let b = opp.get(&k).cloned().unwrap_or_else(Rat::zero);
                    if !(a + b).is_zero() {
                        report.antisymmetry.push((*i, *j, k));
                    }
                }
            }
        }
    }

    // fold to i < j and check Jacobi on the folded table
    let folded = fold_table(&table);
    let bracket = |i: usize, j: usize| -> Vec<(usize, Rat)> {
        if i == j {
            return Vec::new();
        }
        let (key, sign) = if i < j { ((i, j), 1) } else { ((j, i), -1) };
        folded
            .get(&key)
            .map(|ts| {
                ts.iter()
                    .map(|(k, v)| (*k, if sign < 0 { -v.clone() } else { v.clone() }))
                    .collect()
            })
            .unwrap_or_default()
    };

    for i in 0..dim {
        for j in (i + 1)..dim {
            for k in (j + 1)..dim {
                let mut acc = vec![Rat::zero(); dim];
                for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                    for (m, v) in bracket(a, b) {
                        for (r, w) in bracket(m, c) {
                            acc[r] += &v * &w;
                        }
                    }
                }
                if acc.iter().any(|x| !x.is_zero()) {
                    report.jacobi.push((i, j, k));
                }
            }
        }
    }

    report
}

fn fold_table(
    table: &BTreeMap<(usize, usize), BTreeMap<usize, Rat>>,
) -> BTreeMap<(usize, usize), Vec<(usize, Rat)>> {
    let mut folded: BTreeMap<(usize, usize), BTreeMap<usize, Rat>> = BTreeMap::new();
    for ((i, j), terms) in table {
        if i == j {
            continue;
        }
        let (key, neg) = if i < j { ((*i, *j), false) } else { ((*j, *i), true) };
        // prefer the explicitly given (i < j) entry when both orientations exist
        if neg && table.contains_key(&key) {
            continue;
        }
        let slot = folded.entry(key).or_default();
        for (k, v) in terms {
            let v = if neg { -v.clone() } else { v.clone() };
            *slot.entry(*k).or_insert_with(Rat::zero) += v;
        }
    }
    folded
        .into_iter()
        .map(|(key, terms)| {
            let mut ts: Vec<(usize, Rat)> =
                terms.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            ts.sort_by_key(|e| e.0);
            (key, ts)
        })
        .filter(|(_, ts)| !ts.is_empty())
        .collect()
}

impl LieAlgebra {
    /// Builds and validates a Lie algebra from raw bracket relations.
    pub fn new(labels: Vec<String>, raw: Vec<RawBracket>) -> Result<Self, Error> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::Parse("dimension must be at least 1".into()));
        }
        {
            let mut sorted = labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != dim {
                return Err(Error::Parse("basis labels must be distinct".into()));
            }
        }
        for rb in &raw {
            if rb.i >= dim || rb.j >= dim {
                return Err(Error::Parse(format!(
                    "bracket index out of range: ({}, {})",
                    rb.i + 1,
                    rb.j + 1
                )));
            }
            for (k, _) in &rb.terms {
                if *k >= dim {
                    return Err(Error::Parse(format!("term index out of range: {}", k + 1)));
                }
            }
        }
        let report = validate_brackets(dim, &raw);
        if !report.ok() {
            return Err(Error::Validation(report));
        }
        let mut table: BTreeMap<(usize, usize), BTreeMap<usize, Rat>> = BTreeMap::new();
        for rb in &raw {
            let slot = table.entry((rb.i, rb.j)).or_default();
            for (k, v) in &rb.terms {
                *slot.entry(*k).or_insert_with(Rat::zero) += v;
            }
        }
        Ok(LieAlgebra {
            dim,
            labels,
            brackets: fold_table(&table),
        })
    }

    /// Abelian algebra with labels v1..vn.
    pub fn abelian(n: usize) -> Self {
        LieAlgebra::new(default_labels(n), Vec::new()).expect("abelian is always valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Renames the basis without touching the structure constants.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, Error> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch("label count".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Sparse normalized bracket table (i < j).
    pub fn bracket_table(&self) -> &BTreeMap<(usize, usize), Vec<(usize, Rat)>> {
        &self.brackets
    }

    /// `[v_i, v_j]` as a sparse coefficient list, for any index pair.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        if i == j {
            return Vec::new();
        }
        let (key, neg) = if i < j { ((i, j), false) } else { ((j, i), true) };
        self.brackets
            .get(&key)
            .map(|ts| {
                ts.iter()
                    .map(|(k, v)| (*k, if neg { -v.clone() } else { v.clone() }))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Bracket of two coefficient vectors.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>, Error> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "bracket expects vectors of length {}",
                self.dim
            )));
        }
        let mut out = vec![Rat::zero(); self.dim];
        for ((i, j), terms) in &self.brackets {
            let coeff = &x[*i] * &y[*j] - &x[*j] * &y[*i];
            if coeff.is_zero() {
                continue;
            }
            for (k, v) in terms {
                out[*k] += &coeff * v;
            }
        }
        Ok(out)
    }

    /// Matrix of `ad_{v_i}` (columns are images of basis vectors).
    pub fn ad_basis(&self, i: usize) -> RatMat {
        let mut m = RatMat::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (k, v) in self.bracket_basis(i, j) {
                m.set(k, j, v);
            }
        }
        m
    }

    /// Matrix of `ad_x` for a coefficient vector x.
    pub fn ad(&self, x: &[Rat]) -> Result<RatMat, Error> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch("ad expects a full vector".into()));
        }
        let mut m = RatMat::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (k, v) in self.bracket_basis(i, j) {
                    m.add_assign_at(k, j, &(xi * &v));
                }
            }
        }
        Ok(m)
    }

    pub fn trace_ad_basis(&self, i: usize) -> Rat {
        let mut t = Rat::zero();
        for j in 0..self.dim {
            for (k, v) in self.bracket_basis(i, j) {
                if k == j {
                    t += v;
                }
            }
        }
        t
    }

    /// tr(ad_x) = 0 for every basis vector, checked exactly.
    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| self.trace_ad_basis(i).is_zero())
    }

    /// Squared norm of the bracket tensor with respect to the inner product.
    ///
    /// Evaluated as the basis-free contraction over the dual metric, which
    /// agrees with the orthonormal-basis sum and stays rational for every
    /// rational Gram matrix.
    pub fn bracket_norm_sq(&self, ip: &InnerProduct) -> Result<Rat, Error> {
        if ip.dim() != self.dim {
            return Err(Error::DimensionMismatch("inner product dimension".into()));
        }
        let g = ip.gram();
        let ginv = g.inverse().ok_or(Error::InvalidInnerProduct)?;
        // ordered sparse entries (i, j, a, value)
        let mut entries: Vec<(usize, usize, usize, Rat)> = Vec::new();
        for ((i, j), terms) in &self.brackets {
            for (a, v) in terms {
                entries.push((*i, *j, *a, v.clone()));
                entries.push((*j, *i, *a, -v.clone()));
            }
        }
        let mut total = Rat::zero();
        for (i, j, a, va) in &entries {
            for (k, l, b, vb) in &entries {
                let gik = ginv.at(*i, *k);
                if gik.is_zero() {
                    continue;
                }
                let gjl = ginv.at(*j, *l);
                if gjl.is_zero() {
                    continue;
                }
                let gab = g.at(*a, *b);
                if gab.is_zero() {
                    continue;
                }
                total += va * vb * gik * gjl * gab;
            }
        }
        Ok(total)
    }

    /// Canonical basis of the derivation algebra
    /// `{D : D[x,y] = [Dx,y] + [x,Dy]}`, computed as the exact kernel of the
    /// Leibniz system over the n^2 matrix entries.
    pub fn derivation_algebra(&self) -> MatrixSubspace {
        let n = self.dim;
        let unknown = |r: usize, c: usize| r * n + c;
        let mut rows: Vec<SparseRow> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                // component k of D[vi,vj] - [Dvi,vj] - [vi,Dvj] = 0
                let mut per_k: BTreeMap<usize, Vec<(usize, Rat)>> = BTreeMap::new();
                for (m, cm) in self.bracket_basis(i, j) {
                    for k in 0..n {
                        per_k.entry(k).or_default().push((unknown(k, m), cm.clone()));
                    }
                }
                for p in 0..n {
                    for (k, cv) in self.bracket_basis(p, j) {
                        per_k.entry(k).or_default().push((unknown(p, i), -cv));
                    }
                }
                for q in 0..n {
                    for (k, cv) in self.bracket_basis(i, q) {
                        per_k.entry(k).or_default().push((unknown(q, j), -cv));
                    }
                }
                for (_, row) in per_k {
                    rows.push(row);
                }
            }
        }
        let null = rref_sparse(rows, n * n).null_space();
        MatrixSubspace::from_flat_span(n, &null)
    }

    /// Canonical basis of `span(identity) + Der(g)`, the Lie algebra of the
    /// scaling-automorphism group.
    pub fn scaled_derivation_algebra(&self) -> MatrixSubspace {
        let n = self.dim;
        let der = self.derivation_algebra();
        let mut span: Vec<Vec<Rat>> = der.basis().iter().map(|m| m.flatten()).collect();
        span.push(RatMat::identity(n).flatten());
        MatrixSubspace::from_flat_span(n, &span)
    }

    /// Constraint rows over upper-triangle symmetric coordinates expressing
    /// `tr(Theta * A) = 0` for each basis element A of the scaled derivation
    /// algebra.
    pub(crate) fn orbit_tangent_rows(&self) -> Vec<SparseRow> {
        let n = self.dim;
        self.scaled_derivation_algebra()
            .basis()
            .iter()
            .map(|a| {
                let mut row: SparseRow = Vec::new();
                for i in 0..n {
                    let d = a.at(i, i).clone();
                    if !d.is_zero() {
                        row.push((sym_index(i, i, n), d));
                    }
                    for j in (i + 1)..n {
                        let s = a.at(i, j) + a.at(j, i);
                        if !s.is_zero() {
                            row.push((sym_index(i, j, n), s));
                        }
                    }
                }
                row
            })
            .collect()
    }

    /// Canonical basis of the normal space of the scaling-automorphism orbit
    /// at the identity Gram matrix: symmetric forms trace-orthogonal to the
    /// symmetrized scaled derivation algebra.
    pub fn normal_space(&self, ip: &InnerProduct) -> Result<Vec<SymForm>, Error> {
        if ip.dim() != self.dim {
            return Err(Error::DimensionMismatch("inner product dimension".into()));
        }
        if !ip.is_identity() {
            return Err(Error::NonIdentityGram);
        }
        let n = self.dim;
        let null = rref_sparse(self.orbit_tangent_rows(), sym_dim(n)).null_space();
        let basis = canonical_row_basis(&null, sym_dim(n));
        Ok(basis
            .into_iter()
            .map(|v| SymForm::new(vec_to_sym(&v, n)).expect("kernel vectors are symmetric"))
            .collect())
    }

    /// Detects whether the scaling-automorphism action is transitive on
    /// inner products, by checking that its orbit through the identity Gram
    /// matrix is open (zero normal space, full tangent space).
    pub fn orbit_transitivity_check(&self) -> TransitivityReport {
        let n = self.dim;
        let rref = rref_sparse(self.orbit_tangent_rows(), sym_dim(n));
        let tangent_dim = rref.rank();
        let codim = sym_dim(n) - tangent_dim;
        TransitivityReport {
            transitive: codim == 0 && tangent_dim == sym_dim(n),
            codimension: codim,
            tangent_dim,
        }
    }

    /// Rewrites the algebra in a basis that is orthonormal for the given
    /// inner product, when one exists over the rationals: the exact LDL^T
    /// pivots must all be rational squares. Callers fall back to the
    /// basis-free contraction forms (e.g. [`Self::bracket_norm_sq`]) when
    /// this returns None.
    pub fn reduce_to_orthonormal(&self, ip: &InnerProduct) -> Result<Option<LieAlgebra>, Error> {
        match orthonormalizing_basis(ip.gram()) {
            None => Ok(None),
            Some(p) => Ok(Some(self.change_of_basis(&p)?)),
        }
    }

    /// Conjugates the structure constants by an invertible rational matrix
    /// whose columns are the new basis vectors in the old coordinates.
    pub fn change_of_basis(&self, p: &RatMat) -> Result<LieAlgebra, Error> {
        if p.n_rows() != self.dim || p.n_cols() != self.dim {
            return Err(Error::DimensionMismatch("change of basis matrix".into()));
        }
        let pinv = p.inverse().ok_or(Error::Singular)?;
        let n = self.dim;
        let mut raw = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.bracket(&p.col(i), &p.col(j))?;
                let coords = pinv.apply(&w);
                let terms: Vec<(usize, Rat)> = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                if !terms.is_empty() {
                    raw.push(RawBracket { i, j, terms });
                }
            }
        }
        LieAlgebra::new(self.labels.clone(), raw)
    }

    /// SHA-256 over the canonical structure-constant table.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("dim={};", self.dim).as_bytes());
        for ((i, j), terms) in &self.brackets {
            for (k, v) in terms {
                hasher.update(format!("{},{},{}:{};", i, j, k, rat_to_string(v)).as_bytes());
            }
        }
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{:02x}", b)).collect()
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra(dim={}", self.dim)?;
        for ((i, j), terms) in &self.brackets {
            let rhs: Vec<String> = terms
                .iter()
                .map(|(k, v)| format!("{} {}", rat_to_string(v), self.labels[*k]))
                .collect();
            write!(
                f,
                ", [{},{}]={}",
                self.labels[*i],
                self.labels[*j],
                rhs.join("+")
            )?;
        }
        write!(f, ")")
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{}", i)).collect()
}

/// Result of the transitivity detection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitivityReport {
    pub transitive: bool,
    /// Dimension of the orbit normal space at the identity Gram matrix.
    pub codimension: usize,
    /// Dimension of the symmetrized scaled derivation algebra.
    pub tangent_dim: usize,
}

/// Rational symmetric positive-definite Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerProduct {
    gram: RatMat,
}

impl InnerProduct {
    pub fn new(gram: RatMat) -> Result<Self, Error> {
        if gram.n_rows() != gram.n_cols() || !gram.is_symmetric() {
            return Err(Error::InvalidInnerProduct);
        }
        if !gram.is_positive_definite() {
            return Err(Error::InvalidInnerProduct);
        }
        Ok(InnerProduct { gram })
    }

    pub fn identity(n: usize) -> Self {
        InnerProduct {
            gram: RatMat::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.n_rows()
    }

    pub fn gram(&self) -> &RatMat {
        &self.gram
    }

    pub fn is_identity(&self) -> bool {
        self.gram.is_identity()
    }
}

/// Rational symmetric bilinear form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymForm {
    mat: RatMat,
}

impl SymForm {
    pub fn new(mat: RatMat) -> Result<Self, Error> {
        if !mat.is_symmetric() {
            return Err(Error::Parse("symmetric form must be symmetric".into()));
        }
        Ok(SymForm { mat })
    }

    pub fn zero(n: usize) -> Self {
        SymForm {
            mat: RatMat::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.n_rows()
    }

    pub fn matrix(&self) -> &RatMat {
        &self.mat
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn is_diagonal(&self) -> bool {
        self.mat.is_diagonal()
    }

    /// tr(Theta * A).
    pub fn trace_pair(&self, a: &RatMat) -> Rat {
        self.mat.matmul(a).trace()
    }

    pub fn coords(&self) -> Vec<Rat> {
        sym_to_vec(&self.mat)
    }
}

/// A linear subspace of n x n matrices with a canonical reduced-echelon
/// basis over the row-major flattening.
#[derive(Debug, Clone)]
pub struct MatrixSubspace {
    ambient_dim: usize,
    basis: Vec<RatMat>,
}

impl MatrixSubspace {
    pub fn from_flat_span(n: usize, span: &[Vec<Rat>]) -> Self {
        let basis = canonical_row_basis(span, n * n)
            .into_iter()
            .map(|v| RatMat::from_flat(n, n, v))
            .collect();
        MatrixSubspace {
            ambient_dim: n,
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatMat] {
        &self.basis
    }

    pub fn contains(&self, m: &RatMat) -> bool {
        let n = self.ambient_dim;
        if m.n_rows() != n || m.n_cols() != n {
            return false;
        }
        let mut ech = Echelon::new(n * n);
        for b in &self.basis {
            ech.insert(
                b.flatten()
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect(),
            );
        }
        let cand: SparseRow = m
            .flatten()
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        ech.reduce(cand).is_empty()
    }
}

/// Exact rational square root, when one exists.
fn rat_sqrt(x: &Rat) -> Option<Rat> {
    use num_integer::Roots;
    if x.numer().sign() == num_bigint::Sign::Minus {
        return None;
    }
    let sn = x.numer().sqrt();
    let sd = x.denom().sqrt();
    if &(&sn * &sn) == x.numer() && &(&sd * &sd) == x.denom() {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

/// A matrix P with P^T G P = I, computed from the exact LDL^T factorization
/// of G; exists over the rationals iff every pivot is a rational square.
pub fn orthonormalizing_basis(gram: &RatMat) -> Option<RatMat> {
    let n = gram.n_rows();
    if n != gram.n_cols() || !gram.is_symmetric() {
        return None;
    }
    // G = L D L^T with unit lower-triangular L
    let mut a = gram.clone();
    let mut l = RatMat::identity(n);
    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = a.at(k, k).clone();
        if pivot.is_zero() {
            return None;
        }
        d.push(pivot.clone());
        for r in (k + 1)..n {
            let f = a.at(r, k) / &pivot;
            l.set(r, k, f.clone());
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let v = a.at(r, c) - &f * a.at(k, c);
                a.set(r, c, v);
            }
        }
    }
    let mut dinv_sqrt = RatMat::zeros(n, n);
    for (k, pivot) in d.iter().enumerate() {
        let root = rat_sqrt(pivot)?;
        dinv_sqrt.set(k, k, Rat::one() / root);
    }
    // P = L^{-T} D^{-1/2}
    let linv_t = l.inverse().expect("unit triangular").transpose();
    Some(linv_t.matmul(&dinv_sqrt))
}

/// Leibniz identity check for a single matrix against all basis pairs.
pub fn is_derivation(alg: &LieAlgebra, d: &RatMat) -> bool {
    let n = alg.dim();
    if d.n_rows() != n || d.n_cols() != n {
        return false;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            // D[vi,vj]
            let mut lhs = vec![Rat::zero(); n];
            for (m, cm) in alg.bracket_basis(i, j) {
                for r in 0..n {
                    lhs[r] += d.at(r, m) * &cm;
                }
            }
            // [Dvi, vj] + [vi, Dvj]
            let mut rhs = vec![Rat::zero(); n];
            for p in 0..n {
                let dpi = d.at(p, i);
                if !dpi.is_zero() {
                    for (k, cv) in alg.bracket_basis(p, j) {
                        rhs[k] += dpi * &cv;
                    }
                }
                let dpj = d.at(p, j);
                if !dpj.is_zero() {
                    for (k, cv) in alg.bracket_basis(i, p) {
                        rhs[k] += dpj * &cv;
                    }
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}
