//! Exact rational linear algebra: dense matrices, sparse row echelon forms,
//! canonical null spaces and a small GF(2) solver.
//!
//! Everything here is exact. Canonical bases are reduced row echelon forms
//! with the lexicographic column order of the ambient coordinates, so equal
//! subspaces always produce identical bases.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;

/// Exact rational scalar used throughout the certification paths.
pub type Rat = num_rational::BigRational;

/// Integer as a rational.
pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Rational from a numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses "p/q" or "p".
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let num: BigInt = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
            let den: BigInt = q
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(num, den))
        }
        None => {
            let num: BigInt = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
            Ok(Rat::from_integer(num))
        }
    }
}

/// Formats a rational as "p" or "p/q".
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense rational matrix, row-major storage.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(d: &[Rat]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_assign_at(&mut self, r: usize, c: usize, v: &Rat) {
        let idx = r * self.cols + c;
        self.data[idx] += v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matmul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        out.add_assign_at(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        s += a * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * s)
    }

    pub fn trace(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let mut t = Rat::zero();
        for i in 0..self.rows {
            t += self.at(i, i);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want_one = i == j;
                let e = self.at(i, j);
                if want_one && !e.is_one() {
                    return false;
                }
                if !want_one && !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && !self.at(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Flattens row-major.
    pub fn flatten(&self) -> Vec<Rat> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols);
        RatMat { rows, cols, data }
    }

    /// Exact inverse by Gauss-Jordan elimination; None when singular.
    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                    inv.data.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a.at(col, col).clone();
            for j in 0..n {
                let v = a.at(col, j) / &p;
                a.set(col, j, v);
                let w = inv.at(col, j) / &p;
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for j in 0..n {
                    let v = a.at(r, j) - &f * a.at(col, j);
                    a.set(r, j, v);
                    let w = inv.at(r, j) - &f * inv.at(col, j);
                    inv.set(r, j, w);
                }
            }
        }
        Some(inv)
    }

    /// Pivots of the symmetric LDL^T sweep without row exchanges.
    ///
    /// Returns None as soon as a pivot vanishes while off-diagonal mass
    /// remains; for symmetric input, all pivots positive is equivalent to all
    /// leading principal minors positive.
    pub fn ldlt_pivots(&self) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let p = a.at(k, k).clone();
            if p.is_zero() {
                let dirty = (k..n).any(|r| (k..n).any(|c| !a.at(r, c).is_zero()));
                if dirty {
                    return None;
                }
                pivots.extend(std::iter::repeat(Rat::zero()).take(n - k));
                return Some(pivots);
            }
            pivots.push(p.clone());
            for r in (k + 1)..n {
                let f = a.at(r, k) / &p;
                if f.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = a.at(r, c) - &f * a.at(k, c);
                    a.set(r, c, v);
                }
            }
        }
        Some(pivots)
    }

    /// Exact positive-definiteness for symmetric matrices.
    pub fn is_positive_definite(&self) -> bool {
        match self.ldlt_pivots() {
            Some(p) => p.iter().all(|x| x.is_positive()),
            None => false,
        }
    }
}

impl fmt::Debug for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(rat_to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Sparse row: sorted (column, coefficient) pairs with nonzero coefficients.
pub type SparseRow = Vec<(usize, Rat)>;

/// Collapses duplicates, drops zeros, sorts by column.
pub fn sparse_row(mut entries: Vec<(usize, Rat)>) -> SparseRow {
    entries.sort_by_key(|e| e.0);
    let mut out: SparseRow = Vec::with_capacity(entries.len());
    for (c, v) in entries {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

fn row_axpy(dst: &SparseRow, factor: &Rat, src: &SparseRow) -> SparseRow {
    // dst - factor * src, merging sorted sparse rows
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        match (dst.get(i), src.get(j)) {
            (Some((ci, vi)), Some((cj, vj))) if ci == cj => {
                let v = vi - factor * vj;
                if !v.is_zero() {
                    out.push((*ci, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ci, vi)), Some((cj, _))) if ci < cj => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (Some(_), Some((cj, vj))) => {
                let v = -(factor * vj);
                if !v.is_zero() {
                    out.push((*cj, v));
                }
                j += 1;
            }
            (Some((ci, vi)), None) => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (None, Some((cj, vj))) => {
                let v = -(factor * vj);
                if !v.is_zero() {
                    out.push((*cj, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Incremental row echelon accumulator over sparse rational rows.
///
/// Rows are kept with unit pivot coefficient, keyed by pivot column; pivot
/// columns are always the leftmost nonzero of the stored row.
pub struct Echelon {
    n_cols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(n_cols: usize) -> Self {
        Echelon {
            n_cols,
            rows: BTreeMap::new(),
        }
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces a row against the current pivots; result has no support on
    /// pivot columns.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        loop {
            let hit = row
                .iter()
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            match hit {
                Some((c, v)) => {
                    row = row_axpy(&row, &v, &self.rows[&c]);
                }
                None => return row,
            }
        }
    }

    /// Inserts a row; returns true when the rank increased.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(sparse_row(row));
        match row.first() {
            None => false,
            Some((pivot, lead)) => {
                let pivot = *pivot;
                let lead = lead.clone();
                let normalized: SparseRow =
                    row.into_iter().map(|(c, v)| (c, v / &lead)).collect();
                self.rows.insert(pivot, normalized);
                true
            }
        }
    }

    /// Back-eliminates pivot columns from all rows, yielding the unique RREF.
    pub fn into_rref(mut self) -> Rref {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        for &p in pivots.iter().rev() {
            let prow = self.rows[&p].clone();
            let others: Vec<usize> = pivots.iter().copied().filter(|&q| q < p).collect();
            for q in others {
                let row = &self.rows[&q];
                if let Some((_, f)) = row.iter().find(|(c, _)| *c == p) {
                    let f = f.clone();
                    let newrow = row_axpy(row, &f, &prow);
                    self.rows.insert(q, newrow);
                }
            }
        }
        Rref {
            n_cols: self.n_cols,
            rows: self.rows.into_iter().collect(),
        }
    }
}

/// Reduced row echelon form; rows sorted by pivot column, pivot entries 1,
/// pivot columns otherwise zero.
pub struct Rref {
    n_cols: usize,
    rows: Vec<(usize, SparseRow)>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Dense copies of the RREF rows; this is the canonical basis of the row
    /// space.
    pub fn row_basis(&self) -> Vec<Vec<Rat>> {
        self.rows
            .iter()
            .map(|(_, r)| {
                let mut v = vec![Rat::zero(); self.n_cols];
                for (c, x) in r {
                    v[*c] = x.clone();
                }
                v
            })
            .collect()
    }

    /// Canonical null-space basis: one vector per free column in ascending
    /// order, with entry 1 at the free column.
    pub fn null_space(&self) -> Vec<Vec<Rat>> {
        let pivot_set: BTreeMap<usize, &SparseRow> =
            self.rows.iter().map(|(p, r)| (*p, r)).collect();
        let mut basis = Vec::new();
        for free in 0..self.n_cols {
            if pivot_set.contains_key(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.n_cols];
            v[free] = Rat::one();
            for (p, row) in &pivot_set {
                if let Some((_, coeff)) = row.iter().find(|(c, _)| *c == free) {
                    v[*p] = -coeff.clone();
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// RREF of an iterator of sparse rows.
pub fn rref_sparse(rows: impl IntoIterator<Item = SparseRow>, n_cols: usize) -> Rref {
    let mut ech = Echelon::new(n_cols);
    for r in rows {
        ech.insert(r);
    }
    ech.into_rref()
}

fn dense_to_sparse(v: &[Rat]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(c, x)| (c, x.clone()))
        .collect()
}

/// Canonical (RREF) basis of the span of the given vectors.
pub fn canonical_row_basis(span: &[Vec<Rat>], n_cols: usize) -> Vec<Vec<Rat>> {
    rref_sparse(span.iter().map(|v| dense_to_sparse(v)), n_cols).row_basis()
}

/// Solves the sparse system `A x = b` exactly. Returns the particular
/// solution with all free variables set to zero, or None when inconsistent.
pub fn solve_particular(
    rows: impl IntoIterator<Item = (SparseRow, Rat)>,
    n_unknowns: usize,
) -> Option<Vec<Rat>> {
    // augmented column at index n_unknowns
    let mut ech = Echelon::new(n_unknowns + 1);
    for (mut row, b) in rows {
        if !b.is_zero() {
            row.push((n_unknowns, b));
        }
        ech.insert(row);
    }
    let rref = ech.into_rref();
    if rref.pivots().contains(&n_unknowns) {
        return None;
    }
    let mut x = vec![Rat::zero(); n_unknowns];
    for (p, row) in &rref.rows {
        if let Some((_, b)) = row.iter().find(|(c, _)| *c == n_unknowns) {
            x[*p] = b.clone();
        }
    }
    Some(x)
}

/// Null-space basis over GF(2) for rows given as bitmasks (n <= 64).
pub fn gf2_null_basis(rows: &[u64], n: usize) -> Vec<u64> {
    assert!(n <= 64);
    let mut pivots: Vec<(usize, u64)> = Vec::new(); // (pivot bit, row)
    for &r0 in rows {
        let mut r = r0;
        for &(bit, prow) in &pivots {
            if r >> bit & 1 == 1 {
                r ^= prow;
            }
        }
        if r != 0 {
            let bit = r.trailing_zeros() as usize;
            for (_, prow) in pivots.iter_mut() {
                if *prow >> bit & 1 == 1 {
                    *prow ^= r;
                }
            }
            pivots.push((bit, r));
        }
    }
    pivots.sort_by_key(|(b, _)| *b);
    let pivot_bits: Vec<usize> = pivots.iter().map(|(b, _)| *b).collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_bits.contains(&free) {
            continue;
        }
        let mut v: u64 = 1 << free;
        for &(bit, prow) in &pivots {
            if prow >> free & 1 == 1 {
                v |= 1 << bit;
            }
        }
        basis.push(v);
    }
    basis
}

/// Index of the (i, j) entry, i <= j, in the upper-triangle coordinates of
/// symmetric n x n matrices (row-major over the upper triangle).
pub fn sym_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * n - i * (i + 1) / 2 + j
}

/// Dimension of the space of symmetric n x n matrices.
pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Upper-triangle coordinates of a symmetric matrix.
pub fn sym_to_vec(m: &RatMat) -> Vec<Rat> {
    let n = m.n_rows();
    let mut v = Vec::with_capacity(sym_dim(n));
    for i in 0..n {
        for j in i..n {
            v.push(m.at(i, j).clone());
        }
    }
    v
}

/// Symmetric matrix from its upper-triangle coordinates.
pub fn vec_to_sym(v: &[Rat], n: usize) -> RatMat {
    assert_eq!(v.len(), sym_dim(n));
    let mut m = RatMat::zeros(n, n);
    let mut idx = 0;
    for i in 0..n {
        for j in i..n {
            m.set(i, j, v[idx].clone());
            m.set(j, i, v[idx].clone());
            idx += 1;
        }
    }
    m
}
