//! Exact curvature of a metric Lie algebra with orthonormal basis: Ricci
//! form and operator, scalar curvature, Einstein detection and the algebraic
//! Ricci-soliton decomposition `Ric = c I + D` with D a derivation.

use num_traits::{One, Zero};

use crate::algebra::{is_derivation, InnerProduct, LieAlgebra, SymForm};
use crate::error::Error;
use crate::linalg::{rat, rat_int, solve_particular, Rat, RatMat, SparseRow};

/// Ricci data at the identity Gram matrix. Form and operator coincide as
/// matrices because the basis is orthonormal.
#[derive(Debug, Clone)]
pub struct RicciData {
    pub form: SymForm,
    pub operator: RatMat,
    pub scal: Rat,
}

/// Ricci tensor of the left-invariant metric whose orthonormal frame is the
/// given basis:
///
///   Ric = M - (1/2) B - S(ad_H),
///   M(x,y) = -(1/2) sum_i <[x,b_i],[y,b_i]>
///            + (1/4) sum_{i,j} <[b_i,b_j],x><[b_i,b_j],y>,
///
/// with B the Killing form and H the mean-curvature vector `<H,x> = tr ad_x`.
pub fn ricci_tensor(alg: &LieAlgebra, ip: &InnerProduct) -> Result<RicciData, Error> {
    if ip.dim() != alg.dim() {
        return Err(Error::DimensionMismatch("inner product dimension".into()));
    }
    if !ip.is_identity() {
        return Err(Error::NonIdentityGram);
    }
    let n = alg.dim();
    let ads: Vec<RatMat> = (0..n).map(|i| alg.ad_basis(i)).collect();

    let mut ric = RatMat::zeros(n, n);

    // M term, first part: -(1/2) sum_i <[v_r, v_i], [v_s, v_i]>
    // [v_r, v_i] is column i of ad_r
    let half = rat(1, 2);
    for r in 0..n {
        for s in r..n {
            let mut acc = Rat::zero();
            for i in 0..n {
                for k in 0..n {
                    let a = ads[r].at(k, i);
                    if a.is_zero() {
                        continue;
                    }
                    let b = ads[s].at(k, i);
                    if !b.is_zero() {
                        acc += a * b;
                    }
                }
            }
            if !acc.is_zero() {
                let v = -(&half * &acc);
                ric.add_assign_at(r, s, &v);
                if r != s {
                    ric.add_assign_at(s, r, &v);
                }
            }
        }
    }

    // M term, second part: (1/4) sum over ordered pairs (i,j) of
    // c_{ij}^r c_{ij}^s; stored entries (i < j) each count twice
    for (_, terms) in alg.bracket_table() {
        for (r, vr) in terms {
            for (s, vs) in terms {
                let v = &half * vr * vs; // 2 * (1/4)
                ric.add_assign_at(*r, *s, &v);
            }
        }
    }

    // Killing term: -(1/2) tr(ad_r ad_s)
    for r in 0..n {
        for s in r..n {
            let tr = ads[r].matmul(&ads[s]).trace();
            if !tr.is_zero() {
                let v = -(&half * &tr);
                ric.add_assign_at(r, s, &v);
                if r != s {
                    ric.add_assign_at(s, r, &v);
                }
            }
        }
    }

    // mean-curvature term: -S(ad_H) with H = sum_r (tr ad_r) v_r
    let h: Vec<Rat> = (0..n).map(|i| alg.trace_ad_basis(i)).collect();
    if h.iter().any(|x| !x.is_zero()) {
        let ad_h = alg.ad(&h)?;
        let sym = ad_h.add(&ad_h.transpose()).scale(&half);
        ric = ric.sub(&sym);
    }

    let scal = ric.trace();
    Ok(RicciData {
        form: SymForm::new(ric.clone()).expect("Ricci form is symmetric"),
        operator: ric,
        scal,
    })
}

pub fn scalar_curvature(alg: &LieAlgebra, ip: &InnerProduct) -> Result<Rat, Error> {
    Ok(ricci_tensor(alg, ip)?.scal)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EinsteinResult {
    Einstein { lambda: Rat },
    NotEinstein,
}

/// Exact equality test `Ric = lambda I`.
pub fn einstein_check(alg: &LieAlgebra, ip: &InnerProduct) -> Result<EinsteinResult, Error> {
    let ric = ricci_tensor(alg, ip)?.operator;
    let n = alg.dim();
    let lambda = ric.at(0, 0).clone();
    let want = RatMat::identity(n).scale(&lambda);
    if ric == want {
        Ok(EinsteinResult::Einstein { lambda })
    } else {
        Ok(EinsteinResult::NotEinstein)
    }
}

/// Exact algebraic soliton decomposition.
#[derive(Debug, Clone)]
pub struct SolitonDecomposition {
    pub c: Rat,
    pub derivation: RatMat,
    pub residual_zero: bool,
}

/// Solves `Ric = c I + D` exactly over the derivation algebra. Returns the
/// canonical solution (c first in the unknown order, free parameters zero)
/// or None when no decomposition exists.
pub fn ricci_soliton_check(
    alg: &LieAlgebra,
    ip: &InnerProduct,
) -> Result<Option<SolitonDecomposition>, Error> {
    let ric = ricci_tensor(alg, ip)?.operator;
    let n = alg.dim();
    let der = alg.derivation_algebra();
    let m = der.dim();

    // unknowns: (c, alpha_1..alpha_m); equations indexed by matrix entry
    let mut rows: Vec<(SparseRow, Rat)> = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let mut row: SparseRow = Vec::new();
            if r == c {
                row.push((0, Rat::one()));
            }
            for (t, d) in der.basis().iter().enumerate() {
                let v = d.at(r, c);
                if !v.is_zero() {
                    row.push((t + 1, v.clone()));
                }
            }
            rows.push((row, ric.at(r, c).clone()));
        }
    }
    let Some(sol) = solve_particular(rows, m + 1) else {
        return Ok(None);
    };
    let c = sol[0].clone();
    let mut d = RatMat::zeros(n, n);
    for (t, basis_mat) in der.basis().iter().enumerate() {
        if !sol[t + 1].is_zero() {
            d = d.add(&basis_mat.scale(&sol[t + 1]));
        }
    }
    // re-substitution check
    let recon = RatMat::identity(n).scale(&c).add(&d);
    let residual_zero = recon == ric && is_derivation(alg, &d);
    Ok(Some(SolitonDecomposition {
        c,
        derivation: d,
        residual_zero,
    }))
}

/// Coefficients of the characteristic polynomial of the Ricci operator,
/// `x^n + a_1 x^(n-1) + ... + a_n`, by the Faddeev-LeVerrier recursion.
/// Exact spectra agree if and only if these coefficients agree.
pub fn ricci_char_poly(alg: &LieAlgebra) -> Result<Vec<Rat>, Error> {
    let ric = ricci_tensor(alg, &InnerProduct::identity(alg.dim()))?.operator;
    Ok(char_poly(&ric))
}

pub fn char_poly(a: &RatMat) -> Vec<Rat> {
    let n = a.n_rows();
    let mut coeffs = Vec::with_capacity(n);
    let mut m = RatMat::zeros(n, n); // M_0 = 0, c_0 = 1 implicit
    let mut c = Rat::one();
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I; c_k = -tr(A M_k)/k
        m = a.matmul(&m).add(&RatMat::identity(n).scale(&c));
        let am = a.matmul(&m);
        c = -(am.trace() / rat_int(k as i64));
        coeffs.push(c.clone());
    }
    coeffs
}
