//! Fixed-step integration of homogeneous metric evolution equations
//! `d/dt g = -a Ric_g - b scal_g g` on the space of inner products, with
//! eigenvalue-ratio diagnostics for self-similarity.
//!
//! This is the one floating-point corner of the crate; everything feeding it
//! (structure constants, derivation bases) comes from the exact side.

use num_traits::ToPrimitive;

use crate::algebra::LieAlgebra;
use crate::error::Error;

/// Dense f64 matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatMat {
    n: usize,
    data: Vec<f64>,
}

impl FloatMat {
    pub fn zeros(n: usize) -> Self {
        FloatMat {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n));
        FloatMat {
            n,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n + c] += v;
    }

    pub fn scale(&self, s: f64) -> Self {
        FloatMat {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        FloatMat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        FloatMat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.add_at(i, j, a * other.at(k, j));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.at(i, i)).sum()
    }

    pub fn symmetrize(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, 0.5 * (self.at(i, j) + self.at(j, i)));
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.at(i, j) - self.at(j, i)).abs());
            }
        }
        worst
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_dot(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_dot(self).sqrt()
    }

    /// Lower Cholesky factor; Err for non-positive-definite input.
    pub fn cholesky(&self) -> Result<FloatMat, Error> {
        let n = self.n;
        let mut l = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.at(i, j);
                for k in 0..j {
                    s -= l.at(i, k) * l.at(j, k);
                }
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return Err(Error::NotPositiveDefinite);
                    }
                    l.set(i, i, s.sqrt());
                } else {
                    l.set(i, j, s / l.at(j, j));
                }
            }
        }
        Ok(l)
    }

    /// Inverse of a lower-triangular matrix by forward substitution.
    pub fn lower_triangular_inverse(&self) -> FloatMat {
        let n = self.n;
        let mut inv = Self::zeros(n);
        for col in 0..n {
            let mut x = vec![0.0; n];
            x[col] = 1.0;
            for i in 0..n {
                let mut s = x[i];
                for k in 0..i {
                    s -= self.at(i, k) * x[k];
                }
                x[i] = s / self.at(i, i);
            }
            for i in 0..n {
                inv.set(i, col, x[i]);
            }
        }
        inv
    }

    pub fn determinant(&self) -> f64 {
        // LU with partial pivoting
        let n = self.n;
        let mut a = self.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut piv = col;
            for r in (col + 1)..n {
                if a.at(r, col).abs() > a.at(piv, col).abs() {
                    piv = r;
                }
            }
            if a.at(piv, col) == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..n {
                    let t = a.at(col, j);
                    a.set(col, j, a.at(piv, j));
                    a.set(piv, j, t);
                }
                det = -det;
            }
            det *= a.at(col, col);
            for r in (col + 1)..n {
                let f = a.at(r, col) / a.at(col, col);
                if f != 0.0 {
                    for j in col..n {
                        a.add_at(r, j, -f * a.at(col, j));
                    }
                }
            }
        }
        det
    }

    /// Eigenvalues of a symmetric matrix by the cyclic Jacobi method,
    /// sorted ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = self.clone();
        for _sweep in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a.at(i, j) * a.at(i, j);
                }
            }
            if off.sqrt() < 1e-14 * (1.0 + a.max_abs()) {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.at(p, q);
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let app = a.at(p, p);
                    let aqq = a.at(q, q);
                    let theta = 0.5 * (aqq - app) / apq;
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.at(k, p);
                        let akq = a.at(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.at(p, k);
                        let aqk = a.at(q, k);
                        a.set(p, k, c * apk - s * aqk);
                        a.set(q, k, s * apk + c * aqk);
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..n).map(|i| a.at(i, i)).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
        eig
    }
}

/// Structure constants as f64 triples (i, j, k, value) over ordered pairs.
#[derive(Debug, Clone)]
pub struct FloatBrackets {
    n: usize,
    triples: Vec<(usize, usize, usize, f64)>,
}

impl FloatBrackets {
    pub fn from_algebra(alg: &LieAlgebra) -> Self {
        let mut triples = Vec::new();
        for ((i, j), terms) in alg.bracket_table() {
            for (k, v) in terms {
                let x = v.to_f64().expect("structure constant fits in f64");
                triples.push((*i, *j, *k, x));
                triples.push((*j, *i, *k, -x));
            }
        }
        FloatBrackets {
            n: alg.dim(),
            triples,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Structure constants in the orthonormal basis `u = L^{-T} e` for the
    /// Gram factor `G = L L^T`, as a dense 3-tensor c[i][j][k].
    fn orthonormalized(&self, l: &FloatMat) -> Vec<f64> {
        let n = self.n;
        let u = l.transpose().lower_triangular_inverse().transpose(); // L^{-T}
        let mut c = vec![0.0; n * n * n];
        for &(p, q, r, v) in &self.triples {
            for i in 0..n {
                let upi = u.at(p, i);
                if upi == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let uqj = u.at(q, j);
                    if uqj == 0.0 {
                        continue;
                    }
                    let base = v * upi * uqj;
                    for k in 0..n {
                        // (U^{-1})_{k r} = (L^T)_{k r} = L_{r k}
                        let lrk = l.at(r, k);
                        if lrk != 0.0 {
                            c[(i * n + j) * n + k] += base * lrk;
                        }
                    }
                }
            }
        }
        c
    }
}

/// Ricci of the orthonormalized structure constants c[i][j][k].
fn ricci_orthonormal(c: &[f64], n: usize) -> FloatMat {
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut ric = FloatMat::zeros(n);
    for r in 0..n {
        for s in r..n {
            let mut m1 = 0.0;
            let mut m2 = 0.0;
            let mut killing = 0.0;
            for i in 0..n {
                for k in 0..n {
                    m1 += c[idx(r, i, k)] * c[idx(s, i, k)];
                }
                for j in 0..n {
                    m2 += c[idx(i, j, r)] * c[idx(i, j, s)];
                    // tr(ad_r ad_s) = sum_{i,j} c[s][i][j] c[r][j][i]
                    killing += c[idx(s, i, j)] * c[idx(r, j, i)];
                }
            }
            let v = -0.5 * m1 + 0.25 * m2 - 0.5 * killing;
            ric.set(r, s, v);
            ric.set(s, r, v);
        }
    }
    // mean-curvature vector: <H, u_r> = tr ad_{u_r}
    let h: Vec<f64> = (0..n)
        .map(|r| (0..n).map(|k| c[idx(r, k, k)]).sum())
        .collect();
    if h.iter().any(|x| *x != 0.0) {
        let mut ad_h = FloatMat::zeros(n);
        for (r, hr) in h.iter().enumerate() {
            if *hr == 0.0 {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    ad_h.add_at(k, j, hr * c[idx(r, j, k)]);
                }
            }
        }
        let sym = ad_h.add(&ad_h.transpose()).scale(0.5);
        ric = ric.sub(&sym);
    }
    ric
}

/// Ricci form and scalar curvature of a left-invariant metric at an
/// arbitrary positive-definite Gram matrix, in the original coordinates.
pub fn ricci_at(brackets: &FloatBrackets, gram: &FloatMat) -> Result<(FloatMat, f64), Error> {
    let n = brackets.dim();
    let l = gram.cholesky()?;
    let ric = ricci_orthonormal(&brackets.orthonormalized(&l), n);
    let scal = ric.trace();
    // pull the form back to the original coordinates: R = L R' L^T
    let pulled = l.matmul(&ric).matmul(&l.transpose());
    Ok((pulled, scal))
}

/// Eigenvalues of the Ricci operator at the given Gram matrix, sorted. In
/// the orthonormal basis the operator equals the form, so the spectrum comes
/// from a symmetric matrix.
pub fn ricci_operator_eigenvalues(
    brackets: &FloatBrackets,
    gram: &FloatMat,
) -> Result<Vec<f64>, Error> {
    let l = gram.cholesky()?;
    let ric = ricci_orthonormal(&brackets.orthonormalized(&l), brackets.dim());
    Ok(ric.symmetric_eigenvalues())
}

/// Right-hand side `-a Ric(g) - b scal(g) g` as a symmetric matrix in the
/// original coordinates.
pub fn flow_field(
    brackets: &FloatBrackets,
    gram: &FloatMat,
    a: f64,
    b: f64,
) -> Result<FloatMat, Error> {
    let (ric, scal) = ricci_at(brackets, gram)?;
    Ok(ric.scale(-a).add(&gram.scale(-b * scal)))
}

/// Renormalization applied after each accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    None,
    /// Rescale so the squared bracket norm is 1.
    UnitBracketNorm,
    /// Rescale so det(g) = 1.
    UnitDeterminant,
}

impl Normalization {
    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "none" => Ok(Normalization::None),
            "unit-bracket-norm" => Ok(Normalization::UnitBracketNorm),
            "unit-determinant" => Ok(Normalization::UnitDeterminant),
            other => Err(Error::Parse(format!("unknown normalization `{other}`"))),
        }
    }
}

/// An integration task for the c = 0 flow family.
#[derive(Debug, Clone)]
pub struct FlowProblem {
    pub brackets: FloatBrackets,
    pub g0: FloatMat,
    pub a: f64,
    pub b: f64,
    pub t_end: f64,
    pub step: f64,
    pub normalization: Normalization,
}

impl FlowProblem {
    pub fn new(
        alg: &LieAlgebra,
        g0: FloatMat,
        a: f64,
        b: f64,
        t_end: f64,
        step: f64,
        normalization: Normalization,
    ) -> Result<Self, Error> {
        if g0.dim() != alg.dim() {
            return Err(Error::InvalidFlow("initial metric dimension".into()));
        }
        if g0.asymmetry() > 1e-12 {
            return Err(Error::InvalidFlow(
                "initial metric must be symmetric within 1e-12".into(),
            ));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidFlow("coefficients must be finite".into()));
        }
        if !(step > 0.0) {
            return Err(Error::InvalidFlow("step must be positive".into()));
        }
        if !(t_end >= 0.0) {
            return Err(Error::InvalidFlow("t_end must be nonnegative".into()));
        }
        Ok(FlowProblem {
            brackets: FloatBrackets::from_algebra(alg),
            g0: g0.symmetrize(),
            a,
            b,
            t_end,
            step,
            normalization,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowStatus {
    Completed,
    TruncatedNotPositiveDefinite,
    TruncatedBlowUp,
}

#[derive(Debug, Clone)]
pub struct FlowSample {
    pub t: f64,
    pub gram: FloatMat,
    pub ricci_eigenvalues: Vec<f64>,
    pub scal: f64,
}

#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub samples: Vec<FlowSample>,
    pub status: FlowStatus,
}

const BLOWUP_LIMIT: f64 = 1e12;

fn bracket_norm_sq_float(brackets: &FloatBrackets, gram: &FloatMat) -> Result<f64, Error> {
    let l = gram.cholesky()?;
    let c = brackets.orthonormalized(&l);
    Ok(c.iter().map(|x| x * x).sum())
}

fn renormalize(
    brackets: &FloatBrackets,
    gram: &FloatMat,
    mode: Normalization,
) -> Result<FloatMat, Error> {
    match mode {
        Normalization::None => Ok(gram.clone()),
        Normalization::UnitBracketNorm => {
            // under g -> s g the squared bracket norm scales by 1/s
            let b = bracket_norm_sq_float(brackets, gram)?;
            if b <= 0.0 {
                return Ok(gram.clone());
            }
            Ok(gram.scale(b))
        }
        Normalization::UnitDeterminant => {
            let det = gram.determinant();
            if det <= 0.0 {
                return Err(Error::NotPositiveDefinite);
            }
            let n = gram.dim() as f64;
            Ok(gram.scale(det.powf(-1.0 / n)))
        }
    }
}

/// Classical fixed-step 4th-order integration with per-step symmetrization
/// and optional renormalization. Truncates with a flag on loss of positive
/// definiteness or entry blow-up.
pub fn integrate(problem: &FlowProblem) -> Result<FlowTrajectory, Error> {
    let brackets = &problem.brackets;
    let mut g = renormalize(brackets, &problem.g0, problem.normalization)?;
    let mut samples = Vec::new();
    let mut status = FlowStatus::Completed;

    let record =
        |g: &FloatMat, t: f64, samples: &mut Vec<FlowSample>| -> Result<(), Error> {
            let eig = ricci_operator_eigenvalues(brackets, g)?;
            let (_, scal) = ricci_at(brackets, g)?;
            samples.push(FlowSample {
                t,
                gram: g.clone(),
                ricci_eigenvalues: eig,
                scal,
            });
            Ok(())
        };

    record(&g, 0.0, &mut samples)?;

    let steps = (problem.t_end / problem.step).round() as usize;
    let h = problem.step;
    for s in 0..steps {
        let k1 = match flow_field(brackets, &g, problem.a, problem.b) {
            Ok(k) => k,
            Err(_) => {
                status = FlowStatus::TruncatedNotPositiveDefinite;
                break;
            }
        };
        let stage = |gg: &FloatMat| flow_field(brackets, gg, problem.a, problem.b);
        let k2 = match stage(&g.add(&k1.scale(h / 2.0))) {
            Ok(k) => k,
            Err(_) => {
                status = FlowStatus::TruncatedNotPositiveDefinite;
                break;
            }
        };
        let k3 = match stage(&g.add(&k2.scale(h / 2.0))) {
            Ok(k) => k,
            Err(_) => {
                status = FlowStatus::TruncatedNotPositiveDefinite;
                break;
            }
        };
        let k4 = match stage(&g.add(&k3.scale(h))) {
            Ok(k) => k,
            Err(_) => {
                status = FlowStatus::TruncatedNotPositiveDefinite;
                break;
            }
        };
        let incr = k1
            .add(&k2.scale(2.0))
            .add(&k3.scale(2.0))
            .add(&k4)
            .scale(h / 6.0);
        g = g.add(&incr).symmetrize();
        if g.max_abs() > BLOWUP_LIMIT {
            status = FlowStatus::TruncatedBlowUp;
            break;
        }
        g = match renormalize(brackets, &g, problem.normalization) {
            Ok(gg) => gg,
            Err(_) => {
                status = FlowStatus::TruncatedNotPositiveDefinite;
                break;
            }
        };
        let t = (s + 1) as f64 * h;
        if record(&g, t, &mut samples).is_err() {
            status = FlowStatus::TruncatedNotPositiveDefinite;
            break;
        }
    }

    Ok(FlowTrajectory { samples, status })
}

/// Self-similarity diagnostics over a trajectory.
#[derive(Debug, Clone)]
pub struct FlowDiagnostics {
    /// Max over samples of the sup distance between the normalized sorted
    /// Ricci eigenvalue vector and its value at t = 0.
    pub ratio_drift: f64,
    /// Max over samples of the Frobenius residual of projecting the Ricci
    /// operator onto span(I) + Der(g).
    pub max_soliton_residual: f64,
    pub per_sample_residual: Vec<f64>,
}

fn normalized_ratios(eig: &[f64]) -> Vec<f64> {
    let scale = eig.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return vec![0.0; eig.len()];
    }
    eig.iter().map(|x| x / scale).collect()
}

/// Computes the drift and soliton residual diagnostics; the derivation basis
/// comes from the exact side of the crate.
pub fn self_similarity_diagnostics(
    alg: &LieAlgebra,
    traj: &FlowTrajectory,
) -> Result<FlowDiagnostics, Error> {
    if traj.samples.len() < 2 {
        return Err(Error::InvalidFlow(
            "diagnostics need at least two samples".into(),
        ));
    }
    let brackets = FloatBrackets::from_algebra(alg);
    let n = alg.dim();

    // Frobenius-orthonormal basis of span(I) + Der(g), in floats
    let mut span: Vec<FloatMat> = vec![FloatMat::identity(n)];
    for d in alg.derivation_algebra().basis() {
        let mut m = FloatMat::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, d.at(r, c).to_f64().expect("derivation entry fits f64"));
            }
        }
        span.push(m);
    }
    let mut ortho: Vec<FloatMat> = Vec::new();
    for mut v in span {
        for u in &ortho {
            let p = v.frobenius_dot(u);
            v = v.sub(&u.scale(p));
        }
        let norm = v.frobenius_norm();
        if norm > 1e-10 {
            ortho.push(v.scale(1.0 / norm));
        }
    }

    let base = normalized_ratios(&traj.samples[0].ricci_eigenvalues);
    let mut drift = 0.0_f64;
    let mut residuals = Vec::with_capacity(traj.samples.len());
    for sample in &traj.samples {
        let ratios = normalized_ratios(&sample.ricci_eigenvalues);
        let d = ratios
            .iter()
            .zip(&base)
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        drift = drift.max(d);

        // Ricci operator in the original coordinates: G^{-1} R
        let l = sample.gram.cholesky()?;
        let linv = l.lower_triangular_inverse();
        let ginv = linv.transpose().matmul(&linv);
        let (ric_form, _) = ricci_at(&brackets, &sample.gram)?;
        let mut op = ginv.matmul(&ric_form);
        for u in &ortho {
            let p = op.frobenius_dot(u);
            op = op.sub(&u.scale(p));
        }
        residuals.push(op.frobenius_norm());
    }
    let max_res = residuals.iter().fold(0.0_f64, |m, x| m.max(*x));
    Ok(FlowDiagnostics {
        ratio_drift: drift,
        max_soliton_residual: max_res,
        per_sample_residual: residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{default_labels, InnerProduct, LieAlgebra, RawBracket};
    use crate::curvature::ricci_tensor;
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
    fn flow_field_of_abelian_vanishes() {
        let b = FloatBrackets::from_algebra(&LieAlgebra::abelian(3));
        let f = flow_field(&b, &FloatMat::identity(3), 2.0, 0.5).unwrap();
        assert!(f.max_abs() < 1e-15);
    }

    #[test]
    fn flow_field_matches_exact_ricci_at_identity() {
        for alg in [
            heisenberg3(),
            almost_abelian(&[1, 2]),
            almost_abelian(&[1, 1, 1]),
        ] {
            let n = alg.dim();
            let exact = ricci_tensor(&alg, &InnerProduct::identity(n))
                .unwrap()
                .operator;
            let b = FloatBrackets::from_algebra(&alg);
            let f = flow_field(&b, &FloatMat::identity(n), 2.0, 0.0).unwrap();
            for r in 0..n {
                for c in 0..n {
                    let want = -2.0 * exact.at(r, c).to_f64().unwrap();
                    assert!((f.at(r, c) - want).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn heisenberg_field_value() {
        let b = FloatBrackets::from_algebra(&heisenberg3());
        let f = flow_field(&b, &FloatMat::identity(3), 2.0, 0.0).unwrap();
        let want = FloatMat::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, -1.0],
        ]);
        assert!(f.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn yamabe_field_is_a_rescaling_direction() {
        let alg = almost_abelian(&[1, 2]);
        let b = FloatBrackets::from_algebra(&alg);
        let g = FloatMat::identity(3);
        let f = flow_field(&b, &g, 0.0, 1.0).unwrap();
        let (_, scal) = ricci_at(&b, &g).unwrap();
        assert!(f.max_abs_diff(&g.scale(-scal)) < 1e-12);
    }

    #[test]
    fn abelian_flow_is_stationary() {
        let alg = LieAlgebra::abelian(3);
        let problem = FlowProblem::new(
            &alg,
            FloatMat::identity(3),
            2.0,
            0.0,
            0.5,
            1e-2,
            Normalization::None,
        )
        .unwrap();
        let traj = integrate(&problem).unwrap();
        assert_eq!(traj.status, FlowStatus::Completed);
        let last = traj.samples.last().unwrap();
        assert!(last.gram.max_abs_diff(&FloatMat::identity(3)) < 1e-14);
        let diag = self_similarity_diagnostics(&alg, &traj).unwrap();
        assert_eq!(diag.ratio_drift, 0.0);
    }

    #[test]
    fn timestamps_strictly_increase_and_grams_stay_spd() {
        let alg = heisenberg3();
        let problem = FlowProblem::new(
            &alg,
            FloatMat::identity(3),
            2.0,
            0.0,
            0.3,
            1e-2,
            Normalization::None,
        )
        .unwrap();
        let traj = integrate(&problem).unwrap();
        for pair in traj.samples.windows(2) {
            assert!(pair[1].t > pair[0].t);
        }
        for s in &traj.samples {
            assert!(s.gram.cholesky().is_ok());
            assert!(s.gram.asymmetry() < 1e-12);
        }
    }

    #[test]
    fn normalized_flow_keeps_unit_determinant() {
        let alg = almost_abelian(&[1, 2]);
        let problem = FlowProblem::new(
            &alg,
            FloatMat::identity(3),
            2.0,
            0.0,
            0.5,
            1e-2,
            Normalization::UnitDeterminant,
        )
        .unwrap();
        let traj = integrate(&problem).unwrap();
        assert_eq!(traj.status, FlowStatus::Completed);
        for s in &traj.samples {
            assert!((s.gram.determinant() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn invalid_problems_are_rejected() {
        let alg = heisenberg3();
        assert!(FlowProblem::new(
            &alg,
            FloatMat::identity(3),
            2.0,
            0.0,
            1.0,
            0.0,
            Normalization::None
        )
        .is_err());
        let mut bad = FloatMat::identity(3);
        bad.set(0, 1, 1e-6);
        assert!(FlowProblem::new(&alg, bad, 2.0, 0.0, 1.0, 1e-3, Normalization::None).is_err());
    }

    #[test]
    fn degenerate_ricci_gives_zero_ratio_vector() {
        assert_eq!(normalized_ratios(&[0.0, 0.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn jacobi_eigenvalues_match_known_spectrum() {
        let m = FloatMat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let eig = m.symmetric_eigenvalues();
        assert!((eig[0] - 1.0).abs() < 1e-12);
        assert!((eig[1] - 3.0).abs() < 1e-12);
    }
}
