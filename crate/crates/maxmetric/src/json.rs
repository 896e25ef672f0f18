//! Wire formats: the Lie algebra interchange JSON, the graph JSON, and
//! serialization of certificates and exact matrices. Rationals are always
//! printed as integer pairs or "p/q" strings, never floats.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::algebra::{LieAlgebra, RawBracket};
use crate::error::Error;
use crate::graph::{DirectedGraph, SimpleGraph};
use crate::linalg::{parse_rat, rat_to_string, Rat, RatMat};
use crate::symmetry::Certificate;

/// Interchange form: 1-based indices, i < j, rationals as num/den pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub k: usize,
    pub num: i64,
    pub den: i64,
}

impl AlgebraJson {
    pub fn parse(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra JSON: {e}")))
    }

    /// Raw 0-based bracket entries for validation; checks index ranges.
    pub fn raw_brackets(&self) -> Result<Vec<RawBracket>, Error> {
        if self.basis.len() != self.dim {
            return Err(Error::Parse(format!(
                "dim is {} but {} basis labels given",
                self.dim,
                self.basis.len()
            )));
        }
        let in_range = |idx: usize, what: &str| -> Result<usize, Error> {
            if idx == 0 || idx > self.dim {
                Err(Error::Parse(format!(
                    "{} index {} out of range 1..={}",
                    what, idx, self.dim
                )))
            } else {
                Ok(idx - 1)
            }
        };
        let mut out = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            let i = in_range(b.i, "bracket")?;
            let j = in_range(b.j, "bracket")?;
            let mut terms = Vec::with_capacity(b.terms.len());
            for t in &b.terms {
                let k = in_range(t.k, "term")?;
                if t.den == 0 {
                    return Err(Error::Parse("zero denominator".into()));
                }
                terms.push((k, crate::linalg::rat(t.num, t.den)));
            }
            out.push(RawBracket { i, j, terms });
        }
        Ok(out)
    }

    pub fn to_algebra(&self) -> Result<LieAlgebra, Error> {
        LieAlgebra::new(self.basis.clone(), self.raw_brackets()?)
    }

    pub fn from_algebra(alg: &LieAlgebra) -> Result<Self, Error> {
        let mut brackets = Vec::new();
        for ((i, j), terms) in alg.bracket_table() {
            let mut ts = Vec::with_capacity(terms.len());
            for (k, v) in terms {
                let num = v.numer().to_i64().ok_or_else(|| {
                    Error::Parse("structure constant numerator exceeds i64".into())
                })?;
                let den = v.denom().to_i64().ok_or_else(|| {
                    Error::Parse("structure constant denominator exceeds i64".into())
                })?;
                ts.push(TermJson {
                    k: k + 1,
                    num,
                    den,
                });
            }
            brackets.push(BracketJson {
                i: i + 1,
                j: j + 1,
                terms: ts,
            });
        }
        Ok(AlgebraJson {
            dim: alg.dim(),
            basis: alg.labels().to_vec(),
            brackets,
        })
    }
}

/// Graph JSON: explicit labels, edges as label pairs, optional direction
/// giving the start label of each edge.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<String>>,
}

impl GraphJson {
    pub fn parse(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph JSON: {e}")))
    }

    pub fn to_graph(&self) -> Result<SimpleGraph, Error> {
        let index = |label: &str| -> Result<usize, Error> {
            self.vertices
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::Parse(format!("unknown vertex label `{label}`")))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for (a, b) in &self.edges {
            edges.push((index(a)?, index(b)?));
        }
        SimpleGraph::new(self.vertices.clone(), edges)
    }

    /// Directed graph; falls back to the canonical direction when none is
    /// given. The direction entries follow the input edge order.
    pub fn to_directed(&self) -> Result<DirectedGraph, Error> {
        let graph = self.to_graph()?;
        match &self.direction {
            None => Ok(DirectedGraph::canonical(graph)),
            Some(starts) => {
                if starts.len() != self.edges.len() {
                    return Err(Error::Parse(
                        "direction must name a start for every edge".into(),
                    ));
                }
                // map input edge order to the sorted internal order
                let mut direction = vec![usize::MAX; graph.edge_count()];
                for ((a, b), start) in self.edges.iter().zip(starts) {
                    let ia = graph
                        .labels()
                        .iter()
                        .position(|l| l == a)
                        .expect("validated above");
                    let ib = graph.labels().iter().position(|l| l == b).expect("validated");
                    let is = graph
                        .labels()
                        .iter()
                        .position(|l| l == start)
                        .ok_or_else(|| Error::Parse(format!("unknown start label `{start}`")))?;
                    let m = graph
                        .edge_index(ia, ib)
                        .expect("edge exists by construction");
                    direction[m] = is;
                }
                DirectedGraph::new(graph, direction)
            }
        }
    }
}

/// Matrix of rationals as rows of "p/q" strings.
pub fn mat_to_strings(m: &RatMat) -> Vec<Vec<String>> {
    (0..m.n_rows())
        .map(|r| m.row(r).iter().map(rat_to_string).collect())
        .collect()
}

pub fn mat_from_strings(rows: &[Vec<String>]) -> Result<RatMat, Error> {
    let parsed: Result<Vec<Vec<Rat>>, Error> = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_rat(s)).collect())
        .collect();
    let parsed = parsed?;
    if parsed.is_empty() || parsed.iter().any(|r| r.len() != parsed[0].len()) {
        return Err(Error::Parse("matrix rows must be nonempty and equal".into()));
    }
    Ok(RatMat::from_rows(parsed))
}

/// Wire form of a certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub status: String,
    pub dim_normal: usize,
    pub dim_invariant_normal: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<String>>>,
    pub group: GroupSummaryJson,
    pub algebra_hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSummaryJson {
    pub generators: usize,
    pub provenance: Vec<String>,
}

impl CertificateJson {
    pub fn from_certificate(cert: &Certificate) -> Self {
        CertificateJson {
            status: cert.status.as_str().to_string(),
            dim_normal: cert.dim_normal,
            dim_invariant_normal: cert.dim_invariant_normal,
            witness: cert.witness.as_ref().map(|w| mat_to_strings(w.matrix())),
            group: GroupSummaryJson {
                generators: cert.generator_count,
                provenance: cert
                    .provenance_counts
                    .iter()
                    .map(|(tag, count)| format!("{}:{}", tag, count))
                    .collect(),
            },
            algebra_hash: cert.algebra_hash.clone(),
        }
    }
}
