//! Input loading: Lie algebra JSON, graph JSON, graph text files, and the
//! built-in family selectors.

use std::path::Path;

use maxmetric::algebra::LieAlgebra;
use maxmetric::error::Error;
use maxmetric::families::{build, FamilySpec};
use maxmetric::graph::{parse_graph_text, DirectedGraph, SimpleGraph};
use maxmetric::json::{AlgebraJson, GraphJson};
use maxmetric::linalg::parse_rat;
use maxmetric::Rat;

/// A loaded certification subject: always an algebra, with the graph kept
/// alongside when the input was a graph (for reflections and lifts).
pub struct LoadedInput {
    pub name: String,
    pub algebra: LieAlgebra,
    pub graph: Option<DirectedGraph>,
}

pub fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))
}

fn input_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| path.display().to_string())
}

/// Classifies a file as algebra JSON, graph JSON or graph text, and loads it.
pub fn load_path(path: &Path) -> Result<LoadedInput, Error> {
    let text = read_file(path)?;
    let name = input_name(path);
    if path.extension().is_some_and(|e| e == "json") {
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {}", name, e)))?;
        if value.get("brackets").is_some() {
            let alg = AlgebraJson::parse(&text)?.to_algebra()?;
            Ok(LoadedInput {
                name,
                algebra: alg,
                graph: None,
            })
        } else if value.get("edges").is_some() {
            let dg = GraphJson::parse(&text)?.to_directed()?;
            let algebra = maxmetric::graph::attach_algebra(&dg)?;
            Ok(LoadedInput {
                name,
                algebra,
                graph: Some(dg),
            })
        } else {
            Err(Error::Parse(format!(
                "{}: JSON has neither `brackets` nor `edges`",
                name
            )))
        }
    } else {
        let g = parse_graph_text(&text)?;
        let dg = DirectedGraph::canonical(g);
        let algebra = maxmetric::graph::attach_algebra(&dg)?;
        Ok(LoadedInput {
            name,
            algebra,
            graph: Some(dg),
        })
    }
}

pub fn load_graph_file(path: &Path) -> Result<SimpleGraph, Error> {
    let text = read_file(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        GraphJson::parse(&text)?.to_graph()
    } else {
        parse_graph_text(&text)
    }
}

pub fn parse_weights(spec: &str) -> Result<Vec<Rat>, Error> {
    spec.split(',')
        .map(|tok| parse_rat(tok))
        .collect::<Result<Vec<_>, _>>()
}

/// Builds a family from the CLI selector; `graph` families take the graph
/// from --graph.
pub fn load_family(
    name: &str,
    w: Option<&str>,
    n: Option<usize>,
    graph_path: Option<&Path>,
) -> Result<LoadedInput, Error> {
    let need_n = || {
        n.ok_or_else(|| Error::InvalidFamily(format!("family `{}` requires --n", name)))
    };
    let spec = match name {
        "abelian" => FamilySpec::Abelian { n: need_n()? },
        "heisenberg-sum" => FamilySpec::HeisenbergSum { n: need_n()? },
        "almost-abelian" => {
            let w = w.ok_or_else(|| {
                Error::InvalidFamily("family `almost-abelian` requires --w".into())
            })?;
            FamilySpec::AlmostAbelian {
                w: parse_weights(w)?,
            }
        }
        "borel-hyperbolic" => FamilySpec::BorelHyperbolic { n: need_n()? },
        "motion-group-r2" => FamilySpec::MotionGroupR2,
        "complex-hyperbolic" => FamilySpec::ComplexHyperbolic { n: need_n()? },
        "graph" => {
            let path = graph_path.ok_or_else(|| {
                Error::InvalidFamily("family `graph` requires --graph <file>".into())
            })?;
            FamilySpec::Graph {
                graph: load_graph_file(path)?,
            }
        }
        other => {
            return Err(Error::InvalidFamily(format!(
                "unknown family `{}` (expected abelian, heisenberg-sum, almost-abelian, \
                 borel-hyperbolic, motion-group-r2, complex-hyperbolic, graph)",
                other
            )))
        }
    };
    let built = build(&spec)?;
    let graph = match &spec {
        FamilySpec::Graph { graph } => Some(DirectedGraph::canonical(graph.clone())),
        _ => None,
    };
    Ok(LoadedInput {
        name: built.metadata.name.clone(),
        algebra: built.algebra,
        graph,
    })
}
