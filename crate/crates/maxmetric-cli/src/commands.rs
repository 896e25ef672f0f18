//! Subcommand implementations. Each returns the process exit code.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use maxmetric::algebra::{validate_brackets, InnerProduct};
use maxmetric::curvature::{einstein_check, ricci_soliton_check, ricci_tensor, EinsteinResult};
use maxmetric::error::Error;
use maxmetric::flow::{
    integrate, self_similarity_diagnostics, FloatMat, FlowProblem, FlowStatus, Normalization,
};
use maxmetric::graph::{edge_transitivity_check, graph_automorphisms, graph_isomorphic};
use maxmetric::json::{mat_from_strings, mat_to_strings, AlgebraJson, CertificateJson};
use maxmetric::linalg::rat_to_string;
use maxmetric::pipeline::{certify, direction_independence_check, Limits};
use maxmetric::symmetry::{CertStatus, Provenance, SymmetryGroup};

use crate::input::{load_graph_file, load_path, read_file, LoadedInput};
use crate::report::{emit, exit_code_for, write_text, RunReport};

// -- validate ---------------------------------------------------------------

#[derive(Debug, Serialize)]
struct ValidationJson {
    ok: bool,
    violations: Vec<String>,
}

pub fn cmd_validate(path: &Path, out: Option<&Path>) -> Result<i32, Error> {
    let text = read_file(path)?;
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_default();

    let mut violations: Vec<String> = Vec::new();
    if path.extension().is_some_and(|e| e == "json")
        && serde_json::from_str::<serde_json::Value>(&text)
            .map_err(|e| Error::Parse(format!("{}: {}", name, e)))?
            .get("brackets")
            .is_some()
    {
        let wire = AlgebraJson::parse(&text)?;
        let raw = wire.raw_brackets()?;
        let report = validate_brackets(wire.dim, &raw);
        for (i, j, k) in &report.antisymmetry {
            violations.push(format!(
                "antisymmetry violated at ({}, {}, {})",
                i + 1,
                j + 1,
                k + 1
            ));
        }
        for (i, j, k) in &report.jacobi {
            violations.push(format!(
                "Jacobi violated at ({}, {}, {})",
                i + 1,
                j + 1,
                k + 1
            ));
        }
    } else {
        // graph input: structural invariants are the validation surface
        match load_path(path) {
            Ok(_) => {}
            Err(Error::InvalidGraph(msg)) => violations.push(msg),
            Err(Error::Validation(report)) => violations.push(report.to_string()),
            Err(other) => return Err(other),
        }
    }

    let ok = violations.is_empty();
    let report = RunReport::new("validate", &name, ValidationJson { ok, violations });
    emit(&report, out)?;
    Ok(if ok { 0 } else { 1 })
}

// -- certify ----------------------------------------------------------------

pub struct GroupFlags {
    pub no_lifts: bool,
    pub generators_file: Option<PathBuf>,
}

#[derive(serde::Deserialize)]
struct UserGenerators {
    generators: Vec<Vec<Vec<String>>>,
}

fn user_group(
    alg: &maxmetric::algebra::LieAlgebra,
    path: &Path,
) -> Result<SymmetryGroup, Error> {
    let text = read_file(path)?;
    let parsed: UserGenerators = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
    let gens = parsed
        .generators
        .iter()
        .map(|rows| Ok((mat_from_strings(rows)?, Provenance::User)))
        .collect::<Result<Vec<_>, Error>>()?;
    SymmetryGroup::new(alg, gens)
}

pub fn cmd_certify(
    input: &LoadedInput,
    flags: &GroupFlags,
    limits: &Limits,
    out: Option<&Path>,
) -> Result<i32, Error> {
    let started = Instant::now();
    let graph_ctx = if flags.no_lifts {
        None
    } else {
        input.graph.as_ref()
    };
    let extra = flags
        .generators_file
        .as_deref()
        .map(|p| user_group(&input.algebra, p))
        .transpose()?;
    let cert = certify(&input.algebra, graph_ctx, extra, limits)?;
    let status = cert.status;
    let report = RunReport::new("certify", &input.name, CertificateJson::from_certificate(&cert))
        .with_hash(cert.algebra_hash.clone())
        .with_wall_ms(started.elapsed().as_millis() as u64);
    emit(&report, out)?;
    Ok(match status {
        CertStatus::Maximal => 0,
        CertStatus::Inconclusive => 3,
    })
}

// -- ricci / soliton / transitivity ------------------------------------------

#[derive(Debug, Serialize)]
struct RicciJson {
    ric_operator: Vec<Vec<String>>,
    scal: String,
    einstein: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    einstein_lambda: Option<String>,
}

pub fn cmd_ricci(input: &LoadedInput, out: Option<&Path>) -> Result<i32, Error> {
    let started = Instant::now();
    let ip = InnerProduct::identity(input.algebra.dim());
    let data = ricci_tensor(&input.algebra, &ip)?;
    let einstein = einstein_check(&input.algebra, &ip)?;
    let (is_einstein, lambda) = match einstein {
        EinsteinResult::Einstein { lambda } => (true, Some(rat_to_string(&lambda))),
        EinsteinResult::NotEinstein => (false, None),
    };
    let result = RicciJson {
        ric_operator: mat_to_strings(&data.operator),
        scal: rat_to_string(&data.scal),
        einstein: is_einstein,
        einstein_lambda: lambda,
    };
    let report = RunReport::new("ricci", &input.name, result)
        .with_hash(input.algebra.fingerprint())
        .with_wall_ms(started.elapsed().as_millis() as u64);
    emit(&report, out)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct SolitonJson {
    exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivation: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_zero: Option<bool>,
}

pub fn cmd_soliton(input: &LoadedInput, out: Option<&Path>) -> Result<i32, Error> {
    let started = Instant::now();
    let ip = InnerProduct::identity(input.algebra.dim());
    let result = match ricci_soliton_check(&input.algebra, &ip)? {
        Some(sol) => SolitonJson {
            exists: true,
            c: Some(rat_to_string(&sol.c)),
            derivation: Some(mat_to_strings(&sol.derivation)),
            residual_zero: Some(sol.residual_zero),
        },
        None => SolitonJson {
            exists: false,
            c: None,
            derivation: None,
            residual_zero: None,
        },
    };
    let report = RunReport::new("soliton", &input.name, result)
        .with_hash(input.algebra.fingerprint())
        .with_wall_ms(started.elapsed().as_millis() as u64);
    emit(&report, out)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct TransitivityJson {
    transitive: bool,
    codimension: usize,
    tangent_dim: usize,
    unimodular: bool,
}

pub fn cmd_transitivity(input: &LoadedInput, out: Option<&Path>) -> Result<i32, Error> {
    let started = Instant::now();
    let rep = input.algebra.orbit_transitivity_check();
    let result = TransitivityJson {
        transitive: rep.transitive,
        codimension: rep.codimension,
        tangent_dim: rep.tangent_dim,
        unimodular: input.algebra.is_unimodular(),
    };
    let report = RunReport::new("transitivity", &input.name, result)
        .with_hash(input.algebra.fingerprint())
        .with_wall_ms(started.elapsed().as_millis() as u64);
    emit(&report, out)?;
    Ok(0)
}

// -- flow ---------------------------------------------------------------------

pub struct FlowArgs {
    pub a: f64,
    pub b: f64,
    pub t_end: f64,
    pub step: f64,
    pub normalize: String,
    pub tol: f64,
}

#[derive(Debug, Serialize)]
struct FlowJson {
    status: String,
    samples: usize,
    t_final: f64,
    ratio_drift: f64,
    max_soliton_residual: f64,
    within_tolerance: bool,
}

fn trajectory_csv(traj: &maxmetric::flow::FlowTrajectory, n: usize) -> String {
    let mut csv = String::from("t");
    for r in 0..n {
        for c in 0..n {
            csv.push_str(&format!(",g_{}_{}", r, c));
        }
    }
    for i in 1..=n {
        csv.push_str(&format!(",eig_{}", i));
    }
    csv.push_str(",scal\n");
    for s in &traj.samples {
        csv.push_str(&format!("{}", s.t));
        for v in s.gram.entries() {
            csv.push_str(&format!(",{}", v));
        }
        for e in &s.ricci_eigenvalues {
            csv.push_str(&format!(",{}", e));
        }
        csv.push_str(&format!(",{}\n", s.scal));
    }
    csv
}

pub fn cmd_flow(
    input: &LoadedInput,
    args: &FlowArgs,
    out: Option<&Path>,
) -> Result<i32, Error> {
    let n = input.algebra.dim();
    let problem = FlowProblem::new(
        &input.algebra,
        FloatMat::identity(n),
        args.a,
        args.b,
        args.t_end,
        args.step,
        Normalization::parse(&args.normalize)?,
    )?;
    let traj = integrate(&problem)?;
    let diag = self_similarity_diagnostics(&input.algebra, &traj)?;
    if let Some(path) = out {
        write_text(&trajectory_csv(&traj, n), Some(path))?;
    }
    let status = match traj.status {
        FlowStatus::Completed => "completed",
        FlowStatus::TruncatedNotPositiveDefinite => "truncated_not_positive_definite",
        FlowStatus::TruncatedBlowUp => "truncated_blow_up",
    };
    let result = FlowJson {
        status: status.to_string(),
        samples: traj.samples.len(),
        t_final: traj.samples.last().map(|s| s.t).unwrap_or(0.0),
        ratio_drift: diag.ratio_drift,
        max_soliton_residual: diag.max_soliton_residual,
        within_tolerance: diag.ratio_drift < args.tol,
    };
    let report = RunReport::new("flow", &input.name, result)
        .with_hash(input.algebra.fingerprint());
    emit(&report, None)?;
    Ok(0)
}

// -- graph -------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct AutsJson {
    count: usize,
    vertex_permutations: Vec<Vec<String>>,
}

pub fn cmd_graph_auts(path: &Path, limits: &Limits, out: Option<&Path>) -> Result<i32, Error> {
    let g = load_graph_file(path)?;
    let auts = graph_automorphisms(&g, &limits.graph)?;
    let result = AutsJson {
        count: auts.len(),
        vertex_permutations: auts
            .iter()
            .map(|a| {
                a.vertex_perm
                    .iter()
                    .map(|&v| g.labels()[v].clone())
                    .collect()
            })
            .collect(),
    };
    let report = RunReport::new("graph auts", &path.display().to_string(), result);
    emit(&report, out)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct EdgeTransitiveJson {
    edge_transitive: bool,
    edges: usize,
}

pub fn cmd_graph_edge_transitive(
    path: &Path,
    limits: &Limits,
    out: Option<&Path>,
) -> Result<i32, Error> {
    let g = load_graph_file(path)?;
    let result = EdgeTransitiveJson {
        edge_transitive: edge_transitivity_check(&g, &limits.graph)?,
        edges: g.edge_count(),
    };
    let report = RunReport::new("graph edge-transitive", &path.display().to_string(), result);
    emit(&report, out)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct IsomorphicJson {
    isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<(String, String)>>,
}

pub fn cmd_graph_isomorphic(
    path1: &Path,
    path2: &Path,
    limits: &Limits,
    out: Option<&Path>,
) -> Result<i32, Error> {
    let g1 = load_graph_file(path1)?;
    let g2 = load_graph_file(path2)?;
    let witness = graph_isomorphic(&g1, &g2, &limits.graph)?;
    let result = IsomorphicJson {
        isomorphic: witness.is_some(),
        witness: witness.map(|map| {
            map.iter()
                .enumerate()
                .map(|(u, &v)| (g1.labels()[u].clone(), g2.labels()[v].clone()))
                .collect()
        }),
    };
    let input = format!("{} vs {}", path1.display(), path2.display());
    let report = RunReport::new("graph isomorphic", &input, result);
    emit(&report, out)?;
    Ok(0)
}

// -- directions ----------------------------------------------------------------

#[derive(Debug, Serialize)]
struct DirectionsJson {
    directions_checked: usize,
    consistent: bool,
    certificates_compared: bool,
    mismatches: Vec<String>,
}

pub fn cmd_directions(
    path: &Path,
    with_certificates: bool,
    limits: &Limits,
    out: Option<&Path>,
) -> Result<i32, Error> {
    let g = load_graph_file(path)?;
    let rep = direction_independence_check(&g, with_certificates, limits)?;
    let consistent = rep.consistent;
    let result = DirectionsJson {
        directions_checked: rep.directions_checked,
        consistent,
        certificates_compared: with_certificates,
        mismatches: rep.mismatches,
    };
    let report = RunReport::new("directions", &path.display().to_string(), result);
    emit(&report, out)?;
    Ok(if consistent { 0 } else { 1 })
}

// -- batch ----------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct BatchRow {
    pub name: String,
    pub dim: Option<usize>,
    pub status: String,
    pub dim_normal: Option<usize>,
    pub edge_transitive: Option<bool>,
    pub soliton: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn batch_item(path: &Path, limits: &Limits) -> BatchRow {
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| path.display().to_string());
    let run = || -> Result<BatchRow, Error> {
        let input = load_path(path)?;
        let alg = &input.algebra;
        let cert = certify(alg, input.graph.as_ref(), None, limits)?;
        let soliton = ricci_soliton_check(alg, &InnerProduct::identity(alg.dim()))?
            .map(|s| s.residual_zero);
        let edge_transitive = input
            .graph
            .as_ref()
            .map(|dg| edge_transitivity_check(dg.graph(), &limits.graph))
            .transpose()?;
        Ok(BatchRow {
            name: name.clone(),
            dim: Some(alg.dim()),
            status: cert.status.as_str().to_string(),
            dim_normal: Some(cert.dim_normal),
            edge_transitive,
            soliton,
            error: None,
        })
    };
    run().unwrap_or_else(|err| BatchRow {
        name,
        dim: None,
        status: "ERROR".into(),
        dim_normal: None,
        edge_transitive: None,
        soliton: None,
        error: Some(err.to_string()),
    })
}

fn batch_csv(rows: &[BatchRow]) -> String {
    let mut csv = String::from("name,dim,status,dim_normal,edge_transitive,soliton\n");
    let opt =
        |v: &Option<bool>| v.map(|b| b.to_string()).unwrap_or_default();
    for r in rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.name,
            r.dim.map(|d| d.to_string()).unwrap_or_default(),
            r.status,
            r.dim_normal.map(|d| d.to_string()).unwrap_or_default(),
            opt(&r.edge_transitive),
            opt(&r.soliton),
        ));
    }
    csv
}

pub fn cmd_batch(
    dir: &Path,
    jobs: usize,
    format: &str,
    report_dir: Option<&Path>,
    limits: &Limits,
    out: Option<&Path>,
) -> Result<i32, Error> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Parse(format!("cannot read {}: {}", dir.display(), e)))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .is_some_and(|ext| ext == "json" || ext == "txt")
        })
        .collect();
    files.sort();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
    let rows: Vec<BatchRow> = pool.install(|| {
        use rayon::prelude::*;
        files.par_iter().map(|p| batch_item(p, limits)).collect()
    });

    if let Some(dir) = report_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Parse(format!("cannot create {}: {}", dir.display(), e)))?;
        for row in &rows {
            let report = RunReport::new("batch-item", &row.name, row.clone());
            let stem = row.name.replace('.', "_");
            emit(&report, Some(&dir.join(format!("{}.report.json", stem))))?;
        }
    }

    match format {
        "csv" => write_text(&batch_csv(&rows), out)?,
        "json" => emit(&RunReport::new("batch", &dir.display().to_string(), rows), out)?,
        other => return Err(Error::Parse(format!("unknown format `{other}`"))),
    }
    Ok(0)
}

pub fn error_exit(err: &Error) -> i32 {
    eprintln!("error: {err}");
    exit_code_for(err)
}
