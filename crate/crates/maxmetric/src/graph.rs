//! Finite simple graphs, directions, the attached 2-step nilpotent Lie
//! algebras on V + E, graph automorphisms with their orthogonal lifts, and
//! edge-transitivity detection.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use crate::algebra::{LieAlgebra, RawBracket};
use crate::error::Error;
use crate::linalg::{rat_int, Rat, RatMat};
use crate::symmetry::{Provenance, SymmetryGroup};

/// A finite simple graph: labeled vertices and unordered edges, no loops or
/// multi-edges. Edges are normalized to (u, v) with u < v (vertex indices)
/// and sorted, so basis indices are stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(labels: Vec<String>, raw_edges: Vec<(usize, usize)>) -> Result<Self, Error> {
        let p = labels.len();
        {
            let mut sorted = labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != p {
                return Err(Error::InvalidGraph("vertex labels must be distinct".into()));
            }
        }
        let mut edges = BTreeSet::new();
        for (a, b) in raw_edges {
            if a >= p || b >= p {
                return Err(Error::InvalidGraph(format!(
                    "edge endpoint out of range: ({}, {})",
                    a, b
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at vertex {}", a)));
            }
            let e = (a.min(b), a.max(b));
            if !edges.insert(e) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    e.0, e.1
                )));
            }
        }
        Ok(SimpleGraph {
            labels,
            edges: edges.into_iter().collect(),
        })
    }

    /// Graph with vertices labeled "1".."p".
    pub fn on_numbered_vertices(p: usize, edges: Vec<(usize, usize)>) -> Result<Self, Error> {
        SimpleGraph::new((1..=p).map(|i| i.to_string()).collect(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let e = (u.min(v), u.max(v));
        self.edges.binary_search(&e).ok()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }

    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| *a == v || *b == v)
            .map(|(m, _)| m)
            .collect()
    }

    /// Vertex invariant used for search pruning: degree, sorted neighbor
    /// degrees and the sorted BFS distance profile.
    fn vertex_invariants(&self) -> Vec<(usize, Vec<usize>, Vec<usize>)> {
        let p = self.vertex_count();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); p];
        for (a, b) in &self.edges {
            adj[*a].push(*b);
            adj[*b].push(*a);
        }
        (0..p)
            .map(|v| {
                let mut nbr_deg: Vec<usize> = adj[v].iter().map(|&u| adj[u].len()).collect();
                nbr_deg.sort_unstable();
                // BFS distances, unreachable marked with p
                let mut dist = vec![usize::MAX; p];
                dist[v] = 0;
                let mut queue = std::collections::VecDeque::from([v]);
                while let Some(x) = queue.pop_front() {
                    for &y in &adj[x] {
                        if dist[y] == usize::MAX {
                            dist[y] = dist[x] + 1;
                            queue.push_back(y);
                        }
                    }
                }
                let mut profile: Vec<usize> =
                    dist.into_iter().map(|d| if d == usize::MAX { p } else { d }).collect();
                profile.sort_unstable();
                (adj[v].len(), nbr_deg, profile)
            })
            .collect()
    }
}

/// A simple graph together with a direction: a starting vertex `d(e) in e`
/// for each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    graph: SimpleGraph,
    direction: Vec<usize>,
}

impl DirectedGraph {
    pub fn new(graph: SimpleGraph, direction: Vec<usize>) -> Result<Self, Error> {
        if direction.len() != graph.edge_count() {
            return Err(Error::InvalidGraph(
                "direction must assign a start vertex to every edge".into(),
            ));
        }
        for (m, &(u, v)) in graph.edges().iter().enumerate() {
            if direction[m] != u && direction[m] != v {
                return Err(Error::InvalidGraph(format!(
                    "direction of edge {} must be one of its endpoints",
                    m
                )));
            }
        }
        Ok(DirectedGraph { graph, direction })
    }

    /// Canonical direction: every edge starts at its smaller endpoint.
    pub fn canonical(graph: SimpleGraph) -> Self {
        let direction = graph.edges().iter().map(|(u, _)| *u).collect();
        DirectedGraph { graph, direction }
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn start(&self, edge: usize) -> usize {
        self.direction[edge]
    }

    pub fn end(&self, edge: usize) -> usize {
        let (u, v) = self.graph.edges()[edge];
        if self.direction[edge] == u {
            v
        } else {
            u
        }
    }

    pub fn direction(&self) -> &[usize] {
        &self.direction
    }
}

/// The 2-step nilpotent Lie algebra on span(V + E) with `[d(e), d*(e)] = e`,
/// edges central and non-adjacent vertices commuting. Basis order: vertices
/// in input order, then edges in sorted order.
pub fn attach_algebra(dg: &DirectedGraph) -> Result<LieAlgebra, Error> {
    let g = dg.graph();
    let p = g.vertex_count();
    let mut labels = g.labels().to_vec();
    for (u, v) in g.edges() {
        labels.push(format!("{}-{}", g.labels()[*u], g.labels()[*v]));
    }
    let mut raw = Vec::new();
    for (m, (u, v)) in g.edges().iter().enumerate() {
        // stored as [v_u, v_v] with u < v; sign tracks the chosen start
        let sign = if dg.start(m) == *u { 1 } else { -1 };
        raw.push(RawBracket {
            i: *u,
            j: *v,
            terms: vec![(p + m, rat_int(sign))],
        });
    }
    LieAlgebra::new(labels, raw)
}

/// The vertex reflections `r_v`: negate one vertex coordinate and every
/// incident edge coordinate.
pub fn vertex_reflections(dg: &DirectedGraph) -> Result<SymmetryGroup, Error> {
    let alg = attach_algebra(dg)?;
    let g = dg.graph();
    let p = g.vertex_count();
    let n = alg.dim();
    let mut gens = Vec::with_capacity(p);
    for v in 0..p {
        let mut m = RatMat::identity(n);
        m.set(v, v, -Rat::one());
        for e in g.incident_edges(v) {
            m.set(p + e, p + e, -Rat::one());
        }
        gens.push((m, Provenance::VertexReflection));
    }
    SymmetryGroup::new(&alg, gens)
}

/// A graph self-isomorphism together with its induced edge permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphAutomorphism {
    pub vertex_perm: Vec<usize>,
    pub edge_perm: Vec<usize>,
}

impl GraphAutomorphism {
    pub fn identity(g: &SimpleGraph) -> Self {
        GraphAutomorphism {
            vertex_perm: (0..g.vertex_count()).collect(),
            edge_perm: (0..g.edge_count()).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_perm.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn compose(&self, other: &GraphAutomorphism) -> GraphAutomorphism {
        GraphAutomorphism {
            vertex_perm: other.vertex_perm.iter().map(|&v| self.vertex_perm[v]).collect(),
            edge_perm: other.edge_perm.iter().map(|&e| self.edge_perm[e]).collect(),
        }
    }
}

/// Enumeration limits for the automorphism search.
#[derive(Debug, Clone, Copy)]
pub struct GraphLimits {
    pub max_vertices: usize,
    pub max_automorphisms: usize,
}

impl Default for GraphLimits {
    fn default() -> Self {
        GraphLimits {
            max_vertices: 12,
            max_automorphisms: 1_000_000,
        }
    }
}

fn extend_map(
    g1: &SimpleGraph,
    g2: &SimpleGraph,
    inv1: &[(usize, Vec<usize>, Vec<usize>)],
    inv2: &[(usize, Vec<usize>, Vec<usize>)],
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<(), Error> {
    let v = map.len();
    if v == g1.vertex_count() {
        out.push(map.clone());
        if out.len() > cap {
            return Err(Error::LimitExceeded(format!(
                "more than {} graph maps found",
                cap
            )));
        }
        return Ok(());
    }
    'cand: for u in 0..g2.vertex_count() {
        if used[u] || inv1[v] != inv2[u] {
            continue;
        }
        for (w, &uw) in map.iter().enumerate() {
            if g1.adjacent(v, w) != g2.adjacent(u, uw) {
                continue 'cand;
            }
        }
        map.push(u);
        used[u] = true;
        extend_map(g1, g2, inv1, inv2, map, used, out, cap)?;
        map.pop();
        used[u] = false;
    }
    Ok(())
}

/// Complete automorphism list by backtracking with degree and distance
/// invariant pruning.
pub fn graph_automorphisms(
    g: &SimpleGraph,
    limits: &GraphLimits,
) -> Result<Vec<GraphAutomorphism>, Error> {
    if g.vertex_count() > limits.max_vertices {
        return Err(Error::LimitExceeded(format!(
            "graph has {} vertices; the automorphism search limit is {}",
            g.vertex_count(),
            limits.max_vertices
        )));
    }
    let inv = g.vertex_invariants();
    let mut out = Vec::new();
    let mut map = Vec::new();
    let mut used = vec![false; g.vertex_count()];
    extend_map(
        g,
        g,
        &inv,
        &inv,
        &mut map,
        &mut used,
        &mut out,
        limits.max_automorphisms,
    )?;
    Ok(out
        .into_iter()
        .map(|vertex_perm| {
            let edge_perm = induced_edge_perm(g, &vertex_perm);
            GraphAutomorphism {
                vertex_perm,
                edge_perm,
            }
        })
        .collect())
}

fn induced_edge_perm(g: &SimpleGraph, vertex_perm: &[usize]) -> Vec<usize> {
    g.edges()
        .iter()
        .map(|(u, v)| {
            g.edge_index(vertex_perm[*u], vertex_perm[*v])
                .expect("automorphism must map edges to edges")
        })
        .collect()
}

/// True iff the automorphism group acts with a single orbit on edges
/// (vacuously true for edgeless graphs).
pub fn edge_transitivity_check(g: &SimpleGraph, limits: &GraphLimits) -> Result<bool, Error> {
    if g.edge_count() == 0 {
        return Ok(true);
    }
    let auts = graph_automorphisms(g, limits)?;
    Ok(edge_orbits(g.edge_count(), &auts).len() == 1)
}

/// Orbits of the edge action as sorted lists of edge indices.
pub fn edge_orbits(q: usize, auts: &[GraphAutomorphism]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; q];
    let mut orbits = Vec::new();
    for start in 0..q {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(e) = stack.pop() {
            for a in auts {
                let img = a.edge_perm[e];
                if !seen[img] {
                    seen[img] = true;
                    orbit.push(img);
                    stack.push(img);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// Orthogonal lift of a graph automorphism to the attached algebra: permute
/// vertex coordinates, permute edge coordinates with a sign recording
/// whether the direction of the image edge is preserved.
pub fn lift_automorphism(dg: &DirectedGraph, sigma: &GraphAutomorphism) -> RatMat {
    let g = dg.graph();
    let p = g.vertex_count();
    let n = p + g.edge_count();
    let mut m = RatMat::zeros(n, n);
    for v in 0..p {
        m.set(sigma.vertex_perm[v], v, Rat::one());
    }
    for e in 0..g.edge_count() {
        let img = sigma.edge_perm[e];
        let sign = if sigma.vertex_perm[dg.start(e)] == dg.start(img) {
            Rat::one()
        } else {
            -Rat::one()
        };
        m.set(p + img, p + e, sign);
    }
    m
}

/// Greedy selection of automorphisms that realize the full vertex and edge
/// orbit partitions. The generated subgroup has the same orbits as the whole
/// automorphism group, which is what the certificate constraints consume.
pub fn select_orbit_generators(auts: &[GraphAutomorphism], p: usize, q: usize) -> Vec<usize> {
    let mut uf = UnionFind::new(p + q);
    let mut selected = Vec::new();
    for (idx, a) in auts.iter().enumerate() {
        if a.is_identity() {
            continue;
        }
        let mut merged = false;
        for v in 0..p {
            merged |= uf.union(v, a.vertex_perm[v]);
        }
        for e in 0..q {
            merged |= uf.union(p + e, p + a.edge_perm[e]);
        }
        if merged {
            selected.push(idx);
        }
    }
    selected
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra] = rb;
            true
        }
    }
}

/// Backtracking isomorphism test; the witness maps vertices of `g1` onto
/// vertices of `g2` and is re-verified on the edge sets before returning.
pub fn graph_isomorphic(
    g1: &SimpleGraph,
    g2: &SimpleGraph,
    limits: &GraphLimits,
) -> Result<Option<Vec<usize>>, Error> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    if g1.vertex_count() > limits.max_vertices {
        return Err(Error::LimitExceeded(format!(
            "graph has {} vertices; the isomorphism search limit is {}",
            g1.vertex_count(),
            limits.max_vertices
        )));
    }
    let inv1 = g1.vertex_invariants();
    let inv2 = g2.vertex_invariants();
    {
        let mut s1 = inv1.clone();
        let mut s2 = inv2.clone();
        s1.sort();
        s2.sort();
        if s1 != s2 {
            return Ok(None);
        }
    }
    let mut out = Vec::new();
    let mut map = Vec::new();
    let mut used = vec![false; g2.vertex_count()];
    extend_map(g1, g2, &inv1, &inv2, &mut map, &mut used, &mut out, 1)
        .or_else(|_| Ok::<(), Error>(()))?;
    match out.into_iter().next() {
        Some(witness) => {
            for (u, v) in g1.edges() {
                if !g2.adjacent(witness[*u], witness[*v]) {
                    return Err(Error::InvalidGraph(
                        "internal error: isomorphism witness failed verification".into(),
                    ));
                }
            }
            Ok(Some(witness))
        }
        None => Ok(None),
    }
}

/// All 2^q directions of a graph, canonical direction first.
pub fn all_directions(g: &SimpleGraph, max_edges: usize) -> Result<Vec<DirectedGraph>, Error> {
    let q = g.edge_count();
    if q > max_edges {
        return Err(Error::LimitExceeded(format!(
            "direction sweep over {} edges exceeds the limit of {}",
            q, max_edges
        )));
    }
    let mut out = Vec::with_capacity(1 << q);
    for bits in 0..(1u64 << q) {
        let direction = g
            .edges()
            .iter()
            .enumerate()
            .map(|(m, (u, v))| if bits >> m & 1 == 0 { *u } else { *v })
            .collect();
        out.push(DirectedGraph::new(g.clone(), direction)?);
    }
    Ok(out)
}

// -- builders -------------------------------------------------------------

pub fn complete_graph(n: usize) -> SimpleGraph {
    let edges = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    SimpleGraph::on_numbered_vertices(n, edges).expect("complete graph is simple")
}

pub fn cycle_graph(n: usize) -> SimpleGraph {
    assert!(n >= 3, "cycles need at least 3 vertices");
    let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimpleGraph::on_numbered_vertices(n, edges).expect("cycle is simple")
}

pub fn path_graph(n: usize) -> SimpleGraph {
    let edges = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    SimpleGraph::on_numbered_vertices(n, edges).expect("path is simple")
}

/// Star K_{1,m}: center is vertex 0.
pub fn star_graph(m: usize) -> SimpleGraph {
    let edges = (1..=m).map(|i| (0, i)).collect();
    SimpleGraph::on_numbered_vertices(m + 1, edges).expect("star is simple")
}

/// Star K_{1,m} plus extra isolated vertices.
pub fn star_plus_isolated(m: usize, isolated: usize) -> SimpleGraph {
    let edges = (1..=m).map(|i| (0, i)).collect();
    SimpleGraph::on_numbered_vertices(m + 1 + isolated, edges).expect("star is simple")
}

pub fn edgeless_graph(p: usize) -> SimpleGraph {
    SimpleGraph::on_numbered_vertices(p, Vec::new()).expect("edgeless graph is simple")
}

/// The Petersen graph: outer 5-cycle, inner pentagram, five spokes.
pub fn petersen_graph() -> SimpleGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    SimpleGraph::on_numbered_vertices(10, edges).expect("Petersen graph is simple")
}

// -- parsing --------------------------------------------------------------

/// Parses the text format: first line "p q", then q lines "u v". When every
/// endpoint token is an integer in 1..=p the vertices are "1".."p" (covering
/// isolated vertices); otherwise labels are taken in first-appearance order
/// and must number exactly p.
pub fn parse_graph_text(input: &str) -> Result<SimpleGraph, Error> {
    let mut tokens = input.split_whitespace();
    let p: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("missing vertex count".into()))?
        .parse()
        .map_err(|_| Error::Parse("vertex count must be an integer".into()))?;
    let q: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("missing edge count".into()))?
        .parse()
        .map_err(|_| Error::Parse("edge count must be an integer".into()))?;
    let mut pairs = Vec::with_capacity(q);
    for line in 0..q {
        let a = tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("missing endpoint on edge {}", line + 1)))?;
        let b = tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("missing endpoint on edge {}", line + 1)))?;
        pairs.push((a.to_string(), b.to_string()));
    }
    if tokens.next().is_some() {
        return Err(Error::Parse("trailing tokens after edge list".into()));
    }

    let all_numeric = pairs.iter().all(|(a, b)| {
        let ok = |t: &str| t.parse::<usize>().map(|v| v >= 1 && v <= p).unwrap_or(false);
        ok(a) && ok(b)
    });
    if all_numeric {
        let edges = pairs
            .iter()
            .map(|(a, b)| {
                (
                    a.parse::<usize>().unwrap() - 1,
                    b.parse::<usize>().unwrap() - 1,
                )
            })
            .collect();
        SimpleGraph::on_numbered_vertices(p, edges)
    } else {
        let mut order: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        for (a, b) in &pairs {
            for t in [a, b] {
                if !index.contains_key(t) {
                    index.insert(t.clone(), order.len());
                    order.push(t.clone());
                }
            }
        }
        if order.len() != p {
            return Err(Error::Parse(format!(
                "vertex count {} does not match the {} labels appearing in edges \
                 (isolated vertices need numeric labels 1..p)",
                p,
                order.len()
            )));
        }
        let edges = pairs.iter().map(|(a, b)| (index[a], index[b])).collect();
        SimpleGraph::new(order, edges)
    }
}
