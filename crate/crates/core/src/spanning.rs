//! Spanning-tree counting for graphs with a hub vertex.
//!
//! By the matrix-tree theorem `τ(G) = det L(i*)`, the Laplacian with the row
//! and column of any vertex removed. When `i*` is adjacent to every other
//! vertex the reduced Laplacian has its spectrum in `[1, 2Δ_max − 1]`, which is
//! exactly the input [`logdet_general`] needs. Degree statistics `Δ_max` and
//! `Δ_avg` are taken over `V ∖ {i*}` with degrees measured in `G`.
//!
//! Graph text format: a header line `p <nvertices> <nedges>` followed by one
//! `e <u> <v>` line per edge, 0-indexed. Blank lines and lines starting with
//! `c`, `#` or `%` are ignored.

use std::collections::HashSet;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::logdet::{
    logdet_general, theorem2_params, DenseCholesky, EstimatorParams, LogDetEstimate, SpectrumBounds,
};
use crate::sparsemat::{SparseMatrix, TripletBuffer};

/// Vertex limit for exhaustive enumeration.
pub const ENUMERATION_LIMIT: usize = 10;
/// Vertex limit for the dense determinant route.
pub const DETERMINANT_LIMIT: usize = 2000;

/// Undirected simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    nvertices: usize,
    /// Each edge stored once as `(u, v)` with `u < v`, sorted.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(nvertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (u, v) in edges {
            if u >= nvertices || v >= nvertices {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{nvertices}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::invalid(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            out.push(e);
        }
        out.sort_unstable();
        Ok(Self {
            nvertices,
            edges: out,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    /// `K_{1,leaves}` with the centre at vertex 0.
    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star is simple")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
    }

    pub fn nvertices(&self) -> usize {
        self.nvertices
    }

    pub fn nedges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nvertices];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn is_connected(&self) -> bool {
        if self.nvertices <= 1 {
            return true;
        }
        let mut uf = UnionFind::new(self.nvertices);
        let mut components = self.nvertices;
        for &(u, v) in &self.edges {
            if uf.union(u, v) {
                components -= 1;
            }
        }
        components == 1
    }

    /// Full Laplacian `D − A`.
    pub fn laplacian(&self) -> SparseMatrix {
        let n = self.nvertices;
        let mut t = TripletBuffer::with_capacity(n, n, n + 2 * self.edges.len());
        for (i, d) in self.degrees().into_iter().enumerate() {
            t.push(i, i, d as f64).expect("in range");
        }
        for &(u, v) in &self.edges {
            t.push(u, v, -1.0).expect("in range");
            t.push(v, u, -1.0).expect("in range");
        }
        t.into_matrix()
    }
}

pub fn parse_graph<R: BufRead>(reader: R, origin: &Path) -> Result<Graph> {
    let perr = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|source| Error::Io {
            path: origin.to_path_buf(),
            source,
        })?;
        let t = line.trim();
        if t.is_empty() || t.starts_with(['c', '#', '%']) {
            continue;
        }
        let mut it = t.split_whitespace();
        let tag = it.next().unwrap_or_default();
        let nums: Vec<&str> = it.collect();
        let parse2 = |what: &str| -> Result<(usize, usize)> {
            if nums.len() != 2 {
                return Err(perr(lineno, format!("expected `{what} <a> <b>`")));
            }
            let a = nums[0]
                .parse::<usize>()
                .map_err(|e| perr(lineno, format!("bad integer {:?}: {e}", nums[0])))?;
            let b = nums[1]
                .parse::<usize>()
                .map_err(|e| perr(lineno, format!("bad integer {:?}: {e}", nums[1])))?;
            Ok((a, b))
        };
        match (tag, header) {
            ("p", None) => header = Some(parse2("p")?),
            ("p", Some(_)) => return Err(perr(lineno, "duplicate `p` line".into())),
            ("e", None) => return Err(perr(lineno, "edge before `p` line".into())),
            ("e", Some((n, _))) => {
                let (u, v) = parse2("e")?;
                if u >= n || v >= n {
                    return Err(perr(lineno, format!("vertex out of range 0..{n}")));
                }
                if u == v {
                    return Err(perr(lineno, format!("self-loop at vertex {u}")));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(perr(lineno, format!("duplicate edge ({u}, {v})")));
                }
                edges.push((u, v));
            }
            _ => return Err(perr(lineno, format!("unknown line tag {tag:?}"))),
        }
    }
    let (n, m) = header.ok_or_else(|| perr(1, "missing `p <nvertices> <nedges>` line".into()))?;
    if edges.len() != m {
        return Err(perr(
            0,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::new(n, edges)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let f = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_graph(std::io::BufReader::new(f), path)
}

/// Lowest-index vertex adjacent to every other vertex.
pub fn find_hub(g: &Graph) -> Result<usize> {
    let n = g.nvertices();
    if n == 0 {
        return Err(Error::precondition("empty graph has no hub"));
    }
    g.degrees()
        .iter()
        .position(|&d| d == n - 1)
        .ok_or_else(|| Error::precondition("graph has no vertex adjacent to all others"))
}

/// Laplacian with the row and column of `hub` deleted.
pub fn reduced_laplacian(g: &Graph, hub: usize) -> Result<SparseMatrix> {
    let n = g.nvertices();
    if hub >= n {
        return Err(Error::invalid(format!("hub {hub} outside 0..{n}")));
    }
    let idx = |v: usize| if v < hub { v } else { v - 1 };
    let mut t = TripletBuffer::with_capacity(n - 1, n - 1, n + 2 * g.nedges());
    for (v, d) in g.degrees().into_iter().enumerate() {
        if v != hub {
            t.push(idx(v), idx(v), d as f64)?;
        }
    }
    for &(u, v) in g.edges() {
        if u != hub && v != hub {
            t.push(idx(u), idx(v), -1.0)?;
            t.push(idx(v), idx(u), -1.0)?;
        }
    }
    Ok(t.into_matrix())
}

/// Maximum and average degree over `V ∖ {hub}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeStats {
    pub max: usize,
    pub avg: f64,
}

pub fn degree_stats(g: &Graph, hub: usize) -> Result<DegreeStats> {
    if hub >= g.nvertices() || g.nvertices() < 2 {
        return Err(Error::invalid(
            "degree statistics need a hub and another vertex",
        ));
    }
    let deg = g.degrees();
    let others: Vec<usize> = deg
        .iter()
        .enumerate()
        .filter(|&(v, _)| v != hub)
        .map(|(_, &d)| d)
        .collect();
    Ok(DegreeStats {
        max: *others.iter().max().expect("non-empty"),
        avg: others.iter().sum::<usize>() as f64 / others.len() as f64,
    })
}

/// Singular-value interval `[1, 2Δ_max − 1]` of the reduced Laplacian.
pub fn reduced_laplacian_bounds(stats: &DegreeStats) -> Result<SpectrumBounds> {
    SpectrumBounds::new(1.0, (2 * stats.max).saturating_sub(1).max(1) as f64)
}

/// Multiplicative-guarantee parameters: [`theorem2_params`] at
/// `ε' = ε(Δ_avg − 1)/4` and `κ = 2Δ_max − 1`. Requires `Δ_avg > 1` and
/// `ε < 2/(Δ_avg − 1)`.
pub fn corollary3_params(eps: f64, zeta: f64, stats: &DegreeStats) -> Result<EstimatorParams> {
    if !(stats.avg > 1.0) {
        return Err(Error::precondition(format!(
            "average non-hub degree must exceed 1, got {}",
            stats.avg
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("eps = {eps} must be positive")));
    }
    let limit = 2.0 / (stats.avg - 1.0);
    if eps >= limit {
        return Err(Error::precondition(format!(
            "eps = {eps} must be below 2/(avg degree - 1) = {limit}"
        )));
    }
    let kappa = (2 * stats.max - 1) as f64;
    theorem2_params(eps * (stats.avg - 1.0) / 4.0, kappa, zeta)
}

/// Result of [`count_spanning_trees`].
#[derive(Clone, Debug, PartialEq)]
pub struct TreeCountEstimate {
    pub log_tau: f64,
    pub hub: usize,
    pub params: EstimatorParams,
    pub stats: DegreeStats,
    pub estimate: LogDetEstimate,
}

/// Estimates `log τ(G)` with multiplicative error `ε` at confidence `1 − ζ`.
pub fn count_spanning_trees(
    g: &Graph,
    eps: f64,
    zeta: f64,
    seed: u64,
) -> Result<TreeCountEstimate> {
    let hub = find_hub(g)?;
    let stats = degree_stats(g, hub)?;
    let params = corollary3_params(eps, zeta, &stats)?.with_seed(seed);
    count_spanning_trees_with(g, hub, &params)
}

/// Runs the estimator on `L(hub)` with caller-chosen parameters.
pub fn count_spanning_trees_with(
    g: &Graph,
    hub: usize,
    params: &EstimatorParams,
) -> Result<TreeCountEstimate> {
    let stats = degree_stats(g, hub)?;
    if g.degrees()[hub] != g.nvertices() - 1 {
        return Err(Error::precondition(format!("vertex {hub} is not a hub")));
    }
    let l = reduced_laplacian(g, hub)?;
    let bounds = reduced_laplacian_bounds(&stats)?;
    let estimate = logdet_general(&l, &bounds, params)?;
    Ok(TreeCountEstimate {
        log_tau: estimate.gamma,
        hub,
        params: *params,
        stats,
        estimate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    Enumeration,
    Determinant,
}

/// Exact spanning-tree count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactTreeCount {
    /// `None` when the determinant route cannot resolve an integer (τ > 2⁵³).
    pub tau: Option<u128>,
    pub log_tau: f64,
    /// `|det − round(det)|` for the determinant route, 0 for enumeration.
    pub residual: f64,
    pub method: CountMethod,
}

/// Union-find with undo, for backtracking.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<Option<(usize, usize)>>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.history.push(None);
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.history.push(Some((ra, rb)));
        true
    }

    fn undo(&mut self) {
        if let Some(Some((ra, rb))) = self.history.pop() {
            self.parent[rb] = rb;
            self.size[ra] -= self.size[rb];
        }
    }
}

/// Counts acyclic `(n − 1)`-edge subsets by backtracking.
pub fn count_by_enumeration(g: &Graph) -> Result<u128> {
    let n = g.nvertices();
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "spanning-tree enumeration",
            size: n,
            limit: ENUMERATION_LIMIT,
        });
    }
    if n <= 1 {
        return Ok(1);
    }
    fn go(edges: &[(usize, usize)], i: usize, need: usize, uf: &mut UnionFind) -> u128 {
        if need == 0 {
            return 1;
        }
        if edges.len() - i < need {
            return 0;
        }
        let (u, v) = edges[i];
        let mut total = 0;
        if uf.union(u, v) {
            total += go(edges, i + 1, need - 1, uf);
        }
        uf.undo();
        total + go(edges, i + 1, need, uf)
    }
    let mut uf = UnionFind::new(n);
    Ok(go(g.edges(), 0, n - 1, &mut uf))
}

/// Dense Cholesky determinant of `L(0)`, rounded to the nearest integer.
pub fn count_by_determinant(g: &Graph) -> Result<ExactTreeCount> {
    let n = g.nvertices();
    if n > DETERMINANT_LIMIT {
        return Err(Error::TooLarge {
            what: "determinant spanning-tree count",
            size: n,
            limit: DETERMINANT_LIMIT,
        });
    }
    if n <= 1 {
        return Ok(ExactTreeCount {
            tau: Some(1),
            log_tau: 0.0,
            residual: 0.0,
            method: CountMethod::Determinant,
        });
    }
    if !g.is_connected() {
        return Ok(ExactTreeCount {
            tau: Some(0),
            log_tau: f64::NEG_INFINITY,
            residual: 0.0,
            method: CountMethod::Determinant,
        });
    }
    let l = reduced_laplacian(g, 0)?;
    let chol = DenseCholesky::factor(n - 1, l.to_dense())?;
    let log_tau = chol.logdet();
    let (tau, residual) = if log_tau < 53.0 * std::f64::consts::LN_2 {
        let det = log_tau.exp();
        let r = det.round();
        (Some(r as u128), (det - r).abs())
    } else {
        (None, f64::NAN)
    };
    Ok(ExactTreeCount {
        tau,
        log_tau,
        residual,
        method: CountMethod::Determinant,
    })
}

/// Enumeration up to [`ENUMERATION_LIMIT`] vertices, determinant beyond.
pub fn count_exact(g: &Graph) -> Result<ExactTreeCount> {
    if g.nvertices() <= ENUMERATION_LIMIT {
        let tau = count_by_enumeration(g)?;
        return Ok(ExactTreeCount {
            tau: Some(tau),
            log_tau: (tau as f64).ln(),
            residual: 0.0,
            method: CountMethod::Enumeration,
        });
    }
    count_by_determinant(g)
}

/// The degree-based lower bound `log 2^{(|V|−1)(Δ_avg−1)/2}` on `log τ`.
/// It does not hold for every hub graph: complete graphs from `K_7` upward
/// violate it.
pub fn degree_log_lower_bound(g: &Graph, hub: usize) -> Result<f64> {
    let stats = degree_stats(g, hub)?;
    Ok((g.nvertices() - 1) as f64 * (stats.avg - 1.0) / 2.0 * std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hub_examples() {
        assert_eq!(find_hub(&Graph::star(5)).unwrap(), 0);
        let star = Graph::new(6, (0..6).filter(|&v| v != 3).map(|v| (3, v))).unwrap();
        assert_eq!(find_hub(&star).unwrap(), 3);
        assert_eq!(find_hub(&Graph::complete(4)).unwrap(), 0);
        assert!(matches!(
            find_hub(&Graph::path(4)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn reduced_laplacian_examples() {
        let l = reduced_laplacian(&Graph::complete(3), 0).unwrap();
        assert_eq!(l.to_dense(), vec![2.0, -1.0, -1.0, 2.0]);
        let l = reduced_laplacian(&Graph::star(3), 0).unwrap();
        assert_eq!(l, SparseMatrix::identity(3));
        let full = Graph::complete(5).laplacian();
        let sums = full.matvec(&[1.0; 5]).unwrap();
        assert!(sums.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn exact_examples() {
        assert_eq!(count_exact(&Graph::complete(3)).unwrap().tau, Some(3));
        assert_eq!(count_exact(&Graph::complete(4)).unwrap().tau, Some(16));
        let disc = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(count_exact(&disc).unwrap().tau, Some(0));
        assert_eq!(count_by_determinant(&disc).unwrap().tau, Some(0));
        let k6 = count_by_determinant(&Graph::complete(6)).unwrap();
        assert_eq!(k6.tau, Some(1296));
        assert!(k6.residual < 1e-6);
        assert!(count_by_enumeration(&Graph::complete(11)).is_err());
    }

    #[test]
    fn cayley_formula() {
        for n in 2..=8usize {
            let expect = (n as u128).pow(n as u32 - 2);
            assert_eq!(count_by_enumeration(&Graph::complete(n)).unwrap(), expect);
            assert_eq!(
                count_by_determinant(&Graph::complete(n)).unwrap().tau,
                Some(expect)
            );
        }
    }

    #[test]
    fn star_estimate_is_zero() {
        // L(hub) = I, so every sample is exact
        let est =
            count_spanning_trees_with(&Graph::star(6), 0, &EstimatorParams::new(5, 10, 1).unwrap())
                .unwrap();
        assert!(est.log_tau.abs() < 1e-9, "{}", est.log_tau);
    }

    #[test]
    fn corollary3_params_preconditions() {
        let stats = degree_stats(&Graph::star(4), 0).unwrap();
        assert!(matches!(
            corollary3_params(0.3, 0.2, &stats),
            Err(Error::Precondition(_))
        ));
        let k8 = degree_stats(&Graph::complete(8), 0).unwrap();
        assert_eq!(k8.max, 7);
        assert_eq!(k8.avg, 7.0);
        assert!(corollary3_params(0.3, 0.2, &k8).is_ok());
        assert!(corollary3_params(0.34, 0.2, &k8).is_err());
    }

    #[test]
    fn degree_bound_fails_on_large_cliques() {
        // K_6: 1296 ≥ 2^12.5; K_7: 16807 < 2^15
        let k6 = Graph::complete(6);
        assert!((1296f64).ln() >= degree_log_lower_bound(&k6, 0).unwrap());
        let k7 = Graph::complete(7);
        assert!((16807f64).ln() < degree_log_lower_bound(&k7, 0).unwrap());
    }

    #[test]
    fn parse_roundtrip() {
        let text = "c K3\np 3 3\ne 0 1\ne 1 2\n\ne 0 2\n";
        let g = parse_graph(text.as_bytes(), Path::new("k3.graph")).unwrap();
        assert_eq!(g, Graph::complete(3));
        let bad = parse_graph("p 3 1\ne 0 5\n".as_bytes(), Path::new("x"));
        assert!(matches!(bad, Err(Error::Parse { line: 2, .. })));
        let dup = parse_graph("p 3 2\ne 0 1\ne 1 0\n".as_bytes(), Path::new("x"));
        assert!(matches!(dup, Err(Error::Parse { line: 3, .. })));
        let count = parse_graph("p 3 2\ne 0 1\n".as_bytes(), Path::new("x"));
        assert!(matches!(count, Err(Error::Parse { .. })));
        assert!(parse_graph("e 0 1\n".as_bytes(), Path::new("x")).is_err());
    }
}
