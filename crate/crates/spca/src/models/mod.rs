//! Seeded samplers for the distribution families used throughout the crate:
//! spiked Gaussians, graph-vector rows, planted-clique graphs, and the
//! bottom-left transform from graphs to data matrices.

mod rng;

pub use rng::SeededRng;

use crate::error::{Error, Result};
use crate::estimators::SparseUnitVector;
use crate::matcore::{read_matrix_text, write_matrix_text, SymMatrix};
use std::io::{BufRead, Write};

/// Dense sample matrix with rows as observations.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n: usize,
    p: usize,
    entries: Vec<f64>,
}

impl DataMatrix {
    pub fn new(n: usize, p: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::InvalidParameter(
                "data matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != n * p {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {n}x{p} matrix, got {}",
                n * p,
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / p,
                col: pos % p,
            });
        }
        Ok(DataMatrix { n, p, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.p..(i + 1) * self.p]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    /// Entrywise scaling, e.g. `X / sqrt(750)` before estimation.
    pub fn scaled(&self, c: f64) -> DataMatrix {
        DataMatrix {
            n: self.n,
            p: self.p,
            entries: self.entries.iter().map(|v| v * c).collect(),
        }
    }

    pub fn write_text(&self, w: impl Write) -> Result<()> {
        write_matrix_text(w, self.n, self.p, &self.entries)
    }

    pub fn read_text(r: impl BufRead) -> Result<Self> {
        let (n, p, entries) = read_matrix_text(r)?;
        DataMatrix::new(n, p, entries)
    }
}

/// Spiked Gaussian model `N_p(0, sigma2 I + theta v1 v1ᵀ)`.
#[derive(Debug, Clone)]
pub struct SpikedModelSpec {
    pub p: usize,
    pub sigma2: f64,
    pub theta: f64,
    pub v1: SparseUnitVector,
}

impl SpikedModelSpec {
    pub fn new(p: usize, sigma2: f64, theta: f64, v1: SparseUnitVector) -> Result<Self> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sigma2 must be positive, got {sigma2}"
            )));
        }
        if !(theta >= 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta must be non-negative, got {theta}"
            )));
        }
        if v1.dim() != p {
            return Err(Error::DimensionMismatch(format!(
                "spike direction has dimension {}, expected {p}",
                v1.dim()
            )));
        }
        Ok(SpikedModelSpec {
            p,
            sigma2,
            theta,
            v1,
        })
    }

    /// `sigma2 I + theta v1 v1ᵀ`, exactly the sampling covariance.
    pub fn population_covariance(&self) -> SymMatrix {
        let v = self.v1.to_dense();
        let mut m = SymMatrix::outer(&v);
        m.scale(self.theta);
        for i in 0..self.p {
            m.entries_mut()[i * self.p + i] += self.sigma2;
        }
        m
    }

    /// Population eigengap `lambda_1 - lambda_2 = theta`.
    pub fn eigengap(&self) -> f64 {
        self.theta
    }
}

/// Draws `n` rows `X_i = sigma Z_i + sqrt(theta) w_i v1` with `Z_i` a
/// standard Gaussian vector and `w_i` a standard Gaussian scalar. Per row,
/// the `p` coordinates of `Z_i` are drawn first, then `w_i`.
pub fn sample_spiked(spec: &SpikedModelSpec, n: usize, seed: u64) -> DataMatrix {
    let mut rng = SeededRng::new(seed);
    let sigma = spec.sigma2.sqrt();
    let sq_theta = spec.theta.sqrt();
    let v = spec.v1.to_dense();
    let mut entries = Vec::with_capacity(n * spec.p);
    let row_start = entries.len();
    debug_assert_eq!(row_start, 0);
    for _ in 0..n {
        let base = entries.len();
        for _ in 0..spec.p {
            entries.push(sigma * rng.gaussian());
        }
        let w = rng.gaussian();
        for (j, vj) in v.iter().enumerate() {
            entries[base + j] += sq_theta * w * vj;
        }
    }
    DataMatrix {
        n,
        p: spec.p,
        entries,
    }
}

/// Graph-vector distribution `Y = xi { (1 - eps) R + eps (g + R~) }` with
/// `R~_j = (1 - g_j) R_j`, `xi` Rademacher, `eps ~ Bern(pi0)`, `R` a vector
/// of independent Rademacher coordinates.
#[derive(Debug, Clone)]
pub struct GraphVectorSpec {
    g: Vec<bool>,
    pi0: f64,
}

impl GraphVectorSpec {
    pub fn new(g: Vec<bool>, pi0: f64) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::InvalidParameter("empty signal pattern".into()));
        }
        if !(pi0 > 0.0 && pi0 <= 0.5) {
            return Err(Error::InvalidParameter(format!(
                "pi0 must lie in (0, 1/2], got {pi0}"
            )));
        }
        Ok(GraphVectorSpec { g, pi0 })
    }

    pub fn p(&self) -> usize {
        self.g.len()
    }

    pub fn pi0(&self) -> f64 {
        self.pi0
    }

    pub fn signal_pattern(&self) -> &[bool] {
        &self.g
    }

    /// Number of active coordinates `N_g`.
    pub fn signal_size(&self) -> usize {
        self.g.iter().filter(|&&b| b).count()
    }

    /// Population eigengap `pi0 (N_g - 1)` (zero when `N_g <= 1`).
    pub fn eigengap(&self) -> f64 {
        let ng = self.signal_size();
        if ng <= 1 {
            0.0
        } else {
            self.pi0 * (ng as f64 - 1.0)
        }
    }
}

/// Covariance of the graph-vector distribution:
/// `I_p + pi0 (g gᵀ - diag(g))`.
pub fn gv_covariance(spec: &GraphVectorSpec) -> SymMatrix {
    let p = spec.p();
    SymMatrix::from_fn_symmetric(p, |i, j| {
        if i == j {
            1.0
        } else if spec.g[i] && spec.g[j] {
            spec.pi0
        } else {
            0.0
        }
    })
    .expect("finite by construction")
}

/// Per-row draw order: `xi`, then `eps`, then the `p` coordinates of `R`.
fn graph_vector_row(
    spec: &GraphVectorSpec,
    rng: &mut SeededRng,
    out: &mut Vec<f64>,
) -> (f64, bool) {
    let xi = rng.rademacher();
    let eps = rng.bernoulli(spec.pi0);
    for &gj in &spec.g {
        let r = rng.rademacher();
        let y = if eps {
            let g = if gj { 1.0 } else { 0.0 };
            xi * (g + (1.0 - g) * r)
        } else {
            xi * r
        };
        out.push(y);
    }
    (xi, eps)
}

/// `n` independent graph-vector draws; every entry is `+1` or `-1`.
pub fn sample_graph_vector(spec: &GraphVectorSpec, n: usize, seed: u64) -> DataMatrix {
    let mut rng = SeededRng::new(seed);
    let mut entries = Vec::with_capacity(n * spec.p());
    for _ in 0..n {
        graph_vector_row(spec, &mut rng, &mut entries);
    }
    DataMatrix {
        n,
        p: spec.p(),
        entries,
    }
}

/// Undirected simple graph with packed-bit adjacency rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    m: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl Graph {
    pub fn empty(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "graph must have at least one vertex".into(),
            ));
        }
        let words_per_row = m.div_ceil(64);
        Ok(Graph {
            m,
            words_per_row,
            bits: vec![0; m * words_per_row],
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= self.m || j >= self.m {
            return Err(Error::InvalidParameter(format!(
                "edge ({i}, {j}) out of range"
            )));
        }
        if i == j {
            return Err(Error::InvalidParameter(format!("self-loop at vertex {i}")));
        }
        self.bits[i * self.words_per_row + j / 64] |= 1 << (j % 64);
        self.bits[j * self.words_per_row + i / 64] |= 1 << (i % 64);
        Ok(())
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.m && j < self.m);
        i != j && self.bits[i * self.words_per_row + j / 64] & (1 << (j % 64)) != 0
    }

    /// Edges as `(i, j)` pairs with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in (i + 1)..self.m {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// A graph together with the planted clique it was generated from. The
/// clique may be empty, which models an instance whose ground truth is
/// unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    graph: Graph,
    clique: Vec<usize>,
}

impl PlantedInstance {
    pub fn new(graph: Graph, mut clique: Vec<usize>) -> Result<Self> {
        clique.sort_unstable();
        clique.dedup();
        for (a_idx, &a) in clique.iter().enumerate() {
            if a >= graph.vertex_count() {
                return Err(Error::InvalidParameter(format!(
                    "clique vertex {a} out of range"
                )));
            }
            for &b in &clique[a_idx + 1..] {
                if !graph.has_edge(a, b) {
                    return Err(Error::InvalidParameter(format!(
                        "clique vertices {a} and {b} are not adjacent"
                    )));
                }
            }
        }
        Ok(PlantedInstance { graph, clique })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Sorted planted clique; empty when unknown.
    pub fn clique(&self) -> &[usize] {
        &self.clique
    }

    /// Text format: header `m kappa`, a line with the clique vertices
    /// (empty when kappa = 0), then one `i j` line per edge with `i < j`.
    pub fn write_text(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{} {}", self.graph.m, self.clique.len())?;
        let line: Vec<String> = self.clique.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
        for (i, j) in self.graph.edges() {
            writeln!(w, "{i} {j}")?;
        }
        Ok(())
    }

    pub fn read_text(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph file".into()))??;
        let mut parts = header.split_whitespace();
        let m: usize = parts
            .next()
            .ok_or_else(|| Error::Parse("missing vertex count".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad vertex count: {e}")))?;
        let kappa: usize = parts
            .next()
            .ok_or_else(|| Error::Parse("missing clique size".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad clique size: {e}")))?;
        let clique_line = lines
            .next()
            .ok_or_else(|| Error::Parse("missing clique line".into()))??;
        let clique: Vec<usize> = clique_line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|e| Error::Parse(format!("bad clique vertex: {e}")))
            })
            .collect::<Result<_>>()?;
        if clique.len() != kappa {
            return Err(Error::Parse(format!(
                "header announces clique of size {kappa} but {} vertices listed",
                clique.len()
            )));
        }
        let mut graph = Graph::empty(m)?;
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let i: usize = it
                .next()
                .ok_or_else(|| Error::Parse("missing edge endpoint".into()))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad edge endpoint: {e}")))?;
            let j: usize = it
                .next()
                .ok_or_else(|| Error::Parse("missing edge endpoint".into()))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad edge endpoint: {e}")))?;
            if i >= j {
                return Err(Error::Parse(format!("edge ({i}, {j}) must satisfy i < j")));
            }
            graph.add_edge(i, j)?;
        }
        PlantedInstance::new(graph, clique)
    }
}

/// Erdos-Renyi(1/2) graph on `m` vertices with a clique forced on `kappa`
/// uniformly chosen vertices. Edge coins are drawn in lexicographic pair
/// order, skipping pairs inside the clique.
pub fn sample_planted_clique(m: usize, kappa: usize, seed: u64) -> Result<PlantedInstance> {
    if kappa > m {
        return Err(Error::InvalidParameter(format!(
            "clique size {kappa} exceeds vertex count {m}"
        )));
    }
    let mut rng = SeededRng::new(seed);
    let clique = rng.sample_without_replacement(m, kappa);
    let mut member = vec![false; m];
    for &v in &clique {
        member[v] = true;
    }
    let mut graph = Graph::empty(m)?;
    for i in 0..m {
        for j in (i + 1)..m {
            // the coin is only drawn for pairs outside the clique
            if (member[i] && member[j]) || rng.bernoulli(0.5) {
                graph.add_edge(i, j)?;
            }
        }
    }
    PlantedInstance::new(graph, clique)
}

/// Bottom-left transform: draws `n + p` vertices without replacement (the
/// first `n` index rows, the next `p` index columns), then forms
/// `X_ij = xi_i (2 - 1 if u_i ~ w_j else -1)` with independent Rademacher
/// row signs `xi_i` drawn after the vertices.
pub fn bottom_left_transform(
    graph: &Graph,
    n: usize,
    p: usize,
    seed: u64,
) -> Result<(DataMatrix, Vec<usize>, Vec<usize>)> {
    let m = graph.vertex_count();
    if n == 0 || p == 0 {
        return Err(Error::InvalidParameter("n and p must be positive".into()));
    }
    if n + p > m {
        return Err(Error::InvalidParameter(format!(
            "need n + p <= m to draw without replacement, got {n} + {p} > {m}"
        )));
    }
    let mut rng = SeededRng::new(seed);
    let drawn = rng.sample_without_replacement(m, n + p);
    let (u_vertices, w_vertices) = drawn.split_at(n);
    let mut entries = Vec::with_capacity(n * p);
    for &u in u_vertices {
        let xi = rng.rademacher();
        for &w in w_vertices {
            let a = if graph.has_edge(u, w) { 1.0 } else { 0.0 };
            entries.push(xi * (2.0 * a - 1.0));
        }
    }
    Ok((
        DataMatrix { n, p, entries },
        u_vertices.to_vec(),
        w_vertices.to_vec(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_spike(p: usize, support: &[usize]) -> SparseUnitVector {
        let k = support.len() as f64;
        let vals: Vec<(usize, f64)> = support.iter().map(|&i| (i, 1.0 / k.sqrt())).collect();
        SparseUnitVector::from_pairs(p, &vals).unwrap()
    }

    #[test]
    fn spiked_spec_validation() {
        let v = unit_spike(4, &[0]);
        assert!(SpikedModelSpec::new(4, 0.0, 1.0, v.clone()).is_err());
        assert!(SpikedModelSpec::new(4, 1.0, -0.5, v.clone()).is_err());
        assert!(SpikedModelSpec::new(5, 1.0, 0.5, v).is_err());
    }

    #[test]
    fn spiked_population_covariance_is_exact() {
        let spec = SpikedModelSpec::new(3, 2.0, 0.5, unit_spike(3, &[0, 1])).unwrap();
        let cov = spec.population_covariance();
        assert!((cov.get(0, 0) - 2.25).abs() < 1e-15);
        assert!((cov.get(0, 1) - 0.25).abs() < 1e-15);
        assert!((cov.get(2, 2) - 2.0).abs() < 1e-15);
        assert_eq!(spec.eigengap(), 0.5);
    }

    #[test]
    fn gv_spec_validation() {
        assert!(GraphVectorSpec::new(vec![true, false], 0.0).is_err());
        assert!(GraphVectorSpec::new(vec![true, false], 0.6).is_err());
        assert!(GraphVectorSpec::new(vec![true, false], 0.5).is_ok());
    }

    #[test]
    fn gv_covariance_examples() {
        // no signal: identity
        let spec = GraphVectorSpec::new(vec![false; 4], 0.3).unwrap();
        assert_eq!(gv_covariance(&spec), SymMatrix::identity(4));

        // all-ones at p = 3, pi0 = 1/2: I + (J - I)/2, eigenvalues (2, 1/2, 1/2)
        let spec = GraphVectorSpec::new(vec![true; 3], 0.5).unwrap();
        let cov = gv_covariance(&spec);
        let s = crate::matcore::eig_sym(&cov).unwrap();
        assert!((s.eigenvalues()[0] - 2.0).abs() < 1e-12);
        assert!((s.eigenvalues()[1] - 0.5).abs() < 1e-12);
        assert!((s.eigenvalues()[2] - 0.5).abs() < 1e-12);

        // p = 4, g = (1,1,0,0), pi0 = 0.3: top eigenpair (1.3, (1,1,0,0)/sqrt 2)
        let spec = GraphVectorSpec::new(vec![true, true, false, false], 0.3).unwrap();
        let cov = gv_covariance(&spec);
        let s = crate::matcore::eig_sym(&cov).unwrap();
        assert!((s.eigenvalues()[0] - 1.3).abs() < 1e-12);
        let v = s.eigenvector(0);
        let r = 1.0 / 2.0_f64.sqrt();
        assert!((v[0] - r).abs() < 1e-12 && (v[1] - r).abs() < 1e-12);
        assert!(v[2].abs() < 1e-12 && v[3].abs() < 1e-12);
        assert!((spec.eigengap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn graph_vector_entries_are_signs() {
        let spec = GraphVectorSpec::new(vec![true, true, false, false, true], 0.4).unwrap();
        let x = sample_graph_vector(&spec, 500, 9);
        assert!(x.as_slice().iter().all(|v| v.abs() == 1.0));
    }

    #[test]
    fn graph_vector_epsilon_marginal() {
        let spec = GraphVectorSpec::new(
            vec![true, true, true, false, false, false, false, false],
            0.2,
        )
        .unwrap();
        let mut rng = SeededRng::new(13);
        let trials = 50_000usize;
        let mut hits = 0usize;
        let mut buf = Vec::new();
        for _ in 0..trials {
            buf.clear();
            let (_, eps) = graph_vector_row(&spec, &mut rng, &mut buf);
            if eps {
                hits += 1;
            }
        }
        let rate = hits as f64 / trials as f64;
        let se = (0.2 * 0.8 / trials as f64).sqrt();
        assert!((rate - 0.2).abs() <= 3.0 * se, "rate {rate}");
    }

    #[test]
    fn samplers_are_bit_reproducible() {
        let spec = SpikedModelSpec::new(6, 1.0, 1.0, unit_spike(6, &[0, 3])).unwrap();
        assert_eq!(sample_spiked(&spec, 20, 77), sample_spiked(&spec, 20, 77));
        let gv = GraphVectorSpec::new(vec![true, false, true], 0.25).unwrap();
        assert_eq!(
            sample_graph_vector(&gv, 20, 5),
            sample_graph_vector(&gv, 20, 5)
        );
        assert_eq!(
            sample_planted_clique(40, 8, 3).unwrap(),
            sample_planted_clique(40, 8, 3).unwrap()
        );
    }

    #[test]
    fn planted_clique_complete_when_kappa_is_m() {
        let inst = sample_planted_clique(12, 12, 1).unwrap();
        for i in 0..12 {
            for j in (i + 1)..12 {
                assert!(inst.graph().has_edge(i, j));
            }
        }
    }

    #[test]
    fn planted_clique_members_pairwise_adjacent() {
        let inst = sample_planted_clique(60, 15, 4).unwrap();
        let clique = inst.clique();
        assert_eq!(clique.len(), 15);
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                assert!(inst.graph().has_edge(a, b));
            }
        }
    }

    #[test]
    fn bottom_left_on_complete_and_empty_graphs() {
        let complete = sample_planted_clique(10, 10, 2).unwrap();
        let (x, _, _) = bottom_left_transform(complete.graph(), 4, 5, 8).unwrap();
        for i in 0..4 {
            let row = x.row(i);
            assert!(row.iter().all(|&v| v == row[0]), "constant row of signs");
            assert!(row[0].abs() == 1.0);
        }

        let empty = Graph::empty(10).unwrap();
        let (x, _, _) = bottom_left_transform(&empty, 4, 5, 8).unwrap();
        for i in 0..4 {
            let row = x.row(i);
            assert!(row.iter().all(|&v| v == row[0]));
            assert!(row[0].abs() == 1.0);
        }
    }

    #[test]
    fn bottom_left_requires_enough_vertices() {
        let g = Graph::empty(10).unwrap();
        assert!(matches!(
            bottom_left_transform(&g, 6, 5, 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn graph_text_round_trip() {
        let inst = sample_planted_clique(25, 6, 10).unwrap();
        let mut buf = Vec::new();
        inst.write_text(&mut buf).unwrap();
        let back = PlantedInstance::read_text(buf.as_slice()).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn graph_rejects_self_loops() {
        let mut g = Graph::empty(3).unwrap();
        assert!(g.add_edge(1, 1).is_err());
    }
}
