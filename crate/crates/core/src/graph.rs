//! Graphs, stratification around an origin, and the Szego-Jacobi
//! coefficients of invariant stratification graphs.
//!
//! A vertex `x` in stratum `l` has three partial degrees: the number of
//! neighbours one stratum closer to the origin (`back`), in the same stratum
//! (`level`) and one stratum further out (`forward`). The graph is an ISG
//! with respect to the origin iff these triples depend only on `l`. In that
//! case the adjacency matrix acts on the normalised stratum states
//! `|phi_l>` as a Jacobi matrix with off-diagonals `sqrt(omega_l)` and
//! diagonal `alpha_l`, where
//!
//! ```text
//! omega_l = (n_l / n_{l-1}) * back_l^2,    alpha_l = level_l
//! ```

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance between degree-formula and matrix-element coefficients.
pub const COEFFICIENT_CROSSCHECK_TOL: f64 = 1e-10;
/// Relative tolerance of the palindrome test in [`is_reflective`].
pub const REFLECTIVE_TOL: f64 = 1e-9;

/// Simple undirected connected graph with precomputed all-pairs distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    neighbors: Vec<Vec<usize>>,
    dist: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are collapsed;
    /// self-loops and disconnected graphs are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }

        let mut dist = vec![usize::MAX; n * n];
        for src in 0..n {
            let row = &mut dist[src * n..(src + 1) * n];
            bfs_levels(&neighbors, src, row);
        }
        if let Some(unreachable) = dist[..n].iter().position(|&d| d == usize::MAX) {
            return Err(Error::Disconnected { unreachable });
        }
        Ok(Self { n, neighbors, dist })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.neighbors[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.neighbors[x].len()
    }

    pub fn is_adjacent(&self, x: usize, y: usize) -> bool {
        self.neighbors[x].binary_search(&y).is_ok()
    }

    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.dist[x * self.n + y]
    }

    /// Largest distance over all vertex pairs.
    pub fn diameter(&self) -> usize {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &v in &self.neighbors[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |x, y| {
            if self.is_adjacent(x, y) {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: perm.len() });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
            }
        }
        let edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        Self::new(self.n, &edges)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }
}

fn bfs_levels(neighbors: &[Vec<usize>], src: usize, out: &mut [usize]) {
    let mut queue = VecDeque::new();
    out[src] = 0;
    queue.push_back(src);
    while let Some(x) = queue.pop_front() {
        let next = out[x] + 1;
        for &y in &neighbors[x] {
            if out[y] == usize::MAX {
                out[y] = next;
                queue.push_back(y);
            }
        }
    }
}

/// The distance matrices `A_0 .. A_d` of a graph, `(A_i)[x][y] = 1` iff
/// `dist(x, y) = i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrices {
    mats: Vec<DMatrix<i64>>,
}

impl DistanceMatrices {
    /// Number of classes minus one, i.e. the graph diameter.
    pub fn diameter(&self) -> usize {
        self.mats.len() - 1
    }

    pub fn get(&self, i: usize) -> &DMatrix<i64> {
        &self.mats[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &DMatrix<i64>> {
        self.mats.iter()
    }

    pub fn as_f64(&self, i: usize) -> DMatrix<f64> {
        self.mats[i].map(|v| v as f64)
    }
}

pub fn distance_matrices(g: &Graph) -> DistanceMatrices {
    let n = g.n();
    let mats = (0..=g.diameter())
        .map(|i| DMatrix::from_fn(n, n, |x, y| i64::from(g.distance(x, y) == i)))
        .collect();
    DistanceMatrices { mats }
}

/// BFS strata `V_0 = {origin}, V_1, .., V_d` around an origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratification {
    origin: usize,
    strata: Vec<Vec<usize>>,
}

impl Stratification {
    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn strata(&self) -> &[Vec<usize>] {
        &self.strata
    }

    pub fn stratum(&self, i: usize) -> &[usize] {
        &self.strata[i]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.strata.iter().map(Vec::len).collect()
    }

    pub fn diameter(&self) -> usize {
        self.strata.len() - 1
    }

    /// The unique vertex of the last stratum, if there is one.
    pub fn antipode(&self) -> Option<usize> {
        match self.strata.last() {
            Some(last) if last.len() == 1 => Some(last[0]),
            _ => None,
        }
    }

    /// Normalised uniform superposition over stratum `i`, as an `n`-vector.
    pub fn stratum_state(&self, i: usize, n: usize) -> DVector<f64> {
        let members = &self.strata[i];
        let amp = 1.0 / (members.len() as f64).sqrt();
        let mut v = DVector::zeros(n);
        for &k in members {
            v[k] = amp;
        }
        v
    }
}

pub fn stratify(g: &Graph, origin: usize) -> Result<Stratification> {
    g.check_vertex(origin)?;
    let d = (0..g.n()).map(|y| g.distance(origin, y)).max().unwrap_or(0);
    let mut strata = vec![Vec::new(); d + 1];
    for y in 0..g.n() {
        strata[g.distance(origin, y)].push(y);
    }
    Ok(Stratification { origin, strata })
}

/// Partial degrees of a vertex relative to its stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeTriple {
    /// Neighbours in the previous stratum.
    pub back: usize,
    /// Neighbours in the same stratum.
    pub level: usize,
    /// Neighbours in the next stratum.
    pub forward: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsgVerdict {
    pub is_isg: bool,
    /// One triple per stratum; empty when `is_isg` is false.
    pub degrees: Vec<DegreeTriple>,
    /// Two vertices of one stratum with different triples.
    pub witness: Option<(usize, usize)>,
}

fn degree_triple(g: &Graph, origin: usize, x: usize) -> DegreeTriple {
    let l = g.distance(origin, x);
    let mut t = DegreeTriple { back: 0, level: 0, forward: 0 };
    for &z in g.neighbors(x) {
        let lz = g.distance(origin, z);
        if lz + 1 == l {
            t.back += 1;
        } else if lz == l {
            t.level += 1;
        } else {
            t.forward += 1;
        }
    }
    t
}

pub fn isg_check(g: &Graph, origin: usize) -> Result<IsgVerdict> {
    let strat = stratify(g, origin)?;
    let mut degrees = Vec::with_capacity(strat.strata.len());
    for stratum in &strat.strata {
        // Strata are in ascending vertex order, so the witness is the
        // smallest-labelled representative paired with the first offender.
        let first = stratum[0];
        let triple = degree_triple(g, origin, first);
        if let Some(&other) = stratum[1..].iter().find(|&&x| degree_triple(g, origin, x) != triple) {
            return Ok(IsgVerdict { is_isg: false, degrees: Vec::new(), witness: Some((first, other)) });
        }
        degrees.push(triple);
    }
    Ok(IsgVerdict { is_isg: true, degrees, witness: None })
}

/// Tridiagonal coefficients `omega_1..omega_d` (off-diagonal squares) and
/// `alpha_0..alpha_d` (diagonal).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoefficients")]
pub struct SzegoJacobi {
    omega: Vec<f64>,
    alpha: Vec<f64>,
}

#[derive(Deserialize)]
struct RawCoefficients {
    omega: Vec<f64>,
    alpha: Vec<f64>,
}

impl TryFrom<RawCoefficients> for SzegoJacobi {
    type Error = Error;

    fn try_from(raw: RawCoefficients) -> Result<Self> {
        Self::new(raw.omega, raw.alpha)
    }
}

impl SzegoJacobi {
    pub fn new(omega: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        if alpha.len() != omega.len() + 1 {
            return Err(Error::CoefficientLength { omega: omega.len(), alpha: alpha.len() });
        }
        if let Some((i, &value)) = omega.iter().enumerate().find(|(_, &w)| !(w > 0.0 && w.is_finite())) {
            return Err(Error::NonPositiveOmega { index: i + 1, value });
        }
        if let Some(a) = alpha.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha value {a} is not finite")));
        }
        Ok(Self { omega, alpha })
    }

    /// Coefficients with every `alpha` zero.
    pub fn bipartite(omega: Vec<f64>) -> Result<Self> {
        let alpha = vec![0.0; omega.len() + 1];
        Self::new(omega, alpha)
    }

    pub fn diameter(&self) -> usize {
        self.omega.len()
    }

    /// `omega_1..omega_d`; index 0 of the slice is `omega_1`.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// Same coefficients seen from the far end of the chain.
    pub fn reversed(&self) -> Self {
        let mut omega = self.omega.clone();
        let mut alpha = self.alpha.clone();
        omega.reverse();
        alpha.reverse();
        Self { omega, alpha }
    }
}

/// Extracts the Szego-Jacobi coefficients of an ISG around `origin`.
///
/// Both the degree formula and the matrix elements `<phi_l|A|phi_{l-1}>`,
/// `<phi_l|A|phi_l>` are evaluated; the matrix elements are returned. They
/// are computed from edge counts between strata, so integer coefficients
/// come out exact.
pub fn szego_jacobi(g: &Graph, origin: usize) -> Result<SzegoJacobi> {
    let verdict = isg_check(g, origin)?;
    if let Some((a, b)) = verdict.witness {
        return Err(Error::NotIsg { origin, a, b });
    }
    let strat = stratify(g, origin)?;
    let sizes = strat.sizes();
    let d = strat.diameter();

    // edges[l][m]: number of edges between strata l and m (m in {l, l+1}).
    let mut inner = vec![0usize; d + 1];
    let mut outer = vec![0usize; d + 1];
    for (u, v) in g.edges() {
        let (lu, lv) = (g.distance(origin, u), g.distance(origin, v));
        if lu == lv {
            inner[lu] += 1;
        } else {
            outer[lu.min(lv)] += 1;
        }
    }

    let mut omega = Vec::with_capacity(d);
    let mut alpha = Vec::with_capacity(d + 1);
    for l in 0..=d {
        // <phi_l|A|phi_l> = 2 e(l, l) / n_l
        let direct = (2 * inner[l]) as f64 / sizes[l] as f64;
        check_agreement(format!("alpha_{l}"), verdict.degrees[l].level as f64, direct)?;
        alpha.push(direct);

        if l > 0 {
            // <phi_{l-1}|A|phi_l>^2 = e(l-1, l)^2 / (n_{l-1} n_l)
            let e = outer[l - 1] as f64;
            let direct = e * e / (sizes[l - 1] * sizes[l]) as f64;
            let back = verdict.degrees[l].back as f64;
            let from_degrees = sizes[l] as f64 / sizes[l - 1] as f64 * back * back;
            check_agreement(format!("omega_{l}"), from_degrees, direct)?;
            omega.push(direct);
        }
    }
    SzegoJacobi::new(omega, alpha)
}

fn check_agreement(name: String, formula: f64, direct: f64) -> Result<()> {
    if (formula - direct).abs() > COEFFICIENT_CROSSCHECK_TOL {
        return Err(Error::CoefficientMismatch { name, formula, direct });
    }
    Ok(())
}

pub fn is_antipodal(s: &Stratification) -> bool {
    s.antipode().is_some()
}

/// True iff `omega_i = omega_{d+1-i}` and `alpha_i = alpha_{d-i}`.
pub fn is_reflective(c: &SzegoJacobi) -> bool {
    let close = |x: f64, y: f64| (x - y).abs() <= REFLECTIVE_TOL * 1f64.max(x.abs()).max(y.abs());
    let palindrome = |v: &[f64]| v.iter().zip(v.iter().rev()).all(|(&x, &y)| close(x, y));
    palindrome(c.omega()) && palindrome(c.alpha())
}
