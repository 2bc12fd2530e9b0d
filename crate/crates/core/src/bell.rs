//! Bell-pair synthesis between the origin and a target stratum.
//!
//! With `H = f(A)` the stratum amplitudes evolve as
//! `gamma_i(t) = sum_l P_i(a_l) exp(-i f(a_l) t) w_l`. Localising the
//! excitation on strata `0` and `i` with equal weight needs every entry of
//! row `i` of `P` to be a root of `Y^2 + 2 cos(xi_delta) Y - 1 = 0`, so the
//! row takes at most two values whose product is `-1`. For such a row the
//! phase targets `tau_l = f(a_l) t*` follow from `xi_delta`, and the
//! couplings come from `J = P diag(w) tau`.
//!
//! The concurrence between the origin and a single vertex of stratum `i`
//! is `2 |gamma_0 gamma_i| / sqrt(n_i)`. This assumes the amplitude is
//! uniform over the stratum, which holds for any evolution that stays in the
//! stratification subspace.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{stratify, Graph, Stratification, SzegoJacobi};
use crate::jacobi::SpectralData;

/// Relative clustering tolerance for row values.
pub const ROW_TOL: f64 = 1e-8;
/// Tolerance on `|eta_l| = 1` for a synthesised design.
pub const ETA_TOL: f64 = 1e-10;
/// Pass threshold used by [`verify_design`].
pub const VERIFY_TOL: f64 = 1e-8;

/// Largest concurrence reachable between the origin and one vertex of a
/// stratum of `n_i` vertices.
pub fn entanglement_bound(n_i: usize) -> f64 {
    1.0 / (n_i as f64).sqrt()
}

/// A row of `P` that takes exactly two values with product `-1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibleRow {
    pub stratum: usize,
    pub p_plus: f64,
    pub p_minus: f64,
    /// `true` where the column takes `p_plus`.
    pub assignment: Vec<bool>,
}

/// Clusters of nearly-equal values, returned as `(center, members)` sorted
/// by center.
fn cluster(values: &[f64], tol: f64) -> Vec<(f64, Vec<usize>)> {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for idx in order {
        match clusters.last_mut() {
            Some(c) if values[idx] - values[*c.last().unwrap()] <= tol * scale => c.push(idx),
            _ => clusters.push(vec![idx]),
        }
    }
    clusters
        .into_iter()
        .map(|members| {
            let center = members.iter().map(|&k| values[k]).sum::<f64>() / members.len() as f64;
            (center, members)
        })
        .collect()
}

/// Checks the two-value constraint on row `stratum` of `pmat`.
pub fn feasible_row(pmat: &DMatrix<f64>, stratum: usize, tol: f64) -> Result<FeasibleRow> {
    let d = pmat.nrows() - 1;
    if stratum == 0 || stratum > d {
        return Err(Error::NoSuchStratum { stratum, diameter: d });
    }
    let values: Vec<f64> = pmat.row(stratum).iter().copied().collect();
    let clusters = cluster(&values, tol);
    if clusters.len() != 2 {
        return Err(Error::InfeasibleRow {
            stratum,
            reason: format!("row takes {} distinct values, need exactly two with product -1", clusters.len()),
        });
    }
    let (p_minus, _) = &clusters[0];
    let (p_plus, plus_members) = &clusters[1];
    let product = p_plus * p_minus;
    if (product + 1.0).abs() > tol * product.abs().max(1.0) {
        return Err(Error::InfeasibleRow {
            stratum,
            reason: format!("row values {p_minus} and {p_plus} have product {product}, need -1"),
        });
    }
    let mut assignment = vec![false; values.len()];
    for &k in plus_members {
        assignment[k] = true;
    }
    Ok(FeasibleRow { stratum, p_plus: *p_plus, p_minus: *p_minus, assignment })
}

/// Every row `i >= 1` that satisfies the two-value constraint.
pub fn scan_feasible_rows(pmat: &DMatrix<f64>, tol: f64) -> Vec<FeasibleRow> {
    (1..pmat.nrows()).filter_map(|i| feasible_row(pmat, i, tol).ok()).collect()
}

/// Couplings and phase targets realising a Bell pair at `t = tstar`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellDesign {
    pub stratum: usize,
    pub xi0: f64,
    pub xi_delta: f64,
    pub windings: Vec<i64>,
    /// `tau_l = f(a_l) tstar`, one per eigenvalue.
    pub tau: Vec<f64>,
    /// Coefficients of `f(x) tstar` in the basis `P_0..P_d`.
    pub couplings: Vec<f64>,
    pub tstar: f64,
}

/// Synthesises couplings for a feasible row.
///
/// `windings` may be empty (all zero) or hold one integer per eigenvalue.
pub fn design_couplings(
    sd: &SpectralData,
    row: &FeasibleRow,
    xi0: f64,
    windings: &[i64],
    tstar: f64,
) -> Result<BellDesign> {
    let m = sd.eigenvalues.len();
    if !(tstar > 0.0 && tstar.is_finite()) {
        return Err(Error::InvalidParameter(format!("tstar must be positive, got {tstar}")));
    }
    let windings = if windings.is_empty() { vec![0; m] } else { windings.to_vec() };
    if windings.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: windings.len() });
    }
    if row.stratum == 0 || row.stratum >= sd.pmat.nrows() {
        return Err(Error::NoSuchStratum { stratum: row.stratum, diameter: sd.diameter() });
    }

    let cos_delta = (-(row.p_plus + row.p_minus) / 2.0).clamp(-1.0, 1.0);
    let xi_delta = cos_delta.acos();
    let (s, c) = xi_delta.sin_cos();

    let mut tau = Vec::with_capacity(m);
    for l in 0..m {
        let p = sd.pmat[(row.stratum, l)];
        let eta = Complex64::new(1.0 + p * c, p * s);
        if (eta.norm_sqr() - 2.0).abs() > 2.0 * ETA_TOL {
            return Err(Error::InfeasibleRow {
                stratum: row.stratum,
                reason: format!("|1 + P e^(i xi)|^2 = {} at column {l}, need 2", eta.norm_sqr()),
            });
        }
        tau.push(2.0 * PI * windings[l] as f64 + xi0 + eta.arg());
    }

    let weighted = DVector::from_iterator(m, tau.iter().zip(&sd.weights).map(|(t, w)| t * w));
    let couplings = (&sd.pmat * weighted).iter().copied().collect();
    Ok(BellDesign { stratum: row.stratum, xi0, xi_delta, windings, tau, couplings, tstar })
}

/// `P_0(A), .., P_d(A)` by the matrix form of the orthonormal recurrence.
pub fn polynomial_matrices(adj: &DMatrix<f64>, c: &SzegoJacobi) -> Vec<DMatrix<f64>> {
    let n = adj.nrows();
    let d = c.diameter();
    let mut out = Vec::with_capacity(d + 1);
    out.push(DMatrix::identity(n, n));
    if d == 0 {
        return out;
    }
    let (alpha, omega) = (c.alpha(), c.omega());
    let shifted = |i: usize| adj - DMatrix::identity(n, n) * alpha[i];
    out.push(shifted(0) / omega[0].sqrt());
    for i in 1..d {
        let next = (shifted(i) * &out[i] - &out[i - 1] * omega[i - 1].sqrt()) / omega[i].sqrt();
        out.push(next);
    }
    out
}

/// `H = (1/tstar) sum_k J_k P_k(A)`.
pub fn hamiltonian_matrix(g: &Graph, c: &SzegoJacobi, design: &BellDesign) -> Result<DMatrix<f64>> {
    let d = c.diameter();
    if design.couplings.len() != d + 1 {
        return Err(Error::DimensionMismatch { expected: d + 1, got: design.couplings.len() });
    }
    if g.n() < d + 1 {
        return Err(Error::DimensionMismatch { expected: d + 1, got: g.n() });
    }
    let polys = polynomial_matrices(&g.adjacency_matrix(), c);
    let n = g.n();
    let h = polys
        .iter()
        .zip(&design.couplings)
        .fold(DMatrix::zeros(n, n), |acc, (p, j)| acc + p * *j);
    Ok(h / design.tstar)
}

/// Stratum amplitudes at `s = t / tstar`, given the phase targets `tau`.
pub fn evolve_spectral(sd: &SpectralData, tau: &[f64], s: f64) -> Vec<Complex64> {
    let phases: Vec<Complex64> = tau
        .iter()
        .zip(&sd.weights)
        .map(|(t, w)| Complex64::from_polar(*w, -t * s))
        .collect();
    (0..sd.pmat.nrows())
        .map(|i| (0..phases.len()).map(|l| phases[l] * sd.pmat[(i, l)]).sum())
        .collect()
}

/// Eigendecomposition of a real symmetric Hamiltonian, reused across times.
#[derive(Debug, Clone)]
pub struct DenseEvolver {
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl DenseEvolver {
    pub const SYMMETRY_TOL: f64 = 1e-12;

    pub fn new(h: &DMatrix<f64>) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::DimensionMismatch { expected: h.nrows(), got: h.ncols() });
        }
        let asym = (h - h.transpose()).amax();
        if asym > Self::SYMMETRY_TOL * h.amax().max(1.0) {
            return Err(Error::NotHermitian(asym));
        }
        let eig = h.clone().symmetric_eigen();
        Ok(Self { energies: eig.eigenvalues, vectors: eig.eigenvectors })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `exp(-i H t) |origin>`.
    pub fn evolve(&self, origin: usize, t: f64) -> Result<Vec<Complex64>> {
        let n = self.dim();
        if origin >= n {
            return Err(Error::VertexOutOfRange { vertex: origin, n });
        }
        let coeffs: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(self.vectors[(origin, k)], -self.energies[k] * t))
            .collect();
        Ok((0..n)
            .map(|x| (0..n).map(|k| coeffs[k] * self.vectors[(x, k)]).sum())
            .collect())
    }
}

pub fn evolve_dense(h: &DMatrix<f64>, origin: usize, t: f64) -> Result<Vec<Complex64>> {
    DenseEvolver::new(h)?.evolve(origin, t)
}

/// `<phi_i|v>` for every stratum.
pub fn project_onto_strata(v: &[Complex64], strat: &Stratification) -> Vec<Complex64> {
    strat
        .strata()
        .iter()
        .map(|members| {
            let norm = (members.len() as f64).sqrt();
            members.iter().map(|&k| v[k]).sum::<Complex64>() / norm
        })
        .collect()
}

/// Concurrence `2 |v_m v_k|` of a one-excitation state.
pub fn concurrence_pair(v: &[Complex64], m: usize, k: usize) -> f64 {
    2.0 * v[m].norm() * v[k].norm()
}

/// Concurrence between the origin and one vertex of stratum `i`.
pub fn concurrence_stratum(gamma: &[Complex64], i: usize, n_i: usize) -> f64 {
    2.0 * gamma[0].norm() * gamma[i].norm() / (n_i as f64).sqrt()
}

/// Sampled stratum amplitudes with the origin/target concurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrajectory {
    pub stratum: usize,
    pub times: Vec<f64>,
    pub gamma: Vec<Vec<Complex64>>,
    pub concurrence: Vec<f64>,
}

/// Samples the design on `times` (absolute, in the units of `tstar`).
///
/// Without a known stratum size the concurrence column is computed with
/// `n_i = 1`, i.e. it reports `2 |gamma_0 gamma_i|`.
pub fn trajectory(sd: &SpectralData, design: &BellDesign, times: &[f64], n_i: Option<usize>) -> AmplitudeTrajectory {
    let i = design.stratum;
    let gamma: Vec<Vec<Complex64>> = times
        .iter()
        .map(|&t| evolve_spectral(sd, &design.tau, t / design.tstar))
        .collect();
    let concurrence = gamma.iter().map(|g| concurrence_stratum(g, i, n_i.unwrap_or(1))).collect();
    AmplitudeTrajectory { stratum: i, times: times.to_vec(), gamma, concurrence }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub stratum: usize,
    pub gamma0_abs: f64,
    pub gammai_abs: f64,
    /// `2 |gamma_0 gamma_i|`; one when the excitation is fully localised
    /// on the two strata with equal weight.
    pub localization: f64,
    /// Present when the stratum size is known.
    pub concurrence: Option<f64>,
    pub bound: Option<f64>,
    /// Max deviation of spectral vs dense stratum amplitudes at `tstar`.
    pub dense_deviation: Option<f64>,
    pub probability_defect: f64,
    pub passed: bool,
}

/// Network against which a design is checked.
#[derive(Debug, Clone, Copy)]
pub enum Network<'a> {
    /// An explicit graph, stratified around `origin`.
    Graph { graph: &'a Graph, origin: usize },
    /// Coefficients only, optionally with known stratum sizes.
    Coefficients { sizes: Option<&'a [usize]> },
}

/// Evaluates a design at `tstar` and checks it against the saturation
/// conditions `|gamma_0| = |gamma_i| = 1/sqrt(2)`.
pub fn verify_design(c: &SzegoJacobi, design: &BellDesign, network: Network<'_>) -> Result<VerificationReport> {
    let sd = SpectralData::new(c)?;
    let i = design.stratum;
    if i == 0 || i > c.diameter() {
        return Err(Error::NoSuchStratum { stratum: i, diameter: c.diameter() });
    }
    let gamma = evolve_spectral(&sd, &design.tau, 1.0);
    let probability_defect = (gamma.iter().map(|g| g.norm_sqr()).sum::<f64>() - 1.0).abs();

    let (sizes, dense_deviation) = match network {
        Network::Graph { graph, origin } => {
            let strat = stratify(graph, origin)?;
            if strat.diameter() != c.diameter() {
                return Err(Error::DimensionMismatch { expected: strat.diameter(), got: c.diameter() });
            }
            let h = hamiltonian_matrix(graph, c, design)?;
            let v = evolve_dense(&h, origin, design.tstar)?;
            let projected = project_onto_strata(&v, &strat);
            let dev = projected.iter().zip(&gamma).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            (Some(strat.sizes()), Some(dev))
        }
        Network::Coefficients { sizes } => (sizes.map(<[usize]>::to_vec), None),
    };

    let g0 = gamma[0].norm();
    let gi = gamma[i].norm();
    let localization = 2.0 * g0 * gi;
    let n_i = sizes.as_ref().map(|s| s[i]);
    let concurrence = n_i.map(|n| concurrence_stratum(&gamma, i, n));
    let bound = n_i.map(entanglement_bound);
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let passed = (g0 - half).abs() <= VERIFY_TOL
        && (gi - half).abs() <= VERIFY_TOL
        && match (concurrence, bound) {
            (Some(c), Some(b)) => (c - b).abs() <= VERIFY_TOL,
            _ => true,
        }
        && !matches!(dense_deviation, Some(d) if d > VERIFY_TOL);

    Ok(VerificationReport {
        stratum: i,
        gamma0_abs: g0,
        gammai_abs: gi,
        localization,
        concurrence,
        bound,
        dense_deviation,
        probability_defect,
        passed,
    })
}
