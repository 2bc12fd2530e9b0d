//! Full Hilbert-space check of the pairwise Heisenberg realisation.
//!
//! Qubit `k` is bit `k` of the basis index; `|k>` in the one-excitation
//! sector is the state with only qubit `k` up, index `1 << k`. Each
//! `sigma_k . sigma_l` is assembled from its action on computational basis
//! states: `ZZ` contributes `+1` on aligned spins and `-1` otherwise, and
//! `XX + YY` flips an anti-aligned pair with amplitude `2`.
//!
//! On the one-excitation sector, half the sum of `sigma_k . sigma_l` over
//! the pairs of a distance class `i` acts as `a_i A_i + b_i 1`; the constants
//! are fitted rather than assumed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::bell::{concurrence_stratum, project_onto_strata, BellDesign, DenseEvolver};
use crate::error::{Error, Result};
use crate::graph::{distance_matrices, stratify, Graph};

pub const MAX_QUBITS: usize = 14;
pub const MAX_EVOLUTION_QUBITS: usize = 12;
/// Largest residual accepted from the affine fit.
pub const AFFINE_TOL: f64 = 1e-10;

/// Pairs of vertices grouped by their graph distance, with one coupling per
/// class. Class 0 (a qubit with itself) only shifts the energy and is
/// omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperatorSum {
    pub n: usize,
    /// `(class, k, l)` with `k < l`.
    pub terms: Vec<(usize, usize, usize)>,
    pub couplings: Vec<f64>,
    pub tstar: f64,
}

impl SpinOperatorSum {
    pub fn from_graph(g: &Graph, couplings: &[f64], tstar: f64) -> Result<Self> {
        check_qubits(g.n(), MAX_QUBITS)?;
        if couplings.len() != g.diameter() + 1 {
            return Err(Error::DimensionMismatch { expected: g.diameter() + 1, got: couplings.len() });
        }
        if tstar.is_nan() || tstar <= 0.0 {
            return Err(Error::InvalidParameter(format!("tstar must be positive, got {tstar}")));
        }
        let mut terms = Vec::new();
        for k in 0..g.n() {
            for l in k + 1..g.n() {
                terms.push((g.distance(k, l), k, l));
            }
        }
        Ok(Self { n: g.n(), terms, couplings: couplings.to_vec(), tstar })
    }

    /// `(1 / 2 tstar) sum_i J_i sum_{dist(k,l) = i} sigma_k . sigma_l`.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let dim = 1usize << self.n;
        let mut h = DMatrix::zeros(dim, dim);
        for &(class, k, l) in &self.terms {
            let scale = self.couplings[class] / (2.0 * self.tstar);
            if scale != 0.0 {
                add_exchange(&mut h, k, l, scale);
            }
        }
        h
    }
}

fn check_qubits(n: usize, max: usize) -> Result<()> {
    if n > max {
        Err(Error::TooManyQubits { n, max })
    } else {
        Ok(())
    }
}

/// Adds `scale * sigma_k . sigma_l` to `h`.
fn add_exchange(h: &mut DMatrix<f64>, k: usize, l: usize, scale: f64) {
    let mask = (1usize << k) | (1usize << l);
    for x in 0..h.nrows() {
        let aligned = ((x >> k) & 1) == ((x >> l) & 1);
        if aligned {
            h[(x, x)] += scale;
        } else {
            h[(x, x)] -= scale;
            h[(x ^ mask, x)] += 2.0 * scale;
        }
    }
}

pub fn heisenberg_hamiltonian(g: &Graph, couplings: &[f64], tstar: f64) -> Result<DMatrix<f64>> {
    Ok(SpinOperatorSum::from_graph(g, couplings, tstar)?.to_matrix())
}

/// `(1/2) sum_{dist(k,l) = class} sigma_k . sigma_l` on the full space.
pub fn class_operator(g: &Graph, class: usize) -> Result<DMatrix<f64>> {
    check_qubits(g.n(), MAX_QUBITS)?;
    let dim = 1usize << g.n();
    let mut h = DMatrix::zeros(dim, dim);
    for k in 0..g.n() {
        for l in k + 1..g.n() {
            if g.distance(k, l) == class {
                add_exchange(&mut h, k, l, 0.5);
            }
        }
    }
    Ok(h)
}

/// Matrix elements `<k|H|l>` between one-excitation states.
pub fn one_excitation_block(h: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |k, l| h[(1 << k, 1 << l)])
}

/// Largest amplitude `H` sends from the one-excitation sector elsewhere.
pub fn sector_leakage(h: &DMatrix<f64>, n: usize) -> f64 {
    let mut worst = 0.0f64;
    for k in 0..n {
        for x in 0..h.nrows() {
            if x.count_ones() != 1 {
                worst = worst.max(h[(x, 1 << k)].abs());
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassFit {
    pub i: usize,
    pub a: f64,
    pub b: f64,
    pub residual: f64,
}

/// Least-squares fit of `m ~ a * basis + b * 1`.
fn affine_fit(m: &DMatrix<f64>, basis: &DMatrix<f64>) -> (f64, f64, f64) {
    let n = m.nrows() as f64;
    let aa = basis.dot(basis);
    let ai = basis.trace();
    let ma = m.dot(basis);
    let mi = m.trace();
    let det = aa * n - ai * ai;
    let (a, b) = if det.abs() > 1e-12 {
        ((ma * n - mi * ai) / det, (aa * mi - ai * ma) / det)
    } else {
        // basis is a multiple of the identity (or zero)
        (0.0, mi / n)
    };
    let fitted = basis * a + DMatrix::identity(m.nrows(), m.ncols()) * b;
    (a, b, (m - fitted).amax())
}

/// Fits each distance class `i >= 1` on the one-excitation sector.
pub fn sector_restriction_check(g: &Graph) -> Result<Vec<ClassFit>> {
    let dm = distance_matrices(g);
    let mut fits = Vec::with_capacity(dm.diameter());
    for i in 1..=dm.diameter() {
        let full = class_operator(g, i)?;
        let leak = sector_leakage(&full, g.n());
        let block = one_excitation_block(&full, g.n());
        let (a, b, residual) = affine_fit(&block, &dm.as_f64(i));
        let residual = residual.max(leak);
        if residual > AFFINE_TOL {
            return Err(Error::RestrictionNotAffine { class: i, residual });
        }
        fits.push(ClassFit { i, a, b, residual });
    }
    Ok(fits)
}

/// Total magnetisation `S_z = (1/2) sum_k sigma^z_k`, diagonal entries only.
fn total_sz(dim: usize, n: usize) -> Vec<f64> {
    (0..dim).map(|x| x.count_ones() as f64 - n as f64 / 2.0).collect()
}

/// `max |[H, S_z]|`.
pub fn magnetization_conservation_check(h: &DMatrix<f64>) -> Result<f64> {
    let dim = h.nrows();
    if !dim.is_power_of_two() || !h.is_square() {
        return Err(Error::DimensionMismatch { expected: dim.next_power_of_two(), got: dim });
    }
    let sz = total_sz(dim, dim.trailing_zeros() as usize);
    let mut worst = 0.0f64;
    for x in 0..dim {
        for y in 0..dim {
            worst = worst.max((h[(x, y)] * (sz[y] - sz[x])).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionComparison {
    /// Max amplitude deviation after removing the identity-shift phase.
    pub deviation: f64,
    /// Full-space amplitudes on the one-excitation states.
    pub amplitudes: Vec<Complex64>,
}

/// Evolves `|origin>` under the full Heisenberg Hamiltonian and under the
/// fitted one-excitation matrix `sum_i (J_i / tstar) a_i A_i`.
pub fn full_vs_sector_evolution(
    g: &Graph,
    couplings: &[f64],
    tstar: f64,
    origin: usize,
    t: f64,
) -> Result<EvolutionComparison> {
    check_qubits(g.n(), MAX_EVOLUTION_QUBITS)?;
    if origin >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: origin, n: g.n() });
    }
    let full = heisenberg_hamiltonian(g, couplings, tstar)?;
    let fits = sector_restriction_check(g)?;
    let dm = distance_matrices(g);
    let n = g.n();
    let mut sector = DMatrix::zeros(n, n);
    let mut shift = 0.0;
    for fit in &fits {
        let j = couplings[fit.i] / tstar;
        sector += dm.as_f64(fit.i) * (j * fit.a);
        shift += j * fit.b;
    }

    let full_state = DenseEvolver::new(&full)?.evolve(1 << origin, t)?;
    let amplitudes: Vec<Complex64> = (0..n).map(|k| full_state[1 << k]).collect();
    let phase = Complex64::from_polar(1.0, -shift * t);
    let reference = DenseEvolver::new(&sector)?.evolve(origin, t)?;
    let deviation = amplitudes
        .iter()
        .zip(&reference)
        .map(|(a, r)| (a - r * phase).norm())
        .fold(0.0, f64::max);
    Ok(EvolutionComparison { deviation, amplitudes })
}

/// Per-class Heisenberg couplings realising a design.
///
/// The design Hamiltonian is `sum_i J_i P_i(A)` and on an association
/// scheme `A_i = sqrt(n_i) P_i(A)`, so class `i` needs `J_i / (sqrt(n_i) a_i)`.
/// `J_0` multiplies the identity and is dropped.
pub fn heisenberg_couplings(g: &Graph, design: &BellDesign, fits: &[ClassFit]) -> Result<Vec<f64>> {
    let d = g.diameter();
    if design.couplings.len() != d + 1 {
        return Err(Error::DimensionMismatch { expected: d + 1, got: design.couplings.len() });
    }
    if fits.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: fits.len() });
    }
    let dm = distance_matrices(g);
    let mut out = vec![0.0; d + 1];
    for fit in fits {
        if fit.a.abs() < f64::EPSILON {
            return Err(Error::InvalidParameter(format!("class {} has zero slope", fit.i)));
        }
        let n_i = dm.get(fit.i).row(0).iter().sum::<i64>() as f64;
        out[fit.i] = design.couplings[fit.i] / (n_i.sqrt() * fit.a);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Realization {
    pub couplings: Vec<f64>,
    /// Stratum amplitudes of the full-space state at `tstar`.
    pub gamma: Vec<Complex64>,
    /// Max deviation from the spectral target after aligning the global phase.
    pub deviation: f64,
    pub concurrence: f64,
}

/// Runs a design through the full `2^n` Heisenberg Hamiltonian from `|origin>`.
pub fn realize_design(g: &Graph, design: &BellDesign, target: &[Complex64], origin: usize) -> Result<Realization> {
    check_qubits(g.n(), MAX_EVOLUTION_QUBITS)?;
    if origin >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: origin, n: g.n() });
    }
    let strat = stratify(g, origin)?;
    if target.len() != strat.diameter() + 1 {
        return Err(Error::DimensionMismatch { expected: strat.diameter() + 1, got: target.len() });
    }
    let fits = sector_restriction_check(g)?;
    let couplings = heisenberg_couplings(g, design, &fits)?;
    let h = heisenberg_hamiltonian(g, &couplings, design.tstar)?;
    let state = DenseEvolver::new(&h)?.evolve(1 << origin, design.tstar)?;
    let sector: Vec<Complex64> = (0..g.n()).map(|k| state[1 << k]).collect();
    let gamma = project_onto_strata(&sector, &strat);

    let overlap: Complex64 = target.iter().zip(&gamma).map(|(t, x)| t.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    let deviation = gamma.iter().zip(target).map(|(x, t)| (x - t * phase).norm()).fold(0.0, f64::max);
    let i = design.stratum;
    let concurrence = concurrence_stratum(&gamma, i, strat.stratum(i).len());
    Ok(Realization { couplings, gamma, deviation, concurrence })
}
