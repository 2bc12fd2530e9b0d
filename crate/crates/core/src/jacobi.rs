//! Jacobi matrix of a coefficient set and its spectral distribution.
//!
//! Eigenvalues come from Sturm-sequence bisection on the tridiagonal matrix.
//! The characteristic recurrence
//!
//! ```text
//! Pt_0 = 1,  Pt_1 = x - alpha_0,
//! Pt_{i+1} = (x - alpha_i) Pt_i - omega_i Pt_{i-1}
//! ```
//!
//! is only used to check residuals and to evaluate the quadrature weights
//! `w_l = Q_d(a_l) / Pt'_{d+1}(a_l)`, where `Q` is the associated
//! polynomial obtained by dropping the first row and column. The weights are
//! cross-checked against the squared first components of the normalised
//! eigenvectors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::SzegoJacobi;

/// Agreement required between the two weight routes.
pub const WEIGHT_TOL: f64 = 1e-9;
/// Relative residual allowed for `Pt_{d+1}(a_l)`.
pub const CHAR_RESIDUAL_TOL: f64 = 1e-8;
/// Minimum relative gap between consecutive eigenvalues.
pub const DISTINCT_TOL: f64 = 1e-8;
/// Distance from +-1 accepted in [`reflective_spectrum_check`].
pub const REFLECTIVE_SPECTRUM_TOL: f64 = 1e-8;

const MAX_BISECTIONS: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl JacobiMatrix {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diag));
        for (i, &e) in self.offdiag.iter().enumerate() {
            m[(i, i + 1)] = e;
            m[(i + 1, i)] = e;
        }
        debug_assert_eq!(m.nrows(), n);
        m
    }

    /// Number of eigenvalues strictly below `x` (Sturm count via LDL^T pivots).
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE
            * self.offdiag.iter().map(|e| e * e).fold(1.0, f64::max);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                let e = self.offdiag[i - 1];
                q = (self.diag[i] - x) - e * e / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim() {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = self.offdiag.get(i).map_or(0.0, |e| e.abs());
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }
}

pub fn jacobi_matrix(c: &SzegoJacobi) -> JacobiMatrix {
    JacobiMatrix { diag: c.alpha().to_vec(), offdiag: c.omega().iter().map(|w| w.sqrt()).collect() }
}

/// Monic characteristic polynomials `Pt_0..Pt_{d+1}` at `x`, together with
/// their derivatives.
pub fn monic_polynomials(c: &SzegoJacobi, x: f64) -> (Vec<f64>, Vec<f64>) {
    let d = c.diameter();
    let (alpha, omega) = (c.alpha(), c.omega());
    let mut p = Vec::with_capacity(d + 2);
    let mut dp = Vec::with_capacity(d + 2);
    p.push(1.0);
    dp.push(0.0);
    p.push(x - alpha[0]);
    dp.push(1.0);
    for i in 1..=d {
        let next = (x - alpha[i]) * p[i] - omega[i - 1] * p[i - 1];
        let dnext = p[i] + (x - alpha[i]) * dp[i] - omega[i - 1] * dp[i - 1];
        p.push(next);
        dp.push(dnext);
    }
    (p, dp)
}

/// The associated polynomial `Q_d(x)` (recurrence shifted by one index).
pub fn associated_polynomial(c: &SzegoJacobi, x: f64) -> f64 {
    let d = c.diameter();
    if d == 0 {
        return 1.0;
    }
    let (alpha, omega) = (c.alpha(), c.omega());
    let mut prev = 1.0;
    let mut cur = x - alpha[1];
    for i in 1..d {
        // omega[i] is omega_{i+1}
        let next = (x - alpha[i + 1]) * cur - omega[i] * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Eigenvalues of the Jacobi matrix in ascending order.
pub fn eigenvalues(j: &JacobiMatrix) -> Result<Vec<f64>> {
    let n = j.dim();
    let (lo0, hi0) = j.gershgorin();
    let abs_floor = f64::EPSILON * lo0.abs().max(hi0.abs()).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (mut lo, mut hi) = (lo0, hi0);
        let mut iterations = 0;
        loop {
            let tol = 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + abs_floor;
            if hi - lo <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if j.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            iterations += 1;
            if iterations > MAX_BISECTIONS {
                return Err(Error::ConvergenceFailure(format!("eigenvalue {k}: bracket [{lo}, {hi}]")));
            }
        }
        out.push(0.5 * (lo + hi));
    }

    let scale = out.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    for pair in out.windows(2) {
        if pair[1] - pair[0] < DISTINCT_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::EigenvalueCollision { a: pair[0], b: pair[1] });
        }
    }
    Ok(out)
}

/// Eigenvalues plus a check that each is a root of `Pt_{d+1}`.
pub fn checked_eigenvalues(c: &SzegoJacobi) -> Result<Vec<f64>> {
    let values = eigenvalues(&jacobi_matrix(c))?;
    let d = c.diameter();
    for &a in &values {
        let (p, dp) = monic_polynomials(c, a);
        let scale = dp[d + 1].abs() * a.abs().max(1.0);
        if p[d + 1].abs() > CHAR_RESIDUAL_TOL * scale {
            return Err(Error::ConvergenceFailure(format!(
                "characteristic residual {:e} at eigenvalue {a}",
                p[d + 1]
            )));
        }
    }
    Ok(values)
}

/// Quadrature weights `Q_d(a_l) / Pt'_{d+1}(a_l)`, cross-checked against
/// [`weights_from_eigenvectors`].
pub fn weights(c: &SzegoJacobi, eigenvalues: &[f64]) -> Result<Vec<f64>> {
    let d = c.diameter();
    if eigenvalues.len() != d + 1 {
        return Err(Error::DimensionMismatch { expected: d + 1, got: eigenvalues.len() });
    }
    let formula: Vec<f64> = eigenvalues
        .iter()
        .map(|&a| associated_polynomial(c, a) / monic_polynomials(c, a).1[d + 1])
        .collect();
    let oracle = weights_from_eigenvectors(&jacobi_matrix(c));
    for (index, (&f, &o)) in formula.iter().zip(&oracle).enumerate() {
        if (f - o).abs() > WEIGHT_TOL {
            return Err(Error::WeightMismatch { index, formula: f, oracle: o });
        }
    }
    Ok(formula)
}

/// Squared first components of the normalised eigenvectors, ordered by
/// ascending eigenvalue. Uses a dense symmetric eigensolver.
pub fn weights_from_eigenvectors(j: &JacobiMatrix) -> Vec<f64> {
    let eig = j.to_dense().symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, &a)| (a, eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().map(|(_, w)| w).collect()
}

/// `pmat[(i, l)] = P_i(a_l)` from the orthonormal recurrence.
pub fn p_matrix(c: &SzegoJacobi, eigenvalues: &[f64]) -> DMatrix<f64> {
    let d = c.diameter();
    let (alpha, omega) = (c.alpha(), c.omega());
    let sq: Vec<f64> = omega.iter().map(|w| w.sqrt()).collect();
    let mut pmat = DMatrix::zeros(d + 1, eigenvalues.len());
    for (l, &a) in eigenvalues.iter().enumerate() {
        pmat[(0, l)] = 1.0;
        if d == 0 {
            continue;
        }
        pmat[(1, l)] = (a - alpha[0]) / sq[0];
        for i in 1..d {
            pmat[(i + 1, l)] = ((a - alpha[i]) * pmat[(i, l)] - sq[i - 1] * pmat[(i - 1, l)]) / sq[i];
        }
    }
    pmat
}

/// Eigenvalues, quadrature weights and polynomial matrix of one coefficient set.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub weights: Vec<f64>,
    pub pmat: DMatrix<f64>,
}

impl SpectralData {
    pub fn new(c: &SzegoJacobi) -> Result<Self> {
        let eigenvalues = checked_eigenvalues(c)?;
        let weights = weights(c, &eigenvalues)?;
        let pmat = p_matrix(c, &eigenvalues);
        Ok(Self { eigenvalues, weights, pmat })
    }

    pub fn diameter(&self) -> usize {
        self.eigenvalues.len() - 1
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.pmat.row(i).iter().copied().collect()
    }
}

/// `max |P diag(w) P^T - I|`.
pub fn orthogonality_residual(sd: &SpectralData) -> f64 {
    let w = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&sd.weights));
    let gram = &sd.pmat * w * sd.pmat.transpose();
    let n = gram.nrows();
    (gram - DMatrix::identity(n, n)).amax()
}

/// `sum_l g(a_l) w_l`, the vacuum expectation of `g(A)`.
pub fn expectation<F>(sd: &SpectralData, g: F) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    sd.eigenvalues.iter().zip(&sd.weights).map(|(&a, &w)| g(a) * w).sum()
}

/// True iff every entry of the last row of `P` is +1 or -1.
pub fn reflective_spectrum_check(sd: &SpectralData) -> bool {
    let d = sd.diameter();
    sd.pmat.row(d).iter().all(|p| (p.abs() - 1.0).abs() <= REFLECTIVE_SPECTRUM_TOL)
}
