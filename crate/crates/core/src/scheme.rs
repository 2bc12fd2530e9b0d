//! Association-scheme checks on the distance classes of a graph.
//!
//! `chi(x, y; i, j)` counts vertices at distance `i` from `x` and `j` from
//! `y`; it is the `(x, y)` entry of `A_i A_j`. The graph is a scheme when
//! this count depends only on `dist(x, y)`, and the constant values are the
//! intersection numbers `p^k_{ij}`.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::bell::polynomial_matrices;
use crate::error::{Error, Result};
use crate::graph::{distance_matrices, DistanceMatrices, Graph, SzegoJacobi};

/// Two vertex pairs at the same distance whose `chi(.,.; i, j)` differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SchemeWitness {
    pub i: usize,
    pub j: usize,
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub first_count: i64,
    pub second_count: i64,
}

impl fmt::Display for SchemeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pairs {:?} and {:?} are equidistant but have {} vs {} vertices at distances ({}, {})",
            self.first, self.second, self.first_count, self.second_count, self.i, self.j
        )
    }
}

/// Intersection numbers indexed as `get(k, i, j) = p^k_{ij}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionNumbers {
    /// `p[k][i][j]`
    pub p: Vec<Vec<Vec<i64>>>,
}

impl IntersectionNumbers {
    pub fn diameter(&self) -> usize {
        self.p.len() - 1
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> i64 {
        self.p[k][i][j]
    }

    /// Class sizes `n_i = p^0_{ii}`.
    pub fn valencies(&self) -> Vec<i64> {
        (0..=self.diameter()).map(|i| self.p[0][i][i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeVerdict {
    pub is_scheme: bool,
    pub witness: Option<SchemeWitness>,
}

/// Intersection numbers of `g`, or the first violation found.
pub fn intersection_numbers(g: &Graph) -> Result<IntersectionNumbers> {
    let dm = distance_matrices(g);
    let d = dm.diameter();
    let n = g.n();
    let mut p = vec![vec![vec![0i64; d + 1]; d + 1]; d + 1];
    for i in 0..=d {
        for j in 0..=d {
            let chi = dm.get(i) * dm.get(j);
            let mut reference: Vec<Option<(usize, usize)>> = vec![None; d + 1];
            for x in 0..n {
                for y in 0..n {
                    let k = g.distance(x, y);
                    match reference[k] {
                        None => {
                            reference[k] = Some((x, y));
                            p[k][i][j] = chi[(x, y)];
                        }
                        Some(first) if chi[(x, y)] != p[k][i][j] => {
                            return Err(Error::NotScheme(SchemeWitness {
                                i,
                                j,
                                first,
                                second: (x, y),
                                first_count: p[k][i][j],
                                second_count: chi[(x, y)],
                            }));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
    }
    Ok(IntersectionNumbers { p })
}

pub fn verify_scheme(g: &Graph) -> SchemeVerdict {
    match intersection_numbers(g) {
        Ok(_) => SchemeVerdict { is_scheme: true, witness: None },
        Err(Error::NotScheme(w)) => SchemeVerdict { is_scheme: false, witness: Some(w) },
        Err(e) => unreachable!("intersection_numbers only fails with NotScheme, got {e}"),
    }
}

/// `max |A_i A_j - sum_k p^k_{ij} A_k|` over all class pairs.
pub fn bose_mesner_residual(dm: &DistanceMatrices, p: &IntersectionNumbers) -> i64 {
    let d = dm.diameter();
    let mut worst = 0;
    for i in 0..=d {
        for j in 0..=d {
            let lhs = dm.get(i) * dm.get(j);
            let rhs = (0..=d).fold(DMatrix::zeros(lhs.nrows(), lhs.ncols()), |acc, k| {
                acc + dm.get(k) * p.get(k, i, j)
            });
            let diff = (lhs - rhs).iter().map(|v| v.abs()).max().unwrap_or(0);
            worst = worst.max(diff);
        }
    }
    worst
}

/// Szego-Jacobi coefficients read off `A |phi_i> = sum_k sqrt(n_k / n_i) p^k_{1i} |phi_k>`:
/// `omega_i = (n_{i-1} / n_i) (p^{i-1}_{1i})^2` and `alpha_i = p^i_{1i}`.
pub fn scheme_szego_jacobi(p: &IntersectionNumbers) -> Result<SzegoJacobi> {
    let d = p.diameter();
    let n = p.valencies();
    if d == 0 {
        return SzegoJacobi::new(vec![], vec![0.0]);
    }
    let omega = (1..=d)
        .map(|i| {
            let b = p.get(i - 1, 1, i) as f64;
            n[i - 1] as f64 / n[i] as f64 * b * b
        })
        .collect();
    let alpha = (0..=d).map(|i| p.get(i, 1, i) as f64).collect();
    SzegoJacobi::new(omega, alpha)
}

/// `max_i max |A_i - P_i(A)|` with the orthonormal `P_i`.
///
/// This is not zero in general: `A_i |phi_0> = sqrt(n_i) |phi_i>` while
/// `P_i(A) |phi_0> = |phi_i>`, so the two differ by `sqrt(n_i)` on every class
/// with more than one member. See [`distance_polynomial_residual`].
pub fn adjacency_polynomial_check(g: &Graph, c: &SzegoJacobi) -> Result<f64> {
    polynomial_residual(g, c, |_| 1.0)
}

/// `max_i max |A_i - sqrt(n_i) P_i(A)|`, where `n_i` is the class valency.
/// Zero (up to rounding) on every association scheme.
pub fn distance_polynomial_residual(g: &Graph, c: &SzegoJacobi) -> Result<f64> {
    let dm = distance_matrices(g);
    let valency: Vec<f64> = dm.iter().map(|m| m.row(0).iter().sum::<i64>() as f64).collect();
    polynomial_residual(g, c, |i| valency[i].sqrt())
}

fn polynomial_residual<F: Fn(usize) -> f64>(g: &Graph, c: &SzegoJacobi, scale: F) -> Result<f64> {
    let dm = distance_matrices(g);
    if dm.diameter() != c.diameter() {
        return Err(Error::DimensionMismatch { expected: dm.diameter(), got: c.diameter() });
    }
    let polys = polynomial_matrices(&g.adjacency_matrix(), c);
    Ok(polys
        .iter()
        .enumerate()
        .map(|(i, p)| (dm.as_f64(i) - p * scale(i)).amax())
        .fold(0.0, f64::max))
}
