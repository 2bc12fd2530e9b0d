//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use bellnet_core::bell::{
    design_couplings, evolve_spectral, feasible_row, hamiltonian_matrix, project_onto_strata,
    scan_feasible_rows, verify_design, Network, ROW_TOL,
};
use bellnet_core::catalog::{self, CatalogItem};
use bellnet_core::graph::{distance_matrices, isg_check, stratify, szego_jacobi};
use bellnet_core::heisenberg::{
    full_vs_sector_evolution, heisenberg_hamiltonian, magnetization_conservation_check, realize_design,
    sector_restriction_check,
};
use bellnet_core::jacobi::{jacobi_matrix, orthogonality_residual, weights_from_eigenvectors};
use bellnet_core::scheme::{
    adjacency_polynomial_check, bose_mesner_residual, distance_polynomial_residual, intersection_numbers, verify_scheme,
};
use bellnet_core::{Graph, SpectralData, SzegoJacobi};
use nalgebra::DMatrix;

const EXAMPLE1_TOL: f64 = 1e-3;
const EXAMPLE2_TOL: f64 = 1e-9;
const ORTHO_TOL: f64 = 1e-9;
const WEIGHT_TOL: f64 = 1e-9;
const REFLECT_TOL: f64 = 1e-8;
const BELL_TOL: f64 = 1e-8;
const EVOLVE_TOL: f64 = 1e-9;
const POLY_TOL: f64 = 1e-9;
const AFFINE_TOL: f64 = 1e-10;
const SECTOR_TOL: f64 = 1e-9;
const INVARIANCE_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn graph(address: &str) -> Graph {
    match catalog::resolve(address).expect(address) {
        CatalogItem::Graph { graph, .. } => graph,
        CatalogItem::Preset(_) => panic!("{address} is not a graph"),
    }
}

fn coefficients(address: &str) -> SzegoJacobi {
    match catalog::resolve(address).expect(address) {
        CatalogItem::Graph { graph, .. } => szego_jacobi(&graph, 0).expect(address),
        CatalogItem::Preset(p) => p.coefficients,
    }
}

fn spectral(c: &SzegoJacobi) -> Result<SpectralData, String> {
    SpectralData::new(c).map_err(|e| e.to_string())
}

/// Greedy column matching: every expected column must equal a distinct
/// computed column entrywise within `tol`.
fn columns_match(computed: &DMatrix<f64>, expected: &DMatrix<f64>, tol: f64) -> Result<f64, String> {
    if computed.shape() != expected.shape() {
        return Err(format!("shape {:?} vs {:?}", computed.shape(), expected.shape()));
    }
    let mut used = vec![false; computed.ncols()];
    let mut worst = 0.0f64;
    for (e, col) in expected.column_iter().enumerate() {
        let best = (0..computed.ncols())
            .filter(|&k| !used[k])
            .map(|k| (k, (computed.column(k) - col).amax()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((k, dev)) if dev <= tol => {
                used[k] = true;
                worst = worst.max(dev);
            }
            Some((_, dev)) => return Err(format!("expected column {e} unmatched (closest deviation {dev:.3e})")),
            None => unreachable!(),
        }
    }
    Ok(worst)
}

fn feasible_strata(sd: &SpectralData) -> Vec<usize> {
    scan_feasible_rows(&sd.pmat, ROW_TOL).iter().map(|r| r.stratum).collect()
}

// The reference matrix is printed to four decimals.
#[allow(clippy::approx_constant)]
fn criterion_1() -> Outcome {
    let sd = spectral(&SzegoJacobi::bipartite(vec![4.0, 2.0, 2.0, 4.0]).unwrap())?;
    let r = 1.4142;
    #[rustfmt::skip]
    let expected = DMatrix::from_row_slice(5, 5, &[
        1.0, 1.0, 1.0, 1.0, 1.0,
        0.0, -1.0, 1.0, r, -r,
        -r, 0.0, 0.0, r, r,
        0.0, 1.0, -1.0, r, -r,
        1.0, -1.0, -1.0, 1.0, 1.0,
    ]);
    let dev = columns_match(&sd.pmat, &expected, EXAMPLE1_TOL)?;
    let strata = feasible_strata(&sd);
    if strata != [4] {
        return Err(format!("feasible strata {strata:?}, expected [4]"));
    }
    Ok(format!("max column deviation {dev:.2e} <= {EXAMPLE1_TOL:.0e}; feasible strata {strata:?}"))
}

fn criterion_2() -> Outcome {
    let sd = spectral(&SzegoJacobi::bipartite(vec![4.0, 2.0, 2.0, 2.0, 2.0]).unwrap())?;
    let s3 = 3f64.sqrt();
    let (a, b) = ((s3 + 1.0) / 2.0, (s3 - 1.0) / 2.0);
    let (h6, h2) = (6f64.sqrt() / 2.0, SQRT_2 / 2.0);
    #[rustfmt::skip]
    let expected = DMatrix::from_row_slice(6, 6, &[
        1.0, 1.0, 1.0, 1.0, 1.0, 1.0,
        -1.0, 1.0, a, -b, b, -a,
        0.0, 0.0, h6, -h6, -h6, h6,
        1.0, -1.0, 1.0, 1.0, -1.0, -1.0,
        -SQRT_2, -SQRT_2, h2, h2, h2, h2,
        1.0, -1.0, b, -a, a, -b,
    ]);
    let dev = columns_match(&sd.pmat, &expected, EXAMPLE2_TOL)?;
    let strata = feasible_strata(&sd);
    if strata != [3, 4] {
        return Err(format!("feasible strata {strata:?}, expected [3, 4]"));
    }
    let antipode = feasible_row(&sd.pmat, 5, ROW_TOL);
    if antipode.is_ok() {
        return Err("stratum 5 reported feasible".into());
    }
    Ok(format!("max column deviation {dev:.2e} <= {EXAMPLE2_TOL:.0e}; feasible strata {strata:?}; stratum 5 infeasible"))
}

fn criterion_3() -> Outcome {
    for m in 2..=8usize {
        let c = szego_jacobi(&catalog::cycle(2 * m).unwrap(), 0).map_err(|e| e.to_string())?;
        let expected: Vec<f64> = (1..=m).map(|i| if i == 1 || i == m { 2.0 } else { 1.0 }).collect();
        if c.omega() != expected || c.alpha().iter().any(|&a| a != 0.0) {
            return Err(format!("C{}: omega {:?} alpha {:?}", 2 * m, c.omega(), c.alpha()));
        }
    }
    for d in 1..=10usize {
        let c = szego_jacobi(&catalog::hypercube(d).unwrap(), 0).map_err(|e| e.to_string())?;
        let expected: Vec<f64> = (1..=d).map(|i| (i * (d - i + 1)) as f64).collect();
        if c.omega() != expected || c.alpha().iter().any(|&a| a != 0.0) {
            return Err(format!("Q{d}: omega {:?} alpha {:?}", c.omega(), c.alpha()));
        }
    }
    Ok("exact equality for C4..C16 and Q1..Q10".into())
}

fn criterion_4() -> Outcome {
    let entries = catalog::standard_entries();
    let (mut sum_dev, mut ortho, mut weight_dev) = (0.0f64, 0.0f64, 0.0f64);
    for name in &entries {
        let c = coefficients(name);
        let sd = spectral(&c).map_err(|e| format!("{name}: {e}"))?;
        sum_dev = sum_dev.max((sd.weights.iter().sum::<f64>() - 1.0).abs());
        ortho = ortho.max(orthogonality_residual(&sd));
        let oracle = weights_from_eigenvectors(&jacobi_matrix(&c));
        let dev = sd.weights.iter().zip(&oracle).map(|(w, o)| (w - o).abs()).fold(0.0, f64::max);
        weight_dev = weight_dev.max(dev);
        if sum_dev > WEIGHT_TOL || ortho > ORTHO_TOL || weight_dev > WEIGHT_TOL {
            return Err(format!("{name}: |sum w - 1| {sum_dev:.2e}, orthogonality {ortho:.2e}, weight vs oracle {weight_dev:.2e}"));
        }
    }
    Ok(format!(
        "{} entries; |sum w - 1| {sum_dev:.1e}, orthogonality {ortho:.1e} <= {ORTHO_TOL:.0e}, weight vs oracle {weight_dev:.1e} <= {WEIGHT_TOL:.0e}",
        entries.len()
    ))
}

fn criterion_5() -> Outcome {
    let mut names: Vec<String> = (2..=8).map(|m| format!("cycle:{}", 2 * m)).collect();
    names.extend((1..=10).map(|d| format!("hypercube:{d}")));
    names.extend(["wells", "hadamard", "do4", "j84"].map(String::from));
    let mut worst = 0.0f64;
    for name in &names {
        let sd = spectral(&coefficients(name))?;
        let d = sd.diameter();
        let dev = sd.pmat.row(d).iter().map(|p| (p.abs() - 1.0).abs()).fold(0.0, f64::max);
        if dev > REFLECT_TOL {
            return Err(format!("{name}: last row deviates from +-1 by {dev:.2e}"));
        }
        worst = worst.max(dev);
    }
    Ok(format!("{} reflective entries; max ||P_dl| - 1| {worst:.1e} <= {REFLECT_TOL:.0e}", names.len()))
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    for name in ["hypercube:1", "cycle:4", "cycle:6", "cycle:8", "hypercube:3", "hypercube:4"] {
        let g = graph(name);
        let c = szego_jacobi(&g, 0).map_err(|e| e.to_string())?;
        let sd = spectral(&c)?;
        let row = feasible_row(&sd.pmat, c.diameter(), ROW_TOL).map_err(|e| format!("{name}: {e}"))?;
        let design = design_couplings(&sd, &row, 0.0, &[], 1.0).map_err(|e| e.to_string())?;
        let report = verify_design(&c, &design, Network::Graph { graph: &g, origin: 0 }).map_err(|e| e.to_string())?;
        let half = std::f64::consts::FRAC_1_SQRT_2;
        let conc = report.concurrence.unwrap_or(0.0);
        let dev = (report.gamma0_abs - half).abs().max((report.gammai_abs - half).abs());
        if dev > BELL_TOL || conc < 1.0 - BELL_TOL || report.bound != Some(1.0) {
            return Err(format!(
                "{name}: |g0| {:.12} |gd| {:.12} concurrence {conc:.12} bound {:?}",
                report.gamma0_abs, report.gammai_abs, report.bound
            ));
        }
        worst = worst.max(dev).max(1.0 - conc);
    }
    Ok(format!("K2 C4 C6 C8 Q3 Q4; max deviation {worst:.1e} <= {BELL_TOL:.0e}, bound 1"))
}

/// Max deviation between spectral and dense stratum amplitudes of `H` on
/// the grid, where `H` has spectral phases `tau` (per unit time).
fn grid_deviation(g: &Graph, sd: &SpectralData, h: &DMatrix<f64>, tau: &[f64], times: &[f64]) -> Result<f64, String> {
    let strat = stratify(g, 0).map_err(|e| e.to_string())?;
    let evolver = bellnet_core::bell::DenseEvolver::new(h).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for &t in times {
        let spectral = evolve_spectral(sd, tau, t);
        let dense = project_onto_strata(&evolver.evolve(0, t).map_err(|e| e.to_string())?, &strat);
        let dev = spectral.iter().zip(&dense).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        worst = worst.max(dev);
    }
    Ok(worst)
}

fn criterion_7() -> Outcome {
    let times: Vec<f64> = (0..100).map(|k| 3.0 * k as f64 / 99.0).collect();
    let mut worst = 0.0f64;
    let mut count = 0;
    for name in catalog::standard_entries() {
        let CatalogItem::Graph { graph: g, .. } = catalog::resolve(&name).unwrap() else { continue };
        let c = szego_jacobi(&g, 0).map_err(|e| e.to_string())?;
        let sd = spectral(&c)?;
        // free evolution under A
        let dev = grid_deviation(&g, &sd, &g.adjacency_matrix(), &sd.eigenvalues, &times)?;
        worst = worst.max(dev);
        // the Bell design, whenever the antipodal row is feasible
        if let Ok(row) = feasible_row(&sd.pmat, c.diameter(), ROW_TOL) {
            let design = design_couplings(&sd, &row, 0.0, &[], 1.0).map_err(|e| e.to_string())?;
            let h = hamiltonian_matrix(&g, &c, &design).map_err(|e| e.to_string())?;
            worst = worst.max(grid_deviation(&g, &sd, &h, &design.tau, &times)?);
        }
        if worst > EVOLVE_TOL {
            return Err(format!("{name}: spectral vs dense deviation {worst:.2e}"));
        }
        count += 1;
    }
    Ok(format!("{count} graphs x 100 times; max deviation {worst:.1e} <= {EVOLVE_TOL:.0e}"))
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let mut literal = Vec::new();
    let mut scaled = 0.0f64;
    for name in ["cycle:6", "cycle:8", "hypercube:3", "hypercube:4", "johnson:5,2", "johnson:6,3"] {
        let g = graph(name);
        if !verify_scheme(&g).is_scheme {
            return Err(format!("{name} not verified as a scheme"));
        }
        let p = intersection_numbers(&g).map_err(|e| e.to_string())?;
        let bm = bose_mesner_residual(&distance_matrices(&g), &p);
        if bm != 0 {
            return Err(format!("{name}: Bose-Mesner residual {bm}"));
        }
        let c = szego_jacobi(&g, 0).map_err(|e| e.to_string())?;
        let res = adjacency_polynomial_check(&g, &c).map_err(|e| e.to_string())?;
        scaled = scaled.max(distance_polynomial_residual(&g, &c).map_err(|e| e.to_string())?);
        literal.push(format!("{name} {res:.4}"));
        if res > POLY_TOL {
            failures.push(name);
        }
    }
    let p4 = verify_scheme(&catalog::path(4).unwrap());
    let witness = match (p4.is_scheme, p4.witness) {
        (false, Some(w)) => w.to_string(),
        _ => return Err("P4 not rejected with a witness".into()),
    };
    let summary = format!(
        "schemes verified, Bose-Mesner residual 0; P4 rejected ({witness}); max|A_i - P_i(A)|: {}; max|A_i - sqrt(n_i) P_i(A)| = {scaled:.1e}",
        literal.join(", ")
    );
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!(
            "max|A_i - P_i(A)| <= {POLY_TOL:.0e} unattainable: A_i|phi_0> = sqrt(n_i)|phi_i> but P_i(A)|phi_0> = |phi_i>, \
             so the identity holds only with the sqrt(n_i) factor. {summary}"
        ))
    }
}

fn criterion_9() -> Outcome {
    let mut worst_fit = 0.0f64;
    let mut worst_dev = 0.0f64;
    let mut worst_conc = 0.0f64;
    for name in ["hypercube:1", "cycle:4", "cycle:6", "hypercube:3"] {
        let g = graph(name);
        let fits = sector_restriction_check(&g).map_err(|e| format!("{name}: {e}"))?;
        worst_fit = fits.iter().map(|f| f.residual).fold(worst_fit, f64::max);

        let c = szego_jacobi(&g, 0).map_err(|e| e.to_string())?;
        let sd = spectral(&c)?;
        let row = feasible_row(&sd.pmat, c.diameter(), ROW_TOL).map_err(|e| e.to_string())?;
        let design = design_couplings(&sd, &row, 0.0, &[], 1.0).map_err(|e| e.to_string())?;
        let target = evolve_spectral(&sd, &design.tau, 1.0);
        let real = realize_design(&g, &design, &target, 0).map_err(|e| e.to_string())?;
        let cmp = full_vs_sector_evolution(&g, &real.couplings, 1.0, 0, 1.0).map_err(|e| e.to_string())?;
        let h = heisenberg_hamiltonian(&g, &real.couplings, 1.0).map_err(|e| e.to_string())?;
        let mag = magnetization_conservation_check(&h).map_err(|e| e.to_string())?;

        worst_dev = worst_dev.max(cmp.deviation).max(real.deviation);
        worst_conc = worst_conc.max(1.0 - real.concurrence);
        if worst_fit > AFFINE_TOL || worst_dev > SECTOR_TOL || worst_conc > BELL_TOL || mag != 0.0 {
            return Err(format!(
                "{name}: fit residual {worst_fit:.2e}, sector deviation {worst_dev:.2e}, 1 - concurrence {worst_conc:.2e}, [H, Sz] {mag:.2e}"
            ));
        }
    }
    Ok(format!(
        "K2 C4 C6 Q3; fit residual {worst_fit:.1e} <= {AFFINE_TOL:.0e}, sector deviation {worst_dev:.1e} <= {SECTOR_TOL:.0e}, \
         1 - concurrence {worst_conc:.1e} <= {BELL_TOL:.0e}, [H, Sz] = 0"
    ))
}

fn moduli(sd: &SpectralData, row_stratum: usize, xi0: f64, windings: &[i64]) -> Result<Vec<f64>, String> {
    let row = feasible_row(&sd.pmat, row_stratum, ROW_TOL).map_err(|e| e.to_string())?;
    let design = design_couplings(sd, &row, xi0, windings, 1.0).map_err(|e| e.to_string())?;
    Ok(evolve_spectral(sd, &design.tau, 1.0).iter().map(|z| z.norm()).collect())
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_10() -> Outcome {
    let mut worst = 0.0f64;
    for name in ["hypercube:1", "cycle:4", "cycle:6", "cycle:8", "hypercube:3", "hypercube:4", "example1"] {
        let c = coefficients(name);
        let sd = spectral(&c)?;
        let d = c.diameter();
        let m = sd.eigenvalues.len();
        let base = moduli(&sd, d, 0.0, &[])?;
        for l in 0..m {
            let mut w = vec![0i64; m];
            w[l] = 1;
            worst = worst.max(max_diff(&base, &moduli(&sd, d, 0.0, &w)?));
        }
        worst = worst.max(max_diff(&base, &moduli(&sd, d, 0.0, &vec![1; m])?));
        for k in 0..8 {
            let xi0 = 2.0 * PI * k as f64 / 8.0;
            worst = worst.max(max_diff(&base, &moduli(&sd, d, xi0, &[])?));
        }
        if worst > INVARIANCE_TOL {
            return Err(format!("{name}: |gamma(t*)| changed by {worst:.2e}"));
        }
    }

    for name in ["cycle:7", "cycle:10", "hypercube:4", "johnson:6,3", "path:6"] {
        let g = graph(name);
        let n = g.n();
        for stride in (1..n).filter(|s| gcd(*s, n) == 1).take(3) {
            let perm: Vec<usize> = (0..n).map(|v| (stride * v + 3) % n).collect();
            let h = g.relabel(&perm).map_err(|e| e.to_string())?;
            for origin in 0..n {
                let (a, b) = (isg_check(&g, origin).unwrap(), isg_check(&h, perm[origin]).unwrap());
                if a.is_isg != b.is_isg || a.degrees != b.degrees {
                    return Err(format!("{name}: isg_check differs after relabeling (origin {origin})"));
                }
                if a.is_isg && szego_jacobi(&g, origin).unwrap() != szego_jacobi(&h, perm[origin]).unwrap() {
                    return Err(format!("{name}: coefficients differ after relabeling (origin {origin})"));
                }
            }
        }
    }
    Ok(format!("winding and xi0 moduli drift {worst:.1e} <= {INVARIANCE_TOL:.0e}; relabeling invariant"))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("golden example 1", criterion_1),
        ("golden example 2", criterion_2),
        ("coefficient formulas", criterion_3),
        ("spectral machinery", criterion_4),
        ("reflectivity", criterion_5),
        ("Bell generation", criterion_6),
        ("oracle equivalence", criterion_7),
        ("scheme layer", criterion_8),
        ("Heisenberg realization", criterion_9),
        ("invariances", criterion_10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{:>2}] {title}: {detail} ({:.2}s)", k + 1, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {}/{} passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
