use std::fmt::Write as _;

use bellnet_core::bell::{
    design_couplings, entanglement_bound, evolve_spectral, feasible_row, scan_feasible_rows, trajectory,
    verify_design, Network,
};
use bellnet_core::catalog::{self, CatalogItem};
use bellnet_core::graph::{distance_matrices, is_antipodal, is_reflective, isg_check, stratify, szego_jacobi};
use bellnet_core::heisenberg::{
    full_vs_sector_evolution, heisenberg_hamiltonian, magnetization_conservation_check, realize_design,
    sector_restriction_check, ClassFit,
};
use bellnet_core::io::{fmt_num, matrix_rows, to_json_pretty, write_edge_list, CoefficientFile};
use bellnet_core::scheme::{bose_mesner_residual, distance_polynomial_residual, intersection_numbers, scheme_szego_jacobi};
use bellnet_core::{
    BellDesign, DegreeTriple, Error, SchemeWitness, SpectralData, SzegoJacobi, VerificationReport,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::input::Source;
use crate::{CliError, DesignArgs};

#[derive(Serialize)]
struct StratumBound {
    stratum: usize,
    size: usize,
    bound: f64,
}

#[derive(Serialize)]
struct FeasibleSummary {
    stratum: usize,
    p_plus: f64,
    p_minus: f64,
}

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    source: &'a str,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    origin: Option<usize>,
    /// `null` for coefficient inputs, which carry no vertex structure.
    isg: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degrees: Option<Vec<DegreeTriple>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    antipodal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reflective: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<SzegoJacobi>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvalues: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pmat: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    feasible_strata: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    feasible: Option<Vec<FeasibleSummary>>,
    /// Entanglement bound per stratum; empty when stratum sizes are unknown.
    #[serde(skip_serializing_if = "Option::is_none")]
    bounds: Option<Vec<StratumBound>>,
}

impl<'a> AnalyzeReport<'a> {
    fn empty(source: &'a str, kind: &'static str) -> Self {
        Self {
            source,
            kind,
            n: None,
            origin: None,
            isg: None,
            witness: None,
            degrees: None,
            sizes: None,
            antipodal: None,
            reflective: None,
            coefficients: None,
            eigenvalues: None,
            weights: None,
            pmat: None,
            feasible_strata: None,
            feasible: None,
            bounds: None,
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(to_json_pretty(value)?)
}

pub fn analyze(source: &Source, origin: usize, tol: f64) -> Result<String, CliError> {
    check_tol(tol)?;
    let mut report = match source {
        Source::Graph { label, graph } => {
            let verdict = isg_check(graph, origin)?;
            let mut r = AnalyzeReport::empty(label, "graph");
            r.n = Some(graph.n());
            r.origin = Some(origin);
            r.isg = Some(verdict.is_isg);
            if !verdict.is_isg {
                // Not an error: the verdict itself is the result.
                r.witness = verdict.witness;
                return json(&r);
            }
            r.degrees = Some(verdict.degrees);
            r.antipodal = Some(is_antipodal(&stratify(graph, origin)?));
            r
        }
        Source::Coefficients { label, .. } => AnalyzeReport::empty(label, "coefficients"),
    };
    let (c, sizes) = source.coefficients(origin)?;
    let sd = SpectralData::new(&c)?;
    let rows = scan_feasible_rows(&sd.pmat, tol);
    if report.antipodal.is_none() {
        report.antipodal = sizes.as_ref().map(|s| s.last() == Some(&1));
    }
    report.reflective = Some(is_reflective(&c));
    report.bounds = Some(match &sizes {
        Some(s) => (1..s.len()).map(|i| StratumBound { stratum: i, size: s[i], bound: entanglement_bound(s[i]) }).collect(),
        None => Vec::new(),
    });
    report.sizes = sizes;
    report.coefficients = Some(c);
    report.feasible_strata = Some(rows.iter().map(|r| r.stratum).collect());
    report.feasible =
        Some(rows.iter().map(|r| FeasibleSummary { stratum: r.stratum, p_plus: r.p_plus, p_minus: r.p_minus }).collect());
    report.pmat = Some(matrix_rows(&sd.pmat));
    report.eigenvalues = Some(sd.eigenvalues);
    report.weights = Some(sd.weights);
    json(&report)
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--tol must be positive, got {tol}")))
    }
}

struct Designed {
    source: Source,
    coefficients: SzegoJacobi,
    sizes: Option<Vec<usize>>,
    spectral: SpectralData,
    design: BellDesign,
}

fn build_design(args: &DesignArgs) -> Result<Designed, CliError> {
    check_tol(args.tol)?;
    let source = args.source.load()?;
    let (coefficients, sizes) = source.coefficients(args.origin)?;
    let spectral = SpectralData::new(&coefficients)?;
    let d = coefficients.diameter();
    let stratum = args.stratum.unwrap_or(d);
    if stratum == 0 || stratum > d {
        return Err(Error::NoSuchStratum { stratum, diameter: d }.into());
    }
    let row = feasible_row(&spectral.pmat, stratum, args.tol)?;
    let design = design_couplings(&spectral, &row, args.xi0, &args.windings, args.tstar)?;
    Ok(Designed { source, coefficients, sizes, spectral, design })
}

fn network<'a>(d: &'a Designed, origin: usize) -> Network<'a> {
    match &d.source {
        Source::Graph { graph, .. } => Network::Graph { graph, origin },
        Source::Coefficients { .. } => Network::Coefficients { sizes: d.sizes.as_deref() },
    }
}

#[derive(Serialize)]
struct DesignReport<'a> {
    #[serde(flatten)]
    design: &'a BellDesign,
    verification: VerificationReport,
}

pub fn design(args: &DesignArgs) -> Result<String, CliError> {
    let d = build_design(args)?;
    let verification = verify_design(&d.coefficients, &d.design, network(&d, args.origin))?;
    json(&DesignReport { design: &d.design, verification })
}

pub fn evolve(args: &DesignArgs, tmax: Option<f64>, samples: usize) -> Result<String, CliError> {
    let tmax = tmax.unwrap_or(args.tstar);
    if !(tmax > 0.0 && tmax.is_finite()) {
        return Err(CliError::Usage(format!("--tmax must be positive, got {tmax}")));
    }
    if samples < 2 {
        return Err(CliError::Usage(format!("--samples must be at least 2, got {samples}")));
    }
    let d = build_design(args)?;
    let times: Vec<f64> = (0..samples)
        .map(|k| if k + 1 == samples { tmax } else { tmax * k as f64 / (samples - 1) as f64 })
        .collect();
    let i = d.design.stratum;
    let n_i = d.sizes.as_ref().map(|s| s[i]);
    let traj = trajectory(&d.spectral, &d.design, &times, n_i);

    let mut out = String::from("t");
    for l in 0..=d.coefficients.diameter() {
        let _ = write!(out, ",re_gamma_{l},im_gamma_{l}");
    }
    out.push_str(",concurrence_0i\n");
    for ((t, gamma), conc) in traj.times.iter().zip(&traj.gamma).zip(&traj.concurrence) {
        out.push_str(&fmt_num(*t));
        for g in gamma {
            let _ = write!(out, ",{},{}", fmt_num(g.re), fmt_num(g.im));
        }
        let _ = writeln!(out, ",{}", fmt_num(*conc));
    }
    Ok(out)
}

#[derive(Serialize)]
struct SchemeReport<'a> {
    source: &'a str,
    is_scheme: bool,
    d: usize,
    intersection_numbers: Option<Vec<Vec<Vec<i64>>>>,
    bose_mesner_residual: Option<i64>,
    szego_jacobi: Option<SzegoJacobi>,
    /// `max |A_i - sqrt(n_i) P_i(A)|`
    distance_polynomial_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<SchemeWitness>,
}

pub fn verify_scheme(source: &Source) -> Result<String, CliError> {
    let g = source.graph("verify-scheme")?;
    let d = g.diameter();
    let report = match intersection_numbers(g) {
        Ok(p) => {
            let c = scheme_szego_jacobi(&p)?;
            SchemeReport {
                source: source.label(),
                is_scheme: true,
                d,
                bose_mesner_residual: Some(bose_mesner_residual(&distance_matrices(g), &p)),
                distance_polynomial_residual: Some(distance_polynomial_residual(g, &c)?),
                szego_jacobi: Some(c),
                intersection_numbers: Some(p.p),
                witness: None,
            }
        }
        Err(Error::NotScheme(w)) => SchemeReport {
            source: source.label(),
            is_scheme: false,
            d,
            intersection_numbers: None,
            bose_mesner_residual: None,
            szego_jacobi: None,
            distance_polynomial_residual: None,
            witness: Some(w),
        },
        Err(e) => return Err(e.into()),
    };
    json(&report)
}

#[derive(Serialize)]
struct HeisenbergReport {
    n: usize,
    origin: usize,
    stratum: usize,
    per_class: Vec<ClassFit>,
    /// Heisenberg coupling per distance class.
    couplings: Vec<f64>,
    magnetization_residual: f64,
    /// Full space vs fitted one-excitation evolution at `tstar`.
    evolution_deviation: f64,
    /// Full-space stratum amplitudes vs the spectral target, up to a global phase.
    target_deviation: f64,
    concurrence: f64,
}

pub fn heisenberg_check(args: &DesignArgs) -> Result<String, CliError> {
    let d = build_design(args)?;
    let g = d.source.graph("heisenberg-check")?;
    let per_class = sector_restriction_check(g)?;
    let target = evolve_spectral(&d.spectral, &d.design.tau, 1.0);
    let real = realize_design(g, &d.design, &target, args.origin)?;
    let h = heisenberg_hamiltonian(g, &real.couplings, d.design.tstar)?;
    let cmp = full_vs_sector_evolution(g, &real.couplings, d.design.tstar, args.origin, d.design.tstar)?;
    json(&HeisenbergReport {
        n: g.n(),
        origin: args.origin,
        stratum: d.design.stratum,
        per_class,
        magnetization_residual: magnetization_conservation_check(&h)?,
        evolution_deviation: cmp.deviation,
        target_deviation: real.deviation,
        concurrence: real.concurrence,
        couplings: real.couplings,
    })
}

fn list_numbers(v: &[f64]) -> String {
    v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(",")
}

fn catalog_line(address: &str) -> Result<String, CliError> {
    let item = catalog::resolve(address)?;
    let c = match &item {
        CatalogItem::Graph { graph, .. } => szego_jacobi(graph, 0)?,
        CatalogItem::Preset(p) => p.coefficients.clone(),
    };
    Ok(format!(
        "{}\t{}\t{}\tomega=[{}] alpha=[{}]",
        item.name(),
        item.kind(),
        c.diameter(),
        list_numbers(c.omega()),
        list_numbers(c.alpha())
    ))
}

pub fn catalog_list(jobs: usize) -> Result<String, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("--jobs {jobs}: {e}")))?;
    let entries = catalog::standard_entries();
    let lines: Vec<String> =
        pool.install(|| entries.par_iter().map(|a| catalog_line(a)).collect::<Result<_, _>>())?;
    Ok(std::iter::once("name\tkind\td\tcoefficients".to_string()).chain(lines).collect::<Vec<_>>().join("\n"))
}

pub fn catalog_emit(name: &str) -> Result<String, CliError> {
    match catalog::resolve(name)? {
        CatalogItem::Graph { graph, .. } => Ok(write_edge_list(&graph)),
        CatalogItem::Preset(p) => json(&CoefficientFile { coefficients: p.coefficients, sizes: p.sizes }),
    }
}
