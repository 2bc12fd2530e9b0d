//! Graph families and coefficient presets.
//!
//! Entries are addressed as `family:param[,param]`, e.g. `cycle:6`,
//! `hypercube:3`, `johnson:5,2`, `wells`, `tchebichef:5`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, SzegoJacobi};

pub const MAX_HYPERCUBE_DIM: usize = 14;
pub const MAX_JOHNSON_VERTICES: u128 = 100_000;

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::TooSmall { family: "cycle", detail: format!("n = {n}, need n >= 3") });
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges)
}

pub fn path(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::TooSmall { family: "path", detail: "n = 0".into() });
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &edges)
}

/// `d`-dimensional hypercube on bitstrings, adjacent at Hamming distance 1.
pub fn hypercube(d: usize) -> Result<Graph> {
    if d < 1 {
        return Err(Error::TooSmall { family: "hypercube", detail: "d = 0, need d >= 1".into() });
    }
    if d > MAX_HYPERCUBE_DIM {
        return Err(Error::TooLarge { family: "hypercube", detail: format!("d = {d} > {MAX_HYPERCUBE_DIM}") });
    }
    let n = 1usize << d;
    let mut edges = Vec::with_capacity(n * d / 2);
    for x in 0..n {
        for b in 0..d {
            let y = x ^ (1 << b);
            if x < y {
                edges.push((x, y));
            }
        }
    }
    Graph::new(n, &edges)
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Johnson graph on the `k`-subsets of `{0..n}`, adjacent when they share
/// `k - 1` elements. Vertices are numbered in increasing bitmask order.
pub fn johnson(n: usize, k: usize) -> Result<Graph> {
    if k < 1 || k >= n {
        return Err(Error::TooSmall { family: "johnson", detail: format!("need 1 <= k < n, got n = {n}, k = {k}") });
    }
    let count = binomial(n, k);
    if n > 63 || count > MAX_JOHNSON_VERTICES {
        return Err(Error::TooLarge { family: "johnson", detail: format!("C({n}, {k}) = {count} vertices") });
    }
    let subsets: Vec<u64> = (0u64..1 << n).filter(|m| m.count_ones() as usize == k).collect();
    let index: HashMap<u64, usize> = subsets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut edges = Vec::new();
    for (u, &m) in subsets.iter().enumerate() {
        for out in (0..n).filter(|b| m & (1 << b) != 0) {
            for inn in (0..n).filter(|b| m & (1 << b) == 0) {
                let v = index[&(m ^ (1 << out) ^ (1 << inn))];
                if u < v {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::new(subsets.len(), &edges)
}

/// A coefficient set without an explicit vertex-level construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub coefficients: SzegoJacobi,
    /// Stratum sizes, when known.
    pub sizes: Option<Vec<usize>>,
    pub note: &'static str,
}

const PRESET_NAMES: [&str; 6] = ["wells", "hadamard", "do4", "j84", "example1", "tchebichef"];

pub fn preset_names() -> &'static [&'static str] {
    &PRESET_NAMES
}

/// Coefficient-only presets.
pub fn preset(name: &str) -> Result<Preset> {
    let (family, param) = match name.split_once(':') {
        Some((f, p)) => (f, Some(p)),
        None => (name, None),
    };
    if family != "tchebichef" && param.is_some() {
        return Err(Error::UnknownPreset(name.to_string()));
    }
    let bip = |omega: &[f64]| SzegoJacobi::bipartite(omega.to_vec());
    let (coefficients, note) = match family {
        "wells" => (
            SzegoJacobi::new(vec![5.0, 4.0, 4.0, 5.0], vec![0.0, 0.0, 3.0, 0.0, 0.0])?,
            "Wells graph coefficients (coefficient list only, no vertex construction)",
        ),
        "hadamard" => (
            bip(&[12.0, 66.0, 66.0, 12.0])?,
            "Hadamard network coefficients (coefficient list only, no vertex construction)",
        ),
        "do4" => (
            SzegoJacobi::new(vec![16.0, 36.0, 36.0, 16.0], vec![0.0, 6.0, 8.0, 6.0, 0.0])?,
            "preset 'DO(4)' list; does not match the standard doubled odd graph (valency 4)",
        ),
        "j84" => (
            bip(&[4.0, 3.0, 6.0, 4.0, 6.0, 3.0, 4.0])?,
            "preset 'J(8,4)' list (d = 7); does not match the Johnson graph J(8,4) (d = 4, valency 16), see johnson:8,4",
        ),
        "example1" => (
            bip(&[4.0, 2.0, 2.0, 4.0])?,
            "mirror-symmetric ISG with omega = (4, 2, 2, 4)",
        ),
        "tchebichef" => {
            let d = match param {
                None => 5,
                Some(p) => parse_usize(p, name)?,
            };
            if d < 1 {
                return Err(Error::TooSmall { family: "tchebichef", detail: "d = 0".into() });
            }
            let mut omega = vec![2.0; d];
            omega[0] = 4.0;
            (bip(&omega)?, "Tchebichef network of the first kind, omega = (4, 2, .., 2)")
        }
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    let name = match (family, param) {
        ("tchebichef", None) => "tchebichef:5".to_string(),
        _ => name.to_string(),
    };
    Ok(Preset { name, coefficients, sizes: None, note })
}

#[derive(Debug, Clone, PartialEq)]
pub enum CatalogItem {
    Graph { name: String, graph: Graph },
    Preset(Preset),
}

impl CatalogItem {
    pub fn name(&self) -> &str {
        match self {
            Self::Graph { name, .. } => name,
            Self::Preset(p) => &p.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Graph { .. } => "graph",
            Self::Preset(_) => "coefficients",
        }
    }
}

impl fmt::Display for CatalogItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name(), self.kind())
    }
}

fn parse_usize(s: &str, address: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad parameter `{s}` in catalog address `{address}`")))
}

/// Resolves a catalog address.
pub fn resolve(address: &str) -> Result<CatalogItem> {
    let (family, params) = address.split_once(':').unwrap_or((address, ""));
    let params: Vec<usize> = if params.is_empty() {
        Vec::new()
    } else {
        params.split(',').map(|p| parse_usize(p, address)).collect::<Result<_>>()?
    };
    let one = |params: &[usize]| match params {
        [p] => Ok(*p),
        _ => Err(Error::Parse(format!("`{address}` takes exactly one parameter"))),
    };
    let graph = match family {
        "cycle" => cycle(one(&params)?)?,
        "path" => path(one(&params)?)?,
        "hypercube" => hypercube(one(&params)?)?,
        "johnson" => match params[..] {
            [n, k] => johnson(n, k)?,
            _ => return Err(Error::Parse(format!("`{address}` needs two parameters n,k"))),
        },
        _ => return preset(address).map(CatalogItem::Preset),
    };
    Ok(CatalogItem::Graph { name: address.to_string(), graph })
}

/// Addresses swept by `catalog list` and by the catalog-wide property tests.
/// Every graph entry is an ISG from every vertex.
pub fn standard_entries() -> Vec<String> {
    let mut out: Vec<String> = (3..=16).map(|n| format!("cycle:{n}")).collect();
    out.extend((1..=8).map(|d| format!("hypercube:{d}")));
    out.extend(["johnson:4,2", "johnson:5,2", "johnson:6,2", "johnson:6,3", "johnson:7,3", "johnson:8,4"].map(String::from));
    out.extend(["wells", "hadamard", "do4", "j84", "example1", "tchebichef:5"].map(String::from));
    out
}
