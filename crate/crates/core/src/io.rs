//! File formats and number formatting.
//!
//! Edge lists: a header line `n m`, then `m` lines `u v`. Lines starting
//! with `#` and blank lines are ignored. Labels that are all integers below
//! `n` are used as vertex ids; any other labels are mapped to dense ids in
//! order of first appearance.
//!
//! Coefficient files: `{"omega": [...], "alpha": [...]}` with an optional
//! `"sizes"` array of stratum sizes.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{Graph, SzegoJacobi};
use crate::jacobi::SpectralData;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let r: f64 = s.parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Text with at most 12 significant digits and a `.` separator; magnitudes
/// outside `[1e-4, 1e15)` use exponent notation.
pub fn fmt_num(v: f64) -> String {
    let r = round_sig(v);
    // Negative zero would print as "-0".
    if r == 0.0 {
        return "0".into();
    }
    if (1e-4..1e15).contains(&r.abs()) || !r.is_finite() {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Recursively rounds every float in a JSON value.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round_sig(n.as_f64().unwrap_or(0.0));
            serde_json::Number::from_f64(if r == 0.0 { 0.0 } else { r }).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Serialises with every float rounded to 12 significant digits.
pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    serde_json::to_string_pretty(&round_json(v)).map_err(|e| Error::Parse(e.to_string()))
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    /// Original label of each vertex id.
    pub labels: Vec<String>,
}

impl EdgeList {
    pub fn to_graph(&self) -> Result<Graph> {
        Graph::new(self.n, &self.edges)
    }
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (lineno, header) = lines.next().ok_or_else(|| Error::Parse("empty edge list".into()))?;
    let header: Vec<&str> = header.split_whitespace().collect();
    let parse_count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Parse(format!("line {lineno}: expected `n m`, got `{s}`")))
    };
    let (n, m) = match header[..] {
        [n, m] => (parse_count(n)?, parse_count(m)?),
        _ => return Err(Error::Parse(format!("line {lineno}: expected `n m` header"))),
    };

    let mut raw = Vec::with_capacity(m);
    for (lineno, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[..] {
            [u, v] => raw.push((u.to_string(), v.to_string())),
            _ => return Err(Error::Parse(format!("line {lineno}: expected `u v`, got `{line}`"))),
        }
    }
    if raw.len() != m {
        return Err(Error::Parse(format!("header promises {m} edges, found {}", raw.len())));
    }

    let numeric: Option<Vec<(usize, usize)>> = raw
        .iter()
        .map(|(u, v)| Some((u.parse::<usize>().ok()?, v.parse::<usize>().ok()?)))
        .collect();
    if let Some(edges) = numeric.filter(|e| e.iter().all(|&(u, v)| u < n && v < n)) {
        let labels = (0..n).map(|i| i.to_string()).collect();
        return Ok(EdgeList { n, edges, labels });
    }

    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut id_of = |label: &str| -> usize {
        *ids.entry(label.to_string()).or_insert_with(|| {
            labels.push(label.to_string());
            labels.len() - 1
        })
    };
    let edges: Vec<_> = raw.iter().map(|(u, v)| (id_of(u), id_of(v))).collect();
    if labels.len() > n {
        return Err(Error::Parse(format!("{} distinct labels but header declares {n} vertices", labels.len())));
    }
    labels.extend((labels.len()..n).map(|i| format!("#{i}")));
    Ok(EdgeList { n, edges, labels })
}

pub fn write_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    #[serde(flatten)]
    pub coefficients: SzegoJacobi,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
}

impl CoefficientFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(sizes) = &file.sizes {
            let expected = file.coefficients.diameter() + 1;
            if sizes.len() != expected {
                return Err(Error::DimensionMismatch { expected, got: sizes.len() });
            }
            if sizes.contains(&0) {
                return Err(Error::InvalidParameter("stratum sizes must be positive".into()));
            }
        }
        Ok(file)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub eigenvalues: Vec<f64>,
    pub weights: Vec<f64>,
    pub pmat: Vec<Vec<f64>>,
}

impl From<&SpectralData> for SpectralReport {
    fn from(sd: &SpectralData) -> Self {
        Self { eigenvalues: sd.eigenvalues.clone(), weights: sd.weights.clone(), pmat: matrix_rows(&sd.pmat) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edge_list_numeric() {
        let text = "# a square\n4 4\n0 1\n1 2\n\n2 3\n# closing edge\n3 0\n";
        let e = parse_edge_list(text).unwrap();
        assert_eq!(e.n, 4);
        assert_eq!(e.edges, vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(e.to_graph().unwrap().distance(0, 2), 2);
    }

    #[test]
    fn edge_list_labels() {
        let e = parse_edge_list("3 2\nalice bob\nbob carol\n").unwrap();
        assert_eq!(e.labels, vec!["alice", "bob", "carol"]);
        assert_eq!(e.edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn edge_list_errors() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("2\n0 1\n").is_err());
        assert!(parse_edge_list("2 2\n0 1\n").is_err());
        assert!(parse_edge_list("2 1\n0 1 7\n").is_err());
        assert!(parse_edge_list("2 2\na b\nc d\n").is_err());
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = crate::catalog::hypercube(3).unwrap();
        let back = parse_edge_list(&write_edge_list(&g)).unwrap().to_graph().unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn coefficient_file() {
        let f = CoefficientFile::parse(r#"{"omega": [4, 2, 2, 4], "alpha": [0, 0, 0, 0, 0]}"#).unwrap();
        assert_eq!(f.coefficients.omega(), &[4.0, 2.0, 2.0, 4.0]);
        assert_eq!(f.sizes, None);
        let f = CoefficientFile::parse(r#"{"omega": [2], "alpha": [0, 0], "sizes": [1, 2]}"#).unwrap();
        assert_eq!(f.sizes, Some(vec![1, 2]));
        assert!(CoefficientFile::parse(r#"{"omega": [2], "alpha": [0, 0], "sizes": [1]}"#).is_err());
        assert!(CoefficientFile::parse(r#"{"omega": [0], "alpha": [0, 0]}"#).is_err());
        assert!(CoefficientFile::parse(r#"{"omega": [1]}"#).is_err());
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(std::f64::consts::FRAC_1_SQRT_2), "0.707106781187");
        assert_eq!(fmt_num(-2.0 * std::f64::consts::SQRT_2), "-2.82842712475");
        assert_eq!(fmt_num(1e-17), "1e-17");
    assert_eq!(fmt_num(-1.3877787807814457e-17), "-1.38777878078e-17");
    assert_eq!(fmt_num(2.5e20), "2.5e20");
    assert_eq!(fmt_num(0.00025), "0.00025");
    }

    #[test]
    fn json_rounding() {
        let v = serde_json::json!({"x": [std::f64::consts::PI, 1], "y": {"z": 0.1 + 0.2}});
        let r = round_json(v);
        assert_eq!(r.to_string(), r#"{"x":[3.14159265359,1],"y":{"z":0.3}}"#);
    }

    proptest! {
        #[test]
        fn rounding_keeps_twelve_digits(v in -1e6f64..1e6) {
            let r = round_sig(v);
            prop_assert!((r - v).abs() <= 1e-11 * v.abs().max(f64::MIN_POSITIVE));
            prop_assert_eq!(round_sig(r), r);
        }
    }
}
