//! Fixtures shared by the benchmarks.

use bellnet_core::catalog::{self, CatalogItem};
use bellnet_core::graph::szego_jacobi;
use bellnet_core::{Graph, SzegoJacobi};

pub fn graph(address: &str) -> Graph {
    match catalog::resolve(address).expect("catalog address") {
        CatalogItem::Graph { graph, .. } => graph,
        CatalogItem::Preset(p) => panic!("{} has no vertex-level graph", p.name),
    }
}

pub fn coefficients(address: &str) -> SzegoJacobi {
    match catalog::resolve(address).expect("catalog address") {
        CatalogItem::Graph { graph, .. } => szego_jacobi(&graph, 0).expect("ISG"),
        CatalogItem::Preset(p) => p.coefficients,
    }
}

/// Couplings for a full-space benchmark: one per distance class.
pub fn unit_couplings(g: &Graph) -> Vec<f64> {
    vec![1.0; g.diameter() + 1]
}
