use std::fs;
use std::path::PathBuf;

use bellnet_core::catalog::{self, CatalogItem};
use bellnet_core::graph::{stratify, szego_jacobi};
use bellnet_core::io::{parse_edge_list, CoefficientFile};
use bellnet_core::{Graph, SzegoJacobi};
use clap::Args;

use crate::CliError;

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Catalog address, e.g. `cycle:6`, `johnson:6,3`, `wells`
    #[arg(long)]
    pub catalog: Option<String>,
    /// Edge-list file
    #[arg(long, value_name = "FILE")]
    pub edges: Option<PathBuf>,
    /// Coefficient file `{"omega": [...], "alpha": [...]}`
    #[arg(long, value_name = "FILE")]
    pub coeffs: Option<PathBuf>,
}

pub enum Source {
    Graph { label: String, graph: Graph },
    Coefficients { label: String, coefficients: SzegoJacobi, sizes: Option<Vec<usize>> },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

impl SourceArgs {
    pub fn load(&self) -> Result<Source, CliError> {
        if let Some(address) = &self.catalog {
            return Ok(match catalog::resolve(address)? {
                CatalogItem::Graph { name, graph } => Source::Graph { label: name, graph },
                CatalogItem::Preset(p) => Source::Coefficients { label: p.name, coefficients: p.coefficients, sizes: p.sizes },
            });
        }
        if let Some(path) = &self.edges {
            let graph = parse_edge_list(&read(path)?)?.to_graph()?;
            return Ok(Source::Graph { label: path.display().to_string(), graph });
        }
        if let Some(path) = &self.coeffs {
            let file = CoefficientFile::parse(&read(path)?)?;
            return Ok(Source::Coefficients {
                label: path.display().to_string(),
                coefficients: file.coefficients,
                sizes: file.sizes,
            });
        }
        Err(CliError::Usage("one of --catalog, --edges, --coeffs is required".into()))
    }
}

impl Source {
    pub fn label(&self) -> &str {
        match self {
            Self::Graph { label, .. } | Self::Coefficients { label, .. } => label,
        }
    }

    pub fn graph(&self, command: &str) -> Result<&Graph, CliError> {
        match self {
            Self::Graph { graph, .. } => Ok(graph),
            Self::Coefficients { label, .. } => Err(CliError::Usage(format!(
                "`{command}` needs a vertex-level graph, but `{label}` only provides coefficients"
            ))),
        }
    }

    /// Coefficients seen from `origin` together with stratum sizes, if known.
    pub fn coefficients(&self, origin: usize) -> Result<(SzegoJacobi, Option<Vec<usize>>), CliError> {
        match self {
            Self::Graph { graph, .. } => {
                Ok((szego_jacobi(graph, origin)?, Some(stratify(graph, origin)?.sizes())))
            }
            Self::Coefficients { coefficients, sizes, .. } => Ok((coefficients.clone(), sizes.clone())),
        }
    }
}
