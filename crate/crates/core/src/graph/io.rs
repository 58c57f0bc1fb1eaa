//! JSON graph file format.
//!
//! ```json
//! {
//!   "nodes": [0, 1, 2],
//!   "edges": [[0, 1, 1.0], [1, 2, 2.5]],
//!   "mu": [0.25, 0.5, 0.25],
//!   "attributes": [
//!     { "curves": [[0.1, 0.4, 0.2]], "histograms": [{ "bin_width": 5.0, "masses": [0.5, 0.5] }] },
//!     ...
//!   ]
//! }
//! ```
//!
//! `nodes` must list `0..N` in order. `mu` defaults to uniform, `attributes`
//! may be omitted for plain graphs. Floats are written with shortest
//! round-trip formatting, so load/save is lossless for finite values.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{uniform_measure, AttributedGraph, Edge};
use crate::attributes::AttributeBundle;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attributes: Option<Vec<AttributeBundle>>,
}

impl TryFrom<GraphFile> for AttributedGraph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        let n = file.nodes.len();
        if file.nodes.iter().enumerate().any(|(idx, &id)| idx != id) {
            return Err(Error::InvalidGraph("node ids must be 0..N in order".into()));
        }
        let edges = file
            .edges
            .into_iter()
            .map(|(i, j, length)| Edge { i, j, length })
            .collect();
        let mu = file.mu.unwrap_or_else(|| uniform_measure(n));
        AttributedGraph::with_parts(n, edges, mu, file.attributes)
    }
}

impl From<&AttributedGraph> for GraphFile {
    fn from(g: &AttributedGraph) -> Self {
        Self {
            nodes: (0..g.node_count()).collect(),
            edges: g.edges().iter().map(|e| (e.i, e.j, e.length)).collect(),
            mu: Some(g.mu().to_vec()),
            attributes: g.attributes().map(<[_]>::to_vec),
        }
    }
}

impl AttributedGraph {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&GraphFile::from(self))?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attributes::{Curve, Histogram};
    use proptest::prelude::*;

    #[test]
    fn missing_mu_defaults_to_uniform() {
        let g = AttributedGraph::from_json(r#"{"nodes":[0,1,2],"edges":[[0,1,1.0],[1,2,2.0]]}"#)
            .unwrap();
        assert_eq!(g.mu(), &[1.0 / 3.0; 3]);
        assert!(g.attributes().is_none());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(AttributedGraph::from_json(r#"{"nodes":[1,0],"edges":[]}"#).is_err());
        assert!(AttributedGraph::from_json(r#"{"nodes":[0,1],"edges":[[0,1,-1.0]]}"#).is_err());
        assert!(AttributedGraph::from_json(r#"{"nodes":[0],"edges":[],"extra":1}"#).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_lossless(
            lengths in prop::collection::vec(1e-6f64..1e6, 1..8),
            samples in prop::collection::vec(-1e3f64..1e3, 2..6),
            raw in prop::collection::vec(0.01f64..1.0, 2..5),
        ) {
            let n = lengths.len() + 1;
            let edges = lengths
                .iter()
                .enumerate()
                .map(|(v, &length)| Edge { i: v, j: v + 1, length })
                .collect();
            let total: f64 = raw.iter().sum();
            let masses: Vec<f64> = raw.iter().map(|m| m / total).collect();
            let bundle = AttributeBundle {
                curves: vec![Curve::new(samples.clone()).unwrap()],
                histograms: vec![Histogram::new(masses, 5.0).unwrap()],
            };
            let g = AttributedGraph::new(n, edges)
                .unwrap()
                .with_attributes(vec![bundle; n])
                .unwrap();
            let back = AttributedGraph::from_json(&g.to_json().unwrap()).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
