//! Partitioning of node-attributed graphs with Fréchet k-means and
//! semi-relaxed (fused) Gromov–Wasserstein transport onto a small target.

pub mod attributes;
pub mod embeddings;
pub mod error;
pub mod eval;
pub mod graph;
pub mod kmeans;
pub mod ot;
pub mod partition;
pub mod pipeline;
pub mod synth;
pub mod targets;

pub use attributes::{AttributeBundle, Curve, Histogram};
pub use error::{Error, Result};
pub use graph::{AttributedGraph, DistanceMatrix, Edge};
pub use partition::Partition;
