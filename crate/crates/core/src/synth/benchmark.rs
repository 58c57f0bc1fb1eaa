//! Complete synthetic instances: SBM structure, optional attributes, truth.

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{block_matrix, gaussian_noise, gen_attributes, perturbation_level, pure_noise, sample_sbm, BlockModelConfig, Shape};
use crate::attributes::{AttributeBundle, AttributeMetric, DtwCost};
use crate::error::Result;
use crate::graph::{uniform_measure, AttributedGraph, DistanceMatrix};
use crate::partition::Partition;
use crate::pipeline::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    /// Geodesic distances of a sampled SBM graph.
    #[default]
    Graph,
    /// Uniform noise in place of the structural distances.
    Noise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub sizes: Vec<usize>,
    pub shape: Shape,
    pub b: f64,
    pub t: f64,
    pub level: Option<u8>,
    pub structure: Structure,
    /// Standard deviation of Gaussian noise added to the structural matrix.
    pub noise_sigma: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    /// Max-normalized structural distances.
    pub ds: DistanceMatrix,
    pub graph: Option<AttributedGraph>,
    pub attributes: Option<Vec<AttributeBundle>>,
    pub block: Array2<f64>,
    pub truth: Partition,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

impl SyntheticSpec {
    pub fn generate(&self, seed: u64) -> Result<Synthetic> {
        let block = block_matrix(&BlockModelConfig {
            sizes: self.sizes.clone(),
            shape: self.shape,
            b: self.b,
            t: self.t,
            rng_seed: seed,
        })?;
        let attributes = match self.level {
            Some(level) => {
                let lvl = perturbation_level(level)?;
                Some(gen_attributes(&self.sizes, lvl.epsilon, lvl.c, &mut stream(seed, 2))?)
            }
            None => None,
        };
        let n: usize = self.sizes.iter().sum();
        let (graph, truth, ds) = match self.structure {
            Structure::Graph => {
                let (g, truth) = sample_sbm(&block, &self.sizes, &mut stream(seed, 1))?;
                let g = match &attributes {
                    Some(a) => g.with_attributes(a.clone())?,
                    None => g,
                };
                let ds = g.geodesic_distances()?.normalize_max()?;
                (Some(g), truth, ds)
            }
            Structure::Noise => {
                let truth = Partition::new(super::planted_labels(&self.sizes), self.sizes.len())?;
                (None, truth, pure_noise(n, &mut stream(seed, 1)).normalize_max()?)
            }
        };
        let ds = match self.noise_sigma {
            Some(sigma) => gaussian_noise(&ds, sigma, &mut stream(seed, 3))?.normalize_max()?,
            None => ds,
        };
        Ok(Synthetic {
            ds,
            graph,
            attributes,
            block,
            truth,
        })
    }
}

impl Synthetic {
    pub fn instance(&self, beta: f64, dtw_cost: DtwCost) -> Result<Instance> {
        let da = match &self.attributes {
            Some(bundles) => Some(AttributeMetric::fit(bundles, beta, dtw_cost)?.1),
            None => None,
        };
        Ok(Instance {
            ds: self.ds.clone(),
            da,
            mu: uniform_measure(self.ds.len()),
            k: self.truth.k(),
            block: Some(self.block.clone()),
        })
    }
}
