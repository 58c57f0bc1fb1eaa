//! Stochastic block models with shaped block matrices.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, Edge};
use crate::partition::Partition;

pub const MAX_SAMPLE_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    FullyConnected,
    Sparse,
    Chain,
    Donut,
    Star,
}

impl Shape {
    pub const ALL: [Shape; 5] = [
        Shape::FullyConnected,
        Shape::Sparse,
        Shape::Chain,
        Shape::Donut,
        Shape::Star,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Shape::FullyConnected => "fully-connected",
            Shape::Sparse => "sparse",
            Shape::Chain => "chain",
            Shape::Donut => "donut",
            Shape::Star => "star",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockModelConfig {
    pub sizes: Vec<usize>,
    pub shape: Shape,
    #[serde(default = "default_b")]
    pub b: f64,
    pub t: f64,
    pub rng_seed: u64,
}

fn default_b() -> f64 {
    1.0
}

impl BlockModelConfig {
    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::InvalidParameter("every group needs at least one node".into()));
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::InvalidParameter(format!("b must be positive, got {}", self.b)));
        }
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t must be nonnegative, got {}", self.t)));
        }
        Ok(())
    }
}

fn mask_connected(mask: &Array2<bool>) -> bool {
    let k = mask.nrows();
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(r) = stack.pop() {
        for s in 0..k {
            if mask[[r, s]] && !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

/// Which group pairs may be connected. The diagonal is always allowed.
pub fn shape_mask(shape: Shape, k: usize, rng: &mut impl Rng) -> Array2<bool> {
    let fixed = |keep: &dyn Fn(usize, usize) -> bool| Array2::from_shape_fn((k, k), |(r, s)| r == s || keep(r.min(s), r.max(s)));
    match shape {
        Shape::FullyConnected => fixed(&|_, _| true),
        Shape::Chain => fixed(&|r, s| s - r == 1),
        Shape::Donut => fixed(&|r, s| s - r == 1 || (r == 0 && s == k - 1)),
        Shape::Star => fixed(&|r, _| r == 0),
        Shape::Sparse => loop {
            let mut mask = Array2::from_elem((k, k), false);
            for r in 0..k {
                mask[[r, r]] = true;
                for s in r + 1..k {
                    let keep = rng.random_bool(0.5);
                    mask[[r, s]] = keep;
                    mask[[s, r]] = keep;
                }
            }
            if mask_connected(&mask) {
                break mask;
            }
        },
    }
}

/// `P = A + t I` with `A ~ U(0, b)` under the shape mask, symmetrized,
/// column-normalized, clipped to `[0, 1]` and symmetrized once more so that
/// it can serve as an undirected edge probability.
pub fn block_matrix(cfg: &BlockModelConfig) -> Result<Array2<f64>> {
    cfg.validate()?;
    let k = cfg.k();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mask = shape_mask(cfg.shape, k, &mut rng);
    let mut p = Array2::from_shape_fn((k, k), |_| rng.random_range(0.0..cfg.b));
    p.zip_mut_with(&mask, |v, &keep| {
        if !keep {
            *v = 0.0;
        }
    });
    for r in 0..k {
        p[[r, r]] += cfg.t;
    }
    let p = (&p + &p.t()) / 2.0;
    let col_sums = p.sum_axis(ndarray::Axis(0));
    let p = Array2::from_shape_fn((k, k), |(r, s)| {
        if col_sums[s] > 0.0 {
            (p[[r, s]] / col_sums[s]).clamp(0.0, 1.0)
        } else {
            0.0
        }
    });
    Ok((&p + &p.t()) / 2.0)
}

/// Group label of every node, groups laid out contiguously.
pub fn planted_labels(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .enumerate()
        .flat_map(|(g, &s)| std::iter::repeat_n(g, s))
        .collect()
}

/// Samples a connected graph with one Bernoulli(`p[g(i)][g(j)]`) unit-length
/// edge per node pair, retrying up to `MAX_SAMPLE_ATTEMPTS` times.
pub fn sample_sbm(p: &Array2<f64>, sizes: &[usize], rng: &mut impl Rng) -> Result<(AttributedGraph, Partition)> {
    let k = sizes.len();
    if p.dim() != (k, k) {
        return Err(Error::ShapeMismatch {
            expected: (k, k),
            got: p.dim(),
        });
    }
    if p.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::InvalidMatrix("block probabilities must lie in [0, 1]".into()));
    }
    let labels = planted_labels(sizes);
    let n = labels.len();
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p[[labels[i], labels[j]]]) {
                    edges.push(Edge { i, j, length: 1.0 });
                }
            }
        }
        let g = AttributedGraph::new(n, edges)?;
        if g.is_connected() {
            return Ok((g, Partition::new(labels, k)?));
        }
    }
    Err(Error::DisconnectedSample(MAX_SAMPLE_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(shape: Shape, t: f64, seed: u64) -> BlockModelConfig {
        BlockModelConfig {
            sizes: vec![40; 5],
            shape,
            b: 1.0,
            t,
            rng_seed: seed,
        }
    }

    #[test]
    fn strong_boost_is_nearly_diagonal() {
        let p = block_matrix(&cfg(Shape::FullyConnected, 1e6, 1)).unwrap();
        for r in 0..5 {
            assert!(p[[r, r]] > 1.0 - 1e-5);
            for s in 0..5 {
                if r != s {
                    assert!(p[[r, s]] < 1e-5);
                }
            }
        }
    }

    #[test]
    fn zero_patterns_follow_shapes() {
        for seed in 0..10 {
            for shape in Shape::ALL {
                let p = block_matrix(&cfg(shape, 1.0, seed)).unwrap();
                assert_eq!(p, p.t());
                assert!(p.iter().all(|&v| (0.0..=1.0).contains(&v)));
                for r in 0..5usize {
                    for s in 0..5usize {
                        let allowed = match shape {
                            Shape::FullyConnected | Shape::Sparse => true,
                            Shape::Chain => r.abs_diff(s) <= 1,
                            Shape::Donut => r.abs_diff(s) <= 1 || r.abs_diff(s) == 4,
                            Shape::Star => r == s || r == 0 || s == 0,
                        };
                        if !allowed {
                            assert_eq!(p[[r, s]], 0.0, "{shape:?} ({r},{s})");
                        } else if shape != Shape::Sparse {
                            assert!(p[[r, s]] > 0.0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sparse_masks_stay_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut zeros = 0;
        for _ in 0..200 {
            let mask = shape_mask(Shape::Sparse, 5, &mut rng);
            assert!(mask_connected(&mask));
            zeros += mask.iter().filter(|&&m| !m).count();
        }
        assert!(zeros > 0);
    }

    #[test]
    fn pinned_block_matrix() {
        let p = block_matrix(&BlockModelConfig {
            sizes: vec![2, 2, 2],
            shape: Shape::Chain,
            b: 1.0,
            t: 1.0,
            rng_seed: 7,
        })
        .unwrap();
        let again = block_matrix(&BlockModelConfig {
            sizes: vec![2, 2, 2],
            shape: Shape::Chain,
            b: 1.0,
            t: 1.0,
            rng_seed: 7,
        })
        .unwrap();
        assert_eq!(p, again);
        assert_eq!(p[[0, 2]], 0.0);
        let pinned = [[0.7213, 0.2237, 0.0], [0.2237, 0.6036, 0.2674], [0.0, 0.2674, 0.6930]];
        for r in 0..3 {
            for s in 0..3 {
                assert!((p[[r, s]] - pinned[r][s]).abs() < 1e-4, "{p}");
            }
        }
    }

    #[test]
    fn disconnected_blocks_never_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = Array2::from_diag(&ndarray::arr1(&[1.0, 1.0]));
        assert!(matches!(sample_sbm(&p, &[3, 3], &mut rng), Err(Error::DisconnectedSample(_))));
    }

    #[test]
    fn intra_block_density_matches_probability() {
        let p = ndarray::array![[0.3, 0.05], [0.05, 0.2]];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (g, labels) = sample_sbm(&p, &[100, 100], &mut rng).unwrap();
        let mut counts = [[0usize; 2]; 2];
        for e in g.edges() {
            let (a, b) = (labels.assign()[e.i], labels.assign()[e.j]);
            counts[a.min(b)][a.max(b)] += 1;
        }
        let pairs = [[4950.0, 10000.0], [10000.0, 4950.0]];
        for (r, s) in [(0, 0), (0, 1), (1, 1)] {
            let m: f64 = pairs[r][s];
            let pr = p[[r, s]];
            let sd = (m * pr * (1.0 - pr)).sqrt();
            assert!((counts[r][s] as f64 - m * pr).abs() < 3.0 * sd, "({r},{s})");
        }
        assert!(g.edges().iter().all(|e| e.length == 1.0));
        assert_eq!(g.mu()[17], 1.0 / 200.0);
    }

    #[test]
    fn pinned_edge_list() {
        let p = ndarray::array![[0.9, 0.3], [0.3, 0.9]];
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (g, labels) = sample_sbm(&p, &[3, 2], &mut rng).unwrap();
        assert_eq!(labels.assign(), &[0, 0, 0, 1, 1]);
        let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.i, e.j)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (g2, _) = sample_sbm(&p, &[3, 2], &mut rng).unwrap();
        assert_eq!(g, g2);
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 2), (1, 4), (2, 3), (3, 4)]);
    }
}
