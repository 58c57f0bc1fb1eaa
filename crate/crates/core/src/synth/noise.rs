//! Structural noise for distance matrices.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;

/// Adds `N(0, sigma)` to every off-diagonal pair (one draw per pair) and
/// clips at zero.
pub fn gaussian_noise(d: &DistanceMatrix, sigma: f64, rng: &mut impl Rng) -> Result<DistanceMatrix> {
    if sigma.is_nan() || sigma < 0.0 {
        return Err(Error::InvalidParameter(format!("sigma must be >= 0, got {sigma}")));
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(format!("sigma {sigma}: {e}")))?;
    DistanceMatrix::from_fn(d.len(), |i, j| (d.get(i, j) + normal.sample(rng)).max(0.0))
}

/// Symmetric matrix of independent `U(0, 1)` entries with zero diagonal,
/// carrying no structure at all.
pub fn pure_noise(n: usize, rng: &mut impl Rng) -> DistanceMatrix {
    DistanceMatrix::from_fn(n, |_, _| rng.random::<f64>()).expect("uniform entries are valid distances")
}
