//! Feature-map embeddings: each node becomes its row of distances, and the
//! embedded nodes are compared with the Euclidean norm.

use crate::error::{Error, Result};
use crate::graph::{check_unit, DistanceMatrix};

/// Node `i` mapped to row `i` of `ds`.
pub fn phi_structural(ds: &DistanceMatrix) -> Vec<Vec<f64>> {
    ds.values().rows().into_iter().map(|r| r.to_vec()).collect()
}

/// `alpha * phi_S + (1 - alpha) * phi_A`, row by row.
pub fn phi_alpha(ds: &DistanceMatrix, da: &DistanceMatrix, alpha: f64) -> Result<Vec<Vec<f64>>> {
    check_unit(alpha, "alpha")?;
    if ds.len() != da.len() {
        return Err(Error::ShapeMismatch {
            expected: (ds.len(), ds.len()),
            got: (da.len(), da.len()),
        });
    }
    Ok(ds
        .values()
        .rows()
        .into_iter()
        .zip(da.values().rows())
        .map(|(s, a)| s.iter().zip(a).map(|(&s, &a)| alpha * s + (1.0 - alpha) * a).collect())
        .collect())
}

/// Pairwise Euclidean distances between points.
pub fn euclidean_pairwise(points: &[Vec<f64>]) -> Result<DistanceMatrix> {
    let dim = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch);
    }
    DistanceMatrix::from_fn(points.len(), |i, j| {
        points[i]
            .iter()
            .zip(&points[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    })
}

/// Distance matrix of the row embedding of `d`.
pub fn embedded_distances(d: &DistanceMatrix) -> DistanceMatrix {
    euclidean_pairwise(&phi_structural(d)).expect("rows of a square matrix share one dimension")
}
