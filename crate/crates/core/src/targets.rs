//! Small `k`-node relation matrices that a source graph is transported onto.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{dijkstra, DistanceMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaMode {
    Mean,
    Max,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TargetSpec {
    EquidistantMean { k: usize },
    EquidistantMax { k: usize },
    /// `p` is a `k`-by-`k` block probability matrix.
    Coarsened { p: Vec<Vec<f64>> },
}

impl TargetSpec {
    pub fn k(&self) -> usize {
        match self {
            TargetSpec::EquidistantMean { k } | TargetSpec::EquidistantMax { k } => *k,
            TargetSpec::Coarsened { p } => p.len(),
        }
    }

    /// Target matrix for the source `ds`. Equidistant targets take their
    /// spacing from `ds`; coarsened targets are returned unscaled.
    pub fn build(&self, ds: &DistanceMatrix) -> Result<DistanceMatrix> {
        match self {
            TargetSpec::EquidistantMean { k } => equidistant_target(*k, delta_from(ds, DeltaMode::Mean)?),
            TargetSpec::EquidistantMax { k } => equidistant_target(*k, delta_from(ds, DeltaMode::Max)?),
            TargetSpec::Coarsened { p } => {
                let k = p.len();
                if p.iter().any(|row| row.len() != k) {
                    return Err(Error::ShapeMismatch {
                        expected: (k, k),
                        got: (k, p.iter().map(Vec::len).max().unwrap_or(0)),
                    });
                }
                coarsened_target(&Array2::from_shape_fn((k, k), |(r, s)| p[r][s]))
            }
        }
    }
}

/// `delta * (ones - I)`.
pub fn equidistant_target(k: usize, delta: f64) -> Result<DistanceMatrix> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::BadDelta(delta));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("target needs k >= 1".into()));
    }
    Ok(DistanceMatrix::from_trusted(Array2::from_shape_fn((k, k), |(r, s)| {
        if r == s {
            0.0
        } else {
            delta
        }
    })))
}

pub fn delta_from(d: &DistanceMatrix, mode: DeltaMode) -> Result<f64> {
    if d.len() < 2 {
        return Err(Error::DegenerateMatrix("need at least two nodes"));
    }
    let delta = match mode {
        DeltaMode::Mean => d.off_diagonal_mean().unwrap_or(0.0),
        DeltaMode::Max => d.max(),
    };
    if delta > 0.0 {
        Ok(delta)
    } else {
        Err(Error::DegenerateMatrix("all distances are zero"))
    }
}

/// Shortest-path distances on the block graph with an edge of length
/// `1 / p[r][s]` wherever `p[r][s] > 0`. Diagonal entries are ignored.
pub fn coarsened_target(p: &Array2<f64>) -> Result<DistanceMatrix> {
    let (k, cols) = p.dim();
    if k != cols || k == 0 {
        return Err(Error::ShapeMismatch {
            expected: (k, k),
            got: (k, cols),
        });
    }
    for r in 0..k {
        for s in 0..k {
            let v = p[[r, s]];
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidMatrix(format!("block entry ({r},{s}) = {v}")));
            }
            if (v - p[[s, r]]).abs() > 1e-12 * v.abs().max(1.0) {
                return Err(Error::InvalidMatrix("block matrix is not symmetric".into()));
            }
        }
    }
    let adj: Vec<Vec<(usize, f64)>> = (0..k)
        .map(|r| {
            (0..k)
                .filter(|&s| s != r && p[[r, s]] > 0.0)
                .map(|s| (s, 1.0 / p[[r.min(s), r.max(s)]]))
                .collect()
        })
        .collect();
    let mut out = Array2::zeros((k, k));
    for r in 0..k {
        let dist = dijkstra(&adj, r);
        for s in r + 1..k {
            if !dist[s].is_finite() {
                return Err(Error::DisconnectedTarget);
            }
            out[[r, s]] = dist[s];
            out[[s, r]] = dist[s];
        }
    }
    Ok(DistanceMatrix::from_trusted(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn equidistant_examples() {
        assert_eq!(equidistant_target(1, 1.0).unwrap().values(), &array![[0.0]]);
        assert_eq!(
            equidistant_target(3, 1.0).unwrap().values(),
            &array![[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]
        );
        assert!(matches!(equidistant_target(3, 0.0), Err(Error::BadDelta(_))));
        assert!(matches!(equidistant_target(3, -1.0), Err(Error::BadDelta(_))));
        let t = equidistant_target(4, 0.3).unwrap();
        assert!(t.satisfies_triangle_inequality(0.0));
    }

    #[test]
    fn delta_modes() {
        let c = DistanceMatrix::from_fn(4, |_, _| 0.5).unwrap();
        assert_eq!(delta_from(&c, DeltaMode::Mean).unwrap(), 0.5);
        assert_eq!(delta_from(&c, DeltaMode::Max).unwrap(), 0.5);
        let d = DistanceMatrix::new(array![[0.0, 1.0, 2.0], [1.0, 0.0, 4.0], [2.0, 4.0, 0.0]]).unwrap();
        assert!((delta_from(&d, DeltaMode::Mean).unwrap() - 7.0 / 3.0).abs() < 1e-15);
        assert_eq!(delta_from(&d.normalize_max().unwrap(), DeltaMode::Max).unwrap(), 1.0);
        let t = equidistant_target(3, delta_from(&d, DeltaMode::Mean).unwrap()).unwrap();
        assert!((t.get(0, 2) - 7.0 / 3.0).abs() < 1e-15);
        assert!(delta_from(&DistanceMatrix::zeros(1), DeltaMode::Mean).is_err());
        assert!(delta_from(&DistanceMatrix::zeros(3), DeltaMode::Max).is_err());
    }

    #[test]
    fn coarsened_chain() {
        let p = array![
            [0.8, 0.5, 0.0, 0.0],
            [0.5, 0.7, 0.25, 0.0],
            [0.0, 0.25, 0.9, 0.1],
            [0.0, 0.0, 0.1, 0.6]
        ];
        let t = coarsened_target(&p).unwrap();
        assert_eq!(t.get(0, 1), 2.0);
        assert_eq!(t.get(1, 2), 4.0);
        assert_eq!(t.get(2, 3), 10.0);
        assert_eq!(t.get(0, 3), 16.0);
        assert!(t.satisfies_triangle_inequality(1e-12));
    }

    #[test]
    fn coarsened_cases() {
        let uniform = Array2::from_elem((3, 3), 0.5);
        assert_eq!(coarsened_target(&uniform).unwrap(), equidistant_target(3, 2.0).unwrap());
        // direct edge 0-2 of length 10 loses to the detour 1 + 2
        let p = array![[0.0, 1.0, 0.1], [1.0, 0.0, 0.5], [0.1, 0.5, 0.0]];
        let t = coarsened_target(&p).unwrap();
        assert_eq!(t.get(0, 2), 3.0);
        let split = array![[1.0, 0.0], [0.0, 1.0]];
        assert!(matches!(coarsened_target(&split), Err(Error::DisconnectedTarget)));
        assert!(coarsened_target(&array![[0.0, 0.2], [0.3, 0.0]]).is_err());
    }

    #[test]
    fn spec_serde() {
        let spec: TargetSpec = serde_json::from_str(r#"{"kind":"equidistant-mean","k":5}"#).unwrap();
        assert_eq!(spec, TargetSpec::EquidistantMean { k: 5 });
        let spec: TargetSpec = serde_json::from_str(r#"{"kind":"coarsened","p":[[1,0.5],[0.5,1]]}"#).unwrap();
        assert_eq!(spec.k(), 2);
        assert_eq!(spec.build(&DistanceMatrix::zeros(3)).unwrap().get(0, 1), 2.0);
    }
}
