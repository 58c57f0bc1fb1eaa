use ndarray::{Array2, Zip};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// Dense symmetric, nonnegative matrix with a zero diagonal.
///
/// Used for structural distances, attribute distances and their combination.
/// Symmetry is checked with a relative tolerance of `1e-12`; the stored values
/// are kept exactly as given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct DistanceMatrix(Array2<f64>);

impl DistanceMatrix {
    pub fn new(values: Array2<f64>) -> Result<Self> {
        let (rows, cols) = values.dim();
        if rows != cols {
            return Err(Error::InvalidMatrix(format!("not square: {rows}x{cols}")));
        }
        for i in 0..rows {
            if values[[i, i]] != 0.0 {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal at {i}")));
            }
            for j in 0..rows {
                let v = values[[i, j]];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidMatrix(format!("entry ({i},{j}) = {v}")));
                }
                let w = values[[j, i]];
                if (v - w).abs() > SYMMETRY_TOL * v.abs().max(w.abs()).max(1.0) {
                    return Err(Error::InvalidMatrix(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self(values))
    }

    /// Builds a matrix from a function evaluated on the strict upper triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Array2::zeros((n, n));
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                values[[i, j]] = v;
                values[[j, i]] = v;
            }
        }
        Self::new(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(Array2::zeros((n, n)))
    }

    pub(crate) fn from_trusted(values: Array2<f64>) -> Self {
        debug_assert!(Self::new(values.clone()).is_ok());
        Self(values)
    }

    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[[i, j]]
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.0
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    fn off_diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| self.0[[i, j]]))
    }

    /// Mean of the off-diagonal entries.
    pub fn off_diagonal_mean(&self) -> Option<f64> {
        let n = self.len();
        if n < 2 {
            return None;
        }
        Some(self.off_diagonal().sum::<f64>() / (n * (n - 1)) as f64)
    }

    /// Every entry divided by the global maximum.
    pub fn normalize_max(&self) -> Result<Self> {
        let max = self.max();
        if max <= 0.0 {
            return Err(Error::DegenerateMatrix("all entries are zero"));
        }
        Ok(Self(self.0.mapv(|v| v / max)))
    }

    /// Off-diagonal entries mapped affinely onto `[0, 1]`; the diagonal stays zero.
    pub fn minmax_normalize(&self) -> Result<Self> {
        let (lo, hi) = self
            .off_diagonal()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if hi.is_nan() || lo.is_nan() || hi <= lo {
            return Err(Error::DegenerateMatrix("off-diagonal entries are all equal"));
        }
        let span = hi - lo;
        let mut out = self.0.mapv(|v| (v - lo) / span);
        out.diag_mut().fill(0.0);
        Ok(Self(out))
    }

    /// `alpha * self + (1 - alpha) * other`.
    pub fn combine_alpha(&self, other: &Self, alpha: f64) -> Result<Self> {
        check_unit(alpha, "alpha")?;
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch {
                expected: self.0.dim(),
                got: other.0.dim(),
            });
        }
        let out = Zip::from(&self.0)
            .and(&other.0)
            .map_collect(|&s, &a| alpha * s + (1.0 - alpha) * a);
        Ok(Self(out))
    }

    /// Elementwise square root. The result may violate the triangle inequality.
    pub fn sqrt_transform(&self) -> Self {
        Self(self.0.mapv(f64::sqrt))
    }

    /// Restricts the matrix to the given rows/columns, in order.
    pub fn select(&self, keep: &[usize]) -> Self {
        let m = keep.len();
        let mut out = Array2::zeros((m, m));
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                out[[a, b]] = self.0[[i, j]];
            }
        }
        Self(out)
    }

    /// True when every triple satisfies `d(i,j) <= d(i,l) + d(l,j) + tol`.
    pub fn satisfies_triangle_inequality(&self, tol: f64) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|l| self.0[[i, j]] <= self.0[[i, l]] + self.0[[l, j]] + tol))
        })
    }
}

impl TryFrom<Vec<Vec<f64>>> for DistanceMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut values = Array2::zeros((n, n));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!("row {i} has {} entries", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                values[[i, j]] = v;
            }
        }
        Self::new(values)
    }
}

impl From<DistanceMatrix> for Vec<Vec<f64>> {
    fn from(d: DistanceMatrix) -> Self {
        d.0.rows().into_iter().map(|r| r.to_vec()).collect()
    }
}

pub(crate) fn check_unit(value: f64, name: &str) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {value} is outside [0, 1]")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, seed: u64) -> DistanceMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DistanceMatrix::from_fn(n, |_, _| rng.random_range(0.0..10.0)).unwrap()
    }

    #[test]
    fn rejects_invalid_matrices() {
        assert!(DistanceMatrix::new(array![[0.0, 1.0], [2.0, 0.0]]).is_err());
        assert!(DistanceMatrix::new(array![[1.0, 1.0], [1.0, 0.0]]).is_err());
        assert!(DistanceMatrix::new(array![[0.0, -1.0], [-1.0, 0.0]]).is_err());
        assert!(DistanceMatrix::new(array![[0.0, f64::NAN], [f64::NAN, 0.0]]).is_err());
    }

    #[test]
    fn normalize_max_cases() {
        let d = DistanceMatrix::new(array![[0.0, 2.0], [2.0, 0.0]]).unwrap();
        let n = d.normalize_max().unwrap();
        assert_eq!(n.values(), &array![[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(n.normalize_max().unwrap(), n);
        let r = random_matrix(5, 1).normalize_max().unwrap();
        assert!((r.max() - 1.0).abs() < 1e-12);
        assert!(matches!(
            DistanceMatrix::zeros(3).normalize_max(),
            Err(Error::DegenerateMatrix(_))
        ));
    }

    #[test]
    fn minmax_normalize_cases() {
        // Constant shift of the off-diagonal entries is removed.
        let d = DistanceMatrix::from_fn(3, |i, j| 5.0 + (i + j) as f64).unwrap();
        let n = d.minmax_normalize().unwrap();
        assert_eq!(n.get(0, 1), 0.0);
        assert_eq!(n.get(1, 2), 1.0);
        assert_eq!(n.get(0, 2), 0.5);
        assert_eq!(n.minmax_normalize().unwrap(), n);

        let r = random_matrix(6, 2);
        let off: Vec<f64> = (0..6)
            .flat_map(|i| (0..6).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| r.get(i, j))
            .collect();
        let lo = off.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = off.iter().copied().fold(0.0, f64::max);
        let n = r.minmax_normalize().unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i == j { 0.0 } else { (r.get(i, j) - lo) / (hi - lo) };
                assert!((n.get(i, j) - expected).abs() < 1e-15);
            }
        }
        let flat = DistanceMatrix::from_fn(3, |_, _| 2.0).unwrap();
        assert!(flat.minmax_normalize().is_err());
    }

    #[test]
    fn combine_alpha_cases() {
        let ds = random_matrix(4, 3).normalize_max().unwrap();
        let da = random_matrix(4, 4).normalize_max().unwrap();
        assert_eq!(ds.combine_alpha(&da, 1.0).unwrap(), ds);
        assert_eq!(ds.combine_alpha(&da, 0.0).unwrap(), da);

        let a = DistanceMatrix::new(array![[0.0, 1.0, 0.5], [1.0, 0.0, 0.2], [0.5, 0.2, 0.0]]).unwrap();
        let b = DistanceMatrix::new(array![[0.0, 0.0, 1.0], [0.0, 0.0, 0.6], [1.0, 0.6, 0.0]]).unwrap();
        let m = a.combine_alpha(&b, 0.5).unwrap();
        assert_eq!(m.values(), &array![[0.0, 0.5, 0.75], [0.5, 0.0, 0.4], [0.75, 0.4, 0.0]]);

        assert!(matches!(
            a.combine_alpha(&random_matrix(2, 0), 0.5),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(a.combine_alpha(&b, 1.5).is_err());
    }

    #[test]
    fn combine_alpha_is_affine_and_monotone() {
        let ds = random_matrix(5, 5).normalize_max().unwrap();
        let da = random_matrix(5, 6).normalize_max().unwrap();
        let bigger = DistanceMatrix::new(ds.values().mapv(|v| v * 1.5)).unwrap();
        for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let c = ds.combine_alpha(&da, alpha).unwrap();
            let c_big = bigger.combine_alpha(&da, alpha).unwrap();
            for i in 0..5 {
                for j in 0..5 {
                    let expected = da.get(i, j) + alpha * (ds.get(i, j) - da.get(i, j));
                    assert!((c.get(i, j) - expected).abs() < 1e-15);
                    assert!(c_big.get(i, j) >= c.get(i, j));
                }
            }
        }
    }

    #[test]
    fn sqrt_transform_cases() {
        let d = DistanceMatrix::new(array![[0.0, 4.0], [4.0, 0.0]]).unwrap();
        assert_eq!(d.sqrt_transform().values(), &array![[0.0, 2.0], [2.0, 0.0]]);
        let binary = DistanceMatrix::from_fn(4, |i, j| ((i + j) % 2) as f64).unwrap();
        assert_eq!(binary.sqrt_transform(), binary);
        let r = random_matrix(5, 9);
        let s = r.sqrt_transform();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(s.get(i, j), r.get(i, j).sqrt());
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let r = random_matrix(4, 11);
        let json = serde_json::to_string(&r).unwrap();
        let back: DistanceMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
