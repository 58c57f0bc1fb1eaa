use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Nonnegative `N`-by-`k` coupling whose rows sum to the source measure.
/// The column marginal is free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct TransportPlan(Array2<f64>);

impl TransportPlan {
    /// Checks nonnegativity and, when `mu` is given, the row sums.
    pub fn new(t: Array2<f64>, mu: Option<&[f64]>) -> Result<Self> {
        if let Some(bad) = t.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InfeasibleInit(format!("entry {bad}")));
        }
        let plan = Self(t);
        if let Some(mu) = mu {
            plan.check_rows(mu)?;
        }
        Ok(plan)
    }

    pub(crate) fn from_trusted(t: Array2<f64>) -> Self {
        Self(t)
    }

    /// `T[i][l] = mu[i]` on the assigned column, zero elsewhere.
    pub fn from_partition(partition: &Partition, mu: &[f64]) -> Result<Self> {
        if partition.len() != mu.len() {
            return Err(Error::SizeMismatch(partition.len(), mu.len()));
        }
        let mut t = Array2::zeros((mu.len(), partition.k()));
        for (i, &c) in partition.assign().iter().enumerate() {
            t[[i, c]] = mu[i];
        }
        Ok(Self(t))
    }

    /// `T[i][l] = mu[i] / k` for every column.
    pub fn uniform(mu: &[f64], k: usize) -> Self {
        Self(Array2::from_shape_fn((mu.len(), k), |(i, _)| mu[i] / k as f64))
    }

    pub fn check_rows(&self, mu: &[f64]) -> Result<()> {
        if self.0.nrows() != mu.len() {
            return Err(Error::InfeasibleInit(format!(
                "plan has {} rows for {} nodes",
                self.0.nrows(),
                mu.len()
            )));
        }
        for (i, row) in self.0.rows().into_iter().enumerate() {
            let s: f64 = row.sum();
            if (s - mu[i]).abs() > FEASIBILITY_TOL {
                return Err(Error::InfeasibleInit(format!("row {i} sums to {s}, expected {}", mu[i])));
            }
        }
        Ok(())
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn k(&self) -> usize {
        self.0.ncols()
    }

    pub fn column_mass(&self) -> Vec<f64> {
        self.0.sum_axis(ndarray::Axis(0)).to_vec()
    }

    /// Columns carrying any mass.
    pub fn nonempty_columns(&self) -> Vec<usize> {
        (0..self.k()).filter(|&l| self.0.column(l).iter().any(|&v| v > 0.0)).collect()
    }

    pub fn select_columns(&self, keep: &[usize]) -> Self {
        Self(self.0.select(ndarray::Axis(1), keep))
    }

    /// `sum |T - other|` over all entries.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        if self.0.dim() != other.0.dim() {
            return Err(Error::ShapeMismatch {
                expected: self.0.dim(),
                got: other.0.dim(),
            });
        }
        Ok(self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).abs()).sum())
    }
}

impl TryFrom<Vec<Vec<f64>>> for TransportPlan {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::InfeasibleInit("ragged plan".into()));
        }
        let t = Array2::from_shape_vec((n, k), rows.into_iter().flatten().collect())
            .expect("rectangular rows");
        Self::new(t, None)
    }
}

impl From<TransportPlan> for Vec<Vec<f64>> {
    fn from(p: TransportPlan) -> Self {
        p.0.rows().into_iter().map(|r| r.to_vec()).collect()
    }
}

/// Sends all of row `i`'s mass `mu[i]` to the first column attaining the row
/// maximum.
pub fn hard_project(t: &TransportPlan, mu: &[f64]) -> Result<(TransportPlan, Partition)> {
    t.check_rows(mu)?;
    let assign: Vec<usize> = t
        .0
        .rows()
        .into_iter()
        .map(|row| {
            let mut best = 0;
            for (l, &v) in row.iter().enumerate() {
                if v > row[best] {
                    best = l;
                }
            }
            best
        })
        .collect();
    let partition = Partition::new(assign, t.k())?;
    Ok((TransportPlan::from_partition(&partition, mu)?, partition))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::uniform_measure;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hard_plan_is_fixed() {
        let mu = uniform_measure(3);
        let p = Partition::new(vec![1, 0, 1], 2).unwrap();
        let t = TransportPlan::from_partition(&p, &mu).unwrap();
        let (h, q) = hard_project(&t, &mu).unwrap();
        assert_eq!(h, t);
        assert_eq!(q, p);
    }

    #[test]
    fn ties_go_to_first_column() {
        let mu = [0.5, 0.5];
        let t = TransportPlan::uniform(&mu, 3);
        let (h, p) = hard_project(&t, &mu).unwrap();
        assert_eq!(p.assign(), &[0, 0]);
        assert_eq!(h.values(), &array![[0.5, 0.0, 0.0], [0.5, 0.0, 0.0]]);
        let t = TransportPlan::new(array![[0.1, 0.2, 0.2]], Some(&[0.5])).unwrap();
        assert_eq!(hard_project(&t, &[0.5]).unwrap().1.assign(), &[1]);
    }

    #[test]
    fn random_soft_plans_match_argmax_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let n = rng.random_range(1..10);
            let k = rng.random_range(1..5);
            // coarse values so that ties actually occur
            let raw = Array2::from_shape_fn((n, k), |_| rng.random_range(0..4) as f64 + 1.0);
            let mu: Vec<f64> = raw.rows().into_iter().map(|r| r.sum() / raw.sum()).collect();
            let t = TransportPlan::new(raw.mapv(|v| v / raw.sum()), Some(&mu)).unwrap();
            let (h, p) = hard_project(&t, &mu).unwrap();
            for i in 0..n {
                let row = t.values().row(i);
                let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let first = row.iter().position(|&v| v == m).unwrap();
                assert_eq!(p.assign()[i], first);
                assert_eq!(h.values()[[i, first]], mu[i]);
            }
            h.check_rows(&mu).unwrap();
        }
    }

    #[test]
    fn feasibility_checks() {
        assert!(TransportPlan::new(array![[0.5, -0.1]], None).is_err());
        assert!(TransportPlan::new(array![[0.5, 0.1]], Some(&[0.5])).is_err());
        let t = TransportPlan::new(array![[0.25, 0.25], [0.0, 0.5]], Some(&[0.5, 0.5])).unwrap();
        assert_eq!(t.nonempty_columns(), vec![0, 1]);
        assert_eq!(t.column_mass(), vec![0.25, 0.75]);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<TransportPlan>(&json).unwrap(), t);
    }
}
