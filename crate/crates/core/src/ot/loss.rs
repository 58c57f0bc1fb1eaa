//! Gromov–Wasserstein and fused GW objectives between an `N`-node source
//! relation matrix and a `k`-node target.

use ndarray::{Array1, Array2, Axis, Zip};
use serde::{Deserialize, Serialize};

use super::TransportPlan;
use crate::error::{Error, Result};
use crate::graph::{check_unit, DistanceMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossParams {
    pub q: f64,
    pub alpha: f64,
}

impl Default for LossParams {
    fn default() -> Self {
        Self { q: 2.0, alpha: 0.5 }
    }
}

impl LossParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.q >= 1.0 && self.q.is_finite()) {
            return Err(Error::InvalidParameter(format!("q must be >= 1, got {}", self.q)));
        }
        check_unit(self.alpha, "alpha")
    }
}

pub(crate) fn pow_q(x: f64, q: f64) -> f64 {
    if q == 2.0 {
        x * x
    } else if q == 1.0 {
        x.abs()
    } else {
        x.abs().powf(q)
    }
}

/// The GW cost tensor `c[i][j][l][m] = |r1[i][j] - r2[l][m]|^q` as a linear
/// operator on `N`-by-`k` matrices:
/// `apply(Y)[i][l] = sum_{j,m} c[i][j][l][m] Y[j][m]`.
///
/// For `q = 2` the tensor splits as `r1^2 (x) 1 + 1 (x) r2^2 - 2 r1 (x) r2`,
/// so `apply` costs `O(N^2 k + k^2 N)`; other exponents use the direct sum.
pub struct GwKernel<'a> {
    r1: &'a Array2<f64>,
    r2: &'a Array2<f64>,
    q: f64,
    r1_sq: Option<Array2<f64>>,
    r2_sq: Option<Array2<f64>>,
}

impl<'a> GwKernel<'a> {
    pub fn new(r1: &'a DistanceMatrix, r2: &'a DistanceMatrix, q: f64) -> Self {
        let (r1, r2) = (r1.values(), r2.values());
        let (r1_sq, r2_sq) = if q == 2.0 {
            (Some(r1.mapv(|v| v * v)), Some(r2.mapv(|v| v * v)))
        } else {
            (None, None)
        };
        Self { r1, r2, q, r1_sq, r2_sq }
    }

    pub fn n(&self) -> usize {
        self.r1.nrows()
    }

    pub fn k(&self) -> usize {
        self.r2.nrows()
    }

    pub fn check_plan(&self, t: &Array2<f64>) -> Result<()> {
        if t.dim() != (self.n(), self.k()) {
            return Err(Error::ShapeMismatch {
                expected: (self.n(), self.k()),
                got: t.dim(),
            });
        }
        Ok(())
    }

    pub fn apply(&self, y: &Array2<f64>) -> Array2<f64> {
        match (&self.r1_sq, &self.r2_sq) {
            (Some(r1_sq), Some(r2_sq)) => {
                let rows: Array1<f64> = y.sum_axis(Axis(1));
                let cols: Array1<f64> = y.sum_axis(Axis(0));
                let a = r1_sq.dot(&rows);
                let b = r2_sq.dot(&cols);
                let cross = self.r1.dot(y).dot(self.r2);
                Array2::from_shape_fn(y.dim(), |(i, l)| a[i] + b[l] - 2.0 * cross[[i, l]])
            }
            _ => {
                let (n, k) = y.dim();
                Array2::from_shape_fn((n, k), |(i, l)| {
                    let mut s = 0.0;
                    for j in 0..n {
                        for m in 0..k {
                            let w = y[[j, m]];
                            if w != 0.0 {
                                s += pow_q(self.r1[[i, j]] - self.r2[[l, m]], self.q) * w;
                            }
                        }
                    }
                    s
                })
            }
        }
    }

    /// `sum c[i][j][l][m] X[i][l] Y[j][m]`.
    pub fn bilinear(&self, x: &Array2<f64>, y: &Array2<f64>) -> f64 {
        inner(x, &self.apply(y))
    }
}

pub(crate) fn inner(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    Zip::from(a).and(b).fold(0.0, |acc, &x, &y| acc + x * y)
}

/// `sum_{i,j,l,m} |r1[i][j] - r2[l][m]|^q T[i][l] T[j][m]`.
pub fn gw_loss(r1: &DistanceMatrix, r2: &DistanceMatrix, t: &TransportPlan, q: f64) -> Result<f64> {
    let kernel = GwKernel::new(r1, r2, q);
    kernel.check_plan(t.values())?;
    Ok(kernel.bilinear(t.values(), t.values()))
}

/// `(1 - alpha) sum M[i][l]^q T[i][l] + alpha * gw_loss`, where `m` holds
/// attribute distances between nodes and target barycenters.
pub fn fgw_loss(
    r1: &DistanceMatrix,
    r2: &DistanceMatrix,
    m: &Array2<f64>,
    t: &TransportPlan,
    params: LossParams,
) -> Result<f64> {
    params.validate()?;
    if m.dim() != t.values().dim() {
        return Err(Error::ShapeMismatch {
            expected: t.values().dim(),
            got: m.dim(),
        });
    }
    let gw = gw_loss(r1, r2, t, params.q)?;
    let linear = inner(&m.mapv(|v| pow_q(v, params.q)), t.values());
    Ok((1.0 - params.alpha) * linear + params.alpha * gw)
}
