//! Conditional gradient (Frank–Wolfe) over `{T >= 0, T 1 = mu}`.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::loss::{inner, pow_q, GwKernel, LossParams};
use super::TransportPlan;
use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CgOptions {
    pub max_iter: usize,
    /// Stop once the relative loss decrease of a step falls below this.
    pub tol: f64,
}

impl Default for CgOptions {
    fn default() -> Self {
        Self { max_iter: 1000, tol: 1e-9 }
    }
}

/// One outer iteration of the alternating srFGW scheme:
/// `L(T^n, B^n)`, `L(T^{n+1}, B^n)` and `L(T^{n+1}, B^{n+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterStep {
    pub start: f64,
    pub after_plan: f64,
    pub after_barycenters: f64,
    pub k: usize,
    pub cg_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub plan: TransportPlan,
    pub loss_trace: Vec<f64>,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub barycenter_ids: Option<Vec<usize>>,
    pub nonempty_k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<Vec<OuterStep>>,
}

/// Row-wise linear minimization: row `i` puts `mu[i]` on its smallest
/// gradient entry, first index on ties.
fn lmo(grad: &Array2<f64>, mu: &[f64]) -> Array2<f64> {
    let mut s = Array2::zeros(grad.dim());
    for (i, row) in grad.rows().into_iter().enumerate() {
        let mut best = 0;
        for (l, &g) in row.iter().enumerate() {
            if g < row[best] {
                best = l;
            }
        }
        s[[i, best]] = mu[i];
    }
    s
}

struct Objective<'a> {
    kernel: GwKernel<'a>,
    /// `M^q`, or `None` for the pure GW objective.
    linear: Option<Array2<f64>>,
    alpha: f64,
}

impl Objective<'_> {
    /// Loss and gradient at `t`.
    fn eval(&self, t: &Array2<f64>) -> (f64, Array2<f64>) {
        let applied = self.kernel.apply(t);
        let gw = inner(t, &applied);
        match &self.linear {
            None => (gw, applied.mapv(|v| 2.0 * v)),
            Some(m) => {
                let a = self.alpha;
                let loss = (1.0 - a) * inner(m, t) + a * gw;
                let grad = ndarray::Zip::from(m)
                    .and(&applied)
                    .map_collect(|&mv, &g| (1.0 - a) * mv + a * (2.0 * g));
                (loss, grad)
            }
        }
    }

    fn curvature(&self, dir: &Array2<f64>) -> f64 {
        let gw = self.kernel.bilinear(dir, dir);
        match self.linear {
            None => gw,
            Some(_) => self.alpha * gw,
        }
    }
}

fn run(objective: &Objective<'_>, mu: &[f64], t0: &TransportPlan, opts: CgOptions) -> Result<SolverReport> {
    objective.kernel.check_plan(t0.values())?;
    t0.check_rows(mu)?;
    let mut t = t0.values().clone();
    let (mut loss, mut grad) = objective.eval(&t);
    let mut trace = vec![loss];
    let mut iterations = 0;
    while iterations < opts.max_iter {
        let s = lmo(&grad, mu);
        let dir = &s - &t;
        let slope = inner(&grad, &dir);
        if slope >= 0.0 {
            break;
        }
        let curv = objective.curvature(&dir);
        let gamma = if curv > 0.0 { (-slope / (2.0 * curv)).min(1.0) } else { 1.0 };
        let next = if gamma == 1.0 { s } else { &t + &(gamma * &dir) };
        let (next_loss, next_grad) = objective.eval(&next);
        if next_loss > loss {
            break;
        }
        let decrease = loss - next_loss;
        t = next;
        grad = next_grad;
        iterations += 1;
        trace.push(next_loss);
        let scale = loss.abs();
        loss = next_loss;
        if decrease <= opts.tol * scale {
            break;
        }
    }
    let plan = TransportPlan::from_trusted(t);
    Ok(SolverReport {
        nonempty_k: plan.nonempty_columns().len(),
        plan,
        loss_trace: trace,
        iterations,
        barycenter_ids: None,
        outer: None,
    })
}

/// Semi-relaxed GW: minimizes `gw_loss(r1, r2, T, q)` over plans with row
/// marginal `mu`, starting from `t0`.
pub fn srgw_solve(
    r1: &DistanceMatrix,
    mu: &[f64],
    r2: &DistanceMatrix,
    t0: &TransportPlan,
    q: f64,
    opts: CgOptions,
) -> Result<SolverReport> {
    LossParams { q, alpha: 1.0 }.validate()?;
    let objective = Objective {
        kernel: GwKernel::new(r1, r2, q),
        linear: None,
        alpha: 1.0,
    };
    run(&objective, mu, t0, opts)
}

/// Semi-relaxed fused GW with attribute cost `m` (`N`-by-`k`).
pub fn srfgw_solve(
    r1: &DistanceMatrix,
    mu: &[f64],
    r2: &DistanceMatrix,
    m: &Array2<f64>,
    t0: &TransportPlan,
    params: LossParams,
    opts: CgOptions,
) -> Result<SolverReport> {
    params.validate()?;
    if m.dim() != (r1.len(), r2.len()) {
        return Err(Error::ShapeMismatch {
            expected: (r1.len(), r2.len()),
            got: m.dim(),
        });
    }
    let objective = Objective {
        kernel: GwKernel::new(r1, r2, params.q),
        linear: Some(m.mapv(|v| pow_q(v, params.q))),
        alpha: params.alpha,
    };
    run(&objective, mu, t0, opts)
}
