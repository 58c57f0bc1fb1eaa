//! Alternating srFGW partitioning: transport onto the target, then move each
//! target node's attribute to a weighted medoid of the nodes it received.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::cg::{srfgw_solve, CgOptions, OuterStep, SolverReport};
use super::loss::{fgw_loss, pow_q, LossParams};
use super::{hard_project, TransportPlan};
use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;
use crate::partition::Partition;

pub const PLAN_FIXPOINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionOptions {
    pub max_outer: usize,
    pub cg: CgOptions,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        Self {
            max_outer: 50,
            cg: CgOptions::default(),
        }
    }
}

/// `argmin_x sum_i d_A(v_i, x)^q T[i][l]` over `candidates`, first index on
/// ties.
pub fn weighted_barycenter(
    da: &DistanceMatrix,
    t: &Array2<f64>,
    l: usize,
    q: f64,
    candidates: impl IntoIterator<Item = usize>,
) -> Option<usize> {
    let column = t.column(l);
    let mut best: Option<(usize, f64)> = None;
    for x in candidates {
        let cost: f64 = column
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, &w)| pow_q(da.get(i, x), q) * w)
            .sum();
        match best {
            Some((bx, bc)) if cost > bc || (cost == bc && x > bx) => {}
            _ => best = Some((x, cost)),
        }
    }
    best.map(|(x, _)| x)
}

/// Barycenters searched among the nodes each column transports, together
/// with the column's previous barycenter if there is one.
pub fn update_barycenters(
    da: &DistanceMatrix,
    t: &Array2<f64>,
    q: f64,
    previous: Option<&[usize]>,
) -> Vec<usize> {
    (0..t.ncols())
        .map(|l| {
            let mut candidates: Vec<usize> = (0..t.nrows()).filter(|&i| t[[i, l]] > 0.0).collect();
            if let Some(prev) = previous {
                if let Err(pos) = candidates.binary_search(&prev[l]) {
                    candidates.insert(pos, prev[l]);
                }
            }
            weighted_barycenter(da, t, l, q, candidates).expect("column has a candidate")
        })
        .collect()
}

pub fn attribute_cost(da: &DistanceMatrix, barycenters: &[usize]) -> Array2<f64> {
    Array2::from_shape_fn((da.len(), barycenters.len()), |(i, l)| da.get(i, barycenters[l]))
}

fn same_plan(a: &TransportPlan, b: &TransportPlan) -> bool {
    a.values().dim() == b.values().dim()
        && a.values()
            .iter()
            .zip(b.values().iter())
            .all(|(x, y)| (x - y).abs() <= PLAN_FIXPOINT_TOL)
}

/// Alternates srFGW solves with barycenter updates.
///
/// `ds` is the source structure, `da` the node-to-node attribute distances
/// and `target` the `k`-node target structure. Empty target nodes are
/// removed after every solve, so the returned plan has `nonempty_k` columns
/// and `kept` lists which original target nodes they correspond to.
pub fn srfgw_partition(
    ds: &DistanceMatrix,
    mu: &[f64],
    da: &DistanceMatrix,
    target: &DistanceMatrix,
    t0: &TransportPlan,
    params: LossParams,
    opts: PartitionOptions,
) -> Result<PartitionRun> {
    params.validate()?;
    if da.len() != ds.len() {
        return Err(Error::ShapeMismatch {
            expected: (ds.len(), ds.len()),
            got: (da.len(), da.len()),
        });
    }
    if t0.values().dim() != (ds.len(), target.len()) {
        return Err(Error::InfeasibleInit(format!(
            "plan is {:?}, expected {:?}",
            t0.values().dim(),
            (ds.len(), target.len())
        )));
    }
    t0.check_rows(mu)?;

    let mut kept = t0.nonempty_columns();
    let mut plan = t0.select_columns(&kept);
    let mut r2 = target.select(&kept);
    let mut bary = update_barycenters(da, plan.values(), params.q, None);
    let mut steps = Vec::new();
    let mut trace = vec![fgw_loss(ds, &r2, &attribute_cost(da, &bary), &plan, params)?];

    for _ in 0..opts.max_outer {
        let m = attribute_cost(da, &bary);
        let solved = srfgw_solve(ds, mu, &r2, &m, &plan, params, opts.cg)?;
        let start = solved.loss_trace[0];
        let after_plan = *solved.loss_trace.last().expect("trace starts with the initial loss");
        let next_bary = update_barycenters(da, solved.plan.values(), params.q, Some(&bary));
        let after_barycenters = fgw_loss(ds, &r2, &attribute_cost(da, &next_bary), &solved.plan, params)?;

        let nonempty = solved.plan.nonempty_columns();
        let converged = same_plan(&solved.plan, &plan);
        steps.push(OuterStep {
            start,
            after_plan,
            after_barycenters,
            k: nonempty.len(),
            cg_iterations: solved.iterations,
        });
        trace.push(after_barycenters);

        plan = solved.plan.select_columns(&nonempty);
        r2 = r2.select(&nonempty);
        bary = nonempty.iter().map(|&l| next_bary[l]).collect();
        kept = nonempty.iter().map(|&l| kept[l]).collect();
        if converged {
            break;
        }
    }

    let (_, partition) = hard_project(&plan, mu)?;
    Ok(PartitionRun {
        report: SolverReport {
            nonempty_k: plan.k(),
            iterations: steps.len(),
            plan,
            loss_trace: trace,
            barycenter_ids: Some(bary),
            outer: Some(steps),
        },
        partition,
        kept,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionRun {
    pub report: SolverReport,
    pub partition: Partition,
    pub kept: Vec<usize>,
}
