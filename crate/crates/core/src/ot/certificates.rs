//! Executable forms of the two loss guarantees of the alternating scheme.

use super::cg::SolverReport;
use super::loss::{pow_q, LossParams};
use super::TransportPlan;
use crate::error::{Error, Result};

pub const CERTIFICATE_TOL: f64 = 1e-9;

/// True when every outer iteration satisfies
/// `L(T^{n+1}, B^{n+1}) <= L(T^{n+1}, B^n) <= L(T^n, B^n)` up to `1e-9`.
pub fn prop1_certificate(report: &SolverReport) -> Result<bool> {
    let steps = report.outer.as_deref().ok_or(Error::MissingTrace)?;
    if steps.is_empty() {
        return Err(Error::MissingTrace);
    }
    Ok(steps.iter().all(|s| {
        s.after_barycenters <= s.after_plan + CERTIFICATE_TOL && s.after_plan <= s.start + CERTIFICATE_TOL
    }))
}

/// `((1 - alpha) D_A^q + 2 alpha D_S^q) * sum |T - T~|`.
pub fn prop2_bound(
    t: &TransportPlan,
    t_tilde: &TransportPlan,
    d_a_max: f64,
    d_s_max: f64,
    params: LossParams,
) -> Result<f64> {
    params.validate()?;
    let deviation = t.l1_distance(t_tilde)?;
    let a = params.alpha;
    Ok(((1.0 - a) * pow_q(d_a_max, params.q) + 2.0 * a * pow_q(d_s_max, params.q)) * deviation)
}
