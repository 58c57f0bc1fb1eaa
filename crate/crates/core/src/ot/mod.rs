//! Gromov–Wasserstein losses and the semi-relaxed solvers.

mod certificates;
mod cg;
mod loss;
mod partition;
mod plan;

pub use certificates::{prop1_certificate, prop2_bound, CERTIFICATE_TOL};
pub use cg::{srfgw_solve, srgw_solve, CgOptions, OuterStep, SolverReport};
pub use loss::{fgw_loss, gw_loss, GwKernel, LossParams};
pub use partition::{
    attribute_cost, srfgw_partition, update_barycenters, weighted_barycenter, PartitionOptions, PartitionRun,
};
pub use plan::{hard_project, TransportPlan, FEASIBILITY_TOL};
