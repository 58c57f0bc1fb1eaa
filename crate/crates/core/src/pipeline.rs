//! End-to-end clustering of one instance with one method.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::attributes::{AttributeMetric, DtwCost};
use crate::embeddings::embedded_distances;
use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, DistanceMatrix};
use crate::kmeans::{kmeanspp_seed, lloyd_frechet, seed_partition, LloydResult, Seeding, SeedingMode, DEFAULT_MAX_ITER};
use crate::ot::{
    hard_project, srfgw_partition, srgw_solve, CgOptions, LossParams, PartitionOptions, SolverReport, TransportPlan,
};
use crate::partition::Partition;
use crate::targets::{coarsened_target, TargetSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    FrechetKmeans,
    Srgw,
    Srfgw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    Mean,
    Max,
    Coarsened,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Method {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub embedded: bool,
    #[serde(default = "default_target")]
    pub target: TargetKind,
    /// Defaults to k-means++ on `D` for plain methods and on `D^(1)` for
    /// embedded ones.
    #[serde(default)]
    pub seeding: Option<SeedingMode>,
}

fn default_target() -> TargetKind {
    TargetKind::Mean
}

impl Method {
    pub fn new(algorithm: Algorithm, embedded: bool, target: TargetKind) -> Self {
        Self {
            algorithm,
            embedded,
            target,
            seeding: None,
        }
    }

    pub fn seeding_mode(&self) -> SeedingMode {
        self.seeding.unwrap_or(if self.embedded {
            SeedingMode::PlusPlusOnD1
        } else {
            SeedingMode::PlusPlusOnD
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.embedded {
            f.write_str("embedded-")?;
        }
        match self.algorithm {
            Algorithm::FrechetKmeans => f.write_str("frechet-kmeans")?,
            Algorithm::Srgw => f.write_str("srgw")?,
            Algorithm::Srfgw => f.write_str("srfgw")?,
        }
        if self.algorithm != Algorithm::FrechetKmeans {
            let t = match self.target {
                TargetKind::Mean => "mean",
                TargetKind::Max => "max",
                TargetKind::Coarsened => "coarsened",
            };
            write!(f, "-{t}")?;
        }
        write!(f, "@{}", self.seeding_mode().label())
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Parses labels such as `srgw-mean`, `embedded-srfgw-max@on-v`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown method `{s}`"));
        let (body, seeding) = match s.split_once('@') {
            Some((b, seed)) => {
                let mode = match seed {
                    "random" => SeedingMode::Random,
                    "on-v" => SeedingMode::PlusPlusOnV,
                    "on-d" => SeedingMode::PlusPlusOnD,
                    "on-d1" => SeedingMode::PlusPlusOnD1,
                    _ => return Err(bad()),
                };
                (b, Some(mode))
            }
            None => (s, None),
        };
        let (embedded, body) = match body.strip_prefix("embedded-") {
            Some(rest) => (true, rest),
            None => (false, body),
        };
        let (algorithm, target) = match body {
            "frechet-kmeans" => (Algorithm::FrechetKmeans, TargetKind::Mean),
            _ => {
                let (algo, target) = body.split_once('-').ok_or_else(bad)?;
                let algorithm = match algo {
                    "srgw" => Algorithm::Srgw,
                    "srfgw" => Algorithm::Srfgw,
                    _ => return Err(bad()),
                };
                let target = match target {
                    "mean" => TargetKind::Mean,
                    "max" => TargetKind::Max,
                    "coarsened" => TargetKind::Coarsened,
                    _ => return Err(bad()),
                };
                (algorithm, target)
            }
        };
        Ok(Self {
            algorithm,
            embedded,
            target,
            seeding,
        })
    }
}

/// Everything a method needs: the max-normalized structural distances, the
/// optional attribute distances, the node measure, `k`, and (for coarsened
/// targets) the block matrix the graph came from.
#[derive(Debug, Clone)]
pub struct Instance {
    pub ds: DistanceMatrix,
    pub da: Option<DistanceMatrix>,
    pub mu: Vec<f64>,
    pub k: usize,
    pub block: Option<Array2<f64>>,
}

impl Instance {
    pub fn from_graph(g: &AttributedGraph, k: usize, beta: f64, dtw_cost: DtwCost) -> Result<Self> {
        let ds = g.geodesic_distances()?.normalize_max()?;
        let da = match g.attributes() {
            Some(bundles) => Some(AttributeMetric::fit(bundles, beta, dtw_cost)?.1),
            None => None,
        };
        Ok(Self {
            ds,
            da,
            mu: g.mu().to_vec(),
            k,
            block: None,
        })
    }

    pub fn with_block(mut self, block: Array2<f64>) -> Self {
        self.block = Some(block);
        self
    }

    /// `alpha * D_S + (1 - alpha) * D_A`, or `D_S` without attributes.
    pub fn combined(&self, alpha: f64) -> Result<DistanceMatrix> {
        match &self.da {
            Some(da) => self.ds.combine_alpha(da, alpha),
            None => Ok(self.ds.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub alpha: f64,
    pub q: f64,
    pub cg: CgOptions,
    pub max_outer: usize,
    pub max_lloyd_iter: usize,
}

impl Default for RunParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            q: 2.0,
            cg: CgOptions::default(),
            max_outer: PartitionOptions::default().max_outer,
            max_lloyd_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub method: String,
    pub partition: Partition,
    pub seeds: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lloyd: Option<LloydResult>,
    pub seconds: f64,
}

fn embed(d: &DistanceMatrix) -> Result<DistanceMatrix> {
    embedded_distances(d).normalize_max()
}

fn target_for(kind: TargetKind, k: usize, r1: &DistanceMatrix, block: Option<&Array2<f64>>) -> Result<DistanceMatrix> {
    match kind {
        TargetKind::Mean => TargetSpec::EquidistantMean { k }.build(r1),
        TargetKind::Max => TargetSpec::EquidistantMax { k }.build(r1),
        TargetKind::Coarsened => {
            let block = block.ok_or_else(|| Error::InvalidParameter("coarsened target needs the block matrix".into()))?;
            if block.nrows() != k {
                return Err(Error::ShapeMismatch {
                    expected: (k, k),
                    got: block.dim(),
                });
            }
            let raw = coarsened_target(block)?;
            let scale = r1.max() / raw.max();
            Ok(DistanceMatrix::from_trusted(raw.into_inner().mapv(|v| v * scale)))
        }
    }
}

pub fn run_method(instance: &Instance, method: Method, params: &RunParams, rng_seed: u64) -> Result<Outcome> {
    let start = Instant::now();
    let d_alpha = instance.combined(params.alpha)?;
    let seeding = Seeding {
        mode: method.seeding_mode(),
        rng_seed,
    };
    let k = instance.k;
    let mu = &instance.mu;
    let (partition, seeds, solver, lloyd) = match method.algorithm {
        Algorithm::FrechetKmeans => {
            let work = if method.embedded { embed(&d_alpha)? } else { d_alpha.clone() };
            let seeds = kmeanspp_seed(&d_alpha, k, seeding)?;
            let res = lloyd_frechet(&work, mu, &seeds, params.max_lloyd_iter)?;
            (res.partition.clone(), seeds, None, Some(res))
        }
        Algorithm::Srgw => {
            let r1 = if method.embedded { embed(&d_alpha)? } else { d_alpha.clone() };
            let r2 = target_for(method.target, k, &r1, instance.block.as_ref())?;
            let (seeds, init) = seed_partition(&d_alpha, k, seeding)?;
            let t0 = TransportPlan::from_partition(&init, mu)?;
            let report = srgw_solve(&r1, mu, &r2, &t0, params.q, params.cg)?;
            let (_, partition) = hard_project(&report.plan, mu)?;
            (partition, seeds, Some(report), None)
        }
        Algorithm::Srfgw => {
            let da = instance.da.as_ref().ok_or(Error::AttributesRequired)?;
            let r1 = if method.embedded { embed(&instance.ds)? } else { instance.ds.clone() };
            let r2 = target_for(method.target, k, &r1, instance.block.as_ref())?;
            let (seeds, init) = seed_partition(&d_alpha, k, seeding)?;
            let t0 = TransportPlan::from_partition(&init, mu)?;
            let run = srfgw_partition(
                &r1,
                mu,
                da,
                &r2,
                &t0,
                LossParams {
                    q: params.q,
                    alpha: params.alpha,
                },
                PartitionOptions {
                    max_outer: params.max_outer,
                    cg: params.cg,
                },
            )?;
            (run.partition, seeds, Some(run.report), None)
        }
    };
    Ok(Outcome {
        method: method.to_string(),
        partition,
        seeds,
        solver,
        lloyd,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::ari;
    use crate::graph::uniform_measure;

    fn cliques(groups: usize, size: usize) -> (Instance, Partition) {
        let labels: Vec<usize> = (0..groups * size).map(|i| i / size).collect();
        let ds = DistanceMatrix::from_fn(labels.len(), |i, j| if labels[i] == labels[j] { 0.2 } else { 1.0 }).unwrap();
        let da = DistanceMatrix::from_fn(labels.len(), |i, j| if labels[i] == labels[j] { 0.1 } else { 0.9 }).unwrap();
        let inst = Instance {
            mu: uniform_measure(labels.len()),
            ds,
            da: Some(da),
            k: groups,
            block: Some(Array2::from_shape_fn((groups, groups), |(r, s)| if r == s { 0.8 } else { 0.1 })),
        };
        (inst, Partition::from_labels(labels))
    }

    #[test]
    fn labels_round_trip() {
        for label in [
            "frechet-kmeans@on-d",
            "embedded-frechet-kmeans@on-d1",
            "srgw-mean@on-d",
            "srgw-coarsened@random",
            "embedded-srfgw-max@on-v",
        ] {
            assert_eq!(label.parse::<Method>().unwrap().to_string(), label);
        }
        assert_eq!("srgw-max".parse::<Method>().unwrap().to_string(), "srgw-max@on-d");
        assert!("srgw".parse::<Method>().is_err());
        assert!("kmeans".parse::<Method>().is_err());
        assert!("srgw-mean@on-x".parse::<Method>().is_err());
    }

    #[test]
    fn every_method_recovers_separated_cliques() {
        let (inst, truth) = cliques(3, 6);
        for algorithm in [Algorithm::FrechetKmeans, Algorithm::Srgw, Algorithm::Srfgw] {
            for embedded in [false, true] {
                for target in [TargetKind::Mean, TargetKind::Max, TargetKind::Coarsened] {
                    let m = Method::new(algorithm, embedded, target);
                    let out = run_method(&inst, m, &RunParams::default(), 3).unwrap();
                    assert_eq!(ari(&out.partition, &truth).unwrap(), 1.0, "{m}");
                }
            }
        }
    }

    #[test]
    fn srfgw_needs_attributes() {
        let (mut inst, _) = cliques(2, 4);
        inst.da = None;
        let m = Method::new(Algorithm::Srfgw, false, TargetKind::Mean);
        assert!(matches!(run_method(&inst, m, &RunParams::default(), 1), Err(Error::AttributesRequired)));
    }

    #[test]
    fn alpha_one_fused_matches_srgw() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(91);
        let pts: Vec<Vec<f64>> = (0..24).map(|_| vec![rand::Rng::random(&mut rng), rand::Rng::random(&mut rng)]).collect();
        let ds = crate::embeddings::euclidean_pairwise(&pts).unwrap().normalize_max().unwrap();
        let da = crate::synth::pure_noise(24, &mut rng);
        let inst = Instance {
            ds,
            da: Some(da),
            mu: uniform_measure(24),
            k: 3,
            block: None,
        };
        let params = RunParams {
            alpha: 1.0,
            max_outer: 1,
            ..RunParams::default()
        };
        let a = run_method(&inst, Method::new(Algorithm::Srgw, false, TargetKind::Mean), &params, 5).unwrap();
        let b = run_method(&inst, Method::new(Algorithm::Srfgw, false, TargetKind::Mean), &params, 5).unwrap();
        assert_eq!(a.seeds, b.seeds);
        assert!(a.partition.same_clusters(&b.partition));
        let (sa, sb) = (a.solver.unwrap(), b.solver.unwrap());
        let outer = sb.outer.unwrap()[0];
        assert_eq!(outer.start, sa.loss_trace[0]);
        assert_eq!(outer.after_plan, *sa.loss_trace.last().unwrap());
    }

    #[test]
    fn embedded_pipeline_is_a_plain_composition() {
        let (inst, _) = cliques(3, 5);
        let params = RunParams::default();
        let fused = run_method(&inst, Method::new(Algorithm::Srgw, true, TargetKind::Mean), &params, 8).unwrap();
        let d_alpha = inst.combined(params.alpha).unwrap();
        let r1 = embedded_distances(&d_alpha).normalize_max().unwrap();
        let r2 = TargetSpec::EquidistantMean { k: 3 }.build(&r1).unwrap();
        let (_, init) = seed_partition(
            &d_alpha,
            3,
            Seeding {
                mode: SeedingMode::PlusPlusOnD1,
                rng_seed: 8,
            },
        )
        .unwrap();
        let t0 = TransportPlan::from_partition(&init, &inst.mu).unwrap();
        let manual = srgw_solve(&r1, &inst.mu, &r2, &t0, 2.0, CgOptions::default()).unwrap();
        assert_eq!(fused.solver.unwrap(), manual);
    }
}
