//! Fréchet k-means on a finite metric space `(V, d)`: seeding, Lloyd-style
//! iteration with medoid updates, and the objective.

use std::borrow::Cow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embeddings::embedded_distances;
use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;
use crate::partition::Partition;

pub const DEFAULT_MAX_ITER: usize = 100;

/// Where k-means++ measures distances.
///
/// * `PlusPlusOnV`: directly on the input matrix `d`.
/// * `PlusPlusOnD`: on the row embedding of `d` (Euclidean distances between rows).
/// * `PlusPlusOnD1`: on the row embedding of that embedded matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedingMode {
    Random,
    PlusPlusOnV,
    PlusPlusOnD,
    PlusPlusOnD1,
}

impl SeedingMode {
    pub fn label(self) -> &'static str {
        match self {
            SeedingMode::Random => "random",
            SeedingMode::PlusPlusOnV => "on-v",
            SeedingMode::PlusPlusOnD => "on-d",
            SeedingMode::PlusPlusOnD1 => "on-d1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeding {
    pub mode: SeedingMode,
    pub rng_seed: u64,
}

/// Matrix the seeding strategy works on.
pub fn seeding_distances(d: &DistanceMatrix, mode: SeedingMode) -> Cow<'_, DistanceMatrix> {
    match mode {
        SeedingMode::Random | SeedingMode::PlusPlusOnV => Cow::Borrowed(d),
        SeedingMode::PlusPlusOnD => Cow::Owned(embedded_distances(d)),
        SeedingMode::PlusPlusOnD1 => Cow::Owned(embedded_distances(&embedded_distances(d))),
    }
}

/// Picks `k` distinct initial centers.
pub fn kmeanspp_seed(d: &DistanceMatrix, k: usize, seeding: Seeding) -> Result<Vec<usize>> {
    let n = d.len();
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seeding.rng_seed);
    if seeding.mode == SeedingMode::Random {
        return Ok(rand::seq::index::sample(&mut rng, n, k).into_vec());
    }
    Ok(plus_plus(&seeding_distances(d, seeding.mode), k, &mut rng))
}

fn plus_plus(d: &DistanceMatrix, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let n = d.len();
    let mut centers = Vec::with_capacity(k);
    if k == 0 {
        return centers;
    }
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    centers.push(first);
    chosen[first] = true;
    let mut nearest: Vec<f64> = (0..n).map(|i| d.get(i, first)).collect();

    while centers.len() < k {
        let weights: Vec<f64> = nearest
            .iter()
            .zip(&chosen)
            .map(|(&dist, &c)| if c { 0.0 } else { dist * dist })
            .collect();
        let total: f64 = weights.iter().sum();
        let next = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut pick = None;
            for (i, &w) in weights.iter().enumerate() {
                if w > 0.0 {
                    pick = Some(i);
                    if u < w {
                        break;
                    }
                    u -= w;
                }
            }
            pick.expect("positive total weight")
        } else {
            // every remaining node coincides with a center
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        centers.push(next);
        chosen[next] = true;
        for (i, m) in nearest.iter_mut().enumerate() {
            *m = m.min(d.get(i, next));
        }
    }
    centers
}

/// Each node goes to its nearest center; ties go to the smaller center index.
pub fn assign_nearest(d: &DistanceMatrix, centers: &[usize]) -> Vec<usize> {
    (0..d.len())
        .map(|i| {
            let mut best = 0;
            for (c, &m) in centers.iter().enumerate().skip(1) {
                if d.get(i, m) < d.get(i, centers[best]) {
                    best = c;
                }
            }
            best
        })
        .collect()
}

/// Seeds with `seeding` and hard-assigns every node to its nearest seed,
/// measuring distances where the seeding strategy does.
pub fn seed_partition(d: &DistanceMatrix, k: usize, seeding: Seeding) -> Result<(Vec<usize>, Partition)> {
    let centers = kmeanspp_seed(d, k, seeding)?;
    let assign = assign_nearest(&seeding_distances(d, seeding.mode), &centers);
    Ok((centers, Partition::new(assign, k)?))
}

/// `sum_j sum_{v in C_j} d(v, m_j)^2 mu(v)`.
pub fn frechet_objective(
    d: &DistanceMatrix,
    mu: &[f64],
    partition: &Partition,
    centers: &[usize],
) -> Result<f64> {
    let n = d.len();
    if mu.len() != n || partition.len() != n {
        return Err(Error::ShapeMismatch {
            expected: (n, n),
            got: (partition.len(), mu.len()),
        });
    }
    if centers.len() != partition.k() {
        return Err(Error::ShapeMismatch {
            expected: (partition.k(), 1),
            got: (centers.len(), 1),
        });
    }
    Ok(partition
        .assign()
        .iter()
        .enumerate()
        .map(|(v, &c)| {
            let dist = d.get(v, centers[c]);
            dist * dist * mu[v]
        })
        .sum())
}

/// Medoid of `members`: the member minimizing the weighted sum of squared
/// distances to the others; ties go to the smallest node index.
pub(crate) fn weighted_medoid(
    d: &DistanceMatrix,
    candidates: impl Iterator<Item = usize>,
    weights: impl Fn(usize) -> f64,
    support: &[usize],
) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for x in candidates {
        let cost: f64 = support
            .iter()
            .map(|&v| {
                let dist = d.get(v, x);
                dist * dist * weights(v)
            })
            .sum();
        match best {
            Some((bx, bc)) if cost > bc || (cost == bc && x > bx) => {}
            _ => best = Some((x, cost)),
        }
    }
    best.map(|(x, _)| x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LloydResult {
    pub partition: Partition,
    pub centers: Vec<usize>,
    /// Objective after each assignment step.
    pub objective_trace: Vec<f64>,
    /// Assignment produced by each iteration, starting with the assignment to
    /// the initial centers.
    pub history: Vec<Vec<usize>>,
    pub iterations: usize,
}

/// Lloyd iteration with Fréchet-mean (medoid) center updates.
///
/// Medoids are searched among cluster members; an empty cluster keeps its
/// previous center. Stops when the centers no longer change or after
/// `max_iter` assignment steps.
pub fn lloyd_frechet(
    d: &DistanceMatrix,
    mu: &[f64],
    init_centers: &[usize],
    max_iter: usize,
) -> Result<LloydResult> {
    let n = d.len();
    let k = init_centers.len();
    if mu.len() != n {
        return Err(Error::ShapeMismatch {
            expected: (n, 1),
            got: (mu.len(), 1),
        });
    }
    if k == 0 {
        return Err(Error::InvalidCenters("no centers".into()));
    }
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    if let Some(&bad) = init_centers.iter().find(|&&c| c >= n) {
        return Err(Error::InvalidCenters(format!("center {bad} is not a node")));
    }
    let mut sorted = init_centers.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidCenters("centers must be distinct".into()));
    }

    let mut centers = init_centers.to_vec();
    let mut trace = Vec::new();
    let mut history = Vec::new();
    let mut iterations = 0;
    let partition = loop {
        iterations += 1;
        let partition = Partition::new(assign_nearest(d, &centers), k)?;
        trace.push(frechet_objective(d, mu, &partition, &centers)?);
        history.push(partition.assign().to_vec());

        let updated: Vec<usize> = (0..k)
            .map(|c| {
                let members: Vec<usize> = partition.members(c).collect();
                weighted_medoid(d, members.iter().copied(), |v| mu[v], &members).unwrap_or(centers[c])
            })
            .collect();
        if updated == centers || iterations >= max_iter {
            break partition;
        }
        centers = updated;
    };
    Ok(LloydResult {
        partition,
        centers,
        objective_trace: trace,
        history,
        iterations,
    })
}
