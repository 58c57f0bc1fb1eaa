//! Distances on node attributes: DTW on curves, Wasserstein-1 on histograms,
//! their weighted combination, and an averaged Hausdorff distance for nodes
//! that carry several curves or histograms.

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{check_unit, DistanceMatrix};

const MASS_TOL: f64 = 1e-9;

/// Curve sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Curve(Vec<f64>);

impl Curve {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyCurve);
        }
        if samples.len() < 2 {
            return Err(Error::InvalidParameter("a curve needs at least two samples".into()));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("curve has a non-finite sample".into()));
        }
        Ok(Self(samples))
    }

    pub fn samples(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Curve {
    type Error = Error;
    fn try_from(samples: Vec<f64>) -> Result<Self> {
        Self::new(samples)
    }
}

impl From<Curve> for Vec<f64> {
    fn from(c: Curve) -> Self {
        c.0
    }
}

/// Probability masses on a regular grid of bins of width `bin_width`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHistogram")]
pub struct Histogram {
    bin_width: f64,
    masses: Vec<f64>,
}

#[derive(Deserialize)]
struct RawHistogram {
    bin_width: f64,
    masses: Vec<f64>,
}

impl TryFrom<RawHistogram> for Histogram {
    type Error = Error;
    fn try_from(raw: RawHistogram) -> Result<Self> {
        Self::new(raw.masses, raw.bin_width)
    }
}

impl Histogram {
    pub fn new(masses: Vec<f64>, bin_width: f64) -> Result<Self> {
        if !(bin_width > 0.0 && bin_width.is_finite()) {
            return Err(Error::InvalidHistogram(format!("bin width {bin_width}")));
        }
        if masses.is_empty() || masses.iter().any(|&m| !m.is_finite() || m < 0.0) {
            return Err(Error::InvalidHistogram("masses must be nonnegative".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidHistogram(format!("masses sum to {total}")));
        }
        Ok(Self { bin_width, masses })
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }
}

/// Attributes of one node. In the road setting a two-way street carries one
/// curve and one histogram per direction.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeBundle {
    #[serde(default)]
    pub curves: Vec<Curve>,
    #[serde(default)]
    pub histograms: Vec<Histogram>,
}

/// Pointwise cost inside DTW.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DtwCost {
    #[default]
    Absolute,
    Squared,
}

/// Dynamic time warping with absolute pointwise cost, no window, both
/// endpoints matched.
pub fn dtw(f: &[f64], g: &[f64]) -> Result<f64> {
    dtw_with_cost(f, g, DtwCost::Absolute)
}

pub fn dtw_with_cost(f: &[f64], g: &[f64], cost: DtwCost) -> Result<f64> {
    match cost {
        DtwCost::Absolute => dtw_by(f, g, |a, b| (a - b).abs()),
        DtwCost::Squared => dtw_by(f, g, |a, b| (a - b) * (a - b)),
    }
}

#[inline]
fn min2(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}

fn dtw_by(f: &[f64], g: &[f64], cost: impl Fn(f64, f64) -> f64) -> Result<f64> {
    if f.is_empty() || g.is_empty() {
        return Err(Error::EmptyCurve);
    }
    // two rolling rows over g
    let mut prev = vec![f64::INFINITY; g.len() + 1];
    let mut cur = vec![f64::INFINITY; g.len() + 1];
    prev[0] = 0.0;
    for &a in f {
        let mut left = f64::INFINITY;
        for ((out, up), &b) in cur[1..].iter_mut().zip(prev.windows(2)).zip(g) {
            let c = cost(a, b);
            left = min2(left + c, min2(up[0], up[1]) + c);
            *out = left;
        }
        std::mem::swap(&mut prev, &mut cur);
        prev[0] = f64::INFINITY;
    }
    Ok(prev[g.len()])
}

/// Wasserstein-1 distance between two histograms on the same grid.
pub fn wasserstein1_hist(h1: &Histogram, h2: &Histogram) -> Result<f64> {
    if h1.masses.len() != h2.masses.len() || h1.bin_width != h2.bin_width {
        return Err(Error::GridMismatch);
    }
    let mut cdf_gap = 0.0;
    let mut total = 0.0;
    for (a, b) in h1.masses.iter().zip(&h2.masses) {
        cdf_gap += a - b;
        total += cdf_gap.abs();
    }
    Ok(h1.bin_width * total)
}

/// Averaged Hausdorff distance `(max_a d(a, B) + max_b d(b, A)) / 2`.
pub fn hausdorff_avg<T>(a: &[T], b: &[T], mut d: impl FnMut(&T, &T) -> Result<f64>) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut cross = vec![vec![0.0; b.len()]; a.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            cross[i][j] = d(x, y)?;
        }
    }
    let a_to_b = cross
        .iter()
        .map(|row| row.iter().copied().fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max);
    let b_to_a = (0..b.len())
        .map(|j| cross.iter().map(|row| row[j]).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(0.5 * (a_to_b + b_to_a))
}

/// Min/max of a component's off-diagonal distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scale {
    pub lo: f64,
    pub hi: f64,
}

impl Scale {
    /// Maps `v` onto `[0, 1]`. Degenerate scales map everything to zero.
    pub fn apply(&self, v: f64) -> f64 {
        if self.hi > self.lo {
            (v - self.lo) / (self.hi - self.lo)
        } else {
            0.0
        }
    }
}

/// Combined attribute distance `beta * dtw~ + (1 - beta) * W1~`, where `~`
/// denotes min-max normalization over all node pairs of a graph.
///
/// Either component may be absent from every bundle, in which case the other
/// one is used alone. Nodes with several curves or histograms are compared
/// with [`hausdorff_avg`]; for single attributes this reduces to the plain
/// distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeMetric {
    pub beta: f64,
    pub dtw_cost: DtwCost,
    pub curve_scale: Option<Scale>,
    pub histogram_scale: Option<Scale>,
}

#[derive(Clone, Copy)]
struct Components {
    curves: bool,
    histograms: bool,
}

fn detect_components(bundles: &[AttributeBundle]) -> Result<Components> {
    let has = |f: fn(&AttributeBundle) -> bool| -> Result<bool> {
        let count = bundles.iter().filter(|b| f(b)).count();
        match count {
            0 => Ok(false),
            c if c == bundles.len() => Ok(true),
            _ => Err(Error::BundleMismatch(
                "some nodes carry a component that others lack".into(),
            )),
        }
    };
    let components = Components {
        curves: has(|b| !b.curves.is_empty())?,
        histograms: has(|b| !b.histograms.is_empty())?,
    };
    if !components.curves && !components.histograms {
        return Err(Error::BundleMismatch("bundles carry no attributes".into()));
    }
    Ok(components)
}

fn curve_distance(a: &AttributeBundle, b: &AttributeBundle, cost: DtwCost) -> Result<f64> {
    hausdorff_avg(&a.curves, &b.curves, |x, y| dtw_with_cost(x.samples(), y.samples(), cost))
}

fn histogram_distance(a: &AttributeBundle, b: &AttributeBundle) -> Result<f64> {
    hausdorff_avg(&a.histograms, &b.histograms, wasserstein1_hist)
}

fn scale_of(values: &[f64]) -> Scale {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    Scale { lo, hi }
}

impl AttributeMetric {
    /// Computes the per-component pairwise distances, fits the min-max scales
    /// and returns the metric together with the combined distance matrix.
    pub fn fit(
        bundles: &[AttributeBundle],
        beta: f64,
        dtw_cost: DtwCost,
    ) -> Result<(Self, DistanceMatrix)> {
        check_unit(beta, "beta")?;
        let n = bundles.len();
        if n < 2 {
            return Err(Error::BundleMismatch("need at least two bundles".into()));
        }
        let comps = detect_components(bundles)?;

        let rows: Vec<Vec<(f64, f64)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                ((i + 1)..n)
                    .map(|j| {
                        let c = if comps.curves {
                            curve_distance(&bundles[i], &bundles[j], dtw_cost)?
                        } else {
                            0.0
                        };
                        let h = if comps.histograms {
                            histogram_distance(&bundles[i], &bundles[j])?
                        } else {
                            0.0
                        };
                        Ok((c, h))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;

        let curve_vals: Vec<f64> = rows.iter().flatten().map(|p| p.0).collect();
        let hist_vals: Vec<f64> = rows.iter().flatten().map(|p| p.1).collect();
        let metric = Self {
            beta,
            dtw_cost,
            curve_scale: comps.curves.then(|| scale_of(&curve_vals)),
            histogram_scale: comps.histograms.then(|| scale_of(&hist_vals)),
        };

        let mut values = Array2::zeros((n, n));
        for (i, row) in rows.iter().enumerate() {
            for (off, &(c, h)) in row.iter().enumerate() {
                let j = i + 1 + off;
                let v = metric.combine(c, h);
                values[[i, j]] = v;
                values[[j, i]] = v;
            }
        }
        Ok((metric, DistanceMatrix::new(values)?))
    }

    fn combine(&self, curve: f64, hist: f64) -> f64 {
        match (self.curve_scale, self.histogram_scale) {
            (Some(cs), Some(hs)) => self.beta * cs.apply(curve) + (1.0 - self.beta) * hs.apply(hist),
            (Some(cs), None) => cs.apply(curve),
            (None, Some(hs)) => hs.apply(hist),
            (None, None) => 0.0,
        }
    }

    /// Distance between two bundles under the fitted scales.
    pub fn distance(&self, a: &AttributeBundle, b: &AttributeBundle) -> Result<f64> {
        let c = match self.curve_scale {
            Some(_) => curve_distance(a, b, self.dtw_cost)?,
            None => 0.0,
        };
        let h = match self.histogram_scale {
            Some(_) => histogram_distance(a, b)?,
            None => 0.0,
        };
        Ok(self.combine(c, h))
    }
}

/// Pairwise attribute distance matrix with `beta`-weighted, min-max
/// normalized DTW and W1 components.
pub fn attribute_distance_matrix(bundles: &[AttributeBundle], beta: f64) -> Result<DistanceMatrix> {
    AttributeMetric::fit(bundles, beta, DtwCost::Absolute).map(|(_, d)| d)
}

/// Attribute distance of two single-curve, single-histogram bundles under
/// the scales of `metric`.
pub fn attribute_distance(
    a: &AttributeBundle,
    b: &AttributeBundle,
    beta: f64,
    metric: &AttributeMetric,
) -> Result<f64> {
    for x in [a, b] {
        if x.curves.len() != 1 || x.histograms.len() != 1 {
            return Err(Error::BundleMismatch(
                "expected exactly one curve and one histogram".into(),
            ));
        }
    }
    check_unit(beta, "beta")?;
    AttributeMetric {
        beta,
        ..metric.clone()
    }
    .distance(a, b)
}
