//! Group-structured node attributes: B-spline curves and Dirichlet
//! histograms, perturbed within each group.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::attributes::{AttributeBundle, Curve, Histogram};
use crate::error::{Error, Result};

pub const SPLINE_DEGREE: usize = 3;
pub const SPLINE_COEFFICIENTS: usize = 24;
pub const CURVE_SAMPLES: usize = 96;
pub const HISTOGRAM_SUPPORT: usize = 20;
pub const HISTOGRAM_BIN_WIDTH: f64 = 5.0;

/// Clamped knot vector on `[0, 1]` with uniformly spaced interior knots,
/// sized for `coefficients` basis functions of the given degree.
pub fn clamped_knots(coefficients: usize, degree: usize) -> Vec<f64> {
    let interior = coefficients - degree - 1;
    let mut knots = vec![0.0; degree + 1];
    knots.extend((1..=interior).map(|i| i as f64 / (interior + 1) as f64));
    knots.extend(std::iter::repeat_n(1.0, degree + 1));
    knots
}

/// Values of all `knots.len() - degree - 1` B-spline basis functions at `x`
/// (Cox–de Boor, bottom-up). At the right end of a clamped knot vector the
/// last basis function is 1.
pub fn bspline_basis(knots: &[f64], degree: usize, x: f64) -> Vec<f64> {
    let count = knots.len() - degree - 1;
    let last = knots[knots.len() - 1];
    let mut b: Vec<f64> = (0..knots.len() - 1)
        .map(|i| {
            let inside = knots[i] <= x && x < knots[i + 1];
            let at_end = x == last && knots[i] < last && knots[i + 1] == last;
            if inside || at_end {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for p in 1..=degree {
        for i in 0..knots.len() - 1 - p {
            let left = knots[i + p] - knots[i];
            let right = knots[i + p + 1] - knots[i + 1];
            let mut v = 0.0;
            if left > 0.0 {
                v += (x - knots[i]) / left * b[i];
            }
            if right > 0.0 {
                v += (knots[i + p + 1] - x) / right * b[i + 1];
            }
            b[i] = v;
        }
    }
    b.truncate(count);
    b
}

pub struct SplineBasis {
    /// `values[s][l]` = basis function `l` at grid point `s`.
    values: Vec<Vec<f64>>,
}

impl SplineBasis {
    pub fn new(coefficients: usize, degree: usize, samples: usize) -> Self {
        let knots = clamped_knots(coefficients, degree);
        let values = (0..samples)
            .map(|s| bspline_basis(&knots, degree, s as f64 / (samples - 1) as f64))
            .collect();
        Self { values }
    }

    pub fn evaluate(&self, coefficients: &[f64]) -> Vec<f64> {
        self.values
            .iter()
            .map(|row| row.iter().zip(coefficients).map(|(b, c)| b * c).sum())
            .collect()
    }
}

impl Default for SplineBasis {
    fn default() -> Self {
        Self::new(SPLINE_COEFFICIENTS, SPLINE_DEGREE, CURVE_SAMPLES)
    }
}

/// Spline coefficients per node: one `U(0, 1)` base vector per group, plus
/// `U(-epsilon, epsilon)` noise per node.
pub fn spline_coefficients(counts: &[usize], epsilon: f64, rng: &mut impl Rng) -> Result<Vec<Vec<f64>>> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {epsilon}")));
    }
    let mut out = Vec::with_capacity(counts.iter().sum());
    for &count in counts {
        let base: Vec<f64> = (0..SPLINE_COEFFICIENTS).map(|_| rng.random::<f64>()).collect();
        for _ in 0..count {
            out.push(
                base.iter()
                    .map(|&theta| {
                        if epsilon > 0.0 {
                            theta + rng.random_range(-epsilon..=epsilon)
                        } else {
                            theta
                        }
                    })
                    .collect(),
            );
        }
    }
    Ok(out)
}

pub fn gen_splines(counts: &[usize], epsilon: f64, rng: &mut impl Rng) -> Result<Vec<Curve>> {
    let basis = SplineBasis::default();
    spline_coefficients(counts, epsilon, rng)?
        .iter()
        .map(|c| Curve::new(basis.evaluate(c)))
        .collect()
}

/// One draw from `Dirichlet(concentration)` via normalized Gamma variates.
pub fn sample_dirichlet(concentration: &[f64], rng: &mut impl Rng) -> Result<Vec<f64>> {
    let gammas = concentration
        .iter()
        .map(|&a| Gamma::new(a, 1.0).map_err(|e| Error::InvalidParameter(format!("concentration {a}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    loop {
        let draws: Vec<f64> = gammas.iter().map(|g| g.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 && total.is_finite() {
            return Ok(draws.iter().map(|d| d / total).collect());
        }
    }
}

type Masses = Vec<Vec<f64>>;

/// Base distribution `p_j ~ Dirichlet(U(0, 1)^S)` per group, then each node
/// draws from `Dirichlet(c * p_j)`. Returns the group bases and the node masses.
pub fn histogram_masses(counts: &[usize], c: f64, support: usize, rng: &mut impl Rng) -> Result<(Masses, Masses)> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
    }
    if support < 2 {
        return Err(Error::InvalidParameter("histogram support needs at least two bins".into()));
    }
    let mut bases = Vec::with_capacity(counts.len());
    let mut nodes = Vec::with_capacity(counts.iter().sum());
    for &count in counts {
        let gamma: Vec<f64> = (0..support).map(|_| rng.random::<f64>()).collect();
        let base = sample_dirichlet(&gamma, rng)?;
        // components can underflow to zero; keep the concentration positive
        let conc: Vec<f64> = base.iter().map(|&p| (c * p).max(f64::MIN_POSITIVE)).collect();
        for _ in 0..count {
            nodes.push(sample_dirichlet(&conc, rng)?);
        }
        bases.push(base);
    }
    Ok((bases, nodes))
}

pub fn gen_histograms(counts: &[usize], c: f64, support: usize, rng: &mut impl Rng) -> Result<Vec<Histogram>> {
    let (_, nodes) = histogram_masses(counts, c, support, rng)?;
    nodes
        .into_iter()
        .map(|m| Histogram::new(m, HISTOGRAM_BIN_WIDTH))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationLevel {
    pub level: u8,
    pub epsilon: f64,
    pub c: f64,
}

pub fn perturbation_level(level: u8) -> Result<PerturbationLevel> {
    let (epsilon, c) = match level {
        1 => (0.05, 1000.0),
        2 => (0.15, 200.0),
        3 => (0.20, 80.0),
        4 => (0.35, 15.0),
        5 => (2.00, 2.0),
        _ => return Err(Error::BadLevel(level)),
    };
    Ok(PerturbationLevel { level, epsilon, c })
}

/// One curve and one histogram per node, groups laid out contiguously.
pub fn gen_attributes(counts: &[usize], epsilon: f64, c: f64, rng: &mut impl Rng) -> Result<Vec<AttributeBundle>> {
    let curves = gen_splines(counts, epsilon, rng)?;
    let histograms = gen_histograms(counts, c, HISTOGRAM_SUPPORT, rng)?;
    Ok(curves
        .into_iter()
        .zip(histograms)
        .map(|(curve, hist)| AttributeBundle {
            curves: vec![curve],
            histograms: vec![hist],
        })
        .collect())
}
