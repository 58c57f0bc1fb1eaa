//! Synthetic benchmark graphs.

mod attributes;
mod benchmark;
mod noise;
mod sbm;

pub use attributes::{
    bspline_basis, clamped_knots, gen_attributes, gen_histograms, gen_splines, histogram_masses, perturbation_level,
    sample_dirichlet, spline_coefficients, PerturbationLevel, SplineBasis, CURVE_SAMPLES, HISTOGRAM_BIN_WIDTH,
    HISTOGRAM_SUPPORT, SPLINE_COEFFICIENTS, SPLINE_DEGREE,
};
pub use noise::{gaussian_noise, pure_noise};
pub use sbm::{block_matrix, planted_labels, sample_sbm, shape_mask, BlockModelConfig, Shape, MAX_SAMPLE_ATTEMPTS};

pub use benchmark::{Structure, Synthetic, SyntheticSpec};
