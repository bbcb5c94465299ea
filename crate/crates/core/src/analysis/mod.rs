//! Security and quality metrics, serializable reports, and the experiment
//! harnesses built on them.

mod correlation;
mod experiments;
mod metrics;
mod noise;
mod report;

pub use correlation::{
    adjacent_pixel_correlation, pearson, pearson_f64, sequence_autocorrelation, Direction,
    DEFAULT_ADJACENT_SAMPLES,
};
pub use experiments::{
    differential_experiment, key_sensitivity_experiment, noise_robustness_experiment,
    DEFAULT_NOISE_VARIANCES, DEFAULT_PERTURBATION,
};
pub use metrics::{
    chi_square_uniform, entropy, entropy_of_counts, histogram, mse, npcr, psnr, ssim, uaci,
    ChiSquareTest, Histogram, Psnr, SSIM_WINDOW,
};
pub use noise::{add_gaussian_noise, NoiseSpec};
pub use report::{AnalysisReport, Table, Value};
