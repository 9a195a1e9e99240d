//! Generalized mode decomposition for 1-D oscillatory signals.
//!
//! A signal is modeled as a superposition of generalized modes
//! `α_k(t)·s_k(2πN_kφ_k(t))`: a smooth instantaneous amplitude times a
//! periodic, possibly far-from-sinusoidal shape function evaluated along a
//! warped phase. The crate covers the whole estimation pipeline:
//!
//! - [`transform`]: the wave packet transform, its instantaneous frequency
//!   information function, the synchrosqueezed energy distribution, and the
//!   restricted inverse transform;
//! - [`ridge`]: ridge extraction from the squeezed distribution, harmonic
//!   grouping into fundamentals, and instantaneous profile estimation;
//! - [`regress`]: inverse-warping/folding of a residual onto one period and
//!   the one-period regression backends (partition means, free-knot-style
//!   splines);
//! - [`rdbr`]: the recursive loop that alternates per-mode regression with
//!   residual subtraction until the stop tests fire;
//! - [`diagnostics`]: well-differentiation counts, convergence-rate
//!   sequences, SNR and fold-uniformity histograms;
//! - [`synth`]: seeded generators for the benchmark scenarios;
//! - [`io`]: the CSV/JSON/binary formats shared with other tooling.

pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod io;
pub mod mat;
pub mod params;
pub mod profile;
pub mod rdbr;
pub mod regress;
pub mod ridge;
pub mod shape;
pub mod signal;
pub mod synth;
pub mod transform;

pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use params::ModelParams;
pub use profile::InstProfile;
pub use rdbr::{
    rdbr_decompose, reconstruct_mode, refine_profiles_by_alignment, Decomposition, RdbrConfig,
    RdbrReport, StopReason,
};
pub use regress::{
    partition_regress, spline_regress, warp_and_fold, FoldedSamples, RegressionConfig,
    RegressionMethod,
};
pub use ridge::{classify_fundamentals, extract_ridges, profile_from_fundamental, RidgeCurve};
pub use shape::{eval_shape, shape_mean_remove, validate_shape_class, ShapeEstimate};
pub use signal::{l2_norm, Signal, SignalValues};
pub use synth::{builtin_shape, generate, sample_grid, BuiltinShape, GridKind, ModeSpec, Preset};
pub use transform::{
    forward_wp, inst_freq_info, invert_on_support, mother_wavepacket_hat, synchrosqueeze,
    TfDistribution, WavePacketConfig, WpCoefficients,
};
