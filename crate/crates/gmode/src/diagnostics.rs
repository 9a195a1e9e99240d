use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::profile::InstProfile;
use crate::signal::{l2_norm, Signal};

/// Joint fold-bin counts for one ordered pair of modes.
#[derive(Debug, Clone, Serialize)]
pub struct JointCounts {
    pub i: usize,
    pub j: usize,
    /// Row-major `nbins × nbins` matrix: entry `(m,n)` counts samples with
    /// `frac(p_i) ∈ bin m` and `frac(p_j) ∈ bin n`.
    pub counts: Vec<u64>,
}

/// Well-differentiation measurements of a set of phase functions.
#[derive(Debug, Clone, Serialize)]
pub struct WellDiffReport {
    /// Minimum joint-bin count over all pairs; `None` is the single-mode
    /// sentinel (the condition is vacuous for one mode).
    pub gamma: Option<u64>,
    /// Largest pairwise imbalance statistic `β_{i,j}`.
    pub beta: f64,
    /// `M²(K−1)β`: below 1, the recursion contracts.
    pub contraction: f64,
    pub nbins: usize,
    #[serde(skip)]
    pub d_joint: Vec<JointCounts>,
    #[serde(skip)]
    pub d_marginal: Vec<Vec<u64>>,
    /// Set when the bin resolution is too fine for the sample count.
    pub warning: Option<String>,
}

fn fold_bin(phase: f64, nbins: usize) -> usize {
    let x = phase - phase.floor();
    ((x * nbins as f64) as usize).min(nbins - 1)
}

/// Count the folded phases into `nbins` uniform bins, per mode and per
/// ordered pair of modes, and derive the `(γ, β)` statistics.
pub fn well_differentiation(
    profiles: &[InstProfile],
    grid: &TimeGrid,
    nbins: usize,
    class_bound: f64,
) -> Result<WellDiffReport> {
    if profiles.is_empty() {
        return Err(Error::InvalidConfig("no profiles given".into()));
    }
    if nbins < 2 {
        return Err(Error::InvalidConfig("need at least 2 bins".into()));
    }
    let len = grid.len();
    for p in profiles {
        if p.len() != len {
            return Err(Error::GridMismatch("profile length vs grid length"));
        }
    }
    let k = profiles.len();

    let bins: Vec<Vec<usize>> = profiles
        .iter()
        .map(|p| p.phase().iter().map(|&v| fold_bin(v, nbins)).collect())
        .collect();

    let mut d_marginal = vec![vec![0u64; nbins]; k];
    for (i, b) in bins.iter().enumerate() {
        for &m in b {
            d_marginal[i][m] += 1;
        }
    }

    let warning = (nbins * nbins > len).then(|| {
        format!(
            "{}² joint bins exceed {} samples; γ is likely 0",
            nbins, len
        )
    });

    if k == 1 {
        return Ok(WellDiffReport {
            gamma: None,
            beta: 0.0,
            contraction: 0.0,
            nbins,
            d_joint: Vec::new(),
            d_marginal,
            warning,
        });
    }

    let mut d_joint = Vec::with_capacity(k * (k - 1));
    let mut gamma = u64::MAX;
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let mut counts = vec![0u64; nbins * nbins];
            for l in 0..len {
                counts[bins[i][l] * nbins + bins[j][l]] += 1;
            }
            gamma = gamma.min(*counts.iter().min().expect("nonempty counts"));
            d_joint.push(JointCounts { i, j, counts });
        }
    }

    let mut beta = 0.0f64;
    for jc in &d_joint {
        let mut sum = 0.0;
        for m in 0..nbins {
            let denom = d_marginal[jc.i][m];
            if denom == 0 {
                // Empty marginal bin implies empty joint row; with γ = 0 the
                // row contributes nothing.
                continue;
            }
            let row: f64 = (0..nbins)
                .map(|n| {
                    let d = jc.counts[m * nbins + n] as f64 - gamma as f64;
                    d * d
                })
                .sum();
            sum += row / denom as f64;
        }
        beta = beta.max(sum.sqrt());
    }

    Ok(WellDiffReport {
        gamma: Some(gamma),
        beta,
        contraction: class_bound * class_bound * (k - 1) as f64 * beta,
        nbins,
        d_joint,
        d_marginal,
        warning,
    })
}

/// A rate sequence; entries are `None` where the underlying difference
/// underflows.
pub type RateSequence = Vec<Option<f64>>;

/// Convergence-rate sequences from a residual-norm history:
/// `μ_j = log|ε₁^(j−1) − ε₁^(j)|` and `η_j = μ_j − μ_{j+1}`. Entries whose
/// difference underflows are reported as `None`.
pub fn convergence_rates(residual_norms: &[f64]) -> Result<(RateSequence, RateSequence)> {
    if residual_norms.len() < 3 {
        return Err(Error::InvalidConfig(format!(
            "need at least 3 residual norms, got {}",
            residual_norms.len()
        )));
    }
    let mu: Vec<Option<f64>> = residual_norms
        .windows(2)
        .map(|w| {
            let diff = (w[0] - w[1]).abs();
            (diff >= 1e-15).then(|| diff.ln())
        })
        .collect();
    let eta: Vec<Option<f64>> = mu
        .windows(2)
        .map(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        })
        .collect();
    Ok((mu, eta))
}

/// `SNR [dB] = min_i 10·log₁₀(‖f_i‖_{L²} / σ²)` over the clean modes.
pub fn snr_db(modes: &[Signal], sigma2: f64) -> Result<f64> {
    if sigma2 <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "noise variance must be positive, got {sigma2}"
        )));
    }
    if modes.is_empty() {
        return Err(Error::InvalidConfig("no modes given".into()));
    }
    let mut snr = f64::INFINITY;
    for m in modes {
        snr = snr.min(10.0 * (l2_norm(m)? / sigma2).log10());
    }
    Ok(snr)
}

/// Histogram of the folded phase with the χ² statistic against the uniform
/// expectation `L/nbins`.
#[derive(Debug, Clone, Serialize)]
pub struct FoldHistogram {
    pub counts: Vec<u64>,
    pub chi2: f64,
}

pub fn fold_uniformity(
    profile: &InstProfile,
    grid: &TimeGrid,
    nbins: usize,
) -> Result<FoldHistogram> {
    if nbins < 2 {
        return Err(Error::InvalidConfig("need at least 2 bins".into()));
    }
    if profile.len() != grid.len() {
        return Err(Error::GridMismatch("profile length vs grid length"));
    }
    let mut counts = vec![0u64; nbins];
    for &p in profile.phase() {
        counts[fold_bin(p, nbins)] += 1;
    }
    let expected = grid.len() as f64 / nbins as f64;
    let chi2 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    Ok(FoldHistogram { counts, chi2 })
}
