use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::profile::InstProfile;
use crate::regress::{partition_regress, spline_regress, FoldedSamples, RegressionConfig};
use crate::shape::{eval_shape, ShapeEstimate};
use crate::signal::{l2_norm_samples, Signal};

/// Loop controls for the recursive regression.
#[derive(Debug, Clone, PartialEq)]
pub struct RdbrConfig {
    pub max_iter: usize,
    /// Accuracy parameter ε shared by all three stop tests.
    pub eps: f64,
    pub regression: RegressionConfig,
}

impl Default for RdbrConfig {
    fn default() -> Self {
        Self {
            max_iter: 200,
            eps: 1e-6,
            regression: RegressionConfig::default(),
        }
    }
}

impl RdbrConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter < 1 {
            return Err(Error::InvalidConfig("max_iter must be ≥ 1".into()));
        }
        if self.eps <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "eps must be positive, got {}",
                self.eps
            )));
        }
        self.regression.validate()
    }
}

/// Why the loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxIter,
    ResidualSmall,
    IncrementSmall,
    Stagnation,
}

/// Per-iteration record of the two norms watched by the stop tests.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RdbrReport {
    /// `ε₁ = ‖r‖_{L²}` after each iteration.
    pub residual_norms: Vec<f64>,
    /// `ε₂ = max_k ‖increment_k‖_{L²}` for each iteration.
    pub shape_increment_norms: Vec<f64>,
    pub iterations: usize,
    pub stop_reason: StopReason,
}

/// Output of a full decomposition run.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Accumulated shape estimates, one per mode, mean-zero.
    pub shapes: Vec<ShapeEstimate>,
    /// Reconstructed generalized modes `α_k(t)·s̃_k(2πp_k(t))`.
    pub modes: Vec<Signal>,
    pub residual: Signal,
    pub report: RdbrReport,
}

/// Compose a shape with a profile: `values[ℓ] = α(t_ℓ)·s(p(t_ℓ))`.
pub fn reconstruct_mode(
    shape: &ShapeEstimate,
    profile: &InstProfile,
    grid: &TimeGrid,
) -> Result<Signal> {
    if grid.len() != profile.len() {
        return Err(Error::LengthMismatch {
            left: grid.len(),
            right: profile.len(),
            context: "grid vs profile samples",
        });
    }
    let values = (0..grid.len())
        .map(|l| profile.amplitude()[l] * eval_shape(shape, profile.phase()[l]))
        .collect();
    Signal::real(grid.clone(), values)
}

/// If the residual norm ever exceeds this multiple of its running minimum,
/// give up and return the best state seen.
const DIVERGENCE_FACTOR: f64 = 10.0;

/// Recursive diffeomorphism-based regression: alternate per-mode one-period
/// regression on the residual with residual subtraction until one of the
/// stop tests fires.
///
/// Iteration `j` folds the residual onto each mode's period, regresses an
/// increment, removes its mean, accumulates it into the running shape, and
/// subtracts the composed increments from the residual. The loop continues
/// while `j < max_iter`, `ε₁ > ε`, `ε₂ > ε` and `|ε₁ − ε₀| > ε`, with
/// `ε₀ = 2, ε₁ = ε₂ = 1` initially.
pub fn rdbr_decompose(
    sig: &Signal,
    profiles: &[InstProfile],
    cfg: &RdbrConfig,
) -> Result<Decomposition> {
    cfg.validate()?;
    if profiles.is_empty() {
        return Err(Error::InvalidConfig("no instantaneous profiles".into()));
    }
    let input = sig.as_real()?;
    for p in profiles {
        if p.len() != input.len() {
            return Err(Error::GridMismatch("profile length vs signal length"));
        }
    }
    let grid = sig.grid();
    let n_modes = profiles.len();

    // The folded x-coordinates depend only on the phases, which never change
    // across iterations; fold once and swap the y-values in place.
    let mut folded: Vec<FoldedSamples> = profiles
        .iter()
        .map(|p| FoldedSamples {
            xs: p.phase().iter().map(|v| v - v.floor()).collect(),
            ys: vec![0.0; input.len()],
            source_times: grid.points().to_vec(),
        })
        .collect();

    let g = cfg.regression.shape_grid;
    let mut shapes = vec![ShapeEstimate::zeros(g); n_modes];
    let mut residual: Vec<f64> = input.to_vec();

    let mut eps0 = 2.0f64;
    let mut eps1 = 1.0f64;
    let mut eps2 = 1.0f64;
    let mut residual_norms = Vec::new();
    let mut increment_norms = Vec::new();
    let mut iterations = 0usize;

    let mut best_norm = f64::INFINITY;
    let mut best_state: Option<(Vec<ShapeEstimate>, Vec<f64>)> = None;
    let mut diverged = false;

    while iterations < cfg.max_iter
        && eps1 > cfg.eps
        && eps2 > cfg.eps
        && (eps1 - eps0).abs() > cfg.eps
    {
        for (k, fs) in folded.iter_mut().enumerate() {
            let amp = profiles[k].amplitude();
            for (l, y) in fs.ys.iter_mut().enumerate() {
                *y = residual[l] / amp[l];
            }
        }

        // All modes regress against the same residual; the solves are
        // independent.
        let increments: Vec<ShapeEstimate> = folded
            .par_iter()
            .map(|fs| match cfg.regression.method {
                crate::regress::RegressionMethod::Partition => {
                    partition_regress(fs, &cfg.regression)
                }
                crate::regress::RegressionMethod::Spline => spline_regress(fs, &cfg.regression),
            })
            .collect::<Result<_>>()?;

        let mut max_increment = 0.0f64;
        for (k, inc) in increments.iter().enumerate() {
            shapes[k].add_assign(inc)?;
            max_increment = max_increment.max(inc.l2_norm());
            let amp = profiles[k].amplitude();
            for (l, r) in residual.iter_mut().enumerate() {
                *r -= amp[l] * eval_shape(inc, folded[k].xs[l]);
            }
        }

        eps0 = eps1;
        eps1 = l2_norm_samples(grid, &residual);
        eps2 = max_increment;
        residual_norms.push(eps1);
        increment_norms.push(eps2);
        iterations += 1;

        if eps1 < best_norm {
            best_norm = eps1;
            best_state = Some((shapes.clone(), residual.clone()));
        } else if eps1 > DIVERGENCE_FACTOR * best_norm {
            diverged = true;
            break;
        }
    }

    let stop_reason = if diverged {
        if let Some((s, r)) = best_state.take() {
            shapes = s;
            residual = r;
        }
        StopReason::Stagnation
    } else if eps1 <= cfg.eps {
        StopReason::ResidualSmall
    } else if eps2 <= cfg.eps {
        StopReason::IncrementSmall
    } else if (eps1 - eps0).abs() <= cfg.eps {
        StopReason::Stagnation
    } else {
        StopReason::MaxIter
    };

    let modes: Vec<Signal> = shapes
        .iter()
        .zip(profiles)
        .map(|(s, p)| reconstruct_mode(s, p, grid))
        .collect::<Result<_>>()?;

    Ok(Decomposition {
        shapes,
        modes,
        residual: Signal::real(grid.clone(), residual)?,
        report: RdbrReport {
            residual_norms,
            shape_increment_norms: increment_norms,
            iterations,
            stop_reason,
        },
    })
}

/// Phase search half-width, in cycles, for the alignment refinement.
const ALIGN_SPAN: f64 = 0.05;
const ALIGN_STEPS: usize = 41;

/// Refine estimated phases by template alignment against a previous
/// decomposition: per mode, the other modes' reconstructions are subtracted
/// from the signal and a local phase offset is fitted in windows of
/// `window_periods` fundamental periods by maximizing the correlation with
/// the mode's own template. Offsets interpolate linearly between window
/// centers. Useful when fundamentals are weak (spiky shapes) and the
/// transform-derived phase carries slow drift; a mode whose refined phase
/// would lose monotonicity keeps its original phase.
pub fn refine_profiles_by_alignment(
    sig: &Signal,
    profiles: &[InstProfile],
    previous: &Decomposition,
    window_periods: f64,
) -> Result<Vec<InstProfile>> {
    let f = sig.as_real()?;
    if previous.modes.len() != profiles.len() {
        return Err(Error::LengthMismatch {
            left: previous.modes.len(),
            right: profiles.len(),
            context: "decomposition modes vs profiles",
        });
    }
    let l = f.len();
    let mut refined = Vec::with_capacity(profiles.len());
    for (k, prof) in profiles.iter().enumerate() {
        let mut cleaned: Vec<f64> = f.to_vec();
        for (j, mode) in previous.modes.iter().enumerate() {
            if j != k {
                for (c, m) in cleaned.iter_mut().zip(mode.as_real()?) {
                    *c -= m;
                }
            }
        }
        let hint = prof.fundamental_freq_hint().max(1.0);
        let window = ((window_periods * l as f64 / hint) as usize).clamp(8, l);
        let deltas = alignment_offsets(&cleaned, prof, &previous.shapes[k], window);
        let new_phase: Vec<f64> = prof
            .phase()
            .iter()
            .zip(&deltas)
            .map(|(p, d)| p + d)
            .collect();
        if new_phase.windows(2).all(|w| w[1] > w[0]) {
            refined.push(InstProfile::new(
                new_phase,
                prof.amplitude().to_vec(),
                prof.fundamental_freq_hint(),
            )?);
        } else {
            refined.push(prof.clone());
        }
    }
    Ok(refined)
}

fn alignment_offsets(
    cleaned: &[f64],
    prof: &InstProfile,
    shape: &ShapeEstimate,
    window: usize,
) -> Vec<f64> {
    let l = cleaned.len();
    let nwin = (l / window).max(1);
    let step = 2.0 * ALIGN_SPAN / (ALIGN_STEPS - 1) as f64;
    let mut centers = Vec::with_capacity(nwin);
    let mut deltas = Vec::with_capacity(nwin);
    for wi in 0..nwin {
        let lo = wi * window;
        let hi = if wi + 1 == nwin { l } else { (wi + 1) * window };
        let mut scores = Vec::with_capacity(ALIGN_STEPS);
        for si in 0..ALIGN_STEPS {
            let delta = -ALIGN_SPAN + si as f64 * step;
            let mut num = 0.0;
            let mut den = 0.0;
            for j in lo..hi {
                let tmpl = prof.amplitude()[j] * eval_shape(shape, prof.phase()[j] + delta);
                num += tmpl * cleaned[j];
                den += tmpl * tmpl;
            }
            scores.push(if den > 0.0 { num / den.sqrt() } else { 0.0 });
        }
        let bi = scores
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap_or(ALIGN_STEPS / 2);
        let mut delta = -ALIGN_SPAN + bi as f64 * step;
        if scores[bi] <= 0.0 {
            // No meaningful correlation in this window; leave the phase be.
            delta = 0.0;
        } else if bi > 0 && bi + 1 < scores.len() {
            let (ym, y0, yp) = (scores[bi - 1], scores[bi], scores[bi + 1]);
            let denom = ym - 2.0 * y0 + yp;
            if denom.abs() > 1e-12 {
                delta += 0.5 * (ym - yp) / denom * step;
            }
        }
        centers.push(0.5 * (lo + hi) as f64);
        deltas.push(delta);
    }
    (0..l)
        .map(|j| {
            let x = j as f64;
            if x <= centers[0] || nwin == 1 {
                deltas[0]
            } else if x >= centers[nwin - 1] {
                deltas[nwin - 1]
            } else {
                let mut w = 0;
                while centers[w + 1] < x {
                    w += 1;
                }
                let t = (x - centers[w]) / (centers[w + 1] - centers[w]);
                deltas[w] + t * (deltas[w + 1] - deltas[w])
            }
        })
        .collect()
}
