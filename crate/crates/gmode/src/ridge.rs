use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::mat::Mat;
use crate::profile::InstProfile;
use crate::transform::{inst_freq_info, invert_on_support, TfDistribution, WavePacketConfig,
                       WpCoefficients, VF_SENTINEL};

/// Half-width, in frequency bins, of the band zeroed around an extracted
/// ridge and of the coefficient mask used for amplitude recovery.
pub const DEFAULT_BAND_HALFWIDTH: usize = 3;

/// A ridge dies when its mean energy falls below this fraction of the
/// first ridge's.
pub const DEFAULT_STOP_FRACTION: f64 = 0.01;

/// One extracted energy ridge: a frequency curve over time with the band
/// energy that supports it.
#[derive(Debug, Clone)]
pub struct RidgeCurve {
    pub times: Vec<f64>,
    pub freqs: Vec<f64>,
    pub energy: Vec<f64>,
    /// Frequency quantization of the source distribution.
    pub bin_width: f64,
}

impl RidgeCurve {
    pub fn mean_freq(&self) -> f64 {
        self.freqs.iter().sum::<f64>() / self.freqs.len() as f64
    }

    pub fn mean_energy(&self) -> f64 {
        self.energy.iter().sum::<f64>() / self.energy.len() as f64
    }
}

/// Knobs for iterative ridge extraction.
#[derive(Debug, Clone)]
pub struct RidgeOptions {
    pub band_halfwidth: usize,
    pub stop_fraction: f64,
    /// Refine the DP path to the local energy centroid; keeps integrated
    /// phases from accumulating bin-quantization drift.
    pub refine: bool,
}

impl Default for RidgeOptions {
    fn default() -> Self {
        Self {
            band_halfwidth: DEFAULT_BAND_HALFWIDTH,
            stop_fraction: DEFAULT_STOP_FRACTION,
            refine: true,
        }
    }
}

/// Iteratively extract ridges: each pass maximizes
/// `Σ_j log(energy) − penalty·(Δbin)²` over paths by dynamic programming,
/// then zeroes a band around the winner before the next pass. Extraction
/// stops at `max_ridges` or when a ridge's mean energy drops below the stop
/// fraction of the first ridge's.
pub fn extract_ridges(
    tf: &TfDistribution,
    max_ridges: usize,
    smoothness_penalty: f64,
) -> Result<Vec<RidgeCurve>> {
    extract_ridges_opts(tf, max_ridges, smoothness_penalty, &RidgeOptions::default())
}

pub fn extract_ridges_opts(
    tf: &TfDistribution,
    max_ridges: usize,
    smoothness_penalty: f64,
    opts: &RidgeOptions,
) -> Result<Vec<RidgeCurve>> {
    if max_ridges < 1 {
        return Err(Error::InvalidConfig("max_ridges must be ≥ 1".into()));
    }
    let nbins = tf.freqs().len();
    let ntimes = tf.times().len();
    if nbins == 0 || ntimes == 0 {
        return Err(Error::EmptySignal);
    }
    let global_max = tf.energy().iter().fold(0.0f64, |m, &v| m.max(v));
    if global_max == 0.0 {
        return Ok(Vec::new());
    }

    let mut work = tf.energy().clone();
    let floor = 1e-12 * global_max;
    let band = opts.band_halfwidth;
    let mut ridges = Vec::new();
    let mut first_mean = None;

    for _ in 0..max_ridges {
        let path = best_path(&work, smoothness_penalty);

        let mut freqs = Vec::with_capacity(ntimes);
        let mut energy = Vec::with_capacity(ntimes);
        for j in 0..ntimes {
            let m = path[j];
            let lo = m.saturating_sub(band);
            let hi = (m + band).min(nbins - 1);
            let mut e_band = 0.0;
            let mut centroid = 0.0;
            for mm in lo..=hi {
                let e = *work.at(mm, j);
                e_band += e;
                centroid += e * tf.freqs()[mm];
            }
            let freq = if opts.refine && e_band > 0.0 {
                centroid / e_band
            } else {
                tf.freqs()[m]
            };
            freqs.push(freq);
            energy.push(e_band);
        }

        let ridge = RidgeCurve {
            times: tf.times().to_vec(),
            freqs,
            energy,
            bin_width: tf.bin_width(),
        };
        let mean = ridge.mean_energy();
        match first_mean {
            None => {
                if mean <= floor {
                    break;
                }
                first_mean = Some(mean);
            }
            Some(first) => {
                if mean < opts.stop_fraction * first {
                    break;
                }
            }
        }

        for (j, &m) in path.iter().enumerate() {
            let lo = m.saturating_sub(band);
            let hi = (m + band).min(nbins - 1);
            for mm in lo..=hi {
                *work.at_mut(mm, j) = 0.0;
            }
        }
        ridges.push(ridge);
    }

    Ok(ridges)
}

/// Viterbi pass over the energy matrix with a jump window; returns the bin
/// index per time column.
fn best_path(energy: &Mat<f64>, penalty: f64) -> Vec<usize> {
    let nbins = energy.rows();
    let ntimes = energy.cols();
    // Instantaneous frequencies drift far less than a bin per column; a
    // narrow jump window keeps the pass linear in practice.
    let window = (nbins / 128).max(3);
    let global_max = energy.iter().fold(0.0f64, |m, &v| m.max(v)).max(1e-300);
    let floor = 1e-12 * global_max;
    let lden = |m: usize, j: usize| -> f64 { energy.at(m, j).max(floor).ln() };

    let mut cost = vec![0.0f64; nbins];
    for m in 0..nbins {
        cost[m] = lden(m, 0);
    }
    let mut back = Mat::<u32>::zeros(nbins, ntimes);
    let mut next = vec![0.0f64; nbins];
    for j in 1..ntimes {
        for m in 0..nbins {
            let lo = m.saturating_sub(window);
            let hi = (m + window).min(nbins - 1);
            let mut best = f64::NEG_INFINITY;
            let mut arg = lo;
            for mp in lo..=hi {
                let d = m as f64 - mp as f64;
                let c = cost[mp] - penalty * d * d;
                if c > best {
                    best = c;
                    arg = mp;
                }
            }
            next[m] = best + lden(m, j);
            *back.at_mut(m, j) = arg as u32;
        }
        std::mem::swap(&mut cost, &mut next);
    }

    let mut m = (0..nbins)
        .max_by(|&a, &b| cost[a].partial_cmp(&cost[b]).unwrap())
        .unwrap_or(0);
    let mut path = vec![0usize; ntimes];
    for j in (0..ntimes).rev() {
        path[j] = m;
        if j > 0 {
            m = *back.at(m, j) as usize;
        }
    }
    path
}

/// One harmonic family: member ridges with their harmonic indices and the
/// fundamental frequency curve they share.
#[derive(Debug, Clone)]
pub struct RidgeGroup {
    /// Indices into the input ridge list, paired with harmonic numbers.
    pub members: Vec<(usize, u32)>,
    /// The fundamental curve `Nφ′(b)`: the harmonic-1 member when present,
    /// otherwise the lowest-harmonic member divided by its index.
    pub fundamental: RidgeCurve,
}

/// Greedy harmonic grouping: the `k` lowest-frequency ridges seed the
/// groups; every other ridge joins the group whose fundamental divides it
/// closest to an integer within `tol`, preferring lower harmonic numbers
/// among acceptable fits.
pub fn classify_fundamentals(
    ridges: &[RidgeCurve],
    k: usize,
    tol: f64,
) -> Result<Vec<RidgeGroup>> {
    if ridges.is_empty() || ridges.len() < k {
        return Err(Error::TooFewRidges {
            requested: k,
            available: ridges.len(),
        });
    }
    if k < 1 {
        return Err(Error::InvalidConfig("need at least one group".into()));
    }

    let mut order: Vec<usize> = (0..ridges.len()).collect();
    order.sort_by(|&a, &b| {
        ridges[a]
            .mean_freq()
            .partial_cmp(&ridges[b].mean_freq())
            .unwrap()
    });

    let mut groups: Vec<(Vec<(usize, u32)>, usize)> = order[..k]
        .iter()
        .map(|&idx| (vec![(idx, 1u32)], idx))
        .collect();

    for &idx in &order[k..] {
        let ridge = &ridges[idx];
        let mut best: Option<(usize, u32, f64)> = None; // (group, harmonic, err)
        for (g, (_, seed_idx)) in groups.iter().enumerate() {
            let seed = &ridges[*seed_idx];
            let ratio = mean_ratio(ridge, seed);
            let n = ratio.round().max(1.0);
            let err = (ratio - n).abs();
            let candidate = (g, n as u32, err);
            best = Some(match best {
                None => candidate,
                Some(cur) => pick_assignment(cur, candidate, tol),
            });
        }
        let (g, n, _) = best.expect("at least one group");
        groups[g].0.push((idx, n));
    }

    Ok(groups
        .into_iter()
        .map(|(members, _)| {
            let (fund_idx, fund_n) = members
                .iter()
                .min_by_key(|(_, n)| *n)
                .copied()
                .expect("nonempty group");
            let mut fundamental = ridges[fund_idx].clone();
            if fund_n > 1 {
                let inv = 1.0 / fund_n as f64;
                fundamental.freqs.iter_mut().for_each(|f| *f *= inv);
            }
            RidgeGroup {
                members,
                fundamental,
            }
        })
        .collect())
}

fn mean_ratio(ridge: &RidgeCurve, fund: &RidgeCurve) -> f64 {
    let n = ridge.freqs.len().min(fund.freqs.len());
    let mut acc = 0.0;
    let mut count = 0usize;
    for i in 0..n {
        if fund.freqs[i] > 0.0 {
            acc += ridge.freqs[i] / fund.freqs[i];
            count += 1;
        }
    }
    if count == 0 {
        f64::INFINITY
    } else {
        acc / count as f64
    }
}

/// Prefer assignments that pass the tolerance; among those, lower harmonics;
/// among equal harmonics, smaller error.
fn pick_assignment(
    a: (usize, u32, f64),
    b: (usize, u32, f64),
    tol: f64,
) -> (usize, u32, f64) {
    let pass_a = a.2 <= tol;
    let pass_b = b.2 <= tol;
    match (pass_a, pass_b) {
        (true, false) => a,
        (false, true) => b,
        (true, true) => {
            if b.1 != a.1 {
                if b.1 < a.1 {
                    b
                } else {
                    a
                }
            } else if b.2 < a.2 {
                b
            } else {
                a
            }
        }
        (false, false) => {
            if b.2 < a.2 {
                b
            } else {
                a
            }
        }
    }
}

/// Knobs for turning a fundamental curve into an instantaneous profile.
#[derive(Debug, Clone)]
pub struct ProfileOptions {
    /// Mask half-width around the curve, in frequency bins of the source
    /// distribution.
    pub band_halfwidth: usize,
    /// The frequency-information estimates scatter proportionally to
    /// `√ε·frequency`; the mask band grows to `rel_band_factor·√ε·curve`
    /// when that exceeds the bin-based width, so the captured coefficient
    /// fraction stays frequency-independent.
    pub rel_band_factor: f64,
    /// Moving-average window (samples) for the amplitude estimate; defaults
    /// to one period of the fundamental.
    pub amp_smooth: Option<usize>,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            band_halfwidth: DEFAULT_BAND_HALFWIDTH,
            rel_band_factor: 5.0,
            amp_smooth: None,
        }
    }
}

/// Build the RDBR inputs from a fundamental ridge: the phase is the
/// cumulative trapezoid integral of the interpolated ridge frequency
/// (so `p(t) − p(0)`, which downstream shifts absorb), and the amplitude is
/// the smoothed magnitude of the inverse transform restricted to a band of
/// coefficients reassigned near the curve (known up to a constant factor).
pub fn profile_from_fundamental(
    curve: &RidgeCurve,
    wp: &WpCoefficients,
    cfg: &WavePacketConfig,
    grid: &TimeGrid,
) -> Result<InstProfile> {
    profile_from_fundamental_opts(curve, wp, cfg, grid, &ProfileOptions::default())
}

pub fn profile_from_fundamental_opts(
    curve: &RidgeCurve,
    wp: &WpCoefficients,
    cfg: &WavePacketConfig,
    grid: &TimeGrid,
    opts: &ProfileOptions,
) -> Result<InstProfile> {
    if curve.times.is_empty() || curve.times.len() != curve.freqs.len() {
        return Err(Error::GridMismatch("ridge curve is inconsistent"));
    }
    let t0 = grid.points()[0];
    let t1 = grid.points()[grid.len() - 1];
    let margin = 1e-9 + (curve.times[1].max(t0) - curve.times[0]).abs();
    if curve.times[0] > t0 + margin || curve.times[curve.times.len() - 1] < t1 - margin {
        return Err(Error::GridMismatch("ridge curve does not cover the grid"));
    }

    // Phase: cumulative trapezoid of the interpolated instantaneous
    // frequency, anchored at 0.
    let freq_at = |t: f64| -> f64 { interp_clamped(&curve.times, &curve.freqs, t) };
    let pts = grid.points();
    let mut phase = Vec::with_capacity(pts.len());
    let mut acc = 0.0;
    let mut prev_t = pts[0];
    let mut prev_f = freq_at(pts[0]);
    phase.push(0.0);
    for &t in &pts[1..] {
        let f = freq_at(t);
        acc += 0.5 * (f + prev_f) * (t - prev_t);
        phase.push(acc);
        prev_t = t;
        prev_f = f;
    }

    // Amplitude: magnitude of the masked inverse transform, smoothed over
    // one fundamental period.
    let vf = inst_freq_info(wp, cfg);
    let bin_band = opts.band_halfwidth as f64 * curve.bin_width;
    let rel_scale = opts.rel_band_factor * cfg.eps_sst.sqrt();
    let mut mask = Mat::<bool>::zeros(vf.rows(), vf.cols());
    for j in 0..vf.cols() {
        let target = freq_at(wp.times()[j]);
        let band = bin_band.max(rel_scale * target);
        for i in 0..vf.rows() {
            let v = *vf.at(i, j);
            if v != VF_SENTINEL && (v - target).abs() <= band {
                *mask.at_mut(i, j) = true;
            }
        }
    }
    let rec = invert_on_support(wp, &mask, cfg)?;
    let raw: Vec<f64> = rec.to_complex().iter().map(|z| z.norm()).collect();

    let mean_freq = curve.mean_freq();
    let window = opts
        .amp_smooth
        .unwrap_or_else(|| ((wp.times().len() as f64 / mean_freq).round() as usize).max(1));
    let smoothed = moving_average_periodic(&raw, window);

    let amplitude: Vec<f64> = pts
        .iter()
        .map(|&t| interp_clamped(wp.times(), &smoothed, t))
        .collect();

    InstProfile::new(phase, amplitude, mean_freq)
}

fn interp_clamped(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let n = xs.len();
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let mut lo = 0;
    let mut hi = n - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if xs[mid] <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    ys[lo] + t * (ys[hi] - ys[lo])
}

fn moving_average_periodic(values: &[f64], window: usize) -> Vec<f64> {
    let n = values.len();
    let w = window.clamp(1, n);
    if w == 1 {
        return values.to_vec();
    }
    let half = w / 2;
    let mut out = Vec::with_capacity(n);
    let total_window = 2 * half + 1;
    let mut acc: f64 = (0..total_window)
        .map(|k| values[(n + k - half) % n])
        .sum();
    for j in 0..n {
        out.push(acc / total_window as f64);
        let leaving = (n + j - half) % n;
        let entering = (j + half + 1) % n;
        acc += values[entering] - values[leaving];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Signal;
    use crate::transform::{forward_wp, synchrosqueeze};
    use rustfft::num_complex::Complex64;
    use std::f64::consts::PI;

    /// Synthetic distribution with constant-frequency lines of given
    /// weights.
    fn synthetic_tf(nbins: usize, ntimes: usize, vmax: f64, lines: &[(f64, f64)]) -> TfDistribution {
        let dv = vmax / nbins as f64;
        let freqs: Vec<f64> = (0..nbins).map(|m| (m as f64 + 0.5) * dv).collect();
        let times: Vec<f64> = (0..ntimes).map(|j| j as f64 / ntimes as f64).collect();
        let mut energy = Mat::<f64>::zeros(nbins, ntimes);
        for &(freq, weight) in lines {
            let m = ((freq / dv) as usize).min(nbins - 1);
            for j in 0..ntimes {
                *energy.at_mut(m, j) += weight;
            }
        }
        TfDistribution::new(freqs, times, energy)
    }

    fn constant_ridge(freq: f64, ntimes: usize) -> RidgeCurve {
        RidgeCurve {
            times: (0..ntimes).map(|j| j as f64 / ntimes as f64).collect(),
            freqs: vec![freq; ntimes],
            energy: vec![1.0; ntimes],
            bin_width: 0.5,
        }
    }

    #[test]
    fn single_line_yields_single_ridge() {
        let tf = synthetic_tf(256, 64, 128.0, &[(60.0, 1.0)]);
        let ridges = extract_ridges(&tf, 4, 0.05 * 256.0).unwrap();
        assert_eq!(ridges.len(), 1);
        let dv = tf.bin_width();
        for &f in &ridges[0].freqs {
            assert!((f - 60.0).abs() <= dv, "freq {f}");
        }
    }

    #[test]
    fn two_lines_yield_two_ridges() {
        let tf = synthetic_tf(256, 64, 128.0, &[(60.0, 1.0), (90.0, 0.8)]);
        let ridges = extract_ridges(&tf, 4, 0.05 * 256.0).unwrap();
        assert_eq!(ridges.len(), 2);
        let mut means: Vec<f64> = ridges.iter().map(|r| r.mean_freq()).collect();
        means.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((means[0] - 60.0).abs() <= tf.bin_width());
        assert!((means[1] - 90.0).abs() <= tf.bin_width());
    }

    #[test]
    fn zero_distribution_yields_no_ridges() {
        let tf = synthetic_tf(64, 16, 32.0, &[]);
        let ridges = extract_ridges(&tf, 4, 1.0).unwrap();
        assert!(ridges.is_empty());
    }

    #[test]
    fn ridge_count_monotone_in_stop_threshold() {
        let tf = synthetic_tf(
            256,
            64,
            128.0,
            &[(30.0, 1.0), (60.0, 0.3), (90.0, 0.08), (110.0, 0.02)],
        );
        let mut last = usize::MAX;
        for stop in [0.001, 0.05, 0.2, 0.5] {
            let opts = RidgeOptions {
                stop_fraction: stop,
                ..Default::default()
            };
            let n = extract_ridges_opts(&tf, 8, 0.05 * 256.0, &opts)
                .unwrap()
                .len();
            assert!(n <= last, "count grew from {last} to {n} at stop {stop}");
            last = n;
        }
    }

    #[test]
    fn harmonic_grouping_matches_integer_ratios() {
        let ridges = vec![
            constant_ridge(60.0, 32),
            constant_ridge(90.0, 32),
            constant_ridge(120.0, 32),
            constant_ridge(180.0, 32),
        ];
        let groups = classify_fundamentals(&ridges, 2, 0.05).unwrap();
        assert_eq!(groups.len(), 2);
        let by_fund: Vec<(f64, Vec<u32>)> = groups
            .iter()
            .map(|g| {
                let mut ns: Vec<u32> = g.members.iter().map(|&(_, n)| n).collect();
                ns.sort_unstable();
                (g.fundamental.mean_freq(), ns)
            })
            .collect();
        let g60 = by_fund
            .iter()
            .find(|(f, _)| (f - 60.0).abs() < 1e-9)
            .unwrap();
        let g90 = by_fund
            .iter()
            .find(|(f, _)| (f - 90.0).abs() < 1e-9)
            .unwrap();
        assert_eq!(g60.1, vec![1, 2]);
        assert_eq!(g90.1, vec![1, 2]);
    }

    #[test]
    fn near_degenerate_seeds_stay_separate() {
        let ridges = vec![constant_ridge(60.0, 16), constant_ridge(61.0, 16)];
        let groups = classify_fundamentals(&ridges, 2, 0.05).unwrap();
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].members.len(), 1);
        assert_eq!(groups[1].members.len(), 1);
    }

    #[test]
    fn single_ridge_single_group() {
        let ridges = vec![constant_ridge(42.0, 16)];
        let groups = classify_fundamentals(&ridges, 1, 0.05).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].members, vec![(0, 1)]);
    }

    #[test]
    fn grouping_is_a_partition() {
        let ridges = vec![
            constant_ridge(20.0, 16),
            constant_ridge(33.0, 16),
            constant_ridge(40.0, 16),
            constant_ridge(66.0, 16),
            constant_ridge(100.0, 16),
        ];
        let groups = classify_fundamentals(&ridges, 2, 0.08).unwrap();
        let mut seen = vec![0usize; ridges.len()];
        for g in &groups {
            for &(idx, _) in &g.members {
                seen[idx] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1), "{seen:?}");
    }

    #[test]
    fn too_few_ridges_is_reported() {
        let ridges = vec![constant_ridge(60.0, 16)];
        assert!(matches!(
            classify_fundamentals(&ridges, 2, 0.05),
            Err(Error::TooFewRidges {
                requested: 2,
                available: 1
            })
        ));
    }

    #[test]
    fn fundamental_from_harmonic_divides_down() {
        // A group seeded by a second harmonic: ridges at 120 and 180 with
        // k=1 seed 120; 180 joins as n≈1.5… outside tol, so force via two
        // members 120 (seed) only. Instead check the divide-down path by
        // classifying {120, 240} with k=1: members n=1,2; fundamental is
        // the seed itself.
        let ridges = vec![constant_ridge(120.0, 16), constant_ridge(240.0, 16)];
        let groups = classify_fundamentals(&ridges, 1, 0.05).unwrap();
        assert_eq!(groups[0].members.len(), 2);
        assert!((groups[0].fundamental.mean_freq() - 120.0).abs() < 1e-9);
    }

    fn tone_with_amplitude(
        len: usize,
        freq: f64,
        amp: impl Fn(f64) -> f64,
    ) -> Signal {
        let grid = TimeGrid::uniform(len).unwrap();
        let values: Vec<Complex64> = (0..len)
            .map(|i| {
                let t = i as f64 / len as f64;
                Complex64::from_polar(amp(t), 2.0 * PI * freq * t)
            })
            .collect();
        Signal::complex(grid, values).unwrap()
    }

    #[test]
    fn tone_profile_has_linear_phase_and_flat_amplitude() {
        let len = 2048;
        let sig = tone_with_amplitude(len, 60.0, |_| 1.0);
        let cfg = WavePacketConfig {
            freq_range: (1.0, 128.0),
            ..Default::default()
        };
        let wp = forward_wp(&sig, &cfg).unwrap();
        let tf = synchrosqueeze(&wp, &cfg, 256).unwrap();
        let ridges = extract_ridges(&tf, 2, 0.05 * 256.0).unwrap();
        assert_eq!(ridges.len(), 1);
        let profile =
            profile_from_fundamental(&ridges[0], &wp, &cfg, sig.grid()).unwrap();

        // Phase drift against 60t stays within half a cycle.
        for (i, &p) in profile.phase().iter().enumerate() {
            let t = i as f64 / len as f64;
            assert!((p - 60.0 * t).abs() < 0.5, "drift {} at t={t}", p - 60.0 * t);
        }
        // Amplitude is constant up to a small relative wobble.
        let amps = profile.amplitude();
        let mean = amps.iter().sum::<f64>() / amps.len() as f64;
        for &a in amps {
            assert!((a - mean).abs() / mean < 0.03, "amplitude wobble {a} vs {mean}");
        }
    }

    #[test]
    fn modulated_tone_amplitude_tracks_modulation() {
        let len = 4096;
        let sig = tone_with_amplitude(len, 60.0, |t| 1.0 + 0.05 * (2.0 * PI * t).sin());
        let cfg = WavePacketConfig {
            freq_range: (1.0, 128.0),
            ..Default::default()
        };
        let wp = forward_wp(&sig, &cfg).unwrap();
        let tf = synchrosqueeze(&wp, &cfg, 256).unwrap();
        let ridges = extract_ridges(&tf, 2, 0.05 * 256.0).unwrap();
        let profile =
            profile_from_fundamental(&ridges[0], &wp, &cfg, sig.grid()).unwrap();

        // Compare against the modulation shape after normalizing scale.
        let amps = profile.amplitude();
        let mean = amps.iter().sum::<f64>() / amps.len() as f64;
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, &a) in amps.iter().enumerate() {
            let t = i as f64 / len as f64;
            let truth = 1.0 + 0.05 * (2.0 * PI * t).sin();
            let d = a / mean - truth;
            num += d * d;
            den += truth * truth;
        }
        let rel = (num / den).sqrt();
        assert!(rel < 0.05, "relative amplitude error {rel}");
    }

    #[test]
    fn constant_ridge_integrates_to_linear_phase() {
        let grid = TimeGrid::uniform(512).unwrap();
        let curve = constant_ridge(42.0, 512);
        // Phase integration needs no transform data; use a tiny one.
        let sig = tone_with_amplitude(512, 42.0, |_| 1.0);
        let cfg = WavePacketConfig {
            freq_range: (1.0, 64.0),
            ..Default::default()
        };
        let wp = forward_wp(&sig, &cfg).unwrap();
        let profile = profile_from_fundamental(&curve, &wp, &cfg, &grid).unwrap();
        for (i, &p) in profile.phase().iter().enumerate() {
            let t = i as f64 / 512.0;
            assert!((p - 42.0 * t).abs() < 1e-9, "phase {p} vs {}", 42.0 * t);
        }
    }
}
