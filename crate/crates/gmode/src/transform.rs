use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::mat::Mat;
use crate::signal::Signal;

/// Parameters of the wave packet frame and the squeezing threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacketConfig {
    /// Geometric scaling exponent, strictly between 1/2 and 1.
    pub s_geom: f64,
    /// Fourier support radius `d` of the mother wave packet, in `(0,1]`.
    pub rad: f64,
    /// Frame redundancy: ladder steps per support half-width.
    pub red: usize,
    /// Coefficient threshold ε for the reassignment set.
    pub eps_sst: f64,
    /// Center-frequency range `[a_min, a_max]`, `a_min ≥ 1`.
    pub freq_range: (f64, f64),
}

impl Default for WavePacketConfig {
    fn default() -> Self {
        Self {
            s_geom: 0.66,
            rad: 1.0,
            red: 8,
            eps_sst: 1e-3,
            freq_range: (1.0, 512.0),
        }
    }
}

impl WavePacketConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.s_geom > 0.5 && self.s_geom < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "s_geom must lie in (1/2,1), got {}",
                self.s_geom
            )));
        }
        if !(self.rad > 0.0 && self.rad <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "rad must lie in (0,1], got {}",
                self.rad
            )));
        }
        if self.red < 1 {
            return Err(Error::InvalidConfig("red must be ≥ 1".into()));
        }
        if self.eps_sst <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "eps_sst must be positive, got {}",
                self.eps_sst
            )));
        }
        if !(self.freq_range.0 >= 1.0 && self.freq_range.1 >= self.freq_range.0) {
            return Err(Error::InvalidConfig(format!(
                "freq_range must satisfy 1 ≤ a_min ≤ a_max, got {:?}",
                self.freq_range
            )));
        }
        Ok(())
    }

    /// Geometric scale ladder `a ← a + rad·a^s/red` covering `freq_range`,
    /// spacing one red-th of the local support half-width.
    pub fn scale_ladder(&self) -> Vec<f64> {
        let mut scales = Vec::new();
        let mut a = self.freq_range.0;
        while a <= self.freq_range.1 {
            scales.push(a);
            a += self.rad * a.powf(self.s_geom) / self.red as f64;
        }
        scales
    }
}

/// `∫_{-1}^{1} exp(q/(u²−1)) du` by midpoint rule; the integrand is smooth
/// and vanishes to all orders at ±1, so the rule converges fast.
fn bump_integral(q: f64) -> f64 {
    let n = 400_000;
    let h = 2.0 / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let u = -1.0 + (i as f64 + 0.5) * h;
        acc += (q / (u * u - 1.0)).exp();
    }
    acc * h
}

fn bump_l1() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| bump_integral(1.0))
}

fn bump_l2_sq() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| bump_integral(2.0))
}

/// Fourier transform of the mother wave packet: a smooth nonnegative bump
/// `c·exp(1/((ξ/d)²−1))` supported on `(−d,d)`, normalized to unit energy
/// `∫|ŵ|² = 1`.
pub fn mother_wavepacket_hat(xi: f64, cfg: &WavePacketConfig) -> f64 {
    let d = cfg.rad;
    let u = xi / d;
    if u.abs() >= 1.0 {
        return 0.0;
    }
    let c = 1.0 / (d * bump_l2_sq()).sqrt();
    c * (1.0 / (u * u - 1.0)).exp()
}

/// `∫ ŵ(ξ) dξ`, used by the diagonal inverse-frame weights.
fn mother_l1(cfg: &WavePacketConfig) -> f64 {
    let d = cfg.rad;
    let c = 1.0 / (d * bump_l2_sq()).sqrt();
    c * d * bump_l1()
}

/// Wave packet coefficients `W(a_i, b_j)` and their time derivative.
#[derive(Debug, Clone)]
pub struct WpCoefficients {
    scales: Vec<f64>,
    times: Vec<f64>,
    grid: TimeGrid,
    coeffs: Mat<Complex64>,
    dcoeffs: Mat<Complex64>,
}

impl WpCoefficients {
    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &Mat<Complex64> {
        &self.coeffs
    }

    pub fn dcoeffs(&self) -> &Mat<Complex64> {
        &self.dcoeffs
    }

    /// Midpoint spacing of the scale ladder, the `da` measure weight.
    pub fn scale_weights(&self) -> Vec<f64> {
        let a = &self.scales;
        let n = a.len();
        if n == 1 {
            return vec![1.0];
        }
        (0..n)
            .map(|i| {
                if i == 0 {
                    a[1] - a[0]
                } else if i == n - 1 {
                    a[n - 1] - a[n - 2]
                } else {
                    0.5 * (a[i + 1] - a[i - 1])
                }
            })
            .collect()
    }
}

/// Forward wave packet transform on a uniform grid via the FFT: for each
/// scale the windowed spectrum `|a|^{-s/2}·ŵ(|a|^{-s}(ξ−a))·f̂(ξ)` is
/// inverse-transformed over the time axis. The derivative coefficients use
/// the analytic `2πiξ` factor on the windowed spectrum. The signal is
/// treated as periodic on `[0,1)`.
pub fn forward_wp(sig: &Signal, cfg: &WavePacketConfig) -> Result<WpCoefficients> {
    cfg.validate()?;
    if sig.is_empty() {
        return Err(Error::EmptySignal);
    }
    if !sig.grid().is_uniform() {
        return Err(Error::NonUniformGrid);
    }
    let len = sig.len();
    let nyquist = len / 2;
    if cfg.freq_range.1 > nyquist as f64 {
        return Err(Error::InvalidConfig(format!(
            "a_max {} exceeds the Nyquist frequency {} of a length-{} grid",
            cfg.freq_range.1, nyquist, len
        )));
    }
    let scales = cfg.scale_ladder();
    if scales.is_empty() {
        return Err(Error::InvalidConfig("empty scale ladder".into()));
    }

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(len);
    let ifft = planner.plan_fft_inverse(len);

    let mut spectrum = sig.to_complex();
    fft.process(&mut spectrum);
    let norm = 1.0 / len as f64;
    spectrum.iter_mut().for_each(|z| *z *= norm);

    let s = cfg.s_geom;
    let rows: Vec<(Vec<Complex64>, Vec<Complex64>)> = scales
        .par_iter()
        .map(|&a| {
            let half_width = cfg.rad * a.powf(s);
            let lo = ((a - half_width).ceil().max(0.0)) as usize;
            let hi = ((a + half_width).floor()).min((nyquist - 1) as f64) as usize;
            let amp = a.powf(-s / 2.0);
            let mut g = vec![Complex64::default(); len];
            let mut dg = vec![Complex64::default(); len];
            for xi in lo..=hi {
                let w = mother_wavepacket_hat((xi as f64 - a) * a.powf(-s), cfg);
                if w == 0.0 {
                    continue;
                }
                let v = amp * w * spectrum[xi];
                g[xi] = v;
                dg[xi] = Complex64::new(0.0, 2.0 * PI * xi as f64) * v;
            }
            ifft.process(&mut g);
            ifft.process(&mut dg);
            (g, dg)
        })
        .collect();

    let mut coeff_rows = Vec::with_capacity(rows.len());
    let mut dcoeff_rows = Vec::with_capacity(rows.len());
    for (g, dg) in rows {
        coeff_rows.push(g);
        dcoeff_rows.push(dg);
    }

    Ok(WpCoefficients {
        scales,
        times: sig.grid().points().to_vec(),
        grid: sig.grid().clone(),
        coeffs: Mat::from_rows(coeff_rows),
        dcoeffs: Mat::from_rows(dcoeff_rows),
    })
}

/// Sentinel marking coefficients outside the reassignment set.
pub const VF_SENTINEL: f64 = f64::INFINITY;

/// Instantaneous frequency information `Re(∂_b W / (2πi W))`, defined on
/// the set where `|W(a,b)| ≥ |a|^{-s/2}·√ε`; the sentinel elsewhere.
pub fn inst_freq_info(wp: &WpCoefficients, cfg: &WavePacketConfig) -> Mat<f64> {
    let mut out = Mat::zeros(wp.coeffs.rows(), wp.coeffs.cols());
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    for (i, &a) in wp.scales.iter().enumerate() {
        let threshold = a.powf(-cfg.s_geom / 2.0) * cfg.eps_sst.sqrt();
        for j in 0..wp.coeffs.cols() {
            let w = *wp.coeffs.at(i, j);
            *out.at_mut(i, j) = if w.norm() >= threshold {
                (*wp.dcoeffs.at(i, j) / (two_pi_i * w)).re
            } else {
                VF_SENTINEL
            };
        }
    }
    out
}

/// Synchrosqueezed energy distribution on uniform frequency bins.
#[derive(Debug, Clone)]
pub struct TfDistribution {
    freqs: Vec<f64>,
    times: Vec<f64>,
    energy: Mat<f64>,
}

impl TfDistribution {
    pub fn new(freqs: Vec<f64>, times: Vec<f64>, energy: Mat<f64>) -> Self {
        Self {
            freqs,
            times,
            energy,
        }
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn energy(&self) -> &Mat<f64> {
        &self.energy
    }

    /// Uniform bin width of the frequency axis.
    pub fn bin_width(&self) -> f64 {
        if self.freqs.len() > 1 {
            self.freqs[1] - self.freqs[0]
        } else {
            1.0
        }
    }

    pub fn total_energy(&self) -> f64 {
        self.energy.iter().sum()
    }
}

/// Reassign coefficient energy to the bin holding its instantaneous
/// frequency estimate: every above-threshold coefficient contributes
/// `|W|²·Δa` to the bin containing `Re v_f`; the rest are dropped.
/// Out-of-range estimates land in the edge bins so the energy bookkeeping
/// stays exact.
pub fn synchrosqueeze(
    wp: &WpCoefficients,
    cfg: &WavePacketConfig,
    nbins: usize,
) -> Result<TfDistribution> {
    if nbins < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 frequency bins, got {nbins}"
        )));
    }
    let vf = inst_freq_info(wp, cfg);
    let vmax = cfg.freq_range.1;
    let dv = vmax / nbins as f64;
    let freqs: Vec<f64> = (0..nbins).map(|m| (m as f64 + 0.5) * dv).collect();

    let ntimes = wp.coeffs.cols();
    let weights = wp.scale_weights();
    let mut energy = Mat::zeros(nbins, ntimes);
    for i in 0..wp.coeffs.rows() {
        let da = weights[i];
        for j in 0..ntimes {
            let v = *vf.at(i, j);
            if v == VF_SENTINEL {
                continue;
            }
            let m = ((v / dv).floor().max(0.0) as usize).min(nbins - 1);
            *energy.at_mut(m, j) += wp.coeffs.at(i, j).norm_sqr() * da;
        }
    }

    Ok(TfDistribution {
        freqs,
        times: wp.times.clone(),
        energy,
    })
}

/// Reconstruct the component carried by the masked coefficients through the
/// diagonal dual-frame weights `|a|^{-s/2}·Δa / ∫ŵ`. An all-false mask
/// yields the zero signal. For real inputs the result is the analytic
/// (positive-frequency) part; its magnitude estimates the instantaneous
/// amplitude up to the constant Fourier prefactor of the masked harmonic.
pub fn invert_on_support(
    wp: &WpCoefficients,
    mask: &Mat<bool>,
    cfg: &WavePacketConfig,
) -> Result<Signal> {
    if mask.rows() != wp.coeffs.rows() || mask.cols() != wp.coeffs.cols() {
        return Err(Error::LengthMismatch {
            left: mask.rows() * mask.cols(),
            right: wp.coeffs.rows() * wp.coeffs.cols(),
            context: "mask dims vs coefficient dims",
        });
    }
    let weights = wp.scale_weights();
    let l1 = mother_l1(cfg);
    let s = cfg.s_geom;
    let ntimes = wp.coeffs.cols();
    let mut rec = vec![Complex64::default(); ntimes];
    for (i, &a) in wp.scales.iter().enumerate() {
        let w_i = a.powf(-s / 2.0) * weights[i] / l1;
        let row = wp.coeffs.row(i);
        for j in 0..ntimes {
            if *mask.at(i, j) {
                rec[j] += row[j] * w_i;
            }
        }
    }
    Signal::complex(wp.grid.clone(), rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::l2_norm;

    fn tone(len: usize, freq: f64) -> Signal {
        let grid = TimeGrid::uniform(len).unwrap();
        let values = (0..len)
            .map(|i| Complex64::from_polar(1.0, 2.0 * PI * freq * i as f64 / len as f64))
            .collect();
        Signal::complex(grid, values).unwrap()
    }

    fn test_cfg() -> WavePacketConfig {
        WavePacketConfig {
            freq_range: (1.0, 128.0),
            ..Default::default()
        }
    }

    #[test]
    fn bump_vanishes_at_support_edge_and_peaks_at_zero() {
        let cfg = test_cfg();
        assert_eq!(mother_wavepacket_hat(cfg.rad, &cfg), 0.0);
        assert_eq!(mother_wavepacket_hat(-cfg.rad, &cfg), 0.0);
        let peak = mother_wavepacket_hat(0.0, &cfg);
        for xi in [-0.9, -0.5, -0.1, 0.1, 0.5, 0.9] {
            let v = mother_wavepacket_hat(xi * cfg.rad, &cfg);
            assert!(v >= 0.0 && v <= peak);
        }
    }

    #[test]
    fn bump_has_unit_energy() {
        // Independent quadrature on a grid unrelated to the one used for
        // the normalization constant.
        let cfg = WavePacketConfig {
            rad: 0.7,
            ..test_cfg()
        };
        let n = 99_991;
        let h = 2.0 * cfg.rad / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let xi = -cfg.rad + (i as f64 + 0.5) * h;
            let w = mother_wavepacket_hat(xi, &cfg);
            acc += w * w * h;
        }
        assert!((acc - 1.0).abs() < 1e-6, "energy {acc}");
    }

    #[test]
    fn pure_tone_peaks_at_its_frequency() {
        let sig = tone(1024, 60.0);
        let cfg = test_cfg();
        let wp = forward_wp(&sig, &cfg).unwrap();
        // At every time column the magnitude over scales peaks next to 60.
        let ladder_step = {
            let s = wp.scales();
            s.windows(2)
                .map(|w| w[1] - w[0])
                .fold(0.0f64, f64::max)
        };
        for j in [0, 100, 500, 1023] {
            let (imax, _) = (0..wp.coeffs().rows())
                .map(|i| (i, wp.coeffs().at(i, j).norm()))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            let a = wp.scales()[imax];
            assert!((a - 60.0).abs() <= ladder_step, "peak at {a}");
        }
    }

    #[test]
    fn zero_signal_gives_zero_coefficients() {
        let grid = TimeGrid::uniform(256).unwrap();
        let sig = Signal::real(grid, vec![0.0; 256]).unwrap();
        let cfg = test_cfg();
        let wp = forward_wp(&sig, &cfg).unwrap();
        assert!(wp.coeffs().iter().all(|z| z.norm() == 0.0));
        let vf = inst_freq_info(&wp, &cfg);
        assert!(vf.iter().all(|&v| v == VF_SENTINEL));
    }

    #[test]
    fn transform_is_linear() {
        let f = tone(512, 40.0);
        let g = tone(512, 70.0);
        let grid = TimeGrid::uniform(512).unwrap();
        let sum_values: Vec<Complex64> = f
            .to_complex()
            .iter()
            .zip(g.to_complex())
            .map(|(a, b)| a + b)
            .collect();
        let sum = Signal::complex(grid, sum_values).unwrap();
        let cfg = test_cfg();
        let wf = forward_wp(&f, &cfg).unwrap();
        let wg = forward_wp(&g, &cfg).unwrap();
        let wsum = forward_wp(&sum, &cfg).unwrap();
        for i in 0..wsum.coeffs().rows() {
            for j in (0..wsum.coeffs().cols()).step_by(17) {
                let lhs = *wsum.coeffs().at(i, j);
                let rhs = *wf.coeffs().at(i, j) + *wg.coeffs().at(i, j);
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_nonuniform_grids_and_high_amax() {
        let grid = TimeGrid::from_points(vec![0.0, 0.3, 0.9]).unwrap();
        let sig = Signal::real(grid, vec![0.0; 3]).unwrap();
        assert!(matches!(
            forward_wp(&sig, &test_cfg()),
            Err(Error::NonUniformGrid)
        ));

        let sig = tone(64, 10.0);
        let cfg = WavePacketConfig {
            freq_range: (1.0, 128.0),
            ..Default::default()
        };
        assert!(forward_wp(&sig, &cfg).is_err());
    }

    #[test]
    fn tone_instantaneous_frequency_is_exact() {
        let sig = tone(1024, 60.0);
        let cfg = test_cfg();
        let wp = forward_wp(&sig, &cfg).unwrap();
        let vf = inst_freq_info(&wp, &cfg);
        let mut seen = 0usize;
        for i in 0..vf.rows() {
            for j in 0..vf.cols() {
                let v = *vf.at(i, j);
                if v != VF_SENTINEL {
                    assert!((v - 60.0).abs() < 1e-6, "v_f {v}");
                    seen += 1;
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn chirp_instantaneous_frequency_tracks_derivative() {
        let len = 2048;
        let n = 60.0;
        let grid = TimeGrid::uniform(len).unwrap();
        let values: Vec<Complex64> = (0..len)
            .map(|i| {
                let t = i as f64 / len as f64;
                let p = n * (t + 0.01 * (2.0 * PI * t).sin());
                Complex64::from_polar(1.0, 2.0 * PI * p)
            })
            .collect();
        let sig = Signal::complex(grid, values).unwrap();
        // A larger geometric exponent narrows the packets in time, which
        // keeps the phase-curvature error of the weakest admitted
        // coefficients inside the tolerance.
        let cfg = WavePacketConfig {
            s_geom: 0.8,
            ..test_cfg()
        };
        let wp = forward_wp(&sig, &cfg).unwrap();
        let vf = inst_freq_info(&wp, &cfg);
        for i in 0..vf.rows() {
            for j in 0..vf.cols() {
                let v = *vf.at(i, j);
                if v == VF_SENTINEL {
                    continue;
                }
                let b = wp.times()[j];
                let truth = n * (1.0 + 0.02 * PI * (2.0 * PI * b).cos());
                assert!(
                    (v - truth).abs() / truth < 0.05,
                    "v_f {v} vs {truth} at b={b}"
                );
            }
        }
    }

    #[test]
    fn squeezed_tone_concentrates_energy() {
        let sig = tone(1024, 60.0);
        let cfg = test_cfg();
        let wp = forward_wp(&sig, &cfg).unwrap();
        let tf = synchrosqueeze(&wp, &cfg, 256).unwrap();
        let dv = tf.bin_width();
        let target = (60.0 / dv) as usize;
        for j in (0..tf.times().len()).step_by(53) {
            let col_total: f64 = (0..tf.freqs().len()).map(|m| tf.energy().at(m, j)).sum();
            if col_total == 0.0 {
                continue;
            }
            let near: f64 = (target.saturating_sub(2)..=(target + 2).min(tf.freqs().len() - 1))
                .map(|m| tf.energy().at(m, j))
                .sum();
            assert!(near / col_total >= 0.95, "column {j}: {}", near / col_total);
        }
    }

    #[test]
    fn squeezing_preserves_above_threshold_energy() {
        let sig = tone(512, 33.0);
        let cfg = test_cfg();
        let wp = forward_wp(&sig, &cfg).unwrap();
        let tf = synchrosqueeze(&wp, &cfg, 128).unwrap();
        let vf = inst_freq_info(&wp, &cfg);
        let weights = wp.scale_weights();
        let mut expected = 0.0;
        for i in 0..vf.rows() {
            for j in 0..vf.cols() {
                if *vf.at(i, j) != VF_SENTINEL {
                    expected += wp.coeffs().at(i, j).norm_sqr() * weights[i];
                }
            }
        }
        let total = tf.total_energy();
        assert!(
            (total - expected).abs() <= 1e-12 * expected.max(1.0),
            "{total} vs {expected}"
        );
    }

    #[test]
    fn zero_signal_squeezes_to_zero() {
        let grid = TimeGrid::uniform(128).unwrap();
        let sig = Signal::real(grid, vec![0.0; 128]).unwrap();
        let cfg = WavePacketConfig {
            freq_range: (1.0, 32.0),
            ..Default::default()
        };
        let wp = forward_wp(&sig, &cfg).unwrap();
        let tf = synchrosqueeze(&wp, &cfg, 16).unwrap();
        assert_eq!(tf.total_energy(), 0.0);
        assert!(synchrosqueeze(&wp, &cfg, 1).is_err());
    }

    #[test]
    fn two_tones_make_two_ridges() {
        let len = 2048;
        let grid = TimeGrid::uniform(len).unwrap();
        let values: Vec<Complex64> = (0..len)
            .map(|i| {
                let t = i as f64 / len as f64;
                Complex64::from_polar(1.0, 2.0 * PI * 60.0 * t)
                    + Complex64::from_polar(1.0, 2.0 * PI * 90.0 * t)
            })
            .collect();
        let sig = Signal::complex(grid, values).unwrap();
        let cfg = WavePacketConfig {
            rad: 0.5,
            freq_range: (1.0, 128.0),
            ..Default::default()
        };
        let wp = forward_wp(&sig, &cfg).unwrap();
        let tf = synchrosqueeze(&wp, &cfg, 256).unwrap();
        let dv = tf.bin_width();
        // Sum energy over time per frequency bin; expect isolated peaks at
        // 60 and 90 and a quiet valley between them.
        let profile: Vec<f64> = (0..tf.freqs().len())
            .map(|m| (0..tf.times().len()).map(|j| tf.energy().at(m, j)).sum())
            .collect();
        let bin60 = (60.0 / dv) as usize;
        let bin90 = (90.0 / dv) as usize;
        let bin75 = (75.0 / dv) as usize;
        let near = |b: usize| -> f64 { profile[b - 2..=b + 2].iter().sum() };
        assert!(near(bin60) > 100.0 * near(bin75));
        assert!(near(bin90) > 100.0 * near(bin75));
    }

    #[test]
    fn full_mask_reconstructs_tone() {
        let sig = tone(1024, 60.0);
        let cfg = test_cfg();
        let wp = forward_wp(&sig, &cfg).unwrap();
        let mask = full_mask(&wp);
        let rec = invert_on_support(&wp, &mask, &cfg).unwrap();
        let err = rel_l2_err(&sig, &rec);
        assert!(err < 0.01, "relative error {err}");
    }

    #[test]
    fn empty_mask_reconstructs_zero() {
        let sig = tone(256, 20.0);
        let cfg = WavePacketConfig {
            freq_range: (1.0, 64.0),
            ..Default::default()
        };
        let wp = forward_wp(&sig, &cfg).unwrap();
        let mask = Mat::<bool>::zeros(wp.coeffs().rows(), wp.coeffs().cols());
        let rec = invert_on_support(&wp, &mask, &cfg).unwrap();
        assert!(rec.to_complex().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn band_mask_separates_two_tones() {
        let len = 2048;
        let grid = TimeGrid::uniform(len).unwrap();
        let tone60: Vec<Complex64> = (0..len)
            .map(|i| Complex64::from_polar(1.0, 2.0 * PI * 60.0 * i as f64 / len as f64))
            .collect();
        let values: Vec<Complex64> = tone60
            .iter()
            .enumerate()
            .map(|(i, z)| {
                z + Complex64::from_polar(1.0, 2.0 * PI * 90.0 * i as f64 / len as f64)
            })
            .collect();
        let sig = Signal::complex(grid.clone(), values).unwrap();
        let cfg = WavePacketConfig {
            rad: 0.5,
            freq_range: (1.0, 128.0),
            ..Default::default()
        };
        let wp = forward_wp(&sig, &cfg).unwrap();
        // Mask scales whose window can see 60 but not 90.
        let mut mask = Mat::<bool>::zeros(wp.coeffs().rows(), wp.coeffs().cols());
        for (i, &a) in wp.scales().iter().enumerate() {
            let half = cfg.rad * a.powf(cfg.s_geom);
            if (a - 60.0).abs() < half && (a - 90.0).abs() >= half {
                for j in 0..wp.coeffs().cols() {
                    *mask.at_mut(i, j) = true;
                }
            }
        }
        let rec = invert_on_support(&wp, &mask, &cfg).unwrap();
        let reference = Signal::complex(grid, tone60).unwrap();
        let err = rel_l2_err(&reference, &rec);
        assert!(err < 0.05, "relative error {err}");
    }

    fn full_mask(wp: &WpCoefficients) -> Mat<bool> {
        let mut mask = Mat::<bool>::zeros(wp.coeffs().rows(), wp.coeffs().cols());
        for i in 0..wp.coeffs().rows() {
            for j in 0..wp.coeffs().cols() {
                *mask.at_mut(i, j) = true;
            }
        }
        mask
    }

    fn rel_l2_err(reference: &Signal, candidate: &Signal) -> f64 {
        let a = reference.to_complex();
        let b = candidate.to_complex();
        let diff: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let num = l2_norm(&Signal::complex(reference.grid().clone(), diff).unwrap()).unwrap();
        let den = l2_norm(reference).unwrap();
        num / den
    }
}
