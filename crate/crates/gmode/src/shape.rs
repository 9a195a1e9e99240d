use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Default number of samples per period for estimated shape functions.
pub const DEFAULT_SHAPE_GRID: usize = 1000;

/// One period of a shape function, sampled on the uniform grid `{n/G}` of
/// `[0,1)`. Shapes produced by the decomposition pipeline are mean-removed
/// after every update; arbitrary sample sets are accepted so intermediate
/// states can be represented.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeEstimate {
    samples: Vec<f64>,
}

impl ShapeEstimate {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        for (i, x) in samples.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite(i));
            }
        }
        Ok(Self { samples })
    }

    pub fn zeros(grid_size: usize) -> Self {
        Self {
            samples: vec![0.0; grid_size.max(1)],
        }
    }

    /// Sample a closed-form period `g(x)`, `x ∈ [0,1)`, on the shape grid.
    pub fn from_fn(grid_size: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = (0..grid_size)
            .map(|n| g(n as f64 / grid_size as f64))
            .collect();
        Self::new(samples)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// `L²` norm over one period of `[0,1)` (rectangle rule).
    pub fn l2_norm(&self) -> f64 {
        let g = self.samples.len() as f64;
        (self.samples.iter().map(|x| x * x).sum::<f64>() / g).sqrt()
    }

    /// Pointwise sum with another estimate on the same grid.
    pub fn add_assign(&mut self, other: &ShapeEstimate) -> Result<()> {
        if self.samples.len() != other.samples.len() {
            return Err(Error::LengthMismatch {
                left: self.samples.len(),
                right: other.samples.len(),
                context: "shape grids",
            });
        }
        for (a, b) in self.samples.iter_mut().zip(&other.samples) {
            *a += b;
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: f64) {
        for x in &mut self.samples {
            *x *= factor;
        }
    }

    /// Fourier coefficients `ŝ(k)` of `s(2πx) = Σ_k ŝ(k) e^{2πikx}` for
    /// `k = 0..G-1` (indices above `G/2` alias negative frequencies).
    pub fn fourier_coeffs(&self) -> Vec<Complex64> {
        let g = self.samples.len();
        let mut buf: Vec<Complex64> = self
            .samples
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        FftPlanner::new().plan_fft_forward(g).process(&mut buf);
        let scale = 1.0 / g as f64;
        buf.iter_mut().for_each(|z| *z *= scale);
        buf
    }
}

/// `L²` distance between two estimates on the same grid.
pub fn shape_l2_distance(a: &ShapeEstimate, b: &ShapeEstimate) -> Result<f64> {
    if a.grid_size() != b.grid_size() {
        return Err(Error::LengthMismatch {
            left: a.grid_size(),
            right: b.grid_size(),
            context: "shape grids",
        });
    }
    let g = a.grid_size() as f64;
    let sum: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok((sum / g).sqrt())
}

/// Subtract the period mean so that `∫₀¹ s(2πx) dx = 0`.
pub fn shape_mean_remove(s: &ShapeEstimate) -> ShapeEstimate {
    let mean = s.mean();
    ShapeEstimate {
        samples: s.samples().iter().map(|x| x - mean).collect(),
    }
}

/// Periodic evaluation: wraps `x` to `[0,1)` and linearly interpolates
/// between adjacent grid samples, with wrap-around from the last sample
/// back to the first.
pub fn eval_shape(s: &ShapeEstimate, x: f64) -> f64 {
    let g = s.samples.len();
    let wrapped = x - x.floor();
    let u = wrapped * g as f64;
    let n = (u as usize).min(g - 1);
    let t = u - n as f64;
    let a = s.samples[n];
    let b = s.samples[(n + 1) % g];
    a + t * (b - a)
}

/// Outcome of the discrete shape-class checks.
#[derive(Debug, Clone)]
pub struct ShapeClassReport {
    /// `|ŝ(0)|`, which must vanish for a valid shape.
    pub dc_magnitude: f64,
    pub zero_mean_ok: bool,
    /// `Σ_n |ŝ(n)|` against the class bound `M`.
    pub wiener_sum: f64,
    pub wiener_ok: bool,
    /// Max absolute sample against the class bound `M`.
    pub linf_norm: f64,
    pub linf_ok: bool,
    /// GCD of the active harmonic indices; 1 for a valid shape.
    pub gcd: u64,
    pub gcd_ok: bool,
    /// Threshold below which a Fourier coefficient counts as inactive.
    pub spectral_tol: f64,
}

impl ShapeClassReport {
    pub fn all_ok(&self) -> bool {
        self.zero_mean_ok && self.wiener_ok && self.linf_ok && self.gcd_ok
    }
}

/// Check the discrete analogues of the shape-class conditions: vanishing
/// mean, summable Fourier coefficients bounded by `M`, `L∞` bound `M`, and
/// unit gcd of the active harmonic indices. Reports, never aborts.
pub fn validate_shape_class(s: &ShapeEstimate, params: &ModelParams) -> ShapeClassReport {
    let coeffs = s.fourier_coeffs();
    let g = coeffs.len();
    let half = g / 2;

    let dc_magnitude = coeffs[0].norm();
    let mut wiener_sum = dc_magnitude;
    let mut max_mag = 0.0f64;
    // Collapse the spectrum onto |n| = 1..G/2; conjugate pairs both count
    // toward the Wiener sum.
    let mut mags = vec![0.0f64; half + 1];
    for k in 1..g {
        let n = if k <= half { k } else { g - k };
        let m = coeffs[k].norm();
        wiener_sum += m;
        mags[n] = mags[n].max(m);
        max_mag = max_mag.max(m);
    }

    let spectral_tol = 1e-6 * max_mag;
    let active: Vec<u64> = (1..=half)
        .filter(|&n| mags[n] > spectral_tol)
        .map(|n| n as u64)
        .collect();
    let gcd = active.iter().copied().fold(0, gcd_u64);

    let linf_norm = s.samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let dc_tol = 1e-8 * max_mag.max(1e-300);

    ShapeClassReport {
        dc_magnitude,
        zero_mean_ok: dc_magnitude <= dc_tol,
        wiener_sum,
        wiener_ok: wiener_sum <= params.class_bound,
        linf_norm,
        linf_ok: linf_norm <= params.class_bound,
        gcd,
        gcd_ok: gcd == 1,
        spectral_tol,
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}
