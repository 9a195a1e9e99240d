use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::profile::InstProfile;
use crate::shape::{eval_shape, shape_mean_remove, ShapeEstimate, DEFAULT_SHAPE_GRID};
use crate::signal::Signal;

/// Library of one-period shape functions used by the synthetic scenarios.
///
/// The ECG entries are synthetic stand-ins built from three Gaussian bumps
/// (P, R, T peaks); real ECG shapes come from data this crate does not bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinShape {
    Ecg1,
    Ecg2,
    Pwc1,
    Pwc2,
    PwlTriangle,
    PwlSaw,
    Cosine,
}

pub const BUILTIN_SHAPE_NAMES: &str = "ecg1, ecg2, pwc1, pwc2, pwl_triangle, pwl_saw, cosine";

impl std::str::FromStr for BuiltinShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ecg1" => Ok(Self::Ecg1),
            "ecg2" => Ok(Self::Ecg2),
            "pwc1" => Ok(Self::Pwc1),
            "pwc2" => Ok(Self::Pwc2),
            "pwl_triangle" => Ok(Self::PwlTriangle),
            "pwl_saw" => Ok(Self::PwlSaw),
            "cosine" => Ok(Self::Cosine),
            other => Err(Error::UnknownShape(other.into(), BUILTIN_SHAPE_NAMES)),
        }
    }
}

impl std::fmt::Display for BuiltinShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::Ecg1 => "ecg1",
            Self::Ecg2 => "ecg2",
            Self::Pwc1 => "pwc1",
            Self::Pwc2 => "pwc2",
            Self::PwlTriangle => "pwl_triangle",
            Self::PwlSaw => "pwl_saw",
            Self::Cosine => "cosine",
        };
        f.write_str(name)
    }
}

/// Periodic sum of Gaussian bumps; wrapping one shift each way is enough at
/// these widths.
fn gaussian_train(x: f64, peaks: &[(f64, f64, f64)]) -> f64 {
    let mut acc = 0.0;
    for &(height, center, width) in peaks {
        for m in [-1.0, 0.0, 1.0] {
            let d = x - center + m;
            acc += height * (-d * d / (2.0 * width * width)).exp();
        }
    }
    acc
}

/// P, R, T bump parameters (height, center, width) for the first ECG stand-in.
const ECG1_PEAKS: [(f64, f64, f64); 3] = [(0.2, 0.2, 0.03), (1.0, 0.5, 0.01), (0.3, 0.8, 0.05)];
/// A second morphology: shifted peaks, slightly wider R bump.
const ECG2_PEAKS: [(f64, f64, f64); 3] = [(0.25, 0.15, 0.04), (1.0, 0.45, 0.015), (0.35, 0.75, 0.06)];

/// One period of a named shape on the default shape grid: mean-removed and
/// scaled to unit `L²([−π,π])` norm (sample RMS `1/√(2π)`).
pub fn builtin_shape(name: BuiltinShape) -> ShapeEstimate {
    let g = DEFAULT_SHAPE_GRID;
    let raw = match name {
        BuiltinShape::Ecg1 => ShapeEstimate::from_fn(g, |x| gaussian_train(x, &ECG1_PEAKS)),
        BuiltinShape::Ecg2 => ShapeEstimate::from_fn(g, |x| gaussian_train(x, &ECG2_PEAKS)),
        BuiltinShape::Pwc1 => {
            ShapeEstimate::from_fn(g, |x| if (0.3..0.7).contains(&x) { 1.0 } else { 0.0 })
        }
        BuiltinShape::Pwc2 => {
            ShapeEstimate::from_fn(g, |x| if (0.2..0.55).contains(&x) { 1.0 } else { 0.0 })
        }
        BuiltinShape::PwlTriangle => ShapeEstimate::from_fn(g, |x| 1.0 - 4.0 * (x - 0.5).abs()),
        BuiltinShape::PwlSaw => ShapeEstimate::from_fn(g, |x| {
            if x < 0.8 {
                -1.0 + 2.5 * x
            } else {
                1.0 - 10.0 * (x - 0.8)
            }
        }),
        BuiltinShape::Cosine => ShapeEstimate::from_fn(g, |x| (2.0 * PI * x).cos()),
    }
    .expect("builtin shapes are finite");
    let mut s = shape_mean_remove(&raw);
    let rms = s.l2_norm();
    s.scale(1.0 / (rms * (2.0 * PI).sqrt()));
    s
}

/// Closed-form instantaneous amplitude descriptors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmpSpec {
    Constant(f64),
    /// `1 + a·sin(2πbt)`
    OneSin { a: f64, b: f64 },
    /// `1 + a·cos(2πbt)`
    OneCos { a: f64, b: f64 },
}

impl AmpSpec {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            AmpSpec::Constant(c) => c,
            AmpSpec::OneSin { a, b } => 1.0 + a * (2.0 * PI * b * t).sin(),
            AmpSpec::OneCos { a, b } => 1.0 + a * (2.0 * PI * b * t).cos(),
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = match *self {
            AmpSpec::Constant(c) => c > 0.0,
            AmpSpec::OneSin { a, .. } | AmpSpec::OneCos { a, .. } => a.abs() < 1.0,
        };
        if positive {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "amplitude descriptor {self:?} is not positive"
            )))
        }
    }
}

/// Closed-form instantaneous phase descriptors `p(t) = N(t + t₀ + c·trig(2π(t+t₀)))`,
/// in cycles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpec {
    pub n: f64,
    pub t0: f64,
    pub c: f64,
    pub cosine_warp: bool,
}

impl PhaseSpec {
    /// `N(t + c·sin(2πt))`
    pub fn sin_warp(n: f64, c: f64) -> Self {
        Self {
            n,
            t0: 0.0,
            c,
            cosine_warp: false,
        }
    }

    /// `N(t + c·cos(2πt))`
    pub fn cos_warp(n: f64, c: f64) -> Self {
        Self {
            n,
            t0: 0.0,
            c,
            cosine_warp: true,
        }
    }

    /// `N(t + t₀ + c·sin(2π(t+t₀)))`
    pub fn shifted_sin_warp(n: f64, t0: f64, c: f64) -> Self {
        Self {
            n,
            t0,
            c,
            cosine_warp: false,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = t + self.t0;
        let warp = if self.cosine_warp {
            (2.0 * PI * u).cos()
        } else {
            (2.0 * PI * u).sin()
        };
        self.n * (u + self.c * warp)
    }

    /// Instantaneous frequency `p′(t)`.
    pub fn deriv(&self, t: f64) -> f64 {
        let u = t + self.t0;
        let dwarp = if self.cosine_warp {
            -(2.0 * PI * u).sin()
        } else {
            (2.0 * PI * u).cos()
        };
        self.n * (1.0 + 2.0 * PI * self.c * dwarp)
    }

    fn validate(&self) -> Result<()> {
        if self.n <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "fundamental frequency must be positive, got {}",
                self.n
            )));
        }
        if self.c.abs() >= 1.0 / (2.0 * PI) {
            return Err(Error::InvalidConfig(format!(
                "warp coefficient {} breaks phase monotonicity (need |c| < 1/2π)",
                self.c
            )));
        }
        Ok(())
    }
}

/// The shape a synthetic mode oscillates through.
#[derive(Debug, Clone)]
pub enum ShapeSource {
    Builtin(BuiltinShape),
    Custom(ShapeEstimate),
}

impl ShapeSource {
    pub fn resolve(&self) -> ShapeEstimate {
        match self {
            ShapeSource::Builtin(name) => builtin_shape(*name),
            ShapeSource::Custom(s) => s.clone(),
        }
    }
}

/// Full description of one synthetic generalized mode `α(t)·s(2πp(t))`.
#[derive(Debug, Clone)]
pub struct ModeSpec {
    pub shape: ShapeSource,
    pub amp: AmpSpec,
    pub phase: PhaseSpec,
}

impl ModeSpec {
    pub fn new(shape: ShapeSource, amp: AmpSpec, phase: PhaseSpec) -> Result<Self> {
        amp.validate()?;
        phase.validate()?;
        Ok(Self { shape, amp, phase })
    }
}

/// Synthesize the noisy superposition together with the clean modes and the
/// exact instantaneous profiles. Noise is i.i.d. Gaussian with variance
/// `noise_sigma2`, drawn from a stream seeded by `seed`.
pub fn generate(
    specs: &[ModeSpec],
    grid: &TimeGrid,
    noise_sigma2: f64,
    seed: u64,
) -> Result<(Signal, Vec<Signal>, Vec<InstProfile>)> {
    if specs.is_empty() {
        return Err(Error::InvalidConfig("no mode specs given".into()));
    }
    let times = grid.points();
    let mut sum = vec![0.0f64; times.len()];
    let mut modes = Vec::with_capacity(specs.len());
    let mut profiles = Vec::with_capacity(specs.len());

    for spec in specs {
        let shape = spec.shape.resolve();
        let mut values = Vec::with_capacity(times.len());
        let mut phase = Vec::with_capacity(times.len());
        let mut amplitude = Vec::with_capacity(times.len());
        for &t in times {
            let p = spec.phase.eval(t);
            let a = spec.amp.eval(t);
            let v = a * eval_shape(&shape, p);
            phase.push(p);
            amplitude.push(a);
            values.push(v);
        }
        for (acc, v) in sum.iter_mut().zip(&values) {
            *acc += v;
        }
        modes.push(Signal::real(grid.clone(), values)?);
        let hint = spec.phase.deriv(0.5);
        profiles.push(InstProfile::new(phase, amplitude, hint)?);
    }

    if noise_sigma2 > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, noise_sigma2.sqrt())
            .map_err(|e| Error::InvalidConfig(format!("bad noise variance: {e}")))?;
        for v in &mut sum {
            *v += normal.sample(&mut rng);
        }
    }

    Ok((Signal::real(grid.clone(), sum)?, modes, profiles))
}

/// Grid flavors for sampling experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Uniform,
    IidUniform,
}

/// Build a sample grid: `uniform` gives `{ℓ/L}`, `iid_uniform` gives `L`
/// sorted uniform draws from a seeded stream.
pub fn sample_grid(kind: GridKind, len: usize, seed: u64) -> Result<TimeGrid> {
    if len < 2 {
        return Err(Error::InvalidConfig(format!(
            "grid needs at least 2 points, got {len}"
        )));
    }
    match kind {
        GridKind::Uniform => TimeGrid::uniform(len),
        GridKind::IidUniform => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dist = Uniform::new(0.0, 1.0)
                .map_err(|e| Error::InvalidConfig(format!("uniform sampler: {e}")))?;
            let mut points: Vec<f64> = (0..len).map(|_| dist.sample(&mut rng)).collect();
            points.sort_by(|a, b| a.partial_cmp(b).unwrap());
            // Ties are measure-zero but would violate strict monotonicity.
            for i in 1..points.len() {
                if points[i] <= points[i - 1] {
                    points[i] = points[i - 1].next_up();
                }
            }
            TimeGrid::from_points(points)
        }
    }
}

/// Named benchmark scenarios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// Two ECG-shaped modes at fundamentals 60 and 90.
    Ex1,
    /// Two piecewise-linear modes with equal fundamental `N` and slightly
    /// different warps; the hard case as `N` shrinks.
    Ex2 { n: f64 },
    /// Four unit-amplitude modes with close instantaneous frequencies.
    Ex3,
    /// Alias of `Ex1`: the ECG-shape pair.
    EcgPair,
    /// The `Ex1` profiles with piecewise-constant shapes.
    PwcPair,
}

impl Preset {
    pub fn parse(name: &str, n: Option<f64>) -> Result<Self> {
        match name {
            "ex1" => Ok(Self::Ex1),
            "ex2" => Ok(Self::Ex2 {
                n: n.unwrap_or(100.0),
            }),
            "ex3" => Ok(Self::Ex3),
            "ecg_pair" => Ok(Self::EcgPair),
            "pwc_pair" => Ok(Self::PwcPair),
            other => Err(Error::InvalidConfig(format!(
                "unknown preset '{other}'; available: ex1, ex2, ex3, ecg_pair, pwc_pair"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Ex1 => "ex1",
            Self::Ex2 { .. } => "ex2",
            Self::Ex3 => "ex3",
            Self::EcgPair => "ecg_pair",
            Self::PwcPair => "pwc_pair",
        }
    }

    pub fn mode_specs(&self) -> Vec<ModeSpec> {
        match *self {
            Preset::Ex1 | Preset::EcgPair => vec![
                ModeSpec::new(
                    ShapeSource::Builtin(BuiltinShape::Ecg1),
                    AmpSpec::OneSin { a: 0.05, b: 2.0 },
                    PhaseSpec::sin_warp(60.0, 0.01),
                )
                .unwrap(),
                ModeSpec::new(
                    ShapeSource::Builtin(BuiltinShape::Ecg2),
                    AmpSpec::OneSin { a: 0.1, b: 1.0 },
                    PhaseSpec::cos_warp(90.0, 0.01),
                )
                .unwrap(),
            ],
            Preset::PwcPair => vec![
                ModeSpec::new(
                    ShapeSource::Builtin(BuiltinShape::Pwc1),
                    AmpSpec::OneSin { a: 0.05, b: 2.0 },
                    PhaseSpec::sin_warp(60.0, 0.01),
                )
                .unwrap(),
                ModeSpec::new(
                    ShapeSource::Builtin(BuiltinShape::Pwc2),
                    AmpSpec::OneSin { a: 0.1, b: 1.0 },
                    PhaseSpec::cos_warp(90.0, 0.01),
                )
                .unwrap(),
            ],
            Preset::Ex2 { n } => vec![
                ModeSpec::new(
                    ShapeSource::Builtin(BuiltinShape::PwlTriangle),
                    AmpSpec::OneSin { a: 0.05, b: 2.0 },
                    PhaseSpec::sin_warp(n, 0.006),
                )
                .unwrap(),
                ModeSpec::new(
                    ShapeSource::Builtin(BuiltinShape::PwlSaw),
                    AmpSpec::OneCos { a: 0.05, b: 1.0 },
                    PhaseSpec::cos_warp(n, 0.006),
                )
                .unwrap(),
            ],
            Preset::Ex3 => {
                let shapes = [
                    BuiltinShape::Cosine,
                    BuiltinShape::PwlTriangle,
                    BuiltinShape::PwlSaw,
                    BuiltinShape::Ecg2,
                ];
                shapes
                    .iter()
                    .enumerate()
                    .map(|(i, &shape)| {
                        ModeSpec::new(
                            ShapeSource::Builtin(shape),
                            AmpSpec::Constant(1.0),
                            PhaseSpec::shifted_sin_warp(200.0, 0.05 * i as f64, 0.01),
                        )
                        .unwrap()
                    })
                    .collect()
            }
        }
    }

    /// Ground-truth shapes, in mode order.
    pub fn shapes(&self) -> Vec<ShapeEstimate> {
        self.mode_specs()
            .iter()
            .map(|spec| spec.shape.resolve())
            .collect()
    }
}

/// Noise variance realizing a target SNR in dB, by inverting
/// `SNR = min_i 10·log10(‖f_i‖/σ²)`.
pub fn sigma2_for_snr_db(modes: &[Signal], snr_db: f64) -> Result<f64> {
    let mut min_norm = f64::INFINITY;
    for m in modes {
        min_norm = min_norm.min(crate::signal::l2_norm(m)?);
    }
    Ok(min_norm * 10f64.powf(-snr_db / 10.0))
}
