use crate::error::{Error, Result};
use crate::profile::{InstProfile, AMPLITUDE_FLOOR};
use crate::shape::{shape_mean_remove, ShapeEstimate, DEFAULT_SHAPE_GRID};
use crate::signal::Signal;

/// Regression samples on one period: `x ∈ [0,1)` from folding the warped
/// phase, `y` the amplitude-normalized residual value.
#[derive(Debug, Clone)]
pub struct FoldedSamples {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub source_times: Vec<f64>,
}

/// Which one-period regression backend to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegressionMethod {
    Partition,
    Spline,
}

impl std::str::FromStr for RegressionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partition" => Ok(Self::Partition),
            "spline" => Ok(Self::Spline),
            other => Err(Error::InvalidConfig(format!(
                "unknown regression method '{other}' (partition|spline)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionConfig {
    pub method: RegressionMethod,
    /// Number of uniform bins for the partition estimator (`1/h`).
    pub nbins: usize,
    /// Initial free knot count for the spline estimator.
    pub nk: usize,
    /// Knot removal factor: a knot is dropped when removing it grows the
    /// RMS residual by less than this factor.
    pub krf: f64,
    /// Spline degree, 1..=3.
    pub ord: usize,
    /// Output grid size of the estimated shape.
    pub shape_grid: usize,
}

impl Default for RegressionConfig {
    fn default() -> Self {
        Self {
            method: RegressionMethod::Partition,
            nbins: 50,
            nk: 20,
            krf: 1.01,
            ord: 3,
            shape_grid: DEFAULT_SHAPE_GRID,
        }
    }
}

impl RegressionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nbins < 2 {
            return Err(Error::InvalidConfig(format!(
                "nbins must be ≥ 2, got {}",
                self.nbins
            )));
        }
        if self.nk < 2 {
            return Err(Error::InvalidConfig(format!(
                "nk must be ≥ 2, got {}",
                self.nk
            )));
        }
        if !(1..=3).contains(&self.ord) {
            return Err(Error::InvalidConfig(format!(
                "ord must be 1, 2 or 3, got {}",
                self.ord
            )));
        }
        if self.krf <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "krf must be positive, got {}",
                self.krf
            )));
        }
        if self.shape_grid < 2 {
            return Err(Error::InvalidConfig("shape grid too small".into()));
        }
        Ok(())
    }

    /// Run the configured estimator.
    pub fn regress(&self, fs: &FoldedSamples) -> Result<ShapeEstimate> {
        match self.method {
            RegressionMethod::Partition => partition_regress(fs, self),
            RegressionMethod::Spline => spline_regress(fs, self),
        }
    }
}

/// Fold a residual onto one period of mode `k`: for every sample,
/// `x = frac(p(t))` and `y = r(t)/α(t)`. No inverse of the phase is formed;
/// the warped samples `h(v)` at `v = p(t)` are exactly `r(t)/α(t)`.
pub fn warp_and_fold(residual: &Signal, profile: &InstProfile) -> Result<FoldedSamples> {
    let values = residual.as_real()?;
    if values.len() != profile.len() {
        return Err(Error::LengthMismatch {
            left: values.len(),
            right: profile.len(),
            context: "residual vs profile samples",
        });
    }
    let times = residual.grid().points();
    let mut xs = Vec::with_capacity(values.len());
    let mut ys = Vec::with_capacity(values.len());
    for i in 0..values.len() {
        let a = profile.amplitude()[i];
        if a <= AMPLITUDE_FLOOR {
            return Err(Error::AmplitudeUnderflow {
                time: times[i],
                value: a,
            });
        }
        let p = profile.phase()[i];
        xs.push(p - p.floor());
        ys.push(values[i] / a);
    }
    Ok(FoldedSamples {
        xs,
        ys,
        source_times: times.to_vec(),
    })
}

/// Per-bin means over `[0,1)`: the value of the estimate on bin `n` is the
/// average of the `y` with `x` in that bin. Empty bins are filled by periodic
/// linear interpolation from the nearest populated neighbors, the bin values
/// are resampled to the shape grid, and the mean is removed.
pub fn partition_regress(fs: &FoldedSamples, cfg: &RegressionConfig) -> Result<ShapeEstimate> {
    cfg.validate()?;
    if fs.xs.is_empty() {
        return Err(Error::EmptySignal);
    }
    let nbins = cfg.nbins;
    let mut sums = vec![0.0f64; nbins];
    let mut counts = vec![0usize; nbins];
    for (&x, &y) in fs.xs.iter().zip(&fs.ys) {
        let b = bin_index(x, nbins);
        sums[b] += y;
        counts[b] += 1;
    }
    let mut bin_values = vec![0.0f64; nbins];
    for m in 0..nbins {
        if counts[m] > 0 {
            bin_values[m] = sums[m] / counts[m] as f64;
        }
    }
    fill_empty_bins(&mut bin_values, &counts)?;
    let resampled = resample_bin_centers(&bin_values, cfg.shape_grid);
    Ok(shape_mean_remove(&ShapeEstimate::new(resampled)?))
}

/// Raw per-bin means (no fill, no resampling); used by oracle tests.
pub fn bin_means(fs: &FoldedSamples, nbins: usize) -> Vec<Option<f64>> {
    let mut sums = vec![0.0f64; nbins];
    let mut counts = vec![0usize; nbins];
    for (&x, &y) in fs.xs.iter().zip(&fs.ys) {
        let b = bin_index(x, nbins);
        sums[b] += y;
        counts[b] += 1;
    }
    (0..nbins)
        .map(|m| (counts[m] > 0).then(|| sums[m] / counts[m] as f64))
        .collect()
}

fn bin_index(x: f64, nbins: usize) -> usize {
    // x is already in [0,1); clamp protects against x*n rounding up to n.
    ((x * nbins as f64) as usize).min(nbins - 1)
}

fn fill_empty_bins(values: &mut [f64], counts: &[usize]) -> Result<()> {
    let nbins = values.len();
    let populated: Vec<usize> = (0..nbins).filter(|&m| counts[m] > 0).collect();
    if populated.is_empty() {
        return Err(Error::AllBinsEmpty(nbins));
    }
    if populated.len() == nbins {
        return Ok(());
    }
    if populated.len() == 1 {
        let v = values[populated[0]];
        values.iter_mut().for_each(|x| *x = v);
        return Ok(());
    }
    for w in 0..populated.len() {
        let lo = populated[w];
        let hi = populated[(w + 1) % populated.len()];
        let gap = (hi + nbins - lo) % nbins;
        if gap <= 1 {
            continue;
        }
        let (a, b) = (values[lo], values[hi]);
        for step in 1..gap {
            let m = (lo + step) % nbins;
            values[m] = a + (b - a) * step as f64 / gap as f64;
        }
    }
    Ok(())
}

/// Periodic linear interpolation from values at bin centers `(m+1/2)h` onto
/// the uniform shape grid `{n/G}`.
fn resample_bin_centers(bin_values: &[f64], grid_size: usize) -> Vec<f64> {
    let nbins = bin_values.len();
    (0..grid_size)
        .map(|n| {
            let x = n as f64 / grid_size as f64;
            let u = (x * nbins as f64 - 0.5).rem_euclid(nbins as f64);
            let m = (u as usize).min(nbins - 1);
            let t = u - m as f64;
            let a = bin_values[m];
            let b = bin_values[(m + 1) % nbins];
            a + t * (b - a)
        })
        .collect()
}

/// Least-squares spline fit with `nk` initial knots and a knot-removal pass.
/// One-periodicity is encouraged by duplicating a wrap margin of data
/// (width 0.05) past both ends of `[0,1)` before fitting. The knot removal
/// rule is a reinterpretation of free-knot spline packages: a knot is
/// discarded when the fit barely degrades without it.
pub fn spline_regress(fs: &FoldedSamples, cfg: &RegressionConfig) -> Result<ShapeEstimate> {
    cfg.validate()?;
    let required = cfg.nk * (cfg.ord + 1);
    if fs.xs.len() < required {
        return Err(Error::TooFewSamples {
            required,
            got: fs.xs.len(),
        });
    }

    const MARGIN: f64 = 0.05;
    let mut xs = Vec::with_capacity(fs.xs.len() + fs.xs.len() / 8);
    let mut ys = Vec::with_capacity(xs.capacity());
    for (&x, &y) in fs.xs.iter().zip(&fs.ys) {
        xs.push(x);
        ys.push(y);
        if x > 1.0 - MARGIN {
            xs.push(x - 1.0);
            ys.push(y);
        }
        if x < MARGIN {
            xs.push(x + 1.0);
            ys.push(y);
        }
    }

    let domain = (-MARGIN, 1.0 + MARGIN);
    let mut knots: Vec<f64> = (1..=cfg.nk)
        .map(|i| i as f64 / (cfg.nk + 1) as f64)
        .collect();

    let mut fit = SplineFit::solve(&xs, &ys, cfg.ord, domain, &knots)?;
    // Removal sweep: drop a knot when the fit without it stays within the
    // removal factor of the full-knot RMS. The fixed baseline stops
    // repeated removals from compounding bias under noise. A factor ≤ 1
    // demands an outright improvement, which a nested model cannot deliver;
    // treat it as removal disabled.
    if cfg.krf > 1.0 {
        let rms_full = fit.rms;
        let mut i = 0;
        while i < knots.len() {
            let mut trial = knots.clone();
            trial.remove(i);
            let candidate = SplineFit::solve(&xs, &ys, cfg.ord, domain, &trial)?;
            if candidate.rms < cfg.krf * rms_full {
                knots = trial;
                fit = candidate;
            } else {
                i += 1;
            }
        }
    }

    let g = cfg.shape_grid;
    let samples: Vec<f64> = (0..g).map(|n| fit.eval(n as f64 / g as f64)).collect();
    Ok(shape_mean_remove(&ShapeEstimate::new(samples)?))
}

/// A fitted B-spline: clamped knot vector and least-squares coefficients.
struct SplineFit {
    knots: Vec<f64>,
    coeffs: Vec<f64>,
    degree: usize,
    rms: f64,
}

impl SplineFit {
    fn solve(
        xs: &[f64],
        ys: &[f64],
        degree: usize,
        domain: (f64, f64),
        interior: &[f64],
    ) -> Result<Self> {
        let knots = clamped_knots(domain, interior, degree);
        let ncoef = knots.len() - degree - 1;
        let band = degree + 1;

        // Normal equations assembled from the per-point nonzero basis block.
        let mut ata = vec![0.0f64; ncoef * ncoef];
        let mut aty = vec![0.0f64; ncoef];
        let mut basis = vec![0.0f64; band];
        for (&x, &y) in xs.iter().zip(ys) {
            let span = find_span(&knots, degree, x);
            eval_basis(&knots, degree, span, x, &mut basis);
            let first = span - degree;
            for r in 0..band {
                let br = basis[r];
                if br == 0.0 {
                    continue;
                }
                aty[first + r] += br * y;
                for c in 0..band {
                    ata[(first + r) * ncoef + first + c] += br * basis[c];
                }
            }
        }
        // Tiny ridge keeps unsupported basis functions from making the
        // system singular.
        let trace: f64 = (0..ncoef).map(|i| ata[i * ncoef + i]).sum();
        let ridge = 1e-12 * (trace / ncoef as f64).max(1e-30);
        for i in 0..ncoef {
            ata[i * ncoef + i] += ridge;
        }
        let coeffs = solve_dense(&mut ata, &mut aty, ncoef)?;

        let fit = Self {
            knots,
            coeffs,
            degree,
            rms: 0.0,
        };
        let mut sq = 0.0;
        for (&x, &y) in xs.iter().zip(ys) {
            let e = fit.eval(x) - y;
            sq += e * e;
        }
        let rms = (sq / xs.len() as f64).sqrt();
        Ok(Self { rms, ..fit })
    }

    fn eval(&self, x: f64) -> f64 {
        let span = find_span(&self.knots, self.degree, x);
        let mut basis = vec![0.0f64; self.degree + 1];
        eval_basis(&self.knots, self.degree, span, x, &mut basis);
        let first = span - self.degree;
        basis
            .iter()
            .enumerate()
            .map(|(r, b)| b * self.coeffs[first + r])
            .sum()
    }
}

fn clamped_knots(domain: (f64, f64), interior: &[f64], degree: usize) -> Vec<f64> {
    let mut knots = Vec::with_capacity(interior.len() + 2 * (degree + 1));
    knots.extend(std::iter::repeat_n(domain.0, degree + 1));
    knots.extend_from_slice(interior);
    knots.extend(std::iter::repeat_n(domain.1, degree + 1));
    knots
}

/// Index of the knot span containing `x` (clamped to the domain).
fn find_span(knots: &[f64], degree: usize, x: f64) -> usize {
    let n = knots.len() - degree - 2;
    if x >= knots[n + 1] {
        return n;
    }
    if x <= knots[degree] {
        return degree;
    }
    let mut lo = degree;
    let mut hi = n + 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if x < knots[mid] {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// Cox–de Boor evaluation of the `degree+1` basis functions alive on `span`.
fn eval_basis(knots: &[f64], degree: usize, span: usize, x: f64, out: &mut [f64]) {
    out[0] = 1.0;
    let mut left = vec![0.0f64; degree + 1];
    let mut right = vec![0.0f64; degree + 1];
    for j in 1..=degree {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            let denom = right[r + 1] + left[j - r];
            let term = if denom != 0.0 { out[r] / denom } else { 0.0 };
            out[r] = saved + right[r + 1] * term;
            saved = left[j - r] * term;
        }
        out[j] = saved;
    }
}

/// Gaussian elimination with partial pivoting on a dense system.
fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Result<Vec<f64>> {
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].abs();
        for row in col + 1..n {
            let v = a[row * n + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return Err(Error::InvalidConfig(
                "singular normal equations in spline fit".into(),
            ));
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let diag = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0f64; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row * n + k] * x[k];
        }
        x[row] = acc / a[row * n + row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;
    use crate::shape::eval_shape;
    use crate::synth::{sample_grid, GridKind};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn folded(xs: Vec<f64>, ys: Vec<f64>) -> FoldedSamples {
        let n = xs.len();
        FoldedSamples {
            xs,
            ys,
            source_times: (0..n).map(|i| i as f64 / n as f64).collect(),
        }
    }

    #[test]
    fn warp_examples() {
        let grid = TimeGrid::uniform(4).unwrap();
        let profile = InstProfile::from_fns(
            &grid,
            |t| 60.0 * (t + 0.01 * (2.0 * PI * t).sin()),
            |_| 1.0,
        )
        .unwrap();
        let residual = Signal::real(grid, vec![0.5; 4]).unwrap();
        let fs = warp_and_fold(&residual, &profile).unwrap();
        // t = 0.25: p = 60·0.26 = 15.6, frac = 0.6.
        assert!((fs.xs[1] - 0.6).abs() < 1e-9);
        assert_eq!(fs.xs[0], 0.0);
    }

    #[test]
    fn warp_divides_by_amplitude() {
        let grid = TimeGrid::uniform(8).unwrap();
        let profile = InstProfile::from_fns(&grid, |t| 10.0 * t, |_| 2.0).unwrap();
        let residual = Signal::real(grid, vec![2.0; 8]).unwrap();
        let fs = warp_and_fold(&residual, &profile).unwrap();
        assert!(fs.ys.iter().all(|&y| y == 1.0));
    }

    #[test]
    fn partition_bin_means_match_hand_computation() {
        let fs = folded(vec![0.1, 0.2, 0.7], vec![1.0, 3.0, 5.0]);
        let means = bin_means(&fs, 2);
        assert_eq!(means[0], Some(2.0));
        assert_eq!(means[1], Some(5.0));
    }

    #[test]
    fn partition_zero_input_gives_zero_shape() {
        let fs = folded(vec![0.1, 0.4, 0.9], vec![0.0, 0.0, 0.0]);
        let cfg = RegressionConfig {
            nbins: 4,
            ..Default::default()
        };
        let s = partition_regress(&fs, &cfg).unwrap();
        assert!(s.samples().iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn partition_recovers_cosine_from_iid_samples() {
        let grid = sample_grid(GridKind::IidUniform, 1 << 16, 11).unwrap();
        let xs: Vec<f64> = grid.points().to_vec();
        let ys: Vec<f64> = xs.iter().map(|&x| (2.0 * PI * x).cos()).collect();
        let fs = folded(xs, ys);
        let cfg = RegressionConfig::default();
        let s = partition_regress(&fs, &cfg).unwrap();
        let reference = ShapeEstimate::from_fn(s.grid_size(), |x| (2.0 * PI * x).cos()).unwrap();
        let err = crate::shape::shape_l2_distance(&s, &reference).unwrap();
        assert!(err < 0.01, "L² error {err}");
    }

    #[test]
    fn partition_errors_when_everything_is_empty() {
        let fs = folded(vec![], vec![]);
        let cfg = RegressionConfig::default();
        assert!(matches!(
            partition_regress(&fs, &cfg),
            Err(Error::EmptySignal)
        ));
    }

    #[test]
    fn empty_bins_fill_periodically() {
        // Populated bins 0 and 2 of 4; bins 1 and 3 interpolate.
        let fs = folded(vec![0.1, 0.6], vec![1.0, 3.0]);
        let means = {
            let mut v = vec![0.0; 4];
            let counts = [1usize, 0, 1, 0];
            v[0] = 1.0;
            v[2] = 3.0;
            fill_empty_bins(&mut v, &counts).unwrap();
            v
        };
        assert_eq!(means, vec![1.0, 2.0, 3.0, 2.0]);
        let _ = fs;
    }

    #[test]
    fn spline_fits_triangle_wave() {
        let grid = sample_grid(GridKind::IidUniform, 1 << 12, 5).unwrap();
        let xs: Vec<f64> = grid.points().to_vec();
        let ys: Vec<f64> = xs.iter().map(|&x| 1.0 - 4.0 * (x - 0.5).abs()).collect();
        let fs = folded(xs, ys);
        let cfg = RegressionConfig {
            method: RegressionMethod::Spline,
            ..Default::default()
        };
        let s = spline_regress(&fs, &cfg).unwrap();
        let reference = shape_mean_remove(
            &ShapeEstimate::from_fn(s.grid_size(), |x| 1.0 - 4.0 * (x - 0.5).abs()).unwrap(),
        );
        let err = crate::shape::shape_l2_distance(&s, &reference).unwrap();
        assert!(err < 0.02, "L² error {err}");
    }

    #[test]
    fn spline_zero_input_gives_zero_shape() {
        let grid = sample_grid(GridKind::IidUniform, 1 << 10, 2).unwrap();
        let xs: Vec<f64> = grid.points().to_vec();
        let ys = vec![0.0; xs.len()];
        let fs = folded(xs, ys);
        let cfg = RegressionConfig {
            method: RegressionMethod::Spline,
            ..Default::default()
        };
        let s = spline_regress(&fs, &cfg).unwrap();
        assert!(s.samples().iter().all(|&v| v.abs() < 1e-9));
    }

    #[test]
    fn spline_handles_uniform_noise_around_cosine() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, Uniform};
        let grid = sample_grid(GridKind::IidUniform, 1 << 12, 13).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let noise = Uniform::new(-0.5, 0.5).unwrap();
        let xs: Vec<f64> = grid.points().to_vec();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| (2.0 * PI * x).cos() + noise.sample(&mut rng))
            .collect();
        let fs = folded(xs, ys);
        let cfg = RegressionConfig {
            method: RegressionMethod::Spline,
            ..Default::default()
        };
        let s = spline_regress(&fs, &cfg).unwrap();
        let reference = ShapeEstimate::from_fn(s.grid_size(), |x| (2.0 * PI * x).cos()).unwrap();
        let err = crate::shape::shape_l2_distance(&s, &reference).unwrap();
        assert!(err < 0.05, "L² error {err}");
    }

    #[test]
    fn spline_rejects_tiny_sample_sets() {
        let fs = folded(vec![0.1, 0.2, 0.3], vec![1.0, 2.0, 3.0]);
        let cfg = RegressionConfig {
            method: RegressionMethod::Spline,
            ..Default::default()
        };
        assert!(matches!(
            spline_regress(&fs, &cfg),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn partition_is_exact_on_bin_constant_targets() {
        let nbins = 8;
        let levels: Vec<f64> = (0..nbins).map(|m| (m as f64) - 3.0).collect();
        let xs: Vec<f64> = (0..512).map(|i| (i as f64 + 0.3) / 512.0).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| levels[((x * nbins as f64) as usize).min(nbins - 1)])
            .collect();
        let fs = folded(xs, ys);
        let means = bin_means(&fs, nbins);
        for (m, v) in means.iter().enumerate() {
            assert_eq!(v.unwrap(), levels[m]);
        }
    }

    proptest! {
        #[test]
        fn fold_is_invariant_to_integer_phase_shifts(
            offsets in prop::collection::vec(0.0f64..100.0, 4..32),
            shift in -5i64..5
        ) {
            let mut phase: Vec<f64> = offsets;
            phase.sort_by(|a, b| a.partial_cmp(b).unwrap());
            phase.dedup_by(|a, b| *a <= *b + 1e-9);
            prop_assume!(phase.len() >= 2);
            let n = phase.len();
            let grid = TimeGrid::uniform(n).unwrap();
            let amp = vec![1.0; n];
            let base = InstProfile::new(phase.clone(), amp.clone(), 1.0).unwrap();
            let shifted = InstProfile::new(
                phase.iter().map(|p| p + shift as f64).collect(),
                amp,
                1.0,
            ).unwrap();
            let residual = Signal::real(grid, vec![1.0; n]).unwrap();
            let a = warp_and_fold(&residual, &base).unwrap();
            let b = warp_and_fold(&residual, &shifted).unwrap();
            for (x, y) in a.xs.iter().zip(&b.xs) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }

        #[test]
        fn partition_output_is_mean_zero(
            points in prop::collection::vec((0.0f64..1.0, -10.0f64..10.0), 8..200)
        ) {
            let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
            let fs = folded(xs, ys);
            let cfg = RegressionConfig { nbins: 10, ..Default::default() };
            let s = partition_regress(&fs, &cfg).unwrap();
            prop_assert!(s.mean().abs() < 1e-10);
        }

        #[test]
        fn eval_shape_is_periodic(x in -3.0f64..3.0, m in -3i32..4) {
            let s = ShapeEstimate::from_fn(64, |u| (2.0 * PI * u).sin()).unwrap();
            let a = eval_shape(&s, x);
            let b = eval_shape(&s, x + m as f64);
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
