//! Benchmark suites reproducing the convergence experiments: rate versus
//! fundamental frequency, final error versus sample count, and noisy-shape
//! recovery at −3 dB.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use gmode::diagnostics::convergence_rates;
use gmode::rdbr::{rdbr_decompose, RdbrConfig};
use gmode::shape::shape_l2_distance;
use gmode::signal::l2_norm;
use gmode::synth::{generate, sigma2_for_snr_db, Preset};
use gmode::TimeGrid;

use crate::config::RunConfig;

#[derive(Debug, Serialize)]
pub struct BenchCell {
    pub label: String,
    pub n: f64,
    #[serde(rename = "L")]
    pub l: usize,
    pub sigma2: f64,
    pub residual_norms: Vec<f64>,
    pub eta: Vec<Option<f64>>,
    pub final_residual: f64,
    pub initial_norm: f64,
    /// Relative L² error per recovered shape, when ground truth is known.
    pub shape_errors: Vec<f64>,
    pub wall_time_s: f64,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub suite: String,
    pub seed: u64,
    pub config: Value,
    pub cells: Vec<BenchCell>,
}

pub const SUITES: &str = "rate_vs_N, err_vs_L, noise";

pub fn run_suite(suite: &str, cfg: &RunConfig) -> Result<BenchReport, String> {
    let cells = match suite {
        "rate_vs_N" => {
            let cases: Vec<(f64, usize)> = [2.0, 10.0, 50.0, 100.0, 200.0]
                .iter()
                .map(|&n| (n, 1 << 12))
                .collect();
            run_cells(&cases, cfg, 12, 1e-13, 0.0)?
        }
        "err_vs_L" => {
            let cases: Vec<(f64, usize)> =
                (7..=12).map(|m| (100.0, 1usize << m)).collect();
            run_cells(&cases, cfg, 200, 1e-13, 0.0)?
        }
        "noise" => run_noise_cells(cfg)?,
        other => {
            return Err(format!(
                "unknown suite '{other}'; available suites: {SUITES}"
            ))
        }
    };
    Ok(BenchReport {
        suite: suite.to_string(),
        seed: cfg.seed,
        config: cfg.echo(),
        cells,
    })
}

/// Two-mode cells with varying fundamental frequency and sample count.
fn run_cells(
    cases: &[(f64, usize)],
    cfg: &RunConfig,
    max_iter: usize,
    eps: f64,
    sigma2: f64,
) -> Result<Vec<BenchCell>, String> {
    let rdbr_cfg = RdbrConfig {
        max_iter,
        eps,
        regression: cfg.regression()?,
    };
    cases
        .par_iter()
        .enumerate()
        .map(|(idx, &(n, l))| {
            run_two_mode_cell(Preset::Ex2 { n }, l, sigma2, cfg.seed + idx as u64, &rdbr_cfg)
        })
        .collect()
}

fn run_noise_cells(cfg: &RunConfig) -> Result<Vec<BenchCell>, String> {
    let rdbr_cfg = RdbrConfig {
        max_iter: cfg.max_iter,
        eps: cfg.eps,
        regression: cfg.regression()?,
    };
    [Preset::EcgPair, Preset::PwcPair]
        .par_iter()
        .enumerate()
        .map(|(idx, &preset)| {
            let l = 1 << 16;
            let grid = TimeGrid::uniform(l).map_err(|e| e.to_string())?;
            let specs = preset.mode_specs();
            let (_, clean_modes, _) =
                generate(&specs, &grid, 0.0, 0).map_err(|e| e.to_string())?;
            let sigma2 = sigma2_for_snr_db(&clean_modes, -3.0).map_err(|e| e.to_string())?;
            run_two_mode_cell(preset, l, sigma2, cfg.seed + idx as u64, &rdbr_cfg)
        })
        .collect()
}

fn run_two_mode_cell(
    preset: Preset,
    l: usize,
    sigma2: f64,
    seed: u64,
    rdbr_cfg: &RdbrConfig,
) -> Result<BenchCell, String> {
    let grid = TimeGrid::uniform(l).map_err(|e| e.to_string())?;
    let specs = preset.mode_specs();
    let (sig, _, profiles) = generate(&specs, &grid, sigma2, seed).map_err(|e| e.to_string())?;
    let initial_norm = l2_norm(&sig).map_err(|e| e.to_string())?;

    let start = Instant::now();
    let dec = rdbr_decompose(&sig, &profiles, rdbr_cfg).map_err(|e| e.to_string())?;
    let wall = start.elapsed().as_secs_f64();

    let eta = if dec.report.residual_norms.len() >= 3 {
        convergence_rates(&dec.report.residual_norms)
            .map(|(_, eta)| eta)
            .unwrap_or_default()
    } else {
        Vec::new()
    };

    let truths = preset.shapes();
    let shape_errors = dec
        .shapes
        .iter()
        .zip(&truths)
        .map(|(est, truth)| {
            shape_l2_distance(est, truth).map(|d| d / truth.l2_norm())
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;

    let n = match preset {
        Preset::Ex2 { n } => n,
        _ => specs
            .first()
            .map(|s| s.phase.n)
            .unwrap_or(0.0),
    };

    Ok(BenchCell {
        label: format!("{}-N{}-L{}", preset.name(), n, l),
        n,
        l,
        sigma2,
        final_residual: *dec.report.residual_norms.last().unwrap_or(&initial_norm),
        residual_norms: dec.report.residual_norms,
        eta,
        initial_norm,
        shape_errors,
        wall_time_s: wall,
    })
}
