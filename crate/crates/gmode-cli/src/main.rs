mod bench;
mod config;
mod pipeline;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use gmode::diagnostics::{fold_uniformity, snr_db, well_differentiation};
use gmode::io;
use gmode::rdbr::{rdbr_decompose, refine_profiles_by_alignment};
use gmode::signal::l2_norm;
use gmode::synth::{generate, Preset};
use gmode::{InstProfile, Signal, TimeGrid};

use config::{build_config, RunConfig};

/// Generalized mode decomposition toolkit: synthesize benchmark signals,
/// inspect synchrosqueezed transforms, decompose signals into shape
/// functions, and reproduce the convergence experiments.
#[derive(Parser)]
#[command(name = "gmode", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args)]
struct GlobalArgs {
    /// Master random seed; all stochastic output is a function of it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Config file: `key = value` lines or a flat JSON object (a prior
    /// run's `config` echo works). Flags win over file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "gmode_out")]
    out: PathBuf,

    /// Extra config override as `key=value`; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a preset scenario: signal, clean modes, exact profiles.
    Synth {
        /// Preset name: ex1, ex2, ex3, ecg_pair, pwc_pair.
        #[arg(long)]
        preset: String,
        /// Fundamental frequency for presets that take one (ex2).
        #[arg(long)]
        n: Option<f64>,
        /// Sample count.
        #[arg(long = "L")]
        l: Option<usize>,
        /// Additive Gaussian noise variance.
        #[arg(long)]
        sigma2: Option<f64>,
    },
    /// Transform a signal and estimate instantaneous profiles.
    Sswpt {
        /// Input signal CSV (`t,value` or `t,re,im`).
        #[arg(long = "in")]
        input: PathBuf,
        /// Number of modes to classify.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Decompose a signal into shape functions, modes and a residual.
    Decompose {
        /// Input signal CSV (`t,value`).
        #[arg(long = "in")]
        input: PathBuf,
        /// Instantaneous profile CSVs (`t,phase,amplitude`), one per mode.
        #[arg(long, num_args = 1.., value_name = "CSV")]
        profiles: Vec<PathBuf>,
        /// Estimate profiles automatically via the transform chain.
        #[arg(long)]
        auto: bool,
        /// Mode count for --auto.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run a benchmark suite and write bench.json.
    Bench {
        /// Suite name: rate_vs_N, err_vs_L, noise.
        #[arg(long)]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    let mut overrides = Map::new();
    if let Some(seed) = cli.global.seed {
        overrides.insert("seed".into(), Value::from(seed));
    }
    for pair in &cli.global.set {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("--set expects key=value, got '{pair}'"))?;
        overrides.insert(key.trim().into(), config::scalar_value(value.trim()));
    }

    match cli.command {
        Command::Synth {
            ref preset,
            n,
            l,
            sigma2,
        } => {
            overrides.insert("preset".into(), Value::from(preset.clone()));
            if let Some(n) = n {
                overrides.insert("n".into(), Value::from(n));
            }
            if let Some(l) = l {
                overrides.insert("L".into(), Value::from(l as u64));
            }
            if let Some(sigma2) = sigma2 {
                overrides.insert("sigma2".into(), Value::from(sigma2));
            }
            let cfg = build_config(cli.global.config.as_deref(), overrides)?;
            cmd_synth(&cfg, &cli.global.out)
        }
        Command::Sswpt { ref input, k } => {
            if let Some(k) = k {
                overrides.insert("k".into(), Value::from(k as u64));
            }
            let cfg = build_config(cli.global.config.as_deref(), overrides)?;
            cmd_sswpt(&cfg, input, &cli.global.out)
        }
        Command::Decompose {
            ref input,
            ref profiles,
            auto,
            k,
        } => {
            if let Some(k) = k {
                overrides.insert("k".into(), Value::from(k as u64));
            }
            let cfg = build_config(cli.global.config.as_deref(), overrides)?;
            cmd_decompose(&cfg, input, profiles, auto, &cli.global.out)
        }
        Command::Bench { ref suite } => {
            let cfg = build_config(cli.global.config.as_deref(), overrides)?;
            cmd_bench(&cfg, suite, &cli.global.out)
        }
    }
}

fn ensure_out(dir: &Path) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))
}

fn write_json(path: &Path, value: &Value) -> Result<(), String> {
    let body = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_synth(cfg: &RunConfig, out: &Path) -> Result<(), String> {
    let preset = Preset::parse(&cfg.preset, Some(cfg.n)).map_err(|e| e.to_string())?;
    let mut cfg = cfg.clone();
    cfg.resolve(cfg.l);
    ensure_out(out)?;

    let grid = TimeGrid::uniform(cfg.l).map_err(|e| e.to_string())?;
    let specs = preset.mode_specs();
    let (signal, modes, profiles) =
        generate(&specs, &grid, cfg.sigma2, cfg.seed).map_err(|e| e.to_string())?;

    io::write_signal_csv(&out.join("signal.csv"), &signal).map_err(|e| e.to_string())?;
    for (k, mode) in modes.iter().enumerate() {
        io::write_signal_csv(&out.join(format!("mode_{}.csv", k + 1)), mode)
            .map_err(|e| e.to_string())?;
    }
    for (k, profile) in profiles.iter().enumerate() {
        io::write_profile_csv(&out.join(format!("profile_{}.csv", k + 1)), &grid, profile)
            .map_err(|e| e.to_string())?;
    }

    let snr = if cfg.sigma2 > 0.0 {
        Value::from(snr_db(&modes, cfg.sigma2).map_err(|e| e.to_string())?)
    } else {
        Value::from("inf")
    };
    let mode_norms: Vec<f64> = modes
        .iter()
        .map(|m| l2_norm(m).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let meta = json!({
        "preset": preset.name(),
        "mode_count": modes.len(),
        "snr_db": snr,
        "mode_norms": mode_norms,
        "config": cfg.echo(),
    });
    write_json(&out.join("meta.json"), &meta)?;
    println!(
        "synth: {} modes at L={} written to {}",
        modes.len(),
        cfg.l,
        out.display()
    );
    Ok(())
}

fn cmd_sswpt(cfg: &RunConfig, input: &Path, out: &Path) -> Result<(), String> {
    let signal = io::read_signal_csv(input).map_err(|e| e.to_string())?;
    let mut cfg = cfg.clone();
    cfg.resolve(signal.len());
    ensure_out(out)?;

    let result = pipeline::run_sswpt(&signal, &cfg)?;
    io::write_tf_sparse_csv(&out.join("tf.csv"), &result.tf).map_err(|e| e.to_string())?;
    io::write_tf_binary(&out.join("tf.bin"), &result.tf).map_err(|e| e.to_string())?;
    io::write_ridges_csv(&out.join("ridges.csv"), &result.ridges, &result.groups)
        .map_err(|e| e.to_string())?;
    for (k, profile) in result.profiles.iter().enumerate() {
        io::write_profile_csv(
            &out.join(format!("profile_{}.csv", k + 1)),
            signal.grid(),
            profile,
        )
        .map_err(|e| e.to_string())?;
    }

    let fundamentals: Vec<f64> = result
        .groups
        .iter()
        .map(|g| g.fundamental.mean_freq())
        .collect();
    let meta = json!({
        "ridges": result.ridges.len(),
        "groups": result.groups.len(),
        "fundamental_mean_freqs": fundamentals,
        "config": cfg.echo(),
    });
    write_json(&out.join("meta.json"), &meta)?;
    println!(
        "sswpt: {} ridges in {} groups, fundamentals {:?}",
        result.ridges.len(),
        result.groups.len(),
        fundamentals
    );
    Ok(())
}

fn load_profiles(
    paths: &[PathBuf],
    signal: &Signal,
) -> Result<Vec<InstProfile>, String> {
    let mut profiles = Vec::with_capacity(paths.len());
    for path in paths {
        let (grid, profile) = io::read_profile_csv(path).map_err(|e| e.to_string())?;
        if !grid.matches(signal.grid(), 1e-9) {
            return Err(format!(
                "{}: profile grid does not match the signal grid",
                path.display()
            ));
        }
        profiles.push(profile);
    }
    Ok(profiles)
}

fn cmd_decompose(
    cfg: &RunConfig,
    input: &Path,
    profile_paths: &[PathBuf],
    auto: bool,
    out: &Path,
) -> Result<(), String> {
    let signal = io::read_signal_csv(input).map_err(|e| e.to_string())?;
    let mut cfg = cfg.clone();
    cfg.resolve(signal.len());

    let mut profiles = if auto {
        pipeline::run_sswpt(&signal, &cfg)?.profiles
    } else if !profile_paths.is_empty() {
        load_profiles(profile_paths, &signal)?
    } else {
        return Err("give --profiles <csv>... or --auto".into());
    };

    if auto && cfg.refine_passes > 0 {
        let mut pilot_cfg = cfg.rdbr()?;
        pilot_cfg.max_iter = pilot_cfg.max_iter.min(30);
        for _ in 0..cfg.refine_passes {
            let pilot =
                rdbr_decompose(&signal, &profiles, &pilot_cfg).map_err(|e| e.to_string())?;
            profiles = refine_profiles_by_alignment(&signal, &profiles, &pilot, 2.0)
                .map_err(|e| e.to_string())?;
        }
    }

    let dec = rdbr_decompose(&signal, &profiles, &cfg.rdbr()?).map_err(|e| e.to_string())?;

    let wd = well_differentiation(&profiles, signal.grid(), cfg.nbins, cfg.m_class)
        .map_err(|e| e.to_string())?;
    let chi2: Vec<f64> = profiles
        .iter()
        .map(|p| {
            fold_uniformity(p, signal.grid(), cfg.nbins)
                .map(|h| h.chi2)
                .map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    let extra = json!({
        "config": cfg.echo(),
        "diagnostics": {
            "gamma": wd.gamma,
            "beta": wd.beta,
            "contraction": wd.contraction,
            "chi2": chi2,
            "warning": wd.warning,
        },
    });
    ensure_out(out)?;
    io::write_decomposition_dir(out, &dec, &extra).map_err(|e| e.to_string())?;

    let final_residual = dec.report.residual_norms.last().copied().unwrap_or(0.0);
    let input_norm = l2_norm(&signal).map_err(|e| e.to_string())?;
    println!(
        "decompose: {} modes, {} iterations, stop {:?}, relative residual {:.3e}",
        dec.shapes.len(),
        dec.report.iterations,
        dec.report.stop_reason,
        final_residual / input_norm.max(1e-300),
    );
    Ok(())
}

fn cmd_bench(cfg: &RunConfig, suite: &str, out: &Path) -> Result<(), String> {
    let mut cfg = cfg.clone();
    cfg.resolve(cfg.l);
    let report = bench::run_suite(suite, &cfg)?;
    ensure_out(out)?;
    let value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    write_json(&out.join("bench.json"), &value)?;
    for cell in &report.cells {
        println!(
            "bench[{}]: final residual {:.4e} (initial {:.4e}) in {:.2}s",
            cell.label, cell.final_residual, cell.initial_norm, cell.wall_time_s
        );
    }
    Ok(())
}
