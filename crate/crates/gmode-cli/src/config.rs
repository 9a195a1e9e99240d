//! Run configuration: defaults, flat config files, flag overrides, and the
//! resolved echo embedded in every output.
//!
//! Precedence is defaults < config file < command-line flags. A config file
//! is either `key = value` lines (`#` comments allowed) or a flat JSON
//! object, so the `config` echo of a previous report can be replayed
//! directly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use gmode::regress::{RegressionConfig, RegressionMethod};
use gmode::rdbr::RdbrConfig;
use gmode::ridge::{ProfileOptions, RidgeOptions};
use gmode::transform::WavePacketConfig;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Synthesis preset name, empty when decomposing external data.
    pub preset: String,
    /// Fundamental frequency parameter for presets that take one.
    pub n: f64,
    /// Sample count.
    #[serde(rename = "L")]
    pub l: usize,
    /// Additive Gaussian noise variance.
    pub sigma2: f64,
    /// Mode count for ridge classification and auto decomposition.
    pub k: usize,

    // Wave packet transform.
    pub s_geom: f64,
    pub rad: f64,
    pub red: usize,
    pub eps_sst: f64,
    pub a_min: f64,
    /// Upper transform frequency; 0 resolves to min(L/2, 512).
    pub a_max: f64,
    /// Synchrosqueezing bins; 0 resolves to 2·a_max capped at 1024.
    pub nbins_tf: usize,

    // Ridge extraction.
    pub max_ridges: usize,
    /// Dynamic-programming jump penalty; 0 resolves to 0.05·nbins_tf.
    pub smoothness_penalty: f64,
    pub band_halfwidth: usize,
    /// Amplitude smoothing window in samples; 0 resolves to one period.
    pub amp_smooth: usize,
    /// Integer-ratio tolerance for harmonic grouping.
    pub ridge_tol: f64,

    // One-period regression.
    pub method: String,
    pub nbins: usize,
    pub nk: usize,
    pub krf: f64,
    pub ord: usize,

    // Recursion.
    pub max_iter: usize,
    pub eps: f64,
    /// Template-alignment refinement passes for --auto profiles.
    pub refine_passes: usize,
    /// Class bound M used in reported diagnostics (rarely known; advisory).
    pub m_class: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            preset: String::new(),
            n: 100.0,
            l: 1 << 16,
            sigma2: 0.0,
            k: 1,
            s_geom: 0.66,
            rad: 1.0,
            red: 8,
            eps_sst: 1e-3,
            a_min: 1.0,
            a_max: 0.0,
            nbins_tf: 0,
            max_ridges: 8,
            smoothness_penalty: 0.0,
            band_halfwidth: 3,
            amp_smooth: 0,
            ridge_tol: 0.05,
            method: "partition".into(),
            nbins: 50,
            nk: 20,
            krf: 1.01,
            ord: 3,
            max_iter: 200,
            eps: 1e-6,
            refine_passes: 1,
            m_class: 1.0,
        }
    }
}

impl RunConfig {
    /// Fill auto (zero) fields with their concrete values for a given
    /// signal length. Idempotent, so replaying an echoed config is exact.
    pub fn resolve(&mut self, len: usize) {
        self.l = len;
        if self.a_max == 0.0 {
            self.a_max = ((len / 2) as f64).min(512.0);
        }
        if self.nbins_tf == 0 {
            self.nbins_tf = ((2.0 * self.a_max) as usize).clamp(2, 1024);
        }
        if self.smoothness_penalty == 0.0 {
            self.smoothness_penalty = 0.05 * self.nbins_tf as f64;
        }
    }

    pub fn wave_packet(&self) -> WavePacketConfig {
        WavePacketConfig {
            s_geom: self.s_geom,
            rad: self.rad,
            red: self.red,
            eps_sst: self.eps_sst,
            freq_range: (self.a_min, self.a_max),
        }
    }

    pub fn ridge_options(&self) -> RidgeOptions {
        RidgeOptions {
            band_halfwidth: self.band_halfwidth,
            ..Default::default()
        }
    }

    pub fn profile_options(&self) -> ProfileOptions {
        ProfileOptions {
            band_halfwidth: self.band_halfwidth,
            amp_smooth: (self.amp_smooth > 0).then_some(self.amp_smooth),
            ..Default::default()
        }
    }

    pub fn regression(&self) -> Result<RegressionConfig, String> {
        let method: RegressionMethod = self.method.parse().map_err(|e| format!("{e}"))?;
        Ok(RegressionConfig {
            method,
            nbins: self.nbins,
            nk: self.nk,
            krf: self.krf,
            ord: self.ord,
            ..Default::default()
        })
    }

    pub fn rdbr(&self) -> Result<RdbrConfig, String> {
        Ok(RdbrConfig {
            max_iter: self.max_iter,
            eps: self.eps,
            regression: self.regression()?,
        })
    }

    /// The resolved echo embedded in meta/report files.
    pub fn echo(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

/// Parse a config file: flat JSON if it starts with `{`, `key = value`
/// lines otherwise.
pub fn parse_config_file(path: &Path) -> Result<Map<String, Value>, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| format!("{}: bad JSON config: {e}", path.display()))?;
        match value {
            Value::Object(map) => Ok(map),
            _ => Err(format!("{}: config must be a flat object", path.display())),
        }
    } else {
        parse_kv(&text).map_err(|(line, msg)| format!("{}:{line}: {msg}", path.display()))
    }
}

fn parse_kv(text: &str) -> Result<Map<String, Value>, (usize, String)> {
    let mut map = Map::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or((idx + 1, format!("expected 'key = value', got '{line}'")))?;
        let key = key.trim().to_string();
        let value = value.trim().trim_matches('"');
        map.insert(key, scalar(value));
    }
    Ok(map)
}

/// Parse a bare scalar the way config values are parsed.
pub fn scalar_value(value: &str) -> Value {
    scalar(value)
}

fn scalar(value: &str) -> Value {
    if let Ok(v) = value.parse::<u64>() {
        return Value::from(v);
    }
    if let Ok(v) = value.parse::<i64>() {
        return Value::from(v);
    }
    if let Ok(v) = value.parse::<f64>() {
        return Value::from(v);
    }
    match value {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        other => Value::String(other.to_string()),
    }
}

/// defaults ⊕ file ⊕ overrides, in that order.
pub fn build_config(
    file: Option<&Path>,
    overrides: Map<String, Value>,
) -> Result<RunConfig, String> {
    let mut merged = match serde_json::to_value(RunConfig::default()) {
        Ok(Value::Object(map)) => map,
        _ => unreachable!("default config serializes to an object"),
    };
    if let Some(path) = file {
        for (k, v) in parse_config_file(path)? {
            merged.insert(k, v);
        }
    }
    for (k, v) in overrides {
        merged.insert(k, v);
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| format!("bad config: {e}"))
}
