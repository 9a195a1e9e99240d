//! File formats shared with downstream tooling: CSV schemas for signals,
//! shapes, profiles, ridges and folded samples; a sparse CSV plus a dense
//! binary dump for energy distributions; and the decomposition report
//! directory. All numeric CSV fields carry 17 significant decimal digits so
//! round-trips are bit-exact.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::mat::Mat;
use crate::profile::InstProfile;
use crate::rdbr::Decomposition;
use crate::regress::FoldedSamples;
use crate::ridge::{RidgeCurve, RidgeGroup};
use crate::shape::ShapeEstimate;
use crate::signal::{Signal, SignalValues};
use crate::transform::TfDistribution;

/// Version tag of the dense binary energy dump.
pub const TF_BINARY_VERSION: u64 = 1;

fn fmt(x: f64) -> String {
    format!("{:.16e}", x)
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn parse_f64(path: &Path, line: usize, field: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|e| parse_err(path, line, format!("bad number '{}': {e}", field.trim())))
}

/// Write a signal as `t,value` (real) or `t,re,im` (complex).
pub fn write_signal_csv(path: &Path, sig: &Signal) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    let res = match sig.values() {
        SignalValues::Real(values) => {
            writeln!(w, "t,value").and_then(|_| {
                for (t, v) in sig.grid().points().iter().zip(values) {
                    writeln!(w, "{},{}", fmt(*t), fmt(*v))?;
                }
                Ok(())
            })
        }
        SignalValues::Complex(values) => {
            writeln!(w, "t,re,im").and_then(|_| {
                for (t, z) in sig.grid().points().iter().zip(values) {
                    writeln!(w, "{},{},{}", fmt(*t), fmt(z.re), fmt(z.im))?;
                }
                Ok(())
            })
        }
    };
    res.map_err(|e| io_err(path, e))
}

/// Read a signal CSV; the header row decides real vs complex layout.
pub fn read_signal_csv(path: &Path) -> Result<Signal> {
    let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();

    let header = match lines.next() {
        Some((_, Ok(h))) => h,
        Some((_, Err(e))) => return Err(io_err(path, e)),
        None => return Err(parse_err(path, 1, "empty file")),
    };
    let complex = match header.trim() {
        "t,value" => false,
        "t,re,im" => true,
        other => {
            return Err(parse_err(
                path,
                1,
                format!("expected header 't,value' or 't,re,im', got '{other}'"),
            ))
        }
    };

    let mut times = Vec::new();
    let mut re = Vec::new();
    let mut im = Vec::new();
    for (idx, line) in lines {
        let line = line.map_err(|e| io_err(path, e))?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let expected = if complex { 3 } else { 2 };
        if fields.len() != expected {
            return Err(parse_err(
                path,
                lineno,
                format!("expected {expected} columns, got {}", fields.len()),
            ));
        }
        times.push(parse_f64(path, lineno, fields[0])?);
        re.push(parse_f64(path, lineno, fields[1])?);
        if complex {
            im.push(parse_f64(path, lineno, fields[2])?);
        }
    }
    if times.is_empty() {
        return Err(parse_err(path, 1, "no data rows"));
    }
    let grid = TimeGrid::from_points(times)?;
    if complex {
        let values = re
            .into_iter()
            .zip(im)
            .map(|(a, b)| Complex64::new(a, b))
            .collect();
        Signal::complex(grid, values)
    } else {
        Signal::real(grid, re)
    }
}

/// Write one period of a shape as `x,value`.
pub fn write_shape_csv(path: &Path, shape: &ShapeEstimate) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    let g = shape.grid_size();
    writeln!(w, "x,value")
        .and_then(|_| {
            for (n, v) in shape.samples().iter().enumerate() {
                writeln!(w, "{},{}", fmt(n as f64 / g as f64), fmt(*v))?;
            }
            Ok(())
        })
        .map_err(|e| io_err(path, e))
}

pub fn read_shape_csv(path: &Path) -> Result<ShapeEstimate> {
    let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut samples = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        let lineno = idx + 1;
        if lineno == 1 {
            if line.trim() != "x,value" {
                return Err(parse_err(path, 1, "expected header 'x,value'"));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(parse_err(
                path,
                lineno,
                format!("expected 2 columns, got {}", fields.len()),
            ));
        }
        samples.push(parse_f64(path, lineno, fields[1])?);
    }
    ShapeEstimate::new(samples)
}

/// Write an instantaneous profile as `t,phase,amplitude`.
pub fn write_profile_csv(path: &Path, grid: &TimeGrid, profile: &InstProfile) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "t,phase,amplitude")
        .and_then(|_| {
            for (i, &t) in grid.points().iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{}",
                    fmt(t),
                    fmt(profile.phase()[i]),
                    fmt(profile.amplitude()[i])
                )?;
            }
            Ok(())
        })
        .map_err(|e| io_err(path, e))
}

/// Read a `t,phase,amplitude` profile; returns the grid it was sampled on.
pub fn read_profile_csv(path: &Path) -> Result<(TimeGrid, InstProfile)> {
    let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut times = Vec::new();
    let mut phase = Vec::new();
    let mut amplitude = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        let lineno = idx + 1;
        if lineno == 1 {
            if line.trim() != "t,phase,amplitude" {
                return Err(parse_err(path, 1, "expected header 't,phase,amplitude'"));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_err(
                path,
                lineno,
                format!("expected 3 columns, got {}", fields.len()),
            ));
        }
        times.push(parse_f64(path, lineno, fields[0])?);
        phase.push(parse_f64(path, lineno, fields[1])?);
        amplitude.push(parse_f64(path, lineno, fields[2])?);
    }
    let grid = TimeGrid::from_points(times)?;
    let len = grid.len();
    let span = grid.points()[len - 1] - grid.points()[0];
    let hint = if span > 0.0 {
        (phase[len - 1] - phase[0]) / span
    } else {
        0.0
    };
    let profile = InstProfile::new(phase, amplitude, hint)?;
    Ok((grid, profile))
}

/// Sparse export of the energy distribution: `b,v,energy` rows for
/// positive-energy cells only.
pub fn write_tf_sparse_csv(path: &Path, tf: &TfDistribution) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "b,v,energy")
        .and_then(|_| {
            for (m, &v) in tf.freqs().iter().enumerate() {
                for (j, &b) in tf.times().iter().enumerate() {
                    let e = *tf.energy().at(m, j);
                    if e > 0.0 {
                        writeln!(w, "{},{},{}", fmt(b), fmt(v), fmt(e))?;
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| io_err(path, e))
}

/// Dense little-endian dump: header `nfreq, ntime, version` as three u64,
/// then the row-major energy matrix, then the frequency and time axes.
pub fn write_tf_binary(path: &Path, tf: &TfDistribution) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    let nfreq = tf.freqs().len() as u64;
    let ntime = tf.times().len() as u64;
    let header = [nfreq, ntime, TF_BINARY_VERSION];
    (|| -> std::io::Result<()> {
        for h in header {
            w.write_all(&h.to_le_bytes())?;
        }
        for m in 0..tf.freqs().len() {
            for j in 0..tf.times().len() {
                w.write_all(&tf.energy().at(m, j).to_le_bytes())?;
            }
        }
        for &v in tf.freqs() {
            w.write_all(&v.to_le_bytes())?;
        }
        for &b in tf.times() {
            w.write_all(&b.to_le_bytes())?;
        }
        Ok(())
    })()
    .map_err(|e| io_err(path, e))
}

pub fn read_tf_binary(path: &Path) -> Result<TfDistribution> {
    let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut r = BufReader::new(file);
    let mut u64buf = [0u8; 8];
    let mut read_u64 = |r: &mut BufReader<fs::File>| -> Result<u64> {
        r.read_exact(&mut u64buf).map_err(|e| io_err(path, e))?;
        Ok(u64::from_le_bytes(u64buf))
    };
    let nfreq = read_u64(&mut r)? as usize;
    let ntime = read_u64(&mut r)? as usize;
    let version = read_u64(&mut r)?;
    if version != TF_BINARY_VERSION {
        return Err(parse_err(
            path,
            1,
            format!("unsupported dump version {version}"),
        ));
    }
    let read_f64s = |r: &mut BufReader<fs::File>, n: usize| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(n);
        let mut buf = [0u8; 8];
        for _ in 0..n {
            r.read_exact(&mut buf).map_err(|e| io_err(path, e))?;
            out.push(f64::from_le_bytes(buf));
        }
        Ok(out)
    };
    let flat = read_f64s(&mut r, nfreq * ntime)?;
    let freqs = read_f64s(&mut r, nfreq)?;
    let times = read_f64s(&mut r, ntime)?;
    let mut energy = Mat::<f64>::zeros(nfreq, ntime);
    for m in 0..nfreq {
        for j in 0..ntime {
            *energy.at_mut(m, j) = flat[m * ntime + j];
        }
    }
    Ok(TfDistribution::new(freqs, times, energy))
}

/// Ridge table: `b,freq,energy,group,harmonic`, one row per ridge sample.
pub fn write_ridges_csv(path: &Path, ridges: &[RidgeCurve], groups: &[RidgeGroup]) -> Result<()> {
    let mut membership = vec![(0usize, 1u32); ridges.len()];
    for (g, group) in groups.iter().enumerate() {
        for &(idx, harmonic) in &group.members {
            membership[idx] = (g + 1, harmonic);
        }
    }
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "b,freq,energy,group,harmonic")
        .and_then(|_| {
            for (idx, ridge) in ridges.iter().enumerate() {
                let (group, harmonic) = membership[idx];
                for j in 0..ridge.times.len() {
                    writeln!(
                        w,
                        "{},{},{},{},{}",
                        fmt(ridge.times[j]),
                        fmt(ridge.freqs[j]),
                        fmt(ridge.energy[j]),
                        group,
                        harmonic
                    )?;
                }
            }
            Ok(())
        })
        .map_err(|e| io_err(path, e))
}

/// Debug dump of folded regression samples: `t,x,y`.
pub fn write_folded_csv(path: &Path, fs_samples: &FoldedSamples) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "t,x,y")
        .and_then(|_| {
            for i in 0..fs_samples.xs.len() {
                writeln!(
                    w,
                    "{},{},{}",
                    fmt(fs_samples.source_times[i]),
                    fmt(fs_samples.xs[i]),
                    fmt(fs_samples.ys[i])
                )?;
            }
            Ok(())
        })
        .map_err(|e| io_err(path, e))
}

/// Write the decomposition directory: `shape_k.csv`, `mode_k.csv`,
/// `residual.csv` and `report.json`. Extra top-level report fields (config
/// echo, diagnostics) are merged from `extra`.
pub fn write_decomposition_dir(
    dir: &Path,
    dec: &Decomposition,
    extra: &serde_json::Value,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for (k, shape) in dec.shapes.iter().enumerate() {
        write_shape_csv(&dir.join(format!("shape_{}.csv", k + 1)), shape)?;
    }
    for (k, mode) in dec.modes.iter().enumerate() {
        write_signal_csv(&dir.join(format!("mode_{}.csv", k + 1)), mode)?;
    }
    write_signal_csv(&dir.join("residual.csv"), &dec.residual)?;

    let mut report = match serde_json::to_value(&dec.report) {
        Ok(serde_json::Value::Object(map)) => map,
        _ => serde_json::Map::new(),
    };
    if let serde_json::Value::Object(extra_map) = extra {
        for (k, v) in extra_map {
            report.insert(k.clone(), v.clone());
        }
    }
    let path = dir.join("report.json");
    let body = serde_json::to_string_pretty(&serde_json::Value::Object(report))
        .expect("report serializes");
    fs::write(&path, body).map_err(|e| io_err(&path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;

    fn tmpdir(tag: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("gmode-io-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn signal_csv_roundtrip_is_exact() {
        let dir = tmpdir("sig");
        let grid = TimeGrid::uniform(64).unwrap();
        let values: Vec<f64> = (0..64).map(|i| (i as f64 * 0.7133).sin() * 1e-3).collect();
        let sig = Signal::real(grid, values).unwrap();
        let path = dir.join("s.csv");
        write_signal_csv(&path, &sig).unwrap();
        let back = read_signal_csv(&path).unwrap();
        assert_eq!(back.as_real().unwrap(), sig.as_real().unwrap());
        assert_eq!(back.grid().points(), sig.grid().points());
    }

    #[test]
    fn complex_signal_roundtrip() {
        let dir = tmpdir("csig");
        let grid = TimeGrid::uniform(16).unwrap();
        let values: Vec<Complex64> = (0..16)
            .map(|i| Complex64::new(i as f64, -(i as f64) * 0.5))
            .collect();
        let sig = Signal::complex(grid, values.clone()).unwrap();
        let path = dir.join("s.csv");
        write_signal_csv(&path, &sig).unwrap();
        let back = read_signal_csv(&path).unwrap();
        assert_eq!(back.to_complex(), values);
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let dir = tmpdir("bad");
        let path = dir.join("bad.csv");
        fs::write(&path, "t,value\n0.0,1.0\n0.5,oops\n").unwrap();
        match read_signal_csv(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        fs::write(&path, "wrong,header\n").unwrap();
        assert!(matches!(
            read_signal_csv(&path),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn tf_binary_roundtrip() {
        let dir = tmpdir("tf");
        let freqs = vec![0.5, 1.5, 2.5];
        let times = vec![0.0, 0.25, 0.5, 0.75];
        let mut energy = Mat::<f64>::zeros(3, 4);
        *energy.at_mut(1, 2) = 3.5;
        *energy.at_mut(2, 0) = 0.25;
        let tf = TfDistribution::new(freqs.clone(), times.clone(), energy);
        let path = dir.join("tf.bin");
        write_tf_binary(&path, &tf).unwrap();
        let back = read_tf_binary(&path).unwrap();
        assert_eq!(back.freqs(), &freqs[..]);
        assert_eq!(back.times(), &times[..]);
        assert_eq!(*back.energy().at(1, 2), 3.5);
        assert_eq!(*back.energy().at(2, 0), 0.25);
        assert_eq!(back.total_energy(), 3.75);
    }

    #[test]
    fn shape_csv_roundtrip() {
        let dir = tmpdir("shape");
        let shape = ShapeEstimate::new(vec![0.25, -0.5, 1.0e-17, 3.0]).unwrap();
        let path = dir.join("shape.csv");
        write_shape_csv(&path, &shape).unwrap();
        let back = read_shape_csv(&path).unwrap();
        assert_eq!(back.samples(), shape.samples());
    }

    #[test]
    fn profile_csv_roundtrip() {
        let dir = tmpdir("prof");
        let grid = TimeGrid::uniform(32).unwrap();
        let profile = InstProfile::from_fns(&grid, |t| 60.0 * t, |t| 1.0 + 0.1 * t).unwrap();
        let path = dir.join("p.csv");
        write_profile_csv(&path, &grid, &profile).unwrap();
        let (grid_back, back) = read_profile_csv(&path).unwrap();
        assert_eq!(grid_back.points(), grid.points());
        assert_eq!(back.phase(), profile.phase());
        assert_eq!(back.amplitude(), profile.amplitude());
    }
}
