use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;

/// Sample values of a signal, real or complex.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalValues {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl SignalValues {
    pub fn len(&self) -> usize {
        match self {
            SignalValues::Real(v) => v.len(),
            SignalValues::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check_finite(&self) -> Result<()> {
        match self {
            SignalValues::Real(v) => {
                for (i, x) in v.iter().enumerate() {
                    if !x.is_finite() {
                        return Err(Error::NonFinite(i));
                    }
                }
            }
            SignalValues::Complex(v) => {
                for (i, z) in v.iter().enumerate() {
                    if !z.re.is_finite() || !z.im.is_finite() {
                        return Err(Error::NonFinite(i));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A sampled signal on a [`TimeGrid`] in `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: TimeGrid,
    values: SignalValues,
}

impl Signal {
    pub fn new(grid: TimeGrid, values: SignalValues) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                left: grid.len(),
                right: values.len(),
                context: "grid points vs signal values",
            });
        }
        values.check_finite()?;
        Ok(Self { grid, values })
    }

    pub fn real(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, SignalValues::Real(values))
    }

    pub fn complex(grid: TimeGrid, values: Vec<Complex64>) -> Result<Self> {
        Self::new(grid, SignalValues::Complex(values))
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &SignalValues {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_real(&self) -> bool {
        matches!(self.values, SignalValues::Real(_))
    }

    /// Borrow real samples, or fail when the signal is complex.
    pub fn as_real(&self) -> Result<&[f64]> {
        match &self.values {
            SignalValues::Real(v) => Ok(v),
            SignalValues::Complex(_) => Err(Error::ComplexSignal),
        }
    }

    /// Samples as complex numbers (real signals get zero imaginary parts).
    pub fn to_complex(&self) -> Vec<Complex64> {
        match &self.values {
            SignalValues::Real(v) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            SignalValues::Complex(v) => v.clone(),
        }
    }

    /// Squared magnitude per sample.
    pub fn abs_sq(&self) -> Vec<f64> {
        match &self.values {
            SignalValues::Real(v) => v.iter().map(|x| x * x).collect(),
            SignalValues::Complex(v) => v.iter().map(|z| z.norm_sqr()).collect(),
        }
    }
}

/// `L²` norm of a signal over `[0,1]`: rectangle rule on uniform grids,
/// trapezoid rule on the given points otherwise.
pub fn l2_norm(sig: &Signal) -> Result<f64> {
    if sig.is_empty() {
        return Err(Error::EmptySignal);
    }
    Ok(l2_norm_sq_samples(sig.grid(), &sig.abs_sq()).sqrt())
}

/// Same quadrature as [`l2_norm`] applied to bare real samples.
pub fn l2_norm_samples(grid: &TimeGrid, values: &[f64]) -> f64 {
    let sq: Vec<f64> = values.iter().map(|v| v * v).collect();
    l2_norm_sq_samples(grid, &sq).sqrt()
}

fn l2_norm_sq_samples(grid: &TimeGrid, sq: &[f64]) -> f64 {
    if let Some(h) = grid.step() {
        sq.iter().sum::<f64>() * h
    } else {
        let t = grid.points();
        let mut acc = 0.0;
        for i in 1..t.len() {
            acc += 0.5 * (sq[i] + sq[i - 1]) * (t[i] - t[i - 1]);
        }
        acc
    }
}
