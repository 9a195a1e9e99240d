use crate::error::{Error, Result};
use crate::grid::TimeGrid;

/// Amplitudes below this floor are rejected; the inverse-warping step
/// divides by them.
pub const AMPLITUDE_FLOOR: f64 = 1e-8;

/// One mode's fundamental instantaneous phase `p(t) = Nφ(t)` (in cycles)
/// and instantaneous amplitude `α(t)`, sampled on the signal grid.
///
/// Both are typically known only up to the constants the method tolerates:
/// the phase up to an additive shift, the amplitude up to a positive factor.
#[derive(Debug, Clone, PartialEq)]
pub struct InstProfile {
    phase: Vec<f64>,
    amplitude: Vec<f64>,
    fundamental_freq_hint: f64,
}

impl InstProfile {
    pub fn new(phase: Vec<f64>, amplitude: Vec<f64>, fundamental_freq_hint: f64) -> Result<Self> {
        if phase.is_empty() {
            return Err(Error::EmptySignal);
        }
        if phase.len() != amplitude.len() {
            return Err(Error::LengthMismatch {
                left: phase.len(),
                right: amplitude.len(),
                context: "phase vs amplitude samples",
            });
        }
        for (i, p) in phase.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if i > 0 && *p <= phase[i - 1] {
                return Err(Error::PhaseNotIncreasing(i));
            }
        }
        for (i, a) in amplitude.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if *a <= AMPLITUDE_FLOOR {
                return Err(Error::AmplitudeUnderflow {
                    time: i as f64,
                    value: *a,
                });
            }
        }
        Ok(Self {
            phase,
            amplitude,
            fundamental_freq_hint,
        })
    }

    /// Sample a closed-form phase/amplitude pair on a grid.
    pub fn from_fns(
        grid: &TimeGrid,
        phase: impl Fn(f64) -> f64,
        amplitude: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let p: Vec<f64> = grid.points().iter().map(|&t| phase(t)).collect();
        let a: Vec<f64> = grid.points().iter().map(|&t| amplitude(t)).collect();
        let span = grid.points()[grid.len() - 1] - grid.points()[0];
        let hint = if span > 0.0 {
            (p[p.len() - 1] - p[0]) / span
        } else {
            0.0
        };
        Self::new(p, a, hint)
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    pub fn amplitude(&self) -> &[f64] {
        &self.amplitude
    }

    pub fn len(&self) -> usize {
        self.phase.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phase.is_empty()
    }

    /// Rough average of the fundamental instantaneous frequency `Nφ′`.
    pub fn fundamental_freq_hint(&self) -> f64 {
        self.fundamental_freq_hint
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_increasing_phase() {
        let err = InstProfile::new(vec![0.0, 0.5, 0.5], vec![1.0; 3], 1.0);
        assert!(matches!(err, Err(Error::PhaseNotIncreasing(2))));
    }

    #[test]
    fn rejects_tiny_amplitude() {
        let err = InstProfile::new(vec![0.0, 1.0], vec![1.0, 1e-9], 1.0);
        assert!(matches!(err, Err(Error::AmplitudeUnderflow { .. })));
    }

    #[test]
    fn hint_from_fns_matches_average_slope() {
        let grid = TimeGrid::uniform(256).unwrap();
        let p = InstProfile::from_fns(&grid, |t| 60.0 * t, |_| 1.0).unwrap();
        assert!((p.fundamental_freq_hint() - 60.0).abs() < 1e-9);
    }
}
