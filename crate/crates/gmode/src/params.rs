use crate::error::{Error, Result};

/// Model-class parameters shared by the validation predicates and the
/// well-differentiation diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Class bound `M` on amplitudes, shape sup-norms and Fourier sums.
    pub class_bound: f64,
    /// Minimum fundamental frequency `N`.
    pub min_fundamental_freq: f64,
    /// Number of modes `K`.
    pub mode_count: usize,
    /// Overlap bound `K₀` on time-frequency support intersections.
    pub overlap_bound: usize,
    /// Lipschitz constant `C` for shapes and amplitudes.
    pub lipschitz_bound: f64,
    /// Fourier support radius `d` of the mother wave packet, in `(0,1]`.
    pub packet_support_radius: f64,
}

impl ModelParams {
    pub fn new(
        class_bound: f64,
        min_fundamental_freq: f64,
        mode_count: usize,
        overlap_bound: usize,
        lipschitz_bound: f64,
        packet_support_radius: f64,
    ) -> Result<Self> {
        if class_bound < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "class bound must be ≥ 1, got {class_bound}"
            )));
        }
        if mode_count < 1 || overlap_bound < 1 {
            return Err(Error::InvalidConfig(
                "mode count and overlap bound must be ≥ 1".into(),
            ));
        }
        if !(packet_support_radius > 0.0 && packet_support_radius <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "packet support radius must be in (0,1], got {packet_support_radius}"
            )));
        }
        Ok(Self {
            class_bound,
            min_fundamental_freq,
            mode_count,
            overlap_bound,
            lipschitz_bound,
            packet_support_radius,
        })
    }

    /// Parameters with the given class bound and neutral defaults elsewhere.
    /// Numeric values of `M` and `C` are rarely known for real data, so the
    /// class checks stay advisory.
    pub fn with_class_bound(class_bound: f64) -> Self {
        Self {
            class_bound,
            min_fundamental_freq: 1.0,
            mode_count: 1,
            overlap_bound: 1,
            lipschitz_bound: 1.0,
            packet_support_radius: 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_bounds() {
        assert!(ModelParams::new(0.5, 1.0, 1, 1, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0, 1, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1, 1, 1.0, 1.5).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1, 1, 1.0, 0.0).is_err());
        assert!(ModelParams::new(2.0, 50.0, 2, 3, 10.0, 1.0).is_ok());
    }
}
