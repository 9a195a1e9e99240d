use crate::error::{Error, Result};

/// Sample times in `[0,1]`, either the uniform grid `ℓ/L` or an arbitrary
/// strictly increasing point set (e.g. sorted i.i.d. draws).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    points: Vec<f64>,
    uniform: bool,
    step: Option<f64>,
}

const UNIFORM_TOL: f64 = 1e-12;

impl TimeGrid {
    /// The uniform grid `{ℓ/L}` for `ℓ = 0..L-1`.
    pub fn uniform(len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidConfig(format!(
                "uniform grid needs at least 2 points, got {len}"
            )));
        }
        let step = 1.0 / len as f64;
        let points = (0..len).map(|l| l as f64 * step).collect();
        Ok(Self {
            points,
            uniform: true,
            step: Some(step),
        })
    }

    /// Wrap an arbitrary point set, classifying it as uniform when every
    /// point matches `ℓ/L` to within 1e-12.
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySignal);
        }
        for (i, &t) in points.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::GridOutOfRange { index: i, value: t });
            }
            if i > 0 && t <= points[i - 1] {
                return Err(Error::GridNotIncreasing(i));
            }
        }
        let len = points.len();
        let step = 1.0 / len as f64;
        let uniform = points
            .iter()
            .enumerate()
            .all(|(l, &t)| (t - l as f64 * step).abs() <= UNIFORM_TOL);
        Ok(Self {
            points,
            uniform,
            step: uniform.then_some(step),
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Grid spacing; defined only for uniform grids.
    pub fn step(&self) -> Option<f64> {
        self.step
    }

    /// True when both grids hold the same points to within `tol`.
    pub fn matches(&self, other: &TimeGrid, tol: f64) -> bool {
        self.len() == other.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_points() {
        let g = TimeGrid::uniform(4).unwrap();
        assert_eq!(g.points(), &[0.0, 0.25, 0.5, 0.75]);
        assert!(g.is_uniform());
        assert_eq!(g.step(), Some(0.25));
    }

    #[test]
    fn detects_uniformity_of_explicit_points() {
        let g = TimeGrid::from_points(vec![0.0, 0.25, 0.5, 0.75]).unwrap();
        assert!(g.is_uniform());
        let g = TimeGrid::from_points(vec![0.0, 0.3, 0.5, 0.75]).unwrap();
        assert!(!g.is_uniform());
        assert_eq!(g.step(), None);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(TimeGrid::from_points(vec![]).is_err());
        assert!(TimeGrid::from_points(vec![0.0, 0.5, 0.5]).is_err());
        assert!(TimeGrid::from_points(vec![-0.1, 0.5]).is_err());
        assert!(TimeGrid::from_points(vec![0.0, 1.5]).is_err());
        assert!(TimeGrid::from_points(vec![0.0, f64::NAN]).is_err());
    }
}
