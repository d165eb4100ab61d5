//! Exact source terms used to synthesise data and to score reconstructions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CartesianGrid, Point2};
use crate::scalar::Real;

/// Built-in analytic sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticSource {
    /// Smooth "mountain": a Gaussian bump plus a decaying quadrupole,
    /// `1.1 exp(-200((x1-0.01)^2+(x2-0.12)^2)) - 100 (x2^2-x1^2) exp(-90(x1^2+x2^2))`.
    S1,
    /// The same formula with the quadrupole envelope `exp(-90(x1^2 - x2^2))`,
    /// which grows along `x2`. Kept for reproducing that literal variant; it
    /// is not negligible on the boundary of `V0`.
    S1Saddle,
    /// Piecewise constant: 0.8 on `r^2 < 0.04`, 0.3 on `0.04 <= r^2 <= 0.09`, 0 elsewhere.
    S2,
    /// Three-Gaussian mixture used on the `[-3, 3]^2` domain.
    S3,
}

impl AnalyticSource {
    pub fn eval<T: Real>(self, x: Point2<T>) -> T {
        let l = T::lit;
        let (x1, x2) = (x.x1, x.x2);
        match self {
            AnalyticSource::S1 | AnalyticSource::S1Saddle => {
                let bump = l(1.1)
                    * (l(-200.0) * ((x1 - l(0.01)).powi(2) + (x2 - l(0.12)).powi(2))).exp();
                let envelope = match self {
                    AnalyticSource::S1 => (l(-90.0) * (x1 * x1 + x2 * x2)).exp(),
                    _ => (l(-90.0) * (x1 * x1 - x2 * x2)).exp(),
                };
                bump - l(100.0) * (x2 * x2 - x1 * x1) * envelope
            }
            AnalyticSource::S2 => {
                let r2 = x1 * x1 + x2 * x2;
                if r2 < l(0.04) {
                    l(0.8)
                } else if r2 <= l(0.09) {
                    l(0.3)
                } else {
                    T::zero()
                }
            }
            AnalyticSource::S3 => {
                let one = T::one();
                l(0.3) * (one - x1).powi(2) * (-x1 * x1 - (x2 + one).powi(2)).exp()
                    - (l(0.2) * x1 - x1.powi(3) - x2.powi(5)) * (-x1 * x1 - x2 * x2).exp()
                    - l(0.03) * (-(x1 + one).powi(2) - x2 * x2).exp()
            }
        }
    }

    /// Closed-form gradient, for the smooth sources only.
    pub fn gradient<T: Real>(self, x: Point2<T>) -> Option<[T; 2]> {
        let l = T::lit;
        let (x1, x2) = (x.x1, x.x2);
        match self {
            AnalyticSource::S1 => {
                let e1 = l(1.1)
                    * (l(-200.0) * ((x1 - l(0.01)).powi(2) + (x2 - l(0.12)).powi(2))).exp();
                let e2 = (l(-90.0) * (x1 * x1 + x2 * x2)).exp();
                let q = x2 * x2 - x1 * x1;
                Some([
                    l(-400.0) * (x1 - l(0.01)) * e1 + l(200.0) * x1 * e2 + l(18000.0) * x1 * q * e2,
                    l(-400.0) * (x2 - l(0.12)) * e1 - l(200.0) * x2 * e2 + l(18000.0) * x2 * q * e2,
                ])
            }
            AnalyticSource::S3 => {
                let one = T::one();
                let two = l(2.0);
                let a = (-x1 * x1 - (x2 + one).powi(2)).exp();
                let b = (-x1 * x1 - x2 * x2).exp();
                let c = (-(x1 + one).powi(2) - x2 * x2).exp();
                let p = l(0.2) * x1 - x1.powi(3) - x2.powi(5);
                let w = one - x1;
                Some([
                    l(0.3) * (-two * w - two * x1 * w * w) * a
                        - (l(0.2) - l(3.0) * x1 * x1 - two * x1 * p) * b
                        + l(0.06) * (x1 + one) * c,
                    l(-0.6) * w * w * (x2 + one) * a
                        - (l(-5.0) * x2.powi(4) - two * x2 * p) * b
                        + l(0.06) * x2 * c,
                ])
            }
            AnalyticSource::S1Saddle | AnalyticSource::S2 => None,
        }
    }
}

/// A reconstructible source term.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpec<T> {
    Analytic(AnalyticSource),
    /// Samples on a cell-centred grid, looked up by nearest sample.
    Gridded { grid: CartesianGrid<T>, values: Vec<T> },
}

impl<T: Real> SourceSpec<T> {
    pub fn gridded(grid: CartesianGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "gridded source has {} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("gridded source contains non-finite values"));
        }
        Ok(SourceSpec::Gridded { grid, values })
    }

    pub fn eval(&self, x: Point2<T>) -> Result<T> {
        match self {
            SourceSpec::Analytic(s) => Ok(s.eval(x)),
            SourceSpec::Gridded { grid, values } => grid
                .nearest(&x)
                .map(|i| values[i])
                .ok_or_else(|| Error::Geometry(format!("({}, {}) lies outside the source grid", x.x1, x.x2))),
        }
    }

    /// Source values at every grid point, in grid order.
    pub fn sample(&self, grid: &CartesianGrid<T>) -> Result<Vec<T>> {
        match self {
            SourceSpec::Analytic(s) => Ok(grid.points().iter().map(|&p| s.eval(p)).collect()),
            SourceSpec::Gridded { grid: own, values } => {
                if own == grid {
                    return Ok(values.clone());
                }
                if (own.side() - grid.side()).abs() > T::epsilon() * own.side() * T::lit(16.0) {
                    return Err(Error::Geometry(format!(
                        "gridded source covers side {}, sampling grid has side {}",
                        own.side(),
                        grid.side()
                    )));
                }
                grid.points().iter().map(|&p| self.eval(p)).collect()
            }
        }
    }

    pub fn analytic_gradient(&self, x: Point2<T>) -> Option<[T; 2]> {
        match self {
            SourceSpec::Analytic(s) => s.gradient(x),
            SourceSpec::Gridded { .. } => None,
        }
    }
}

impl<T> From<AnalyticSource> for SourceSpec<T> {
    fn from(s: AnalyticSource) -> Self {
        SourceSpec::Analytic(s)
    }
}
