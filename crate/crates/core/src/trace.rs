use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::CircleGrid;
use crate::scalar::Real;

/// Boundary data at one wavenumber sampled on a circle.
///
/// `u` and `lap_u` are always present. The normal derivatives `dnu_u` and
/// `dnu_lap_u` (with `nu = x / |x|`) are either both present or both absent.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyTrace<T> {
    k: T,
    circle: CircleGrid<T>,
    u: Vec<Complex<T>>,
    lap_u: Vec<Complex<T>>,
    normal: Option<NormalDerivatives<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalDerivatives<T> {
    pub dnu_u: Vec<Complex<T>>,
    pub dnu_lap_u: Vec<Complex<T>>,
}

fn check_samples<T: Real>(name: &str, v: &[Complex<T>], len: usize) -> Result<()> {
    if v.len() != len {
        return Err(Error::invalid(format!("{name} has {} samples, circle has {len}", v.len())));
    }
    if let Some(j) = v.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::invalid(format!("{name}[{j}] is not finite")));
    }
    Ok(())
}

impl<T: Real> CauchyTrace<T> {
    /// Dirichlet-only trace `(u, lap_u)`.
    pub fn dirichlet(
        k: T,
        circle: CircleGrid<T>,
        u: Vec<Complex<T>>,
        lap_u: Vec<Complex<T>>,
    ) -> Result<Self> {
        Self::build(k, circle, u, lap_u, None)
    }

    /// Full Cauchy data `(u, lap_u, dnu_u, dnu_lap_u)`.
    pub fn full(
        k: T,
        circle: CircleGrid<T>,
        u: Vec<Complex<T>>,
        lap_u: Vec<Complex<T>>,
        dnu_u: Vec<Complex<T>>,
        dnu_lap_u: Vec<Complex<T>>,
    ) -> Result<Self> {
        Self::build(k, circle, u, lap_u, Some(NormalDerivatives { dnu_u, dnu_lap_u }))
    }

    fn build(
        k: T,
        circle: CircleGrid<T>,
        u: Vec<Complex<T>>,
        lap_u: Vec<Complex<T>>,
        normal: Option<NormalDerivatives<T>>,
    ) -> Result<Self> {
        if !(k > T::zero()) || !k.is_finite() {
            return Err(Error::invalid(format!("wavenumber must be positive, got {k}")));
        }
        let n = circle.angle_count();
        check_samples("u", &u, n)?;
        check_samples("lap_u", &lap_u, n)?;
        if let Some(nd) = &normal {
            check_samples("dnu_u", &nd.dnu_u, n)?;
            check_samples("dnu_lap_u", &nd.dnu_lap_u, n)?;
        }
        Ok(Self { k, circle, u, lap_u, normal })
    }

    pub fn wavenumber(&self) -> T {
        self.k
    }

    pub fn circle(&self) -> &CircleGrid<T> {
        &self.circle
    }

    pub fn u(&self) -> &[Complex<T>] {
        &self.u
    }

    pub fn lap_u(&self) -> &[Complex<T>] {
        &self.lap_u
    }

    pub fn dnu_u(&self) -> Option<&[Complex<T>]> {
        self.normal.as_ref().map(|n| n.dnu_u.as_slice())
    }

    pub fn dnu_lap_u(&self) -> Option<&[Complex<T>]> {
        self.normal.as_ref().map(|n| n.dnu_lap_u.as_slice())
    }

    pub fn has_normal_derivatives(&self) -> bool {
        self.normal.is_some()
    }

    /// Drop the normal derivatives, keeping the measured Dirichlet pair.
    pub fn into_dirichlet(self) -> Self {
        Self { normal: None, ..self }
    }

    pub fn into_parts(self) -> (T, CircleGrid<T>, Vec<Complex<T>>, Vec<Complex<T>>) {
        (self.k, self.circle, self.u, self.lap_u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_lengths_and_nan() {
        let c = CircleGrid::full(1.0, 4).unwrap();
        let z = vec![Complex::new(0.0, 0.0); 4];
        assert!(CauchyTrace::dirichlet(1.0, c.clone(), z.clone(), z.clone()).is_ok());
        assert!(CauchyTrace::dirichlet(1.0, c.clone(), z[..3].to_vec(), z.clone()).is_err());
        let mut bad = z.clone();
        bad[2].im = f64::NAN;
        assert!(CauchyTrace::dirichlet(1.0, c.clone(), z.clone(), bad).is_err());
        assert!(CauchyTrace::dirichlet(0.0, c, z.clone(), z).is_err());
    }
}
