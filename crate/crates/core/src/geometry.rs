//! Points, sampling grids, Fourier modes and the Fourier basis on the period square.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<T> {
    pub x1: T,
    pub x2: T,
}

impl<T: Real> Point2<T> {
    pub fn new(x1: T, x2: T) -> Self {
        Self { x1, x2 }
    }

    pub fn polar(radius: T, theta: T) -> Self {
        Self { x1: radius * theta.cos(), x2: radius * theta.sin() }
    }

    pub fn norm(&self) -> T {
        self.x1.hypot(self.x2)
    }

    pub fn dist(&self, other: &Self) -> T {
        (self.x1 - other.x1).hypot(self.x2 - other.x2)
    }
}

/// Cell-centred uniform grid over the square `V0 = (-a/2, a/2)^2`.
///
/// Sample `(i1, i2)` sits at `(-a/2 + (i1 + 1/2) h, -a/2 + (i2 + 1/2) h)` with
/// `h = a / n`, so no sample lies on the boundary of `V0` and the midpoint
/// quadrature weight is exactly `h^2`. Points are stored with `x1` varying
/// fastest: index `i2 * n + i1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianGrid<T> {
    side: T,
    points_per_side: usize,
    coords: Vec<T>,
    points: Vec<Point2<T>>,
}

impl<T: Real> CartesianGrid<T> {
    pub fn new(side: T, points_per_side: usize) -> Result<Self> {
        if !(side > T::zero()) || !side.is_finite() {
            return Err(Error::invalid(format!("grid side must be positive, got {side}")));
        }
        if points_per_side < 2 {
            return Err(Error::invalid(format!(
                "grid needs at least 2 points per side, got {points_per_side}"
            )));
        }
        let h = side / T::count(points_per_side);
        let half = side / T::lit(2.0);
        let coords: Vec<T> = (0..points_per_side)
            .map(|j| -half + (T::count(j) + T::lit(0.5)) * h)
            .collect();
        let mut points = Vec::with_capacity(points_per_side * points_per_side);
        for &x2 in &coords {
            for &x1 in &coords {
                points.push(Point2::new(x1, x2));
            }
        }
        Ok(Self { side, points_per_side, coords, points })
    }

    pub fn side(&self) -> T {
        self.side
    }

    pub fn points_per_side(&self) -> usize {
        self.points_per_side
    }

    pub fn spacing(&self) -> T {
        self.side / T::count(self.points_per_side)
    }

    /// Midpoint quadrature weight `h^2`.
    pub fn cell_area(&self) -> T {
        let h = self.spacing();
        h * h
    }

    /// One-dimensional coordinates shared by both axes.
    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i2 * self.points_per_side + i1
    }

    /// Whether `x` lies in the open square `V0`.
    pub fn contains(&self, x: &Point2<T>) -> bool {
        let half = self.side / T::lit(2.0);
        x.x1.abs() < half && x.x2.abs() < half
    }

    /// Index of the sample nearest to `x`, or `None` outside `V0`.
    pub fn nearest(&self, x: &Point2<T>) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        let h = self.spacing();
        let half = self.side / T::lit(2.0);
        let last = self.points_per_side - 1;
        let snap = |c: T| -> usize {
            let j = ((c + half) / h).floor().to_usize().unwrap_or(0);
            j.min(last)
        };
        Some(self.index(snap(x.x1), snap(x.x2)))
    }
}

/// Equally spaced angles `theta_j = j * aperture / count`, `j = 1..=count`, on a circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleGrid<T> {
    radius: T,
    aperture: T,
    angles: Vec<T>,
}

impl<T: Real> CircleGrid<T> {
    pub fn new(radius: T, count: usize, aperture: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::invalid(format!("circle radius must be positive, got {radius}")));
        }
        if count == 0 {
            return Err(Error::invalid("circle needs at least one angle"));
        }
        if !(aperture > T::zero() && aperture <= T::TAU()) {
            return Err(Error::invalid(format!("aperture must lie in (0, 2pi], got {aperture}")));
        }
        // Written as `aperture * j / count` so the last angle is the aperture itself.
        let angles = (1..=count).map(|j| aperture * T::count(j) / T::count(count)).collect();
        Ok(Self { radius, aperture, angles })
    }

    /// Full circle with `count` angles.
    pub fn full(radius: T, count: usize) -> Result<Self> {
        Self::new(radius, count, T::TAU())
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn aperture(&self) -> T {
        self.aperture
    }

    pub fn angle_count(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    /// Angular step `aperture / count`.
    pub fn step(&self) -> T {
        self.aperture / T::count(self.angles.len())
    }

    pub fn is_full(&self) -> bool {
        (self.aperture - T::TAU()).abs() <= T::epsilon() * T::lit(8.0)
    }

    pub fn point(&self, j: usize) -> Point2<T> {
        Point2::polar(self.radius, self.angles[j])
    }

    pub fn with_radius(&self, radius: T) -> Result<Self> {
        Self::new(radius, self.angles.len(), self.aperture)
    }
}

/// Fourier mode `l = (l1, l2)`: an integer pair, or the shifted zero mode `(lambda, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIndex<T> {
    pub l1: T,
    pub l2: T,
}

impl<T: Real> ModeIndex<T> {
    pub fn integer(l1: i32, l2: i32) -> Self {
        Self { l1: T::from_i32(l1).unwrap(), l2: T::from_i32(l2).unwrap() }
    }

    /// Surrogate `l0 = (lambda, 0)` for the unreachable zero mode.
    pub fn shifted_zero(lambda: T) -> Self {
        Self { l1: lambda, l2: T::zero() }
    }

    pub fn neg(self) -> Self {
        Self { l1: -self.l1, l2: -self.l2 }
    }

    pub fn norm(&self) -> T {
        self.l1.hypot(self.l2)
    }

    pub fn sup_norm(&self) -> T {
        self.l1.abs().max(self.l2.abs())
    }

    pub fn is_integer(&self) -> bool {
        self.l1.fract() == T::zero() && self.l2.fract() == T::zero()
    }

    /// Integer components, if this is an integer mode.
    pub fn as_integer(&self) -> Option<(i32, i32)> {
        if self.is_integer() {
            Some((self.l1.to_i32()?, self.l2.to_i32()?))
        } else {
            None
        }
    }
}

/// `phi_l(x) = exp(i (2 pi / a) l . x)`.
#[inline]
pub fn fourier_basis<T: Real>(l: ModeIndex<T>, x: Point2<T>, a: T) -> Complex<T> {
    let phase = T::TAU() / a * (l.l1 * x.x1 + l.l2 * x.x2);
    Complex::from_polar(T::one(), phase)
}
