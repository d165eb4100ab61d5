//! Discrete relative L2 and H1 errors over a grid.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CartesianGrid;
use crate::scalar::Real;

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::invalid(format!("field lengths differ: {a} vs {b}")));
    }
    Ok(())
}

/// `sqrt(sum |approx - exact|^2) / sqrt(sum |exact|^2)`.
pub fn rel_l2<T: Real>(approx: &[Complex<T>], exact: &[T]) -> Result<T> {
    check_len(approx.len(), exact.len())?;
    let mut num = T::zero();
    let mut den = T::zero();
    for (a, &e) in approx.iter().zip(exact) {
        num += (a - e).norm_sqr();
        den += e * e;
    }
    if den == T::zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok((num / den).sqrt())
}

/// Gradient of grid samples: central differences inside, one-sided at the edges.
pub fn fd_gradient<T: Real>(values: &[T], grid: &CartesianGrid<T>) -> Result<Vec<[T; 2]>> {
    check_len(values.len(), grid.len())?;
    let n = grid.points_per_side();
    let h = grid.spacing();
    let two_h = h + h;
    let d = |lo: T, hi: T, span: T| (hi - lo) / span;
    let axis = |i: usize, at: &dyn Fn(usize) -> T| {
        if i == 0 {
            d(at(0), at(1), h)
        } else if i == n - 1 {
            d(at(n - 2), at(n - 1), h)
        } else {
            d(at(i - 1), at(i + 1), two_h)
        }
    };
    let mut out = Vec::with_capacity(values.len());
    for i2 in 0..n {
        for i1 in 0..n {
            let g1 = axis(i1, &|j| values[grid.index(j, i2)]);
            let g2 = axis(i2, &|j| values[grid.index(i1, j)]);
            out.push([g1, g2]);
        }
    }
    Ok(out)
}

/// `sqrt(sum |grad(a - e)|^2 + |a - e|^2) / sqrt(sum |grad e|^2 + |e|^2)`.
pub fn rel_h1<T: Real>(
    approx: &[Complex<T>],
    approx_grad: &[[Complex<T>; 2]],
    exact: &[T],
    exact_grad: &[[T; 2]],
) -> Result<T> {
    check_len(approx.len(), exact.len())?;
    check_len(approx_grad.len(), exact.len())?;
    check_len(exact_grad.len(), exact.len())?;
    let mut num = T::zero();
    let mut den = T::zero();
    for j in 0..exact.len() {
        num += (approx[j] - exact[j]).norm_sqr();
        den += exact[j] * exact[j];
        for c in 0..2 {
            num += (approx_grad[j][c] - exact_grad[j][c]).norm_sqr();
            den += exact_grad[j][c] * exact_grad[j][c];
        }
    }
    if den == T::zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok((num / den).sqrt())
}

/// Scores of one reconstruction. Wall time is kept out of the serialized form
/// so that reports are byte-reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub rel_l2: f64,
    pub rel_h1: Option<f64>,
    pub n_used: usize,
    pub delta: f64,
    #[serde(skip)]
    pub wall_time_s: f64,
}
