use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use super::wavenumbers::WavenumberTable;
use crate::error::{Error, Result};
use crate::geometry::{fourier_basis, ModeIndex};
use crate::trace::CauchyTrace;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `oint [dnu Lap u + i c (l.nu) Lap u - k^2 (dnu u + i c (l.nu) u)] conj(phi_l) ds`
/// with `c = 2 pi / a` and `k` the data's wavenumber, by the rectangle rule.
pub fn boundary_integral(l: ModeIndex<f64>, data: &CauchyTrace<f64>, a: f64) -> Result<Complex64> {
    let (Some(dnu_u), Some(dnu_lap_u)) = (data.dnu_u(), data.dnu_lap_u()) else {
        return Err(Error::invalid("coefficient extraction needs normal derivatives"));
    };
    let circle = data.circle();
    if !circle.is_full() {
        return Err(Error::invalid("coefficient extraction needs data on the full circle"));
    }
    let c = TAU / a;
    let k2 = data.wavenumber().powi(2);
    let rho = circle.radius();
    let mut sum = Complex64::default();
    for (j, &theta) in circle.angles().iter().enumerate() {
        let (s, co) = theta.sin_cos();
        let ic_lnu = I * (c * (l.l1 * co + l.l2 * s));
        let term = dnu_lap_u[j] + ic_lnu * data.lap_u()[j] - (dnu_u[j] + ic_lnu * data.u()[j]) * k2;
        sum += term * fourier_basis(l, circle.point(j), a).conj();
    }
    Ok(sum * (TAU * rho / circle.angle_count() as f64))
}

/// `s_l = (1/a^2) boundary_integral`, requiring the data to be measured at `k_l = (2 pi / a)|l|`.
pub fn fourier_coefficient(l: ModeIndex<f64>, data: &CauchyTrace<f64>, a: f64) -> Result<Complex64> {
    fourier_coefficient_at(l, data, a, TAU / a * l.norm())
}

/// As [`fourier_coefficient`] against an explicit expected wavenumber.
pub fn fourier_coefficient_at(l: ModeIndex<f64>, data: &CauchyTrace<f64>, a: f64, k_l: f64) -> Result<Complex64> {
    let found = data.wavenumber();
    if (found - k_l).abs() > 1e-12 * k_l.abs().max(1e-300) {
        return Err(Error::WavenumberMismatch { expected: k_l, found });
    }
    Ok(boundary_integral(l, data, a)? / (a * a))
}

/// `int_V0 phi_l conj(phi_l0) dx = a^2 sinc(l1 - lambda) sinc(l2)`, `sinc t = sin(pi t)/(pi t)`.
pub fn basis_overlap(l: (i32, i32), lambda: f64, a: f64) -> f64 {
    if l.1 != 0 {
        return 0.0;
    }
    let t = f64::from(l.0) - lambda;
    let sinc = if t == 0.0 { 1.0 } else { (PI * t).sin() / (PI * t) };
    a * a * sinc
}

/// `lambda pi / (a^2 sin(lambda pi))`.
pub fn zero_mode_prefactor(lambda: f64, a: f64) -> f64 {
    lambda * PI / (a * a * (lambda * PI).sin())
}

/// Reconstructed coefficients for `1 <= |l|_inf <= N` plus the shifted zero mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub a: f64,
    pub n: usize,
    pub lambda: f64,
    /// Row-major over `l1, l2 in -N..=N`; the `(0, 0)` slot holds the zero-mode coefficient.
    values: Vec<Option<Complex64>>,
}

impl CoefficientTable {
    pub fn empty(a: f64, n: usize, lambda: f64) -> Self {
        Self { a, n, lambda, values: vec![None; (2 * n + 1).pow(2)] }
    }

    fn slot(&self, l1: i32, l2: i32) -> Option<usize> {
        let n = self.n as i32;
        (l1.abs() <= n && l2.abs() <= n).then(|| ((l1 + n) * (2 * n + 1) + (l2 + n)) as usize)
    }

    pub fn get(&self, l1: i32, l2: i32) -> Option<Complex64> {
        if (l1, l2) == (0, 0) {
            return None;
        }
        self.slot(l1, l2).and_then(|s| self.values[s])
    }

    pub fn set(&mut self, l1: i32, l2: i32, v: Complex64) -> Result<()> {
        if (l1, l2) == (0, 0) {
            return Err(Error::invalid("mode (0, 0) is represented by the shifted zero mode"));
        }
        let s = self.slot(l1, l2).ok_or_else(|| Error::invalid(format!("mode ({l1}, {l2}) exceeds N = {}", self.n)))?;
        self.values[s] = Some(v);
        Ok(())
    }

    pub fn zero_mode(&self) -> Option<Complex64> {
        self.values[self.slot(0, 0).unwrap()]
    }

    pub fn set_zero_mode(&mut self, v: Complex64) {
        let s = self.slot(0, 0).unwrap();
        self.values[s] = Some(v);
    }

    /// Present integer-mode coefficients in row-major order.
    pub fn integer_modes(&self) -> impl Iterator<Item = ((i32, i32), Complex64)> + '_ {
        let n = self.n as i32;
        (-n..=n)
            .flat_map(move |l1| (-n..=n).map(move |l2| (l1, l2)))
            .filter(|&l| l != (0, 0))
            .filter_map(move |(l1, l2)| self.get(l1, l2).map(|v| ((l1, l2), v)))
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// First integer mode with no coefficient.
    pub fn first_missing(&self) -> Option<(i32, i32)> {
        let n = self.n as i32;
        (-n..=n)
            .flat_map(|l1| (-n..=n).map(move |l2| (l1, l2)))
            .find(|&(l1, l2)| (l1, l2) != (0, 0) && self.get(l1, l2).is_none())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// All coefficients from Cauchy data on the outer circle, one trace per
    /// entry of `table.distinct_k`.
    pub fn from_cauchy_data(table: &WavenumberTable, data: &[CauchyTrace<f64>]) -> Result<Self> {
        if data.len() != table.distinct_k.len() {
            return Err(Error::invalid(format!(
                "expected {} traces, one per distinct wavenumber, got {}",
                table.distinct_k.len(),
                data.len()
            )));
        }
        let a = table.a;
        let integer: Vec<((i32, i32), Complex64)> = table
            .integer_entries()
            .par_iter()
            .map(|e| {
                let l = e.l.as_integer().expect("integer entry");
                fourier_coefficient_at(e.l, &data[e.distinct], a, e.k).map(|v| (l, v))
            })
            .collect::<Result<_>>()?;
        let mut out = Self::empty(a, table.n, table.lambda);
        for ((l1, l2), v) in integer {
            out.set(l1, l2, v)?;
        }
        let z = table.zero_mode();
        let s0 = zeroth_coefficient_at(&data[z.distinct], &out, table.lambda, a, z.k)?;
        out.set_zero_mode(s0);
        Ok(out)
    }
}

/// `s_l0 = P (boundary_integral(l0) - sum_l s_l overlap_l)` with `P = lambda pi / (a^2 sin lambda pi)`.
pub fn zeroth_coefficient(data: &CauchyTrace<f64>, coeffs: &CoefficientTable, lambda: f64, a: f64) -> Result<Complex64> {
    zeroth_coefficient_at(data, coeffs, lambda, a, TAU / a * lambda)
}

fn zeroth_coefficient_at(
    data: &CauchyTrace<f64>,
    coeffs: &CoefficientTable,
    lambda: f64,
    a: f64,
    k_l0: f64,
) -> Result<Complex64> {
    if let Some((l1, l2)) = coeffs.first_missing() {
        return Err(Error::MissingCoefficient { l1, l2 });
    }
    let l0 = ModeIndex::shifted_zero(lambda);
    let b = fourier_coefficient_at(l0, data, a, k_l0)? * (a * a);
    // Only l2 = 0 modes overlap with phi_l0.
    let n = coeffs.n as i32;
    let correction: Complex64 = (-n..=n)
        .filter(|&l1| l1 != 0)
        .map(|l1| coeffs.get(l1, 0).unwrap() * basis_overlap((l1, 0), lambda, a))
        .sum();
    Ok((b - correction) * zero_mode_prefactor(lambda, a))
}
