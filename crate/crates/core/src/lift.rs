//! Dirichlet data on `Gamma_R` to full Cauchy data on `Gamma_rho`.
//!
//! Outside the source, `u = u_H + u_M` with `(Lap + k^2) u_H = 0` and
//! `(Lap - k^2) u_M = 0`, so both parts follow from `(u, Lap u)` alone and
//! propagate mode by mode with Hankel and `K` transfer ratios.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::CircleGrid;
use crate::specfun::{hankel_transfer, modk_transfer};
use crate::trace::CauchyTrace;

/// Default angular truncation `|n| <= 60`.
pub const DEFAULT_N_MAX: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct SplitTrace {
    pub k: f64,
    pub circle: CircleGrid<f64>,
    pub u_h: Vec<Complex64>,
    pub u_m: Vec<Complex64>,
}

impl SplitTrace {
    /// `(u, Lap u) = (u_H + u_M, k^2 (u_M - u_H))`.
    pub fn recombine(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let k2 = self.k * self.k;
        self.u_h.iter().zip(&self.u_m).map(|(h, m)| (h + m, (m - h) * k2)).unzip()
    }
}

/// `u_H = -(Lap u - k^2 u) / (2k^2)`, `u_M = (Lap u + k^2 u) / (2k^2)`.
pub fn split_fields(trace: &CauchyTrace<f64>) -> Result<SplitTrace> {
    let k = trace.wavenumber();
    let k2 = k * k;
    if !(k2 > 0.0) {
        return Err(Error::invalid("cannot split at k = 0"));
    }
    let s = 0.5 / k2;
    let (u_h, u_m) = trace
        .u()
        .iter()
        .zip(trace.lap_u())
        .map(|(&u, &l)| (-(l - u * k2) * s, (l + u * k2) * s))
        .unzip();
    Ok(SplitTrace { k, circle: trace.circle().clone(), u_h, u_m })
}

/// `(1/2pi) sum_j v_j e^{-in theta_j} (aperture / count)` for `n = -n_max..=n_max`,
/// over the measured angles only. Index `n + n_max`.
pub fn modal_analyze(values: &[Complex64], circle: &CircleGrid<f64>, n_max: usize) -> Vec<Complex64> {
    let w = circle.step() / std::f64::consts::TAU;
    let nm = n_max as i64;
    (-nm..=nm)
        .map(|n| {
            let sum: Complex64 = values
                .iter()
                .zip(circle.angles())
                .map(|(v, &t)| v * Complex64::from_polar(1.0, -(n as f64) * t))
                .sum();
            sum * w
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModalCoefficients {
    pub k: f64,
    pub radius: f64,
    pub n_max: usize,
    pub coeff_h: Vec<Complex64>,
    pub coeff_m: Vec<Complex64>,
}

impl ModalCoefficients {
    pub fn analyze(split: &SplitTrace, n_max: usize) -> Self {
        Self {
            k: split.k,
            radius: split.circle.radius(),
            n_max,
            coeff_h: modal_analyze(&split.u_h, &split.circle, n_max),
            coeff_m: modal_analyze(&split.u_m, &split.circle, n_max),
        }
    }

    /// Split and analyze a measured trace in one step.
    pub fn from_trace(trace: &CauchyTrace<f64>, n_max: usize) -> Result<Self> {
        Ok(Self::analyze(&split_fields(trace)?, n_max))
    }
}

/// Full Cauchy data on `out_circle` (radius `rho >= R`).
pub fn propagate_cauchy(mc: &ModalCoefficients, out_circle: &CircleGrid<f64>) -> Result<CauchyTrace<f64>> {
    let rho = out_circle.radius();
    if rho < mc.radius {
        return Err(Error::invalid(format!("propagation radius {rho} is inside the data circle {}", mc.radius)));
    }
    let len = 2 * mc.n_max + 1;
    if mc.coeff_h.len() != len || mc.coeff_m.len() != len {
        return Err(Error::invalid("modal coefficient arrays do not match n_max"));
    }
    let k = mc.k;
    let (out, inn) = (k * rho, k * mc.radius);
    let nm = mc.n_max as i32;
    // Per mode: (H value, H normal derivative, M value, M normal derivative) on Gamma_rho.
    let mut modes = Vec::with_capacity(len);
    for (idx, n) in (-nm..=nm).enumerate() {
        let th = hankel_transfer(n, out, inn)?;
        let tm = modk_transfer(n, out, inn)?;
        debug_assert!(th.value_ratio.norm() <= 1.0 + 1e-12, "Hankel transfer grows at n = {n}");
        debug_assert!((0.0..=1.0 + 1e-12).contains(&tm.value_ratio.re), "K transfer out of range at n = {n}");
        let (ch, cm) = (mc.coeff_h[idx], mc.coeff_m[idx]);
        modes.push((th.value_ratio * ch, th.deriv_ratio * ch * k, tm.value_ratio * cm, tm.deriv_ratio * cm * k));
    }
    let n_out = out_circle.angle_count();
    let (mut u, mut lap_u, mut dnu_u, mut dnu_lap_u) =
        (Vec::with_capacity(n_out), Vec::with_capacity(n_out), Vec::with_capacity(n_out), Vec::with_capacity(n_out));
    let k2 = k * k;
    for &theta in out_circle.angles() {
        let (mut h, mut dh, mut m, mut dm) = Default::default();
        for ((vh, dvh, vm, dvm), n) in modes.iter().zip(-nm..=nm) {
            let e = Complex64::from_polar(1.0, n as f64 * theta);
            h += vh * e;
            dh += dvh * e;
            m += vm * e;
            dm += dvm * e;
        }
        let (h, dh, m, dm): (Complex64, Complex64, Complex64, Complex64) = (h, dh, m, dm);
        u.push(h + m);
        lap_u.push((m - h) * k2);
        dnu_u.push(dh + dm);
        dnu_lap_u.push((dm - dh) * k2);
    }
    CauchyTrace::full(k, out_circle.clone(), u, lap_u, dnu_u, dnu_lap_u)
}

/// Measured Dirichlet trace on `Gamma_R` to Cauchy data on `out_circle`.
pub fn lift_trace(trace: &CauchyTrace<f64>, out_circle: &CircleGrid<f64>, n_max: usize) -> Result<CauchyTrace<f64>> {
    propagate_cauchy(&ModalCoefficients::from_trace(trace, n_max)?, out_circle)
}
