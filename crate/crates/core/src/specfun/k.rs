use std::f64::consts::PI;

use super::{check_args, EULER_GAMMA};
use crate::error::{Error, Result};

const SERIES_MAX: f64 = 2.0;

/// `(e^x K0(x), e^x K1(x))` for `x > 0`.
pub fn k01_scaled(x: f64) -> (f64, f64) {
    debug_assert!(x > 0.0);
    if x <= SERIES_MAX {
        let (k0, k1) = k01_series(x);
        let e = x.exp();
        (k0 * e, k1 * e)
    } else {
        k01_steed(x)
    }
}

fn k01_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let half = 0.5 * x;
    let log_term = half.ln() + EULER_GAMMA;
    // t0 = q^k/(k!)^2, t1 = q^k/(k!(k+1)!)
    let mut t0 = 1.0;
    let mut t1 = 1.0;
    let mut i0 = 1.0;
    let mut i1 = 1.0;
    let mut harmonic = 0.0;
    let mut k0_tail = 0.0;
    let mut k1_tail = 1.0 - 2.0 * EULER_GAMMA;
    for k in 1..40 {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        i0 += t0;
        i1 += t1;
        k0_tail += harmonic * t0;
        k1_tail += (2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA) * t1;
        if t0 < 1e-18 * i0 {
            break;
        }
    }
    i1 *= half;
    let k0 = -log_term * i0 + k0_tail;
    let k1 = 1.0 / x + half.ln() * i1 - 0.5 * half * k1_tail;
    (k0, k1)
}

/// Steed's continued fraction (Temme's CF2) for order zero, scaled by `e^x`.
fn k01_steed(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// Ratios `r_j = K_j / K_{j-1}` for `j = 1..=n` via `r_{j+1} = 2j/x + 1/r_j`.
pub(crate) fn k_ratios(n: usize, x: f64) -> (f64, Vec<f64>) {
    let (k0s, k1s) = k01_scaled(x);
    let mut ratios = Vec::with_capacity(n + 1);
    let mut r = k1s / k0s;
    for j in 1..=n + 1 {
        ratios.push(r);
        r = 2.0 * j as f64 / x + 1.0 / r;
    }
    (k0s, ratios)
}

/// `ln K_n(x)`, finite even where `K_n(x)` itself over- or underflows.
pub fn log_bessel_k(n: i32, x: f64) -> Result<f64> {
    check_args("log_bessel_k", n, x)?;
    let na = n.unsigned_abs() as usize;
    let (k0s, ratios) = k_ratios(na, x);
    let mut log = k0s.ln() - x;
    for r in &ratios[..na] {
        log += r.ln();
    }
    Ok(log)
}

/// `K_n(x)`, with `K_{-n} = K_n`. Out-of-range results are reported, never
/// returned as `inf` or `0`.
pub fn bessel_k(n: i32, x: f64) -> Result<f64> {
    check_args("bessel_k", n, x)?;
    let na = n.unsigned_abs() as usize;
    let (k0s, ratios) = k_ratios(na, x);
    // Product form keeps full relative accuracy while it stays in range.
    let mut scaled = k0s;
    let mut log_extra = -x;
    for r in &ratios[..na] {
        scaled *= r;
        if scaled > 1e280 {
            scaled *= 1e-280;
            log_extra += 280.0 * std::f64::consts::LN_10;
        }
    }
    let log = scaled.ln() + log_extra;
    if log > f64::MAX.ln() {
        return Err(Error::Overflow { function: "bessel_k", order: n, x });
    }
    if log < f64::MIN_POSITIVE.ln() {
        return Err(Error::Underflow { function: "bessel_k", order: n, x });
    }
    Ok(scaled * log_extra.exp())
}

/// `K_n'(x) = -(K_{n-1}(x) + K_{n+1}(x)) / 2`.
pub fn bessel_k_deriv(n: i32, x: f64) -> Result<f64> {
    let na = n.abs();
    if na == 0 {
        return Ok(-bessel_k(1, x)?);
    }
    Ok(-0.5 * (bessel_k(na - 1, x)? + bessel_k(na + 1, x)?))
}
