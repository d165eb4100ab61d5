//! Outward transfer factors `F_n(arg_out) / F_n(arg_in)` and `F_n'(arg_out) / F_n(arg_in)`
//! for `F = H^(1)` and `F = K`.
//!
//! Both are built from products of consecutive-order ratios
//! `F_j / F_{j-1}`, which stay O(max(1, j/x)) even when `F_n` is far outside
//! the double range. A running decimal exponent keeps the product itself
//! representable; factors whose log-magnitude falls below [`LOG_CUTOFF`]
//! are returned as exact zeros.

use num_complex::Complex64;

use super::jy::jy01;
use super::k::k_ratios;
use crate::error::{Error, Result};

/// Natural-log magnitude below which a transfer factor is flushed to zero.
pub const LOG_CUTOFF: f64 = -700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferFactor {
    /// `F_n(arg_out) / F_n(arg_in)`
    pub value_ratio: Complex64,
    /// `F_n'(arg_out) / F_n(arg_in)`
    pub deriv_ratio: Complex64,
}

impl TransferFactor {
    const ZERO: Self = Self { value_ratio: Complex64::new(0.0, 0.0), deriv_ratio: Complex64::new(0.0, 0.0) };
}

fn check(arg_out: f64, arg_in: f64) -> Result<()> {
    if !(arg_in > 0.0) || !arg_in.is_finite() || !arg_out.is_finite() {
        return Err(Error::invalid(format!("transfer arguments must be positive, got ({arg_out}, {arg_in})")));
    }
    if arg_out < arg_in {
        return Err(Error::invalid(format!("transfer requires arg_out >= arg_in, got {arg_out} < {arg_in}")));
    }
    Ok(())
}

/// Ratios `rho_j = H_j / H_{j-1}` for `j = 1..=n` (by forward recurrence), and `H_0`.
fn hankel_ratios(n: usize, x: f64) -> (Complex64, Vec<Complex64>) {
    let b = jy01(x);
    let h0 = b.h0();
    let mut ratios = Vec::with_capacity(n + 1);
    let mut r = b.h1() / h0;
    for j in 1..=n {
        ratios.push(r);
        r = Complex64::new(2.0 * j as f64 / x, 0.0) - r.inv();
    }
    if n == 0 {
        ratios.push(r);
    }
    (h0, ratios)
}

/// Product accumulator with a separate natural-log scale.
struct ScaledProduct<T> {
    mantissa: T,
    log_scale: f64,
}

const RESCALE_LOG: f64 = 230.0;

impl ScaledProduct<Complex64> {
    fn mul(&mut self, z: Complex64) {
        self.mantissa *= z;
        let m = self.mantissa.norm();
        if m < (-RESCALE_LOG).exp() || m > RESCALE_LOG.exp() {
            let l = m.ln();
            self.mantissa /= m;
            self.log_scale += l;
        }
    }

    fn value(&self) -> Option<Complex64> {
        let total = self.mantissa.norm().ln() + self.log_scale;
        (total >= LOG_CUTOFF).then(|| self.mantissa * self.log_scale.exp())
    }
}

impl ScaledProduct<f64> {
    fn mul(&mut self, z: f64) {
        self.mantissa *= z;
        let m = self.mantissa.abs();
        if m < (-RESCALE_LOG).exp() || m > RESCALE_LOG.exp() {
            self.log_scale += m.ln();
            self.mantissa /= m;
        }
    }

    fn value(&self) -> Option<f64> {
        let total = self.mantissa.abs().ln() + self.log_scale;
        (total >= LOG_CUTOFF).then(|| self.mantissa * self.log_scale.exp())
    }
}

/// `H_n(arg_out)/H_n(arg_in)` and `H_n'(arg_out)/H_n(arg_in)`, with `H_n' = H_{n-1} - (n/z) H_n`.
pub fn hankel_transfer(n: i32, arg_out: f64, arg_in: f64) -> Result<TransferFactor> {
    check(arg_out, arg_in)?;
    // H_{-n} = (-1)^n H_n: the sign cancels in both ratios.
    let na = n.unsigned_abs() as usize;
    let (h0_out, rho_out) = hankel_ratios(na, arg_out);
    let (h0_in, rho_in) = hankel_ratios(na, arg_in);
    let mut prod = ScaledProduct { mantissa: h0_out / h0_in, log_scale: 0.0 };
    for j in 0..na {
        prod.mul(rho_out[j] / rho_in[j]);
    }
    let Some(value) = prod.value() else {
        return Ok(TransferFactor::ZERO);
    };
    let log_deriv = if na == 0 { -rho_out[0] } else { rho_out[na - 1].inv() - na as f64 / arg_out };
    Ok(TransferFactor { value_ratio: value, deriv_ratio: log_deriv * value })
}

/// `K_n(arg_out)/K_n(arg_in)` and `K_n'(arg_out)/K_n(arg_in)`, with `K_n' = -(K_{n-1} + K_{n+1})/2`.
pub fn modk_transfer(n: i32, arg_out: f64, arg_in: f64) -> Result<TransferFactor> {
    check(arg_out, arg_in)?;
    let na = n.unsigned_abs() as usize;
    let (k0_out, r_out) = k_ratios(na, arg_out);
    let (k0_in, r_in) = k_ratios(na, arg_in);
    let mut prod = ScaledProduct { mantissa: k0_out / k0_in, log_scale: -(arg_out - arg_in) };
    for j in 0..na {
        prod.mul(r_out[j] / r_in[j]);
    }
    let Some(value) = prod.value() else {
        return Ok(TransferFactor::ZERO);
    };
    let log_deriv = if na == 0 { -r_out[0] } else { -0.5 * (r_out[na - 1].recip() + r_out[na]) };
    Ok(TransferFactor {
        value_ratio: Complex64::new(value, 0.0),
        deriv_ratio: Complex64::new(log_deriv * value, 0.0),
    })
}
