//! Integer-order cylinder functions `J`, `Y`, `H^(1)`, `K` of positive real argument.
//!
//! Order-0/1 values are produced by one of three methods depending on `x`:
//!
//! | range            | `J0, J1, Y0, Y1`                       | `K0, K1`                 |
//! |------------------|----------------------------------------|--------------------------|
//! | `x <= 5` / `<= 2`| power series                           | power series             |
//! | `5 < x < 20`     | Miller recurrence + Neumann series     | Steed continued fraction |
//! | `x >= 20`        | Hankel asymptotic expansion            | Steed continued fraction |
//!
//! Higher orders come from Miller's backward recurrence (`J`) and forward
//! recurrence (`Y`, `K`). The propagation ratios in [`transfer`] never form
//! `H_n` or `K_n` themselves, so they stay finite where the functions overflow.

mod jy;
mod k;
mod transfer;

pub use jy::{bessel_j, bessel_j_seq, bessel_y, bessel_y_seq, hankel1, hankel1_deriv, jy01, Jy01};
pub use k::{bessel_k, bessel_k_deriv, k01_scaled, log_bessel_k};
pub use transfer::{hankel_transfer, modk_transfer, TransferFactor};

/// Largest order accepted by the direct evaluators ([`hankel1`], [`bessel_k`], ...).
pub const MAX_ORDER: i32 = 128;

pub(crate) const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn check_args(function: &'static str, n: i32, x: f64) -> crate::Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(crate::Error::invalid(format!("{function}: argument must be positive, got {x}")));
    }
    if n.abs() > MAX_ORDER {
        return Err(crate::Error::OrderTooLarge { order: n, max: MAX_ORDER });
    }
    Ok(())
}
