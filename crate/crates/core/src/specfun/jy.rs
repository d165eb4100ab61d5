use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use super::{check_args, EULER_GAMMA};
use crate::error::{Error, Result};

const SERIES_MAX: f64 = 5.0;
const ASYMPTOTIC_MIN: f64 = 20.0;
const RESCALE: f64 = 1e250;

/// `J0, J1, Y0, Y1` at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jy01 {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Jy01 {
    #[inline]
    pub fn h0(&self) -> Complex64 {
        Complex64::new(self.j0, self.y0)
    }

    #[inline]
    pub fn h1(&self) -> Complex64 {
        Complex64::new(self.j1, self.y1)
    }
}

/// Orders 0 and 1 of `J` and `Y` for `x > 0`.
pub fn jy01(x: f64) -> Jy01 {
    debug_assert!(x > 0.0);
    if x <= SERIES_MAX {
        jy01_series(x)
    } else if x < ASYMPTOTIC_MIN {
        jy01_miller(x)
    } else {
        jy01_asymptotic(x)
    }
}

fn jy01_series(x: f64) -> Jy01 {
    let q = 0.25 * x * x;
    let half = 0.5 * x;
    // t0 = (-q)^k / (k!)^2, t1 = (-q)^k / (k! (k+1)!)
    let mut t0 = 1.0;
    let mut t1 = 1.0;
    let mut j0 = 1.0;
    let mut j1 = 1.0;
    // sum_{k>=1} (-1)^{k+1} H_k q^k/(k!)^2 and sum_k (-1)^k (psi(k+1)+psi(k+2)) q^k/(k!(k+1)!)
    let mut harmonic = 0.0;
    let mut y0_tail = 0.0;
    let mut y1_tail = 1.0 - 2.0 * EULER_GAMMA;
    for k in 1..60 {
        let kf = k as f64;
        t0 *= -q / (kf * kf);
        t1 *= -q / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        j0 += t0;
        j1 += t1;
        y0_tail -= harmonic * t0;
        y1_tail += (2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA) * t1;
        if t0.abs() < 1e-18 * j0.abs().max(1e-300) && t1.abs() < 1e-18 {
            break;
        }
    }
    j1 *= half;
    let log_term = (half).ln() + EULER_GAMMA;
    let y0 = FRAC_2_PI * (log_term * j0 + y0_tail);
    let y1 = -FRAC_2_PI / x + FRAC_2_PI * half.ln() * j1 - half / PI * y1_tail;
    Jy01 { j0, j1, y0, y1 }
}

/// Backward recurrence for `J_0..J_m`, normalised by `J0 + 2 sum J_2k = 1`,
/// with `Y0, Y1` from their Neumann series in `J`.
fn jy01_miller(x: f64) -> Jy01 {
    // J_m(x) / J_0(x) < 1e-17 for m >= x + 36 on this range.
    let m = (x + 36.0).ceil() as usize;
    let m = m + (m % 2);
    let two_over_x = 2.0 / x;
    let mut above = 0.0; // J_{j+1}
    let mut cur = 1e-30; // J_j
    let mut even_sum = 0.0; // sum_{k>=1} J_2k
    let mut s0 = 0.0; // sum_{k>=1} (-1)^k J_2k / k
    let mut s1 = 0.0; // sum_{k>=1} (-1)^k (2k+1)/(k(k+1)) J_{2k+1}
    let mut j1 = 0.0;
    let mut j = m;
    loop {
        if j % 2 == 0 && j > 0 {
            let k = (j / 2) as f64;
            let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
            even_sum += cur;
            s0 += sign * cur / k;
        } else if j % 2 == 1 && j >= 3 {
            let kk = (j - 1) / 2;
            let k = kk as f64;
            let sign = if kk % 2 == 0 { 1.0 } else { -1.0 };
            s1 += sign * (2.0 * k + 1.0) / (k * (k + 1.0)) * cur;
        }
        if j == 1 {
            j1 = cur;
        }
        if j == 0 {
            break;
        }
        let below = j as f64 * two_over_x * cur - above;
        above = cur;
        cur = below;
        j -= 1;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            above /= RESCALE;
            even_sum /= RESCALE;
            s0 /= RESCALE;
            s1 /= RESCALE;
            j1 /= RESCALE;
        }
    }
    let j0_raw = cur;
    let norm = 1.0 / (j0_raw + 2.0 * even_sum);
    let j0 = j0_raw * norm;
    let j1 = j1 * norm;
    let s0 = s0 * norm;
    let s1 = s1 * norm;
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let y0 = FRAC_2_PI * (log_term * j0 - 2.0 * s0);
    let y1 = FRAC_2_PI * (-j0 / x + (log_term - 1.0) * j1 - s1);
    Jy01 { j0, j1, y0, y1 }
}

fn miller_start(n: i32, x: f64) -> usize {
    let top = (n as f64).max(x);
    let m = top + (160.0 * top.max(1.0)).sqrt() + 20.0;
    let m = m.ceil() as usize;
    m + (m % 2)
}

/// Hankel's expansion `H_nu(x) ~ sqrt(2/(pi x)) (P + iQ) e^{i chi}`.
fn asymptotic_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..80 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (8.0 * kf * x);
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        // signs: k=1 -> +Q, k=2 -> -P, k=3 -> -Q, k=4 -> +P, ...
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn jy01_asymptotic(x: f64) -> Jy01 {
    let amp = (FRAC_2_PI / x).sqrt();
    let (s, c) = x.sin_cos();
    // chi0 = x - pi/4, chi1 = x - 3pi/4
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (sin0, cos0) = (r * (s - c), r * (c + s));
    let (sin1, cos1) = (r * (-s - c), r * (s - c));
    let (p0, q0) = asymptotic_pq(0.0, x);
    let (p1, q1) = asymptotic_pq(1.0, x);
    Jy01 {
        j0: amp * (p0 * cos0 - q0 * sin0),
        y0: amp * (p0 * sin0 + q0 * cos0),
        j1: amp * (p1 * cos1 - q1 * sin1),
        y1: amp * (p1 * sin1 + q1 * cos1),
    }
}

/// `J_0(x) .. J_nmax(x)` by Miller's algorithm.
pub fn bessel_j_seq(nmax: usize, x: f64) -> Vec<f64> {
    debug_assert!(x > 0.0);
    let m = miller_start(nmax as i32, x);
    let two_over_x = 2.0 / x;
    let mut out = vec![0.0; nmax + 1];
    let mut above = 0.0;
    let mut cur = 1e-30;
    let mut even_sum = 0.0;
    let mut j = m;
    loop {
        if j <= nmax {
            out[j] = cur;
        }
        if j % 2 == 0 && j > 0 {
            even_sum += cur;
        }
        if j == 0 {
            break;
        }
        let below = j as f64 * two_over_x * cur - above;
        above = cur;
        cur = below;
        j -= 1;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            above /= RESCALE;
            even_sum /= RESCALE;
            for v in out.iter_mut().skip(j + 1) {
                *v /= RESCALE;
            }
        }
    }
    let norm = 1.0 / (cur + 2.0 * even_sum);
    for v in &mut out {
        *v *= norm;
    }
    out
}

/// `Y_0(x) .. Y_nmax(x)` by forward recurrence; errors if a value overflows.
pub fn bessel_y_seq(nmax: usize, x: f64) -> Result<Vec<f64>> {
    let base = jy01(x);
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(base.y0);
    if nmax >= 1 {
        out.push(base.y1);
    }
    for n in 1..nmax {
        let next = 2.0 * n as f64 / x * out[n] - out[n - 1];
        if !next.is_finite() {
            return Err(Error::Overflow { function: "bessel_y", order: n as i32 + 1, x });
        }
        out.push(next);
    }
    Ok(out)
}

fn reflect(n: i32, v: f64) -> f64 {
    if n < 0 && n % 2 != 0 {
        -v
    } else {
        v
    }
}

pub fn bessel_j(n: i32, x: f64) -> Result<f64> {
    check_args("bessel_j", n, x)?;
    let na = n.unsigned_abs() as usize;
    let v = if na <= 1 {
        let b = jy01(x);
        if na == 0 {
            b.j0
        } else {
            b.j1
        }
    } else {
        bessel_j_seq(na, x)[na]
    };
    Ok(reflect(n, v))
}

pub fn bessel_y(n: i32, x: f64) -> Result<f64> {
    check_args("bessel_y", n, x)?;
    let na = n.unsigned_abs() as usize;
    Ok(reflect(n, bessel_y_seq(na, x)?[na]))
}

/// `H_n^(1)(x) = J_n(x) + i Y_n(x)`, with `H_{-n} = (-1)^n H_n`.
pub fn hankel1(n: i32, x: f64) -> Result<Complex64> {
    check_args("hankel1", n, x)?;
    let na = n.unsigned_abs() as usize;
    let (j, y) = if na <= 1 {
        let b = jy01(x);
        if na == 0 {
            (b.j0, b.y0)
        } else {
            (b.j1, b.y1)
        }
    } else {
        (bessel_j_seq(na, x)[na], bessel_y_seq(na, x)?[na])
    };
    Ok(Complex64::new(reflect(n, j), reflect(n, y)))
}

/// `H_n^(1)'(x) = H_{n-1}(x) - (n/x) H_n(x)`.
pub fn hankel1_deriv(n: i32, x: f64) -> Result<Complex64> {
    if n == 0 {
        return Ok(-hankel1(1, x)?);
    }
    let h = hankel1(n, x)?;
    let hm = hankel1(n - 1, x)?;
    let d = hm - h * (n as f64 / x);
    if !(d.re.is_finite() && d.im.is_finite()) {
        return Err(Error::Overflow { function: "hankel1_deriv", order: n, x });
    }
    Ok(d)
}
