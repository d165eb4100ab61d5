//! Oracles shared by the integration tests and the acceptance runner.
//! Each check returns a one-line summary on success and the first violation otherwise.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use biharm_core::specfun::{
    bessel_j, bessel_j_seq, bessel_k, bessel_y_seq, hankel1, hankel_transfer, log_bessel_k, modk_transfer,
};
use biharm_core::trace::CauchyTrace;
use num_complex::Complex64;

pub type Check = Result<String, String>;

pub const GOLDEN_TOL: f64 = 1e-10;

pub struct Row {
    pub n: i32,
    pub x: f64,
    pub re: f64,
    pub im: f64,
}

pub fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn rows(name: &str) -> Vec<Row> {
    fixture(name)
        .lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            Row { n: f[0].parse().unwrap(), x: f[1].parse().unwrap(), re: f[2].parse().unwrap(), im: f[3].parse().unwrap() }
        })
        .collect()
}

/// Orders 0..=64 against 41 log-spaced arguments in [1e-3, 500].
pub fn lattice() -> Vec<(i32, f64)> {
    let mut out = Vec::new();
    for n in 0..=64 {
        for e in 0..=40 {
            out.push((n, 1e-3 * (500.0f64 / 1e-3).powf(e as f64 / 40.0)));
        }
    }
    out
}

pub fn golden_hankel1() -> Check {
    let mut worst = 0.0f64;
    let rows = rows("hankel1.csv");
    for r in &rows {
        let h = hankel1(r.n, r.x).map_err(|e| e.to_string())?;
        let want = Complex64::new(r.re, r.im);
        let rel = (h - want).norm() / want.norm();
        worst = worst.max(rel);
        if rel > GOLDEN_TOL {
            return Err(format!("H_{}({}) = {h}, want {want}, rel {rel:e}", r.n, r.x));
        }
    }
    Ok(format!("H1: {} points, worst rel {worst:.1e}", rows.len()))
}

/// `J` alone, away from its zeros where relative accuracy is meaningful.
pub fn golden_bessel_j() -> Check {
    let mut count = 0;
    for r in rows("hankel1.csv") {
        if r.re.abs() < 1e-3 * r.im.abs().min(1.0) {
            continue;
        }
        let j = bessel_j(r.n, r.x).map_err(|e| e.to_string())?;
        let rel = ((j - r.re) / r.re).abs();
        if rel > GOLDEN_TOL {
            return Err(format!("J_{}({}) = {j:e}, want {:e}", r.n, r.x, r.re));
        }
        count += 1;
    }
    Ok(format!("J: {count} points"))
}

pub fn golden_bessel_k() -> Check {
    let mut worst = 0.0f64;
    let rows = rows("bessel_k.csv");
    for r in &rows {
        let k = bessel_k(r.n, r.x).map_err(|e| e.to_string())?;
        let rel = ((k - r.re) / r.re).abs();
        worst = worst.max(rel);
        if rel > GOLDEN_TOL || k <= 0.0 {
            return Err(format!("K_{}({}) = {k:e}, want {:e}, rel {rel:e}", r.n, r.x, r.re));
        }
    }
    Ok(format!("K: {} points, worst rel {worst:.1e}", rows.len()))
}

pub fn golden_log_bessel_k() -> Check {
    let rows = rows("log_bessel_k.csv");
    for r in &rows {
        let l = log_bessel_k(r.n, r.x).map_err(|e| e.to_string())?;
        if (l - r.re).abs() / r.re.abs().max(1.0) > GOLDEN_TOL {
            return Err(format!("ln K_{}({}) = {l}, want {}", r.n, r.x, r.re));
        }
    }
    Ok(format!("ln K: {} points", rows.len()))
}

pub fn golden_transfer() -> Check {
    let text = fixture("transfer.csv");
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let p = |i: usize| f[i].parse::<f64>().unwrap();
        let n: i32 = f[1].parse().unwrap();
        let value = Complex64::new(p(4), p(5));
        let deriv = Complex64::new(p(6), p(7));
        let t = match f[0] {
            "hankel" => hankel_transfer(n, p(2), p(3)),
            _ => modk_transfer(n, p(2), p(3)),
        }
        .map_err(|e| format!("{line}: {e}"))?;
        let ev = (t.value_ratio - value).norm() / value.norm();
        let ed = (t.deriv_ratio - deriv).norm() / deriv.norm();
        if !(ev <= GOLDEN_TOL && ed <= GOLDEN_TOL) {
            return Err(format!("{line}: value {} deriv {} ({ev:e}, {ed:e})", t.value_ratio, t.deriv_ratio));
        }
    }
    Ok(format!("transfer: {} points", text.lines().count() - 1))
}

/// `K_60(0.005) ~ e^634` overflows; the transfer ratio must not.
pub fn modk_double_overflow() -> Check {
    let t = modk_transfer(60, 0.0126, 0.005).map_err(|e| e.to_string())?;
    let oracle = 8.240_760_774_579_411e-25;
    let rel = ((t.value_ratio.re - oracle) / oracle).abs();
    let leading = (60.0 * (0.005f64 / 0.0126).ln()).exp();
    if !t.value_ratio.is_finite() || !t.deriv_ratio.is_finite() || rel > 1e-8 || (t.value_ratio.re / leading - 1.0).abs() >= 1e-6 {
        return Err(format!("modk_transfer(60, 0.0126, 0.005) = {}, oracle {oracle:e}", t.value_ratio));
    }
    Ok(format!("modk overflow regime rel {rel:.1e}"))
}

pub fn wronskian() -> Check {
    let mut worst = 0.0f64;
    for (n, x) in lattice() {
        let nn = n as usize;
        let j = bessel_j_seq(nn + 1, x);
        let y = bessel_y_seq(nn + 1, x).map_err(|e| e.to_string())?;
        let expect = 2.0 / (PI * x);
        // J_n Y_{n+1} - J_{n+1} Y_n = -2/(pi x)
        let w1 = ((j[nn] * y[nn + 1] - j[nn + 1] * y[nn] + expect) / expect).abs();
        // J_n Y_n' - J_n' Y_n = 2/(pi x), with F_n' = F_{n-1} - (n/x) F_n
        let w2 = if n >= 1 {
            let dj = j[nn - 1] - n as f64 / x * j[nn];
            let dy = y[nn - 1] - n as f64 / x * y[nn];
            ((j[nn] * dy - dj * y[nn] - expect) / expect).abs()
        } else {
            0.0
        };
        worst = worst.max(w1).max(w2);
        if w1 > 1e-10 || w2 > 1e-10 {
            return Err(format!("Wronskian n={n} x={x}: {w1:e}, {w2:e}"));
        }
    }
    Ok(format!("Wronskian worst {worst:.1e}"))
}

/// Three-term recurrences, residuals relative to the largest term.
pub fn recurrences() -> Check {
    let scale = |a: f64, b: f64, m: f64| a.abs().max(b.abs()).max(m.abs());
    let mut worst = 0.0f64;
    for (n, x) in lattice() {
        if n == 0 {
            continue;
        }
        let nn = n as usize;
        let j = bessel_j_seq(nn + 1, x);
        let y = bessel_y_seq(nn + 1, x).map_err(|e| e.to_string())?;
        let c = 2.0 * n as f64 / x;
        let rj = (j[nn - 1] + j[nn + 1] - c * j[nn]).abs() / scale(j[nn - 1], j[nn + 1], c * j[nn]);
        let ry = (y[nn - 1] + y[nn + 1] - c * y[nn]).abs() / scale(y[nn - 1], y[nn + 1], c * y[nn]);
        let rk = match (bessel_k(n - 1, x), bessel_k(n, x), bessel_k(n + 1, x)) {
            (Ok(km), Ok(k), Ok(kp)) => (kp - km - c * k).abs() / scale(km, kp, c * k),
            _ => 0.0,
        };
        worst = worst.max(rj).max(ry).max(rk);
        if rj > 1e-9 || ry > 1e-9 || rk > 1e-9 {
            return Err(format!("recurrence n={n} x={x}: J {rj:e}, Y {ry:e}, K {rk:e}"));
        }
    }
    Ok(format!("recurrence worst {worst:.1e}"))
}

fn rel_inf(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let den = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    num / den
}

/// Largest relative sup-norm discrepancy over the four Cauchy components.
pub fn cauchy_rel_error(lifted: &CauchyTrace<f64>, direct: &CauchyTrace<f64>) -> f64 {
    [
        rel_inf(lifted.u(), direct.u()),
        rel_inf(lifted.lap_u(), direct.lap_u()),
        rel_inf(lifted.dnu_u().unwrap(), direct.dnu_u().unwrap()),
        rel_inf(lifted.dnu_lap_u().unwrap(), direct.dnu_lap_u().unwrap()),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for m in 2..=n {
                let p2 = ((2 * m - 1) as f64 * z * p1 - (m - 1) as f64 * p0) / m as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// `(1/a^2) int_{V0} f(x) e^{-i (2 pi / a) l.x} dx` by composite Gauss-Legendre
/// quadrature, `panels` panels of `order` nodes per axis.
pub fn fourier_coefficient_oracle(f: impl Fn(f64, f64) -> f64, l: (f64, f64), a: f64, panels: usize, order: usize) -> Complex64 {
    let (gx, gw) = gauss_legendre(order);
    let h = a / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = -a / 2.0 + p as f64 * h;
        for (x, w) in gx.iter().zip(&gw) {
            nodes.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
        }
    }
    let c = TAU / a;
    let mut sum = Complex64::default();
    for &(x1, w1) in &nodes {
        for &(x2, w2) in &nodes {
            sum += Complex64::from_polar(f(x1, x2) * w1 * w2, -c * (l.0 * x1 + l.1 * x2));
        }
    }
    sum / (a * a)
}
