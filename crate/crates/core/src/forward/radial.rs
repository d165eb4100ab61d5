//! Piecewise Chebyshev tables of the radial kernel parts at a fixed `k`.
//!
//! The traces need the kernel at tens of millions of distances per
//! wavenumber, all inside `[R - max|y|, R + max|y|]`. Tabulating
//! `J_n(kr)`, `Y_n(kr)` and `(2/pi) K_n(kr)` on panels no wider than `1/k`
//! (and no wider than half the distance to the origin, to respect the
//! logarithmic singularity) gives close to double precision at a fraction
//! of the cost of direct evaluation.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::specfun::{jy01, k01_scaled};

const NODES: usize = 16;

/// `M` real functions of `r`, tabulated on uniform panels.
#[derive(Debug, Clone)]
pub(crate) struct RadialTable<const M: usize> {
    r0: f64,
    inv_width: f64,
    coeffs: Vec<[[f64; M]; NODES]>,
}

impl<const M: usize> RadialTable<M> {
    pub(crate) fn new(r_lo: f64, r_hi: f64, k: f64, f: impl Fn(f64) -> [f64; M]) -> Self {
        debug_assert!(r_lo > 0.0 && r_hi >= r_lo);
        let span = (r_hi - r_lo).max(r_lo * 1e-6);
        let width = (1.0 / k).min(0.5 * r_lo).min(span);
        let panels = (span / width).ceil() as usize;
        let width = span / panels as f64;
        let nodes: [f64; NODES] = std::array::from_fn(|j| (PI * (j as f64 + 0.5) / NODES as f64).cos());
        let coeffs = (0..panels)
            .map(|p| {
                let a = r_lo + p as f64 * width;
                let values: [[f64; M]; NODES] = std::array::from_fn(|j| f(a + 0.5 * width * (nodes[j] + 1.0)));
                std::array::from_fn(|n| {
                    let mut c = [0.0; M];
                    for (j, v) in values.iter().enumerate() {
                        let t = (PI * n as f64 * (j as f64 + 0.5) / NODES as f64).cos();
                        for m in 0..M {
                            c[m] += v[m] * t;
                        }
                    }
                    let scale = if n == 0 { 1.0 } else { 2.0 } / NODES as f64;
                    c.map(|x| x * scale)
                })
            })
            .collect();
        Self { r0: r_lo, inv_width: 1.0 / width, coeffs }
    }

    #[inline]
    pub(crate) fn eval(&self, r: f64) -> [f64; M] {
        let s = (r - self.r0) * self.inv_width;
        let p = (s.max(0.0) as usize).min(self.coeffs.len() - 1);
        let t = 2.0 * (s - p as f64) - 1.0;
        let c = &self.coeffs[p];
        let mut b1 = [0.0; M];
        let mut b2 = [0.0; M];
        let t2 = 2.0 * t;
        for n in (1..NODES).rev() {
            for m in 0..M {
                let b = c[n][m] + t2 * b1[m] - b2[m];
                b2[m] = b1[m];
                b1[m] = b;
            }
        }
        std::array::from_fn(|m| c[0][m] + t * b1[m] - b2[m])
    }

    #[cfg(test)]
    pub(crate) fn panel_width(&self) -> f64 {
        1.0 / self.inv_width
    }
}

/// `[J0, Y0, (2/pi) K0]` at `z = kr`.
pub(crate) fn order0(k: f64) -> impl Fn(f64) -> [f64; 3] {
    move |r| {
        let z = k * r;
        let b = jy01(z);
        let (k0s, _) = k01_scaled(z);
        [b.j0, b.y0, FRAC_2_PI * k0s * (-z).exp()]
    }
}

/// `[J0, Y0, (2/pi) K0, J1, Y1, (2/pi) K1]` at `z = kr`.
pub(crate) fn order01(k: f64) -> impl Fn(f64) -> [f64; 6] {
    move |r| {
        let z = k * r;
        let b = jy01(z);
        let (k0s, k1s) = k01_scaled(z);
        let d = FRAC_2_PI * (-z).exp();
        [b.j0, b.y0, k0s * d, b.j1, b.y1, k1s * d]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_reproduces_direct_values() {
        for &(k, lo, hi) in &[(1e-3 * std::f64::consts::TAU, 0.09, 1.51), (6.0, 0.09, 2.8), (178.0, 0.09, 1.51), (14.8, 0.75, 10.3)] {
            let f = order01(k);
            let t = RadialTable::new(lo, hi, k, &f);
            assert!(t.panel_width() <= 1.0 / k + 1e-15);
            for i in 0..=997 {
                let r = lo + (hi - lo) * i as f64 / 997.0;
                let (want, got) = (f(r), t.eval(r));
                // J and Y relative to the Hankel modulus, K relative to itself.
                let h0 = want[0].hypot(want[1]);
                let h1 = want[3].hypot(want[4]);
                let scale = [h0, h0, want[2], h1, h1, want[5]];
                for m in 0..6 {
                    let err = (want[m] - got[m]).abs();
                    assert!(err <= 1e-13 * scale[m], "k={k} r={r} m={m}: {} vs {}", want[m], got[m]);
                }
            }
        }
    }
}
