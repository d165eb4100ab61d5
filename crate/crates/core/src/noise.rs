//! Multiplicative noise on measured Dirichlet data:
//! `u' = u + delta r1 |u| e^{i pi r2}`, `lap_u' = lap_u + delta r3 |.| e^{i pi r4}`
//! with `r1..r4` uniform on `[-1, 1]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::CauchyTrace;

/// Which modulus scales the noise on `lap_u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseScaleLap {
    /// `|u|`, as printed for both lines.
    #[default]
    U,
    /// `|lap_u|`.
    LapU,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub delta: f64,
    pub seed: u64,
    #[serde(default)]
    pub scale_lap: NoiseScaleLap,
}

impl NoiseParams {
    pub fn new(delta: f64, seed: u64) -> Result<Self> {
        let p = Self { delta, seed, scale_lap: NoiseScaleLap::U };
        p.validate()?;
        Ok(p)
    }

    pub fn with_scale_lap(mut self, scale_lap: NoiseScaleLap) -> Self {
        self.scale_lap = scale_lap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.delta) {
            return Err(Error::invalid(format!("noise level must lie in [0, 1), got {}", self.delta)));
        }
        Ok(())
    }
}

/// Words of ChaCha output consumed per angle: four `u64` draws.
const WORDS_PER_ANGLE: u128 = 8;

/// The four uniform draws for one `(seed, k, angle)`; the stream is keyed by the
/// bits of `k` and the block position by the angle index, so results do not depend
/// on evaluation order.
pub fn draws(seed: u64, k: f64, angle: usize) -> [f64; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k.to_bits());
    rng.set_word_pos(angle as u128 * WORDS_PER_ANGLE);
    std::array::from_fn(|_| 2.0 * rng.gen::<f64>() - 1.0)
}

pub fn perturb_trace(trace: &CauchyTrace<f64>, p: &NoiseParams) -> Result<CauchyTrace<f64>> {
    p.validate()?;
    if trace.has_normal_derivatives() {
        return Err(Error::invalid("noise applies to Dirichlet data only; trace carries normal derivatives"));
    }
    if p.delta == 0.0 {
        return Ok(trace.clone());
    }
    let k = trace.wavenumber();
    let n = trace.circle().angle_count();
    let mut u = Vec::with_capacity(n);
    let mut lap_u = Vec::with_capacity(n);
    for (j, (&uj, &lj)) in trace.u().iter().zip(trace.lap_u()).enumerate() {
        let [r1, r2, r3, r4] = draws(p.seed, k, j);
        let scale_u = uj.norm();
        let scale_l = match p.scale_lap {
            NoiseScaleLap::U => scale_u,
            NoiseScaleLap::LapU => lj.norm(),
        };
        u.push(uj + Complex64::from_polar(p.delta * r1 * scale_u, PI * r2));
        lap_u.push(lj + Complex64::from_polar(p.delta * r3 * scale_l, PI * r4));
    }
    CauchyTrace::dirichlet(k, trace.circle().clone(), u, lap_u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CircleGrid;

    fn sample_trace(k: f64) -> CauchyTrace<f64> {
        let c = CircleGrid::full(0.8, 16).unwrap();
        let u = (0..16).map(|j| Complex64::new(j as f64 - 3.0, 0.5 * (j as f64 - 3.0))).collect();
        let l = (0..16).map(|j| Complex64::new(-2.0 * j as f64, 1.0)).collect();
        CauchyTrace::dirichlet(k, c, u, l).unwrap()
    }

    #[test]
    fn zero_noise_is_identity() {
        let t = sample_trace(3.0);
        assert_eq!(perturb_trace(&t, &NoiseParams::new(0.0, 9).unwrap()).unwrap(), t);
    }

    #[test]
    fn deterministic_and_bounded() {
        let t = sample_trace(3.0);
        let p = NoiseParams::new(0.2, 42).unwrap();
        let a = perturb_trace(&t, &p).unwrap();
        let b = perturb_trace(&t, &p).unwrap();
        assert_eq!(a, b);
        for (x, y) in a.u().iter().zip(t.u()) {
            assert!((x - y).norm() <= 0.2 * y.norm() * (1.0 + 1e-15));
        }
        // lap_u noise is scaled by |u|, so it vanishes where u does.
        assert_eq!(a.lap_u()[3], t.lap_u()[3]);
        let c = perturb_trace(&t, &p.with_scale_lap(NoiseScaleLap::LapU)).unwrap();
        assert_ne!(c.lap_u()[3], t.lap_u()[3]);
        assert_ne!(perturb_trace(&t, &NoiseParams::new(0.2, 43).unwrap()).unwrap(), a);
    }

    #[test]
    fn draws_depend_on_k_and_angle_but_not_call_order() {
        let a = draws(1, 2.0, 5);
        let _ = draws(1, 2.0, 4);
        assert_eq!(a, draws(1, 2.0, 5));
        assert_ne!(a, draws(1, 2.0, 6));
        assert_ne!(a, draws(1, 2.5, 5));
        assert!(a.iter().all(|r| (-1.0..=1.0).contains(r)));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(NoiseParams::new(1.0, 0).is_err());
        assert!(NoiseParams::new(-0.1, 0).is_err());
        let c = CircleGrid::full(1.0, 2).unwrap();
        let z = vec![Complex64::new(1.0, 0.0); 2];
        let full = CauchyTrace::full(1.0, c, z.clone(), z.clone(), z.clone(), z).unwrap();
        assert!(perturb_trace(&full, &NoiseParams::new(0.1, 0).unwrap()).is_err());
    }
}
