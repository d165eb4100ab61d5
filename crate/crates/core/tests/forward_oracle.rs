//! Discrete forward model against composite Gauss-Legendre quadrature of the
//! same volume integral.

mod common;

use std::f64::consts::TAU;

use biharm_core::forward::{kernel, DiscreteSource, Needs};
use biharm_core::geometry::{CartesianGrid, CircleGrid};
use biharm_core::sources::AnalyticSource;
use biharm_core::Point;
use num_complex::Complex64;

/// `u(x)` and `lap u(x)` for S1 by 24 x 24 panels of 12-point Gauss-Legendre.
fn oracle(k: f64, x: Point) -> (Complex64, Complex64) {
    let (gx, gw) = common::gauss_legendre(12);
    let panels = 24;
    let h = 1.0 / panels as f64;
    let mut nodes = Vec::new();
    for p in 0..panels {
        let lo = -0.5 + p as f64 * h;
        for (t, w) in gx.iter().zip(&gw) {
            nodes.push((lo + 0.5 * h * (t + 1.0), 0.5 * h * w));
        }
    }
    let (mut u, mut lap) = (Complex64::default(), Complex64::default());
    for &(y1, w1) in &nodes {
        for &(y2, w2) in &nodes {
            let y = Point::new(y1, y2);
            let s = AnalyticSource::S1.eval(y) * w1 * w2;
            let kv = kernel(k, x, y, Needs::DIRICHLET).unwrap();
            u += kv.g * s;
            lap += kv.lap_g * s;
        }
    }
    (u, lap)
}

#[test]
fn s1_field_on_measurement_circle() {
    let k = TAU;
    let circle = CircleGrid::full(0.8, 8).unwrap();
    let source = DiscreteSource::new(&AnalyticSource::S1.into(), &CartesianGrid::new(1.0, 201).unwrap()).unwrap();
    let trace = source.radiate(k, &circle, false).unwrap();
    let scale = trace.u().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale_lap = trace.lap_u().iter().map(|z| z.norm()).fold(0.0, f64::max);
    for j in 0..circle.angle_count() {
        let (u, lap) = oracle(k, circle.point(j));
        assert!((trace.u()[j] - u).norm() <= 1e-4 * scale, "u at angle {j}: {} vs {u}", trace.u()[j]);
        assert!((trace.lap_u()[j] - lap).norm() <= 1e-4 * scale_lap, "lap u at angle {j}");
    }
}
