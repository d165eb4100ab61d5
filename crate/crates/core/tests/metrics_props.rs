//! Properties of the discrete error norms.

use biharm_core::geometry::CartesianGrid;
use biharm_core::metrics::{fd_gradient, rel_h1, rel_l2};
use num_complex::Complex64;
use proptest::collection::vec;
use proptest::prelude::*;

fn field(n: usize) -> impl Strategy<Value = Vec<f64>> {
    vec(-5.0f64..5.0, n)
}

fn cfield(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    vec((-5.0f64..5.0, -5.0f64..5.0).prop_map(|(a, b)| Complex64::new(a, b)), n)
}

fn norm(v: impl Iterator<Item = f64>) -> f64 {
    v.map(|x| x * x).sum::<f64>().sqrt()
}

proptest! {
    #[test]
    fn l2_is_scale_invariant(exact in field(25), approx in cfield(25), c in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0]) {
        prop_assume!(norm(exact.iter().cloned()) > 1e-3);
        let e = rel_l2(&approx, &exact).unwrap();
        let sa: Vec<Complex64> = approx.iter().map(|z| z * c).collect();
        let se: Vec<f64> = exact.iter().map(|x| x * c).collect();
        prop_assert!((rel_l2(&sa, &se).unwrap() - e).abs() <= 1e-12 * e.max(1.0));
    }

    #[test]
    fn h1_is_scale_invariant(exact in field(25), approx in cfield(25), c in 0.01f64..100.0) {
        prop_assume!(norm(exact.iter().cloned()) > 1e-3);
        let grid = CartesianGrid::new(1.0, 5).unwrap();
        let eg = fd_gradient(&exact, &grid).unwrap();
        let re: Vec<f64> = approx.iter().map(|z| z.re).collect();
        let ag: Vec<[Complex64; 2]> = fd_gradient(&re, &grid).unwrap().iter().map(|g| [g[0].into(), g[1].into()]).collect();
        let e = rel_h1(&approx, &ag, &exact, &eg).unwrap();
        let sa: Vec<Complex64> = approx.iter().map(|z| z * c).collect();
        let sag: Vec<[Complex64; 2]> = ag.iter().map(|g| [g[0] * c, g[1] * c]).collect();
        let se: Vec<f64> = exact.iter().map(|x| x * c).collect();
        let seg: Vec<[f64; 2]> = eg.iter().map(|g| [g[0] * c, g[1] * c]).collect();
        prop_assert!((rel_h1(&sa, &sag, &se, &seg).unwrap() - e).abs() <= 1e-12 * e.max(1.0));
    }

    #[test]
    fn l2_obeys_the_triangle_bound(exact in field(30), a in cfield(30), b in cfield(30)) {
        let ne = norm(exact.iter().cloned());
        prop_assume!(ne > 1e-3);
        let ab = norm(a.iter().zip(&b).map(|(x, y)| (x - y).norm()));
        let be = norm(b.iter().zip(&exact).map(|(x, y)| (x - y).norm()));
        prop_assert!(rel_l2(&a, &exact).unwrap() <= (ab + be) / ne * (1.0 + 1e-12));
    }
}

#[test]
fn h1_matches_an_independent_evaluation() {
    // Second implementation of the same formula with explicit loops.
    let grid = CartesianGrid::<f64>::new(1.0, 9).unwrap();
    let exact: Vec<f64> = grid.points().iter().map(|p| (3.0 * p.x1).sin() * (2.0 * p.x2).cos()).collect();
    let approx: Vec<Complex64> = exact.iter().enumerate().map(|(i, &x)| Complex64::new(1.02 * x, 0.01 * i as f64)).collect();
    let eg = fd_gradient(&exact, &grid).unwrap();
    let ag: Vec<[Complex64; 2]> = eg.iter().map(|g| [Complex64::new(g[0], 0.1), Complex64::new(0.9 * g[1], 0.0)]).collect();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..exact.len() {
        num += (approx[i] - exact[i]).norm_sqr();
        den += exact[i] * exact[i];
        for d in 0..2 {
            num += (ag[i][d] - eg[i][d]).norm_sqr();
            den += eg[i][d] * eg[i][d];
        }
    }
    let want = (num / den).sqrt();
    assert!((rel_h1(&approx, &ag, &exact, &eg).unwrap() - want).abs() <= 1e-12 * want);
}
