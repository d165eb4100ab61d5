//! Synthetic data: the radiated field of a source and its traces on a circle,
//! by midpoint quadrature of the biharmonic fundamental solution
//! `G = i/(8k^2) (H0(kr) - H0(ikr)) = i/(8k^2) (H0(kr) + (2i/pi) K0(kr))`.

use std::f64::consts::{FRAC_2_PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{CartesianGrid, CircleGrid, Point2};
use crate::sources::SourceSpec;
use crate::specfun::{jy01, k01_scaled};
use crate::trace::CauchyTrace;

mod radial;

use radial::RadialTable;

/// Default guard on `|x - y|` below which the kernel is not evaluated.
pub const DEFAULT_R_MIN: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which kernel components to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Needs {
    pub value: bool,
    pub laplacian: bool,
    pub gradient: bool,
    pub gradient_laplacian: bool,
}

impl Needs {
    /// `G` and `Lap G`: what the measurements consist of.
    pub const DIRICHLET: Needs = Needs { value: true, laplacian: true, gradient: false, gradient_laplacian: false };
    pub const ALL: Needs = Needs { value: true, laplacian: true, gradient: true, gradient_laplacian: true };

    fn first_order(&self) -> bool {
        self.gradient || self.gradient_laplacian
    }
}

/// `G(x, y, k)` and derivatives in `x`. Components not requested are zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KernelValue {
    pub g: Complex64,
    pub lap_g: Complex64,
    pub grad_g: [Complex64; 2],
    pub grad_lap_g: [Complex64; 2],
}

/// Radial parts `(H0 + (2i/pi)K0, H0 - (2i/pi)K0, H1 + (2i/pi)K1, H1 - (2i/pi)K1)` at `z = kr`.
#[inline]
fn radial(z: f64, first_order: bool) -> [Complex64; 4] {
    let b = jy01(z);
    let (k0s, k1s) = k01_scaled(z);
    let decay = (-z).exp();
    let mk0 = FRAC_2_PI * k0s * decay;
    let h0 = b.h0();
    let mut out = [h0 + I * mk0, h0 - I * mk0, Complex64::default(), Complex64::default()];
    if first_order {
        let mk1 = FRAC_2_PI * k1s * decay;
        let h1 = b.h1();
        out[2] = h1 + I * mk1;
        out[3] = h1 - I * mk1;
    }
    out
}

pub fn kernel(k: f64, x: Point2<f64>, y: Point2<f64>, needs: Needs) -> Result<KernelValue> {
    kernel_guarded(k, x, y, needs, DEFAULT_R_MIN)
}

pub fn kernel_guarded(k: f64, x: Point2<f64>, y: Point2<f64>, needs: Needs, r_min: f64) -> Result<KernelValue> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::invalid(format!("wavenumber must be positive, got {k}")));
    }
    let d1 = x.x1 - y.x1;
    let d2 = x.x2 - y.x2;
    let r = (d1 * d1 + d2 * d2).sqrt();
    if !(r > r_min) {
        return Err(Error::Geometry(format!("kernel evaluated at |x - y| = {r} <= {r_min}")));
    }
    Ok(kernel_at(k, r, [d1 / r, d2 / r], needs))
}

#[inline]
fn kernel_at(k: f64, r: f64, unit: [f64; 2], needs: Needs) -> KernelValue {
    let [plus0, minus0, plus1, minus1] = radial(k * r, needs.first_order());
    let mut out = KernelValue::default();
    if needs.value {
        out.g = I / (8.0 * k * k) * plus0;
    }
    if needs.laplacian {
        out.lap_g = -I / 8.0 * minus0;
    }
    if needs.gradient {
        let dr = -I / (8.0 * k) * plus1;
        out.grad_g = [dr * unit[0], dr * unit[1]];
    }
    if needs.gradient_laplacian {
        let dr = I * k / 8.0 * minus1;
        out.grad_lap_g = [dr * unit[0], dr * unit[1]];
    }
    out
}

/// A source discretised for midpoint quadrature: nodes with weight `S(y_m) h^2`.
/// Exactly-zero samples are dropped.
#[derive(Debug, Clone)]
pub struct DiscreteSource {
    side: f64,
    nodes: Vec<Point2<f64>>,
    weights: Vec<f64>,
}

impl DiscreteSource {
    pub fn new(spec: &SourceSpec<f64>, quad_grid: &CartesianGrid<f64>) -> Result<Self> {
        let values = spec.sample(quad_grid)?;
        Ok(Self::from_samples(quad_grid, &values))
    }

    pub fn from_samples(quad_grid: &CartesianGrid<f64>, values: &[f64]) -> Self {
        let w = quad_grid.cell_area();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (p, &v) in quad_grid.points().iter().zip(values) {
            if v != 0.0 {
                nodes.push(*p);
                weights.push(v * w);
            }
        }
        Self { side: quad_grid.side(), nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Field and requested derivatives at one exterior point.
    pub fn field_at(&self, k: f64, x: Point2<f64>, needs: Needs) -> KernelValue {
        let mut acc = KernelValue::default();
        for (y, &w) in self.nodes.iter().zip(&self.weights) {
            let d1 = x.x1 - y.x1;
            let d2 = x.x2 - y.x2;
            let r = (d1 * d1 + d2 * d2).sqrt();
            let kv = kernel_at(k, r, [d1 / r, d2 / r], needs);
            acc.g += kv.g * w;
            acc.lap_g += kv.lap_g * w;
            for c in 0..2 {
                acc.grad_g[c] += kv.grad_g[c] * w;
                acc.grad_lap_g[c] += kv.grad_lap_g[c] * w;
            }
        }
        acc
    }

    /// Traces on `circle`; `full` adds the normal derivatives with `nu = x/|x|`.
    pub fn radiate(&self, k: f64, circle: &CircleGrid<f64>, full: bool) -> Result<CauchyTrace<f64>> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::invalid(format!("wavenumber must be positive, got {k}")));
        }
        let limit = self.side * SQRT_2 / 2.0;
        if !(circle.radius() > limit) {
            return Err(Error::Geometry(format!(
                "measurement circle radius {} does not enclose the source square (needs > {limit})",
                circle.radius()
            )));
        }
        let n = circle.angle_count();
        let zeros = vec![Complex64::default(); n];
        let y_max = self.nodes.iter().map(|p| p.norm()).fold(0.0, f64::max);
        if self.is_empty() {
            return if full {
                CauchyTrace::full(k, circle.clone(), zeros.clone(), zeros.clone(), zeros.clone(), zeros)
            } else {
                CauchyTrace::dirichlet(k, circle.clone(), zeros.clone(), zeros)
            };
        }
        let radius = circle.radius();
        let (lo, hi) = ((radius - y_max) * (1.0 - 1e-12), (radius + y_max) * (1.0 + 1e-12));
        let k2 = k * k;
        if !full {
            let table = RadialTable::new(lo, hi, k, radial::order0(k));
            let sums: Vec<[f64; 3]> = (0..n)
                .into_par_iter()
                .map(|j| {
                    let x = circle.point(j);
                    let mut acc = [0.0; 3];
                    for (y, &w) in self.nodes.iter().zip(&self.weights) {
                        let (d1, d2) = (x.x1 - y.x1, x.x2 - y.x2);
                        let f = table.eval((d1 * d1 + d2 * d2).sqrt());
                        for m in 0..3 {
                            acc[m] += w * f[m];
                        }
                    }
                    acc
                })
                .collect();
            // g = i/(8k^2) (J0 + i(Y0 + K0')), Lap g = -(i/8)(J0 + i(Y0 - K0')), K0' = (2/pi) K0.
            let u = sums.iter().map(|[sj, sy, sk]| Complex64::new(-(sy + sk), *sj) / (8.0 * k2)).collect();
            let lap_u = sums.iter().map(|[sj, sy, sk]| Complex64::new(sy - sk, -sj) / 8.0).collect();
            return CauchyTrace::dirichlet(k, circle.clone(), u, lap_u);
        }
        let table = RadialTable::new(lo, hi, k, radial::order01(k));
        let sums: Vec<[f64; 6]> = (0..n)
            .into_par_iter()
            .map(|j| {
                let x = circle.point(j);
                let mut acc = [0.0; 6];
                for (y, &w) in self.nodes.iter().zip(&self.weights) {
                    let (d1, d2) = (x.x1 - y.x1, x.x2 - y.x2);
                    let r = (d1 * d1 + d2 * d2).sqrt();
                    let f = table.eval(r);
                    // nu . (x - y)/r with nu = x/|x|
                    let cos_angle = (d1 * x.x1 + d2 * x.x2) / (r * radius);
                    for m in 0..3 {
                        acc[m] += w * f[m];
                        acc[m + 3] += w * f[m + 3] * cos_angle;
                    }
                }
                acc
            })
            .collect();
        let u = sums.iter().map(|s| Complex64::new(-(s[1] + s[2]), s[0]) / (8.0 * k2)).collect();
        let lap_u = sums.iter().map(|s| Complex64::new(s[1] - s[2], -s[0]) / 8.0).collect();
        // dnu g = -(i/(8k))(J1 + i(Y1 + K1')), dnu Lap g = (ik/8)(J1 + i(Y1 - K1')), each times nu.(x-y)/r.
        let dnu_u = sums.iter().map(|s| Complex64::new(s[4] + s[5], -s[3]) / (8.0 * k)).collect();
        let dnu_lap_u = sums.iter().map(|s| Complex64::new(-(s[4] - s[5]), s[3]) * (k / 8.0)).collect();
        CauchyTrace::full(k, circle.clone(), u, lap_u, dnu_u, dnu_lap_u)
    }
}

/// `u(x) = sum_m G(x, y_m, k) S(y_m) h^2` and its traces on `circle`.
pub fn radiate_trace(
    spec: &SourceSpec<f64>,
    k: f64,
    circle: &CircleGrid<f64>,
    quad_grid: &CartesianGrid<f64>,
    full: bool,
) -> Result<CauchyTrace<f64>> {
    DiscreteSource::new(spec, quad_grid)?.radiate(k, circle, full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sources::AnalyticSource;
    use approx::assert_relative_eq;

    fn origin() -> Point2<f64> {
        Point2::new(0.0, 0.0)
    }

    #[test]
    fn kernel_at_unit_distance() {
        let kv = kernel(1.0, Point2::new(1.0, 0.0), origin(), Needs::ALL).unwrap();
        assert_relative_eq!(kv.g.re, -0.044_536_180_781_208_19, max_relative = 1e-12);
        assert_relative_eq!(kv.g.im, 0.095_649_710_819_745_82, max_relative = 1e-12);
        assert_relative_eq!(kv.lap_g.re, -0.022_471_939_727_288_95, max_relative = 1e-12);
        assert_relative_eq!(kv.lap_g.im, -0.095_649_710_819_745_82, max_relative = 1e-12);
    }

    #[test]
    fn kernel_is_symmetric_and_guarded() {
        let x = Point2::new(0.3, -1.1);
        let y = Point2::new(-0.2, 0.4);
        let a = kernel(4.2, x, y, Needs::ALL).unwrap();
        let b = kernel(4.2, y, x, Needs::ALL).unwrap();
        assert_eq!(a.g, b.g);
        assert_eq!(a.lap_g, b.lap_g);
        assert!(kernel(1.0, x, x, Needs::ALL).is_err());
        assert!(kernel(0.0, x, y, Needs::ALL).is_err());
    }

    #[test]
    fn kernel_derivatives_match_finite_differences() {
        let k = 3.0;
        let y = Point2::new(0.1, -0.2);
        let x = Point2::new(1.3, 0.7);
        let kv = kernel(k, x, y, Needs::ALL).unwrap();
        let h = 1e-5;
        let at = |dx: f64, dy: f64| kernel(k, Point2::new(x.x1 + dx, x.x2 + dy), y, Needs::ALL).unwrap();
        let g1 = (at(h, 0.0).g - at(-h, 0.0).g) / (2.0 * h);
        let g2 = (at(0.0, h).g - at(0.0, -h).g) / (2.0 * h);
        assert!((g1 - kv.grad_g[0]).norm() < 1e-8);
        assert!((g2 - kv.grad_g[1]).norm() < 1e-8);
        let l1 = (at(h, 0.0).lap_g - at(-h, 0.0).lap_g) / (2.0 * h);
        assert!((l1 - kv.grad_lap_g[0]).norm() < 1e-7);
        let hh = 1e-3;
        let lap = (at(hh, 0.0).g + at(-hh, 0.0).g + at(0.0, hh).g + at(0.0, -hh).g - kv.g * 4.0) / (hh * hh);
        assert!((lap - kv.lap_g).norm() < 1e-5 * kv.lap_g.norm());
    }

    #[test]
    fn biharmonic_residual_shrinks_under_refinement() {
        // 13-point stencil for the bilaplacian applied to G away from the source.
        let k = 2.0;
        let y = origin();
        let x = Point2::new(1.1, 0.6);
        let g = |dx: f64, dy: f64| kernel(k, Point2::new(x.x1 + dx, x.x2 + dy), y, Needs::DIRICHLET).unwrap().g;
        let residual = |h: f64| {
            let b = g(0.0, 0.0) * 20.0
                - (g(h, 0.0) + g(-h, 0.0) + g(0.0, h) + g(0.0, -h)) * 8.0
                + (g(h, h) + g(h, -h) + g(-h, h) + g(-h, -h)) * 2.0
                + g(2.0 * h, 0.0)
                + g(-2.0 * h, 0.0)
                + g(0.0, 2.0 * h)
                + g(0.0, -2.0 * h);
            (b / h.powi(4) - g(0.0, 0.0) * k.powi(4)).norm()
        };
        let scale = g(0.0, 0.0).norm() * k.powi(4);
        let res: Vec<f64> = [0.08, 0.04, 0.02].iter().map(|&h| residual(h)).collect();
        assert!(res[2] < 1e-3 * scale, "{res:?}");
        assert!(res[1] < res[0] / 3.0 && res[2] < res[1] / 3.0, "{res:?}");
    }

    #[test]
    fn zero_and_point_sources() {
        let grid = CartesianGrid::new(1.0, 9).unwrap();
        let circle = CircleGrid::full(0.8, 16).unwrap();
        let zero = SourceSpec::gridded(grid.clone(), vec![0.0; grid.len()]).unwrap();
        let t = radiate_trace(&zero, 5.0, &circle, &grid, true).unwrap();
        assert!(t.u().iter().chain(t.lap_u()).all(|z| *z == Complex64::default()));

        let mut vals = vec![0.0; grid.len()];
        let idx = grid.index(5, 2);
        vals[idx] = 2.5;
        let point = SourceSpec::gridded(grid.clone(), vals).unwrap();
        let t = radiate_trace(&point, 5.0, &circle, &grid, false).unwrap();
        let y0 = grid.points()[idx];
        for j in 0..circle.angle_count() {
            let g = kernel(5.0, circle.point(j), y0, Needs::DIRICHLET).unwrap().g;
            let want = g * (2.5 * grid.cell_area());
            assert!((t.u()[j] - want).norm() <= 1e-13 * want.norm());
        }
    }

    #[test]
    fn tabulated_radiation_matches_direct_summation() {
        let grid = CartesianGrid::new(1.0, 31).unwrap();
        let src = DiscreteSource::new(&AnalyticSource::S2.into(), &grid).unwrap();
        for k in [0.006, 3.0, 40.0, 150.0] {
            for radius in [0.8, 2.0] {
                let circle = CircleGrid::full(radius, 24).unwrap();
                let t = src.radiate(k, &circle, true).unwrap();
                for j in 0..24 {
                    let d = src.field_at(k, circle.point(j), Needs::ALL);
                    let (c, s) = (circle.angles()[j].cos(), circle.angles()[j].sin());
                    let pairs = [
                        (t.u()[j], d.g),
                        (t.lap_u()[j], d.lap_g),
                        (t.dnu_u().unwrap()[j], d.grad_g[0] * c + d.grad_g[1] * s),
                        (t.dnu_lap_u().unwrap()[j], d.grad_lap_g[0] * c + d.grad_lap_g[1] * s),
                    ];
                    // At k ~ 1e-2 the 1/z singularities of Y1 and K1 cancel in dnu_u,
                    // costing about five digits in either evaluation.
                    let tol = if k < 0.1 { 1e-9 } else { 1e-11 };
                    for (m, (got, want)) in pairs.iter().enumerate() {
                        assert!((got - want).norm() <= tol * want.norm(), "k={k} R={radius} j={j} m={m}: {got} vs {want}");
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_circle_inside_the_square() {
        let grid = CartesianGrid::new(1.0, 9).unwrap();
        let circle = CircleGrid::full(0.7, 8).unwrap();
        let s: SourceSpec<f64> = AnalyticSource::S1.into();
        assert!(matches!(radiate_trace(&s, 1.0, &circle, &grid, false), Err(Error::Geometry(_))));
    }

    #[test]
    fn linearity_in_the_source() {
        let grid = CartesianGrid::new(1.0, 21).unwrap();
        let circle = CircleGrid::full(0.8, 12).unwrap();
        let a = SourceSpec::<f64>::from(AnalyticSource::S1).sample(&grid).unwrap();
        let b = SourceSpec::<f64>::from(AnalyticSource::S2).sample(&grid).unwrap();
        let (alpha, beta) = (1.7, -0.4);
        let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| alpha * x + beta * y).collect();
        let ta = DiscreteSource::from_samples(&grid, &a).radiate(6.0, &circle, true).unwrap();
        let tb = DiscreteSource::from_samples(&grid, &b).radiate(6.0, &circle, true).unwrap();
        let tm = DiscreteSource::from_samples(&grid, &mix).radiate(6.0, &circle, true).unwrap();
        for j in 0..12 {
            let want = ta.u()[j] * alpha + tb.u()[j] * beta;
            assert!((tm.u()[j] - want).norm() <= 1e-12 * want.norm());
            let want = ta.dnu_lap_u().unwrap()[j] * alpha + tb.dnu_lap_u().unwrap()[j] * beta;
            assert!((tm.dnu_lap_u().unwrap()[j] - want).norm() <= 1e-12 * want.norm());
        }
    }

    #[test]
    fn laplacian_trace_matches_five_point_stencil() {
        let grid = CartesianGrid::new(1.0, 41).unwrap();
        let src = DiscreteSource::new(&AnalyticSource::S1.into(), &grid).unwrap();
        let k = 7.0;
        let x = Point2::polar(0.9, 0.7);
        let exact = src.field_at(k, x, Needs::DIRICHLET).lap_g;
        let mut errs = Vec::new();
        for h in [0.02, 0.01, 0.005] {
            let u = |dx: f64, dy: f64| src.field_at(k, Point2::new(x.x1 + dx, x.x2 + dy), Needs::DIRICHLET).g;
            let fd = (u(h, 0.0) + u(-h, 0.0) + u(0.0, h) + u(0.0, -h) - u(0.0, 0.0) * 4.0) / (h * h);
            errs.push((fd - exact).norm() / exact.norm());
        }
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
        assert!(errs[2] < 1e-3);
    }

    #[test]
    fn quadrature_refinement_converges() {
        let circle = CircleGrid::full(0.8, 4).unwrap();
        let s: SourceSpec<f64> = AnalyticSource::S1.into();
        let traces: Vec<_> = [25usize, 50, 100, 200]
            .iter()
            .map(|&n| radiate_trace(&s, 6.0, &circle, &CartesianGrid::new(1.0, n).unwrap(), false).unwrap())
            .collect();
        let diff = |a: &CauchyTrace<f64>, b: &CauchyTrace<f64>| {
            a.u().iter().zip(b.u()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
        };
        let d: Vec<f64> = traces.windows(2).map(|w| diff(&w[0], &w[1])).collect();
        assert!(d[1] < d[0] && d[2] < d[1], "{d:?}");
    }
}
