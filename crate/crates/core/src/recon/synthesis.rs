use num_complex::Complex;

use super::coefficients::CoefficientTable;
use crate::geometry::CartesianGrid;
use crate::scalar::Real;

/// Per-axis exponentials `e^{i c m x_j}` for `m = -N..=N`, plus the zero-mode row `e^{i c lambda x_j}`.
fn axis_tables<T: Real>(coeffs: &CoefficientTable, coords: &[T]) -> (Vec<Vec<Complex<T>>>, Vec<Complex<T>>) {
    let c = T::TAU() / T::lit(coeffs.a);
    let n = coeffs.n as i32;
    let rows = (-n..=n)
        .map(|m| {
            let cm = c * T::from_i32(m).unwrap();
            coords.iter().map(|&x| Complex::from_polar(T::one(), cm * x)).collect()
        })
        .collect();
    let cl = c * T::lit(coeffs.lambda);
    let zero = coords.iter().map(|&x| Complex::from_polar(T::one(), cl * x)).collect();
    (rows, zero)
}

fn lit_c<T: Real>(z: num_complex::Complex64) -> Complex<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}

/// Separable evaluation of `sum_l w(l) s_l phi_l` on the grid (x1 fastest),
/// with `w` applied to integer modes and `w0` to the zero mode.
fn separable_sum<T: Real>(
    coeffs: &CoefficientTable,
    grid: &CartesianGrid<T>,
    w: impl Fn(i32, i32) -> Complex<T>,
    w0: Complex<T>,
) -> Vec<Complex<T>> {
    let coords = grid.coords();
    let np = coords.len();
    let n = coeffs.n as i32;
    let (rows, zero_row) = axis_tables(coeffs, coords);
    let mut out = vec![Complex::<T>::default(); np * np];
    // inner[l2][i1] = sum_{l1} w s_{l1,l2} e^{i c l1 x1}
    for l2 in -n..=n {
        let mut inner = vec![Complex::<T>::default(); np];
        for l1 in -n..=n {
            let Some(s) = coeffs.get(l1, l2) else { continue };
            let s = lit_c::<T>(s) * w(l1, l2);
            for (acc, e) in inner.iter_mut().zip(&rows[(l1 + n) as usize]) {
                *acc += s * e;
            }
        }
        let e2 = &rows[(l2 + n) as usize];
        for (i2, e) in e2.iter().enumerate() {
            for (o, v) in out[i2 * np..(i2 + 1) * np].iter_mut().zip(&inner) {
                *o += v * e;
            }
        }
    }
    if let Some(s0) = coeffs.zero_mode() {
        let s0 = lit_c::<T>(s0) * w0;
        for i2 in 0..np {
            for (o, e) in out[i2 * np..(i2 + 1) * np].iter_mut().zip(&zero_row) {
                *o += s0 * e;
            }
        }
    }
    out
}

/// `S_N(x) = s_l0 phi_l0(x) + sum_{1 <= |l|_inf <= N} s_l phi_l(x)` at every grid point.
pub fn synthesize<T: Real>(coeffs: &CoefficientTable, grid: &CartesianGrid<T>) -> Vec<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    separable_sum(coeffs, grid, |_, _| one, one)
}

/// `grad S_N = sum_l s_l i c (l1, l2) phi_l`, with `(lambda, 0)` for the zero mode.
pub fn synthesize_gradient<T: Real>(coeffs: &CoefficientTable, grid: &CartesianGrid<T>) -> Vec<[Complex<T>; 2]> {
    let ic = Complex::new(T::zero(), T::TAU() / T::lit(coeffs.a));
    let f = |m: i32| ic * T::from_i32(m).unwrap();
    let d1 = separable_sum(coeffs, grid, |l1, _| f(l1), ic * T::lit(coeffs.lambda));
    let d2 = separable_sum(coeffs, grid, |_, l2| f(l2), Complex::default());
    d1.into_iter().zip(d2).map(|(a, b)| [a, b]).collect()
}
