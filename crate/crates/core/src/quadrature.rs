//! Globally adaptive Gauss–Kronrod (7/15) quadrature of complex-valued
//! integrands over finite intervals.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
/// Gauss weights for the odd-indexed Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral value with its estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature<T> {
    pub value: Complex<T>,
    pub error: T,
    pub evaluations: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
}

fn gauss_kronrod<T: Real, F>(f: &mut F, a: T, b: T) -> Result<Panel<T>>
where
    F: FnMut(T) -> Result<Complex<T>>,
{
    let half = (b - a) / lit(2.0);
    let mid = a + half;
    let mut kronrod = Complex::<T>::zero();
    let mut gauss = Complex::<T>::zero();
    for i in 0..8 {
        let dx = half * lit::<T>(XGK[i]);
        let sum = if i == 7 {
            f(mid)?
        } else {
            f(mid - dx)? + f(mid + dx)?
        };
        kronrod = kronrod + sum * lit::<T>(WGK[i]);
        if i % 2 == 1 {
            gauss = gauss + sum * lit::<T>(WG[i / 2]);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Ok(Panel { a, b, value, error })
}

/// Integrates `f` over the union of `intervals`, bisecting the panel with the
/// largest error estimate until the summed estimate is at most `abs_tol`.
///
/// Fails with a quadrature error if `max_panels` panels do not suffice or the
/// integrand produces a non-finite value.
pub fn integrate<T: Real, F>(
    mut f: F,
    intervals: &[(T, T)],
    abs_tol: T,
    max_panels: usize,
) -> Result<Quadrature<T>>
where
    F: FnMut(T) -> Result<Complex<T>>,
{
    let mut panels = Vec::with_capacity(intervals.len());
    for &(a, b) in intervals {
        panels.push(gauss_kronrod(&mut f, a, b)?);
    }
    let mut evaluations = 15 * panels.len();
    loop {
        let error = panels.iter().fold(T::zero(), |acc, p| acc + p.error);
        let value = panels
            .iter()
            .fold(Complex::<T>::zero(), |acc, p| acc + p.value);
        if !(value.re.is_finite() && value.im.is_finite() && error.is_finite()) {
            return Err(Error::Quadrature(
                "integrand produced a non-finite value".into(),
            ));
        }
        if error <= abs_tol {
            return Ok(Quadrature {
                value,
                error,
                evaluations,
            });
        }
        if panels.len() >= max_panels {
            return Err(Error::Quadrature(format!(
                "error estimate {error} above {abs_tol} after {max_panels} panels"
            )));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| {
                x.1.error
                    .partial_cmp(&y.1.error)
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = (p.a + p.b) / lit(2.0);
        if !(mid > p.a && mid < p.b) {
            return Err(Error::Quadrature(
                "panel width reached machine resolution".into(),
            ));
        }
        panels.push(gauss_kronrod(&mut f, p.a, mid)?);
        panels.push(gauss_kronrod(&mut f, mid, p.b)?);
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        let q = integrate(
            |t: f64| Ok(C::new(t.powi(9), 2.0 * t)),
            &[(0.0, 2.0)],
            1e-12,
            1,
        )
        .unwrap();
        assert!((q.value - C::new(102.4, 4.0)).norm() < 1e-12);
        assert_eq!(q.evaluations, 15);
    }

    #[test]
    fn adapts_to_a_peak() {
        let q = integrate(
            |t: f64| Ok(C::new(1.0 / (1e-4 + t * t), 0.0)),
            &[(-1.0, 1.0)],
            1e-10,
            500,
        )
        .unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((q.value.re - exact).abs() < 1e-9);
    }

    #[test]
    fn oscillatory_complex_integrand() {
        let q = integrate(
            |t: f64| Ok(C::new(0.0, 5.0 * t).exp()),
            &[(0.0, 1.0), (1.0, 3.0)],
            1e-12,
            200,
        )
        .unwrap();
        let exact = (C::new(0.0, 15.0).exp() - 1.0) / C::new(0.0, 5.0);
        assert!((q.value - exact).norm() < 1e-11);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let err = integrate(
            |t: f64| Ok(C::new(t.abs().sqrt().recip(), 0.0)),
            &[(0.0, 1.0)],
            1e-14,
            4,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Quadrature(_)));
    }

    #[test]
    fn integrand_errors_propagate() {
        let err = integrate(
            |_: f64| Err(Error::Domain("bad".into())),
            &[(0.0, 1.0)],
            1e-8,
            10,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
