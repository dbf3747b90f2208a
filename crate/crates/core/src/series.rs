//! Stable evaluation of the alternating finite differences behind every
//! closed-form q-Euler polynomial.
//!
//! All closed forms in this crate reduce to
//!
//! ```text
//! D_n = (1-q)^{-n} Σ_{l=0}^{n} C(n,l) (-1)^l ψ(l·L),    L = log q,
//! ψ(u) = e^{x u} · N(u)^p · (1 + e^{f u})^{-r},  N(u) = Σ_a w_a e^{a u}.
//!
//! Usually `p = r` and the weights span one period `f`; a single aggregated
//! weight sequence (`p = 1`) is also supported.
//! ```
//!
//! Summed literally, the `n`-th difference cancels catastrophically once
//! `|1 - q|` is small. When `n·|L|` is small against the distance to the
//! nearest pole of ψ, the difference is instead taken through the Taylor
//! expansion of ψ about the midpoint `u0 = nL/2`, where
//! `Σ_l C(n,l)(-1)^l (l - n/2)^m = (-1)^n m! [y^{m-n}] (sinh(y/2)/(y/2))^n`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{from_usize, lit, powu, real, Real};

/// Taylor route is used while `(n/2)|L| / radius` stays below this ratio.
const TAYLOR_RATIO: f64 = 0.6;
const MAX_EXTRA_TERMS: usize = 240;

/// The exponential-polynomial ψ described in the module docs.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ExpKernel<'a, T> {
    x: Complex<T>,
    weights: &'a [Complex<T>],
    power: u32,
    period: usize,
    r: u32,
}

impl<'a, T: Real> ExpKernel<'a, T> {
    /// `N^r (1 + e^{fu})^{-r}` with `f = weights.len()`.
    pub fn new(x: Complex<T>, weights: &'a [Complex<T>], r: u32) -> Self {
        Self {
            x,
            weights,
            power: r,
            period: weights.len(),
            r,
        }
    }

    /// `N (1 + e^{fu})^{-r}` for weights already aggregated over `r`-tuples.
    pub fn aggregated(x: Complex<T>, weights: &'a [Complex<T>], period: usize, r: u32) -> Self {
        Self {
            x,
            weights,
            power: 1,
            period,
            r,
        }
    }

    fn f(&self) -> usize {
        self.period
    }

    fn eval(&self, u: Complex<T>) -> Complex<T> {
        let mut n_u = Complex::<T>::zero();
        for (a, &w) in self.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            n_u = n_u
                + if a == 0 {
                    w
                } else {
                    w * (u * from_usize::<T>(a)).exp()
                };
        }
        let denom = Complex::<T>::one() + (u * from_usize::<T>(self.f())).exp();
        (self.x * u).exp() * powu(n_u, self.power) / powu(denom, self.r)
    }

    /// `(1-q)^{-n} Σ_l C(n,l)(-1)^l ψ(l·log q)` for the given base.
    pub fn scaled_difference(&self, n: u32, q: Complex<T>, log_q: Complex<T>) -> Complex<T> {
        if n > 0 {
            if let Some(v) = self.taylor_difference(n, q, log_q) {
                return v;
            }
        }
        self.direct_difference(n, q, log_q)
    }

    pub(crate) fn direct_difference(&self, n: u32, q: Complex<T>, log_q: Complex<T>) -> Complex<T> {
        let mut sum = Complex::<T>::zero();
        let mut binom = T::one();
        for l in 0..=n {
            if l > 0 {
                binom = binom * from_usize::<T>((n - l + 1) as usize) / from_usize::<T>(l as usize);
            }
            let term = self.eval(log_q * from_usize::<T>(l as usize)) * binom;
            sum = if l % 2 == 0 { sum + term } else { sum - term };
        }
        sum / powu(Complex::<T>::one() - q, n)
    }

    /// Distance from `u0` to the nearest zero of `1 + e^{f u}`.
    fn pole_distance(&self, u0: Complex<T>) -> T {
        let spacing = T::PI() / from_usize::<T>(self.f());
        // zeros at i(2k+1)π/f
        let k = ((u0.im / spacing - T::one()) / lit(2.0)).round();
        let nearest = (k + k + T::one()) * spacing;
        let dy = (u0.im - nearest)
            .abs()
            .min((u0.im - nearest - spacing - spacing).abs());
        let dy = dy.min((u0.im - nearest + spacing + spacing).abs());
        (u0.re * u0.re + dy * dy).sqrt()
    }

    pub(crate) fn taylor_difference(
        &self,
        n: u32,
        q: Complex<T>,
        log_q: Complex<T>,
    ) -> Option<Complex<T>> {
        let nf = from_usize::<T>(n as usize);
        let u0 = log_q * (nf / lit(2.0));
        let ratio = (nf / lit(2.0)) * log_q.norm() / self.pole_distance(u0);
        if !(ratio <= lit(TAYLOR_RATIO)) {
            return None;
        }
        let digits = -lit::<T>(18.0) / ratio.max(lit(1e-3)).log10();
        let extra = (digits.ceil().to_usize()? + 8).min(MAX_EXTRA_TERMS);
        let len = n as usize + extra + 1;

        // Taylor coefficients of τ ↦ ψ(u0 + nLτ)
        let step = log_q * nf;
        let exp_series = |c: T| exp_series_complex(real(c), u0, step, len);
        // exponents centred on the weight range, e^{cu} moved into the x factor
        let centre = from_usize::<T>(self.weights.len() - 1) / lit(2.0);
        let mut numerator = vec![Complex::<T>::zero(); len];
        for (a, &w) in self.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for (acc, e) in numerator
                .iter_mut()
                .zip(exp_series(from_usize::<T>(a) - centre))
            {
                *acc = *acc + w * e;
            }
        }
        let mut denom = exp_series(from_usize(self.f()));
        denom[0] = denom[0] + T::one();
        let ratio_series = if self.power == self.r {
            pow(&mul(&numerator, &reciprocal(&denom)?), self.r)
        } else {
            mul(
                &pow(&numerator, self.power),
                &pow(&reciprocal(&denom)?, self.r),
            )
        };
        let shift = centre * from_usize::<T>(self.power as usize);
        let psi = mul(
            &exp_series_complex(self.x + shift, u0, step, len),
            &ratio_series,
        );

        let gamma = sinhc_power::<T>(n, extra + 1);
        // n! / (n(1-q))^n
        let one_minus_q = Complex::<T>::one() - q;
        let mut scale = real(T::one());
        for j in 1..=n {
            scale = scale * from_usize::<T>(j as usize) / (one_minus_q * nf);
        }
        let mut sum = Complex::<T>::zero();
        let mut rising = T::one();
        for i in 0..=extra {
            if i > 0 {
                rising = rising * (nf + from_usize::<T>(i)) / nf;
            }
            let g = gamma[i];
            if g.is_zero() {
                continue;
            }
            sum = sum + psi[n as usize + i] * (g * rising);
        }
        let value = sum * scale;
        let value = if n % 2 == 1 { -value } else { value };
        (value.re.is_finite() && value.im.is_finite()).then_some(value)
    }
}

fn exp_series_complex<T: Real>(
    c: Complex<T>,
    u0: Complex<T>,
    step: Complex<T>,
    len: usize,
) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(len);
    let mut coef = (u0 * c).exp();
    out.push(coef);
    for m in 1..len {
        coef = coef * step * c / from_usize::<T>(m);
        out.push(coef);
    }
    out
}

fn mul<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    let len = a.len().min(b.len());
    let mut out = vec![Complex::<T>::zero(); len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j] + ai * bj;
        }
    }
    out
}

fn reciprocal<T: Real>(a: &[Complex<T>]) -> Option<Vec<Complex<T>>> {
    if a[0].is_zero() {
        return None;
    }
    let inv0 = a[0].inv();
    let mut out = vec![Complex::<T>::zero(); a.len()];
    out[0] = inv0;
    for m in 1..a.len() {
        let mut acc = Complex::<T>::zero();
        for k in 1..=m {
            acc = acc + a[k] * out[m - k];
        }
        out[m] = -acc * inv0;
    }
    Some(out)
}

fn pow<T: Real>(a: &[Complex<T>], mut r: u32) -> Vec<Complex<T>> {
    let mut acc: Vec<Complex<T>> = vec![Complex::<T>::zero(); a.len()];
    acc[0] = Complex::<T>::one();
    let mut base = a.to_vec();
    while r > 0 {
        if r & 1 == 1 {
            acc = mul(&acc, &base);
        }
        r >>= 1;
        if r > 0 {
            base = mul(&base, &base);
        }
    }
    acc
}

/// Coefficients of `(sinh(y/2)/(y/2))^n` up to `y^{len-1}`.
///
/// All coefficients are positive, so binary powering loses no precision
/// (the usual power recurrence cancels badly at high order).
fn sinhc_power<T: Real>(n: u32, len: usize) -> Vec<T> {
    let mut s = vec![T::zero(); len];
    let mut c = T::one();
    for k in (0..len).step_by(2) {
        if k > 0 {
            c = c / (lit::<T>(4.0) * from_usize::<T>(k * (k + 1)));
        }
        s[k] = c;
    }
    let mut acc = vec![T::zero(); len];
    acc[0] = T::one();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = mul_real(&acc, &s);
        }
        n >>= 1;
        if n > 0 {
            s = mul_real(&s, &s);
        }
    }
    acc
}

fn mul_real<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let len = a.len().min(b.len());
    let mut out = vec![T::zero(); len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j] + ai * bj;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn sinhc_power_matches_direct_expansion() {
        // (sinh(y/2)/(y/2))^2 = 1 + y²/12 + y⁴/360 + ...
        let p = sinhc_power::<f64>(2, 6);
        assert!((p[0] - 1.0).abs() < 1e-16);
        assert_eq!(p[1], 0.0);
        assert!((p[2] - 1.0 / 12.0).abs() < 1e-16);
        assert!((p[4] - 1.0 / 360.0).abs() < 1e-17);
        // n = 3: 1 + y²/8 + 13 y⁴/1920
        let p = sinhc_power::<f64>(3, 6);
        assert!((p[2] - 0.125).abs() < 1e-16);
        assert!((p[4] - 13.0 / 1920.0).abs() < 1e-17);
        // n = 1 is the series itself: y^{2k} / (4^k (2k+1)!), accurate far out
        let p = sinhc_power::<f64>(1, 71);
        let mut expected = 1.0;
        for k in 1..=35 {
            expected /= 4.0 * (2 * k) as f64 * (2 * k + 1) as f64;
            assert!((p[2 * k] / expected - 1.0).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn taylor_route_near_its_limit() {
        // ratio close to the cutoff, many Taylor terms
        let weights: Vec<C> = [1.0, -1.0, 1.0].iter().map(|&v| C::new(v, 0.0)).collect();
        let q = C::new(0.3, 0.0);
        let k = ExpKernel::new(C::new(1.0, 0.0), &weights, 3);
        let direct = k.direct_difference(1, q, q.ln());
        let taylor = k
            .taylor_difference(1, q, q.ln())
            .expect("taylor route applies");
        assert!((direct - taylor).norm() <= 1e-12, "{direct} vs {taylor}");
    }

    #[test]
    fn routes_agree_where_both_are_accurate() {
        let weights = [C::one()];
        for (q, n, r, x) in [
            (C::new(0.8, 0.0), 3u32, 2u32, C::new(0.5, 0.0)),
            (C::new(0.7, 0.1), 2, 1, C::new(1.0, 0.0)),
            (C::new(0.9, 0.0), 1, 3, C::new(0.0, 0.0)),
        ] {
            let k = ExpKernel::new(x, &weights, r);
            let direct = k.direct_difference(n, q, q.ln());
            let taylor = k
                .taylor_difference(n, q, q.ln())
                .expect("taylor route applies");
            assert!(
                (direct - taylor).norm() <= 1e-11 * (1.0 + direct.norm()),
                "{direct} vs {taylor}"
            );
        }
    }

    #[test]
    fn weighted_kernel_routes_agree() {
        let weights: Vec<C> = (0..5)
            .map(|a| if a % 2 == 0 { C::one() } else { -C::one() })
            .collect();
        let k = ExpKernel::new(C::new(0.5, 0.0), &weights, 2);
        let q = C::new(0.9, 0.0);
        let direct = k.direct_difference(2, q, q.ln());
        let taylor = k.taylor_difference(2, q, q.ln()).unwrap();
        assert!((direct - taylor).norm() <= 1e-10 * (1.0 + direct.norm()));
    }

    #[test]
    fn aggregated_weights_match_power_form() {
        let weights: Vec<C> = (0..3)
            .map(|a| if a % 2 == 0 { C::one() } else { -C::one() })
            .collect();
        // (1 - e^u + e^{2u})^2 expanded
        let squared: Vec<C> = [1.0, -2.0, 3.0, -2.0, 1.0]
            .iter()
            .map(|&v| C::new(v, 0.0))
            .collect();
        let x = C::new(0.5, 0.0);
        for q in [C::new(0.95, 0.0), C::new(0.3, 0.0)] {
            let a = ExpKernel::new(x, &weights, 2).scaled_difference(4, q, q.ln());
            let b = ExpKernel::aggregated(x, &squared, 3, 2).scaled_difference(4, q, q.ln());
            assert!((a - b).norm() <= 1e-11 * (1.0 + a.norm()), "{a} vs {b}");
        }
    }

    #[test]
    fn far_from_one_uses_direct_sum() {
        let weights = [C::one()];
        let k = ExpKernel::new(C::new(1.0, 0.0), &weights, 1);
        let q = C::new(0.1, 0.0);
        assert!(k.taylor_difference(6, q, q.ln()).is_none());
    }
}
