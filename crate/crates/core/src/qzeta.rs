//! The multiple q-Euler zeta function, the Dirichlet-type l-function, their
//! analytic continuation, and a Mellin-transform cross-check.
//!
//! For `|q^x| < 1` the continuation used throughout is
//!
//! ```text
//! ζ_{r,q}(s, x) = [2]_q^r (1-q)^s Σ_{k>=0} C(-s, k)(-1)^k q^{xk} (1+q^k)^{-r},
//! ```
//!
//! obtained by expanding `[m+x]_q^{-s}` binomially and summing over `m` in
//! closed form. It is entire in `s`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::characters::{conductor_weights, DirichletCharacter};
use crate::error::{Error, Result};
use crate::qcore::{
    as_small_nonnegative_integer, complex_pow, gamma, q_number, validate_domain, EvalContext,
    GenBinomials, SeriesResult, SMALL_INTEGER_LIMIT,
};
use crate::qeuler::{
    block_context, euler_poly_chi_r, euler_poly_r, gen_fn, gen_fn_chi, Order, PolyIndex,
};
use crate::quadrature::integrate;
use crate::scalar::{from_usize, is_finite, lit, powu, real, Real};

/// Largest geometric ratio accepted for the tail bound.
const MAX_TAIL_RATIO: f64 = 0.99;

/// A zeta or l-function evaluation request.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaQuery<T> {
    pub s: Complex<T>,
    pub x: Complex<T>,
    pub r: Order,
    pub chi: Option<DirichletCharacter<T>>,
}

impl<T: Real> ZetaQuery<T> {
    pub fn new(
        s: Complex<T>,
        x: Complex<T>,
        r: Order,
        chi: Option<DirichletCharacter<T>>,
    ) -> Result<Self> {
        if !is_finite(s) || !is_finite(x) {
            return Err(Error::Domain("s and x must be finite".into()));
        }
        if let Some(c) = &chi {
            if c.modulus() % 2 == 0 {
                return Err(Error::Domain(format!(
                    "character modulus must be odd, got {}",
                    c.modulus()
                )));
            }
        }
        Ok(Self { s, x, r, chi })
    }

    /// `l_r` when a character is present, `zeta_r` otherwise.
    pub fn evaluate(&self, ctx: &EvalContext<T>) -> Result<SeriesResult<T>> {
        match &self.chi {
            Some(chi) => l_r(self.s, self.r, self.x, chi, ctx),
            None => zeta_r(self.s, self.r, self.x, ctx),
        }
    }
}

/// `-s` as a small nonnegative integer, if it is one.
fn negative_integer<T: Real>(s: Complex<T>) -> Option<u32> {
    as_small_nonnegative_integer(-s, SMALL_INTEGER_LIMIT)
}

/// The multiple q-Euler zeta function `ζ_{r,q}(s, x)`.
///
/// At `s = -n` (`n <= 64`) the binomial series terminates after `n + 1`
/// terms; it is then evaluated through the same stable finite-difference
/// routine as [`euler_poly_r`] and reported as exact. Elsewhere the series is
/// summed until its geometric tail bound is at most `ctx.tol()`.
pub fn zeta_r<T: Real>(
    s: Complex<T>,
    r: Order,
    x: Complex<T>,
    ctx: &EvalContext<T>,
) -> Result<SeriesResult<T>> {
    if let Some(n) = negative_integer(s) {
        let value = euler_poly_r(PolyIndex::new(n)?, r, x, ctx)?;
        return Ok(SeriesResult::exact(value, n as usize + 1));
    }
    validate_domain(s, x, ctx)?;
    binomial_series(s, r, x, ctx)
}

/// Sums the continuation series term by term, without the terminating
/// shortcut.
pub(crate) fn binomial_series<T: Real>(
    s: Complex<T>,
    r: Order,
    x: Complex<T>,
    ctx: &EvalContext<T>,
) -> Result<SeriesResult<T>> {
    let r = r.get();
    let q = ctx.q();
    let one = Complex::<T>::one();
    let prefactor = powu(q_number(real(lit(2.0)), ctx), r) * complex_pow(one - q, s)?;
    let scale = prefactor.norm();
    let q_x = ctx.pow(x);
    let q_x_abs = q_x.norm();
    let q_abs = q.norm();
    let s_shift = (s - one).norm();
    let max_ratio = lit::<T>(MAX_TAIL_RATIO);

    let mut sum = Complex::<T>::zero();
    let mut q_xk = one;
    let mut q_k = one;
    let mut q_abs_k = T::one();
    for (k, b) in GenBinomials::new(s).take(ctx.max_terms()).enumerate() {
        if k > 0 {
            q_xk = q_xk * q_x;
            q_k = q_k * q;
            q_abs_k = q_abs_k * q_abs;
        }
        let term = b * q_xk / powu(one + q_k, r);
        sum = sum + term;

        let growth = (T::one() + q_abs_k) / (T::one() - q_abs_k * q_abs);
        let rho = q_x_abs * (T::one() + s_shift / from_usize::<T>(k + 1)) * growth.powi(r as i32);
        if rho <= max_ratio {
            let err = scale * term.norm() * rho / (T::one() - rho);
            if err <= ctx.tol() {
                return Ok(SeriesResult {
                    value: prefactor * sum,
                    err_estimate: err,
                    terms_used: k + 1,
                });
            }
        }
    }
    Err(Error::Convergence {
        what: "zeta binomial series",
        max_terms: ctx.max_terms(),
    })
}

/// The q-Euler zeta function `ζ_q(s, x)`, i.e. [`zeta_r`] at order one.
pub fn zeta<T: Real>(
    s: Complex<T>,
    x: Complex<T>,
    ctx: &EvalContext<T>,
) -> Result<SeriesResult<T>> {
    zeta_r(s, Order::ONE, x, ctx)
}

/// The Dirichlet-type multiple l-function `l_q^{(r)}(s, x | χ)`, reduced to
/// zeta functions in base `q^f`:
///
/// ```text
/// [f]_q^{-s} ([2]_q/[2]_{q^f})^r Σ_σ W(σ) ζ_{r,q^f}(s, (σ+x)/f)
/// ```
///
/// where `W` is the `r`-fold self-convolution of `a ↦ χ(a)(-1)^a`. Terms with
/// vanishing weight are skipped; `f = 1` is exactly [`zeta_r`]. Each block is
/// summed to a share of `ctx.tol()`.
pub fn l_r<T: Real>(
    s: Complex<T>,
    r: Order,
    x: Complex<T>,
    chi: &DirichletCharacter<T>,
    ctx: &EvalContext<T>,
) -> Result<SeriesResult<T>> {
    let f = chi.modulus();
    if f.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "character modulus must be odd, got {f}"
        )));
    }
    if f == 1 {
        return zeta_r(s, r, x, ctx);
    }
    if !is_finite(s) || !is_finite(x) {
        return Err(Error::Domain("s and x must be finite".into()));
    }
    let ff = from_usize::<T>(f as usize);
    let two = real(lit::<T>(2.0));
    let ratio = powu(
        q_number(two, ctx) / q_number(two, &ctx.base_power(f)),
        r.get(),
    );
    let prefactor = complex_pow(q_number(real(ff), ctx), -s)? * ratio;
    let weights = conductor_weights(&chi.signed_weights(), r.get());
    let ctx_f = block_context(ctx, f, prefactor.norm(), &weights)?;
    let mut sum = Complex::<T>::zero();
    let mut err = T::zero();
    let mut terms = 0;
    for (sigma, w) in weights.into_iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let block = zeta_r(s, r, (x + from_usize::<T>(sigma)) / ff, &ctx_f)?;
        sum = sum + w * block.value;
        err = err + w.norm() * block.err_estimate;
        terms = terms.max(block.terms_used);
    }
    Ok(SeriesResult {
        value: prefactor * sum,
        err_estimate: prefactor.norm() * err,
        terms_used: terms,
    })
}

/// The Dirichlet-type l-function `l_q(s, x | χ)`, i.e. [`l_r`] at order one.
pub fn l<T: Real>(
    s: Complex<T>,
    x: Complex<T>,
    chi: &DirichletCharacter<T>,
    ctx: &EvalContext<T>,
) -> Result<SeriesResult<T>> {
    l_r(s, Order::ONE, x, chi, ctx)
}

const MELLIN_ABS_TOL: f64 = 1e-10;
const MELLIN_MAX_PANELS: usize = 4000;
const MELLIN_CUTOFF: f64 = 1e-18;
const MELLIN_MAX_DOUBLINGS: usize = 40;

/// Independent evaluation of `ζ_{r,q}(s, x)` (or `l_q^{(r)}(s, x|χ)`) as the
/// Mellin transform `Γ(s)^{-1} ∫_0^∞ t^{s-1} F(-t, x) dt` of the generating
/// function.
///
/// The integral is split at `t = 1`. Below, `t = e^{-v}` turns it into an
/// exponentially decaying integral over `v`; above, the range is extended by
/// doubling until the integrand falls below `1e-18`. Requires `Re(s) > 0`,
/// real `q` in (0, 1) and real `x > 0`.
pub fn mellin_oracle<T: Real>(
    s: Complex<T>,
    r: Order,
    x: Complex<T>,
    ctx: &EvalContext<T>,
    chi: Option<&DirichletCharacter<T>>,
) -> Result<Complex<T>> {
    if !is_finite(s) || !(s.re > T::zero()) {
        return Err(Error::Domain("Mellin oracle requires Re(s) > 0".into()));
    }
    let q = ctx.q();
    if q.im != T::zero() || !(q.re > T::zero()) {
        return Err(Error::Domain(
            "Mellin oracle requires real q in (0, 1)".into(),
        ));
    }
    if x.im != T::zero() || !(x.re > T::zero()) || !x.re.is_finite() {
        return Err(Error::Domain("Mellin oracle requires real x > 0".into()));
    }
    let generating = |t: T| -> Result<Complex<T>> {
        let t = real(-t);
        match chi {
            Some(c) => gen_fn_chi(t, r, x, c, ctx).map(|v| v.value),
            None => gen_fn(t, r, x, ctx).map(|v| v.value),
        }
    };
    let one = Complex::<T>::one();
    let upper =
        |t: T| -> Result<Complex<T>> { Ok((real(t.ln()) * (s - one)).exp() * generating(t)?) };
    let lower = |v: T| -> Result<Complex<T>> { Ok((-s * v).exp() * generating((-v).exp())?) };

    // ∫_V^∞ e^{-v Re s} |F| dv below the target once e^{-V Re s} sup|F| / Re s is tiny
    let f0 = generating(T::zero())?.norm().max(T::one());
    let tol = lit::<T>(MELLIN_ABS_TOL);
    let v_max = ((lit::<T>(2.0) * f0 / s.re).ln() - (tol * lit(1e-3)).ln()) / s.re;
    let lower_part = integrate(
        lower,
        &[(T::zero(), v_max)],
        tol / lit(2.0),
        MELLIN_MAX_PANELS,
    )?;

    let cutoff = lit::<T>(MELLIN_CUTOFF);
    let mut intervals = Vec::new();
    let mut a = T::one();
    for _ in 0..MELLIN_MAX_DOUBLINGS {
        let b = a + a;
        intervals.push((a, b));
        a = b;
        if upper(a)?.norm() < cutoff {
            break;
        }
    }
    if upper(a)?.norm() >= cutoff {
        return Err(Error::Quadrature(
            "integrand did not decay on [1, 2^40]".into(),
        ));
    }
    let upper_part = integrate(upper, &intervals, tol / lit(2.0), MELLIN_MAX_PANELS)?;
    Ok((lower_part.value + upper_part.value) / gamma(s)?)
}

/// Relative residual `|ζ(-n) - E_n| / (1 + |E_n|)` of the special-value
/// identity, or of its character analogue when `chi` is given.
pub fn special_value_residual<T: Real>(
    n: PolyIndex,
    r: Order,
    x: Complex<T>,
    ctx: &EvalContext<T>,
    chi: Option<&DirichletCharacter<T>>,
) -> Result<T> {
    let s = real(-from_usize::<T>(n.get() as usize));
    let (zeta_side, poly_side) = match chi {
        Some(c) => (
            l_r(s, r, x, c, ctx)?.value,
            euler_poly_chi_r(n, r, x, c, ctx)?,
        ),
        None => (zeta_r(s, r, x, ctx)?.value, euler_poly_r(n, r, x, ctx)?),
    };
    Ok((zeta_side - poly_side).norm() / (T::one() + poly_side.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_prime_characters;

    type C = Complex<f64>;
    type Chi = DirichletCharacter<f64>;

    fn ctx(q: C) -> EvalContext<f64> {
        EvalContext::new(q).unwrap()
    }

    fn ctxr(q: f64) -> EvalContext<f64> {
        EvalContext::real(q).unwrap()
    }

    fn r(v: u32) -> Order {
        Order::new(v).unwrap()
    }

    fn n(v: u32) -> PolyIndex {
        PolyIndex::new(v).unwrap()
    }

    fn cx(v: f64) -> C {
        C::new(v, 0.0)
    }

    #[test]
    fn value_at_zero() {
        for q in [cx(0.5), C::new(0.4, 0.3)] {
            for rr in 1..=3 {
                let v = zeta_r(C::zero(), r(rr), cx(1.5), &ctx(q)).unwrap();
                assert!((v.value - ((C::one() + q) / 2.0).powu(rr)).norm() < 1e-15);
                assert_eq!(v.err_estimate, 0.0);
            }
        }
        let v = zeta(C::zero(), cx(2.0), &ctxr(0.5)).unwrap();
        assert!((v.value - cx(0.75)).norm() < 1e-15);
    }

    #[test]
    fn negative_integers_truncate() {
        let v = zeta_r(cx(-1.0), r(1), cx(1.0), &ctxr(0.5)).unwrap();
        assert!((v.value - cx(0.5)).norm() < 1e-14);
        assert_eq!(v.terms_used, 2);
        let v = zeta_r(cx(-7.0), r(2), cx(0.0), &ctxr(0.9)).unwrap();
        assert_eq!(v.terms_used, 8);
        assert_eq!(v.err_estimate, 0.0);
    }

    #[test]
    fn raw_series_matches_closed_form_at_negative_integers() {
        for q in [cx(0.3), cx(0.5), C::new(0.4, 0.3)] {
            for rr in 1..=3 {
                for nn in 0..=8u32 {
                    let c = ctx(q);
                    let raw = binomial_series(cx(-(nn as f64)), r(rr), cx(1.0), &c).unwrap();
                    assert!(raw.terms_used <= nn as usize + 1 || raw.err_estimate == 0.0);
                    let e = euler_poly_r(n(nn), r(rr), cx(1.0), &c).unwrap();
                    assert!(
                        (raw.value - e).norm() <= 1e-11 * (1.0 + e.norm()),
                        "q={q} n={nn}: {} vs {e}",
                        raw.value
                    );
                }
            }
        }
    }

    #[test]
    fn frozen_high_precision_values() {
        let cases = [
            (
                cx(2.0),
                1,
                cx(1.0),
                cx(0.5),
                C::new(1.100_508_931_863_018_1, 0.0),
            ),
            (
                cx(1.5),
                2,
                cx(0.5),
                cx(0.3),
                C::new(2.068_840_956_026_425_4, 0.0),
            ),
            (
                C::new(1.0, 1.0),
                1,
                cx(1.0),
                cx(0.5),
                C::new(0.971_674_210_298_808_2, 0.172_779_923_678_773_8),
            ),
            (
                C::new(-2.5, 3.0),
                3,
                cx(1.0),
                cx(0.5),
                C::new(-2.599_486_623_541_391, 1.755_942_354_707_606),
            ),
            (
                cx(0.5),
                2,
                cx(2.0),
                cx(0.9),
                C::new(0.814_893_953_791_745, 0.0),
            ),
            (
                C::new(3.0, -2.0),
                1,
                C::new(0.5, 0.2),
                C::new(0.4, 0.3),
                C::new(0.643_736_852_982_045_9, -4.440_534_377_875_899),
            ),
        ];
        for (s, rr, x, q, expected) in cases {
            let v = zeta_r(s, r(rr), x, &ctx(q)).unwrap();
            assert!(
                (v.value - expected).norm() < 1e-9,
                "s={s}: {} vs {expected}",
                v.value
            );
        }
    }

    #[test]
    fn frozen_l_values() {
        let chars5 = enumerate_prime_characters::<f64>(5).unwrap();
        let chars3 = enumerate_prime_characters::<f64>(3).unwrap();
        let v = l_r(cx(1.5), r(2), cx(0.5), &chars5[1], &ctxr(0.7)).unwrap();
        assert!((v.value - C::new(0.303_023_675_491_045_5, -1.961_064_775_470_148)).norm() < 1e-9);
        let v = l(C::new(-0.5, 1.0), cx(1.0), &chars3[1], &ctxr(0.5)).unwrap();
        assert!((v.value - C::new(-1.716_757_168_094_616, 0.519_847_340_381_061)).norm() < 1e-9);
    }

    #[test]
    fn delegation_is_bitwise() {
        let c = ctx(C::new(0.4, 0.3));
        let principal = Chi::principal(1).unwrap();
        for s in [C::new(1.5, 0.5), cx(-3.0), C::new(-2.2, 4.0)] {
            let a = zeta(s, cx(0.8), &c).unwrap();
            assert_eq!(a, zeta_r(s, r(1), cx(0.8), &c).unwrap());
            assert_eq!(a, l(s, cx(0.8), &principal, &c).unwrap());
            assert_eq!(
                l_r(s, r(2), cx(0.8), &principal, &c).unwrap(),
                zeta_r(s, r(2), cx(0.8), &c).unwrap()
            );
        }
    }

    #[test]
    fn l_function_at_zero() {
        let chi = enumerate_prime_characters::<f64>(3).unwrap().remove(1);
        let v = l_r(C::zero(), r(1), cx(0.5), &chi, &ctxr(0.5)).unwrap();
        assert!((v.value - cx(-1.5)).norm() < 1e-14);
    }

    #[test]
    fn special_values() {
        assert_eq!(
            special_value_residual(n(0), r(2), cx(0.3), &ctxr(0.5), None).unwrap(),
            0.0
        );
        assert!(special_value_residual(n(4), r(2), cx(1.5), &ctxr(0.7), None).unwrap() <= 1e-10);
        let chi = enumerate_prime_characters::<f64>(3).unwrap().remove(1);
        assert!(
            special_value_residual(n(3), r(1), cx(0.5), &ctxr(0.5), Some(&chi)).unwrap() <= 1e-9
        );
    }

    #[test]
    fn domain_guard() {
        let err = zeta_r(cx(1.5), r(1), cx(0.0), &ctxr(0.5)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        let err = zeta_r(cx(1.5), r(1), cx(-1.0), &ctxr(0.5)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(zeta_r(cx(-2.0), r(1), cx(0.0), &ctxr(0.5)).is_ok());
    }

    #[test]
    fn convergence_failure_is_reported() {
        let c = ctxr(0.99).with_max_terms(8).unwrap();
        assert!(zeta_r(cx(1.5), r(1), cx(0.5), &c)
            .unwrap_err()
            .is_convergence());
    }

    #[test]
    fn mellin_examples() {
        let cases = [
            (cx(2.0), 1, 1.0, 0.5, 1e-6),
            (cx(1.5), 2, 0.5, 0.3, 1e-6),
            (C::new(1.0, 1.0), 1, 1.0, 0.5, 1e-5),
        ];
        for (s, rr, x, q, tol) in cases {
            let c = ctxr(q);
            let m = mellin_oracle(s, r(rr), cx(x), &c, None).unwrap();
            let z = zeta_r(s, r(rr), cx(x), &c).unwrap();
            assert!((m - z.value).norm() < tol, "s={s}: {m} vs {}", z.value);
        }
    }

    #[test]
    fn mellin_with_character() {
        let chi = enumerate_prime_characters::<f64>(5).unwrap().remove(2);
        let c = ctxr(0.5);
        let m = mellin_oracle(cx(1.5), r(2), cx(1.0), &c, Some(&chi)).unwrap();
        let z = l_r(cx(1.5), r(2), cx(1.0), &chi, &c).unwrap();
        assert!((m - z.value).norm() < 1e-5, "{m} vs {}", z.value);
    }

    #[test]
    fn mellin_preconditions() {
        let c = ctxr(0.5);
        assert!(mellin_oracle(cx(-0.5), r(1), cx(1.0), &c, None).is_err());
        assert!(mellin_oracle(cx(1.5), r(1), cx(1.0), &ctx(C::new(0.4, 0.3)), None).is_err());
        assert!(mellin_oracle(cx(1.5), r(1), cx(0.0), &c, None).is_err());
    }

    #[test]
    fn query_dispatch() {
        let c = ctxr(0.5);
        let chi = enumerate_prime_characters::<f64>(3).unwrap().remove(1);
        let q = ZetaQuery::new(cx(2.0), cx(1.0), r(1), Some(chi.clone())).unwrap();
        assert_eq!(
            q.evaluate(&c).unwrap(),
            l(cx(2.0), cx(1.0), &chi, &c).unwrap()
        );
        let q = ZetaQuery::new(cx(2.0), cx(1.0), r(1), None).unwrap();
        assert_eq!(q.evaluate(&c).unwrap(), zeta(cx(2.0), cx(1.0), &c).unwrap());
    }

    #[test]
    fn conjugation_symmetry() {
        let q = C::new(0.5, 0.2);
        for s in [C::new(1.5, 0.7), C::new(-3.3, -2.0), C::new(0.2, 5.0)] {
            let a = zeta_r(s, r(2), cx(0.9), &ctx(q)).unwrap().value;
            let b = zeta_r(s.conj(), r(2), cx(0.9), &ctx(q.conj()))
                .unwrap()
                .value;
            assert!((a.conj() - b).norm() <= 1e-11 * (1.0 + a.norm()));
        }
    }
}
