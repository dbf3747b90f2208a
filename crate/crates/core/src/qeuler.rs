//! q-Euler polynomials of order `r`, their character-twisted versions, the
//! generating functions, and an Abel-summation cross-check.
//!
//! Canonical values come from the closed form
//!
//! ```text
//! E_{n,q}^{(r)}(x) = [2]_q^r (1-q)^{-n} Σ_{l=0}^{n} C(n,l) (-1)^l q^{lx} (1+q^l)^{-r},
//! ```
//!
//! whose `l = 0` term carries `2^{-r}` (Abel regularization of the divergent
//! defining series).

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::characters::{alternating_weights, conductor_weights, DirichletCharacter};
use crate::error::{Error, Result};
use crate::qcore::{q_number, EvalContext, SeriesResult};
use crate::scalar::{from_usize, is_finite, lit, powu, real, Real};
use crate::series::ExpKernel;

/// Order `r` of a multiple q-Euler object, `1 <= r <= 16`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order(u32);

impl Order {
    pub const MAX: u32 = 16;
    pub const ONE: Order = Order(1);

    pub fn new(r: u32) -> Result<Self> {
        if (1..=Self::MAX).contains(&r) {
            Ok(Order(r))
        } else {
            Err(Error::Domain(format!(
                "order r must lie in 1..={}, got {r}",
                Self::MAX
            )))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for Order {
    type Error = Error;
    fn try_from(r: u32) -> Result<Self> {
        Order::new(r)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Polynomial index `n`, `0 <= n <= 64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyIndex(u32);

impl PolyIndex {
    pub const MAX: u32 = 64;

    pub fn new(n: u32) -> Result<Self> {
        if n <= Self::MAX {
            Ok(PolyIndex(n))
        } else {
            Err(Error::Domain(format!(
                "index n must lie in 0..={}, got {n}",
                Self::MAX
            )))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for PolyIndex {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        PolyIndex::new(n)
    }
}

impl fmt::Display for PolyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn check_x<T: Real>(x: Complex<T>) -> Result<()> {
    if is_finite(x) {
        Ok(())
    } else {
        Err(Error::Domain("x must be finite".into()))
    }
}

fn check_odd(f: u32) -> Result<()> {
    if f % 2 == 1 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "conductor f must be odd and positive, got {f}"
        )))
    }
}

fn two<T: Real>() -> Complex<T> {
    real(lit(2.0))
}

/// `([2]_q / [2]_{q^f})^r`.
fn base_change_ratio<T: Real>(r: u32, ctx: &EvalContext<T>, ctx_f: &EvalContext<T>) -> Complex<T> {
    powu(q_number(two(), ctx) / q_number(two(), ctx_f), r)
}

/// `[2]_q^r (1-q)^{-n} Σ_l C(n,l)(-1)^l q^{lx} N(q^l)^r (1+q^{lf})^{-r}` for the weights `N`.
fn weighted_closed_form<T: Real>(
    n: u32,
    r: u32,
    x: Complex<T>,
    weights: &[Complex<T>],
    ctx: &EvalContext<T>,
) -> Complex<T> {
    let kernel = ExpKernel::new(x, weights, r);
    powu(q_number(two(), ctx), r) * kernel.scaled_difference(n, ctx.q(), ctx.log_q())
}

/// As [`weighted_closed_form`] but with the `r`-fold conductor sum kept as a
/// sum over tuples, aggregated by `σ = Σ a_i`, instead of factorized.
fn tuple_closed_form<T: Real>(
    n: u32,
    r: u32,
    x: Complex<T>,
    weights: &[Complex<T>],
    ctx: &EvalContext<T>,
) -> Complex<T> {
    let aggregated = conductor_weights(weights, r);
    let kernel = ExpKernel::aggregated(x, &aggregated, weights.len(), r);
    powu(q_number(two(), ctx), r) * kernel.scaled_difference(n, ctx.q(), ctx.log_q())
}

/// The order-`r` q-Euler polynomial `E_{n,q}^{(r)}(x)`; `x = 0` gives the q-Euler numbers.
pub fn euler_poly_r<T: Real>(
    n: PolyIndex,
    r: Order,
    x: Complex<T>,
    ctx: &EvalContext<T>,
) -> Result<Complex<T>> {
    check_x(x)?;
    Ok(weighted_closed_form(
        n.get(),
        r.get(),
        x,
        &[Complex::<T>::one()],
        ctx,
    ))
}

/// The generalized polynomial `E_{n,χ,q}^{(r)}(x)` attached to `χ`.
///
/// The `r`-fold conductor sum factorizes into the `r`-th power of
/// `Σ_a χ(a)(-q^l)^a`, which is what gets evaluated.
pub fn euler_poly_chi_r<T: Real>(
    n: PolyIndex,
    r: Order,
    x: Complex<T>,
    chi: &DirichletCharacter<T>,
    ctx: &EvalContext<T>,
) -> Result<Complex<T>> {
    check_x(x)?;
    check_odd(chi.modulus())?;
    Ok(weighted_closed_form(
        n.get(),
        r.get(),
        x,
        &chi.signed_weights(),
        ctx,
    ))
}

/// Right-hand side of the distribution relation: a sum of base-`q^f`
/// polynomials at the shifted points `(σ + x)/f`.
///
/// Tuples `(a_1, …, a_r)` are grouped by `σ = Σ a_i`, weighted by the signed
/// number of tuples reaching each `σ`.
pub fn distribution_rhs<T: Real>(
    n: PolyIndex,
    r: Order,
    x: Complex<T>,
    f: u32,
    ctx: &EvalContext<T>,
) -> Result<Complex<T>> {
    check_odd(f)?;
    shifted_sum(n, r, x, &alternating_weights(f), ctx)
}

/// The character form of the distribution relation, equal to
/// [`euler_poly_chi_r`] when the identity holds.
pub fn character_distribution_rhs<T: Real>(
    n: PolyIndex,
    r: Order,
    x: Complex<T>,
    chi: &DirichletCharacter<T>,
    ctx: &EvalContext<T>,
) -> Result<Complex<T>> {
    check_odd(chi.modulus())?;
    shifted_sum(n, r, x, &chi.signed_weights(), ctx)
}

fn shifted_sum<T: Real>(
    n: PolyIndex,
    r: Order,
    x: Complex<T>,
    weights: &[Complex<T>],
    ctx: &EvalContext<T>,
) -> Result<Complex<T>> {
    check_x(x)?;
    let f = weights.len() as u32;
    let ctx_f = ctx.base_power(f);
    let ff = from_usize::<T>(f as usize);
    let mut sum = Complex::<T>::zero();
    for (sigma, w) in conductor_weights(weights, r.get()).into_iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let y = (x + from_usize::<T>(sigma)) / ff;
        sum = sum + w * euler_poly_r(n, r, y, &ctx_f)?;
    }
    let f_number = q_number(real(ff), ctx);
    Ok(base_change_ratio(r.get(), ctx, &ctx_f) * powu(f_number, n.get()) * sum)
}

/// The second form of the distribution relation: the closed form with the
/// `r`-fold alternating conductor sum `Σ_{a⃗} (-1)^{Σa} q^{lΣa}` left
/// unsimplified.
pub fn distribution_closed_form<T: Real>(
    n: PolyIndex,
    r: Order,
    x: Complex<T>,
    f: u32,
    ctx: &EvalContext<T>,
) -> Result<Complex<T>> {
    check_x(x)?;
    check_odd(f)?;
    Ok(tuple_closed_form(
        n.get(),
        r.get(),
        x,
        &alternating_weights(f),
        ctx,
    ))
}

/// The closed form of `E_{n,χ,q}^{(r)}(x)` with its `r`-fold character sum
/// evaluated tuple by tuple (aggregated by `σ = Σ a_i`) rather than as a power
/// of a single sum. Agrees with [`euler_poly_chi_r`] up to rounding.
pub fn character_closed_form<T: Real>(
    n: PolyIndex,
    r: Order,
    x: Complex<T>,
    chi: &DirichletCharacter<T>,
    ctx: &EvalContext<T>,
) -> Result<Complex<T>> {
    check_x(x)?;
    check_odd(chi.modulus())?;
    Ok(tuple_closed_form(
        n.get(),
        r.get(),
        x,
        &chi.signed_weights(),
        ctx,
    ))
}

/// Periodic rescaling threshold for the generating-function series.
const RESCALE: f64 = 1e100;
/// Largest geometric ratio accepted for the tail bound.
const MAX_TAIL_RATIO: f64 = 0.99;
/// Largest tolerated `log(Σ|terms| / |sum|)` before the k-series is abandoned.
const CANCELLATION_LIMIT: f64 = 9.0;
const MAX_TAYLOR_DEGREE: u32 = 160;

/// The generating function `F_q^{(r)}(t, x) = Σ_n E_{n,q}^{(r)}(x) t^n / n!`,
/// evaluated as
///
/// ```text
/// [2]_q^r e^{t/(1-q)} Σ_{k>=0} (-t/(1-q))^k q^{xk} (1+q^k)^{-r} / k!
/// ```
///
/// which is entire in `t`. Summation stops once the geometric tail bound,
/// scaled to the returned value, is at most `ctx.tol()`.
///
/// When `z = -t q^x/(1-q)` is large and not close to the positive axis the
/// k-series cancels catastrophically (think `q → 1` with `t > 0`); the Taylor
/// series in `t` is then summed instead, with the coefficients from
/// [`euler_poly_r`]'s stable evaluation, as long as it converges within
/// 160 terms.
pub fn gen_fn<T: Real>(
    t: Complex<T>,
    r: Order,
    x: Complex<T>,
    ctx: &EvalContext<T>,
) -> Result<SeriesResult<T>> {
    if !is_finite(t) {
        return Err(Error::Domain("t must be finite".into()));
    }
    check_x(x)?;
    let z = -t / (Complex::<T>::one() - ctx.q()) * ctx.pow(x);
    if z.norm() - z.re > lit(CANCELLATION_LIMIT) {
        if let Some(v) = gen_fn_taylor(t, r, x, ctx) {
            return Ok(v);
        }
    }
    gen_fn_series(t, z, r.get(), ctx)
}

fn gen_fn_series<T: Real>(
    t: Complex<T>,
    z: Complex<T>,
    r: u32,
    ctx: &EvalContext<T>,
) -> Result<SeriesResult<T>> {
    let q = ctx.q();
    let one = Complex::<T>::one();
    let z_abs = z.norm();
    let q_abs = q.norm();
    let prefactor = powu(q_number(two(), ctx), r);
    let exponent = t / (one - q);
    // log of |[2]^r e^{t/(1-q)}|, used to turn the tail of the scaled sum into an absolute bound
    let log_scale_base = prefactor.norm().ln() + exponent.re;
    let log_tol = ctx.tol().ln();
    let rescale = lit::<T>(RESCALE);
    let max_ratio = lit::<T>(MAX_TAIL_RATIO);

    let mut term = one;
    let mut q_k = one;
    let mut q_abs_k = T::one();
    let mut sum = Complex::<T>::zero();
    let mut log_rescaled = T::zero();
    for k in 0..ctx.max_terms() {
        if k > 0 {
            term = term * z / from_usize::<T>(k);
            q_k = q_k * q;
            q_abs_k = q_abs_k * q_abs;
        }
        let contribution = term / powu(one + q_k, r);
        sum = sum + contribution;

        let growth = (T::one() + q_abs_k) / (T::one() - q_abs_k * q_abs);
        let rho = z_abs / from_usize::<T>(k + 1) * growth.powi(r as i32);
        if rho <= max_ratio {
            let tail = contribution.norm() * rho / (T::one() - rho);
            let log_err = tail.ln() + log_scale_base + log_rescaled;
            if tail.is_zero() || log_err <= log_tol {
                let value = sum * prefactor * (exponent + real(log_rescaled)).exp();
                let err_estimate = if tail.is_zero() {
                    T::zero()
                } else {
                    log_err.exp()
                };
                return Ok(SeriesResult {
                    value,
                    err_estimate,
                    terms_used: k + 1,
                });
            }
        }
        if term.norm() > rescale {
            term = term / rescale;
            sum = sum / rescale;
            log_rescaled = log_rescaled + rescale.ln();
        }
    }
    Err(Error::Convergence {
        what: "generating function series",
        max_terms: ctx.max_terms(),
    })
}

/// `Σ_n E_{n,q}^{(r)}(x) t^n / n!`; `None` if the terms have not settled below
/// the tolerance by degree 160. The error estimate is twice the largest of the
/// last four terms.
fn gen_fn_taylor<T: Real>(
    t: Complex<T>,
    r: Order,
    x: Complex<T>,
    ctx: &EvalContext<T>,
) -> Option<SeriesResult<T>> {
    let prefactor = powu(q_number(two(), ctx), r.get());
    let unit = [Complex::<T>::one()];
    let kernel = ExpKernel::new(x, &unit, r.get());
    let mut power = Complex::<T>::one();
    let mut sum = Complex::<T>::zero();
    let mut recent = [T::zero(); 4];
    for n in 0..=MAX_TAYLOR_DEGREE {
        if n > 0 {
            power = power * t / from_usize::<T>(n as usize);
        }
        let term = prefactor * kernel.scaled_difference(n, ctx.q(), ctx.log_q()) * power;
        if !is_finite(term) {
            return None;
        }
        sum = sum + term;
        recent[n as usize % 4] = term.norm();
        if n >= 4 {
            let tail = recent.iter().fold(T::zero(), |m, &v| m.max(v)) * lit(2.0);
            if tail <= ctx.tol() {
                return Some(SeriesResult {
                    value: sum,
                    err_estimate: tail,
                    terms_used: n as usize + 1,
                });
            }
        }
    }
    None
}

/// The generating function `F_{q,χ}^{(r)}(t, x)` of the polynomials attached to `χ`,
/// reduced to base-`q^f` generating functions:
///
/// ```text
/// ([2]_q/[2]_{q^f})^r Σ_σ W(σ) F_{q^f}^{(r)}([f]_q t, (x+σ)/f)
/// ```
///
/// with `W` the aggregated signed character weights. Each block is summed to
/// a share of `ctx.tol()`; the error estimate is the weighted sum of the block
/// estimates.
pub fn gen_fn_chi<T: Real>(
    t: Complex<T>,
    r: Order,
    x: Complex<T>,
    chi: &DirichletCharacter<T>,
    ctx: &EvalContext<T>,
) -> Result<SeriesResult<T>> {
    check_odd(chi.modulus())?;
    let f = chi.modulus();
    if f == 1 {
        return gen_fn(t, r, x, ctx);
    }
    if !is_finite(t) {
        return Err(Error::Domain("t must be finite".into()));
    }
    check_x(x)?;
    let ff = from_usize::<T>(f as usize);
    let scaled_t = q_number(real(ff), ctx) * t;
    let weights = conductor_weights(&chi.signed_weights(), r.get());
    let ratio = base_change_ratio(r.get(), ctx, &ctx.base_power(f));
    let ctx_f = block_context(ctx, f, ratio.norm(), &weights)?;
    let mut value = Complex::<T>::zero();
    let mut err = T::zero();
    let mut terms = 0;
    for (sigma, w) in weights.into_iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let block = gen_fn(scaled_t, r, (x + from_usize::<T>(sigma)) / ff, &ctx_f)?;
        value = value + w * block.value;
        err = err + w.norm() * block.err_estimate;
        terms = terms.max(block.terms_used);
    }
    Ok(SeriesResult {
        value: ratio * value,
        err_estimate: ratio.norm() * err,
        terms_used: terms,
    })
}

/// Base-`q^f` context whose tolerance is `ctx.tol()` divided by the total
/// weight `scale · Σ|W(σ)|` the blocks enter with.
pub(crate) fn block_context<T: Real>(
    ctx: &EvalContext<T>,
    f: u32,
    scale: T,
    weights: &[Complex<T>],
) -> Result<EvalContext<T>> {
    let total = weights.iter().fold(T::zero(), |acc, w| acc + w.norm()) * scale;
    let tol = ctx.tol() / total.max(T::one());
    ctx.base_power(f)
        .with_tolerance(tol.max(T::min_positive_value()))
}

/// Abel-summation nodes; the sums are extrapolated from these to `t = 1`.
pub const ABEL_NODES: [f64; 5] = [0.990, 0.992, 0.994, 0.996, 0.998];
const ABEL_EPS: f64 = 1e-15;

/// Independent evaluation of `E_{n,q}^{(r)}(x)` by Abel summation of the
/// defining single series `[2]_q^r Σ_m C(m+r-1,m)(-1)^m [m+x]_q^n`.
///
/// With `C = (1-q)^{-n}` and `[m+x]_q^n = C (1 + d_m)`, the constant part sums
/// to `C (1+t)^{-r}` in closed form; the remainder
/// `P(t) = C Σ_m C(m+r-1,m)(-t)^m d_m` converges absolutely up to `t = 1/q`, is
/// computed at each node and polynomially extrapolated to `t = 1`.
///
/// Requires real `q` in (0, 1) and real `x >= 0`.
pub fn abel_oracle<T: Real>(
    n: PolyIndex,
    r: Order,
    x: Complex<T>,
    ctx: &EvalContext<T>,
) -> Result<Complex<T>> {
    let q = ctx.q();
    if q.im != T::zero() || q.re <= T::zero() {
        return Err(Error::Domain(
            "Abel oracle requires real q in (0, 1)".into(),
        ));
    }
    if x.im != T::zero() || !(x.re >= T::zero()) || !x.re.is_finite() {
        return Err(Error::Domain("Abel oracle requires real x >= 0".into()));
    }
    let (q, x) = (q.re, x.re);
    let (n, r) = (n.get(), r.get());
    let c = (T::one() - q).powi(-(n as i32));
    let nf = from_usize::<T>(n as usize);
    let eps = lit::<T>(ABEL_EPS);

    let mut values = Vec::with_capacity(ABEL_NODES.len());
    for &node in &ABEL_NODES {
        let t = lit::<T>(node);
        let mut sum = T::zero();
        // C(m+r-1, m) t^m and q^{m+x}
        let mut coef = T::one();
        let mut q_pow = q.powf(x);
        let mut converged = n == 0;
        for m in 0..ctx.max_terms() {
            if converged {
                break;
            }
            if m > 0 {
                coef = coef * t * from_usize::<T>(m + r as usize - 1) / from_usize::<T>(m);
                q_pow = q_pow * q;
            }
            let d = (nf * (-q_pow).ln_1p()).exp_m1();
            let term = coef * c * d;
            sum = if m % 2 == 0 { sum + term } else { sum - term };

            // |d_k| <= n q^{k+x}, and successive coefficient ratios are below rho
            let next_coef = coef * t * from_usize::<T>(m + r as usize) / from_usize::<T>(m + 1);
            let next = next_coef * c * nf * q_pow * q;
            let rho = t * q * (T::one() + from_usize::<T>(r as usize - 1) / from_usize::<T>(m + 2));
            if rho < T::one() && next / (T::one() - rho) <= eps * sum.abs().max(T::one()) {
                converged = true;
            }
        }
        if !converged {
            return Err(Error::Convergence {
                what: "Abel partial sums",
                max_terms: ctx.max_terms(),
            });
        }
        values.push(sum);
    }
    let nodes: Vec<T> = ABEL_NODES.iter().map(|&v| lit(v)).collect();
    let p1 = neville(&nodes, &values, T::one());
    let half_power = lit::<T>(0.5).powi(r as i32);
    let two_q = powu(q_number(two(), ctx), r);
    Ok(two_q * real(p1 + c * half_power))
}

/// Value at `at` of the interpolating polynomial through `(xs[i], ys[i])`.
pub(crate) fn neville<T: Real>(xs: &[T], ys: &[T], at: T) -> T {
    let mut p = ys.to_vec();
    let len = xs.len();
    for level in 1..len {
        for i in 0..len - level {
            let j = i + level;
            p[i] = ((at - xs[j]) * p[i] + (xs[i] - at) * p[i + 1]) / (xs[i] - xs[j]);
        }
    }
    p[0]
}
