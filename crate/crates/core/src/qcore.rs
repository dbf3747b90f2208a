//! Complex q-arithmetic: evaluation context, q-numbers, principal powers,
//! generalized binomial coefficients and the complex gamma function.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, is_finite, lit, powu, real, Real};

/// Integer arguments up to this size take exact-path fast routes.
pub const SMALL_INTEGER_LIMIT: u32 = 64;

/// The base `q` together with the truncation policy used by every series.
///
/// The context also carries the logarithm of `q` that all non-integer powers
/// `q^z = exp(z log q)` are taken with. A freshly built context uses the
/// principal logarithm; [`EvalContext::base_power`] keeps `log(q^f) = f log q`
/// so that `(q^f)^y = q^{f y}` holds exactly across base changes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalContext<T> {
    q: Complex<T>,
    log_q: Complex<T>,
    tol: T,
    max_terms: usize,
}

impl<T: Real> EvalContext<T> {
    pub const DEFAULT_TOL: f64 = 1e-10;
    pub const DEFAULT_MAX_TERMS: usize = 10_000;
    pub const MIN_TERMS: usize = 8;

    /// Context with the default tolerance and term cap.
    pub fn new(q: Complex<T>) -> Result<Self> {
        if !is_finite(q) {
            return Err(Error::Domain("q must be finite".into()));
        }
        if q.norm() >= T::one() {
            return Err(Error::Domain(format!(
                "|q| < 1 required, got |q| = {}",
                q.norm()
            )));
        }
        if q.is_zero() {
            return Err(Error::Domain(
                "q must be nonzero (powers are taken via log q)".into(),
            ));
        }
        Ok(Self {
            q,
            log_q: q.ln(),
            tol: lit(Self::DEFAULT_TOL),
            max_terms: Self::DEFAULT_MAX_TERMS,
        })
    }

    pub fn real(q: T) -> Result<Self> {
        Self::new(real(q))
    }

    pub fn with_tolerance(mut self, tol: T) -> Result<Self> {
        if !(tol > T::zero() && tol < T::one()) {
            return Err(Error::Domain(format!(
                "tolerance must lie in (0, 1), got {tol}"
            )));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Result<Self> {
        if max_terms < Self::MIN_TERMS {
            return Err(Error::Domain(format!(
                "max_terms must be at least {}, got {max_terms}",
                Self::MIN_TERMS
            )));
        }
        self.max_terms = max_terms;
        Ok(self)
    }

    pub fn q(&self) -> Complex<T> {
        self.q
    }

    /// The logarithm of `q` used for all powers in this context.
    pub fn log_q(&self) -> Complex<T> {
        self.log_q
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Context for the base `q^f`, sharing tolerance and term cap.
    pub fn base_power(&self, f: u32) -> Self {
        if f == 1 {
            return *self;
        }
        let log_q = self.log_q * from_usize::<T>(f as usize);
        Self {
            q: log_q.exp(),
            log_q,
            ..*self
        }
    }

    /// `q^z` with the context's logarithm.
    pub fn pow(&self, z: Complex<T>) -> Complex<T> {
        (z * self.log_q).exp()
    }
}

/// A series value with its truncation estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesResult<T> {
    pub value: Complex<T>,
    /// Upper bound on the discarded tail, in absolute terms.
    pub err_estimate: T,
    pub terms_used: usize,
}

impl<T: Real> SeriesResult<T> {
    pub fn exact(value: Complex<T>, terms_used: usize) -> Self {
        Self {
            value,
            err_estimate: T::zero(),
            terms_used,
        }
    }
}

/// Returns `Some(n)` when `z` is exactly the nonnegative integer `n <= limit`.
pub(crate) fn as_small_nonnegative_integer<T: Real>(z: Complex<T>, limit: u32) -> Option<u32> {
    if z.im != T::zero() || z.re < T::zero() || z.re.fract() != T::zero() {
        return None;
    }
    let n = z.re.to_u32()?;
    (n <= limit).then_some(n)
}

fn as_integer<T: Real>(z: Complex<T>) -> Option<i64> {
    if z.im != T::zero() || z.re.fract() != T::zero() {
        return None;
    }
    z.re.to_i64()
}

/// The q-number `[x]_q = (1 - q^x) / (1 - q)`.
///
/// Small nonnegative integers are summed as `1 + q + ... + q^{x-1}`.
pub fn q_number<T: Real>(x: Complex<T>, ctx: &EvalContext<T>) -> Complex<T> {
    if let Some(n) = as_small_nonnegative_integer(x, SMALL_INTEGER_LIMIT) {
        let mut sum = Complex::<T>::zero();
        let mut power = Complex::<T>::one();
        for _ in 0..n {
            sum = sum + power;
            power = power * ctx.q;
        }
        return sum;
    }
    (Complex::<T>::one() - ctx.pow(x)) / (Complex::<T>::one() - ctx.q)
}

/// Principal power `base^exponent = exp(exponent · Log base)`.
///
/// Integer exponents with magnitude at most 64 use repeated multiplication.
pub fn complex_pow<T: Real>(base: Complex<T>, exponent: Complex<T>) -> Result<Complex<T>> {
    if !is_finite(base) || !is_finite(exponent) {
        return Err(Error::Domain("complex_pow needs finite arguments".into()));
    }
    if base.is_zero() {
        return if exponent.re > T::zero() {
            Ok(Complex::<T>::zero())
        } else {
            Err(Error::Domain("0^s requires Re(s) > 0".into()))
        };
    }
    match as_integer(exponent) {
        Some(k) if k.unsigned_abs() <= SMALL_INTEGER_LIMIT as u64 => {
            let p = powu(base, k.unsigned_abs() as u32);
            Ok(if k < 0 { p.inv() } else { p })
        }
        Some(_) => Ok((exponent * base.ln()).exp()),
        None => {
            if base.im == T::zero() && base.re < T::zero() {
                return Err(Error::Branch(format!(
                    "non-integer power of the negative real number {}",
                    base.re
                )));
            }
            Ok((exponent * base.ln()).exp())
        }
    }
}

/// Running generalized binomial coefficients `b_k = s(s+1)...(s+k-1)/k!`.
///
/// `b_k` equals `C(s+k-1, k)`; for `s = -n` the sequence vanishes from `k = n+1` on.
#[derive(Clone, Debug)]
pub struct GenBinomials<T> {
    s: Complex<T>,
    next_k: usize,
    current: Complex<T>,
}

impl<T: Real> GenBinomials<T> {
    pub fn new(s: Complex<T>) -> Self {
        Self {
            s,
            next_k: 0,
            current: Complex::<T>::one(),
        }
    }
}

impl<T: Real> Iterator for GenBinomials<T> {
    type Item = Complex<T>;

    fn next(&mut self) -> Option<Complex<T>> {
        if self.next_k > 0 {
            let k = from_usize::<T>(self.next_k);
            self.current = self.current * (self.s + k - T::one()) / k;
        }
        self.next_k += 1;
        Some(self.current)
    }
}

/// `∏_{j<k} (s+j) / k!`, the coefficient of `z^k` in `(1-z)^{-s}`.
pub fn gen_binomial<T: Real>(s: Complex<T>, k: usize) -> Complex<T> {
    GenBinomials::new(s).nth(k).expect("infinite iterator")
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Complex gamma function (Lanczos, g = 7, nine terms; reflection for Re(s) < 1/2).
pub fn gamma<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    if !is_finite(s) {
        return Err(Error::Domain("gamma needs a finite argument".into()));
    }
    if let Some(k) = as_integer(s) {
        if k <= 0 {
            return Err(Error::Pole(format!("gamma has a pole at s = {k}")));
        }
    }
    let half = lit::<T>(0.5);
    if s.re < half {
        let pi = T::PI();
        let sin = (s * pi).sin();
        return Ok(real(pi) / (sin * lanczos(Complex::<T>::one() - s)));
    }
    Ok(lanczos(s))
}

fn lanczos<T: Real>(s: Complex<T>) -> Complex<T> {
    let z = s - T::one();
    let mut acc = real(lit::<T>(LANCZOS_COEFFS[0]));
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc = acc + real(lit::<T>(c)) / (z + from_usize::<T>(i));
    }
    let t = z + lit::<T>(LANCZOS_G + 0.5);
    let sqrt_two_pi = (T::PI() + T::PI()).sqrt();
    ((z + lit::<T>(0.5)) * t.ln() - t).exp() * acc * sqrt_two_pi
}

/// Checks the standing hypotheses for the continued series: `Re(x · log q) < 0`,
/// i.e. `|q^x| < 1`. For `q` in (0, 1) this is exactly `Re(x) > 0`.
pub fn validate_domain<T: Real>(s: Complex<T>, x: Complex<T>, ctx: &EvalContext<T>) -> Result<()> {
    if !is_finite(s) {
        return Err(Error::Domain("s must be finite".into()));
    }
    if !is_finite(x) {
        return Err(Error::Domain("x must be finite".into()));
    }
    if (x * ctx.log_q).re >= T::zero() {
        return Err(Error::Domain(format!(
            "Re(x·log q) < 0 required (|q^x| < 1), got x = {}{:+}i",
            x.re, x.im
        )));
    }
    Ok(())
}
