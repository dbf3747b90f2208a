//! Dirichlet characters of odd modulus, stored as explicit value tables.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, real, Real};

/// Largest modulus accepted for table construction (validation is quadratic in `f`).
pub const MAX_MODULUS: u32 = 5_000;

const TABLE_TOL: f64 = 1e-12;

/// External description of a character, as read from a character file.
///
/// ```json
/// {"modulus": 3, "values": [[0, 0], [1, 0], [-1, 0]]}
/// {"modulus": 5, "index": 1}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharacterSpec {
    Table {
        modulus: u32,
        values: Vec<[f64; 2]>,
    },
    Generator {
        modulus: u32,
        index: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        primitive_root: Option<u32>,
    },
}

impl CharacterSpec {
    pub fn modulus(&self) -> u32 {
        match self {
            CharacterSpec::Table { modulus, .. } | CharacterSpec::Generator { modulus, .. } => {
                *modulus
            }
        }
    }
}

/// A Dirichlet character modulo an odd `f`, extended periodically to all `m >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletCharacter<T> {
    modulus: u32,
    values: Vec<Complex<T>>,
    order: u32,
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    (2..)
        .take_while(|d| d * d <= n)
        .all(|d| !n.is_multiple_of(d))
}

fn check_modulus(f: u32) -> Result<()> {
    if f == 0 || f.is_multiple_of(2) {
        return Err(Error::Validation(format!(
            "modulus must be odd and positive, got {f}"
        )));
    }
    if f > MAX_MODULUS {
        return Err(Error::Validation(format!(
            "modulus {f} exceeds the supported maximum {MAX_MODULUS}"
        )));
    }
    Ok(())
}

fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc
}

/// Whether `g` generates the unit group modulo the odd prime `p`.
pub fn is_primitive_root(g: u32, p: u32) -> bool {
    if p < 3 || g.is_multiple_of(p) {
        return false;
    }
    let phi = (p - 1) as u64;
    let mut m = phi;
    let mut d = 2;
    let mut factors = Vec::new();
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    factors
        .iter()
        .all(|&q| mod_pow(g as u64, phi / q, p as u64) != 1)
}

pub fn least_primitive_root(p: u32) -> Option<u32> {
    (2..p).find(|&g| is_primitive_root(g, p))
}

/// `exp(2πi k / n)`, exact at the quarter turns.
fn root_of_unity<T: Real>(k: u64, n: u64) -> Complex<T> {
    let k = k % n;
    if (4 * k).is_multiple_of(n) {
        return match 4 * k / n {
            0 => Complex::<T>::one(),
            1 => Complex::i(),
            2 => real(-T::one()),
            _ => -Complex::i(),
        };
    }
    let angle = (T::PI() + T::PI()) * from_usize::<T>(k as usize) / from_usize::<T>(n as usize);
    Complex::new(angle.cos(), angle.sin())
}

impl<T: Real> DirichletCharacter<T> {
    /// Builds and validates a character from its external description.
    pub fn new(spec: &CharacterSpec) -> Result<Self> {
        match spec {
            CharacterSpec::Table { modulus, values } => {
                let values = values
                    .iter()
                    .map(|&[re, im]| Complex::new(lit(re), lit(im)))
                    .collect();
                Self::from_table(*modulus, values)
            }
            CharacterSpec::Generator {
                modulus,
                index,
                primitive_root,
            } => Self::from_generator(*modulus, *index, *primitive_root),
        }
    }

    /// Validates an explicit value table (index `a` holds `χ(a)`).
    pub fn from_table(modulus: u32, values: Vec<Complex<T>>) -> Result<Self> {
        check_modulus(modulus)?;
        let f = modulus as usize;
        if values.len() != f {
            return Err(Error::Validation(format!(
                "table length: expected {f} values for modulus {f}, got {}",
                values.len()
            )));
        }
        let tol = lit::<T>(TABLE_TOL);
        for (a, v) in values.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Validation(format!(
                    "finiteness: χ({a}) is not finite"
                )));
            }
            if gcd(a as u64, f as u64) > 1 {
                if v.norm() > tol {
                    return Err(Error::Validation(format!(
                        "vanishing: χ({a}) must be 0 since gcd({a}, {f}) > 1"
                    )));
                }
            } else if (v.norm() - T::one()).abs() > tol {
                return Err(Error::Validation(format!(
                    "unimodularity: |χ({a})| must be 1"
                )));
            }
        }
        let unit_index = if f == 1 { 0 } else { 1 };
        if (values[unit_index] - Complex::<T>::one()).norm() > tol {
            return Err(Error::Validation(format!(
                "normalization: χ({unit_index}) must be 1"
            )));
        }
        for a in 0..f {
            for b in a..f {
                let lhs = values[a * b % f];
                if (lhs - values[a] * values[b]).norm() > tol {
                    return Err(Error::Validation(format!(
                        "multiplicativity: χ({a}·{b} mod {f}) ≠ χ({a})·χ({b})"
                    )));
                }
            }
        }
        let order = Self::compute_order(&values, f)?;
        Ok(Self {
            modulus,
            values,
            order,
        })
    }

    fn compute_order(values: &[Complex<T>], f: usize) -> Result<u32> {
        let tol = lit::<T>(TABLE_TOL);
        let units: Vec<Complex<T>> = (0..f)
            .filter(|&a| gcd(a as u64, f as u64) == 1)
            .map(|a| values[a])
            .collect();
        let mut powers = units.clone();
        for m in 1..=units.len().max(1) as u32 {
            if powers
                .iter()
                .all(|p| (*p - Complex::<T>::one()).norm() <= tol)
            {
                return Ok(m);
            }
            for (p, u) in powers.iter_mut().zip(&units) {
                *p = *p * *u;
            }
        }
        Err(Error::Validation(
            "order: no power of the character is principal".into(),
        ))
    }

    /// The character mod the odd prime `modulus` sending `g^t` to `exp(2πi·index·t/(p-1))`.
    ///
    /// `g` is `primitive_root` if supplied, otherwise the least primitive root.
    pub fn from_generator(modulus: u32, index: u32, primitive_root: Option<u32>) -> Result<Self> {
        check_modulus(modulus)?;
        if !is_prime(modulus) {
            return Err(Error::Validation(format!(
                "generator form requires an odd prime modulus, got {modulus}"
            )));
        }
        let phi = modulus - 1;
        if index >= phi {
            return Err(Error::Validation(format!(
                "character index must satisfy 0 <= j < {phi}, got {index}"
            )));
        }
        let g = match primitive_root {
            Some(g) if is_primitive_root(g, modulus) => g,
            Some(g) => {
                return Err(Error::Validation(format!(
                    "{g} is not a primitive root modulo {modulus}"
                )));
            }
            None => least_primitive_root(modulus).expect("odd primes have primitive roots"),
        };
        let p = modulus as u64;
        let mut values = vec![Complex::<T>::zero(); modulus as usize];
        let mut power = 1u64;
        for t in 0..phi as u64 {
            values[power as usize] = root_of_unity(index as u64 * t, phi as u64);
            power = power * g as u64 % p;
        }
        let order = phi / gcd(index as u64, phi as u64) as u32;
        Ok(Self {
            modulus,
            values,
            order,
        })
    }

    /// `χ(a) = 1` for `gcd(a, f) = 1`, else 0.
    pub fn principal(modulus: u32) -> Result<Self> {
        check_modulus(modulus)?;
        let values = (0..modulus as u64)
            .map(|a| {
                if gcd(a, modulus as u64) == 1 {
                    Complex::<T>::one()
                } else {
                    Complex::<T>::zero()
                }
            })
            .collect();
        Ok(Self {
            modulus,
            values,
            order: 1,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// Smallest `m` with `χ^m` principal.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    /// `χ(m)` for any `m >= 0` by periodicity.
    pub fn at(&self, m: u64) -> Complex<T> {
        self.values[(m % self.modulus as u64) as usize]
    }

    /// The signed weights `w(a) = χ(a)(-1)^a`, `a = 0..f`.
    pub fn signed_weights(&self) -> Vec<Complex<T>> {
        self.values
            .iter()
            .enumerate()
            .map(|(a, &v)| if a % 2 == 0 { v } else { -v })
            .collect()
    }

    pub fn to_spec(&self) -> CharacterSpec {
        CharacterSpec::Table {
            modulus: self.modulus,
            values: self
                .values
                .iter()
                .map(|v| {
                    [
                        v.re.to_f64().unwrap_or(f64::NAN),
                        v.im.to_f64().unwrap_or(f64::NAN),
                    ]
                })
                .collect(),
        }
    }
}

/// `χ(m)`; free-function form of [`DirichletCharacter::at`].
pub fn chi_at<T: Real>(chi: &DirichletCharacter<T>, m: u64) -> Complex<T> {
    chi.at(m)
}

/// All `p - 1` characters modulo the odd prime `p`; index 0 is principal.
pub fn enumerate_prime_characters<T: Real>(p: u32) -> Result<Vec<DirichletCharacter<T>>> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::Validation(format!(
            "enumeration requires an odd prime modulus, got {p}"
        )));
    }
    check_modulus(p)?;
    (0..p - 1)
        .map(|j| DirichletCharacter::from_generator(p, j, None))
        .collect()
}

/// Weights of the aggregated conductor sum.
///
/// Returns `W` with `W[σ] = Σ_{a_1+…+a_r = σ} w(a_1)…w(a_r)`, the `r`-fold
/// convolution of `w`, of length `r(len(w) - 1) + 1`.
pub fn conductor_weights<T: Real>(w: &[Complex<T>], r: u32) -> Vec<Complex<T>> {
    assert!(!w.is_empty() && r >= 1);
    let mut acc = w.to_vec();
    for _ in 1..r {
        let mut next = vec![Complex::<T>::zero(); acc.len() + w.len() - 1];
        for (i, &a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in w.iter().enumerate() {
                next[i + j] = next[i + j] + a * b;
            }
        }
        acc = next;
    }
    acc
}

/// Signed weights `(-1)^a`, `a = 0..f`, of the character-free distribution sum.
pub fn alternating_weights<T: Real>(f: u32) -> Vec<Complex<T>> {
    (0..f)
        .map(|a| {
            if a % 2 == 0 {
                Complex::<T>::one()
            } else {
                real(-T::one())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;
    type Chi = DirichletCharacter<f64>;

    fn table(f: u32, vals: &[(f64, f64)]) -> CharacterSpec {
        CharacterSpec::Table {
            modulus: f,
            values: vals.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    #[test]
    fn table_examples() {
        let chi = Chi::new(&table(3, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0)])).unwrap();
        assert!(chi.is_principal());
        assert_eq!(chi, Chi::principal(3).unwrap());
        let chi = Chi::new(&table(3, &[(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0)])).unwrap();
        assert_eq!(chi.order(), 2);
        let err = Chi::new(&table(2, &[(0.0, 0.0), (1.0, 0.0)])).unwrap_err();
        assert!(err.to_string().contains("odd"));
    }

    #[test]
    fn table_validation_names_violated_invariant() {
        let cases: [(CharacterSpec, &str); 5] = [
            (table(3, &[(0.0, 0.0), (1.0, 0.0)]), "table length"),
            (table(3, &[(0.5, 0.0), (1.0, 0.0), (1.0, 0.0)]), "vanishing"),
            (
                table(3, &[(0.0, 0.0), (1.0, 0.0), (0.5, 0.0)]),
                "unimodularity",
            ),
            (
                table(3, &[(0.0, 0.0), (-1.0, 0.0), (1.0, 0.0)]),
                "normalization",
            ),
            (
                table(
                    5,
                    &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 0.0), (-1.0, 0.0)],
                ),
                "multiplicativity",
            ),
        ];
        for (spec, needle) in cases {
            let msg = Chi::new(&spec).unwrap_err().to_string();
            assert!(msg.contains(needle), "{msg} should mention {needle}");
        }
    }

    #[test]
    fn principal_examples() {
        assert_eq!(Chi::principal(1).unwrap().values(), &[C::one()]);
        let p9 = Chi::principal(9).unwrap();
        let expected = [0., 1., 1., 0., 1., 1., 0., 1., 1.];
        assert!(p9
            .values()
            .iter()
            .zip(expected)
            .all(|(v, e)| *v == C::new(e, 0.0)));
        assert!(Chi::principal(4).is_err());
        assert!(Chi::principal(0).is_err());
    }

    #[test]
    fn chi_at_is_periodic() {
        let chi = Chi::new(&table(3, &[(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0)])).unwrap();
        assert_eq!(chi_at(&chi, 5), C::new(-1.0, 0.0));
        assert_eq!(chi_at(&chi, 3), C::zero());
        assert_eq!(chi_at(&Chi::principal(1).unwrap(), 7), C::one());
    }

    #[test]
    fn enumeration_examples() {
        let mod3 = enumerate_prime_characters::<f64>(3).unwrap();
        assert_eq!(mod3.len(), 2);
        assert!(mod3[0].is_principal());
        assert_eq!(mod3[1].values(), &[C::zero(), C::one(), C::new(-1.0, 0.0)]);

        let mod5 = enumerate_prime_characters::<f64>(5).unwrap();
        assert_eq!(mod5.len(), 4);
        let quartic: Vec<_> = mod5.iter().filter(|c| c.order() == 4).collect();
        assert_eq!(quartic.len(), 2);
        for c in quartic {
            let v = c.at(2);
            assert!(v == C::i() || v == -C::i());
        }
        assert!(enumerate_prime_characters::<f64>(9).is_err());
        assert!(enumerate_prime_characters::<f64>(2).is_err());
    }

    #[test]
    fn enumerated_characters_are_valid_and_distinct() {
        for p in [3u32, 5, 7, 11, 13] {
            let chars = enumerate_prime_characters::<f64>(p).unwrap();
            assert_eq!(chars.len() as u32, p - 1);
            for (i, c) in chars.iter().enumerate() {
                let f = p as usize;
                for a in 0..f {
                    for b in 0..f {
                        let d = c.values()[a * b % f] - c.values()[a] * c.values()[b];
                        assert!(d.norm() <= 1e-12);
                    }
                }
                let total: C = c.values().iter().sum();
                if !c.is_principal() {
                    assert!(total.norm() <= 1e-10);
                }
                let again = Chi::new(&c.to_spec()).unwrap();
                assert!(again
                    .values()
                    .iter()
                    .zip(c.values())
                    .all(|(a, b)| (a - b).norm() <= 1e-14));
                assert_eq!(again.order(), c.order());
                for other in &chars[..i] {
                    assert_ne!(other.values(), c.values());
                }
            }
        }
    }

    #[test]
    fn generator_errors() {
        assert!(Chi::from_generator(9, 1, None).is_err());
        assert!(Chi::from_generator(5, 4, None).is_err());
        let msg = Chi::from_generator(7, 1, Some(2)).unwrap_err().to_string();
        assert!(msg.contains("primitive root"));
        assert!(Chi::from_generator(7, 1, Some(3)).is_ok());
    }

    #[test]
    fn spec_json_forms() {
        let t: CharacterSpec =
            serde_json::from_str(r#"{"modulus": 3, "values": [[0, 0], [1, 0], [-1, 0]]}"#).unwrap();
        assert!(matches!(t, CharacterSpec::Table { modulus: 3, .. }));
        let g: CharacterSpec = serde_json::from_str(r#"{"modulus": 5, "index": 1}"#).unwrap();
        assert_eq!(
            g,
            CharacterSpec::Generator {
                modulus: 5,
                index: 1,
                primitive_root: None
            }
        );
        let chi = Chi::new(&g).unwrap();
        assert_eq!(chi.order(), 4);
    }

    #[test]
    fn conductor_weights_match_enumeration() {
        let chi = &enumerate_prime_characters::<f64>(5).unwrap()[1];
        let w = chi.signed_weights();
        for r in 1..=3u32 {
            let agg = conductor_weights(&w, r);
            let mut brute = vec![C::zero(); agg.len()];
            let f = 5usize;
            for idx in 0..f.pow(r) {
                let (mut rest, mut sigma, mut prod) = (idx, 0, C::one());
                for _ in 0..r {
                    let a = rest % f;
                    rest /= f;
                    sigma += a;
                    prod *= w[a];
                }
                brute[sigma] += prod;
            }
            for (a, b) in agg.iter().zip(&brute) {
                assert!((a - b).norm() < 1e-13);
            }
        }
        let counts = conductor_weights(&alternating_weights::<f64>(3), 2);
        let expected = [1.0, -2.0, 3.0, -2.0, 1.0];
        assert!(counts
            .iter()
            .zip(expected)
            .all(|(c, e)| *c == C::new(e, 0.0)));
    }
}
