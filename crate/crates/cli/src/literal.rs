//! Complex literals (`0.5`, `-1.25+0.5i`, `2-3e-2i`) and grid ranges (`a:b:k`).

use qzeta_core::Complex64;

/// Length of the decimal number starting at `s[0]` (digits, optional
/// fraction, optional exponent), or 0 if there is none.
fn decimal_len(s: &[u8]) -> usize {
    let mut i = 0;
    let digits = |s: &[u8], mut i: usize| {
        let start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        (i, i - start)
    };
    let (after_int, int_digits) = digits(s, i);
    i = after_int;
    let mut frac_digits = 0;
    if i < s.len() && s[i] == b'.' {
        let (after_frac, n) = digits(s, i + 1);
        frac_digits = n;
        i = after_frac;
    }
    if int_digits + frac_digits == 0 {
        return 0;
    }
    if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
        let mut j = i + 1;
        if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
            j += 1;
        }
        let (after_exp, n) = digits(s, j);
        if n > 0 {
            i = after_exp;
        }
    }
    i
}

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("malformed number {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("number {s:?} is out of range"))
    }
}

/// Parses `[sign] decimal [(+|-) decimal i]`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let bad = || format!("malformed complex literal {text:?} (expected a, a+bi or a-bi)");
    let s = text.trim().as_bytes();
    let mut i = 0;
    if i < s.len() && (s[i] == b'+' || s[i] == b'-') {
        i += 1;
    }
    let len = decimal_len(&s[i..]);
    if len == 0 {
        return Err(bad());
    }
    let re_end = i + len;
    let re = parse_real(std::str::from_utf8(&s[..re_end]).map_err(|_| bad())?)?;
    if re_end == s.len() {
        return Ok(Complex64::new(re, 0.0));
    }
    if s[re_end] != b'+' && s[re_end] != b'-' {
        return Err(bad());
    }
    let im_len = decimal_len(&s[re_end + 1..]);
    let im_end = re_end + 1 + im_len;
    if im_len == 0 || im_end + 1 != s.len() || s[im_end] != b'i' {
        return Err(bad());
    }
    let im = parse_real(std::str::from_utf8(&s[re_end..im_end]).map_err(|_| bad())?)?;
    Ok(Complex64::new(re, im))
}

/// Shortest round-trip decimal, switching to exponent notation for very large
/// or small magnitudes.
pub fn format_real(v: f64) -> String {
    format!("{v:?}")
}

/// Formats `z` so that [`parse_complex`] returns exactly `z`.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 && z.im.is_sign_positive() {
        return format_real(z.re);
    }
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", format_real(z.re), sign, format_real(z.im.abs()))
}

/// One grid axis: a single value or an inclusive range.
#[derive(Clone, Debug, PartialEq)]
pub enum Axis<V> {
    Fixed(V),
    Range(Vec<V>),
}

impl<V: Clone> Axis<V> {
    pub fn values(&self) -> Vec<V> {
        match self {
            Axis::Fixed(v) => vec![v.clone()],
            Axis::Range(vs) => vs.clone(),
        }
    }

    pub fn is_range(&self) -> bool {
        matches!(self, Axis::Range(_))
    }
}

/// `a:b:k` as `k` evenly spaced points from `a` to `b`, or a single real.
pub fn parse_real_axis(text: &str) -> Result<Axis<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Axis::Fixed(parse_real(v.trim())?)),
        [a, b, k] => {
            let (a, b) = (parse_real(a.trim())?, parse_real(b.trim())?);
            let k: usize = k
                .trim()
                .parse()
                .map_err(|_| format!("malformed point count in range {text:?}"))?;
            if k == 0 {
                return Err(format!("range {text:?} needs at least one point"));
            }
            if k == 1 {
                return Ok(Axis::Range(vec![a]));
            }
            let step = (b - a) / (k - 1) as f64;
            Ok(Axis::Range(
                (0..k)
                    .map(|i| if i == k - 1 { b } else { a + step * i as f64 })
                    .collect(),
            ))
        }
        _ => Err(format!("malformed range {text:?} (expected a:b:k)")),
    }
}

/// A complex literal, or a real range `a:b:k`.
pub fn parse_complex_axis(text: &str) -> Result<Axis<Complex64>, String> {
    if text.contains(':') {
        match parse_real_axis(text)? {
            Axis::Range(vs) => Ok(Axis::Range(
                vs.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            )),
            Axis::Fixed(v) => Ok(Axis::Fixed(Complex64::new(v, 0.0))),
        }
    } else {
        parse_complex(text).map(Axis::Fixed)
    }
}

/// `a:b` as the integers `a..=b`, or a single integer.
pub fn parse_integer_axis(text: &str) -> Result<Axis<u32>, String> {
    let int = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| format!("malformed nonnegative integer {s:?}"))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Axis::Fixed(int(v)?)),
        [a, b] => {
            let (a, b) = (int(a)?, int(b)?);
            if b < a {
                return Err(format!("empty integer range {text:?}"));
            }
            Ok(Axis::Range((a..=b).collect()))
        }
        _ => Err(format!("malformed integer range {text:?} (expected a:b)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn accepted_forms() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(
            parse_complex("-1.25+0.5i").unwrap(),
            Complex64::new(-1.25, 0.5)
        );
        assert_eq!(
            parse_complex("2-3e-2i").unwrap(),
            Complex64::new(2.0, -0.03)
        );
        assert_eq!(parse_complex("+.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(
            parse_complex("1E3+0i").unwrap(),
            Complex64::new(1000.0, 0.0)
        );
        assert_eq!(parse_complex(" 7 ").unwrap(), Complex64::new(7.0, 0.0));
    }

    #[test]
    fn rejected_forms() {
        for bad in [
            "", "i", "2i", "1+i", "1+2", "1+2j", "abc", "1..2", "nan", "inf", "1+2i3", "--1",
            "1e999", ".",
        ] {
            assert!(parse_complex(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(
            parse_real_axis("0:4:5").unwrap(),
            Axis::Range(vec![0.0, 1.0, 2.0, 3.0, 4.0])
        );
        assert_eq!(parse_real_axis("1.5").unwrap(), Axis::Fixed(1.5));
        assert!(parse_real_axis("0:1:0").is_err());
        assert!(parse_real_axis("0:1").is_err());
        assert_eq!(
            parse_integer_axis("0:3").unwrap(),
            Axis::Range(vec![0, 1, 2, 3])
        );
        assert!(parse_integer_axis("3:1").is_err());
        assert!(parse_integer_axis("-1").is_err());
        assert_eq!(parse_complex_axis("0.1:0.3:3").unwrap().values().len(), 3);
        assert_eq!(
            parse_complex_axis("0.4+0.3i").unwrap(),
            Axis::Fixed(Complex64::new(0.4, 0.3))
        );
    }

    proptest! {
        #[test]
        fn format_round_trips(re in -1e6f64..1e6, im in -1e6f64..1e6, tiny in -1e-200f64..1e-200) {
            for z in [Complex64::new(re, im), Complex64::new(tiny, re), Complex64::new(re, 0.0), Complex64::new(re, -0.0)] {
                let back = parse_complex(&format_complex(z)).unwrap();
                prop_assert_eq!(back, z);
            }
        }
    }
}
