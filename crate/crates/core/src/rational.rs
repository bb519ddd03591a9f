//! Arbitrary-precision rationals and their canonical text form.
//!
//! Canonical form is `p/q` with `q > 0` and `gcd(p, q) = 1`, or plain `p` when
//! `q = 1`. `num_rational` keeps values normalized after every operation, so
//! `Display` already produces it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `p/q`; panics on `q = 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p` or `p/q`. The denominator must be a positive integer without a
/// sign; the result is normalized.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let numer: BigInt = num
        .parse()
        .map_err(|_| format!("invalid numerator {num:?} in {s:?}"))?;
    let denom = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("invalid denominator {d:?} in {s:?}"));
            }
            let d: BigInt = d.parse().map_err(|_| format!("invalid denominator in {s:?}"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            d
        }
    };
    Ok(Rational::new(numer, denom))
}

/// Smallest positive multiple of `v` with integer, coprime entries. Returns the
/// zero vector unchanged.
pub fn primitive_integer_multiple(v: &[Rational]) -> Vec<Rational> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    scaled
        .into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values
        .into_iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

pub(crate) fn serialize_rational<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn serialize_rationals<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub(crate) fn serialize_opt_rational<S: Serializer>(
    v: &Option<Rational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    v.as_ref().map(|x| x.to_string()).serialize(s)
}

pub(crate) fn serialize_opt_rationals<S: Serializer>(
    v: &Option<Vec<Rational>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    v.as_ref()
        .map(|xs| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>())
        .serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-2/4").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational(" 1/3 ").unwrap().to_string(), "1/3");
        assert_eq!(ratio(4, 2).to_string(), "2");
        assert_eq!(ratio(1, -2).to_string(), "-1/2");
    }

    #[test]
    fn rejects_bad_denominators() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("1/").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn primitive_multiple() {
        let v = vec![ratio(-2, 3), ratio(1, 3), ratio(1, 3)];
        assert_eq!(primitive_integer_multiple(&v), vec![int(-2), int(1), int(1)]);
        let z = vec![int(0), int(0)];
        assert_eq!(primitive_integer_multiple(&z), z);
    }
}
