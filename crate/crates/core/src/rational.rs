//! Exact rational numbers and their textual form.
//!
//! Every probability in the crate is a [`Rational`]. On the wire a rational is
//! a string: `"p/q"`, an integer `"p"`, or a terminating decimal such as
//! `"0.25"`. Output always uses the reduced `p/q` form (integers print bare).

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Parse `p/q`, an integer, or a terminating decimal into an exact rational.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if s.contains("...") || s.contains('(') || s.contains('…') {
        return Err(Error::Parse(format!(
            "`{s}` looks like a repeating decimal; write it as an exact fraction \"p/q\""
        )));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_int(num.trim(), s)?;
        let den = parse_int(den.trim(), s)?;
        if den.is_zero() {
            return Err(Error::Parse(format!("`{s}` has a zero denominator")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let (negative, whole) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        let digits_ok = |t: &str| t.chars().all(|ch| ch.is_ascii_digit());
        if frac.is_empty() || !digits_ok(whole) || !digits_ok(frac) {
            return Err(Error::Parse(format!("`{s}` is not a valid decimal")));
        }
        let whole = if whole.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| Error::Parse(format!("bad decimal `{s}`")))?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac =
            BigInt::from_str(frac).map_err(|_| Error::Parse(format!("bad decimal `{s}`")))?;
        let value = Rational::new(whole * &scale + frac, scale);
        return Ok(if negative { -value } else { value });
    }
    Ok(Rational::from_integer(parse_int(s, s)?))
}

fn parse_int(t: &str, whole: &str) -> Result<BigInt> {
    let body = t.strip_prefix(['-', '+']).unwrap_or(t);
    if body.is_empty() || !body.chars().all(|ch| ch.is_ascii_digit()) {
        return Err(Error::Parse(format!(
            "`{whole}` is not a rational (expected \"p/q\")"
        )));
    }
    BigInt::from_str(t).map_err(|_| Error::Parse(format!("`{whole}` is not a rational")))
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && r <= &Rational::one()
}

/// Serde adapter: a rational as its exact string form.
pub mod serde_str {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        Exact::deserialize(d).map(|e| e.0)
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawRational {
        Text(String),
        Int(i64),
    }

    impl RawRational {
        pub(crate) fn into_rational(self) -> Result<Rational, String> {
            match self {
                RawRational::Text(t) => parse_rational(&t).map_err(|e| match e {
                    crate::error::Error::Parse(msg) => msg,
                    other => other.to_string(),
                }),
                RawRational::Int(i) => Ok(super::int(i)),
            }
        }
    }

    /// Converts while still inside the element, so path-tracking
    /// deserializers can point at the offending entry.
    pub(crate) struct Exact(pub(crate) Rational);

    impl<'de> Deserialize<'de> for Exact {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let raw = RawRational::deserialize(d)?;
            raw.into_rational().map(Exact).map_err(de::Error::custom)
        }
    }
}

pub mod serde_vec {
    use serde::{ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    use super::{format_rational, serde_str::Exact, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Ok(Vec::<Exact>::deserialize(d)?
            .into_iter()
            .map(|e| e.0)
            .collect())
    }
}

pub mod serde_matrix {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{format_rational, serde_str::Exact, Rational};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = m
            .iter()
            .map(|row| row.iter().map(format_rational).collect())
            .collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        Ok(Vec::<Vec<Exact>>::deserialize(d)?
            .into_iter()
            .map(|row| row.into_iter().map(|e| e.0).collect())
            .collect())
    }
}

pub mod serde_opt {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, serde_str::Exact, Rational};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Ok(Option::<Exact>::deserialize(d)?.map(|e| e.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/12").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational(" 1 ").unwrap(), int(1));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), ratio(-1, 8));
        assert_eq!(parse_rational("0").unwrap(), int(0));
    }

    #[test]
    fn rejects_repeating_decimals_with_hint() {
        let err = parse_rational("0.333...").unwrap_err().to_string();
        assert!(err.contains("p/q"), "{err}");
        assert!(parse_rational("0.(3)").is_err());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.", "1e-3", "1/2/3", "0x10"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn format_is_reduced() {
        assert_eq!(format_rational(&ratio(2, 8)), "1/4");
        assert_eq!(format_rational(&int(0)), "0");
        assert_eq!(
            parse_rational(&format_rational(&ratio(-7, 21))).unwrap(),
            ratio(-1, 3)
        );
    }
}
