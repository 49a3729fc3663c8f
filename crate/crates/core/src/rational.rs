//! Exact rationals and their string form.
//!
//! [`Rational`] is `num_rational::BigRational`, which keeps values in lowest
//! terms with a positive denominator, so structural equality is value
//! equality. Persisted rationals are always strings: `"p/q"` or `"p"`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or an integer string. Surrounding whitespace is ignored.
pub fn parse(input: &str) -> Result<Rational> {
    let s = input.trim();
    let err = |reason: &str| Error::ParseRational {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    if num.is_empty() || den.is_empty() {
        return Err(err("empty numerator or denominator"));
    }
    let num: BigInt = num.parse().map_err(|_| err("numerator is not an integer"))?;
    let den: BigInt = den.parse().map_err(|_| err("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_vec(items: &[String]) -> Result<Vec<Rational>> {
    items.iter().map(|s| parse(s)).collect()
}

pub fn format_vec(items: &[Rational]) -> Vec<String> {
    items.iter().map(format).collect()
}

/// Least common multiple of the denominators of `values` (1 if empty).
pub fn common_denominator<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a Rational>,
{
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// `value * scale` as an integer. `scale` must be a multiple of the denominator.
pub(crate) fn scaled_integer(value: &Rational, scale: &BigInt) -> BigInt {
    debug_assert!((scale % value.denom()).is_zero());
    value.numer() * (scale / value.denom())
}

/// Approximate value, for display only.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Serde adapter storing a [`Rational`] as a string.
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&super::format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(deserializer)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as an array of strings.
pub mod serde_vec {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(value: &[Rational], serializer: S) -> Result<S::Ok, S::Error> {
        super::format_vec(value).serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(deserializer)?;
        super::parse_vec(&v).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Vec<Rational>>` (rows of coordinates).
pub mod serde_rows {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        value: &[Vec<Rational>],
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = value.iter().map(|r| super::format_vec(r)).collect();
        rows.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(deserializer)?;
        rows.iter()
            .map(|r| super::parse_vec(r))
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)
    }
}
