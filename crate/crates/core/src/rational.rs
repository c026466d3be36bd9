//! Exact rational lengths.
//!
//! Every metric quantity in the crate is a [`Rat`]. Graph kernels work on
//! integers scaled by the common denominator of the edge lengths and convert
//! back at the boundary, so no floating point ever enters a metric query.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rat = num_rational::Rational64;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n)
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// Parses `"3"`, `"-2/5"`, or a finite decimal such as `"1.25"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: i64 = match int.trim_start_matches(['-', '+']) {
            "" => 0,
            digits => digits.parse().map_err(|_| bad())?,
        };
        let denom = 10i64.pow(frac.len() as u32);
        let frac_part: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = int_part
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac_part))
            .ok_or_else(bad)?;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(Rat::new(numer, denom));
    }
    s.parse::<i64>().map(Rat::from_integer).map_err(|_| bad())
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Smallest fraction with denominator at most `max_denom` that is `>= x`.
pub fn round_up_to_lattice(x: Rat, max_denom: i64) -> Rat {
    if x <= Rat::zero() {
        return Rat::zero();
    }
    (1..=max_denom)
        .map(|q| {
            let scaled = x * Rat::from_integer(q);
            Rat::new(scaled.ceil().to_integer(), q)
        })
        .min()
        .expect("max_denom >= 1")
}

pub(crate) fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

pub(crate) fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}

/// Serde adapter: a rational written as a JSON string (`"p/q"` or decimal)
/// or a JSON integer.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatRepr(pub Rat);

impl fmt::Debug for RatRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rat(&self.0))
    }
}

impl Serialize for RatRepr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatRepr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(n) => Ok(RatRepr(Rat::from_integer(n))),
            Raw::Str(s) => parse_rat(&s).map(RatRepr).map_err(de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rat("3").unwrap(), rat(3));
        assert_eq!(parse_rat("-2/6").unwrap(), ratio(-1, 3));
        assert_eq!(parse_rat("1.25").unwrap(), ratio(5, 4));
        assert_eq!(parse_rat("-0.5").unwrap(), ratio(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("1.").is_err());
    }

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(format_rat(&rat(4)), "4");
        assert_eq!(format_rat(&ratio(3, 6)), "1/2");
    }

    #[test]
    fn lattice_rounding_picks_smallest_fraction_above() {
        assert_eq!(round_up_to_lattice(rat(0), 8), rat(0));
        assert_eq!(round_up_to_lattice(ratio(1, 8), 8), ratio(1, 8));
        // 0.3 -> 1/3 (0.333) beats 3/8 (0.375)
        assert_eq!(round_up_to_lattice(ratio(3, 10), 8), ratio(1, 3));
        assert_eq!(round_up_to_lattice(ratio(9, 10), 8), rat(1));
        assert_eq!(round_up_to_lattice(ratio(7, 3), 8), ratio(7, 3));
    }
}
