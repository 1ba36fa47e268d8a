//! Exponents of `l_p` spaces with exact conjugate arithmetic.
//!
//! An exponent is either a rational `p >= 1` or the symbol infinity. Storing
//! rationals keeps the involution `conjugate(conjugate(p)) == p` exact, which
//! the duality machinery relies on when forming adjoint spaces.

use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::One;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Exponent {
    Finite(Ratio<i64>),
    Infinity,
}

impl Exponent {
    pub fn one() -> Self {
        Exponent::Finite(Ratio::one())
    }

    pub fn two() -> Self {
        Exponent::Finite(Ratio::from_integer(2))
    }

    pub fn infinity() -> Self {
        Exponent::Infinity
    }

    /// Exact rational exponent `num/den`. Fails unless `num/den >= 1`.
    pub fn rational(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidExponent);
        }
        let r = Ratio::new(num, den);
        if r < Ratio::one() {
            return Err(Error::InvalidExponent);
        }
        Ok(Exponent::Finite(r))
    }

    pub fn integer(p: i64) -> Result<Self> {
        Self::rational(p, 1)
    }

    /// The conjugate exponent `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Self {
        match self {
            Exponent::Infinity => Exponent::one(),
            Exponent::Finite(r) if r.is_one() => Exponent::Infinity,
            // p/(p-1), computed in exact rational arithmetic.
            Exponent::Finite(r) => Exponent::Finite(r / (r - Ratio::one())),
        }
    }

    pub fn is_one(self) -> bool {
        matches!(self, Exponent::Finite(r) if r.is_one())
    }

    pub fn is_two(self) -> bool {
        matches!(self, Exponent::Finite(r) if r == Ratio::from_integer(2))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Infinity => write!(f, "inf"),
            Exponent::Finite(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Exponent::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") || s == "∞" {
            return Ok(Exponent::Infinity);
        }
        if let Some((n, d)) = s.split_once('/') {
            let num: i64 = n.trim().parse().map_err(|_| Error::InvalidExponent)?;
            let den: i64 = d.trim().parse().map_err(|_| Error::InvalidExponent)?;
            return Exponent::rational(num, den);
        }
        let num: i64 = s.parse().map_err(|_| Error::InvalidExponent)?;
        Exponent::integer(num)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|_| D::Error::custom(format!("invalid exponent {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_fixed_points_and_limits() {
        assert_eq!(Exponent::two().conjugate(), Exponent::two());
        assert_eq!(Exponent::one().conjugate(), Exponent::Infinity);
        assert_eq!(Exponent::infinity().conjugate(), Exponent::one());
        assert_eq!(
            Exponent::integer(4).unwrap().conjugate(),
            Exponent::rational(4, 3).unwrap()
        );
    }

    #[test]
    fn conjugate_is_an_involution_on_the_grid() {
        let grid = [
            Exponent::one(),
            Exponent::rational(4, 3).unwrap(),
            Exponent::rational(3, 2).unwrap(),
            Exponent::two(),
            Exponent::integer(3).unwrap(),
            Exponent::integer(4).unwrap(),
            Exponent::infinity(),
        ];
        for p in grid {
            assert_eq!(p.conjugate().conjugate(), p);
        }
    }

    #[test]
    fn rejects_exponents_below_one() {
        assert!(Exponent::rational(1, 2).is_err());
        assert!(Exponent::integer(0).is_err());
    }

    #[test]
    fn parses_and_prints() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("4/3".parse::<Exponent>().unwrap(), Exponent::rational(4, 3).unwrap());
        assert_eq!(Exponent::rational(4, 3).unwrap().to_string(), "4/3");
        assert_eq!(Exponent::two().to_string(), "2");
    }
}
