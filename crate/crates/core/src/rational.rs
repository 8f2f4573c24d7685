//! Exact rationals and the extended line `Q ∪ {−∞, +∞}`.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or an integer string. Whitespace around the value is ignored.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let parsed = Rational::from_str(trimmed)
        .map_err(|_| Error::MalformedSpec(format!("`{text}` is not a rational (expected \"p/q\" or an integer)")))?;
    Ok(parsed)
}

/// Fully reduced `p/q`, or `p` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// A value in `Q ∪ {−∞, +∞}` with the usual order `−∞ < q < +∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Extended {
    pub fn zero() -> Self {
        Extended::Finite(Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Extended::Finite(int(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Extended::Finite(q) if q.is_zero())
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Extended::NegInf => false,
            Extended::Finite(q) => !q.is_negative(),
            Extended::PosInf => true,
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(q) => Some(q),
            _ => None,
        }
    }

    /// Sum with infinities absorbing; `None` for `+∞ + −∞`.
    pub fn checked_add(&self, other: &Extended) -> Option<Extended> {
        use Extended::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
        }
    }

    /// `self − other`; `None` when both sides are the same infinity.
    pub fn checked_sub(&self, other: &Extended) -> Option<Extended> {
        self.checked_add(&-other.clone())
    }

    /// `r · self` with the convention `0 · ∞ = 0`.
    pub fn scale(&self, r: &Rational) -> Extended {
        use Extended::*;
        if r.is_zero() {
            return Extended::zero();
        }
        match self {
            Finite(q) => Finite(q * r),
            PosInf if r.is_positive() => PosInf,
            PosInf => NegInf,
            NegInf if r.is_positive() => NegInf,
            NegInf => PosInf,
        }
    }

    pub fn parse(text: &str) -> Result<Extended> {
        match text.trim() {
            "inf" | "+inf" | "∞" | "+∞" => Ok(Extended::PosInf),
            "-inf" | "−∞" | "-∞" => Ok(Extended::NegInf),
            other => parse_rational(other).map(Extended::Finite),
        }
    }

    /// Sum of a sequence, `None` if opposite infinities meet.
    pub fn checked_sum<'a>(values: impl IntoIterator<Item = &'a Extended>) -> Option<Extended> {
        values
            .into_iter()
            .try_fold(Extended::zero(), |acc, v| acc.checked_add(v))
    }
}

impl From<Rational> for Extended {
    fn from(q: Rational) -> Self {
        Extended::Finite(q)
    }
}

impl Neg for Extended {
    type Output = Extended;

    fn neg(self) -> Extended {
        match self {
            Extended::NegInf => Extended::PosInf,
            Extended::PosInf => Extended::NegInf,
            Extended::Finite(q) => Extended::Finite(-q),
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::PosInf => f.write_str("inf"),
            Extended::Finite(q) => f.write_str(&format_rational(q)),
        }
    }
}

/// Harmonic number `1 + 1/2 + … + 1/k`.
pub fn harmonic(k: u32) -> Rational {
    (1..=k).fold(Rational::zero(), |acc, i| acc + Rational::one() / int(i as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_reduced() {
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_rational(&parse_rational("-8/4").unwrap()), "-2");
        assert_eq!(format_rational(&parse_rational(" 7 ").unwrap()), "7");
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn extended_order_and_arithmetic() {
        let two = Extended::from_int(2);
        assert!(Extended::NegInf < two && two < Extended::PosInf);
        assert_eq!(Extended::PosInf.checked_add(&Extended::NegInf), None);
        assert_eq!(two.checked_add(&Extended::PosInf), Some(Extended::PosInf));
        assert_eq!(Extended::PosInf.scale(&int(0)), Extended::zero());
        assert_eq!(Extended::PosInf.scale(&int(-3)), Extended::NegInf);
        assert_eq!(Extended::parse("-inf").unwrap(), Extended::NegInf);
        assert_eq!(Extended::parse("5/10").unwrap().to_string(), "1/2");
    }

    #[test]
    fn harmonic_milestones() {
        assert_eq!(harmonic(1), int(1));
        assert_eq!(harmonic(3), rat(11, 6));
        assert_eq!(harmonic(12), rat(86021, 27720));
    }
}
