//! Exact rational scalars on unbounded integers.
//!
//! Every quantity in this crate — levels, slopes, scale factors — is a
//! [`Rational`]. There is no floating point anywhere: the filtrations are
//! driven by gcd/lcm arithmetic and a rounding error would silently change
//! which exponents survive.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
}

/// An exact fraction of unbounded integers, stored reduced with a positive
/// denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rational(pub(crate) BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, RationalError> {
        let denom: BigInt = denom.into();
        if denom.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Numerator of the reduced form; carries the sign.
    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    /// Denominator of the reduced form; always ≥ 1.
    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// The value as an integer, when the denominator is 1.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn recip(&self) -> Result<Self, RationalError> {
        if self.is_zero() {
            return Err(RationalError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, RationalError> {
        if rhs.is_zero() {
            return Err(RationalError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }
}

// Instances are always reduced (every constructor goes through Ratio::new),
// so hashing the components is consistent with equality.
impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.numer().hash(state);
        self.0.denom().hash(state);
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &Rational {
    type Output = Rational;

    /// Panics on division by zero; use [`Rational::checked_div`] for the
    /// fallible form.
    fn div(self, rhs: &Rational) -> Rational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer(BigInt::from(*other))))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

/// Text form: `p/q` for non-integers, bare `p` for integers. No spaces.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// JSON form: a `[numerator, denominator]` pair of integers.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let numer = i64::try_from(self.0.numer())
            .map_err(|_| serde::ser::Error::custom("numerator exceeds the JSON integer range"))?;
        let denom = i64::try_from(self.0.denom())
            .map_err(|_| serde::ser::Error::custom("denominator exceeds the JSON integer range"))?;
        let mut tuple = serializer.serialize_tuple(2)?;
        tuple.serialize_element(&numer)?;
        tuple.serialize_element(&denom)?;
        tuple.end()
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PairVisitor;

        impl<'de> Visitor<'de> for PairVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a [numerator, denominator] pair")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Rational, A::Error> {
                let numer: i64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let denom: i64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Rational::new(numer, denom).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_tuple(2, PairVisitor)
    }
}

/// Serializer for `BigInt` fields that must land as plain JSON integers.
pub(crate) fn serialize_bigint<S: Serializer>(n: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    let v = i64::try_from(n)
        .map_err(|_| serde::ser::Error::custom("integer exceeds the JSON integer range"))?;
    serializer.serialize_i64(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn construction_reduces() {
        assert_eq!(rat(4, 2), Rational::integer(2));
        assert_eq!(rat(6, 9), rat(2, 3));
        assert_eq!(rat(1, -2), rat(-1, 2));
        assert_eq!(rat(-1, -2), rat(1, 2));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(Rational::new(1, 0), Err(RationalError::ZeroDenominator));
    }

    #[test]
    fn arithmetic_is_exact() {
        assert_eq!(&rat(1, 2) + &rat(1, 3), rat(5, 6));
        assert_eq!(&rat(1, 2) - &rat(1, 3), rat(1, 6));
        assert_eq!(&rat(2, 3) * &rat(3, 2), Rational::one());
        assert_eq!(&rat(5, 2) / &rat(5, 3), rat(3, 2));
        assert_eq!(
            rat(1, 2).checked_div(&Rational::zero()),
            Err(RationalError::DivisionByZero)
        );
    }

    #[test]
    fn integer_comparisons() {
        assert!(rat(5, 2) > 2);
        assert!(rat(5, 2) < 3);
        assert!(rat(3, 2) > 1);
        assert!(rat(2, 7) < 1);
        assert!(Rational::integer(2) == 2);
    }

    #[test]
    fn display_format() {
        assert_eq!(rat(5, 2).to_string(), "5/2");
        assert_eq!(Rational::integer(7).to_string(), "7");
        assert_eq!(rat(-3, 4).to_string(), "-3/4");
    }

    #[test]
    fn json_pair_round_trip() {
        let k = rat(5, 2);
        let json = serde_json::to_string(&k).unwrap();
        assert_eq!(json, "[5,2]");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, k);
        assert!(serde_json::from_str::<Rational>("[1,0]").is_err());
    }
}
