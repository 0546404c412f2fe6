//! Concrete Stokes circles and the action of basic operations on their
//! formal invariants.
//!
//! A circle is a located Puiseux-exponent polynomial; only its formal
//! invariants (location, ramification, irregularity, slope, level datum) are
//! contract-relevant. Twists shift the polynomial termwise, Möbius maps
//! relocate it, and the Fourier transform acts on the invariants through the
//! five-case stationary-phase rule. Coefficients are carried as exact
//! Gaussian rationals but are bookkeeping only: they are never transported
//! analytically.

use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::levels::{ExponentSet, LevelDatum};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircleError {
    #[error("term exponent {0} is not positive")]
    NonPositiveExponent(Rational),
    #[error("twist exponent {0} is not an integer")]
    InvalidTwist(Rational),
    #[error("inconsistent formal invariants: {0}")]
    Inconsistent(String),
    #[error("expected a circle at infinity of slope > 1")]
    SlopeNotAboveOne,
}

/// An exact complex scalar: a pair of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Complex {
    pub re: Rational,
    pub im: Rational,
}

impl Complex {
    pub fn new(re: Rational, im: Rational) -> Self {
        Complex { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Complex { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        Complex::real(Rational::zero())
    }

    pub fn one() -> Self {
        Complex::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn neg(&self) -> Self {
        Complex { re: -&self.re, im: -&self.im }
    }

    pub fn add(&self, other: &Self) -> Self {
        Complex {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }
}

/// Text form: `0`, `3/2`, `i`, `-2i`, `1+2i`, `1-1/2i`.
impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let imag = |f: &mut fmt::Formatter<'_>, im: &Rational, lead_sign: bool| {
            let abs = im.abs();
            let sign = if im.is_positive() {
                if lead_sign { "" } else { "+" }
            } else {
                "-"
            };
            if abs == Rational::one() {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{abs}i")
            }
        };
        if self.re.is_zero() {
            imag(f, &self.im, true)
        } else {
            write!(f, "{}", self.re)?;
            imag(f, &self.im, false)
        }
    }
}

/// A point of the projective line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Infinity,
    Finite(Complex),
}

impl Location {
    pub fn origin() -> Self {
        Location::Finite(Complex::zero())
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Location::Infinity)
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Infinity => f.write_str("inf"),
            Location::Finite(a) => write!(f, "{a}"),
        }
    }
}

/// Location attached to formal invariants. The Fourier transform of a
/// slope-one factor lands at its linear coefficient, which is symbolic when
/// the caller supplied invariants without tracking that coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantLocation {
    Infinity,
    Finite(Complex),
    FiniteUnknown,
}

impl InvariantLocation {
    pub fn is_infinity(&self) -> bool {
        matches!(self, InvariantLocation::Infinity)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinity()
    }
}

impl From<&Location> for InvariantLocation {
    fn from(loc: &Location) -> Self {
        match loc {
            Location::Infinity => InvariantLocation::Infinity,
            Location::Finite(a) => InvariantLocation::Finite(a.clone()),
        }
    }
}

impl fmt::Display for InvariantLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantLocation::Infinity => f.write_str("inf"),
            InvariantLocation::Finite(a) => write!(f, "{a}"),
            InvariantLocation::FiniteUnknown => f.write_str("finite"),
        }
    }
}

/// One pole term `c · z^{-k}` in the local coordinate at the location
/// (so `z^{5/2}` at infinity means growth of order 5/2 in the global
/// coordinate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub exponent: Rational,
    pub coefficient: Complex,
}

impl Term {
    pub fn new(exponent: Rational, coefficient: Complex) -> Self {
        Term { exponent, coefficient }
    }

    pub fn unit(exponent: Rational) -> Self {
        Term::new(exponent, Complex::one())
    }
}

/// A Stokes circle: a location and a finite list of pole terms with strictly
/// decreasing positive exponents and nonzero coefficients. The empty term
/// list is the tame circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StokesCircle {
    location: Location,
    terms: Vec<Term>,
}

impl StokesCircle {
    /// Builds a circle from raw terms: sorts by decreasing exponent, merges
    /// equal exponents by adding coefficients, and drops exact zeros.
    pub fn new(location: Location, terms: Vec<Term>) -> Result<Self, CircleError> {
        if let Some(bad) = terms.iter().find(|t| !t.exponent.is_positive()) {
            return Err(CircleError::NonPositiveExponent(bad.exponent.clone()));
        }
        let mut terms = terms;
        terms.sort_by(|a, b| b.exponent.cmp(&a.exponent));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last) if last.exponent == term.exponent => {
                    last.coefficient = last.coefficient.add(&term.coefficient);
                }
                _ => merged.push(term),
            }
        }
        merged.retain(|t| !t.coefficient.is_zero());
        Ok(StokesCircle { location, terms: merged })
    }

    /// The tame circle ⟨0⟩ at a location.
    pub fn tame(location: Location) -> Self {
        StokesCircle { location, terms: Vec::new() }
    }

    /// A circle realizing the given level datum: one unit term per level.
    pub fn witness(datum: &LevelDatum, location: Location) -> Self {
        let terms = datum.levels().iter().cloned().map(Term::unit).collect();
        StokesCircle { location, terms }
    }

    pub fn location(&self) -> &Location {
        &self.location
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_tame(&self) -> bool {
        self.terms.is_empty()
    }

    /// Formal invariants: ramification = lcm of exponent denominators,
    /// slope = largest exponent, irregularity = slope · ramification, levels
    /// from the denominator filtration of the exponent set.
    pub fn invariants(&self) -> FormalInvariants {
        let ram = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, t| acc.lcm(t.exponent.denominator()));
        let slope = self
            .terms
            .first()
            .map(|t| t.exponent.clone())
            .unwrap_or_else(Rational::zero);
        let irr = slope.numerator() * (&ram / slope.denominator());
        let exponents = ExponentSet::new(self.terms.iter().map(|t| t.exponent.clone()).collect())
            .expect("circle exponents are positive");
        let levels = LevelDatum::from_exponents(&exponents);
        let linear = match &self.location {
            Location::Infinity => self
                .terms
                .iter()
                .find(|t| t.exponent == Rational::one())
                .map(|t| t.coefficient.clone()),
            Location::Finite(_) => None,
        };
        debug_assert_eq!(levels.ramification(), ram);
        FormalInvariants {
            location: InvariantLocation::from(&self.location),
            ram,
            irr,
            slope,
            levels,
            linear,
        }
    }

    /// Tensors by an unramified rank-one factor: adds the shift terms with
    /// exact cancellation. Levels and ramification are unchanged; the slope
    /// may move.
    pub fn twist(&self, shift: &[Term]) -> Result<StokesCircle, CircleError> {
        for t in shift {
            if !t.exponent.is_integer() {
                return Err(CircleError::InvalidTwist(t.exponent.clone()));
            }
        }
        let combined = self.terms.iter().chain(shift).cloned().collect();
        StokesCircle::new(self.location.clone(), combined)
    }

    /// Moves the circle to another point of the projective line. Ram, slope,
    /// irregularity and levels are preserved; coefficients are carried over
    /// verbatim (only the invariants are contract-relevant).
    pub fn relocate(&self, target: Location) -> StokesCircle {
        StokesCircle {
            location: target,
            terms: self.terms.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circle serializes")
    }
}

/// Text form: `z^{5/3}+z^{1/2}@inf`, `0@0`.
impl fmt::Display for StokesCircle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, t) in self.terms.iter().enumerate() {
            let c = &t.coefficient;
            if c.im.is_zero() && c.re == Rational::one() {
                if i > 0 {
                    f.write_str("+")?;
                }
            } else if c.im.is_zero() && c.re == -&Rational::one() {
                f.write_str("-")?;
            } else if c.im.is_zero() {
                if i > 0 && c.re.is_positive() {
                    f.write_str("+")?;
                }
                write!(f, "{}", c.re)?;
            } else if c.re.is_zero() {
                if i > 0 && c.im.is_positive() {
                    f.write_str("+")?;
                }
                if c.im == Rational::one() {
                    f.write_str("i")?;
                } else if c.im == -&Rational::one() {
                    f.write_str("-i")?;
                } else {
                    write!(f, "{}i", c.im)?;
                }
            } else {
                if i > 0 {
                    f.write_str("+")?;
                }
                write!(f, "({c})")?;
            }
            if t.exponent == Rational::one() {
                f.write_str("z")?;
            } else {
                write!(f, "z^{{{}}}", t.exponent)?;
            }
        }
        write!(f, "@{}", self.location)
    }
}

fn serialize_location_value<S: Serializer>(
    loc: &InvariantLocation,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    match loc {
        InvariantLocation::Infinity => serializer.serialize_str("inf"),
        InvariantLocation::FiniteUnknown => serializer.serialize_str("finite"),
        InvariantLocation::Finite(a) => {
            let mut map = serializer.serialize_map(Some(2))?;
            map.serialize_entry("re", &a.re)?;
            map.serialize_entry("im", &a.im)?;
            map.end()
        }
    }
}

/// JSON form: `{ location, terms: [[expNum, expDen, reNum, reDen, imNum, imDen], …] }`.
impl Serialize for StokesCircle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Sextuple<'a>(&'a Term);
        impl Serialize for Sextuple<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let parts = [
                    self.0.exponent.numerator(),
                    self.0.exponent.denominator(),
                    self.0.coefficient.re.numerator(),
                    self.0.coefficient.re.denominator(),
                    self.0.coefficient.im.numerator(),
                    self.0.coefficient.im.denominator(),
                ];
                let mut seq = serializer.serialize_seq(Some(6))?;
                for p in parts {
                    let v = i64::try_from(p).map_err(|_| {
                        serde::ser::Error::custom("integer exceeds the JSON integer range")
                    })?;
                    seq.serialize_element(&v)?;
                }
                seq.end()
            }
        }

        let mut map = serializer.serialize_map(Some(2))?;
        let loc = InvariantLocation::from(&self.location);
        map.serialize_entry("location", &LocationJson(&loc))?;
        let terms: Vec<Sextuple<'_>> = self.terms.iter().map(Sextuple).collect();
        map.serialize_entry("terms", &terms)?;
        map.end()
    }
}

struct LocationJson<'a>(&'a InvariantLocation);
impl Serialize for LocationJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_location_value(self.0, serializer)
    }
}

/// The formal invariants of a Stokes circle: everything the actions of the
/// basic operations depend on. `slope = irr / ram`, the levels' ramification
/// equals `ram`, and a non-integer slope is always the highest level.
/// `linear` tracks the coefficient of the exponent-1 term at infinity when
/// known; it decides where a slope-≤-1 factor lands under Fourier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalInvariants {
    location: InvariantLocation,
    ram: BigInt,
    irr: BigInt,
    slope: Rational,
    levels: LevelDatum,
    linear: Option<Complex>,
}

impl FormalInvariants {
    pub fn new(
        location: InvariantLocation,
        ram: BigInt,
        irr: BigInt,
        levels: LevelDatum,
        linear: Option<Complex>,
    ) -> Result<Self, CircleError> {
        if !ram.is_positive() {
            return Err(CircleError::Inconsistent(format!(
                "ramification {ram} is not positive"
            )));
        }
        if irr.is_negative() {
            return Err(CircleError::Inconsistent(format!(
                "irregularity {irr} is negative"
            )));
        }
        if levels.ramification() != ram {
            return Err(CircleError::Inconsistent(format!(
                "levels {levels} have ramification {}, expected {ram}",
                levels.ramification()
            )));
        }
        let slope = Rational::new(irr.clone(), ram.clone()).expect("ram is positive");
        if let Some(top) = levels.max_level() {
            if slope < *top {
                return Err(CircleError::Inconsistent(format!(
                    "slope {slope} is below the highest level {top}"
                )));
            }
            if !slope.is_integer() && slope != *top {
                return Err(CircleError::Inconsistent(format!(
                    "non-integer slope {slope} must be the highest level, found {top}"
                )));
            }
        }
        if linear.is_some() && !location.is_infinity() {
            return Err(CircleError::Inconsistent(
                "a linear coefficient is only tracked at infinity".to_owned(),
            ));
        }
        Ok(FormalInvariants {
            location,
            ram,
            irr,
            slope,
            levels,
            linear,
        })
    }

    pub fn location(&self) -> &InvariantLocation {
        &self.location
    }

    pub fn ram(&self) -> &BigInt {
        &self.ram
    }

    pub fn irr(&self) -> &BigInt {
        &self.irr
    }

    pub fn slope(&self) -> &Rational {
        &self.slope
    }

    pub fn levels(&self) -> &LevelDatum {
        &self.levels
    }

    pub fn linear(&self) -> Option<&Complex> {
        self.linear.as_ref()
    }

    pub fn is_tame(&self) -> bool {
        self.irr.is_zero()
    }

    /// Scales the known exponent data by `rho` and refilters. The leading
    /// exponent (the slope) rides along even when it is an integer and hence
    /// not a level: dropping it would lose the levels it creates downstream.
    /// Interior integer exponents never survive the filtration, so the
    /// slope and the levels determine the result.
    fn scaled_levels(&self, rho: &Rational, include_slope: bool) -> LevelDatum {
        let mut exponents: Vec<Rational> = self.levels.levels().to_vec();
        if include_slope && !exponents.contains(&self.slope) {
            exponents.push(self.slope.clone());
        }
        let set = ExponentSet::new(exponents.iter().map(|k| k * rho).collect())
            .expect("scaled exponents stay positive");
        LevelDatum::from_exponents(&set)
    }

    /// The invariants of the Fourier transform of a circle with these
    /// invariants, by the five-case stationary-phase rule:
    ///
    /// 1. `⟨αz⟩` at infinity goes tame at `α`.
    /// 2. Slope ≤ 1 at infinity with a wild sub-linear part of invariants
    ///    `(r, s)` lands at the linear coefficient with `ram = r − s`,
    ///    `irr = s`, levels scaled by `r/(r−s)`.
    /// 3. Slope > 1 at infinity of invariants `(r, s)` stays at infinity
    ///    with `ram = s − r`, `irr = s`, levels scaled by `r/(s−r)`.
    /// 4. A wild circle at finite `a` of invariants `(r, s)` lands at
    ///    infinity with slope ≤ 1, `ram = r + s`, `irr = s`, levels scaled
    ///    by `r/(r+s)`, and linear term `−az` recorded.
    /// 5. Tame at finite `a` goes to `⟨−az⟩` at infinity.
    pub fn fourier_shadow(&self) -> FormalInvariants {
        match &self.location {
            InvariantLocation::Infinity => {
                if self.slope > 1 {
                    // stays at infinity; slope > 1 is preserved
                    let ram = &self.irr - &self.ram;
                    let rho = Rational::new(self.ram.clone(), ram.clone())
                        .expect("slope > 1 means irr > ram");
                    let levels = self.scaled_levels(&rho, true);
                    debug_assert_eq!(levels.ramification(), ram);
                    let slope = Rational::new(self.irr.clone(), ram.clone()).expect("positive");
                    FormalInvariants {
                        location: InvariantLocation::Infinity,
                        ram,
                        irr: self.irr.clone(),
                        slope,
                        levels,
                        linear: None,
                    }
                } else if self.levels.is_empty() {
                    // ⟨αz⟩ (or the tame circle, α = 0): tame at α
                    let target = if self.irr.is_zero() {
                        InvariantLocation::Finite(Complex::zero())
                    } else {
                        match &self.linear {
                            Some(alpha) => InvariantLocation::Finite(alpha.clone()),
                            None => InvariantLocation::FiniteUnknown,
                        }
                    };
                    FormalInvariants {
                        location: target,
                        ram: BigInt::one(),
                        irr: BigInt::zero(),
                        slope: Rational::zero(),
                        levels: LevelDatum::empty(),
                        linear: None,
                    }
                } else {
                    // slope ≤ 1 with a wild sub-linear part: the sub-linear
                    // slope is the highest level, its irregularity s = k0·r
                    let top = self.levels.max_level().expect("nonempty");
                    let sub_irr = top.numerator() * (&self.ram / top.denominator());
                    let ram = &self.ram - &sub_irr;
                    let rho = Rational::new(self.ram.clone(), ram.clone())
                        .expect("sub-linear slope < 1 means s < r");
                    let levels = self.scaled_levels(&rho, false);
                    debug_assert_eq!(levels.ramification(), ram);
                    let target = if self.slope < 1 {
                        // no linear term at all: lands at the origin
                        InvariantLocation::Finite(Complex::zero())
                    } else {
                        match &self.linear {
                            Some(alpha) => InvariantLocation::Finite(alpha.clone()),
                            None => InvariantLocation::FiniteUnknown,
                        }
                    };
                    let slope = Rational::new(sub_irr.clone(), ram.clone()).expect("positive");
                    FormalInvariants {
                        location: target,
                        ram,
                        irr: sub_irr,
                        slope,
                        levels,
                        linear: None,
                    }
                }
            }
            finite => {
                let neg_location = match finite {
                    InvariantLocation::Finite(a) => Some(a.neg()),
                    _ => None,
                };
                if self.irr.is_zero() {
                    // tame at a: ⟨−az⟩ at infinity
                    FormalInvariants {
                        location: InvariantLocation::Infinity,
                        ram: BigInt::one(),
                        irr: BigInt::one(),
                        slope: Rational::one(),
                        levels: LevelDatum::empty(),
                        linear: Some(neg_location.unwrap_or_else(Complex::zero)),
                    }
                } else {
                    // wild at a: slope ≤ 1 at infinity, linear term −az
                    let ram = &self.ram + &self.irr;
                    let rho = Rational::new(self.ram.clone(), ram.clone()).expect("positive");
                    let levels = self.scaled_levels(&rho, true);
                    debug_assert_eq!(levels.ramification(), ram);
                    let slope = Rational::new(self.irr.clone(), ram.clone()).expect("positive");
                    FormalInvariants {
                        location: InvariantLocation::Infinity,
                        ram,
                        irr: self.irr.clone(),
                        slope,
                        levels,
                        linear: neg_location,
                    }
                }
            }
        }
    }

    /// On circles at infinity of slope > 1 the Fourier transform is an
    /// involution on (ram, irr, levels). Checks it for these invariants.
    pub fn fourier_involution_check(&self) -> Result<bool, CircleError> {
        if !self.location.is_infinity() || self.slope <= 1 {
            return Err(CircleError::SlopeNotAboveOne);
        }
        let twice = self.fourier_shadow().fourier_shadow();
        Ok(twice.ram == self.ram && twice.irr == self.irr && twice.levels == self.levels)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("invariants serialize")
    }
}

impl Serialize for FormalInvariants {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(6))?;
        map.serialize_entry("location", &LocationJson(&self.location))?;
        let ram = i64::try_from(&self.ram)
            .map_err(|_| serde::ser::Error::custom("ram exceeds the JSON integer range"))?;
        let irr = i64::try_from(&self.irr)
            .map_err(|_| serde::ser::Error::custom("irr exceeds the JSON integer range"))?;
        map.serialize_entry("ram", &ram)?;
        map.serialize_entry("irr", &irr)?;
        map.serialize_entry("slope", &self.slope)?;
        map.serialize_entry("levels", &self.levels)?;
        match &self.linear {
            Some(a) => map.serialize_entry("linear", &[&a.re, &a.im])?,
            None => map.serialize_entry("linear", &Option::<()>::None)?,
        }
        map.end()
    }
}
