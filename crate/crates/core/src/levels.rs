//! Level data of exponential factors and their numeric invariants.
//!
//! A level datum is the canonical combinatorial shadow of a Stokes circle:
//! the strictly decreasing set of positive non-integer rationals obtained by
//! filtering the circle's exponent set through the running lcm of
//! denominators. This module owns that filtration, the validation of
//! candidate data, the common-denominator form, and the invariants built on
//! it: ramification, the balance `B` (the expected dimension of the
//! associated elementary wild character variety), loop count, scaling with
//! refiltration, and the minimality predicates for both simplification
//! modes.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use serde::de;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rational;

/// Which simplification map applies: the general one, which may relocate the
/// singularity anywhere, or the local one constrained to keep it at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    General,
    Infinity,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::Infinity => "infinity",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("entry {0} is not positive")]
    NonPositive(Rational),
    #[error("level {0} is an integer")]
    IntegerLevel(Rational),
    #[error("duplicate level {0}")]
    Duplicate(Rational),
    #[error("level {0} does not increase the running denominator lcm")]
    FiltrationStall(Rational),
}

/// A finite set of positive rationals, held strictly decreasing: the
/// exponents of a Puiseux polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentSet(Vec<Rational>);

impl ExponentSet {
    /// Builds the set from arbitrary entries: sorts decreasingly, drops
    /// repeats, and rejects non-positive values.
    pub fn new(entries: Vec<Rational>) -> Result<Self, ValidationError> {
        if let Some(bad) = entries.iter().find(|e| !e.is_positive()) {
            return Err(ValidationError::NonPositive(bad.clone()));
        }
        let mut entries = entries;
        entries.sort();
        entries.dedup();
        entries.reverse();
        Ok(ExponentSet(entries))
    }

    pub fn empty() -> Self {
        ExponentSet(Vec::new())
    }

    /// The exponents in strictly decreasing order.
    pub fn exponents(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The denominator filtration: scan a strictly decreasing list of positive
/// rationals and keep an entry exactly when its denominator strictly
/// increases the running lcm of the kept denominators. Integers (denominator
/// 1) are never kept.
fn filtration(descending: &[Rational]) -> Vec<Rational> {
    let mut kept = Vec::new();
    let mut running_lcm = BigInt::one();
    for e in descending {
        let next = running_lcm.lcm(e.denominator());
        if next > running_lcm {
            kept.push(e.clone());
            running_lcm = next;
        }
    }
    kept
}

/// A level datum: a strictly decreasing, possibly empty list of positive
/// non-integer rationals whose running lcm of denominators strictly
/// increases. The empty datum belongs to the unramified (tame) circles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LevelDatum(Vec<Rational>);

impl LevelDatum {
    pub fn empty() -> Self {
        LevelDatum(Vec::new())
    }

    /// The level datum of a circle with the given exponent set: the sub-list
    /// selected by the denominator filtration.
    pub fn from_exponents(exponents: &ExponentSet) -> Self {
        LevelDatum(filtration(exponents.exponents()))
    }

    /// Validates a candidate list. The entries are sorted decreasingly and
    /// checked against every invariant; the first violation is reported.
    /// Exactly the outputs of [`LevelDatum::from_exponents`] are accepted.
    pub fn new(levels: Vec<Rational>) -> Result<Self, ValidationError> {
        let mut levels = levels;
        levels.sort();
        levels.reverse();
        let mut running_lcm = BigInt::one();
        for (i, k) in levels.iter().enumerate() {
            if !k.is_positive() {
                return Err(ValidationError::NonPositive(k.clone()));
            }
            if k.is_integer() {
                return Err(ValidationError::IntegerLevel(k.clone()));
            }
            if i > 0 && levels[i - 1] == *k {
                return Err(ValidationError::Duplicate(k.clone()));
            }
            let next = running_lcm.lcm(k.denominator());
            if next == running_lcm {
                return Err(ValidationError::FiltrationStall(k.clone()));
            }
            running_lcm = next;
        }
        Ok(LevelDatum(levels))
    }

    /// The levels in strictly decreasing order.
    pub fn levels(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// The largest level, or `None` for the empty datum.
    pub fn max_level(&self) -> Option<&Rational> {
        self.0.first()
    }

    /// Ramification order: the lcm of the level denominators; 1 for the
    /// empty datum (the tame circle is unramified).
    pub fn ramification(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, k| acc.lcm(k.denominator()))
    }

    /// The datum written over its common denominator `r`: the strictly
    /// decreasing integer numerators `s_i = k_i * r`, with
    /// `gcd(s_0, …, s_p, r) = 1`.
    pub fn common_denominator_form(&self) -> CommonDenominatorForm {
        let ram = self.ramification();
        let numerators = self
            .0
            .iter()
            .map(|k| k.numerator() * (&ram / k.denominator()))
            .collect();
        CommonDenominatorForm { ram, numerators }
    }

    /// The balance `B`: with `g_{-1} = r` and `g_i = gcd(s_0, …, s_i, r)`,
    ///
    /// ```text
    /// B = Σ (g_{i-1} - g_i) · s_i  -  r² + 1        (B = 0 for the empty datum)
    /// ```
    ///
    /// `B` equals the expected dimension of the elementary wild character
    /// variety attached to the datum, and `B/2` its loop count. Evenness is
    /// asserted rather than assumed; a failure would be a bug in this crate,
    /// not bad input.
    pub fn balance(&self) -> BigInt {
        if self.is_empty() {
            return BigInt::zero();
        }
        let CommonDenominatorForm { ram, numerators } = self.common_denominator_form();
        let mut g = ram.clone();
        let mut b = BigInt::zero();
        for s in &numerators {
            let g_next = g.gcd(s);
            b += (&g - &g_next) * s;
            g = g_next;
        }
        b -= &ram * &ram - 1;
        assert!(b.is_even(), "balance of {self} is odd: {b}");
        b
    }

    /// Loop count of the one-vertex diagram: `balance / 2`.
    pub fn loops(&self) -> BigInt {
        self.balance() / 2
    }

    /// Multiplies every level by `rho > 0` and re-runs the filtration:
    /// scaled values that became integers or no longer increase the
    /// denominator lcm are dropped.
    pub fn scale_refilter(&self, rho: &Rational) -> LevelDatum {
        assert!(rho.is_positive(), "scale factor must be positive");
        let scaled: Vec<Rational> = self.0.iter().map(|k| k * rho).collect();
        LevelDatum(filtration(&scaled))
    }

    /// Fixed-point characterization of the simplification maps: in general
    /// mode the datum is minimal iff it is empty or its highest level
    /// exceeds 2; at infinity also when the highest level is below 1.
    pub fn is_minimal(&self, mode: Mode) -> bool {
        match self.max_level() {
            None => true,
            Some(k) => match mode {
                Mode::General => *k > 2,
                Mode::Infinity => *k > 2 || *k < 1,
            },
        }
    }

    /// Canonical enumeration order: ramification ascending, then the level
    /// sequences compared lexicographically with larger levels first and
    /// longer sequences before their prefixes.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.ramification()
            .cmp(&other.ramification())
            .then_with(|| {
                for (a, b) in self.0.iter().zip(other.0.iter()) {
                    match b.cmp(a) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                other.0.len().cmp(&self.0.len())
            })
    }

    /// ASCII text form: `{}` when empty, otherwise the same as `Display`.
    pub fn to_ascii(&self) -> String {
        if self.is_empty() {
            "{}".to_owned()
        } else {
            self.to_string()
        }
    }
}

/// Human text form: `{k0,k1,...}` in strictly decreasing order, `∅` when
/// empty.
impl fmt::Display for LevelDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("}")
    }
}

/// JSON form: an array of `[numerator, denominator]` pairs, reduced and
/// strictly decreasing.
impl Serialize for LevelDatum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LevelDatum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let entries = Vec::<Rational>::deserialize(deserializer)?;
        let datum = LevelDatum::new(entries).map_err(de::Error::custom)?;
        Ok(datum)
    }
}

/// A level datum over its common denominator: the ramification `r` and the
/// strictly decreasing numerators `s_0 > … > s_p` with
/// `gcd(s_0, …, s_p, r) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonDenominatorForm {
    pub ram: BigInt,
    pub numerators: Vec<BigInt>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn exps(entries: &[(i64, i64)]) -> ExponentSet {
        ExponentSet::new(entries.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    fn datum(entries: &[(i64, i64)]) -> LevelDatum {
        LevelDatum::new(entries.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn filtration_keeps_denominator_growth() {
        let d = LevelDatum::from_exponents(&exps(&[(5, 3), (4, 3), (1, 2)]));
        assert_eq!(d, datum(&[(5, 3), (1, 2)]));
    }

    #[test]
    fn filtration_of_integers_is_empty() {
        let d = LevelDatum::from_exponents(&exps(&[(3, 1), (2, 1), (1, 1)]));
        assert!(d.is_empty());
    }

    #[test]
    fn filtration_skips_leading_integer() {
        let d = LevelDatum::from_exponents(&exps(&[(3, 1), (2, 3), (2, 21)]));
        assert_eq!(d, datum(&[(2, 3), (2, 21)]));
    }

    #[test]
    fn validate_accepts_table_entries() {
        assert!(LevelDatum::new(vec![rat(5, 2), rat(1, 4)]).is_ok());
        assert!(LevelDatum::new(vec![rat(7, 2)]).is_ok());
    }

    #[test]
    fn validate_sorts_decreasingly() {
        let d = LevelDatum::new(vec![rat(1, 4), rat(5, 2)]).unwrap();
        assert_eq!(d.levels(), datum(&[(5, 2), (1, 4)]).levels());
    }

    #[test]
    fn validate_rejects_stalled_filtration() {
        assert_eq!(
            LevelDatum::new(vec![rat(3, 2), rat(1, 2)]),
            Err(ValidationError::FiltrationStall(rat(1, 2)))
        );
    }

    #[test]
    fn validate_rejects_integer_levels() {
        assert_eq!(
            LevelDatum::new(vec![rat(3, 1)]),
            Err(ValidationError::IntegerLevel(rat(3, 1)))
        );
    }

    #[test]
    fn validate_rejects_duplicates_and_non_positive() {
        assert_eq!(
            LevelDatum::new(vec![rat(5, 2), rat(5, 2)]),
            Err(ValidationError::Duplicate(rat(5, 2)))
        );
        assert_eq!(
            LevelDatum::new(vec![rat(-1, 2)]),
            Err(ValidationError::NonPositive(rat(-1, 2)))
        );
    }

    #[test]
    fn ramification_examples() {
        assert_eq!(
            datum(&[(3, 5), (2, 15), (2, 105)]).ramification(),
            BigInt::from(105)
        );
        assert_eq!(LevelDatum::empty().ramification(), BigInt::one());
        assert_eq!(datum(&[(5, 2), (1, 4)]).ramification(), BigInt::from(4));
    }

    #[test]
    fn common_denominator_form_examples() {
        let f = datum(&[(3, 2), (4, 7), (1, 4)]).common_denominator_form();
        assert_eq!(f.ram, BigInt::from(28));
        assert_eq!(f.numerators, vec![42.into(), 16.into(), 7.into()]);

        let f = datum(&[(5, 2)]).common_denominator_form();
        assert_eq!(f.ram, BigInt::from(2));
        assert_eq!(f.numerators, vec![BigInt::from(5)]);

        let f = LevelDatum::empty().common_denominator_form();
        assert_eq!(f.ram, BigInt::one());
        assert!(f.numerators.is_empty());
    }

    #[test]
    fn balance_examples() {
        assert_eq!(datum(&[(5, 2)]).balance(), BigInt::from(2));
        assert_eq!(datum(&[(3, 2), (4, 7), (1, 4)]).balance(), BigInt::from(4));
        assert_eq!(datum(&[(4, 3), (4, 9), (1, 8)]).balance(), BigInt::zero());
        assert_eq!(LevelDatum::empty().balance(), BigInt::zero());
    }

    #[test]
    fn loops_examples() {
        assert_eq!(datum(&[(5, 2), (1, 6)]).loops(), BigInt::from(6));
        assert_eq!(datum(&[(2, 3)]).loops(), BigInt::from(-2));
        assert_eq!(LevelDatum::empty().loops(), BigInt::zero());
    }

    #[test]
    fn scale_refilter_drops_integers() {
        let d = datum(&[(3, 2), (1, 3), (1, 21)]);
        assert_eq!(d.scale_refilter(&rat(2, 1)), datum(&[(2, 3), (2, 21)]));

        let d = datum(&[(5, 2)]);
        assert_eq!(d.scale_refilter(&Rational::one()), d);

        let d = datum(&[(5, 4), (5, 8)]);
        assert_eq!(d.scale_refilter(&rat(4, 1)), datum(&[(5, 2)]));
    }

    #[test]
    fn max_level_examples() {
        assert_eq!(datum(&[(3, 2), (5, 4)]).max_level(), Some(&rat(3, 2)));
        assert_eq!(LevelDatum::empty().max_level(), None);
        assert_eq!(datum(&[(2, 7)]).max_level(), Some(&rat(2, 7)));
    }

    #[test]
    fn minimality_characterizations() {
        assert!(datum(&[(9, 2)]).is_minimal(Mode::General));
        assert!(datum(&[(2, 7)]).is_minimal(Mode::Infinity));
        assert!(!datum(&[(2, 7)]).is_minimal(Mode::General));
        assert!(!datum(&[(5, 3)]).is_minimal(Mode::Infinity));
        assert!(LevelDatum::empty().is_minimal(Mode::General));
        assert!(LevelDatum::empty().is_minimal(Mode::Infinity));
    }

    #[test]
    fn canonical_order_is_ram_then_decreasing_lex() {
        let mut data = vec![
            datum(&[(5, 4)]),
            datum(&[(3, 2), (1, 4)]),
            datum(&[(3, 2), (3, 4)]),
            datum(&[(7, 4)]),
            datum(&[(3, 2), (5, 4)]),
            datum(&[(5, 3)]),
        ];
        data.sort_by(LevelDatum::canonical_cmp);
        assert_eq!(
            data,
            vec![
                datum(&[(5, 3)]),
                datum(&[(7, 4)]),
                datum(&[(3, 2), (5, 4)]),
                datum(&[(3, 2), (3, 4)]),
                datum(&[(3, 2), (1, 4)]),
                datum(&[(5, 4)]),
            ]
        );
    }

    #[test]
    fn display_and_ascii_forms() {
        assert_eq!(datum(&[(5, 2), (1, 4)]).to_string(), "{5/2,1/4}");
        assert_eq!(LevelDatum::empty().to_string(), "∅");
        assert_eq!(LevelDatum::empty().to_ascii(), "{}");
    }

    #[test]
    fn json_round_trip_validates() {
        let d = datum(&[(5, 2), (1, 4)]);
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, "[[5,2],[1,4]]");
        let back: LevelDatum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
        // stalled filtration rejected on input
        assert!(serde_json::from_str::<LevelDatum>("[[3,2],[1,2]]").is_err());
    }
}
