//! The simplification maps on level data and their iterated closures.
//!
//! A simplifying step exists exactly when the highest level lies below 2
//! (general mode) or strictly between 1 and 2 (infinity mode); it scales the
//! datum so that its ramification strictly drops. Iterating reaches the
//! unique minimal datum of the orbit; the chain of states and step records
//! is kept as a [`SimplificationTrace`].

use num::bigint::BigInt;
use num::Integer;
use serde::Serialize;

use crate::levels::{LevelDatum, Mode};
use crate::rational::{serialize_bigint, Rational};

/// The equivalence class of the step applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum StepCase {
    /// No simplifying step exists; the datum is a fixed point.
    Minimal,
    /// Highest level below 1 (general mode only): the step passes through a
    /// singularity at finite distance.
    BelowOne,
    /// Highest level strictly between 1 and 2.
    BetweenOneAndTwo,
}

/// Record of one application of the step map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StepDescriptor {
    pub case: StepCase,
    /// The factor every level was multiplied by (1 for a minimal datum).
    pub scale: Rational,
    #[serde(serialize_with = "serialize_bigint")]
    pub ram_before: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub ram_after: BigInt,
    /// A below-one step lands at finite distance; the next step implicitly
    /// relocates back to infinity.
    pub passes_through_finite: bool,
}

/// The full chain from a datum to the fixed point of the mode's step map.
/// `states` is never empty and `steps` has one entry fewer; ramification
/// strictly decreases along the steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SimplificationTrace {
    pub mode: Mode,
    pub states: Vec<LevelDatum>,
    pub steps: Vec<StepDescriptor>,
}

impl SimplificationTrace {
    /// The fixed point the chain ends in.
    pub fn final_datum(&self) -> &LevelDatum {
        self.states.last().expect("trace has at least one state")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }
}

/// One application of the simplification map. Returns the image datum and a
/// descriptor of what happened; for a fixed point the image is the input and
/// the case is [`StepCase::Minimal`].
pub fn step(datum: &LevelDatum, mode: Mode) -> (LevelDatum, StepDescriptor) {
    let ram = datum.ramification();
    let minimal = (
        datum.clone(),
        StepDescriptor {
            case: StepCase::Minimal,
            scale: Rational::one(),
            ram_before: ram.clone(),
            ram_after: ram.clone(),
            passes_through_finite: false,
        },
    );
    let Some(top) = datum.max_level() else {
        return minimal;
    };
    if *top > 2 {
        return minimal;
    }
    // s = k0 * r, an integer: the irregularity of a witness circle.
    let irr = top.numerator() * (&ram / top.denominator());
    let (case, denom, passes_through_finite) = if *top > 1 {
        (StepCase::BetweenOneAndTwo, &irr - &ram, false)
    } else {
        match mode {
            Mode::Infinity => return minimal,
            Mode::General => (StepCase::BelowOne, &ram - &irr, true),
        }
    };
    let scale = Rational::new(ram.clone(), denom).expect("levels are never exactly 1 or 2");
    let next = datum.scale_refilter(&scale);
    let ram_after = next.ramification();
    debug_assert!(ram_after < ram, "simplifying step must reduce ramification");
    (
        next,
        StepDescriptor {
            case,
            scale,
            ram_before: ram,
            ram_after,
            passes_through_finite,
        },
    )
}

/// Iterates [`step`] until a fixed point is reached. Termination is
/// guaranteed by the strict decrease of the ramification order.
pub fn full(datum: &LevelDatum, mode: Mode) -> SimplificationTrace {
    let mut states = vec![datum.clone()];
    let mut steps = Vec::new();
    loop {
        let (next, descriptor) = step(states.last().expect("nonempty"), mode);
        if descriptor.case == StepCase::Minimal {
            return SimplificationTrace { mode, states, steps };
        }
        states.push(next);
        steps.push(descriptor);
    }
}

/// Whether the datum can be brought to the empty datum by basic operations,
/// i.e. whether the general-mode simplification ends at ∅.
pub fn is_tamable(datum: &LevelDatum) -> bool {
    full(datum, Mode::General).final_datum().is_empty()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClosedFormError {
    #[error("numerator and denominator must be positive")]
    NonPositive,
    #[error("denominator must be at least 2")]
    DenominatorTooSmall,
    #[error("numerator and denominator must be coprime")]
    NotCoprime,
}

/// Closed form of the general-mode full simplification of a single level
/// `s/r` with `s`, `r` coprime and `r ≥ 2`: the empty datum when
/// `r ≡ ±1 (mod s)`, otherwise `{s/k}` for the unique integer `k` with
/// `1 < k < s/2` and `r ≡ ±k (mod s)`.
pub fn single_level_full(s: &BigInt, r: &BigInt) -> Result<LevelDatum, ClosedFormError> {
    let one = BigInt::from(1);
    if !s.is_positive() || !r.is_positive() {
        return Err(ClosedFormError::NonPositive);
    }
    if *r < BigInt::from(2) {
        return Err(ClosedFormError::DenominatorTooSmall);
    }
    if s.gcd(r) != one {
        return Err(ClosedFormError::NotCoprime);
    }
    if s.is_one() {
        return Ok(LevelDatum::empty());
    }
    let m = r.mod_floor(s); // nonzero by coprimality
    let k = (s - &m).min(m);
    if k <= one {
        return Ok(LevelDatum::empty());
    }
    let level = Rational::new(s.clone(), k).expect("k >= 2");
    Ok(LevelDatum::new(vec![level]).expect("s/k is a valid single level"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn datum(entries: &[(i64, i64)]) -> LevelDatum {
        LevelDatum::new(entries.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn step_between_one_and_two() {
        let (next, desc) = step(&datum(&[(5, 3)]), Mode::Infinity);
        assert_eq!(next, datum(&[(5, 2)]));
        assert_eq!(desc.case, StepCase::BetweenOneAndTwo);
        assert_eq!(desc.scale, rat(3, 2));
        assert_eq!(desc.ram_before, BigInt::from(3));
        assert_eq!(desc.ram_after, BigInt::from(2));
        assert!(!desc.passes_through_finite);
    }

    #[test]
    fn step_below_one_depends_on_mode() {
        let (next, desc) = step(&datum(&[(2, 7)]), Mode::General);
        assert_eq!(next, datum(&[(2, 5)]));
        assert_eq!(desc.case, StepCase::BelowOne);
        assert!(desc.passes_through_finite);

        let (fixed, desc) = step(&datum(&[(2, 7)]), Mode::Infinity);
        assert_eq!(fixed, datum(&[(2, 7)]));
        assert_eq!(desc.case, StepCase::Minimal);
    }

    #[test]
    fn step_fixes_high_slope() {
        let (fixed, desc) = step(&datum(&[(9, 2)]), Mode::General);
        assert_eq!(fixed, datum(&[(9, 2)]));
        assert_eq!(desc.case, StepCase::Minimal);
    }

    #[test]
    fn step_drops_scaled_integers() {
        let (next, desc) = step(&datum(&[(3, 2), (1, 3), (1, 21)]), Mode::General);
        assert_eq!(next, datum(&[(2, 3), (2, 21)]));
        assert_eq!(desc.scale, rat(2, 1));
    }

    #[test]
    fn full_general_chain_to_empty() {
        let trace = full(&datum(&[(3, 5), (2, 15), (2, 105)]), Mode::General);
        let expected = [
            datum(&[(3, 5), (2, 15), (2, 105)]),
            datum(&[(3, 2), (1, 3), (1, 21)]),
            datum(&[(2, 3), (2, 21)]),
            datum(&[(2, 7)]),
            datum(&[(2, 5)]),
            datum(&[(2, 3)]),
            LevelDatum::empty(),
        ];
        assert_eq!(trace.states, expected);
        assert_eq!(trace.steps.len(), 6);
    }

    #[test]
    fn full_infinity_chains() {
        let trace = full(&datum(&[(4, 3), (4, 9), (1, 8)]), Mode::Infinity);
        assert_eq!(
            trace.states,
            vec![
                datum(&[(4, 3), (4, 9), (1, 8)]),
                datum(&[(4, 3), (3, 8)]),
                datum(&[(9, 8)]),
                LevelDatum::empty(),
            ]
        );

        let trace = full(&datum(&[(3, 2), (4, 7), (1, 4)]), Mode::Infinity);
        assert_eq!(
            trace.states,
            vec![
                datum(&[(3, 2), (4, 7), (1, 4)]),
                datum(&[(8, 7), (1, 2)]),
                datum(&[(7, 2)]),
            ]
        );
    }

    #[test]
    fn full_on_fixed_point_is_single_state() {
        let trace = full(&LevelDatum::empty(), Mode::General);
        assert_eq!(trace.states, vec![LevelDatum::empty()]);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn tamability() {
        assert!(is_tamable(&datum(&[(3, 5), (2, 15), (2, 105)])));
        assert!(!is_tamable(&datum(&[(5, 2)])));
        assert!(is_tamable(&datum(&[(2, 7)])));
    }

    #[test]
    fn closed_form_examples() {
        let b = BigInt::from;
        assert_eq!(single_level_full(&b(2), &b(7)), Ok(LevelDatum::empty()));
        assert_eq!(single_level_full(&b(5), &b(3)), Ok(datum(&[(5, 2)])));
        assert_eq!(single_level_full(&b(7), &b(10)), Ok(datum(&[(7, 3)])));
    }

    #[test]
    fn closed_form_preconditions() {
        let b = BigInt::from;
        assert_eq!(
            single_level_full(&b(4), &b(2)),
            Err(ClosedFormError::NotCoprime)
        );
        assert_eq!(
            single_level_full(&b(3), &b(1)),
            Err(ClosedFormError::DenominatorTooSmall)
        );
        assert_eq!(
            single_level_full(&b(-3), &b(2)),
            Err(ClosedFormError::NonPositive)
        );
    }

    #[test]
    fn closed_form_matches_iteration_on_small_pairs() {
        for s in 1i64..=20 {
            for r in 2i64..=20 {
                if BigInt::from(s).gcd(&BigInt::from(r)) != BigInt::from(1) {
                    continue;
                }
                let start = LevelDatum::new(vec![rat(s, r)]).unwrap();
                let iterated = full(&start, Mode::General);
                let closed = single_level_full(&BigInt::from(s), &BigInt::from(r)).unwrap();
                assert_eq!(
                    iterated.final_datum(),
                    &closed,
                    "mismatch at s={s} r={r}"
                );
            }
        }
    }

    #[test]
    fn trace_json_shape() {
        let trace = full(&datum(&[(5, 3)]), Mode::Infinity);
        let json = trace.to_json();
        assert_eq!(
            json,
            "{\"mode\":\"infinity\",\"states\":[[[5,3]],[[5,2]]],\"steps\":[{\"case\":\"betweenOneAndTwo\",\"scale\":[3,2],\"ramBefore\":3,\"ramAfter\":2,\"passesThroughFinite\":false}]}"
        );
    }
}
