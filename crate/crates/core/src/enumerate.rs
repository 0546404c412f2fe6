//! Exhaustive generation of level data by ramification, and the bounded
//! search for all minimal-at-infinity level data with a prescribed loop
//! count.
//!
//! Generation works in the common-denominator picture: a datum with
//! ramification exactly `r` is a strictly decreasing chain of numerators
//! whose running gcd with `r` strictly decreases down to 1. The minimal-data
//! search walks the candidates with highest level in (1,2) — the Fourier
//! shadows of the minimal data — for every ramification below the `6n`
//! bound, and keeps the one-step images that are already minimal.

use num::bigint::BigInt;
use num::{Integer, One, Signed};
use serde::Serialize;

use crate::levels::{LevelDatum, Mode};
use crate::rational::Rational;
use crate::simplify;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerateError {
    #[error("ramification must be positive")]
    ZeroRamification,
    #[error("empty or inverted range")]
    EmptyRange,
    #[error("enumeration with no upper bound on the highest level is infinite")]
    UnboundedRange,
}

/// Bounds for a generation run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest ramification to visit.
    pub max_ram: u64,
    /// Cap on the number of levels per datum; `None` leaves the chain length
    /// bounded only by the divisor chains of the ramification.
    pub max_levels: Option<u32>,
    /// Abandon a partial chain as soon as its balance already exceeds this
    /// value; sound because the remaining summands are strictly positive.
    pub prune_balance_above: Option<i64>,
}

impl SearchBudget {
    pub fn up_to_ram(max_ram: u64) -> Self {
        SearchBudget {
            max_ram,
            max_levels: None,
            prune_balance_above: None,
        }
    }
}

/// All canonical level data with ramification exactly `r` whose highest
/// level lies in the open interval `max_range`, in canonical order. `r = 1`
/// yields only the empty datum, which has no highest level and is admitted
/// under every range. For `r ≥ 2` the range is required: without an upper
/// bound the set is infinite.
pub fn level_data_with_ram(
    r: u64,
    max_range: Option<(&Rational, &Rational)>,
) -> Result<Vec<LevelDatum>, EnumerateError> {
    if r == 0 {
        return Err(EnumerateError::ZeroRamification);
    }
    if let Some((lo, hi)) = max_range {
        if lo >= hi {
            return Err(EnumerateError::EmptyRange);
        }
    }
    if r == 1 {
        return Ok(vec![LevelDatum::empty()]);
    }
    let (lo, hi) = max_range.ok_or(EnumerateError::UnboundedRange)?;
    let mut out = generate(r, lo, hi, None, None);
    out.sort_by(LevelDatum::canonical_cmp);
    Ok(out)
}

/// Union of [`level_data_with_ram`] over `2 ..= budget.max_ram`, honoring
/// the budget's level cap and balance pruning. The empty datum (`r = 1`) is
/// not included.
pub fn level_data_in_budget(
    budget: &SearchBudget,
    max_range: (&Rational, &Rational),
) -> Result<Vec<LevelDatum>, EnumerateError> {
    let (lo, hi) = max_range;
    if lo >= hi {
        return Err(EnumerateError::EmptyRange);
    }
    let prune = budget.prune_balance_above.map(BigInt::from);
    let mut out = Vec::new();
    for r in 2..=budget.max_ram {
        out.extend(generate(r, lo, hi, budget.max_levels, prune.as_ref()));
    }
    out.sort_by(LevelDatum::canonical_cmp);
    Ok(out)
}

/// Core generator. Chooses the leading numerator `s_0` with `s_0/r` in range
/// and `gcd(s_0, r) < r`, then extends with strictly smaller numerators that
/// strictly decrease the running gcd, emitting a datum whenever the gcd
/// reaches 1 (which makes the ramification exactly `r`).
fn generate(
    r: u64,
    lo: &Rational,
    hi: &Rational,
    max_levels: Option<u32>,
    prune_above: Option<&BigInt>,
) -> Vec<LevelDatum> {
    debug_assert!(r >= 2);
    let ram = BigInt::from(r);
    let mut out = Vec::new();

    // integers s0 with lo < s0/r < hi, starting at floor(lo * r) + 1
    let lo_scaled = lo.numerator() * &ram;
    let mut s0 = lo_scaled.div_floor(lo.denominator()) + 1;
    loop {
        // stop once s0/r >= hi, i.e. s0 * hi.den >= hi.num * r
        if &s0 * hi.denominator() >= hi.numerator() * &ram {
            break;
        }
        if s0.is_positive() {
            let g0 = s0.gcd(&ram);
            if g0 != ram {
                let balance_term = (&ram - &g0) * &s0;
                extend(
                    &ram,
                    &s0,
                    &g0,
                    &mut vec![s0.clone()],
                    &balance_term,
                    max_levels,
                    prune_above,
                    &mut out,
                );
            }
        }
        s0 += 1;
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    ram: &BigInt,
    prev: &BigInt,
    g: &BigInt,
    chain: &mut Vec<BigInt>,
    balance_sum: &BigInt,
    max_levels: Option<u32>,
    prune_above: Option<&BigInt>,
    out: &mut Vec<LevelDatum>,
) {
    if let Some(limit) = prune_above {
        // remaining summands are strictly positive, so a partial balance
        // already above the limit can never come back down
        let partial = balance_sum - ram * ram + 1;
        if &partial > limit {
            return;
        }
    }
    if g.is_one() {
        let levels = chain
            .iter()
            .map(|s| Rational::new(s.clone(), ram.clone()).expect("ram is positive"))
            .collect();
        out.push(LevelDatum::new(levels).expect("generated chain is a valid datum"));
        return;
    }
    if let Some(cap) = max_levels {
        if chain.len() as u32 >= cap {
            return;
        }
    }
    let mut s = prev - 1;
    while s.is_positive() {
        let g_next = g.gcd(&s);
        if g_next < *g {
            let balance_next = balance_sum + (g - &g_next) * &s;
            chain.push(s.clone());
            extend(
                ram,
                &s,
                &g_next,
                chain,
                &balance_next,
                max_levels,
                prune_above,
                out,
            );
            chain.pop();
        }
        s -= 1;
    }
}

/// The complete finite set of minimal-at-infinity level data with balance
/// `2n`, in canonical order.
///
/// For `n = 0` this is the empty datum alone. For `n ≥ 1` every such datum
/// has highest level above 2 and is the one-step image of its Fourier
/// shadow, whose highest level lies in (1, 2) and whose ramification is
/// below `6n`; walking all shadow candidates and keeping the images that are
/// already minimal is therefore exhaustive. Candidates whose one-step image
/// is not yet minimal are redundant — their full simplification is reached
/// from its own shadow as well — and are skipped.
pub fn minimal_for_loops(n: u64) -> Vec<LevelDatum> {
    if n == 0 {
        return vec![LevelDatum::empty()];
    }
    let target = BigInt::from(2 * n);
    let one = Rational::one();
    let two = Rational::integer(2);
    let budget = SearchBudget {
        max_ram: 6 * n - 1,
        max_levels: None,
        prune_balance_above: Some(2 * n as i64),
    };
    let candidates =
        level_data_in_budget(&budget, (&one, &two)).expect("range (1,2) is valid");
    let mut found: Vec<LevelDatum> = Vec::new();
    for shadow in candidates {
        if shadow.balance() != target {
            continue;
        }
        let (image, _) = simplify::step(&shadow, Mode::Infinity);
        if image.max_level().is_some_and(|k| *k > 2) {
            found.push(image);
        }
    }
    found.sort_by(LevelDatum::canonical_cmp);
    found.dedup();
    found
}

/// One row of the minimal-data table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub loops: u64,
    pub data: Vec<LevelDatum>,
    pub count: usize,
}

/// Rows for every loop count from 0 to `max_loops`.
pub fn minimal_table(max_loops: u64) -> Vec<TableRow> {
    (0..=max_loops)
        .map(|n| {
            let data = minimal_for_loops(n);
            let count = data.len();
            TableRow { loops: n, data, count }
        })
        .collect()
}

/// Markdown rendering: loops | minimal level data | count.
pub fn table_markdown(rows: &[TableRow]) -> String {
    let mut out = String::from("| Loops | Minimal level data | Count |\n|---|---|---|\n");
    for row in rows {
        let cell = row
            .data
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!("| {} | {} | {} |\n", row.loops, cell, row.count));
    }
    out
}

/// CSV rendering with the datum list quoted (the data themselves contain
/// commas).
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("loops,level_data,count\n");
    for row in rows {
        let cell = row
            .data
            .iter()
            .map(|d| d.to_ascii())
            .collect::<Vec<_>>()
            .join("; ");
        out.push_str(&format!("{},\"{}\",{}\n", row.loops, cell, row.count));
    }
    out
}

pub fn table_json(rows: &[TableRow]) -> String {
    serde_json::to_string(rows).expect("table serializes")
}
