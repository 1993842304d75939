//! Subword complexity: counts from evaluated windows and exact counts for
//! words with one hole per period.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{build_level, FillingSchedule, Letter, Symbol};

/// Largest number of letters stored over all words of one set.
pub const MAX_LETTERS: usize = 1 << 28;
/// Seeds inspected for the letters of a tail before giving up on exactness.
const LETTER_SEEDS: usize = 64;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exactness {
    Exact,
    LowerBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSet {
    pub length: usize,
    pub words: BTreeSet<Vec<Letter>>,
    pub exactness: Exactness,
    pub provenance: String,
}

impl FactorSet {
    pub fn count(&self) -> usize {
        self.words.len()
    }
}

/// Distinct length-`len` words of `x[lo, hi)` at `max_level`.
pub fn factor_set_window(schedule: &FillingSchedule, len: usize, window: (i64, i64), max_level: usize) -> Result<FactorSet> {
    let (lo, hi) = window;
    let x: Vec<Letter> = schedule
        .window(lo, hi, max_level)
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::UnresolvedWindow(format!("position {} at level {max_level}", lo + i as i64))))
        .collect::<Result<_>>()?;
    let words = if len == 0 { BTreeSet::from([Vec::new()]) } else { x.windows(len).map(<[Letter]>::to_vec).collect() };
    Ok(FactorSet {
        length: len,
        words,
        exactness: Exactness::LowerBound,
        provenance: format!("window [{lo}, {hi}) at level {max_level}"),
    })
}

/// All length-`len` words of x, from the decomposition of level `l` into one
/// period with a single hole filled by the words of the derived tail.
pub fn factor_set_exact_single_hole(schedule: &FillingSchedule, l: usize, len: usize) -> Result<FactorSet> {
    let mut exact = true;
    let words = single_hole_words(schedule, l, len, &mut exact)?;
    Ok(FactorSet {
        length: len,
        words,
        exactness: if exact { Exactness::Exact } else { Exactness::LowerBound },
        provenance: format!("single-hole decomposition from level {l}"),
    })
}

fn single_hole_words(schedule: &FillingSchedule, l: usize, len: usize, exact: &mut bool) -> Result<BTreeSet<Vec<Letter>>> {
    if len == 0 {
        return Ok(BTreeSet::from([Vec::new()]));
    }
    let tail = schedule.derived_tail(l);
    if len == 1 {
        let mut letters: BTreeSet<Vec<Letter>> = build_level(schedule, l)?
            .pattern
            .symbols()
            .iter()
            .filter_map(|s| s.letter().map(|a| vec![a]))
            .collect();
        for n in 1..=LETTER_SEEDS {
            if letters.len() == schedule.alphabet().size() {
                break;
            }
            match tail.seed(n) {
                Some(w) => letters.extend(w.letters().map(|a| vec![a])),
                None => break,
            }
        }
        if letters.len() < schedule.alphabet().size() {
            *exact = false;
        }
        return Ok(letters);
    }
    let level = build_level(schedule, l)?;
    if level.holes_per_period != 1 {
        return Err(Error::NotSingleHole(l));
    }
    let p = level.period();
    let c = level.pattern.holes()[0];
    let spanned = |j: usize| (j..j + len).filter(|i| i % p == c).count();
    let lengths: BTreeSet<usize> = (0..p).map(spanned).collect();
    let mut fills = std::collections::BTreeMap::new();
    for &m in &lengths {
        fills.insert(m, single_hole_words(&tail, 1, m, exact)?);
    }
    let total: usize = (0..p).map(|j| fills[&spanned(j)].len()).sum();
    if total.saturating_mul(len) > MAX_LETTERS {
        return Err(Error::TooLarge(format!("{total} words of length {len}")));
    }
    let symbols = level.pattern.symbols();
    let mut out = BTreeSet::new();
    for j in 0..p {
        let base: Vec<Symbol> = (j..j + len).map(|i| symbols[i % p]).collect();
        for u in &fills[&spanned(j)] {
            let mut it = u.iter();
            let w: Vec<Letter> = base
                .iter()
                .map(|s| match s {
                    Symbol::Letter(a) => *a,
                    Symbol::Hole => *it.next().expect("one fill per hole"),
                })
                .collect();
            out.insert(w);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileMode {
    Window { lo: i64, hi: i64, max_level: usize },
    Decomposition { level: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub length: usize,
    pub count: usize,
    pub exactness: Exactness,
}

pub fn complexity_profile(schedule: &FillingSchedule, lengths: &[usize], mode: &ProfileMode) -> Result<Vec<ProfileRow>> {
    lengths
        .iter()
        .map(|&len| {
            let set = match mode {
                ProfileMode::Window { lo, hi, max_level } => factor_set_window(schedule, len, (*lo, *hi), *max_level)?,
                ProfileMode::Decomposition { level } => factor_set_exact_single_hole(schedule, *level, len)?,
            };
            Ok(ProfileRow { length: len, count: set.count(), exactness: set.exactness })
        })
        .collect()
}

pub fn profile_csv(rows: &[ProfileRow]) -> String {
    let mut out = String::from("length,count,exactness\n");
    for r in rows {
        let e = match r.exactness {
            Exactness::Exact => "exact",
            Exactness::LowerBound => "lower-bound",
        };
        let _ = writeln!(out, "{},{},{}", r.length, r.count, e);
    }
    out
}

/// The longest stretch between two consecutive holes of level `l` around the
/// first non-negative one, as a window resolved at level `l`.
pub fn resolved_segment(schedule: &FillingSchedule, l: usize) -> Result<(i64, i64)> {
    let holes = schedule.hole_residues(l)?;
    if holes.len() != 1 {
        return Err(Error::NotSingleHole(l));
    }
    let p = schedule.period(l)?.to_i64().ok_or_else(|| Error::TooLarge("period".into()))?;
    let h = holes[0].to_i64().expect("below period");
    Ok((h - p + 1, h))
}
