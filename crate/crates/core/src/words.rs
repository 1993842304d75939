//! Letters, seed words, periodic patterns and the hole-filling composition.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest period that is ever expanded into a dense pattern.
pub const MAX_DENSE_PERIOD: usize = 1 << 26;

const CACHED_SEEDS: usize = 96;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordsError {
    #[error("character {0:?} is not in the alphabet")]
    UnknownCharacter(char),
    #[error("seed word consists of holes only")]
    AllHoles,
    #[error("seed word starts or ends with a hole")]
    EndsWithHole,
    #[error("empty seed word")]
    Empty,
    #[error("pattern has no holes left to fill")]
    NoHoles,
    #[error("bad alphabet: {0}")]
    BadAlphabet(String),
    #[error("schedule has no seed for level {0}")]
    MissingSeed(usize),
    #[error("level {level} has period {period}, too large to expand")]
    PatternTooLarge { level: usize, period: BigUint },
    #[error("schedule text: {0}")]
    Parse(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(pub u8);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    Letter(Letter),
    Hole,
}

impl Symbol {
    pub fn letter(self) -> Option<Letter> {
        match self {
            Symbol::Letter(a) => Some(a),
            Symbol::Hole => None,
        }
    }

    pub fn is_hole(self) -> bool {
        matches!(self, Symbol::Hole)
    }
}

impl From<Option<Letter>> for Symbol {
    fn from(v: Option<Letter>) -> Self {
        v.map_or(Symbol::Hole, Symbol::Letter)
    }
}

/// Finite alphabet; letter `i` is rendered as the `i`-th character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    chars: Vec<char>,
}

impl Alphabet {
    pub fn new(letters: &str) -> Result<Self, WordsError> {
        let chars: Vec<char> = letters.chars().collect();
        if chars.is_empty() {
            return Err(WordsError::BadAlphabet("empty".into()));
        }
        if chars.len() > 200 {
            return Err(WordsError::BadAlphabet("too many letters".into()));
        }
        for (i, c) in chars.iter().enumerate() {
            if *c == '?' || *c == '#' || c.is_whitespace() {
                return Err(WordsError::BadAlphabet(format!("reserved character {c:?}")));
            }
            if chars[..i].contains(c) {
                return Err(WordsError::BadAlphabet(format!("repeated character {c:?}")));
            }
        }
        Ok(Alphabet { chars })
    }

    pub fn ab() -> Self {
        Alphabet { chars: vec!['a', 'b'] }
    }

    pub fn size(&self) -> usize {
        self.chars.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.chars.len()).map(|i| Letter(i as u8))
    }

    pub fn char_of(&self, a: Letter) -> char {
        self.chars[a.0 as usize]
    }

    pub fn letter_of(&self, c: char) -> Option<Letter> {
        self.chars.iter().position(|&d| d == c).map(|i| Letter(i as u8))
    }

    pub fn as_string(&self) -> String {
        self.chars.iter().collect()
    }

    pub fn render(&self, symbols: &[Symbol]) -> String {
        symbols
            .iter()
            .map(|s| match s {
                Symbol::Letter(a) => self.char_of(*a),
                Symbol::Hole => '?',
            })
            .collect()
    }

    pub fn render_letters(&self, letters: &[Letter]) -> String {
        letters.iter().map(|a| self.char_of(*a)).collect()
    }

    pub fn parse_symbols(&self, text: &str) -> Result<Vec<Symbol>, WordsError> {
        text.chars()
            .map(|c| {
                if c == '?' {
                    Ok(Symbol::Hole)
                } else {
                    self.letter_of(c).map(Symbol::Letter).ok_or(WordsError::UnknownCharacter(c))
                }
            })
            .collect()
    }
}

/// A finite word over letters and holes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedWord {
    symbols: Vec<Symbol>,
    holes: Vec<usize>,
}

impl SeedWord {
    /// Builds a seed. Edge holes are rejected unless `allow_edge_holes`.
    pub fn new(symbols: Vec<Symbol>, allow_edge_holes: bool) -> Result<Self, WordsError> {
        if symbols.is_empty() {
            return Err(WordsError::Empty);
        }
        let holes: Vec<usize> =
            symbols.iter().enumerate().filter(|(_, s)| s.is_hole()).map(|(i, _)| i).collect();
        if holes.len() == symbols.len() {
            return Err(WordsError::AllHoles);
        }
        if !allow_edge_holes && (symbols[0].is_hole() || symbols[symbols.len() - 1].is_hole()) {
            return Err(WordsError::EndsWithHole);
        }
        Ok(SeedWord { symbols, holes })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn holes(&self) -> &[usize] {
        &self.holes
    }

    pub fn hole_count(&self) -> usize {
        self.holes.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.symbols.iter().filter_map(|s| s.letter())
    }
}

pub fn parse_seed(text: &str, alphabet: &Alphabet) -> Result<SeedWord, WordsError> {
    parse_seed_with(text, alphabet, false)
}

pub fn parse_seed_with(
    text: &str,
    alphabet: &Alphabet,
    allow_edge_holes: bool,
) -> Result<SeedWord, WordsError> {
    SeedWord::new(alphabet.parse_symbols(text)?, allow_edge_holes)
}

/// One period of a periodic word over letters and holes, anchored at 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicPattern {
    symbols: Vec<Symbol>,
    holes: Vec<usize>,
}

impl PeriodicPattern {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, WordsError> {
        if symbols.is_empty() {
            return Err(WordsError::Empty);
        }
        let holes = symbols.iter().enumerate().filter(|(_, s)| s.is_hole()).map(|(i, _)| i).collect();
        Ok(PeriodicPattern { symbols, holes })
    }

    /// The word consisting of holes only, period 1.
    pub fn unfilled() -> Self {
        PeriodicPattern { symbols: vec![Symbol::Hole], holes: vec![0] }
    }

    pub fn from_seed(seed: &SeedWord) -> Self {
        PeriodicPattern { symbols: seed.symbols.clone(), holes: seed.holes.clone() }
    }

    pub fn period(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn holes(&self) -> &[usize] {
        &self.holes
    }

    pub fn hole_count(&self) -> usize {
        self.holes.len()
    }

    pub fn at(&self, j: i64) -> Symbol {
        self.symbols[j.rem_euclid(self.period() as i64) as usize]
    }

    pub fn window(&self, lo: i64, hi: i64) -> Vec<Symbol> {
        (lo..hi).map(|j| self.at(j)).collect()
    }
}

/// Fills the holes of `outer` with `inner`, its first symbol going into the
/// first non-negative hole.
pub fn compose_fill(outer: &PeriodicPattern, inner: &SeedWord) -> Result<PeriodicPattern, WordsError> {
    compose_fill_at(outer, inner, 0)
}

/// As [`compose_fill`], with the first symbol of `inner` going into the hole of
/// rank `offset` (rank 0 is the first non-negative hole).
pub fn compose_fill_at(
    outer: &PeriodicPattern,
    inner: &SeedWord,
    offset: i64,
) -> Result<PeriodicPattern, WordsError> {
    let h = outer.hole_count();
    if h == 0 {
        return Err(WordsError::NoHoles);
    }
    let p = outer.period();
    let q = inner.len();
    let period = p * (q / h.gcd(&q));
    if period > MAX_DENSE_PERIOD {
        return Err(WordsError::PatternTooLarge { level: 0, period: BigUint::from(period) });
    }
    let mut symbols = Vec::with_capacity(period);
    let mut rank: i64 = 0;
    for j in 0..period {
        match outer.symbols[j % p] {
            Symbol::Hole => {
                symbols.push(inner.symbols[(rank - offset).rem_euclid(q as i64) as usize]);
                rank += 1;
            }
            s => symbols.push(s),
        }
    }
    PeriodicPattern::new(symbols)
}

/// Placement of one seed relative to the holes it fills.
#[derive(Clone, Debug)]
struct SeedMap {
    seed: Arc<SeedWord>,
    offset: i64,
    first_rank: i128,
}

impl SeedMap {
    fn new(seed: Arc<SeedWord>, offset: i64) -> Self {
        let q = seed.len() as i128;
        let h = seed.hole_count() as i128;
        let u0 = -(offset as i128);
        let c = u0.div_euclid(q);
        let i0 = u0.rem_euclid(q) as usize;
        let first_rank = match seed.holes.iter().position(|&x| x >= i0) {
            Some(k) => c * h + k as i128,
            None => (c + 1) * h,
        };
        SeedMap { seed, offset, first_rank }
    }

    fn q(&self) -> usize {
        self.seed.len()
    }

    fn h(&self) -> usize {
        self.seed.hole_count()
    }

    /// Symbol at `j`, and the hole rank of `j` when it is a hole.
    fn step(&self, j: i128) -> Result<Letter, i128> {
        let u = j - self.offset as i128;
        let q = self.q() as i128;
        let i = u.rem_euclid(q) as usize;
        match self.seed.symbols[i] {
            Symbol::Letter(a) => Ok(a),
            Symbol::Hole => {
                let k = self.seed.holes.binary_search(&i).expect("hole index");
                Err(u.div_euclid(q) * self.h() as i128 + k as i128 - self.first_rank)
            }
        }
    }

    fn step_big(&self, j: &BigInt) -> Result<Letter, BigInt> {
        let u = j - BigInt::from(self.offset);
        let q = BigInt::from(self.q());
        let (c, i) = u.div_mod_floor(&q);
        let i = i.to_usize().expect("residue fits");
        match self.seed.symbols[i] {
            Symbol::Letter(a) => Ok(a),
            Symbol::Hole => {
                let k = self.seed.holes.binary_search(&i).expect("hole index");
                Err(c * BigInt::from(self.h()) + BigInt::from(k) - BigInt::from(self.first_rank))
            }
        }
    }

    fn position_of_rank(&self, t: &BigInt) -> BigInt {
        let g = t + BigInt::from(self.first_rank);
        let (c, k) = g.div_mod_floor(&BigInt::from(self.h()));
        let k = k.to_usize().expect("small");
        BigInt::from(self.offset) + c * BigInt::from(self.q()) + BigInt::from(self.seed.holes[k])
    }
}

type SeedRule = dyn Fn(usize) -> Option<(SeedWord, i64)> + Send + Sync;

struct SeedStore {
    rule: Box<SeedRule>,
    cache: Vec<OnceLock<Option<SeedMap>>>,
}

impl SeedStore {
    fn get(&self, n: usize) -> Option<SeedMap> {
        let make = || (self.rule)(n).map(|(w, o)| SeedMap::new(Arc::new(w), o));
        match self.cache.get(n) {
            Some(cell) => cell.get_or_init(make).clone(),
            None => make(),
        }
    }
}

/// How the first letter of each seed is placed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alignment {
    /// First letter fills the first non-negative hole.
    FirstNonNegativeHole,
    /// Some levels carry an explicit hole-rank offset.
    Offsets,
}

/// The sequence of seed words generating a Toeplitz word.
#[derive(Clone)]
pub struct FillingSchedule {
    alphabet: Alphabet,
    label: String,
    alignment: Alignment,
    store: Arc<SeedStore>,
    shift: usize,
}

impl fmt::Debug for FillingSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FillingSchedule")
            .field("label", &self.label)
            .field("alphabet", &self.alphabet.as_string())
            .field("shift", &self.shift)
            .finish()
    }
}

impl FillingSchedule {
    /// A finite schedule of literal seeds with the default alignment.
    pub fn from_seeds(alphabet: Alphabet, seeds: Vec<SeedWord>) -> Self {
        let offsets = vec![0; seeds.len()];
        Self::from_seeds_with_offsets(alphabet, seeds, offsets)
    }

    pub fn from_seeds_with_offsets(alphabet: Alphabet, seeds: Vec<SeedWord>, offsets: Vec<i64>) -> Self {
        let alignment = if offsets.iter().all(|&o| o == 0) {
            Alignment::FirstNonNegativeHole
        } else {
            Alignment::Offsets
        };
        let seeds = Arc::new(seeds);
        let offsets = Arc::new(offsets);
        let mut s = Self::from_rule(alphabet, "literal", move |n| {
            let w = seeds.get(n.checked_sub(1)?)?.clone();
            Some((w, offsets.get(n - 1).copied().unwrap_or(0)))
        });
        s.alignment = alignment;
        s
    }

    /// A schedule whose seed for level `n` (1-based) is produced by `rule`;
    /// `None` ends the schedule. The rule must be deterministic.
    pub fn from_rule<F>(alphabet: Alphabet, label: &str, rule: F) -> Self
    where
        F: Fn(usize) -> Option<(SeedWord, i64)> + Send + Sync + 'static,
    {
        let cache = (0..CACHED_SEEDS).map(|_| OnceLock::new()).collect();
        FillingSchedule {
            alphabet,
            label: label.to_string(),
            alignment: Alignment::FirstNonNegativeHole,
            store: Arc::new(SeedStore { rule: Box::new(rule), cache }),
            shift: 0,
        }
    }

    pub fn with_alignment(mut self, alignment: Alignment) -> Self {
        self.alignment = alignment;
        self
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn alignment(&self) -> &Alignment {
        &self.alignment
    }

    fn map(&self, n: usize) -> Option<SeedMap> {
        if n == 0 {
            return None;
        }
        self.store.get(self.shift + n)
    }

    /// Seed word of level `n` (1-based).
    pub fn seed(&self, n: usize) -> Option<Arc<SeedWord>> {
        self.map(n).map(|m| m.seed)
    }

    pub fn offset(&self, n: usize) -> Option<i64> {
        self.map(n).map(|m| m.offset)
    }

    pub fn has_level(&self, l: usize) -> bool {
        l == 0 || self.map(l).is_some()
    }

    /// Number of available seeds, scanning at most `cap` levels.
    pub fn available_levels(&self, cap: usize) -> usize {
        (1..=cap).take_while(|&n| self.map(n).is_some()).count()
    }

    fn require(&self, l: usize) -> Result<(), WordsError> {
        match (1..=l).find(|&n| self.map(n).is_none()) {
            Some(n) => Err(WordsError::MissingSeed(n)),
            None => Ok(()),
        }
    }

    /// Period and holes per period of level `l`, by the period law.
    pub fn period_and_holes(&self, l: usize) -> Result<(BigUint, BigUint), WordsError> {
        self.require(l)?;
        let mut p = BigUint::one();
        let mut h = BigUint::one();
        for n in 1..=l {
            let m = self.map(n).expect("checked");
            let q = BigUint::from(m.q());
            let g = h.gcd(&q);
            p = p * &q / &g;
            h = h * BigUint::from(m.h()) / &g;
        }
        Ok((p, h))
    }

    pub fn period(&self, l: usize) -> Result<BigUint, WordsError> {
        Ok(self.period_and_holes(l)?.0)
    }

    pub fn holes_per_period(&self, l: usize) -> Result<BigUint, WordsError> {
        Ok(self.period_and_holes(l)?.1)
    }

    /// The scale `(p_1, ..., p_depth)`.
    pub fn scale(&self, depth: usize) -> Result<Vec<BigUint>, WordsError> {
        (1..=depth).map(|l| self.period(l)).collect()
    }

    /// The schedule read along the holes of level `l`.
    pub fn derived_tail(&self, l: usize) -> FillingSchedule {
        let mut t = self.clone();
        t.shift += l;
        t
    }

    /// Letter of x at `j` once filled by level `max_level`; `None` if still a hole.
    pub fn evaluate(&self, j: &BigInt, max_level: usize) -> Option<Letter> {
        match j.to_i128() {
            Some(small) if small.unsigned_abs() < (1u128 << 120) => self.evaluate_i128(small, max_level),
            _ => self.evaluate_big(j, max_level),
        }
    }

    pub fn evaluate_i64(&self, j: i64, max_level: usize) -> Option<Letter> {
        self.evaluate_i128(j as i128, max_level)
    }

    fn evaluate_i128(&self, mut j: i128, max_level: usize) -> Option<Letter> {
        for n in 1..=max_level {
            match self.map(n)?.step(j) {
                Ok(a) => return Some(a),
                Err(t) => j = t,
            }
        }
        None
    }

    fn evaluate_big(&self, j: &BigInt, max_level: usize) -> Option<Letter> {
        let mut j = j.clone();
        for n in 1..=max_level {
            match self.map(n)?.step_big(&j) {
                Ok(a) => return Some(a),
                Err(t) => j = t,
            }
        }
        None
    }

    pub fn symbol(&self, j: &BigInt, level: usize) -> Symbol {
        self.evaluate(j, level).into()
    }

    /// Evaluates `[lo, hi)` at `max_level`.
    pub fn window(&self, lo: i64, hi: i64, max_level: usize) -> Vec<Option<Letter>> {
        (lo..hi).map(|j| self.evaluate_i64(j, max_level)).collect()
    }

    /// Position in x of the hole of level `l` with rank `t`.
    pub fn hole_position(&self, l: usize, t: &BigInt) -> Result<BigInt, WordsError> {
        self.require(l)?;
        let mut pos = t.clone();
        for n in (1..=l).rev() {
            pos = self.map(n).expect("checked").position_of_rank(&pos);
        }
        Ok(pos)
    }

    /// Sorted hole residues of level `l` in `[0, p_l)`.
    pub fn hole_residues(&self, l: usize) -> Result<Vec<BigUint>, WordsError> {
        self.require(l)?;
        if l == 0 {
            return Ok(vec![BigUint::zero()]);
        }
        let tail = self.derived_tail(1);
        let inner = tail.hole_residues(l - 1)?;
        let inner_period = BigInt::from(tail.period(l - 1)?);
        let m = self.map(1).expect("checked");
        let h1 = BigInt::from(m.h());
        let p = BigInt::from(self.period(l)?);
        let copies = h1.lcm(&inner_period) / &inner_period;
        let mut out = Vec::with_capacity(inner.len());
        let mut k = BigInt::zero();
        while k < copies {
            for r in &inner {
                let t = &k * &inner_period + BigInt::from(r.clone());
                let pos = m.position_of_rank(&t).mod_floor(&p);
                out.push(pos.to_biguint().expect("non-negative"));
            }
            k += 1;
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Letters occurring in the first `levels` seeds.
    pub fn seed_letters(&self, levels: usize) -> Vec<Letter> {
        let mut seen = vec![false; self.alphabet.size()];
        for n in 1..=levels {
            match self.seed(n) {
                Some(w) => w.letters().for_each(|a| seen[a.0 as usize] = true),
                None => break,
            }
        }
        self.alphabet.letters().filter(|a| seen[a.0 as usize]).collect()
    }

    /// Literal seeds of the first `levels` levels.
    pub fn seeds(&self, levels: usize) -> Vec<Arc<SeedWord>> {
        (1..=levels).map_while(|n| self.seed(n)).collect()
    }
}

/// One period of the level-`l` approximation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToeplitzLevel {
    pub level: usize,
    pub pattern: PeriodicPattern,
    pub holes_per_period: usize,
    /// Per level `1..=l`: position of the hole that the first letter of the seed filled.
    pub anchor_offsets: Vec<BigInt>,
}

impl ToeplitzLevel {
    pub fn period(&self) -> usize {
        self.pattern.period()
    }
}

/// Composes the first `l` seeds into one dense period.
pub fn build_level(schedule: &FillingSchedule, l: usize) -> Result<ToeplitzLevel, WordsError> {
    let period = schedule.period(l)?;
    if period > BigUint::from(MAX_DENSE_PERIOD) {
        return Err(WordsError::PatternTooLarge { level: l, period });
    }
    let mut pattern = PeriodicPattern::unfilled();
    let mut anchors = Vec::with_capacity(l);
    for n in 1..=l {
        let m = schedule.map(n).ok_or(WordsError::MissingSeed(n))?;
        let h = pattern.hole_count() as i64;
        if h == 0 {
            return Err(WordsError::NoHoles);
        }
        let (c, k) = (m.offset.div_euclid(h), m.offset.rem_euclid(h));
        anchors.push(BigInt::from(c * pattern.period() as i64 + pattern.holes()[k as usize] as i64));
        pattern = compose_fill_at(&pattern, &m.seed, m.offset).map_err(|e| match e {
            WordsError::PatternTooLarge { period, .. } => WordsError::PatternTooLarge { level: n, period },
            e => e,
        })?;
    }
    let holes_per_period = pattern.hole_count();
    Ok(ToeplitzLevel { level: l, pattern, holes_per_period, anchor_offsets: anchors })
}

/// Parses the schedule text format: alphabet line, then one seed per line.
pub fn parse_schedule_text(text: &str) -> Result<FillingSchedule, WordsError> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let alphabet = Alphabet::new(lines.next().ok_or_else(|| WordsError::Parse("missing alphabet line".into()))?)?;
    let seeds = lines.map(|l| parse_seed(l, &alphabet)).collect::<Result<Vec<_>, _>>()?;
    if seeds.is_empty() {
        return Err(WordsError::Parse("no seed words".into()));
    }
    Ok(FillingSchedule::from_seeds(alphabet, seeds))
}

/// Writes the first `levels` seeds in the schedule text format.
pub fn emit_schedule_text(schedule: &FillingSchedule, levels: usize) -> String {
    let a = schedule.alphabet();
    let mut out = format!("# {}\n{}\n", schedule.label(), a.as_string());
    for (n, w) in schedule.seeds(levels).iter().enumerate() {
        let off = schedule.offset(n + 1).unwrap_or(0);
        if off != 0 {
            out.push_str(&format!("# offset {off}\n"));
        }
        out.push_str(&a.render(w.symbols()));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::ab()
    }

    fn seed(s: &str) -> SeedWord {
        parse_seed(s, &ab()).unwrap()
    }

    #[test]
    fn parse_seed_cases() {
        assert_eq!(seed("a??b").symbols().len(), 4);
        assert_eq!(seed("a??b").holes(), &[1, 2]);
        assert_eq!(seed("a").hole_count(), 0);
        assert_eq!(parse_seed("??", &ab()), Err(WordsError::AllHoles));
        assert_eq!(parse_seed("a?", &ab()), Err(WordsError::EndsWithHole));
        assert!(parse_seed_with("a?", &ab(), true).is_ok());
        assert_eq!(parse_seed("abc", &ab()), Err(WordsError::UnknownCharacter('c')));
    }

    #[test]
    fn composition_of_first_two_seeds() {
        let outer = PeriodicPattern::from_seed(&seed("a??b"));
        let out = compose_fill(&outer, &seed("aa?a?bbb")).unwrap();
        assert_eq!(out.period(), 16);
        assert_eq!(ab().render(out.symbols()), "aaaba?aba?bbabbb");
        assert_eq!(out.holes(), &[5, 9]);
    }

    #[test]
    fn single_hole_single_letter() {
        let outer = PeriodicPattern::new(ab().parse_symbols("a?").unwrap()).unwrap();
        let out = compose_fill(&outer, &seed("b")).unwrap();
        assert_eq!(ab().render(out.symbols()), "ab");
        assert_eq!(compose_fill(&out, &seed("a")), Err(WordsError::NoHoles));
    }

    #[test]
    fn offset_rotates_the_inner_word() {
        let outer = PeriodicPattern::new(ab().parse_symbols("a?").unwrap()).unwrap();
        let out = compose_fill_at(&outer, &seed("ab"), 1).unwrap();
        assert_eq!(ab().render(out.symbols()), "abaa");
    }

    #[test]
    fn evaluate_agrees_with_dense_levels() {
        let s = FillingSchedule::from_seeds(ab(), vec![seed("a??b"), seed("aa?a?bbb"), seed("aa????bb")]);
        let lv = build_level(&s, 3).unwrap();
        for j in -200i64..200 {
            assert_eq!(s.evaluate_i64(j, 3), lv.pattern.at(j).letter());
        }
        assert_eq!(s.period_and_holes(3).unwrap(), (BigUint::from(64u32), BigUint::from(4u32)));
        assert_eq!(lv.anchor_offsets, vec![BigInt::from(0), BigInt::from(1), BigInt::from(5)]);
    }

    #[test]
    fn sparse_holes_match_dense() {
        let s = FillingSchedule::from_seeds(ab(), vec![seed("a??b"), seed("aa?a?bbb"), seed("aa????bb")]);
        for l in 1..=3 {
            let dense: Vec<BigUint> =
                build_level(&s, l).unwrap().pattern.holes().iter().map(|&h| BigUint::from(h)).collect();
            assert_eq!(s.hole_residues(l).unwrap(), dense);
        }
    }

    #[test]
    fn offsets_in_schedule() {
        let seeds = vec![parse_seed_with("aa??", &ab(), true).unwrap(), seed("b")];
        let s = FillingSchedule::from_seeds_with_offsets(ab(), seeds, vec![-1, 0]);
        assert_eq!(*s.alignment(), Alignment::Offsets);
        let lv = build_level(&s, 1).unwrap();
        assert_eq!(ab().render(lv.pattern.symbols()), "a??a");
        for j in -20i64..20 {
            assert_eq!(s.evaluate_i64(j, 1), lv.pattern.at(j).letter());
        }
        assert_eq!(s.hole_residues(1).unwrap(), vec![BigUint::from(1u8), BigUint::from(2u8)]);
    }

    #[test]
    fn big_positions_follow_small_ones() {
        let s = FillingSchedule::from_seeds(ab(), vec![seed("a??b"), seed("aa?a?bbb"), seed("a?b")]);
        for j in [-77i64, -3, 0, 5, 9, 1234567] {
            assert_eq!(s.evaluate(&BigInt::from(j), 3), s.evaluate_big(&BigInt::from(j), 3));
        }
        let huge = BigInt::from(1u8) << 200usize;
        assert_eq!(s.evaluate(&huge, 3), s.evaluate(&(huge.clone() % BigInt::from(s.period(3).unwrap())), 3));
    }

    #[test]
    fn schedule_text_round_trip() {
        let text = "ab\n# comment\na??b\naa?a?bbb # trailing\n";
        let s = parse_schedule_text(text).unwrap();
        assert_eq!(s.seeds(5).len(), 2);
        let again = parse_schedule_text(&emit_schedule_text(&s, 5)).unwrap();
        assert_eq!(build_level(&again, 2).unwrap(), build_level(&s, 2).unwrap());
        assert!(parse_schedule_text("ab\n").is_err());
    }

    #[test]
    fn derived_tail_identity_at_zero() {
        let s = FillingSchedule::from_seeds(ab(), vec![seed("a??b"), seed("aa?a?bbb")]);
        let t = s.derived_tail(0);
        assert_eq!(t.seed(1), s.seed(1));
        assert_eq!(s.derived_tail(1).seed(1), s.seed(2));
    }
}
