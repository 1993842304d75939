//! Sliding block codes, factor words seen level by level, the unique residue
//! search and isolating factors.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::boundary::{isolated_value_pair, HoleTree, IsolationVerdict};
use crate::error::{Error, Result};
use crate::periodicity::{class_census, class_scan_length, ClassInfo, LevelModel};
use crate::words::{Alphabet, FillingSchedule, Letter, PeriodicPattern, Symbol, ToeplitzLevel};

/// Largest table a code may carry.
pub const MAX_TABLE: usize = 1 << 20;
/// Completions tried before a partial window is left open.
const MAX_COMPLETIONS: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeRule {
    /// Output per input word, words read as base-`|A|` numbers.
    Table(Vec<Letter>),
    /// `hit` on the listed words, `miss` elsewhere.
    Membership { members: HashSet<Vec<Letter>>, hit: Letter, miss: Letter },
}

/// A local rule `ψ: A^[-J, J] -> A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlidingBlockCode {
    pub radius: usize,
    pub alphabet: Alphabet,
    pub rule: CodeRule,
}

fn table_size(alphabet: &Alphabet, radius: usize) -> Option<usize> {
    alphabet.size().checked_pow(u32::try_from(2 * radius + 1).ok()?).filter(|&n| n <= MAX_TABLE)
}

impl SlidingBlockCode {
    pub fn from_fn<F: Fn(&[Letter]) -> Letter>(alphabet: Alphabet, radius: usize, f: F) -> Result<Self> {
        let n = table_size(&alphabet, radius).ok_or_else(|| Error::TooLarge(format!("table of radius {radius}")))?;
        let k = alphabet.size();
        let width = 2 * radius + 1;
        let mut word = vec![Letter(0); width];
        let table = (0..n)
            .map(|mut idx| {
                for i in (0..width).rev() {
                    word[i] = Letter((idx % k) as u8);
                    idx /= k;
                }
                f(&word)
            })
            .collect();
        Ok(SlidingBlockCode { radius, alphabet, rule: CodeRule::Table(table) })
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Self::from_fn(alphabet, 0, |w| w[0]).expect("tiny")
    }

    pub fn constant(alphabet: Alphabet, a: Letter) -> Self {
        Self::from_fn(alphabet, 0, |_| a).expect("tiny")
    }

    /// `a^(2J+1) ↦ a`, every other word `↦ b`.
    pub fn run_code(alphabet: Alphabet, radius: usize, a: Letter, b: Letter) -> Self {
        let members = HashSet::from([vec![a; 2 * radius + 1]]);
        SlidingBlockCode { radius, alphabet, rule: CodeRule::Membership { members, hit: a, miss: b } }
    }

    pub fn membership(alphabet: Alphabet, radius: usize, members: HashSet<Vec<Letter>>, hit: Letter, miss: Letter) -> Result<Self> {
        if members.iter().any(|w| w.len() != 2 * radius + 1) {
            return Err(Error::Invalid("member length differs from 2J+1".into()));
        }
        Ok(SlidingBlockCode { radius, alphabet, rule: CodeRule::Membership { members, hit, miss } })
    }

    pub fn width(&self) -> usize {
        2 * self.radius + 1
    }

    fn index(&self, w: &[Letter]) -> usize {
        let k = self.alphabet.size();
        w.iter().fold(0, |acc, a| acc * k + a.0 as usize)
    }

    /// `ψ` on a fully known word.
    pub fn apply(&self, w: &[Letter]) -> Letter {
        match &self.rule {
            CodeRule::Table(t) => t[self.index(w)],
            CodeRule::Membership { members, hit, miss } => {
                if members.contains(w) {
                    *hit
                } else {
                    *miss
                }
            }
        }
    }

    /// The common value of `ψ` over all completions of `w`, if there is one.
    pub fn apply_partial(&self, w: &[Option<Letter>]) -> Option<Letter> {
        let open: Vec<usize> = (0..w.len()).filter(|&i| w[i].is_none()).collect();
        if open.is_empty() {
            let full: Vec<Letter> = w.iter().map(|a| a.expect("known")).collect();
            return Some(self.apply(&full));
        }
        let k = self.alphabet.size();
        let completions = u32::try_from(open.len()).ok().and_then(|h| k.checked_pow(h));
        match &self.rule {
            CodeRule::Membership { members, hit, miss } => {
                let fits = |m: &Vec<Letter>| m.iter().zip(w).all(|(a, b)| b.is_none_or(|b| b == *a));
                let n = members.iter().filter(|m| fits(m)).count();
                if n == 0 {
                    Some(*miss)
                } else if Some(n) == completions {
                    Some(*hit)
                } else {
                    None
                }
            }
            CodeRule::Table(_) => {
                let total = completions.filter(|&c| c <= MAX_COMPLETIONS)?;
                let mut word: Vec<Letter> = w.iter().map(|a| a.unwrap_or(Letter(0))).collect();
                let mut seen = None;
                for mut idx in 0..total {
                    for &i in &open {
                        word[i] = Letter((idx % k) as u8);
                        idx /= k;
                    }
                    let v = self.apply(&word);
                    if seen.is_some_and(|s| s != v) {
                        return None;
                    }
                    seen = Some(v);
                }
                seen
            }
        }
    }
}

/// The factor pattern of one level; holes where completions disagree.
pub fn apply_code(code: &SlidingBlockCode, level: &ToeplitzLevel) -> Result<PeriodicPattern> {
    let p = level.period();
    if p <= code.width() {
        return Err(Error::RadiusTooLarge { radius: code.radius, period: p });
    }
    let j0 = code.radius as i64;
    let symbols = (0..p as i64)
        .map(|j| {
            let w: Vec<Option<Letter>> = (j - j0..=j + j0).map(|i| level.pattern.at(i).letter()).collect();
            code.apply_partial(&w).into()
        })
        .collect();
    Ok(PeriodicPattern::new(symbols)?)
}

/// Levels by which a saturating census must be stable.
pub const DEFAULT_SATURATION: usize = 2;

/// `Ψ(x)` seen through the levels of the source schedule.
///
/// Windows of a factor class keep touching deeper source holes, so a strict
/// census never calls such a class periodic. With `saturation = Some(d)` the
/// leaf census reads a class from its resolved windows alone, provided their
/// letters are the same at resolutions `res - d` and `res`; this needs
/// `res > l + d`.
pub struct FactorModel<'a> {
    pub code: &'a SlidingBlockCode,
    pub source: &'a FillingSchedule,
    pub saturation: Option<usize>,
}

impl<'a> FactorModel<'a> {
    pub fn new(code: &'a SlidingBlockCode, source: &'a FillingSchedule) -> Self {
        FactorModel { code, source, saturation: None }
    }

    pub fn saturating(mut self, levels: usize) -> Self {
        self.saturation = Some(levels);
        self
    }

    fn window(&self, center: &BigInt, level: usize) -> Vec<Option<Letter>> {
        let j = self.code.radius as i64;
        (-j..=j).map(|i| self.source.evaluate(&(center + i), level)).collect()
    }
}

impl LevelModel for FactorModel<'_> {
    fn alphabet(&self) -> &Alphabet {
        &self.code.alphabet
    }

    fn period(&self, l: usize) -> Result<BigUint> {
        Ok(self.source.period(l)?)
    }

    fn hole_classes(&self, l: usize) -> Result<Vec<BigUint>> {
        let p = self.source.period(l)?;
        let width = BigUint::from(self.code.width());
        let holes = self.source.hole_residues(l)?;
        let candidates: BTreeSet<BigUint> = if BigUint::from(holes.len()) * &width >= p {
            let n = p.to_usize().ok_or_else(|| Error::TooLarge("factor classes".into()))?;
            (0..n).map(BigUint::from).collect()
        } else {
            let pi = BigInt::from(p.clone());
            let j = self.code.radius as i64;
            holes
                .iter()
                .flat_map(|h| {
                    let h = BigInt::from(h.clone());
                    let pi = &pi;
                    (-j..=j).map(move |d| (&h + d).mod_floor(pi).to_biguint().expect("non-negative"))
                })
                .collect()
        };
        Ok(candidates.into_iter().filter(|r| self.class_symbol(l, r).is_hole()).collect())
    }

    fn class_symbol(&self, l: usize, r: &BigUint) -> Symbol {
        self.code.apply_partial(&self.window(&BigInt::from(r.clone()), l)).into()
    }

    fn value(&self, j: &BigInt, res: usize) -> Option<Letter> {
        self.code.apply_partial(&self.window(j, res))
    }

    /// Scans each class through the fills of the source holes in its window,
    /// applying the code once per distinct fill.
    fn leaf_census(&self, l: usize, classes: &[BigUint], res: usize) -> Result<Vec<ClassInfo>> {
        let p = self.source.period(l)?;
        let k = class_scan_length(&self.source.period(res)?, &p)?;
        let p = BigInt::from(p);
        let mut out = Vec::with_capacity(classes.len());
        for r in classes {
            let r0 = BigInt::from(r.clone());
            let base = self.window(&r0, l);
            let open: Vec<i64> = (0..base.len()).filter(|&i| base[i].is_none()).map(|i| i as i64 - self.code.radius as i64).collect();
            let lower = match self.saturation {
                Some(d) if res > l + d => Some(res - d),
                Some(_) => return Err(Error::Invalid("resolution too low for saturation".into())),
                None => None,
            };
            let mut fills: HashMap<(Vec<Option<Letter>>, bool), BigInt> = HashMap::new();
            let mut j = r0.clone();
            for _ in 0..k {
                let fill: Vec<Option<Letter>> = open.iter().map(|&d| self.source.evaluate(&(&j + d), res)).collect();
                let early = lower.is_some_and(|lo| open.iter().all(|&d| self.source.evaluate(&(&j + d), lo).is_some()));
                fills.entry((fill, early)).or_insert_with(|| j.clone());
                j += &p;
            }
            let mut info = ClassInfo::new(r.clone());
            let mut early_letters = BTreeSet::new();
            let mut ordered: Vec<_> = fills.into_iter().collect();
            ordered.sort_by(|a, b| a.1.cmp(&b.1));
            for ((fill, early), at) in ordered {
                let mut w = base.clone();
                for (&d, v) in open.iter().zip(fill) {
                    w[(d + self.code.radius as i64) as usize] = v;
                }
                match self.code.apply_partial(&w) {
                    Some(a) => {
                        info.add(a, &at);
                        if early {
                            early_letters.insert(a);
                        }
                    }
                    None => info.unresolved = true,
                }
            }
            if lower.is_some() {
                info.unresolved = info.values.is_empty() || !info.values.keys().copied().eq(early_letters.iter().copied());
            }
            out.push(info);
        }
        Ok(out)
    }
}

/// Residues of `Aper(p_l, Ψ(x))` from a saturating census at `depth`.
pub fn factor_aperiodic_residues(code: &SlidingBlockCode, schedule: &FillingSchedule, l: usize, depth: usize) -> Result<Vec<BigUint>> {
    let model = FactorModel::new(code, schedule).saturating(DEFAULT_SATURATION);
    Ok(class_census(&model, l, depth)?.aperiodic_residues(l))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchResult {
    HoldsOnWindow,
    CounterexamplePair(i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueSearchCertificate {
    pub l1: usize,
    pub l2: usize,
    /// Start positions `[lo, hi)`; each word has length `p_{l2}`.
    pub window: (i64, i64),
    pub resolution: usize,
    pub result: SearchResult,
}

impl ResidueSearchCertificate {
    pub fn holds(&self) -> bool {
        self.result == SearchResult::HoldsOnWindow
    }
}

/// Checks that the word `x[j, j + p_{l2})` determines `j mod p_{l1}` for all
/// starts `j` in `[lo, hi)`.
pub fn unique_residue_search(
    schedule: &FillingSchedule,
    l1: usize,
    l2: usize,
    window: (i64, i64),
    resolution: usize,
) -> Result<ResidueSearchCertificate> {
    let (lo, hi) = window;
    let p1 = schedule.period(l1)?.to_i64().ok_or_else(|| Error::TooLarge("period".into()))?;
    let n = schedule.period(l2)?.to_usize().filter(|&n| n <= 1 << 24).ok_or_else(|| Error::TooLarge("word length".into()))?;
    let x: Vec<Letter> = schedule
        .window(lo, hi + n as i64, resolution)
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::UnresolvedWindow(format!("position {} at level {resolution}", lo + i as i64))))
        .collect::<Result<_>>()?;
    let hashes = rolling_hashes(&x, n);
    let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut result = SearchResult::HoldsOnWindow;
    'scan: for (i, h) in hashes.iter().enumerate().take((hi - lo).max(0) as usize) {
        let bucket = seen.entry(*h).or_default();
        for &k in bucket.iter() {
            if x[k..k + n] == x[i..i + n] && (k as i64 - i as i64).rem_euclid(p1) != 0 {
                result = SearchResult::CounterexamplePair(lo + k as i64, lo + i as i64);
                break 'scan;
            }
        }
        if bucket.iter().all(|&k| x[k..k + n] != x[i..i + n]) {
            bucket.push(i);
        }
    }
    Ok(ResidueSearchCertificate { l1, l2, window, resolution, result })
}

fn rolling_hashes(x: &[Letter], n: usize) -> Vec<u64> {
    const B: u64 = 0x100_0000_01b3;
    if x.len() < n {
        return Vec::new();
    }
    let top = (1..n).fold(1u64, |acc, _| acc.wrapping_mul(B));
    let mut h = x[..n].iter().fold(0u64, |acc, a| acc.wrapping_mul(B).wrapping_add(a.0 as u64 + 1));
    let mut out = Vec::with_capacity(x.len() - n + 1);
    out.push(h);
    for i in n..x.len() {
        h = h.wrapping_sub((x[i - n].0 as u64 + 1).wrapping_mul(top)).wrapping_mul(B).wrapping_add(x[i].0 as u64 + 1);
        out.push(h);
    }
    out
}

/// The lowest level at which `[lo, hi)` is fully resolved, up to `cap`.
pub fn resolving_level(schedule: &FillingSchedule, lo: i64, hi: i64, from: usize, cap: usize) -> Option<usize> {
    let mut open: Vec<i64> = (lo..hi).collect();
    for l in from..=cap {
        if !schedule.has_level(l) {
            return None;
        }
        open.retain(|&j| schedule.evaluate_i64(j, l).is_none());
        if open.is_empty() {
            return Some(l);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingCode {
    pub code: SlidingBlockCode,
    pub branch: Vec<BigUint>,
    pub letter: Letter,
    pub l1: usize,
    pub l2: usize,
    pub search: ResidueSearchCertificate,
    /// Centres `j` scanned for members, `[lo, hi)`.
    pub collection: (i64, i64),
    pub resolution: usize,
    pub members: usize,
    /// Centres skipped since their window was not resolved.
    pub skipped: usize,
    /// Centres within `p_{top-1}` of the origin already gave every member.
    pub saturated: bool,
}

/// Parameters of the isolating code construction.
#[derive(Clone, Debug)]
pub struct IsolationSetup {
    pub l1: usize,
    /// Highest level tried for `l2`.
    pub max_l2: usize,
    /// Levels above `l2` spanned by the collection window.
    pub collection_levels: usize,
    pub resolution_cap: usize,
}

/// Largest number of centres scanned for members.
const MAX_CENTRES: i64 = 1 << 20;

/// The code of radius `p_{l2}` sending the windows around the `a`-positions of
/// the class `ω(l1) + p_{l1} Z` to `a` and everything else to the other letter.
pub fn build_isolating_code(
    schedule: &FillingSchedule,
    tree: &HoleTree,
    branch: &[BigUint],
    a: Letter,
    b: Letter,
    setup: &IsolationSetup,
) -> Result<IsolatingCode> {
    let l1 = setup.l1;
    match isolated_value_pair(tree, schedule.alphabet(), branch, a, b)? {
        IsolationVerdict::CertifiedAtLevel(l) if l <= l1 => {}
        v => return Err(Error::NotIsolated(format!("{v:?} for level {l1}"))),
    }
    let mut found = None;
    for l2 in l1..=setup.max_l2 {
        let w = schedule.period(l2 + 1)?.to_i64().ok_or_else(|| Error::TooLarge("search window".into()))?;
        let n = schedule.period(l2)?.to_i64().expect("smaller");
        let res = resolving_level(schedule, -w, w + n, l2, setup.resolution_cap)
            .ok_or_else(|| Error::UnresolvedWindow(format!("search window for l2 = {l2}")))?;
        let cert = unique_residue_search(schedule, l1, l2, (-w, w), res)?;
        if cert.holds() {
            found = Some(cert);
            break;
        }
    }
    let search = found.ok_or_else(|| Error::NotIsolated(format!("no l2 <= {} separates residues", setup.max_l2)))?;
    let l2 = search.l2;
    let radius = schedule.period(l2)?.to_usize().ok_or_else(|| Error::TooLarge("radius".into()))?;
    let top = l2 + setup.collection_levels;
    let span = schedule.period(top)?.to_i64().ok_or_else(|| Error::TooLarge("collection".into()))?;
    let block = schedule.period(top - 1)?.to_i64().expect("smaller");
    let p1 = schedule.period(l1)?.to_i64().expect("smaller");
    if 2 * span / p1 > MAX_CENTRES {
        return Err(Error::TooLarge(format!("{} centres", 2 * span / p1)));
    }
    let resolution = (top + 2).min(setup.resolution_cap).max(top);
    let r = branch[l1 - 1].to_i64().expect("residue");
    let first = -span + (r + span).rem_euclid(p1);
    let lo = first - radius as i64;
    let x = schedule.window(lo, span + radius as i64 + 1, resolution);
    let mut members: HashSet<Vec<Letter>> = HashSet::new();
    let mut inner: HashSet<Vec<Letter>> = HashSet::new();
    let mut skipped = 0;
    let mut j = first;
    while j < span {
        let i = (j - lo) as usize;
        if x[i] == Some(a) {
            match x[i - radius..=i + radius].iter().copied().collect::<Option<Vec<Letter>>>() {
                Some(w) => {
                    if (-block..block).contains(&j) {
                        inner.insert(w.clone());
                    }
                    members.insert(w);
                }
                None => skipped += 1,
            }
        }
        j += p1;
    }
    let count = members.len();
    let saturated = inner.len() == count;
    let code = SlidingBlockCode::membership(schedule.alphabet().clone(), radius, members, a, b)?;
    Ok(IsolatingCode {
        code,
        branch: branch.to_vec(),
        letter: a,
        l1,
        l2,
        search,
        collection: (first, span),
        resolution,
        members: count,
        skipped,
        saturated,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackLevel {
    pub level: usize,
    /// Factor residue and an offset `j` with `r + j` a source residue.
    pub residues: Vec<(BigUint, Option<i64>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackReport {
    pub radius: usize,
    pub levels: Vec<PullbackLevel>,
}

impl PullbackReport {
    pub fn holds(&self) -> bool {
        self.levels.iter().all(|l| l.residues.iter().all(|(_, j)| j.is_some()))
    }
}

/// Every factor aperiodic residue lies within the radius of a source one.
pub fn boundary_pullback_check(code: &SlidingBlockCode, schedule: &FillingSchedule, depth: usize, resolution: usize) -> Result<PullbackReport> {
    let source = class_census(schedule, depth, resolution)?;
    let factor = class_census(&FactorModel::new(code, schedule).saturating(DEFAULT_SATURATION), depth, resolution)?;
    let j = code.radius as i64;
    let mut offsets: Vec<i64> = (0..=j).flat_map(|d| [-d, d]).collect();
    offsets.dedup();
    let levels = (1..=depth)
        .map(|l| {
            let p = BigInt::from(source.period(l).clone());
            let holes: BTreeSet<BigUint> = source.aperiodic_residues(l).into_iter().collect();
            let residues = factor
                .aperiodic_residues(l)
                .into_iter()
                .map(|r| {
                    let ri = BigInt::from(r.clone());
                    let hit = offsets
                        .iter()
                        .copied()
                        .find(|&d| holes.contains(&(&ri + d).mod_floor(&p).to_biguint().expect("non-negative")));
                    (r, hit)
                })
                .collect();
            PullbackLevel { level: l, residues }
        })
        .collect();
    Ok(PullbackReport { radius: code.radius, levels })
}

/// Writes a code: alphabet and radius lines, then `word letter` lines and an
/// optional `* letter` default.
pub fn emit_code(code: &SlidingBlockCode) -> String {
    let a = &code.alphabet;
    let mut out = format!("alphabet {}\nradius {}\n", a.as_string(), code.radius);
    match &code.rule {
        CodeRule::Table(t) => {
            let k = a.size();
            let width = code.width();
            for (idx, v) in t.iter().enumerate() {
                let mut word = vec![Letter(0); width];
                let mut n = idx;
                for i in (0..width).rev() {
                    word[i] = Letter((n % k) as u8);
                    n /= k;
                }
                let _ = writeln!(out, "{} {}", a.render_letters(&word), a.char_of(*v));
            }
        }
        CodeRule::Membership { members, hit, miss } => {
            let mut sorted: Vec<&Vec<Letter>> = members.iter().collect();
            sorted.sort();
            for w in sorted {
                let _ = writeln!(out, "{} {}", a.render_letters(w), a.char_of(*hit));
            }
            let _ = writeln!(out, "* {}", a.char_of(*miss));
        }
    }
    out
}

pub fn parse_code(text: &str) -> Result<SlidingBlockCode> {
    let bad = |m: &str| Error::Invalid(format!("code file: {m}"));
    let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
    let alphabet = match lines.next().and_then(|l| l.strip_prefix("alphabet ")) {
        Some(s) => Alphabet::new(s.trim())?,
        None => return Err(bad("missing alphabet line")),
    };
    let radius: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("radius "))
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| bad("missing radius line"))?;
    let letter = |s: &str| {
        let mut c = s.chars();
        match (c.next(), c.next()) {
            (Some(ch), None) => alphabet.letter_of(ch).ok_or_else(|| bad("unknown output letter")),
            _ => Err(bad("output must be one letter")),
        }
    };
    let mut rows: Vec<(Vec<Letter>, Letter)> = Vec::new();
    let mut default = None;
    for line in lines {
        let (w, v) = line.split_once(char::is_whitespace).ok_or_else(|| bad("expected `word letter`"))?;
        let v = letter(v.trim())?;
        if w == "*" {
            default = Some(v);
            continue;
        }
        let word: Vec<Letter> = w.chars().map(|c| alphabet.letter_of(c).ok_or_else(|| bad("unknown letter"))).collect::<Result<_>>()?;
        if word.len() != 2 * radius + 1 {
            return Err(bad("word length differs from 2J+1"));
        }
        rows.push((word, v));
    }
    let hits: BTreeSet<Letter> = rows.iter().map(|r| r.1).collect();
    match (default, hits.len()) {
        (Some(miss), 0 | 1) => {
            let hit = hits.iter().next().copied().unwrap_or(miss);
            SlidingBlockCode::membership(alphabet, radius, rows.into_iter().map(|r| r.0).collect(), hit, miss)
        }
        _ => {
            let map: HashMap<Vec<Letter>, Letter> = rows.into_iter().collect();
            let missing = std::cell::Cell::new(false);
            let code = SlidingBlockCode::from_fn(alphabet, radius, |w| match map.get(w).copied().or(default) {
                Some(v) => v,
                None => {
                    missing.set(true);
                    Letter(0)
                }
            })?;
            if missing.get() {
                return Err(bad("table is not total and has no default"));
            }
            Ok(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::hole_tree;
    use crate::gallery::named;
    use crate::words::build_level;

    const A: Letter = Letter(0);
    const B: Letter = Letter(1);

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn run_code_on_level_four() {
        let x = named("ex5.7").unwrap().schedule;
        let lv = build_level(&x, 4).unwrap();
        let code = SlidingBlockCode::run_code(Alphabet::ab(), 1, A, B);
        let out = apply_code(&code, &lv).unwrap();
        let a: Vec<i64> = (0..16).filter(|&j| out.at(j) == Symbol::Letter(A)).collect();
        assert_eq!(a, vec![1, 5]);
    }

    #[test]
    fn trivial_codes() {
        let x = named("ex4.3").unwrap().schedule;
        let lv = build_level(&x, 2).unwrap();
        let id = SlidingBlockCode::identity(Alphabet::ab());
        assert_eq!(apply_code(&id, &lv).unwrap(), lv.pattern);
        let c = SlidingBlockCode::constant(Alphabet::ab(), A);
        assert!(apply_code(&c, &lv).unwrap().holes().is_empty());
        let wide = SlidingBlockCode::run_code(Alphabet::ab(), 8, A, B);
        assert_eq!(apply_code(&wide, &lv), Err(Error::RadiusTooLarge { radius: 8, period: 16 }));
    }

    #[test]
    fn factor_residues() {
        let x = named("ex5.7").unwrap().schedule;
        let code = SlidingBlockCode::run_code(Alphabet::ab(), 1, A, B);
        assert_eq!(factor_aperiodic_residues(&code, &x, 1, 4).unwrap(), big(&[1]));
        assert_eq!(factor_aperiodic_residues(&code, &x, 2, 5).unwrap(), big(&[5]));
        let e = named("ex4.3").unwrap().schedule;
        let id = SlidingBlockCode::identity(Alphabet::ab());
        assert_eq!(factor_aperiodic_residues(&id, &e, 2, 5).unwrap(), big(&[5, 9]));
    }

    #[test]
    fn table_and_membership_agree() {
        let x = named("ex5.7").unwrap().schedule;
        let m = SlidingBlockCode::run_code(Alphabet::ab(), 1, A, B);
        let t = SlidingBlockCode::from_fn(Alphabet::ab(), 1, |w| if w == [A, A, A] { A } else { B }).unwrap();
        for l in 1..=3 {
            let fm = FactorModel::new(&m, &x);
            let ft = FactorModel::new(&t, &x);
            assert_eq!(fm.hole_classes(l).unwrap(), ft.hole_classes(l).unwrap());
            for j in -64..64 {
                assert_eq!(fm.value(&j.into(), l), ft.value(&j.into(), l));
            }
        }
    }

    #[test]
    fn residue_search() {
        let x = named("ex5.7").unwrap().schedule;
        let res = resolving_level(&x, 0, 512 + 64, 1, 12).unwrap();
        assert!(unique_residue_search(&x, 1, 3, (0, 512), res).unwrap().holds());
        let c = unique_residue_search(&x, 2, 1, (0, 512), res).unwrap();
        assert!(matches!(c.result, SearchResult::CounterexamplePair(_, _)));
        if let SearchResult::CounterexamplePair(j1, j2) = c.result {
            let w1 = x.window(j1, j1 + 4, res);
            assert_eq!(w1, x.window(j2, j2 + 4, res));
            assert_ne!((j1 - j2).rem_euclid(16), 0);
        }
        let constant = FillingSchedule::from_seeds(Alphabet::ab(), vec![crate::words::parse_seed("aa?a", &Alphabet::ab()).unwrap(), crate::words::parse_seed("a", &Alphabet::ab()).unwrap()]);
        let c = unique_residue_search(&constant, 1, 1, (0, 20), 2).unwrap();
        assert!(!c.holds());
    }

    #[test]
    fn pullback() {
        let x = named("ex5.7").unwrap().schedule;
        let code = SlidingBlockCode::run_code(Alphabet::ab(), 1, A, B);
        let r = boundary_pullback_check(&code, &x, 3, 6).unwrap();
        assert!(r.holds());
        assert_eq!(r.levels[1].residues, vec![(BigUint::from(5u32), Some(0))]);
        let id = SlidingBlockCode::identity(Alphabet::ab());
        let r = boundary_pullback_check(&id, &x, 3, 6).unwrap();
        assert!(r.levels.iter().all(|l| l.residues.iter().all(|(_, j)| *j == Some(0))));
        let c = SlidingBlockCode::constant(Alphabet::ab(), A);
        let r = boundary_pullback_check(&c, &x, 3, 6).unwrap();
        assert!(r.holds() && r.levels.iter().all(|l| l.residues.is_empty()));
    }

    #[test]
    fn code_text_round_trip() {
        let t = SlidingBlockCode::from_fn(Alphabet::ab(), 1, |w| w[1]).unwrap();
        assert_eq!(parse_code(&emit_code(&t)).unwrap(), t);
        let m = SlidingBlockCode::run_code(Alphabet::ab(), 1, A, B);
        assert_eq!(parse_code(&emit_code(&m)).unwrap(), m);
        assert!(parse_code("alphabet ab\nradius 1\naaa a\n").is_err());
    }

    #[test]
    fn isolating_code_on_singleton_chain() {
        let x = named("ex4.4-mini").unwrap().schedule;
        let tree = hole_tree(&x, 4, 5).unwrap();
        let branch = tree.least_branch().unwrap();
        let setup = IsolationSetup { l1: 1, max_l2: 3, collection_levels: 2, resolution_cap: 8 };
        let iso = build_isolating_code(&x, &tree, &branch, A, B, &setup).unwrap();
        assert!(iso.search.holds());
        let f = FactorModel::new(&iso.code, &x);
        for l in 1..=3 {
            assert_eq!(class_census(&f, l, l + 1).unwrap().aperiodic_residues(l), vec![branch[l - 1].clone()], "level {l}");
        }
        let e = named("ex3.5").unwrap().schedule;
        let tree = hole_tree(&e, 4, 5).unwrap();
        let branch = tree.least_branch().unwrap();
        let r = build_isolating_code(&e, &tree, &branch, A, B, &setup);
        assert!(matches!(r, Err(Error::NotIsolated(_))));
    }
}
