//! Periodic and aperiodic residue classes, period structures, regularity and
//! the generalised Oxtoby conditions.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gallery::factorize;
use crate::words::{Alphabet, FillingSchedule, Letter, Symbol, ToeplitzLevel};

/// Largest number of positions scanned for one residue class.
pub const MAX_CLASS_SCAN: usize = 1 << 24;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ResidueStatus {
    Periodic(Letter),
    Nonperiodic,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueClassStatus {
    pub residue: usize,
    pub status: ResidueStatus,
}

/// Classifies every residue mod `p` by scanning one `lcm(p, p_l)` window of
/// the level pattern.
pub fn classify_residues(level: &ToeplitzLevel, p: usize) -> Vec<ResidueClassStatus> {
    assert!(p >= 1, "period must be positive");
    let pl = level.period();
    let span = p.lcm(&pl);
    (0..p)
        .map(|r| {
            let mut seen: Option<Letter> = None;
            let mut hole = false;
            let mut mixed = false;
            for j in (r..span).step_by(p) {
                match level.pattern.symbols()[j % pl] {
                    Symbol::Hole => hole = true,
                    Symbol::Letter(a) => match seen {
                        None => seen = Some(a),
                        Some(b) if b != a => mixed = true,
                        _ => {}
                    },
                }
            }
            let status = match (mixed, hole, seen) {
                (true, _, _) => ResidueStatus::Nonperiodic,
                (false, false, Some(a)) => ResidueStatus::Periodic(a),
                _ => ResidueStatus::Undetermined,
            };
            ResidueClassStatus { residue: r, status }
        })
        .collect()
}

/// A bi-infinite word seen through its levels `1, 2, ...` of a fixed scale.
pub trait LevelModel: Sync {
    fn alphabet(&self) -> &Alphabet;

    fn period(&self, l: usize) -> Result<BigUint>;

    /// Sorted residues in `[0, p_l)` whose level-`l` class symbol is a hole.
    fn hole_classes(&self, l: usize) -> Result<Vec<BigUint>>;

    /// Level-`l` symbol of the class `r + p_l Z`; a letter is exact for the class.
    fn class_symbol(&self, l: usize, r: &BigUint) -> Symbol;

    /// Value at `j` as resolved by level `res`.
    fn value(&self, j: &BigInt, res: usize) -> Option<Letter>;

    /// Observed values of the given level-`l` classes at resolution `res`.
    fn leaf_census(&self, l: usize, classes: &[BigUint], res: usize) -> Result<Vec<ClassInfo>> {
        let p = self.period(l)?;
        let k = class_scan_length(&self.period(res)?, &p)?;
        let p = BigInt::from(p);
        Ok(classes
            .iter()
            .map(|r| {
                let mut info = ClassInfo::new(r.clone());
                let mut j = BigInt::from(r.clone());
                for _ in 0..k {
                    match self.value(&j, res) {
                        Some(a) => info.add(a, &j),
                        None => info.unresolved = true,
                    }
                    j += &p;
                }
                info
            })
            .collect())
    }
}

pub(crate) fn class_scan_length(p_res: &BigUint, p: &BigUint) -> Result<usize> {
    let (k, rem) = p_res.div_rem(p);
    if !rem.is_zero() {
        return Err(Error::Invalid("resolution period is not a multiple".into()));
    }
    k.to_usize()
        .filter(|&k| k <= MAX_CLASS_SCAN)
        .ok_or_else(|| Error::TooLarge(format!("class scan of {k} positions")))
}

impl LevelModel for FillingSchedule {
    fn alphabet(&self) -> &Alphabet {
        FillingSchedule::alphabet(self)
    }

    fn period(&self, l: usize) -> Result<BigUint> {
        Ok(FillingSchedule::period(self, l)?)
    }

    fn hole_classes(&self, l: usize) -> Result<Vec<BigUint>> {
        Ok(self.hole_residues(l)?)
    }

    fn class_symbol(&self, l: usize, r: &BigUint) -> Symbol {
        self.symbol(&BigInt::from(r.clone()), l)
    }

    fn value(&self, j: &BigInt, res: usize) -> Option<Letter> {
        self.evaluate(j, res)
    }
}

/// Letters seen in one residue class, with one witness position per letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    pub residue: BigUint,
    pub values: BTreeMap<Letter, BigInt>,
    pub unresolved: bool,
}

impl ClassInfo {
    pub fn new(residue: BigUint) -> Self {
        ClassInfo { residue, values: BTreeMap::new(), unresolved: false }
    }

    pub fn add(&mut self, a: Letter, at: &BigInt) {
        self.values.entry(a).or_insert_with(|| at.clone());
    }

    fn merge(&mut self, other: &ClassInfo) {
        for (a, at) in &other.values {
            self.add(*a, at);
        }
        self.unresolved |= other.unresolved;
    }

    pub fn status(&self) -> ResidueStatus {
        match (self.values.len(), self.unresolved) {
            (n, _) if n >= 2 => ResidueStatus::Nonperiodic,
            (1, false) => ResidueStatus::Periodic(*self.values.keys().next().expect("one")),
            _ => ResidueStatus::Undetermined,
        }
    }

    pub fn is_aperiodic(&self) -> bool {
        !matches!(self.status(), ResidueStatus::Periodic(_))
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.values.keys().copied().collect()
    }
}

/// Hole classes of levels `1..=depth` with values observed at `resolution`.
#[derive(Clone, Debug)]
pub struct ClassCensus {
    pub depth: usize,
    pub resolution: usize,
    pub periods: Vec<BigUint>,
    levels: Vec<Vec<ClassInfo>>,
}

impl ClassCensus {
    /// Hole classes of level `l`, sorted by residue.
    pub fn holes(&self, l: usize) -> &[ClassInfo] {
        &self.levels[l - 1]
    }

    pub fn period(&self, l: usize) -> &BigUint {
        &self.periods[l - 1]
    }

    pub fn find(&self, l: usize, r: &BigUint) -> Option<&ClassInfo> {
        let v = self.holes(l);
        v.binary_search_by(|c| c.residue.cmp(r)).ok().map(|i| &v[i])
    }

    pub fn aperiodic(&self, l: usize) -> Vec<&ClassInfo> {
        self.holes(l).iter().filter(|c| c.is_aperiodic()).collect()
    }

    pub fn aperiodic_residues(&self, l: usize) -> Vec<BigUint> {
        self.aperiodic(l).into_iter().map(|c| c.residue.clone()).collect()
    }

    /// Hole classes that turned out periodic at this resolution.
    pub fn periodic_holes(&self, l: usize) -> Vec<&ClassInfo> {
        self.holes(l).iter().filter(|c| !c.is_aperiodic()).collect()
    }
}

pub(crate) fn ratio(big: &BigUint, small: &BigUint, level: usize) -> Result<usize> {
    let (q, r) = big.div_rem(small);
    if !r.is_zero() {
        return Err(Error::DivisibilityViolation { level });
    }
    q.to_usize().ok_or_else(|| Error::TooLarge("period ratio".into()))
}

/// Builds the class census bottom-up: leaves are scanned at `resolution`,
/// inner classes collect their sub-classes one level down.
pub fn class_census<M: LevelModel + ?Sized>(model: &M, depth: usize, resolution: usize) -> Result<ClassCensus> {
    if depth == 0 || resolution < depth {
        return Err(Error::Invalid("need 1 <= depth <= resolution".into()));
    }
    let periods = (1..=depth).map(|l| model.period(l)).collect::<Result<Vec<_>>>()?;
    let holes = (1..=depth).map(|l| model.hole_classes(l)).collect::<Result<Vec<_>>>()?;
    let mut levels = vec![Vec::new(); depth];
    levels[depth - 1] = model.leaf_census(depth, &holes[depth - 1], resolution)?;
    for l in (1..depth).rev() {
        let k = ratio(&periods[l], &periods[l - 1], l + 1)?;
        let p = &periods[l - 1];
        let below = &levels[l];
        let mut here = Vec::with_capacity(holes[l - 1].len());
        for r in &holes[l - 1] {
            let mut info = ClassInfo::new(r.clone());
            let mut c = r.clone();
            for _ in 0..k {
                match model.class_symbol(l + 1, &c) {
                    Symbol::Letter(a) => info.add(a, &BigInt::from(c.clone())),
                    Symbol::Hole => {
                        let child = below
                            .binary_search_by(|x: &ClassInfo| x.residue.cmp(&c))
                            .map_err(|_| Error::Invalid(format!("hole class {c} missing at level {}", l + 1)))?;
                        info.merge(&below[child]);
                    }
                }
                c += p;
            }
            here.push(info);
        }
        levels[l - 1] = here;
    }
    Ok(ClassCensus { depth, resolution, periods, levels })
}

/// Residues of `Aper(p_l)` in `[0, p_l)`, resolved at level `depth`.
pub fn aperiodic_residues<M: LevelModel + ?Sized>(model: &M, l: usize, depth: usize) -> Result<Vec<BigUint>> {
    Ok(class_census(model, l, depth)?.aperiodic_residues(l))
}

/// Witness that `p_l` is not replaced by the smaller period `p_l / q`:
/// `x(at)` is `p_l`-periodic with letter `a`, while `x(at + shift) = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialWitness {
    pub prime: u64,
    pub at: BigInt,
    pub shift: BigInt,
    pub letters: (Letter, Letter),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelFlags {
    pub level: usize,
    pub period: BigUint,
    pub divisible: bool,
    pub essential: bool,
    pub witnesses: Vec<EssentialWitness>,
    pub covered: bool,
    pub coverage_window: (BigInt, BigInt),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodStructureCertificate {
    pub scale: Vec<BigUint>,
    pub depth: usize,
    pub resolution: usize,
    pub levels: Vec<LevelFlags>,
}

impl PeriodStructureCertificate {
    pub fn all_pass(&self) -> bool {
        self.levels.iter().all(|f| f.divisible && f.essential && f.covered)
    }
}

const COVERAGE_CAP: u64 = 1 << 14;

/// Checks divisibility, essentiality and coverage of `scale`.
///
/// Essentiality of `p_l` is reduced to the maximal proper divisors `p_l / q`:
/// if `Per(p_l) = Per(p)` for some `p < p_l`, then also `Per(p_l) = Per(g)`
/// with `g = gcd(p, p_l)`, and `Per(g)` only grows towards `p_l`.
pub fn verify_period_structure<M: LevelModel + ?Sized>(
    model: &M,
    scale: &[BigUint],
    depth: usize,
    resolution: usize,
) -> Result<PeriodStructureCertificate> {
    if depth > scale.len() {
        return Err(Error::Invalid("scale shorter than depth".into()));
    }
    for l in 1..depth {
        if !(&scale[l] % &scale[l - 1]).is_zero() {
            return Err(Error::DivisibilityViolation { level: l + 1 });
        }
    }
    let own = (1..=depth).map(|l| model.period(l)).collect::<Result<Vec<_>>>()?;
    let matches_model = own[..] == scale[..depth];
    let census = if matches_model { Some(class_census(model, depth, resolution)?) } else { None };
    let mut levels = Vec::with_capacity(depth);
    for l in 1..=depth {
        let p = scale[l - 1].clone();
        let (essential, witnesses, covered, window) = match &census {
            Some(c) => {
                let (ok, w) = essentiality(model, c, l)?;
                let prev = if l == 1 { BigUint::one() } else { scale[l - 2].clone() };
                let half = BigInt::from(prev.min(BigUint::from(COVERAGE_CAP)));
                let lo = -half.clone();
                let mut j = lo.clone();
                let mut covered = true;
                while j < half {
                    if model.value(&j, resolution).is_none() {
                        covered = false;
                        break;
                    }
                    j += 1;
                }
                (ok, w, covered, (lo, half))
            }
            None => (false, Vec::new(), false, (BigInt::zero(), BigInt::zero())),
        };
        levels.push(LevelFlags { level: l, period: p, divisible: true, essential, witnesses, covered, coverage_window: window });
    }
    Ok(PeriodStructureCertificate { scale: scale[..depth].to_vec(), depth, resolution, levels })
}

fn essentiality<M: LevelModel + ?Sized>(model: &M, census: &ClassCensus, l: usize) -> Result<(bool, Vec<EssentialWitness>)> {
    let p = census.period(l).clone();
    if (census.holes(l).len() as u64) >= p.to_u64().unwrap_or(u64::MAX) && census.periodic_holes(l).is_empty() {
        return Ok((false, Vec::new()));
    }
    let pi = p.to_u64().ok_or_else(|| Error::TooLarge("period beyond u64 for factorization".into()))?;
    let p_big = BigInt::from(p.clone());
    let mut witnesses = Vec::new();
    for q in factorize(pi).into_keys() {
        let g = BigInt::from(pi / q);
        let found = census.aperiodic(l).into_iter().find_map(|class| {
            class.values.iter().find_map(|(b, at)| {
                (1..q).find_map(|n| {
                    let shift = &g * BigInt::from(n);
                    let j = at - &shift;
                    let r = j.mod_floor(&p_big).to_biguint().expect("non-negative");
                    match model.class_symbol(l, &r) {
                        Symbol::Letter(a) if a != *b => {
                            Some(EssentialWitness { prime: q, at: j, shift: shift.clone(), letters: (a, *b) })
                        }
                        _ => None,
                    }
                })
            })
        });
        let found = match found {
            Some(w) => Some(w),
            None => letter_pair_in_subclass(model, l, pi, q)?,
        };
        match found {
            Some(w) => witnesses.push(w),
            None => return Ok((false, witnesses)),
        }
    }
    Ok((true, witnesses))
}

const SUBCLASS_SCAN_CAP: u64 = 1 << 22;

/// Looks for two letter classes of level `l` inside one class mod `p / q`.
fn letter_pair_in_subclass<M: LevelModel + ?Sized>(model: &M, l: usize, p: u64, q: u64) -> Result<Option<EssentialWitness>> {
    if p > SUBCLASS_SCAN_CAP {
        return Err(Error::TooLarge(format!("subclass scan of period {p}")));
    }
    let g = p / q;
    for r in 0..g {
        let mut first: Option<(u64, Letter)> = None;
        for n in 0..q {
            let c = r + n * g;
            if let Symbol::Letter(b) = model.class_symbol(l, &BigUint::from(c)) {
                match first {
                    None => first = Some((c, b)),
                    Some((at, a)) if a != b => {
                        return Ok(Some(EssentialWitness {
                            prime: q,
                            at: BigInt::from(at),
                            shift: BigInt::from(c - at),
                            letters: (a, b),
                        }));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(None)
}

/// Exhaustive essentiality check over all `0 < p < p_l` on a dense level.
/// A period counts as replaced unless a certain difference is found.
pub fn essential_by_scan(schedule: &FillingSchedule, l: usize, resolution: usize) -> Result<bool> {
    let lv = crate::words::build_level(schedule, resolution)?;
    let pl = schedule.period(l)?.to_usize().ok_or_else(|| Error::TooLarge("period".into()))?;
    let base = crate::words::build_level(schedule, l)?;
    let per_l: Vec<bool> = base.pattern.symbols().iter().map(|s| !s.is_hole()).collect();
    if !per_l.iter().any(|&b| b) {
        return Ok(false);
    }
    let pr = lv.period();
    for p in 1..pl {
        let status = classify_residues(&lv, p);
        // A position of Per(p_l) whose class mod p certainly carries two letters.
        let span = p.lcm(&pl).min(pr.lcm(&p));
        let differs = (0..span).any(|j| per_l[j % pl] && status[j % p].status == ResidueStatus::Nonperiodic);
        if !differs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `|Per(p_l) ∩ [0, p_l)| / p_l` from the hole count of level `l`.
pub fn periodic_density(schedule: &FillingSchedule, l: usize) -> Result<BigRational> {
    let (p, h) = schedule.period_and_holes(l)?;
    let p = BigInt::from(p);
    Ok(BigRational::new(&p - BigInt::from(h), p))
}

/// Minimal cyclic gap between consecutive holes of level `l`.
pub fn min_hole_gap(schedule: &FillingSchedule, l: usize) -> Result<BigUint> {
    let holes = schedule.hole_residues(l)?;
    if holes.is_empty() {
        return Err(Error::NoHoles);
    }
    let p = schedule.period(l)?;
    let mut best = &p - &holes[holes.len() - 1] + &holes[0];
    for w in holes.windows(2) {
        let g = &w[1] - &w[0];
        if g < best {
            best = g;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OxtobyFailure {
    /// Block `block` of level `level + 1` is partly filled.
    MixedBlock { block: usize },
    TooFewUnfilled { unfilled: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OxtobyVerdict {
    CertifiedToDepth { depth: usize, scale: Vec<BigUint> },
    Refuted { level: usize, failure: OxtobyFailure, scale: Vec<BigUint> },
    Unknown { reason: String },
}

impl OxtobyVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, OxtobyVerdict::CertifiedToDepth { .. })
    }
}

/// Checks the blockwise all-or-nothing filling and the two unfilled blocks
/// for every level below `depth`.
pub fn check_oxtoby<M: LevelModel + ?Sized>(model: &M, depth: usize, resolution: usize) -> Result<OxtobyVerdict> {
    if depth < 2 {
        return Ok(OxtobyVerdict::Unknown { reason: "depth below 2 checks nothing".into() });
    }
    let census = class_census(model, depth, resolution)?;
    let scale = census.periods.clone();
    for l in 1..depth {
        let k = ratio(census.period(l + 1), census.period(l), l + 1)?;
        let lower = census.aperiodic_residues(l);
        let upper = census.aperiodic_residues(l + 1);
        let p = census.period(l);
        let mut by_block: Vec<Vec<BigUint>> = vec![Vec::new(); k];
        for r in &upper {
            let (b, within) = r.div_rem(p);
            by_block[b.to_usize().expect("block index")].push(within);
        }
        let mut unfilled = 0;
        for (block, got) in by_block.iter().enumerate() {
            if got.is_empty() {
                continue;
            }
            if *got != lower {
                return Ok(OxtobyVerdict::Refuted { level: l, failure: OxtobyFailure::MixedBlock { block }, scale });
            }
            unfilled += 1;
        }
        if unfilled < 2 {
            return Ok(OxtobyVerdict::Refuted { level: l, failure: OxtobyFailure::TooFewUnfilled { unfilled }, scale });
        }
    }
    Ok(OxtobyVerdict::CertifiedToDepth { depth, scale })
}

/// For `t <= l <= depth`: the least number of level-`l` holes in an aligned
/// `p_t`-block that contains at least one of them.
pub fn block_hole_minima<M: LevelModel + ?Sized>(model: &M, depth: usize, resolution: usize) -> Result<Vec<(usize, usize, usize)>> {
    let census = class_census(model, depth, resolution)?;
    let mut out = Vec::new();
    for l in 1..=depth {
        let holes = census.aperiodic_residues(l);
        for t in 1..=l {
            let mut counts: BTreeMap<BigUint, usize> = BTreeMap::new();
            for r in &holes {
                *counts.entry(r / census.period(t)).or_insert(0) += 1;
            }
            out.push((t, l, counts.values().copied().min().unwrap_or(0)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::named;
    use crate::words::build_level;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn classify_level_two_of_singleton_boundary_family() {
        let s = named("ex4.3").unwrap().schedule;
        let lv = build_level(&s, 2).unwrap();
        let st = classify_residues(&lv, 16);
        for c in &st {
            let und = c.status == ResidueStatus::Undetermined;
            assert_eq!(und, c.residue == 5 || c.residue == 9, "residue {}", c.residue);
        }
    }

    #[test]
    fn classify_constant_word() {
        let s = FillingSchedule::from_seeds(Alphabet::ab(), vec![crate::words::parse_seed("a", &Alphabet::ab()).unwrap()]);
        let lv = build_level(&s, 1).unwrap();
        assert_eq!(classify_residues(&lv, 1)[0].status, ResidueStatus::Periodic(Letter(0)));
    }

    #[test]
    fn period_eight_on_level_four() {
        let s = named("ex5.7").unwrap().schedule;
        let lv = build_level(&s, 4).unwrap();
        let st = classify_residues(&lv, 8);
        // 3 + 8Z lies inside 3 + 4Z, which is b throughout.
        assert_eq!(st[3].status, ResidueStatus::Periodic(Letter(1)));
        assert_eq!(st[0].status, ResidueStatus::Periodic(Letter(0)));
        assert_eq!(st[1].status, ResidueStatus::Nonperiodic);
    }

    #[test]
    fn aperiodic_residues_of_gallery() {
        let s = named("ex4.3").unwrap().schedule;
        assert_eq!(aperiodic_residues(&s, 2, 4).unwrap(), big(&[5, 9]));
        let s = named("ex5.7").unwrap().schedule;
        assert_eq!(aperiodic_residues(&s, 2, 4).unwrap(), big(&[5, 6, 9, 10]));
        let s = named("ex4.4-mini").unwrap().schedule;
        for l in 1..=3 {
            assert_eq!(aperiodic_residues(&s, l, l + 1).unwrap().len(), 1);
        }
    }

    #[test]
    fn scale_must_divide() {
        let s = named("ex5.7").unwrap().schedule;
        let r = verify_period_structure(&s, &big(&[2, 3]), 2, 3);
        assert_eq!(r, Err(Error::DivisibilityViolation { level: 2 }));
    }

    #[test]
    fn ex57_period_structure() {
        let s = named("ex5.7").unwrap().schedule;
        let scale = s.scale(5).unwrap();
        let cert = verify_period_structure(&s, &scale, 5, 7).unwrap();
        assert!(cert.all_pass(), "{cert:?}");
    }

    #[test]
    fn reduction_agrees_with_exhaustive_scan() {
        for name in ["ex5.7", "ex4.3", "ex3.5", "sec2.2"] {
            let s = named(name).unwrap().schedule;
            let depth = if name == "sec2.2" { 2 } else { 3 };
            let res = (depth + 1).min(s.available_levels(6));
            let scale = s.scale(depth).unwrap();
            let cert = verify_period_structure(&s, &scale, depth, res).unwrap();
            for l in 1..=depth {
                if s.period(l).unwrap() > BigUint::from(500u32) {
                    continue;
                }
                assert_eq!(cert.levels[l - 1].essential, essential_by_scan(&s, l, res).unwrap(), "{name} level {l}");
            }
        }
    }

    #[test]
    fn densities_and_gaps() {
        let s = named("ex4.3").unwrap().schedule;
        assert_eq!(periodic_density(&s, 2).unwrap(), BigRational::new(14.into(), 16.into()));
        let m = named("ex4.4-mini").unwrap().schedule;
        let p = BigInt::from(m.period(2).unwrap());
        assert_eq!(periodic_density(&m, 2).unwrap(), BigRational::new(&p - 1, p.clone()));
        assert_eq!(min_hole_gap(&m, 2).unwrap(), m.period(2).unwrap());
        let e = named("ex3.5").unwrap().schedule;
        assert_eq!(min_hole_gap(&e, 1).unwrap(), BigUint::one());
        let f = named("ex5.7").unwrap().schedule;
        assert_eq!(min_hole_gap(&f, 2).unwrap(), BigUint::one());
    }

    #[test]
    fn oxtoby_verdicts() {
        let e = named("ex3.5").unwrap().schedule;
        assert!(check_oxtoby(&e, 4, 5).unwrap().is_certified());
        let f = named("ex5.7").unwrap().schedule;
        assert!(check_oxtoby(&f, 4, 6).unwrap().is_certified());
        let m = named("ex4.4-mini").unwrap().schedule;
        assert!(matches!(check_oxtoby(&m, 3, 4).unwrap(), OxtobyVerdict::Refuted { .. }));
        let w = named("williams").unwrap().schedule;
        assert!(check_oxtoby(&w, 4, 6).unwrap().is_certified());
    }
}
