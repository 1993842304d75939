//! Elements of the subshift as shifts or limits of shifts, fibres over the
//! odometer and proximal pairs.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::odometer::{phi_prefix, OdometerPoint};
use crate::words::{FillingSchedule, Letter};

/// Rule indices compared by a shift limit before a value counts as stable.
pub const STABLE_INDICES: usize = 3;

type ShiftRule = dyn Fn(usize) -> BigInt + Send + Sync;

/// `lim_k S^{n_k}(x)`, read from indices `k` with `k + lag <= maxLevel`.
#[derive(Clone)]
pub struct ShiftLimit {
    pub label: String,
    pub lag: usize,
    rule: Arc<ShiftRule>,
}

impl ShiftLimit {
    pub fn new<F>(label: &str, lag: usize, rule: F) -> Self
    where
        F: Fn(usize) -> BigInt + Send + Sync + 'static,
    {
        ShiftLimit { label: label.to_string(), lag, rule: Arc::new(rule) }
    }

    pub fn shift(&self, k: usize) -> BigInt {
        (self.rule)(k)
    }

    fn indices(&self, max_level: usize) -> Option<std::ops::RangeInclusive<usize>> {
        let last = max_level.checked_sub(self.lag)?;
        let first = (last + 1).checked_sub(STABLE_INDICES)?;
        (first >= 1).then_some(first..=last)
    }
}

impl fmt::Debug for ShiftLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShiftLimit({}, lag {})", self.label, self.lag)
    }
}

#[derive(Clone, Debug)]
pub enum ElementSpec {
    Shift(BigInt),
    ShiftLimit(ShiftLimit),
}

impl ElementSpec {
    pub fn describe(&self) -> String {
        match self {
            ElementSpec::Shift(n) => format!("shift {n}"),
            ElementSpec::ShiftLimit(s) => format!("limit {}", s.label),
        }
    }
}

/// An element evaluated at a fixed resolution.
pub struct ElementEvaluator<'a> {
    schedule: &'a FillingSchedule,
    element: &'a ElementSpec,
    max_level: usize,
}

impl<'a> ElementEvaluator<'a> {
    pub fn new(schedule: &'a FillingSchedule, element: &'a ElementSpec, max_level: usize) -> Self {
        ElementEvaluator { schedule, element, max_level }
    }

    pub fn at(&self, j: &BigInt) -> Option<Letter> {
        eval_element(self.schedule, self.element, j, self.max_level)
    }
}

/// Value of the element at `j`; unresolved or unstable values give `None`.
pub fn eval_element(schedule: &FillingSchedule, e: &ElementSpec, j: &BigInt, max_level: usize) -> Option<Letter> {
    match e {
        ElementSpec::Shift(n) => schedule.evaluate(&(j + n), max_level),
        ElementSpec::ShiftLimit(s) => {
            let mut seen = None;
            for k in s.indices(max_level)? {
                let v = schedule.evaluate(&(j + s.shift(k)), max_level)?;
                if seen.is_some_and(|w| w != v) {
                    return None;
                }
                seen = Some(v);
            }
            seen
        }
    }
}

/// `k_l = Σ_{i<=l} c_i 4^i` with `c_i = 2` for even `i` and `1` for odd `i`.
pub fn alternating_digits(l: usize) -> BigInt {
    (0..=l as u32).map(|i| BigInt::from(if i % 2 == 0 { 2 } else { 1 }) * BigInt::from(4).pow(i)).sum()
}

/// The pair `S^{k_l} x` and `S^{3·4^{l+1} + k_l} x`, agreeing on `Φ` up to level `l + 1`.
pub fn alternating_pair(l: usize) -> (ElementSpec, ElementSpec) {
    let k = alternating_digits(l);
    let far = BigInt::from(3) * BigInt::from(4).pow(l as u32 + 1) + &k;
    (ElementSpec::Shift(k), ElementSpec::Shift(far))
}

/// `lim_l S^{k_l} x`.
pub fn alternating_limit() -> ElementSpec {
    ElementSpec::ShiftLimit(ShiftLimit::new("alternating digits", 2, alternating_digits))
}

/// Distinct window contents over a fibre prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberCount {
    pub window_level: usize,
    pub point_depth: usize,
    pub resolution: usize,
    /// Distinct fully resolved windows.
    pub count: usize,
    /// Windows with unresolved positions that extend none of the resolved ones.
    pub unmatched_partial: usize,
    pub windows: Vec<String>,
}

const MAX_FIBER_BLOCKS: usize = 1 << 16;

/// Counts the contents `x(ω(L) + m p_L + [0, p_l))` over `m < p_R / p_L`,
/// where `L` is the depth of `ω` and `R` the resolution.
pub fn fiber_prefix_count(schedule: &FillingSchedule, w: &OdometerPoint, l: usize, resolution: usize) -> Result<FiberCount> {
    let depth = w.depth();
    if l == 0 || l > depth || resolution < depth {
        return Err(Error::Invalid("need 1 <= l <= depth(ω) <= resolution".into()));
    }
    let pl = schedule.period(l)?.to_i64().ok_or_else(|| Error::TooLarge("window".into()))?;
    let pd = BigInt::from(schedule.period(depth)?);
    let blocks = (schedule.period(resolution)? / schedule.period(depth)?)
        .to_usize()
        .filter(|&b| b <= MAX_FIBER_BLOCKS)
        .ok_or_else(|| Error::TooLarge("fibre blocks".into()))?;
    let base = BigInt::from(w.at(depth).clone());
    let mut full: BTreeSet<Vec<Letter>> = BTreeSet::new();
    let mut partial: BTreeSet<Vec<Option<Letter>>> = BTreeSet::new();
    for m in 0..blocks {
        let start = &base + &pd * m;
        let win: Vec<Option<Letter>> = (0..pl).map(|i| schedule.evaluate(&(&start + i), resolution)).collect();
        match win.iter().copied().collect::<Option<Vec<Letter>>>() {
            Some(v) => {
                full.insert(v);
            }
            None => {
                partial.insert(win);
            }
        }
    }
    let unmatched = partial
        .iter()
        .filter(|p| !full.iter().any(|f| f.iter().zip(p.iter()).all(|(a, b)| b.is_none_or(|b| b == *a))))
        .count();
    if full.is_empty() {
        return Err(Error::UnresolvedWindow("no fibre window resolved".into()));
    }
    let a = schedule.alphabet();
    Ok(FiberCount {
        window_level: l,
        point_depth: depth,
        resolution,
        count: full.len(),
        unmatched_partial: unmatched,
        windows: full.iter().map(|v| a.render_letters(v)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowCensus {
    pub radius: i64,
    pub differences: usize,
    pub positions: Vec<i64>,
    pub unresolved: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub phi_agreement_depth: usize,
    pub phi_depth: usize,
    pub censuses: Vec<WindowCensus>,
}

/// Compares `Φ`-prefixes and counts disagreements on each window `[-N, N]`.
pub fn pair_report(
    schedule: &FillingSchedule,
    e1: &ElementSpec,
    e2: &ElementSpec,
    depth: usize,
    radii: &[i64],
    resolution: usize,
) -> Result<PairReport> {
    let p1 = phi_prefix(schedule, e1, depth, resolution)?;
    let p2 = phi_prefix(schedule, e2, depth, resolution)?;
    let censuses = radii.iter().map(|&n| window_census(schedule, e1, e2, n, resolution)).collect();
    Ok(PairReport { phi_agreement_depth: p1.agreement(&p2), phi_depth: depth, censuses })
}

pub fn window_census(schedule: &FillingSchedule, e1: &ElementSpec, e2: &ElementSpec, radius: i64, resolution: usize) -> WindowCensus {
    let mut c = WindowCensus { radius, differences: 0, positions: Vec::new(), unresolved: 0 };
    for j in -radius..=radius {
        let j = BigInt::from(j);
        match (eval_element(schedule, e1, &j, resolution), eval_element(schedule, e2, &j, resolution)) {
            (Some(a), Some(b)) if a != b => {
                c.differences += 1;
                c.positions.push(j.to_i64().expect("small"));
            }
            (Some(_), Some(_)) => {}
            _ => c.unresolved += 1,
        }
    }
    c
}

/// Per level, the most distant pair of shifts inside one fibre cylinder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberWitnessLevel {
    pub level: usize,
    pub shifts: (i64, i64),
    pub radius: i64,
    pub differences: usize,
}

/// Shifts `n_1, n_2 ≡ ω(l) (mod p_l)` whose disagreement on `[-p_{l-1}, p_{l-1}]`
/// grows strictly with `l`; `None` when the counts stay bounded.
pub fn finite_fiber_nonasymptotic_witness(
    schedule: &FillingSchedule,
    w: &OdometerPoint,
    resolution: usize,
) -> Result<Option<Vec<FiberWitnessLevel>>> {
    let depth = w.depth();
    let mut levels = Vec::new();
    for l in 1..=depth {
        let pl = schedule.period(l)?.to_i64().ok_or_else(|| Error::TooLarge("period".into()))?;
        let radius = if l == 1 { 1 } else { schedule.period(l - 1)?.to_i64().expect("smaller") };
        let blocks = (schedule.period(resolution.max(l + 1))? / schedule.period(l)?).to_usize().unwrap_or(usize::MAX).min(64) as i64;
        let r = w.at(l).to_i64().ok_or_else(|| Error::TooLarge("residue".into()))?;
        let windows: Vec<Vec<Option<Letter>>> = (0..blocks)
            .map(|m| (-radius..=radius).map(|j| schedule.evaluate_i64(r + m * pl + j, resolution)).collect())
            .collect();
        let mut best = (0, 0, 0);
        for m1 in 0..windows.len() {
            for m2 in m1 + 1..windows.len() {
                let d = windows[m1]
                    .iter()
                    .zip(&windows[m2])
                    .filter(|(a, b)| matches!((a, b), (Some(a), Some(b)) if a != b))
                    .count();
                if d > best.2 {
                    best = (m1 as i64, m2 as i64, d);
                }
            }
        }
        levels.push(FiberWitnessLevel {
            level: l,
            shifts: (r + best.0 * pl, r + best.1 * pl),
            radius,
            differences: best.2,
        });
    }
    let growing = levels.windows(2).all(|v| v[1].differences > v[0].differences);
    Ok((levels.len() >= 3 && growing && levels.last().is_some_and(|l| l.differences >= 2)).then_some(levels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::named;
    use crate::odometer::embed;
    use num_bigint::BigUint;

    #[test]
    fn shift_zero_is_x() {
        let x = named("ex5.7").unwrap().schedule;
        let e = ElementSpec::Shift(0.into());
        for j in -50..50 {
            assert_eq!(eval_element(&x, &e, &j.into(), 5), x.evaluate_i64(j, 5));
        }
    }

    #[test]
    fn digits() {
        assert_eq!(alternating_digits(1), 6.into());
        assert_eq!(alternating_digits(2), 38.into());
        assert_eq!(alternating_digits(3), 102.into());
        for l in (1..12).step_by(2) {
            assert_eq!(BigInt::from(5) * alternating_digits(l) + 2, BigInt::from(2) * BigInt::from(4).pow(l as u32 + 1));
        }
    }

    #[test]
    fn limit_stabilises() {
        let x = named("ex5.7").unwrap().schedule;
        let y = alternating_limit();
        for j in -4..4i64 {
            let v = eval_element(&x, &y, &j.into(), 8).expect("stable");
            for l in 4..=6 {
                assert_eq!(x.evaluate(&(alternating_digits(l) + j), 8), Some(v), "j={j} l={l}");
            }
        }
    }

    #[test]
    fn unstable_limit_is_unresolved() {
        let x = named("ex5.7").unwrap().schedule;
        let flip = ElementSpec::ShiftLimit(ShiftLimit::new("flip", 0, |k| BigInt::from(if k % 2 == 0 { 0 } else { 3 })));
        assert_eq!(eval_element(&x, &flip, &0.into(), 6), None);
        let short = ElementSpec::ShiftLimit(ShiftLimit::new("short", 2, |_| BigInt::from(0)));
        assert_eq!(eval_element(&x, &short, &0.into(), 4), None);
    }

    #[test]
    fn fibre_counts() {
        let x = named("ex5.7").unwrap().schedule;
        let s = x.scale(6).unwrap();
        for l in 2..=5 {
            let r: Vec<BigUint> = (1..=l as u32).map(|i| BigUint::from((4u64.pow(i) - 1) / 3)).collect();
            let w = OdometerPoint::new(s.clone(), r).unwrap();
            let c = fiber_prefix_count(&x, &w, l, l + 2).unwrap();
            assert!(c.count <= 4, "l={l}: {c:?}");
        }
        let w = embed(&s, &0.into(), 3).unwrap();
        assert_eq!(fiber_prefix_count(&x, &w, 1, 5).unwrap().count, 1);
    }

    #[test]
    fn identical_elements() {
        let x = named("ex5.7").unwrap().schedule;
        let e = ElementSpec::Shift(0.into());
        let r = pair_report(&x, &e, &e, 3, &[4, 16], 6).unwrap();
        assert_eq!(r.phi_agreement_depth, 3);
        assert!(r.censuses.iter().all(|c| c.differences == 0));
    }

    #[test]
    fn alternating_pairs_agree_on_phi() {
        let x = named("ex5.7").unwrap().schedule;
        for l in 1..=3 {
            let (y, z) = alternating_pair(l);
            let r = pair_report(&x, &y, &z, l + 2, &[4i64.pow(l as u32)], l + 4).unwrap();
            assert_eq!(r.phi_agreement_depth, l + 1);
        }
    }

    #[test]
    fn witnesses() {
        let x = named("ex5.7").unwrap().schedule;
        let s = x.scale(4).unwrap();
        let w = OdometerPoint::new(s, vec![1u32.into(), 5u32.into(), 21u32.into(), 85u32.into()]).unwrap();
        assert!(finite_fiber_nonasymptotic_witness(&x, &w, 6).unwrap().is_some());
        let m = named("ex4.4-mini").unwrap().schedule;
        let mut r = Vec::new();
        for l in 1..=3 {
            r.push(m.hole_residues(l).unwrap()[0].clone());
        }
        let w = OdometerPoint::new(m.scale(3).unwrap(), r).unwrap();
        assert!(finite_fiber_nonasymptotic_witness(&m, &w, 4).unwrap().is_none());
    }
}
