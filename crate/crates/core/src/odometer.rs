//! Truncated odometer points, the factor map onto the odometer, prime
//! profiles of scales and window membership.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::elements::{ElementSpec, ElementEvaluator};
use crate::error::{Error, Result};
use crate::words::{FillingSchedule, Letter, Symbol};

/// A point of `lim Z/p_l Z` known on its first `depth` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdometerPoint {
    scale: Vec<BigUint>,
    residues: Vec<BigUint>,
}

impl OdometerPoint {
    pub fn new(scale: Vec<BigUint>, residues: Vec<BigUint>) -> Result<Self> {
        if residues.len() > scale.len() {
            return Err(Error::Invalid("more residues than scale entries".into()));
        }
        for l in 0..residues.len() {
            if residues[l] >= scale[l] {
                return Err(Error::Invalid(format!("residue {} not below {}", residues[l], scale[l])));
            }
            if l > 0 && (&residues[l] % &scale[l - 1]) != residues[l - 1] {
                return Err(Error::Invalid(format!("residue {} incompatible at level {}", residues[l], l + 1)));
            }
        }
        Ok(OdometerPoint { scale, residues })
    }

    pub fn depth(&self) -> usize {
        self.residues.len()
    }

    pub fn scale(&self) -> &[BigUint] {
        &self.scale
    }

    pub fn residues(&self) -> &[BigUint] {
        &self.residues
    }

    /// `ω(l)` for `1 <= l <= depth`.
    pub fn at(&self, l: usize) -> &BigUint {
        &self.residues[l - 1]
    }

    pub fn truncate(&self, depth: usize) -> OdometerPoint {
        OdometerPoint { scale: self.scale.clone(), residues: self.residues[..depth.min(self.depth())].to_vec() }
    }

    /// Number of leading coordinates on which both points agree.
    pub fn agreement(&self, other: &OdometerPoint) -> usize {
        self.residues.iter().zip(&other.residues).take_while(|(a, b)| a == b).count()
    }
}

/// `ι(j) = (j mod p_1, ..., j mod p_depth)`.
pub fn embed(scale: &[BigUint], j: &BigInt, depth: usize) -> Result<OdometerPoint> {
    if depth > scale.len() {
        return Err(Error::Invalid("depth exceeds scale".into()));
    }
    let residues = scale[..depth]
        .iter()
        .map(|p| j.mod_floor(&BigInt::from(p.clone())).to_biguint().expect("non-negative"))
        .collect();
    Ok(OdometerPoint { scale: scale.to_vec(), residues })
}

/// The rotation by `n`.
pub fn rotate(w: &OdometerPoint, n: &BigInt) -> OdometerPoint {
    let residues = w
        .residues
        .iter()
        .zip(&w.scale)
        .map(|(r, p)| {
            let p = BigInt::from(p.clone());
            (BigInt::from(r.clone()) + n).mod_floor(&p).to_biguint().expect("non-negative")
        })
        .collect();
    OdometerPoint { scale: w.scale.clone(), residues }
}

/// Largest period whose residues are matched densely.
pub const MAX_PHI_PERIOD: u64 = 1 << 16;

/// The first `depth` coordinates of `Φ(y)`: per level the unique shift `k`
/// such that `y` and `S^k x` agree on their `p_l`-periodic parts.
pub fn phi_prefix(schedule: &FillingSchedule, element: &ElementSpec, depth: usize, resolution: usize) -> Result<OdometerPoint> {
    let scale = schedule.scale(depth)?;
    let top = scale
        .last()
        .and_then(ToPrimitive::to_u64)
        .filter(|&p| p <= MAX_PHI_PERIOD)
        .ok_or_else(|| Error::TooLarge("period for shift matching".into()))? as usize;
    let eval = ElementEvaluator::new(schedule, element, resolution);
    let y: Vec<Option<Letter>> = (0..top as i64).map(|j| eval.at(&BigInt::from(j))).collect();
    let mut residues: Vec<BigUint> = Vec::with_capacity(depth);
    let mut prev = 0usize;
    let mut prev_p = 1usize;
    for l in 1..=depth {
        let p = scale[l - 1].to_usize().expect("bounded above");
        let pattern: Vec<Symbol> = (0..p as i64).map(|j| schedule.symbol(&BigInt::from(j), l)).collect();
        let matches: Vec<usize> = (0..p / prev_p)
            .map(|c| prev + c * prev_p)
            .filter(|&k| {
                (0..top).all(|j| match (pattern[(j + k) % p], y[j]) {
                    (Symbol::Letter(a), Some(b)) => a == b,
                    _ => true,
                })
            })
            .collect();
        match matches[..] {
            [k] => {
                residues.push(BigUint::from(k));
                prev = k;
                prev_p = p;
            }
            [] => return Err(Error::UnresolvedElement(format!("no shift matches at level {l}"))),
            _ => return Err(Error::UnresolvedElement(format!("{} shifts match at level {l}", matches.len()))),
        }
    }
    Ok(OdometerPoint { scale, residues })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exponent {
    pub value: u32,
    /// The exponent grew at the last checked index.
    pub saturated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeProfile {
    pub prime_bound: u64,
    pub scale_depth: usize,
    pub exponents: BTreeMap<u64, Exponent>,
    /// Set when the saturation flags come from a declaration.
    pub declared: bool,
}

impl PrimeProfile {
    /// Replaces the flags by a declared limit profile; `None` is unbounded.
    pub fn with_declaration(mut self, declared: &BTreeMap<u64, Option<u32>>) -> Self {
        for (q, e) in self.exponents.iter_mut() {
            match declared.get(q) {
                Some(None) => e.saturated = true,
                Some(Some(v)) => *e = Exponent { value: *v, saturated: false },
                None => *e = Exponent { value: 0, saturated: false },
            }
        }
        self.declared = true;
        self
    }
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

fn exponent_of(n: &BigUint, q: u64) -> u32 {
    let q = BigUint::from(q);
    let mut n = n.clone();
    let mut e = 0;
    while !n.is_zero() && (&n % &q).is_zero() {
        n /= &q;
        e += 1;
    }
    e
}

/// Exponents of each prime `q <= prime_bound` in `p_depth`.
pub fn prime_profile(scale: &[BigUint], prime_bound: u64, depth: usize) -> Result<PrimeProfile> {
    if depth == 0 || depth > scale.len() {
        return Err(Error::Invalid("depth outside the scale".into()));
    }
    for l in 1..depth {
        if !(&scale[l] % &scale[l - 1]).is_zero() {
            return Err(Error::DivisibilityViolation { level: l + 1 });
        }
    }
    let exponents = primes_up_to(prime_bound)
        .into_iter()
        .map(|q| {
            let value = exponent_of(&scale[depth - 1], q);
            let before = if depth >= 2 { exponent_of(&scale[depth - 2], q) } else { 0 };
            (q, Exponent { value, saturated: value > before })
        })
        .collect();
    Ok(PrimeProfile { prime_bound, scale_depth: depth, exponents, declared: false })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OdometerRelation {
    FactorOfCertified,
    NotFactor { prime: u64 },
    IsomorphicCertified,
    Unknown { reason: String },
}

/// Is the odometer of `a` a factor of the odometer of `b`?
///
/// Saturated exponents are read as unbounded, the others as final.
pub fn odometer_relation(a: &PrimeProfile, b: &PrimeProfile) -> OdometerRelation {
    if a.prime_bound != b.prime_bound {
        return OdometerRelation::Unknown { reason: "different prime bounds".into() };
    }
    let limit = |p: &PrimeProfile, q: u64| p.exponents.get(&q).map(|e| if e.saturated { None } else { Some(e.value) });
    let le = |x: Option<u32>, y: Option<u32>| match (x, y) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    };
    let mut iso = true;
    for &q in a.exponents.keys() {
        let (xa, yb) = (limit(a, q).expect("same primes"), limit(b, q).expect("same primes"));
        if !le(xa, yb) {
            return OdometerRelation::NotFactor { prime: q };
        }
        iso &= le(yb, xa);
    }
    if a.scale_depth < 2 && !a.declared || b.scale_depth < 2 && !b.declared {
        return OdometerRelation::Unknown { reason: "saturation needs two scale entries".into() };
    }
    if iso {
        OdometerRelation::IsomorphicCertified
    } else {
        OdometerRelation::FactorOfCertified
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WindowMembership {
    InWindow,
    NotInWindow,
    Undetermined,
}

/// Whether `ω` lies in the window of `a`: some `ω(l)` is a class of letter `a`.
pub fn cps_window_member(schedule: &FillingSchedule, w: &OdometerPoint, a: Letter) -> WindowMembership {
    for l in 1..=w.depth() {
        match schedule.symbol(&BigInt::from(w.at(l).clone()), l) {
            Symbol::Letter(b) if b == a => return WindowMembership::InWindow,
            Symbol::Letter(_) => return WindowMembership::NotInWindow,
            Symbol::Hole => {}
        }
    }
    WindowMembership::Undetermined
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::named;

    fn powers(base: u64, n: u32) -> Vec<BigUint> {
        (1..=n).map(|l| BigUint::from(base.pow(l))).collect()
    }

    fn res(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn embedding() {
        let s = powers(4, 4);
        assert_eq!(embed(&s, &BigInt::from(5), 3).unwrap().residues(), &res(&[1, 5, 5])[..]);
        assert_eq!(embed(&s, &BigInt::from(85), 4).unwrap().residues(), &res(&[1, 5, 21, 85])[..]);
        assert_eq!(embed(&s, &BigInt::from(-1), 2).unwrap().residues(), &res(&[3, 15])[..]);
    }

    #[test]
    fn rotation() {
        let s = powers(4, 3);
        let one = embed(&s, &BigInt::from(1), 3).unwrap();
        assert_eq!(rotate(&one, &3.into()), embed(&s, &BigInt::from(4), 3).unwrap());
        assert_eq!(rotate(&one, &0.into()), one);
        assert!(OdometerPoint::new(s.clone(), res(&[1, 6])).is_err());
    }

    #[test]
    fn phi_of_shifts() {
        let x = named("ex5.7").unwrap().schedule;
        let p = phi_prefix(&x, &ElementSpec::Shift(0.into()), 3, 5).unwrap();
        assert_eq!(p.residues(), &res(&[0, 0, 0])[..]);
        let p = phi_prefix(&x, &ElementSpec::Shift(7.into()), 3, 5).unwrap();
        assert_eq!(p.residues(), &res(&[3, 7, 7])[..]);
        let p = phi_prefix(&x, &ElementSpec::Shift((-100).into()), 3, 6).unwrap();
        assert_eq!(p, embed(&x.scale(3).unwrap(), &BigInt::from(-100), 3).unwrap());
    }

    #[test]
    fn profiles() {
        let p = prime_profile(&powers(4, 5), 10, 5).unwrap();
        assert_eq!(p.exponents[&2], Exponent { value: 10, saturated: true });
        for q in [3, 5, 7] {
            assert_eq!(p.exponents[&q], Exponent { value: 0, saturated: false });
        }
        let six = prime_profile(&powers(6, 3), 5, 3).unwrap();
        assert_eq!(six.exponents[&3], Exponent { value: 3, saturated: true });
        assert_eq!(six.exponents[&5].value, 0);
        let two_three: Vec<BigUint> = (1..=4).map(|l| BigUint::from(2 * 3u64.pow(l))).collect();
        let t = prime_profile(&two_three, 5, 4).unwrap();
        assert_eq!(t.exponents[&2], Exponent { value: 1, saturated: false });
        assert_eq!(t.exponents[&3], Exponent { value: 4, saturated: true });
    }

    #[test]
    fn relations() {
        let p2 = prime_profile(&powers(2, 6), 7, 6).unwrap();
        let p4 = prime_profile(&powers(4, 6), 7, 6).unwrap();
        let p6 = prime_profile(&powers(6, 6), 7, 6).unwrap();
        let two_three: Vec<BigUint> = (1..=6).map(|l| BigUint::from(2 * 3u64.pow(l))).collect();
        let t = prime_profile(&two_three, 7, 6).unwrap();
        assert_eq!(odometer_relation(&p2, &p6), OdometerRelation::FactorOfCertified);
        assert_eq!(odometer_relation(&t, &p4), OdometerRelation::NotFactor { prime: 3 });
        assert_eq!(odometer_relation(&p4, &p2), OdometerRelation::IsomorphicCertified);
        let short = prime_profile(&powers(2, 1), 7, 1).unwrap();
        assert!(matches!(odometer_relation(&short, &p2), OdometerRelation::Unknown { .. }));
    }

    #[test]
    fn declared_profile_overrides() {
        let s = named("ex5.7").unwrap();
        let decl = s.declarations.prime_profile.clone().unwrap();
        let p = prime_profile(&s.schedule.scale(1).unwrap(), 5, 1).unwrap().with_declaration(&decl);
        assert!(p.exponents[&2].saturated);
        let p2 = prime_profile(&powers(2, 3), 5, 3).unwrap();
        assert_eq!(odometer_relation(&p, &p2), OdometerRelation::IsomorphicCertified);
    }

    #[test]
    fn windows() {
        let x = named("ex5.7").unwrap().schedule;
        let s = x.scale(4).unwrap();
        let a = Letter(0);
        assert_eq!(cps_window_member(&x, &embed(&s, &0.into(), 4).unwrap(), a), WindowMembership::InWindow);
        assert_eq!(cps_window_member(&x, &embed(&s, &3.into(), 4).unwrap(), a), WindowMembership::NotInWindow);
        let e = named("ex4.3").unwrap().schedule;
        let s = e.scale(6).unwrap();
        let w = OdometerPoint::new(s, res(&[1, 5, 21, 85, 341, 1365])).unwrap();
        for l in [a, Letter(1)] {
            assert_eq!(cps_window_member(&e, &w, l), WindowMembership::Undetermined);
        }
    }
}
