//! Generators and property bodies shared by the invariant suite and the
//! acceptance run.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use toeplitz_lab::elements::ElementSpec;
use toeplitz_lab::gallery::named;
use toeplitz_lab::odometer::{embed, phi_prefix, rotate, OdometerPoint};
use toeplitz_lab::periodicity::class_census;
use toeplitz_lab::words::{build_level, Alphabet, FillingSchedule, Letter, SeedWord, Symbol};

pub const CASES: u32 = 500;
pub const LEVELS: usize = 5;

fn symbol() -> impl Strategy<Value = Symbol> {
    prop_oneof![Just(Symbol::Letter(Letter(0))), Just(Symbol::Letter(Letter(1))), Just(Symbol::Hole)]
}

/// A seed with at least one letter and one hole.
fn seed() -> impl Strategy<Value = SeedWord> {
    (proptest::collection::vec(symbol(), 2..=5), 0..5usize, any::<bool>()).prop_map(|(mut s, i, a)| {
        let n = s.len();
        s[i % n] = Symbol::Hole;
        s[(i + 1) % n] = Symbol::Letter(Letter(a as u8));
        SeedWord::new(s, true).expect("letter and hole present")
    })
}

/// Random schedules of `LEVELS` seeds with random alignments.
pub fn schedule() -> impl Strategy<Value = FillingSchedule> {
    (proptest::collection::vec(seed(), LEVELS), proptest::collection::vec(-3i64..=3, LEVELS))
        .prop_map(|(seeds, offsets)| FillingSchedule::from_seeds_with_offsets(Alphabet::ab(), seeds, offsets))
}

/// A letter once filled stays.
pub fn monotone_filling(x: &FillingSchedule, j: i64, l: usize) -> Result<(), TestCaseError> {
    let j = BigInt::from(j);
    let mut known = None;
    for m in 1..=LEVELS {
        let v = x.evaluate(&j, m);
        if let Some(a) = known {
            prop_assert_eq!(v, Some(a), "level {} changes a letter set at an earlier level", m);
        }
        if m >= l {
            known = known.or(v);
        }
    }
    Ok(())
}

/// `p_{l+1} = p_l q / gcd(h_l, q)` with `h_{l+1} = h_l h_w / gcd(h_l, q)`,
/// and every level is `p_l`-periodic.
pub fn period_law(x: &FillingSchedule, l: usize, j: i64) -> Result<(), TestCaseError> {
    let (p, h) = x.period_and_holes(l).unwrap();
    let w = x.seed(l + 1).unwrap();
    let q = BigUint::from(w.len());
    let g = h.gcd(&q);
    let (p1, h1) = x.period_and_holes(l + 1).unwrap();
    prop_assert_eq!(&p1, &(&p * &q / &g));
    prop_assert_eq!(&h1, &(&h * BigUint::from(w.hole_count()) / &g));
    let lv = build_level(x, l).unwrap();
    prop_assert_eq!(BigUint::from(lv.period()), p.clone());
    prop_assert_eq!(BigUint::from(lv.holes_per_period), h);
    let j = BigInt::from(j);
    let s = x.symbol(&j, l);
    prop_assert_eq!(s, x.symbol(&(&j + BigInt::from(p)), l));
    prop_assert_eq!(s, lv.pattern.at(j.try_into().unwrap()));
    Ok(())
}

/// Class value sets only grow with the resolution, and deeper holes reduce
/// to holes.
pub fn value_set_monotonicity(x: &FillingSchedule, l: usize) -> Result<(), TestCaseError> {
    let coarse = class_census(x, l + 1, l + 2).unwrap();
    let fine = class_census(x, l + 1, l + 3).unwrap();
    for m in [l, l + 1] {
        for c in coarse.holes(m) {
            let f = fine.find(m, &c.residue).expect("same hole classes");
            for a in c.letters() {
                prop_assert!(f.letters().contains(&a), "class {} mod level {} lost a letter", c.residue, m);
            }
        }
    }
    let lower = x.hole_residues(l).unwrap();
    let p = x.period(l).unwrap();
    for r in x.hole_residues(l + 1).unwrap() {
        prop_assert!(lower.contains(&(r % &p)));
    }
    Ok(())
}

/// `Φ(S^k x) = ι(k)` and `Φ(S^{k+n} x) = R^n Φ(S^k x)`.
pub fn phi_equivariance(name: &str, k: i64, n: i64) -> Result<(), TestCaseError> {
    let x = named(name).unwrap().schedule;
    let depth = 3;
    let res = 6;
    let y = phi_prefix(&x, &ElementSpec::Shift(BigInt::from(k)), depth, res).unwrap();
    let z = phi_prefix(&x, &ElementSpec::Shift(BigInt::from(k + n)), depth, res).unwrap();
    prop_assert_eq!(&y, &embed(&x.scale(depth).unwrap(), &BigInt::from(k), depth).unwrap());
    prop_assert_eq!(z, rotate(&y, &BigInt::from(n)));
    Ok(())
}

/// `R^m R^n = R^{m+n}`, `R^0 = id`, and `ι` intertwines translation.
pub fn rotate_group_law(scale: &[u32], j: i64, m: i64, n: i64) -> Result<(), TestCaseError> {
    let mut periods = Vec::new();
    let mut p = BigUint::from(1u32);
    for &q in scale {
        p *= q;
        periods.push(p.clone());
    }
    let d = periods.len();
    let w = embed(&periods, &BigInt::from(j), d).unwrap();
    let (m, n) = (BigInt::from(m), BigInt::from(n));
    prop_assert_eq!(rotate(&rotate(&w, &m), &n), rotate(&w, &(&m + &n)));
    prop_assert_eq!(rotate(&w, &BigInt::from(0)), w.clone());
    prop_assert_eq!(rotate(&rotate(&w, &m), &-&m), w.clone());
    prop_assert_eq!(rotate(&w, &m), embed(&periods, &(BigInt::from(j) + &m), d).unwrap());
    let again = OdometerPoint::new(w.scale().to_vec(), w.residues().to_vec()).unwrap();
    prop_assert_eq!(again, w);
    Ok(())
}

pub fn gallery_name() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("ex5.7"), Just("ex4.3"), Just("ex3.5")]
}

pub fn scale() -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(2u32..=6, 1..=5)
}

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// Runs all five suites with `CASES` cases each.
pub fn run_suites() -> Vec<(&'static str, Result<(), String>)> {
    vec![
        ("monotone filling", run((schedule(), -200i64..200, 1..=LEVELS), |(x, j, l)| monotone_filling(&x, j, l))),
        ("period law", run((schedule(), 1..LEVELS, -500i64..500), |(x, l, j)| period_law(&x, l, j))),
        ("value-set monotonicity", run((schedule(), 1..=2usize), |(x, l)| value_set_monotonicity(&x, l))),
        ("equivariance of Φ", run((gallery_name(), -300i64..300, -300i64..300), |(g, k, n)| phi_equivariance(g, k, n))),
        ("rotate group law", run((scale(), any::<i64>().prop_map(|v| v >> 8), -1000i64..1000, -1000i64..1000), |(s, j, m, n)| rotate_group_law(&s, j, m, n))),
    ]
}
