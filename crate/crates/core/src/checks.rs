//! Named reproduction checks, replayed by `verify` and the acceptance suite.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{hole_tree, oxtoby_no_isolation_check, property_verdicts, pruned_branch_census, HoleTree, Verdict};
use crate::complexity::{factor_set_exact_single_hole, factor_set_window, resolved_segment};
use crate::elements::{alternating_digits, alternating_pair, fiber_prefix_count, pair_report};
use crate::error::Result;
use crate::factors::{build_isolating_code, FactorModel, IsolationSetup, SlidingBlockCode, DEFAULT_SATURATION};
use crate::gallery::{gallery, named, Declarations, EX44_W3};
use crate::odometer::OdometerPoint;
use crate::periodicity::{block_hole_minima, check_oxtoby, class_census, verify_period_structure, LevelModel};
use crate::words::{build_level, compose_fill, parse_seed, Alphabet, FillingSchedule, Letter, PeriodicPattern};

const A: Letter = Letter(0);
const B: Letter = Letter(1);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: String,
    pub criterion: u8,
    pub passed: bool,
    pub detail: String,
    /// Depths, windows and resolutions the verdict rests on.
    pub provenance: String,
}

type CheckFn = fn() -> Result<(bool, String, String)>;

/// Check ids with their criterion, sorted by id.
pub const CHECKS: &[(&str, u8, CheckFn)] = &[
    ("ex3.5-census", 6, ex35_census),
    ("ex3.5-oxtoby", 6, ex35_oxtoby),
    ("ex4.3-aper-census", 2, ex43_aper_census),
    ("ex4.3-boundary-singleton", 2, ex43_boundary_singleton),
    ("ex4.3-level2", 2, ex43_level2),
    ("ex4.4-complexity", 3, ex44_complexity),
    ("ex4.4-single-hole", 3, ex44_single_hole),
    ("ex5.7-factor", 4, ex57_factor),
    ("ex5.7-fiber", 5, ex57_fiber),
    ("ex5.7-lines", 4, ex57_lines),
    ("ex5.7-pair", 5, ex57_pair),
    ("factor-bound", 9, factor_bound),
    ("isolating-code", 8, isolating_code),
    ("oxtoby-no-isolation", 7, oxtoby_no_isolation),
    ("sec2.2-composition", 1, sec22_composition),
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Runs one check; errors count as failures.
pub fn run_check(id: &str) -> Option<CheckOutcome> {
    let &(id, criterion, f) = CHECKS.iter().find(|c| c.0 == id)?;
    let (passed, detail, provenance) = f().unwrap_or_else(|e| (false, format!("error: {e}"), String::new()));
    Some(CheckOutcome { id: id.to_string(), criterion, passed, detail, provenance })
}

pub fn run_criterion(n: u8) -> Vec<CheckOutcome> {
    CHECKS.iter().filter(|c| c.1 == n).filter_map(|c| run_check(c.0)).collect()
}

fn render(alphabet: &Alphabet, p: &PeriodicPattern, lo: i64, hi: i64) -> String {
    alphabet.render(&p.window(lo, hi))
}

fn entry(name: &str) -> Result<FillingSchedule> {
    Ok(named(name)?.schedule)
}

fn ex44_mini_tail() -> Result<FillingSchedule> {
    Ok(gallery("ex4.4", &BTreeMap::from([("tail".to_string(), "mini".to_string())]))?.schedule)
}

fn sec22_composition() -> Result<(bool, String, String)> {
    let ab = Alphabet::ab();
    let outer = PeriodicPattern::from_seed(&parse_seed("a??b", &ab)?);
    let p = compose_fill(&outer, &parse_seed("aa?a?bbb", &ab)?)?;
    let w = render(&ab, &p, 0, 16);
    let ok = w == "aaaba?aba?bbabbb" && p.period() == 16 && p.holes() == [5, 9];
    Ok((ok, format!("window {w}, period {}, holes {:?}", p.period(), p.holes()), "window [0, 16)".into()))
}

fn ex43_aper_census() -> Result<(bool, String, String)> {
    let x = entry("ex4.3")?;
    let census = class_census(&x, 8, 10)?;
    let counts: Vec<usize> = (1..=4).map(|l| census.aperiodic_residues(2 * l).len()).collect();
    let ok = counts.iter().enumerate().all(|(i, &c)| c == 1 << (i + 1));
    Ok((ok, format!("|Aper(4^2l)| for l = 1..4: {counts:?}"), "census depth 8, resolution 10".into()))
}

fn ex43_boundary_singleton() -> Result<(bool, String, String)> {
    let g = named("ex4.3")?;
    let tree = hole_tree(&g.schedule, 8, 10)?;
    let pruned = pruned_branch_census(&tree);
    let branch = tree.least_branch().unwrap_or_default();
    let v = property_verdicts(&g.schedule, &g.declarations, 8, 10)?;
    let ok = pruned[3] == 1 && branch.get(3) == Some(&BigUint::from(85u32)) && v.fb.is_certified();
    Ok((ok, format!("pruned census {pruned:?}, branch {branch:?}, fb {:?}", v.fb), "tree depth 8, resolution 10".into()))
}

fn ex43_level2() -> Result<(bool, String, String)> {
    let x = entry("ex4.3")?;
    let lv = build_level(&x, 2)?;
    let w = render(x.alphabet(), &lv.pattern, 0, 16);
    let ok = w == "aaaba?aba?bbabbb" && lv.pattern.holes() == [5, 9];
    Ok((ok, format!("level 2 pattern ({w})"), "level 2".into()))
}

fn ex44_single_hole() -> Result<(bool, String, String)> {
    let x = ex44_mini_tail()?;
    let first = x.seed(1).map(|s| x.alphabet().render(s.symbols())).unwrap_or_default();
    let holes: Vec<String> = (1..=3).map(|l| x.holes_per_period(l).map(|h| h.to_string())).collect::<std::result::Result<_, _>>()?;
    let ok = first == EX44_W3 && holes.iter().all(|h| h == "1");
    Ok((ok, format!("first seed is the literal w_3: {}; holes per period {holes:?}", first == EX44_W3), "levels 1..=3 of ex4.4 tail=mini".into()))
}

fn ex44_complexity() -> Result<(bool, String, String)> {
    let x = entry("ex4.4-mini")?;
    let mut ok = true;
    let mut detail = Vec::new();
    for l in 1..=3 {
        let p = x.period(l)?.to_usize().expect("small");
        let c = factor_set_exact_single_hole(&x, 1, p)?.count();
        ok &= c <= 2 * p;
        detail.push(format!("count({p}) = {c}"));
    }
    let seg = resolved_segment(&x, 4)?;
    for l in 1..=2 {
        let p = x.period(l)?.to_usize().expect("small");
        for len in [p, (l + 1) * p] {
            let d = factor_set_exact_single_hole(&x, 1, len)?;
            let w = factor_set_window(&x, len, seg, 4)?;
            ok &= d.words == w.words;
            detail.push(format!("L = {len}: decomposition {} / window {}", d.count(), w.count()));
        }
    }
    Ok((ok, detail.join("; "), format!("segment [{}, {}) at level 4", seg.0, seg.1)))
}

const EX57_LINES: [&str; 4] = [
    "a??ba??ba??ba??ba??ba??ba??ba??ba??ba??ba??ba??ba??ba??ba??ba??b",
    "aaaba??ba??babbbaaaba??ba??babbbaaaba??ba??babbbaaaba??ba??babbb",
    "aaabaaabaabbabbbaaaba??ba??babbbaaaba??ba??babbbaaababbbabababbb",
    "aaabaaabaabbabbbaaabaaabaabbabbbaaabaabbaabbabbbaaababbbabababbb",
];

fn ex57_lines() -> Result<(bool, String, String)> {
    let x = entry("ex5.7")?;
    let mut bad = Vec::new();
    for (i, want) in EX57_LINES.iter().enumerate() {
        let lv = build_level(&x, i + 1)?;
        if render(x.alphabet(), &lv.pattern, 0, 64) != *want {
            bad.push(i + 1);
        }
    }
    Ok((bad.is_empty(), format!("mismatched lines {bad:?}"), "levels 1..=4, window [0, 64)".into()))
}

/// Positions of `[0, n)` in `⋃_l ((4^l - 1)/3 + 4^{l+1} Z)`.
pub fn ex57_factor_a_positions(n: i64) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    let mut p = 4i64;
    while (p - 1) / 3 < n {
        let r = (p - 1) / 3;
        out.extend((r..n).step_by(4 * p as usize));
        p *= 4;
    }
    out
}

fn ex57_factor() -> Result<(bool, String, String)> {
    let x = entry("ex5.7")?;
    let code = SlidingBlockCode::run_code(x.alphabet().clone(), 1, A, B);
    let strict = FactorModel::new(&code, &x);
    let mut got = BTreeSet::new();
    let mut unresolved = 0;
    for j in 0..1024 {
        match strict.value(&BigInt::from(j), 8) {
            Some(a) if a == A => {
                got.insert(j);
            }
            Some(_) => {}
            None => unresolved += 1,
        }
    }
    let want = ex57_factor_a_positions(1024);
    let listed: BTreeSet<i64> = (0..1024).filter(|j| j % 16 == 1 || j % 64 == 5 || j % 256 == 21).collect();
    let model = FactorModel::new(&code, &x).saturating(DEFAULT_SATURATION);
    let aper: Vec<Vec<BigUint>> = (1..=4).map(|l| class_census(&model, l, l + 3).map(|c| c.aperiodic_residues(l))).collect::<Result<_>>()?;
    let aper_ok = aper.iter().enumerate().all(|(i, r)| *r == [BigUint::from((4u32.pow(i as u32 + 1) - 1) / 3)]);
    let decl = Declarations { hole_bound: Some(1), ..Default::default() };
    let v = property_verdicts(&model, &decl, 4, 7)?;
    let fb_ok = matches!(v.fb, Verdict::CertifiedStructurally(_));
    let extra: Vec<i64> = got.difference(&listed).copied().collect();
    let ok = unresolved == 0 && got == want && aper_ok && fb_ok;
    Ok((
        ok,
        format!(
            "{} a-positions in [0, 1024), equal to the union over all l: {}; beyond the three listed classes: {extra:?}; Aper(4^l) {aper:?}; fb {:?}",
            got.len(),
            got == want,
            v.fb
        ),
        "values at resolution 8; factor census resolution l + 3, saturation 2".into(),
    ))
}

fn ex57_branch(depth: usize) -> Result<OdometerPoint> {
    let x = entry("ex5.7")?;
    let residues = (1..=depth).map(|l| (BigUint::from(4u32).pow(l as u32) - 1u32) / 3u32).collect();
    OdometerPoint::new(x.scale(depth)?, residues)
}

fn ex57_fiber() -> Result<(bool, String, String)> {
    let x = entry("ex5.7")?;
    let mut counts = Vec::new();
    for l in 2..=6 {
        counts.push(fiber_prefix_count(&x, &ex57_branch(l)?, l, l + 3)?.count);
    }
    let digits = (alternating_digits(1), alternating_digits(3));
    let ok = counts.iter().all(|&c| c <= 4) && digits == (BigInt::from(6), BigInt::from(102));
    Ok((ok, format!("fibre counts l = 2..6: {counts:?}; k_1 = {}, k_3 = {}", digits.0, digits.1), "point depth l, resolution l + 3".into()))
}

fn ex57_pair() -> Result<(bool, String, String)> {
    let x = entry("ex5.7")?;
    let mut diffs = Vec::new();
    let mut agree = Vec::new();
    let mut ok = true;
    for l in 2..=5 {
        let (y, z) = alternating_pair(l);
        let r = pair_report(&x, &y, &z, l + 1, &[4i64.pow(l as u32)], l + 4)?;
        ok &= r.phi_agreement_depth >= l;
        agree.push(r.phi_agreement_depth);
        diffs.push(r.censuses[0].differences);
    }
    ok &= diffs.windows(2).all(|w| w[0] < w[1]);
    Ok((ok, format!("Φ agreement {agree:?}; differences on [-4^l, 4^l] {diffs:?}"), "l = 2..5, Φ depth l + 1, resolution l + 4".into()))
}

fn ex35_oxtoby() -> Result<(bool, String, String)> {
    let g = named("ex3.5")?;
    let oxtoby = check_oxtoby(&g.schedule, 4, 5)?;
    let minima = block_hole_minima(&g.schedule, 4, 5)?;
    let low: Vec<_> = minima.iter().filter(|&&(t, _, m)| m < 1 << (t - 1)).collect();
    let v = property_verdicts(&g.schedule, &g.declarations, 4, 5)?;
    let ok = oxtoby.is_certified() && low.is_empty() && matches!(v.hs, Verdict::Refuted(_));
    Ok((ok, format!("Oxtoby certified {}; blocks below 2^(t-1): {low:?}; hs {:?}", oxtoby.is_certified(), v.hs), "depth 4, resolution 5".into()))
}

/// Pairs of fibre elements `x(n_1 + ·)`, `x(n_2 + ·)` with `n_1 ≡ n_2 ≡ ω(l)`
/// modulo `p_l`, compared on `[-p_{l-1}, p_{l-1}]`.
fn ex35_census() -> Result<(bool, String, String)> {
    let x = entry("ex3.5")?;
    let tree = hole_tree(&x, 4, 5)?;
    let branch = tree.least_branch().unwrap_or_default();
    let mut worst = Vec::new();
    for l in 2..=4 {
        let pl = x.period(l)?.to_i64().expect("small");
        let radius = x.period(l - 1)?.to_i64().expect("small");
        let r = branch[l - 1].to_i64().expect("small");
        let blocks = (x.period(5)? / x.period(l)?).to_i64().expect("small").min(64);
        let windows: Vec<Vec<Option<Letter>>> =
            (0..blocks).map(|m| (-radius..=radius).map(|j| x.evaluate_i64(r + m * pl + j, 5)).collect()).collect();
        let mut most = 0;
        for (i, u) in windows.iter().enumerate() {
            for v in &windows[i + 1..] {
                let d = u.iter().zip(v).filter(|(a, b)| matches!((a, b), (Some(a), Some(b)) if a != b)).count();
                most = most.max(d);
            }
        }
        worst.push(most);
    }
    let ok = worst.iter().all(|&d| d <= 2);
    Ok((ok, format!("largest resolved difference count per level 2..4: {worst:?}"), "branch of the depth-4 tree, resolution 5".into()))
}

fn oxtoby_no_isolation() -> Result<(bool, String, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["ex3.5", "ex5.7"] {
        let x = entry(name)?;
        let nodes: usize = hole_tree(&x, 3, 5)?.counts().iter().sum();
        let w = oxtoby_no_isolation_check(&x, 3, 5)?;
        ok &= w.len() == nodes;
        detail.push(format!("{name}: {} witnesses for {nodes} nodes", w.len()));
    }
    Ok((ok, detail.join("; "), "depth 3, resolution 5".into()))
}

/// Surviving residues of each level, up to `levels`.
fn surviving(tree: &HoleTree, levels: usize) -> Vec<Vec<BigUint>> {
    let alive = tree.survivors();
    (1..=levels).map(|l| tree.level(l).iter().zip(&alive[l - 1]).filter(|(_, &a)| a).map(|(n, _)| n.residue.clone()).collect()).collect()
}

fn isolating_code() -> Result<(bool, String, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    let cases: [(&str, FillingSchedule, usize, IsolationSetup, usize); 2] = [
        ("ex4.3", entry("ex4.3")?, 8, IsolationSetup { l1: 2, max_l2: 4, collection_levels: 5, resolution_cap: 12 }, 10),
        ("ex4.4 tail=mini", ex44_mini_tail()?, 4, IsolationSetup { l1: 1, max_l2: 3, collection_levels: 2, resolution_cap: 8 }, 5),
    ];
    for (name, x, tdepth, setup, fdepth) in cases {
        let tree = hole_tree(&x, tdepth, tdepth + 1)?;
        let branch = tree.least_branch().unwrap_or_default();
        let iso = build_isolating_code(&x, &tree, &branch, A, B, &setup)?;
        let f = FactorModel::new(&iso.code, &x);
        let ft = hole_tree(&f, fdepth, fdepth + 1)?;
        let chain = surviving(&ft, 5);
        let chain_ok = chain.iter().zip(&branch).all(|(c, r)| c.len() == 1 && c[0] == *r);
        let cert = verify_period_structure(&f, &x.scale(5)?, 5, 6)?;
        let w = x.period(iso.l2 + 1)?;
        let search_ok = iso.search.holds() && iso.search.window.1 - iso.search.window.0 == 2 * w.to_i64().expect("small");
        ok &= chain_ok && cert.all_pass() && search_ok;
        detail.push(format!(
            "{name}: l1 = {}, l2 = {}, {} members, factor tree {:?}, pruned {:?}, chain {chain_ok}, period structure {}, residue search {search_ok}",
            iso.l1,
            iso.l2,
            iso.members,
            ft.counts(),
            pruned_branch_census(&ft),
            cert.all_pass()
        ));
    }
    Ok((ok, detail.join("; "), "ex4.3 factor tree depth 10; ex4.4 factor tree depth 5; period structure depth 5, resolution 6".into()))
}

/// A uniformly random table code of the given radius.
pub fn random_code(rng: &mut ChaCha8Rng, alphabet: &Alphabet, radius: usize) -> Result<SlidingBlockCode> {
    let n = alphabet.size();
    let size = n.pow(2 * radius as u32 + 1);
    let table: Vec<Letter> = (0..size).map(|_| Letter(rng.gen_range(0..n) as u8)).collect();
    SlidingBlockCode::from_fn(alphabet.clone(), radius, |w| {
        table[w.iter().fold(0, |acc, a| acc * n + a.0 as usize)]
    })
}

pub const FACTOR_BOUND_SEED: u64 = 0x5eed_0057;

fn factor_bound() -> Result<(bool, String, String)> {
    let x = entry("ex5.7")?;
    let source: Vec<usize> = (1..=4).map(|l| x.hole_classes(l).map(|h| h.len())).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_BOUND_SEED);
    let mut ok = true;
    let mut worst = Vec::new();
    for _ in 0..20 {
        let radius = rng.gen_range(0..=2);
        let code = random_code(&mut rng, x.alphabet(), radius)?;
        let model = FactorModel::new(&code, &x).saturating(DEFAULT_SATURATION);
        let census = class_census(&model, 4, 7)?;
        let counts: Vec<usize> = (1..=4).map(|l| census.aperiodic_residues(l).len()).collect();
        ok &= counts.iter().zip(&source).all(|(&f, &s)| f <= (2 * radius + 1) * s);
        worst.push((radius, counts));
    }
    Ok((ok, format!("source holes {source:?}; (radius, factor holes) {worst:?}"), format!("20 codes from seed {FACTOR_BOUND_SEED:#x}, census depth 4, resolution 7")))
}
