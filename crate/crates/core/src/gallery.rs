//! Named constructions with their structural declarations.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Alphabet, FillingSchedule, Letter, SeedWord, Symbol};

/// Largest de Bruijn order that is ever generated.
pub const MAX_DE_BRUIJN_ORDER: usize = 26;

/// Literal first seed of the de Bruijn family.
pub const EX44_W3: &str = "aaaaaabaaaabbaaababaaabbbaabaababbaabbabaabbbbabababbbabbabb?bbb";

pub const NAMES: &[&str] = &["sec2.2", "ex3.5", "williams", "ex4.3", "ex4.4", "ex4.4-mini", "ex5.7"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GalleryError {
    #[error("unknown gallery schedule {0:?}")]
    UnknownName(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// Facts a construction is known to satisfy; each is re-checked by tests.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Declarations {
    pub oxtoby: bool,
    pub single_hole: bool,
    pub hole_bound: Option<u64>,
    pub separated_holes: bool,
    /// Closed-form size of the boundary.
    pub boundary_size: Option<u64>,
    pub constant_on_aper: bool,
    /// Prime exponents of the scale in the limit; `None` means unbounded.
    pub prime_profile: Option<BTreeMap<u64, Option<u32>>>,
}

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub schedule: FillingSchedule,
    pub declarations: Declarations,
}

/// Parses `key=value` pairs.
pub fn parse_params(items: &[String]) -> Result<BTreeMap<String, String>, GalleryError> {
    items
        .iter()
        .map(|s| match s.split_once('=') {
            Some((k, v)) if !k.is_empty() => Ok((k.to_string(), v.to_string())),
            _ => Err(GalleryError::BadParams(format!("expected key=value, got {s:?}"))),
        })
        .collect()
}

pub fn gallery(name: &str, params: &BTreeMap<String, String>) -> Result<GalleryEntry, GalleryError> {
    let allowed: &[&str] = match name {
        "williams" => &["letters", "ratio"],
        "ex4.4" => &["tail"],
        _ => &[],
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(GalleryError::BadParams(format!("{name} takes no parameter {k:?}")));
    }
    let (schedule, declarations) = match name {
        "sec2.2" => (sec22(), Declarations::default()),
        "ex3.5" => (ex35(), oxtoby_declarations()),
        "williams" => williams(params)?,
        "ex4.3" => (ex43(), Declarations { boundary_size: Some(1), prime_profile: two_only(), ..Default::default() }),
        "ex4.4" => match params.get("tail").map(String::as_str).unwrap_or("factorial") {
            "factorial" => (ex44(false), single_hole_declarations()),
            "mini" => (ex44(true), single_hole_declarations()),
            t => return Err(GalleryError::BadParams(format!("tail must be factorial or mini, got {t:?}"))),
        },
        "ex4.4-mini" => (ex44_mini(), single_hole_declarations()),
        "ex5.7" => (ex57(), Declarations { prime_profile: two_only(), ..oxtoby_declarations() }),
        _ => return Err(GalleryError::UnknownName(name.to_string())),
    };
    let label = if params.is_empty() {
        name.to_string()
    } else {
        let p: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{name} {}", p.join(" "))
    };
    Ok(GalleryEntry {
        name: name.to_string(),
        params: params.clone(),
        schedule: schedule.with_label(&label),
        declarations,
    })
}

/// Gallery entry without parameters.
pub fn named(name: &str) -> Result<GalleryEntry, GalleryError> {
    gallery(name, &BTreeMap::new())
}

fn two_only() -> Option<BTreeMap<u64, Option<u32>>> {
    Some(BTreeMap::from([(2, None)]))
}

fn oxtoby_declarations() -> Declarations {
    Declarations { oxtoby: true, ..Default::default() }
}

fn single_hole_declarations() -> Declarations {
    Declarations { single_hole: true, hole_bound: Some(1), separated_holes: true, ..Default::default() }
}

const A: Symbol = Symbol::Letter(Letter(0));
const B: Symbol = Symbol::Letter(Letter(1));
const H: Symbol = Symbol::Hole;

fn rep(s: &[Symbol], n: usize) -> Vec<Symbol> {
    s.iter().copied().cycle().take(s.len() * n).collect()
}

fn seed(symbols: Vec<Symbol>) -> SeedWord {
    SeedWord::new(symbols, false).expect("gallery seeds are well formed")
}

fn sec22() -> FillingSchedule {
    FillingSchedule::from_seeds(
        Alphabet::ab(),
        vec![seed(vec![A, H, H, B]), seed(vec![A, A, H, A, H, B, B, B])],
    )
}

/// Seed `l` of the family built from single-`b` blocks.
pub fn ex35_seed(l: usize) -> SeedWord {
    let n = 1usize << l;
    let u = |i: usize| -> Vec<Symbol> { (0..n).map(|k| if k == i { B } else { A }).collect() };
    let mut s: Vec<Symbol> = (0..n / 2).flat_map(u).collect();
    s.extend(rep(&[H], 2 * n));
    s.extend((n / 2..n).flat_map(u));
    seed(s)
}

fn ex35() -> FillingSchedule {
    FillingSchedule::from_rule(Alphabet::ab(), "ex3.5", |l| (l <= 12).then(|| (ex35_seed(l), 0)))
}

fn williams(params: &BTreeMap<String, String>) -> Result<(FillingSchedule, Declarations), GalleryError> {
    let letters = params.get("letters").cloned().unwrap_or_else(|| "ab".to_string());
    let ratio: usize = params
        .get("ratio")
        .map(|r| r.parse().map_err(|_| GalleryError::BadParams(format!("ratio {r:?} is not a number"))))
        .transpose()?
        .unwrap_or(4);
    if ratio < 4 {
        return Err(GalleryError::BadParams("ratio must be at least 4".into()));
    }
    let mut chars: Vec<char> = letters.chars().collect();
    if chars.len() < 2 {
        return Err(GalleryError::BadParams("letters must name at least two letters".into()));
    }
    chars.sort();
    chars.dedup();
    let alphabet = Alphabet::new(&chars.iter().collect::<String>()).map_err(|e| GalleryError::BadParams(e.to_string()))?;
    let seq: Vec<Letter> = letters.chars().map(|c| alphabet.letter_of(c).expect("own letter")).collect();
    let cap = (1..).take_while(|&l: &u32| ratio.checked_mul((ratio - 2).pow(l - 1)).is_some_and(|q| q <= 1 << 24)).count();
    let rule = move |l: usize| -> Option<(SeedWord, i64)> {
        if l > cap {
            return None;
        }
        let h = (ratio - 2).pow(l as u32 - 1);
        let a = Symbol::Letter(seq[(l - 1) % seq.len()]);
        let mut s = rep(&[a], 2 * h);
        s.extend(rep(&[H], (ratio - 2) * h));
        Some((SeedWord::new(s, true).expect("letters present"), -(h as i64)))
    };
    let schedule = FillingSchedule::from_rule(alphabet, "williams", rule)
        .with_alignment(crate::words::Alignment::Offsets);
    let mut profile = BTreeMap::new();
    for p in factorize(ratio as u64).into_keys() {
        profile.insert(p, None);
    }
    let decl = Declarations { oxtoby: true, constant_on_aper: true, prime_profile: Some(profile), ..Default::default() };
    Ok((schedule, decl))
}

/// Seed `l` of the family with a singleton boundary.
pub fn ex43_seed(l: usize) -> SeedWord {
    let k = l.div_ceil(2);
    let n = 1usize << (k - 1);
    let s = if l % 2 == 1 {
        [rep(&[A], n), rep(&[H, H], n), rep(&[B], n)].concat()
    } else {
        [rep(&[A, A], n), rep(&[H, A], n), rep(&[H, B], n), rep(&[B, B], n)].concat()
    };
    seed(s)
}

fn ex43() -> FillingSchedule {
    FillingSchedule::from_rule(Alphabet::ab(), "ex4.3", |l| (l <= 40).then(|| (ex43_seed(l), 0)))
}

/// Where the hole goes inside the final run of `b`s.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum HolePlacement {
    None,
    Penultimate,
    /// Absolute index in the word.
    Index(usize),
}

/// Lexicographically least binary de Bruijn word of order `n`, rotated to end
/// with `b^n`.
pub fn de_bruijn(n: usize, hole: HolePlacement) -> Vec<Symbol> {
    assert!((1..=MAX_DE_BRUIJN_ORDER).contains(&n), "order out of range");
    let mut word = Vec::with_capacity(1 << n);
    let mut a = vec![0u8; n + 1];
    // Iterative Fredricksen-Kessler-Maiorana over Lyndon words.
    let mut t = 1usize;
    a[1] = 0;
    loop {
        if n.is_multiple_of(t) {
            word.extend(a[1..=t].iter().map(|&c| if c == 0 { A } else { B }));
        }
        t = n;
        while t > 0 && a[t] == 1 {
            t -= 1;
        }
        if t == 0 {
            break;
        }
        a[t] += 1;
        for j in t + 1..=n {
            a[j] = a[j - t];
        }
    }
    // The FKM word starts with a^n; it already ends with b^n.
    let len = word.len();
    let run = word.iter().rev().take_while(|&&s| s == B).count();
    if run < n {
        word.rotate_left((len - (n - run)) % len);
    }
    match hole {
        HolePlacement::None => {}
        HolePlacement::Penultimate => word[len - 2] = H,
        HolePlacement::Index(i) => word[i] = H,
    }
    word
}

fn debruijn_seed(order: usize) -> Option<SeedWord> {
    if !(3..=MAX_DE_BRUIJN_ORDER).contains(&order) {
        return None;
    }
    Some(seed(de_bruijn(order, HolePlacement::Penultimate)))
}

fn ex44_w3() -> SeedWord {
    seed(Alphabet::ab().parse_symbols(EX44_W3).expect("literal"))
}

fn ex44(mini_tail: bool) -> FillingSchedule {
    let w3 = ex44_w3();
    FillingSchedule::from_rule(Alphabet::ab(), "ex4.4", move |n| {
        if n == 1 {
            return Some((w3.clone(), 0));
        }
        let l = n + 2;
        let order = if mini_tail { l } else { (1..=l).product() };
        debruijn_seed(order).map(|w| (w, 0))
    })
}

fn ex44_mini() -> FillingSchedule {
    FillingSchedule::from_rule(Alphabet::ab(), "ex4.4-mini", |n| debruijn_seed(n + 2).map(|w| (w, 0)))
}

/// The two filling words of level `l` in the family with an isolating factor.
pub fn ex57_words(l: usize) -> (Vec<Symbol>, Vec<Symbol>) {
    if l == 1 {
        return (vec![A], vec![B]);
    }
    let r = (1usize << (l - 2)) - 1;
    ([vec![A, A], rep(&[A, B], r)].concat(), [vec![B, B], rep(&[B, A], r)].concat())
}

pub fn ex57_seed(l: usize) -> SeedWord {
    let (u, v) = ex57_words(l);
    seed([u, rep(&[H], 1 << l), v].concat())
}

fn ex57() -> FillingSchedule {
    FillingSchedule::from_rule(Alphabet::ab(), "ex5.7", |l| (l <= 22).then(|| (ex57_seed(l), 0)))
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// `4^l` as a big integer.
pub fn four_pow(l: usize) -> BigUint {
    BigUint::one() << (2 * l)
}
