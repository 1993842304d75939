//! The hole tree approximating the boundary of the separating cover, value
//! sets, finiteness verdicts and isolated value pairs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gallery::Declarations;
use crate::periodicity::{check_oxtoby, class_census, LevelModel, OxtobyVerdict};
use crate::words::{Alphabet, Letter};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleNode {
    pub residue: BigUint,
    /// Index of the parent on the previous level.
    pub parent: Option<usize>,
    pub values: BTreeSet<Letter>,
    pub undetermined: bool,
}

/// Levelwise aperiodic residues with parent links and value sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleTree {
    pub depth: usize,
    pub resolution: usize,
    pub scale: Vec<BigUint>,
    levels: Vec<Vec<HoleNode>>,
}

impl HoleTree {
    pub fn level(&self, l: usize) -> &[HoleNode] {
        &self.levels[l - 1]
    }

    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn find(&self, l: usize, r: &BigUint) -> Option<usize> {
        self.level(l).binary_search_by(|n| n.residue.cmp(r)).ok()
    }

    /// `survivors()[l - 1][i]` is set when node `i` of level `l` has a descendant at full depth.
    pub fn survivors(&self) -> Vec<Vec<bool>> {
        let mut alive: Vec<Vec<bool>> = self.levels.iter().map(|v| vec![false; v.len()]).collect();
        if let Some(last) = alive.last_mut() {
            last.iter_mut().for_each(|b| *b = true);
        }
        for l in (1..self.depth).rev() {
            for (i, n) in self.levels[l].iter().enumerate() {
                if alive[l][i] {
                    alive[l - 1][n.parent.expect("inner nodes have parents")] = true;
                }
            }
        }
        alive
    }

    /// Path of smallest residues among surviving nodes.
    pub fn least_branch(&self) -> Option<Vec<BigUint>> {
        let alive = self.survivors();
        let mut path = Vec::new();
        let mut parent: Option<usize> = None;
        for l in 1..=self.depth {
            let i = self.level(l).iter().enumerate().position(|(i, n)| alive[l - 1][i] && (l == 1 || n.parent == parent))?;
            path.push(self.level(l)[i].residue.clone());
            parent = Some(i);
        }
        Some(path)
    }

    /// Text rendering: one indented line per node, upper cylinders first.
    pub fn render(&self, alphabet: &Alphabet, max_nodes: usize) -> String {
        let mut out = String::new();
        let mut shown = 0;
        let children: Vec<Vec<Vec<usize>>> = (1..self.depth)
            .map(|l| {
                let mut c = vec![Vec::new(); self.level(l).len()];
                for (i, n) in self.level(l + 1).iter().enumerate() {
                    c[n.parent.expect("parent")].push(i);
                }
                c
            })
            .collect();
        let mut stack: Vec<(usize, usize)> = (0..self.level(1).len()).rev().map(|i| (1, i)).collect();
        while let Some((l, i)) = stack.pop() {
            if shown == max_nodes {
                out.push_str("...\n");
                break;
            }
            let n = &self.level(l)[i];
            let vals: String = n.values.iter().map(|&a| alphabet.char_of(a)).collect();
            let flag = if n.undetermined { "+?" } else { "" };
            let _ = writeln!(out, "{}[{} mod {}] {{{}{}}}", "  ".repeat(l - 1), n.residue, self.scale[l - 1], vals, flag);
            shown += 1;
            if l < self.depth {
                stack.extend(children[l - 1][i].iter().rev().map(|&c| (l + 1, c)));
            }
        }
        out
    }
}

/// Builds the hole tree from the class census at `resolution`.
pub fn hole_tree<M: LevelModel + ?Sized>(model: &M, depth: usize, resolution: usize) -> Result<HoleTree> {
    let census = class_census(model, depth, resolution)?;
    let mut levels: Vec<Vec<HoleNode>> = Vec::with_capacity(depth);
    for l in 1..=depth {
        let mut nodes = Vec::new();
        for c in census.aperiodic(l) {
            let parent = if l == 1 {
                None
            } else {
                let up = &c.residue % census.period(l - 1);
                let prev: &Vec<HoleNode> = &levels[l - 2];
                let i = prev
                    .binary_search_by(|n| n.residue.cmp(&up))
                    .map_err(|_| Error::Invalid(format!("node {} at level {l} has no parent", c.residue)))?;
                Some(i)
            };
            nodes.push(HoleNode { residue: c.residue.clone(), parent, values: c.values.keys().copied().collect(), undetermined: c.unresolved });
        }
        levels.push(nodes);
    }
    Ok(HoleTree { depth, resolution, scale: census.periods.clone(), levels })
}

/// Per level, the number of nodes with a descendant at full depth.
pub fn pruned_branch_census(tree: &HoleTree) -> Vec<usize> {
    tree.survivors().iter().map(|v| v.iter().filter(|&&b| b).count()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    CertifiedToDepth(usize),
    CertifiedStructurally(String),
    Refuted(String),
    Unknown(String),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::CertifiedToDepth(_) | Verdict::CertifiedStructurally(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyVerdicts {
    pub fpc: Verdict,
    pub hs: Verdict,
    pub fb: Verdict,
    pub depth: usize,
    pub resolution: usize,
    /// Holes of the level approximations, an upper bound for the aperiodic counts.
    pub hole_counts: Vec<usize>,
    /// `None` when the census at `resolution` exceeds [`CENSUS_BUDGET`].
    pub aperiodic_counts: Option<Vec<usize>>,
    pub pruned_census: Option<Vec<usize>>,
}

/// Largest leaf scan per class that `property_verdicts` runs.
pub const CENSUS_BUDGET: usize = 1 << 20;

/// Finiteness verdicts; limit statements need a declared structural reason
/// that is re-checked on every level up to `depth`.
pub fn property_verdicts<M: LevelModel + ?Sized>(
    model: &M,
    declarations: &Declarations,
    depth: usize,
    resolution: usize,
) -> Result<PropertyVerdicts> {
    let hole_counts = (1..=depth).map(|l| model.hole_classes(l).map(|h| h.len())).collect::<Result<Vec<_>>>()?;
    let scan = model.period(resolution)? / model.period(depth)?;
    let feasible = scan <= BigUint::from(CENSUS_BUDGET);
    let tree = if feasible { Some(hole_tree(model, depth, resolution)?) } else { None };
    let counts = tree.as_ref().map(HoleTree::counts);
    let pruned = tree.as_ref().map(pruned_branch_census);
    let within = |v: &[usize], h: u64| v.iter().all(|&c| c as u64 <= h);
    let fb = if let Some(h) = declarations.hole_bound.filter(|&h| within(&hole_counts, h)) {
        Verdict::CertifiedStructurally(format!("hole count per period bounded by {h} on levels 1..={depth}"))
    } else if let Some(h) = declarations.hole_bound.filter(|&h| counts.as_deref().is_some_and(|c| within(c, h))) {
        Verdict::CertifiedStructurally(format!("aperiodic count per period bounded by {h} on levels 1..={depth}"))
    } else if let Some(n) = declarations
        .boundary_size
        .filter(|&n| pruned.as_deref().is_some_and(|p| within(&p[..(depth / 2).max(1)], n)))
    {
        Verdict::CertifiedStructurally(format!("closed-form boundary of size {n}, pruned census {:?}", pruned.as_deref().unwrap_or_default()))
    } else {
        Verdict::Unknown(format!("pruned census {pruned:?} to depth {depth}"))
    };
    let oxtoby = if depth >= 2 && feasible {
        check_oxtoby(model, depth, resolution)?
    } else {
        OxtobyVerdict::Unknown { reason: String::new() }
    };
    let hs = if fb.is_certified() {
        Verdict::CertifiedStructurally("finite boundary".into())
    } else if declarations.separated_holes {
        Verdict::CertifiedStructurally("separated holes".into())
    } else if oxtoby.is_certified() {
        Verdict::Refuted(format!("Oxtoby certified to depth {depth}; aperiodic sets of elements are empty or infinite"))
    } else {
        Verdict::Unknown(format!("aperiodic counts {counts:?}"))
    };
    let fpc = if fb.is_certified() {
        Verdict::CertifiedStructurally("finite boundary".into())
    } else {
        Verdict::Unknown(format!("pruned census {pruned:?} to depth {depth}"))
    };
    Ok(PropertyVerdicts { fpc, hs, fb, depth, resolution, hole_counts, aperiodic_counts: counts, pruned_census: pruned })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsolationVerdict {
    CertifiedAtLevel(usize),
    RefutedToDepth(usize),
    Unknown(String),
}

/// Levels up to which isolation is judged: the deeper half of the tree only
/// decides which nodes survive.
pub fn isolation_horizon(tree: &HoleTree) -> usize {
    (tree.depth / 2).max(1)
}

/// Is `branch` locally the only surviving hole path carrying both `a` and `b`?
pub fn isolated_value_pair(tree: &HoleTree, alphabet: &Alphabet, branch: &[BigUint], a: Letter, b: Letter) -> Result<IsolationVerdict> {
    if a == b || a.0 as usize >= alphabet.size() || b.0 as usize >= alphabet.size() {
        return Err(Error::UnknownLetters);
    }
    let horizon = isolation_horizon(tree);
    if branch.len() < horizon {
        return Err(Error::Invalid(format!("branch shorter than horizon {horizon}")));
    }
    let alive = tree.survivors();
    let mut index = Vec::with_capacity(horizon);
    for (l, r) in branch.iter().enumerate().take(horizon) {
        let i = tree.find(l + 1, r).ok_or_else(|| Error::Invalid(format!("{r} is no node at level {}", l + 1)))?;
        if l > 0 && tree.level(l + 1)[i].parent != Some(index[l - 1]) {
            return Err(Error::Invalid("branch is not a path".into()));
        }
        index.push(i);
    }
    let pair = |n: &HoleNode| n.values.contains(&a) && n.values.contains(&b);
    if !index.iter().enumerate().all(|(l, &i)| pair(&tree.level(l + 1)[i]) && alive[l][i]) {
        return Ok(IsolationVerdict::Unknown("branch does not carry both letters on surviving nodes".into()));
    }
    for l in 1..horizon {
        let p = &tree.scale[l - 1];
        let alone = (l..=horizon).all(|m| {
            tree.level(m)
                .iter()
                .enumerate()
                .filter(|(i, n)| alive[m - 1][*i] && pair(n) && (&n.residue % p) == branch[l - 1])
                .all(|(i, _)| i == index[m - 1])
        });
        if alone {
            return Ok(IsolationVerdict::CertifiedAtLevel(l));
        }
    }
    Ok(IsolationVerdict::RefutedToDepth(horizon))
}

/// A second hole node in the same cylinder, `shift` periods away.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighbourWitness {
    pub level: usize,
    pub node: BigUint,
    pub partner: BigUint,
    pub shift: BigUint,
}

/// For every node on levels `1..=depth`, another node in the cylinder of its parent.
pub fn oxtoby_no_isolation_check<M: LevelModel + ?Sized>(model: &M, depth: usize, resolution: usize) -> Result<Vec<NeighbourWitness>> {
    if !check_oxtoby(model, depth.max(2), resolution)?.is_certified() {
        return Err(Error::NotOxtoby);
    }
    let tree = hole_tree(model, depth, resolution)?;
    let mut out = Vec::new();
    for l in 1..=depth {
        let up = if l == 1 { BigUint::one() } else { tree.scale[l - 2].clone() };
        let nodes = tree.level(l);
        for n in nodes {
            let partner = nodes
                .iter()
                .find(|m| m.residue != n.residue && m.parent == n.parent)
                .ok_or_else(|| Error::Invalid(format!("node {} at level {l} is alone in its cylinder", n.residue)))?;
            let p = &tree.scale[l - 1];
            let diff = (p + &partner.residue - &n.residue) % p;
            debug_assert!(diff.is_multiple_of(&up));
            out.push(NeighbourWitness { level: l, node: n.residue.clone(), partner: partner.residue.clone(), shift: diff / &up });
        }
    }
    Ok(out)
}

/// Number of nodes per level, as plain integers for reports.
pub fn counts_u64(tree: &HoleTree) -> Vec<u64> {
    tree.counts().iter().map(|&c| c.to_u64().expect("fits")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::named;
    use crate::words::{parse_seed, FillingSchedule};

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn singleton_boundary_tree() {
        let s = named("ex4.3").unwrap().schedule;
        let t = hole_tree(&s, 8, 10).unwrap();
        for l in 1..=4 {
            assert_eq!(t.level(2 * l).len(), 1 << l);
        }
        let census = pruned_branch_census(&t);
        assert_eq!(census[3], 1);
        let alive = t.survivors();
        let i = alive[3].iter().position(|&b| b).unwrap();
        assert_eq!(t.level(4)[i].residue, BigUint::from(85u32));
        assert_eq!(t.least_branch().unwrap()[..4], big(&[1, 5, 21, 85])[..]);
        for l in 1..8 {
            for n in t.level(l + 1) {
                assert!(n.values.is_subset(&t.level(l)[n.parent.unwrap()].values));
            }
        }
    }

    #[test]
    fn chains_and_periodic_words() {
        let s = named("ex4.4-mini").unwrap().schedule;
        let t = hole_tree(&s, 3, 5).unwrap();
        assert_eq!(t.counts(), vec![1, 1, 1]);
        assert_eq!(pruned_branch_census(&t), vec![1, 1, 1]);
        let p = FillingSchedule::from_seeds(
            Alphabet::ab(),
            vec![parse_seed("a?b", &Alphabet::ab()).unwrap(), parse_seed("a", &Alphabet::ab()).unwrap()],
        );
        assert_eq!(hole_tree(&p, 1, 2).unwrap().counts(), vec![0]);
    }

    #[test]
    fn oxtoby_trees_do_not_prune() {
        let s = named("ex5.7").unwrap().schedule;
        let t = hole_tree(&s, 4, 6).unwrap();
        assert_eq!(pruned_branch_census(&t), vec![2, 4, 8, 16]);
    }

    #[test]
    fn verdicts() {
        let e = named("ex4.4-mini").unwrap();
        let v = property_verdicts(&e.schedule, &e.declarations, 3, 5).unwrap();
        assert!(matches!(v.fb, Verdict::CertifiedStructurally(_)));
        assert!(v.hs.is_certified() && v.fpc.is_certified());
        let e = named("ex3.5").unwrap();
        let v = property_verdicts(&e.schedule, &e.declarations, 4, 5).unwrap();
        assert!(matches!(v.hs, Verdict::Refuted(_)));
        let e = named("ex4.3").unwrap();
        let v = property_verdicts(&e.schedule, &e.declarations, 8, 10).unwrap();
        assert!(matches!(v.fb, Verdict::CertifiedStructurally(_)));
        let v = property_verdicts(&e.schedule, &Declarations::default(), 8, 10).unwrap();
        assert!(matches!(v.fb, Verdict::Unknown(_)));
    }

    #[test]
    fn isolation() {
        let ab = Alphabet::ab();
        let (a, b) = (Letter(0), Letter(1));
        let m = named("ex4.4-mini").unwrap().schedule;
        let t = hole_tree(&m, 4, 5).unwrap();
        let br = t.least_branch().unwrap();
        assert_eq!(isolated_value_pair(&t, &ab, &br, a, b).unwrap(), IsolationVerdict::CertifiedAtLevel(1));
        let e = named("ex3.5").unwrap().schedule;
        let t = hole_tree(&e, 4, 5).unwrap();
        let br = t.least_branch().unwrap();
        assert_eq!(isolated_value_pair(&t, &ab, &br, a, b).unwrap(), IsolationVerdict::RefutedToDepth(2));
        let f = named("ex4.3").unwrap().schedule;
        let t = hole_tree(&f, 8, 10).unwrap();
        let br = big(&[1, 5, 21, 85, 341, 1365, 5461, 21845]);
        assert_eq!(isolated_value_pair(&t, &ab, &br, a, b).unwrap(), IsolationVerdict::CertifiedAtLevel(1));
        assert_eq!(isolated_value_pair(&t, &ab, &br, a, a), Err(Error::UnknownLetters));
    }

    #[test]
    fn neighbours() {
        for name in ["ex3.5", "ex5.7"] {
            let s = named(name).unwrap().schedule;
            let w = oxtoby_no_isolation_check(&s, 3, 5).unwrap();
            let t = hole_tree(&s, 3, 5).unwrap();
            assert_eq!(w.len(), t.counts().iter().sum::<usize>());
        }
        let m = named("ex4.4-mini").unwrap().schedule;
        assert_eq!(oxtoby_no_isolation_check(&m, 3, 4), Err(Error::NotOxtoby));
    }

    #[test]
    fn rendering() {
        let s = named("ex4.3").unwrap().schedule;
        let t = hole_tree(&s, 2, 4).unwrap();
        let text = t.render(&Alphabet::ab(), 10);
        assert!(text.starts_with("[1 mod 4] {ab+?}\n  [5 mod 16] {ab+?}\n  [9 mod 16] {ab}\n"), "{text}");
    }
}
