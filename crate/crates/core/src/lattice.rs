//! Equations, lattices and Boolean algebras of subsets of a finite space.
//!
//! Points are `0..n`. An equation `u → v` holds in `A` when `u ∈ A ⇒ v ∈ A`.
//! In a finite (hence compact) space every subset is clopen, and a family of
//! subsets is a lattice exactly when it is the family defined by the
//! equations all of its members satisfy.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest space [`defined_family`] scans exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PointSet(BTreeSet<usize>);

impl PointSet {
    pub fn empty() -> Self {
        PointSet::default()
    }

    pub fn full(n: usize) -> Self {
        PointSet((0..n).collect())
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.contains(&p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn complement(&self, n: usize) -> PointSet {
        PointSet((0..n).filter(|p| !self.contains(*p)).collect())
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Errors when an element is not below `n`.
    pub fn check(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&p| p >= n) {
            Some(&index) => Err(Error::PointIndexOutOfRange { index, len: n }),
            None => Ok(()),
        }
    }

    fn from_mask(mask: u32, n: usize) -> Self {
        PointSet((0..n).filter(|p| mask & (1 << p) != 0).collect())
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        PointSet(iter.into_iter().collect())
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// A family of subsets, kept sorted.
pub type Family = BTreeSet<PointSet>;

/// `from → to`: membership of `from` forces membership of `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Implication {
    pub from: usize,
    pub to: usize,
}

impl Implication {
    pub fn new(from: usize, to: usize) -> Self {
        Implication { from, to }
    }

    pub fn reversed(self) -> Self {
        Implication {
            from: self.to,
            to: self.from,
        }
    }
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

pub fn satisfies(a: &PointSet, e: Implication) -> bool {
    !a.contains(e.from) || a.contains(e.to)
}

fn fixpoint(seed: Family, step: impl Fn(&PointSet, &PointSet) -> Vec<PointSet>) -> Family {
    let mut family = seed;
    loop {
        let members: Vec<&PointSet> = family.iter().collect();
        let mut fresh = Vec::new();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i..] {
                fresh.extend(step(a, b).into_iter().filter(|s| !family.contains(s)));
            }
        }
        if fresh.is_empty() {
            return family;
        }
        family.extend(fresh);
    }
}

/// Closure of `generators` under binary union and intersection, with `∅`
/// and the whole space added.
pub fn lattice_closure(n: usize, generators: &[PointSet]) -> Family {
    let seed: Family = generators
        .iter()
        .cloned()
        .chain([PointSet::empty(), PointSet::full(n)])
        .collect();
    fixpoint(seed, |a, b| vec![a.union(b), a.intersection(b)])
}

/// Closure under union, intersection and complement.
pub fn boolean_closure(n: usize, generators: &[PointSet]) -> Family {
    let seed: Family = generators
        .iter()
        .flat_map(|g| [g.clone(), g.complement(n)])
        .chain([PointSet::empty(), PointSet::full(n)])
        .collect();
    fixpoint(seed, |a, b| vec![a.union(b), a.intersection(b)])
}

/// Closed under union and intersection and contains `∅` and the whole space.
pub fn is_lattice(n: usize, family: &Family) -> bool {
    family.contains(&PointSet::empty())
        && family.contains(&PointSet::full(n))
        && family
            .iter()
            .tuple_combinations()
            .all(|(a, b)| family.contains(&a.union(b)) && family.contains(&a.intersection(b)))
}

pub fn is_boolean_algebra(n: usize, family: &Family) -> bool {
    is_lattice(n, family) && family.iter().all(|a| family.contains(&a.complement(n)))
}

/// Every `u → v` over `0..n` satisfied by all members of `family`.
pub fn derive_equations(n: usize, family: &Family) -> BTreeSet<Implication> {
    (0..n)
        .cartesian_product(0..n)
        .map(|(u, v)| Implication::new(u, v))
        .filter(|&e| family.iter().all(|a| satisfies(a, e)))
        .collect()
}

/// Keeps `u → v` only when `v → u` is also present.
pub fn symmetrize(equations: &BTreeSet<Implication>) -> BTreeSet<Implication> {
    equations
        .iter()
        .copied()
        .filter(|e| equations.contains(&e.reversed()))
        .collect()
}

/// All subsets of `0..n` satisfying every equation, by exhaustive scan.
pub fn defined_family(n: usize, equations: &BTreeSet<Implication>) -> Result<Family> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::SpaceTooLarge {
            points: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let eqs: Vec<(u32, u32)> = equations.iter().map(|e| (1 << e.from, 1 << e.to)).collect();
    Ok((0u32..1 << n)
        .filter(|&m| eqs.iter().all(|&(u, v)| m & u == 0 || m & v != 0))
        .map(|m| PointSet::from_mask(m, n))
        .collect())
}

/// Why a subset `A` satisfying a family's equations is or is not a member,
/// following the compactness argument step by step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gap {
    /// `A` is the union of the members it contains.
    UnionOfMembers { members: Vec<PointSet> },
    /// `x ∈ A` lies in no member below `A`, yet the members containing `x`
    /// meet inside `A`: the family is not closed under intersection.
    MeetInside { x: usize, members: Vec<PointSet> },
    /// `x ∈ A` is covered by no member below `A` and `y ∉ A` lies in every
    /// member containing `x`: `x → y` holds in the family but fails in `A`.
    Equation { x: usize, y: usize },
}

pub fn explain_gap(n: usize, family: &Family, a: &PointSet) -> Gap {
    let below: Vec<PointSet> = family.iter().filter(|m| m.is_subset(a)).cloned().collect();
    let cover = below.iter().fold(PointSet::empty(), |acc, m| acc.union(m));
    let Some(x) = a.iter().find(|&p| !cover.contains(p)) else {
        return Gap::UnionOfMembers { members: below };
    };
    let around: Vec<PointSet> = family.iter().filter(|m| m.contains(x)).cloned().collect();
    let meet = around
        .iter()
        .fold(PointSet::full(n), |acc, m| acc.intersection(m));
    let outside = meet.iter().find(|&p| !a.contains(p));
    match outside {
        Some(y) => Gap::Equation { x, y },
        None => Gap::MeetInside { x, members: around },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremCheck {
    pub holds: bool,
    pub points: usize,
    pub family: Vec<PointSet>,
    pub equations: Vec<Implication>,
    pub defined: usize,
    /// A subset on which the defined family and the closure disagree.
    pub counterexample: Option<PointSet>,
    pub gap: Option<Gap>,
}

fn compare(n: usize, family: Family, equations: BTreeSet<Implication>) -> Result<TheoremCheck> {
    let defined = defined_family(n, &equations)?;
    let counterexample = defined.symmetric_difference(&family).next().cloned();
    let gap = counterexample.as_ref().map(|a| explain_gap(n, &family, a));
    Ok(TheoremCheck {
        holds: counterexample.is_none(),
        points: n,
        defined: defined.len(),
        family: family.into_iter().collect(),
        equations: equations.into_iter().collect(),
        counterexample,
        gap,
    })
}

/// `M = lattice_closure(generators)`, `E = derive_equations(M)`; checks that
/// the family defined by `E` is exactly `M`.
pub fn check_lattice_theorem(n: usize, generators: &[PointSet]) -> Result<TheoremCheck> {
    generators.iter().try_for_each(|g| g.check(n))?;
    let family = lattice_closure(n, generators);
    let equations = derive_equations(n, &family);
    compare(n, family, equations)
}

/// Same with the Boolean closure and only symmetric equations.
pub fn check_boolean_corollary(n: usize, generators: &[PointSet]) -> Result<TheoremCheck> {
    generators.iter().try_for_each(|g| g.check(n))?;
    let family = boolean_closure(n, generators);
    let equations = symmetrize(&derive_equations(n, &family));
    compare(n, family, equations)
}

#[derive(Debug, Clone, Serialize)]
pub struct Trial {
    pub points: usize,
    pub generators: Vec<PointSet>,
    pub lattice: bool,
    pub boolean: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialSummary {
    pub seed: u64,
    pub trials: usize,
    pub lattice_passed: usize,
    pub boolean_passed: usize,
    pub failures: Vec<Trial>,
}

impl TrialSummary {
    pub fn all_passed(&self) -> bool {
        self.lattice_passed == self.trials && self.boolean_passed == self.trials
    }
}

/// A random ground set of `1..=max_points` points with up to four random
/// generator subsets.
pub fn random_instance<R: Rng>(rng: &mut R, max_points: usize) -> (usize, Vec<PointSet>) {
    let n = rng.gen_range(1..=max_points.max(1));
    let k = rng.gen_range(0..=4);
    let generators = (0..k)
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    (n, generators)
}

/// Runs both checks on `trials` seeded random instances.
pub fn random_trials(seed: u64, trials: usize, max_points: usize) -> Result<TrialSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = TrialSummary {
        seed,
        trials,
        lattice_passed: 0,
        boolean_passed: 0,
        failures: Vec::new(),
    };
    for _ in 0..trials {
        let (n, generators) = random_instance(&mut rng, max_points);
        let lattice = check_lattice_theorem(n, &generators)?.holds;
        let boolean = check_boolean_corollary(n, &generators)?.holds;
        summary.lattice_passed += usize::from(lattice);
        summary.boolean_passed += usize::from(boolean);
        if !(lattice && boolean) {
            summary.failures.push(Trial {
                points: n,
                generators,
                lattice,
                boolean,
            });
        }
    }
    Ok(summary)
}
