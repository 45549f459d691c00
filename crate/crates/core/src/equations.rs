//! Equations between truncated points and the lattices of languages they define.
//!
//! Languages are handled through their images in a fixed approximation
//! space: a language satisfies `u → v` when `φ(u) ∈ V ⇒ φ(v) ∈ V`, which only
//! looks at the language's own coordinate, so languages with equal images
//! are interchangeable here.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::Language;
use crate::lattice::{self, Family, Gap, Implication, PointSet, TheoremCheck};
use crate::space::{ApproximationSpace, TruncatedPoint};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Equation {
    pub u: TruncatedPoint,
    pub v: TruncatedPoint,
}

impl Equation {
    pub fn new(u: TruncatedPoint, v: TruncatedPoint) -> Self {
        Equation { u, v }
    }

    fn positions(&self, space: &ApproximationSpace) -> Result<Implication> {
        let find = |p: &TruncatedPoint| {
            space
                .position(p)
                .ok_or_else(|| Error::PointNotInSpace(p.to_string()))
        };
        Ok(Implication::new(find(&self.u)?, find(&self.v)?))
    }

    fn from_positions(space: &ApproximationSpace, e: Implication) -> Self {
        Equation::new(space.points()[e.from].clone(), space.points()[e.to].clone())
    }
}

/// Equations over one space, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationSet {
    pub recognisers: Vec<usize>,
    pub exact: bool,
    pub equations: Vec<Equation>,
}

impl EquationSet {
    pub fn new(
        space: &ApproximationSpace,
        equations: impl IntoIterator<Item = Equation>,
    ) -> Result<Self> {
        let equations: BTreeSet<Equation> = equations.into_iter().collect();
        for e in &equations {
            e.positions(space)?;
        }
        Ok(EquationSet {
            recognisers: space.recogniser_indices().to_vec(),
            exact: space.exact(),
            equations: equations.into_iter().collect(),
        })
    }

    fn implications(&self, space: &ApproximationSpace) -> Result<BTreeSet<Implication>> {
        self.equations.iter().map(|e| e.positions(space)).collect()
    }
}

/// A finite family of languages whose recognisers are coordinates of a common space.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LanguageFamily {
    pub members: Vec<Language>,
}

impl LanguageFamily {
    pub fn new(members: impl IntoIterator<Item = Language>) -> Self {
        LanguageFamily {
            members: members.into_iter().collect(),
        }
    }

    pub fn images(&self, space: &ApproximationSpace) -> Result<Vec<PointSet>> {
        self.members.iter().map(|l| image(space, l)).collect()
    }
}

pub fn image(space: &ApproximationSpace, l: &Language) -> Result<PointSet> {
    Ok(space.image(l)?.into_iter().collect())
}

/// The points of a position set.
pub fn points_of(space: &ApproximationSpace, a: &PointSet) -> Vec<TruncatedPoint> {
    a.iter().map(|i| space.points()[i].clone()).collect()
}

/// `(u[i] ∈ V) ⇒ (v[i] ∈ V)` for the coordinate `i` of `l`'s recogniser.
pub fn satisfies_equation(space: &ApproximationSpace, l: &Language, e: &Equation) -> Result<bool> {
    let c = space.coordinate(l.recogniser)?;
    let member = |p: &TruncatedPoint| {
        p.values()
            .get(c)
            .map(|v| l.accepted.contains(v))
            .ok_or_else(|| Error::PointNotInSpace(p.to_string()))
    };
    Ok(!member(&e.u)? || member(&e.v)?)
}

/// `u ∈ A ⇒ v ∈ A`.
pub fn subset_satisfies(a: &BTreeSet<TruncatedPoint>, e: &Equation) -> bool {
    !a.contains(&e.u) || a.contains(&e.v)
}

pub fn lattice_closure(space: &ApproximationSpace, fam: &LanguageFamily) -> Result<Family> {
    Ok(lattice::lattice_closure(space.len(), &fam.images(space)?))
}

pub fn boolean_closure(space: &ApproximationSpace, fam: &LanguageFamily) -> Result<Family> {
    Ok(lattice::boolean_closure(space.len(), &fam.images(space)?))
}

/// Every `u → v` over the space's points satisfied by all members.
pub fn derive_equations(space: &ApproximationSpace, family: &Family) -> Result<EquationSet> {
    family.iter().try_for_each(|a| a.check(space.len()))?;
    let eqs = lattice::derive_equations(space.len(), family);
    EquationSet::new(
        space,
        eqs.into_iter().map(|e| Equation::from_positions(space, e)),
    )
}

/// All subsets of the space's points satisfying `es`.
pub fn defined_family(space: &ApproximationSpace, es: &EquationSet) -> Result<Family> {
    lattice::defined_family(space.len(), &es.implications(space)?)
}

/// A theorem check rendered in terms of points.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub holds: bool,
    /// False when the space is an under-approximation; the check is then
    /// about that finite set of points only.
    pub exact: bool,
    pub points: usize,
    pub family_size: usize,
    pub equation_count: usize,
    pub defined_size: usize,
    pub counterexample: Option<Vec<TruncatedPoint>>,
    pub certificate: Option<Equation>,
}

impl TheoremReport {
    fn from_check(space: &ApproximationSpace, check: TheoremCheck) -> Self {
        let certificate = match check.gap {
            Some(Gap::Equation { x, y }) => {
                Some(Equation::from_positions(space, Implication::new(x, y)))
            }
            _ => None,
        };
        TheoremReport {
            holds: check.holds,
            exact: space.exact(),
            points: check.points,
            family_size: check.family.len(),
            equation_count: check.equations.len(),
            defined_size: check.defined,
            counterexample: check.counterexample.map(|a| points_of(space, &a)),
            certificate,
        }
    }
}

/// The lattice closure of `fam` equals the family its equations define.
pub fn verify_lattice_theorem(
    space: &ApproximationSpace,
    fam: &LanguageFamily,
) -> Result<TheoremReport> {
    let check = lattice::check_lattice_theorem(space.len(), &fam.images(space)?)?;
    Ok(TheoremReport::from_check(space, check))
}

/// The Boolean closure of `fam` equals the family its symmetric equations define.
pub fn verify_boolean_corollary(
    space: &ApproximationSpace,
    fam: &LanguageFamily,
) -> Result<TheoremReport> {
    let check = lattice::check_boolean_corollary(space.len(), &fam.images(space)?)?;
    Ok(TheoremReport::from_check(space, check))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    InLattice,
    Separated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub verdict: VerdictKind,
    /// An equation every member of the closure satisfies and the candidate violates.
    pub certificate: Option<Equation>,
    /// False means the verdict is advisory: it refers to an under-approximated space.
    pub exact: bool,
}

/// Decides whether `candidate`'s image lies in the lattice generated by
/// `fam`, by testing it against the closure's equations.
pub fn check_definable(
    space: &ApproximationSpace,
    fam: &LanguageFamily,
    candidate: &Language,
) -> Result<Verdict> {
    let target = image(space, candidate)?;
    let closure = lattice_closure(space, fam)?;
    let violated = lattice::derive_equations(space.len(), &closure)
        .into_iter()
        .find(|&e| !lattice::satisfies(&target, e));
    Ok(Verdict {
        verdict: if violated.is_some() {
            VerdictKind::Separated
        } else {
            VerdictKind::InLattice
        },
        certificate: violated.map(|e| Equation::from_positions(space, e)),
        exact: space.exact(),
    })
}
