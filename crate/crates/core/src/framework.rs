//! The abstract framework: a countable family of objects observed through a
//! growable sequence of recognisers, plus the recognisable languages they cut out.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::TruncatedPoint;
use crate::value::Value;

/// Number of objects realizing a truncated point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cardinality {
    Finite(u64),
    Infinite,
}

/// Objects `mods` and recognisers `forms`.
///
/// Recognisers are addressed by their position in the sequence. The
/// sequence only grows: intersections and characteristic recognisers are
/// appended, so indices handed out stay valid.
pub trait Framework {
    type Object: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Serialize;

    /// The `n`-th object of an injective enumeration.
    fn object(&self, n: usize) -> Result<Self::Object>;

    /// Objects covered by an enumeration budget. The default reads the first
    /// `budget` objects; frameworks may give the budget another meaning
    /// (structure size for first-order frameworks).
    fn objects_up_to(&self, budget: usize) -> Result<Vec<Self::Object>> {
        (0..budget).map(|n| self.object(n)).collect()
    }

    /// Rejects objects outside the framework's domain.
    fn check_object(&self, w: &Self::Object) -> Result<()>;

    fn recogniser_count(&self) -> usize;

    /// The finite value set `K_i`, in a fixed order.
    fn value_set(&self, index: usize) -> Result<&[Value]>;

    /// `φ_i(w)`. Callers have already validated `w`.
    fn evaluate(&self, index: usize, w: &Self::Object) -> Result<Value>;

    /// Registers a recogniser `φ` and returns `(φ, V)` with
    /// `φ(w) ∈ V ⇔ φ_i(w) ∈ V_i ∧ φ_j(w) ∈ V_j`.
    fn intersect(&mut self, l1: &Language, l2: &Language) -> Result<Language>;

    /// Hook producing a recogniser that separates `w` from every other object.
    fn characteristic_recogniser(&mut self, _w: &Self::Object) -> Option<Result<usize>> {
        None
    }

    /// Exact projection onto `indices` with the first enumerated witness of
    /// each point, when the framework can compute it without enumeration.
    fn exact_points(
        &self,
        _indices: &[usize],
    ) -> Option<Result<BTreeMap<TruncatedPoint, Self::Object>>> {
        None
    }

    /// Exact number of objects whose truncation to `indices` is `point`.
    fn exact_preimage_size(
        &self,
        _indices: &[usize],
        _point: &TruncatedPoint,
    ) -> Option<Result<Cardinality>> {
        None
    }

    fn check_index(&self, index: usize) -> Result<()> {
        let count = self.recogniser_count();
        if index < count {
            Ok(())
        } else {
            Err(Error::UnknownRecogniser { index, count })
        }
    }
}

/// A recognisable language `φ_i⁻¹(V)`, stored structurally.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Language {
    #[serde(rename = "recogniser")]
    pub recogniser: usize,
    pub accepted: BTreeSet<Value>,
}

impl Language {
    pub fn new(recogniser: usize, accepted: impl IntoIterator<Item = Value>) -> Self {
        Language {
            recogniser,
            accepted: accepted.into_iter().collect(),
        }
    }

    pub fn empty<F: Framework + ?Sized>(fw: &F, recogniser: usize) -> Result<Self> {
        fw.check_index(recogniser)?;
        Ok(Language::new(recogniser, []))
    }

    pub fn full<F: Framework + ?Sized>(fw: &F, recogniser: usize) -> Result<Self> {
        Ok(Language::new(
            recogniser,
            fw.value_set(recogniser)?.iter().cloned(),
        ))
    }

    /// Checks the recogniser exists and `V ⊆ K_i`.
    pub fn validate<F: Framework + ?Sized>(&self, fw: &F) -> Result<()> {
        let values = fw.value_set(self.recogniser)?;
        match self.accepted.iter().find(|v| !values.contains(v)) {
            Some(v) => Err(Error::InvalidLanguage {
                index: self.recogniser,
                value: v.to_string(),
            }),
            None => Ok(()),
        }
    }
}

pub fn contains<F: Framework + ?Sized>(fw: &F, lang: &Language, w: &F::Object) -> Result<bool> {
    lang.validate(fw)?;
    fw.check_object(w)?;
    Ok(lang.accepted.contains(&fw.evaluate(lang.recogniser, w)?))
}

pub fn intersect_languages<F: Framework + ?Sized>(
    fw: &mut F,
    l1: &Language,
    l2: &Language,
) -> Result<Language> {
    l1.validate(fw)?;
    l2.validate(fw)?;
    fw.intersect(l1, l2)
}

pub fn complement_language<F: Framework + ?Sized>(fw: &F, l: &Language) -> Result<Language> {
    l.validate(fw)?;
    let values = fw.value_set(l.recogniser)?;
    Ok(Language::new(
        l.recogniser,
        values.iter().filter(|v| !l.accepted.contains(v)).cloned(),
    ))
}

/// `l1 ∪ l2 = ¬(¬l1 ∩ ¬l2)`.
pub fn union_languages<F: Framework + ?Sized>(
    fw: &mut F,
    l1: &Language,
    l2: &Language,
) -> Result<Language> {
    let c1 = complement_language(fw, l1)?;
    let c2 = complement_language(fw, l2)?;
    let meet = fw.intersect(&c1, &c2)?;
    complement_language(fw, &meet)
}

/// Outcome of checking separation (axiom a) up to an enumeration bound.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomAReport<O> {
    pub bound: usize,
    /// True means "holds for the first `bound` objects", never more.
    pub passed: bool,
    /// `(object, separating recogniser index)` for every object checked.
    pub witnesses: Vec<(O, usize)>,
    /// An object for which no separator was found, and an object it collides with.
    pub counterexample: Option<(O, O)>,
}

/// Outcome of randomized intersection-closure checks (axiom b).
#[derive(Debug, Clone, Serialize)]
pub struct AxiomBReport<O> {
    pub trials: usize,
    pub objects_checked: usize,
    pub passed: bool,
    /// `(l1, l2, intersection, object)` where the biconditional failed.
    pub counterexample: Option<(Language, Language, Language, O)>,
}

fn separates<F: Framework + ?Sized>(
    fw: &F,
    index: usize,
    w: &F::Object,
    objects: &[F::Object],
) -> Result<bool> {
    let own = fw.evaluate(index, w)?;
    for other in objects.iter().filter(|o| *o != w) {
        if fw.evaluate(index, other)? == own {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Looks, for each of the first `bound` objects, for a registered recogniser
/// separating it from the others; falls back to the characteristic hook.
pub fn check_axiom_a<F: Framework + ?Sized>(
    fw: &mut F,
    bound: usize,
) -> Result<AxiomAReport<F::Object>> {
    let objects: Vec<F::Object> = (0..bound).map(|n| fw.object(n)).collect::<Result<_>>()?;
    let mut witnesses = Vec::with_capacity(objects.len());
    for w in &objects {
        let mut found = None;
        for index in 0..fw.recogniser_count() {
            if separates(fw, index, w, &objects)? {
                found = Some(index);
                break;
            }
        }
        if found.is_none() {
            if let Some(hook) = fw.characteristic_recogniser(w) {
                let index = hook?;
                if separates(fw, index, w, &objects)? {
                    found = Some(index);
                }
            }
        }
        match found {
            Some(index) => witnesses.push((w.clone(), index)),
            None => {
                let collision = first_collision(fw, w, &objects)?;
                return Ok(AxiomAReport {
                    bound,
                    passed: false,
                    witnesses,
                    counterexample: Some((w.clone(), collision)),
                });
            }
        }
    }
    Ok(AxiomAReport {
        bound,
        passed: true,
        witnesses,
        counterexample: None,
    })
}

/// Another object agreeing with `w` on every registered recogniser, or
/// failing that, the first object not separated by recogniser 0.
fn first_collision<F: Framework + ?Sized>(
    fw: &F,
    w: &F::Object,
    objects: &[F::Object],
) -> Result<F::Object> {
    let count = fw.recogniser_count();
    let profile = |o: &F::Object| {
        (0..count)
            .map(|i| fw.evaluate(i, o))
            .collect::<Result<Vec<_>>>()
    };
    let own = profile(w)?;
    let mut fallback = None;
    for other in objects.iter().filter(|o| *o != w) {
        let theirs = profile(other)?;
        if theirs == own {
            return Ok(other.clone());
        }
        if fallback.is_none() && count > 0 && theirs[0] == own[0] {
            fallback = Some(other.clone());
        }
    }
    Ok(fallback
        .or_else(|| objects.iter().find(|o| *o != w).cloned())
        .unwrap_or_else(|| w.clone()))
}

/// Picks `trials` random language pairs over the recognisers registered
/// before the call, intersects them and checks the biconditional on every
/// object within `budget`.
pub fn check_axiom_b<F: Framework + ?Sized, R: Rng>(
    fw: &mut F,
    trials: usize,
    budget: usize,
    rng: &mut R,
) -> Result<AxiomBReport<F::Object>> {
    let objects = fw.objects_up_to(budget)?;
    let base = fw.recogniser_count();
    for _ in 0..trials {
        if base == 0 {
            break;
        }
        let l1 = random_language(fw, rng.gen_range(0..base), rng)?;
        let l2 = random_language(fw, rng.gen_range(0..base), rng)?;
        let meet = intersect_languages(fw, &l1, &l2)?;
        for w in &objects {
            let lhs = contains(fw, &l1, w)? && contains(fw, &l2, w)?;
            if lhs != contains(fw, &meet, w)? {
                return Ok(AxiomBReport {
                    trials,
                    objects_checked: objects.len(),
                    passed: false,
                    counterexample: Some((l1, l2, meet, w.clone())),
                });
            }
        }
    }
    Ok(AxiomBReport {
        trials,
        objects_checked: objects.len(),
        passed: true,
        counterexample: None,
    })
}

/// A language over recogniser `index` with a uniformly random accepted set.
pub fn random_language<F: Framework + ?Sized, R: Rng>(
    fw: &F,
    index: usize,
    rng: &mut R,
) -> Result<Language> {
    let values = fw.value_set(index)?;
    let accepted: Vec<Value> = values
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    Ok(Language::new(index, accepted))
}
