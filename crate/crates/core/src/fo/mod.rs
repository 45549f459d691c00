//! Finite relational structures recognised by first-order sentences.
//!
//! Objects are isomorphism classes, represented by canonical structures.
//! Every sentence is a recogniser with value set `{false, true}`.

mod structure;
mod syntax;

pub use structure::{canonical_structures, FiniteStructure, RelationSymbol, Signature};
pub use syntax::{parse_formula, Formula, Sentence};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use rand::Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::framework::{Framework, Language};
use crate::space::TruncatedPoint;
use crate::value::Value;

pub const FALSE: &str = "false";
pub const TRUE: &str = "true";

pub fn truth_value(b: bool) -> Value {
    Value::label(if b { TRUE } else { FALSE })
}

fn truth_of(v: &Value) -> Option<bool> {
    match v {
        Value::Label(s) if s == TRUE => Some(true),
        Value::Label(s) if s == FALSE => Some(false),
        _ => None,
    }
}

/// Relation symbols exist with matching arity and no variable is free.
pub fn check_sentence(s: &Sentence, sig: &Signature) -> Result<()> {
    fn walk(f: &Formula, sig: &Signature, bound: &mut Vec<String>) -> Result<()> {
        let bound_var = |v: &String, bound: &Vec<String>| {
            if bound.contains(v) {
                Ok(())
            } else {
                Err(Error::FreeVariable(v.clone()))
            }
        };
        match f {
            Formula::Rel { name, args } => {
                let expected = sig
                    .arity(name)
                    .ok_or_else(|| Error::UnknownRelation(name.clone()))?;
                if expected != args.len() {
                    return Err(Error::ArityMismatch {
                        name: name.clone(),
                        used: args.len(),
                        expected,
                    });
                }
                args.iter().try_for_each(|a| bound_var(a, bound))
            }
            Formula::Eq(x, y) => {
                bound_var(x, bound)?;
                bound_var(y, bound)
            }
            Formula::Not(a) => walk(a, sig, bound),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                walk(a, sig, bound)?;
                walk(b, sig, bound)
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                bound.push(v.clone());
                let r = walk(body, sig, bound);
                bound.pop();
                r
            }
        }
    }
    walk(s.formula(), sig, &mut Vec::new())
}

/// Naive recursive satisfaction; `env` is a stack of bindings, innermost last.
fn holds<'a>(f: &'a Formula, m: &FiniteStructure, env: &mut Vec<(&'a str, usize)>) -> bool {
    let lookup = |env: &[(&str, usize)], v: &str| {
        env.iter()
            .rev()
            .find(|(n, _)| *n == v)
            .map(|(_, e)| *e)
            .expect("checked closed")
    };
    match f {
        Formula::Rel { name, args } => {
            let tuple: Vec<usize> = args.iter().map(|a| lookup(env, a)).collect();
            m.holds(name, &tuple)
        }
        Formula::Eq(x, y) => lookup(env, x) == lookup(env, y),
        Formula::Not(a) => !holds(a, m, env),
        Formula::And(a, b) => holds(a, m, env) && holds(b, m, env),
        Formula::Or(a, b) => holds(a, m, env) || holds(b, m, env),
        Formula::Implies(a, b) => !holds(a, m, env) || holds(b, m, env),
        Formula::Exists(v, body) => (0..m.size()).any(|e| {
            env.push((v, e));
            let r = holds(body, m, env);
            env.pop();
            r
        }),
        Formula::Forall(v, body) => (0..m.size()).all(|e| {
            env.push((v, e));
            let r = holds(body, m, env);
            env.pop();
            r
        }),
    }
}

/// Tarskian truth of `s` in `m`, checked against `sig` first.
pub fn evaluate_sentence(s: &Sentence, m: &FiniteStructure, sig: &Signature) -> Result<bool> {
    check_sentence(s, sig)?;
    m.check(sig)?;
    Ok(holds(s.formula(), m, &mut Vec::new()))
}

/// A sentence and truth set with `(s1 ∈ V1 ∧ s2 ∈ V2) ⇔ s ∈ V` on every structure.
pub fn conjunction_recogniser(
    s1: &Sentence,
    v1: &BTreeSet<bool>,
    s2: &Sentence,
    v2: &BTreeSet<bool>,
) -> (Sentence, BTreeSet<bool>) {
    if v1.is_empty() || v2.is_empty() {
        return (s1.and(s2), BTreeSet::new());
    }
    let signed = |s: &Sentence, v: &BTreeSet<bool>| match (v.contains(&true), v.contains(&false)) {
        (true, false) => Some(s.clone()),
        (false, true) => Some(s.negate()),
        _ => None,
    };
    match (signed(s1, v1), signed(s2, v2)) {
        (Some(a), Some(b)) => (a.and(&b), BTreeSet::from([true])),
        (Some(a), None) | (None, Some(a)) => (a, BTreeSet::from([true])),
        (None, None) => (s1.and(s2), BTreeSet::from([false, true])),
    }
}

/// The diagram sentence of `m`: true exactly on structures isomorphic to `m`.
pub fn characteristic_sentence(m: &FiniteStructure, sig: &Signature) -> Result<Sentence> {
    m.check(sig)?;
    let n = m.size();
    if n == 0 {
        return Sentence::new(Formula::exists("y", Formula::eq("y", "y")).not());
    }
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut parts = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            parts.push(Formula::eq(&names[i], &names[j]).not());
        }
    }
    for rel in sig.relations() {
        for tuple in itertools::Itertools::multi_cartesian_product((0..rel.arity).map(|_| 0..n)) {
            let atom = Formula::Rel {
                name: rel.name.clone(),
                args: tuple.iter().map(|&e| names[e].clone()).collect(),
            };
            parts.push(if m.holds(&rel.name, &tuple) {
                atom
            } else {
                atom.not()
            });
        }
    }
    let cover = Formula::disjunction(names.iter().map(|x| Formula::eq("y", x))).expect("n > 0");
    parts.push(Formula::forall("y", cover));
    let body = Formula::conjunction(parts).expect("nonempty");
    let closed = names
        .iter()
        .rev()
        .fold(body, |acc, x| Formula::exists(x, acc));
    Sentence::new(closed)
}

/// Truth tuples of `sentences` over every canonical structure of size at most
/// `size_bound`. An under-approximation of the true projection.
pub fn realized_truth_tuples(
    sig: &Signature,
    sentences: &[Sentence],
    size_bound: usize,
) -> Result<BTreeSet<TruncatedPoint>> {
    sentences.iter().try_for_each(|s| check_sentence(s, sig))?;
    let mut out = BTreeSet::new();
    for size in 0..=size_bound {
        for m in canonical_structures(sig, size)? {
            out.insert(TruncatedPoint::new(
                sentences
                    .iter()
                    .map(|s| truth_value(holds(s.formula(), &m, &mut Vec::new())))
                    .collect(),
            ));
        }
    }
    Ok(out)
}

/// A random sentence over `sig` with quantifier rank at most `depth`.
pub fn random_sentence<R: Rng>(rng: &mut R, sig: &Signature, depth: usize) -> Sentence {
    fn go<R: Rng>(rng: &mut R, sig: &Signature, depth: usize, bound: &mut Vec<String>) -> Formula {
        if bound.is_empty() || (depth > 0 && rng.gen_bool(0.4)) {
            if depth == 0 {
                // No variable to use and no quantifier budget left.
                return if rng.gen_bool(0.5) {
                    Formula::tautology()
                } else {
                    Formula::contradiction()
                };
            }
            let var = format!("v{}", bound.len());
            bound.push(var.clone());
            let body = go(rng, sig, depth - 1, bound);
            bound.pop();
            return if rng.gen_bool(0.5) {
                Formula::Exists(var, Box::new(body))
            } else {
                Formula::Forall(var, Box::new(body))
            };
        }
        let pick = |rng: &mut R, bound: &Vec<String>| bound[rng.gen_range(0..bound.len())].clone();
        match rng.gen_range(0..6) {
            0 => go(rng, sig, depth, bound).not(),
            1 => {
                let a = go(rng, sig, depth.saturating_sub(1), bound);
                a.and(go(rng, sig, depth.saturating_sub(1), bound))
            }
            2 => {
                let a = go(rng, sig, depth.saturating_sub(1), bound);
                a.or(go(rng, sig, depth.saturating_sub(1), bound))
            }
            3 => Formula::Eq(pick(rng, bound), pick(rng, bound)),
            _ if sig.relations().is_empty() => Formula::Eq(pick(rng, bound), pick(rng, bound)),
            _ => {
                let rel = &sig.relations()[rng.gen_range(0..sig.relations().len())];
                Formula::Rel {
                    name: rel.name.clone(),
                    args: (0..rel.arity).map(|_| pick(rng, bound)).collect(),
                }
            }
        }
    }
    Sentence::new(go(rng, sig, depth, &mut Vec::new())).expect("variables are bound on creation")
}

/// Canonical structures per size, filled on demand.
#[derive(Debug, Default)]
struct StructureCache(Mutex<Vec<Vec<FiniteStructure>>>);

impl StructureCache {
    fn with_size<T>(
        &self,
        sig: &Signature,
        size: usize,
        f: impl FnOnce(&[FiniteStructure]) -> T,
    ) -> Result<T> {
        let mut sizes = self.0.lock().expect("cache lock");
        while sizes.len() <= size {
            let next = canonical_structures(sig, sizes.len())?;
            sizes.push(next);
        }
        Ok(f(&sizes[size]))
    }
}

#[derive(Deserialize)]
struct FoFile {
    signature: Signature,
    #[serde(default)]
    sentences: Vec<Sentence>,
}

/// Canonical finite structures over a fixed signature, recognised by a
/// growable list of sentences.
///
/// The enumeration budget of [`Framework::objects_up_to`] is a structure size.
#[derive(Debug)]
pub struct FoFramework {
    signature: Signature,
    sentences: Vec<Sentence>,
    truth: Vec<Value>,
    cache: StructureCache,
    characteristic: HashMap<FiniteStructure, usize>,
}

impl Clone for FoFramework {
    fn clone(&self) -> Self {
        FoFramework {
            signature: self.signature.clone(),
            sentences: self.sentences.clone(),
            truth: self.truth.clone(),
            cache: StructureCache::default(),
            characteristic: self.characteristic.clone(),
        }
    }
}

impl FoFramework {
    pub fn new(signature: Signature) -> Self {
        FoFramework {
            signature,
            sentences: Vec::new(),
            truth: vec![truth_value(false), truth_value(true)],
            cache: StructureCache::default(),
            characteristic: HashMap::new(),
        }
    }

    pub fn with_sentences(
        signature: Signature,
        sentences: impl IntoIterator<Item = Sentence>,
    ) -> Result<Self> {
        let mut fw = FoFramework::new(signature);
        for s in sentences {
            fw.push(s)?;
        }
        Ok(fw)
    }

    /// `{"signature": {...}, "sentences": ["exists x. E(x,x)", ...]}`
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        let file: FoFile = serde_json::from_str(text)?;
        FoFramework::with_sentences(file.signature, file.sentences)
            .map_err(serde::de::Error::custom)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn sentence(&self, index: usize) -> Result<&Sentence> {
        self.sentences.get(index).ok_or(Error::UnknownRecogniser {
            index,
            count: self.sentences.len(),
        })
    }

    pub fn push(&mut self, s: Sentence) -> Result<usize> {
        check_sentence(&s, &self.signature)?;
        self.sentences.push(s);
        Ok(self.sentences.len() - 1)
    }

    /// Canonical structures of exactly `size` elements.
    pub fn structures_of_size(&self, size: usize) -> Result<Vec<FiniteStructure>> {
        self.cache
            .with_size(&self.signature, size, <[FiniteStructure]>::to_vec)
    }

    fn truths(lang: &Language) -> BTreeSet<bool> {
        lang.accepted.iter().filter_map(truth_of).collect()
    }
}

impl Framework for FoFramework {
    type Object = FiniteStructure;

    fn object(&self, mut n: usize) -> Result<FiniteStructure> {
        let mut size = 0;
        loop {
            let found = self.cache.with_size(&self.signature, size, |all| {
                if n < all.len() {
                    Ok(all[n].clone())
                } else {
                    Err(all.len())
                }
            })?;
            match found {
                Ok(m) => return Ok(m),
                Err(len) => n -= len,
            }
            size += 1;
        }
    }

    fn objects_up_to(&self, budget: usize) -> Result<Vec<FiniteStructure>> {
        let mut out = Vec::new();
        for size in 0..=budget {
            self.cache
                .with_size(&self.signature, size, |all| out.extend_from_slice(all))?;
        }
        Ok(out)
    }

    fn check_object(&self, w: &FiniteStructure) -> Result<()> {
        w.check(&self.signature)
            .map_err(|e| Error::OutsideDomain(format!("{w}: {e}")))
    }

    fn recogniser_count(&self) -> usize {
        self.sentences.len()
    }

    fn value_set(&self, index: usize) -> Result<&[Value]> {
        self.sentence(index)?;
        Ok(&self.truth)
    }

    fn evaluate(&self, index: usize, w: &FiniteStructure) -> Result<Value> {
        Ok(truth_value(holds(
            self.sentence(index)?.formula(),
            w,
            &mut Vec::new(),
        )))
    }

    fn intersect(&mut self, l1: &Language, l2: &Language) -> Result<Language> {
        let (s, v) = conjunction_recogniser(
            self.sentence(l1.recogniser)?,
            &Self::truths(l1),
            self.sentence(l2.recogniser)?,
            &Self::truths(l2),
        );
        let index = self.push(s)?;
        Ok(Language::new(index, v.into_iter().map(truth_value)))
    }

    fn characteristic_recogniser(&mut self, w: &FiniteStructure) -> Option<Result<usize>> {
        let canonical = match w.canonical(&self.signature) {
            Ok(c) => c,
            Err(e) => return Some(Err(e)),
        };
        if let Some(&i) = self.characteristic.get(&canonical) {
            return Some(Ok(i));
        }
        Some(
            characteristic_sentence(&canonical, &self.signature).and_then(|s| {
                let i = self.push(s)?;
                self.characteristic.insert(canonical, i);
                Ok(i)
            }),
        )
    }
}

/// Truth tuples keyed by their first realizing structure.
pub fn first_realizers(
    fw: &FoFramework,
    indices: &[usize],
    size_bound: usize,
) -> Result<BTreeMap<TruncatedPoint, FiniteStructure>> {
    let mut out = BTreeMap::new();
    for m in fw.objects_up_to(size_bound)? {
        let point = indices
            .iter()
            .map(|&i| fw.evaluate(i, &m))
            .collect::<Result<Vec<_>>>()?;
        out.entry(TruncatedPoint::new(point)).or_insert(m);
    }
    Ok(out)
}
