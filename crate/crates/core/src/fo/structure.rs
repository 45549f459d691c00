//! Finite relational structures, canonical labelling and enumeration up to
//! isomorphism.
//!
//! A structure of size `n` is coded as a bit vector with one position per
//! `(relation, tuple)` pair: relations in signature order, tuples in
//! lexicographic order. The first position is the most significant bit of a
//! `u64`, so integer order is lexicographic order on bit vectors and the
//! canonical form is the permutation image with the smallest code.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SignatureRepr")]
pub struct Signature {
    relations: Vec<RelationSymbol>,
}

#[derive(Deserialize)]
struct SignatureRepr {
    relations: Vec<RelationSymbol>,
}

impl TryFrom<SignatureRepr> for Signature {
    type Error = Error;

    fn try_from(r: SignatureRepr) -> Result<Self> {
        Signature::new(r.relations)
    }
}

impl Signature {
    pub fn new(relations: Vec<RelationSymbol>) -> Result<Self> {
        for (i, r) in relations.iter().enumerate() {
            if r.arity == 0 {
                return Err(Error::InvalidSignature(format!(
                    "relation `{}` has arity 0",
                    r.name
                )));
            }
            if relations[..i].iter().any(|o| o.name == r.name) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate relation `{}`",
                    r.name
                )));
            }
        }
        Ok(Signature { relations })
    }

    /// One binary relation `E` (directed graphs).
    pub fn digraph() -> Self {
        Signature::with(&[("E", 2)])
    }

    /// Panics on malformed input; meant for literals.
    pub fn with(relations: &[(&str, usize)]) -> Self {
        Signature::new(
            relations
                .iter()
                .map(|&(n, a)| RelationSymbol {
                    name: n.into(),
                    arity: a,
                })
                .collect(),
        )
        .expect("valid signature literal")
    }

    pub fn relations(&self) -> &[RelationSymbol] {
        &self.relations
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relations
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.arity)
    }

    /// Number of interpretation bits for structures of size `n`.
    pub fn bits(&self, n: usize) -> usize {
        self.relations.iter().map(|r| n.pow(r.arity as u32)).sum()
    }
}

#[derive(Serialize, Deserialize)]
struct StructureRepr {
    size: usize,
    #[serde(default)]
    relations: BTreeMap<String, Vec<Vec<usize>>>,
}

/// A structure with universe `{0, …, size-1}`. Relations without tuples are
/// not stored, so equal interpretations compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "StructureRepr", into = "StructureRepr")]
pub struct FiniteStructure {
    size: usize,
    relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
}

impl TryFrom<StructureRepr> for FiniteStructure {
    type Error = Error;

    fn try_from(r: StructureRepr) -> Result<Self> {
        let mut s = FiniteStructure::empty(r.size);
        for (name, tuples) in r.relations {
            for t in tuples {
                s.insert(&name, t)?;
            }
        }
        Ok(s)
    }
}

impl From<FiniteStructure> for StructureRepr {
    fn from(s: FiniteStructure) -> Self {
        StructureRepr {
            size: s.size,
            relations: s
                .relations
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().collect()))
                .collect(),
        }
    }
}

impl FiniteStructure {
    pub fn empty(size: usize) -> Self {
        FiniteStructure {
            size,
            relations: BTreeMap::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn insert(&mut self, relation: &str, tuple: Vec<usize>) -> Result<()> {
        if let Some(&e) = tuple.iter().find(|&&e| e >= self.size) {
            return Err(Error::InvalidStructure(format!(
                "element {e} of `{relation}` outside universe of size {}",
                self.size
            )));
        }
        self.relations
            .entry(relation.to_string())
            .or_default()
            .insert(tuple);
        Ok(())
    }

    pub fn holds(&self, relation: &str, tuple: &[usize]) -> bool {
        self.relations
            .get(relation)
            .is_some_and(|ts| ts.contains(tuple))
    }

    pub fn tuples(&self, relation: &str) -> impl Iterator<Item = &Vec<usize>> {
        self.relations.get(relation).into_iter().flatten()
    }

    /// Every stored relation is declared in `sig` with matching arity.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        for (name, tuples) in &self.relations {
            let arity = sig
                .arity(name)
                .ok_or_else(|| Error::UnknownRelation(name.clone()))?;
            if let Some(t) = tuples.iter().find(|t| t.len() != arity) {
                return Err(Error::ArityMismatch {
                    name: name.clone(),
                    used: t.len(),
                    expected: arity,
                });
            }
        }
        Ok(())
    }

    /// Image under `perm`, where element `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> FiniteStructure {
        FiniteStructure {
            size: self.size,
            relations: self
                .relations
                .iter()
                .map(|(k, ts)| {
                    (
                        k.clone(),
                        ts.iter()
                            .map(|t| t.iter().map(|&e| perm[e]).collect())
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    /// Bit vector code against `sig` (see module docs).
    pub fn code(&self, sig: &Signature) -> u64 {
        let layout = Layout::new(sig, self.size);
        layout.positions.iter().fold(0u64, |acc, (r, t)| {
            (acc << 1) | u64::from(self.holds(&sig.relations[*r].name, t))
        })
    }

    /// The lexicographically least relabelling, by brute force over all
    /// permutations of the universe.
    pub fn canonical(&self, sig: &Signature) -> Result<FiniteStructure> {
        self.check(sig)?;
        let layout = Layout::new(sig, self.size);
        layout.guard()?;
        let code = self.code(sig);
        let best = layout
            .permutation_maps()
            .map(|m| layout.apply(&m, code))
            .min()
            .unwrap_or(code);
        Ok(layout.decode(sig, best))
    }

    pub fn is_isomorphic(&self, other: &FiniteStructure, sig: &Signature) -> Result<bool> {
        Ok(self.size == other.size && self.canonical(sig)? == other.canonical(sig)?)
    }
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.size)?;
        for (name, tuples) in &self.relations {
            let body = tuples
                .iter()
                .map(|t| format!("({})", t.iter().join(",")))
                .join("");
            write!(f, " {name}={{{body}}}")?;
        }
        Ok(())
    }
}

const MAX_BITS: usize = 24;
const MAX_SIZE: usize = 8;

/// Bit positions of structures of one size.
struct Layout {
    size: usize,
    positions: Vec<(usize, Vec<usize>)>,
    index: BTreeMap<(usize, Vec<usize>), usize>,
}

impl Layout {
    fn new(sig: &Signature, size: usize) -> Self {
        let mut positions = Vec::new();
        for (r, rel) in sig.relations.iter().enumerate() {
            for t in (0..rel.arity).map(|_| 0..size).multi_cartesian_product() {
                positions.push((r, t));
            }
        }
        let index = positions
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        Layout {
            size,
            positions,
            index,
        }
    }

    fn guard(&self) -> Result<()> {
        if self.positions.len() > MAX_BITS || self.size > MAX_SIZE {
            return Err(Error::EnumerationTooLarge {
                size: self.size,
                bits: self.positions.len(),
                limit: MAX_BITS,
            });
        }
        Ok(())
    }

    fn bit(&self, position: usize) -> u64 {
        1u64 << (self.positions.len() - 1 - position)
    }

    /// For each permutation, the bit each position moves to.
    fn permutation_maps(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.size).permutations(self.size).map(move |perm| {
            self.positions
                .iter()
                .map(|(r, t)| {
                    let image: Vec<usize> = t.iter().map(|&e| perm[e]).collect();
                    self.bit(self.index[&(*r, image)])
                })
                .collect()
        })
    }

    fn apply(&self, map: &[u64], code: u64) -> u64 {
        map.iter()
            .enumerate()
            .filter(|(p, _)| code & self.bit(*p) != 0)
            .fold(0, |acc, (_, b)| acc | b)
    }

    fn decode(&self, sig: &Signature, code: u64) -> FiniteStructure {
        let mut s = FiniteStructure::empty(self.size);
        for (p, (r, t)) in self.positions.iter().enumerate() {
            if code & self.bit(p) != 0 {
                s.relations
                    .entry(sig.relations[*r].name.clone())
                    .or_default()
                    .insert(t.clone());
            }
        }
        s
    }
}

/// All canonical structures of exactly `size` elements, in increasing code order.
pub fn canonical_structures(sig: &Signature, size: usize) -> Result<Vec<FiniteStructure>> {
    let layout = Layout::new(sig, size);
    layout.guard()?;
    let maps: Vec<Vec<u64>> = layout.permutation_maps().collect();
    let total = 1u64 << layout.positions.len();
    let out = (0..total)
        .filter(|&code| maps.iter().all(|m| layout.apply(m, code) >= code))
        .map(|code| layout.decode(sig, code))
        .collect();
    Ok(out)
}
