//! Finite projections of the profinite space.
//!
//! The space itself is the closure of the image of `μ(w) = (φ_0(w), φ_1(w), …)`
//! in `∏ K_i`; it has no finite representation. Everything here works with
//! its projection onto a finite list of recogniser indices. That projection
//! is finite (so trivially compact) and equals the set of value tuples
//! realized by objects, because every basic open set meeting the closure
//! meets the image.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{contains, Cardinality, Framework, Language};
use crate::value::Value;

/// A profinite object observed through finitely many recognisers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncatedPoint(Vec<Value>);

impl TruncatedPoint {
    pub fn new(values: Vec<Value>) -> Self {
        TruncatedPoint(values)
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coordinate `j` of the result is coordinate `perm[j]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> TruncatedPoint {
        TruncatedPoint(perm.iter().map(|&j| self.0[j].clone()).collect())
    }
}

impl<'a> FromIterator<&'a str> for TruncatedPoint {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        TruncatedPoint(
            iter.into_iter()
                .map(|s| s.parse().expect("infallible"))
                .collect(),
        )
    }
}

impl fmt::Display for TruncatedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    level: usize,
    recognisers: Vec<usize>,
    exact: bool,
    points: Vec<TruncatedPoint>,
}

/// The projection onto `recogniser_indices`, either exact or the points
/// realized by objects within an enumeration budget (a subset).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub struct ApproximationSpace {
    recogniser_indices: Vec<usize>,
    points: Vec<TruncatedPoint>,
    exact: bool,
    budget: Option<usize>,
}

impl TryFrom<SpaceRepr> for ApproximationSpace {
    type Error = Error;

    fn try_from(r: SpaceRepr) -> Result<Self> {
        if r.level != r.recognisers.len() {
            return Err(Error::PointNotInSpace(format!(
                "level {} but {} recognisers",
                r.level,
                r.recognisers.len()
            )));
        }
        if let Some(p) = r.points.iter().find(|p| p.len() != r.level) {
            return Err(Error::PointNotInSpace(p.to_string()));
        }
        Ok(ApproximationSpace::from_points(
            r.recognisers,
            r.points,
            r.exact,
            None,
        ))
    }
}

impl From<ApproximationSpace> for SpaceRepr {
    fn from(s: ApproximationSpace) -> Self {
        SpaceRepr {
            level: s.recogniser_indices.len(),
            recognisers: s.recogniser_indices,
            exact: s.exact,
            points: s.points,
        }
    }
}

impl ApproximationSpace {
    /// Points are sorted and deduplicated.
    pub fn from_points(
        recogniser_indices: Vec<usize>,
        points: impl IntoIterator<Item = TruncatedPoint>,
        exact: bool,
        budget: Option<usize>,
    ) -> Self {
        let points: BTreeSet<TruncatedPoint> = points.into_iter().collect();
        ApproximationSpace {
            recogniser_indices,
            points: points.into_iter().collect(),
            exact,
            budget,
        }
    }

    pub fn level(&self) -> usize {
        self.recogniser_indices.len()
    }

    pub fn recogniser_indices(&self) -> &[usize] {
        &self.recogniser_indices
    }

    /// Sorted lexicographically on value tuples.
    pub fn points(&self) -> &[TruncatedPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn exact(&self) -> bool {
        self.exact
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    pub fn position(&self, p: &TruncatedPoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    /// Index of recogniser `index` among the coordinates.
    pub fn coordinate(&self, index: usize) -> Result<usize> {
        self.recogniser_indices
            .iter()
            .position(|&i| i == index)
            .ok_or(Error::CoordinateMissing(index))
    }

    /// `{ p : p[coord(l)] ∈ V }` as positions into [`points`](Self::points).
    pub fn image(&self, l: &Language) -> Result<BTreeSet<usize>> {
        let c = self.coordinate(l.recogniser)?;
        Ok(self
            .points
            .iter()
            .enumerate()
            .filter(|(_, p)| l.accepted.contains(&p.values()[c]))
            .map(|(i, _)| i)
            .collect())
    }
}

/// `(φ_{i_1}(w), …, φ_{i_N}(w))`.
pub fn truncate<F: Framework + ?Sized>(
    fw: &F,
    indices: &[usize],
    w: &F::Object,
) -> Result<TruncatedPoint> {
    indices.iter().try_for_each(|&i| fw.check_index(i))?;
    fw.check_object(w)?;
    indices
        .iter()
        .map(|&i| fw.evaluate(i, w))
        .collect::<Result<Vec<_>>>()
        .map(TruncatedPoint::new)
}

/// Exact projection when the framework provides one, otherwise the points
/// of every object within `budget`.
pub fn approximation_space<F: Framework + ?Sized>(
    fw: &F,
    indices: &[usize],
    budget: usize,
) -> Result<ApproximationSpace> {
    indices.iter().try_for_each(|&i| fw.check_index(i))?;
    if indices.is_empty() {
        return Ok(ApproximationSpace::from_points(
            Vec::new(),
            [TruncatedPoint::new(Vec::new())],
            true,
            None,
        ));
    }
    if let Some(exact) = fw.exact_points(indices) {
        return Ok(ApproximationSpace::from_points(
            indices.to_vec(),
            exact?.into_keys(),
            true,
            None,
        ));
    }
    let points = fw
        .objects_up_to(budget)?
        .iter()
        .map(|w| truncate(fw, indices, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(ApproximationSpace::from_points(
        indices.to_vec(),
        points,
        false,
        Some(budget),
    ))
}

/// The first enumerated object whose truncation is `p`.
pub fn realize<F: Framework + ?Sized>(
    fw: &F,
    space: &ApproximationSpace,
    p: &TruncatedPoint,
) -> Result<F::Object> {
    if space.position(p).is_none() {
        return Err(Error::PointNotInSpace(p.to_string()));
    }
    let indices = space.recogniser_indices();
    if let Some(exact) = fw.exact_points(indices) {
        if let Some(w) = exact?.remove(p) {
            return Ok(w);
        }
    }
    let budget = space.budget().unwrap_or(0);
    if indices.is_empty() {
        return fw.object(0);
    }
    for w in fw.objects_up_to(budget)? {
        if truncate(fw, indices, &w)? == *p {
            return Ok(w);
        }
    }
    Err(Error::NotFound {
        point: p.to_string(),
        budget,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IsolationReport<O> {
    pub point: TruncatedPoint,
    /// Index of a coordinate that by itself separates the object.
    pub separator: usize,
    pub isolated: bool,
    /// Exact count for exact frameworks, otherwise objects within budget.
    pub realizations: Cardinality,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other: Option<O>,
}

/// Whether `w` is the only object realizing its truncation to `indices`.
///
/// Requires some single coordinate among `indices` that separates `w`
/// (a characteristic recogniser); its absence is an error. Exact frameworks
/// count preimages exactly, others scan the objects within `budget`.
pub fn check_isolated<F: Framework + ?Sized>(
    fw: &F,
    w: &F::Object,
    indices: &[usize],
    budget: usize,
) -> Result<IsolationReport<F::Object>> {
    let point = truncate(fw, indices, w)?;
    let mut separator = None;
    for (c, &i) in indices.iter().enumerate() {
        let single = TruncatedPoint::new(vec![point.values()[c].clone()]);
        let unique = match fw.exact_preimage_size(&[i], &single) {
            Some(count) => count? == Cardinality::Finite(1),
            None => {
                let mut hits = 0;
                for o in fw.objects_up_to(budget)? {
                    if fw.evaluate(i, &o)? == single.values()[0] {
                        hits += 1;
                    }
                }
                hits == 1
            }
        };
        if unique {
            separator = Some(i);
            break;
        }
    }
    let separator = separator.ok_or_else(|| Error::NoCharacteristicRecogniser(w.to_string()))?;
    if let Some(count) = fw.exact_preimage_size(indices, &point) {
        let count = count?;
        return Ok(IsolationReport {
            isolated: count == Cardinality::Finite(1),
            point,
            separator,
            realizations: count,
            exact: true,
            other: None,
        });
    }
    let mut hits = 0u64;
    let mut other = None;
    for o in fw.objects_up_to(budget)? {
        if truncate(fw, indices, &o)? == point {
            hits += 1;
            if o != *w && other.is_none() {
                other = Some(o);
            }
        }
    }
    Ok(IsolationReport {
        isolated: hits == 1,
        point,
        separator,
        realizations: Cardinality::Finite(hits),
        exact: false,
        other,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityReport<O> {
    pub passed: bool,
    pub exact: bool,
    /// Image of the language in the space.
    pub image: Vec<TruncatedPoint>,
    /// A point whose coordinate class is split by the image.
    pub cylinder_violation: Option<(TruncatedPoint, TruncatedPoint)>,
    /// An object whose membership disagrees with its point's membership.
    pub membership_violation: Option<(O, TruncatedPoint)>,
    pub objects_checked: usize,
}

/// Checks that the image of `l` is a union of cylinders over its coordinate
/// and that object membership factors through the truncation.
///
/// Exact spaces check the realizing witness of every point; approximate
/// spaces check every object within the space's budget.
pub fn check_duality<F: Framework + ?Sized>(
    fw: &F,
    l: &Language,
    space: &ApproximationSpace,
) -> Result<DualityReport<F::Object>> {
    l.validate(fw)?;
    let c = space.coordinate(l.recogniser)?;
    let image = space.image(l)?;
    let points = space.points();
    let mut cylinder_violation = None;
    'outer: for &i in &image {
        for (j, q) in points.iter().enumerate() {
            if q.values()[c] == points[i].values()[c] && !image.contains(&j) {
                cylinder_violation = Some((points[i].clone(), q.clone()));
                break 'outer;
            }
        }
    }
    let objects: Vec<F::Object> = if space.exact() {
        points
            .iter()
            .map(|p| realize(fw, space, p))
            .collect::<Result<_>>()?
    } else {
        fw.objects_up_to(space.budget().unwrap_or(0))?
    };
    let mut membership_violation = None;
    for w in &objects {
        let p = truncate(fw, space.recogniser_indices(), w)?;
        let in_image = space.position(&p).is_some_and(|k| image.contains(&k));
        if in_image != contains(fw, l, w)? {
            membership_violation = Some((w.clone(), p));
            break;
        }
    }
    Ok(DualityReport {
        passed: cylinder_violation.is_none() && membership_violation.is_none(),
        exact: space.exact(),
        image: image.iter().map(|&i| points[i].clone()).collect(),
        cylinder_violation,
        membership_violation,
        objects_checked: objects.len(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PermutationReport {
    pub passed: bool,
    pub exact: bool,
    pub original: Vec<TruncatedPoint>,
    pub permuted: Vec<TruncatedPoint>,
}

/// Projecting onto a reordered index list permutes coordinates and nothing else.
///
/// `perm[j]` is the position in `indices` of the `j`-th reordered index.
pub fn permutation_invariance<F: Framework + ?Sized>(
    fw: &F,
    indices: &[usize],
    perm: &[usize],
    budget: usize,
) -> Result<PermutationReport> {
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..indices.len()).collect::<Vec<_>>() {
        return Err(Error::NotAPermutation);
    }
    let reordered: Vec<usize> = perm.iter().map(|&j| indices[j]).collect();
    let original = approximation_space(fw, indices, budget)?;
    let permuted = approximation_space(fw, &reordered, budget)?;
    let expected: BTreeSet<TruncatedPoint> =
        original.points().iter().map(|p| p.permuted(perm)).collect();
    let got: BTreeSet<TruncatedPoint> = permuted.points().iter().cloned().collect();
    Ok(PermutationReport {
        passed: expected == got,
        exact: original.exact() && permuted.exact(),
        original: original.points().to_vec(),
        permuted: permuted.points().to_vec(),
    })
}

/// Realizing objects for every point of `space`.
pub fn realizers<F: Framework + ?Sized>(
    fw: &F,
    space: &ApproximationSpace,
) -> Result<BTreeMap<TruncatedPoint, F::Object>> {
    space
        .points()
        .iter()
        .map(|p| Ok((p.clone(), realize(fw, space, p)?)))
        .collect()
}
