//! Roots, half-spaces and walls of the geometric representation, and the
//! predicates on them: parallelism, nesting and separation.
//!
//! A signed root doubles as a half-space: the chamber `wC₀` lies in `β` iff
//! `w⁻¹β` is positive. All roots have `B(β, β) = 1`, so `|B(α, β)| < 1`
//! decides whether two walls cross.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::diagram::GenSet;
use crate::element::{inversion_roots, Element, Reflection};
use crate::error::{bail, Result};
use crate::field::Num;
use crate::linalg::{Mat, Vector};
use crate::system::CoxeterSystem;

/// A root in the basis of simple roots.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct RootVector(pub Vector);

/// A signed root, read as the set of chambers on its positive side.
pub type HalfSpace = RootVector;

/// A wall is identified with its reflection; the stored root is positive.
pub type Wall = Reflection;

impl RootVector {
    pub fn simple(sys: &CoxeterSystem, s: usize) -> RootVector {
        RootVector(sys.simple_root(s))
    }

    pub fn coords(&self) -> &[Num] {
        &self.0
    }

    pub fn negate(&self) -> RootVector {
        RootVector(self.0.iter().map(Num::neg).collect())
    }

    pub fn is_positive(&self, sys: &CoxeterSystem) -> bool {
        sys.root_sign(&self.0) > 0
    }

    /// The positive root with the same wall.
    pub fn positive(&self, sys: &CoxeterSystem) -> RootVector {
        if self.is_positive(sys) {
            self.clone()
        } else {
            self.negate()
        }
    }

    /// Generators with a nonzero coordinate.
    pub fn support(&self) -> GenSet {
        GenSet::from_indices(self.0.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i))
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

/// An exact value of the bilinear form, stored doubled so it stays in ℤ[θ].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormValue {
    pub twice: Num,
}

impl fmt::Display for FormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.twice.as_integer() {
            Some(k) if num_integer::Integer::is_even(&k.to_big()) => write!(f, "{}", k.to_big() / 2),
            Some(k) => write!(f, "{k}/2"),
            None => write!(f, "({})/2", self.twice),
        }
    }
}

impl Serialize for FormValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn bilinear(sys: &CoxeterSystem, a: &RootVector, b: &RootVector) -> FormValue {
    FormValue { twice: sys.twice_b(&a.0, &b.0) }
}

pub fn act_on_root(w: &Element, a: &RootVector) -> RootVector {
    RootVector(w.act(&a.0))
}

/// For a positive root `β`, letters `s₁…s_k` and `t` with
/// `β = s₁⋯s_k α_t`, where `k + 1` is the depth of `β`.
pub fn descent(sys: &CoxeterSystem, beta: &RootVector) -> (Vec<u8>, usize) {
    let mut cur = beta.positive(sys).0;
    let mut letters = Vec::new();
    loop {
        let support: Vec<usize> = (0..cur.len()).filter(|&i| !cur[i].is_zero()).collect();
        if support.len() == 1 {
            return (letters, support[0]);
        }
        let s = (0..sys.rank())
            .find(|&s| sys.field().sign(&sys.pair_simple(&cur, s)) > 0)
            .expect("a non-simple positive root has a descent");
        sys.reflect(s, &mut cur);
        letters.push(s as u8);
    }
}

/// Least length of `w` with `w⁻¹β` negative (`β` taken positive); simple roots have depth 1.
pub fn depth(sys: &CoxeterSystem, beta: &RootVector) -> usize {
    descent(sys, beta).0.len() + 1
}

fn cmp_coords(a: &RootVector, b: &RootVector) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0) {
        let o = x.coeffs().cmp(y.coeffs());
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Sorts by depth, then coordinates.
pub fn sort_roots(sys: &CoxeterSystem, roots: &mut [RootVector]) {
    let mut keyed: Vec<(usize, RootVector)> = roots.iter().map(|r| (depth(sys, r), r.clone())).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| cmp_coords(&a.1, &b.1)));
    for (slot, (_, r)) in roots.iter_mut().zip(keyed) {
        *slot = r;
    }
}

/// Normal form of the reflection in `β`.
pub fn reflection_word(sys: &CoxeterSystem, beta: &RootVector) -> Vec<u8> {
    let (v, t) = descent(sys, beta);
    let mut w = v.clone();
    w.push(t as u8);
    w.extend(v.iter().rev());
    sys.reduce(&w)
}

impl Reflection {
    pub fn from_root(sys: &crate::system::System, beta: &RootVector) -> Reflection {
        let root = beta.positive(sys);
        let element = Element::from_letters(sys, &reflection_word(sys, &root)).expect("valid letters");
        Reflection { element, root }
    }

    /// Fails unless `t` is a reflection.
    pub fn from_element(t: &Element) -> Result<Reflection> {
        if !t.is_reflection() {
            bail!(Precondition, "{t} is not a reflection");
        }
        let root = inversion_roots(t)
            .into_iter()
            .find(|r| t.act(&r.0) == r.negate().0)
            .expect("a reflection inverts its own root");
        Ok(Reflection { element: t.clone(), root })
    }

    pub fn generator(sys: &crate::system::System, s: usize) -> Reflection {
        Reflection { element: Element::generator(sys, s), root: RootVector::simple(sys, s) }
    }

    /// `w r w⁻¹`, with root `wβ`.
    pub fn conjugate_by(&self, w: &Element) -> Reflection {
        Reflection::from_root(w.system(), &act_on_root(w, &self.root))
    }
}

/// Chambers adjacent to the wall of `h`: the one inside `h`, then the one outside.
pub fn boundary_chambers(sys: &crate::system::System, h: &HalfSpace) -> (Element, Element) {
    let (v, t) = descent(sys, h);
    let inner = Element::from_letters(sys, &v).expect("valid letters");
    let outer = inner.mul_unchecked(&Element::generator(sys, t));
    if h.is_positive(sys) {
        (inner, outer)
    } else {
        (outer, inner)
    }
}

/// Positive roots of depth at most `max_depth`, sorted by depth.
pub fn enumerate_roots(sys: &CoxeterSystem, max_depth: usize, cap: usize) -> Result<Vec<RootVector>> {
    if max_depth == 0 {
        bail!(Input, "root depth must be at least 1");
    }
    let f = sys.field();
    let mut seen: HashSet<Vector> = HashSet::new();
    let mut out: Vec<RootVector> = Vec::new();
    let mut layer: Vec<Vector> = (0..sys.rank()).map(|s| sys.simple_root(s)).collect();
    for v in &layer {
        seen.insert(v.clone());
    }
    for d in 1..=max_depth {
        let mut sorted: Vec<RootVector> = layer.iter().cloned().map(RootVector).collect();
        sorted.sort_by(cmp_coords);
        out.extend(sorted);
        if out.len() > cap {
            bail!(Budget, "more than {cap} roots of depth ≤ {max_depth}");
        }
        if d == max_depth {
            break;
        }
        let mut next = Vec::new();
        for beta in &layer {
            for s in 0..sys.rank() {
                if f.sign(&sys.pair_simple(beta, s)) < 0 {
                    let mut gamma = beta.clone();
                    sys.reflect(s, &mut gamma);
                    if seen.insert(gamma.clone()) {
                        next.push(gamma);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    Ok(out)
}

/// True iff the chamber `wC₀` lies in `h`.
pub fn chamber_side(w: &Element, h: &HalfSpace) -> bool {
    let sys = w.system();
    sys.root_sign(&sys.apply_inverse_word(w.word(), &h.0)) > 0
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WallRelation {
    Equal,
    /// Distinct walls with commuting reflections.
    Perpendicular,
    Transverse,
    ParallelDistinct,
}

impl WallRelation {
    pub fn is_parallel(self) -> bool {
        matches!(self, WallRelation::Equal | WallRelation::ParallelDistinct)
    }
}

/// Relation of the walls of two roots (orientations ignored).
///
/// Decided by `|B| < 1` and cross-checked against the order of the product
/// of the two reflections, which is finite exactly when the walls meet.
pub fn wall_relation(sys: &CoxeterSystem, a: &RootVector, b: &RootVector) -> Result<WallRelation> {
    let relation = wall_relation_by_form(sys, a, b);
    if relation == WallRelation::Equal {
        return Ok(relation);
    }
    let f = sys.field();
    let (pa, pb) = (a.positive(sys), b.positive(sys));
    let product = sys.reflection_matrix(&pa.0).mul(&sys.reflection_matrix(&pb.0), f);
    let finite = product_order(sys, &pa, &pb, &product)?;
    let consistent = match relation {
        WallRelation::Perpendicular => finite == Some(2),
        WallRelation::Transverse => finite.is_some(),
        _ => finite.is_none(),
    };
    if !consistent {
        bail!(
            Consistency,
            "walls {} and {}: form test gives {relation:?} but the product of reflections has order {finite:?}",
            pa.display(),
            pb.display()
        );
    }
    Ok(relation)
}

/// Relation of the walls from the value of the form alone, without the
/// cross-check of [`wall_relation`]; for scans over many deep roots.
pub fn wall_relation_by_form(sys: &CoxeterSystem, a: &RootVector, b: &RootVector) -> WallRelation {
    let (pa, pb) = (a.positive(sys), b.positive(sys));
    if pa == pb {
        return WallRelation::Equal;
    }
    let f = sys.field();
    let twice = sys.twice_b(&pa.0, &pb.0);
    if twice.is_zero() {
        WallRelation::Perpendicular
    } else if f.sign(&twice.sub(&f.int(2))) < 0 && f.sign(&twice.add(&f.int(2))) > 0 {
        WallRelation::Transverse
    } else {
        WallRelation::ParallelDistinct
    }
}

/// Order of `r_a r_b` when finite.
fn product_order(sys: &CoxeterSystem, a: &RootVector, b: &RootVector, m: &Mat) -> Result<Option<u64>> {
    let f = sys.field();
    match sys.congruence() {
        Ok(c) => {
            let mut word = reflection_word(sys, a);
            word.extend(reflection_word(sys, b));
            let k = c.image_order_of(&word);
            if !m.pow(k, f).is_identity() {
                return Ok(None);
            }
            Ok((1..=k).find(|d| k % d == 0 && m.pow(*d, f).is_identity()))
        }
        Err(crate::Error::Budget(_)) => {
            let mut p = m.clone();
            for j in 1..=120 {
                if p.is_identity() {
                    return Ok(Some(j));
                }
                p = p.mul(m, f);
            }
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Position of one half-space relative to another.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Nesting {
    Equal,
    /// `h′ = −h`.
    Opposite,
    /// `h ⊊ h′`.
    Subset,
    /// `h ⊋ h′`.
    Superset,
    /// Parallel walls with `h ∩ h′ = ∅`.
    DisjointSides,
    /// Parallel walls with `h ∪ h′` everything.
    CoverSides,
    /// The walls meet.
    Crossing,
}

/// For `A(h, h′) ≥ 2`: whether `h ⊊ h′` (else `h′ ⊊ h`), by two
/// independent chamber tests.
fn nested_direction(sys: &crate::system::System, h: &HalfSpace, h2: &HalfSpace) -> Result<bool> {
    let (c, _) = boundary_chambers(sys, h);
    let (c2, _) = boundary_chambers(sys, h2);
    let subset = chamber_side(&c, h2);
    let superset = chamber_side(&c2, h);
    if subset == superset {
        bail!(
            Consistency,
            "half-spaces {} and {} have |B| ≥ 1 but chamber tests disagree on nesting",
            h.display(),
            h2.display()
        );
    }
    Ok(subset)
}

pub fn nesting_relation(sys: &crate::system::System, h: &HalfSpace, h2: &HalfSpace) -> Result<Nesting> {
    if h == h2 {
        return Ok(Nesting::Equal);
    }
    let neg = h2.negate();
    if *h == neg {
        return Ok(Nesting::Opposite);
    }
    let f = sys.field();
    let twice = sys.twice_b(&h.0, &h2.0);
    if f.sign(&twice.sub(&f.int(2))) >= 0 {
        Ok(if nested_direction(sys, h, h2)? { Nesting::Subset } else { Nesting::Superset })
    } else if f.sign(&twice.add(&f.int(2))) <= 0 {
        Ok(if nested_direction(sys, h, &neg)? { Nesting::DisjointSides } else { Nesting::CoverSides })
    } else {
        Ok(Nesting::Crossing)
    }
}

/// Orients two parallel distinct walls as half-spaces `α ⊊ β`.
pub fn orient_nested(sys: &crate::system::System, a: &RootVector, b: &RootVector) -> Result<(HalfSpace, HalfSpace)> {
    let (a, b) = (a.positive(sys), b.positive(sys));
    Ok(match nesting_relation(sys, &a, &b)? {
        Nesting::Subset => (a, b),
        Nesting::Superset => (b, a),
        Nesting::DisjointSides => (a, b.negate()),
        Nesting::CoverSides => (b.negate(), a),
        other => bail!(Precondition, "walls are not parallel and distinct ({other:?})"),
    })
}

/// Number of walls strictly between two parallel walls.
///
/// With `α ⊊ β`, counts the walls separating the chamber just outside `α`
/// from the chamber just inside `β` whose half-space `γ` containing the
/// former satisfies `α ⊊ γ ⊊ β`.
pub fn wall_separation(sys: &crate::system::System, a: &RootVector, b: &RootVector) -> Result<usize> {
    match wall_relation(sys, a, b)? {
        WallRelation::Equal => return Ok(0),
        WallRelation::ParallelDistinct => {}
        other => bail!(Precondition, "wall separation needs parallel walls, got {other:?}"),
    }
    let (alpha, beta) = orient_nested(sys, a, b)?;
    let (_, c) = boundary_chambers(sys, &alpha);
    let (c2, _) = boundary_chambers(sys, &beta);
    let g = c.inverse().mul_unchecked(&c2);
    let mut count = 0;
    for rho in inversion_roots(&g) {
        let gamma = act_on_root(&c, &rho);
        if nesting_relation(sys, &alpha, &gamma)? == Nesting::Subset
            && nesting_relation(sys, &gamma, &beta)? == Nesting::Subset
        {
            count += 1;
        }
    }
    Ok(count)
}

/// Breadth-first list of positive roots reachable from `start` by simple
/// reflections within depth `max_depth`; used for local searches.
pub fn roots_near(sys: &CoxeterSystem, start: &RootVector, radius: usize) -> Vec<RootVector> {
    let mut seen: HashSet<Vector> = HashSet::new();
    let first = start.positive(sys);
    seen.insert(first.0.clone());
    let mut queue = VecDeque::from([(first, 0usize)]);
    let mut out = Vec::new();
    while let Some((r, d)) = queue.pop_front() {
        out.push(r.clone());
        if d == radius {
            continue;
        }
        for s in 0..sys.rank() {
            let mut v = r.0.clone();
            sys.reflect(s, &mut v);
            let v = RootVector(v).positive(sys);
            if seen.insert(v.0.clone()) {
                queue.push_back((v, d + 1));
            }
        }
    }
    out
}
