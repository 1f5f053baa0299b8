//! Parabolic subgroups `uW_Ju⁻¹` and parabolic closures.
//!
//! The closure of a set `E` splits over the irreducible components of the
//! diagram (project each element by deleting letters). On a component that is
//! affine or compact hyperbolic every proper parabolic is finite, so one
//! element of infinite order already forces the whole component. Otherwise
//! conjugators `u` are searched by length, then ShortLex: the least `J` with
//! `E ⊆ uW_Ju⁻¹` is the union of the supports of `u⁻¹eu`, and the search stops
//! as soon as `|J|` reaches a lower bound on the rank of the closure, namely
//! the dimension spanned by the images of `ρ(e) − 1` and by the essential
//! roots of the elements of infinite order.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::budget::Budget;
use crate::diagram::{self, ComponentKind, DiagramType, GenSet};
use crate::element::{self, candidate_roots, Element, OrderResult, Reflection};
use crate::error::{bail, Error, Result};
use crate::geometry::{self, Nesting, RootVector, WallRelation};
use crate::linalg::{self, Vector};
use crate::system::System;

/// A parabolic subgroup in canonical form.
#[derive(Clone)]
pub struct Parabolic {
    u: Element,
    j: GenSet,
    kind: DiagramType,
    certified: bool,
}

impl PartialEq for Parabolic {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.j == other.j
    }
}
impl Eq for Parabolic {}

impl std::hash::Hash for Parabolic {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.u.hash(state);
        self.j.hash(state);
    }
}

impl fmt::Debug for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Parabolic({self})")
    }
}

impl fmt::Display for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.u.system().matrix().subset_labels(self.j);
        write!(f, "({}, {{{}}})", self.u, labels.join(","))
    }
}

impl Serialize for Parabolic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Parabolic", 4)?;
        st.serialize_field("u", &self.u.to_string())?;
        st.serialize_field("J", &self.u.system().matrix().subset_labels(self.j))?;
        st.serialize_field("type", &self.kind.to_string())?;
        st.serialize_field("minimality_certified", &self.certified)?;
        st.end()
    }
}

impl Parabolic {
    pub fn standard(sys: &System, j: GenSet) -> Result<Parabolic> {
        let kind = diagram::classify_subset(sys.matrix(), j)?;
        Ok(Parabolic { u: Element::identity(sys), j, kind, certified: true })
    }

    pub fn whole(sys: &System) -> Parabolic {
        Parabolic::standard(sys, sys.matrix().all()).expect("full set is valid")
    }

    /// `uW_Ju⁻¹`, brought to canonical form.
    pub fn new(u: &Element, j: GenSet) -> Result<Parabolic> {
        let sys = u.system();
        sys.matrix().check_subset(j)?;
        let gens: Vec<Element> = j.iter().map(|s| Element::generator(sys, s).conjugate(u)).collect::<Result<_>>()?;
        if gens.is_empty() {
            return Parabolic::standard(sys, j);
        }
        let radius = minimal_coset_length(u, j);
        let p =
            closure_search(sys, &gens, &Budget { ball_radius: radius, ball_size: usize::MAX, ..Budget::default() })?;
        if p.j.len() != j.len() {
            bail!(Consistency, "canonical form of ({u}, {j:?}) has rank {}", p.j.len());
        }
        Ok(p)
    }

    pub fn system(&self) -> &System {
        self.u.system()
    }

    pub fn conjugator(&self) -> &Element {
        &self.u
    }

    pub fn generators(&self) -> GenSet {
        self.j
    }

    pub fn kind(&self) -> &DiagramType {
        &self.kind
    }

    pub fn rank(&self) -> usize {
        self.j.len()
    }

    /// False when the closure search ran out of budget before proving minimality.
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn is_whole(&self) -> bool {
        self.j == self.system().matrix().all()
    }

    /// `w ∈ uW_Ju⁻¹` iff the normal form of `u⁻¹wu` only uses letters of `J`.
    pub fn contains(&self, w: &Element) -> Result<bool> {
        Ok(w.conjugate(&self.u.inverse())?.support().is_subset(self.j))
    }

    /// Whether the reflection in `β` lies in the subgroup.
    pub fn contains_root(&self, beta: &RootVector) -> bool {
        let sys = self.system();
        let v = sys.apply_inverse_word(self.u.word(), &beta.0);
        RootVector(v).support().is_subset(self.j)
    }

    /// The reflections `usu⁻¹`, `s ∈ J`.
    pub fn reflections(&self) -> Vec<Element> {
        self.j.iter().map(|s| Element::generator(self.system(), s).conjugate(&self.u).expect("same system")).collect()
    }

    pub fn is_subgroup_of(&self, other: &Parabolic) -> Result<bool> {
        for r in self.reflections() {
            if !other.contains(&r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality decided by two-sided generator membership.
    pub fn same_subgroup(&self, other: &Parabolic) -> Result<bool> {
        Ok(self.rank() == other.rank() && self.is_subgroup_of(other)?)
    }

    /// `u W_{J_ess} u⁻¹`, the union of the non-spherical components.
    pub fn essential_core(&self) -> Result<Parabolic> {
        let core = diagram::essential_core(self.system().matrix(), self.j)?;
        Parabolic::new(&self.u, core)
    }

    /// Irreducible components as parabolics.
    pub fn components(&self) -> Result<Vec<Parabolic>> {
        diagram::irreducible_components(self.system().matrix(), self.j)?
            .into_iter()
            .map(|c| Parabolic::new(&self.u, c))
            .collect()
    }

    /// `w P w⁻¹`.
    pub fn conjugate(&self, w: &Element) -> Result<Parabolic> {
        Parabolic::new(&w.mul(&self.u)?, self.j)
    }
}

fn minimal_coset_length(u: &Element, j: GenSet) -> usize {
    // Strip right descents in J.
    let sys = u.system();
    let mut cur = u.clone();
    loop {
        let next = j.iter().map(|s| cur.mul_unchecked(&Element::generator(sys, s))).find(|v| v.len() < cur.len());
        match next {
            Some(v) => cur = v,
            None => return cur.len(),
        }
    }
}

/// The image of `w` in the factor `W_K`, for `K` a union of components.
pub fn project(w: &Element, k: GenSet) -> Element {
    let letters: Vec<u8> = w.word().iter().copied().filter(|&s| k.contains(s as usize)).collect();
    Element::from_letters(w.system(), &letters).expect("valid letters")
}

/// Exact finiteness of the order, through W₀ when available.
pub fn has_infinite_order(w: &Element, budget: &Budget) -> Result<bool> {
    match element::is_finite_order(w) {
        Ok(o) => Ok(o.is_none()),
        Err(Error::Budget(_)) => match element::order_of(w, budget.power_cap.max(1), budget.root_depth.max(1))? {
            OrderResult::Finite { .. } => Ok(false),
            OrderResult::Infinite { .. } => Ok(true),
            OrderResult::Unknown { reason } => Err(Error::Budget(reason)),
        },
        Err(e) => Err(e),
    }
}

fn few_open(kind: &ComponentKind) -> bool {
    matches!(kind, ComponentKind::Affine(_) | ComponentKind::CompactHyperbolic)
}

fn conjugate_support(sys: &System, u: &[u8], e: &Element) -> GenSet {
    let mut letters: Vec<u8> = u.iter().rev().copied().collect();
    letters.extend_from_slice(e.word());
    letters.extend_from_slice(u);
    GenSet::from_indices(sys.reduce(&letters).into_iter().map(usize::from))
}

/// Lower bound for the rank of the closure of `elems` inside one component.
fn rank_lower_bound(sys: &System, elems: &[Element], budget: &Budget) -> Result<usize> {
    let f = sys.field();
    let mut vectors: Vec<Vector> = Vec::new();
    for e in elems {
        vectors.extend(e.matrix().minus_identity_columns(f));
        if has_infinite_order(e, budget)? {
            vectors.extend(essential_walls(e, budget)?.into_iter().map(|r| r.root.0));
        }
    }
    Ok(linalg::rank(&vectors, f))
}

/// Outcome of the conjugator search on one component.
struct ComponentClosure {
    u: Vec<u8>,
    j: GenSet,
    certified: bool,
}

fn search_component(sys: &System, k: GenSet, elems: &[Element], budget: &Budget) -> Result<ComponentClosure> {
    let lower = rank_lower_bound(sys, elems, budget)?;
    if lower >= k.len() {
        return Ok(ComponentClosure { u: Vec::new(), j: k, certified: true });
    }
    let test = |u: &[u8]| elems.iter().fold(GenSet::EMPTY, |acc, e| acc.union(conjugate_support(sys, u, e)));
    let mut best = ComponentClosure { u: Vec::new(), j: test(&[]), certified: false };
    if best.j.len() <= lower {
        best.certified = true;
        return Ok(best);
    }
    let max_len = elems.iter().map(Element::len).max().unwrap_or(0);
    let radius = budget.ball_radius.max(2 * max_len + 4);
    let mut seen: HashSet<Vec<u8>> = HashSet::from([Vec::new()]);
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    let mut visited = 1usize;
    for len in 1..=radius {
        let mut next: Vec<Vec<u8>> = Vec::new();
        for w in &layer {
            for s in k.iter() {
                let mut c = w.clone();
                c.push(s as u8);
                let nf = sys.reduce(&c);
                if nf.len() == len && seen.insert(nf.clone()) {
                    next.push(nf);
                }
            }
        }
        if next.is_empty() {
            // The component is finite and every conjugator was tried.
            best.certified = true;
            return Ok(best);
        }
        next.sort();
        for u in &next {
            visited += 1;
            if visited > budget.ball_size {
                return Ok(best);
            }
            let j = test(u);
            if j.len() < best.j.len() {
                best = ComponentClosure { u: u.clone(), j, certified: false };
                if best.j.len() <= lower {
                    best.certified = true;
                    return Ok(best);
                }
            }
        }
        layer = next;
    }
    Ok(best)
}

/// Largest order of a finite standard parabolic subgroup of `W_K`; every
/// finite subgroup of `W_K` is conjugate into one of them.
fn max_finite_order(sys: &System, k: GenSet) -> Result<usize> {
    let m = sys.matrix();
    let mut best = 1;
    for j in k.subsets() {
        if !j.is_empty()
            && diagram::is_spherical(m, j)
            && k.iter().all(|s| j.contains(s) || !diagram::is_spherical(m, j.with(s)))
        {
            best = best.max(crate::element::congruence::finite_order(sys, j)?);
        }
    }
    Ok(best)
}

/// Whether `elems` generate an infinite subgroup of the component `W_K`.
fn generates_infinite(sys: &System, k: GenSet, elems: &[Element], budget: &Budget) -> Result<bool> {
    for e in elems {
        if has_infinite_order(e, budget)? {
            return Ok(true);
        }
    }
    let bound = max_finite_order(sys, k)?;
    let mut seen: HashSet<Element> = HashSet::from([Element::identity(sys)]);
    let mut frontier = vec![Element::identity(sys)];
    while let Some(g) = frontier.pop() {
        for e in elems {
            let h = g.mul_unchecked(e);
            if seen.insert(h.clone()) {
                if seen.len() > bound {
                    return Ok(true);
                }
                frontier.push(h);
            }
        }
    }
    Ok(false)
}

fn closure_search(sys: &System, elems: &[Element], budget: &Budget) -> Result<Parabolic> {
    let m = sys.matrix();
    let mut u: Vec<u8> = Vec::new();
    let mut j = GenSet::EMPTY;
    let mut certified = true;
    for comp in diagram::irreducible_components(m, m.all())? {
        let proj: Vec<Element> = elems.iter().map(|e| project(e, comp)).filter(|e| !e.is_identity()).collect();
        if proj.is_empty() {
            continue;
        }
        let kind = &diagram::classify_subset(m, comp)?.components[0].kind;
        if few_open(kind) && generates_infinite(sys, comp, &proj, budget)? {
            j = j.union(comp);
            continue;
        }
        let c = search_component(sys, comp, &proj, budget)?;
        u.extend(c.u);
        j = j.union(c.j);
        certified &= c.certified;
    }
    let kind = diagram::classify_subset(m, j)?;
    Ok(Parabolic { u: Element::from_letters(sys, &u)?, j, kind, certified })
}

/// `Pc(E)`: the least parabolic subgroup containing every element of `gens`.
pub fn pc_of_subgroup(gens: &[Element], budget: &Budget) -> Result<Parabolic> {
    let Some(first) = gens.first() else {
        bail!(Input, "parabolic closure of an empty set");
    };
    let sys = first.system();
    if gens.iter().any(|g| g.system().id() != sys.id()) {
        bail!(Input, "elements from different systems");
    }
    closure_search(sys, gens, budget)
}

pub fn pc_of_element(w: &Element, budget: &Budget) -> Result<Parabolic> {
    pc_of_subgroup(std::slice::from_ref(w), budget)
}

pub fn pc_of_reflections(refs: &[Reflection], budget: &Budget) -> Result<Parabolic> {
    let gens: Vec<Element> = refs.iter().map(|r| r.element.clone()).collect();
    pc_of_subgroup(&gens, budget)
}

/// Walls `∂α` of roots of depth ≤ `root_depth` with a nesting certificate
/// `w^n α ⊊ α`; empty when `w` has finite order.
pub fn essential_walls(w: &Element, budget: &Budget) -> Result<Vec<Reflection>> {
    let sys = w.system();
    let (x, cap) = match sys.congruence() {
        Ok(c) => {
            if element::is_finite_order(w)?.is_some() {
                return Ok(Vec::new());
            }
            (w.pow(c.image_order_of(w.word()) as i64), 1)
        }
        Err(Error::Budget(_)) => (w.clone(), budget.power_cap),
        Err(e) => return Err(e),
    };
    let mut out = Vec::new();
    for root in candidate_roots(w, budget.power_cap, budget.root_depth) {
        if element::nesting_certificate(&x, &root, cap)?.is_some() {
            out.push(Reflection::from_root(sys, &root));
        }
    }
    Ok(out)
}

/// `N(P) = u(W_J × W_{J⊥})u⁻¹` for `P = uW_Ju⁻¹` of essential type.
pub fn normalizer_of(p: &Parabolic) -> Result<Parabolic> {
    if !p.kind.is_essential {
        bail!(Precondition, "normalizer formula needs an essential type, got {}", p.kind);
    }
    let perp = diagram::perp(p.system().matrix(), p.j)?;
    Parabolic::new(&p.u, p.j.union(perp))
}

/// For `P₁ ⊆ P₂`: finite index iff the essential cores coincide.
pub fn finite_index_in(p1: &Parabolic, p2: &Parabolic) -> Result<bool> {
    if !p1.is_subgroup_of(p2)? {
        bail!(Precondition, "{p1} is not contained in {p2}");
    }
    p1.essential_core()?.same_subgroup(&p2.essential_core()?)
}

/// Candidate for the element of `H` with the largest closure.
#[derive(Clone, Debug, Serialize)]
pub struct DominantElement {
    pub element: Element,
    pub closure: Parabolic,
    /// Number of candidates compared.
    pub candidates: usize,
}

/// Least `k ≥ 1` with `w^k ∈ W₀`, and `w^k`.
pub fn power_into_w0(w: &Element, budget: &Budget) -> Result<Element> {
    match element::power_into_w0(w) {
        Ok((_, x)) => Ok(x),
        Err(Error::Budget(_)) => {
            let k = budget.power_cap.max(1);
            Ok(w.pow(k as i64))
        }
        Err(e) => Err(e),
    }
}

/// Searches words of length ≤ 3 in `gens` and their inverses, and products
/// `g^m h^n` of two of them, all pushed into W₀, for the one whose closure
/// has the largest rank (first found wins ties).
pub fn dominant_cyclic_element(gens: &[Element], budget: &Budget) -> Result<DominantElement> {
    let Some(first) = gens.first() else {
        bail!(Input, "empty generating set");
    };
    let sys = first.system();
    let mut letters: Vec<Element> = Vec::new();
    for g in gens {
        letters.push(g.clone());
        letters.push(g.inverse());
    }
    let mut words: Vec<Element> = letters.clone();
    for a in &letters {
        for b in &letters {
            words.push(a.mul(b)?);
            for c in &letters {
                words.push(a.mul(b)?.mul_unchecked(c));
            }
        }
    }
    let pushed: Vec<Element> = gens.iter().map(|g| power_into_w0(g, budget)).collect::<Result<_>>()?;
    for (i, g) in pushed.iter().enumerate() {
        for h in &pushed[i + 1..] {
            for (m, n) in [(1i64, 1i64), (2, 1), (1, 2), (3, 1), (1, 3), (1, -1), (2, -1), (1, -2)] {
                words.push(g.pow(m).mul_unchecked(&h.pow(n)));
            }
        }
    }
    let mut seen = HashSet::new();
    let mut best: Option<(Element, Parabolic)> = None;
    let mut count = 0;
    for w in words {
        let x = power_into_w0(&w, budget)?;
        if !seen.insert(x.clone()) {
            continue;
        }
        count += 1;
        let p = pc_of_element(&x, budget)?;
        if best.as_ref().is_none_or(|(_, q)| p.rank() > q.rank()) {
            best = Some((x, p));
        }
    }
    let (element, closure) =
        best.unwrap_or_else(|| (Element::identity(sys), Parabolic::standard(sys, GenSet::EMPTY).unwrap()));
    Ok(DominantElement { element, closure, candidates: count })
}

/// Relation between two orbit classes of essential walls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairCase {
    /// Same component; each wall meets finitely many walls of the other class.
    FiniteMeetings,
    /// Same component, which is irreducible affine.
    Affine,
    /// Distinct components; their union generates their direct product.
    Product,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitClass {
    pub representative: Reflection,
    pub walls: Vec<Reflection>,
    /// The orbit leaves the depth window on both sides.
    pub truncated: bool,
    pub closure: Parabolic,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRelation {
    pub i: usize,
    pub j: usize,
    pub case: PairCase,
    /// Walls of class `j` (over the sampled orbit segment) meeting the
    /// representative of class `i`, and whether the outermost ones do.
    pub meetings: usize,
    pub meets_at_extremes: bool,
    /// The defining property of the case was checked and holds.
    pub checked: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WallOrbitPartition {
    pub element: Element,
    pub exponent: u64,
    pub closure: Parabolic,
    pub classes: Vec<OrbitClass>,
    pub pairs: Vec<PairRelation>,
}

fn root_key(sys: &System, r: &RootVector) -> (usize, Vec<Vec<crate::int::Int>>) {
    (geometry::depth(sys, r), r.0.iter().map(|x| x.coeffs().to_vec()).collect())
}

/// Orbit of a wall under `x` walked in both directions while its depth stays
/// within `window` (at most `steps` each way). The flag records that the
/// walk left the window on both sides.
fn orbit_segment(x: &Element, root: &RootVector, window: usize, steps: usize) -> (Vec<RootVector>, bool) {
    let sys = x.system();
    let mut out = vec![root.positive(sys)];
    let mut truncated = true;
    for g in [x.clone(), x.inverse()] {
        let mut cur = root.clone();
        let mut left = false;
        for _ in 0..steps {
            cur = geometry::act_on_root(&g, &cur).positive(sys);
            if geometry::depth(sys, &cur) > window {
                left = true;
                break;
            }
            out.push(cur.clone());
        }
        truncated &= left;
    }
    (out, truncated)
}

/// `Pc` of the reflections in the walls `x^j m`, `|j| ≤ n`, for growing `n`
/// until the rank stops increasing; at that point the closure is normalized
/// by `x` and so contains the whole orbit.
fn orbit_closure(x: &Element, root: &RootVector, budget: &Budget) -> Result<Parabolic> {
    let sys = x.system();
    let mut refs = vec![Reflection::from_root(sys, root)];
    let (mut fwd, mut back) = (root.clone(), root.clone());
    let xi = x.inverse();
    let mut prev = pc_of_reflections(&refs, budget)?;
    for _ in 0..=sys.rank() {
        fwd = geometry::act_on_root(x, &fwd);
        back = geometry::act_on_root(&xi, &back);
        refs.push(Reflection::from_root(sys, &fwd));
        refs.push(Reflection::from_root(sys, &back));
        let next = pc_of_reflections(&refs, budget)?;
        if next.rank() == prev.rank() {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

/// Splits the essential walls of `w` into `⟨w^k⟩`-orbits, `w^k ∈ W₀`, and
/// labels each pair of classes.
pub fn orbit_components(w: &Element, budget: &Budget) -> Result<WallOrbitPartition> {
    let sys = w.system();
    if !has_infinite_order(w, budget)? {
        bail!(Precondition, "{w} has finite order");
    }
    let exponent = sys.congruence()?.image_order_of(w.word());
    let x = w.pow(exponent as i64);
    let closure = pc_of_element(w, budget)?;
    let window = budget.window_depth.min(budget.root_depth);
    let walls = essential_walls(w, budget)?;
    let steps = budget.power_cap as usize;
    // Orbit walks may pass through deeper walls between two shallow ones.
    let walk_window = 3 * window;
    let mut groups: Vec<(HashSet<RootVector>, RootVector, Vec<Reflection>, bool)> = Vec::new();
    for wall in walls.into_iter().filter(|r| geometry::depth(sys, &r.root) <= window) {
        let key = wall.root.positive(sys);
        if let Some(g) = groups.iter_mut().find(|g| g.0.contains(&key)) {
            g.2.push(wall);
            continue;
        }
        let (segment, truncated) = orbit_segment(&x, &wall.root, walk_window, steps);
        let rep = segment.iter().min_by_key(|r| root_key(sys, r)).expect("nonempty").clone();
        groups.push((segment.into_iter().collect(), rep, vec![wall], truncated));
    }
    groups.sort_by_key(|g| root_key(sys, &g.1));
    let mut classes = Vec::new();
    for (_, rep, walls, truncated) in groups {
        let closure = orbit_closure(&x, &rep, budget)?;
        classes.push(OrbitClass { representative: Reflection::from_root(sys, &rep), walls, truncated, closure });
    }
    let mut pairs = Vec::new();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            pairs.push(classify_pair(&x, &classes, i, j, budget)?);
        }
    }
    Ok(WallOrbitPartition { element: w.clone(), exponent, closure, classes, pairs })
}

const PAIR_STEPS: i64 = 8;

fn classify_pair(x: &Element, classes: &[OrbitClass], i: usize, j: usize, budget: &Budget) -> Result<PairRelation> {
    let sys = x.system();
    let (a, b) = (&classes[i], &classes[j]);
    if a.closure != b.closure {
        // Commuting generators and additive rank make the join a direct product.
        let mut commute = true;
        for r in a.closure.reflections() {
            for s in b.closure.reflections() {
                commute &= r.commutes_with(&s)?;
            }
        }
        let mut all: Vec<Element> = a.closure.reflections();
        all.extend(b.closure.reflections());
        let join = pc_of_subgroup(&all, budget)?;
        let checked = commute && join.rank() == a.closure.rank() + b.closure.rank();
        return Ok(PairRelation { i, j, case: PairCase::Product, meetings: 0, meets_at_extremes: false, checked });
    }
    let m = &a.representative.root;
    let mut meetings = 0;
    let mut extremes = false;
    let xi = x.inverse();
    let mut images = vec![(0, b.representative.root.clone())];
    let (mut fwd, mut back) = (b.representative.root.clone(), b.representative.root.clone());
    for n in 1..=PAIR_STEPS {
        fwd = geometry::act_on_root(x, &fwd);
        back = geometry::act_on_root(&xi, &back);
        images.push((n, fwd.clone()));
        images.push((-n, back.clone()));
    }
    for (n, image) in images {
        let rel = geometry::wall_relation_by_form(sys, m, &image);
        if matches!(rel, WallRelation::Transverse | WallRelation::Perpendicular) {
            meetings += 1;
            if n.abs() == PAIR_STEPS {
                extremes = true;
            }
        }
    }
    if extremes {
        let checked = a.closure.kind().is_irreducible_affine();
        Ok(PairRelation { i, j, case: PairCase::Affine, meetings, meets_at_extremes: true, checked })
    } else {
        Ok(PairRelation { i, j, case: PairCase::FiniteMeetings, meetings, meets_at_extremes: false, checked: true })
    }
}

/// Ã₂-style check: does `w` fix the half-space `α` up to nesting?
pub fn is_essential_root(w: &Element, root: &RootVector, budget: &Budget) -> Result<bool> {
    Ok(element::nesting_certificate(w, root, budget.power_cap)?.is_some())
}

/// Nesting relation of a root with its image under `w`.
pub fn nesting_under(w: &Element, root: &RootVector) -> Result<Nesting> {
    geometry::nesting_relation(w.system(), &geometry::act_on_root(w, root), root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::CoxeterMatrix;
    use crate::system::CoxeterSystem;

    fn sys(edges: &[(usize, usize, u32)], rank: usize) -> System {
        CoxeterSystem::new("test", CoxeterMatrix::from_edges(rank, edges).unwrap())
    }

    fn el(s: &System, w: &str) -> Element {
        Element::parse(s, w).unwrap()
    }

    fn refl(s: &System, w: &str) -> Reflection {
        Reflection::from_element(&el(s, w)).unwrap()
    }

    #[test]
    fn closures_of_reflections() {
        let b = Budget::default();
        let dinf = sys(&[(0, 1, 0)], 2);
        let p = pc_of_reflections(&[refl(&dinf, "s")], &b).unwrap();
        assert_eq!(p.to_string(), "(ε, {s})");
        assert!(pc_of_reflections(&[refl(&dinf, "s"), refl(&dinf, "t s t")], &b).unwrap().is_whole());
        let a1x3 = sys(&[], 3);
        let p = pc_of_reflections(&[refl(&a1x3, "s"), refl(&a1x3, "t")], &b).unwrap();
        assert_eq!(p.to_string(), "(ε, {s,t})");
        let a2 = sys(&[(0, 1, 3)], 2);
        let p = pc_of_reflections(&[refl(&a2, "s t s")], &b).unwrap();
        assert_eq!(p.to_string(), "(s, {t})");
        assert!(p.is_certified());
        assert!(p.contains(&el(&a2, "s t s")).unwrap());
        assert!(!p.contains(&el(&a2, "s")).unwrap());
    }

    #[test]
    fn closures_of_elements() {
        let b = Budget::default();
        let dinf = sys(&[(0, 1, 0)], 2);
        assert!(pc_of_element(&el(&dinf, "s t"), &b).unwrap().is_whole());
        assert_eq!(pc_of_element(&el(&dinf, "s"), &b).unwrap().to_string(), "(ε, {s})");
        let a1x3 = sys(&[], 3);
        assert!(pc_of_subgroup(&[el(&a1x3, "s t"), el(&a1x3, "t u")], &b).unwrap().is_whole());
        assert_eq!(pc_of_element(&el(&a1x3, "s t"), &b).unwrap().rank(), 2);
        let at2 = sys(&[(0, 1, 3), (1, 2, 3), (0, 2, 3)], 3);
        assert_eq!(pc_of_element(&el(&at2, "s t"), &b).unwrap().to_string(), "(ε, {s,t})");
        assert!(pc_of_element(&el(&at2, "s t u"), &b).unwrap().is_whole());
        assert_eq!(pc_of_element(&el(&at2, "s t s u s t s"), &b).unwrap().rank(), 1);
    }

    #[test]
    fn essential_walls_of_translations() {
        let b = Budget { root_depth: 6, ..Budget::default() };
        let dinf = sys(&[(0, 1, 0)], 2);
        let walls = essential_walls(&el(&dinf, "s t"), &b).unwrap();
        assert_eq!(walls.len(), 12);
        assert!(essential_walls(&el(&dinf, "s"), &b).unwrap().is_empty());
        let at2 = sys(&[(0, 1, 3), (1, 2, 3), (0, 2, 3)], 3);
        assert!(essential_walls(&el(&at2, "s t"), &b).unwrap().is_empty());
    }

    #[test]
    fn normalizers_and_indices() {
        let dinf_a1 = sys(&[(0, 1, 0)], 3);
        let p = Parabolic::standard(&dinf_a1, GenSet::from_indices([0, 1])).unwrap();
        assert!(normalizer_of(&p).unwrap().is_whole());
        assert!(finite_index_in(&p, &Parabolic::whole(&dinf_a1)).unwrap());
        let dinf = sys(&[(0, 1, 0)], 2);
        let s = Parabolic::standard(&dinf, GenSet::singleton(0)).unwrap();
        assert!(!finite_index_in(&s, &Parabolic::whole(&dinf)).unwrap());
        assert!(normalizer_of(&s).is_err());
        assert!(finite_index_in(&Parabolic::whole(&dinf), &s).is_err());
    }

    #[test]
    fn canonical_forms_agree() {
        let a2 = sys(&[(0, 1, 3)], 2);
        let p = Parabolic::new(&el(&a2, "t"), GenSet::singleton(0)).unwrap();
        let q = Parabolic::new(&el(&a2, "s"), GenSet::singleton(1)).unwrap();
        assert_eq!(p, q);
        let dinf = sys(&[(0, 1, 0)], 2);
        let p = Parabolic::new(&el(&dinf, "t s t s t"), GenSet::singleton(1)).unwrap();
        assert_eq!(p.to_string(), "(t s t s, {t})");
    }

    #[test]
    fn orbit_partition_on_the_line() {
        let b = Budget { root_depth: 10, window_depth: 10, ..Budget::default() };
        let dinf = sys(&[(0, 1, 0)], 2);
        let part = orbit_components(&el(&dinf, "s t"), &b).unwrap();
        assert_eq!(part.exponent, 3);
        assert_eq!(part.classes.len(), 6);
        assert!(part.classes.iter().all(|c| c.closure.is_whole()));
        assert!(part.pairs.iter().all(|p| p.case == PairCase::FiniteMeetings && p.checked));
        let dinf_a1 = sys(&[(0, 1, 0)], 3);
        let part = orbit_components(&el(&dinf_a1, "s t"), &b).unwrap();
        assert!(part.classes.iter().all(|c| c.closure.generators() == GenSet::from_indices([0, 1])));
    }
}
