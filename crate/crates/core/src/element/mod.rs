//! Group elements in ShortLex normal form, inversion sets, orders and the
//! torsion-free congruence subgroup W₀.

pub mod automaton;
pub mod congruence;
pub mod tits;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::Serialize;

use crate::diagram::GenSet;
use crate::error::{bail, Result};
use crate::geometry::{self, Nesting, RootVector};
use crate::linalg::{Mat, Vector};
use crate::system::{CoxeterSystem, System};

/// A group element, stored as its ShortLex normal form.
#[derive(Clone)]
pub struct Element {
    sys: System,
    word: Vec<u8>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.sys.id() == other.sys.id() && self.word == other.word
    }
}
impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.word.hash(state)
    }
}

/// ShortLex: by length, then lexicographically.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.word.len(), &self.word).cmp(&(other.word.len(), &other.word))
    }
}
impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({:?})", self.to_string())
    }
}

/// Normal form as space-separated labels; the identity prints as `ε`.
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{}", self.sys.matrix().format_word(&self.word))
        }
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.sys.matrix().format_word(&self.word))
    }
}

impl Element {
    pub fn identity(sys: &System) -> Element {
        Element { sys: sys.clone(), word: Vec::new() }
    }

    pub fn generator(sys: &System, s: usize) -> Element {
        Element { sys: sys.clone(), word: vec![s as u8] }
    }

    /// Normal form of an arbitrary product of generators.
    pub fn from_letters(sys: &System, letters: &[u8]) -> Result<Element> {
        sys.validate_word(letters)?;
        Ok(Element { sys: sys.clone(), word: sys.reduce(letters) })
    }

    /// Parses whitespace-separated labels; `ε` or an empty string is the identity.
    pub fn parse(sys: &System, text: &str) -> Result<Element> {
        let text = text.trim();
        if text == "ε" || text == "e" && sys.matrix().label_index("e").is_none() {
            return Ok(Element::identity(sys));
        }
        let letters = sys.matrix().parse_word(text)?;
        Element::from_letters(sys, &letters)
    }

    pub(crate) fn from_reduced(sys: &System, word: Vec<u8>) -> Element {
        debug_assert_eq!(sys.reduce(&word), word);
        Element { sys: sys.clone(), word }
    }

    pub fn system(&self) -> &System {
        &self.sys
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// Coxeter length.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    /// Generators occurring in the normal form; equal to the support of
    /// every reduced expression.
    pub fn support(&self) -> GenSet {
        GenSet::from_indices(self.word.iter().map(|&s| s as usize))
    }

    fn same_system(&self, other: &Element) -> Result<()> {
        if self.sys.id() != other.sys.id() {
            bail!(Input, "elements belong to different systems ({} vs {})", self.sys.name(), other.sys.name());
        }
        Ok(())
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.same_system(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Element) -> Element {
        let mut w = self.word.clone();
        w.extend_from_slice(&other.word);
        Element { sys: self.sys.clone(), word: self.sys.reduce(&w) }
    }

    pub fn inverse(&self) -> Element {
        let w: Vec<u8> = self.word.iter().rev().copied().collect();
        Element { sys: self.sys.clone(), word: self.sys.reduce(&w) }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Element {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Vec::with_capacity(base.word.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            w.extend_from_slice(&base.word);
        }
        Element { sys: self.sys.clone(), word: self.sys.reduce(&w) }
    }

    /// `u · self · u⁻¹`.
    pub fn conjugate(&self, u: &Element) -> Result<Element> {
        self.same_system(u)?;
        let mut w = u.word.clone();
        w.extend_from_slice(&self.word);
        w.extend(u.word.iter().rev());
        Ok(Element { sys: self.sys.clone(), word: self.sys.reduce(&w) })
    }

    pub fn commutes_with(&self, other: &Element) -> Result<bool> {
        Ok(self.mul(other)? == other.mul_unchecked(self))
    }

    pub fn matrix(&self) -> Mat {
        self.sys.word_matrix(&self.word)
    }

    pub fn act(&self, v: &[crate::field::Num]) -> Vector {
        self.sys.apply_word(&self.word, v)
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.mul_unchecked(self).is_identity()
    }

    /// True when `self` is a reflection (a conjugate of a generator).
    pub fn is_reflection(&self) -> bool {
        self.word.len() % 2 == 1 && self.is_involution()
    }
}

/// A reflection with its positive root.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Reflection {
    pub element: Element,
    #[serde(skip)]
    pub root: RootVector,
}

/// Outcome of an order computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderResult {
    Finite {
        order: u64,
    },
    /// `w^exponent · root ⊊ root`.
    Infinite {
        root: RootVector,
        exponent: u64,
    },
    Unknown {
        reason: String,
    },
}

/// Walls separating `C₀` from `wC₀`, one reflection per letter of the
/// normal form `s₁⋯s_n`: the roots `s₁⋯s_{i−1} α_{s_i}`.
pub fn inversion_roots(w: &Element) -> Vec<RootVector> {
    let sys = w.system();
    (0..w.len()).map(|i| RootVector(sys.apply_word(&w.word[..i], &sys.simple_root(w.word[i] as usize)))).collect()
}

pub fn inversion_set(w: &Element) -> Vec<Reflection> {
    let sys = w.system();
    (0..w.len())
        .map(|i| {
            let prefix = &w.word[..i];
            let mut letters = prefix.to_vec();
            letters.push(w.word[i]);
            letters.extend(prefix.iter().rev());
            let root = RootVector(sys.apply_word(prefix, &sys.simple_root(w.word[i] as usize)));
            Reflection { element: Element { sys: sys.clone(), word: sys.reduce(&letters) }, root }
        })
        .collect()
}

/// Exponent `k₀` of the congruence image: `w^{k₀} ∈ W₀` for all `w`.
pub fn torsion_exponent(sys: &CoxeterSystem) -> Result<u64> {
    Ok(sys.congruence()?.exponent())
}

pub fn in_torsion_free_subgroup(w: &Element) -> Result<bool> {
    Ok(w.system().congruence()?.in_kernel(w.word()))
}

/// Least `k > 0` with `w^k ∈ W₀`, and `w^k`.
pub fn power_into_w0(w: &Element) -> Result<(u64, Element)> {
    let k = w.system().congruence()?.image_order_of(w.word());
    Ok((k, w.pow(k as i64)))
}

/// Decides finiteness exactly through W₀: `w` has finite order iff
/// `w^k = 1` for the least `k` with `w^k ∈ W₀`.
pub fn is_finite_order(w: &Element) -> Result<Option<u64>> {
    let sys = w.system();
    let cong = sys.congruence()?;
    let k = cong.image_order_of(w.word());
    let m = w.matrix();
    if !m.pow(k, sys.field()).is_identity() {
        return Ok(None);
    }
    let order = (1..=k).find(|d| k % d == 0 && m.pow(*d, sys.field()).is_identity()).expect("k works");
    Ok(Some(order))
}

/// Roots made negative by some power `w^{±j}`, `j ≤ max_power`, of depth at
/// most `depth_cap`, deduplicated and sorted.
pub fn candidate_roots(w: &Element, max_power: u64, depth_cap: usize) -> Vec<RootVector> {
    let sys = w.system();
    let mut out: Vec<RootVector> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for base in [w.clone(), w.inverse()] {
        let mut cur = Element::identity(sys);
        let mut stale = 0;
        for _ in 0..max_power {
            cur = cur.mul_unchecked(&base);
            let mut fresh = false;
            for r in inversion_roots(&cur) {
                if geometry::depth(sys, &r) <= depth_cap && seen.insert(r.clone()) {
                    out.push(r);
                    fresh = true;
                }
            }
            stale = if fresh { 0 } else { stale + 1 };
            if stale >= 4 || cur.is_identity() {
                break;
            }
        }
    }
    geometry::sort_roots(sys, &mut out);
    out
}

/// Least `n ≥ 1`, `n ≤ cap`, and orientation with `w^n α ⊊ α`, if any.
pub fn nesting_certificate(w: &Element, root: &RootVector, cap: u64) -> Result<Option<(RootVector, u64)>> {
    let sys = w.system();
    let mut image = root.clone();
    for n in 1..=cap {
        image = RootVector(w.act(&image.0));
        match geometry::nesting_relation(sys, &image, root)? {
            Nesting::Subset => return Ok(Some((root.clone(), n))),
            Nesting::Superset => return Ok(Some((root.negate(), n))),
            Nesting::Equal => return Ok(None),
            _ => {}
        }
    }
    Ok(None)
}

/// Order of `w`: finite with exact order, infinite with a nesting
/// certificate, or unknown when the certificate search runs out.
pub fn order_of(w: &Element, power_cap: u64, root_depth_cap: usize) -> Result<OrderResult> {
    let sys = w.system();
    let k = match sys.congruence() {
        Ok(c) => Some(c.image_order_of(w.word())),
        Err(crate::Error::Budget(_)) => None,
        Err(e) => return Err(e),
    };
    let m = w.matrix();
    let f = sys.field();
    match k {
        Some(k) => {
            if m.pow(k, f).is_identity() {
                let order = (1..=k).find(|d| k % d == 0 && m.pow(*d, f).is_identity()).expect("k works");
                return Ok(OrderResult::Finite { order });
            }
        }
        None => {
            let mut p = m.clone();
            for j in 1..=power_cap {
                if p.is_identity() {
                    return Ok(OrderResult::Finite { order: j });
                }
                p = p.mul(&m, f);
            }
        }
    }
    let cert_cap = k.unwrap_or(power_cap).min(power_cap.max(1)).max(k.unwrap_or(1).min(power_cap));
    for root in candidate_roots(w, power_cap, root_depth_cap) {
        if let Some((root, exponent)) = nesting_certificate(w, &root, cert_cap)? {
            return Ok(OrderResult::Infinite { root, exponent });
        }
    }
    Ok(OrderResult::Unknown {
        reason: format!("no nesting certificate within depth {root_depth_cap} and power {cert_cap}"),
    })
}

impl Element {
    pub fn system_arc(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }
}
