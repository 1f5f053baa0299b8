//! Coxeter matrices, generator subsets and diagram classification.

mod catalogue;
pub mod gram;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{bail, Error, Result};
use crate::verdict::Verdict;

pub use catalogue::{affine_catalogue, spherical_catalogue, CatalogueEntry};

/// Largest rank supported by the bitmask representation of subsets.
pub const MAX_RANK: usize = 32;

/// A Coxeter matrix. Labels are stored with `0` standing for ∞, matching
/// the JSON wire format.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct CoxeterMatrix {
    labels: Vec<String>,
    m: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    rank: usize,
    labels: Vec<String>,
    m: Vec<Vec<u32>>,
}

impl TryFrom<RawMatrix> for CoxeterMatrix {
    type Error = Error;
    fn try_from(raw: RawMatrix) -> Result<Self> {
        if raw.labels.len() != raw.rank {
            bail!(Input, "rank {} but {} labels", raw.rank, raw.labels.len());
        }
        CoxeterMatrix::new(raw.labels, raw.m)
    }
}

impl From<CoxeterMatrix> for RawMatrix {
    fn from(c: CoxeterMatrix) -> Self {
        RawMatrix { rank: c.rank(), labels: c.labels, m: c.m }
    }
}

impl fmt::Debug for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterMatrix({:?}, {:?})", self.labels, self.m)
    }
}

impl CoxeterMatrix {
    pub fn new(labels: Vec<String>, m: Vec<Vec<u32>>) -> Result<CoxeterMatrix> {
        let n = labels.len();
        if n == 0 {
            bail!(Input, "a Coxeter matrix needs at least one generator");
        }
        if n > MAX_RANK {
            bail!(Input, "rank {n} exceeds the supported maximum {MAX_RANK}");
        }
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            bail!(Input, "matrix must be {n}×{n}");
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                bail!(Input, "generator label {l:?} must be non-empty without whitespace");
            }
            if labels[..i].contains(l) {
                bail!(Input, "duplicate generator label {l:?}");
            }
        }
        for i in 0..n {
            if m[i][i] != 1 {
                bail!(Input, "diagonal entry m({0},{0}) must be 1", labels[i]);
            }
            for j in 0..n {
                if m[i][j] != m[j][i] {
                    bail!(Input, "matrix is not symmetric at ({}, {})", labels[i], labels[j]);
                }
                if i != j && m[i][j] == 1 {
                    bail!(Input, "off-diagonal entry m({}, {}) must be ≥ 2 or ∞", labels[i], labels[j]);
                }
            }
        }
        Ok(CoxeterMatrix { labels, m })
    }

    /// Builds a matrix with default labels from off-diagonal entries given
    /// as `(i, j, m)`; unspecified pairs commute.
    pub fn from_edges(rank: usize, edges: &[(usize, usize, u32)]) -> Result<CoxeterMatrix> {
        let labels = default_labels(rank);
        let mut m = vec![vec![2u32; rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(i, j, v) in edges {
            if i >= rank || j >= rank || i == j {
                bail!(Input, "bad edge ({i}, {j})");
            }
            m[i][j] = v;
            m[j][i] = v;
        }
        CoxeterMatrix::new(labels, m)
    }

    pub fn from_json(text: &str) -> Result<CoxeterMatrix> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("matrix JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Raw entry with `0` meaning ∞.
    pub fn raw(&self, s: usize, t: usize) -> u32 {
        self.m[s][t]
    }

    /// `None` for ∞.
    pub fn order(&self, s: usize, t: usize) -> Option<u32> {
        match self.m[s][t] {
            0 => None,
            v => Some(v),
        }
    }

    /// Joined by an edge of the diagram (m ≥ 3 or ∞).
    pub fn adjacent(&self, s: usize, t: usize) -> bool {
        s != t && self.m[s][t] != 2
    }

    pub fn commute(&self, s: usize, t: usize) -> bool {
        s == t || self.m[s][t] == 2
    }

    pub fn all(&self) -> GenSet {
        GenSet::full(self.rank())
    }

    pub fn check_subset(&self, j: GenSet) -> Result<()> {
        if !j.is_subset(self.all()) {
            bail!(Input, "generator subset {j:?} is out of range for rank {}", self.rank());
        }
        Ok(())
    }

    /// Parses whitespace-separated generator labels (or indices).
    pub fn parse_word(&self, text: &str) -> Result<Vec<u8>> {
        text.split_whitespace()
            .map(|tok| {
                if let Some(i) = self.label_index(tok) {
                    return Ok(i as u8);
                }
                bail!(Input, "unknown generator {tok:?}")
            })
            .collect()
    }

    pub fn format_word(&self, word: &[u8]) -> String {
        word.iter().map(|&i| self.labels[i as usize].as_str()).collect::<Vec<_>>().join(" ")
    }

    pub fn parse_subset(&self, labels: &[String]) -> Result<GenSet> {
        let mut j = GenSet::EMPTY;
        for l in labels {
            match self.label_index(l) {
                Some(i) => j = j.with(i),
                None => bail!(Input, "unknown generator {l:?}"),
            }
        }
        Ok(j)
    }

    pub fn subset_labels(&self, j: GenSet) -> Vec<String> {
        j.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// The same matrix with generators renamed and reordered by `perm`:
    /// new generator `k` is old generator `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> CoxeterMatrix {
        let n = self.rank();
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let m = (0..n).map(|i| (0..n).map(|j| self.m[perm[i]][perm[j]]).collect()).collect();
        CoxeterMatrix { labels, m }
    }

    /// Restriction to the generators in `j`, in index order.
    pub fn restrict(&self, j: GenSet) -> CoxeterMatrix {
        let idx: Vec<usize> = j.iter().collect();
        let labels = idx.iter().map(|&p| self.labels[p].clone()).collect();
        let m = idx.iter().map(|&a| idx.iter().map(|&b| self.m[a][b]).collect()).collect();
        CoxeterMatrix { labels, m }
    }

    /// Every finite label that appears off the diagonal.
    pub fn finite_labels(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                if self.m[i][j] != 0 {
                    out.push(self.m[i][j] as u64);
                }
            }
        }
        out
    }
}

pub fn default_labels(rank: usize) -> Vec<String> {
    const NAMES: [&str; 4] = ["s", "t", "u", "v"];
    if rank <= NAMES.len() {
        NAMES[..rank].iter().map(|s| s.to_string()).collect()
    } else {
        (0..rank).map(|i| format!("s{i}")).collect()
    }
}

/// A set of generator indices, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GenSet(pub u32);

impl fmt::Debug for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn full(rank: usize) -> GenSet {
        if rank >= 32 {
            GenSet(u32::MAX)
        } else {
            GenSet((1u32 << rank) - 1)
        }
    }

    pub fn singleton(i: usize) -> GenSet {
        GenSet(1 << i)
    }

    pub fn from_indices(idx: impl IntoIterator<Item = usize>) -> GenSet {
        idx.into_iter().fold(GenSet::EMPTY, GenSet::with)
    }

    pub fn with(self, i: usize) -> GenSet {
        GenSet(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> GenSet {
        GenSet(self.0 & !(1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: GenSet) -> GenSet {
        GenSet(self.0 | o.0)
    }

    pub fn intersection(self, o: GenSet) -> GenSet {
        GenSet(self.0 & o.0)
    }

    pub fn difference(self, o: GenSet) -> GenSet {
        GenSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: GenSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.0 & (1 << i) != 0)
    }

    /// All subsets, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = GenSet> {
        let full = self.0;
        let mut cur: Option<u32> = Some(0);
        std::iter::from_fn(move || {
            let c = cur?;
            cur = if c == full { None } else { Some((c.wrapping_sub(full)) & full) };
            Some(GenSet(c))
        })
    }
}

/// Classification of one irreducible component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "family")]
pub enum ComponentKind {
    Spherical(String),
    Affine(String),
    CompactHyperbolic,
    Indefinite,
}

impl ComponentKind {
    pub fn is_spherical(&self) -> bool {
        matches!(self, ComponentKind::Spherical(_))
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, ComponentKind::Affine(_))
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::Spherical(n) => write!(f, "Spherical({n})"),
            ComponentKind::Affine(n) => write!(f, "Affine({n})"),
            ComponentKind::CompactHyperbolic => write!(f, "CompactHyperbolic"),
            ComponentKind::Indefinite => write!(f, "Indefinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Component {
    pub generators: GenSet,
    pub kind: ComponentKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DiagramType {
    pub components: Vec<Component>,
    pub is_spherical: bool,
    pub is_essential: bool,
    pub is_irreducible: bool,
}

impl DiagramType {
    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.generators.len()).sum()
    }

    pub fn is_irreducible_affine(&self) -> bool {
        self.components.len() == 1 && self.components[0].kind.is_affine()
    }
}

impl fmt::Display for DiagramType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "Trivial");
        }
        let parts: Vec<String> = self.components.iter().map(|c| c.kind.to_string()).collect();
        write!(f, "{}", parts.join(" × "))
    }
}

/// Connected components of the diagram restricted to `j`, ordered by their
/// least generator.
pub fn irreducible_components(m: &CoxeterMatrix, j: GenSet) -> Result<Vec<GenSet>> {
    m.check_subset(j)?;
    let mut left = j;
    let mut out = Vec::new();
    while let Some(start) = left.iter().next() {
        let mut comp = GenSet::singleton(start);
        let mut frontier = vec![start];
        while let Some(a) = frontier.pop() {
            for b in left.iter() {
                if !comp.contains(b) && m.adjacent(a, b) {
                    comp = comp.with(b);
                    frontier.push(b);
                }
            }
        }
        left = left.difference(comp);
        out.push(comp);
    }
    Ok(out)
}

fn classify_component(m: &CoxeterMatrix, comp: GenSet) -> ComponentKind {
    if let Some(name) = catalogue::match_spherical(m, comp) {
        return ComponentKind::Spherical(name);
    }
    if let Some(name) = catalogue::match_affine(m, comp) {
        return ComponentKind::Affine(name);
    }
    // Subdiagrams of spherical diagrams are spherical, so it suffices to drop
    // one generator at a time.
    let all_proper_spherical = comp.iter().all(|i| is_spherical(m, comp.without(i)));
    if all_proper_spherical {
        ComponentKind::CompactHyperbolic
    } else {
        ComponentKind::Indefinite
    }
}

/// True when every component of `j` is in the finite-type catalogue.
pub fn is_spherical(m: &CoxeterMatrix, j: GenSet) -> bool {
    irreducible_components(m, j)
        .expect("subset already validated")
        .into_iter()
        .all(|c| catalogue::match_spherical(m, c).is_some())
}

pub fn classify_subset(m: &CoxeterMatrix, j: GenSet) -> Result<DiagramType> {
    let comps = irreducible_components(m, j)?;
    let components: Vec<Component> =
        comps.into_iter().map(|c| Component { generators: c, kind: classify_component(m, c) }).collect();
    let is_spherical = components.iter().all(|c| c.kind.is_spherical());
    let is_essential = components.iter().all(|c| !c.kind.is_spherical());
    let is_irreducible = components.len() == 1;
    Ok(DiagramType { components, is_spherical, is_essential, is_irreducible })
}

/// `J⊥`: generators outside `j` commuting with all of `j`.
pub fn perp(m: &CoxeterMatrix, j: GenSet) -> Result<GenSet> {
    m.check_subset(j)?;
    Ok(GenSet::from_indices(m.all().difference(j).iter().filter(|&s| j.iter().all(|t| m.order(s, t) == Some(2)))))
}

/// Union of the non-spherical components of `j`.
pub fn essential_core(m: &CoxeterMatrix, j: GenSet) -> Result<GenSet> {
    let t = classify_subset(m, j)?;
    Ok(t.components.iter().filter(|c| !c.kind.is_spherical()).fold(GenSet::EMPTY, |acc, c| acc.union(c.generators)))
}

/// Every pair `(J, J′)` with `J′ ⊆ J⊥` spherical, ordered by `J` then `J′`.
pub fn shells(m: &CoxeterMatrix, rank_cap: usize) -> Result<Vec<(GenSet, GenSet)>> {
    if m.rank() > rank_cap {
        bail!(Budget, "shell enumeration over 2^{} subsets exceeds rank cap {rank_cap}", m.rank());
    }
    let mut out = Vec::new();
    for j in m.all().subsets() {
        let p = perp(m, j)?;
        for jp in p.subsets() {
            if is_spherical(m, jp) {
                out.push((j, jp));
            }
        }
    }
    Ok(out)
}

/// Checks that every proper standard parabolic of an irreducible
/// non-spherical system is finite, and cross-checks against the
/// classification.
pub fn few_open_subgroups_check(m: &CoxeterMatrix) -> Result<Verdict> {
    let t = classify_subset(m, m.all())?;
    if !t.is_irreducible {
        bail!(Precondition, "few-open check needs an irreducible diagram, got {t}");
    }
    if t.is_spherical {
        bail!(Precondition, "few-open check needs a non-spherical diagram, got {t}");
    }
    let witness = m.all().subsets().filter(|&j| j != m.all()).find(|&j| !is_spherical(m, j));
    let classified_few_open =
        matches!(t.components[0].kind, ComponentKind::Affine(_) | ComponentKind::CompactHyperbolic);
    match (witness, classified_few_open) {
        (None, true) => Ok(Verdict::verified("every proper standard parabolic subgroup is finite")),
        (Some(j), false) => Ok(Verdict::refuted(serde_json::json!({
            "non_spherical_proper_subset": m.subset_labels(j),
            "type": t.to_string(),
        }))),
        (None, false) => Err(Error::Consistency(format!("all proper subsets spherical but classified {t}"))),
        (Some(j), true) => Err(Error::Consistency(format!(
            "classified {t} but proper subset {:?} is not spherical",
            m.subset_labels(j)
        ))),
    }
}
