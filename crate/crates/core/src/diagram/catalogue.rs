//! Hard-coded catalogues of finite-type and affine-type diagrams, matched by
//! labelled graph isomorphism.

use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::UnGraph;

use super::{CoxeterMatrix, GenSet};

/// A catalogue diagram: a name and labelled edges on `rank` nodes
/// (`0` labels ∞).
#[derive(Debug, Clone)]
pub struct CatalogueEntry {
    pub name: String,
    pub rank: usize,
    pub edges: Vec<(usize, usize, u32)>,
}

impl CatalogueEntry {
    fn new(name: String, rank: usize, edges: Vec<(usize, usize, u32)>) -> Self {
        CatalogueEntry { name, rank, edges }
    }

    pub fn matrix(&self) -> CoxeterMatrix {
        CoxeterMatrix::from_edges(self.rank, &self.edges).expect("catalogue entries are valid")
    }

    fn graph(&self) -> UnGraph<(), u32> {
        let mut g = UnGraph::with_capacity(self.rank, self.edges.len());
        let nodes: Vec<_> = (0..self.rank).map(|_| g.add_node(())).collect();
        for &(a, b, l) in &self.edges {
            g.add_edge(nodes[a], nodes[b], l);
        }
        g
    }
}

fn sub(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

fn tilde(letter: char) -> String {
    match letter {
        'A' => "Ã".to_string(),
        'E' => "Ẽ".to_string(),
        c => format!("{c}\u{303}"),
    }
}

fn path(n: usize, label: u32) -> Vec<(usize, usize, u32)> {
    (1..n).map(|i| (i - 1, i, label)).collect()
}

/// Star with arms of the given lengths around node 0.
fn star(arms: &[usize]) -> (usize, Vec<(usize, usize, u32)>) {
    let mut edges = Vec::new();
    let mut next = 1;
    for &len in arms {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next, 3));
            prev = next;
            next += 1;
        }
    }
    (next, edges)
}

/// Name of the rank-2 finite dihedral type with label `m ≥ 3`.
pub fn dihedral_name(m: u32) -> String {
    match m {
        3 => format!("A{}", sub(2)),
        4 => format!("B{}", sub(2)),
        6 => format!("G{}", sub(2)),
        _ => format!("I{}({m})", sub(2)),
    }
}

/// Irreducible finite types of the given rank (rank-2 dihedral types are
/// matched by label and not listed here).
pub fn spherical_catalogue(rank: usize) -> Vec<CatalogueEntry> {
    let mut out = Vec::new();
    match rank {
        0 => return out,
        1 => {
            out.push(CatalogueEntry::new(format!("A{}", sub(1)), 1, vec![]));
            return out;
        }
        2 => return out,
        _ => {}
    }
    let n = rank;
    out.push(CatalogueEntry::new(format!("A{}", sub(n)), n, path(n, 3)));
    let mut b = path(n, 3);
    b.last_mut().unwrap().2 = 4;
    out.push(CatalogueEntry::new(format!("B{}", sub(n)), n, b));
    if n >= 4 {
        let mut d = path(n - 1, 3);
        d.push((n - 3, n - 1, 3));
        out.push(CatalogueEntry::new(format!("D{}", sub(n)), n, d));
    }
    if (6..=8).contains(&n) {
        let (_, e) = star(&[2, 1, n - 4]);
        out.push(CatalogueEntry::new(format!("E{}", sub(n)), n, e));
    }
    if n == 4 {
        out.push(CatalogueEntry::new(format!("F{}", sub(4)), 4, vec![(0, 1, 3), (1, 2, 4), (2, 3, 3)]));
    }
    if n == 3 || n == 4 {
        let mut h = path(n, 3);
        h[0].2 = 5;
        out.push(CatalogueEntry::new(format!("H{}", sub(n)), n, h));
    }
    out
}

/// Irreducible affine types of the given rank (number of generators).
pub fn affine_catalogue(rank: usize) -> Vec<CatalogueEntry> {
    let mut out = Vec::new();
    if rank < 2 {
        return out;
    }
    let n = rank - 1;
    if n == 1 {
        out.push(CatalogueEntry::new(format!("{}{}", tilde('A'), sub(1)), 2, vec![(0, 1, 0)]));
        return out;
    }
    let mut cycle = path(rank, 3);
    cycle.push((rank - 1, 0, 3));
    out.push(CatalogueEntry::new(format!("{}{}", tilde('A'), sub(n)), rank, cycle));
    if n >= 3 {
        // Fork at one end, double bond at the other.
        let mut b = path(n, 3);
        b.last_mut().unwrap().2 = 4;
        b.push((n, 1, 3));
        out.push(CatalogueEntry::new(format!("{}{}", tilde('B'), sub(n)), rank, b));
    }
    if n >= 2 {
        let mut c = path(rank, 3);
        c[0].2 = 4;
        c.last_mut().unwrap().2 = 4;
        out.push(CatalogueEntry::new(format!("{}{}", tilde('C'), sub(n)), rank, c));
    }
    if n >= 4 {
        // Forks at both ends.
        let mut d = path(n - 1, 3);
        d.push((n - 1, 1, 3));
        d.push((n, n - 3, 3));
        out.push(CatalogueEntry::new(format!("{}{}", tilde('D'), sub(n)), rank, d));
    }
    let e = match n {
        6 => Some(star(&[2, 2, 2])),
        7 => Some(star(&[3, 3, 1])),
        8 => Some(star(&[5, 2, 1])),
        _ => None,
    };
    if let Some((_, edges)) = e {
        out.push(CatalogueEntry::new(format!("{}{}", tilde('E'), sub(n)), rank, edges));
    }
    if n == 4 {
        out.push(CatalogueEntry::new(
            format!("{}{}", tilde('F'), sub(4)),
            5,
            vec![(0, 1, 3), (1, 2, 3), (2, 3, 4), (3, 4, 3)],
        ));
    }
    if n == 2 {
        out.push(CatalogueEntry::new(format!("{}{}", tilde('G'), sub(2)), 3, vec![(0, 1, 6), (1, 2, 3)]));
    }
    out
}

fn component_graph(m: &CoxeterMatrix, comp: GenSet) -> UnGraph<(), u32> {
    let idx: Vec<usize> = comp.iter().collect();
    let mut g = UnGraph::with_capacity(idx.len(), idx.len());
    let nodes: Vec<_> = idx.iter().map(|_| g.add_node(())).collect();
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if m.adjacent(idx[a], idx[b]) {
                g.add_edge(nodes[a], nodes[b], m.raw(idx[a], idx[b]));
            }
        }
    }
    g
}

fn edge_profile(g: &UnGraph<(), u32>) -> Vec<u32> {
    let mut v: Vec<u32> = g.edge_weights().copied().collect();
    v.sort_unstable();
    v
}

fn match_in(m: &CoxeterMatrix, comp: GenSet, entries: &[CatalogueEntry]) -> Option<String> {
    let g = component_graph(m, comp);
    let profile = edge_profile(&g);
    entries.iter().find_map(|e| {
        let h = e.graph();
        if h.edge_count() != g.edge_count() || edge_profile(&h) != profile {
            return None;
        }
        is_isomorphic_matching(&g, &h, |_, _| true, |a, b| a == b).then(|| e.name.clone())
    })
}

/// Name of the finite type of a connected subdiagram, if any.
pub(super) fn match_spherical(m: &CoxeterMatrix, comp: GenSet) -> Option<String> {
    let idx: Vec<usize> = comp.iter().collect();
    match idx.len() {
        0 => None,
        1 => Some(format!("A{}", sub(1))),
        2 => match m.raw(idx[0], idx[1]) {
            0 | 2 => None,
            l => Some(dihedral_name(l)),
        },
        r => match_in(m, comp, &spherical_catalogue(r)),
    }
}

/// Name of the affine type of a connected subdiagram, if any.
pub(super) fn match_affine(m: &CoxeterMatrix, comp: GenSet) -> Option<String> {
    match_in(m, comp, &affine_catalogue(comp.len()))
}
