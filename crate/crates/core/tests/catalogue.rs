mod common;

use std::fs;
use std::path::Path;

use coxeter::diagram::{self, ComponentKind, CoxeterMatrix};
use serde::Deserialize;

#[derive(Deserialize)]
struct Fixture {
    expected: String,
    matrix: serde_json::Value,
}

fn fixtures() -> Vec<(String, CoxeterMatrix, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/catalogue");
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| {
            let f: Fixture = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
            let m = CoxeterMatrix::from_json(&f.matrix.to_string()).unwrap();
            (p.file_stem().unwrap().to_string_lossy().into_owned(), m, f.expected)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn kind(m: &CoxeterMatrix) -> ComponentKind {
    let t = diagram::classify_subset(m, m.all()).unwrap();
    assert_eq!(t.components.len(), 1);
    t.components[0].kind.clone()
}

#[test]
fn every_fixture_is_recognized() {
    let all = fixtures();
    assert!(all.len() >= 40);
    for (name, m, expected) in &all {
        assert_eq!(kind(m).to_string(), *expected, "{name}");
    }
}

#[test]
fn numeric_signature_agrees_with_fixtures() {
    for (name, m, expected) in fixtures() {
        let family = expected.split('(').next().unwrap();
        assert_eq!(common::oracle_family(&m), family, "{name}");
        let sig = diagram::gram::signature(&m, m.all());
        assert_eq!((sig.positive, sig.negative, sig.zero), common::numeric_signature(&m, m.all()), "{name}");
    }
}

#[test]
fn builtin_catalogues_cover_the_fixtures() {
    for (name, m, expected) in fixtures() {
        let n = m.rank();
        let (family, ty) = expected.trim_end_matches(')').split_once('(').unwrap();
        let names: Vec<String> = match family {
            "Spherical" if n == 2 => continue,
            "Spherical" => diagram::spherical_catalogue(n).into_iter().map(|e| e.name).collect(),
            _ => diagram::affine_catalogue(n).into_iter().map(|e| e.name).collect(),
        };
        assert!(names.iter().any(|x| x == ty), "{name}: {ty} not in {names:?}");
    }
}

#[test]
fn compact_hyperbolic_examples() {
    // Linear diagrams 5-3-3-3 and 4-3-3-5, and the triangle (3,3,4).
    let chains = [vec![5, 3, 3, 3], vec![4, 3, 3, 5], vec![5, 3, 5]];
    for c in &chains {
        let edges: Vec<(usize, usize, u32)> = c.iter().enumerate().map(|(i, &k)| (i, i + 1, k)).collect();
        let m = CoxeterMatrix::from_edges(c.len() + 1, &edges).unwrap();
        assert_eq!(kind(&m), ComponentKind::CompactHyperbolic, "{c:?}");
        assert_eq!(common::oracle_family(&m), "CompactHyperbolic");
    }
    let t = CoxeterMatrix::from_edges(3, &[(0, 1, 3), (1, 2, 3), (0, 2, 4)]).unwrap();
    assert_eq!(kind(&t), ComponentKind::CompactHyperbolic);
    // 3-3-3-3-3 with a 5 at the end is no longer compact hyperbolic.
    let m = CoxeterMatrix::from_edges(6, &[(0, 1, 5), (1, 2, 3), (2, 3, 3), (3, 4, 3), (4, 5, 3)]).unwrap();
    assert_eq!(kind(&m), ComponentKind::Indefinite);
}

#[test]
fn classification_is_label_independent() {
    for (name, m, expected) in fixtures() {
        let n = m.rank();
        let rev: Vec<usize> = (0..n).rev().collect();
        assert_eq!(kind(&m.permuted(&rev)).to_string(), expected, "{name}");
    }
}
