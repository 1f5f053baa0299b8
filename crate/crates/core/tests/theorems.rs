use coxeter::diagram::GenSet;
use coxeter::element::{self, Element};
use coxeter::geometry::RootVector;
use coxeter::parabolic;
use coxeter::presets;
use coxeter::system::System;
use coxeter::theorems::suite::{run_suite_on, SuiteConfig};
use coxeter::theorems::*;
use coxeter::{Budget, Verdict};

fn sys(name: &str) -> System {
    presets::system(name).unwrap()
}

fn el(s: &System, w: &str) -> Element {
    Element::parse(s, w).unwrap()
}

fn ctx() -> Ctx {
    Ctx::new(Budget { window_depth: 8, root_depth: 8, ..Budget::default() })
}

/// A chain of `len` nested half-spaces along the axis of `w`.
fn chain_of(w: &Element, len: usize) -> Vec<RootVector> {
    let b = Budget::default();
    let x = parabolic::power_into_w0(w, &b).unwrap();
    let wall = parabolic::essential_walls(&x, &b).unwrap().remove(0);
    let (root, n) = element::nesting_certificate(&x, &wall.root, b.power_cap).unwrap().unwrap();
    nested_chain(&x, &root, n, len)
}

#[test]
fn grid_alternative_product_case() {
    let s = sys("dinf_dinf");
    let alpha = chain_of(&el(&s, "s1 t1"), 7);
    let beta = chain_of(&el(&s, "s2 t2"), 7);
    let (v, n) = verify_grid_alternative(&s, &alpha, &beta, &ctx()).unwrap();
    match v {
        Verdict::Verified { evidence } => assert!(evidence.contains("direct product"), "{evidence}"),
        other => panic!("{other:?}"),
    }
    assert!(n.value <= n.ceiling);
}

#[test]
fn grid_alternative_triangle_case() {
    let s = sys("atilde2");
    let pool: Vec<Element> =
        ["a b a c", "c b a b", "b c b a", "a b c", "b c a", "c a b"].iter().map(|w| el(&s, w)).collect();
    let (alpha, beta) = find_meeting_chains(&pool, 7, &Budget::default()).unwrap().expect("two meeting chains");
    let (v, _) = verify_grid_alternative(&s, &alpha, &beta, &ctx()).unwrap();
    match v {
        Verdict::Verified { evidence } => assert!(evidence.contains("Euclidean triangle"), "{evidence}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn grid_alternative_rejects_parallel_chains() {
    let s = sys("dinf_dinf");
    let alpha = chain_of(&el(&s, "s1 t1"), 7);
    assert!(verify_grid_alternative(&s, &alpha, &alpha, &ctx()).is_err());
}

#[test]
fn wall_residue_on_essential_cores() {
    let da = sys("dinf_a1");
    let (v, counts) = verify_wall_residue(&da, GenSet::from_indices([0, 1]), 8, &ctx()).unwrap();
    assert!(v.is_verified(), "{v:?}");
    // Only the wall of u commutes with s and t.
    assert_eq!(counts.all_hold, 1);
    assert_eq!(counts.all_hold + counts.none_hold, counts.walls);

    let at2 = sys("atilde2");
    let (v, counts) = verify_wall_residue(&at2, at2.matrix().all(), 8, &ctx()).unwrap();
    assert!(v.is_verified(), "{v:?}");
    assert_eq!(counts.all_hold, 0);
    assert_eq!(counts.none_hold, counts.walls);

    assert!(verify_wall_residue(&da, GenSet::from_indices([2]), 8, &ctx()).is_err());
}

#[test]
fn factor_essential_on_two_lines() {
    let s = sys("dinf_dinf");
    let (x, y) = (el(&s, "s1 t1"), el(&s, "s2 t2"));
    assert!(verify_factor_essential(&[x.clone(), y.clone()], &ctx()).unwrap().is_verified());
    assert!(verify_factor_essential(std::slice::from_ref(&x), &ctx()).unwrap().is_verified());
    assert!(verify_factor_essential(&[x, el(&s, "t1 s2")], &ctx()).is_err());
}

#[test]
fn three_parallels_on_small_windows() {
    for name in ["dinf", "atilde2"] {
        let (v, triples) = verify_three_parallels(&sys(name), 6, &ctx()).unwrap();
        assert!(v.is_verified(), "{name}: {v:?}");
        assert!(triples > 0);
    }
}

#[test]
fn orbit_trichotomy_on_translations() {
    let at2 = sys("atilde2");
    for w in ["a b a c", "a b c"] {
        let (v, part) = verify_orbits(&el(&at2, w), &ctx()).unwrap();
        assert!(v.is_verified(), "{w}: {v:?}");
        assert!(part.pairs.iter().all(|p| p.checked));
    }
}

#[test]
fn two_wall_constant_is_conjugation_invariant() {
    let at2 = sys("atilde2");
    let c = ctx();
    let w = el(&at2, "a b c");
    let (_, base) = verify_two_wall_generation(&w, &c).unwrap();
    for u in ["a", "b c", "c a b"] {
        let (v, k) = verify_two_wall_generation(&w.conjugate(&el(&at2, u)).unwrap(), &c).unwrap();
        assert!(v.is_verified());
        assert_eq!(k.value, base.value, "conjugated by {u}");
    }
}

#[test]
fn product_closure_is_symmetric() {
    let dinf = sys("dinf");
    let c = Ctx::new(Budget { grid: 6, ..Budget::default() });
    let g = el(&dinf, "s t s t s t");
    let h = el(&dinf, "t s t s t s");
    let (v1, k1) = verify_product_closure(&g, &h, &c).unwrap();
    let (v2, k2) = verify_product_closure(&h, &g, &c).unwrap();
    assert!(v1.is_verified() && v2.is_verified());
    assert_eq!(k1.value, k2.value);
}

#[test]
fn remark_subgroup_without_dominant_element() {
    let a1x3 = sys("a1x3");
    let gens = [el(&a1x3, "s t"), el(&a1x3, "t u")];
    let (v, out) = verify_fundamental(&gens, &ctx()).unwrap();
    assert!(v.is_verified(), "{v:?}");
    assert!(out.pc_group.is_whole());
    assert!(!out.pc_h.is_whole());
}

fn small_config(systems: &[&str]) -> SuiteConfig {
    SuiteConfig {
        systems: systems.iter().map(|s| s.to_string()).collect(),
        budget: Budget { samples: 3, window_depth: 6, root_depth: 6, grid: 4, ..Budget::default() },
        theorems: vec!["thm-fundamental".into(), "thm-orbits".into(), "thm-few-open-subgroups".into()],
        ..SuiteConfig::default()
    }
}

#[test]
fn zero_budget_is_inconclusive() {
    let mut cfg = small_config(&["dinf", "atilde2"]);
    cfg.budget = Budget::zero();
    let systems: Vec<System> = cfg.systems.iter().map(|s| sys(s)).collect();
    let report = run_suite_on(&systems, &cfg).unwrap();
    let entries: Vec<_> = report.theorems.values().flatten().collect();
    assert!(!entries.is_empty());
    assert!(entries.iter().all(|e| matches!(e.verdict, Verdict::Inconclusive { .. })));
    assert_eq!(report.exit_code(), 2);
}

#[test]
fn fault_injection_is_refuted() {
    let mut cfg = small_config(&["dinf"]);
    cfg.fault_injection = true;
    let report = run_suite_on(&[sys("dinf")], &cfg).unwrap();
    assert_eq!(report.worst, "refuted");
    assert_eq!(report.exit_code(), 1);
}

#[test]
fn suite_is_deterministic() {
    let cfg = small_config(&["dinf_a1", "atilde2"]);
    let systems = [sys("dinf_a1"), sys("atilde2")];
    let a = serde_json::to_string(&run_suite_on(&systems, &cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&run_suite_on(&systems, &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}
