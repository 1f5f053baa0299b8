//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Run alone with `cargo test -p coxeter-core --test acceptance`.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use coxeter::diagram::{self, ComponentKind, CoxeterMatrix};
use coxeter::element::{tits, Element};
use coxeter::parabolic::{self, PairCase};
use coxeter::presets;
use coxeter::system::System;
use coxeter::theorems::suite::{run_suite_on, Report, SuiteConfig};
use coxeter::theorems::*;
use coxeter::{Budget, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const C_CEILING: u64 = 10;
const K_CEILING: u64 = 12;
const MIN_PER_SYSTEM: usize = 20;

type Outcome = Result<String, String>;

fn sys(name: &str) -> System {
    presets::system(name).unwrap()
}

fn suite_systems() -> Vec<System> {
    presets::SUITE.iter().map(|s| sys(s)).collect()
}

fn run_one(id: TheoremId) -> Result<Report, String> {
    let cfg = SuiteConfig { theorems: vec![id.as_str().to_string()], ..SuiteConfig::default() };
    run_suite_on(&suite_systems(), &cfg).map_err(|e| e.to_string())
}

/// Verified entries per system; fails on any non-Verified entry.
fn verified_per_system(report: &Report, id: TheoremId) -> Result<BTreeMap<String, usize>, String> {
    let mut counts: BTreeMap<String, usize> = presets::SUITE.iter().map(|s| (s.to_string(), 0)).collect();
    for e in report.entries(id) {
        if !e.verdict.is_verified() {
            return Err(format!("{}: {} on {}", e.system, e.verdict.label(), e.inputs));
        }
        *counts.get_mut(&e.system).unwrap() += 1;
    }
    Ok(counts)
}

fn max_constant(report: &Report, id: TheoremId) -> u64 {
    report.entries(id).iter().flat_map(|e| &e.constants).map(|c| c.value).max().unwrap_or(0)
}

fn short(counts: &BTreeMap<String, usize>) -> String {
    counts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn word_problem() -> Outcome {
    let mut words = 0usize;
    for name in ["a2", "b2", "a1x3", "dinf", "atilde2", "t334"] {
        let s = sys(name);
        let roots = s.elementary_roots().map_err(|e| e.to_string())?;
        for len in 0..=10 {
            for w in common::words_of_length(s.rank(), len) {
                let nf = s.reduce(&w);
                let by_tits = tits::tits_normal_form(s.matrix(), &w, 10_000_000).map_err(|e| e.to_string())?;
                if by_tits != nf || !roots.is_reduced(&nf) || roots.is_reduced(&w) != (nf.len() == w.len()) {
                    return Err(format!(
                        "{name}: {} gives {} vs {}",
                        s.matrix().format_word(&w),
                        s.matrix().format_word(&nf),
                        s.matrix().format_word(&by_tits)
                    ));
                }
                words += 1;
            }
        }
    }
    Ok(format!("{words} words agree"))
}

fn closure_oracle() -> Outcome {
    let b = Budget::default();
    let mut checked = 0usize;
    for name in presets::SUITE {
        let s = sys(name);
        let ball = s.ball(s.matrix().all(), 6, 1_000_000).map_err(|e| e.to_string())?;
        for x in ball.iter() {
            let p = parabolic::pc_of_element(x, &b).map_err(|e| e.to_string())?;
            let (u, j) = common::closure_oracle(std::slice::from_ref(x), 8);
            if !common::same_parabolic(p.conjugator(), p.generators(), &u, j) {
                return Err(format!(
                    "{name}: Pc({x}) = {p} but the oracle gives ({u}, {:?})",
                    s.matrix().subset_labels(j)
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} elements agree"))
}

fn two_wall() -> Outcome {
    let id = TheoremId::TwoWallGeneration;
    let report = run_one(id)?;
    let counts = verified_per_system(&report, id)?;
    let c = max_constant(&report, id);
    // A₁³ is finite, so it has no element of infinite order to test.
    let short_of = counts.iter().find(|(k, &v)| k.as_str() != "a1x3" && v < MIN_PER_SYSTEM);
    match short_of {
        Some((k, v)) => Err(format!("only {v} elements on {k}")),
        None if c > C_CEILING => Err(format!("C = {c}")),
        None => Ok(format!("{}, max C = {c}", short(&counts))),
    }
}

fn product_closure() -> Outcome {
    let id = TheoremId::ProductClosure;
    let report = run_one(id)?;
    let counts = verified_per_system(&report, id)?;
    let k = max_constant(&report, id);
    // W₀ is trivial in the finite group A₁³: the single pair (ε, ε) is all there is.
    let short_of = counts.iter().find(|(s, &v)| if s.as_str() == "a1x3" { v != 1 } else { v < MIN_PER_SYSTEM });
    match short_of {
        Some((s, v)) => Err(format!("{v} pairs on {s}")),
        None if k > K_CEILING => Err(format!("K = {k}")),
        None => Ok(format!("{}, max K = {k}", short(&counts))),
    }
}

fn fundamental() -> Outcome {
    let id = TheoremId::Fundamental;
    let report = run_one(id)?;
    let counts = verified_per_system(&report, id)?;
    if let Some((s, v)) = counts.iter().find(|(_, &v)| v < MIN_PER_SYSTEM) {
        return Err(format!("only {v} subgroups on {s}"));
    }
    let a1x3 = sys("a1x3");
    let gens = [Element::parse(&a1x3, "s t").unwrap(), Element::parse(&a1x3, "t u").unwrap()];
    let ctx = Ctx::new(Budget::default());
    let (v, out) = verify_fundamental(&gens, &ctx).map_err(|e| e.to_string())?;
    if !v.is_verified() || !out.pc_group.is_whole() {
        return Err(format!("A₁³ remark: {v:?}, Pc(H) = {}", out.pc_group));
    }
    // No element of H = {ε, st, tu, su} has closure W.
    for w in ["ε", "s t", "t u", "s u"] {
        let x = Element::parse(&a1x3, w).unwrap();
        if parabolic::pc_of_element(&x, &Budget::default()).map_err(|e| e.to_string())?.is_whole() {
            return Err(format!("A₁³ remark: Pc({w}) = W"));
        }
    }
    Ok(format!("{}; A₁³: Pc(H) = W, no h with Pc(h) = W", short(&counts)))
}

fn orbits() -> Outcome {
    let id = TheoremId::Orbits;
    let report = run_one(id)?;
    let counts = verified_per_system(&report, id)?;
    let at2 = sys("atilde2");
    let ctx = Ctx::new(Budget::default());
    let (v, ex) = affine_parity_example(&at2, &ctx).map_err(|e| e.to_string())?;
    if !v.is_verified() {
        return Err(format!("parity example: {v:?}"));
    }
    let (_, part) = verify_orbits(&ex.w, &ctx).map_err(|e| e.to_string())?;
    if !part.pairs.iter().all(|p| p.checked) || !part.pairs.iter().any(|p| p.case == PairCase::Affine) {
        return Err("Ã₂ example is not in the affine case".into());
    }
    let pattern: String = ex.pattern.iter().map(|(_, r)| if r.is_parallel() { 'P' } else { 'M' }).collect();
    if pattern != "MPMPMPMP" {
        return Err(format!("parity pattern {pattern}"));
    }
    Ok(format!("{}; Ã₂ w = {}: {pattern}", short(&counts), ex.w))
}

fn three_parallels() -> Outcome {
    let ctx = Ctx::new(Budget::default());
    let mut parts = Vec::new();
    for name in ["dinf", "atilde2"] {
        let (v, triples) = verify_three_parallels(&sys(name), 10, &ctx).map_err(|e| e.to_string())?;
        if !v.is_verified() {
            return Err(format!("{name}: {v:?}"));
        }
        parts.push(format!("{name}: {triples} triples"));
    }
    Ok(parts.join(", "))
}

fn wall_residue() -> Outcome {
    let ctx = Ctx::new(Budget::default());
    let mut parts = Vec::new();
    for name in ["dinf_a1", "atilde2"] {
        let s = sys(name);
        let core = diagram::essential_core(s.matrix(), s.matrix().all()).map_err(|e| e.to_string())?;
        let (v, counts) = verify_wall_residue(&s, core, 12, &ctx).map_err(|e| e.to_string())?;
        if !v.is_verified() || counts.all_hold + counts.none_hold != counts.walls {
            return Err(format!("{name}: {v:?}"));
        }
        parts.push(format!("{name}: {} walls", counts.walls));
    }
    Ok(parts.join(", "))
}

fn family(k: &ComponentKind) -> &'static str {
    match k {
        ComponentKind::Spherical(_) => "Spherical",
        ComponentKind::Affine(_) => "Affine",
        ComponentKind::CompactHyperbolic => "CompactHyperbolic",
        ComponentKind::Indefinite => "Indefinite",
    }
}

fn single_kind(m: &CoxeterMatrix) -> Result<ComponentKind, String> {
    let t = diagram::classify_subset(m, m.all()).map_err(|e| e.to_string())?;
    if t.components.len() != 1 {
        return Err(format!("{t} is not irreducible"));
    }
    Ok(t.components[0].kind.clone())
}

/// Random connected matrix with entries in {2,3,4,5,6,∞} (0 encodes ∞).
fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> CoxeterMatrix {
    const LABELS: [u32; 6] = [2, 3, 4, 5, 6, 0];
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                // Sparse diagrams are the interesting ones.
                let v = if rng.random_bool(0.7) { 2 } else { LABELS[rng.random_range(1..6)] };
                if v != 2 {
                    edges.push((i, j, v));
                }
            }
        }
        let m = CoxeterMatrix::from_edges(n, &edges).unwrap();
        if diagram::irreducible_components(&m, m.all()).unwrap().len() == 1 {
            return m;
        }
    }
}

fn classifier() -> Outcome {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/catalogue");
    let mut fixtures = 0;
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let m = CoxeterMatrix::from_json(&v["matrix"].to_string()).map_err(|e| e.to_string())?;
        let k = single_kind(&m)?;
        if k.to_string() != v["expected"].as_str().unwrap() {
            return Err(format!("{}: got {k}", path.display()));
        }
        if family(&k) != common::oracle_family(&m) {
            return Err(format!("{}: signature oracle says {}", path.display(), common::oracle_family(&m)));
        }
        fixtures += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut hyperbolic = 0;
    for i in 0..3000 {
        let n = 3 + i % 6;
        let m = random_connected(&mut rng, n);
        let k = single_kind(&m)?;
        if family(&k) != common::oracle_family(&m) {
            return Err(format!("{m:?}: {k} but the signature oracle says {}", common::oracle_family(&m)));
        }
        if k == ComponentKind::CompactHyperbolic {
            if n > 5 {
                return Err(format!("compact hyperbolic of rank {n}: {m:?}"));
            }
            hyperbolic += 1;
        }
    }
    Ok(format!("{fixtures} fixtures, 3000 random diagrams of rank 3–8 ({hyperbolic} compact hyperbolic)"))
}

fn few_open() -> Outcome {
    const LABELS: [u32; 6] = [2, 3, 4, 5, 6, 0];
    let mut tested = 0;
    for n in 2..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let total = LABELS.len().pow(pairs.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mut edges = Vec::new();
            for &(i, j) in &pairs {
                let v = LABELS[c % LABELS.len()];
                c /= LABELS.len();
                if v != 2 {
                    edges.push((i, j, v));
                }
            }
            let m = CoxeterMatrix::from_edges(n, &edges).unwrap();
            let t = diagram::classify_subset(&m, m.all()).map_err(|e| e.to_string())?;
            if !t.is_irreducible || t.is_spherical {
                continue;
            }
            let expected = matches!(t.components[0].kind, ComponentKind::Affine(_) | ComponentKind::CompactHyperbolic);
            let got = match diagram::few_open_subgroups_check(&m).map_err(|e| e.to_string())? {
                Verdict::Verified { .. } => true,
                Verdict::Refuted { .. } => false,
                Verdict::Inconclusive { budget } => return Err(format!("{m:?}: inconclusive ({budget})")),
            };
            if got != expected {
                return Err(format!("{m:?} ({t}): check says {got}"));
            }
            tested += 1;
        }
    }
    Ok(format!("{tested} matrices agree"))
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let minutes = |m: u64| Duration::from_secs(60 * m);
    let criteria = [
        Criterion { name: "word problem: automaton vs Tits rewriting", limit: minutes(2), run: word_problem },
        Criterion { name: "parabolic closure vs enumeration oracle", limit: minutes(5), run: closure_oracle },
        Criterion { name: "two-wall generation, C ≤ 10", limit: minutes(10), run: two_wall },
        Criterion { name: "product closure, K ≤ 12", limit: minutes(15), run: product_closure },
        Criterion { name: "dominant cyclic element of subgroups", limit: minutes(5), run: fundamental },
        Criterion { name: "wall-orbit trichotomy and affine parity", limit: minutes(5), run: orbits },
        Criterion { name: "three parallel walls, depth 10", limit: minutes(2), run: three_parallels },
        Criterion { name: "wall residue equivalences, depth 12", limit: minutes(3), run: wall_residue },
        Criterion { name: "diagram classifier", limit: minutes(1), run: classifier },
        Criterion { name: "few open subgroups ⇔ affine or compact hyperbolic", limit: minutes(10), run: few_open },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if took <= c.limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the time limit")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status}  {} [{:.1}s / {}s] {detail}",
            i + 1,
            c.name,
            took.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
