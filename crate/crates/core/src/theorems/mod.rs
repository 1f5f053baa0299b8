//! Bounded checks of the structural statements about parabolic closures,
//! with searches for the constants they assert to exist.

pub mod suite;

use std::sync::atomic::{AtomicBool, Ordering};

use num_rational::Ratio;
use serde::Serialize;
use serde_json::json;

use crate::budget::Budget;
use crate::diagram::{self, GenSet};
use crate::element::{self, Element, Reflection};
use crate::error::{bail, Result};
use crate::geometry::{self, Nesting, RootVector, WallRelation};
use crate::parabolic::{self, has_infinite_order, PairCase, Parabolic, WallOrbitPartition};
use crate::system::System;
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TheoremId {
    #[serde(rename = "thm-two-wall-generation")]
    TwoWallGeneration,
    #[serde(rename = "thm-product-closure")]
    ProductClosure,
    #[serde(rename = "thm-fundamental")]
    Fundamental,
    #[serde(rename = "thm-grid-alternative")]
    GridAlternative,
    #[serde(rename = "thm-wall-residue")]
    WallResidue,
    #[serde(rename = "thm-factor-essential")]
    FactorEssential,
    #[serde(rename = "thm-three-parallels")]
    ThreeParallels,
    #[serde(rename = "thm-orbits")]
    Orbits,
    #[serde(rename = "thm-few-open-subgroups")]
    FewOpenSubgroups,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::TwoWallGeneration,
        TheoremId::ProductClosure,
        TheoremId::Fundamental,
        TheoremId::GridAlternative,
        TheoremId::WallResidue,
        TheoremId::FactorEssential,
        TheoremId::ThreeParallels,
        TheoremId::Orbits,
        TheoremId::FewOpenSubgroups,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::TwoWallGeneration => "thm-two-wall-generation",
            TheoremId::ProductClosure => "thm-product-closure",
            TheoremId::Fundamental => "thm-fundamental",
            TheoremId::GridAlternative => "thm-grid-alternative",
            TheoremId::WallResidue => "thm-wall-residue",
            TheoremId::FactorEssential => "thm-factor-essential",
            TheoremId::ThreeParallels => "thm-three-parallels",
            TheoremId::Orbits => "thm-orbits",
            TheoremId::FewOpenSubgroups => "thm-few-open-subgroups",
        }
    }

    pub fn parse(s: &str) -> Result<TheoremId> {
        match TheoremId::ALL.iter().find(|t| t.as_str() == s) {
            Some(t) => Ok(*t),
            None => bail!(Input, "unknown theorem id {s:?}"),
        }
    }
}

impl std::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An empirically found constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantEstimate {
    pub name: &'static str,
    pub system: String,
    pub value: u64,
    pub ceiling: u64,
    pub units: &'static str,
}

/// Shared settings for one run of the checks.
pub struct Ctx {
    pub budget: Budget,
    /// Test mode: the first property evaluation is reported as failing.
    fault: AtomicBool,
}

impl Ctx {
    pub fn new(budget: Budget) -> Ctx {
        Ctx { budget, fault: AtomicBool::new(false) }
    }

    pub fn with_fault_injection(budget: Budget) -> Ctx {
        Ctx { budget, fault: AtomicBool::new(true) }
    }

    /// Passes a property evaluation through the fault hook.
    fn holds(&self, ok: bool) -> bool {
        ok && !self.fault.swap(false, Ordering::SeqCst)
    }
}

fn words(sys: &System, elems: &[Element]) -> Vec<String> {
    elems.iter().map(|e| sys.matrix().format_word(e.word())).collect()
}

fn wall_json(r: &Reflection) -> serde_json::Value {
    json!(r.element.system().matrix().format_word(r.element.word()))
}

/// Two essential walls far enough apart generate `Pc(w)`.
///
/// `C` is the largest separation (in walls strictly between) among pairs of
/// essential walls whose reflections fail to generate `Pc(w)`; meeting
/// walls count as separation 0.
pub fn verify_two_wall_generation(w: &Element, ctx: &Ctx) -> Result<(Verdict, ConstantEstimate)> {
    let b = &ctx.budget;
    let sys = w.system();
    let estimate = |value: u64| ConstantEstimate {
        name: "C",
        system: sys.name().to_string(),
        value,
        ceiling: b.c_ceiling as u64,
        units: "walls strictly between",
    };
    if b.window_depth == 0 || b.power_cap == 0 {
        return Ok((Verdict::inconclusive("zero window or power budget"), estimate(0)));
    }
    if !has_infinite_order(w, b)? {
        bail!(Precondition, "{w} has finite order");
    }
    let p = parabolic::pc_of_element(w, b)?;
    if !p.kind().is_irreducible || p.kind().is_spherical {
        bail!(Precondition, "Pc({w}) = {p} is not irreducible and non-spherical");
    }
    let walls_budget = Budget { root_depth: b.window_depth, ..b.clone() };
    let walls = parabolic::essential_walls(w, &walls_budget)?;
    if walls.len() < 2 {
        return Ok((Verdict::inconclusive("fewer than two essential walls in the window"), estimate(0)));
    }
    let mut worst: Option<(usize, usize, usize)> = None;
    let mut pairs = 0;
    for i in 0..walls.len() {
        for j in i + 1..walls.len() {
            pairs += 1;
            let (sep, generates) = match geometry::wall_relation(sys, &walls[i].root, &walls[j].root)? {
                WallRelation::ParallelDistinct => {
                    let q = parabolic::pc_of_reflections(&[walls[i].clone(), walls[j].clone()], b)?;
                    (geometry::wall_separation(sys, &walls[i].root, &walls[j].root)?, q == p)
                }
                // Meeting walls generate a finite dihedral group, whose
                // closure is spherical and so differs from Pc(w).
                _ => (0, false),
            };
            if !ctx.holds(generates) && worst.is_none_or(|(s, _, _)| sep > s) {
                worst = Some((sep, i, j));
            }
        }
    }
    let c = worst.map_or(0, |(s, _, _)| s);
    let verdict = match worst {
        Some((sep, i, j)) if sep > b.c_ceiling => Verdict::refuted(json!({
            "system": sys.name(),
            "w": w.to_string(),
            "walls": [wall_json(&walls[i]), wall_json(&walls[j])],
            "separation": sep,
            "closure": p.to_string(),
        })),
        _ => Verdict::verified(format!("{pairs} pairs of {} essential walls, C = {c}", walls.len())),
    };
    Ok((verdict, estimate(c as u64)))
}

/// `min{|m|, |n|, |m/n| + |n/m|}`.
pub fn kappa(m: i64, n: i64) -> Ratio<i64> {
    let (am, an) = (m.abs(), n.abs());
    let ratio = Ratio::new(am, an) + Ratio::new(an, am);
    Ratio::from_integer(am.min(an)).min(ratio)
}

/// For `g, h ∈ W₀`: `Pc(g) ∪ Pc(h) ⊆ Pc(g^m h^n)` once `κ(m, n) ≥ K`.
pub fn verify_product_closure(g: &Element, h: &Element, ctx: &Ctx) -> Result<(Verdict, ConstantEstimate)> {
    let b = &ctx.budget;
    let sys = g.system();
    if g.system().id() != h.system().id() {
        bail!(Input, "g and h belong to different systems");
    }
    for (name, x) in [("g", g), ("h", h)] {
        if !element::in_torsion_free_subgroup(x)? {
            bail!(Precondition, "{name} = {x} is not in the torsion-free subgroup W₀");
        }
    }
    let estimate = |value: u64| ConstantEstimate {
        name: "K",
        system: sys.name().to_string(),
        value,
        ceiling: b.k_ceiling as u64,
        units: "exponent bound",
    };
    if b.grid == 0 {
        return Ok((Verdict::inconclusive("empty exponent grid"), estimate(0)));
    }
    let pg = parabolic::pc_of_element(g, b)?;
    let ph = parabolic::pc_of_element(h, b)?;
    let mut targets = pg.reflections();
    targets.extend(ph.reflections());
    let grid = b.grid;
    let gp: Vec<Element> = (-grid..=grid).map(|m| g.pow(m)).collect();
    let hp: Vec<Element> = (-grid..=grid).map(|n| h.pow(n)).collect();
    let mut worst: Option<(Ratio<i64>, i64, i64)> = None;
    for m in (-grid..=grid).filter(|&m| m != 0) {
        for n in (-grid..=grid).filter(|&n| n != 0) {
            let x = gp[(m + grid) as usize].mul_unchecked(&hp[(n + grid) as usize]);
            let q = parabolic::pc_of_element(&x, b)?;
            let mut ok = true;
            for t in &targets {
                ok &= q.contains(t)?;
            }
            let k = kappa(m, n);
            if !ctx.holds(ok) && worst.is_none_or(|(w, _, _)| k > w) {
                worst = Some((k, m, n));
            }
        }
    }
    let k = worst.map_or(1, |(w, _, _)| (w.to_integer() + 1) as u64);
    let verdict = match worst {
        Some((w, m, n)) if k > b.k_ceiling as u64 => Verdict::refuted(json!({
            "system": sys.name(),
            "g": g.to_string(),
            "h": h.to_string(),
            "m": m,
            "n": n,
            "kappa": w.to_string(),
        })),
        _ => Verdict::verified(format!("grid |m|,|n| ≤ {grid}, K = {k}")),
    };
    Ok((verdict, estimate(k)))
}

#[derive(Clone, Debug, Serialize)]
pub struct FundamentalOutcome {
    pub h: Element,
    pub pc_h: Parabolic,
    pub pc_group: Parabolic,
    pub candidates: usize,
}

/// Some `h ∈ H ∩ W₀` has `Pc(h)` of finite index in `Pc(H)`.
pub fn verify_fundamental(gens: &[Element], ctx: &Ctx) -> Result<(Verdict, FundamentalOutcome)> {
    let b = &ctx.budget;
    let dom = parabolic::dominant_cyclic_element(gens, b)?;
    let pc_group = parabolic::pc_of_subgroup(gens, b)?;
    let ok = parabolic::finite_index_in(&dom.closure, &pc_group)?;
    let outcome = FundamentalOutcome { h: dom.element, pc_h: dom.closure, pc_group, candidates: dom.candidates };
    let verdict = if b.power_cap == 0 {
        Verdict::inconclusive("zero power budget")
    } else if ctx.holds(ok) {
        Verdict::verified(format!("h = {} after {} candidates", outcome.h, outcome.candidates))
    } else {
        let sys = gens[0].system();
        Verdict::refuted(json!({
            "system": sys.name(),
            "gens": words(sys, gens),
            "h": outcome.h.to_string(),
            "pc_h": outcome.pc_h.to_string(),
            "pc_group": outcome.pc_group.to_string(),
        }))
    };
    Ok((verdict, outcome))
}

/// Whether consecutive half-spaces are strictly nested in one direction.
fn is_chain(sys: &System, chain: &[RootVector]) -> Result<bool> {
    let mut dir = None;
    for pair in chain.windows(2) {
        let rel = geometry::nesting_relation(sys, &pair[0], &pair[1])?;
        if !matches!(rel, Nesting::Subset | Nesting::Superset) || dir.is_some_and(|d| d != rel) {
            return Ok(false);
        }
        dir = Some(rel);
    }
    Ok(true)
}

fn is_direct_product(a: &Parabolic, b: &Parabolic, join: &Parabolic) -> Result<bool> {
    for r in a.reflections() {
        for s in b.reflections() {
            if !r.commutes_with(&s)? {
                return Ok(false);
            }
        }
    }
    Ok(join.rank() == a.rank() + b.rank())
}

fn irreducible(p: &Parabolic) -> bool {
    p.rank() > 0 && p.kind().is_irreducible
}

/// Two nested chains of half-spaces whose walls pairwise meet. With margin
/// `N` and `A′`, `B′` the chains with `N` half-spaces cut from each end,
/// exactly one holds: (i) `Pc(A ∪ B) = Pc(A) = Pc(B)` is irreducible affine
/// of rank 3, or (ii) all four closures are irreducible and
/// `Pc(A′ ∪ B) = Pc(A′) × Pc(B)`, `Pc(A ∪ B′) = Pc(A) × Pc(B′)`.
/// The least margin for which this holds is reported as `N`.
pub fn verify_grid_alternative(
    sys: &System,
    alpha: &[RootVector],
    beta: &[RootVector],
    ctx: &Ctx,
) -> Result<(Verdict, ConstantEstimate)> {
    let b = &ctx.budget;
    if alpha.len() < 2 || beta.len() < 2 {
        bail!(Precondition, "both chains need at least two half-spaces");
    }
    if !is_chain(sys, alpha)? || !is_chain(sys, beta)? {
        bail!(Precondition, "half-spaces are not strictly nested chains");
    }
    for a in alpha {
        for c in beta {
            if !matches!(geometry::wall_relation(sys, a, c)?, WallRelation::Transverse | WallRelation::Perpendicular) {
                bail!(Precondition, "walls {} and {} do not meet", a.display(), c.display());
            }
        }
    }
    let (k, l) = (alpha.len() - 1, beta.len() - 1);
    let ceiling = (k.min(l) - 1) / 2;
    let estimate = |value: usize| ConstantEstimate {
        name: "N",
        system: sys.name().to_string(),
        value: value as u64,
        ceiling: ceiling as u64,
        units: "half-spaces cut from each end",
    };
    let closure = |roots: &[&[RootVector]]| -> Result<Parabolic> {
        let refl: Vec<Reflection> =
            roots.iter().flat_map(|c| c.iter()).map(|r| Reflection::from_root(sys, r)).collect();
        parabolic::pc_of_reflections(&refl, b)
    };
    let pa = closure(&[alpha])?;
    let pb = closure(&[beta])?;
    let pab = closure(&[alpha, beta])?;
    let triangle = pab.kind().is_irreducible_affine() && pab.rank() == 3 && pa == pab && pb == pab;
    let mut tried = Vec::new();
    for n in 0..=ceiling {
        let a2 = &alpha[n..=k - n];
        let b2 = &beta[n..=l - n];
        let pa2 = closure(&[a2])?;
        let pb2 = closure(&[b2])?;
        let product = [&pa, &pa2, &pb, &pb2].iter().all(|p| irreducible(p))
            && is_direct_product(&pa2, &pb, &closure(&[a2, beta])?)?
            && is_direct_product(&pa, &pb2, &closure(&[alpha, b2])?)?;
        tried.push(json!({"margin": n, "triangle": triangle, "product": product}));
        if ctx.holds(triangle != product) {
            let case = if triangle { "Euclidean triangle" } else { "direct product" };
            return Ok((
                Verdict::verified(format!("{case} case from margin {n}, chains of {} and {}", k + 1, l + 1)),
                estimate(n),
            ));
        }
    }
    Ok((
        Verdict::refuted(json!({
            "system": sys.name(),
            "alpha": alpha.iter().map(RootVector::display).collect::<Vec<_>>(),
            "beta": beta.iter().map(RootVector::display).collect::<Vec<_>>(),
            "join": pab.to_string(),
            "margins": tried,
        })),
        estimate(ceiling),
    ))
}

/// The chain `α, wⁿα, w²ⁿα, …` of `len` half-spaces, for `(α, n)` a nesting
/// certificate of `w`.
pub fn nested_chain(w: &Element, alpha: &RootVector, n: u64, len: usize) -> Vec<RootVector> {
    let step = w.pow(n as i64);
    let mut out = vec![alpha.clone()];
    while out.len() < len {
        let next = geometry::act_on_root(&step, out.last().expect("non-empty"));
        out.push(next);
    }
    out
}

/// Searches the essential walls of the `pool` elements for two nested
/// chains of length `len` whose walls pairwise meet.
pub fn find_meeting_chains(
    pool: &[Element],
    len: usize,
    budget: &Budget,
) -> Result<Option<(Vec<RootVector>, Vec<RootVector>)>> {
    let Some(first) = pool.first() else { return Ok(None) };
    let sys = first.system();
    let mut chains: Vec<Vec<RootVector>> = Vec::new();
    for w in pool {
        let x = parabolic::power_into_w0(w, budget)?;
        for wall in parabolic::essential_walls(&x, budget)?.into_iter().take(4) {
            if let Some((root, n)) = element::nesting_certificate(&x, &wall.root, budget.power_cap)? {
                chains.push(nested_chain(&x, &root, n, len));
            }
        }
    }
    for (i, a) in chains.iter().enumerate() {
        'next: for c in &chains[i + 1..] {
            for x in a {
                for y in c {
                    if !matches!(
                        geometry::wall_relation(sys, x, y)?,
                        WallRelation::Transverse | WallRelation::Perpendicular
                    ) {
                        continue 'next;
                    }
                }
            }
            return Ok(Some((a.clone(), c.clone())));
        }
    }
    Ok(None)
}

/// Agreement counts for the three wall-residue conditions.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ResidueCounts {
    pub walls: usize,
    pub all_hold: usize,
    pub none_hold: usize,
}

/// For `L` essential and each wall `m` in the depth window: `m` perpendicular
/// to every wall of `W_L` ⇔ `r_m` centralizes `W_L` ⇔ the gallery distance
/// from the chambers of the `L`-residue to `m` is constant.
pub fn verify_wall_residue(sys: &System, l: GenSet, depth: usize, ctx: &Ctx) -> Result<(Verdict, ResidueCounts)> {
    let b = &ctx.budget;
    let kind = diagram::classify_subset(sys.matrix(), l)?;
    if l.is_empty() || !kind.is_essential {
        bail!(Precondition, "{kind} is not an essential type");
    }
    if depth == 0 || b.ball_size == 0 {
        return Ok((Verdict::inconclusive("zero depth window"), ResidueCounts::default()));
    }
    let roots = geometry::enumerate_roots(sys, depth, b.root_cap)?;
    let l_roots: Vec<&RootVector> = roots.iter().filter(|r| r.support().is_subset(l)).collect();
    let residue = sys.ball(l, 6.min(depth), b.ball_size)?;
    let gens: Vec<Element> = l.iter().map(|s| Element::generator(sys, s)).collect();
    let mut counts = ResidueCounts::default();
    for beta in &roots {
        counts.walls += 1;
        let mut perpendicular = true;
        for g in &l_roots {
            if geometry::wall_relation(sys, beta, g)? != WallRelation::Perpendicular {
                perpendicular = false;
                break;
            }
        }
        let r = Reflection::from_root(sys, beta).element;
        let mut centralizes = true;
        for s in &gens {
            centralizes &= r.commutes_with(s)?;
        }
        let distances: Vec<usize> = residue
            .iter()
            .map(|v| geometry::depth(sys, &RootVector(sys.apply_inverse_word(v.word(), &beta.0))) - 1)
            .collect();
        let bounded = distances.iter().all(|&d| d == distances[0]);
        if !ctx.holds(perpendicular == centralizes && centralizes == bounded) {
            return Ok((
                Verdict::refuted(json!({
                    "system": sys.name(),
                    "L": sys.matrix().subset_labels(l),
                    "wall": wall_json(&Reflection::from_root(sys, beta)),
                    "perpendicular": perpendicular,
                    "centralizes": centralizes,
                    "bounded": bounded,
                })),
                counts,
            ));
        }
        if centralizes {
            counts.all_hold += 1;
        } else {
            counts.none_hold += 1;
        }
    }
    Ok((
        Verdict::verified(format!(
            "{} walls of depth ≤ {depth}: {} satisfy all, {} none",
            counts.walls, counts.all_hold, counts.none_hold
        )),
        counts,
    ))
}

/// For pairwise commuting `w₁, …, w_t` of infinite order with infinite-order
/// product: every essential wall of the product is essential for some factor.
pub fn verify_factor_essential(factors: &[Element], ctx: &Ctx) -> Result<Verdict> {
    let b = &ctx.budget;
    let Some(first) = factors.first() else {
        bail!(Precondition, "no factors");
    };
    let sys = first.system();
    for (i, x) in factors.iter().enumerate() {
        if !has_infinite_order(x, b)? {
            bail!(Precondition, "factor {x} has finite order");
        }
        for y in &factors[i + 1..] {
            if !x.commutes_with(y)? {
                bail!(Precondition, "factors {x} and {y} do not commute");
            }
        }
    }
    let product = factors.iter().skip(1).try_fold(first.clone(), |acc, x| acc.mul(x))?;
    if !has_infinite_order(&product, b)? {
        bail!(Precondition, "the product {product} has finite order");
    }
    if b.root_depth == 0 || b.power_cap == 0 {
        return Ok(Verdict::inconclusive("zero root or power budget"));
    }
    let walls = parabolic::essential_walls(&product, b)?;
    let pushed: Vec<Element> = factors.iter().map(|x| parabolic::power_into_w0(x, b)).collect::<Result<_>>()?;
    for wall in &walls {
        let mut found = false;
        for x in &pushed {
            if element::nesting_certificate(x, &wall.root, b.power_cap)?.is_some() {
                found = true;
                break;
            }
        }
        if !ctx.holds(found) {
            return Ok(Verdict::refuted(json!({
                "system": sys.name(),
                "factors": words(sys, factors),
                "wall": wall_json(wall),
            })));
        }
    }
    Ok(Verdict::verified(format!("{} essential walls of the product, each essential for a factor", walls.len())))
}

/// For every nested triple `α ⊊ β ⊊ γ` among roots of depth ≤ `depth`:
/// `r_β ∈ Pc({r_α, r_γ})`.
#[allow(clippy::needless_range_loop)]
pub fn verify_three_parallels(sys: &System, depth: usize, ctx: &Ctx) -> Result<(Verdict, usize)> {
    let b = &ctx.budget;
    if depth == 0 {
        return Ok((Verdict::inconclusive("zero depth window"), 0));
    }
    let roots = geometry::enumerate_roots(sys, depth, b.root_cap)?;
    let n = roots.len();
    let depths: Vec<usize> = roots.iter().map(|r| geometry::depth(sys, r)).collect();
    let f = sys.field();
    // `sub[i][k] = (σ, τ)` records `σ·root_i ⊊ τ·root_k`. For positive roots
    // with parallel walls, a positive form means nested with the shallower
    // inside the deeper; a negative form means the two cover everything,
    // so `−root_i ⊊ root_k`.
    let mut sub: Vec<Vec<Option<(bool, bool)>>> = vec![vec![None; n]; n];
    let mut checked = 0;
    for i in 0..n {
        for k in i + 1..n {
            if geometry::wall_relation_by_form(sys, &roots[i], &roots[k]) != WallRelation::ParallelDistinct {
                continue;
            }
            let positive = f.sign(&sys.twice_b(&roots[i].0, &roots[k].0)) > 0;
            let (inner, outer) = if depths[i] < depths[k] { (i, k) } else { (k, i) };
            if positive {
                sub[inner][outer] = Some((true, true));
                sub[outer][inner] = Some((false, false));
            } else {
                sub[i][k] = Some((false, true));
                sub[k][i] = Some((false, true));
            }
            // Spot-check the shortcut against the chamber-based relation.
            if checked < NESTING_SPOT_CHECKS {
                checked += 1;
                let (x, y) = (roots[i].clone(), roots[k].clone());
                let expected = match (positive, inner == i) {
                    (true, true) => Nesting::Subset,
                    (true, false) => Nesting::Superset,
                    (false, _) => Nesting::CoverSides,
                };
                let actual = geometry::nesting_relation(sys, &x, &y)?;
                if actual != expected {
                    return Err(crate::Error::Consistency(format!(
                        "nesting of {} and {}: form and depth give {expected:?}, chambers give {actual:?}",
                        x.display(),
                        y.display()
                    )));
                }
            }
        }
    }
    let signed = |i: usize, sign: bool| if sign { roots[i].clone() } else { roots[i].negate() };
    let includes = |i: usize, si: bool, k: usize, sk: bool| match sub[i][k] {
        Some((a, c)) => a == si && c == sk,
        None => false,
    };
    let mut triples = 0;
    for i in 0..n {
        for k in 0..n {
            // Every triple is also met reversed and negated; both are counted.
            let Some((si, sk)) = sub[i][k] else { continue };
            let mut closure: Option<Parabolic> = None;
            for j in 0..n {
                for sj in [true, false] {
                    if !(includes(i, si, j, sj) && includes(j, sj, k, sk)) {
                        continue;
                    }
                    triples += 1;
                    let (alpha, beta, gamma) = (signed(i, si), signed(j, sj), signed(k, sk));
                    if closure.is_none() {
                        closure = Some(parabolic::pc_of_reflections(
                            &[Reflection::from_root(sys, &alpha), Reflection::from_root(sys, &gamma)],
                            b,
                        )?);
                    }
                    let p = closure.as_ref().expect("just set");
                    if !ctx.holds(p.contains_root(&beta)) {
                        return Ok((
                            Verdict::refuted(json!({
                                "system": sys.name(),
                                "alpha": alpha.display(),
                                "beta": beta.display(),
                                "gamma": gamma.display(),
                                "closure": p.to_string(),
                            })),
                            triples,
                        ));
                    }
                }
            }
        }
    }
    Ok((Verdict::verified(format!("{triples} nested triples among {n} roots of depth ≤ {depth}")), triples))
}

/// Pairs of parallel walls whose nesting shortcut is compared with the
/// chamber-based relation.
const NESTING_SPOT_CHECKS: usize = 64;

/// The orbit decomposition: each class closure is an irreducible
/// non-spherical component of `Pc(w)` normalized by `w`, and each pair of
/// classes lands in exactly one case of the trichotomy.
pub fn verify_orbits(w: &Element, ctx: &Ctx) -> Result<(Verdict, WallOrbitPartition)> {
    let b = &ctx.budget;
    let sys = w.system();
    let part = parabolic::orbit_components(w, b)?;
    let pc = &part.closure;
    let comps = diagram::irreducible_components(sys.matrix(), pc.generators())?;
    let u_inv = pc.conjugator().inverse();
    let mut problems = Vec::new();
    for (i, class) in part.classes.iter().enumerate() {
        let p = &class.closure;
        let support = p
            .reflections()
            .iter()
            .try_fold(GenSet::EMPTY, |acc, r| r.conjugate(&u_inv).map(|x| acc.union(x.support())))?;
        let is_component = comps.contains(&support) && support.len() == p.rank();
        let ok = is_component && p.kind().is_irreducible && !p.kind().is_spherical && p.conjugate(w)? == *p;
        if !ok {
            problems.push(json!({"class": i, "closure": p.to_string(), "component_of_pc": is_component}));
        }
    }
    for pair in &part.pairs {
        if !pair.checked {
            problems.push(json!({"pair": [pair.i, pair.j], "case": pair.case}));
        }
    }
    let verdict = if !ctx.holds(problems.is_empty()) {
        Verdict::refuted(json!({"system": sys.name(), "w": w.to_string(), "problems": problems}))
    } else {
        let affine = part.pairs.iter().filter(|p| p.case == PairCase::Affine).count();
        let product = part.pairs.iter().filter(|p| p.case == PairCase::Product).count();
        Verdict::verified(format!(
            "{} classes, {} pairs ({affine} affine, {product} product)",
            part.classes.len(),
            part.pairs.len()
        ))
    };
    Ok((verdict, part))
}

/// Whether `x` acts as a translation: `ρ(x) − 1` maps into the radical of the form.
pub fn is_translation(x: &Element) -> bool {
    let sys = x.system();
    !x.is_identity()
        && x.matrix()
            .minus_identity_columns(sys.field())
            .iter()
            .all(|c| (0..sys.rank()).all(|s| sys.pair_simple(c, s).is_zero()))
}

/// The planar example: `t` the shortest translation fixing the root of the
/// first generator `a`, `w = t·a`, and the second generator's wall `m_b`.
#[derive(Clone, Debug, Serialize)]
pub struct ParityExample {
    pub t: Element,
    pub w: Element,
    /// `(n, relation of m_b and w^n m_b)` for `n = 1..=8`.
    pub pattern: Vec<(u32, WallRelation)>,
}

pub fn affine_parity_example(sys: &System, ctx: &Ctx) -> Result<(Verdict, ParityExample)> {
    let b = &ctx.budget;
    let kind = diagram::classify_subset(sys.matrix(), sys.matrix().all())?;
    if !kind.is_irreducible_affine() || sys.rank() < 3 {
        bail!(Precondition, "the parity example needs an irreducible affine system of rank ≥ 3, got {kind}");
    }
    let alpha_a = RootVector::simple(sys, 0);
    let alpha_b = RootVector::simple(sys, 1);
    let ball = sys.ball(sys.matrix().all(), b.ball_radius.max(8), b.ball_size.max(1))?;
    let Some(t) = ball.iter().find(|x| is_translation(x) && geometry::act_on_root(x, &alpha_a) == alpha_a).cloned()
    else {
        return Ok((
            Verdict::inconclusive("no translation fixing the first wall in the ball"),
            ParityExample { t: Element::identity(sys), w: Element::identity(sys), pattern: Vec::new() },
        ));
    };
    let w = t.mul(&Element::generator(sys, 0))?;
    let mut pattern = Vec::new();
    let mut ok = true;
    for n in 1..=8u32 {
        let image = geometry::act_on_root(&w.pow(n as i64), &alpha_b);
        let rel = geometry::wall_relation(sys, &alpha_b, &image)?;
        let expected = if n % 2 == 0 { rel == WallRelation::ParallelDistinct } else { rel == WallRelation::Transverse };
        ok &= expected;
        pattern.push((n, rel));
    }
    let (orbit_verdict, part) = verify_orbits(&w, ctx)?;
    let affine = part.pairs.iter().any(|p| p.case == PairCase::Affine);
    let example = ParityExample { t, w, pattern };
    let verdict = if ctx.holds(ok && affine && orbit_verdict.is_verified()) {
        Verdict::verified(format!(
            "w = {}: walls meet for odd n and are parallel for even n ≤ 8; affine case present",
            example.w
        ))
    } else {
        Verdict::refuted(json!({
            "system": sys.name(),
            "w": example.w.to_string(),
            "pattern": example.pattern,
            "affine_pair_found": affine,
            "orbits": orbit_verdict,
        }))
    };
    Ok((verdict, example))
}
