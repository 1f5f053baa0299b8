//! Seeded batch runs of every check over a corpus of systems.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::*;
use crate::error::Error;
use crate::presets;

pub const REPORT_VERSION: &str = "1";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Preset names or paths to JSON matrix files.
    pub systems: Vec<String>,
    pub seed: u64,
    pub budget: Budget,
    /// Test mode: the first property evaluation of every check is reported
    /// as failing.
    pub fault_injection: bool,
    /// Record wall-clock times; off by default so reports are reproducible.
    pub timings: bool,
    /// Restrict to these checks; empty means all.
    pub theorems: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            systems: presets::SUITE.iter().map(|s| s.to_string()).collect(),
            seed: 0,
            budget: Budget::default(),
            fault_injection: false,
            timings: false,
            theorems: Vec::new(),
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<SuiteConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    fn theorem_ids(&self) -> Result<Vec<TheoremId>> {
        if self.theorems.is_empty() {
            return Ok(TheoremId::ALL.to_vec());
        }
        self.theorems.iter().map(|t| TheoremId::parse(t).map_err(|e| Error::Config(e.to_string()))).collect()
    }
}

/// Loads a preset by name, or a JSON matrix file when the argument names one.
pub fn resolve_system(spec: &str) -> Result<System> {
    if presets::NAMES.contains(&spec) {
        return presets::system(spec);
    }
    let path = std::path::Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{spec}: {e}")))?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
        return Ok(crate::system::CoxeterSystem::new(name, CoxeterMatrix::from_json(&text)?));
    }
    bail!(Input, "{spec:?} is neither a preset ({}) nor a readable file", presets::NAMES.join(", "))
}

use crate::diagram::CoxeterMatrix;

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub system: String,
    pub inputs: Value,
    pub verdict: Verdict,
    pub constants: Vec<ConstantEstimate>,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Skip {
    pub theorem: TheoremId,
    pub system: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub seed: u64,
    pub budget: Budget,
    pub systems: Vec<String>,
    pub theorems: BTreeMap<TheoremId, Vec<Entry>>,
    pub skipped: Vec<Skip>,
    pub worst: &'static str,
}

impl Report {
    /// 0 when everything verified, 1 on any refutation, 2 when something was
    /// inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.worst {
            "refuted" => 1,
            "inconclusive" => 2,
            _ => 0,
        }
    }

    pub fn entries(&self, id: TheoremId) -> &[Entry] {
        self.theorems.get(&id).map_or(&[], Vec::as_slice)
    }
}

pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    let systems: Vec<System> = config.systems.iter().map(|s| resolve_system(s)).collect::<Result<_>>()?;
    run_suite_on(&systems, config)
}

pub fn run_suite_on(systems: &[System], config: &SuiteConfig) -> Result<Report> {
    let ids = config.theorem_ids()?;
    let jobs: Vec<(usize, TheoremId, &System)> = ids
        .iter()
        .flat_map(|&id| systems.iter().map(move |s| (id, s)))
        .enumerate()
        .map(|(i, (id, s))| (i, id, s))
        .collect();
    let results: Vec<Result<JobOutput>> = jobs
        .par_iter()
        .map(|&(i, id, sys)| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let ctx = if config.fault_injection {
                Ctx::with_fault_injection(config.budget.clone())
            } else {
                Ctx::new(config.budget.clone())
            };
            let mut job = Job { sys, ctx, rng, timings: config.timings, out: JobOutput::default() };
            if config.budget.is_zero() {
                job.out.entries.push(Entry {
                    system: sys.name().to_string(),
                    inputs: json!({}),
                    verdict: Verdict::inconclusive("zero budget"),
                    constants: Vec::new(),
                    runtime_ms: 0,
                });
            } else {
                job.run(id)?;
            }
            Ok(job.out)
        })
        .collect();
    let mut theorems: BTreeMap<TheoremId, Vec<Entry>> = BTreeMap::new();
    let mut skipped = Vec::new();
    for (&(_, id, sys), res) in jobs.iter().zip(results) {
        let out = res?;
        theorems.entry(id).or_default().extend(out.entries);
        skipped.extend(out.skipped.into_iter().map(|reason| Skip {
            theorem: id,
            system: sys.name().to_string(),
            reason,
        }));
    }
    let worst =
        theorems.values().flatten().map(|e| &e.verdict).max_by_key(|v| v.severity()).map_or("verified", Verdict::label);
    Ok(Report {
        version: REPORT_VERSION,
        seed: config.seed,
        budget: config.budget.clone(),
        systems: systems.iter().map(|s| s.name().to_string()).collect(),
        theorems,
        skipped,
        worst,
    })
}

#[derive(Default)]
struct JobOutput {
    entries: Vec<Entry>,
    skipped: Vec<String>,
}

struct Job<'a> {
    sys: &'a System,
    ctx: Ctx,
    rng: ChaCha8Rng,
    timings: bool,
    out: JobOutput,
}

/// Draws per requested sample before giving up.
const SAMPLE_ATTEMPTS: usize = 200;

/// Longest random word drawn while sampling.
const MAX_SAMPLE_LEN: usize = 24;

impl Job<'_> {
    fn budget(&self) -> &Budget {
        &self.ctx.budget
    }

    fn push(&mut self, inputs: Value, started: Instant, res: Result<(Verdict, Vec<ConstantEstimate>)>) -> Result<()> {
        let (verdict, constants) = match res {
            Ok(x) => x,
            Err(Error::Budget(reason)) => (Verdict::inconclusive(reason), Vec::new()),
            Err(e) => return Err(e),
        };
        let runtime_ms = if self.timings { started.elapsed().as_millis() as u64 } else { 0 };
        self.out.entries.push(Entry { system: self.sys.name().to_string(), inputs, verdict, constants, runtime_ms });
        Ok(())
    }

    fn skip(&mut self, reason: impl Into<String>) {
        self.out.skipped.push(reason.into());
    }

    fn word(&self, x: &Element) -> String {
        x.to_string()
    }

    /// A random element; the length bound grows with `attempt` so that
    /// small groups still yield enough distinct samples.
    fn random_element(&mut self, attempt: usize, min_len: usize) -> Element {
        let all = self.sys.matrix().all();
        self.random_word_in(all, attempt, min_len)
    }

    fn random_word_in(&mut self, pool: GenSet, attempt: usize, min_len: usize) -> Element {
        let pool: Vec<u8> = pool.iter().map(|s| s as u8).collect();
        let max_len = (min_len + attempt / 8).clamp(1, MAX_SAMPLE_LEN);
        let len = self.rng.random_range(1..=max_len);
        let mut letters: Vec<u8> = Vec::with_capacity(len);
        while letters.len() < len {
            let s = pool[self.rng.random_range(0..pool.len())];
            if letters.last() != Some(&s) || pool.len() == 1 {
                letters.push(s);
            }
        }
        Element::from_letters(self.sys, &letters).expect("letters in range")
    }

    /// A random word in an irreducible non-spherical component of `S`,
    /// conjugated by a short random element.
    fn random_component_element(&mut self, components: &[GenSet], attempt: usize, min_len: usize) -> Element {
        let j = components[self.rng.random_range(0..components.len())];
        let y = self.random_word_in(j, attempt, min_len);
        let u = self.random_element(0, 3);
        y.conjugate(&u).expect("same system")
    }

    /// Up to `count` distinct random elements accepted by `keep`.
    fn sample(
        &mut self,
        count: usize,
        min_len: usize,
        mut keep: impl FnMut(&Element) -> Result<bool>,
    ) -> Result<Vec<Element>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for attempt in 0..count * SAMPLE_ATTEMPTS {
            if out.len() >= count {
                break;
            }
            let x = self.random_element(attempt, min_len);
            if seen.insert(x.clone()) && keep(&x)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    fn infinite_irreducible(&mut self, count: usize) -> Result<Vec<Element>> {
        let b = self.budget().clone();
        let keep = |x: &Element| -> Result<bool> {
            if !has_infinite_order(x, &b)? {
                return Ok(false);
            }
            let p = parabolic::pc_of_element(x, &b)?;
            Ok(p.kind().is_irreducible && !p.kind().is_spherical)
        };
        let kind = diagram::classify_subset(self.sys.matrix(), self.sys.matrix().all())?;
        if kind.is_irreducible {
            return self.sample(count, 6, keep);
        }
        // Random words in a reducible system almost never have an
        // irreducible closure, so draw inside the components instead.
        let components: Vec<GenSet> =
            kind.components.iter().filter(|c| !c.kind.is_spherical()).map(|c| c.generators).collect();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        if components.is_empty() {
            return Ok(out);
        }
        for attempt in 0..count * SAMPLE_ATTEMPTS {
            if out.len() >= count {
                break;
            }
            let x = self.random_component_element(&components, attempt, 6);
            if seen.insert(x.clone()) && keep(&x)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    fn infinite(&mut self, count: usize) -> Result<Vec<Element>> {
        let b = self.budget().clone();
        self.sample(count, 6, |x| has_infinite_order(x, &b))
    }

    fn run(&mut self, id: TheoremId) -> Result<()> {
        match id {
            TheoremId::TwoWallGeneration => self.two_wall(),
            TheoremId::ProductClosure => self.product_closure(),
            TheoremId::Fundamental => self.fundamental(),
            TheoremId::GridAlternative => self.grid(),
            TheoremId::WallResidue => self.wall_residue(),
            TheoremId::FactorEssential => self.factor_essential(),
            TheoremId::ThreeParallels => self.three_parallels(),
            TheoremId::Orbits => self.orbits(),
            TheoremId::FewOpenSubgroups => self.few_open(),
        }
    }

    fn two_wall(&mut self) -> Result<()> {
        let samples = self.infinite_irreducible(self.budget().samples)?;
        if samples.is_empty() {
            self.skip("no sampled element of infinite order with irreducible closure");
        }
        for w in samples {
            let t = Instant::now();
            let res = verify_two_wall_generation(&w, &self.ctx).map(|(v, c)| (v, vec![c]));
            self.push(json!({"w": self.word(&w)}), t, res)?;
        }
        Ok(())
    }

    fn product_closure(&mut self) -> Result<()> {
        let b = self.budget().clone();
        let mut pool: Vec<Element> = Vec::new();
        for x in self.sample(self.budget().samples * 2, 4, |_| Ok(true))? {
            let g = parabolic::power_into_w0(&x, &b)?;
            if !pool.contains(&g) {
                pool.push(g);
            }
        }
        // The identity is in W₀ but makes a degenerate pair; keep it only
        // when nothing else is available.
        if pool.len() > 1 {
            pool.retain(|g| !g.is_identity());
        }
        let mut pairs = Vec::new();
        let mut seen = HashSet::new();
        let n = pool.len();
        for _ in 0..n * n * 4 {
            if pairs.len() >= self.budget().samples || n == 0 {
                break;
            }
            let (i, j) = (self.rng.random_range(0..n), self.rng.random_range(0..n));
            if seen.insert((i, j)) {
                pairs.push((pool[i].clone(), pool[j].clone()));
            }
        }
        for (g, h) in pairs {
            let t = Instant::now();
            let res = verify_product_closure(&g, &h, &self.ctx).map(|(v, c)| (v, vec![c]));
            self.push(json!({"g": self.word(&g), "h": self.word(&h)}), t, res)?;
        }
        Ok(())
    }

    fn fundamental(&mut self) -> Result<()> {
        let mut groups: Vec<Vec<Element>> = Vec::new();
        if self.sys.rank() >= 3 {
            let e = |w: &[u8]| Element::from_letters(self.sys, w).expect("valid");
            groups.push(vec![e(&[0, 1]), e(&[1, 2])]);
        }
        let count = self.budget().samples.saturating_sub(groups.len());
        let mut seen = HashSet::new();
        for attempt in 0..count * 40 {
            if groups.len() >= self.budget().samples {
                break;
            }
            let (g, h) = (self.random_element(attempt, 4), self.random_element(attempt, 4));
            if g != h && seen.insert((g.clone(), h.clone())) {
                groups.push(vec![g, h]);
            }
        }
        for gens in groups {
            let t = Instant::now();
            let inputs = json!({"gens": gens.iter().map(|g| self.word(g)).collect::<Vec<_>>()});
            let res = verify_fundamental(&gens, &self.ctx).map(|(v, o)| {
                let v = match v {
                    Verdict::Verified { evidence } => {
                        Verdict::verified(format!("{evidence}; Pc(h) = {} in Pc(H) = {}", o.pc_h, o.pc_group))
                    }
                    other => other,
                };
                (v, Vec::new())
            });
            self.push(inputs, t, res)?;
        }
        Ok(())
    }

    fn grid(&mut self) -> Result<()> {
        let pool = self.infinite(8)?;
        let b = self.budget().clone();
        match find_meeting_chains(&pool, 7, &b)? {
            Some((alpha, beta)) => {
                let t = Instant::now();
                let inputs = json!({
                    "alpha": alpha.iter().map(RootVector::display).collect::<Vec<_>>(),
                    "beta": beta.iter().map(RootVector::display).collect::<Vec<_>>(),
                });
                let res = verify_grid_alternative(self.sys, &alpha, &beta, &self.ctx).map(|(v, c)| (v, vec![c]));
                self.push(inputs, t, res)?;
            }
            None => {
                self.skip("no two nested chains of 7 half-spaces with pairwise meeting walls among sampled elements")
            }
        }
        Ok(())
    }

    fn wall_residue(&mut self) -> Result<()> {
        let m = self.sys.matrix();
        let core = diagram::essential_core(m, m.all())?;
        if core.is_empty() {
            self.skip("the system has no essential subset");
            return Ok(());
        }
        let depth = self.budget().window_depth.min(12);
        let t = Instant::now();
        let res = verify_wall_residue(self.sys, core, depth, &self.ctx).map(|(v, _)| (v, Vec::new()));
        self.push(json!({"L": m.subset_labels(core), "depth": depth}), t, res)
    }

    fn factor_essential(&mut self) -> Result<()> {
        let b = self.budget().clone();
        let pool: Vec<Element> =
            self.infinite(12)?.iter().map(|x| parabolic::power_into_w0(x, &b)).collect::<Result<_>>()?;
        let mut lists: Vec<Vec<Element>> = Vec::new();
        for (i, x) in pool.iter().enumerate() {
            for y in &pool[i + 1..] {
                if lists.len() >= 4 {
                    break;
                }
                if x != y && x.commutes_with(y)? && has_infinite_order(&x.mul(y)?, &b)? {
                    lists.push(vec![x.clone(), y.clone()]);
                }
            }
        }
        // Commuting factors from distinct irreducible components.
        let comps = diagram::irreducible_components(self.sys.matrix(), self.sys.matrix().all())?;
        for x in &pool {
            let parts: Vec<Element> = comps.iter().map(|&k| parabolic::project(x, k)).collect();
            let mut inf = Vec::new();
            for p in parts {
                if has_infinite_order(&p, &b)? {
                    inf.push(p);
                }
            }
            if inf.len() >= 2 {
                lists.push(inf);
                break;
            }
        }
        lists.extend(pool.iter().take(2).map(|x| vec![x.clone()]));
        if lists.is_empty() {
            self.skip("no element of infinite order sampled");
        }
        for factors in lists {
            let t = Instant::now();
            let inputs = json!({"factors": factors.iter().map(|g| self.word(g)).collect::<Vec<_>>()});
            let res = verify_factor_essential(&factors, &self.ctx).map(|v| (v, Vec::new()));
            self.push(inputs, t, res)?;
        }
        Ok(())
    }

    fn three_parallels(&mut self) -> Result<()> {
        let b = self.budget().clone();
        let mut depth = b.window_depth.min(10);
        while depth > 1 && geometry::enumerate_roots(self.sys, depth, b.root_cap)?.len() > THREE_PARALLELS_ROOTS {
            depth -= 1;
        }
        let t = Instant::now();
        let res = verify_three_parallels(self.sys, depth, &self.ctx).map(|(v, _)| (v, Vec::new()));
        self.push(json!({"depth": depth}), t, res)
    }

    fn orbits(&mut self) -> Result<()> {
        let count = self.budget().samples.div_ceil(4);
        let samples = self.infinite(count)?;
        if samples.is_empty() {
            self.skip("no element of infinite order sampled");
        }
        for w in samples {
            let t = Instant::now();
            let res = verify_orbits(&w, &self.ctx).map(|(v, _)| (v, Vec::new()));
            self.push(json!({"w": self.word(&w)}), t, res)?;
        }
        let kind = diagram::classify_subset(self.sys.matrix(), self.sys.matrix().all())?;
        if kind.is_irreducible_affine() && self.sys.rank() == 3 {
            let t = Instant::now();
            let res = affine_parity_example(self.sys, &self.ctx).map(|(v, _)| (v, Vec::new()));
            self.push(json!({"example": "translation times reflection"}), t, res)?;
        }
        Ok(())
    }

    fn few_open(&mut self) -> Result<()> {
        let t = Instant::now();
        match diagram::few_open_subgroups_check(self.sys.matrix()) {
            Err(Error::Precondition(reason)) => {
                self.skip(reason);
                Ok(())
            }
            res => self.push(json!({}), t, res.map(|v| (v, Vec::new()))),
        }
    }
}

/// Largest root window the exhaustive triple check walks through in a suite run.
const THREE_PARALLELS_ROOTS: usize = 100;
