//! Command-line front end for the Coxeter group engine.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use coxeter::element::{self, Element};
use coxeter::parabolic::{self, Parabolic};
use coxeter::system::System;
use coxeter::theorems::suite::{self, SuiteConfig};
use coxeter::theorems::{self, Ctx, TheoremId};
use coxeter::{diagram, Budget, Error, Result, Verdict};

#[derive(Parser, Debug)]
#[command(name = "coxeter", version, about = "Exact computations in Coxeter groups")]
struct Cli {
    /// Preset name or path to a JSON matrix file.
    #[arg(long, global = true, default_value = "a2")]
    system: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Budget overrides, e.g. `power_cap=60,grid=8`, or `zero`.
    #[arg(long, global = true, default_value = "")]
    budget: String,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Record wall-clock times in reports (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    /// Multiplies every default budget before overrides are applied.
    #[arg(long, env = "COX_BUDGET_SCALE", global = true, hide_env_values = true)]
    budget_scale: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the diagram into irreducible components.
    Classify,
    /// ShortLex normal form of a word.
    Reduce {
        #[arg(long)]
        word: String,
    },
    /// Order of an element, with a certificate when infinite.
    Order {
        #[arg(long)]
        word: String,
    },
    /// Parabolic closure of an element, or of the subgroup generated by
    /// several `--word`s.
    Pc {
        #[arg(long, required = true)]
        word: Vec<String>,
    },
    /// Walls essential for an element.
    EssentialWalls {
        #[arg(long)]
        word: String,
    },
    /// Normalizer of `u W_J u⁻¹` for `J` of essential type.
    Normalizer {
        #[arg(long, default_value = "")]
        u: String,
        /// Comma-separated generator labels.
        #[arg(long)]
        j: String,
    },
    /// Pairs `(J, J′)` with `J′ ⊆ J⊥` spherical.
    Shells,
    /// Run one check on explicit inputs.
    Verify {
        #[arg(value_parser = parse_theorem)]
        theorem: TheoremId,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        h: Option<String>,
        /// Generators or factors (repeatable).
        #[arg(long = "gen")]
        gens: Vec<String>,
        /// Comma-separated generator labels.
        #[arg(long)]
        subset: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
        /// Half-spaces per chain for the grid check.
        #[arg(long, default_value_t = 7)]
        chain_len: usize,
    },
    /// Run every check over a corpus of systems.
    Suite {
        /// JSON suite configuration; command-line seed and budget apply on top.
        #[arg(long)]
        config: Option<std::path::PathBuf>,
        /// Comma-separated systems, overriding the configuration.
        #[arg(long)]
        systems: Option<String>,
        /// Test mode: report the first property evaluation of each check as failing.
        #[arg(long)]
        fault_injection: bool,
    },
}

fn parse_theorem(s: &str) -> std::result::Result<TheoremId, String> {
    TheoremId::parse(s).map_err(|e| e.to_string())
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Input(_) => "input",
        Error::Precondition(_) => "precondition",
        Error::Budget(_) => "budget",
        Error::Consistency(_) => "consistency",
        Error::Config(_) => "config",
    }
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Verified { .. } => 0,
        Verdict::Refuted { .. } => 1,
        Verdict::Inconclusive { .. } => 2,
    }
}

fn budget(cli: &Cli) -> Result<Budget> {
    let base = match cli.budget_scale {
        Some(f) if !(f.is_finite() && f >= 0.0) => {
            return Err(Error::Config(format!("COX_BUDGET_SCALE must be a non-negative number, got {f}")))
        }
        Some(f) => Budget::default().scaled(f),
        None => Budget::default(),
    };
    base.with_overrides(&cli.budget)
}

fn parse_subset(sys: &System, text: &str) -> Result<diagram::GenSet> {
    let labels: Vec<String> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
    sys.matrix().parse_subset(&labels)
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::Input(format!("--{flag} is required for this check")))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// Runs the command; returns the JSON document and the exit status.
fn run(cli: &Cli) -> Result<(Value, i32)> {
    let budget = budget(cli)?;
    if let Command::Suite { config, systems, fault_injection } = &cli.command {
        let mut cfg = match config {
            Some(path) => SuiteConfig::from_json(
                &std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
            )?,
            None => SuiteConfig { budget: budget.clone(), ..SuiteConfig::default() },
        };
        if config.is_none() || cli.seed != 0 {
            cfg.seed = cli.seed;
        }
        if !cli.budget.is_empty() || cli.budget_scale.is_some() {
            cfg.budget = budget;
        }
        if let Some(list) = systems {
            cfg.systems = list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        }
        cfg.fault_injection |= *fault_injection;
        cfg.timings |= cli.timings;
        let report = suite::run_suite(&cfg)?;
        let code = report.exit_code();
        return Ok((json!({"command": "suite", "result": to_value(&report)}), code));
    }
    let sys = suite::resolve_system(&cli.system)?;
    let el = |w: &str| Element::parse(&sys, w);
    let (name, result, code) = match &cli.command {
        Command::Classify => {
            let t = diagram::classify_subset(sys.matrix(), sys.matrix().all())?;
            let comps: Vec<Value> = t
                .components
                .iter()
                .map(|c| json!({"generators": sys.matrix().subset_labels(c.generators), "type": c.kind.to_string()}))
                .collect();
            let result = json!({
                "type": t.to_string(),
                "components": comps,
                "spherical": t.is_spherical,
                "essential": t.is_essential,
                "irreducible": t.is_irreducible,
            });
            ("classify", result, 0)
        }
        Command::Reduce { word } => {
            let w = el(word)?;
            ("reduce", json!({"word": word, "normal_form": w.to_string(), "length": w.len()}), 0)
        }
        Command::Order { word } => {
            let w = el(word)?;
            let o = element::order_of(&w, budget.power_cap, budget.root_depth)?;
            let code = if matches!(o, element::OrderResult::Unknown { .. }) { 2 } else { 0 };
            ("order", json!({"word": w.to_string(), "order": to_value(&o)}), code)
        }
        Command::Pc { word } => {
            let gens: Vec<Element> = word.iter().map(|w| el(w)).collect::<Result<_>>()?;
            let p = parabolic::pc_of_subgroup(&gens, &budget)?;
            ("pc", json!({"gens": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(), "closure": to_value(&p)}), 0)
        }
        Command::EssentialWalls { word } => {
            let w = el(word)?;
            let walls = parabolic::essential_walls(&w, &budget)?;
            let roots: Vec<String> = walls.iter().map(|r| r.root.display()).collect();
            let result = json!({
                "word": w.to_string(),
                "root_depth": budget.root_depth,
                "walls": to_value(&walls),
                "roots": roots,
            });
            ("essential-walls", result, 0)
        }
        Command::Normalizer { u, j } => {
            let p = Parabolic::new(&el(u)?, parse_subset(&sys, j)?)?;
            let n = parabolic::normalizer_of(&p)?;
            ("normalizer", json!({"parabolic": to_value(&p), "normalizer": to_value(&n)}), 0)
        }
        Command::Shells => {
            let shells = diagram::shells(sys.matrix(), budget.rank_cap)?;
            let list: Vec<Value> = shells
                .iter()
                .map(|&(j, jp)| json!({"J": sys.matrix().subset_labels(j), "J_perp_part": sys.matrix().subset_labels(jp)}))
                .collect();
            ("shells", json!({"count": list.len(), "shells": list}), 0)
        }
        Command::Verify { theorem, word, g, h, gens, subset, depth, chain_len } => {
            let ctx = Ctx::new(budget.clone());
            let (inputs, verdict, constants) =
                verify(&sys, &ctx, *theorem, word, g, h, gens, subset, *depth, *chain_len)?;
            let code = verdict_code(&verdict);
            let result = json!({
                "theorem": theorem.as_str(),
                "inputs": inputs,
                "verdict": to_value(&verdict),
                "constants": to_value(&constants),
            });
            ("verify", result, code)
        }
        Command::Suite { .. } => unreachable!("handled above"),
    };
    Ok((json!({"command": name, "system": sys.name(), "result": result}), code))
}

#[allow(clippy::too_many_arguments)]
fn verify(
    sys: &System,
    ctx: &Ctx,
    id: TheoremId,
    word: &Option<String>,
    g: &Option<String>,
    h: &Option<String>,
    gens: &[String],
    subset: &Option<String>,
    depth: Option<usize>,
    chain_len: usize,
) -> Result<(Value, Verdict, Vec<theorems::ConstantEstimate>)> {
    let el = |w: &str| Element::parse(sys, w);
    let els = |ws: &[String]| -> Result<Vec<Element>> {
        if ws.is_empty() {
            return Err(Error::Input("at least one --gen is required for this check".into()));
        }
        ws.iter().map(|w| el(w)).collect()
    };
    Ok(match id {
        TheoremId::TwoWallGeneration => {
            let w = el(need(word, "word")?)?;
            let (v, c) = theorems::verify_two_wall_generation(&w, ctx)?;
            (json!({"w": w.to_string()}), v, vec![c])
        }
        TheoremId::ProductClosure => {
            let (g, h) = (el(need(g, "g")?)?, el(need(h, "h")?)?);
            let (v, c) = theorems::verify_product_closure(&g, &h, ctx)?;
            (json!({"g": g.to_string(), "h": h.to_string()}), v, vec![c])
        }
        TheoremId::Fundamental => {
            let gens = els(gens)?;
            let (v, o) = theorems::verify_fundamental(&gens, ctx)?;
            let inputs = json!({"gens": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(), "h": o.h.to_string()});
            (inputs, v, Vec::new())
        }
        TheoremId::GridAlternative => {
            let (g, h) = (el(need(g, "g")?)?, el(need(h, "h")?)?);
            let Some((alpha, beta)) = theorems::find_meeting_chains(&[g.clone(), h.clone()], chain_len, &ctx.budget)?
            else {
                return Err(Error::Precondition(format!(
                    "no two nested chains of {chain_len} half-spaces with pairwise meeting walls from the walls of {g} and {h}"
                )));
            };
            let (v, c) = theorems::verify_grid_alternative(sys, &alpha, &beta, ctx)?;
            let show = |c: &[coxeter::geometry::RootVector]| c.iter().map(|r| r.display()).collect::<Vec<_>>();
            (json!({"g": g.to_string(), "h": h.to_string(), "alpha": show(&alpha), "beta": show(&beta)}), v, vec![c])
        }
        TheoremId::WallResidue => {
            let l = match subset {
                Some(s) => parse_subset(sys, s)?,
                None => diagram::essential_core(sys.matrix(), sys.matrix().all())?,
            };
            let depth = depth.unwrap_or(ctx.budget.window_depth.min(12));
            let (v, _) = theorems::verify_wall_residue(sys, l, depth, ctx)?;
            (json!({"L": sys.matrix().subset_labels(l), "depth": depth}), v, Vec::new())
        }
        TheoremId::FactorEssential => {
            let factors = els(gens)?;
            let v = theorems::verify_factor_essential(&factors, ctx)?;
            (json!({"factors": factors.iter().map(|g| g.to_string()).collect::<Vec<_>>()}), v, Vec::new())
        }
        TheoremId::ThreeParallels => {
            let depth = depth.unwrap_or(10);
            let (v, _) = theorems::verify_three_parallels(sys, depth, ctx)?;
            (json!({"depth": depth}), v, Vec::new())
        }
        TheoremId::Orbits => {
            let w = el(need(word, "word")?)?;
            let (v, part) = theorems::verify_orbits(&w, ctx)?;
            (json!({"w": w.to_string(), "classes": part.classes.len()}), v, Vec::new())
        }
        TheoremId::FewOpenSubgroups => {
            let v = diagram::few_open_subgroups_check(sys.matrix())?;
            (json!({}), v, Vec::new())
        }
    })
}

fn emit(cli_out: Option<&std::path::Path>, pretty: bool, doc: &Value) -> std::io::Result<()> {
    let mut text = if pretty { serde_json::to_string_pretty(doc) } else { serde_json::to_string(doc) }
        .expect("JSON values serialize");
    text.push('\n');
    match cli_out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let doc = json!({"error": {"kind": "usage", "message": e.to_string()}});
            let _ = emit(None, false, &doc);
            return ExitCode::from(3);
        }
    };
    let (doc, code) = match run(&cli) {
        Ok(x) => x,
        Err(e) => (json!({"error": {"kind": error_kind(&e), "message": e.to_string()}}), e.exit_code()),
    };
    if let Err(e) = emit(cli.out.as_deref(), cli.pretty, &doc) {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(code as u8)
}
