mod config;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use edge_patterns::catalog::{all_cells, instantiate_with, Catalog, InstantiateOptions};
use edge_patterns::laws::{self, export as export_laws, law_list, simplify_counted, verify_law, LawVerdict};
use edge_patterns::stutter::{check, check_syntactic, falsify, validate_schemas};
use edge_patterns::{
    eval, parse, print_canonical, print_spin, Alphabet, CellId, CusVerdict, Formula, Law, LassoTrace,
    PatternInstance, Variant,
};
use serde_json::json;

use config::{BoundsArg, Config, Format};

const HOLDS: u8 = 0;
const FAILS: u8 = 1;
const USAGE: u8 = 2;
const UNKNOWN: u8 = 3;

/// Property patterns with events: catalog, evaluation and stuttering checks.
#[derive(Debug, Parser)]
#[command(name = "edge-patterns", version)]
struct Cli {
    /// Falsifier bounds as PREFIX,LOOP.
    #[arg(long, global = true, env = "EDGE_PATTERNS_BOUNDS", default_value = "3,2")]
    bounds: BoundsArg,
    /// Worker threads for exhaustive searches.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    workers: u16,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Use catalog formulas exactly as printed, without corrections.
    #[arg(long, global = true)]
    as_printed: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the catalog cells.
    List,
    /// Fill a cell's placeholders, e.g. `instantiate absence.globally.2 P=door`.
    Instantiate {
        cell: CellId,
        /// PLACEHOLDER=FORMULA
        bindings: Vec<String>,
        /// Use falling instead of rising edges.
        #[arg(long)]
        down_edges: bool,
    },
    /// Evaluate a formula or cell template on a trace file.
    Eval {
        formula: String,
        trace: PathBuf,
        #[arg(long, default_value_t = 0)]
        pos: usize,
    },
    /// Decide closure under stuttering.
    CheckCus { formula: String },
    /// Rewrite with the edge laws.
    Simplify { formula: String },
    /// Edge law utilities.
    Laws {
        #[command(subcommand)]
        action: LawsAction,
    },
    /// Validate prover schemas, laws and the catalog.
    Selftest {
        /// Also verify the law `LEFT == RIGHT`.
        #[arg(long, value_name = "LAW")]
        inject_law: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum LawsAction {
    /// Print the laws as JSON.
    Export,
    /// Check every law at the configured bounds.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = Config {
        bounds: cli.bounds.0,
        workers: cli.workers.into(),
        variant: if cli.as_printed {
            Variant::AsPrinted
        } else {
            Variant::Corrected
        },
        format: if cli.json { Format::Json } else { Format::Text },
    };
    let mut out = String::new();
    let code = match run(&mut out, cli.command, &config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            USAGE
        }
    };
    // a closed pipe (`| head`) is not worth reporting
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    ExitCode::from(code)
}

fn run(out: &mut String, command: Command, config: &Config) -> anyhow::Result<u8> {
    match command {
        Command::List => list(out, config),
        Command::Instantiate {
            cell,
            bindings,
            down_edges,
        } => instantiate(out, config, cell, &bindings, down_edges),
        Command::Eval { formula, trace, pos } => eval_cmd(out, config, &formula, &trace, pos),
        Command::CheckCus { formula } => check_cus(out, config, &formula),
        Command::Simplify { formula } => simplify(out, config, &formula),
        Command::Laws { action } => match action {
            LawsAction::Export => {
                print_json(out, &export_laws())?;
                Ok(HOLDS)
            }
            LawsAction::Verify => verify_laws(out, config, law_list()),
        },
        Command::Selftest { inject_law } => selftest(out, config, inject_law.as_deref()),
    }
}

/// A cell key or a formula.
fn formula_or_cell(text: &str, config: &Config) -> anyhow::Result<Formula> {
    if let Ok(id) = text.parse::<CellId>() {
        return Ok(Catalog::builtin().template(id, config.variant)?);
    }
    parse(text).with_context(|| format!("`{text}` is neither a cell key nor a formula"))
}

fn print_json(out: &mut String, value: &impl serde::Serialize) -> anyhow::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn list(out: &mut String, config: &Config) -> anyhow::Result<u8> {
    let rows = Catalog::builtin().export(config.variant);
    if config.format == Format::Json {
        print_json(out, &rows)?;
        return Ok(HOLDS);
    }
    for (id, row) in all_cells().iter().zip(&rows) {
        let mark = if row.corrected { "*" } else { " " };
        writeln!(out, "{:<28}{mark} {}", id.to_string(), row.template_text)?;
        if !row.notes.is_empty() {
            writeln!(out, "{:<30}{}", "", row.notes)?;
        }
    }
    Ok(HOLDS)
}

fn instantiate(out: &mut String, config: &Config, cell: CellId, bindings: &[String], down_edges: bool) -> anyhow::Result<u8> {
    let mut map = BTreeMap::new();
    for b in bindings {
        let (name, text) = b
            .split_once('=')
            .with_context(|| format!("binding `{b}` is not NAME=FORMULA"))?;
        let f = parse(text).with_context(|| format!("binding for {name}"))?;
        map.insert(name.trim().to_string(), f);
    }
    let inst = PatternInstance {
        pattern: cell.pattern,
        scope: cell.scope,
        combo: cell.combo,
        bindings: map,
    };
    let opts = InstantiateOptions {
        variant: config.variant,
        down_edges,
    };
    let f = instantiate_with(&inst, opts)?;
    if config.format == Format::Json {
        print_json(out, &json!({
            "cell": cell.to_string(),
            "formula": print_canonical(&f),
            "spin": print_spin(&f),
        }))?;
    } else {
        writeln!(out, "{}", print_canonical(&f))?;
        writeln!(out, "spin: {}", print_spin(&f))?;
    }
    Ok(HOLDS)
}

fn eval_cmd(out: &mut String, config: &Config, text: &str, trace: &PathBuf, pos: usize) -> anyhow::Result<u8> {
    let f = formula_or_cell(text, config)?;
    let data = std::fs::read_to_string(trace).with_context(|| format!("reading {}", trace.display()))?;
    let t = LassoTrace::from_json(&data).with_context(|| format!("parsing {}", trace.display()))?;
    let value = eval(&f, &t, pos)?;
    if config.format == Format::Json {
        print_json(out, &json!({ "formula": print_canonical(&f), "position": pos, "value": value }))?;
    } else {
        writeln!(out, "{value}")?;
    }
    Ok(if value { HOLDS } else { FAILS })
}

fn verdict_code(v: &CusVerdict) -> u8 {
    match v {
        CusVerdict::Proved(_) => HOLDS,
        CusVerdict::Refuted(_) => FAILS,
        CusVerdict::Unknown => UNKNOWN,
    }
}

fn check_cus(out: &mut String, config: &Config, text: &str) -> anyhow::Result<u8> {
    let f = formula_or_cell(text, config)?;
    let v = check(&f, config.check_options());
    if config.format == Format::Json {
        print_json(out, &v)?;
    } else {
        write!(out, "{v}")?;
    }
    Ok(verdict_code(&v))
}

fn simplify(out: &mut String, config: &Config, text: &str) -> anyhow::Result<u8> {
    let f = formula_or_cell(text, config)?;
    let (g, steps) = simplify_counted(&f);
    if config.format == Format::Json {
        print_json(out, &json!({
            "input": print_canonical(&f),
            "output": print_canonical(&g),
            "steps": steps,
        }))?;
    } else {
        writeln!(out, "{}", print_canonical(&g))?;
    }
    Ok(HOLDS)
}

fn law_alphabet() -> Alphabet {
    Alphabet::new(["A", "B"]).expect("valid alphabet")
}

fn verify_laws(out: &mut String, config: &Config, list: &[Law]) -> anyhow::Result<u8> {
    let alphabet = law_alphabet();
    let mut rows = Vec::new();
    for l in list {
        let verdict = verify_law(l, &alphabet, config.bounds)?;
        rows.push((l.name, verdict));
    }
    let failed = rows.iter().any(|(_, v)| !v.passed());
    if config.format == Format::Json {
        let report: Vec<_> = rows
            .iter()
            .map(|(name, v)| match v {
                LawVerdict::Pass => json!({ "name": name, "pass": true }),
                LawVerdict::Fail { trace, position } => {
                    json!({ "name": name, "pass": false, "trace": trace, "position": position })
                }
            })
            .collect();
        print_json(out, &report)?;
    } else {
        for (name, v) in &rows {
            match v {
                LawVerdict::Pass => writeln!(out, "pass  {name}")?,
                LawVerdict::Fail { trace, position } => writeln!(out, "FAIL  {name}: {trace} at {position}")?,
            }
        }
    }
    Ok(if failed { FAILS } else { HOLDS })
}

fn parse_injected(text: &str) -> anyhow::Result<Law> {
    let Some((left, right)) = text.split_once("==") else {
        bail!("injected law must read LEFT == RIGHT");
    };
    Ok(Law {
        name: "injected",
        left: parse(left.trim()).context("left side")?,
        right: parse(right.trim()).context("right side")?,
        rewrites: false,
    })
}

fn selftest(out: &mut String, config: &Config, inject: Option<&str>) -> anyhow::Result<u8> {
    let opts = config.check_options();
    let mut lines: Vec<(String, bool, String)> = Vec::new();

    match validate_schemas(opts) {
        Ok(reports) => {
            for r in reports {
                let detail = format!("{} instantiations, {:.2?}", r.instantiations, r.elapsed);
                lines.push((format!("schema {}", r.name), true, detail));
            }
        }
        Err(e) => lines.push((format!("schema {}", e.name), false, e.to_string())),
    }

    let mut list: Vec<Law> = laws::law_list().to_vec();
    if let Some(text) = inject {
        list.push(parse_injected(text)?);
    }
    let alphabet = law_alphabet();
    for l in &list {
        let (ok, detail) = match verify_law(l, &alphabet, config.bounds)? {
            LawVerdict::Pass => (true, String::new()),
            LawVerdict::Fail { trace, position } => (false, format!("{trace} at {position}")),
        };
        lines.push((format!("law {}", l.name), ok, detail));
    }

    let mut cells_ok = 0;
    let cells = all_cells();
    for id in &cells {
        let outcome = Catalog::builtin()
            .template(*id, config.variant)
            .map_err(|e| e.to_string())
            .and_then(|t| {
                if !check_syntactic(&t).is_proved() {
                    return Err("not proved".to_string());
                }
                let a = Alphabet::of_formula(&t).map_err(|e| e.to_string())?;
                match falsify(&t, &a, config.bounds, config.workers).map_err(|e| e.to_string())? {
                    CusVerdict::Refuted(c) => Err(format!("{} stuttered at {}", c.trace, c.stutter_index)),
                    _ => Ok(()),
                }
            });
        match outcome {
            Ok(()) => cells_ok += 1,
            Err(detail) => lines.push((format!("cell {id}"), false, detail)),
        }
    }
    lines.push((
        "catalog".to_string(),
        cells_ok == cells.len(),
        format!("{cells_ok}/{} cells closed under stuttering at {}", cells.len(), config.bounds),
    ));

    let failed = lines.iter().filter(|(_, ok, _)| !ok).count();
    if config.format == Format::Json {
        let report: Vec<_> = lines
            .iter()
            .map(|(name, ok, detail)| json!({ "check": name, "pass": ok, "detail": detail }))
            .collect();
        print_json(out, &report)?;
    } else {
        for (name, ok, detail) in &lines {
            let status = if *ok { "pass" } else { "FAIL" };
            writeln!(out, "{}", format!("{status}  {name:<30} {detail}").trim_end())?;
        }
        writeln!(out, "{} checks, {failed} failed", lines.len())?;
    }
    Ok(if failed == 0 { HOLDS } else { FAILS })
}
