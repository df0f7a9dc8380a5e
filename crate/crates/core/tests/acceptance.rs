//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::oracle;
use edge_patterns::catalog::{all_cells, derivation_fixtures, Catalog, DERIVATION_FINAL};
use edge_patterns::generate::{all_formulas, random_formula, Grammar};
use edge_patterns::laws::{law_list, verify_law, LawVerdict};
use edge_patterns::semantics::{Compiled, Scratch};
use edge_patterns::stutter::prover::BROKEN_SCHEMA;
use edge_patterns::stutter::{check_syntactic, falsify, validate_schema, validate_schemas};
use edge_patterns::{
    enumerate_traces, parse, print_canonical, Alphabet, Bounds, CheckOptions, CusVerdict, Formula, Variant,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BOUNDS: Bounds = Bounds::new(3, 2);
const WORKERS: usize = 4;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn catalog_sweep() -> Outcome {
    let cells = all_cells();
    for id in &cells {
        let t = Catalog::builtin()
            .template(*id, Variant::Corrected)
            .map_err(|e| e.to_string())?;
        if !check_syntactic(&t).is_proved() {
            return Err(format!("{id} not proved"));
        }
        let alphabet = Alphabet::of_formula(&t).map_err(|e| e.to_string())?;
        if let CusVerdict::Refuted(c) = falsify(&t, &alphabet, BOUNDS, WORKERS).map_err(|e| e.to_string())? {
            return Err(format!("{id} refuted on {} at {}", c.trace, c.stutter_index));
        }
    }
    Ok(format!("{} cells proved, no counterexample at {BOUNDS}", cells.len()))
}

fn response_chain() -> Outcome {
    let f = parse("[]((S && X <>T) -> X <>(T && <>P))").unwrap();
    let alphabet = Alphabet::new(["P", "S", "T"]).unwrap();
    let CusVerdict::Refuted(c) = falsify(&f, &alphabet, BOUNDS, WORKERS).unwrap() else {
        return Err("not refuted".into());
    };
    let t = &c.trace;
    let word_ok = t.prefix().len() == 1
        && t.cycle() == [0]
        && t.holds("S", 0) == Some(true)
        && t.holds("T", 0) == Some(true)
        && t.holds("P", 0) == Some(false);
    let stuttered = t.stutter_at(c.stutter_index).unwrap();
    let (before, after) = (oracle(&f, t, 0), oracle(&f, &stuttered, 0));
    if word_ok && c.stutter_index == 0 && before && !after {
        Ok(format!("{t}, stutter index 0, original true, stuttered false"))
    } else {
        Err(format!("{t} stuttered at {}: {before} -> {after}", c.stutter_index))
    }
}

fn law_suite() -> Outcome {
    let alphabet = Alphabet::new(["A", "B"]).unwrap();
    let start = Instant::now();
    for l in law_list() {
        if let LawVerdict::Fail { trace, position } = verify_law(l, &alphabet, BOUNDS).unwrap() {
            return Err(format!("{} fails on {trace} at {position}", l.name));
        }
    }
    Ok(format!("{} laws at {BOUNDS} in {:.2?}", law_list().len(), start.elapsed()))
}

fn derivation() -> Outcome {
    let good = parse(DERIVATION_FINAL).unwrap();
    for fx in derivation_fixtures() {
        let differs = oracle(&fx.formula, &fx.trace, 0) != oracle(&good, &fx.trace, 0);
        if !differs || !oracle(&fx.failure_mode, &fx.trace, 0) {
            return Err(format!("{}: witness {} does not show the failure", fx.name, fx.trace));
        }
    }
    if !check_syntactic(&good).is_proved() {
        return Err("final formula not proved".into());
    }
    Ok("3 buggy steps have witnesses, final formula proved".into())
}

fn schema_validation() -> Outcome {
    let opts = CheckOptions {
        bounds: BOUNDS,
        workers: WORKERS,
    };
    let reports = validate_schemas(opts).map_err(|e| e.to_string())?;
    if validate_schema(&BROKEN_SCHEMA, opts).is_ok() {
        return Err("broken schema survived".into());
    }
    // the until theorem once more with six distinct atoms, no symmetry reduction
    let until = parse("(!up(A) || X B || C) U (up(D) && X E && F)").unwrap();
    let six = Alphabet::of_formula(&until).unwrap();
    if let CusVerdict::Refuted(c) = falsify(&until, &six, BOUNDS, WORKERS).unwrap() {
        return Err(format!("until theorem refuted on {}", c.trace));
    }
    let total: usize = reports.iter().map(|r| r.instantiations).sum();
    Ok(format!(
        "{} schemas, {total} instantiations, six-atom until theorem clean, broken schema refuted",
        reports.len()
    ))
}

/// All formulas of depth 1, all operator-only formulas of depth 2, and a
/// seeded sample up to depth 4; the full depth-4 space is far too large.
fn oracle_agreement() -> Outcome {
    let atoms = ["a", "b"];
    let alphabet = Alphabet::new(atoms).unwrap();
    let traces: Vec<_> = enumerate_traces(&alphabet, 2, 2).collect();
    let mut formulas = all_formulas(&atoms, 1, Grammar::FULL);
    formulas.extend(all_formulas(&atoms, 2, Grammar::OPERATORS));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    formulas.extend((0..5000).map(|_| random_formula(&mut rng, &atoms, 4)));
    let mut scratch = Scratch::default();
    let mut checks = 0usize;
    for f in &formulas {
        let c = Compiled::new(f, &alphabet).unwrap();
        for t in &traces {
            let fast = c.eval_positions(t, &mut scratch);
            for (j, &v) in fast.iter().enumerate() {
                checks += 1;
                if v != oracle(f, t, j) {
                    return Err(format!("{f} on {t} at {j}"));
                }
            }
        }
    }
    Ok(format!(
        "{} formulas x {} traces, {checks} positions, 0 mismatches",
        formulas.len(),
        traces.len()
    ))
}

fn roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let atoms = ["a", "b", "c", "door_open"];
    for _ in 0..10_000 {
        let f: Formula = random_formula(&mut rng, &atoms, 6);
        let text = print_canonical(&f);
        match parse(&text) {
            Ok(g) if g == f => {}
            other => return Err(format!("{text}: {other:?}")),
        }
    }
    Ok("10000 formulas".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("catalog stutter sweep", catalog_sweep),
        ("response chain refutation", response_chain),
        ("law suite", law_suite),
        ("derivation fixtures", derivation),
        ("schema validation", schema_validation),
        ("semantics oracle agreement", oracle_agreement),
        ("parser roundtrip", roundtrip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
