//! Formula generators for property tests, benchmarks and the acceptance
//! sweeps: seeded random formulas and exhaustive enumeration by depth.

use rand::Rng;

use crate::formula::Formula;

const UNARY: usize = 7;
const BINARY: usize = 6;

fn unary(k: usize, a: Formula) -> Formula {
    match k {
        0 => Formula::not(a),
        1 => Formula::next(a),
        2 => Formula::always(a),
        3 => Formula::eventually(a),
        4 => Formula::up(a),
        5 => Formula::down(a),
        _ => Formula::any(a),
    }
}

fn binary(k: usize, a: Formula, b: Formula) -> Formula {
    match k {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::implies(a, b),
        3 => Formula::until(a, b),
        4 => Formula::weak_until(a, b),
        _ => Formula::precedes(a, b),
    }
}

/// A random formula of depth at most `max_depth` over `atoms`, using every
/// node kind. Leaves are constants one time in eight.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str], max_depth: usize) -> Formula {
    assert!(!atoms.is_empty());
    if max_depth == 0 || rng.gen_ratio(1, 5) {
        return if rng.gen_ratio(1, 8) {
            Formula::Const(rng.gen())
        } else {
            Formula::atom(atoms[rng.gen_range(0..atoms.len())])
        };
    }
    let d = max_depth - 1;
    match rng.gen_range(0..UNARY + BINARY + 1) {
        k if k < UNARY => unary(k, random_formula(rng, atoms, d)),
        k if k < UNARY + BINARY => binary(
            k - UNARY,
            random_formula(rng, atoms, d),
            random_formula(rng, atoms, d),
        ),
        _ => Formula::ite(
            random_formula(rng, atoms, d),
            random_formula(rng, atoms, d),
            random_formula(rng, atoms, d),
        ),
    }
}

/// Which node kinds [`all_formulas`] may use besides atoms, unary and
/// binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grammar {
    pub constants: bool,
    pub ite: bool,
}

impl Grammar {
    pub const FULL: Grammar = Grammar {
        constants: true,
        ite: true,
    };
    pub const OPERATORS: Grammar = Grammar {
        constants: false,
        ite: false,
    };
}

/// Every formula of depth at most `depth` over `atoms`. The count grows
/// doubly exponentially: with two atoms, depth 2 is about ten thousand
/// formulas without constants and if-then-else, millions with them.
pub fn all_formulas(atoms: &[&str], depth: usize, grammar: Grammar) -> Vec<Formula> {
    let mut level: Vec<Formula> = atoms.iter().map(|a| Formula::atom(*a)).collect();
    if grammar.constants {
        level.extend([Formula::tt(), Formula::ff()]);
    }
    let leaves = level.clone();
    for _ in 0..depth {
        let mut next = leaves.clone();
        for k in 0..UNARY {
            next.extend(level.iter().map(|a| unary(k, a.clone())));
        }
        for k in 0..BINARY {
            for a in &level {
                next.extend(level.iter().map(|b| binary(k, a.clone(), b.clone())));
            }
        }
        if grammar.ite {
            for c in &level {
                for t in &level {
                    next.extend(level.iter().map(|e| Formula::ite(c.clone(), t.clone(), e.clone())));
                }
            }
        }
        level = next;
    }
    level
}
