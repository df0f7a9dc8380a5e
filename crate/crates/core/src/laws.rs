//! Algebraic laws of edges, each checkable by exhaustive evaluation, and a
//! simplifier that applies them left to right.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::formula::{Alphabet, AlphabetError, Formula};
use crate::semantics::{find_disagreement, LassoTrace, Position};
use crate::stutter::Bounds;
use crate::syntax::parse;

/// An equivalence between two templates over metavariables `A` and `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Law {
    pub name: &'static str,
    pub left: Formula,
    pub right: Formula,
    /// Whether [`simplify`] uses the law. Every law except the definition
    /// of the any-edge pushes edges inward or removes them.
    pub rewrites: bool,
}

const LAWS: [(&str, &str, &str); 23] = [
    ("always-up-edge", "[] up(A)", "false"),
    ("always-down-edge", "[] down(A)", "false"),
    ("up-edge-until", "up(A) U B", "B || (up(A) && X B)"),
    ("edge-not-up", "up(!A)", "down(A)"),
    ("edge-not-down", "down(!A)", "up(A)"),
    ("edge-not-any", "any(!A)", "any(A)"),
    ("up-and", "up(A && B)", "(up(A) && X B) || (up(B) && X A)"),
    ("up-or", "up(A || B)", "(up(A) && !B) || (up(B) && !A)"),
    ("down-and", "down(A && B)", "(down(A) && B) || (down(B) && A)"),
    ("down-or", "down(A || B)", "(down(A) && X !B) || (down(B) && !X A)"),
    ("down-down", "down(down(A))", "down(A)"),
    ("down-up", "down(up(A))", "up(A)"),
    ("up-down", "up(down(A))", "X down(A)"),
    ("up-up", "up(up(A))", "X up(A)"),
    ("up-next", "up(X A)", "X up(A)"),
    ("down-next", "down(X A)", "X down(A)"),
    ("up-always", "up([] A)", "up(A) && X [] A"),
    ("down-always", "down([] A)", "false"),
    ("up-eventually", "up(<> A)", "false"),
    ("down-eventually", "down(<> A)", "down(A) && X [] !A"),
    ("up-until", "up(A U B)", "!(A || B) && X (A U B)"),
    ("down-until", "down(A U B)", "B && !X (A U B)"),
    ("any-edge", "any(A)", "up(A) || down(A)"),
];

/// All laws, in a fixed order with stable names.
pub fn law_list() -> &'static [Law] {
    static LIST: OnceLock<Vec<Law>> = OnceLock::new();
    LIST.get_or_init(|| {
        LAWS.iter()
            .map(|&(name, l, r)| Law {
                name,
                left: parse(l).expect("law text parses"),
                right: parse(r).expect("law text parses"),
                rewrites: name != "any-edge",
            })
            .collect()
    })
}

pub fn law(name: &str) -> Option<&'static Law> {
    law_list().iter().find(|l| l.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawVerdict {
    Pass,
    Fail { trace: LassoTrace, position: Position },
}

impl LawVerdict {
    pub fn passed(&self) -> bool {
        *self == LawVerdict::Pass
    }
}

/// Compares both sides at every position of every lasso within `bounds`.
/// The metavariables `A`, `B` are read as atoms of `alphabet`.
pub fn verify_law(law: &Law, alphabet: &Alphabet, bounds: Bounds) -> Result<LawVerdict, AlphabetError> {
    Ok(
        match find_disagreement(&law.left, &law.right, alphabet, bounds.max_prefix, bounds.max_loop)? {
            None => LawVerdict::Pass,
            Some((trace, position)) => LawVerdict::Fail { trace, position },
        },
    )
}

/// Row of the JSON export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportedLaw {
    pub name: String,
    pub left_text: String,
    pub right_text: String,
}

pub fn export() -> Vec<ExportedLaw> {
    law_list()
        .iter()
        .map(|l| ExportedLaw {
            name: l.name.to_string(),
            left_text: l.left.to_string(),
            right_text: l.right.to_string(),
        })
        .collect()
}

fn bind(template: &Formula, target: &Formula, b: &mut BTreeMap<String, Formula>) -> bool {
    use Formula::*;
    match (template, target) {
        (Atom(m), _) => match b.get(m) {
            Some(v) => v == target,
            None => {
                b.insert(m.clone(), target.clone());
                true
            }
        },
        (Const(x), Const(y)) => x == y,
        (Not(t), Not(x))
        | (Next(t), Next(x))
        | (Always(t), Always(x))
        | (Eventually(t), Eventually(x))
        | (EdgeUp(t), EdgeUp(x))
        | (EdgeDown(t), EdgeDown(x))
        | (EdgeAny(t), EdgeAny(x)) => bind(t, x, b),
        (And(t1, t2), And(x1, x2))
        | (Or(t1, t2), Or(x1, x2))
        | (Implies(t1, t2), Implies(x1, x2))
        | (Until(t1, t2), Until(x1, x2))
        | (WeakUntil(t1, t2), WeakUntil(x1, x2))
        | (Precedes(t1, t2), Precedes(x1, x2)) => bind(t1, x1, b) && bind(t2, x2, b),
        (IfThenElse(t1, t2, t3), IfThenElse(x1, x2, x3)) => {
            bind(t1, x1, b) && bind(t2, x2, b) && bind(t3, x3, b)
        }
        _ => false,
    }
}

/// Rewrites at the root with the first law whose left side matches.
fn rewrite_root(f: &Formula) -> Option<Formula> {
    law_list().iter().filter(|l| l.rewrites).find_map(|l| {
        let mut b = BTreeMap::new();
        bind(&l.left, f, &mut b).then(|| l.right.substitute(&b))
    })
}

/// Upper bound on rewrite steps for one call to [`simplify`].
pub const MAX_STEPS: usize = 100_000;

/// Applies the laws left to right, innermost first, until none applies.
/// Returns the result and the number of rewrite steps taken.
pub fn simplify_counted(f: &Formula) -> (Formula, usize) {
    let mut steps = 0;
    let out = normalize(f, &mut steps);
    (out, steps)
}

pub fn simplify(f: &Formula) -> Formula {
    simplify_counted(f).0
}

fn normalize(f: &Formula, steps: &mut usize) -> Formula {
    let mut g = f.map_children(|c| normalize(c, steps));
    while let Some(next) = rewrite_root(&g) {
        *steps += 1;
        assert!(*steps <= MAX_STEPS, "law rewriting did not terminate");
        // the right side's new subterms may enable rewrites below the root
        g = next.map_children(|c| normalize(c, steps));
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_three_unique_names() {
        let mut names: Vec<_> = law_list().iter().map(|l| l.name).collect();
        assert_eq!(names.len(), 23);
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 23);
    }

    #[test]
    fn simplify_examples() {
        assert_eq!(simplify(&parse("[] up(a)").unwrap()), Formula::ff());
        assert_eq!(simplify(&parse("up(up(a))").unwrap()), parse("X up(a)").unwrap());
        let plain = parse("p U q").unwrap();
        assert_eq!(simplify_counted(&plain), (plain, 0));
    }

    #[test]
    fn simplify_rewrites_below_new_nodes() {
        assert_eq!(
            simplify(&parse("up(up(!a))").unwrap()),
            parse("X down(a)").unwrap()
        );
    }
}
