//! The formula tree shared by every other module, plus the two lowering
//! passes (sugar and edges) that turn it into plain LTL.
//!
//! Weak until, precedes, if-then-else and the three edge operators are kept
//! as first-class nodes. The stuttering prover pattern-matches on edges and
//! implications directly, so nothing is expanded at parse time.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// An LTL formula with events (edges) and syntactic sugar.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Const(bool),
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `c ? t : e`, i.e. `(c && t) || (!c && e)`.
    IfThenElse(Box<Formula>, Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Always(Box<Formula>),
    Eventually(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    /// `a W b = [] a || (a U b)`.
    WeakUntil(Box<Formula>, Box<Formula>),
    /// `a P b = !(!a U b)`: `a` holds before `b` does, if `b` ever does.
    Precedes(Box<Formula>, Box<Formula>),
    /// Rising edge: `!a && X a`.
    EdgeUp(Box<Formula>),
    /// Falling edge: `a && X !a`.
    EdgeDown(Box<Formula>),
    /// Either edge.
    EdgeAny(Box<Formula>),
}

impl Formula {
    pub fn tt() -> Self {
        Formula::Const(true)
    }

    pub fn ff() -> Self {
        Formula::Const(false)
    }

    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn ite(c: Formula, t: Formula, e: Formula) -> Self {
        Formula::IfThenElse(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Formula::Always(Box::new(f))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn weak_until(a: Formula, b: Formula) -> Self {
        Formula::WeakUntil(Box::new(a), Box::new(b))
    }

    pub fn precedes(a: Formula, b: Formula) -> Self {
        Formula::Precedes(Box::new(a), Box::new(b))
    }

    pub fn up(f: Formula) -> Self {
        Formula::EdgeUp(Box::new(f))
    }

    pub fn down(f: Formula) -> Self {
        Formula::EdgeDown(Box::new(f))
    }

    pub fn any(f: Formula) -> Self {
        Formula::EdgeAny(Box::new(f))
    }

    /// Direct children, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Const(_) | Atom(_) => vec![],
            Not(a) | Next(a) | Always(a) | Eventually(a) | EdgeUp(a) | EdgeDown(a) | EdgeAny(a) => {
                vec![a]
            }
            And(a, b)
            | Or(a, b)
            | Implies(a, b)
            | Until(a, b)
            | WeakUntil(a, b)
            | Precedes(a, b) => vec![a, b],
            IfThenElse(c, t, e) => vec![c, t, e],
        }
    }

    /// Rebuilds this node with every child replaced by `f(child)`.
    pub fn map_children(&self, mut f: impl FnMut(&Formula) -> Formula) -> Formula {
        use Formula::*;
        let mut g = |x: &Formula| Box::new(f(x));
        match self {
            Const(_) | Atom(_) => self.clone(),
            Not(a) => Not(g(a)),
            Next(a) => Next(g(a)),
            Always(a) => Always(g(a)),
            Eventually(a) => Eventually(g(a)),
            EdgeUp(a) => EdgeUp(g(a)),
            EdgeDown(a) => EdgeDown(g(a)),
            EdgeAny(a) => EdgeAny(g(a)),
            And(a, b) => {
                let a = g(a);
                And(a, g(b))
            }
            Or(a, b) => {
                let a = g(a);
                Or(a, g(b))
            }
            Implies(a, b) => {
                let a = g(a);
                Implies(a, g(b))
            }
            Until(a, b) => {
                let a = g(a);
                Until(a, g(b))
            }
            WeakUntil(a, b) => {
                let a = g(a);
                WeakUntil(a, g(b))
            }
            Precedes(a, b) => {
                let a = g(a);
                Precedes(a, g(b))
            }
            IfThenElse(c, t, e) => {
                let c = g(c);
                let t = g(t);
                IfThenElse(c, t, g(e))
            }
        }
    }

    /// Post-order enumeration of all subformulas, children before parents.
    /// Structurally identical subtrees are listed once per occurrence.
    pub fn subformulas(&self) -> Vec<&Formula> {
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            for c in f.children() {
                walk(c, out);
            }
            out.push(f);
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Atom names occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<String> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Formula::Atom(name) => Some(name.clone()),
                _ => None,
            })
            .collect()
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Height of the tree; a leaf has depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn is_sugar(&self) -> bool {
        matches!(
            self,
            Formula::WeakUntil(..) | Formula::Precedes(..) | Formula::IfThenElse(..)
        )
    }

    pub fn is_edge(&self) -> bool {
        matches!(
            self,
            Formula::EdgeUp(_) | Formula::EdgeDown(_) | Formula::EdgeAny(_)
        )
    }

    /// Number of weak-until, precedes and if-then-else nodes.
    pub fn sugar_count(&self) -> usize {
        self.subformulas().iter().filter(|f| f.is_sugar()).count()
    }

    /// Number of edge nodes.
    pub fn edge_count(&self) -> usize {
        self.subformulas().iter().filter(|f| f.is_edge()).count()
    }

    /// Replaces atoms by the formulas bound to them; unbound atoms stay.
    pub fn substitute(&self, bindings: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Atom(name) => bindings.get(name).cloned().unwrap_or_else(|| self.clone()),
            _ => self.map_children(|c| c.substitute(bindings)),
        }
    }

    /// Lowers `W`, `P` and `?:` into `[]`, `U`, `!`, `&&`, `||`.
    pub fn eliminate_sugar(&self) -> Formula {
        let f = self.map_children(Formula::eliminate_sugar);
        match f {
            Formula::WeakUntil(a, b) => Formula::or(
                Formula::always((*a).clone()),
                Formula::Until(a, b),
            ),
            Formula::Precedes(a, b) => {
                Formula::not(Formula::until(Formula::Not(a), *b))
            }
            Formula::IfThenElse(c, t, e) => Formula::or(
                Formula::and((*c).clone(), *t),
                Formula::and(Formula::Not(c), *e),
            ),
            other => other,
        }
    }

    /// Replaces every edge by its definition in terms of `!`, `&&`, `||`, `X`.
    pub fn eliminate_edges(&self) -> Formula {
        let f = self.map_children(Formula::eliminate_edges);
        match f {
            Formula::EdgeUp(a) => rising(*a),
            Formula::EdgeDown(a) => falling(*a),
            Formula::EdgeAny(a) => Formula::or(rising((*a).clone()), falling(*a)),
            other => other,
        }
    }

    /// Swaps every rising edge for a falling one.
    pub fn up_to_down(&self) -> Formula {
        let f = self.map_children(Formula::up_to_down);
        match f {
            Formula::EdgeUp(a) => Formula::EdgeDown(a),
            other => other,
        }
    }
}

fn rising(a: Formula) -> Formula {
    Formula::and(Formula::not(a.clone()), Formula::next(a))
}

fn falling(a: Formula) -> Formula {
    Formula::and(a.clone(), Formula::next(Formula::not(a)))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_canonical(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("atom names must be nonempty")]
    EmptyName,
    #[error("atom `{0}` is declared twice")]
    Duplicate(String),
    #[error("an alphabet holds at most {max} atoms, got {got}")]
    TooLarge { max: usize, got: usize },
    #[error("atom `{0}` is not in the alphabet")]
    Undeclared(String),
}

/// Ordered, duplicate-free list of atom names. The order fixes which bit of
/// a [`crate::semantics::State`] belongs to which atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// States are bitmasks in a `u64`.
    pub const MAX_ATOMS: usize = 64;

    pub fn new<I, S>(names: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > Self::MAX_ATOMS {
            return Err(AlphabetError::TooLarge {
                max: Self::MAX_ATOMS,
                got: names.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if n.is_empty() {
                return Err(AlphabetError::EmptyName);
            }
            if !seen.insert(n.as_str()) {
                return Err(AlphabetError::Duplicate(n.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    /// The atoms of `f`, in sorted order.
    pub fn of_formula(f: &Formula) -> Result<Self, AlphabetError> {
        Alphabet::new(f.atoms())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Fails with the first atom of `f` that is not declared here.
    pub fn covers(&self, f: &Formula) -> Result<(), AlphabetError> {
        match f.atoms().into_iter().find(|a| self.index_of(a).is_none()) {
            Some(missing) => Err(AlphabetError::Undeclared(missing)),
            None => Ok(()),
        }
    }
}
