//! Syntactic proofs of closure under stuttering.
//!
//! Formulas are first brought into a negation normal form without sugar,
//! implications or falling/any edges (`down(x)` becomes `up(!x)`). Proofs
//! are then built bottom-up from
//!
//! * closure rules: constants and atoms are closed, and `!`, `&&`, `||`,
//!   `[]`, `<>`, `U` of closed formulas are closed;
//! * the schemas of [`schemas`], matched modulo associativity,
//!   commutativity and units of `&&`/`||`, whose metavariables must be bound
//!   to closed formulas;
//! * equivalence-preserving splits: `[]` over a conjunctive normal form,
//!   `<>` over a disjunctive one, `U` over a conjunction on the left or a
//!   disjunction on the right, and the edge unfoldings
//!   `up(x) = !x && X x` and `!up(x) = x || X !x`.
//!
//! Every rule is either a semantic equivalence or a schema that
//! [`super::validate_schemas`] checks exhaustively, so a proof is trusted;
//! a failed search only means "unknown".

use std::collections::{BTreeMap, HashMap, HashSet};

use super::CusVerdict;
use crate::formula::Formula;
use crate::syntax::parse;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Nf {
    Const(bool),
    Atom(String),
    Meta(String),
    Not(Box<Nf>),
    And(Vec<Nf>),
    Or(Vec<Nf>),
    Next(Box<Nf>),
    Up(Box<Nf>),
    Always(Box<Nf>),
    Eventually(Box<Nf>),
    Until(Box<Nf>, Box<Nf>),
}

fn junction(is_and: bool, parts: Vec<Nf>) -> Nf {
    let unit = is_and;
    let mut flat = Vec::new();
    let mut nexts = Vec::new();
    for p in parts {
        match p {
            Nf::Const(c) if c == unit => {}
            Nf::Const(c) => return Nf::Const(c),
            Nf::And(ps) if is_and => flat.extend(ps),
            Nf::Or(ps) if !is_and => flat.extend(ps),
            other => flat.push(other),
        }
    }
    flat.retain(|p| match p {
        Nf::Next(x) => {
            nexts.push((**x).clone());
            false
        }
        _ => true,
    });
    if !nexts.is_empty() {
        // X a && X b = X (a && b), and likewise for ||
        let merged = if nexts.len() == 1 {
            nexts.pop().expect("one element")
        } else {
            junction(is_and, nexts)
        };
        match next(merged) {
            Nf::Const(c) if c == unit => {}
            Nf::Const(c) => return Nf::Const(c),
            n => flat.push(n),
        }
    }
    flat.sort();
    flat.dedup();
    match flat.len() {
        0 => Nf::Const(unit),
        1 => flat.pop().expect("one element"),
        _ if is_and => Nf::And(flat),
        _ => Nf::Or(flat),
    }
}

fn and(parts: Vec<Nf>) -> Nf {
    junction(true, parts)
}

fn or(parts: Vec<Nf>) -> Nf {
    junction(false, parts)
}

fn next(x: Nf) -> Nf {
    match x {
        Nf::Const(c) => Nf::Const(c),
        x => Nf::Next(Box::new(x)),
    }
}

fn up(x: Nf) -> Nf {
    match x {
        Nf::Const(_) => Nf::Const(false),
        x => Nf::Up(Box::new(x)),
    }
}

fn always(x: Nf) -> Nf {
    match x {
        Nf::Const(c) => Nf::Const(c),
        x => Nf::Always(Box::new(x)),
    }
}

fn eventually(x: Nf) -> Nf {
    match x {
        Nf::Const(c) => Nf::Const(c),
        x => Nf::Eventually(Box::new(x)),
    }
}

fn until(a: Nf, b: Nf) -> Nf {
    match (a, b) {
        (_, Nf::Const(c)) => Nf::Const(c),
        (Nf::Const(false), b) => b,
        (Nf::Const(true), b) => eventually(b),
        (a, b) => Nf::Until(Box::new(a), Box::new(b)),
    }
}

/// Negation, pushed inward as far as the operator set allows.
fn neg(x: &Nf) -> Nf {
    match x {
        Nf::Const(c) => Nf::Const(!c),
        Nf::Not(y) => (**y).clone(),
        Nf::And(ps) => or(ps.iter().map(neg).collect()),
        Nf::Or(ps) => and(ps.iter().map(neg).collect()),
        Nf::Next(y) => next(neg(y)),
        Nf::Always(y) => eventually(neg(y)),
        Nf::Eventually(y) => always(neg(y)),
        Nf::Atom(_) | Nf::Meta(_) | Nf::Up(_) | Nf::Until(..) => Nf::Not(Box::new(x.clone())),
    }
}

/// Normal form of `f`, or of `!f` when `negate` is set. Atoms named in
/// `metas` become metavariables.
fn normalize(f: &Formula, negate: bool, metas: &HashSet<&str>) -> Nf {
    use Formula as F;
    let go = |g: &Formula, n: bool| normalize(g, n, metas);
    let lit = |x: Nf| if negate { neg(&x) } else { x };
    match f {
        F::Const(b) => Nf::Const(*b != negate),
        F::Atom(name) if metas.contains(name.as_str()) => lit(Nf::Meta(name.clone())),
        F::Atom(name) => lit(Nf::Atom(name.clone())),
        F::Not(a) => go(a, !negate),
        F::And(a, b) if negate => or(vec![go(a, true), go(b, true)]),
        F::And(a, b) => and(vec![go(a, false), go(b, false)]),
        F::Or(a, b) if negate => and(vec![go(a, true), go(b, true)]),
        F::Or(a, b) => or(vec![go(a, false), go(b, false)]),
        F::Implies(a, b) if negate => and(vec![go(a, false), go(b, true)]),
        F::Implies(a, b) => or(vec![go(a, true), go(b, false)]),
        F::IfThenElse(c, t, e) => or(vec![
            and(vec![go(c, false), go(t, negate)]),
            and(vec![go(c, true), go(e, negate)]),
        ]),
        F::Next(a) => next(go(a, negate)),
        F::Always(a) if negate => eventually(go(a, true)),
        F::Always(a) => always(go(a, false)),
        F::Eventually(a) if negate => always(go(a, true)),
        F::Eventually(a) => eventually(go(a, false)),
        F::Until(a, b) => lit(until(go(a, false), go(b, false))),
        F::WeakUntil(a, b) => {
            // a W b = [] a || (a U b)
            let (a, b) = (go(a, false), go(b, false));
            lit(or(vec![always(a.clone()), until(a, b)]))
        }
        F::Precedes(a, b) => {
            // a P b = !(!a U b)
            let u = until(go(a, true), go(b, false));
            if negate {
                u
            } else {
                neg(&u)
            }
        }
        F::EdgeUp(a) => lit(up(go(a, false))),
        F::EdgeDown(a) => lit(up(go(a, true))),
        F::EdgeAny(a) => lit(or(vec![up(go(a, false)), up(go(a, true))])),
    }
}

fn to_formula(x: &Nf) -> Formula {
    let fold = |ps: &[Nf], op: fn(Formula, Formula) -> Formula| {
        let mut it = ps.iter().map(to_formula);
        let first = it.next().expect("junctions have two or more parts");
        it.fold(first, op)
    };
    match x {
        Nf::Const(b) => Formula::Const(*b),
        Nf::Atom(n) | Nf::Meta(n) => Formula::atom(n.clone()),
        Nf::Not(y) => Formula::not(to_formula(y)),
        Nf::And(ps) => fold(ps, Formula::and),
        Nf::Or(ps) => fold(ps, Formula::or),
        Nf::Next(y) => Formula::next(to_formula(y)),
        Nf::Up(y) => Formula::up(to_formula(y)),
        Nf::Always(y) => Formula::always(to_formula(y)),
        Nf::Eventually(y) => Formula::eventually(to_formula(y)),
        Nf::Until(a, b) => Formula::until(to_formula(a), to_formula(b)),
    }
}

type Binding = BTreeMap<String, Nf>;

fn substitute(t: &Nf, b: &Binding) -> Nf {
    match t {
        Nf::Meta(m) => b.get(m).cloned().unwrap_or_else(|| t.clone()),
        Nf::Const(_) | Nf::Atom(_) => t.clone(),
        Nf::Not(y) => neg(&substitute(y, b)),
        Nf::And(ps) => and(ps.iter().map(|p| substitute(p, b)).collect()),
        Nf::Or(ps) => or(ps.iter().map(|p| substitute(p, b)).collect()),
        Nf::Next(y) => next(substitute(y, b)),
        Nf::Up(y) => up(substitute(y, b)),
        Nf::Always(y) => always(substitute(y, b)),
        Nf::Eventually(y) => eventually(substitute(y, b)),
        Nf::Until(x, y) => until(substitute(x, b), substitute(y, b)),
    }
}

fn metas_of(t: &Nf, out: &mut Vec<String>) {
    match t {
        Nf::Meta(m) => {
            if !out.contains(m) {
                out.push(m.clone());
            }
        }
        Nf::Const(_) | Nf::Atom(_) => {}
        Nf::Not(y) | Nf::Next(y) | Nf::Up(y) | Nf::Always(y) | Nf::Eventually(y) => metas_of(y, out),
        Nf::And(ps) | Nf::Or(ps) => ps.iter().for_each(|p| metas_of(p, out)),
        Nf::Until(x, y) => {
            metas_of(x, out);
            metas_of(y, out);
        }
    }
}

fn parts_of(is_and: bool, x: &Nf) -> Vec<Nf> {
    match x {
        Nf::And(ps) if is_and => ps.clone(),
        Nf::Or(ps) if !is_and => ps.clone(),
        Nf::Const(c) if *c == is_and => Vec::new(),
        other => vec![other.clone()],
    }
}

/// All bindings extending `b` under which `t` equals `x`.
fn matches(t: &Nf, x: &Nf, b: &Binding) -> Vec<Binding> {
    match (t, x) {
        (Nf::Meta(m), _) => match b.get(m) {
            Some(v) if v == x => vec![b.clone()],
            Some(_) => Vec::new(),
            None => {
                let mut b = b.clone();
                b.insert(m.clone(), x.clone());
                vec![b]
            }
        },
        (Nf::And(tp), _) => match_junction(true, tp, &parts_of(true, x), b),
        (Nf::Or(tp), _) => match_junction(false, tp, &parts_of(false, x), b),
        (Nf::Not(ty), Nf::Not(xy))
        | (Nf::Next(ty), Nf::Next(xy))
        | (Nf::Up(ty), Nf::Up(xy))
        | (Nf::Always(ty), Nf::Always(xy))
        | (Nf::Eventually(ty), Nf::Eventually(xy)) => matches(ty, xy, b),
        (Nf::Until(ta, tb), Nf::Until(xa, xb)) => matches(ta, xa, b)
            .iter()
            .flat_map(|b1| matches(tb, xb, b1))
            .collect(),
        _ if t == x => vec![b.clone()],
        _ => Vec::new(),
    }
}

/// Matches the parts of a conjunction (or disjunction) template against
/// target parts. Structured template parts match one target part each or
/// are dropped when some constant choice of their metavariables turns them
/// into the unit; bare metavariables take whatever is left.
fn match_junction(is_and: bool, tparts: &[Nf], xparts: &[Nf], b: &Binding) -> Vec<Binding> {
    let mut ordered: Vec<&Nf> = tparts.iter().filter(|p| !matches!(p, Nf::Meta(_))).collect();
    let is_meta = |p: &&Nf, bound: bool| matches!(p, Nf::Meta(m) if b.contains_key(m) == bound);
    ordered.extend(tparts.iter().filter(|p| is_meta(p, true)));
    ordered.extend(tparts.iter().filter(|p| is_meta(p, false)));
    let mut out = Vec::new();
    junction_step(is_and, &ordered, xparts, &mut vec![false; xparts.len()], b.clone(), &mut out);
    out
}

fn junction_step(
    is_and: bool,
    tparts: &[&Nf],
    xparts: &[Nf],
    used: &mut Vec<bool>,
    b: Binding,
    out: &mut Vec<Binding>,
) {
    let Some((&t, rest)) = tparts.split_first() else {
        if used.iter().all(|u| *u) {
            out.push(b);
        }
        return;
    };
    if let Nf::Meta(m) = t {
        match b.get(m) {
            Some(v) => {
                let want = parts_of(is_and, v);
                let mut taken = Vec::new();
                for w in &want {
                    match (0..xparts.len()).find(|&j| !used[j] && !taken.contains(&j) && xparts[j] == *w) {
                        Some(j) => taken.push(j),
                        None => return,
                    }
                }
                taken.iter().for_each(|&j| used[j] = true);
                junction_step(is_and, rest, xparts, used, b, out);
                taken.iter().for_each(|&j| used[j] = false);
            }
            None => {
                let free: Vec<usize> = (0..xparts.len()).filter(|&j| !used[j]).collect();
                let value = junction(is_and, free.iter().map(|&j| xparts[j].clone()).collect());
                free.iter().for_each(|&j| used[j] = true);
                let mut b = b;
                b.insert(m.clone(), value);
                junction_step(is_and, rest, xparts, used, b, out);
                free.iter().for_each(|&j| used[j] = false);
            }
        }
        return;
    }
    for j in 0..xparts.len() {
        if used[j] {
            continue;
        }
        for b1 in matches(t, &xparts[j], &b) {
            used[j] = true;
            junction_step(is_and, rest, xparts, used, b1, out);
            used[j] = false;
        }
    }
    if let Some(b1) = drop_to_unit(is_and, t, &b) {
        junction_step(is_and, rest, xparts, used, b1, out);
    }
}

/// A constant choice for the unbound metavariables of `t` that makes it
/// the unit of the junction, if one exists.
fn drop_to_unit(is_and: bool, t: &Nf, b: &Binding) -> Option<Binding> {
    let mut free = Vec::new();
    metas_of(t, &mut free);
    free.retain(|m| !b.contains_key(m));
    for bits in 0u32..1 << free.len() {
        let mut b1 = b.clone();
        for (i, m) in free.iter().enumerate() {
            b1.insert(m.clone(), Nf::Const(bits >> i & 1 == 1));
        }
        if substitute(t, &b1) == Nf::Const(is_and) {
            return Some(b1);
        }
    }
    None
}

/// A proof-rule template. Metavariables are the capital letters `A`..`G`;
/// each must be instantiated with a closed formula.
#[derive(Debug, Clone, Copy)]
pub struct RuleSchema {
    pub name: &'static str,
    pub text: &'static str,
}

const META_NAMES: [&str; 7] = ["A", "B", "C", "D", "E", "F", "G"];

impl RuleSchema {
    pub fn template(&self) -> Formula {
        parse(self.text).expect("schema text parses")
    }

    /// Metavariables in order of first occurrence.
    pub fn metas(&self) -> Vec<String> {
        let mut out = Vec::new();
        metas_of(&self.normal_form(), &mut out);
        out
    }

    fn normal_form(&self) -> Nf {
        normalize(&self.template(), false, &META_NAMES.into_iter().collect())
    }

    /// The template with metavariables replaced by literals over at most
    /// `atoms` atoms, up to renaming of atoms and the sign of each atom's
    /// first occurrence.
    pub fn instantiations(&self, atoms: usize) -> Vec<Formula> {
        let metas = self.metas();
        let template = self.template();
        let names: Vec<String> = (0..atoms).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let mut out = Vec::new();
        let mut choice = Vec::new();
        literal_choices(metas.len(), atoms, 0, &mut choice, &mut |choice| {
            let bindings = metas
                .iter()
                .zip(choice)
                .map(|(m, &(atom, positive))| {
                    let a = Formula::atom(names[atom].clone());
                    (m.clone(), if positive { a } else { Formula::not(a) })
                })
                .collect();
            out.push(template.substitute(&bindings));
        });
        out
    }
}

/// An atom index and whether it appears negated.
type Literal = (usize, bool);

fn literal_choices(
    left: usize,
    atoms: usize,
    used: usize,
    choice: &mut Vec<Literal>,
    emit: &mut dyn FnMut(&[Literal]),
) {
    if left == 0 {
        emit(choice);
        return;
    }
    for atom in 0..used {
        for positive in [true, false] {
            choice.push((atom, positive));
            literal_choices(left - 1, atoms, used, choice, emit);
            choice.pop();
        }
    }
    if used < atoms {
        choice.push((used, true));
        literal_choices(left - 1, atoms, used + 1, choice, emit);
        choice.pop();
    }
}

const SCHEMAS: [RuleSchema; 6] = [
    // whenever an event happens, a closed formula holds from the next state
    RuleSchema {
        name: "always-after-event",
        text: "[](up(A) -> X B || C)",
    },
    // some event happens and a closed formula holds from the next state
    RuleSchema {
        name: "eventually-event",
        text: "<>(up(A) && X B && C)",
    },
    RuleSchema {
        name: "until-event",
        text: "(!up(A) || X B || C) U (up(D) && X E && F)",
    },
    // the same with a goal that is a closed formula rather than an event
    RuleSchema {
        name: "until-state",
        text: "(!up(A) || X B || C) U F",
    },
    // the invariant also holds where the goal event is detected
    RuleSchema {
        name: "until-event-guarded",
        text: "G U (up(D) && X E && F && G)",
    },
    // pending requests are answered before the closing event, or in the
    // state that detects it
    RuleSchema {
        name: "response-window",
        text: "((C -> (!up(A) U D)) && !up(A)) U (up(A) && (C -> D))",
    },
];

/// The schemas the prover trusts.
pub fn schemas() -> &'static [RuleSchema] {
    &SCHEMAS
}

/// Not closed under stuttering; validation must reject it.
pub const BROKEN_SCHEMA: RuleSchema = RuleSchema {
    name: "broken-next",
    text: "X A",
};

#[derive(Debug, Clone)]
struct Proof {
    rule: String,
    premises: Vec<Proof>,
}

impl Proof {
    fn leaf(rule: &str) -> Self {
        Proof {
            rule: rule.to_string(),
            premises: Vec::new(),
        }
    }

    fn node(rule: &str, premises: Vec<Proof>) -> Self {
        Proof {
            rule: rule.to_string(),
            premises,
        }
    }

    fn flatten(&self, out: &mut Vec<String>) {
        out.push(self.rule.clone());
        self.premises.iter().for_each(|p| p.flatten(out));
    }
}

const MAX_CLAUSES: usize = 64;
const MAX_DEPTH: usize = 48;

/// Clauses of a conjunctive normal form (`cnf = true`) or terms of a
/// disjunctive one, or `None` past [`MAX_CLAUSES`].
fn normal_form(x: &Nf, cnf: bool) -> Option<Vec<Vec<Nf>>> {
    match (x, cnf) {
        (Nf::And(ps), true) | (Nf::Or(ps), false) => {
            let mut out = Vec::new();
            for p in ps {
                out.extend(normal_form(p, cnf)?);
            }
            (out.len() <= MAX_CLAUSES).then_some(out)
        }
        (Nf::Or(ps), true) | (Nf::And(ps), false) => {
            let mut out: Vec<Vec<Nf>> = vec![Vec::new()];
            for p in ps {
                let sub = normal_form(p, cnf)?;
                let mut next = Vec::new();
                for a in &out {
                    for s in &sub {
                        next.push(a.iter().chain(s).cloned().collect());
                    }
                }
                if next.len() > MAX_CLAUSES {
                    return None;
                }
                out = next;
            }
            Some(out)
        }
        _ => Some(vec![vec![x.clone()]]),
    }
}

fn split(x: &Nf, cnf: bool) -> Option<Vec<Nf>> {
    let rebuild = if cnf { or } else { and };
    let mut out: Vec<Nf> = normal_form(x, cnf)?.into_iter().map(rebuild).collect();
    out.sort();
    out.dedup();
    Some(out)
}

/// Rewrites edge literals of a clause (`in_clause`) or term with
/// `up(x) = !x && X x` and `!up(x) = x || X !x`, except the literal at
/// `anchor`. Literals of the junction's own polarity are unfolded: inside
/// a clause both forms go, inside a term only `!up` does unless
/// `all_edges` is set.
fn unfold(lits: &[Nf], anchor: Option<usize>, in_clause: bool, all_edges: bool) -> Nf {
    let parts = lits
        .iter()
        .enumerate()
        .map(|(i, l)| match l {
            _ if Some(i) == anchor => l.clone(),
            Nf::Not(y) if matches!(**y, Nf::Up(_)) => {
                let Nf::Up(x) = &**y else { unreachable!() };
                or(vec![(**x).clone(), next(neg(x))])
            }
            Nf::Up(x) if in_clause || all_edges => and(vec![neg(x), next((**x).clone())]),
            _ => l.clone(),
        })
        .collect();
    if in_clause {
        or(parts)
    } else {
        and(parts)
    }
}

struct Prover {
    memo: HashMap<Nf, Option<Proof>>,
    active: HashSet<Nf>,
    schemas: Vec<(&'static str, Nf)>,
}

impl Prover {
    fn new() -> Self {
        Prover {
            memo: HashMap::new(),
            active: HashSet::new(),
            schemas: SCHEMAS.iter().map(|s| (s.name, s.normal_form())).collect(),
        }
    }

    fn prove(&mut self, x: &Nf, depth: usize) -> Option<Proof> {
        if let Some(p) = self.memo.get(x) {
            return p.clone();
        }
        if depth > MAX_DEPTH || !self.active.insert(x.clone()) {
            return None;
        }
        let result = self.prove_uncached(x, depth + 1);
        self.active.remove(x);
        self.memo.insert(x.clone(), result.clone());
        result
    }

    fn all(&mut self, rule: &str, parts: &[Nf], depth: usize) -> Option<Proof> {
        let mut premises = Vec::new();
        for p in parts {
            premises.push(self.prove(p, depth)?);
        }
        Some(Proof::node(rule, premises))
    }

    fn prove_uncached(&mut self, x: &Nf, depth: usize) -> Option<Proof> {
        match x {
            Nf::Const(_) | Nf::Atom(_) => Some(Proof::leaf("const-or-var")),
            Nf::Meta(_) | Nf::Next(_) | Nf::Up(_) => None,
            Nf::Not(y) => self.all("not", std::slice::from_ref(y), depth),
            Nf::And(ps) => self.all("and", ps, depth),
            Nf::Or(ps) => self.all("or", ps, depth),
            Nf::Always(y) => self
                .all("always", std::slice::from_ref(y), depth)
                .or_else(|| self.by_schema(x, depth))
                .or_else(|| self.split_always(y, depth)),
            Nf::Eventually(y) => self
                .all("eventually", std::slice::from_ref(y), depth)
                .or_else(|| self.by_schema(x, depth))
                .or_else(|| self.split_eventually(y, depth)),
            Nf::Until(a, b) => self
                .all("until", &[(**a).clone(), (**b).clone()], depth)
                .or_else(|| self.by_schema(x, depth))
                .or_else(|| self.split_until(a, b, depth)),
        }
    }

    fn by_schema(&mut self, x: &Nf, depth: usize) -> Option<Proof> {
        for i in 0..self.schemas.len() {
            let (name, template) = self.schemas[i].clone();
            for b in matches(&template, x, &Binding::new()) {
                if let Some(premises) = b
                    .values()
                    .filter(|v| !matches!(v, Nf::Const(_)))
                    .map(|v| self.prove(v, depth))
                    .collect::<Option<Vec<_>>>()
                {
                    let shown: Vec<String> = b
                        .iter()
                        .map(|(m, v)| format!("{m} := {}", to_formula(v)))
                        .collect();
                    return Some(Proof::node(&format!("{name} {{{}}}", shown.join(", ")), premises));
                }
            }
        }
        None
    }

    /// `[] (c1 && .. && cn) = [] c1 && .. && [] cn`, with edge unfolding
    /// inside clauses that are not closed as they stand.
    fn split_always(&mut self, body: &Nf, depth: usize) -> Option<Proof> {
        let clauses = split(body, true)?;
        if clauses.len() > 1 {
            let goals: Vec<Nf> = clauses.into_iter().map(always).collect();
            return self.all("always-over-and", &goals, depth);
        }
        let lits = parts_of(false, &clauses[0]);
        self.with_anchors(&lits, true, false, depth, always)
    }

    /// `<> (t1 || .. || tn) = <> t1 || .. || <> tn`, with edge unfolding
    /// inside terms.
    fn split_eventually(&mut self, body: &Nf, depth: usize) -> Option<Proof> {
        let terms = split(body, false)?;
        if terms.len() > 1 {
            let goals: Vec<Nf> = terms.into_iter().map(eventually).collect();
            return self.all("eventually-over-or", &goals, depth);
        }
        let lits = parts_of(true, &terms[0]);
        self.with_anchors(&lits, false, true, depth, eventually)
    }

    /// Tries unfolding every edge literal but one (the anchor a schema can
    /// use), or all of them.
    fn with_anchors(
        &mut self,
        lits: &[Nf],
        in_clause: bool,
        all_edges: bool,
        depth: usize,
        wrap: fn(Nf) -> Nf,
    ) -> Option<Proof> {
        let anchor_shape = |l: &Nf| {
            if in_clause {
                matches!(l, Nf::Not(y) if matches!(**y, Nf::Up(_)))
            } else {
                matches!(l, Nf::Up(_))
            }
        };
        let anchors = (0..lits.len())
            .filter(|&i| anchor_shape(&lits[i]))
            .map(Some)
            .chain([None]);
        let original = if in_clause { or(lits.to_vec()) } else { and(lits.to_vec()) };
        for anchor in anchors.collect::<Vec<_>>() {
            let unfolded = unfold(lits, anchor, in_clause, all_edges);
            if unfolded == original {
                continue;
            }
            if let Some(p) = self.prove(&wrap(unfolded), depth) {
                return Some(Proof::node("unfold-edges", vec![p]));
            }
        }
        None
    }

    fn split_until(&mut self, a: &Nf, b: &Nf, depth: usize) -> Option<Proof> {
        let left = split(a, true)?;
        if left.len() > 1 {
            // (a1 && a2) U b = (a1 U b) && (a2 U b)
            let goals: Vec<Nf> = left.into_iter().map(|c| until(c, b.clone())).collect();
            return self.all("until-over-and", &goals, depth);
        }
        let right = split(b, false)?;
        if right.len() > 1 {
            // a U (b1 || b2) = (a U b1) || (a U b2)
            let goals: Vec<Nf> = right.into_iter().map(|t| until(a.clone(), t)).collect();
            return self.all("until-over-or", &goals, depth);
        }
        let lits = parts_of(true, &right[0]);
        let unfolded = unfold(&lits, None, false, false);
        if unfolded != right[0] {
            let p = self.prove(&until(a.clone(), unfolded), depth)?;
            return Some(Proof::node("unfold-edges", vec![p]));
        }
        None
    }
}

/// Proves closure under stuttering from the rules above. Returns
/// [`CusVerdict::Proved`] with the rules in proof order, or
/// [`CusVerdict::Unknown`]; never a refutation.
pub fn check_syntactic(f: &Formula) -> CusVerdict {
    let x = normalize(f, false, &HashSet::new());
    match Prover::new().prove(&x, 0) {
        Some(proof) => {
            let mut rules = vec!["normalize".to_string()];
            proof.flatten(&mut rules);
            CusVerdict::Proved(rules)
        }
        None => CusVerdict::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(text: &str) -> Nf {
        normalize(&parse(text).unwrap(), false, &HashSet::new())
    }

    #[test]
    fn normal_form_lowers_sugar_and_edges() {
        assert_eq!(nf("a P b"), nf("!(!a U b)"));
        assert_eq!(nf("down(a)"), nf("up(!a)"));
        assert_eq!(nf("a -> b"), nf("b || !a"));
        assert_eq!(nf("X a && X b"), nf("X (b && a)"));
        assert_eq!(nf("up(true) || a"), nf("a"));
        assert_eq!(nf("!(a U b)"), Nf::Not(Box::new(nf("a U b"))));
    }

    #[test]
    fn junction_matching_drops_parts_to_units() {
        let t = SCHEMAS[0].normal_form();
        let found = matches(&t, &nf("[] !up(P)"), &Binding::new());
        assert!(found.iter().any(|b| b["B"] == Nf::Const(false) && b["C"] == Nf::Const(false)));
    }

    #[test]
    fn literal_instantiation_counts() {
        // restricted growth strings over 3 atoms with free signs after the
        // first occurrence
        let rs = RuleSchema {
            name: "t",
            text: "A && B",
        };
        assert_eq!(rs.instantiations(3).len(), 3);
        assert_eq!(SCHEMAS[2].instantiations(3).len(), 1248);
    }

    #[test]
    fn proves_propositional_and_rejects_next() {
        assert!(check_syntactic(&parse("a && !b").unwrap()).is_proved());
        assert_eq!(check_syntactic(&parse("X a").unwrap()), CusVerdict::Unknown);
    }
}
