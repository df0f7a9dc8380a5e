//! Lasso traces and exact LTL evaluation over them.
//!
//! A lasso `prefix (loop)^ω` has `|prefix| + |loop|` distinct suffixes, so
//! every temporal operator is a fixpoint over that many positions: least
//! for `U`/`<>`, greatest for `[]`/`W`. The evaluator is bit-sliced: each
//! compiled node holds one `u64` per position whose 64 lanes are 64
//! independent traces of the same shape. Single-trace evaluation uses lane
//! zero; the falsifier fills all of them.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Alphabet, AlphabetError, Formula};

/// One state: bit `i` is the value of atom `i` of the alphabet.
pub type State = u64;

/// Index into the infinite word a lasso denotes.
pub type Position = usize;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("the loop of a lasso must contain at least one state")]
    EmptyLoop,
    #[error("state {state:#x} sets atoms outside an alphabet of {atoms}")]
    StateOutOfRange { state: State, atoms: usize },
    #[error("row {row} has {got} columns, expected {expected}")]
    RowWidth {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("stutter index {index} out of range: the lasso has {len} distinct positions")]
    StutterIndex { index: Position, len: usize },
    #[error("malformed trace file: {0}")]
    Json(#[from] serde_json::Error),
}

/// `prefix` followed by `loop` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "TraceFile", try_from = "TraceFile")]
pub struct LassoTrace {
    alphabet: Alphabet,
    prefix: Vec<State>,
    cycle: Vec<State>,
}

#[derive(Serialize, Deserialize)]
struct TraceFile {
    atoms: Vec<String>,
    prefix: Vec<Vec<bool>>,
    #[serde(rename = "loop")]
    cycle: Vec<Vec<bool>>,
}

fn state_mask(atoms: usize) -> State {
    if atoms >= 64 {
        !0
    } else {
        (1u64 << atoms) - 1
    }
}

impl TryFrom<TraceFile> for LassoTrace {
    type Error = TraceError;

    fn try_from(file: TraceFile) -> Result<Self, TraceError> {
        let alphabet = Alphabet::new(file.atoms)?;
        let width = alphabet.len();
        let mut row = 0;
        let mut decode = |rows: Vec<Vec<bool>>| -> Result<Vec<State>, TraceError> {
            rows.into_iter()
                .map(|cols| {
                    if cols.len() != width {
                        return Err(TraceError::RowWidth {
                            row,
                            expected: width,
                            got: cols.len(),
                        });
                    }
                    row += 1;
                    Ok(cols
                        .iter()
                        .enumerate()
                        .fold(0, |s, (i, &b)| s | (u64::from(b) << i)))
                })
                .collect()
        };
        let prefix = decode(file.prefix)?;
        let cycle = decode(file.cycle)?;
        LassoTrace::new(alphabet, prefix, cycle)
    }
}

impl From<LassoTrace> for TraceFile {
    fn from(t: LassoTrace) -> Self {
        let width = t.alphabet.len();
        let encode = |states: &[State]| -> Vec<Vec<bool>> {
            states
                .iter()
                .map(|s| (0..width).map(|i| s >> i & 1 == 1).collect())
                .collect()
        };
        TraceFile {
            prefix: encode(&t.prefix),
            cycle: encode(&t.cycle),
            atoms: t.alphabet.names().to_vec(),
        }
    }
}

impl LassoTrace {
    pub fn new(alphabet: Alphabet, prefix: Vec<State>, cycle: Vec<State>) -> Result<Self, TraceError> {
        if cycle.is_empty() {
            return Err(TraceError::EmptyLoop);
        }
        let mask = state_mask(alphabet.len());
        if let Some(&state) = prefix.iter().chain(&cycle).find(|&&s| s & !mask != 0) {
            return Err(TraceError::StateOutOfRange {
                state,
                atoms: alphabet.len(),
            });
        }
        Ok(LassoTrace {
            alphabet,
            prefix,
            cycle,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, TraceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serialization cannot fail")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn prefix(&self) -> &[State] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[State] {
        &self.cycle
    }

    /// Number of distinct suffixes: `|prefix| + |loop|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The representative of `i` among positions `0 .. len()`.
    pub fn class_of(&self, i: Position) -> usize {
        let p = self.prefix.len();
        if i < p {
            i
        } else {
            p + (i - p) % self.cycle.len()
        }
    }

    pub fn state_at(&self, i: Position) -> State {
        let c = self.class_of(i);
        let p = self.prefix.len();
        if c < p {
            self.prefix[c]
        } else {
            self.cycle[c - p]
        }
    }

    /// Value of atom `name` at position `i`, if the atom is declared.
    pub fn holds(&self, name: &str, i: Position) -> Option<bool> {
        let a = self.alphabet.index_of(name)?;
        Some(self.state_at(i) >> a & 1 == 1)
    }

    /// The first `n` states of the induced infinite word.
    pub fn unroll(&self, n: usize) -> Vec<State> {
        (0..n).map(|i| self.state_at(i)).collect()
    }

    /// Duplicates the state at `i` once. Inside the loop the loop is
    /// rotated rather than grown, so the result stays the same size class.
    pub fn stutter_at(&self, i: Position) -> Result<LassoTrace, TraceError> {
        if i >= self.len() {
            return Err(TraceError::StutterIndex {
                index: i,
                len: self.len(),
            });
        }
        let p = self.prefix.len();
        let (prefix, cycle) = if i < p {
            let mut prefix = self.prefix.clone();
            prefix.insert(i, self.prefix[i]);
            (prefix, self.cycle.clone())
        } else {
            let k = i - p;
            let l = self.cycle.len();
            let mut prefix = self.prefix.clone();
            prefix.extend_from_slice(&self.cycle[..=k]);
            prefix.push(self.cycle[k]);
            let cycle = (0..l).map(|m| self.cycle[(k + 1 + m) % l]).collect();
            (prefix, cycle)
        };
        Ok(LassoTrace {
            alphabet: self.alphabet.clone(),
            prefix,
            cycle,
        })
    }
}

fn fmt_state(alphabet: &Alphabet, s: State, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str("{")?;
    let mut first = true;
    for (i, name) in alphabet.names().iter().enumerate() {
        if s >> i & 1 == 1 {
            if !first {
                f.write_str(", ")?;
            }
            f.write_str(name)?;
            first = false;
        }
    }
    f.write_str("}")
}

impl fmt::Display for LassoTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("prefix [")?;
        for (i, &s) in self.prefix.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            fmt_state(&self.alphabet, s, f)?;
        }
        f.write_str("] loop [")?;
        for (i, &s) in self.cycle.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            fmt_state(&self.alphabet, s, f)?;
        }
        f.write_str("]")
    }
}

/// Every lasso with `|prefix| <= max_prefix` and `1 <= |loop| <= max_loop`,
/// exactly once. Order: prefix length, then loop length, then the states
/// read as a base-`2^m` number whose least significant digit is position 0
/// (so earlier positions vary fastest).
pub fn enumerate_traces(alphabet: &Alphabet, max_prefix: usize, max_loop: usize) -> TraceIter {
    TraceIter {
        alphabet: alphabet.clone(),
        max_prefix,
        max_loop,
        p: 0,
        l: 1,
        k: 0,
        done: max_loop == 0,
    }
}

/// Number of traces [`enumerate_traces`] yields.
pub fn count_traces(atoms: usize, max_prefix: usize, max_loop: usize) -> u128 {
    let s = 1u128 << atoms;
    (0..=max_prefix)
        .map(|p| {
            (1..=max_loop)
                .map(|l| s.pow((p + l) as u32))
                .sum::<u128>()
        })
        .sum()
}

/// Number of traces with exactly this prefix and loop length.
pub(crate) fn shape_count(atoms: usize, p: usize, l: usize) -> u128 {
    let bits = atoms * (p + l);
    assert!(bits < 128, "lasso shape too large to enumerate");
    1u128 << bits
}

/// The `k`-th trace of shape `(p, l)` in enumeration order.
pub(crate) fn decode_trace(alphabet: &Alphabet, p: usize, l: usize, k: u128) -> LassoTrace {
    let m = alphabet.len();
    let mask = state_mask(m) as u128;
    let states: Vec<State> = (0..p + l)
        .map(|j| ((k >> (m * j)) & mask) as State)
        .collect();
    LassoTrace {
        alphabet: alphabet.clone(),
        prefix: states[..p].to_vec(),
        cycle: states[p..].to_vec(),
    }
}

pub struct TraceIter {
    alphabet: Alphabet,
    max_prefix: usize,
    max_loop: usize,
    p: usize,
    l: usize,
    k: u128,
    done: bool,
}

impl Iterator for TraceIter {
    type Item = LassoTrace;

    fn next(&mut self) -> Option<LassoTrace> {
        if self.done {
            return None;
        }
        let t = decode_trace(&self.alphabet, self.p, self.l, self.k);
        self.k += 1;
        if self.k == shape_count(self.alphabet.len(), self.p, self.l) {
            self.k = 0;
            self.l += 1;
            if self.l > self.max_loop {
                self.l = 1;
                self.p += 1;
                self.done = self.p > self.max_prefix;
            }
        }
        Some(t)
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Const(bool),
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Ite(usize, usize, usize),
    Next(usize),
    Always(usize),
    Eventually(usize),
    Until(usize, usize),
    WeakUntil(usize, usize),
    Precedes(usize, usize),
    Up(usize),
    Down(usize),
    Any(usize),
}

/// A formula compiled against an alphabet, with identical subtrees shared.
#[derive(Debug, Clone)]
pub struct Compiled {
    ops: Vec<Op>,
    atoms: usize,
}

/// Per-thread buffers for [`Compiled::run`].
#[derive(Debug, Default)]
pub struct Scratch {
    vals: Vec<u64>,
}

impl Compiled {
    pub fn new(f: &Formula, alphabet: &Alphabet) -> Result<Self, AlphabetError> {
        alphabet.covers(f)?;
        let mut c = Compiled {
            ops: Vec::new(),
            atoms: alphabet.len(),
        };
        let mut memo = HashMap::new();
        c.compile(f, alphabet, &mut memo);
        Ok(c)
    }

    fn compile<'f>(
        &mut self,
        f: &'f Formula,
        alphabet: &Alphabet,
        memo: &mut HashMap<&'f Formula, usize>,
    ) -> usize {
        if let Some(&i) = memo.get(f) {
            return i;
        }
        let mut go = |g: &'f Formula| self.compile(g, alphabet, memo);
        use Formula as F;
        let op = match f {
            F::Const(b) => Op::Const(*b),
            F::Atom(name) => Op::Atom(alphabet.index_of(name).expect("alphabet covers formula")),
            F::Not(a) => Op::Not(go(a)),
            F::And(a, b) => Op::And(go(a), go(b)),
            F::Or(a, b) => Op::Or(go(a), go(b)),
            F::Implies(a, b) => Op::Implies(go(a), go(b)),
            F::IfThenElse(c, t, e) => Op::Ite(go(c), go(t), go(e)),
            F::Next(a) => Op::Next(go(a)),
            F::Always(a) => Op::Always(go(a)),
            F::Eventually(a) => Op::Eventually(go(a)),
            F::Until(a, b) => Op::Until(go(a), go(b)),
            F::WeakUntil(a, b) => Op::WeakUntil(go(a), go(b)),
            F::Precedes(a, b) => Op::Precedes(go(a), go(b)),
            F::EdgeUp(a) => Op::Up(go(a)),
            F::EdgeDown(a) => Op::Down(go(a)),
            F::EdgeAny(a) => Op::Any(go(a)),
        };
        self.ops.push(op);
        let i = self.ops.len() - 1;
        memo.insert(f, i);
        i
    }

    /// Number of distinct subformulas after sharing.
    pub fn node_count(&self) -> usize {
        self.ops.len()
    }

    /// Evaluates 64 lanes at once on lassos of shape `(p, l)`. `atom_words`
    /// is atom-major: word `a * (p + l) + j` holds atom `a` at position `j`
    /// for every lane. Returns the root's word per position.
    pub fn run<'s>(
        &self,
        p: usize,
        l: usize,
        atom_words: &[u64],
        scratch: &'s mut Scratch,
    ) -> &'s [u64] {
        assert!(l >= 1);
        let n = p + l;
        assert_eq!(atom_words.len(), self.atoms * n);
        let succ = |j: usize| if j + 1 < n { j + 1 } else { p };
        scratch.vals.clear();
        scratch.vals.resize(self.ops.len() * n, 0);
        for (idx, op) in self.ops.iter().enumerate() {
            let (done, rest) = scratch.vals.split_at_mut(idx * n);
            let out = &mut rest[..n];
            let w = |i: usize| &done[i * n..(i + 1) * n];
            match *op {
                Op::Const(b) => out.fill(if b { !0 } else { 0 }),
                Op::Atom(a) => out.copy_from_slice(&atom_words[a * n..(a + 1) * n]),
                Op::Not(a) => zip1(out, w(a), |x| !x),
                Op::And(a, b) => zip2(out, w(a), w(b), |x, y| x & y),
                Op::Or(a, b) => zip2(out, w(a), w(b), |x, y| x | y),
                Op::Implies(a, b) => zip2(out, w(a), w(b), |x, y| !x | y),
                Op::Ite(c, t, e) => {
                    let (c, t, e) = (w(c), w(t), w(e));
                    for j in 0..n {
                        out[j] = (c[j] & t[j]) | (!c[j] & e[j]);
                    }
                }
                Op::Next(a) => {
                    let a = w(a);
                    for j in 0..n {
                        out[j] = a[succ(j)];
                    }
                }
                Op::Up(a) => {
                    let a = w(a);
                    for j in 0..n {
                        out[j] = !a[j] & a[succ(j)];
                    }
                }
                Op::Down(a) => {
                    let a = w(a);
                    for j in 0..n {
                        out[j] = a[j] & !a[succ(j)];
                    }
                }
                Op::Any(a) => {
                    let a = w(a);
                    for j in 0..n {
                        out[j] = a[j] ^ a[succ(j)];
                    }
                }
                Op::Eventually(a) => {
                    let a = w(a);
                    fixpoint(out, p, 0, |j, nx| a[j] | nx);
                }
                Op::Always(a) => {
                    let a = w(a);
                    fixpoint(out, p, !0, |j, nx| a[j] & nx);
                }
                Op::Until(a, b) => {
                    let (a, b) = (w(a), w(b));
                    fixpoint(out, p, 0, |j, nx| b[j] | (a[j] & nx));
                }
                Op::WeakUntil(a, b) => {
                    let (a, b) = (w(a), w(b));
                    fixpoint(out, p, !0, |j, nx| b[j] | (a[j] & nx));
                }
                Op::Precedes(a, b) => {
                    // a P b = !(!a U b)
                    let (a, b) = (w(a), w(b));
                    fixpoint(out, p, 0, |j, nx| b[j] | (!a[j] & nx));
                    out.iter_mut().for_each(|x| *x = !*x);
                }
            }
        }
        let root = self.ops.len() - 1;
        &scratch.vals[root * n..(root + 1) * n]
    }

    /// Truth value at every position `0 .. t.len()`.
    pub fn eval_positions(&self, t: &LassoTrace, scratch: &mut Scratch) -> Vec<bool> {
        assert_eq!(t.alphabet.len(), self.atoms);
        let n = t.len();
        let mut words = vec![0u64; self.atoms * n];
        for j in 0..n {
            let s = t.state_at(j);
            for a in 0..self.atoms {
                words[a * n + j] = (s >> a & 1).wrapping_neg();
            }
        }
        self.run(t.prefix.len(), t.cycle.len(), &words, scratch)
            .iter()
            .map(|w| w & 1 == 1)
            .collect()
    }
}

fn zip1(out: &mut [u64], a: &[u64], f: impl Fn(u64) -> u64) {
    for (o, &x) in out.iter_mut().zip(a) {
        *o = f(x);
    }
}

fn zip2(out: &mut [u64], a: &[u64], b: &[u64], f: impl Fn(u64, u64) -> u64) {
    for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
        *o = f(x, y);
    }
}

/// Solves `out[j] = step(j, out[succ j])` by chaotic iteration from `init`:
/// all-zero gives the least fixpoint, all-one the greatest.
fn fixpoint(out: &mut [u64], p: usize, init: u64, step: impl Fn(usize, u64) -> u64) {
    let n = out.len();
    out.fill(init);
    loop {
        let mut changed = false;
        for j in (0..n).rev() {
            let nx = out[if j + 1 < n { j + 1 } else { p }];
            let v = step(j, nx);
            if v != out[j] {
                out[j] = v;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Lane `b` of `LANE_BITS[q]` is bit `q` of `b`.
const LANE_BITS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Up to 64 consecutive traces of one shape, starting at index `k0` (a
/// multiple of 64) in that shape's enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Batch {
    pub prefix: usize,
    pub cycle: usize,
    pub k0: u128,
    /// Lanes that hold a real trace.
    pub lanes: u64,
}

impl Batch {
    pub fn positions(&self) -> usize {
        self.prefix + self.cycle
    }

    /// Atom words in the layout [`Compiled::run`] expects.
    pub fn atom_words(&self, atoms: usize, words: &mut Vec<u64>) {
        let n = self.positions();
        words.clear();
        words.resize(atoms * n, 0);
        for a in 0..atoms {
            for j in 0..n {
                let q = atoms * j + a;
                words[a * n + j] = if q < 6 {
                    LANE_BITS[q]
                } else if self.k0 >> q & 1 == 1 {
                    !0
                } else {
                    0
                };
            }
        }
    }

    pub fn trace(&self, alphabet: &Alphabet, lane: u32) -> LassoTrace {
        decode_trace(alphabet, self.prefix, self.cycle, self.k0 + u128::from(lane))
    }
}

/// The batches covering [`enumerate_traces`], in the same order.
pub fn batches(atoms: usize, max_prefix: usize, max_loop: usize) -> impl Iterator<Item = Batch> {
    (0..=max_prefix).flat_map(move |p| {
        (1..=max_loop).flat_map(move |l| {
            let total = shape_count(atoms, p, l);
            (0..total.div_ceil(64)).map(move |b| {
                let k0 = b * 64;
                let live = (total - k0).min(64) as u32;
                Batch {
                    prefix: p,
                    cycle: l,
                    k0,
                    lanes: if live == 64 { !0 } else { (1u64 << live) - 1 },
                }
            })
        })
    })
}

/// The first trace (in enumeration order) and position on which `f` and
/// `g` differ, checking every position `0 .. |prefix| + |loop|`.
pub fn find_disagreement(
    f: &Formula,
    g: &Formula,
    alphabet: &Alphabet,
    max_prefix: usize,
    max_loop: usize,
) -> Result<Option<(LassoTrace, Position)>, AlphabetError> {
    let cf = Compiled::new(f, alphabet)?;
    let cg = Compiled::new(g, alphabet)?;
    let (mut sf, mut sg) = (Scratch::default(), Scratch::default());
    let mut words = Vec::new();
    for batch in batches(alphabet.len(), max_prefix, max_loop) {
        batch.atom_words(alphabet.len(), &mut words);
        let rf = cf.run(batch.prefix, batch.cycle, &words, &mut sf);
        let rg = cg.run(batch.prefix, batch.cycle, &words, &mut sg);
        let diffs: Vec<u64> = rf.iter().zip(rg).map(|(x, y)| (x ^ y) & batch.lanes).collect();
        let any = diffs.iter().fold(0, |acc, d| acc | d);
        if any != 0 {
            let lane = any.trailing_zeros();
            let pos = diffs.iter().position(|d| d >> lane & 1 == 1).expect("lane set");
            return Ok(Some((batch.trace(alphabet, lane), pos)));
        }
    }
    Ok(None)
}

/// Truth value of `f` at position `i` of the word `t` denotes.
pub fn eval(f: &Formula, t: &LassoTrace, i: Position) -> Result<bool, TraceError> {
    Ok(eval_positions(f, t)?[t.class_of(i)])
}

/// Truth value of `f` at each position `0 .. t.len()`.
pub fn eval_positions(f: &Formula, t: &LassoTrace) -> Result<Vec<bool>, TraceError> {
    let c = Compiled::new(f, &t.alphabet)?;
    Ok(c.eval_positions(t, &mut Scratch::default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn ab(names: &[&str]) -> Alphabet {
        Alphabet::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn counts_match_closed_form() {
        let one = ab(&["a"]);
        assert_eq!(enumerate_traces(&one, 0, 1).count(), 2);
        assert_eq!(enumerate_traces(&one, 1, 1).count(), 6);
        let two = ab(&["a", "b"]);
        assert_eq!(enumerate_traces(&two, 1, 2).count(), 100);
        assert_eq!(count_traces(2, 1, 2), 100);
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        let two = ab(&["a", "b"]);
        let all: Vec<_> = enumerate_traces(&two, 2, 2).collect();
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(all.len(), set.len());
        assert_eq!(all.len() as u128, count_traces(2, 2, 2));
    }

    #[test]
    fn stutter_inside_prefix_and_loop() {
        let a = ab(&["p", "q", "r"]);
        let t = LassoTrace::new(a.clone(), vec![1, 2], vec![4]).unwrap();
        let s = t.stutter_at(0).unwrap();
        assert_eq!(s.prefix(), &[1, 1, 2]);
        assert_eq!(s.cycle(), &[4]);

        let t = LassoTrace::new(a, vec![], vec![1, 2]).unwrap();
        let s = t.stutter_at(1).unwrap();
        assert_eq!(s.prefix(), &[1, 2, 2]);
        assert_eq!(s.cycle(), &[1, 2]);
        assert!(t.stutter_at(2).is_err());
    }

    #[test]
    fn constant_signal_has_no_edges() {
        let t = LassoTrace::new(ab(&["a"]), vec![], vec![1]).unwrap();
        assert!(eval(&parse("[] !up(a)").unwrap(), &t, 0).unwrap());
    }

    #[test]
    fn positions_wrap_into_the_loop() {
        let t = LassoTrace::new(ab(&["a"]), vec![0], vec![1, 0]).unwrap();
        let f = parse("a").unwrap();
        assert!(eval(&f, &t, 1).unwrap());
        assert!(!eval(&f, &t, 2).unwrap());
        assert!(eval(&f, &t, 101).unwrap());
        assert_eq!(t.class_of(101), 1);
    }

    #[test]
    fn undeclared_atom_is_an_error() {
        let t = LassoTrace::new(ab(&["a"]), vec![], vec![1]).unwrap();
        assert!(matches!(
            eval(&parse("b").unwrap(), &t, 0),
            Err(TraceError::Alphabet(AlphabetError::Undeclared(_)))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"atoms":["P","Q"],"prefix":[[true,false]],"loop":[[false,true],[false,false]]}"#;
        let t = LassoTrace::from_json(text).unwrap();
        assert_eq!(t.prefix(), &[1]);
        assert_eq!(t.cycle(), &[2, 0]);
        assert_eq!(t.to_json(), text);
        assert!(LassoTrace::from_json(r#"{"atoms":["P"],"prefix":[],"loop":[]}"#).is_err());
        assert!(LassoTrace::from_json(r#"{"atoms":["P"],"prefix":[],"loop":[[true,true]]}"#).is_err());
    }

    #[test]
    fn batches_cover_the_enumeration() {
        let two = ab(&["a", "b"]);
        let mut from_batches = Vec::new();
        for b in batches(2, 2, 2) {
            for lane in 0..64 {
                if b.lanes >> lane & 1 == 1 {
                    from_batches.push(b.trace(&two, lane));
                }
            }
        }
        let listed: Vec<_> = enumerate_traces(&two, 2, 2).collect();
        assert_eq!(from_batches, listed);
    }

    #[test]
    fn batch_words_agree_with_single_trace_eval() {
        let two = ab(&["a", "b"]);
        let f = parse("a U (b && X !a)").unwrap();
        let c = Compiled::new(&f, &two).unwrap();
        let mut words = Vec::new();
        let mut scratch = Scratch::default();
        for b in batches(2, 2, 2) {
            b.atom_words(2, &mut words);
            let root = c.run(b.prefix, b.cycle, &words, &mut scratch).to_vec();
            for lane in 0..64 {
                if b.lanes >> lane & 1 == 1 {
                    let t = b.trace(&two, lane);
                    let single = eval_positions(&f, &t).unwrap();
                    let sliced: Vec<bool> = root.iter().map(|w| w >> lane & 1 == 1).collect();
                    assert_eq!(single, sliced, "{t}");
                }
            }
        }
    }

    #[test]
    fn disagreement_search() {
        let two = ab(&["a", "b"]);
        let f = parse("up(a && b)").unwrap();
        let g = parse("up(a) && up(b)").unwrap();
        let (t, i) = find_disagreement(&f, &g, &two, 3, 2).unwrap().unwrap();
        assert_ne!(eval(&f, &t, i).unwrap(), eval(&g, &t, i).unwrap());
        let g = parse("!(a && b) && X (a && b)").unwrap();
        assert!(find_disagreement(&f, &g, &two, 3, 2).unwrap().is_none());
    }

    #[test]
    fn display_lists_true_atoms() {
        let t = LassoTrace::new(ab(&["S", "T"]), vec![3], vec![0]).unwrap();
        assert_eq!(t.to_string(), "prefix [{S, T}] loop [{}]");
    }
}
