//! Closure under stuttering: a formula is closed if duplicating any state of
//! any trace never changes its value at position 0.
//!
//! Two complementary procedures. [`falsify`] enumerates small lassos and
//! stutter positions and can only refute. [`check_syntactic`] is a
//! schema-driven prover over a normal form and can only prove; see
//! [`prover`] for its rules.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::formula::{Alphabet, AlphabetError, Formula};
use crate::semantics::{batches, Batch, Compiled, LassoTrace, Position, Scratch};

pub mod prover;

pub use prover::{check_syntactic, schemas, RuleSchema};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trace: LassoTrace,
    pub stutter_index: Position,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CusVerdict {
    /// Closed under stuttering; the rules applied, in proof order.
    Proved(Vec<String>),
    /// Not closed: the value at position 0 differs after stuttering.
    Refuted(Counterexample),
    Unknown,
}

impl CusVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            CusVerdict::Proved(_) => "proved",
            CusVerdict::Refuted(_) => "refuted",
            CusVerdict::Unknown => "unknown",
        }
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, CusVerdict::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, CusVerdict::Refuted(_))
    }
}

#[derive(Serialize, Deserialize)]
struct VerdictJson {
    verdict: String,
    rules: Vec<String>,
    counterexample: Option<Counterexample>,
}

impl Serialize for CusVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (rules, counterexample) = match self {
            CusVerdict::Proved(r) => (r.clone(), None),
            CusVerdict::Refuted(c) => (Vec::new(), Some(c.clone())),
            CusVerdict::Unknown => (Vec::new(), None),
        };
        VerdictJson {
            verdict: self.name().to_string(),
            rules,
            counterexample,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CusVerdict {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = VerdictJson::deserialize(d)?;
        match (v.verdict.as_str(), v.counterexample) {
            ("proved", None) => Ok(CusVerdict::Proved(v.rules)),
            ("refuted", Some(c)) => Ok(CusVerdict::Refuted(c)),
            ("unknown", None) => Ok(CusVerdict::Unknown),
            (other, _) => Err(serde::de::Error::custom(format!("inconsistent verdict `{other}`"))),
        }
    }
}

impl fmt::Display for CusVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CusVerdict::Proved(rules) => {
                writeln!(f, "proved")?;
                for r in rules {
                    writeln!(f, "  {r}")?;
                }
                Ok(())
            }
            CusVerdict::Refuted(c) => {
                writeln!(f, "refuted")?;
                writeln!(f, "  trace: {}", c.trace)?;
                writeln!(f, "  stutter index: {}", c.stutter_index)
            }
            CusVerdict::Unknown => writeln!(f, "unknown"),
        }
    }
}

/// Largest prefix and loop the falsifier enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_prefix: usize,
    pub max_loop: usize,
}

impl Bounds {
    pub const fn new(max_prefix: usize, max_loop: usize) -> Self {
        Bounds {
            max_prefix,
            max_loop,
        }
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(3, 2)
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.max_prefix, self.max_loop)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub bounds: Bounds,
    pub workers: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            bounds: Bounds::default(),
            workers: 1,
        }
    }
}

/// Position `j` of the lasso obtained by stuttering position `i` of a
/// `(p, l)` lasso, mapped back to the original position it copies.
fn stutter_map(p: usize, l: usize, i: usize) -> (usize, Vec<usize>) {
    let n = p + l;
    if i < p {
        let map = (0..n + 1).map(|j| if j <= i { j } else { j - 1 }).collect();
        (p + 1, map)
    } else {
        let k = i - p;
        let new_p = p + k + 2;
        let mut map: Vec<usize> = (0..new_p).map(|j| j.min(i)).collect();
        map.extend((0..l).map(|m| p + (k + 1 + m) % l));
        (new_p, map)
    }
}

struct Worker {
    scratch: Scratch,
    words: Vec<u64>,
    stuttered: Vec<u64>,
}

impl Worker {
    fn new() -> Self {
        Worker {
            scratch: Scratch::default(),
            words: Vec::new(),
            stuttered: Vec::new(),
        }
    }

    /// Earliest (lane, stutter index) in `batch` whose value changes.
    fn check(&mut self, c: &Compiled, atoms: usize, batch: &Batch) -> Option<(u32, usize)> {
        let (p, l) = (batch.prefix, batch.cycle);
        let n = p + l;
        batch.atom_words(atoms, &mut self.words);
        let original = c.run(p, l, &self.words, &mut self.scratch)[0];
        let mut best: Option<(u32, usize)> = None;
        for i in 0..n {
            let (new_p, map) = stutter_map(p, l, i);
            let m = map.len();
            self.stuttered.clear();
            for a in 0..atoms {
                let row = &self.words[a * n..(a + 1) * n];
                self.stuttered.extend(map.iter().map(|&j| row[j]));
            }
            debug_assert_eq!(self.stuttered.len(), atoms * m);
            let after = c.run(new_p, l, &self.stuttered, &mut self.scratch)[0];
            let diff = (original ^ after) & batch.lanes;
            if diff != 0 {
                let lane = diff.trailing_zeros();
                if best.is_none_or(|(b, _)| lane < b) {
                    best = Some((lane, i));
                }
            }
        }
        best
    }
}

/// Searches lassos over `alphabet` within `bounds` for a stuttering that
/// changes the value of `f` at position 0. The witness is the first in
/// enumeration order (shortest prefix, then shortest loop, then state
/// order), then the smallest stutter index, whatever the worker count.
pub fn falsify(
    f: &Formula,
    alphabet: &Alphabet,
    bounds: Bounds,
    workers: usize,
) -> Result<CusVerdict, AlphabetError> {
    assert!(bounds.max_loop >= 1, "lasso loops are nonempty");
    let c = Compiled::new(f, alphabet)?;
    let atoms = alphabet.len();
    let all = batches(atoms, bounds.max_prefix, bounds.max_loop);
    let found = if workers <= 1 {
        let mut w = Worker::new();
        all.into_iter()
            .find_map(|b| w.check(&c, atoms, &b).map(|hit| (b, hit)))
    } else {
        let list: Vec<Batch> = all.collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| {
            list.par_iter()
                .map_init(Worker::new, |w, b| w.check(&c, atoms, b).map(|hit| (*b, hit)))
                .find_map_first(|x| x)
        })
    };
    Ok(match found {
        Some((batch, (lane, i))) => CusVerdict::Refuted(Counterexample {
            trace: batch.trace(alphabet, lane),
            stutter_index: i,
        }),
        None => CusVerdict::Unknown,
    })
}

/// The prover first; the falsifier over the formula's own atoms only if the
/// prover gives up.
pub fn check(f: &Formula, opts: CheckOptions) -> CusVerdict {
    let proved = check_syntactic(f);
    if proved.is_proved() {
        return proved;
    }
    let alphabet = Alphabet::of_formula(f).expect("a formula's atoms form an alphabet");
    falsify(f, &alphabet, opts.bounds, opts.workers).expect("alphabet covers formula")
}

/// One line of the schema validation report.
#[derive(Debug, Clone)]
pub struct SchemaReport {
    pub name: String,
    pub instantiations: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SchemaFailure {
    pub name: String,
    pub instance: Formula,
    pub counterexample: Counterexample,
}

impl fmt::Display for SchemaFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "schema {} fails on {}: {} stuttered at {}",
            self.name, self.instance, self.counterexample.trace, self.counterexample.stutter_index
        )
    }
}

/// Falsifies every schema of the prover on every instantiation of its
/// metavariables by literals over three atoms.
pub fn validate_schemas(opts: CheckOptions) -> Result<Vec<SchemaReport>, Box<SchemaFailure>> {
    schemas().iter().map(|s| validate_schema(s, opts)).collect()
}

/// Validates one schema. Instantiations are taken up to renaming of atoms
/// and the polarity of each atom's first occurrence, both of which preserve
/// closure under stuttering.
pub fn validate_schema(schema: &RuleSchema, opts: CheckOptions) -> Result<SchemaReport, Box<SchemaFailure>> {
    let start = Instant::now();
    let instances = schema.instantiations(3);
    for inst in &instances {
        let alphabet = Alphabet::of_formula(inst).expect("instances use at most three atoms");
        if let CusVerdict::Refuted(counterexample) =
            falsify(inst, &alphabet, opts.bounds, opts.workers).expect("alphabet covers instance")
        {
            return Err(Box::new(SchemaFailure {
                name: schema.name.to_string(),
                instance: inst.clone(),
                counterexample,
            }));
        }
    }
    Ok(SchemaReport {
        name: schema.name.to_string(),
        instantiations: instances.len(),
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn alphabet(names: &[&str]) -> Alphabet {
        Alphabet::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn stutter_map_matches_stutter_at() {
        let a = alphabet(&["a", "b"]);
        for t in crate::semantics::enumerate_traces(&a, 2, 3) {
            let (p, l) = (t.prefix().len(), t.cycle().len());
            for i in 0..t.len() {
                let s = t.stutter_at(i).unwrap();
                let (new_p, map) = stutter_map(p, l, i);
                assert_eq!(new_p, s.prefix().len());
                let remapped: Vec<u64> = map.iter().map(|&j| t.state_at(j)).collect();
                assert_eq!(remapped, s.unroll(s.len()));
            }
        }
    }

    #[test]
    fn next_is_refuted_with_the_textbook_witness() {
        let f = parse("X a").unwrap();
        let CusVerdict::Refuted(c) = falsify(&f, &alphabet(&["a"]), Bounds::new(2, 1), 1).unwrap() else {
            panic!("X a must be refuted");
        };
        assert_eq!(c.trace.prefix(), &[1]);
        assert_eq!(c.trace.cycle(), &[0]);
        assert_eq!(c.stutter_index, 0);
    }

    #[test]
    fn always_survives() {
        let f = parse("[] a").unwrap();
        assert_eq!(
            falsify(&f, &alphabet(&["a"]), Bounds::new(3, 2), 1).unwrap(),
            CusVerdict::Unknown
        );
    }

    #[test]
    fn worker_count_does_not_change_the_witness() {
        let f = parse("[](a -> X (b U !a))").unwrap();
        let a = alphabet(&["a", "b"]);
        let one = falsify(&f, &a, Bounds::new(3, 2), 1).unwrap();
        let four = falsify(&f, &a, Bounds::new(3, 2), 4).unwrap();
        assert!(one.is_refuted());
        assert_eq!(one, four);
    }

    #[test]
    fn verdict_json_shape() {
        let v = CusVerdict::Proved(vec!["const-or-var".into()]);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"{"verdict":"proved","rules":["const-or-var"],"counterexample":null}"#);
        assert_eq!(serde_json::from_str::<CusVerdict>(&text).unwrap(), v);
    }
}
