//! Independent reference semantics for the test suites.
//!
//! Evaluates directly on the infinite word by recursion on positions. A
//! lasso with `n = |prefix| + |loop|` distinct suffixes reaches every suffix
//! it ever will within `n` steps, and the earliest witness of an until lies
//! within `n` steps as well (a later one would repeat a suffix, and the
//! repeat is an earlier witness), so all scans stop at `j + n`.

#![allow(dead_code)]

use edge_patterns::{Formula, LassoTrace};

pub fn oracle(f: &Formula, t: &LassoTrace, j: usize) -> bool {
    use Formula::*;
    let n = t.len();
    match f {
        Const(b) => *b,
        Atom(name) => t.holds(name, j).expect("atom declared"),
        Not(a) => !oracle(a, t, j),
        And(a, b) => oracle(a, t, j) && oracle(b, t, j),
        Or(a, b) => oracle(a, t, j) || oracle(b, t, j),
        Implies(a, b) => !oracle(a, t, j) || oracle(b, t, j),
        IfThenElse(c, a, b) => {
            if oracle(c, t, j) {
                oracle(a, t, j)
            } else {
                oracle(b, t, j)
            }
        }
        Next(a) => oracle(a, t, j + 1),
        Always(a) => (j..j + n).all(|k| oracle(a, t, k)),
        Eventually(a) => (j..j + n).any(|k| oracle(a, t, k)),
        Until(a, b) => until(a, b, t, j),
        WeakUntil(a, b) => (j..j + n).all(|k| oracle(a, t, k)) || until(a, b, t, j),
        Precedes(a, b) => {
            let not_a = Formula::not((**a).clone());
            !until(&not_a, b, t, j)
        }
        EdgeUp(a) => !oracle(a, t, j) && oracle(a, t, j + 1),
        EdgeDown(a) => oracle(a, t, j) && !oracle(a, t, j + 1),
        EdgeAny(a) => oracle(a, t, j) != oracle(a, t, j + 1),
    }
}

fn until(a: &Formula, b: &Formula, t: &LassoTrace, j: usize) -> bool {
    for k in j..j + t.len() {
        if oracle(b, t, k) {
            return true;
        }
        if !oracle(a, t, k) {
            return false;
        }
    }
    false
}

/// `word` with the state at `i` written twice.
pub fn duplicate(word: &[u64], i: usize) -> Vec<u64> {
    let mut out = word.to_vec();
    out.insert(i, word[i]);
    out
}
