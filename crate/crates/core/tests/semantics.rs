mod common;

use common::{duplicate, oracle};
use edge_patterns::generate::random_formula;
use edge_patterns::semantics::{count_traces, eval_positions};
use edge_patterns::{enumerate_traces, eval, parse, Alphabet, Formula, LassoTrace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn alphabet(names: &[&str]) -> Alphabet {
    Alphabet::new(names.iter().copied()).unwrap()
}

fn response_chain_fixture() -> (Formula, LassoTrace) {
    let f = parse("[]((S && X <>T) -> X <>(T && <>P))").unwrap();
    let a = alphabet(&["P", "S", "T"]);
    let t = LassoTrace::new(a, vec![0b110], vec![0]).unwrap();
    (f, t)
}

#[test]
fn response_chain_holds_then_fails_after_stutter() {
    let (f, t) = response_chain_fixture();
    assert!(eval(&f, &t, 0).unwrap());
    let s = t.stutter_at(0).unwrap();
    assert!(!eval(&f, &s, 0).unwrap());
}

#[test]
fn always_up_edge_is_unsatisfiable() {
    let f = parse("[] up(a)").unwrap();
    for names in [&["a"][..], &["a", "b"]] {
        for t in enumerate_traces(&alphabet(names), 3, 2) {
            assert!(eval_positions(&f, &t).unwrap().iter().all(|v| !v), "{t}");
        }
    }
}

#[test]
fn edge_equations_hold_at_every_position() {
    let pairs = [
        ("[] up(A)", "false"),
        ("[] down(A)", "false"),
        ("up(A) U B", "B || (up(A) && X B)"),
    ];
    let a = alphabet(&["A", "B"]);
    for (l, r) in pairs {
        let (l, r) = (parse(l).unwrap(), parse(r).unwrap());
        for t in enumerate_traces(&a, 3, 2) {
            assert_eq!(eval_positions(&l, &t).unwrap(), eval_positions(&r, &t).unwrap(), "{l} on {t}");
        }
    }
}

#[test]
fn stutter_example_in_loop() {
    let a = alphabet(&["p", "q"]);
    let (p, q) = (0b01, 0b10);
    let t = LassoTrace::new(a, vec![], vec![p, q]).unwrap();
    let s = t.stutter_at(1).unwrap();
    assert_eq!(s.prefix(), &[p, q, q]);
    assert_eq!(s.cycle(), &[p, q]);
    let n = 2 * (s.len()) + 2;
    assert_eq!(s.unroll(n), duplicate(&t.unroll(n - 1), 1));
}

#[test]
fn stutter_duplicates_exactly_one_state() {
    let a = alphabet(&["p", "q"]);
    const N: usize = 10;
    for t in enumerate_traces(&a, 2, 2) {
        for i in 0..t.len() {
            let s = t.stutter_at(i).unwrap();
            assert_eq!(s.unroll(N), duplicate(&t.unroll(N - 1), i), "{t} at {i}");
            assert_eq!(s.cycle().len(), t.cycle().len());
        }
    }
}

#[test]
fn enumeration_count_matches_combinatorics() {
    let a = alphabet(&["a", "b"]);
    let independent: u128 = (0..=1u32).map(|p| 4u128.pow(p) * (4 + 16)).sum();
    assert_eq!(independent, 100);
    assert_eq!(enumerate_traces(&a, 1, 2).count() as u128, independent);
    assert_eq!(count_traces(2, 1, 2), independent);
}

#[test]
fn fixpoint_eval_agrees_with_unrolling_oracle() {
    let a = alphabet(&["a", "b"]);
    let traces: Vec<_> = enumerate_traces(&a, 2, 2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..300 {
        let f = random_formula(&mut rng, &["a", "b"], 4);
        for t in &traces {
            let got = eval_positions(&f, t).unwrap();
            for (j, v) in got.iter().enumerate() {
                assert_eq!(*v, oracle(&f, t, j), "{f} on {t} at {j}");
            }
        }
    }
}

#[test]
fn lowering_passes_preserve_meaning() {
    let a = alphabet(&["a", "b", "c"]);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let f = random_formula(&mut rng, &["a", "b", "c"], 4);
        let desugared = f.eliminate_sugar();
        let lowered = desugared.eliminate_edges();
        assert_eq!(desugared.sugar_count(), 0);
        assert_eq!(lowered.edge_count(), 0);
        assert_eq!(desugared.eliminate_sugar(), desugared);
        assert_eq!(lowered.eliminate_edges(), lowered);
        for g in [&desugared, &lowered] {
            let w = edge_patterns::semantics::find_disagreement(&f, g, &a, 3, 2).unwrap();
            assert!(w.is_none(), "{f} vs {g}: {w:?}");
        }
    }
}

#[test]
fn eval_is_deterministic() {
    let (f, t) = response_chain_fixture();
    assert_eq!(eval_positions(&f, &t).unwrap(), eval_positions(&f, &t).unwrap());
}
