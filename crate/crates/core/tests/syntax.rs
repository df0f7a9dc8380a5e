use edge_patterns::{parse, print_canonical, print_spin, Formula, ParseError};
use edge_patterns::syntax::is_valid_atom_name;
use proptest::prelude::*;

fn formula() -> impl Strategy<Value = Formula> {
    formula_over("[a-dPQRSUW][a-z0-9_]{0,2}")
}

fn formula_over(atoms: &'static str) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::tt()),
        Just(Formula::ff()),
        atoms.prop_filter("reserved", |a| is_valid_atom_name(a)).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(5, 48, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::always),
            inner.clone().prop_map(Formula::eventually),
            inner.clone().prop_map(Formula::up),
            inner.clone().prop_map(Formula::down),
            inner.clone().prop_map(Formula::any),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::weak_until(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::precedes(a, b)),
            (inner.clone(), inner.clone(), inner).prop_map(|(c, t, e)| Formula::ite(c, t, e)),
        ]
    })
}

proptest! {
    #[test]
    fn canonical_printing_roundtrips(f in formula()) {
        let text = print_canonical(&f);
        prop_assert_eq!(parse(&text).unwrap(), f);
    }

    #[test]
    fn spin_output_uses_only_spin_tokens(f in formula_over("[a-d][a-z0-9_]{0,2}")) {
        let text = print_spin(&f);
        for word in text.split(|c: char| !c.is_alphanumeric() && c != '_') {
            prop_assert!(!matches!(word, "W" | "P" | "up" | "down" | "any"), "{}", text);
        }
        prop_assert!(!text.contains('?') && !text.contains(':'));
        // the SPIN form is also valid input and means the lowered formula
        prop_assert_eq!(parse(&text).unwrap(), f.eliminate_sugar().eliminate_edges());
    }
}

#[test]
fn fig_examples_parse() {
    let p = || Formula::atom("P");
    assert_eq!(parse("[] !up(P)").unwrap(), Formula::always(Formula::not(Formula::up(p()))));
    assert_eq!(
        parse("a U b U c").unwrap(),
        Formula::until(Formula::atom("a"), Formula::until(Formula::atom("b"), Formula::atom("c")))
    );
}

#[test]
fn errors_carry_spans_inside_the_input() {
    for bad in ["", "(", "a &&", "[]", "up(a", "a ? b", "a b", "f(x)", "a $ b", "X"] {
        let err = parse(bad).unwrap_err();
        let span = err.span();
        assert!(span.start <= span.end && span.end <= bad.len(), "{bad}: {err}");
        if bad == "f(x)" {
            assert!(matches!(err, ParseError::UnknownOperator { .. }));
        }
    }
}

#[test]
fn canonical_forms_of_catalog_style_formulas() {
    for text in [
        "[]((up(Q) && <>up(R) && !up(R)) -> X (up(R) P P))",
        "[](Q -> (<>R ? (P P R) && !R : <>P))",
        "<>R -> (P -> (!R U S)) U R",
    ] {
        let f = parse(text).unwrap();
        assert_eq!(parse(&print_canonical(&f)).unwrap(), f);
    }
    assert_eq!(
        print_canonical(&parse("<>R -> (P -> (!R U S)) U R").unwrap()),
        "<> R -> (P -> !R U S) U R"
    );
}
