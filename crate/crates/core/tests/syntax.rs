use std::collections::BTreeMap;
use std::path::PathBuf;

use minilang::kernel::{Name, PropNode, Sort};
use minilang::syntax::script::{Consider, ConfigValue, Hints, Statement, Tactic};
use minilang::syntax::{
    parse_prop, parse_script, parse_statements, render_script, render_statement, BinOp, Expr, Notation, PropError,
    Quant, SortExpr, KEYWORDS,
};
use minilang::theory::Theory;
use proptest::prelude::*;

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../data/golden/{name}"));
    std::fs::read_to_string(p).unwrap()
}

fn theory(name: &str) -> Theory {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../data/theories/{name}.thy"));
    Theory::load_file(&p).unwrap()
}

#[test]
fn golden_script_shape() {
    let sc = parse_script(&golden("sqrt2.mini")).unwrap();
    assert_eq!(sc.theory.as_deref(), Some("sqrt2"));
    assert_eq!(sc.name, "sqrt2_not_rational");
    let kws: Vec<&str> = sc.statements.iter().map(|s| s.keyword()).collect();
    assert_eq!(&kws[..4], ["RULE", "INTRO", "LET", "CONSIDER"]);
    assert_eq!(kws.len(), 26);
    let distinct: std::collections::BTreeSet<_> = sc.lines.iter().collect();
    assert_eq!(distinct.len(), 18);
    match &sc.statements[5] {
        Statement::Have { label, .. } => assert_eq!(label.as_deref(), Some("B")),
        s => panic!("{s:?}"),
    }
    assert_eq!(sc.statements[6], Statement::End(Hints { with: vec!["A1".into(), "A2".into()], without: vec![] }));
}

#[test]
fn minimal_script() {
    let sc = parse_script("theorem t: \"True\"\nEND").unwrap();
    assert_eq!(sc.statements, vec![Statement::End(Hints::default())]);
    assert_eq!(sc.goal, Expr::True);
}

#[test]
fn malformed_prop_is_a_parse_error() {
    let e = parse_statements("HAVE : ==", &[]).unwrap_err();
    assert_eq!(e.line, 1);
    assert!(e.col >= 5, "{e}");
    assert!(parse_script("theorem t: \"True\"\nHAVE : ==").is_err());
}

#[test]
fn non_keyword_commands_are_rejected() {
    for bad in ["theorem t: \"True\"\nHAV \"True\" END", "theorem t: \"True\"\nshow \"True\"", "theorem t: \"True\"\nend"] {
        assert!(parse_script(bad).is_err(), "{bad}");
    }
    assert!(parse_script("theorem t: \"True\"\n").is_err());
    assert_eq!(KEYWORDS.len(), 16);
}

#[test]
fn error_positions_are_in_bounds() {
    let src = "theorem t: \"True\"\nHAVE A: \"1 +\" END";
    let e = parse_script(src).unwrap_err();
    let lines: Vec<&str> = src.lines().collect();
    assert!(e.line >= 1 && e.line <= lines.len());
    assert!(e.col >= 1 && e.col <= lines[e.line - 1].chars().count() + 1);
}

#[test]
fn parse_prop_examples() {
    let th = theory("sqrt2");
    let sig = th.sig();
    let mut ab = BTreeMap::new();
    ab.insert("x".to_string(), Expr::App("sqrt".into(), vec![Expr::Num(2)]));
    let vars = [(Name::from("m"), Sort::nat()), (Name::from("n"), Sort::nat())];
    let p = parse_prop("?x = m / n", sig, &[], &ab, &vars).unwrap();
    assert_eq!(p.to_string(), "sqrt 2 = m / n");
    assert!(parse_prop("True", sig, &[], &ab, &[]).unwrap().is_true());
    let d = parse_prop("2 dvd m", sig, &[], &ab, &vars).unwrap();
    match d.view() {
        PropNode::Atom(t) => assert_eq!(t.head(), Some("dvd")),
        _ => panic!("not an atom: {d}"),
    }
    let mem = parse_prop("?x ∈ Q", sig, &[], &ab, &[]).unwrap();
    assert_eq!(mem.to_string(), "sqrt 2 ∈ Q");
    assert!(matches!(parse_prop("?y = 1", sig, &[], &ab, &[]), Err(PropError::Term(_))));
    assert!(matches!(parse_prop("frob 1 = 1", sig, &[], &ab, &[]), Err(PropError::Term(_))));
    assert!(matches!(parse_prop("m = Q", sig, &[], &ab, &vars), Err(PropError::Term(_))));
    assert!(matches!(parse_prop("m = ", sig, &[], &ab, &vars), Err(PropError::Syntax(_))));
}

#[test]
fn notation_declares_infix() {
    let th = theory("nat");
    let stmts = parse_statements("NOTATION \"<+>\" plus 65\nHAVE \"1 <+> 2 = 3\"", &[]).unwrap();
    let Statement::Notation(n) = &stmts[0] else { panic!() };
    let Statement::Have { prop, .. } = &stmts[1] else { panic!() };
    let p = minilang::syntax::Elaborator {
        sig: th.sig(),
        notations: std::slice::from_ref(n),
        abbrevs: &BTreeMap::new(),
        vars: &[],
        free: minilang::syntax::FreeMode::Reject,
    }
    .prop(prop)
    .unwrap();
    assert_eq!(p.to_string(), "1 + 2 = 3");
}

#[test]
fn render_examples() {
    let have = parse_statements("HAVE eq: \"m^2 = 2 * n^2\"", &[]).unwrap();
    assert_eq!(render_statement(&have[0], &[]), "HAVE eq: \"m^2 = 2 * n^2\"");
    assert_eq!(render_statement(&Statement::End(Hints::default()), &[]), "END");
    let end = Statement::End(Hints { with: vec!["B".into()], without: vec!["x".into()] });
    assert_eq!(render_statement(&end, &[]), "END WITH B WITHOUT x");
}

#[test]
fn golden_script_round_trips() {
    let sc = parse_script(&golden("sqrt2.mini")).unwrap();
    let again = parse_script(&render_script(&sc)).unwrap();
    assert_eq!(sc.statements, again.statements);
    assert_eq!(sc.goal, again.goal);
}

const IDENTS: &[&str] = &["a", "b", "m", "n", "xs", "f", "g", "x'", "h_1"];

fn ident() -> impl Strategy<Value = String> {
    prop::sample::select(IDENTS).prop_map(str::to_string)
}

fn sort_expr() -> impl Strategy<Value = SortExpr> {
    prop_oneof![
        Just(SortExpr::Name("nat".into(), vec![])),
        Just(SortExpr::Name("list".into(), vec![SortExpr::Name("nat".into(), vec![])])),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::True),
        Just(Expr::False),
        (0u64..1000).prop_map(Expr::Num),
        ident().prop_map(Expr::Ident),
        ident().prop_map(Expr::Meta),
    ];
    leaf.prop_recursive(4, 32, 3, |inner| {
        prop_oneof![
            (prop::sample::select(BinOp::ALL.to_vec()), inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| Expr::Bin(op, Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expr::Not(Box::new(a))),
            inner.clone().prop_map(|a| Expr::Abs(Box::new(a))),
            (ident(), prop::collection::vec(inner.clone(), 1..3)).prop_map(|(f, xs)| Expr::App(f, xs)),
            (
                prop::sample::select(vec![Quant::All, Quant::Ex]),
                prop::collection::vec((ident(), prop::option::of(sort_expr())), 1..3),
                inner
            )
                .prop_map(|(q, vs, b)| Expr::Quant(q, vs, Box::new(b))),
        ]
    })
}

fn names() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(ident(), 0..3)
}

fn hints() -> impl Strategy<Value = Hints> {
    (names(), names()).prop_map(|(with, without)| Hints { with, without })
}

fn statement() -> impl Strategy<Value = Statement> {
    prop_oneof![
        Just(Statement::Intro),
        (prop::option::of(ident()), expr()).prop_map(|(label, prop)| Statement::Have { label, prop }),
        prop::collection::vec(expr(), 2..4).prop_map(|cs| Statement::Consider(Consider::Cases(cs))),
        (prop::collection::vec(ident(), 1..3), prop::option::of(sort_expr()), prop::collection::vec((prop::option::of(ident()), expr()), 1..3))
            .prop_map(|(vs, s, props)| Statement::Consider(Consider::Obtain {
                vars: vs.into_iter().map(|v| (v, s.clone())).collect(),
                props
            })),
        hints().prop_map(Statement::End),
        hints().prop_map(Statement::Next),
        prop::option::of(ident()).prop_map(Statement::Rule),
        names().prop_map(Statement::Simplify),
        prop::collection::vec(ident(), 1..3).prop_map(Statement::Unfold),
        expr().prop_map(Statement::Choose),
        expr().prop_map(Statement::CaseSplit),
        ident().prop_map(Statement::Induct),
        (ident(), expr()).prop_map(|(name, term)| Statement::Let { name, term }),
        (prop::sample::select(vec!["<+>", "⊕", "**"]), ident(), 1u8..=100)
            .prop_map(|(s, k, prec)| Statement::Notation(Notation { symbol: s.into(), konst: k, prec })),
        (
            ident(),
            prop_oneof![
                ident().prop_map(ConfigValue::Ident),
                (0u64..100).prop_map(ConfigValue::Num),
                "[a-z ]{0,6}".prop_map(ConfigValue::Str)
            ]
        )
            .prop_map(|(key, value)| Statement::Config { key, value }),
        ident().prop_map(Statement::Open),
        (ident(), names(), names(), names()).prop_map(|(n, args, add, del)| Statement::Apply(Tactic {
            name: n,
            args,
            add,
            del
        })),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn statements_round_trip(s in statement()) {
        let text = render_statement(&s, &[]);
        let back = parse_statements(&text, &[]);
        prop_assert!(back.is_ok(), "{text}: {:?}", back);
        prop_assert_eq!(back.unwrap(), vec![s], "{}", text);
    }

    #[test]
    fn sequences_round_trip(ss in prop::collection::vec(statement(), 1..6)) {
        let text: Vec<String> = ss.iter().map(|s| render_statement(s, &[])).collect();
        let text = text.join("\n");
        let back = parse_statements(&text, &[]).unwrap();
        prop_assert_eq!(back, ss);
    }

    #[test]
    fn parser_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let text = String::from_utf8_lossy(&bytes);
        let _ = parse_script(&text);
        let _ = parse_statements(&text, &[]);
    }

    #[test]
    fn parser_never_panics_on_near_misses(
        parts in prop::collection::vec(prop::sample::select(vec![
            "theorem", "t", ":", "\"", "HAVE", "END", "WITH", "CONSIDER", "where", "and", "|", "(", ")",
            "∀", "x", ".", "=", "+", "¬", "?x", "::", "nat", "\n", "APPLY", "add:", "1", "dvd", "∈",
        ]), 0..40)
    ) {
        let text = parts.join(" ");
        let _ = parse_script(&text);
    }
}

#[test]
fn deep_nesting_is_an_error_not_a_crash() {
    let deep = format!("theorem t: \"{}True{}\"\nEND", "(".repeat(5000), ")".repeat(5000));
    assert!(parse_script(&deep).is_err());
    let negs = format!("theorem t: \"{}True\"\nEND", "¬".repeat(5000));
    assert!(parse_script(&negs).is_err());
}
