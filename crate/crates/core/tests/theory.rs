use std::path::PathBuf;

use minilang::kernel::{replay, PropNode};
use minilang::theory::{LemmaKind, Theory, TheoryError, TheoryRegistry};

fn theories() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/theories")
}

fn load(name: &str) -> Theory {
    Theory::load_file(&theories().join(format!("{name}.thy"))).unwrap()
}

fn parse_with_nat(text: &str) -> Result<Theory, TheoryError> {
    let dir = theories();
    Theory::parse(text, &|n| std::fs::read_to_string(dir.join(format!("{n}.thy"))).ok())
}

#[test]
fn bundled_theories_load() {
    for name in ["nat", "sqrt2", "list"] {
        let th = load(name);
        assert_eq!(&*th.name, name);
        for l in th.lemmas() {
            replay(&th, &l.thm).unwrap();
        }
    }
}

#[test]
fn dump_round_trips() {
    for name in ["nat", "sqrt2", "list"] {
        let th = load(name);
        let d1 = th.dump();
        let again = parse_with_nat(&d1).unwrap();
        assert_eq!(d1, again.dump(), "{name}");
    }
}

#[test]
fn prelude_rules_are_proved() {
    let th = load("nat");
    for r in ["ccontr", "conjI", "disjCI", "impI", "iffI"] {
        let spec = th.rule(r).unwrap();
        assert!(spec.thm.cert().axioms().is_empty(), "{r} should not rest on an axiom");
    }
    let defaults: Vec<_> = th.default_rules().map(|r| r.name.to_string()).collect();
    assert_eq!(defaults, ["ccontr", "conjI", "disjCI", "impI", "iffI"]);
}

#[test]
fn simp_set_and_definitions() {
    let th = load("nat");
    assert!(th.simp_rules().iter().any(|r| &*r.name == "add_0"));
    let d = th.definition("even_def").unwrap();
    assert_eq!(&*d.konst, "even");
    assert_eq!(th.lemma("even_def").unwrap().kind, LemmaKind::Def);
    assert!(matches!(d.thm.concl().view(), PropNode::Forall(..)));
}

#[test]
fn bundles_hide_lemmas() {
    let th = load("nat");
    assert!(th.in_bundle("double_even"));
    let none = Default::default();
    assert!(!th.visible_lemmas(&none).any(|l| &*l.name == "double_even"));
    let opened = [minilang::kernel::name("arith_extra")].into_iter().collect();
    assert!(th.visible_lemmas(&opened).any(|l| &*l.name == "double_even"));
}

#[test]
fn transitivity_facts() {
    let th = load("nat");
    let t = th.trans_rules().iter().find(|t| &*t.name == "le_less_trans").unwrap();
    assert_eq!(t.first.symbol(), "≤");
    assert_eq!(t.second.symbol(), "<");
    assert_eq!(t.result.symbol(), "<");
}

#[test]
fn recursive_definition_rejected() {
    let src = "theory t\nimport nat\nconst f : nat -> nat\nconst g : nat -> nat\n\
               def f_def: \"f n = g n + 1\"\ndef g_def: \"g n = f n\"\n";
    let e = parse_with_nat(src).unwrap_err();
    assert!(e.to_string().contains("recursive"), "{e}");
    let direct = "theory t\nconst f : nat -> nat\ndef f_def: \"f n = f n + 1\"\n";
    assert!(parse_with_nat(direct).unwrap_err().to_string().contains("recursive"));
}

#[test]
fn rule_with_unbound_schematic_rejected() {
    let src = "theory t\nrule bad [intro]: \"a ≤ b\" \"b ≤ c\" ==> \"a ≤ c\"\n";
    let e = parse_with_nat(src).unwrap_err();
    assert!(e.to_string().contains("?b"), "{e}");
}

#[test]
fn errors_carry_line_numbers() {
    let e = parse_with_nat("theory t\n\nconst f : nat -> nope\n").unwrap_err();
    assert!(e.to_string().starts_with("t:3:"), "{e}");
    assert!(matches!(parse_with_nat("theory t\nimport missing\n"), Err(TheoryError::NotFound(_))));
    assert!(parse_with_nat("theory t\nfrobnicate x\n").is_err());
}

#[test]
fn import_cycles_detected() {
    let srcs = |n: &str| match n {
        "a" => Some("theory a\nimport b\n".to_string()),
        "b" => Some("theory b\nimport a\n".to_string()),
        _ => None,
    };
    assert!(matches!(Theory::parse("theory a\nimport b\n", &srcs), Err(TheoryError::Cycle(_))));
}

#[test]
fn registry_caches() {
    let reg = TheoryRegistry::new(theories());
    let a = reg.get("sqrt2").unwrap();
    let b = reg.get("sqrt2").unwrap();
    assert!(std::sync::Arc::ptr_eq(&a, &b));
    assert!(reg.get("nope").is_err());
}

