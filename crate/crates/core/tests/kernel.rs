use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use minilang::kernel::rewrite::{Rewriter, RewriteRule};
use minilang::kernel::rules::{match_rule, RuleKind, RuleSpec};
use minilang::kernel::{drule, replay, Kernel, Name, Prop, PropNode, Sort, Term, Thm};
use minilang::syntax::parse_prop;
use minilang::theory::Theory;
use proptest::prelude::*;

fn theory(name: &str) -> Theory {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../data/theories/{name}.thy"));
    Theory::load_file(&p).unwrap()
}

fn nat(n: &str) -> (Name, Sort) {
    (Name::from(n), Sort::nat())
}

fn prop(th: &Theory, s: &str, vars: &[(Name, Sort)]) -> Prop {
    parse_prop(s, th.sig(), &[], &BTreeMap::new(), vars).unwrap()
}

fn var(n: &str) -> Term {
    Term::var(n, Sort::nat())
}

fn ok(th: &Theory, t: &Thm) {
    replay(th, t).unwrap();
}

#[test]
fn assume_gives_identity_sequent() {
    let th = theory("nat");
    let k = Kernel::new(&th);
    for s in ["True", "0 = 0", "∀n. n + 0 = n"] {
        let p = prop(&th, s, &[]);
        let t = k.assume(&p).unwrap();
        assert_eq!(t.hyps(), std::slice::from_ref(&p));
        assert_eq!(t.concl(), &p);
        ok(&th, &t);
    }
    let x = [nat("x")];
    let t = k.assume(&prop(&th, "x = x", &x)).unwrap();
    assert_eq!(t.to_string(), "x = x ⊢ x = x");
}

#[test]
fn assume_rejects_ill_sorted() {
    let th = theory("nat");
    let k = Kernel::new(&th);
    let bad = Prop::atom(Term::app("suc", vec![Term::Num(1)], Sort::nat()));
    assert!(k.assume(&bad).is_err());
}

#[test]
fn natural_deduction_examples() {
    let th = theory("nat");
    let k = Kernel::new(&th);
    let a = prop(&th, "0 ≤ 1", &[]);
    let b = prop(&th, "1 ≤ 2", &[]);
    let ab = k.implies_intro(&a, &k.assume(&b).unwrap()).unwrap();
    let t = k.implies_elim(&ab, &k.assume(&a).unwrap()).unwrap();
    assert_eq!(t.concl(), &b);

    let add0 = th.lemma("add_0_right").unwrap().thm.clone();
    let t3 = k.forall_elim(&add0, &Term::Num(3)).unwrap();
    assert_eq!(t3.concl().to_string(), "3 + 0 = 3");
    assert!(t3.hyps().is_empty());
    ok(&th, &t3);

    // ⊢ 2 ≤ 2 gives ⊢ ∃x. x ≤ 2
    let le = k.forall_elim(&th.lemma("le_refl").unwrap().thm, &Term::Num(2)).unwrap();
    let target = prop(&th, "∃x. x ≤ x", &[]);
    let ex = k.exists_intro(&target, &Term::Num(2), &le).unwrap();
    assert_eq!(ex.concl(), &target);
    ok(&th, &ex);
}

#[test]
fn forall_intro_side_condition() {
    let th = theory("nat");
    let k = Kernel::new(&th);
    let p = prop(&th, "x ≤ x", &[nat("x")]);
    let t = k.assume(&p).unwrap();
    assert!(k.forall_intro("x", &Sort::nat(), &t).is_err());
    let closed = k.forall_intro("x", &Sort::nat(), &k.implies_intro(&p, &t).unwrap()).unwrap();
    ok(&th, &closed);
}

#[test]
fn exists_elim_eigenvariable() {
    let th = theory("nat");
    let k = Kernel::new(&th);
    let ex = prop(&th, "∃k. k ≤ 3", &[]);
    let body = prop(&th, "k ≤ 3", &[nat("k")]);
    let concl = k.true_intro().unwrap();
    let inner = k.implies_elim(&k.implies_intro(&body, &concl).unwrap(), &k.assume(&body).unwrap()).unwrap();
    let t = k.exists_elim(&k.assume(&ex).unwrap(), "k", &Sort::nat(), &inner).unwrap();
    assert_eq!(t.hyps(), std::slice::from_ref(&ex));
    // the eigenvariable may not escape into the conclusion
    assert!(k.exists_elim(&k.assume(&ex).unwrap(), "k", &Sort::nat(), &k.assume(&body).unwrap()).is_err());
}

#[test]
fn alpha_equivalent_props_are_equal() {
    let th = theory("nat");
    let p = prop(&th, "∀x. ∃y. x ≤ y", &[]);
    let q = prop(&th, "∀a. ∃b. a ≤ b", &[]);
    let r = prop(&th, "∀a. ∃b. b ≤ a", &[]);
    assert_eq!(p, q);
    assert_ne!(p, r);
}

#[test]
fn substitution_avoids_capture() {
    let th = theory("nat");
    let p = prop(&th, "∀y. x ≤ y", &[nat("x")]);
    let s = p.subst_var("x", &Sort::nat(), &var("y"));
    assert!(s.has_var("y"));
    assert_ne!(s, prop(&th, "∀y. y ≤ y", &[]));
    assert_eq!(s.to_string(), "∀y'::nat. y ≤ y'");
    assert_eq!(s, prop(&th, "∀z. y ≤ z", &[nat("y")]));
}

#[test]
fn rewrite_left_unit() {
    let th = theory("nat");
    let k = Kernel::new(&th);
    // P(0 + 3) with P x := x ≤ x
    let p = prop(&th, "0 + 3 ≤ 0 + 3", &[]);
    let add0 = RewriteRule::from_thm(k, "add_0", &th.lemma("add_0").unwrap().thm).unwrap();
    let mut rw = Rewriter::new(k, Arc::new(vec![add0]), 100);
    rw.arith = false;
    rw.prop_simps = false;
    let t = rw.rewrite_thm(&k.assume(&p).unwrap()).unwrap();
    assert_eq!(t.concl().to_string(), "3 ≤ 3");
    ok(&th, &t);
}

#[test]
fn rewrite_list_length() {
    let th = theory("list");
    let k = Kernel::new(&th);
    let vars = [nat("a")];
    let goal = prop(&th, "len (cons a nil) = 1", &vars);
    let mut rw = Rewriter::new(k, th.simp_rules().clone(), 100);
    rw.prop_simps = false;
    let iff = rw.rewrite_prop(&goal).unwrap().unwrap();
    assert_eq!(minilang::kernel::rewrite::rhs_prop(&iff).to_string(), "1 = 1");
    ok(&th, &iff);
    // with the propositional lemmas the goal closes
    let mut rw = Rewriter::new(k, th.simp_rules().clone(), 100);
    let iff = rw.rewrite_prop(&goal).unwrap().unwrap();
    assert!(minilang::kernel::rewrite::rhs_prop(&iff).is_true());
}

#[test]
fn rewrite_zero_budget_is_identity() {
    let th = theory("nat");
    let k = Kernel::new(&th);
    let p = prop(&th, "0 + 3 ≤ 1 * 4", &[]);
    let t = k.assume(&p).unwrap();
    let r = minilang::kernel::rewrite::rewrite(k, &t, th.simp_rules(), 0).unwrap();
    assert_eq!(r.concl(), &p);
}

#[test]
fn match_ccontr_against_not_mem() {
    let th = theory("sqrt2");
    let ccontr = th.rule("ccontr").unwrap();
    let goal = prop(&th, "x ∉ Q", &[nat("x")]);
    let s = match_rule(&goal, ccontr).unwrap();
    assert_eq!(s.props.get("A").unwrap().to_string(), "x ∈ Q");
    let (prems, t) = ccontr.apply(Kernel::new(&th), &goal).unwrap();
    assert_eq!(prems[0].to_string(), "x ∈ Q ⟶ False");
    ok(&th, &t);
}

#[test]
fn match_conj_against_disj_fails() {
    let th = theory("nat");
    let goal = prop(&th, "0 ≤ 1 ∨ 1 ≤ 0", &[]);
    assert!(match_rule(&goal, th.rule("conjI").unwrap()).is_none());
}

#[test]
fn rule_with_premise_only_schematic_is_rejected() {
    let th = theory("nat");
    let k = Kernel::new(&th);
    let t = th.trans_rules().iter().find(|t| &*t.name == "le_trans").unwrap().thm.clone();
    let e = RuleSpec::new("le_trans", RuleKind::Intro, 2, t).unwrap_err();
    assert!(e.to_string().contains("premise but not in the conclusion"), "{e}");
    let _ = k;
}

#[test]
fn choice_gives_canonical_witness() {
    let th = theory("nat");
    let k = Kernel::new(&th);
    let ex = prop(&th, "∃c. m = 2 * c", &[nat("m")]);
    let t = k.choice(&k.assume(&ex).unwrap()).unwrap();
    let PropNode::Eq(_, rhs) = t.concl().view() else { panic!() };
    let eps = rhs.as_app().unwrap().args[1].clone();
    // the witness depends only on the formula
    let t2 = k.choice(&k.assume(&ex).unwrap()).unwrap();
    assert_eq!(t.concl(), t2.concl());
    assert_eq!(eps.as_app().unwrap().args, vec![var("m")]);
    ok(&th, &t);
    // different formulas get different witnesses
    let ex3 = prop(&th, "∃c. m = 3 * c", &[nat("m")]);
    let t3 = k.choice(&k.assume(&ex3).unwrap()).unwrap();
    let head = |t: &Thm| match t.concl().view() {
        PropNode::Eq(_, r) => r.as_app().unwrap().args[1].head().unwrap().to_string(),
        _ => unreachable!(),
    };
    assert_ne!(head(&t3), head(&t));
    assert!(k.choice(&k.assume(&prop(&th, "0 = 0", &[])).unwrap()).is_err());
}

#[test]
fn choice_refuses_proposition_schematics() {
    let th = theory("nat");
    let k = Kernel::new(&th);
    let ex = Prop::exists("c", Sort::nat(), &Prop::and(Prop::schem("A"), prop(&th, "c = c", &[nat("c")])));
    assert!(k.choice(&k.assume(&ex).unwrap()).is_err());
}

#[test]
fn tautology_prover_replays() {
    let th = theory("nat");
    let k = Kernel::new(&th);
    let p = prop(&th, "(0 ≤ 1 ⟶ 0 ≤ 1) ∧ (1 ≤ 0 ∨ ¬ 1 ≤ 0)", &[]);
    let t = drule::prove_taut(k, &p).unwrap();
    assert!(t.hyps().is_empty());
    ok(&th, &t);
    assert!(drule::prove_taut(k, &prop(&th, "0 ≤ 1 ∨ 1 ≤ 0", &[])).is_none());
}

#[test]
fn induction_and_exhaust() {
    let th = theory("nat");
    let k = Kernel::new(&th);
    let motive = prop(&th, "n + 0 = n", &[nat("n")]);
    let ind = k.induct(&Sort::nat(), "n", &motive).unwrap();
    assert_eq!(
        ind.concl().to_string(),
        "0 + 0 = 0 ⟶ (∀a::nat. a + 0 = a ⟶ suc a + 0 = suc a) ⟶ (∀n::nat. n + 0 = n)"
    );
    let ex = k.exhaust(&Sort::bool(), &Term::var("b", Sort::bool())).unwrap();
    assert_eq!(ex.concl().to_string(), "b = true ∨ b = false");
}

#[test]
fn certificates_replay_after_long_derivations() {
    let th = theory("list");
    let k = Kernel::new(&th);
    let p = prop(&th, "len (app (cons a nil) (cons b nil)) = 2", &[nat("a"), nat("b")]);
    let mut rw = Rewriter::new(k, th.simp_rules().clone(), 1000);
    let iff = rw.rewrite_prop(&p).unwrap().unwrap();
    let t = drule::eqt_elim(k, &iff).unwrap();
    assert_eq!(t.concl(), &p);
    ok(&th, &t);
}

fn arb_term(depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0u64..4).prop_map(Term::Num),
        prop::sample::select(vec!["x", "y", "z"]).prop_map(var),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        (prop::sample::select(vec!["plus", "times"]), inner.clone(), inner)
            .prop_map(|(op, a, b)| Term::app(op, vec![a, b], Sort::nat()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rewrite_terminates_and_is_idempotent(t in arb_term(4), budget in 0usize..200) {
        let th = theory("nat");
        let k = Kernel::new(&th);
        let p = Prop::eq(t.clone(), t);
        let mut rw = Rewriter::new(k, th.simp_rules().clone(), budget);
        rw.prop_simps = false;
        let first = rw.rewrite_prop(&p).unwrap();
        prop_assert!(rw.steps_used() <= budget);
        if !rw.exhausted {
            let nf = first.as_ref().map(minilang::kernel::rewrite::rhs_prop).unwrap_or(p.clone());
            let mut again = Rewriter::new(k, th.simp_rules().clone(), 10_000);
            again.prop_simps = false;
            prop_assert!(again.rewrite_prop(&nf).unwrap().is_none());
        }
        if let Some(iff) = first {
            prop_assert!(replay(&th, &iff).is_ok());
        }
    }

    #[test]
    fn binder_names_do_not_matter(a in "[a-w]", b in "[a-w]") {
        let th = theory("nat");
        let p = prop(&th, &format!("∀{a}. {a} ≤ {a} + 1"), &[]);
        let q = prop(&th, &format!("∀{b}. {b} ≤ {b} + 1"), &[]);
        prop_assert_eq!(p, q);
    }
}
