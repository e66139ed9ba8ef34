//! Conversion-based rewriting. Every step produces a theorem
//! `⊢ t = t'` or `⊢ P ⟷ P'`, so a rewritten goal is provably equal to the
//! original.

use std::sync::{Arc, LazyLock};

use super::drule::{self, fresh_for};
use super::matching::{match_prop, match_term, Subst};
use super::prop::{Prop, PropNode as P};
use super::signature::Signature;
use super::term::{Name, Term};
use super::thm::{eval_ground, EvalResult, Kernel, Logic, Thm};
use super::KernelError;

#[derive(Clone, Debug)]
pub enum Lhs {
    Term(Term, Term),
    Prop(Prop, Prop),
}

/// An oriented, possibly conditional, equation or equivalence.
/// `thm` is `⊢ c1 ⟶ … ⟶ cn ⟶ (lhs = rhs | lhs ⟷ rhs)`.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub name: Name,
    pub conds: Vec<Prop>,
    pub lhs: Lhs,
    pub thm: Thm,
    permutative: bool,
}

impl RewriteRule {
    /// Turn a theorem into a rewrite rule. Quantifiers become schematic;
    /// a non-equational conclusion `P` becomes `P ⟷ True` (and `¬P`
    /// becomes `P ⟷ False`). Returns `None` for unusable shapes.
    pub fn from_thm(k: Kernel, name: &str, th: &Thm) -> Option<RewriteRule> {
        let mut n = 0;
        let th = drule::spec_schematic(k, th, "%r", &mut n).ok()?;
        let (conds, concl) = th.concl().strip_implies();
        let th = match concl.view() {
            P::Eq(..) | P::Iff(..) => th,
            P::True => return None,
            P::Not(a) if !matches!(a.view(), P::Not(_)) => map_concl(k, &th, &conds, |c| drule::eqf_intro(k, c))?,
            P::Forall(..) | P::Exists(..) | P::Schem(_) | P::False => return None,
            _ => map_concl(k, &th, &conds, |c| drule::eqt_intro(k, c))?,
        };
        let (_, concl) = th.concl().strip_implies();
        let lhs = match concl.view() {
            P::Eq(l, r) => {
                if matches!(l, Term::Schem(..)) || l == r {
                    return None;
                }
                Lhs::Term(l.clone(), r.clone())
            }
            P::Iff(l, r) => {
                if matches!(l.view(), P::Schem(_) | P::True | P::False) || l == r {
                    return None;
                }
                Lhs::Prop(l.clone(), r.clone())
            }
            _ => return None,
        };
        // every schematic must be bound by matching the left-hand side
        let lprop = match &lhs {
            Lhs::Term(l, _) => Prop::eq(l.clone(), l.clone()),
            Lhs::Prop(l, _) => l.clone(),
        };
        let (lt, lp) = schem_sets(&lprop);
        let (at, ap) = schem_sets(th.concl());
        if !at.is_subset(&lt) || !ap.is_subset(&lp) {
            return None;
        }
        let permutative = match &lhs {
            Lhs::Term(l, r) => {
                let mut s1 = Subst::new();
                let mut s2 = Subst::new();
                match_term(l, r, &mut s1) && match_term(r, l, &mut s2)
            }
            Lhs::Prop(l, r) => {
                let mut s1 = Subst::new();
                let mut s2 = Subst::new();
                match_prop(l, r, &mut s1) && match_prop(r, l, &mut s2)
            }
        };
        Some(RewriteRule { name: Name::from(name), conds, lhs, thm: th, permutative })
    }
}

fn schem_sets(p: &Prop) -> (std::collections::BTreeSet<Name>, std::collections::BTreeSet<Name>) {
    let t = p.term_schematics().into_iter().map(|(n, _)| n).collect();
    let mut ps = std::collections::BTreeSet::new();
    p.prop_schematics(&mut ps);
    (t, ps)
}

/// Rewrite the final conclusion under the antecedents `conds`.
fn map_concl(k: Kernel, th: &Thm, conds: &[Prop], f: impl Fn(&Thm) -> Result<Thm, KernelError>) -> Option<Thm> {
    let mut cur = th.clone();
    for c in conds {
        cur = k.implies_elim(&cur, &k.assume(c).ok()?).ok()?;
    }
    let mut out = f(&cur).ok()?;
    for c in conds.iter().rev() {
        out = k.implies_intro(c, &out).ok()?;
    }
    Some(out)
}

struct EmptyLogic(Signature);
impl Logic for EmptyLogic {
    fn signature(&self) -> &Signature {
        &self.0
    }
    fn axiom(&self, _: &str) -> Option<&Prop> {
        None
    }
}

static PROP_SIMPS: LazyLock<Vec<RewriteRule>> = LazyLock::new(|| {
    let lg = EmptyLogic(Signature::new());
    let k = Kernel::new(&lg);
    let a = Prop::schem("A");
    let t = Prop::tt();
    let f = Prop::ff();
    let na = Prop::not(a.clone());
    let cases: Vec<(&str, Prop, Prop)> = vec![
        ("true_and", Prop::and(t.clone(), a.clone()), a.clone()),
        ("and_true", Prop::and(a.clone(), t.clone()), a.clone()),
        ("false_and", Prop::and(f.clone(), a.clone()), f.clone()),
        ("and_false", Prop::and(a.clone(), f.clone()), f.clone()),
        ("true_or", Prop::or(t.clone(), a.clone()), t.clone()),
        ("or_true", Prop::or(a.clone(), t.clone()), t.clone()),
        ("false_or", Prop::or(f.clone(), a.clone()), a.clone()),
        ("or_false", Prop::or(a.clone(), f.clone()), a.clone()),
        ("true_imp", Prop::implies(t.clone(), a.clone()), a.clone()),
        ("false_imp", Prop::implies(f.clone(), a.clone()), t.clone()),
        ("imp_true", Prop::implies(a.clone(), t.clone()), t.clone()),
        ("imp_false", Prop::implies(a.clone(), f.clone()), na.clone()),
        ("not_true", Prop::not(t.clone()), f.clone()),
        ("not_false", Prop::not(f.clone()), t.clone()),
        ("not_not", Prop::not(na.clone()), a.clone()),
        ("imp_refl", Prop::implies(a.clone(), a.clone()), t.clone()),
        ("and_idem", Prop::and(a.clone(), a.clone()), a.clone()),
        ("or_idem", Prop::or(a.clone(), a.clone()), a.clone()),
        ("true_iff", Prop::iff(t.clone(), a.clone()), a.clone()),
        ("iff_true", Prop::iff(a.clone(), t.clone()), a.clone()),
        ("false_iff", Prop::iff(f.clone(), a.clone()), na.clone()),
        ("iff_false", Prop::iff(a.clone(), f.clone()), na.clone()),
        ("iff_refl", Prop::iff(a.clone(), a.clone()), t.clone()),
        ("em", Prop::or(a.clone(), na.clone()), t.clone()),
        ("em_rev", Prop::or(na.clone(), a.clone()), t.clone()),
        ("contr", Prop::and(a.clone(), na.clone()), f.clone()),
        ("contr_rev", Prop::and(na.clone(), a.clone()), f.clone()),
    ];
    cases
        .into_iter()
        .map(|(n, l, r)| {
            let th = drule::prove_taut(k, &Prop::iff(l, r)).expect("propositional simp lemma");
            RewriteRule::from_thm(k, n, &th).expect("usable simp lemma")
        })
        .collect()
});

/// Built-in propositional simplification lemmas.
pub fn prop_simps() -> &'static [RewriteRule] {
    &PROP_SIMPS
}

pub struct Rewriter<'a> {
    k: Kernel<'a>,
    rules: Arc<Vec<RewriteRule>>,
    extra: Vec<RewriteRule>,
    facts: Vec<Thm>,
    budget: usize,
    used: usize,
    depth: usize,
    /// Set when the step budget ran out before a normal form was reached.
    pub exhausted: bool,
    /// Evaluate ground arithmetic and decide numeral equations.
    pub arith: bool,
    /// Include the built-in propositional lemmas.
    pub prop_simps: bool,
}

type R = Result<Option<Thm>, KernelError>;

impl<'a> Rewriter<'a> {
    pub fn new(k: Kernel<'a>, rules: Arc<Vec<RewriteRule>>, max_steps: usize) -> Rewriter<'a> {
        Rewriter { k, rules, extra: vec![], facts: vec![], budget: max_steps, used: 0, depth: 0, exhausted: false, arith: true, prop_simps: true }
    }

    pub fn add_rule(&mut self, r: RewriteRule) {
        self.extra.push(r);
    }

    /// Facts usable to discharge conditions (and as rewrite rules if
    /// `as_rules`).
    pub fn add_fact(&mut self, th: &Thm, as_rules: bool) {
        self.facts.push(th.clone());
        if as_rules {
            if let Some(r) = RewriteRule::from_thm(self.k, "asm", th) {
                self.extra.push(r);
            }
        }
    }

    pub fn steps_used(&self) -> usize {
        self.used
    }

    fn tick(&mut self) -> bool {
        if self.used >= self.budget {
            self.exhausted = true;
            return false;
        }
        self.used += 1;
        true
    }

    fn all_rules(&self) -> impl Iterator<Item = &RewriteRule> {
        let builtin: &[RewriteRule] = if self.prop_simps { prop_simps() } else { &[] };
        self.extra.iter().chain(self.rules.iter()).chain(builtin.iter())
    }

    /// `⊢ t = t'` with `t'` in normal form (or `None` if unchanged).
    pub fn rewrite_term(&mut self, t: &Term) -> R {
        let k = self.k;
        let mut acc: Option<Thm> = None;
        if let Term::App(a) = t {
            let mut eqs = Vec::with_capacity(a.args.len());
            let mut any = false;
            for x in &a.args {
                let e = self.rewrite_term(x)?;
                any |= e.is_some();
                eqs.push(e);
            }
            if any {
                acc = Some(drule::cong_app(k, t, &eqs)?);
            }
        }
        let cur = acc.as_ref().map(rhs_term).unwrap_or_else(|| t.clone());
        if let Some(step) = self.rewrite_term_root(&cur)? {
            // the contractum may contain new redexes anywhere
            let step = match self.rewrite_term(&rhs_term(&step))? {
                Some(more) => drule::trans(k, &step, &more)?,
                None => step,
            };
            acc = Some(match acc {
                Some(a) => drule::trans(k, &a, &step)?,
                None => step,
            });
        }
        Ok(acc)
    }

    fn rewrite_term_root(&mut self, t: &Term) -> R {
        if self.used >= self.budget {
            self.exhausted = true;
            return Ok(None);
        }
        let k = self.k;
        if self.arith {
            if let Some(EvalResult::Num(_)) = eval_ground(t) {
                if self.tick() {
                    return Ok(Some(k.arith_eval(t)?));
                }
                return Ok(None);
            }
            if let Some(a) = t.as_app() {
                if let ("suc", [Term::Num(n)]) = (&*a.head, a.args.as_slice()) {
                    if *n < u64::MAX {
                        if self.tick() {
                            return Ok(Some(drule::sym(k, &k.numeral_suc(*n)?)?));
                        }
                        return Ok(None);
                    }
                }
            }
        }
        let mut found = None;
        for (i, r) in self.all_rules().enumerate() {
            let Lhs::Term(l, rhs) = &r.lhs else { continue };
            let mut s = Subst::new();
            if !match_term(l, t, &mut s) {
                continue;
            }
            if r.permutative && s.apply_term(rhs) >= *t {
                continue;
            }
            found = Some((i, s));
            break;
        }
        let Some((i, s)) = found else { return Ok(None) };
        let r = self.all_rules().nth(i).unwrap().clone();
        self.apply_rule(&r, &s)
    }

    fn apply_rule(&mut self, r: &RewriteRule, s: &Subst) -> R {
        let k = self.k;
        let mut th = k.instantiate(&r.thm, s)?;
        for c in &r.conds {
            let c = s.apply_prop(c);
            match self.discharge(&c)? {
                Some(cth) => th = k.implies_elim(&th, &cth)?,
                None => return Ok(None),
            }
        }
        if !self.tick() {
            return Ok(None);
        }
        Ok(Some(th))
    }

    fn discharge(&mut self, c: &Prop) -> R {
        if let Some(f) = self.facts.iter().find(|f| f.concl() == c) {
            return Ok(Some(f.clone()));
        }
        if c.is_true() {
            return Ok(Some(self.k.true_intro()?));
        }
        if self.depth >= 3 {
            return Ok(None);
        }
        self.depth += 1;
        let r = self.rewrite_prop(c);
        self.depth -= 1;
        match r? {
            Some(iff) if rhs_prop(&iff).is_true() => Ok(Some(drule::eqt_elim(self.k, &iff)?)),
            _ => Ok(None),
        }
    }

    /// `⊢ p ⟷ p'` with `p'` in normal form (or `None` if unchanged).
    pub fn rewrite_prop(&mut self, p: &Prop) -> R {
        let k = self.k;
        let hole = Name::from("%H");
        let sub = |me: &mut Self, child: &Prop, ctx: Prop| -> R {
            Ok(match me.rewrite_prop(child)? {
                Some(th) => Some(drule::iff_cong(k, &th, &hole, &ctx)?),
                None => None,
            })
        };
        let h = Prop::schem(&hole);
        let mut acc: Option<Thm> = match p.view() {
            P::True | P::False | P::Schem(_) => None,
            P::Atom(t) => match self.rewrite_term(t)? {
                Some(eq) => {
                    let z = drule::hole_name(&[p, eq.concl()]);
                    let ctx = Prop::atom(Term::Var(z.clone(), t.sort()));
                    Some(drule::prop_cong(k, &eq, &z, &ctx)?)
                }
                None => None,
            },
            P::Eq(a, b) => {
                let mut acc = None;
                if let Some(eq) = self.rewrite_term(a)? {
                    let z = drule::hole_name(&[p, eq.concl()]);
                    let ctx = Prop::eq(Term::Var(z.clone(), a.sort()), b.clone());
                    acc = Some(drule::prop_cong(k, &eq, &z, &ctx)?);
                }
                if let Some(eq) = self.rewrite_term(b)? {
                    let cur = acc.as_ref().map(rhs_prop).unwrap_or_else(|| p.clone());
                    let P::Eq(a2, _) = cur.view() else { unreachable!() };
                    let z = drule::hole_name(&[&cur, eq.concl()]);
                    let ctx = Prop::eq(a2.clone(), Term::Var(z.clone(), b.sort()));
                    let th = drule::prop_cong(k, &eq, &z, &ctx)?;
                    acc = Some(match acc {
                        Some(x) => drule::iff_trans(k, &x, &th)?,
                        None => th,
                    });
                }
                acc
            }
            P::Not(a) => sub(self, a, Prop::not(h.clone()))?,
            P::And(a, b) | P::Or(a, b) | P::Implies(a, b) | P::Iff(a, b) => {
                let mk = |x: Prop, y: Prop| match p.view() {
                    P::And(..) => Prop::and(x, y),
                    P::Or(..) => Prop::or(x, y),
                    P::Implies(..) => Prop::implies(x, y),
                    _ => Prop::iff(x, y),
                };
                let first = sub(self, a, mk(h.clone(), b.clone()))?;
                let a2 = first.as_ref().map(|th| child(&rhs_prop(th), 0)).unwrap_or_else(|| a.clone());
                let second = sub(self, b, mk(a2, h.clone()))?;
                match (first, second) {
                    (Some(x), Some(y)) => Some(drule::iff_trans(k, &x, &y)?),
                    (x, y) => x.or(y),
                }
            }
            P::Forall(bd, body) | P::Exists(bd, body) => {
                let facts: Vec<&Thm> = self.facts.iter().collect();
                let x = fresh_for(&bd.name, &facts, &[p]);
                let v = Term::Var(x.clone(), bd.sort.clone());
                let opened = Prop::open(body, &v);
                match self.rewrite_prop(&opened)? {
                    Some(th) if th.hyps().iter().all(|h| !h.has_free(&x, &bd.sort)) => {
                        Some(if matches!(p.view(), P::Forall(..)) {
                            drule::forall_cong(k, &x, &bd.sort, &th)?
                        } else {
                            drule::exists_cong(k, &x, &bd.sort, &th)?
                        })
                    }
                    _ => None,
                }
            }
        };
        let cur = acc.as_ref().map(rhs_prop).unwrap_or_else(|| p.clone());
        if let Some(step) = self.rewrite_prop_root(&cur)? {
            let step = match self.rewrite_prop(&rhs_prop(&step))? {
                Some(more) => drule::iff_trans(k, &step, &more)?,
                None => step,
            };
            acc = Some(match acc {
                Some(a) => drule::iff_trans(k, &a, &step)?,
                None => step,
            });
        }
        Ok(acc)
    }

    fn rewrite_prop_root(&mut self, p: &Prop) -> R {
        if self.used >= self.budget {
            self.exhausted = true;
            return Ok(None);
        }
        let k = self.k;
        match p.view() {
            P::Eq(a, b) if a == b && self.prop_simps => {
                if self.tick() {
                    return Ok(Some(drule::eqt_intro(k, &k.refl(a)?)?));
                }
                return Ok(None);
            }
            P::Eq(Term::Num(x), Term::Num(y)) if x != y && self.arith => {
                if self.tick() {
                    return Ok(Some(drule::eqf_intro(k, &k.num_neq(*x, *y)?)?));
                }
                return Ok(None);
            }
            P::Atom(t) if self.arith => {
                if let Some(EvalResult::Bool(v)) = eval_ground(t) {
                    if !self.tick() {
                        return Ok(None);
                    }
                    let th = k.arith_eval(t)?;
                    return Ok(Some(if v { drule::eqt_intro(k, &th)? } else { drule::eqf_intro(k, &th)? }));
                }
            }
            P::Forall(_, b) | P::Exists(_, b) if self.prop_simps && (b.is_true() || b.is_false()) => {
                if let Some(th) = self.trivial_quant(p)? {
                    if self.tick() {
                        return Ok(Some(th));
                    }
                    return Ok(None);
                }
            }
            _ => {}
        }
        // a fact proves p outright
        if !matches!(p.view(), P::True | P::False) {
            if let Some(f) = self.facts.iter().find(|f| f.concl() == p).cloned() {
                if self.tick() {
                    return Ok(Some(drule::eqt_intro(k, &f)?));
                }
                return Ok(None);
            }
        }
        let mut found = None;
        for (i, r) in self.all_rules().enumerate() {
            let Lhs::Prop(l, rhs) = &r.lhs else { continue };
            let mut s = Subst::new();
            if !match_prop(l, p, &mut s) {
                continue;
            }
            if r.permutative && s.apply_prop(rhs) >= *p {
                continue;
            }
            found = Some((i, s));
            break;
        }
        let Some((i, s)) = found else { return Ok(None) };
        let r = self.all_rules().nth(i).unwrap().clone();
        self.apply_rule(&r, &s)
    }

    /// `(∀x. True) ⟷ True` and `(∃x. False) ⟷ False`.
    fn trivial_quant(&mut self, p: &Prop) -> R {
        let k = self.k;
        match p.view() {
            P::Forall(b, body) if body.is_true() => {
                let x = fresh_for(&b.name, &[], &[p]);
                let all = k.forall_intro(&x, &b.sort, &k.true_intro()?)?;
                Ok(Some(drule::eqt_intro(k, &all)?))
            }
            P::Exists(b, body) if body.is_false() => {
                let x = fresh_for(&b.name, &[], &[p]);
                let f = k.exists_elim(&k.assume(p)?, &x, &b.sort, &k.assume(&Prop::ff())?)?;
                let n = k.not_intro(p, &f)?;
                Ok(Some(drule::eqf_intro(k, &n)?))
            }
            _ => Ok(None),
        }
    }

    /// Rewrite the conclusion of `th`; returns `th` itself when unchanged.
    pub fn rewrite_thm(&mut self, th: &Thm) -> Result<Thm, KernelError> {
        match self.rewrite_prop(th.concl())? {
            Some(iff) => drule::iff_mp(self.k, &iff, th),
            None => Ok(th.clone()),
        }
    }
}

pub fn rhs_term(th: &Thm) -> Term {
    match th.concl().view() {
        P::Eq(_, r) => r.clone(),
        _ => panic!("not an equation: {th:?}"),
    }
}

pub fn rhs_prop(th: &Thm) -> Prop {
    match th.concl().view() {
        P::Iff(_, r) => r.clone(),
        _ => panic!("not an equivalence: {th:?}"),
    }
}

fn child(p: &Prop, i: usize) -> Prop {
    match p.view() {
        P::And(a, b) | P::Or(a, b) | P::Implies(a, b) | P::Iff(a, b) => {
            if i == 0 {
                a.clone()
            } else {
                b.clone()
            }
        }
        _ => p.clone(),
    }
}

/// Rewrite `th` with `rules` for at most `max_steps` steps.
pub fn rewrite(k: Kernel, th: &Thm, rules: &[RewriteRule], max_steps: usize) -> Result<Thm, KernelError> {
    let mut rw = Rewriter::new(k, Arc::new(rules.to_vec()), max_steps);
    rw.rewrite_thm(th)
}
