//! Theorems and the primitive inference rules.
//!
//! A [`Thm`] can only be produced by [`Kernel`] methods. Each theorem carries
//! a certificate: the DAG of primitive steps that built it. [`replay`] re-runs
//! a certificate through the primitives and checks the outcome matches.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::matching::Subst;
use super::prop::{Prop, PropNode as P};
use super::signature::Signature;
use super::term::{Name, Sort, Term};
use super::KernelError;

/// Access to the logical context a primitive needs: the signature and the
/// axiom table.
pub trait Logic {
    fn signature(&self) -> &Signature;
    fn axiom(&self, name: &str) -> Option<&Prop>;
}

/// One primitive inference. Arguments are the non-theorem inputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Assume(Prop),
    Axiom(Name),
    Instantiate(Subst),
    TrueIntro,
    FalseElim(Prop),
    ImpliesIntro(Prop),
    ImpliesElim,
    AndIntro,
    AndElimLeft,
    AndElimRight,
    OrIntroLeft(Prop),
    OrIntroRight(Prop),
    OrElim,
    NotIntro(Prop),
    NotElim,
    ByContradiction(Prop),
    IffIntro,
    IffElimLeft,
    IffElimRight,
    ForallIntro(Name, Sort),
    ForallElim(Term),
    ExistsIntro(Prop, Term),
    ExistsElim(Name, Sort),
    Refl(Term),
    EqSubst(Name, Sort, Prop),
    IffSubst(Name, Prop),
    ArithEval(Term),
    NumeralSuc(u64),
    NumNeq(u64, u64),
    Induct(Sort, Name, Prop),
    Exhaust(Sort, Term),
    Inject(Name),
    Distinct(Name, Name),
    Choice,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Assume(_) => "assume",
            Rule::Axiom(_) => "axiom",
            Rule::Instantiate(_) => "instantiate",
            Rule::TrueIntro => "true_intro",
            Rule::FalseElim(_) => "false_elim",
            Rule::ImpliesIntro(_) => "implies_intro",
            Rule::ImpliesElim => "implies_elim",
            Rule::AndIntro => "and_intro",
            Rule::AndElimLeft => "and_elim_left",
            Rule::AndElimRight => "and_elim_right",
            Rule::OrIntroLeft(_) => "or_intro_left",
            Rule::OrIntroRight(_) => "or_intro_right",
            Rule::OrElim => "or_elim",
            Rule::NotIntro(_) => "not_intro",
            Rule::NotElim => "not_elim",
            Rule::ByContradiction(_) => "by_contradiction",
            Rule::IffIntro => "iff_intro",
            Rule::IffElimLeft => "iff_elim_left",
            Rule::IffElimRight => "iff_elim_right",
            Rule::ForallIntro(..) => "forall_intro",
            Rule::ForallElim(_) => "forall_elim",
            Rule::ExistsIntro(..) => "exists_intro",
            Rule::ExistsElim(..) => "exists_elim",
            Rule::Refl(_) => "refl",
            Rule::EqSubst(..) => "eq_subst",
            Rule::IffSubst(..) => "iff_subst",
            Rule::ArithEval(_) => "arith_eval",
            Rule::NumeralSuc(_) => "numeral_suc",
            Rule::NumNeq(..) => "num_neq",
            Rule::Induct(..) => "induct",
            Rule::Exhaust(..) => "exhaust",
            Rule::Inject(_) => "inject",
            Rule::Distinct(..) => "distinct",
            Rule::Choice => "choice",
        }
    }
}

struct Step {
    rule: Rule,
    premises: Vec<Thm>,
}

/// Derivation certificate: shared DAG of primitive steps.
#[derive(Clone)]
pub struct Cert(Arc<Step>);

impl Cert {
    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn rule(&self) -> &Rule {
        &self.0.rule
    }

    /// Linearised step log in dependency order (premises first).
    pub fn log(&self) -> Vec<LogEntry> {
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<LogEntry> = Vec::new();
        let mut stack: Vec<(Cert, bool)> = vec![(self.clone(), false)];
        while let Some((c, expanded)) = stack.pop() {
            if index.contains_key(&c.key()) {
                continue;
            }
            if expanded {
                let premises = c.0.premises.iter().map(|p| index[&p.cert.key()]).collect();
                index.insert(c.key(), out.len());
                out.push(LogEntry { rule: c.0.rule.clone(), premises });
            } else {
                stack.push((c.clone(), true));
                for p in c.0.premises.iter().rev() {
                    if !index.contains_key(&p.cert.key()) {
                        stack.push((p.cert.clone(), false));
                    }
                }
            }
        }
        out
    }

    /// Names of all axioms used.
    pub fn axioms(&self) -> BTreeSet<Name> {
        self.log()
            .into_iter()
            .filter_map(|e| match e.rule {
                Rule::Axiom(n) => Some(n),
                _ => None,
            })
            .collect()
    }

    /// Content digest of the step log.
    pub fn id(&self) -> u64 {
        let mut h = fnv::FnvHasher::default();
        for e in self.log() {
            e.rule.hash(&mut h);
            e.premises.hash(&mut h);
        }
        h.finish()
    }
}

#[derive(Clone, Debug)]
pub struct LogEntry {
    pub rule: Rule,
    pub premises: Vec<usize>,
}

#[derive(Clone)]
pub struct Thm {
    hyps: Arc<Vec<Prop>>,
    concl: Prop,
    cert: Cert,
}

impl Thm {
    pub fn hyps(&self) -> &[Prop] {
        &self.hyps
    }
    pub fn concl(&self) -> &Prop {
        &self.concl
    }
    pub fn cert(&self) -> &Cert {
        &self.cert
    }
    /// Same hypotheses and conclusion (certificates may differ).
    pub fn same_sequent(&self, o: &Thm) -> bool {
        self.concl == o.concl && self.hyps == o.hyps
    }
}

impl fmt::Debug for Thm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.hyps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, " ⊢ {}", self.concl)
    }
}

impl fmt::Display for Thm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn merge(a: &[Prop], b: &[Prop]) -> Vec<Prop> {
    let mut v: Vec<Prop> = a.iter().chain(b).cloned().collect();
    v.sort();
    v.dedup();
    v
}

fn remove(a: &[Prop], p: &Prop) -> Vec<Prop> {
    a.iter().filter(|h| *h != p).cloned().collect()
}

fn err(rule: &str, msg: impl Into<String>) -> KernelError {
    KernelError::Rule { rule: rule.to_string(), msg: msg.into() }
}

fn ctor_arg_names(n: usize, avoid: &BTreeSet<Name>) -> Vec<Name> {
    let mut used = avoid.clone();
    (0..n)
        .map(|i| {
            let base = if n == 1 { "a".to_string() } else { format!("a{}", i + 1) };
            let nm = super::prop::fresh_name(&base, &used);
            used.insert(nm.clone());
            nm
        })
        .collect()
}

/// Ground evaluation of `+ - * ^ dvd ≤ <` on numerals.
pub fn eval_ground(t: &Term) -> Option<EvalResult> {
    let a = t.as_app()?;
    if a.args.len() != 2 {
        return None;
    }
    let (Term::Num(x), Term::Num(y)) = (&a.args[0], &a.args[1]) else { return None };
    let (x, y) = (*x, *y);
    let num = |v: Option<u64>| v.map(EvalResult::Num);
    match &*a.head {
        "plus" if a.sort.is_nat() => num(x.checked_add(y)),
        "minus" if a.sort.is_nat() => num(Some(x.saturating_sub(y))),
        "times" if a.sort.is_nat() => num(x.checked_mul(y)),
        "pow" if a.sort.is_nat() => num(u32::try_from(y).ok().and_then(|e| x.checked_pow(e))),
        "le" if a.sort.is_bool() => Some(EvalResult::Bool(x <= y)),
        "less" if a.sort.is_bool() => Some(EvalResult::Bool(x < y)),
        "dvd" if a.sort.is_bool() => Some(EvalResult::Bool(if x == 0 { y == 0 } else { y % x == 0 })),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalResult {
    Num(u64),
    Bool(bool),
}

/// Prefix of choice-function constants.
pub const CHOICE_PREFIX: &str = "%eps[";

/// The canonical witness `εy. P` for `∃y. P`. The constant's name is the
/// formula with its free variables abstracted; they become the arguments.
pub fn choice_term(ex: &Prop) -> Term {
    let P::Exists(b, _) = ex.view() else { panic!("choice_term on a non-existential") };
    let mut args: Vec<Term> = ex.free_vars().into_iter().map(|(n, s)| Term::Var(n, s)).collect();
    args.extend(ex.term_schematics().into_iter().map(|(n, s)| Term::Schem(n, s)));
    let mut sub = Subst::new();
    let mut abs = ex.clone();
    for (i, a) in args.iter().enumerate() {
        let hole = Term::Var(Name::from(format!("%a{i}")), a.sort());
        match a {
            Term::Var(n, s) => abs = abs.subst_var(n, s, &hole),
            Term::Schem(n, _) => sub.bind_term(n, hole),
            _ => unreachable!(),
        }
    }
    let abs = sub.apply_prop(&abs);
    Term::app(&format!("{CHOICE_PREFIX}{abs}]"), args, b.sort.clone())
}

/// Run one primitive. This is the single entry point both for building
/// theorems and for certificate replay.
pub fn apply_rule(lg: &dyn Logic, rule: &Rule, prem: &[Thm]) -> Result<Thm, KernelError> {
    let sig = lg.signature();
    let arity = match rule {
        Rule::Assume(_)
        | Rule::Axiom(_)
        | Rule::TrueIntro
        | Rule::Refl(_)
        | Rule::ArithEval(_)
        | Rule::NumeralSuc(_)
        | Rule::NumNeq(..)
        | Rule::Induct(..)
        | Rule::Exhaust(..)
        | Rule::Inject(_)
            | Rule::Distinct(..) => 0,
        Rule::ImpliesElim | Rule::AndIntro | Rule::NotElim | Rule::IffIntro | Rule::ExistsElim(..) => 2,
        Rule::EqSubst(..) | Rule::IffSubst(..) => 2,
        Rule::OrElim => 3,
        _ => 1,
    };
    if prem.len() != arity {
        return Err(err(rule.name(), format!("expects {arity} premises, got {}", prem.len())));
    }
    let mk = |hyps: Vec<Prop>, concl: Prop| Thm {
        hyps: Arc::new(hyps),
        concl,
        cert: Cert(Arc::new(Step { rule: rule.clone(), premises: prem.to_vec() })),
    };
    let c = |i: usize| prem[i].concl.view();
    match rule {
        Rule::Assume(p) => {
            sig.check_prop(p)?;
            Ok(mk(vec![p.clone()], p.clone()))
        }
        Rule::Axiom(n) => {
            let p = lg.axiom(n).ok_or_else(|| err("axiom", format!("unknown axiom {n}")))?;
            Ok(mk(vec![], p.clone()))
        }
        Rule::Instantiate(s) => {
            for (n, t) in &s.terms {
                sig.check_term(t, &[])?;
                let _ = n;
            }
            for p in s.props.values() {
                sig.check_prop(p)?;
            }
            // sorts of bound schematics must agree with their occurrences
            let th = &prem[0];
            let mut sch = th.concl.term_schematics();
            for h in th.hyps.iter() {
                sch.extend(h.term_schematics());
            }
            for (n, srt) in &sch {
                if let Some(t) = s.terms.get(n) {
                    if t.sort() != *srt {
                        return Err(err("instantiate", format!("?{n} : {srt} bound to {t} : {}", t.sort())));
                    }
                }
            }
            let mut hyps: Vec<Prop> = th.hyps.iter().map(|h| s.apply_prop(h)).collect();
            hyps.sort();
            hyps.dedup();
            Ok(mk(hyps, s.apply_prop(&th.concl)))
        }
        Rule::TrueIntro => Ok(mk(vec![], Prop::tt())),
        Rule::FalseElim(p) => {
            if !matches!(c(0), P::False) {
                return Err(err("false_elim", "premise is not False"));
            }
            sig.check_prop(p)?;
            Ok(mk(prem[0].hyps.to_vec(), p.clone()))
        }
        Rule::ImpliesIntro(a) => {
            sig.check_prop(a)?;
            Ok(mk(remove(&prem[0].hyps, a), Prop::implies(a.clone(), prem[0].concl.clone())))
        }
        Rule::ImpliesElim => match c(0) {
            P::Implies(a, b) if *a == prem[1].concl => Ok(mk(merge(&prem[0].hyps, &prem[1].hyps), b.clone())),
            _ => Err(err("implies_elim", format!("cannot apply {} to {}", prem[0].concl, prem[1].concl))),
        },
        Rule::AndIntro => Ok(mk(
            merge(&prem[0].hyps, &prem[1].hyps),
            Prop::and(prem[0].concl.clone(), prem[1].concl.clone()),
        )),
        Rule::AndElimLeft | Rule::AndElimRight => match c(0) {
            P::And(a, b) => {
                let r = if matches!(rule, Rule::AndElimLeft) { a } else { b };
                Ok(mk(prem[0].hyps.to_vec(), r.clone()))
            }
            _ => Err(err(rule.name(), "premise is not a conjunction")),
        },
        Rule::OrIntroLeft(b) => {
            sig.check_prop(b)?;
            Ok(mk(prem[0].hyps.to_vec(), Prop::or(prem[0].concl.clone(), b.clone())))
        }
        Rule::OrIntroRight(a) => {
            sig.check_prop(a)?;
            Ok(mk(prem[0].hyps.to_vec(), Prop::or(a.clone(), prem[0].concl.clone())))
        }
        Rule::OrElim => match c(0) {
            P::Or(a, b) => {
                if prem[1].concl != prem[2].concl {
                    return Err(err("or_elim", "case conclusions differ"));
                }
                let h = merge(&prem[0].hyps, &merge(&remove(&prem[1].hyps, a), &remove(&prem[2].hyps, b)));
                Ok(mk(h, prem[1].concl.clone()))
            }
            _ => Err(err("or_elim", "premise is not a disjunction")),
        },
        Rule::NotIntro(a) => {
            if !matches!(c(0), P::False) {
                return Err(err("not_intro", "premise is not False"));
            }
            sig.check_prop(a)?;
            Ok(mk(remove(&prem[0].hyps, a), Prop::not(a.clone())))
        }
        Rule::NotElim => match c(0) {
            P::Not(a) if *a == prem[1].concl => Ok(mk(merge(&prem[0].hyps, &prem[1].hyps), Prop::ff())),
            _ => Err(err("not_elim", format!("{} does not refute {}", prem[0].concl, prem[1].concl))),
        },
        Rule::ByContradiction(a) => {
            if !matches!(c(0), P::False) {
                return Err(err("by_contradiction", "premise is not False"));
            }
            sig.check_prop(a)?;
            Ok(mk(remove(&prem[0].hyps, &Prop::not(a.clone())), a.clone()))
        }
        Rule::IffIntro => match (c(0), c(1)) {
            (P::Implies(a, b), P::Implies(b2, a2)) if a == a2 && b == b2 => {
                Ok(mk(merge(&prem[0].hyps, &prem[1].hyps), Prop::iff(a.clone(), b.clone())))
            }
            _ => Err(err("iff_intro", "premises are not converse implications")),
        },
        Rule::IffElimLeft | Rule::IffElimRight => match c(0) {
            P::Iff(a, b) => {
                let r = if matches!(rule, Rule::IffElimLeft) {
                    Prop::implies(a.clone(), b.clone())
                } else {
                    Prop::implies(b.clone(), a.clone())
                };
                Ok(mk(prem[0].hyps.to_vec(), r))
            }
            _ => Err(err(rule.name(), "premise is not an equivalence")),
        },
        Rule::ForallIntro(x, s) => {
            sig.check_sort(s)?;
            if prem[0].hyps.iter().any(|h| h.has_free(x, s)) {
                return Err(err("forall_intro", format!("{x} is free in a hypothesis")));
            }
            Ok(mk(prem[0].hyps.to_vec(), Prop::forall(x, s.clone(), &prem[0].concl)))
        }
        Rule::ForallElim(t) => match c(0) {
            P::Forall(b, body) => {
                sig.check_term(t, &[])?;
                if t.sort() != b.sort {
                    return Err(err("forall_elim", format!("witness {t} has sort {}, expected {}", t.sort(), b.sort)));
                }
                Ok(mk(prem[0].hyps.to_vec(), Prop::open(body, t)))
            }
            _ => Err(err("forall_elim", "premise is not universally quantified")),
        },
        Rule::ExistsIntro(target, t) => match target.view() {
            P::Exists(b, body) => {
                sig.check_prop(target)?;
                sig.check_term(t, &[])?;
                if t.sort() != b.sort {
                    return Err(err("exists_intro", "witness sort mismatch"));
                }
                if Prop::open(body, t) != prem[0].concl {
                    return Err(err("exists_intro", format!("{} is not an instance of {target}", prem[0].concl)));
                }
                Ok(mk(prem[0].hyps.to_vec(), target.clone()))
            }
            _ => Err(err("exists_intro", "target is not existential")),
        },
        Rule::ExistsElim(y, s) => match c(0) {
            P::Exists(b, body) => {
                if b.sort != *s {
                    return Err(err("exists_elim", "eigenvariable sort mismatch"));
                }
                let inst = Prop::open(body, &Term::Var(y.clone(), s.clone()));
                if prem[0].concl.has_free(y, s) || prem[1].concl.has_free(y, s) {
                    return Err(err("exists_elim", format!("eigenvariable {y} is not fresh")));
                }
                let rest = remove(&prem[1].hyps, &inst);
                if rest.iter().any(|h| h.has_free(y, s)) {
                    return Err(err("exists_elim", format!("eigenvariable {y} occurs in a hypothesis")));
                }
                Ok(mk(merge(&prem[0].hyps, &rest), prem[1].concl.clone()))
            }
            _ => Err(err("exists_elim", "premise is not existential")),
        },
        Rule::Refl(t) => {
            sig.check_term(t, &[])?;
            Ok(mk(vec![], Prop::eq(t.clone(), t.clone())))
        }
        Rule::EqSubst(z, s, motive) => match c(0) {
            P::Eq(l, r) => {
                if l.sort() != *s {
                    return Err(err("eq_subst", "hole sort mismatch"));
                }
                sig.check_prop(motive)?;
                if motive.subst_var(z, s, l) != prem[1].concl {
                    return Err(err("eq_subst", format!("{} is not the motive at {l}", prem[1].concl)));
                }
                Ok(mk(merge(&prem[0].hyps, &prem[1].hyps), motive.subst_var(z, s, r)))
            }
            _ => Err(err("eq_subst", "premise is not an equation")),
        },
        Rule::IffSubst(x, motive) => match c(0) {
            P::Iff(a, b) => {
                sig.check_prop(motive)?;
                if motive.subst_prop_schem(x, a) != prem[1].concl {
                    return Err(err("iff_subst", "premise is not the motive instance"));
                }
                Ok(mk(merge(&prem[0].hyps, &prem[1].hyps), motive.subst_prop_schem(x, b)))
            }
            _ => Err(err("iff_subst", "premise is not an equivalence")),
        },
        Rule::ArithEval(t) => {
            sig.check_term(t, &[])?;
            match eval_ground(t) {
                Some(EvalResult::Num(v)) => Ok(mk(vec![], Prop::eq(t.clone(), Term::Num(v)))),
                Some(EvalResult::Bool(true)) => Ok(mk(vec![], Prop::atom(t.clone()))),
                Some(EvalResult::Bool(false)) => Ok(mk(vec![], Prop::not(Prop::atom(t.clone())))),
                None => Err(err("arith_eval", format!("{t} is not a ground arithmetic redex"))),
            }
        }
        Rule::NumeralSuc(k) => {
            let k1 = k.checked_add(1).ok_or_else(|| err("numeral_suc", "overflow"))?;
            Ok(mk(vec![], Prop::eq(Term::Num(k1), Term::app("suc", vec![Term::Num(*k)], Sort::nat()))))
        }
        Rule::NumNeq(a, b) => {
            if a == b {
                return Err(err("num_neq", "numerals are equal"));
            }
            Ok(mk(vec![], Prop::not(Prop::eq(Term::Num(*a), Term::Num(*b)))))
        }
        Rule::Induct(s, x, motive) => {
            let ctors = sig.datatype(s).ok_or_else(|| err("induct", format!("{s} is not a datatype")))?;
            sig.check_prop(motive)?;
            let mut avoid: BTreeSet<Name> = motive.free_vars().into_iter().map(|(n, _)| n).collect();
            avoid.insert(x.clone());
            let mut cases = vec![];
            for ctor in ctors {
                let names = ctor_arg_names(ctor.args.len(), &avoid);
                let vars: Vec<Term> =
                    names.iter().zip(&ctor.args).map(|(n, s)| Term::Var(n.clone(), s.clone())).collect();
                let ihs: Vec<Prop> =
                    vars.iter().filter(|v| v.sort() == *s).map(|v| motive.subst_var(x, s, v)).collect();
                let concl = motive.subst_var(x, s, &sig.ctor_term(s, ctor, vars.clone()));
                let body = Prop::implies_chain(&ihs, &concl);
                let bound: Vec<(Name, Sort)> = names.into_iter().zip(ctor.args.iter().cloned()).collect();
                cases.push(Prop::foralls(&bound, &body));
            }
            let goal = Prop::forall(x, s.clone(), motive);
            Ok(mk(vec![], Prop::implies_chain(&cases, &goal)))
        }
        Rule::Exhaust(s, t) => {
            let ctors = sig.datatype(s).ok_or_else(|| err("exhaust", format!("{s} is not a datatype")))?;
            sig.check_term(t, &[])?;
            if t.sort() != *s {
                return Err(err("exhaust", "scrutinee sort mismatch"));
            }
            let mut avoid = BTreeSet::new();
            t.free_vars(&mut avoid);
            let avoid: BTreeSet<Name> = avoid.into_iter().map(|(n, _)| n).collect();
            let mut ds = vec![];
            for ctor in ctors {
                let names = ctor_arg_names(ctor.args.len(), &avoid);
                let vars: Vec<Term> =
                    names.iter().zip(&ctor.args).map(|(n, s)| Term::Var(n.clone(), s.clone())).collect();
                let eq = Prop::eq(t.clone(), sig.ctor_term(s, ctor, vars));
                let bound: Vec<(Name, Sort)> = names.into_iter().zip(ctor.args.iter().cloned()).collect();
                ds.push(Prop::exists_many(&bound, &eq));
            }
            Ok(mk(vec![], Prop::disj(&ds)))
        }
        Rule::Inject(cn) => {
            let s = sig.is_ctor(cn).ok_or_else(|| err("inject", format!("{cn} is not a constructor")))?;
            let ctor = sig.datatype(&s).unwrap().iter().find(|c| c.name == *cn).unwrap();
            if ctor.args.is_empty() {
                return Err(err("inject", "nullary constructor"));
            }
            let n = ctor.args.len();
            let xs = ctor_arg_names(n, &BTreeSet::new());
            let ys: Vec<Name> = xs.iter().map(|x| Name::from(format!("{x}'"))).collect();
            let tx: Vec<Term> = xs.iter().zip(&ctor.args).map(|(v, s)| Term::Var(v.clone(), s.clone())).collect();
            let ty: Vec<Term> = ys.iter().zip(&ctor.args).map(|(v, s)| Term::Var(v.clone(), s.clone())).collect();
            let lhs = Prop::eq(sig.ctor_term(&s, ctor, tx.clone()), sig.ctor_term(&s, ctor, ty.clone()));
            let rhs = Prop::conj(&tx.iter().zip(&ty).map(|(a, b)| Prop::eq(a.clone(), b.clone())).collect::<Vec<_>>());
            let mut bound: Vec<(Name, Sort)> = xs.into_iter().zip(ctor.args.iter().cloned()).collect();
            bound.extend(ys.into_iter().zip(ctor.args.iter().cloned()));
            Ok(mk(vec![], Prop::foralls(&bound, &Prop::implies(lhs, rhs))))
        }
        Rule::Choice => match c(0) {
            P::Exists(_, body) => {
                let mut ps = BTreeSet::new();
                prem[0].concl.prop_schematics(&mut ps);
                if !ps.is_empty() {
                    return Err(err("choice", "premise contains proposition schematics"));
                }
                Ok(mk(prem[0].hyps.to_vec(), Prop::open(body, &choice_term(&prem[0].concl))))
            }
            _ => Err(err("choice", "premise is not existential")),
        },
        Rule::Distinct(c1, c2) => {
            let s = sig.is_ctor(c1).ok_or_else(|| err("distinct", format!("{c1} is not a constructor")))?;
            if c1 == c2 || sig.is_ctor(c2).as_ref() != Some(&s) {
                return Err(err("distinct", "need two different constructors of one datatype"));
            }
            let cs = sig.datatype(&s).unwrap();
            let k1 = cs.iter().find(|c| c.name == *c1).unwrap();
            let k2 = cs.iter().find(|c| c.name == *c2).unwrap();
            let xs = ctor_arg_names(k1.args.len(), &BTreeSet::new());
            let ys: Vec<Name> = ctor_arg_names(k2.args.len(), &BTreeSet::new())
                .into_iter()
                .map(|y| Name::from(format!("{y}'")))
                .collect();
            let tx: Vec<Term> = xs.iter().zip(&k1.args).map(|(v, s)| Term::Var(v.clone(), s.clone())).collect();
            let ty: Vec<Term> = ys.iter().zip(&k2.args).map(|(v, s)| Term::Var(v.clone(), s.clone())).collect();
            let body = Prop::not(Prop::eq(sig.ctor_term(&s, k1, tx), sig.ctor_term(&s, k2, ty)));
            let mut bound: Vec<(Name, Sort)> = xs.into_iter().zip(k1.args.iter().cloned()).collect();
            bound.extend(ys.into_iter().zip(k2.args.iter().cloned()));
            Ok(mk(vec![], Prop::foralls(&bound, &body)))
        }
    }
}

/// Re-derive `th` from its certificate using only the primitives.
pub fn replay(lg: &dyn Logic, th: &Thm) -> Result<Thm, KernelError> {
    let log = th.cert.log();
    let mut done: Vec<Thm> = Vec::with_capacity(log.len());
    for (i, e) in log.iter().enumerate() {
        let prem: Vec<Thm> = e.premises.iter().map(|&j| done[j].clone()).collect();
        let r = apply_rule(lg, &e.rule, &prem)
            .map_err(|x| KernelError::Replay(format!("step {i} ({}): {x}", e.rule.name())))?;
        done.push(r);
    }
    let last = done.pop().ok_or_else(|| KernelError::Replay("empty certificate".into()))?;
    if !last.same_sequent(th) {
        return Err(KernelError::Replay(format!("replay produced {last:?}, expected {th:?}")));
    }
    Ok(last)
}

/// Entry points for the primitives, bound to a logical context.
#[derive(Clone, Copy)]
pub struct Kernel<'a> {
    pub lg: &'a dyn Logic,
}

type R = Result<Thm, KernelError>;

impl<'a> Kernel<'a> {
    pub fn new(lg: &'a dyn Logic) -> Kernel<'a> {
        Kernel { lg }
    }
    pub fn sig(&self) -> &Signature {
        self.lg.signature()
    }
    fn ap(&self, r: Rule, p: &[Thm]) -> R {
        apply_rule(self.lg, &r, p)
    }
    pub fn assume(&self, p: &Prop) -> R {
        self.ap(Rule::Assume(p.clone()), &[])
    }
    pub fn axiom(&self, n: &str) -> R {
        self.ap(Rule::Axiom(Name::from(n)), &[])
    }
    pub fn instantiate(&self, th: &Thm, s: &Subst) -> R {
        if s.is_empty() {
            return Ok(th.clone());
        }
        self.ap(Rule::Instantiate(s.clone()), std::slice::from_ref(th))
    }
    pub fn true_intro(&self) -> R {
        self.ap(Rule::TrueIntro, &[])
    }
    pub fn false_elim(&self, th: &Thm, p: &Prop) -> R {
        self.ap(Rule::FalseElim(p.clone()), std::slice::from_ref(th))
    }
    pub fn implies_intro(&self, a: &Prop, th: &Thm) -> R {
        self.ap(Rule::ImpliesIntro(a.clone()), std::slice::from_ref(th))
    }
    pub fn implies_elim(&self, ab: &Thm, a: &Thm) -> R {
        self.ap(Rule::ImpliesElim, &[ab.clone(), a.clone()])
    }
    pub fn and_intro(&self, a: &Thm, b: &Thm) -> R {
        self.ap(Rule::AndIntro, &[a.clone(), b.clone()])
    }
    pub fn and_elim_left(&self, th: &Thm) -> R {
        self.ap(Rule::AndElimLeft, std::slice::from_ref(th))
    }
    pub fn and_elim_right(&self, th: &Thm) -> R {
        self.ap(Rule::AndElimRight, std::slice::from_ref(th))
    }
    pub fn or_intro_left(&self, th: &Thm, b: &Prop) -> R {
        self.ap(Rule::OrIntroLeft(b.clone()), std::slice::from_ref(th))
    }
    pub fn or_intro_right(&self, a: &Prop, th: &Thm) -> R {
        self.ap(Rule::OrIntroRight(a.clone()), std::slice::from_ref(th))
    }
    pub fn or_elim(&self, ab: &Thm, ca: &Thm, cb: &Thm) -> R {
        self.ap(Rule::OrElim, &[ab.clone(), ca.clone(), cb.clone()])
    }
    pub fn not_intro(&self, a: &Prop, th: &Thm) -> R {
        self.ap(Rule::NotIntro(a.clone()), std::slice::from_ref(th))
    }
    pub fn not_elim(&self, na: &Thm, a: &Thm) -> R {
        self.ap(Rule::NotElim, &[na.clone(), a.clone()])
    }
    pub fn by_contradiction(&self, a: &Prop, th: &Thm) -> R {
        self.ap(Rule::ByContradiction(a.clone()), std::slice::from_ref(th))
    }
    pub fn iff_intro(&self, ab: &Thm, ba: &Thm) -> R {
        self.ap(Rule::IffIntro, &[ab.clone(), ba.clone()])
    }
    pub fn iff_elim_left(&self, th: &Thm) -> R {
        self.ap(Rule::IffElimLeft, std::slice::from_ref(th))
    }
    pub fn iff_elim_right(&self, th: &Thm) -> R {
        self.ap(Rule::IffElimRight, std::slice::from_ref(th))
    }
    pub fn forall_intro(&self, x: &str, s: &Sort, th: &Thm) -> R {
        self.ap(Rule::ForallIntro(Name::from(x), s.clone()), std::slice::from_ref(th))
    }
    pub fn forall_elim(&self, th: &Thm, t: &Term) -> R {
        self.ap(Rule::ForallElim(t.clone()), std::slice::from_ref(th))
    }
    pub fn exists_intro(&self, target: &Prop, t: &Term, th: &Thm) -> R {
        self.ap(Rule::ExistsIntro(target.clone(), t.clone()), std::slice::from_ref(th))
    }
    pub fn exists_elim(&self, ex: &Thm, y: &str, s: &Sort, th: &Thm) -> R {
        self.ap(Rule::ExistsElim(Name::from(y), s.clone()), &[ex.clone(), th.clone()])
    }
    pub fn refl(&self, t: &Term) -> R {
        self.ap(Rule::Refl(t.clone()), &[])
    }
    /// From `s = t` and `motive[z:=s]` derive `motive[z:=t]`.
    pub fn eq_subst(&self, eq: &Thm, z: &str, s: &Sort, motive: &Prop, th: &Thm) -> R {
        self.ap(Rule::EqSubst(Name::from(z), s.clone(), motive.clone()), &[eq.clone(), th.clone()])
    }
    /// From `A ⟷ B` and `motive[?x:=A]` derive `motive[?x:=B]`.
    pub fn iff_subst(&self, iff: &Thm, x: &str, motive: &Prop, th: &Thm) -> R {
        self.ap(Rule::IffSubst(Name::from(x), motive.clone()), &[iff.clone(), th.clone()])
    }
    pub fn arith_eval(&self, t: &Term) -> R {
        self.ap(Rule::ArithEval(t.clone()), &[])
    }
    pub fn numeral_suc(&self, k: u64) -> R {
        self.ap(Rule::NumeralSuc(k), &[])
    }
    pub fn num_neq(&self, a: u64, b: u64) -> R {
        self.ap(Rule::NumNeq(a, b), &[])
    }
    pub fn induct(&self, s: &Sort, x: &str, motive: &Prop) -> R {
        self.ap(Rule::Induct(s.clone(), Name::from(x), motive.clone()), &[])
    }
    pub fn exhaust(&self, s: &Sort, t: &Term) -> R {
        self.ap(Rule::Exhaust(s.clone(), t.clone()), &[])
    }
    pub fn inject(&self, c: &str) -> R {
        self.ap(Rule::Inject(Name::from(c)), &[])
    }
    pub fn distinct(&self, c1: &str, c2: &str) -> R {
        self.ap(Rule::Distinct(Name::from(c1), Name::from(c2)), &[])
    }
    /// From `∃y. P` derive `P[y := εy. P]`.
    pub fn choice(&self, th: &Thm) -> R {
        self.ap(Rule::Choice, std::slice::from_ref(th))
    }
}
