//! First-order matching and unification over schematic variables.

use std::collections::BTreeMap;

use super::prop::{Prop, PropNode as P};
use super::term::{Name, Term};

/// Simultaneous substitution of term schematics and proposition schematics.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subst {
    pub terms: BTreeMap<Name, Term>,
    pub props: BTreeMap<Name, Prop>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.props.is_empty()
    }

    pub fn bind_term(&mut self, n: &str, t: Term) {
        self.terms.insert(Name::from(n), t);
    }

    pub fn bind_prop(&mut self, n: &str, p: Prop) {
        self.props.insert(Name::from(n), p);
    }

    /// Apply once (no chasing); used by the kernel's `instantiate`.
    pub fn apply_term(&self, t: &Term) -> Term {
        if self.terms.is_empty() || t.is_ground() {
            return t.clone();
        }
        t.map(&mut |u| match u {
            Term::Schem(n, _) => self.terms.get(n).cloned(),
            _ => None,
        })
    }

    pub fn apply_prop(&self, p: &Prop) -> Prop {
        if self.is_empty() {
            return p.clone();
        }
        let q = if self.terms.is_empty() { p.clone() } else { p.map_terms(0, &mut |t, _| self.apply_term(t)) };
        if self.props.is_empty() {
            return q;
        }
        apply_props(&q, &self.props)
    }

    /// Apply repeatedly until no bound schematic remains (for triangular
    /// substitutions produced by unification).
    pub fn resolve_term(&self, t: &Term) -> Term {
        if self.terms.is_empty() || t.is_ground() {
            return t.clone();
        }
        t.map(&mut |u| match u {
            Term::Schem(n, _) => self.terms.get(n).map(|v| self.resolve_term(v)),
            _ => None,
        })
    }

    pub fn resolve_prop(&self, p: &Prop) -> Prop {
        let q = if self.terms.is_empty() { p.clone() } else { p.map_terms(0, &mut |t, _| self.resolve_term(t)) };
        if self.props.is_empty() {
            return q;
        }
        let mut out = apply_props(&q, &self.props);
        // prop bindings may themselves mention bound schematics
        for _ in 0..8 {
            let next = apply_props(&out.map_terms(0, &mut |t, _| self.resolve_term(t)), &self.props);
            if next == out {
                break;
            }
            out = next;
        }
        out
    }

    /// Fully resolved idempotent version of a triangular substitution.
    pub fn normalized(&self) -> Subst {
        Subst {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), self.resolve_term(v))).collect(),
            props: self.props.iter().map(|(k, v)| (k.clone(), self.resolve_prop(v))).collect(),
        }
    }
}

fn apply_props(p: &Prop, m: &BTreeMap<Name, Prop>) -> Prop {
    match p.view() {
        P::Schem(n) => m.get(n).cloned().unwrap_or_else(|| p.clone()),
        P::True | P::False | P::Atom(_) | P::Eq(..) => p.clone(),
        P::Not(a) => Prop::not(apply_props(a, m)),
        P::And(a, b) => Prop::and(apply_props(a, m), apply_props(b, m)),
        P::Or(a, b) => Prop::or(apply_props(a, m), apply_props(b, m)),
        P::Implies(a, b) => Prop::implies(apply_props(a, m), apply_props(b, m)),
        P::Iff(a, b) => Prop::iff(apply_props(a, m), apply_props(b, m)),
        P::Forall(x, b) => Prop::new(P::Forall(x.clone(), apply_props(b, m))),
        P::Exists(x, b) => Prop::new(P::Exists(x.clone(), apply_props(b, m))),
    }
}

/// One-way matching: schematics of `pat` are bound, `target` is rigid.
pub fn match_term(pat: &Term, target: &Term, s: &mut Subst) -> bool {
    match (pat, target) {
        (Term::Schem(n, ps), _) => {
            if *ps != target.sort() || target.has_loose_bound(0) {
                return false;
            }
            match s.terms.get(n) {
                Some(b) => b == target,
                None => {
                    s.terms.insert(n.clone(), target.clone());
                    true
                }
            }
        }
        (Term::App(a), Term::App(b)) => {
            a.head == b.head
                && a.sort == b.sort
                && a.args.len() == b.args.len()
                && a.args.iter().zip(&b.args).all(|(x, y)| match_term(x, y, s))
        }
        _ => pat == target,
    }
}

pub fn match_prop(pat: &Prop, target: &Prop, s: &mut Subst) -> bool {
    match (pat.view(), target.view()) {
        (P::Schem(n), _) => {
            if target.has_loose_bound(0) {
                return false;
            }
            match s.props.get(n) {
                Some(b) => b == target,
                None => {
                    s.props.insert(n.clone(), target.clone());
                    true
                }
            }
        }
        (P::True, P::True) | (P::False, P::False) => true,
        (P::Atom(a), P::Atom(b)) => match_term(a, b, s),
        (P::Eq(a1, b1), P::Eq(a2, b2)) => match_term(a1, a2, s) && match_term(b1, b2, s),
        (P::Not(a), P::Not(b)) => match_prop(a, b, s),
        (P::And(a1, b1), P::And(a2, b2))
        | (P::Or(a1, b1), P::Or(a2, b2))
        | (P::Implies(a1, b1), P::Implies(a2, b2))
        | (P::Iff(a1, b1), P::Iff(a2, b2)) => match_prop(a1, a2, s) && match_prop(b1, b2, s),
        (P::Forall(x, a), P::Forall(y, b)) | (P::Exists(x, a), P::Exists(y, b)) => {
            x.sort == y.sort && match_prop(a, b, s)
        }
        _ => false,
    }
}

fn walk<'a>(t: &'a Term, s: &'a Subst) -> &'a Term {
    let mut cur = t;
    while let Term::Schem(n, _) = cur {
        match s.terms.get(n) {
            Some(b) => cur = b,
            None => break,
        }
    }
    cur
}

fn occurs(n: &str, t: &Term, s: &Subst) -> bool {
    match walk(t, s) {
        Term::Schem(m, _) => &**m == n,
        Term::App(a) => a.args.iter().any(|x| occurs(n, x, s)),
        _ => false,
    }
}

/// Syntactic unification producing a triangular substitution.
pub fn unify_terms(a: &Term, b: &Term, s: &mut Subst) -> bool {
    let a = walk(a, s).clone();
    let b = walk(b, s).clone();
    match (&a, &b) {
        (Term::Schem(n, sa), Term::Schem(m, _)) if n == m => {
            let _ = sa;
            true
        }
        (Term::Schem(n, sa), _) => {
            if *sa != b.sort() || b.has_loose_bound(0) || occurs(n, &b, s) {
                return false;
            }
            s.terms.insert(n.clone(), b.clone());
            true
        }
        (_, Term::Schem(..)) => unify_terms(&b, &a, s),
        (Term::App(x), Term::App(y)) => {
            x.head == y.head
                && x.sort == y.sort
                && x.args.len() == y.args.len()
                && x.args.iter().zip(&y.args).all(|(p, q)| unify_terms(p, q, s))
        }
        _ => a == b,
    }
}

/// Unification of propositions. Prop schematics bind only on one side at a
/// time and are not chased, which is all the provers need.
pub fn unify_props(a: &Prop, b: &Prop, s: &mut Subst) -> bool {
    match (a.view(), b.view()) {
        (P::Schem(n), _) | (_, P::Schem(n)) => {
            let other = if matches!(a.view(), P::Schem(m) if m == n) { b } else { a };
            if let Some(bound) = s.props.get(n).cloned() {
                return unify_props(&bound, other, s);
            }
            if matches!(other.view(), P::Schem(m) if m == n) {
                return true;
            }
            if other.has_loose_bound(0) {
                return false;
            }
            s.props.insert(n.clone(), other.clone());
            true
        }
        (P::True, P::True) | (P::False, P::False) => true,
        (P::Atom(x), P::Atom(y)) => unify_terms(x, y, s),
        (P::Eq(a1, b1), P::Eq(a2, b2)) => unify_terms(a1, a2, s) && unify_terms(b1, b2, s),
        (P::Not(x), P::Not(y)) => unify_props(x, y, s),
        (P::And(a1, b1), P::And(a2, b2))
        | (P::Or(a1, b1), P::Or(a2, b2))
        | (P::Implies(a1, b1), P::Implies(a2, b2))
        | (P::Iff(a1, b1), P::Iff(a2, b2)) => unify_props(a1, a2, s) && unify_props(b1, b2, s),
        (P::Forall(x, p), P::Forall(y, q)) | (P::Exists(x, p), P::Exists(y, q)) => {
            x.sort == y.sort && unify_props(p, q, s)
        }
        _ => false,
    }
}
