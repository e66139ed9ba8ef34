//! Propositions of many-sorted first-order logic with equality.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::term::{Name, Sort, Term};

/// Binder annotation. The name is only a printing hint: comparison and
/// hashing look at the sort alone, so alpha-equivalent props are equal.
#[derive(Clone)]
pub struct Binder {
    pub name: Name,
    pub sort: Sort,
}

impl PartialEq for Binder {
    fn eq(&self, o: &Self) -> bool {
        self.sort == o.sort
    }
}
impl Eq for Binder {}
impl Hash for Binder {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.sort.hash(h)
    }
}
impl PartialOrd for Binder {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Binder {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.sort.cmp(&o.sort)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropNode {
    True,
    False,
    Atom(Term),
    Eq(Term, Term),
    Not(Prop),
    And(Prop, Prop),
    Or(Prop, Prop),
    Implies(Prop, Prop),
    Iff(Prop, Prop),
    Forall(Binder, Prop),
    Exists(Binder, Prop),
    /// Proposition metavariable `?A`, instantiable like schematic terms.
    Schem(Name),
}

#[derive(Clone, Eq, Hash, PartialOrd, Ord)]
pub struct Prop(Arc<PropNode>);

impl PartialEq for Prop {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || *self.0 == *o.0
    }
}

use PropNode as P;

impl Prop {
    pub fn new(n: PropNode) -> Prop {
        Prop(Arc::new(n))
    }
    pub fn view(&self) -> &PropNode {
        &self.0
    }
    pub fn tt() -> Prop {
        Prop::new(P::True)
    }
    pub fn ff() -> Prop {
        Prop::new(P::False)
    }
    pub fn atom(t: Term) -> Prop {
        Prop::new(P::Atom(t))
    }
    pub fn eq(a: Term, b: Term) -> Prop {
        Prop::new(P::Eq(a, b))
    }
    pub fn not(a: Prop) -> Prop {
        Prop::new(P::Not(a))
    }
    pub fn and(a: Prop, b: Prop) -> Prop {
        Prop::new(P::And(a, b))
    }
    pub fn or(a: Prop, b: Prop) -> Prop {
        Prop::new(P::Or(a, b))
    }
    pub fn implies(a: Prop, b: Prop) -> Prop {
        Prop::new(P::Implies(a, b))
    }
    pub fn iff(a: Prop, b: Prop) -> Prop {
        Prop::new(P::Iff(a, b))
    }
    pub fn schem(n: &str) -> Prop {
        Prop::new(P::Schem(Name::from(n)))
    }

    /// `∀x. body`, abstracting the free variable `x : s` of `body`.
    pub fn forall(x: &str, s: Sort, body: &Prop) -> Prop {
        let b = body.abstract_var(x, &s, 0);
        Prop::new(P::Forall(Binder { name: Name::from(x), sort: s }, b))
    }

    pub fn exists(x: &str, s: Sort, body: &Prop) -> Prop {
        let b = body.abstract_var(x, &s, 0);
        Prop::new(P::Exists(Binder { name: Name::from(x), sort: s }, b))
    }

    pub fn foralls(vars: &[(Name, Sort)], body: &Prop) -> Prop {
        vars.iter().rev().fold(body.clone(), |acc, (n, s)| Prop::forall(n, s.clone(), &acc))
    }

    pub fn exists_many(vars: &[(Name, Sort)], body: &Prop) -> Prop {
        vars.iter().rev().fold(body.clone(), |acc, (n, s)| Prop::exists(n, s.clone(), &acc))
    }

    /// `h1 ⟶ h2 ⟶ … ⟶ concl`.
    pub fn implies_chain(hyps: &[Prop], concl: &Prop) -> Prop {
        hyps.iter().rev().fold(concl.clone(), |acc, h| Prop::implies(h.clone(), acc))
    }

    /// Right-nested disjunction; `False` when empty.
    pub fn disj(ps: &[Prop]) -> Prop {
        match ps.split_last() {
            None => Prop::ff(),
            Some((last, init)) => init.iter().rev().fold(last.clone(), |acc, p| Prop::or(p.clone(), acc)),
        }
    }

    pub fn conj(ps: &[Prop]) -> Prop {
        match ps.split_last() {
            None => Prop::tt(),
            Some((last, init)) => init.iter().rev().fold(last.clone(), |acc, p| Prop::and(p.clone(), acc)),
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self.view(), P::True)
    }
    pub fn is_false(&self) -> bool {
        matches!(self.view(), P::False)
    }

    /// Instantiate the outermost binder of a `Forall`/`Exists` body.
    pub fn open(body: &Prop, t: &Term) -> Prop {
        body.instantiate_bound(0, t)
    }

    pub fn size(&self) -> usize {
        match self.view() {
            P::True | P::False | P::Schem(_) => 1,
            P::Atom(t) => t.size(),
            P::Eq(a, b) => 1 + a.size() + b.size(),
            P::Not(a) => 1 + a.size(),
            P::And(a, b) | P::Or(a, b) | P::Implies(a, b) | P::Iff(a, b) => 1 + a.size() + b.size(),
            P::Forall(_, b) | P::Exists(_, b) => 1 + b.size(),
        }
    }

    /// Rebuild with `f` applied to every term; `f` receives the binder depth.
    pub fn map_terms(&self, depth: u32, f: &mut impl FnMut(&Term, u32) -> Term) -> Prop {
        let r = match self.view() {
            P::True | P::False | P::Schem(_) => return self.clone(),
            P::Atom(t) => P::Atom(f(t, depth)),
            P::Eq(a, b) => P::Eq(f(a, depth), f(b, depth)),
            P::Not(a) => P::Not(a.map_terms(depth, f)),
            P::And(a, b) => P::And(a.map_terms(depth, f), b.map_terms(depth, f)),
            P::Or(a, b) => P::Or(a.map_terms(depth, f), b.map_terms(depth, f)),
            P::Implies(a, b) => P::Implies(a.map_terms(depth, f), b.map_terms(depth, f)),
            P::Iff(a, b) => P::Iff(a.map_terms(depth, f), b.map_terms(depth, f)),
            P::Forall(x, b) => P::Forall(x.clone(), b.map_terms(depth + 1, f)),
            P::Exists(x, b) => P::Exists(x.clone(), b.map_terms(depth + 1, f)),
        };
        let p = Prop::new(r);
        if p == *self {
            self.clone()
        } else {
            p
        }
    }

    pub fn for_each_term(&self, depth: u32, f: &mut impl FnMut(&Term, u32)) {
        match self.view() {
            P::True | P::False | P::Schem(_) => {}
            P::Atom(t) => f(t, depth),
            P::Eq(a, b) => {
                f(a, depth);
                f(b, depth)
            }
            P::Not(a) => a.for_each_term(depth, f),
            P::And(a, b) | P::Or(a, b) | P::Implies(a, b) | P::Iff(a, b) => {
                a.for_each_term(depth, f);
                b.for_each_term(depth, f)
            }
            P::Forall(_, b) | P::Exists(_, b) => b.for_each_term(depth + 1, f),
        }
    }

    pub fn instantiate_bound(&self, depth: u32, u: &Term) -> Prop {
        if !self.has_loose_bound(depth) {
            return self.clone();
        }
        self.map_terms(depth, &mut |t, d| t.instantiate_bound(d, u))
    }

    pub fn abstract_var(&self, n: &str, s: &Sort, depth: u32) -> Prop {
        self.map_terms(depth, &mut |t, d| t.abstract_var(n, s, d))
    }

    pub fn has_loose_bound(&self, depth: u32) -> bool {
        let mut found = false;
        self.for_each_term(depth, &mut |t, d| found |= t.has_loose_bound(d));
        found
    }

    pub fn free_vars(&self) -> BTreeSet<(Name, Sort)> {
        let mut out = BTreeSet::new();
        self.for_each_term(0, &mut |t, _| t.free_vars(&mut out));
        out
    }

    pub fn has_var(&self, n: &str) -> bool {
        let mut found = false;
        self.for_each_term(0, &mut |t, _| found |= t.has_var(n));
        found
    }

    pub fn has_free(&self, n: &str, s: &Sort) -> bool {
        self.free_vars().contains(&(Name::from(n), s.clone()))
    }

    pub fn term_schematics(&self) -> BTreeSet<(Name, Sort)> {
        let mut out = BTreeSet::new();
        self.for_each_term(0, &mut |t, _| t.schematics(&mut out));
        out
    }

    pub fn prop_schematics(&self, out: &mut BTreeSet<Name>) {
        match self.view() {
            P::Schem(n) => {
                out.insert(n.clone());
            }
            P::True | P::False | P::Atom(_) | P::Eq(..) => {}
            P::Not(a) => a.prop_schematics(out),
            P::And(a, b) | P::Or(a, b) | P::Implies(a, b) | P::Iff(a, b) => {
                a.prop_schematics(out);
                b.prop_schematics(out)
            }
            P::Forall(_, b) | P::Exists(_, b) => b.prop_schematics(out),
        }
    }

    pub fn is_schematic_free(&self) -> bool {
        let mut s = BTreeSet::new();
        self.prop_schematics(&mut s);
        s.is_empty() && self.term_schematics().is_empty()
    }

    pub fn contains_term(&self, sub: &Term) -> bool {
        let mut found = false;
        self.for_each_term(0, &mut |t, _| found |= t.contains(sub));
        found
    }

    /// Capture-avoiding substitution of the free variable `x : s` by `u`.
    /// Binder hints that would shadow a free variable of `u` are renamed.
    pub fn subst_var(&self, x: &str, s: &Sort, u: &Term) -> Prop {
        if !self.has_var(x) {
            return self.clone();
        }
        let mut avoid = BTreeSet::new();
        u.free_vars(&mut avoid);
        let avoid: BTreeSet<Name> = avoid.into_iter().map(|(n, _)| n).collect();
        self.map_terms(0, &mut |t, _| t.subst_var(x, s, u)).rename_hints(&avoid)
    }

    pub fn rename_hints(&self, avoid: &BTreeSet<Name>) -> Prop {
        if avoid.is_empty() {
            return self.clone();
        }
        let rebind = |x: &Binder, body: &Prop| {
            let mut n = x.name.to_string();
            while avoid.contains(n.as_str()) {
                n.push('\'');
            }
            (Binder { name: Name::from(n), sort: x.sort.clone() }, body.rename_hints(avoid))
        };
        match self.view() {
            P::True | P::False | P::Schem(_) | P::Atom(_) | P::Eq(..) => self.clone(),
            P::Not(a) => Prop::not(a.rename_hints(avoid)),
            P::And(a, b) => Prop::and(a.rename_hints(avoid), b.rename_hints(avoid)),
            P::Or(a, b) => Prop::or(a.rename_hints(avoid), b.rename_hints(avoid)),
            P::Implies(a, b) => Prop::implies(a.rename_hints(avoid), b.rename_hints(avoid)),
            P::Iff(a, b) => Prop::iff(a.rename_hints(avoid), b.rename_hints(avoid)),
            P::Forall(x, b) => {
                let (x, b) = rebind(x, b);
                Prop::new(P::Forall(x, b))
            }
            P::Exists(x, b) => {
                let (x, b) = rebind(x, b);
                Prop::new(P::Exists(x, b))
            }
        }
    }

    /// Replace every occurrence of the proposition schematic `?n`.
    pub fn subst_prop_schem(&self, n: &str, q: &Prop) -> Prop {
        match self.view() {
            P::Schem(m) if &**m == n => q.clone(),
            P::True | P::False | P::Schem(_) | P::Atom(_) | P::Eq(..) => self.clone(),
            P::Not(a) => Prop::not(a.subst_prop_schem(n, q)),
            P::And(a, b) => Prop::and(a.subst_prop_schem(n, q), b.subst_prop_schem(n, q)),
            P::Or(a, b) => Prop::or(a.subst_prop_schem(n, q), b.subst_prop_schem(n, q)),
            P::Implies(a, b) => Prop::implies(a.subst_prop_schem(n, q), b.subst_prop_schem(n, q)),
            P::Iff(a, b) => Prop::iff(a.subst_prop_schem(n, q), b.subst_prop_schem(n, q)),
            P::Forall(x, b) => Prop::new(P::Forall(x.clone(), b.subst_prop_schem(n, q))),
            P::Exists(x, b) => Prop::new(P::Exists(x.clone(), b.subst_prop_schem(n, q))),
        }
    }

    /// Strip leading `∀`s, returning fresh-named free variables and the body.
    pub fn strip_forall(&self, avoid: &mut BTreeSet<Name>) -> (Vec<(Name, Sort)>, Prop) {
        let mut vars = vec![];
        let mut p = self.clone();
        while let P::Forall(x, b) = p.view() {
            let n = fresh_name(&x.name, avoid);
            avoid.insert(n.clone());
            let v = Term::Var(n.clone(), x.sort.clone());
            vars.push((n, x.sort.clone()));
            p = Prop::open(b, &v);
        }
        (vars, p)
    }

    /// Split `h1 ⟶ … ⟶ hn ⟶ c` into hypotheses and conclusion.
    pub fn strip_implies(&self) -> (Vec<Prop>, Prop) {
        let mut hs = vec![];
        let mut p = self.clone();
        while let P::Implies(a, b) = p.view() {
            hs.push(a.clone());
            p = b.clone();
        }
        (hs, p)
    }

    pub fn disjuncts(&self) -> Vec<Prop> {
        let mut out = vec![];
        let mut p = self.clone();
        while let P::Or(a, b) = p.view() {
            out.push(a.clone());
            p = b.clone();
        }
        out.push(p);
        out
    }

    pub fn conjuncts(&self) -> Vec<Prop> {
        let mut out = vec![];
        let mut p = self.clone();
        while let P::And(a, b) = p.view() {
            out.push(a.clone());
            p = b.clone();
        }
        out.push(p);
        out
    }
}

/// `base`, or `base` with primes appended until it avoids `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut n = base.to_string();
    while avoid.contains(n.as_str()) {
        n.push('\'');
    }
    Name::from(n)
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::prop_to_string(self))
    }
}

impl fmt::Debug for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::prop_to_string(self))
    }
}
