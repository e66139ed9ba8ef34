//! Sort and constant registry, frozen once a theory is loaded.

use std::collections::BTreeMap;

use super::prop::{Prop, PropNode as P};
use super::term::{Name, Sort, Term};
use super::KernelError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstSig {
    pub args: Vec<Sort>,
    pub result: Sort,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ctor {
    pub name: Name,
    pub args: Vec<Sort>,
}

#[derive(Clone, Debug)]
pub struct Signature {
    sorts: BTreeMap<Name, usize>,
    consts: BTreeMap<Name, ConstSig>,
    datatypes: BTreeMap<Sort, Vec<Ctor>>,
}

impl Default for Signature {
    fn default() -> Self {
        Signature::new()
    }
}

impl Signature {
    /// Signature with the built-in `bool` and `nat` datatypes.
    pub fn new() -> Signature {
        let mut s = Signature { sorts: BTreeMap::new(), consts: BTreeMap::new(), datatypes: BTreeMap::new() };
        s.sorts.insert(Name::from("bool"), 0);
        s.sorts.insert(Name::from("nat"), 0);
        let b = Sort::bool();
        let n = Sort::nat();
        s.consts.insert(Name::from("true"), ConstSig { args: vec![], result: b.clone() });
        s.consts.insert(Name::from("false"), ConstSig { args: vec![], result: b.clone() });
        s.consts.insert(Name::from("suc"), ConstSig { args: vec![n.clone()], result: n.clone() });
        s.datatypes.insert(
            b,
            vec![Ctor { name: Name::from("true"), args: vec![] }, Ctor { name: Name::from("false"), args: vec![] }],
        );
        s.datatypes.insert(
            n.clone(),
            vec![Ctor { name: Name::from("0"), args: vec![] }, Ctor { name: Name::from("suc"), args: vec![n] }],
        );
        for (c, args, r) in [
            ("plus", 2, "nat"),
            ("minus", 2, "nat"),
            ("times", 2, "nat"),
            ("pow", 2, "nat"),
            ("le", 2, "bool"),
            ("less", 2, "bool"),
        ] {
            s.consts.insert(
                Name::from(c),
                ConstSig { args: vec![Sort::nat(); args], result: Sort::atomic(r) },
            );
        }
        s
    }

    pub fn add_sort(&mut self, name: &str, arity: usize) -> Result<(), KernelError> {
        if self.sorts.contains_key(name) {
            return Err(KernelError::Signature(format!("sort {name} already declared")));
        }
        self.sorts.insert(Name::from(name), arity);
        Ok(())
    }

    pub fn add_const(&mut self, name: &str, args: Vec<Sort>, result: Sort) -> Result<(), KernelError> {
        if self.consts.contains_key(name) {
            return Err(KernelError::Signature(format!("constant {name} already declared")));
        }
        for s in args.iter().chain(std::iter::once(&result)) {
            self.check_sort(s)?;
        }
        self.consts.insert(Name::from(name), ConstSig { args, result });
        Ok(())
    }

    pub fn add_datatype(&mut self, sort: Sort, ctors: Vec<Ctor>) -> Result<(), KernelError> {
        self.check_sort(&sort)?;
        if self.datatypes.contains_key(&sort) {
            return Err(KernelError::Signature(format!("datatype {sort} already declared")));
        }
        if ctors.is_empty() {
            return Err(KernelError::Signature(format!("datatype {sort} has no constructors")));
        }
        for c in &ctors {
            self.add_const(&c.name, c.args.clone(), sort.clone())?;
        }
        self.datatypes.insert(sort, ctors);
        Ok(())
    }

    pub fn sort_arity(&self, name: &str) -> Option<usize> {
        self.sorts.get(name).copied()
    }

    pub fn sorts(&self) -> impl Iterator<Item = (&Name, &usize)> {
        self.sorts.iter()
    }

    pub fn consts(&self) -> impl Iterator<Item = (&Name, &ConstSig)> {
        self.consts.iter()
    }

    pub fn datatypes(&self) -> impl Iterator<Item = (&Sort, &Vec<Ctor>)> {
        self.datatypes.iter()
    }

    pub fn const_sig(&self, name: &str) -> Option<&ConstSig> {
        self.consts.get(name)
    }

    pub fn datatype(&self, s: &Sort) -> Option<&[Ctor]> {
        self.datatypes.get(s).map(|v| v.as_slice())
    }

    pub fn is_ctor(&self, name: &str) -> Option<Sort> {
        self.datatypes.iter().find(|(_, cs)| cs.iter().any(|c| &*c.name == name)).map(|(s, _)| s.clone())
    }

    pub fn check_sort(&self, s: &Sort) -> Result<(), KernelError> {
        match self.sorts.get(s.name()) {
            Some(&n) if n == s.params().len() => s.params().iter().try_for_each(|p| self.check_sort(p)),
            Some(&n) => Err(KernelError::Sort(format!("sort {} expects {n} parameters", s.name()))),
            None => Err(KernelError::Sort(format!("unknown sort {}", s.name()))),
        }
    }

    pub fn check_term(&self, t: &Term, binders: &[Sort]) -> Result<(), KernelError> {
        match t {
            Term::Var(_, s) | Term::Schem(_, s) => self.check_sort(s),
            Term::Bound(i, s) => {
                let i = *i as usize;
                if i >= binders.len() || binders[binders.len() - 1 - i] != *s {
                    return Err(KernelError::Sort(format!("ill-scoped bound variable #{i}")));
                }
                Ok(())
            }
            Term::Num(_) => Ok(()),
            Term::App(a) if a.head.starts_with(super::thm::CHOICE_PREFIX) => {
                a.args.iter().try_for_each(|x| self.check_term(x, binders))?;
                self.check_sort(&a.sort)
            }
            Term::App(a) => {
                let sig = self
                    .consts
                    .get(&a.head)
                    .ok_or_else(|| KernelError::Sort(format!("unknown constant {}", a.head)))?;
                if sig.args.len() != a.args.len() {
                    return Err(KernelError::Sort(format!(
                        "{} expects {} arguments, got {}",
                        a.head,
                        sig.args.len(),
                        a.args.len()
                    )));
                }
                if sig.result != a.sort {
                    return Err(KernelError::Sort(format!("{} has sort {}, not {}", a.head, sig.result, a.sort)));
                }
                for (x, s) in a.args.iter().zip(&sig.args) {
                    if x.sort() != *s {
                        return Err(KernelError::Sort(format!(
                            "argument {x} of {} has sort {}, expected {s}",
                            a.head,
                            x.sort()
                        )));
                    }
                    self.check_term(x, binders)?;
                }
                Ok(())
            }
        }
    }

    pub fn check_prop(&self, p: &Prop) -> Result<(), KernelError> {
        self.check_prop_in(p, &mut vec![])
    }

    fn check_prop_in(&self, p: &Prop, bs: &mut Vec<Sort>) -> Result<(), KernelError> {
        match p.view() {
            P::True | P::False | P::Schem(_) => Ok(()),
            P::Atom(t) => {
                if !t.sort().is_bool() {
                    return Err(KernelError::Sort(format!("atom {t} is not of sort bool")));
                }
                self.check_term(t, bs)
            }
            P::Eq(a, b) => {
                if a.sort() != b.sort() {
                    return Err(KernelError::Sort(format!(
                        "equation between sorts {} and {}",
                        a.sort(),
                        b.sort()
                    )));
                }
                self.check_term(a, bs)?;
                self.check_term(b, bs)
            }
            P::Not(a) => self.check_prop_in(a, bs),
            P::And(a, b) | P::Or(a, b) | P::Implies(a, b) | P::Iff(a, b) => {
                self.check_prop_in(a, bs)?;
                self.check_prop_in(b, bs)
            }
            P::Forall(x, b) | P::Exists(x, b) => {
                self.check_sort(&x.sort)?;
                bs.push(x.sort.clone());
                let r = self.check_prop_in(b, bs);
                bs.pop();
                r
            }
        }
    }

    /// Constructor application; the nat zero is the numeral `0`.
    pub fn ctor_term(&self, sort: &Sort, ctor: &Ctor, args: Vec<Term>) -> Term {
        if sort.is_nat() && &*ctor.name == "0" {
            Term::Num(0)
        } else {
            Term::app_n(ctor.name.clone(), args, sort.clone())
        }
    }
}
