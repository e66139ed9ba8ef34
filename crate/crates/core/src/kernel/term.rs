//! First-order terms over a sorted signature.
//!
//! Bound variables are de Bruijn indices; names only survive as hints on
//! binders, so alpha-equivalent terms are structurally equal.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, LazyLock};

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort(Arc<SortData>);

#[derive(PartialEq, Eq, Hash, PartialOrd, Ord)]
struct SortData {
    name: Name,
    params: Vec<Sort>,
}

static BOOL: LazyLock<Sort> = LazyLock::new(|| Sort::atomic("bool"));
static NAT: LazyLock<Sort> = LazyLock::new(|| Sort::atomic("nat"));

impl Sort {
    pub fn new(name: &str, params: Vec<Sort>) -> Sort {
        Sort(Arc::new(SortData { name: Name::from(name), params }))
    }

    pub fn atomic(name: &str) -> Sort {
        Sort::new(name, vec![])
    }

    pub fn bool() -> Sort {
        BOOL.clone()
    }

    pub fn nat() -> Sort {
        NAT.clone()
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn params(&self) -> &[Sort] {
        &self.0.params
    }

    pub fn is_bool(&self) -> bool {
        self.name() == "bool" && self.params().is_empty()
    }

    pub fn is_nat(&self) -> bool {
        self.name() == "nat" && self.params().is_empty()
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        if !self.params().is_empty() {
            f.write_str("(")?;
            for (i, p) in self.params().iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A term. `Schem` variables (`?x`) are instantiable by the kernel's
/// `instantiate` rule; `Var`s are fixed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Name, Sort),
    Schem(Name, Sort),
    Bound(u32, Sort),
    Num(u64),
    App(Arc<App>),
}

#[derive(PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct App {
    pub head: Name,
    pub args: Vec<Term>,
    pub sort: Sort,
}

impl Term {
    pub fn var(n: &str, s: Sort) -> Term {
        Term::Var(Name::from(n), s)
    }

    pub fn schem(n: &str, s: Sort) -> Term {
        Term::Schem(Name::from(n), s)
    }

    pub fn app(head: &str, args: Vec<Term>, sort: Sort) -> Term {
        Term::App(Arc::new(App { head: Name::from(head), args, sort }))
    }

    pub fn app_n(head: Name, args: Vec<Term>, sort: Sort) -> Term {
        Term::App(Arc::new(App { head, args, sort }))
    }

    pub fn constant(head: &str, sort: Sort) -> Term {
        Term::app(head, vec![], sort)
    }

    pub fn sort(&self) -> Sort {
        match self {
            Term::Var(_, s) | Term::Schem(_, s) | Term::Bound(_, s) => s.clone(),
            Term::Num(_) => Sort::nat(),
            Term::App(a) => a.sort.clone(),
        }
    }

    pub fn as_app(&self) -> Option<&App> {
        match self {
            Term::App(a) => Some(a),
            _ => None,
        }
    }

    pub fn head(&self) -> Option<&str> {
        self.as_app().map(|a| &*a.head)
    }

    pub fn size(&self) -> usize {
        match self {
            Term::App(a) => 1 + a.args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Schem(..) => false,
            Term::App(a) => a.args.iter().all(Term::is_ground),
            _ => true,
        }
    }

    pub fn has_loose_bound(&self, depth: u32) -> bool {
        match self {
            Term::Bound(i, _) => *i >= depth,
            Term::App(a) => a.args.iter().any(|t| t.has_loose_bound(depth)),
            _ => false,
        }
    }

    pub fn free_vars(&self, out: &mut BTreeSet<(Name, Sort)>) {
        match self {
            Term::Var(n, s) => {
                out.insert((n.clone(), s.clone()));
            }
            Term::App(a) => a.args.iter().for_each(|t| t.free_vars(out)),
            _ => {}
        }
    }

    pub fn schematics(&self, out: &mut BTreeSet<(Name, Sort)>) {
        match self {
            Term::Schem(n, s) => {
                out.insert((n.clone(), s.clone()));
            }
            Term::App(a) => a.args.iter().for_each(|t| t.schematics(out)),
            _ => {}
        }
    }

    pub fn has_var(&self, n: &str) -> bool {
        match self {
            Term::Var(m, _) => &**m == n,
            Term::App(a) => a.args.iter().any(|t| t.has_var(n)),
            _ => false,
        }
    }

    pub fn contains(&self, sub: &Term) -> bool {
        if self == sub {
            return true;
        }
        match self {
            Term::App(a) => a.args.iter().any(|t| t.contains(sub)),
            _ => false,
        }
    }

    /// Bottom-up structural map; `f` returns `Some` to replace a node.
    pub fn map(&self, f: &mut impl FnMut(&Term) -> Option<Term>) -> Term {
        if let Some(t) = f(self) {
            return t;
        }
        match self {
            Term::App(a) => {
                let args: Vec<Term> = a.args.iter().map(|t| t.map(f)).collect();
                if args.iter().zip(&a.args).all(|(x, y)| x == y) {
                    self.clone()
                } else {
                    Term::app_n(a.head.clone(), args, a.sort.clone())
                }
            }
            _ => self.clone(),
        }
    }

    /// Replace `Bound(depth)` by `u` (which must be closed).
    pub fn instantiate_bound(&self, depth: u32, u: &Term) -> Term {
        if !self.has_loose_bound(depth) {
            return self.clone();
        }
        self.map(&mut |t| match t {
            Term::Bound(i, _) if *i == depth => Some(u.clone()),
            _ => None,
        })
    }

    pub fn abstract_var(&self, n: &str, s: &Sort, depth: u32) -> Term {
        self.map(&mut |t| match t {
            Term::Var(m, ms) if &**m == n && ms == s => Some(Term::Bound(depth, s.clone())),
            _ => None,
        })
    }

    pub fn subst_var(&self, n: &str, s: &Sort, u: &Term) -> Term {
        if !self.has_var(n) {
            return self.clone();
        }
        self.map(&mut |t| match t {
            Term::Var(m, ms) if &**m == n && ms == s => Some(u.clone()),
            _ => None,
        })
    }

    pub fn subterms<'a>(&'a self, out: &mut Vec<&'a Term>) {
        out.push(self);
        if let Term::App(a) = self {
            for t in &a.args {
                t.subterms(out);
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::kernel::print::term_to_string(self, &mut Vec::new()))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::kernel::print::term_to_string(self, &mut Vec::new()))
    }
}
