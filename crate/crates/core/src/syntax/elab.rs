//! Elaboration of surface expressions into kernel propositions: name
//! resolution, notation and abbreviation expansion, and sort inference.

use std::collections::BTreeMap;
use std::fmt;

use crate::kernel::{Name, Prop, Signature, Sort, Term};

use super::expr::{BinOp, Expr, Notation, Quant, SortExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElabError(pub String);

impl fmt::Display for ElabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ElabError {}

type ER<T> = Result<T, ElabError>;

fn err<T>(msg: impl Into<String>) -> ER<T> {
    Err(ElabError(msg.into()))
}

/// How identifiers that resolve to nothing are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeMode {
    /// Unknown names are errors (proof scripts).
    Reject,
    /// Unknown names become free variables (axioms, later generalized).
    Generalize,
    /// Unknown names become schematic variables (rule schemas).
    Schematic,
}

pub struct Elaborator<'a> {
    pub sig: &'a Signature,
    pub notations: &'a [Notation],
    pub abbrevs: &'a BTreeMap<String, Expr>,
    /// Variables in scope, later entries shadowing earlier ones.
    pub vars: &'a [(Name, Sort)],
    pub free: FreeMode,
}

#[derive(Clone, Debug)]
enum Ty {
    S(Sort),
    M(usize),
}

#[derive(Clone, Debug)]
enum IT {
    Var(String, Ty),
    Schem(String, Ty),
    Num(u64),
    App(String, Vec<IT>, Sort),
}

#[derive(Clone, Debug)]
enum IP {
    True,
    False,
    Atom(IT),
    Eq(IT, IT),
    Not(Box<IP>),
    And(Box<IP>, Box<IP>),
    Or(Box<IP>, Box<IP>),
    Implies(Box<IP>, Box<IP>),
    Iff(Box<IP>, Box<IP>),
    Quant(Quant, String, Ty, Box<IP>),
    Schem(String),
}

struct St<'e> {
    metas: Vec<Option<Ty>>,
    /// Names introduced during elaboration (flex and generalized), in order.
    introduced: Vec<(String, Ty)>,
    binders: Vec<(String, Ty)>,
    e: &'e Elaborator<'e>,
}

pub fn sort_of_expr(sig: &Signature, s: &SortExpr) -> ER<Sort> {
    let SortExpr::Name(n, ps) = s;
    match sig.sort_arity(n) {
        None => err(format!("unknown sort {n}")),
        Some(a) if a != ps.len() => err(format!("sort {n} expects {a} parameters")),
        Some(_) => Ok(Sort::new(n, ps.iter().map(|p| sort_of_expr(sig, p)).collect::<ER<_>>()?)),
    }
}

impl<'e> St<'e> {
    fn fresh(&mut self) -> Ty {
        self.metas.push(None);
        Ty::M(self.metas.len() - 1)
    }

    fn walk(&self, t: &Ty) -> Ty {
        let mut t = t.clone();
        while let Ty::M(i) = t {
            match &self.metas[i] {
                Some(u) => t = u.clone(),
                None => return Ty::M(i),
            }
        }
        t
    }

    fn unify(&mut self, a: &Ty, b: &Ty, what: &dyn Fn() -> String) -> ER<()> {
        match (self.walk(a), self.walk(b)) {
            (Ty::M(i), Ty::M(j)) if i == j => Ok(()),
            (Ty::M(i), t) | (t, Ty::M(i)) => {
                self.metas[i] = Some(t);
                Ok(())
            }
            (Ty::S(x), Ty::S(y)) if x == y => Ok(()),
            (Ty::S(x), Ty::S(y)) => err(format!("sort mismatch in {}: {x} vs {y}", what())),
        }
    }

    fn resolve(&self, t: &Ty) -> Sort {
        match self.walk(t) {
            Ty::S(s) => s,
            Ty::M(_) => Sort::nat(),
        }
    }

    fn lookup_var(&self, n: &str) -> Option<Ty> {
        if let Some((_, t)) = self.binders.iter().rev().find(|(b, _)| b == n) {
            return Some(t.clone());
        }
        if let Some((_, t)) = self.introduced.iter().rev().find(|(b, _)| b == n) {
            return Some(t.clone());
        }
        self.e.vars.iter().rev().find(|(v, _)| &**v == n).map(|(_, s)| Ty::S(s.clone()))
    }

    fn ident_term(&mut self, n: &str) -> ER<(IT, Ty)> {
        if let Some(t) = self.lookup_var(n) {
            return Ok((IT::Var(n.to_string(), t.clone()), t));
        }
        if let Some(sig) = self.e.sig.const_sig(n) {
            if !sig.args.is_empty() {
                return err(format!("constant {n} expects {} arguments", sig.args.len()));
            }
            let r = sig.result.clone();
            return Ok((IT::App(n.to_string(), vec![], r.clone()), Ty::S(r)));
        }
        match self.e.free {
            FreeMode::Reject => err(format!("unknown identifier {n}")),
            FreeMode::Generalize => {
                let t = self.fresh();
                self.introduced.push((n.to_string(), t.clone()));
                Ok((IT::Var(n.to_string(), t.clone()), t))
            }
            FreeMode::Schematic => {
                let t = self.fresh();
                self.introduced.push((format!("?{n}"), t.clone()));
                Ok((IT::Schem(n.to_string(), t.clone()), t))
            }
        }
    }

    fn schem_term(&mut self, n: &str) -> (IT, Ty) {
        let key = format!("?{n}");
        if let Some((_, t)) = self.introduced.iter().find(|(b, _)| *b == key) {
            let t = t.clone();
            return (IT::Schem(n.to_string(), t.clone()), t);
        }
        let t = self.fresh();
        self.introduced.push((key, t.clone()));
        (IT::Schem(n.to_string(), t.clone()), t)
    }

    fn apply_const(&mut self, f: &str, args: &[Expr]) -> ER<(IT, Ty)> {
        let Some(sig) = self.e.sig.const_sig(f).cloned() else {
            if self.lookup_var(f).is_some() {
                return err(format!("{f} is a variable, not a function"));
            }
            return err(format!("unknown constant {f}"));
        };
        if sig.args.len() != args.len() {
            return err(format!("{f} expects {} arguments, got {}", sig.args.len(), args.len()));
        }
        let mut its = vec![];
        for (a, s) in args.iter().zip(&sig.args) {
            let (it, ty) = self.term(a)?;
            self.unify(&ty, &Ty::S(s.clone()), &|| format!("argument of {f}"))?;
            its.push(it);
        }
        Ok((IT::App(f.to_string(), its, sig.result.clone()), Ty::S(sig.result)))
    }

    fn term(&mut self, e: &Expr) -> ER<(IT, Ty)> {
        match e {
            Expr::Num(n) => Ok((IT::Num(*n), Ty::S(Sort::nat()))),
            Expr::Ident(n) => self.ident_term(n),
            Expr::Meta(m) => match self.e.free {
                FreeMode::Reject => err(format!("unexpanded abbreviation ?{m}")),
                _ => Ok(self.schem_term(m)),
            },
            Expr::App(f, xs) => self.apply_const(f, xs),
            Expr::Abs(a) => self.apply_const("abs", std::slice::from_ref(a)),
            Expr::Bin(op, a, b) => {
                let args = [(**a).clone(), (**b).clone()];
                match op {
                    BinOp::Plus => self.apply_const("plus", &args),
                    BinOp::Minus => self.apply_const("minus", &args),
                    BinOp::Times => self.apply_const("times", &args),
                    BinOp::Div => self.apply_const("div", &args),
                    BinOp::Pow => self.apply_const("pow", &args),
                    BinOp::Le => self.apply_const("le", &args),
                    BinOp::Less => self.apply_const("less", &args),
                    BinOp::Ge => self.apply_const("le", &[args[1].clone(), args[0].clone()]),
                    BinOp::Greater => self.apply_const("less", &[args[1].clone(), args[0].clone()]),
                    BinOp::Dvd => self.apply_const("dvd", &args),
                    BinOp::Mem => self.apply_const("mem", &args),
                    _ => err(format!("proposition '{}' used as a term", op.symbol())),
                }
            }
            Expr::Custom(sym, a, b) => {
                let k = self.notation(sym)?;
                self.apply_const(&k, &[(**a).clone(), (**b).clone()])
            }
            Expr::True | Expr::False | Expr::Not(_) | Expr::Quant(..) => err("proposition used as a term"),
        }
    }

    fn notation(&self, sym: &str) -> ER<String> {
        match self.e.notations.iter().rev().find(|n| n.symbol == sym) {
            Some(n) => Ok(n.konst.clone()),
            None => err(format!("unknown notation {sym}")),
        }
    }

    fn atom(&mut self, e: &Expr) -> ER<IP> {
        let (it, ty) = self.term(e)?;
        self.unify(&ty, &Ty::S(Sort::bool()), &|| "proposition".to_string())?;
        Ok(IP::Atom(it))
    }

    fn prop(&mut self, e: &Expr) -> ER<IP> {
        let b = |p: IP| Box::new(p);
        match e {
            Expr::True => Ok(IP::True),
            Expr::False => Ok(IP::False),
            Expr::Not(a) => Ok(IP::Not(b(self.prop(a)?))),
            Expr::Ident(n) => {
                let resolvable = self.lookup_var(n).is_some() || self.e.sig.const_sig(n).is_some();
                if !resolvable && self.e.free != FreeMode::Reject {
                    Ok(IP::Schem(n.clone()))
                } else {
                    self.atom(e)
                }
            }
            Expr::Meta(m) if self.e.free != FreeMode::Reject => {
                // a schematic in proposition position is a proposition schematic
                let known = self.introduced.iter().any(|(k, _)| *k == format!("?{m}"));
                if known {
                    self.atom(e)
                } else {
                    Ok(IP::Schem(m.clone()))
                }
            }
            Expr::Bin(op, x, y) => match op {
                BinOp::And => Ok(IP::And(b(self.prop(x)?), b(self.prop(y)?))),
                BinOp::Or => Ok(IP::Or(b(self.prop(x)?), b(self.prop(y)?))),
                BinOp::Implies => Ok(IP::Implies(b(self.prop(x)?), b(self.prop(y)?))),
                BinOp::Iff => Ok(IP::Iff(b(self.prop(x)?), b(self.prop(y)?))),
                BinOp::Eq | BinOp::Neq => {
                    let p = if is_propositional(x) || is_propositional(y) {
                        IP::Iff(b(self.prop(x)?), b(self.prop(y)?))
                    } else {
                        let (a, ta) = self.term(x)?;
                        let (c, tc) = self.term(y)?;
                        self.unify(&ta, &tc, &|| "equation".to_string())?;
                        IP::Eq(a, c)
                    };
                    Ok(if *op == BinOp::Neq { IP::Not(b(p)) } else { p })
                }
                BinOp::NotMem => {
                    let inner = Expr::bin(BinOp::Mem, (**x).clone(), (**y).clone());
                    Ok(IP::Not(b(self.atom(&inner)?)))
                }
                _ => self.atom(e),
            },
            Expr::Quant(q, vs, body) => {
                let mut tys = vec![];
                for (v, s) in vs {
                    let t = match s {
                        Some(s) => Ty::S(sort_of_expr(self.e.sig, s)?),
                        None => self.fresh(),
                    };
                    self.binders.push((v.clone(), t.clone()));
                    tys.push((v.clone(), t));
                }
                let inner = self.prop(body);
                self.binders.truncate(self.binders.len() - vs.len());
                let mut p = inner?;
                for (v, t) in tys.into_iter().rev() {
                    p = IP::Quant(*q, v, t, b(p));
                }
                Ok(p)
            }
            Expr::Num(_) | Expr::App(..) | Expr::Abs(_) | Expr::Custom(..) | Expr::Meta(_) => self.atom(e),
        }
    }

    fn build_term(&self, t: &IT) -> Term {
        match t {
            IT::Var(n, ty) => Term::var(n, self.resolve(ty)),
            IT::Schem(n, ty) => Term::schem(n, self.resolve(ty)),
            IT::Num(n) => Term::Num(*n),
            IT::App(f, xs, s) => Term::app(f, xs.iter().map(|x| self.build_term(x)).collect(), s.clone()),
        }
    }

    fn build(&self, p: &IP) -> Prop {
        match p {
            IP::True => Prop::tt(),
            IP::False => Prop::ff(),
            IP::Atom(t) => Prop::atom(self.build_term(t)),
            IP::Eq(a, b) => Prop::eq(self.build_term(a), self.build_term(b)),
            IP::Not(a) => Prop::not(self.build(a)),
            IP::And(a, b) => Prop::and(self.build(a), self.build(b)),
            IP::Or(a, b) => Prop::or(self.build(a), self.build(b)),
            IP::Implies(a, b) => Prop::implies(self.build(a), self.build(b)),
            IP::Iff(a, b) => Prop::iff(self.build(a), self.build(b)),
            IP::Quant(q, v, t, body) => {
                let s = self.resolve(t);
                let body = self.build(body);
                match q {
                    Quant::All => Prop::forall(v, s, &body),
                    Quant::Ex => Prop::exists(v, s, &body),
                }
            }
            IP::Schem(n) => Prop::schem(n),
        }
    }
}

fn is_propositional(e: &Expr) -> bool {
    match e {
        Expr::True | Expr::False | Expr::Not(_) | Expr::Quant(..) => true,
        Expr::Bin(op, ..) => op.is_connective() || matches!(op, BinOp::Eq | BinOp::Neq | BinOp::NotMem),
        _ => false,
    }
}

/// Result of elaborating a group of propositions that share new names.
#[derive(Clone, Debug)]
pub struct Elaborated {
    pub props: Vec<Prop>,
    /// Declared or generalized variables with their resolved sorts.
    pub vars: Vec<(Name, Sort)>,
}

impl<'a> Elaborator<'a> {
    fn expand(&self, e: &Expr) -> ER<Expr> {
        if self.free != FreeMode::Reject || !e.has_meta() {
            return Ok(e.clone());
        }
        e.expand(&|m| self.abbrevs.get(m).cloned()).map_err(ElabError)
    }

    /// Elaborate propositions that may mention the new variables `decl`,
    /// whose sorts are inferred when not given.
    pub fn props(&self, es: &[Expr], decl: &[(String, Option<Sort>)]) -> ER<Elaborated> {
        let mut st = St { metas: vec![], introduced: vec![], binders: vec![], e: self };
        for (n, s) in decl {
            let t = match s {
                Some(s) => Ty::S(s.clone()),
                None => st.fresh(),
            };
            st.introduced.push((n.clone(), t));
        }
        let mut ips = vec![];
        for e in es {
            let e = self.expand(e)?;
            ips.push(st.prop(&e)?);
        }
        let props = ips.iter().map(|p| st.build(p)).collect::<Vec<_>>();
        for p in &props {
            self.sig.check_prop(p).map_err(|e| ElabError(e.to_string()))?;
        }
        let vars = st
            .introduced
            .iter()
            .filter(|(n, _)| !n.starts_with('?'))
            .map(|(n, t)| (Name::from(n.as_str()), st.resolve(t)))
            .collect();
        Ok(Elaborated { props, vars })
    }

    pub fn prop(&self, e: &Expr) -> ER<Prop> {
        Ok(self.props(std::slice::from_ref(e), &[])?.props.remove(0))
    }

    /// Elaborate a term, optionally at an expected sort.
    pub fn term(&self, e: &Expr, expected: Option<&Sort>) -> ER<Term> {
        let e = self.expand(e)?;
        let mut st = St { metas: vec![], introduced: vec![], binders: vec![], e: self };
        let (it, ty) = st.term(&e)?;
        if let Some(s) = expected {
            st.unify(&ty, &Ty::S(s.clone()), &|| "term".to_string())?;
        }
        let t = st.build_term(&it);
        self.sig.check_term(&t, &[]).map_err(|e| ElabError(e.to_string()))?;
        Ok(t)
    }
}
