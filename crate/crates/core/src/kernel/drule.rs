//! Derived rules. Everything here is built from [`Kernel`] primitives and
//! therefore adds nothing to the trusted base.

use std::collections::BTreeSet;

use super::prop::{fresh_name, Prop, PropNode as P};
use super::term::{Name, Sort, Term};
use super::thm::{Kernel, Thm};
use super::KernelError;

type R = Result<Thm, KernelError>;

fn bad(msg: impl Into<String>) -> KernelError {
    KernelError::Rule { rule: "derived".into(), msg: msg.into() }
}

/// Name for an eq_subst hole variable that does not occur in `ps`.
pub fn hole_name(ps: &[&Prop]) -> Name {
    let mut avoid = BTreeSet::new();
    for p in ps {
        avoid.extend(p.free_vars().into_iter().map(|(n, _)| n));
    }
    fresh_name("%z", &avoid)
}

/// Name for a fresh free variable, avoiding `avoid` and every free variable of `ths`.
pub fn fresh_for(base: &str, ths: &[&Thm], props: &[&Prop]) -> Name {
    let mut avoid = BTreeSet::new();
    for th in ths {
        avoid.extend(th.concl().free_vars().into_iter().map(|(n, _)| n));
        for h in th.hyps() {
            avoid.extend(h.free_vars().into_iter().map(|(n, _)| n));
        }
    }
    for p in props {
        avoid.extend(p.free_vars().into_iter().map(|(n, _)| n));
    }
    fresh_name(base, &avoid)
}

/// `a = b` ⊢ `b = a`
pub fn sym(k: Kernel, th: &Thm) -> R {
    let P::Eq(a, _) = th.concl().view() else { return Err(bad("sym: not an equation")) };
    let s = a.sort();
    let z = hole_name(&[th.concl()]);
    let motive = Prop::eq(Term::Var(z.clone(), s.clone()), a.clone());
    k.eq_subst(th, &z, &s, &motive, &k.refl(a)?)
}

/// `a = b`, `b = c` ⊢ `a = c`
pub fn trans(k: Kernel, ab: &Thm, bc: &Thm) -> R {
    let P::Eq(a, b) = ab.concl().view() else { return Err(bad("trans: not an equation")) };
    let P::Eq(b2, _) = bc.concl().view() else { return Err(bad("trans: not an equation")) };
    if b != b2 {
        return Err(bad(format!("trans: {} and {} do not chain", ab.concl(), bc.concl())));
    }
    let s = a.sort();
    let z = hole_name(&[ab.concl(), bc.concl()]);
    let motive = Prop::eq(a.clone(), Term::Var(z.clone(), s.clone()));
    k.eq_subst(bc, &z, &s, &motive, ab)
}

/// From `s = t` and a term context `ctx` with hole `z` derive `ctx[s] = ctx[t]`.
pub fn cong(k: Kernel, eq: &Thm, z: &str, ctx: &Term) -> R {
    let P::Eq(s, _) = eq.concl().view() else { return Err(bad("cong: not an equation")) };
    let srt = s.sort();
    let lhs = ctx.subst_var(z, &srt, s);
    let motive = Prop::eq(lhs.clone(), ctx.clone());
    k.eq_subst(eq, z, &srt, &motive, &k.refl(&lhs)?)
}

/// `f(a1..an) = f(b1..bn)` from a list of argument equations (`None` = unchanged).
pub fn cong_app(k: Kernel, head: &Term, eqs: &[Option<Thm>]) -> R {
    let Term::App(app) = head else { return Err(bad("cong_app: not an application")) };
    let mut cur = k.refl(head)?;
    for (i, e) in eqs.iter().enumerate() {
        let Some(e) = e else { continue };
        let P::Eq(_, rhs_now) = cur.concl().view() else { unreachable!() };
        let rhs_app = rhs_now.as_app().unwrap();
        let z = hole_name(&[cur.concl(), e.concl()]);
        let mut args = rhs_app.args.clone();
        args[i] = Term::Var(z.clone(), app.args[i].sort());
        let ctx = Term::app_n(app.head.clone(), args, app.sort.clone());
        let step = cong(k, e, &z, &ctx)?;
        cur = trans(k, &cur, &step)?;
    }
    Ok(cur)
}

/// ⊢ `p ⟶ p`
pub fn imp_refl(k: Kernel, p: &Prop) -> R {
    k.implies_intro(p, &k.assume(p)?)
}

/// ⊢ `p ⟷ p`
pub fn iff_refl(k: Kernel, p: &Prop) -> R {
    let i = imp_refl(k, p)?;
    k.iff_intro(&i, &i)
}

pub fn iff_sym(k: Kernel, th: &Thm) -> R {
    let l = k.iff_elim_left(th)?;
    let r = k.iff_elim_right(th)?;
    k.iff_intro(&r, &l)
}

/// `a ⟷ b`, `b ⟷ c` ⊢ `a ⟷ c`
pub fn iff_trans(k: Kernel, ab: &Thm, bc: &Thm) -> R {
    let P::Iff(a, b) = ab.concl().view() else { return Err(bad("iff_trans: not an equivalence")) };
    let P::Iff(b2, c) = bc.concl().view() else { return Err(bad("iff_trans: not an equivalence")) };
    if b != b2 {
        return Err(bad(format!("iff_trans: {} and {} do not chain", ab.concl(), bc.concl())));
    }
    let _ = c;
    let x = Name::from("%X");
    let motive = Prop::iff(a.clone(), Prop::schem(&x));
    k.iff_subst(bc, &x, &motive, ab)
}

/// `a ⟷ b`, `a` ⊢ `b`
pub fn iff_mp(k: Kernel, iff: &Thm, a: &Thm) -> R {
    k.implies_elim(&k.iff_elim_left(iff)?, a)
}

/// `a ⟷ b`, `b` ⊢ `a`
pub fn iff_mpr(k: Kernel, iff: &Thm, b: &Thm) -> R {
    k.implies_elim(&k.iff_elim_right(iff)?, b)
}

/// `a ⟶ b`, `b ⟶ c` ⊢ `a ⟶ c`
pub fn imp_trans(k: Kernel, ab: &Thm, bc: &Thm) -> R {
    let P::Implies(a, _) = ab.concl().view() else { return Err(bad("imp_trans: not an implication")) };
    let x = k.assume(a)?;
    let b = k.implies_elim(ab, &x)?;
    let c = k.implies_elim(bc, &b)?;
    k.implies_intro(a, &c)
}

/// From `A ⟷ B` and a prop context with schematic hole `?x`:
/// ⊢ `ctx[A] ⟷ ctx[B]`.
pub fn iff_cong(k: Kernel, iff: &Thm, x: &str, ctx: &Prop) -> R {
    let P::Iff(a, _) = iff.concl().view() else { return Err(bad("iff_cong: not an equivalence")) };
    let lhs = ctx.subst_prop_schem(x, a);
    let motive = Prop::iff(lhs.clone(), ctx.clone());
    k.iff_subst(iff, x, &motive, &iff_refl(k, &lhs)?)
}

/// From `s = t` and prop context `ctx` with term hole `z`:
/// ⊢ `ctx[s] ⟷ ctx[t]`.
pub fn prop_cong(k: Kernel, eq: &Thm, z: &str, ctx: &Prop) -> R {
    let P::Eq(s, _) = eq.concl().view() else { return Err(bad("prop_cong: not an equation")) };
    let srt = s.sort();
    let lhs = ctx.subst_var(z, &srt, s);
    let motive = Prop::iff(lhs.clone(), ctx.clone());
    k.eq_subst(eq, z, &srt, &motive, &iff_refl(k, &lhs)?)
}

/// From `P[x] ⟷ Q[x]` (x not free in hypotheses): ⊢ `(∀x. P) ⟷ (∀x. Q)`.
pub fn forall_cong(k: Kernel, x: &str, s: &Sort, th: &Thm) -> R {
    let P::Iff(p, q) = th.concl().view() else { return Err(bad("forall_cong: not an equivalence")) };
    let ap = Prop::forall(x, s.clone(), p);
    let aq = Prop::forall(x, s.clone(), q);
    let v = Term::Var(Name::from(x), s.clone());
    let d1 = {
        let h = k.assume(&ap)?;
        let px = k.forall_elim(&h, &v)?;
        let qx = iff_mp(k, th, &px)?;
        k.implies_intro(&ap, &k.forall_intro(x, s, &qx)?)?
    };
    let d2 = {
        let h = k.assume(&aq)?;
        let qx = k.forall_elim(&h, &v)?;
        let px = iff_mpr(k, th, &qx)?;
        k.implies_intro(&aq, &k.forall_intro(x, s, &px)?)?
    };
    k.iff_intro(&d1, &d2)
}

/// From `P[x] ⟷ Q[x]`: ⊢ `(∃x. P) ⟷ (∃x. Q)`.
pub fn exists_cong(k: Kernel, x: &str, s: &Sort, th: &Thm) -> R {
    let P::Iff(p, q) = th.concl().view() else { return Err(bad("exists_cong: not an equivalence")) };
    let ep = Prop::exists(x, s.clone(), p);
    let eq = Prop::exists(x, s.clone(), q);
    let v = Term::Var(Name::from(x), s.clone());
    let d1 = {
        let qx = iff_mp(k, th, &k.assume(p)?)?;
        let e = k.exists_intro(&eq, &v, &qx)?;
        k.implies_intro(&ep, &k.exists_elim(&k.assume(&ep)?, x, s, &e)?)?
    };
    let d2 = {
        let px = iff_mpr(k, th, &k.assume(q)?)?;
        let e = k.exists_intro(&ep, &v, &px)?;
        k.implies_intro(&eq, &k.exists_elim(&k.assume(&eq)?, x, s, &e)?)?
    };
    k.iff_intro(&d1, &d2)
}

/// ⊢ `a ∨ ¬a`
pub fn excluded_middle(k: Kernel, a: &Prop) -> R {
    let na = Prop::not(a.clone());
    let goal = Prop::or(a.clone(), na.clone());
    let ng = Prop::not(goal.clone());
    let hng = k.assume(&ng)?;
    let l = k.or_intro_left(&k.assume(a)?, &na)?;
    let f1 = k.not_elim(&hng, &l)?;
    let nat = k.not_intro(a, &f1)?;
    let r = k.or_intro_right(a, &nat)?;
    let f2 = k.not_elim(&hng, &r)?;
    k.by_contradiction(&goal, &f2)
}

/// `¬¬a` ⊢ `a`
pub fn not_not_elim(k: Kernel, th: &Thm) -> R {
    let P::Not(n) = th.concl().view() else { return Err(bad("not_not_elim")) };
    let P::Not(a) = n.view() else { return Err(bad("not_not_elim")) };
    let f = k.not_elim(th, &k.assume(n)?)?;
    k.by_contradiction(a, &f)
}

/// `a` ⊢ `¬¬a`
pub fn not_not_intro(k: Kernel, th: &Thm) -> R {
    let na = Prop::not(th.concl().clone());
    k.not_intro(&na, &k.not_elim(&k.assume(&na)?, th)?)
}

/// `p` ⊢ `p ⟷ True`
pub fn eqt_intro(k: Kernel, th: &Thm) -> R {
    let p = th.concl().clone();
    let d1 = k.implies_intro(&p, &k.true_intro()?)?;
    let d2 = k.implies_intro(&Prop::tt(), th)?;
    k.iff_intro(&d1, &d2)
}

/// `p ⟷ True` ⊢ `p`
pub fn eqt_elim(k: Kernel, th: &Thm) -> R {
    iff_mpr(k, th, &k.true_intro()?)
}

/// `¬p` ⊢ `p ⟷ False`
pub fn eqf_intro(k: Kernel, th: &Thm) -> R {
    let P::Not(p) = th.concl().view() else { return Err(bad("eqf_intro")) };
    let d1 = k.implies_intro(p, &k.not_elim(th, &k.assume(p)?)?)?;
    let d2 = k.implies_intro(&Prop::ff(), &k.false_elim(&k.assume(&Prop::ff())?, p)?)?;
    k.iff_intro(&d1, &d2)
}

/// `p ⟷ False` ⊢ `¬p`
pub fn eqf_elim(k: Kernel, th: &Thm) -> R {
    let P::Iff(p, _) = th.concl().view() else { return Err(bad("eqf_elim")) };
    let f = iff_mp(k, th, &k.assume(p)?)?;
    k.not_intro(p, &f)
}

/// `¬(∀x. P)` ⊢ `∃x. ¬P`
pub fn not_forall(k: Kernel, th: &Thm) -> R {
    let P::Not(all) = th.concl().view() else { return Err(bad("not_forall")) };
    let P::Forall(b, body) = all.view() else { return Err(bad("not_forall")) };
    let target = Prop::new(P::Exists(b.clone(), Prop::not(body.clone())));
    let x = fresh_for(&b.name, &[th], &[]);
    let v = Term::Var(x.clone(), b.sort.clone());
    let px = Prop::open(body, &v);
    let ntarget = Prop::not(target.clone());
    let ex = k.exists_intro(&target, &v, &k.assume(&Prop::not(px.clone()))?)?;
    let f = k.not_elim(&k.assume(&ntarget)?, &ex)?;
    let pxt = k.by_contradiction(&px, &f)?;
    let allt = k.forall_intro(&x, &b.sort, &pxt)?;
    let f2 = k.not_elim(th, &allt)?;
    k.by_contradiction(&target, &f2)
}

/// `¬(∃x. P)` ⊢ `∀x. ¬P`
pub fn not_exists(k: Kernel, th: &Thm) -> R {
    let P::Not(ex) = th.concl().view() else { return Err(bad("not_exists")) };
    let P::Exists(b, body) = ex.view() else { return Err(bad("not_exists")) };
    let x = fresh_for(&b.name, &[th], &[]);
    let v = Term::Var(x.clone(), b.sort.clone());
    let px = Prop::open(body, &v);
    let e = k.exists_intro(ex, &v, &k.assume(&px)?)?;
    let npx = k.not_intro(&px, &k.not_elim(th, &e)?)?;
    k.forall_intro(&x, &b.sort, &npx)
}

/// Strip leading `∀`s instantiating with schematics named `prefix<i>`.
pub fn spec_schematic(k: Kernel, th: &Thm, prefix: &str, counter: &mut usize) -> R {
    let mut cur = th.clone();
    while let P::Forall(b, _) = cur.concl().view() {
        let t = Term::Schem(Name::from(format!("{prefix}{}", *counter)), b.sort.clone());
        *counter += 1;
        cur = k.forall_elim(&cur, &t)?;
    }
    Ok(cur)
}

/// Given `⊢ d1 ∨ … ∨ dn` (right-nested, `n = ds.len()`) and, for each case,
/// a proof of the common conclusion from `assume di`, combine by `or_elim`.
pub fn disj_cases(k: Kernel, disj: &Thm, ds: &[Prop], case: &mut dyn FnMut(usize, Thm) -> R) -> R {
    fn go(k: Kernel, th: &Thm, ds: &[Prop], off: usize, case: &mut dyn FnMut(usize, Thm) -> R) -> R {
        if ds.len() == 1 {
            return case(off, th.clone());
        }
        let l = case(off, k.assume(&ds[0])?)?;
        let rest = Prop::disj(&ds[1..]);
        let r = go(k, &k.assume(&rest)?, &ds[1..], off + 1, case)?;
        k.or_elim(th, &l, &r)
    }
    if ds.is_empty() {
        return Err(bad("disj_cases: empty disjunction"));
    }
    if Prop::disj(ds) != *disj.concl() {
        return Err(bad(format!("disj_cases: {} is not the expected disjunction", disj.concl())));
    }
    go(k, disj, ds, 0, case)
}

/// From `⊢ ds[i]` derive `⊢ ds[0] ∨ … ∨ ds[n-1]`.
pub fn disj_inject(k: Kernel, ds: &[Prop], i: usize, th: &Thm) -> R {
    if ds.len() == 1 {
        return Ok(th.clone());
    }
    if i == 0 {
        return k.or_intro_left(th, &Prop::disj(&ds[1..]));
    }
    let inner = disj_inject(k, &ds[1..], i - 1, th)?;
    k.or_intro_right(&ds[0], &inner)
}

/// Proves a propositional tautology by case analysis on its atoms.
/// Atoms are maximal non-connective subformulas. Intended for small
/// formulas (it is exponential in the number of atoms).
pub fn prove_taut(k: Kernel, p: &Prop) -> Option<Thm> {
    let mut atoms = vec![];
    collect_atoms(p, &mut atoms);
    let mut lits = vec![];
    split(k, p, &atoms, &mut lits).ok().flatten()
}

fn collect_atoms(p: &Prop, out: &mut Vec<Prop>) {
    match p.view() {
        P::True | P::False => {}
        P::Not(a) => collect_atoms(a, out),
        P::And(a, b) | P::Or(a, b) | P::Implies(a, b) | P::Iff(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out)
        }
        _ => {
            if !out.contains(p) {
                out.push(p.clone())
            }
        }
    }
}

fn split(k: Kernel, p: &Prop, atoms: &[Prop], lits: &mut Vec<(Prop, bool, Thm)>) -> Result<Option<Thm>, KernelError> {
    let Some((a, rest)) = atoms.split_first() else {
        let (v, th) = eval(k, p, lits)?;
        return Ok(if v { Some(th) } else { None });
    };
    lits.push((a.clone(), true, k.assume(a)?));
    let pos = split(k, p, rest, lits)?;
    lits.pop();
    let Some(pos) = pos else { return Ok(None) };
    let na = Prop::not(a.clone());
    lits.push((a.clone(), false, k.assume(&na)?));
    let neg = split(k, p, rest, lits)?;
    lits.pop();
    let Some(neg) = neg else { return Ok(None) };
    let em = excluded_middle(k, a)?;
    Ok(Some(k.or_elim(&em, &pos, &neg)?))
}

/// Evaluate `p` under literal assumptions: returns the truth value and a
/// proof of `p` (if true) or `¬p` (if false).
fn eval(k: Kernel, p: &Prop, lits: &[(Prop, bool, Thm)]) -> Result<(bool, Thm), KernelError> {
    let neg = |a: &Prop, th: &Thm| -> R {
        // th : a  ⊢  ¬¬a
        let na = Prop::not(a.clone());
        k.not_intro(&na, &k.not_elim(&k.assume(&na)?, th)?)
    };
    match p.view() {
        P::True => Ok((true, k.true_intro()?)),
        P::False => Ok((false, imp_to_not(k, &Prop::ff())?)),
        P::Not(a) => {
            let (v, th) = eval(k, a, lits)?;
            if v {
                Ok((false, neg(a, &th)?))
            } else {
                Ok((true, th))
            }
        }
        P::And(a, b) => {
            let (va, ta) = eval(k, a, lits)?;
            let (vb, tb) = eval(k, b, lits)?;
            if va && vb {
                return Ok((true, k.and_intro(&ta, &tb)?));
            }
            let h = k.assume(p)?;
            let f = if !va {
                k.not_elim(&ta, &k.and_elim_left(&h)?)?
            } else {
                k.not_elim(&tb, &k.and_elim_right(&h)?)?
            };
            Ok((false, k.not_intro(p, &f)?))
        }
        P::Or(a, b) => {
            let (va, ta) = eval(k, a, lits)?;
            if va {
                return Ok((true, k.or_intro_left(&ta, b)?));
            }
            let (vb, tb) = eval(k, b, lits)?;
            if vb {
                return Ok((true, k.or_intro_right(a, &tb)?));
            }
            let fa = k.not_elim(&ta, &k.assume(a)?)?;
            let fb = k.not_elim(&tb, &k.assume(b)?)?;
            let f = k.or_elim(&k.assume(p)?, &fa, &fb)?;
            Ok((false, k.not_intro(p, &f)?))
        }
        P::Implies(a, b) => {
            let (va, ta) = eval(k, a, lits)?;
            let (vb, tb) = eval(k, b, lits)?;
            if vb {
                return Ok((true, k.implies_intro(a, &tb)?));
            }
            if !va {
                let f = k.not_elim(&ta, &k.assume(a)?)?;
                return Ok((true, k.implies_intro(a, &k.false_elim(&f, b)?)?));
            }
            let f = k.not_elim(&tb, &k.implies_elim(&k.assume(p)?, &ta)?)?;
            Ok((false, k.not_intro(p, &f)?))
        }
        P::Iff(a, b) => {
            let (va, ta) = eval(k, a, lits)?;
            let (vb, tb) = eval(k, b, lits)?;
            let ab = eval(k, &Prop::implies(a.clone(), b.clone()), lits)?;
            let ba = eval(k, &Prop::implies(b.clone(), a.clone()), lits)?;
            let _ = (ta, tb);
            if va == vb {
                return Ok((true, k.iff_intro(&ab.1, &ba.1)?));
            }
            let h = k.assume(p)?;
            let f = if !ab.0 {
                k.not_elim(&ab.1, &k.iff_elim_left(&h)?)?
            } else {
                k.not_elim(&ba.1, &k.iff_elim_right(&h)?)?
            };
            Ok((false, k.not_intro(p, &f)?))
        }
        _ => {
            let (_, v, th) =
                lits.iter().find(|(a, ..)| a == p).ok_or_else(|| bad(format!("unassigned atom {p}")))?;
            Ok((*v, th.clone()))
        }
    }
}

/// ⊢ `¬False`
fn imp_to_not(k: Kernel, f: &Prop) -> R {
    k.not_intro(f, &k.assume(f)?)
}

/// `a ⟶ b` ⊢ `¬b ⟶ ¬a`
pub fn contrapos(k: Kernel, th: &Thm) -> R {
    let P::Implies(a, b) = th.concl().view() else { return Err(bad("contrapos")) };
    let nb = Prop::not(b.clone());
    let f = k.not_elim(&k.assume(&nb)?, &k.implies_elim(th, &k.assume(a)?)?)?;
    k.implies_intro(&nb, &k.not_intro(a, &f)?)
}

/// Discharge hypothesis `h` of `th` using `hth : ⊢ h`.
pub fn discharge(k: Kernel, th: &Thm, hth: &Thm) -> R {
    if !th.hyps().contains(hth.concl()) {
        return Ok(th.clone());
    }
    k.implies_elim(&k.implies_intro(hth.concl(), th)?, hth)
}

/// Generalise `th` over a sequence of variables and hypotheses, innermost last:
/// `binders = [Var x, Hyp H, …]` gives `∀x. H ⟶ … ⟶ concl`.
pub fn close_over(k: Kernel, th: &Thm, binders: &[Binding]) -> R {
    let mut cur = th.clone();
    for b in binders.iter().rev() {
        cur = match b {
            Binding::Var(n, s) => k.forall_intro(n, s, &cur)?,
            Binding::Hyp(p) => k.implies_intro(p, &cur)?,
        };
    }
    Ok(cur)
}

/// The proposition `close_over` produces.
pub fn closure_prop(goal: &Prop, binders: &[Binding]) -> Prop {
    let mut cur = goal.clone();
    for b in binders.iter().rev() {
        cur = match b {
            Binding::Var(n, s) => Prop::forall(n, s.clone(), &cur),
            Binding::Hyp(p) => Prop::implies(p.clone(), cur),
        };
    }
    cur
}

/// Open a closure: from `⊢ ∀x. H ⟶ G` under the given binders (whose
/// variables must be fresh) obtain `{H} ⊢ G`.
pub fn open_closure(k: Kernel, th: &Thm, binders: &[Binding]) -> R {
    let mut cur = th.clone();
    for b in binders {
        cur = match b {
            Binding::Var(n, s) => k.forall_elim(&cur, &Term::Var(n.clone(), s.clone()))?,
            Binding::Hyp(p) => k.implies_elim(&cur, &k.assume(p)?)?,
        };
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Binding {
    Var(Name, Sort),
    Hyp(Prop),
}
