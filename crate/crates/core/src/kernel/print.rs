//! Concrete-syntax printer. Output re-parses to the same value.

use std::collections::BTreeSet;

use super::prop::{Prop, PropNode as P};
use super::term::{Name, Term};

/// Infix constants: (constant, symbol, precedence, right-assoc).
pub const INFIX: &[(&str, &str, u8, bool)] = &[
    ("plus", "+", 65, false),
    ("minus", "-", 65, false),
    ("times", "*", 70, false),
    ("div", "/", 70, false),
    ("pow", "^", 80, true),
];

/// Infix relations (bool-valued), all at precedence 50.
pub const RELATIONS: &[(&str, &str)] = &[("dvd", "dvd"), ("le", "≤"), ("less", "<"), ("mem", "∈")];

pub fn infix_of(head: &str) -> Option<(&'static str, u8, bool)> {
    INFIX.iter().find(|(c, ..)| *c == head).map(|&(_, s, p, r)| (s, p, r))
}

pub fn relation_of(head: &str) -> Option<&'static str> {
    RELATIONS.iter().find(|(c, _)| *c == head).map(|&(_, s)| s)
}

pub fn term_to_string(t: &Term, binders: &mut Vec<Name>) -> String {
    let mut s = String::new();
    term(t, binders, 0, &mut s);
    s
}

fn term(t: &Term, bs: &mut Vec<Name>, prec: u8, out: &mut String) {
    match t {
        Term::Var(n, _) => out.push_str(n),
        Term::Schem(n, _) => {
            out.push('?');
            out.push_str(n)
        }
        Term::Bound(i, _) => {
            let i = *i as usize;
            if i < bs.len() {
                out.push_str(&bs[bs.len() - 1 - i]);
            } else {
                out.push_str(&format!("#{i}"));
            }
        }
        Term::Num(n) => out.push_str(&n.to_string()),
        Term::App(a) => {
            if a.args.is_empty() {
                out.push_str(&a.head);
                return;
            }
            if a.head.as_ref() == "abs" && a.args.len() == 1 {
                out.push('|');
                term(&a.args[0], bs, 0, out);
                out.push('|');
                return;
            }
            if a.args.len() == 2 {
                if let Some((sym, p, right)) = infix_of(&a.head) {
                    let (lp, rp) = if right { (p + 1, p) } else { (p, p + 1) };
                    let paren = prec > p;
                    if paren {
                        out.push('(');
                    }
                    term(&a.args[0], bs, lp, out);
                    out.push(' ');
                    out.push_str(sym);
                    out.push(' ');
                    term(&a.args[1], bs, rp, out);
                    if paren {
                        out.push(')');
                    }
                    return;
                }
                if let Some(sym) = relation_of(&a.head) {
                    let paren = prec > 50;
                    if paren {
                        out.push('(');
                    }
                    term(&a.args[0], bs, 51, out);
                    out.push(' ');
                    out.push_str(sym);
                    out.push(' ');
                    term(&a.args[1], bs, 51, out);
                    if paren {
                        out.push(')');
                    }
                    return;
                }
            }
            let paren = prec > 100;
            if paren {
                out.push('(');
            }
            out.push_str(&a.head);
            for x in &a.args {
                out.push(' ');
                term(x, bs, 101, out);
            }
            if paren {
                out.push(')');
            }
        }
    }
}

pub fn prop_to_string(p: &Prop) -> String {
    let avoid: BTreeSet<Name> = p.free_vars().into_iter().map(|(n, _)| n).collect();
    let mut out = String::new();
    prop(p, &mut vec![], &avoid, 0, &mut out);
    out
}

fn prop(p: &Prop, bs: &mut Vec<Name>, avoid: &BTreeSet<Name>, prec: u8, out: &mut String) {
    let bin = |a: &Prop, b: &Prop, sym: &str, pr: u8, bs: &mut Vec<Name>, out: &mut String| {
        if prec > pr {
            out.push('(');
        }
        prop(a, bs, avoid, pr + 1, out);
        out.push(' ');
        out.push_str(sym);
        out.push(' ');
        prop(b, bs, avoid, pr, out);
        if prec > pr {
            out.push(')');
        }
    };
    match p.view() {
        P::True => out.push_str("True"),
        P::False => out.push_str("False"),
        P::Schem(n) => {
            out.push('?');
            out.push_str(n)
        }
        P::Atom(t) => term(t, bs, prec.max(50), out),
        P::Eq(a, b) => rel(a, "=", b, bs, prec, out),
        P::Not(a) => match a.view() {
            P::Eq(x, y) => rel(x, "≠", y, bs, prec, out),
            P::Atom(Term::App(ap)) if ap.head.as_ref() == "mem" && ap.args.len() == 2 => {
                rel(&ap.args[0], "∉", &ap.args[1], bs, prec, out)
            }
            _ => {
                if prec > 40 {
                    out.push('(');
                }
                out.push('¬');
                prop(a, bs, avoid, 40, out);
                if prec > 40 {
                    out.push(')');
                }
            }
        },
        P::And(a, b) => bin(a, b, "∧", 35, bs, out),
        P::Or(a, b) => bin(a, b, "∨", 30, bs, out),
        P::Implies(a, b) => bin(a, b, "⟶", 20, bs, out),
        P::Iff(a, b) => {
            if prec > 10 {
                out.push('(');
            }
            prop(a, bs, avoid, 11, out);
            out.push_str(" ⟷ ");
            prop(b, bs, avoid, 11, out);
            if prec > 10 {
                out.push(')');
            }
        }
        P::Forall(x, b) | P::Exists(x, b) => {
            let q = if matches!(p.view(), P::Forall(..)) { '∀' } else { '∃' };
            if prec > 0 {
                out.push('(');
            }
            let mut n = x.name.to_string();
            while avoid.contains(n.as_str()) || bs.iter().any(|m| **m == *n) {
                n.push('\'');
            }
            out.push(q);
            out.push_str(&n);
            out.push_str("::");
            out.push_str(&x.sort.to_string());
            out.push_str(". ");
            bs.push(Name::from(n));
            prop(b, bs, avoid, 0, out);
            bs.pop();
            if prec > 0 {
                out.push(')');
            }
        }
    }
}

fn rel(a: &Term, sym: &str, b: &Term, bs: &mut Vec<Name>, prec: u8, out: &mut String) {
    if prec > 50 {
        out.push('(');
    }
    term(a, bs, 51, out);
    out.push(' ');
    out.push_str(sym);
    out.push(' ');
    term(b, bs, 51, out);
    if prec > 50 {
        out.push(')');
    }
}
