//! Theory files: a line-oriented declaration format for sorts, constants,
//! axioms, simp rules, definitions, rule schemas, transitivity facts and
//! lemma bundles.
//!
//! ```text
//! theory NAME
//! import NAME
//! sort NAME [ARITY]
//! datatype SORT = CTOR ARGSORT* | …
//! const NAME : ARGSORT* -> SORT        (or `const NAME : SORT`)
//! axiom NAME: "prop"                   free variables are generalized
//! simp NAME: "prop"                    axiom that joins the simp set
//! def NAME: "f x1 … xn = rhs"          non-recursive; `⟷` for predicates
//! rule NAME [KIND]: "p1" … ==> "c"     schema; unknown names are schematic
//! trans NAME: "a R b" "b S c" ==> "a T c"
//! default NAME*                        default rules for RULE
//! bundle NAME: LEMMA*                  hidden until OPENed
//! ```
//!
//! Lines starting with `#` or `--` are comments. Rules that are
//! propositional tautologies are proved rather than assumed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::kernel::drule;
use crate::kernel::rewrite::RewriteRule;
use crate::kernel::rules::{RuleKind, RuleSpec};
use crate::kernel::{Ctor, Kernel, KernelError, Logic, Name, Prop, PropNode, Signature, Sort, Term, Thm};
use crate::syntax::{parse_prop_text, Elaborator, FreeMode};

#[derive(Debug, thiserror::Error)]
pub enum TheoryError {
    #[error("{theory}:{line}: {msg}")]
    Decl { theory: String, line: usize, msg: String },
    #[error("theory {0} not found")]
    NotFound(String),
    #[error("import cycle through {0}")]
    Cycle(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaKind {
    Axiom,
    Simp,
    Def,
    Rule,
    Trans,
}

#[derive(Clone, Debug)]
pub struct Lemma {
    pub name: Name,
    pub thm: Thm,
    pub kind: LemmaKind,
}

#[derive(Clone, Debug)]
pub struct Definition {
    pub name: Name,
    pub konst: Name,
    pub thm: Thm,
}

/// Transitivity fact `a R b ⟶ b S c ⟶ a T c`.
#[derive(Clone, Debug)]
pub struct TransRule {
    pub name: Name,
    pub first: Relation,
    pub second: Relation,
    pub result: Relation,
    pub thm: Thm,
}

/// A binary relation usable in calculation chains.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Eq,
    Const(Name),
}

impl Relation {
    /// Split `a R b` into its relation and operands.
    pub fn of(p: &Prop) -> Option<(Relation, Term, Term)> {
        match p.view() {
            PropNode::Eq(a, b) => Some((Relation::Eq, a.clone(), b.clone())),
            PropNode::Atom(Term::App(a)) if a.args.len() == 2 => {
                Some((Relation::Const(a.head.clone()), a.args[0].clone(), a.args[1].clone()))
            }
            _ => None,
        }
    }

    pub fn symbol(&self) -> String {
        match self {
            Relation::Eq => "=".into(),
            Relation::Const(c) => match crate::kernel::print::relation_of(c) {
                Some(s) => s.to_string(),
                None => c.to_string(),
            },
        }
    }
}

#[derive(Clone, Debug)]
enum Decl {
    Import(Name),
    Sort(Name, usize),
    Datatype(Sort),
    Const(Name),
    Axiom(Name),
    Simp(Name),
    Def(Name),
    Rule(Name),
    Trans(Name),
    Default(Vec<Name>),
    Bundle(Name, Vec<Name>),
}

#[derive(Debug)]
pub struct Theory {
    pub name: Name,
    sig: Signature,
    axioms: BTreeMap<Name, Prop>,
    lemmas: Vec<Lemma>,
    index: BTreeMap<Name, usize>,
    rules: BTreeMap<Name, RuleSpec>,
    defaults: Vec<Name>,
    trans: Vec<TransRule>,
    bundles: BTreeMap<Name, Vec<Name>>,
    defs: BTreeMap<Name, Definition>,
    simp_rules: Arc<Vec<RewriteRule>>,
    decls: Vec<Decl>,
    imported: BTreeSet<Name>,
}

impl Logic for Theory {
    fn signature(&self) -> &Signature {
        &self.sig
    }
    fn axiom(&self, n: &str) -> Option<&Prop> {
        self.axioms.get(n)
    }
}

const PRELUDE: &str = r#"theory prelude
rule ccontr [intro]: "A ⟶ False" ==> "¬A"
rule conjI [intro]: "A" "B" ==> "A ∧ B"
rule disjCI [intro]: "¬B ⟶ A" ==> "A ∨ B"
rule impI [intro]: "A ⟶ B" ==> "A ⟶ B"
rule iffI [intro]: "A ⟶ B" "B ⟶ A" ==> "A ⟷ B"
default ccontr conjI disjCI impI iffI
"#;

impl Theory {
    pub fn kernel(&self) -> Kernel<'_> {
        Kernel::new(self)
    }
    pub fn sig(&self) -> &Signature {
        &self.sig
    }
    pub fn lemma(&self, n: &str) -> Option<&Lemma> {
        self.index.get(n).map(|&i| &self.lemmas[i])
    }
    pub fn lemmas(&self) -> &[Lemma] {
        &self.lemmas
    }
    pub fn rule(&self, n: &str) -> Option<&RuleSpec> {
        self.rules.get(n)
    }
    pub fn default_rules(&self) -> impl Iterator<Item = &RuleSpec> {
        self.defaults.iter().filter_map(|n| self.rules.get(n))
    }
    pub fn trans_rules(&self) -> &[TransRule] {
        &self.trans
    }
    pub fn bundle(&self, n: &str) -> Option<&[Name]> {
        self.bundles.get(n).map(|v| v.as_slice())
    }
    pub fn definition(&self, n: &str) -> Option<&Definition> {
        self.defs.get(n)
    }
    pub fn simp_rules(&self) -> &Arc<Vec<RewriteRule>> {
        &self.simp_rules
    }

    /// Whether `n` belongs to some bundle (and is hidden until opened).
    pub fn in_bundle(&self, n: &str) -> bool {
        self.bundles.values().any(|v| v.iter().any(|m| &**m == n))
    }

    /// Lemmas visible to automation given the opened bundles.
    pub fn visible_lemmas<'a>(&'a self, opened: &'a BTreeSet<Name>) -> impl Iterator<Item = &'a Lemma> + 'a {
        self.lemmas.iter().filter(move |l| {
            !self.in_bundle(&l.name) || opened.iter().any(|b| self.bundles.get(b).is_some_and(|v| v.contains(&l.name)))
        })
    }

    /// Load from source text; `resolve` supplies the text of imports.
    pub fn parse(text: &str, resolve: &dyn Fn(&str) -> Option<String>) -> Result<Theory, TheoryError> {
        let mut th = Theory {
            name: Name::from(""),
            sig: Signature::new(),
            axioms: BTreeMap::new(),
            lemmas: vec![],
            index: BTreeMap::new(),
            rules: BTreeMap::new(),
            defaults: vec![],
            trans: vec![],
            bundles: BTreeMap::new(),
            defs: BTreeMap::new(),
            simp_rules: Arc::new(vec![]),
            decls: vec![],
            imported: BTreeSet::new(),
        };
        let mut stack = vec![];
        th.load(PRELUDE, resolve, &mut stack, false)?;
        th.load(text, resolve, &mut stack, true)?;
        let k = Kernel::new(&th);
        let mut simps = vec![];
        for l in &th.lemmas {
            if l.kind == LemmaKind::Simp {
                if let Some(r) = RewriteRule::from_thm(k, &l.name, &l.thm) {
                    simps.push(r);
                }
            }
        }
        th.simp_rules = Arc::new(simps);
        Ok(th)
    }

    pub fn load_file(path: &Path) -> Result<Theory, TheoryError> {
        let text = std::fs::read_to_string(path)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Theory::parse(&text, &|n| std::fs::read_to_string(dir.join(format!("{n}.thy"))).ok())
    }

    fn load(
        &mut self,
        text: &str,
        resolve: &dyn Fn(&str) -> Option<String>,
        stack: &mut Vec<String>,
        own: bool,
    ) -> Result<(), TheoryError> {
        let mut tname = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("--") {
                continue;
            }
            let fail = |msg: String| TheoryError::Decl { theory: tname.clone(), line: i + 1, msg };
            let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match kw {
                "theory" => {
                    tname = rest.to_string();
                    if stack.contains(&tname) {
                        return Err(TheoryError::Cycle(tname));
                    }
                    stack.push(tname.clone());
                    if own {
                        self.name = Name::from(rest);
                    }
                }
                "import" => {
                    let n = Name::from(rest);
                    if stack.iter().any(|s| s == rest) {
                        return Err(TheoryError::Cycle(rest.to_string()));
                    }
                    if !self.imported.contains(&n) {
                        let src = resolve(rest).ok_or_else(|| TheoryError::NotFound(rest.to_string()))?;
                        self.load(&src, resolve, stack, false)?;
                        self.imported.insert(n.clone());
                    }
                    if own {
                        self.decls.push(Decl::Import(n));
                    }
                }
                _ => {
                    let d = self.decl(kw, rest).map_err(fail)?;
                    if own {
                        self.decls.push(d);
                    }
                }
            }
        }
        if !tname.is_empty() {
            stack.pop();
        }
        Ok(())
    }

    fn elab(&self, free: FreeMode, texts: &[String]) -> Result<(Vec<Prop>, Vec<(Name, Sort)>), String> {
        let abbrevs = BTreeMap::new();
        let el = Elaborator { sig: &self.sig, notations: &[], abbrevs: &abbrevs, vars: &[], free };
        let mut es = vec![];
        for t in texts {
            es.push(parse_prop_text(t, &[]).map_err(|e| format!("in \"{t}\": {e}"))?);
        }
        let r = el.props(&es, &[]).map_err(|e| e.to_string())?;
        Ok((r.props, r.vars))
    }

    fn add_lemma(&mut self, name: &str, thm: Thm, kind: LemmaKind) -> Result<(), String> {
        if self.index.contains_key(name) {
            return Err(format!("duplicate lemma {name}"));
        }
        self.index.insert(Name::from(name), self.lemmas.len());
        self.lemmas.push(Lemma { name: Name::from(name), thm, kind });
        Ok(())
    }

    fn add_axiom(&mut self, name: &str, p: Prop) -> Result<Thm, String> {
        if self.axioms.contains_key(name) {
            return Err(format!("duplicate axiom {name}"));
        }
        self.sig.check_prop(&p).map_err(|e| e.to_string())?;
        self.axioms.insert(Name::from(name), p);
        Kernel::new(self).axiom(name).map_err(|e| e.to_string())
    }

    /// Prove `p` propositionally if possible, otherwise assume it.
    fn prove_or_assume(&mut self, name: &str, p: Prop) -> Result<Thm, String> {
        let k = Kernel::new(self);
        match drule::prove_taut(k, &p) {
            Some(th) if th.hyps().is_empty() => Ok(th),
            _ => self.add_axiom(name, p),
        }
    }

    fn decl(&mut self, kw: &str, rest: &str) -> Result<Decl, String> {
        match kw {
            "sort" => {
                let mut it = rest.split_whitespace();
                let n = it.next().ok_or("sort name expected")?;
                let arity = match it.next() {
                    Some(a) => a.parse::<usize>().map_err(|_| format!("bad arity {a}"))?,
                    None => 0,
                };
                self.sig.add_sort(n, arity).map_err(|e| e.to_string())?;
                Ok(Decl::Sort(Name::from(n), arity))
            }
            "datatype" => {
                let (s, ctors) = rest.split_once('=').ok_or("datatype: '=' expected")?;
                let sort = parse_sort(&self.sig, s.trim())?;
                let mut cs = vec![];
                for c in ctors.split('|') {
                    let mut ws = split_sorts(c.trim())?.into_iter();
                    let n = ws.next().ok_or("constructor name expected")?;
                    let args = ws.map(|w| parse_sort(&self.sig, &w)).collect::<Result<Vec<_>, _>>()?;
                    cs.push(Ctor { name: Name::from(n.as_str()), args });
                }
                self.sig.add_datatype(sort.clone(), cs).map_err(|e| e.to_string())?;
                Ok(Decl::Datatype(sort))
            }
            "const" => {
                let (n, ty) = rest.split_once(':').ok_or("const: ':' expected")?;
                let n = n.trim();
                let (args, res) = match ty.split_once("->") {
                    Some((a, r)) => (split_sorts(a.trim())?, r.trim()),
                    None => (vec![], ty.trim()),
                };
                let args = args.iter().map(|a| parse_sort(&self.sig, a)).collect::<Result<Vec<_>, _>>()?;
                let res = parse_sort(&self.sig, res)?;
                self.sig.add_const(n, args, res).map_err(|e| e.to_string())?;
                Ok(Decl::Const(Name::from(n)))
            }
            "axiom" | "simp" | "def" => {
                let (n, qs) = named_quoted(rest)?;
                if qs.len() != 1 {
                    return Err(format!("{kw} {n}: exactly one proposition expected"));
                }
                let (ps, vars) = self.elab(FreeMode::Generalize, &qs)?;
                let p = Prop::foralls(&vars, &ps[0]);
                if !p.is_schematic_free() && kw != "axiom" {
                    return Err(format!("{kw} {n}: schematic propositions are not allowed"));
                }
                let konst = if kw == "def" { Some(self.check_def(&n, &p)?) } else { None };
                let th = self.add_axiom(&n, p)?;
                let kind = match kw {
                    "axiom" => LemmaKind::Axiom,
                    "simp" => LemmaKind::Simp,
                    _ => LemmaKind::Def,
                };
                self.add_lemma(&n, th.clone(), kind)?;
                Ok(match konst {
                    Some(c) => {
                        self.defs.insert(Name::from(n.as_str()), Definition { name: Name::from(n.as_str()), konst: c, thm: th });
                        Decl::Def(Name::from(n.as_str()))
                    }
                    None if kw == "simp" => Decl::Simp(Name::from(n.as_str())),
                    None => Decl::Axiom(Name::from(n.as_str())),
                })
            }
            "rule" | "trans" => {
                let (head, body) = rest.split_once(':').ok_or_else(|| format!("{kw}: ':' expected"))?;
                let mut hw = head.split_whitespace();
                let n = hw.next().ok_or("rule name expected")?.to_string();
                let kind = if kw == "trans" {
                    RuleKind::Dest
                } else {
                    let k = hw.next().ok_or("rule kind expected, e.g. [intro]")?;
                    let k = k.strip_prefix('[').and_then(|k| k.strip_suffix(']')).ok_or("rule kind in brackets expected")?;
                    RuleKind::parse(k).ok_or_else(|| format!("unknown rule kind {k}"))?
                };
                let (prem_txt, concl_txt) = match body.split_once("==>") {
                    Some((a, b)) => (quoted_all(a)?, quoted_all(b)?),
                    None => (vec![], quoted_all(body)?),
                };
                if concl_txt.len() != 1 {
                    return Err(format!("{kw} {n}: one conclusion expected"));
                }
                let mut all = prem_txt.clone();
                all.extend(concl_txt);
                let (ps, _) = self.elab(FreeMode::Schematic, &all)?;
                let (concl, prems) = ps.split_last().unwrap();
                let p = Prop::implies_chain(prems, concl);
                let th = self.prove_or_assume(&n, p)?;
                if kw == "trans" {
                    let rel = |q: &Prop| Relation::of(q).map(|r| r.0).ok_or_else(|| format!("trans {n}: relation expected"));
                    if prems.len() != 2 {
                        return Err(format!("trans {n}: two premises expected"));
                    }
                    let tr = TransRule {
                        name: Name::from(n.as_str()),
                        first: rel(&prems[0])?,
                        second: rel(&prems[1])?,
                        result: rel(concl)?,
                        thm: th.clone(),
                    };
                    self.add_lemma(&n, th, LemmaKind::Trans)?;
                    self.trans.push(tr);
                    return Ok(Decl::Trans(Name::from(n.as_str())));
                }
                let spec = RuleSpec::new(&n, kind, prems.len(), th.clone()).map_err(|e| e.to_string())?;
                self.add_lemma(&n, th, LemmaKind::Rule)?;
                self.rules.insert(Name::from(n.as_str()), spec);
                Ok(Decl::Rule(Name::from(n.as_str())))
            }
            "default" => {
                let ns: Vec<Name> = rest.split_whitespace().map(Name::from).collect();
                for n in &ns {
                    if !self.rules.contains_key(n) {
                        return Err(format!("default: unknown rule {n}"));
                    }
                    if !self.defaults.contains(n) {
                        self.defaults.push(n.clone());
                    }
                }
                Ok(Decl::Default(ns))
            }
            "bundle" => {
                let (n, ls) = rest.split_once(':').ok_or("bundle: ':' expected")?;
                let ls: Vec<Name> = ls.split_whitespace().map(Name::from).collect();
                for l in &ls {
                    if !self.index.contains_key(l) {
                        return Err(format!("bundle {}: unknown lemma {l}", n.trim()));
                    }
                }
                let n = Name::from(n.trim());
                self.bundles.entry(n.clone()).or_default().extend(ls.iter().cloned());
                Ok(Decl::Bundle(n, ls))
            }
            _ => Err(format!("unknown declaration {kw}")),
        }
    }

    /// Check `∀x̄. f x̄ = rhs` (or `⟷`) for a non-recursive definition.
    fn check_def(&self, n: &str, p: &Prop) -> Result<Name, String> {
        let mut avoid = BTreeSet::new();
        let (vars, body) = p.strip_forall(&mut avoid);
        let (lhs, rhs_consts) = match body.view() {
            PropNode::Eq(l, r) => (l.clone(), term_consts(r)),
            PropNode::Iff(l, r) => match l.view() {
                PropNode::Atom(t) => (t.clone(), prop_consts(r)),
                _ => return Err(format!("def {n}: left-hand side must be an application")),
            },
            _ => return Err(format!("def {n}: equation or equivalence expected")),
        };
        let Term::App(a) = &lhs else { return Err(format!("def {n}: left-hand side must be an application")) };
        let mut seen = BTreeSet::new();
        for x in &a.args {
            match x {
                Term::Var(v, _) if seen.insert(v.clone()) => {}
                _ => return Err(format!("def {n}: arguments must be distinct variables")),
            }
        }
        if seen.len() != vars.len() {
            return Err(format!("def {n}: right-hand side has extra free variables"));
        }
        let f = a.head.clone();
        if self.defs.values().any(|d| d.konst == f) {
            return Err(format!("def {n}: {f} already defined"));
        }
        // reachability through earlier definitions
        let mut todo: Vec<Name> = rhs_consts.into_iter().collect();
        let mut visited = BTreeSet::new();
        while let Some(c) = todo.pop() {
            if c == f {
                return Err(format!("def {n}: recursive definition of {f}"));
            }
            if !visited.insert(c.clone()) {
                continue;
            }
            if let Some(d) = self.defs.values().find(|d| d.konst == c) {
                let mut av = BTreeSet::new();
                let (_, b) = d.thm.concl().strip_forall(&mut av);
                todo.extend(prop_consts(&b));
            }
        }
        Ok(f)
    }

    /// Render in the theory-file format; loading the output yields the
    /// same declarations.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "theory {}", self.name);
        for d in &self.decls {
            match d {
                Decl::Import(n) => {
                    let _ = writeln!(out, "import {n}");
                }
                Decl::Sort(n, a) => {
                    if *a == 0 {
                        let _ = writeln!(out, "sort {n}");
                    } else {
                        let _ = writeln!(out, "sort {n} {a}");
                    }
                }
                Decl::Datatype(s) => {
                    let cs = self.sig.datatype(s).unwrap_or(&[]);
                    let parts: Vec<String> = cs
                        .iter()
                        .map(|c| {
                            let mut p = c.name.to_string();
                            for a in &c.args {
                                p.push(' ');
                                p.push_str(&sort_text(a));
                            }
                            p
                        })
                        .collect();
                    let _ = writeln!(out, "datatype {} = {}", sort_text(s), parts.join(" | "));
                }
                Decl::Const(n) => {
                    let sig = self.sig.const_sig(n).expect("declared constant");
                    if sig.args.is_empty() {
                        let _ = writeln!(out, "const {n} : {}", sort_text(&sig.result));
                    } else {
                        let args: Vec<String> = sig.args.iter().map(sort_text).collect();
                        let _ = writeln!(out, "const {n} : {} -> {}", args.join(" "), sort_text(&sig.result));
                    }
                }
                Decl::Axiom(n) | Decl::Simp(n) | Decl::Def(n) => {
                    let kw = match d {
                        Decl::Axiom(_) => "axiom",
                        Decl::Simp(_) => "simp",
                        _ => "def",
                    };
                    let p = &self.axioms[n];
                    let _ = writeln!(out, "{kw} {n}: \"{}\"", show(p));
                }
                Decl::Rule(n) => {
                    let r = &self.rules[n];
                    let prems: Vec<String> = r.premises.iter().map(|p| format!("\"{}\"", show(p))).collect();
                    let arrow = if prems.is_empty() { String::new() } else { format!("{} ==> ", prems.join(" ")) };
                    let _ = writeln!(out, "rule {n} [{}]: {arrow}\"{}\"", r.kind, show(&r.conclusion));
                }
                Decl::Trans(n) => {
                    let t = self.trans.iter().find(|t| &t.name == n).expect("declared trans rule");
                    let (ps, c) = t.thm.concl().strip_implies();
                    let prems: Vec<String> = ps.iter().map(|p| format!("\"{}\"", show(p))).collect();
                    let _ = writeln!(out, "trans {n}: {} ==> \"{}\"", prems.join(" "), show(&c));
                }
                Decl::Default(ns) => {
                    let ns: Vec<&str> = ns.iter().map(|n| &**n).collect();
                    let _ = writeln!(out, "default {}", ns.join(" "));
                }
                Decl::Bundle(n, ls) => {
                    let ls: Vec<&str> = ls.iter().map(|n| &**n).collect();
                    let _ = writeln!(out, "bundle {n}: {}", ls.join(" "));
                }
            }
        }
        out
    }
}

/// Schematics print as `?x`, which the rule syntax reads back.
fn show(p: &Prop) -> String {
    p.to_string()
}

fn sort_text(s: &Sort) -> String {
    s.to_string().replace(' ', "")
}

fn term_consts(t: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    let mut subs = vec![];
    t.subterms(&mut subs);
    for s in subs {
        if let Term::App(a) = s {
            out.insert(a.head.clone());
        }
    }
    out
}

fn prop_consts(p: &Prop) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    p.for_each_term(0, &mut |t, _| out.extend(term_consts(t)));
    out
}

/// Split on whitespace outside parentheses.
fn split_sorts(s: &str) -> Result<Vec<String>, String> {
    let mut out = vec![];
    let mut cur = String::new();
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(format!("unbalanced parentheses in {s}"));
        }
        if c.is_whitespace() && depth == 0 {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(c);
        }
    }
    if depth != 0 {
        return Err(format!("unbalanced parentheses in {s}"));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

fn parse_sort(sig: &Signature, s: &str) -> Result<Sort, String> {
    let s = s.trim();
    let (n, params) = match s.split_once('(') {
        None => (s, vec![]),
        Some((n, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| format!("bad sort {s}"))?;
            let mut ps = vec![];
            let mut depth = 0;
            let mut cur = String::new();
            for c in inner.chars() {
                match c {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    ',' if depth == 0 => {
                        ps.push(parse_sort(sig, &cur)?);
                        cur.clear();
                        continue;
                    }
                    _ => {}
                }
                cur.push(c);
            }
            ps.push(parse_sort(sig, &cur)?);
            (n.trim(), ps)
        }
    };
    match sig.sort_arity(n) {
        None => Err(format!("unknown sort {n}")),
        Some(a) if a != params.len() => Err(format!("sort {n} expects {a} parameters")),
        Some(_) => Ok(Sort::new(n, params)),
    }
}

fn quoted_all(s: &str) -> Result<Vec<String>, String> {
    let mut out = vec![];
    let mut rest = s.trim();
    while !rest.is_empty() {
        let r = rest.strip_prefix('"').ok_or_else(|| format!("quoted proposition expected at {rest}"))?;
        let end = r.find('"').ok_or("unterminated quote")?;
        out.push(r[..end].to_string());
        rest = r[end + 1..].trim_start();
    }
    Ok(out)
}

fn named_quoted(s: &str) -> Result<(String, Vec<String>), String> {
    let (n, q) = s.split_once(':').ok_or("':' expected after name")?;
    let n = n.trim();
    if n.is_empty() || n.contains(char::is_whitespace) {
        return Err(format!("bad name {n}"));
    }
    Ok((n.to_string(), quoted_all(q)?))
}

/// Theories loaded on demand from a directory of `.thy` files.
pub struct TheoryRegistry {
    dir: PathBuf,
    cache: Mutex<BTreeMap<String, Arc<Theory>>>,
}

impl TheoryRegistry {
    pub fn new(dir: impl Into<PathBuf>) -> TheoryRegistry {
        TheoryRegistry { dir: dir.into(), cache: Mutex::new(BTreeMap::new()) }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn get(&self, name: &str) -> Result<Arc<Theory>, TheoryError> {
        if let Some(t) = self.cache.lock().unwrap().get(name) {
            return Ok(t.clone());
        }
        let path = self.dir.join(format!("{name}.thy"));
        if !path.exists() {
            return Err(TheoryError::NotFound(name.to_string()));
        }
        let t = Arc::new(Theory::load_file(&path)?);
        self.cache.lock().unwrap().insert(name.to_string(), t.clone());
        Ok(t)
    }
}

impl From<KernelError> for TheoryError {
    fn from(e: KernelError) -> Self {
        TheoryError::Decl { theory: String::new(), line: 0, msg: e.to_string() }
    }
}
