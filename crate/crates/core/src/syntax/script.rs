//! Statement-level syntax: the sixteen commands, script headers and the
//! renderer that inverts the parser.

use std::fmt;

use super::expr::{parse_expr, render_expr, Expr, ExprError, Notation, SortExpr};

pub const KEYWORDS: [&str; 16] = [
    "INTRO", "HAVE", "CONSIDER", "END", "NEXT", "RULE", "SIMPLIFY", "UNFOLD", "CHOOSE", "CASE_SPLIT", "INDUCT",
    "LET", "NOTATION", "CONFIG", "OPEN", "APPLY",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Hints {
    pub with: Vec<String>,
    pub without: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tactic {
    pub name: String,
    pub args: Vec<String>,
    pub add: Vec<String>,
    pub del: Vec<String>,
}

impl Tactic {
    pub fn simple(name: &str) -> Tactic {
        Tactic { name: name.into(), args: vec![], add: vec![], del: vec![] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Consider {
    Obtain { vars: Vec<(String, Option<SortExpr>)>, props: Vec<(Option<String>, Expr)> },
    Cases(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConfigValue {
    Ident(String),
    Num(u64),
    Str(String),
}

impl fmt::Display for ConfigValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigValue::Ident(s) => f.write_str(s),
            ConfigValue::Num(n) => write!(f, "{n}"),
            ConfigValue::Str(s) => write!(f, "\"{s}\""),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Statement {
    Intro,
    Have { label: Option<String>, prop: Expr },
    Consider(Consider),
    End(Hints),
    Next(Hints),
    Rule(Option<String>),
    Simplify(Vec<String>),
    Unfold(Vec<String>),
    Choose(Expr),
    CaseSplit(Expr),
    Induct(String),
    Let { name: String, term: Expr },
    Notation(Notation),
    Config { key: String, value: ConfigValue },
    Open(String),
    Apply(Tactic),
}

impl Statement {
    pub fn keyword(&self) -> &'static str {
        match self {
            Statement::Intro => "INTRO",
            Statement::Have { .. } => "HAVE",
            Statement::Consider(_) => "CONSIDER",
            Statement::End(_) => "END",
            Statement::Next(_) => "NEXT",
            Statement::Rule(_) => "RULE",
            Statement::Simplify(_) => "SIMPLIFY",
            Statement::Unfold(_) => "UNFOLD",
            Statement::Choose(_) => "CHOOSE",
            Statement::CaseSplit(_) => "CASE_SPLIT",
            Statement::Induct(_) => "INDUCT",
            Statement::Let { .. } => "LET",
            Statement::Notation(_) => "NOTATION",
            Statement::Config { .. } => "CONFIG",
            Statement::Open(_) => "OPEN",
            Statement::Apply(_) => "APPLY",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: expected {}, found {}", self.line, self.col, self.expected, self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Script {
    pub theory: Option<String>,
    pub name: String,
    pub goal: Expr,
    pub statements: Vec<Statement>,
    /// 1-based source line of each statement.
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
enum T {
    Ident(String),
    Num(u64),
    Meta(String),
    /// Quoted text; the position is that of its first character.
    Str(String, usize, usize),
    Colon,
    DColon,
    Eq,
    Bar,
    LParen,
    RParen,
    Comma,
    Eof,
}

#[derive(Clone, Debug)]
struct Tok {
    t: T,
    line: usize,
    col: usize,
}

fn describe(t: &T) -> String {
    match t {
        T::Ident(s) => s.clone(),
        T::Num(n) => n.to_string(),
        T::Meta(m) => format!("?{m}"),
        T::Str(s, ..) => format!("\"{s}\""),
        T::Colon => ":".into(),
        T::DColon => "::".into(),
        T::Eq => "=".into(),
        T::Bar => "|".into(),
        T::LParen => "(".into(),
        T::RParen => ")".into(),
        T::Comma => ",".into(),
        T::Eof => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<(Vec<Tok>, Option<String>), ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut out = vec![];
    let mut theory = None;
    macro_rules! adv {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            adv!();
            continue;
        }
        let (sl, sc) = (line, col);
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            let st = i + 2;
            while i < chars.len() && chars[i] != '\n' {
                adv!();
            }
            let text: String = chars[st..i].iter().collect();
            if let Some(rest) = text.trim_start().strip_prefix("theory") {
                let name = rest.trim();
                if !name.is_empty() && theory.is_none() {
                    theory = Some(name.to_string());
                }
            }
            continue;
        }
        let t = if c == '"' {
            adv!();
            let (cl, cc) = (line, col);
            let st = i;
            while i < chars.len() && chars[i] != '"' {
                adv!();
            }
            if i >= chars.len() {
                return Err(ParseError { line: sl, col: sc, expected: "closing quote".into(), found: "end of input".into() });
            }
            let s: String = chars[st..i].iter().collect();
            adv!();
            T::Str(s, cl, cc)
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'' || chars[i] == '.') {
                adv!();
            }
            T::Ident(chars[st..i].iter().collect())
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                adv!();
            }
            let s: String = chars[st..i].iter().collect();
            match s.parse() {
                Ok(n) => T::Num(n),
                Err(_) => return Err(ParseError { line: sl, col: sc, expected: "number".into(), found: s }),
            }
        } else if c == '?' {
            adv!();
            let st = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                adv!();
            }
            if st == i {
                return Err(ParseError { line: sl, col: sc, expected: "name after ?".into(), found: "?".into() });
            }
            T::Meta(chars[st..i].iter().collect())
        } else {
            let t = match c {
                ':' if chars.get(i + 1) == Some(&':') => {
                    adv!();
                    T::DColon
                }
                ':' => T::Colon,
                '=' => T::Eq,
                '|' => T::Bar,
                '(' => T::LParen,
                ')' => T::RParen,
                ',' => T::Comma,
                _ => return Err(ParseError { line: sl, col: sc, expected: "token".into(), found: c.to_string() }),
            };
            adv!();
            t
        };
        out.push(Tok { t, line: sl, col: sc });
    }
    out.push(Tok { t: T::Eof, line, col });
    Ok((out, theory))
}

struct P {
    toks: Vec<Tok>,
    pos: usize,
    notations: Vec<Notation>,
}

type R<T> = Result<T, ParseError>;

impl P {
    fn peek(&self) -> &T {
        &self.toks[self.pos].t
    }
    fn bump(&mut self) -> T {
        let t = self.toks[self.pos].t.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }
    fn err<X>(&self, expected: &str) -> R<X> {
        let t = &self.toks[self.pos];
        Err(ParseError { line: t.line, col: t.col, expected: expected.into(), found: describe(&t.t) })
    }
    fn at_keyword(&self) -> bool {
        matches!(self.peek(), T::Ident(s) if is_keyword(s))
    }
    fn at_end(&self) -> bool {
        matches!(self.peek(), T::Eof) || self.at_keyword()
    }
    fn is(&self, word: &str) -> bool {
        matches!(self.peek(), T::Ident(s) if s == word)
    }
    fn name(&mut self, what: &str) -> R<String> {
        match self.peek().clone() {
            T::Ident(s) if !is_keyword(&s) && !is_reserved(&s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err(what),
        }
    }
    fn names(&mut self) -> Vec<String> {
        let mut v = vec![];
        while let T::Ident(s) = self.peek().clone() {
            if is_keyword(&s) || is_reserved(&s) {
                break;
            }
            self.bump();
            v.push(s);
        }
        v
    }
    fn prop(&mut self) -> R<Expr> {
        match self.peek().clone() {
            T::Str(s, line, col) => {
                let e = parse_expr(&s, &self.notations).map_err(|e| locate(&s, line, col, e))?;
                self.bump();
                Ok(e)
            }
            _ => self.err("quoted proposition"),
        }
    }
    fn expect(&mut self, t: T) -> R<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(&format!("'{}'", describe(&t)))
        }
    }

    fn sort(&mut self) -> R<SortExpr> {
        self.sort_at(0)
    }

    fn sort_at(&mut self, depth: usize) -> R<SortExpr> {
        let n = self.name("sort")?;
        let mut ps = vec![];
        if *self.peek() == T::LParen {
            if depth > 50 {
                return self.err("shallower sort nesting");
            }
            self.bump();
            loop {
                ps.push(self.sort_at(depth + 1)?);
                if *self.peek() == T::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(T::RParen)?;
        }
        Ok(SortExpr::Name(n, ps))
    }

    fn hints(&mut self) -> R<Hints> {
        let mut h = Hints::default();
        if self.is("WITH") {
            self.bump();
            h.with = self.names();
        }
        if self.is("WITHOUT") {
            self.bump();
            h.without = self.names();
        }
        Ok(h)
    }

    fn label_prop(&mut self) -> R<(Option<String>, Expr)> {
        let label = if let T::Ident(_) = self.peek() {
            let l = self.name("label")?;
            self.expect(T::Colon)?;
            Some(l)
        } else {
            None
        };
        Ok((label, self.prop()?))
    }

    fn statement(&mut self) -> R<Statement> {
        let kw = match self.peek().clone() {
            T::Ident(s) if is_keyword(&s) => s,
            _ => return self.err("command"),
        };
        self.bump();
        let st = match kw.as_str() {
            "INTRO" => Statement::Intro,
            "HAVE" => {
                let (label, prop) = self.label_prop()?;
                Statement::Have { label, prop }
            }
            "CONSIDER" => {
                if let T::Str(..) = self.peek() {
                    let mut cases = vec![self.prop()?];
                    while *self.peek() == T::Bar {
                        self.bump();
                        cases.push(self.prop()?);
                    }
                    Statement::Consider(Consider::Cases(cases))
                } else {
                    let mut names = vec![];
                    while let T::Ident(s) = self.peek() {
                        if s == "where" || is_keyword(s) {
                            break;
                        }
                        names.push(self.name("variable")?);
                    }
                    if names.is_empty() {
                        return self.err("variable or quoted case");
                    }
                    let sort = if *self.peek() == T::DColon {
                        self.bump();
                        Some(self.sort()?)
                    } else {
                        None
                    };
                    if !self.is("where") {
                        return self.err("'where'");
                    }
                    self.bump();
                    let mut props = vec![self.label_prop()?];
                    while self.is("and") {
                        self.bump();
                        props.push(self.label_prop()?);
                    }
                    let vars = names.into_iter().map(|n| (n, sort.clone())).collect();
                    Statement::Consider(Consider::Obtain { vars, props })
                }
            }
            "END" => Statement::End(self.hints()?),
            "NEXT" => Statement::Next(self.hints()?),
            "RULE" => {
                if self.at_end() {
                    Statement::Rule(None)
                } else {
                    Statement::Rule(Some(self.name("rule name")?))
                }
            }
            "SIMPLIFY" => Statement::Simplify(self.names()),
            "UNFOLD" => {
                let ns = self.names();
                if ns.is_empty() {
                    return self.err("definition name");
                }
                Statement::Unfold(ns)
            }
            "CHOOSE" => Statement::Choose(self.prop()?),
            "CASE_SPLIT" => Statement::CaseSplit(self.prop()?),
            "INDUCT" => match self.peek().clone() {
                T::Str(s, ..) if is_plain_name(s.trim()) => {
                    self.bump();
                    Statement::Induct(s.trim().to_string())
                }
                _ => Statement::Induct(self.name("induction variable")?),
            },
            "LET" => {
                let T::Meta(name) = self.peek().clone() else { return self.err("?name") };
                self.bump();
                self.expect(T::Eq)?;
                let term = self.prop()?;
                Statement::Let { name, term }
            }
            "NOTATION" => {
                let T::Str(symbol, ..) = self.peek().clone() else { return self.err("quoted symbol") };
                if symbol.is_empty() || symbol.chars().any(|c| c.is_whitespace() || c == '"') {
                    return self.err("non-empty symbol without spaces");
                }
                self.bump();
                let konst = self.name("constant")?;
                let T::Num(prec) = self.peek().clone() else { return self.err("precedence") };
                if prec == 0 || prec > 100 {
                    return self.err("precedence between 1 and 100");
                }
                self.bump();
                let n = Notation { symbol, konst, prec: prec as u8 };
                self.notations.push(n.clone());
                Statement::Notation(n)
            }
            "CONFIG" => {
                let key = self.name("flag name")?;
                self.expect(T::Eq)?;
                let value = match self.bump() {
                    T::Ident(s) if !is_keyword(&s) => ConfigValue::Ident(s),
                    T::Num(n) => ConfigValue::Num(n),
                    T::Str(s, ..) => ConfigValue::Str(s),
                    _ => {
                        self.pos -= 1;
                        return self.err("flag value");
                    }
                };
                Statement::Config { key, value }
            }
            "OPEN" => Statement::Open(self.name("bundle name")?),
            "APPLY" => {
                if *self.peek() == T::LParen {
                    self.bump();
                    let name = self.name("tactic name")?;
                    let mut t = Tactic::simple(&name);
                    t.args = self.names();
                    loop {
                        if self.is("add") || self.is("del") {
                            let which = self.is("add");
                            self.bump();
                            self.expect(T::Colon)?;
                            let ns = self.names();
                            if which {
                                t.add.extend(ns)
                            } else {
                                t.del.extend(ns)
                            }
                        } else {
                            break;
                        }
                    }
                    self.expect(T::RParen)?;
                    Statement::Apply(t)
                } else {
                    Statement::Apply(Tactic::simple(&self.name("tactic name")?))
                }
            }
            _ => unreachable!(),
        };
        if !self.at_end() {
            return self.err("next command");
        }
        Ok(st)
    }

    fn statements(&mut self) -> R<(Vec<Statement>, Vec<usize>)> {
        let mut out = vec![];
        let mut lines = vec![];
        while *self.peek() != T::Eof {
            lines.push(self.toks[self.pos].line);
            out.push(self.statement()?);
        }
        Ok((out, lines))
    }
}

/// Words with a fixed meaning inside statements.
fn is_reserved(s: &str) -> bool {
    matches!(s, "WITH" | "WITHOUT" | "where" | "and" | "add" | "del")
}

fn is_plain_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && cs.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn locate(s: &str, line: usize, col: usize, e: ExprError) -> ParseError {
    let (mut l, mut c) = (line, col);
    for ch in s.chars().take(e.offset) {
        if ch == '\n' {
            l += 1;
            c = 1;
        } else {
            c += 1;
        }
    }
    ParseError { line: l, col: c, expected: e.expected, found: e.found }
}

/// Parse a complete script: `theorem name: "goal"` followed by statements.
pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let (toks, theory) = lex(text)?;
    let mut p = P { toks, pos: 0, notations: vec![] };
    if !(p.is("theorem") || p.is("lemma")) {
        return p.err("'theorem'");
    }
    p.bump();
    let name = p.name("theorem name")?;
    p.expect(T::Colon)?;
    let goal = p.prop()?;
    let (statements, lines) = p.statements()?;
    if statements.is_empty() {
        return p.err("command");
    }
    Ok(Script { theory, name, goal, statements, lines })
}

/// Parse a bare statement sequence under the given notations.
pub fn parse_statements(text: &str, notations: &[Notation]) -> Result<Vec<Statement>, ParseError> {
    let (toks, _) = lex(text)?;
    let mut p = P { toks, pos: 0, notations: notations.to_vec() };
    Ok(p.statements()?.0)
}

/// Parse a quoted-string payload the same way statements do.
pub fn parse_prop_text(text: &str, notations: &[Notation]) -> Result<Expr, ParseError> {
    parse_expr(text, notations).map_err(|e| locate(text, 1, 1, e))
}

fn quoted(e: &Expr, ns: &[Notation]) -> String {
    format!("\"{}\"", render_expr(e, ns))
}

fn hints(kw: &str, h: &Hints) -> String {
    let mut s = kw.to_string();
    if !h.with.is_empty() {
        s.push_str(" WITH ");
        s.push_str(&h.with.join(" "));
    }
    if !h.without.is_empty() {
        s.push_str(" WITHOUT ");
        s.push_str(&h.without.join(" "));
    }
    s
}

/// Render one statement; `notations` are those in force where it occurs.
pub fn render_statement(s: &Statement, ns: &[Notation]) -> String {
    match s {
        Statement::Intro => "INTRO".into(),
        Statement::Have { label, prop } => match label {
            Some(l) => format!("HAVE {l}: {}", quoted(prop, ns)),
            None => format!("HAVE {}", quoted(prop, ns)),
        },
        Statement::Consider(Consider::Cases(cs)) => {
            let parts: Vec<String> = cs.iter().map(|c| quoted(c, ns)).collect();
            format!("CONSIDER {}", parts.join(" | "))
        }
        Statement::Consider(Consider::Obtain { vars, props }) => {
            let mut s = String::from("CONSIDER");
            // consecutive variables sharing a sort annotation are grouped
            let sort = vars.first().and_then(|v| v.1.clone());
            for (v, _) in vars {
                s.push(' ');
                s.push_str(v);
            }
            if let Some(so) = sort {
                s.push_str(&format!(" :: {so}"));
            }
            s.push_str(" where ");
            let parts: Vec<String> = props
                .iter()
                .map(|(l, p)| match l {
                    Some(l) => format!("{l}: {}", quoted(p, ns)),
                    None => quoted(p, ns),
                })
                .collect();
            s.push_str(&parts.join(" and "));
            s
        }
        Statement::End(h) => hints("END", h),
        Statement::Next(h) => hints("NEXT", h),
        Statement::Rule(None) => "RULE".into(),
        Statement::Rule(Some(r)) => format!("RULE {r}"),
        Statement::Simplify(xs) if xs.is_empty() => "SIMPLIFY".into(),
        Statement::Simplify(xs) => format!("SIMPLIFY {}", xs.join(" ")),
        Statement::Unfold(xs) => format!("UNFOLD {}", xs.join(" ")),
        Statement::Choose(t) => format!("CHOOSE {}", quoted(t, ns)),
        Statement::CaseSplit(t) => format!("CASE_SPLIT {}", quoted(t, ns)),
        Statement::Induct(v) => format!("INDUCT {v}"),
        Statement::Let { name, term } => format!("LET ?{name} = {}", quoted(term, ns)),
        Statement::Notation(n) => format!("NOTATION \"{}\" {} {}", n.symbol, n.konst, n.prec),
        Statement::Config { key, value } => format!("CONFIG {key} = {value}"),
        Statement::Open(b) => format!("OPEN {b}"),
        Statement::Apply(t) => {
            if t.args.is_empty() && t.add.is_empty() && t.del.is_empty() {
                format!("APPLY {}", t.name)
            } else {
                let mut s = format!("APPLY ({}", t.name);
                for a in &t.args {
                    s.push(' ');
                    s.push_str(a);
                }
                if !t.add.is_empty() {
                    s.push_str(" add: ");
                    s.push_str(&t.add.join(" "));
                }
                if !t.del.is_empty() {
                    s.push_str(" del: ");
                    s.push_str(&t.del.join(" "));
                }
                s.push(')');
                s
            }
        }
    }
}

/// Render a whole script, one statement per line.
pub fn render_script(sc: &Script) -> String {
    let mut out = String::new();
    if let Some(t) = &sc.theory {
        out.push_str(&format!("--theory {t}\n"));
    }
    out.push_str(&format!("theorem {}: {}\n", sc.name, quoted(&sc.goal, &[])));
    let mut ns: Vec<Notation> = vec![];
    for s in &sc.statements {
        out.push_str(&render_statement(s, &ns));
        out.push('\n');
        if let Statement::Notation(n) = s {
            ns.push(n.clone());
        }
    }
    out
}
