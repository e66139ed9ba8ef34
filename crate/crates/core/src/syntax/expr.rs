//! Surface syntax of terms and propositions: lexer, Pratt parser and
//! printer. Produces untyped [`Expr`] trees; sorts are resolved later by
//! elaboration.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SortExpr {
    Name(String, Vec<SortExpr>),
}

impl fmt::Display for SortExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let SortExpr::Name(n, ps) = self;
        f.write_str(n)?;
        if !ps.is_empty() {
            f.write_str("(")?;
            for (i, p) in ps.iter().enumerate() {
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

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Iff,
    Implies,
    Or,
    And,
    Eq,
    Neq,
    Le,
    Less,
    Ge,
    Greater,
    Mem,
    NotMem,
    Dvd,
    Plus,
    Minus,
    Times,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Iff => "⟷",
            BinOp::Implies => "⟶",
            BinOp::Or => "∨",
            BinOp::And => "∧",
            BinOp::Eq => "=",
            BinOp::Neq => "≠",
            BinOp::Le => "≤",
            BinOp::Less => "<",
            BinOp::Ge => "≥",
            BinOp::Greater => ">",
            BinOp::Mem => "∈",
            BinOp::NotMem => "∉",
            BinOp::Dvd => "dvd",
            BinOp::Plus => "+",
            BinOp::Minus => "-",
            BinOp::Times => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    /// (precedence, left operand precedence, right operand precedence)
    pub fn prec(self) -> (u8, u8, u8) {
        match self {
            BinOp::Iff => (10, 11, 11),
            BinOp::Implies => (20, 21, 20),
            BinOp::Or => (30, 31, 30),
            BinOp::And => (35, 36, 35),
            BinOp::Eq
            | BinOp::Neq
            | BinOp::Le
            | BinOp::Less
            | BinOp::Ge
            | BinOp::Greater
            | BinOp::Mem
            | BinOp::NotMem
            | BinOp::Dvd => (50, 51, 51),
            BinOp::Plus | BinOp::Minus => (65, 65, 66),
            BinOp::Times | BinOp::Div => (70, 70, 71),
            BinOp::Pow => (80, 81, 80),
        }
    }

    pub fn is_connective(self) -> bool {
        matches!(self, BinOp::Iff | BinOp::Implies | BinOp::Or | BinOp::And)
    }

    pub const ALL: [BinOp; 18] = [
        BinOp::Iff,
        BinOp::Implies,
        BinOp::Or,
        BinOp::And,
        BinOp::Eq,
        BinOp::Neq,
        BinOp::Le,
        BinOp::Less,
        BinOp::Ge,
        BinOp::Greater,
        BinOp::Mem,
        BinOp::NotMem,
        BinOp::Dvd,
        BinOp::Plus,
        BinOp::Minus,
        BinOp::Times,
        BinOp::Div,
        BinOp::Pow,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quant {
    All,
    Ex,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    True,
    False,
    Num(u64),
    Ident(String),
    /// `?x`: a LET abbreviation (in scripts) or a schematic (in theories).
    Meta(String),
    App(String, Vec<Expr>),
    Abs(Box<Expr>),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    /// Infix use of a NOTATION-declared symbol.
    Custom(String, Box<Expr>, Box<Expr>),
    Quant(Quant, Vec<(String, Option<SortExpr>)>, Box<Expr>),
}

impl Expr {
    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn ident(s: &str) -> Expr {
        Expr::Ident(s.to_string())
    }

    /// Replace `?x` metas by the given expressions.
    pub fn expand(&self, lookup: &dyn Fn(&str) -> Option<Expr>) -> Result<Expr, String> {
        Ok(match self {
            Expr::Meta(m) => lookup(m).ok_or_else(|| format!("unknown abbreviation ?{m}"))?,
            Expr::True | Expr::False | Expr::Num(_) | Expr::Ident(_) => self.clone(),
            Expr::App(f, xs) => Expr::App(f.clone(), xs.iter().map(|x| x.expand(lookup)).collect::<Result<_, _>>()?),
            Expr::Abs(a) => Expr::Abs(Box::new(a.expand(lookup)?)),
            Expr::Not(a) => Expr::Not(Box::new(a.expand(lookup)?)),
            Expr::Bin(o, a, b) => Expr::Bin(*o, Box::new(a.expand(lookup)?), Box::new(b.expand(lookup)?)),
            Expr::Custom(o, a, b) => {
                Expr::Custom(o.clone(), Box::new(a.expand(lookup)?), Box::new(b.expand(lookup)?))
            }
            Expr::Quant(q, vs, b) => Expr::Quant(*q, vs.clone(), Box::new(b.expand(lookup)?)),
        })
    }

    pub fn has_meta(&self) -> bool {
        match self {
            Expr::Meta(_) => true,
            Expr::True | Expr::False | Expr::Num(_) | Expr::Ident(_) => false,
            Expr::App(_, xs) => xs.iter().any(Expr::has_meta),
            Expr::Abs(a) | Expr::Not(a) => a.has_meta(),
            Expr::Bin(_, a, b) | Expr::Custom(_, a, b) => a.has_meta() || b.has_meta(),
            Expr::Quant(_, _, b) => b.has_meta(),
        }
    }
}

/// A NOTATION entry: infix `symbol` for binary constant `konst`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Notation {
    pub symbol: String,
    pub konst: String,
    pub prec: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    /// Character offset into the parsed text.
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    Meta(String),
    Sym(&'static str),
    Custom(String),
    Eof,
}

const SYMBOLS: &[(&str, &str)] = &[
    ("<->", "⟷"),
    ("-->", "⟶"),
    ("==>", "⟶"),
    ("/\\", "∧"),
    ("\\/", "∨"),
    ("<=", "≤"),
    (">=", "≥"),
    ("~=", "≠"),
    ("!=", "≠"),
    ("~:", "∉"),
    ("::", "::"),
    ("⟷", "⟷"),
    ("↔", "⟷"),
    ("⟶", "⟶"),
    ("→", "⟶"),
    ("∧", "∧"),
    ("∨", "∨"),
    ("¬", "¬"),
    ("~", "¬"),
    ("∀", "∀"),
    ("∃", "∃"),
    ("≤", "≤"),
    ("≥", "≥"),
    ("≠", "≠"),
    ("∈", "∈"),
    ("∉", "∉"),
    (":", "∈"),
    ("=", "="),
    ("<", "<"),
    (">", ">"),
    ("+", "+"),
    ("-", "-"),
    ("*", "*"),
    ("/", "/"),
    ("^", "^"),
    ("(", "("),
    (")", ")"),
    (",", ","),
    (".", "."),
    ("|", "|"),
];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str, notations: &[Notation]) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = vec![];
    let mut i = 0;
    let starts_with = |i: usize, s: &str| {
        let mut j = i;
        for c in s.chars() {
            if j >= chars.len() || chars[j] != c {
                return false;
            }
            j += 1;
        }
        true
    };
    'outer: while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        // custom notations take priority, longest first
        let mut best: Option<&Notation> = None;
        for n in notations {
            if !n.symbol.is_empty()
                && starts_with(i, &n.symbol)
                && best.is_none_or(|b| n.symbol.chars().count() > b.symbol.chars().count())
            {
                best = Some(n);
            }
        }
        if let Some(n) = best {
            let len = n.symbol.chars().count();
            let ident_like = n.symbol.chars().all(is_ident_char);
            let glued = ident_like
                && (chars.get(i + len).is_some_and(|&c| is_ident_char(c))
                    || (i > 0 && is_ident_char(chars[i - 1])));
            if !glued {
                out.push((i, Tok::Custom(n.symbol.clone())));
                i += len;
                continue;
            }
        }
        if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[st..i].iter().collect();
            let n = s.parse::<u64>().map_err(|_| ExprError {
                offset: st,
                expected: "numeral".into(),
                found: s.clone(),
            })?;
            out.push((st, Tok::Num(n)));
            continue;
        }
        if is_ident_start(c) {
            let st = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push((st, Tok::Ident(chars[st..i].iter().collect())));
            continue;
        }
        if c == '?' {
            let st = i;
            i += 1;
            let s2 = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            if s2 == i {
                return Err(ExprError { offset: st, expected: "name after ?".into(), found: "?".into() });
            }
            out.push((st, Tok::Meta(chars[s2..i].iter().collect())));
            continue;
        }
        for (pat, canon) in SYMBOLS {
            if starts_with(i, pat) {
                out.push((i, Tok::Sym(canon)));
                i += pat.chars().count();
                continue 'outer;
            }
        }
        return Err(ExprError { offset: i, expected: "term".into(), found: c.to_string() });
    }
    out.push((chars.len(), Tok::Eof));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    notations: &'a [Notation],
    in_abs: usize,
    depth: usize,
}

type PR<T> = Result<T, ExprError>;

/// Nesting bound that keeps recursion safe on adversarial input.
const MAX_DEPTH: usize = 200;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }
    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }
    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }
    fn err<T>(&self, expected: &str) -> PR<T> {
        Err(ExprError { offset: self.offset(), expected: expected.into(), found: describe(self.peek()) })
    }
    fn expect(&mut self, s: &'static str) -> PR<()> {
        if *self.peek() == Tok::Sym(s) {
            self.bump();
            Ok(())
        } else {
            self.err(&format!("'{s}'"))
        }
    }

    fn infix(&self) -> Option<(Infix, u8, u8)> {
        let op = match self.peek() {
            Tok::Sym(s) => match *s {
                "⟷" => BinOp::Iff,
                "⟶" => BinOp::Implies,
                "∨" => BinOp::Or,
                "∧" => BinOp::And,
                "=" => BinOp::Eq,
                "≠" => BinOp::Neq,
                "≤" => BinOp::Le,
                "<" => BinOp::Less,
                "≥" => BinOp::Ge,
                ">" => BinOp::Greater,
                "∈" => BinOp::Mem,
                "∉" => BinOp::NotMem,
                "+" => BinOp::Plus,
                "-" => BinOp::Minus,
                "*" => BinOp::Times,
                "/" => BinOp::Div,
                "^" => BinOp::Pow,
                _ => return None,
            },
            Tok::Ident(s) if s == "dvd" => BinOp::Dvd,
            Tok::Custom(sym) => {
                let n = self.notations.iter().find(|n| &n.symbol == sym)?;
                return Some((Infix::Custom(sym.clone()), n.prec, n.prec.saturating_add(1)));
            }
            _ => return None,
        };
        let (p, _, r) = op.prec();
        Some((Infix::Op(op), p, r))
    }

    fn expr(&mut self, min: u8) -> PR<Expr> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("shallower nesting");
        }
        let mut lhs = self.prefix()?;
        while let Some((op, p, r)) = self.infix() {
            if p < min {
                break;
            }
            self.bump();
            let rhs = self.expr(r)?;
            lhs = match op {
                Infix::Op(o) => Expr::bin(o, lhs, rhs),
                Infix::Custom(s) => Expr::Custom(s, Box::new(lhs), Box::new(rhs)),
            };
            // relations do not chain
            if p == 50 && self.infix().is_some_and(|(_, p2, _)| p2 == 50) {
                return self.err("end of relation");
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn prefix(&mut self) -> PR<Expr> {
        match self.peek().clone() {
            Tok::Sym("¬") => {
                self.bump();
                let a = self.expr(40)?;
                Ok(Expr::Not(Box::new(a)))
            }
            Tok::Sym("∀") | Tok::Sym("∃") => {
                let q = if *self.peek() == Tok::Sym("∀") { Quant::All } else { Quant::Ex };
                self.bump();
                self.quant(q)
            }
            Tok::Ident(s) if s == "ALL" || s == "EX" => {
                self.bump();
                self.quant(if s == "ALL" { Quant::All } else { Quant::Ex })
            }
            _ => self.application(),
        }
    }

    fn quant(&mut self, q: Quant) -> PR<Expr> {
        let mut vars = vec![];
        loop {
            match self.peek().clone() {
                Tok::Ident(n) if !is_reserved(&n) => {
                    self.bump();
                    vars.push((n, None));
                }
                Tok::Sym("(") => {
                    // (x y :: s)
                    self.bump();
                    let mut group = vec![];
                    while let Tok::Ident(n) = self.peek().clone() {
                        if is_reserved(&n) {
                            break;
                        }
                        self.bump();
                        group.push(n);
                    }
                    if group.is_empty() {
                        return self.err("bound variable");
                    }
                    self.expect("::")?;
                    let s = self.sort()?;
                    self.expect(")")?;
                    vars.extend(group.into_iter().map(|n| (n, Some(s.clone()))));
                }
                _ => break,
            }
        }
        if vars.is_empty() {
            return self.err("bound variable");
        }
        if *self.peek() == Tok::Sym("::") {
            self.bump();
            let s = self.sort()?;
            for v in vars.iter_mut().filter(|v| v.1.is_none()) {
                v.1 = Some(s.clone());
            }
        }
        self.expect(".")?;
        let body = self.expr(0)?;
        Ok(Expr::Quant(q, vars, Box::new(body)))
    }

    fn sort(&mut self) -> PR<SortExpr> {
        let Tok::Ident(n) = self.peek().clone() else { return self.err("sort") };
        self.bump();
        let mut ps = vec![];
        if *self.peek() == Tok::Sym("(") {
            self.bump();
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return self.err("shallower nesting");
            }
            loop {
                ps.push(self.sort()?);
                if *self.peek() == Tok::Sym(",") {
                    self.bump();
                    continue;
                }
                break;
            }
            self.depth -= 1;
            self.expect(")")?;
        }
        Ok(SortExpr::Name(n, ps))
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_reserved(s) || s == "True" || s == "False",
            Tok::Num(_) | Tok::Meta(_) => true,
            Tok::Sym("(") => true,
            Tok::Sym("|") => self.in_abs == 0,
            _ => false,
        }
    }

    fn application(&mut self) -> PR<Expr> {
        if let Tok::Ident(f) = self.peek().clone() {
            if !is_reserved(&f) {
                self.bump();
                let mut args = vec![];
                while self.starts_atom() {
                    if *self.peek() == Tok::Sym("(") {
                        args.extend(self.paren_group()?);
                    } else {
                        args.push(self.atom()?);
                    }
                }
                return Ok(if args.is_empty() { Expr::Ident(f) } else { Expr::App(f, args) });
            }
        }
        self.atom()
    }

    /// `( e )` or `( e1, …, en )`; a tuple only makes sense as arguments.
    fn paren_group(&mut self) -> PR<Vec<Expr>> {
        self.expect("(")?;
        let saved = self.in_abs;
        self.in_abs = 0;
        let mut xs = vec![self.expr(0)?];
        while *self.peek() == Tok::Sym(",") {
            self.bump();
            xs.push(self.expr(0)?);
        }
        self.in_abs = saved;
        self.expect(")")?;
        Ok(xs)
    }

    fn atom(&mut self) -> PR<Expr> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Num(n))
            }
            Tok::Meta(m) => {
                self.bump();
                Ok(Expr::Meta(m))
            }
            Tok::Ident(s) if s == "True" => {
                self.bump();
                Ok(Expr::True)
            }
            Tok::Ident(s) if s == "False" => {
                self.bump();
                Ok(Expr::False)
            }
            Tok::Ident(s) if !is_reserved(&s) => {
                self.bump();
                Ok(Expr::Ident(s))
            }
            Tok::Sym("(") => {
                let xs = self.paren_group()?;
                if xs.len() != 1 {
                    return self.err("single expression in parentheses");
                }
                Ok(xs.into_iter().next().unwrap())
            }
            Tok::Sym("|") => {
                self.bump();
                self.in_abs += 1;
                let e = self.expr(51)?;
                self.in_abs -= 1;
                self.expect("|")?;
                Ok(Expr::Abs(Box::new(e)))
            }
            Tok::Sym("¬") | Tok::Sym("∀") | Tok::Sym("∃") => self.prefix(),
            _ => self.err("term"),
        }
    }
}

enum Infix {
    Op(BinOp),
    Custom(String),
}

fn is_reserved(s: &str) -> bool {
    matches!(s, "dvd" | "ALL" | "EX" | "True" | "False")
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => s.clone(),
        Tok::Num(n) => n.to_string(),
        Tok::Meta(m) => format!("?{m}"),
        Tok::Sym(s) => s.to_string(),
        Tok::Custom(s) => s.clone(),
        Tok::Eof => "end of input".into(),
    }
}

pub fn parse_expr(src: &str, notations: &[Notation]) -> Result<Expr, ExprError> {
    let toks = lex(src, notations)?;
    let mut p = Parser { toks, pos: 0, notations, in_abs: 0, depth: 0 };
    if *p.peek() == Tok::Eof {
        return p.err("proposition");
    }
    let e = p.expr(0)?;
    if *p.peek() != Tok::Eof {
        return p.err("end of proposition");
    }
    Ok(e)
}

/// Print in canonical concrete syntax; [`parse_expr`] inverts it.
pub fn render_expr(e: &Expr, notations: &[Notation]) -> String {
    let mut s = String::new();
    render(e, notations, 0, &mut s);
    s
}

fn render(e: &Expr, ns: &[Notation], prec: u8, out: &mut String) {
    match e {
        Expr::True => out.push_str("True"),
        Expr::False => out.push_str("False"),
        Expr::Num(n) => out.push_str(&n.to_string()),
        Expr::Ident(s) => out.push_str(s),
        Expr::Meta(m) => {
            out.push('?');
            out.push_str(m)
        }
        Expr::App(f, xs) => {
            let paren = prec > 100;
            if paren {
                out.push('(');
            }
            out.push_str(f);
            for x in xs {
                out.push(' ');
                if let Expr::Abs(_) = x {
                    out.push('(');
                    render(x, ns, 0, out);
                    out.push(')');
                } else {
                    render(x, ns, 101, out);
                }
            }
            if paren {
                out.push(')');
            }
        }
        Expr::Abs(a) => {
            out.push('|');
            render(a, ns, 51, out);
            out.push('|');
        }
        Expr::Not(a) => {
            let paren = prec > 40;
            if paren {
                out.push('(');
            }
            out.push('¬');
            render(a, ns, 40, out);
            if paren {
                out.push(')');
            }
        }
        Expr::Bin(op, a, b) => bin(a, op.symbol(), b, op.prec(), ns, prec, out),
        Expr::Custom(sym, a, b) => {
            let p = ns.iter().find(|n| &n.symbol == sym).map(|n| n.prec).unwrap_or(50);
            bin(a, sym, b, (p, p, p.saturating_add(1)), ns, prec, out)
        }
        Expr::Quant(q, vs, body) => {
            let paren = prec > 0;
            if paren {
                out.push('(');
            }
            out.push(if *q == Quant::All { '∀' } else { '∃' });
            for (i, (v, s)) in vs.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                match s {
                    Some(s) => out.push_str(&format!("({v} :: {s})")),
                    None => out.push_str(v),
                }
            }
            out.push_str(". ");
            render(body, ns, 0, out);
            if paren {
                out.push(')');
            }
        }
    }
}

fn bin(a: &Expr, sym: &str, b: &Expr, (p, l, r): (u8, u8, u8), ns: &[Notation], prec: u8, out: &mut String) {
    let paren = prec > p;
    if paren {
        out.push('(');
    }
    render(a, ns, l, out);
    if sym == "^" {
        out.push('^');
    } else {
        out.push(' ');
        out.push_str(sym);
        out.push(' ');
    }
    render(b, ns, r, out);
    if paren {
        out.push(')');
    }
}
