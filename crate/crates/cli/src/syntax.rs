//! Lexer, syntax tree and parser for `.loom` command files.

use std::collections::HashMap;
use std::fmt;

/// Source range, 1-based lines and columns, end exclusive. Spans never
/// take part in equality, so reformatted documents compare equal.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub code: &'static str,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {sev}[{}]: {}", self.span, self.code, self.message)
    }
}

/// Every diagnostic code with a one-line description.
pub const DIAGNOSTIC_CODES: &[(&str, &str)] = &[
    ("E001", "unexpected token"),
    ("E002", "unresolved name"),
    ("E003", "duplicate name"),
    ("E004", "root of unity not available in the declared field"),
    ("E005", "name refers to the wrong kind of object"),
    ("E006", "missing or repeated field declaration"),
    ("E007", "invalid character"),
    ("E008", "malformed literal or shape"),
    ("E009", "unknown algebra constructor or wrong argument shape"),
    ("W001", "declaration never used"),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

const SYMBOLS: &str = "()[]{},;=*/+-^@";

pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, code, message: String| Diagnostic {
        severity: Severity::Error,
        span: Span { line, col, end_line: line, end_col: col + 1 },
        code,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let mut word: String = chars[start..i].iter().collect();
            let rest: String = chars[i..chars.len().min(i + 5)].iter().collect();
            if word == "canonical" && rest == "-form" {
                i += 5;
                word.push_str("-form");
            }
            Tok::Ident(word)
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            Tok::Int(text.parse().map_err(|_| err(l0, c0, "E008", format!("integer literal {text} is too large")))?)
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(err(l0, c0, "E008", "unterminated string".into()));
            }
            i += 1;
            Tok::Str(chars[start + 1..i - 1].iter().collect())
        } else if SYMBOLS.contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(err(l0, c0, "E007", format!("invalid character `{c}`")));
        };
        col += i - start;
        out.push((tok, Span { line: l0, col: c0, end_line: line, end_col: col }));
    }
    out.push((Tok::Eof, Span { line, col, end_line: line, end_col: col + 1 }));
    Ok(out)
}

/// A name as written, with where it was written.
#[derive(Debug, Clone, PartialEq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Int(i64),
    /// The generator of the declared field.
    Zeta,
    /// Primitive `m`-th root of unity.
    Root(u64, Span),
    Neg(Box<Scalar>),
    Add(Box<Scalar>, Box<Scalar>),
    Sub(Box<Scalar>, Box<Scalar>),
    Mul(Box<Scalar>, Box<Scalar>),
    Div(Box<Scalar>, Box<Scalar>),
    Pow(Box<Scalar>, i64),
}

/// `coeff * label @ [degree]`; coefficient and degree are optional.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Option<Scalar>,
    pub negated: bool,
    pub label: Name,
    pub degree: Option<Vec<i64>>,
}

pub type Matrix = Vec<Vec<Scalar>>;

#[derive(Debug, Clone, PartialEq)]
pub enum CtorArg {
    Int(i64),
    Name(Name),
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraExpr {
    Ctor { name: Name, args: Vec<CtorArg> },
    Structure { labels: Vec<String>, products: Vec<(Name, Name, Vec<Term>)>, unit: Option<Vec<Term>> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum AutoExpr {
    Identity { alg: Name },
    Conj { alg: Name, matrix: Matrix },
    Linear { alg: Name, matrix: Matrix },
    Permute { alg: Name, perm: Vec<i64> },
    AntiTranspose { alg: Name },
}

impl AutoExpr {
    pub fn algebra(&self) -> &Name {
        match self {
            AutoExpr::Identity { alg } | AutoExpr::Conj { alg, .. } | AutoExpr::Linear { alg, .. } | AutoExpr::Permute { alg, .. } | AutoExpr::AntiTranspose { alg } => alg,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GradingExpr {
    Eigen { auto: Name, root: Scalar },
    Components { alg: Name, components: Vec<Vec<Vec<Term>>>, root: Option<Scalar> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageExpr {
    pub auto: Name,
    pub monomial: Option<Vec<Vec<i64>>>,
    pub chi: Option<Vec<Scalar>>,
    pub root: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TowerExpr {
    Multiloop { alg: Name, stages: Vec<(Name, Scalar)> },
    Loop { alg: Name, stages: Vec<StageExpr> },
    Untwisted { alg: Name, steps: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeclKind {
    Algebra(AlgebraExpr),
    Auto(AutoExpr),
    Grading(GradingExpr),
    Tower(TowerExpr),
}

impl DeclKind {
    pub fn kind_name(&self) -> &'static str {
        match self {
            DeclKind::Algebra(_) => "algebra",
            DeclKind::Auto(_) => "auto",
            DeclKind::Grading(_) => "grading",
            DeclKind::Tower(_) => "tower",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decl {
    pub name: Name,
    pub kind: DeclKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Grading { grading: Name, on: Option<Name> },
    Build { tower: Name, window: Option<Vec<i64>> },
    Centroid { tower: Name, window: Option<Vec<i64>> },
    Kind { tower: Name },
    Type { target: Name },
    Untwist { tower: Name, window: Option<Vec<i64>> },
    CanonicalForm { tower: Name, element: Vec<Term> },
    Member { tower: Name, element: Vec<Term> },
    Flags { tower: Name, window: Option<Vec<i64>> },
    Psi { grading: Name, window: Option<Vec<i64>> },
    Audit { tower: Name, bound: i64 },
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::Grading { .. } => "grading",
            Command::Build { .. } => "build",
            Command::Centroid { .. } => "centroid",
            Command::Kind { .. } => "kind",
            Command::Type { .. } => "type",
            Command::Untwist { .. } => "untwist",
            Command::CanonicalForm { .. } => "canonical-form",
            Command::Member { .. } => "member",
            Command::Flags { .. } => "flags",
            Command::Psi { .. } => "psi",
            Command::Audit { .. } => "audit",
        }
    }

    pub fn target(&self) -> &Name {
        match self {
            Command::Grading { grading: n, .. } | Command::Psi { grading: n, .. } => n,
            Command::Type { target } => target,
            Command::Build { tower, .. }
            | Command::Centroid { tower, .. }
            | Command::Kind { tower }
            | Command::Untwist { tower, .. }
            | Command::CanonicalForm { tower, .. }
            | Command::Member { tower, .. }
            | Command::Flags { tower, .. }
            | Command::Audit { tower, .. } => tower,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub root_order: u64,
    pub title: Option<String>,
    pub declarations: Vec<Decl>,
    pub commands: Vec<Command>,
}

impl Document {
    pub fn declaration(&self, name: &str) -> Option<&Decl> {
        self.declarations.iter().find(|d| d.name.text == name)
    }
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

fn error(span: Span, code: &'static str, message: impl Into<String>) -> Diagnostic {
    Diagnostic { severity: Severity::Error, span, code, message: message.into() }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        Err(error(self.span(), "E001", format!("expected {wanted}, found {}", self.peek())))
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn sym(&mut self, c: char) -> PResult<()> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("`{c}`"))
        }
    }

    fn kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    fn name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let (_, span) = self.bump();
                Ok(Name { text: s, span })
            }
            _ => self.unexpected("a name"),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = if self.is_sym('-') {
            self.bump();
            true
        } else {
            false
        };
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(if neg { -n } else { n })
            }
            _ => self.unexpected("an integer"),
        }
    }

    fn list<T>(&mut self, open: char, close: char, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.sym(open)?;
        let mut out = Vec::new();
        if self.is_sym(close) {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.is_sym(',') {
                self.bump();
            } else {
                self.sym(close)?;
                return Ok(out);
            }
        }
    }

    fn scalar(&mut self) -> PResult<Scalar> {
        let mut acc = self.scalar_product()?;
        loop {
            if self.is_sym('+') {
                self.bump();
                acc = Scalar::Add(Box::new(acc), Box::new(self.scalar_product()?));
            } else if self.is_sym('-') {
                self.bump();
                acc = Scalar::Sub(Box::new(acc), Box::new(self.scalar_product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn scalar_product(&mut self) -> PResult<Scalar> {
        let mut acc = self.scalar_unary()?;
        loop {
            if self.is_sym('*') {
                self.bump();
                acc = Scalar::Mul(Box::new(acc), Box::new(self.scalar_unary()?));
            } else if self.is_sym('/') {
                self.bump();
                acc = Scalar::Div(Box::new(acc), Box::new(self.scalar_unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn scalar_unary(&mut self) -> PResult<Scalar> {
        if self.is_sym('-') {
            self.bump();
            return Ok(Scalar::Neg(Box::new(self.scalar_unary()?)));
        }
        self.scalar_power()
    }

    fn scalar_power(&mut self) -> PResult<Scalar> {
        let base = self.scalar_atom()?;
        if self.is_sym('^') {
            self.bump();
            let e = self.int()?;
            return Ok(Scalar::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn scalar_atom(&mut self) -> PResult<Scalar> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Scalar::Int(n))
            }
            Tok::Ident(s) if s == "zeta" => {
                self.bump();
                if self.is_sym('(') {
                    self.bump();
                    let span = self.span();
                    let m = self.int()?;
                    self.sym(')')?;
                    if m <= 0 {
                        return Err(error(span, "E008", "root order must be positive"));
                    }
                    Ok(Scalar::Root(m as u64, span))
                } else {
                    Ok(Scalar::Zeta)
                }
            }
            Tok::Sym('(') => {
                self.bump();
                let s = self.scalar()?;
                self.sym(')')?;
                Ok(s)
            }
            _ => self.unexpected("a scalar"),
        }
    }

    fn is_label_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s != "zeta") || matches!(self.peek(), Tok::Str(_))
    }

    fn label(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Str(s) => {
                let (_, span) = self.bump();
                Ok(Name { text: s, span })
            }
            _ => self.unexpected("a basis label"),
        }
    }

    fn term(&mut self, negated: bool, with_degree: bool) -> PResult<Term> {
        let coeff = if self.is_label_start() {
            None
        } else {
            let mut acc = self.scalar_unary()?;
            loop {
                if self.is_sym('*') {
                    self.bump();
                    if self.is_label_start() {
                        break;
                    }
                    acc = Scalar::Mul(Box::new(acc), Box::new(self.scalar_unary()?));
                } else if self.is_sym('/') {
                    self.bump();
                    acc = Scalar::Div(Box::new(acc), Box::new(self.scalar_unary()?));
                } else {
                    return self.unexpected("`*` before a basis label");
                }
            }
            Some(acc)
        };
        let label = self.label()?;
        let degree = if with_degree {
            self.sym('@')?;
            Some(self.list('[', ']', |p| p.int())?)
        } else {
            None
        };
        Ok(Term { coeff, negated, label, degree })
    }

    /// A sum of terms, or `0` for the empty sum.
    fn lincomb(&mut self, with_degree: bool) -> PResult<Vec<Term>> {
        if *self.peek() == Tok::Int(0) && matches!(self.peek_at(1), Tok::Sym(';') | Tok::Sym(',') | Tok::Sym(']')) {
            self.bump();
            return Ok(Vec::new());
        }
        let mut negated = false;
        if self.is_sym('-') {
            self.bump();
            negated = true;
        }
        let mut out = vec![self.term(negated, with_degree)?];
        loop {
            if self.is_sym('+') {
                self.bump();
                out.push(self.term(false, with_degree)?);
            } else if self.is_sym('-') {
                self.bump();
                out.push(self.term(true, with_degree)?);
            } else {
                return Ok(out);
            }
        }
    }

    fn matrix(&mut self) -> PResult<Matrix> {
        let span = self.span();
        let m = self.list('[', ']', |p| p.list('[', ']', |q| q.scalar()))?;
        if m.is_empty() || m.iter().any(|r| r.len() != m.len()) {
            return Err(error(span, "E008", "matrix must be square and nonempty"));
        }
        Ok(m)
    }

    fn int_matrix(&mut self) -> PResult<Vec<Vec<i64>>> {
        let span = self.span();
        let m = self.list('[', ']', |p| p.list('[', ']', |q| q.int()))?;
        if m.is_empty() || m.iter().any(|r| r.len() != m.len()) {
            return Err(error(span, "E008", "matrix must be square and nonempty"));
        }
        Ok(m)
    }

    fn window(&mut self) -> PResult<Option<Vec<i64>>> {
        if !self.is_kw("box") {
            return Ok(None);
        }
        self.bump();
        let mut r = vec![self.int()?];
        while self.is_sym(',') {
            self.bump();
            r.push(self.int()?);
        }
        Ok(Some(r))
    }

    fn algebra_expr(&mut self) -> PResult<AlgebraExpr> {
        if self.is_kw("structure") {
            self.bump();
            let labels = self.list('[', ']', |p| p.label().map(|n| n.text))?;
            self.sym('{')?;
            let mut products = Vec::new();
            while !self.is_sym('}') {
                let a = self.label()?;
                self.sym('*')?;
                let b = self.label()?;
                self.sym('=')?;
                let rhs = self.lincomb(false)?;
                self.sym(';')?;
                products.push((a, b, rhs));
            }
            self.sym('}')?;
            let unit = if self.is_kw("unit") {
                self.bump();
                Some(self.lincomb(false)?)
            } else {
                None
            };
            return Ok(AlgebraExpr::Structure { labels, products, unit });
        }
        let name = self.name()?;
        let args = self.list('(', ')', |p| match p.peek().clone() {
            Tok::Ident(_) => p.name().map(CtorArg::Name),
            _ => p.int().map(CtorArg::Int),
        })?;
        Ok(AlgebraExpr::Ctor { name, args })
    }

    fn auto_expr(&mut self) -> PResult<AutoExpr> {
        let head = self.name()?;
        let alg = self.name()?;
        Ok(match head.text.as_str() {
            "identity" => AutoExpr::Identity { alg },
            "antitranspose" => AutoExpr::AntiTranspose { alg },
            "conj" => AutoExpr::Conj { alg, matrix: self.matrix()? },
            "linear" => AutoExpr::Linear { alg, matrix: self.matrix()? },
            "permute" => AutoExpr::Permute { alg, perm: self.list('[', ']', |p| p.int())? },
            _ => return Err(error(head.span, "E001", format!("unknown automorphism form `{}`", head.text))),
        })
    }

    fn grading_expr(&mut self) -> PResult<GradingExpr> {
        if self.is_kw("eigen") {
            self.bump();
            let auto = self.name()?;
            self.kw("root")?;
            return Ok(GradingExpr::Eigen { auto, root: self.scalar()? });
        }
        self.kw("components")?;
        let alg = self.name()?;
        let components = self.list('[', ']', |p| p.list('[', ']', |q| q.lincomb(false)))?;
        let root = if self.is_kw("root") {
            self.bump();
            Some(self.scalar()?)
        } else {
            None
        };
        Ok(GradingExpr::Components { alg, components, root })
    }

    fn tower_expr(&mut self) -> PResult<TowerExpr> {
        let head = self.name()?;
        let alg = self.name()?;
        match head.text.as_str() {
            "untwisted" => Ok(TowerExpr::Untwisted { alg, steps: self.int()? }),
            "multiloop" => {
                self.sym('{')?;
                let mut stages = Vec::new();
                while !self.is_sym('}') {
                    let a = self.name()?;
                    self.kw("root")?;
                    let r = self.scalar()?;
                    self.sym(';')?;
                    stages.push((a, r));
                }
                self.sym('}')?;
                Ok(TowerExpr::Multiloop { alg, stages })
            }
            "loop" => {
                self.sym('{')?;
                let mut stages = Vec::new();
                while !self.is_sym('}') {
                    self.kw("stage")?;
                    let auto = self.name()?;
                    let monomial = if self.is_kw("monomial") {
                        self.bump();
                        Some(self.int_matrix()?)
                    } else {
                        None
                    };
                    let chi = if self.is_kw("chi") {
                        self.bump();
                        Some(self.list('[', ']', |p| p.scalar())?)
                    } else {
                        None
                    };
                    self.kw("root")?;
                    let root = self.scalar()?;
                    self.sym(';')?;
                    stages.push(StageExpr { auto, monomial, chi, root });
                }
                self.sym('}')?;
                Ok(TowerExpr::Loop { alg, stages })
            }
            _ => Err(error(head.span, "E001", format!("unknown tower form `{}`", head.text))),
        }
    }

    fn command(&mut self) -> PResult<Command> {
        let verb = self.name()?;
        Ok(match verb.text.as_str() {
            "grading" => {
                let grading = self.name()?;
                let on = if self.is_kw("on") {
                    self.bump();
                    Some(self.name()?)
                } else {
                    None
                };
                Command::Grading { grading, on }
            }
            "build" => Command::Build { tower: self.name()?, window: self.window()? },
            "centroid" => Command::Centroid { tower: self.name()?, window: self.window()? },
            "kind" => Command::Kind { tower: self.name()? },
            "type" => Command::Type { target: self.name()? },
            "untwist" => Command::Untwist { tower: self.name()?, window: self.window()? },
            "canonical-form" => Command::CanonicalForm { tower: self.name()?, element: self.lincomb(true)? },
            "member" => Command::Member { tower: self.name()?, element: self.lincomb(true)? },
            "flags" => Command::Flags { tower: self.name()?, window: self.window()? },
            "psi" => Command::Psi { grading: self.name()?, window: self.window()? },
            "audit" => {
                let tower = self.name()?;
                let bound = if self.is_kw("bound") {
                    self.bump();
                    self.int()?
                } else {
                    2
                };
                Command::Audit { tower, bound }
            }
            _ => return Err(error(verb.span, "E001", format!("unknown check `{}`", verb.text))),
        })
    }
}

/// Parses without name resolution or root checks.
pub fn parse_syntax(src: &str) -> Result<Document, Diagnostic> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let mut root_order = None;
    let mut title = None;
    let mut declarations = Vec::new();
    let mut commands = Vec::new();
    while *p.peek() != Tok::Eof {
        if root_order.is_none() && !p.is_kw("field") && !p.is_kw("report") {
            return Err(error(p.span(), "E006", "the first statement must be `field zeta N;`"));
        }
        let span = p.span();
        let head = p.name()?;
        match head.text.as_str() {
            "field" => {
                p.kw("zeta")?;
                let n = p.int()?;
                if root_order.is_some() {
                    return Err(error(span, "E006", "field declared twice"));
                }
                if n <= 0 {
                    return Err(error(span, "E008", "field order must be positive"));
                }
                root_order = Some(n as u64);
            }
            "report" => match p.peek().clone() {
                Tok::Str(s) => {
                    p.bump();
                    title = Some(s);
                }
                _ => return p.unexpected("a report title string"),
            },
            "check" => commands.push(p.command()?),
            "algebra" | "auto" | "grading" | "tower" => {
                let name = p.name()?;
                p.sym('=')?;
                let kind = match head.text.as_str() {
                    "algebra" => DeclKind::Algebra(p.algebra_expr()?),
                    "auto" => DeclKind::Auto(p.auto_expr()?),
                    "grading" => DeclKind::Grading(p.grading_expr()?),
                    _ => DeclKind::Tower(p.tower_expr()?),
                };
                declarations.push(Decl { name, kind });
            }
            _ => return Err(error(head.span, "E001", format!("unknown statement `{}`", head.text))),
        }
        p.sym(';')?;
    }
    let Some(root_order) = root_order else {
        return Err(error(p.span(), "E006", "missing `field zeta N;`"));
    };
    Ok(Document { root_order, title, declarations, commands })
}

/// Parses and validates a document. Errors abort; warnings are returned
/// alongside a successful parse.
pub fn parse(src: &str) -> Result<(Document, Vec<Diagnostic>), Vec<Diagnostic>> {
    let doc = parse_syntax(src).map_err(|d| vec![d])?;
    let mut warnings = Vec::new();
    let errors = validate(&doc, &mut warnings);
    if errors.is_empty() {
        Ok((doc, warnings))
    } else {
        Err(errors)
    }
}

fn article(word: &str) -> &'static str {
    if word.starts_with(['a', 'e', 'i', 'o', 'u']) {
        "an"
    } else {
        "a"
    }
}

fn root_orders(s: &Scalar, out: &mut Vec<(u64, Span)>) {
    match s {
        Scalar::Root(m, span) => out.push((*m, *span)),
        Scalar::Neg(a) | Scalar::Pow(a, _) => root_orders(a, out),
        Scalar::Add(a, b) | Scalar::Sub(a, b) | Scalar::Mul(a, b) | Scalar::Div(a, b) => {
            root_orders(a, out);
            root_orders(b, out);
        }
        Scalar::Int(_) | Scalar::Zeta => {}
    }
}

fn terms_scalars(ts: &[Term]) -> impl Iterator<Item = &Scalar> {
    ts.iter().filter_map(|t| t.coeff.as_ref())
}

/// Name resolution, kinds, and root availability.
fn validate(doc: &Document, warnings: &mut Vec<Diagnostic>) -> Vec<Diagnostic> {
    let mut errors = Vec::new();
    let mut kinds: HashMap<&str, &'static str> = HashMap::new();
    let mut used: HashMap<&str, bool> = HashMap::new();
    let mut scalars: Vec<&Scalar> = Vec::new();
    let resolve = |n: &Name, want: &[&'static str], kinds: &HashMap<&str, &'static str>, used: &mut HashMap<&str, bool>, errors: &mut Vec<Diagnostic>| match kinds.get(n.text.as_str()) {
        None => errors.push(error(n.span, "E002", format!("unresolved name `{}`", n.text))),
        Some(k) if !want.contains(k) => errors.push(error(n.span, "E005", format!("`{}` is {} {k}, expected {}", n.text, article(k), want.iter().map(|w| format!("{} {w}", article(w))).collect::<Vec<_>>().join(" or ")))),
        Some(_) => {
            if let Some(u) = used.get_mut(n.text.as_str()) {
                *u = true;
            }
        }
    };
    for d in &doc.declarations {
        match &d.kind {
            DeclKind::Algebra(AlgebraExpr::Ctor { name, args }) => {
                let shape: Vec<bool> = args.iter().map(|a| matches!(a, CtorArg::Name(_))).collect();
                let expected: Option<&[bool]> = match name.text.as_str() {
                    "mat" | "gl" | "sl" | "zero" | "so" | "sp" => Some(&[false]),
                    "quaternions" => Some(&[false, false]),
                    "sum" | "direct_sum" => Some(&[true, true]),
                    "field" => Some(&[]),
                    _ => None,
                };
                match expected {
                    None => errors.push(error(name.span, "E009", format!("unknown algebra constructor `{}`", name.text))),
                    Some(e) if e != shape.as_slice() => {
                        errors.push(error(name.span, "E009", format!("wrong arguments for `{}`", name.text)));
                    }
                    _ => {}
                }
                for a in args {
                    if let CtorArg::Name(n) = a {
                        resolve(n, &["algebra"], &kinds, &mut used, &mut errors);
                    }
                }
            }
            DeclKind::Algebra(AlgebraExpr::Structure { products, unit, .. }) => {
                for (_, _, rhs) in products {
                    scalars.extend(terms_scalars(rhs));
                }
                if let Some(u) = unit {
                    scalars.extend(terms_scalars(u));
                }
            }
            DeclKind::Auto(a) => {
                resolve(a.algebra(), &["algebra"], &kinds, &mut used, &mut errors);
                if let AutoExpr::Conj { matrix, .. } | AutoExpr::Linear { matrix, .. } = a {
                    scalars.extend(matrix.iter().flatten());
                }
            }
            DeclKind::Grading(GradingExpr::Eigen { auto, root }) => {
                resolve(auto, &["auto"], &kinds, &mut used, &mut errors);
                scalars.push(root);
            }
            DeclKind::Grading(GradingExpr::Components { alg, components, root }) => {
                resolve(alg, &["algebra"], &kinds, &mut used, &mut errors);
                for c in components.iter().flatten() {
                    scalars.extend(terms_scalars(c));
                }
                scalars.extend(root.iter());
            }
            DeclKind::Tower(t) => match t {
                TowerExpr::Untwisted { alg, .. } => resolve(alg, &["algebra"], &kinds, &mut used, &mut errors),
                TowerExpr::Multiloop { alg, stages } => {
                    resolve(alg, &["algebra"], &kinds, &mut used, &mut errors);
                    for (a, r) in stages {
                        resolve(a, &["auto"], &kinds, &mut used, &mut errors);
                        scalars.push(r);
                    }
                }
                TowerExpr::Loop { alg, stages } => {
                    resolve(alg, &["algebra"], &kinds, &mut used, &mut errors);
                    for s in stages {
                        resolve(&s.auto, &["auto"], &kinds, &mut used, &mut errors);
                        scalars.push(&s.root);
                        scalars.extend(s.chi.iter().flatten());
                    }
                }
            },
        }
        if kinds.contains_key(d.name.text.as_str()) {
            errors.push(error(d.name.span, "E003", format!("`{}` is already declared", d.name.text)));
        } else {
            kinds.insert(&d.name.text, d.kind.kind_name());
            used.insert(&d.name.text, false);
        }
    }
    for c in &doc.commands {
        let want: &[&'static str] = match c {
            Command::Grading { .. } | Command::Psi { .. } => &["grading"],
            Command::Type { .. } => &["algebra", "tower"],
            _ => &["tower"],
        };
        resolve(c.target(), want, &kinds, &mut used, &mut errors);
        if let Command::Grading { on: Some(a), .. } = c {
            resolve(a, &["algebra"], &kinds, &mut used, &mut errors);
        }
        if let Command::CanonicalForm { element, .. } | Command::Member { element, .. } = c {
            scalars.extend(terms_scalars(element));
        }
    }
    for s in scalars {
        let mut roots = Vec::new();
        root_orders(s, &mut roots);
        for (m, span) in roots {
            if doc.root_order % m != 0 {
                errors.push(error(span, "E004", format!("zeta({m}) needs {m} to divide the field order {}", doc.root_order)));
            }
        }
    }
    for d in &doc.declarations {
        if used.get(d.name.text.as_str()) == Some(&false) {
            warnings.push(Diagnostic { severity: Severity::Warning, span: d.name.span, code: "W001", message: format!("`{}` is never used", d.name.text) });
        }
    }
    errors
}
