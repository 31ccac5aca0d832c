//! The `.scn` scenario format: line-oriented declarations of rings, modules,
//! contexts, direct systems, and check invocations, with a canonical
//! printer. Matrices are written row per line between brackets; polynomials
//! in ordinary infix syntax.

use adic_core::rings::{Matrix, MonomialOrder, Ring, RingElement};
use adic_core::FpModule;
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> PResult<T> {
    Err(ParseError { line, column, message: message.into() })
}

/// Declarations as written, resolved against earlier declarations.
#[derive(Clone, Debug, PartialEq)]
pub enum RingDecl {
    Integers,
    Rationals,
    PrimeField(u64),
    Zmod(BigInt),
    Poly { coeff: String, vars: Vec<String>, order: MonomialOrder },
    Quotient { base: String, gens: Vec<String> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModuleDecl {
    Free(usize),
    Cyclic(Vec<String>),
    Cokernel(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum IndDecl {
    Prufer(i64),
    Denominators,
    Sum(i64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ComplexArg {
    Module(String),
    Torsion(String, u32),
    Completion(String, u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckDecl {
    pub kind: String,
    pub context: String,
    pub args: Vec<ComplexArg>,
    pub modules: Vec<String>,
    pub ind: Option<String>,
    pub bound: Option<u32>,
    pub level: Option<u32>,
}

#[derive(Debug, Default)]
pub struct Scenario {
    pub rings: Vec<(String, RingDecl)>,
    pub modules: Vec<(String, String, ModuleDecl)>, // name, ring, decl
    pub contexts: Vec<(String, String, Vec<String>)>, // name, ring, generator exprs
    pub diagonals: Vec<(String, String, Vec<String>)>, // name, base ring, vars
    pub inds: Vec<(String, String, IndDecl)>,       // name, ring, decl
    pub checks: Vec<CheckDecl>,
}

impl PartialEq for Scenario {
    fn eq(&self, other: &Self) -> bool {
        self.rings == other.rings
            && self.modules == other.modules
            && self.contexts == other.contexts
            && self.diagonals == other.diagonals
            && self.inds == other.inds
            && self.checks == other.checks
    }
}

/// Resolved artifacts ready for execution.
pub struct ResolvedScenario {
    pub scenario: Scenario,
    pub modules: BTreeMap<String, FpModule>,
    pub contexts: BTreeMap<String, adic_core::adic::AdicContext>,
    pub diagonals: BTreeMap<String, adic_core::adic::DiagonalContext>,
    pub inds: BTreeMap<String, (adic_core::towers::IndModule, String)>,
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| {
                let stripped = match l.find('#') {
                    Some(p) => &l[..p],
                    None => l,
                };
                (i + 1, stripped.trim())
            })
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { lines, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.lines.get(self.pos).copied();
        self.pos += 1;
        item
    }
}

pub fn parse_scenario(text: &str) -> PResult<Scenario> {
    let mut sc = Scenario::default();
    let mut lines = Lines::new(text);
    while let Some((ln, line)) = lines.next() {
        let mut words = line.split_whitespace();
        match words.next() {
            Some("ring") => parse_ring(ln, line, &mut sc)?,
            Some("module") => parse_module(ln, line, &mut sc, &mut lines)?,
            Some("context") => parse_context(ln, line, &mut sc)?,
            Some("diagonal") => parse_diagonal(ln, line, &mut sc)?,
            Some("indmodule") => parse_ind(ln, line, &mut sc)?,
            Some("check") => parse_check(ln, line, &mut sc)?,
            Some(other) => return err(ln, 1, format!("unknown keyword `{}`", other)),
            None => {}
        }
    }
    Ok(sc)
}

fn split_eq(ln: usize, line: &str) -> PResult<(String, String)> {
    match line.find('=') {
        Some(p) => Ok((line[..p].trim().to_string(), line[p + 1..].trim().to_string())),
        None => err(ln, 1, "expected `=`"),
    }
}

fn parse_ring(ln: usize, line: &str, sc: &mut Scenario) -> PResult<()> {
    let rest = line.trim_start_matches("ring").trim();
    let (head, body) = split_eq(ln, rest)?;
    let name = head.trim().to_string();
    if name.is_empty() {
        return err(ln, 1, "ring needs a name");
    }
    let mut w = body.split_whitespace();
    let decl = match w.next() {
        Some("integers") => RingDecl::Integers,
        Some("rationals") => RingDecl::Rationals,
        Some("gf") => {
            let p: u64 = w
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| ParseError { line: ln, column: 1, message: "gf needs a prime".into() })?;
            RingDecl::PrimeField(p)
        }
        Some("zmod") => {
            let m: BigInt = w
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| ParseError { line: ln, column: 1, message: "zmod needs a modulus".into() })?;
            RingDecl::Zmod(m)
        }
        Some("poly") => {
            let coeff = w
                .next()
                .ok_or_else(|| ParseError { line: ln, column: 1, message: "poly needs a coefficient ring".into() })?
                .to_string();
            let rest: String = w.collect::<Vec<_>>().join(" ");
            let (vars, order) = parse_vars_and_order(ln, &rest)?;
            RingDecl::Poly { coeff, vars, order }
        }
        Some("quotient") => {
            let base = w
                .next()
                .ok_or_else(|| ParseError { line: ln, column: 1, message: "quotient needs a base ring".into() })?
                .to_string();
            let rest: String = w.collect::<Vec<_>>().join(" ");
            let gens = parse_paren_list(ln, &rest)?;
            RingDecl::Quotient { base, gens }
        }
        other => return err(ln, 1, format!("unknown ring kind `{:?}`", other)),
    };
    sc.rings.push((name, decl));
    Ok(())
}

fn parse_vars_and_order(ln: usize, rest: &str) -> PResult<(Vec<String>, MonomialOrder)> {
    let open = rest.find('[');
    let close = rest.find(']');
    let (open, close) = match (open, close) {
        (Some(a), Some(b)) if a < b => (a, b),
        _ => return err(ln, 1, "expected `[vars]`"),
    };
    let vars: Vec<String> = rest[open + 1..close]
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if vars.is_empty() {
        return err(ln, 1, "need at least one variable");
    }
    let tail = rest[close + 1..].trim();
    let order = if tail.is_empty() {
        MonomialOrder::GrevLex
    } else {
        tail.parse()
            .map_err(|m: String| ParseError { line: ln, column: 1, message: m })?
    };
    Ok((vars, order))
}

fn parse_paren_list(ln: usize, rest: &str) -> PResult<Vec<String>> {
    let rest = rest.trim();
    if !rest.starts_with('(') || !rest.ends_with(')') {
        return err(ln, 1, "expected `(...)`");
    }
    Ok(split_top_level(&rest[1..rest.len() - 1])
        .into_iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect())
}

/// Split on commas not nested in parentheses.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ',' if depth == 0 => {
                out.push(cur.clone());
                cur.clear();
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

fn parse_module(ln: usize, line: &str, sc: &mut Scenario, lines: &mut Lines) -> PResult<()> {
    // module NAME over RING = free N | cyclic (...) | cokernel [ ... ]
    let rest = line.trim_start_matches("module").trim();
    let over = rest
        .find(" over ")
        .ok_or_else(|| ParseError { line: ln, column: 1, message: "expected `over`".into() })?;
    let name = rest[..over].trim().to_string();
    let tail = &rest[over + 6..];
    let (ring_part, body) = split_eq(ln, tail)?;
    let ring = ring_part.trim().to_string();
    let mut w = body.split_whitespace();
    let decl = match w.next() {
        Some("free") => {
            let n: usize = w
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| ParseError { line: ln, column: 1, message: "free needs a rank".into() })?;
            ModuleDecl::Free(n)
        }
        Some("cyclic") => {
            let rest: String = body.trim_start_matches("cyclic").trim().to_string();
            ModuleDecl::Cyclic(parse_paren_list(ln, &rest)?)
        }
        Some("cokernel") => {
            // rows follow, one per line, terminated by `]`
            if !body.trim_end().ends_with('[') {
                return err(ln, 1, "cokernel expects `[` and rows on following lines");
            }
            let mut rows = Vec::new();
            loop {
                match lines.next() {
                    None => return err(ln, 1, "unterminated matrix"),
                    Some((_, l)) if l == "]" => break,
                    Some((_, l)) => {
                        let row: Vec<String> = split_top_level(l)
                            .into_iter()
                            .map(|s| s.trim().to_string())
                            .collect();
                        rows.push(row);
                    }
                }
            }
            ModuleDecl::Cokernel(rows)
        }
        other => return err(ln, 1, format!("unknown module kind `{:?}`", other)),
    };
    sc.modules.push((name, ring, decl));
    Ok(())
}

fn parse_context(ln: usize, line: &str, sc: &mut Scenario) -> PResult<()> {
    // context NAME = RING (gens)
    let rest = line.trim_start_matches("context").trim();
    let (name, body) = split_eq(ln, rest)?;
    let body = body.trim();
    let open = body
        .find('(')
        .ok_or_else(|| ParseError { line: ln, column: 1, message: "expected generator list".into() })?;
    let ring = body[..open].trim().to_string();
    let gens = parse_paren_list(ln, &body[open..])?;
    if gens.is_empty() {
        return err(ln, 1, "context needs at least one generator");
    }
    sc.contexts.push((name, ring, gens));
    Ok(())
}

fn parse_diagonal(ln: usize, line: &str, sc: &mut Scenario) -> PResult<()> {
    // diagonal NAME = BASE [vars]
    let rest = line.trim_start_matches("diagonal").trim();
    let (name, body) = split_eq(ln, rest)?;
    let body = body.trim();
    let open = body
        .find('[')
        .ok_or_else(|| ParseError { line: ln, column: 1, message: "expected `[vars]`".into() })?;
    let base = body[..open].trim().to_string();
    let (vars, _) = parse_vars_and_order(ln, &body[open..])?;
    sc.diagonals.push((name, base, vars));
    Ok(())
}

fn parse_ind(ln: usize, line: &str, sc: &mut Scenario) -> PResult<()> {
    // indmodule NAME over RING = prufer P | denominators | sum P
    let rest = line.trim_start_matches("indmodule").trim();
    let over = rest
        .find(" over ")
        .ok_or_else(|| ParseError { line: ln, column: 1, message: "expected `over`".into() })?;
    let name = rest[..over].trim().to_string();
    let (ring_part, body) = split_eq(ln, &rest[over + 6..])?;
    let mut w = body.split_whitespace();
    let decl = match w.next() {
        Some("prufer") => IndDecl::Prufer(
            w.next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| ParseError { line: ln, column: 1, message: "prufer needs a prime".into() })?,
        ),
        Some("denominators") => IndDecl::Denominators,
        Some("sum") => IndDecl::Sum(
            w.next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| ParseError { line: ln, column: 1, message: "sum needs a prime".into() })?,
        ),
        other => return err(ln, 1, format!("unknown direct system `{:?}`", other)),
    };
    sc.inds.push((name, ring_part.trim().to_string(), decl));
    Ok(())
}

fn parse_check(ln: usize, line: &str, sc: &mut Scenario) -> PResult<()> {
    let rest = line.trim_start_matches("check").trim();
    let mut kind = String::new();
    let mut context = String::new();
    let mut args = Vec::new();
    let mut modules = Vec::new();
    let mut ind = None;
    let mut bound = None;
    let mut level = None;
    for (idx, tok) in tokenize_check(rest).into_iter().enumerate() {
        if idx == 0 {
            kind = tok;
            continue;
        }
        if idx == 1 {
            context = tok;
            continue;
        }
        if let Some(v) = tok.strip_prefix("bound=") {
            bound = Some(v.parse().map_err(|_| ParseError {
                line: ln,
                column: 1,
                message: format!("bad bound `{}`", v),
            })?);
        } else if let Some(v) = tok.strip_prefix("level=") {
            level = Some(v.parse().map_err(|_| ParseError {
                line: ln,
                column: 1,
                message: format!("bad level `{}`", v),
            })?);
        } else if let Some(v) = tok.strip_prefix("ind=") {
            ind = Some(v.to_string());
        } else if let Some(inner) = tok.strip_prefix("torsion(").and_then(|s| s.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split(',').map(|s| s.trim()).collect();
            if parts.len() != 2 {
                return err(ln, 1, "torsion(...) takes a module and a stage");
            }
            args.push(ComplexArg::Torsion(
                parts[0].to_string(),
                parts[1].parse().map_err(|_| ParseError {
                    line: ln,
                    column: 1,
                    message: "bad stage".into(),
                })?,
            ));
        } else if let Some(inner) =
            tok.strip_prefix("completion(").and_then(|s| s.strip_suffix(')'))
        {
            let parts: Vec<&str> = inner.split(',').map(|s| s.trim()).collect();
            if parts.len() != 2 {
                return err(ln, 1, "completion(...) takes a module and a stage");
            }
            args.push(ComplexArg::Completion(
                parts[0].to_string(),
                parts[1].parse().map_err(|_| ParseError {
                    line: ln,
                    column: 1,
                    message: "bad stage".into(),
                })?,
            ));
        } else {
            modules.push(tok.clone());
            args.push(ComplexArg::Module(tok));
        }
    }
    if kind.is_empty() || context.is_empty() {
        return err(ln, 1, "check needs a kind and a context");
    }
    sc.checks.push(CheckDecl { kind, context, args, modules, ind, bound, level });
    Ok(())
}

/// Whitespace-split, but keep parenthesized argument groups together.
fn tokenize_check(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(cur.clone());
                    cur.clear();
                }
            }
            _ => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

// ---- expression parsing ----

/// Parse an infix polynomial expression in the given ring.
pub fn parse_element(ring: &Ring, text: &str) -> Result<RingElement, String> {
    let tokens = lex(text)?;
    let mut p = ExprParser { ring, tokens, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("unexpected trailing input in `{}`", text));
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                out.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                out.push(Tok::Star);
            }
            '^' => {
                chars.next();
                out.push(Tok::Caret);
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            c if c.is_ascii_digit() => {
                let mut num = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        num.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Int(num.parse().unwrap()));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut id = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                        id.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(id));
            }
            other => return Err(format!("unexpected character `{}`", other)),
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    ring: &'a Ring,
    tokens: Vec<Tok>,
    pos: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<RingElement, String> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RingElement, String> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RingElement, String> {
        let base = match self.bump() {
            Some(Tok::Int(n)) => self.ring.from_bigint(&n),
            Some(Tok::Ident(id)) => self
                .ring
                .var_named(&id)
                .map_err(|e| format!("{}", e))?,
            Some(Tok::Minus) => {
                let f = self.factor()?;
                return Ok(f.neg());
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => e,
                    _ => return Err("missing `)`".into()),
                }
            }
            other => return Err(format!("unexpected token {:?}", other)),
        };
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.to_string().parse().map_err(|_| "bad exponent".to_string())?;
                    Ok(base.pow(e))
                }
                _ => Err("exponent must be an integer".into()),
            }
        } else {
            Ok(base)
        }
    }
}

// ---- resolution ----

pub fn resolve(sc: Scenario) -> PResult<ResolvedScenario> {
    let mut rings: BTreeMap<String, Ring> = BTreeMap::new();
    for (name, decl) in &sc.rings {
        let ring = match decl {
            RingDecl::Integers => Ring::integers(),
            RingDecl::Rationals => Ring::rationals(),
            RingDecl::PrimeField(p) => Ring::prime_field(*p)
                .map_err(|e| ParseError { line: 0, column: 0, message: format!("ring {}: {}", name, e) })?,
            RingDecl::Zmod(m) => Ring::integers_mod(m)
                .map_err(|e| ParseError { line: 0, column: 0, message: format!("ring {}: {}", name, e) })?,
            RingDecl::Poly { coeff, vars, order } => {
                let base = rings.get(coeff).ok_or_else(|| ParseError {
                    line: 0,
                    column: 0,
                    message: format!("ring {}: undeclared coefficient ring `{}`", name, coeff),
                })?;
                let vrefs: Vec<&str> = vars.iter().map(|v| v.as_str()).collect();
                Ring::poly(base, &vrefs, *order)
                    .map_err(|e| ParseError { line: 0, column: 0, message: format!("ring {}: {}", name, e) })?
            }
            RingDecl::Quotient { base, gens } => {
                let b = rings.get(base).ok_or_else(|| ParseError {
                    line: 0,
                    column: 0,
                    message: format!("ring {}: undeclared base ring `{}`", name, base),
                })?;
                let mut elems = Vec::new();
                for g in gens {
                    elems.push(parse_element(b, g).map_err(|m| ParseError {
                        line: 0,
                        column: 0,
                        message: format!("ring {}: {}", name, m),
                    })?);
                }
                Ring::quotient(b, &elems)
                    .map_err(|e| ParseError { line: 0, column: 0, message: format!("ring {}: {}", name, e) })?
            }
        };
        rings.insert(name.clone(), ring);
    }

    let mut modules: BTreeMap<String, FpModule> = BTreeMap::new();
    for (name, ring_name, decl) in &sc.modules {
        let ring = rings.get(ring_name).ok_or_else(|| ParseError {
            line: 0,
            column: 0,
            message: format!("module {}: undeclared ring `{}`", name, ring_name),
        })?;
        let module = match decl {
            ModuleDecl::Free(n) => FpModule::free(ring, *n),
            ModuleDecl::Cyclic(gens) => {
                let mut elems = Vec::new();
                for g in gens {
                    elems.push(parse_element(ring, g).map_err(|m| ParseError {
                        line: 0,
                        column: 0,
                        message: format!("module {}: {}", name, m),
                    })?);
                }
                FpModule::cyclic(ring, &elems)
            }
            ModuleDecl::Cokernel(rows) => {
                let nrows = rows.len();
                let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
                for r in rows {
                    if r.len() != ncols {
                        return err(0, 0, format!("module {}: ragged matrix rows", name));
                    }
                }
                let mut data = Vec::with_capacity(nrows * ncols);
                for row in rows {
                    for cell in row {
                        data.push(parse_element(ring, cell).map_err(|m| ParseError {
                            line: 0,
                            column: 0,
                            message: format!("module {}: {}", name, m),
                        })?);
                    }
                }
                let m = Matrix::new(ring.clone(), nrows, ncols, data).map_err(|e| ParseError {
                    line: 0,
                    column: 0,
                    message: format!("module {}: {}", name, e),
                })?;
                FpModule::new(m)
            }
        };
        modules.insert(name.clone(), module);
    }

    let mut contexts = BTreeMap::new();
    for (name, ring_name, gens) in &sc.contexts {
        let ring = rings.get(ring_name).ok_or_else(|| ParseError {
            line: 0,
            column: 0,
            message: format!("context {}: undeclared ring `{}`", name, ring_name),
        })?;
        let mut elems = Vec::new();
        for g in gens {
            elems.push(parse_element(ring, g).map_err(|m| ParseError {
                line: 0,
                column: 0,
                message: format!("context {}: {}", name, m),
            })?);
        }
        let ctx = adic_core::adic::AdicContext::new(ring, elems).map_err(|e| ParseError {
            line: 0,
            column: 0,
            message: format!("context {}: {}", name, e),
        })?;
        contexts.insert(name.clone(), ctx);
    }

    let mut diagonals = BTreeMap::new();
    for (name, base_name, vars) in &sc.diagonals {
        let base = rings.get(base_name).ok_or_else(|| ParseError {
            line: 0,
            column: 0,
            message: format!("diagonal {}: undeclared ring `{}`", name, base_name),
        })?;
        let vrefs: Vec<&str> = vars.iter().map(|v| v.as_str()).collect();
        let d = adic_core::adic::DiagonalContext::new(base, &vrefs, MonomialOrder::GrevLex)
            .map_err(|e| ParseError {
                line: 0,
                column: 0,
                message: format!("diagonal {}: {}", name, e),
            })?;
        diagonals.insert(name.clone(), d);
    }

    let mut inds = BTreeMap::new();
    for (name, ring_name, decl) in &sc.inds {
        let ring = rings.get(ring_name).ok_or_else(|| ParseError {
            line: 0,
            column: 0,
            message: format!("indmodule {}: undeclared ring `{}`", name, ring_name),
        })?;
        let (sys, label) = match decl {
            IndDecl::Prufer(p) => (
                adic_core::theorems::prufer_system(ring, *p),
                format!("prufer {}", p),
            ),
            IndDecl::Denominators => (
                adic_core::theorems::rationals_system(ring),
                "denominators".to_string(),
            ),
            IndDecl::Sum(p) => (
                adic_core::theorems::repeated_sum_system(ring, *p),
                format!("sum {}", p),
            ),
        };
        inds.insert(name.clone(), (sys, label));
    }

    // validate check references
    for (i, c) in sc.checks.iter().enumerate() {
        let ctx_ok = contexts.contains_key(&c.context) || diagonals.contains_key(&c.context);
        if !ctx_ok {
            return err(0, 0, format!("check #{}: undeclared context `{}`", i + 1, c.context));
        }
        for a in &c.args {
            let name = match a {
                ComplexArg::Module(n) | ComplexArg::Torsion(n, _) | ComplexArg::Completion(n, _) => n,
            };
            if !modules.contains_key(name) && !inds.contains_key(name) {
                return err(0, 0, format!("check #{}: undeclared module `{}`", i + 1, name));
            }
        }
        if let Some(w) = &c.ind {
            if !inds.contains_key(w) {
                return err(0, 0, format!("check #{}: undeclared direct system `{}`", i + 1, w));
            }
        }
    }

    let _ = rings;
    Ok(ResolvedScenario { scenario: sc, modules, contexts, diagonals, inds })
}

// ---- printing ----

pub fn print_scenario(sc: &Scenario) -> String {
    let mut out = String::new();
    for (name, decl) in &sc.rings {
        match decl {
            RingDecl::Integers => out.push_str(&format!("ring {} = integers\n", name)),
            RingDecl::Rationals => out.push_str(&format!("ring {} = rationals\n", name)),
            RingDecl::PrimeField(p) => out.push_str(&format!("ring {} = gf {}\n", name, p)),
            RingDecl::Zmod(m) => out.push_str(&format!("ring {} = zmod {}\n", name, m)),
            RingDecl::Poly { coeff, vars, order } => {
                let o = match order {
                    MonomialOrder::Lex => "lex",
                    MonomialOrder::GrevLex => "grevlex",
                };
                out.push_str(&format!("ring {} = poly {} [{}] {}\n", name, coeff, vars.join(", "), o));
            }
            RingDecl::Quotient { base, gens } => {
                out.push_str(&format!("ring {} = quotient {} ({})\n", name, base, gens.join(", ")));
            }
        }
    }
    for (name, ring, decl) in &sc.modules {
        match decl {
            ModuleDecl::Free(n) => out.push_str(&format!("module {} over {} = free {}\n", name, ring, n)),
            ModuleDecl::Cyclic(gens) => out.push_str(&format!(
                "module {} over {} = cyclic ({})\n",
                name,
                ring,
                gens.join(", ")
            )),
            ModuleDecl::Cokernel(rows) => {
                out.push_str(&format!("module {} over {} = cokernel [\n", name, ring));
                for row in rows {
                    out.push_str(&format!("  {}\n", row.join(", ")));
                }
                out.push_str("]\n");
            }
        }
    }
    for (name, ring, gens) in &sc.contexts {
        out.push_str(&format!("context {} = {} ({})\n", name, ring, gens.join(", ")));
    }
    for (name, base, vars) in &sc.diagonals {
        out.push_str(&format!("diagonal {} = {} [{}]\n", name, base, vars.join(", ")));
    }
    for (name, ring, decl) in &sc.inds {
        let d = match decl {
            IndDecl::Prufer(p) => format!("prufer {}", p),
            IndDecl::Denominators => "denominators".to_string(),
            IndDecl::Sum(p) => format!("sum {}", p),
        };
        out.push_str(&format!("indmodule {} over {} = {}\n", name, ring, d));
    }
    for c in &sc.checks {
        let mut parts = vec![format!("check {} {}", c.kind, c.context)];
        for a in &c.args {
            match a {
                ComplexArg::Module(m) => parts.push(m.clone()),
                ComplexArg::Torsion(m, s) => parts.push(format!("torsion({}, {})", m, s)),
                ComplexArg::Completion(m, s) => parts.push(format!("completion({}, {})", m, s)),
            }
        }
        if let Some(w) = &c.ind {
            parts.push(format!("ind={}", w));
        }
        if let Some(b) = c.bound {
            parts.push(format!("bound={}", b));
        }
        if let Some(l) = c.level {
            parts.push(format!("level={}", l));
        }
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

/// Print a presentation matrix in the scenario grammar, for copy-paste
/// reproduction of witnesses.
pub fn print_module(name: &str, ring_name: &str, m: &FpModule) -> String {
    let mut out = format!("module {} over {} = cokernel [\n", name, ring_name);
    let p = m.presentation();
    for i in 0..p.rows() {
        let row: Vec<String> = (0..p.cols()).map(|j| p.at(i, j).to_string()).collect();
        out.push_str(&format!("  {}\n", row.join(", ")));
    }
    out.push_str("]");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
# sample scenario
ring Z = integers
ring Q = rationals
ring P = poly Q [x, y] grevlex
ring R = quotient P (x^2)
module M over P = cokernel [
  x^2, x*y
  0, y
]
module C over P = cyclic (y - x^2)
module F over Z = free 2
context cz = Z (2)
context cp = P (x, y)
diagonal d = Q [x, y]
indmodule W over Z = prufer 2
check wpr cz bound=4
check psi cz F level=3
check serre d C C bound=2
check mgm-tor cz torsion(F, 2) bound=4
check cofiniteness cz ind=W bound=4
"#;

    #[test]
    fn parse_sample() {
        let sc = parse_scenario(SAMPLE).unwrap();
        assert_eq!(sc.rings.len(), 4);
        assert_eq!(sc.modules.len(), 3);
        assert_eq!(sc.contexts.len(), 2);
        assert_eq!(sc.checks.len(), 5);
        let rs = resolve(sc).unwrap();
        assert_eq!(rs.modules["M"].gens(), 2);
        assert_eq!(rs.modules["F"].gens(), 2);
    }

    #[test]
    fn undeclared_reference_is_an_error() {
        let bad = "ring Z = integers\ncontext c = Z (2)\ncheck wpr c bound=4\ncheck psi c NOPE level=2\n";
        let sc = parse_scenario(bad).unwrap();
        let e = match resolve(sc) {
            Err(e) => e,
            Ok(_) => panic!("expected an undeclared-reference error"),
        };
        assert!(e.message.contains("NOPE"), "{}", e.message);
    }

    #[test]
    fn syntax_error_carries_location() {
        let bad = "ring Z integers\n";
        let e = parse_scenario(bad).unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn print_parse_roundtrip() {
        let sc = parse_scenario(SAMPLE).unwrap();
        let printed = print_scenario(&sc);
        let sc2 = parse_scenario(&printed).unwrap();
        assert_eq!(sc, sc2);
        // printing is a fixed point after one round
        assert_eq!(printed, print_scenario(&sc2));
    }

    #[test]
    fn expression_parser_handles_precedence() {
        let q = Ring::rationals();
        let p = Ring::poly(&q, &["x", "y"], MonomialOrder::GrevLex).unwrap();
        let x = p.var(0).unwrap();
        let y = p.var(1).unwrap();
        let e = parse_element(&p, "y - x^2").unwrap();
        assert_eq!(e, y.sub(&x.mul(&x)));
        let e = parse_element(&p, "2*x*y + x^2 - (y + x)*y").unwrap();
        let expect = x
            .mul(&y)
            .mul(&p.from_int(2))
            .add(&x.mul(&x))
            .sub(&y.add(&x).mul(&y));
        assert_eq!(e, expect);
        assert!(parse_element(&p, "z + 1").is_err());
    }
}
