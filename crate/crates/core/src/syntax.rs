//! Lexer and recursive-descent parsers shared by every textual format:
//! formulas, statements, substitution and instantiation lists.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::formula::{Connective, Formula, Instantiation, Substitution, Symbol};
use crate::statement::{Atom, Sign, Statement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }

    /// Shifts the position of an error raised while parsing a fragment that
    /// starts at `line`:`col` of some larger input.
    pub fn offset(mut self, line: usize, col: usize) -> Self {
        if self.line == 1 {
            self.col += col - 1;
        }
        self.line += line - 1;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Assign,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Plus,
    Minus,
    Implies,
    Slash,
    Turnstile,
    // Unicode spellings of the meta-connectives.
    MAnd,
    MOr,
    MNot,
    MTop,
    MBot,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Eof => f.write_str("end of input"),
            other => {
                let s = match other {
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::Comma => ",",
                    Tok::Semi => ";",
                    Tok::Colon => ":",
                    Tok::Assign => ":=",
                    Tok::Tilde => "~",
                    Tok::Amp => "&",
                    Tok::Bar => "|",
                    Tok::Arrow => "->",
                    Tok::DArrow => "<->",
                    Tok::Plus => "+",
                    Tok::Minus => "-",
                    Tok::Implies => "=>",
                    Tok::Slash => "/",
                    Tok::Turnstile => "|-",
                    Tok::MAnd => "⩓",
                    Tok::MOr => "⩔",
                    Tok::MNot => "¬ₘ",
                    Tok::MTop => "⊤",
                    Tok::MBot => "⊥",
                    _ => unreachable!(),
                };
                write!(f, "`{s}`")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Byte offsets into the source.
    pub start: usize,
    pub end: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut iter = src.char_indices().peekable();
    while let Some(&(start, c)) = iter.peek() {
        let (tl, tc) = (line, col);
        let mut advance = |n: usize, iter: &mut std::iter::Peekable<std::str::CharIndices>| {
            for _ in 0..n {
                if let Some((_, ch)) = iter.next() {
                    if ch == '\n' {
                        line += 1;
                        col = 1;
                    } else {
                        col += 1;
                    }
                }
            }
        };
        if c.is_whitespace() {
            advance(1, &mut iter);
            continue;
        }
        if c == '#' {
            while let Some(&(_, ch)) = iter.peek() {
                if ch == '\n' {
                    break;
                }
                advance(1, &mut iter);
            }
            continue;
        }
        let rest = &src[start..];
        let fixed: &[(&str, Tok)] = &[
            ("<->", Tok::DArrow),
            ("->", Tok::Arrow),
            ("=>", Tok::Implies),
            (":=", Tok::Assign),
            ("|-", Tok::Turnstile),
            ("¬ₘ", Tok::MNot),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("{", Tok::LBrace),
            ("}", Tok::RBrace),
            (",", Tok::Comma),
            (";", Tok::Semi),
            (":", Tok::Colon),
            ("~", Tok::Tilde),
            ("¬", Tok::Tilde),
            ("&", Tok::Amp),
            ("∧", Tok::Amp),
            ("|", Tok::Bar),
            ("∨", Tok::Bar),
            ("→", Tok::Arrow),
            ("≡", Tok::DArrow),
            ("+", Tok::Plus),
            ("⊕", Tok::Plus),
            ("-", Tok::Minus),
            ("⊖", Tok::Minus),
            ("⟹", Tok::Implies),
            ("/", Tok::Slash),
            ("⊢", Tok::Turnstile),
            ("⩓", Tok::MAnd),
            ("⩔", Tok::MOr),
            ("⊤", Tok::MTop),
            ("⊥", Tok::MBot),
        ];
        if let Some((text, tok)) = fixed.iter().find(|(text, _)| rest.starts_with(text)) {
            let n = text.chars().count();
            advance(n, &mut iter);
            out.push(Token { tok: tok.clone(), line: tl, col: tc, start, end: start + text.len() });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            let word = &rest[..len];
            advance(word.chars().count(), &mut iter);
            out.push(Token {
                tok: Tok::Ident(word.to_string()),
                line: tl,
                col: tc,
                start,
                end: start + len,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let len = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
            let n = rest[..len]
                .parse()
                .map_err(|_| ParseError::new(tl, tc, "number too large"))?;
            advance(len, &mut iter);
            out.push(Token { tok: Tok::Num(n), line: tl, col: tc, start, end: start + len });
            continue;
        }
        return Err(ParseError::new(tl, tc, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::Eof, line, col, start: src.len(), end: src.len() });
    Ok(out)
}

const KEYWORDS: [&str; 5] = ["TOP", "BOT", "AND", "OR", "NOT"];

fn is_var_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase())
}

fn is_meta_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase()) && !KEYWORDS.contains(&s)
}

/// A cursor over a token stream.
pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    pub fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError::new(t.line, t.col, message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.to_string()))
        }
    }

    pub fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.at_keyword(kw) {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub fn number(&mut self) -> Result<usize, ParseError> {
        match *self.peek() {
            Tok::Num(n) => {
                self.next();
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    pub fn at_end(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    /// Whether the current token is immediately followed, without spacing,
    /// by an opening parenthesis.
    fn call_follows(&self) -> bool {
        let next = &self.toks[(self.pos + 1).min(self.toks.len() - 1)];
        next.tok == Tok::LParen && next.start == self.toks[self.pos].end
    }

    pub fn formula(&mut self) -> Result<Formula, ParseError> {
        self.formula_eqv()
    }

    fn formula_eqv(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.formula_imp()?;
        while self.eat(&Tok::DArrow) {
            let rhs = self.formula_imp()?;
            lhs = Formula::eqv(lhs, rhs);
        }
        Ok(lhs)
    }

    fn formula_imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.formula_or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula_imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn formula_or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.formula_and()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.formula_and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn formula_and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.formula_unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.formula_unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn formula_unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.next();
                Ok(Formula::not(self.formula_unary()?))
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) if self.call_follows() && !KEYWORDS.contains(&name.as_str()) => {
                self.next();
                self.expect(&Tok::LParen)?;
                let mut args = vec![self.formula()?];
                while self.eat(&Tok::Comma) {
                    args.push(self.formula()?);
                }
                self.expect(&Tok::RParen)?;
                let n = args.len();
                Ok(Formula::app(Connective::Named(Symbol::new(&name), n), args))
            }
            Tok::Ident(name) if is_var_name(&name) => {
                self.next();
                Ok(Formula::var(&name))
            }
            Tok::Ident(name) if is_meta_name(&name) => {
                self.next();
                Ok(Formula::meta(&name))
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    pub fn atom(&mut self) -> Result<Atom, ParseError> {
        let sign = match self.peek() {
            Tok::Plus => Sign::Asserted,
            Tok::Minus => Sign::Rejected,
            _ => return Err(self.unexpected("`+` or `-`")),
        };
        self.next();
        Ok(Atom::new(sign, self.formula()?))
    }

    pub fn statement(&mut self) -> Result<Statement, ParseError> {
        let lhs = self.statement_or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.statement()?;
            return Ok(Statement::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn eat_or(&mut self) -> bool {
        if self.at_keyword("OR") {
            self.next();
            true
        } else {
            self.eat(&Tok::MOr)
        }
    }

    fn eat_and(&mut self) -> bool {
        if self.at_keyword("AND") {
            self.next();
            true
        } else {
            self.eat(&Tok::MAnd)
        }
    }

    fn statement_or(&mut self) -> Result<Statement, ParseError> {
        let mut lhs = self.statement_and()?;
        while self.eat_or() {
            let rhs = self.statement_and()?;
            lhs = Statement::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn statement_and(&mut self) -> Result<Statement, ParseError> {
        let mut lhs = self.statement_unary()?;
        while self.eat_and() {
            let rhs = self.statement_unary()?;
            lhs = Statement::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn statement_unary(&mut self) -> Result<Statement, ParseError> {
        match self.peek().clone() {
            Tok::Plus | Tok::Minus => Ok(Statement::atom(self.atom()?)),
            Tok::MNot => {
                self.next();
                Ok(Statement::not(self.statement_unary()?))
            }
            Tok::MTop => {
                self.next();
                Ok(Statement::top())
            }
            Tok::MBot => {
                self.next();
                Ok(Statement::bot())
            }
            Tok::LParen => {
                self.next();
                let s = self.statement()?;
                self.expect(&Tok::RParen)?;
                Ok(s)
            }
            Tok::Ident(kw) if kw == "NOT" => {
                self.next();
                Ok(Statement::not(self.statement_unary()?))
            }
            Tok::Ident(kw) if kw == "TOP" => {
                self.next();
                Ok(Statement::top())
            }
            Tok::Ident(kw) if kw == "BOT" => {
                self.next();
                Ok(Statement::bot())
            }
            _ => Err(self.unexpected("a statement")),
        }
    }

    /// `{ name := value, ... }` with a caller-supplied value parser.
    pub fn bindings<T>(
        &mut self,
        mut value: impl FnMut(&mut Parser) -> Result<T, ParseError>,
    ) -> Result<Vec<(String, T)>, ParseError> {
        self.expect(&Tok::LBrace)?;
        let mut out: Vec<(String, T)> = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            let name = self.ident()?;
            if out.iter().any(|(n, _)| *n == name) {
                return Err(self.error(format!("`{name}` bound twice")));
            }
            self.expect(&Tok::Assign)?;
            out.push((name, value(self)?));
            if self.eat(&Tok::RBrace) {
                return Ok(out);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    pub fn substitution(&mut self) -> Result<Substitution, ParseError> {
        let mut pairs = Vec::new();
        for (name, f) in self.bindings(|p| p.formula())? {
            if !is_var_name(&name) {
                return Err(self.error(format!("`{name}` is not a propositional variable")));
            }
            pairs.push((Symbol::new(&name), f));
        }
        Ok(Substitution::from_pairs(pairs))
    }

    pub fn instantiation(&mut self) -> Result<Instantiation, ParseError> {
        let mut map = BTreeMap::new();
        for (name, f) in self.bindings(|p| p.formula())? {
            if !is_meta_name(&name) {
                return Err(self.error(format!("`{name}` is not a metavariable")));
            }
            map.insert(Symbol::new(&name), f);
        }
        Ok(Instantiation::new(map))
    }

    /// `{ +A, -B, ... }`
    pub fn atom_set(&mut self) -> Result<Vec<Atom>, ParseError> {
        self.expect(&Tok::LBrace)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            out.push(self.atom()?);
            if self.eat(&Tok::RBrace) {
                return Ok(out);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    /// Looks ahead for `name :=` without consuming anything.
    pub fn at_binding(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Assign
    }
}

fn parse_all<T>(
    src: &str,
    f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let mut p = Parser::new(src)?;
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    parse_all(src, |p| p.formula())
}

pub fn parse_statement(src: &str) -> Result<Statement, ParseError> {
    parse_all(src, |p| p.statement())
}

pub fn parse_atom(src: &str) -> Result<Atom, ParseError> {
    parse_all(src, |p| p.atom())
}

pub fn parse_substitution(src: &str) -> Result<Substitution, ParseError> {
    parse_all(src, |p| p.substitution())
}
