//! Text formats for derivations (`.mld`) and calculi (`.mlc`).
//!
//! ```text
//! system lukasiewicz
//! premises { +~p }
//! 1: +~p ; premise
//! 2: +~(p -> p) ; sb 1 {p:=p -> p}
//! ```
//!
//! ```text
//! system lukasiewicz
//! signature -> ~
//! axiom anti: -p
//! rule mp: +X AND +(X -> Y) => +Y
//! ```
//!
//! Both formats are line-oriented; `#` starts a comment.

use std::fmt::Write;

use super::store::valid_lemma_name;
use super::{DeductiveSystem, Derivation, Justification, MetaAxiom, MetaBinding};
use crate::formula::{Connective, Signature, Symbol};
use crate::syntax::{ParseError, Parser};

/// A parsed derivation file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationFile {
    pub system: String,
    pub derivation: Derivation,
}

/// Non-blank lines with comments stripped, with 1-based line numbers and
/// the column where the kept text starts.
pub(crate) fn content_lines(src: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    src.lines().enumerate().filter_map(|(i, raw)| {
        let text = raw.split('#').next().unwrap_or("");
        let trimmed = text.trim_start();
        let col = text.len() - trimmed.len() + 1;
        let trimmed = trimmed.trim_end();
        (!trimmed.is_empty()).then_some((i + 1, col, trimmed))
    })
}

pub(crate) fn fragment<T>(
    text: &str,
    line: usize,
    col: usize,
    f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let run = || {
        let mut p = Parser::new(text)?;
        let v = f(&mut p)?;
        p.finish()?;
        Ok(v)
    };
    run().map_err(|e: ParseError| e.offset(line, col))
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim_start()),
        None => (s, ""),
    }
}

fn header<'a>(
    lines: &mut std::iter::Peekable<impl Iterator<Item = (usize, usize, &'a str)>>,
) -> Result<String, ParseError> {
    match lines.next() {
        Some((line, col, text)) => {
            let (kw, name) = split_word(text);
            if kw != "system" || name.is_empty() || name.contains(char::is_whitespace) {
                return Err(ParseError::new(line, col, "expected `system <name>`"));
            }
            Ok(name.to_string())
        }
        None => Err(ParseError::new(1, 1, "expected `system <name>`")),
    }
}

pub fn parse_derivation(src: &str) -> Result<DerivationFile, ParseError> {
    let mut lines = content_lines(src).peekable();
    let system = header(&mut lines)?;
    let mut d = Derivation::default();
    if let Some(&(line, col, text)) = lines.peek() {
        if split_word(text).0 == "premises" {
            lines.next();
            d.premises = fragment(text, line, col, |p| {
                p.expect_keyword("premises")?;
                p.expect(&crate::syntax::Tok::LBrace)?;
                let mut out = Vec::new();
                if p.eat(&crate::syntax::Tok::RBrace) {
                    return Ok(out);
                }
                loop {
                    out.push(p.statement()?);
                    if p.eat(&crate::syntax::Tok::RBrace) {
                        return Ok(out);
                    }
                    p.expect(&crate::syntax::Tok::Comma)?;
                }
            })?;
        }
    }
    for (line, col, text) in lines {
        let err = |c: usize, m: &str| ParseError::new(line, col + c, m);
        let (num, rest) = text.split_once(':').ok_or_else(|| err(0, "expected `n: statement ; justification`"))?;
        let n: usize = num.trim().parse().map_err(|_| err(0, "expected a step number"))?;
        if n != d.len() + 1 {
            return Err(err(0, &format!("expected step {}, found {n}", d.len() + 1)));
        }
        let (stmt_src, just_src) = rest.split_once(';').ok_or_else(|| err(num.len(), "missing `;` before the justification"))?;
        let stmt_col = col + num.len() + 1;
        let statement = fragment(stmt_src, line, stmt_col, |p| p.statement())?;
        let just_col = stmt_col + stmt_src.len() + 1;
        let justification = parse_justification(just_src, line, just_col)?;
        d.push(statement, justification);
    }
    Ok(DerivationFile { system, derivation: d })
}

fn parse_justification(src: &str, line: usize, col: usize) -> Result<Justification, ParseError> {
    let err = |m: String| ParseError::new(line, col, m);
    let (kind, rest) = split_word(src.trim());
    let (arg, tail) = split_word(rest);
    let tail_col = col + src.find(tail).unwrap_or(0);
    let number = |s: &str| s.parse::<usize>().map_err(|_| err(format!("expected a step number, found `{s}`")));
    let no_tail = |t: &str| if t.is_empty() { Ok(()) } else { Err(err(format!("unexpected `{t}`"))) };
    match kind {
        "meta" => {
            let m: MetaAxiom = arg.parse().map_err(err)?;
            let mut binding = MetaBinding::new();
            if !tail.is_empty() {
                for (k, v) in fragment(tail, line, tail_col, |p| p.bindings(|p| p.statement()))? {
                    binding.insert(Symbol::new(&k), v);
                }
            }
            Ok(Justification::MetaAxiom(m, binding))
        }
        "axiom" => {
            no_tail(tail)?;
            if arg.is_empty() {
                return Err(err("expected an axiom id".into()));
            }
            Ok(Justification::Axiom(arg.to_string()))
        }
        "rule" => {
            if arg.is_empty() {
                return Err(err("expected a rule id".into()));
            }
            let inst = if tail.is_empty() {
                Default::default()
            } else {
                fragment(tail, line, tail_col, |p| p.instantiation())?
            };
            Ok(Justification::Rule(arg.to_string(), inst))
        }
        "sb" | "rs" => {
            let n = number(arg)?;
            let s = if tail.is_empty() {
                Default::default()
            } else {
                fragment(tail, line, tail_col, |p| p.substitution())?
            };
            Ok(if kind == "sb" { Justification::Sb(n, s) } else { Justification::Rs(n, s) })
        }
        "mmp" => {
            let (second, extra) = split_word(tail);
            no_tail(extra)?;
            Ok(Justification::Mmp(number(arg)?, number(second)?))
        }
        "premise" => {
            no_tail(rest)?;
            Ok(Justification::Premise)
        }
        "lemma" => {
            no_tail(tail)?;
            if !valid_lemma_name(arg) {
                return Err(err(format!("invalid lemma name `{arg}`")));
            }
            Ok(Justification::Lemma(arg.to_string()))
        }
        other => Err(err(format!("unknown justification `{other}`"))),
    }
}

fn write_justification(out: &mut String, j: &Justification) {
    match j {
        Justification::MetaAxiom(m, b) => {
            write!(out, "meta {m}").unwrap();
            if !b.is_empty() {
                let parts: Vec<String> = b.iter().map(|(k, v)| format!("{k}:={v}")).collect();
                write!(out, " {{{}}}", parts.join(", ")).unwrap();
            }
        }
        Justification::Axiom(id) => write!(out, "axiom {id}").unwrap(),
        Justification::Rule(id, inst) if inst.is_empty() => write!(out, "rule {id}").unwrap(),
        Justification::Rule(id, inst) => write!(out, "rule {id} {inst}").unwrap(),
        Justification::Sb(n, s) => write!(out, "sb {n} {s}").unwrap(),
        Justification::Rs(n, s) => write!(out, "rs {n} {s}").unwrap(),
        Justification::Mmp(a, b) => write!(out, "mmp {a} {b}").unwrap(),
        Justification::Premise => out.push_str("premise"),
        Justification::Lemma(name) => write!(out, "lemma {name}").unwrap(),
    }
}

pub fn print_derivation(system: &str, d: &Derivation) -> String {
    let mut out = format!("system {system}\n");
    if !d.premises.is_empty() {
        let parts: Vec<String> = d.premises.iter().map(|p| p.to_string()).collect();
        writeln!(out, "premises {{ {} }}", parts.join(", ")).unwrap();
    }
    for (i, step) in d.steps.iter().enumerate() {
        write!(out, "{}: {} ; ", i + 1, step.statement).unwrap();
        write_justification(&mut out, &step.justification);
        out.push('\n');
    }
    out
}

pub fn parse_calculus(src: &str) -> Result<DeductiveSystem, ParseError> {
    let mut lines = content_lines(src).peekable();
    let name = header(&mut lines)?;
    let mut ds = DeductiveSystem::new(&name, Signature::default());
    let mut seen_signature = false;
    let mut seen_items = false;
    for (line, col, text) in lines {
        let err = |m: String| ParseError::new(line, col, m);
        let (kw, rest) = split_word(text);
        match kw {
            "signature" => {
                if seen_signature || seen_items {
                    return Err(err("the signature must come once, before axioms and rules".into()));
                }
                seen_signature = true;
                let mut cs = Vec::new();
                for word in rest.split_whitespace() {
                    let c = match word.split_once('/') {
                        Some((n, a)) => {
                            let arity = a.parse().map_err(|_| err(format!("bad arity in `{word}`")))?;
                            Connective::Named(Symbol::new(n), arity)
                        }
                        None => Connective::from_symbol(word)
                            .ok_or_else(|| err(format!("unknown connective `{word}`")))?,
                    };
                    cs.push(c);
                }
                ds.signature = Signature::new(cs).map_err(|e| err(e.to_string()))?;
            }
            "option" => match rest {
                "no-rs" => ds.reverse_substitution = false,
                other => return Err(err(format!("unknown option `{other}`"))),
            },
            "axiom" | "rule" => {
                seen_items = true;
                let (id, body) = rest
                    .split_once(':')
                    .ok_or_else(|| err(format!("expected `{kw} <id>: <statement>`")))?;
                let id = id.trim();
                if id.is_empty() || id.contains(char::is_whitespace) {
                    return Err(err(format!("bad id `{id}`")));
                }
                let body_col = col + text.find(':').unwrap_or(0) + 1;
                let a = fragment(body, line, body_col, |p| p.statement())?;
                let added = if kw == "axiom" { ds.add_axiom(id, a) } else { ds.add_rule(id, a) };
                added.map_err(|e| err(e.to_string()))?;
            }
            other => return Err(err(format!("unknown section `{other}`"))),
        }
    }
    Ok(ds)
}

pub fn print_calculus(ds: &DeductiveSystem) -> String {
    let mut out = format!("system {}\nsignature {}\n", ds.name, ds.signature);
    if !ds.reverse_substitution {
        out.push_str("option no-rs\n");
    }
    for (id, a) in &ds.axioms {
        writeln!(out, "axiom {id}: {a}").unwrap();
    }
    for (id, r) in &ds.rules {
        writeln!(out, "rule {id}: {r}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deduction::{check_derivation, LemmaStore};

    const CALC: &str = "\
system demo   # a comment
signature -> ~
option no-rs
axiom anti: -p
axiom ax2: +((~p -> p) -> p)
rule mp: +X AND +(X -> Y) => +Y
";

    #[test]
    fn calculus_round_trip() {
        let ds = parse_calculus(CALC).unwrap();
        assert_eq!(ds.name, "demo");
        assert!(!ds.reverse_substitution);
        assert_eq!(ds.axioms.len(), 2);
        assert_eq!(parse_calculus(&print_calculus(&ds)).unwrap(), ds);
        let e = parse_calculus("system x\naxiom a: +(p & q)\n").unwrap_or_else(|_| panic!());
        assert_eq!(e.axioms.len(), 1);
        assert!(parse_calculus("system x\nsignature ->\naxiom a: +(p & q)\n").is_err());
    }

    #[test]
    fn derivation_round_trip() {
        let src = "\
system demo
premises { +~p, -q }
1: +~p ; premise
2: +~(p -> p) ; sb 1 {p:=p -> p}
3: +~p => (-q => +~p) ; meta K1 {a:=+~p}
4: -q => +~p ; mmp 3 1
5: +~(p -> p) ; lemma foo-1.x
";
        let file = parse_derivation(src).unwrap();
        assert_eq!(file.system, "demo");
        assert_eq!(file.derivation.premises.len(), 2);
        assert_eq!(file.derivation.len(), 5);
        let printed = print_derivation("demo", &file.derivation);
        assert_eq!(parse_derivation(&printed).unwrap(), file);
        let ds = parse_calculus(CALC).unwrap();
        let mut d = file.derivation.clone();
        d.steps.pop();
        assert_eq!(check_derivation(&ds, &d, &LemmaStore::new()), Ok(()));
    }

    #[test]
    fn errors_carry_locations() {
        let e = parse_derivation("system s\n1: +p ; premise\n3: +p ; premise\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_derivation("system s\n1: +(p -> ; premise\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.col > 3);
        assert!(parse_derivation("system s\n1: +p ; frobnicate\n").is_err());
        assert!(parse_derivation("1: +p ; premise\n").is_err());
    }
}
