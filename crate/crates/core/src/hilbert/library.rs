//! Hilbert-style lemma libraries over the two implicational bases.
//!
//! Lemmas are schemata: formulas whose variables are placeholders. Their
//! proofs are lists of lines, each an axiom or earlier-lemma instance or a
//! modus ponens step. The bootstrap lemmas come from the `.hil` files
//! (found by condensed detachment) and the `.hyp` files (written with
//! hypotheses and compiled here by the deduction theorem). The lemmas that
//! lift a fact into a context of `n` hypotheses are generated on demand.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::formula::{Formula, Symbol};
use crate::syntax::parse_formula;
use crate::template::{bot_template, instantiate, match_template, top_template, Args};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Basis {
    /// `(p→q)→((q→r)→(p→r))`, `(¬p→p)→p`, `p→(¬p→q)`.
    Lukasiewicz,
    /// Kleene's ten schemata, three axioms for `≡`, and at the meta-level
    /// the two axioms for `⊤` and `⊥`.
    Kleene,
}

/// Axiom numbers of the meta-constant axioms in the Kleene basis.
pub(crate) const AX_TOP: usize = 14;
pub(crate) const AX_BOT: usize = 15;

const KLEENE_EQV: [&str; 3] = [
    "(p <-> q) -> (p -> q)",
    "(p <-> q) -> (q -> p)",
    "(p -> q) -> ((q -> p) -> (p <-> q))",
];

const LUKASIEWICZ_AXIOMS: [&str; 3] = [
    "(p -> q) -> ((q -> r) -> (p -> r))",
    "(~p -> p) -> p",
    "p -> (~p -> q)",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Just {
    /// 1-based axiom number of the basis.
    Ax(usize),
    Lem(String),
    /// 0-based line indices of major and minor premise.
    Mp(usize, usize),
    Hyp,
}

#[derive(Clone, Debug)]
pub(crate) struct Line {
    pub formula: Formula,
    pub just: Just,
}

#[derive(Debug)]
pub(crate) struct Lemma {
    pub name: String,
    pub statement: Formula,
    pub proof: Vec<Line>,
}

pub(crate) struct Library {
    axioms: Vec<Formula>,
    lemmas: Mutex<HashMap<String, Arc<Lemma>>>,
}

pub(crate) fn library(basis: Basis) -> &'static Library {
    static LUK: OnceLock<Library> = OnceLock::new();
    static KLE: OnceLock<Library> = OnceLock::new();
    match basis {
        Basis::Lukasiewicz => LUK.get_or_init(|| {
            Library::load(
                LUKASIEWICZ_AXIOMS.iter().map(|s| parse_formula(s).unwrap()).collect(),
                &[include_str!("../../data/lukasiewicz.hil"), include_str!("../../data/lukasiewicz.hyp")],
            )
        }),
        Basis::Kleene => KLE.get_or_init(|| {
            let mut axioms: Vec<Formula> = crate::deduction::MetaAxiom::all()
                .take(10)
                .map(|m| m.template().clone())
                .collect();
            axioms.extend(KLEENE_EQV.iter().map(|s| parse_formula(s).unwrap()));
            let a = Formula::var("p");
            axioms.push(Formula::imp(Formula::imp(top_template(), a.clone()), a.clone()));
            axioms.push(Formula::imp(bot_template(), a));
            let lib = Library::load(
                axioms,
                &[include_str!("../../data/kleene.hil"), include_str!("../../data/kleene.hyp")],
            );
            lib.add_meta_constants();
            lib
        }),
    }
}

fn h(i: usize) -> Formula {
    Formula::var(&format!("h{i}"))
}

/// `h1 → (h2 → … → (hn → x))` for the hypotheses `h_from ..= h_to`.
fn under(from: usize, to: usize, x: Formula) -> Formula {
    (from..=to).rev().fold(x, |acc, i| Formula::imp(h(i), acc))
}

/// Renames `h_i` to `h_{i+1}`.
fn shift(f: &Formula, n: usize) -> Formula {
    let args: Args<Formula> = (1..=n).map(|i| (Symbol::new(&format!("h{i}")), h(i + 1))).collect();
    let mut all = args;
    for v in f.vars() {
        all.entry(v.clone()).or_insert_with(|| Formula::var_sym(v));
    }
    instantiate(f, &all, None).expect("formula templates instantiate into formulas")
}

impl Library {
    fn load(axioms: Vec<Formula>, sources: &[&str]) -> Library {
        let lib = Library { axioms, lemmas: Mutex::new(HashMap::new()) };
        for src in sources {
            for (name, statement, lines) in parse_lemma_file(src) {
                let has_hyps = lines.iter().any(|l| l.just == Just::Hyp);
                let proof = if has_hyps { lib.discharge_all(lines) } else { lines };
                lib.insert(Lemma { name, statement, proof });
            }
        }
        lib
    }

    fn add_meta_constants(&self) {
        let top = top_template();
        let bot = bot_template();
        let id = |x: &Formula| Formula::imp(x.clone(), x.clone());
        self.insert(Lemma {
            name: "top".into(),
            statement: top.clone(),
            proof: vec![
                Line { formula: Formula::imp(id(&top), top.clone()), just: Just::Ax(AX_TOP) },
                Line { formula: id(&top), just: Just::Lem("id".into()) },
                Line { formula: top.clone(), just: Just::Mp(0, 1) },
            ],
        });
        let not_bot = Formula::not(bot.clone());
        let k9 = Formula::imp(
            id(&bot),
            Formula::imp(Formula::imp(bot.clone(), not_bot.clone()), not_bot.clone()),
        );
        self.insert(Lemma {
            name: "not_bot".into(),
            statement: not_bot.clone(),
            proof: vec![
                Line { formula: k9, just: Just::Ax(9) },
                Line { formula: id(&bot), just: Just::Lem("id".into()) },
                Line {
                    formula: Formula::imp(Formula::imp(bot.clone(), not_bot.clone()), not_bot.clone()),
                    just: Just::Mp(0, 1),
                },
                Line { formula: Formula::imp(bot.clone(), not_bot.clone()), just: Just::Ax(AX_BOT) },
                Line { formula: not_bot, just: Just::Mp(2, 3) },
            ],
        });
    }

    fn insert(&self, lemma: Lemma) {
        if let Err(e) = self.validate(&lemma) {
            panic!("invalid built-in lemma `{}`: {e}", lemma.name);
        }
        self.lemmas.lock().unwrap().insert(lemma.name.clone(), Arc::new(lemma));
    }

    pub fn axiom(&self, n: usize) -> Option<&Formula> {
        n.checked_sub(1).and_then(|i| self.axioms.get(i))
    }

    /// Checks that every line follows and the last line is the statement.
    pub fn validate(&self, lemma: &Lemma) -> Result<(), String> {
        for (i, line) in lemma.proof.iter().enumerate() {
            let ok = match &line.just {
                Just::Ax(n) => self
                    .axiom(*n)
                    .is_some_and(|ax| match_template(ax, &line.formula, &mut Args::new())),
                Just::Lem(name) => {
                    let dep = self.lemma(name).ok_or_else(|| format!("line {}: no lemma `{name}`", i + 1))?;
                    match_template(&dep.statement, &line.formula, &mut Args::new())
                }
                Just::Mp(a, b) => {
                    *a < i
                        && *b < i
                        && lemma.proof[*a].formula
                            == Formula::imp(lemma.proof[*b].formula.clone(), line.formula.clone())
                }
                Just::Hyp => false,
            };
            if !ok {
                return Err(format!("line {} ({}) does not follow", i + 1, line.formula));
            }
        }
        match lemma.proof.last() {
            Some(l) if l.formula == lemma.statement => Ok(()),
            _ => Err("the proof does not end with the statement".into()),
        }
    }

    /// A lemma by name, generating context lemmas on first use:
    /// `w.n`, `proj.n.i`, `l0.n.lem`, `l1.n.lem`, `l2.n.lem`.
    pub fn lemma(&self, name: &str) -> Option<Arc<Lemma>> {
        if let Some(l) = self.lemmas.lock().unwrap().get(name) {
            return Some(l.clone());
        }
        let lemma = self.generate(name)?;
        let lemma = Arc::new(lemma);
        if let Err(e) = self.validate(&lemma) {
            panic!("generated lemma `{name}` is invalid: {e}");
        }
        self.lemmas.lock().unwrap().insert(name.to_string(), lemma.clone());
        Some(lemma)
    }

    fn generate(&self, name: &str) -> Option<Lemma> {
        let parts: Vec<&str> = name.splitn(3, '.').collect();
        let n: usize = parts.get(1)?.parse().ok()?;
        let line = |formula: Formula, just: Just| Line { formula, just };
        let lem = |name: String, formula: Formula| line(formula, Just::Lem(name));
        let (statement, proof) = match parts[0] {
            "w" if parts.len() == 2 => {
                let x = Formula::var("x");
                if n == 0 {
                    let s = Formula::imp(x.clone(), x);
                    (s.clone(), vec![lem("id".into(), s)])
                } else {
                    let inner = under(2, n, x.clone());
                    let prev = Formula::imp(x.clone(), inner.clone());
                    let k = Formula::imp(inner.clone(), Formula::imp(h(1), inner.clone()));
                    let target = Formula::imp(h(1), inner.clone());
                    let syl = Formula::imp(
                        prev.clone(),
                        Formula::imp(k.clone(), Formula::imp(x.clone(), target.clone())),
                    );
                    let s = Formula::imp(x, target);
                    let mid = Formula::imp(k.clone(), s.clone());
                    (
                        s.clone(),
                        vec![
                            lem(format!("w.{}", n - 1), prev),
                            lem("k".into(), k),
                            lem("syl".into(), syl),
                            line(mid, Just::Mp(2, 0)),
                            line(s, Just::Mp(3, 1)),
                        ],
                    )
                }
            }
            "proj" if parts.len() == 3 => {
                let i: usize = parts[2].parse().ok()?;
                if i == 0 || i > n {
                    return None;
                }
                let s = under(1, n, h(i));
                if i == 1 {
                    (s.clone(), vec![lem(format!("w.{}", n - 1), s)])
                } else {
                    let prev = under(2, n, h(i));
                    let k = Formula::imp(prev.clone(), s.clone());
                    (
                        s.clone(),
                        vec![
                            lem(format!("proj.{}.{}", n - 1, i - 1), prev),
                            lem("k".into(), k),
                            line(s, Just::Mp(1, 0)),
                        ],
                    )
                }
            }
            kind @ ("l0" | "l1" | "l2") if parts.len() == 3 && n > 0 => {
                let base = self.lemma(parts[2])?;
                let prev_name = if n == 1 {
                    parts[2].to_string()
                } else {
                    format!("{kind}.{}.{}", n - 1, parts[2])
                };
                let prev = if n == 1 { base.statement.clone() } else { shift(&self.lemma(&prev_name)?.statement, n - 1) };
                let wrap = |x: &Formula| under(1, n, x.clone());
                let inner = |x: &Formula| under(2, n, x.clone());
                match kind {
                    "l0" => {
                        let c = &base.statement;
                        let w = Formula::imp(c.clone(), wrap(c));
                        (
                            wrap(c),
                            vec![
                                lem(format!("w.{n}"), w),
                                lem(parts[2].to_string(), c.clone()),
                                line(wrap(c), Just::Mp(0, 1)),
                            ],
                        )
                    }
                    "l1" => {
                        let (a, b) = base.statement.as_imp().map(|(a, b)| (a.clone(), b.clone()))?;
                        let s = Formula::imp(wrap(&a), wrap(&b));
                        let lift = Formula::imp(prev.clone(), s.clone());
                        debug_assert_eq!(prev, Formula::imp(inner(&a), inner(&b)));
                        (s.clone(), vec![lem(prev_name, prev), lem("lift1".into(), lift), line(s, Just::Mp(1, 0))])
                    }
                    _ => {
                        let (a, bc) = base.statement.as_imp()?;
                        let (b, c) = bc.as_imp()?;
                        let s = Formula::imp(wrap(a), Formula::imp(wrap(b), wrap(c)));
                        let lift = Formula::imp(prev.clone(), s.clone());
                        (s.clone(), vec![lem(prev_name, prev), lem("lift2".into(), lift), line(s, Just::Mp(1, 0))])
                    }
                }
            }
            _ => return None,
        };
        Some(Lemma { name: name.to_string(), statement, proof })
    }

    /// Compiles a proof from hypotheses `h1, …, hn` (in order of first
    /// appearance) into a proof of `h1 → (… → (hn → C))`.
    fn discharge_all(&self, mut lines: Vec<Line>) -> Vec<Line> {
        let mut hyps: Vec<Formula> = Vec::new();
        for l in &lines {
            if l.just == Just::Hyp && !hyps.contains(&l.formula) {
                hyps.push(l.formula.clone());
            }
        }
        for hyp in hyps.iter().rev() {
            lines = discharge(&lines, hyp);
        }
        lines
    }
}

/// One application of the deduction theorem, using `k`, `id` and `dist`.
pub(crate) fn discharge(lines: &[Line], hyp: &Formula) -> Vec<Line> {
    let mut out = Proof::default();
    // For each input line: the output line of its formula (if kept) and of
    // `hyp → formula` (if needed).
    let mut plain: Vec<Option<usize>> = Vec::with_capacity(lines.len());
    let mut lifted: Vec<Option<usize>> = Vec::with_capacity(lines.len());
    let depends: Vec<bool> = {
        let mut d = Vec::with_capacity(lines.len());
        for l in lines {
            let dep = match &l.just {
                Just::Hyp => l.formula == *hyp,
                Just::Mp(a, b) => d[*a] || d[*b],
                _ => false,
            };
            d.push(dep);
        }
        d
    };
    for (i, l) in lines.iter().enumerate() {
        let f = &l.formula;
        if !depends[i] {
            let j = match &l.just {
                Just::Mp(a, b) => Just::Mp(plain[*a].unwrap(), plain[*b].unwrap()),
                other => other.clone(),
            };
            plain.push(Some(out.add(f.clone(), j)));
            lifted.push(None);
            continue;
        }
        plain.push(None);
        let target = Formula::imp(hyp.clone(), f.clone());
        let r = match &l.just {
            Just::Hyp => out.add(target, Just::Lem("id".into())),
            Just::Mp(a, b) => {
                let (major, minor) = (
                    lift(&mut out, lines, &plain, &mut lifted, hyp, *a),
                    lift(&mut out, lines, &plain, &mut lifted, hyp, *b),
                );
                let fb = &lines[*b].formula;
                let hb = Formula::imp(hyp.clone(), fb.clone());
                let hab = Formula::imp(hyp.clone(), Formula::imp(fb.clone(), f.clone()));
                let dist = Formula::imp(hb, Formula::imp(hab.clone(), target.clone()));
                let d = out.add(dist, Just::Lem("dist".into()));
                let half = out.add(Formula::imp(hab, target.clone()), Just::Mp(d, minor));
                out.add(target, Just::Mp(half, major))
            }
            _ => unreachable!("only hypotheses and detachments depend on a hypothesis"),
        };
        lifted.push(Some(r));
    }
    let last = lines.len() - 1;
    let end = lift(&mut out, lines, &plain, &mut lifted, hyp, last);
    out.finish(end)
}

/// The output line of `hyp → line[i]`, weakening with `k` if necessary.
fn lift(
    out: &mut Proof,
    lines: &[Line],
    plain: &[Option<usize>],
    lifted: &mut [Option<usize>],
    hyp: &Formula,
    i: usize,
) -> usize {
    if let Some(r) = lifted[i] {
        return r;
    }
    let f = &lines[i].formula;
    let p = plain[i].expect("every line is kept or lifted");
    let target = Formula::imp(hyp.clone(), f.clone());
    let k = out.add(Formula::imp(f.clone(), target.clone()), Just::Lem("k".into()));
    let r = out.add(target, Just::Mp(k, p));
    lifted[i] = Some(r);
    r
}

#[derive(Default)]
struct Proof {
    lines: Vec<Line>,
    index: HashMap<Formula, usize>,
}

impl Proof {
    fn add(&mut self, formula: Formula, just: Just) -> usize {
        if let Some(&i) = self.index.get(&formula) {
            return i;
        }
        self.lines.push(Line { formula: formula.clone(), just });
        self.index.insert(formula, self.lines.len() - 1);
        self.lines.len() - 1
    }

    /// Drops lines the final one does not need.
    fn finish(self, end: usize) -> Vec<Line> {
        let mut needed = vec![false; self.lines.len()];
        needed[end] = true;
        for i in (0..=end).rev() {
            if needed[i] {
                if let Just::Mp(a, b) = self.lines[i].just {
                    needed[a] = true;
                    needed[b] = true;
                }
            }
        }
        let mut renumber = vec![0; self.lines.len()];
        let mut out = Vec::new();
        for (i, l) in self.lines.into_iter().enumerate().take(end + 1) {
            if !needed[i] {
                continue;
            }
            let just = match l.just {
                Just::Mp(a, b) => Just::Mp(renumber[a], renumber[b]),
                other => other,
            };
            renumber[i] = out.len();
            out.push(Line { formula: l.formula, just });
        }
        out
    }
}

/// Parses `lemma name: formula` headers followed by
/// `n: formula ; ax N | lem name | mp a b | hyp` lines.
fn parse_lemma_file(src: &str) -> Vec<(String, Formula, Vec<Line>)> {
    let mut out: Vec<(String, Formula, Vec<Line>)> = Vec::new();
    for (no, raw) in src.lines().enumerate() {
        let text = raw.split('#').next().unwrap().trim();
        if text.is_empty() {
            continue;
        }
        let fail = |m: &str| -> ! { panic!("lemma file line {}: {m}: {raw}", no + 1) };
        if let Some(rest) = text.strip_prefix("lemma ") {
            let (name, f) = rest.split_once(':').unwrap_or_else(|| fail("expected `lemma name: formula`"));
            let f = parse_formula(f).unwrap_or_else(|e| fail(&e.to_string()));
            out.push((name.trim().to_string(), f, Vec::new()));
            continue;
        }
        let (_, _, lines) = out.last_mut().unwrap_or_else(|| fail("line outside a lemma"));
        let (num, rest) = text.split_once(':').unwrap_or_else(|| fail("expected `n: formula ; just`"));
        if num.trim().parse::<usize>().ok() != Some(lines.len() + 1) {
            fail("lines must be numbered consecutively");
        }
        let (f, just) = rest.split_once(';').unwrap_or_else(|| fail("missing `;`"));
        let formula = parse_formula(f).unwrap_or_else(|e| fail(&e.to_string()));
        let words: Vec<&str> = just.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().unwrap_or_else(|_| fail("expected a number"));
        let just = match words.as_slice() {
            ["ax", n] => Just::Ax(num(n)),
            ["lem", name] => Just::Lem(name.to_string()),
            ["mp", a, b] => Just::Mp(num(a) - 1, num(b) - 1),
            ["hyp"] => Just::Hyp,
            _ => fail("unknown justification"),
        };
        lines.push(Line { formula, just });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn libraries_load_and_validate() {
        for basis in [Basis::Lukasiewicz, Basis::Kleene] {
            let lib = library(basis);
            for name in ["k", "id", "dist", "syl", "lift1", "lift2", "efq", "dni", "dni_id", "imp_f", "cases"] {
                let l = lib.lemma(name).unwrap_or_else(|| panic!("{basis:?} lacks {name}"));
                assert!(lib.validate(&l).is_ok());
            }
        }
        assert!(library(Basis::Kleene).lemma("top").is_some());
        assert!(library(Basis::Kleene).lemma("not_bot").is_some());
    }

    #[test]
    fn generated_context_lemmas() {
        let lib = library(Basis::Lukasiewicz);
        let p = lib.lemma("proj.3.2").unwrap();
        assert_eq!(p.statement, parse_formula("h1 -> (h2 -> (h3 -> h2))").unwrap());
        let l2 = lib.lemma("l2.2.imp_f").unwrap();
        assert_eq!(
            l2.statement,
            parse_formula("(h1 -> h2 -> p) -> ((h1 -> h2 -> ~q) -> (h1 -> h2 -> ~(p -> q)))").unwrap()
        );
        let l0 = library(Basis::Kleene).lemma("l0.2.top").unwrap();
        assert_eq!(l0.statement, under(1, 2, top_template()));
        assert!(lib.lemma("proj.2.3").is_none());
        assert!(lib.lemma("l1.1.nope").is_none());
    }

    #[test]
    fn discharge_builds_implication() {
        let lines = vec![
            Line { formula: parse_formula("p").unwrap(), just: Just::Hyp },
            Line { formula: parse_formula("p -> q").unwrap(), just: Just::Hyp },
            Line { formula: parse_formula("q").unwrap(), just: Just::Mp(1, 0) },
        ];
        let lib = library(Basis::Kleene);
        let proof = lib.discharge_all(lines);
        let l = Lemma {
            name: "t".into(),
            statement: parse_formula("p -> ((p -> q) -> q)").unwrap(),
            proof,
        };
        assert_eq!(lib.validate(&l), Ok(()));
    }
}
