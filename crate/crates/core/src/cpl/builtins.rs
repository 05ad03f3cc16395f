//! The built-in calculi.

use std::fmt;
use std::str::FromStr;

use crate::deduction::DeductiveSystem;
use crate::formula::{Formula, Signature};
use crate::statement::{Atom, Statement};
use crate::syntax::parse_statement;

pub(crate) const LUKASIEWICZ_AXIOMS: [(&str, &str); 4] = [
    ("ax1", "+((p -> q) -> ((q -> r) -> (p -> r)))"),
    ("ax2", "+((~p -> p) -> p)"),
    ("ax3", "+(p -> (~p -> q))"),
    ("anti", "-p"),
];

pub(crate) const KLEENE_AXIOMS: [(&str, &str); 13] = [
    ("k1", "+(p -> (q -> p))"),
    ("k2", "+((p -> q) -> ((p -> (q -> r)) -> (p -> r)))"),
    ("k3", "+(p -> (q -> (p & q)))"),
    ("k4", "+((p & q) -> p)"),
    ("k5", "+((p & q) -> q)"),
    ("k6", "+(p -> (p | q))"),
    ("k7", "+(q -> (p | q))"),
    ("k8", "+((p -> r) -> ((q -> r) -> ((p | q) -> r)))"),
    ("k9", "+((p -> q) -> ((p -> ~q) -> ~p))"),
    ("k10", "+(~~p -> p)"),
    ("eq1", "+((p <-> q) -> (p -> q))"),
    ("eq2", "+((p <-> q) -> (q -> p))"),
    ("eq3", "+((p -> q) -> ((q -> p) -> (p <-> q)))"),
];

pub(crate) const MP: &str = "+X AND +(X -> Y) => +Y";
pub(crate) const MT: &str = "-Y AND +(X -> Y) => -X";
const DISJUNCTION: &str = "+(X | Y) => +X OR +Y";
const R1: &str = "-X => +~X";
const R2: &str = "+~X => -X";

/// Largest `k` for which the `rk` family is built.
pub const MAX_RK: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinCalculus {
    /// Three axioms and the anti-axiom `⊖p` over `{→, ¬}`, with modus
    /// ponens and modus tollens.
    LukasiewiczCore,
    /// Kleene's propositional schemata and three axioms for `≡` as
    /// asserted axioms, plus `⊖p`, modus ponens and modus tollens.
    ClassicalExtended,
    /// The extended calculus with `⊕(X∨Y) ⟹ ⊕X ⩔ ⊕Y`.
    WithDisjunctionRule,
    /// The extended calculus without `⊖p` and without reverse
    /// substitution, plus `⊖X ⟹ ⊕¬X` and `⊕¬X ⟹ ⊖X`.
    Smiley,
    /// [`BuiltinCalculus::Smiley`] with the axiom `⊖p`.
    SmileyAnti,
    /// The extended calculus with `⊤ ⟹ ⩔ ⊕(Xi ≡ Xj)` over `2^k + 1`
    /// metavariables, `i < j`.
    Rk(u32),
}

impl BuiltinCalculus {
    pub const FIXED: [BuiltinCalculus; 5] = [
        BuiltinCalculus::LukasiewiczCore,
        BuiltinCalculus::ClassicalExtended,
        BuiltinCalculus::WithDisjunctionRule,
        BuiltinCalculus::Smiley,
        BuiltinCalculus::SmileyAnti,
    ];

    pub fn name(&self) -> String {
        match self {
            BuiltinCalculus::LukasiewiczCore => "lukasiewicz".into(),
            BuiltinCalculus::ClassicalExtended => "classical".into(),
            BuiltinCalculus::WithDisjunctionRule => "disjunction".into(),
            BuiltinCalculus::Smiley => "smiley".into(),
            BuiltinCalculus::SmileyAnti => "smiley_anti".into(),
            BuiltinCalculus::Rk(k) => format!("rk{k}"),
        }
    }

    pub fn system(&self) -> DeductiveSystem {
        let name = self.name();
        match self {
            BuiltinCalculus::LukasiewiczCore => {
                let mut ds = DeductiveSystem::new(&name, Signature::implicational());
                add_axioms(&mut ds, &LUKASIEWICZ_AXIOMS);
                add_rules(&mut ds, &[("mp", MP), ("mt", MT)]);
                ds
            }
            BuiltinCalculus::ClassicalExtended => extended(&name),
            BuiltinCalculus::WithDisjunctionRule => {
                let mut ds = extended(&name);
                add_rules(&mut ds, &[("or", DISJUNCTION)]);
                ds
            }
            BuiltinCalculus::Smiley | BuiltinCalculus::SmileyAnti => {
                let mut ds = extended(&name);
                if *self == BuiltinCalculus::Smiley {
                    ds.remove("anti");
                }
                ds.reverse_substitution = false;
                add_rules(&mut ds, &[("r1", R1), ("r2", R2)]);
                ds
            }
            BuiltinCalculus::Rk(k) => {
                let mut ds = extended(&name);
                ds.add_rule("rk", pigeonhole_schema((1usize << k) + 1)).expect("fresh rule id");
                ds
            }
        }
    }
}

impl fmt::Display for BuiltinCalculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for BuiltinCalculus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(b) = BuiltinCalculus::FIXED.iter().find(|b| b.name() == s) {
            return Ok(*b);
        }
        match s.strip_prefix("rk").and_then(|k| k.parse::<u32>().ok()) {
            Some(k) if (1..=MAX_RK).contains(&k) => Ok(BuiltinCalculus::Rk(k)),
            _ => Err(format!("no built-in calculus `{s}`")),
        }
    }
}

fn add_axioms(ds: &mut DeductiveSystem, axioms: &[(&str, &str)]) {
    for (id, src) in axioms {
        ds.add_axiom(id, parse_statement(src).expect("built-in axiom")).expect("built-in axiom");
    }
}

fn add_rules(ds: &mut DeductiveSystem, rules: &[(&str, &str)]) {
    for (id, src) in rules {
        ds.add_rule(id, parse_statement(src).expect("built-in rule")).expect("built-in rule");
    }
}

fn extended(name: &str) -> DeductiveSystem {
    let mut ds = DeductiveSystem::new(name, Signature::default());
    add_axioms(&mut ds, &KLEENE_AXIOMS);
    add_axioms(&mut ds, &LUKASIEWICZ_AXIOMS[3..]);
    add_rules(&mut ds, &[("mp", MP), ("mt", MT)]);
    ds
}

/// `⊤ ⟹ ⩔ {⊕(Xi ≡ Xj) : 1 ≤ i < j ≤ n}`.
pub fn pigeonhole_schema(n: usize) -> Statement {
    let x = |i: usize| Formula::meta(&format!("X{i}"));
    let mut conclusions = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            conclusions.push(Statement::atom(Atom::asserted(Formula::eqv(x(i), x(j)))));
        }
    }
    Statement::imp(Statement::top(), Statement::disj(conclusions))
}
