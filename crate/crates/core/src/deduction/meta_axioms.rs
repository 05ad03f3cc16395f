//! The meta-axiom basis: Kleene's ten classical schemata over statement
//! placeholders `a`, `b`, `c`, plus `(⊤ ⟹ a) ⟹ a` and `⊥ ⟹ a`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::formula::{Formula, Symbol};
use crate::statement::Statement;
use crate::syntax::parse_formula;
use crate::template::{bot_template, instantiate, match_template, top_template, Args};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MetaAxiom {
    /// Kleene schema 1 through 10.
    K(u8),
    /// `(⊤ ⟹ a) ⟹ a`
    Top,
    /// `⊥ ⟹ a`
    Bot,
}

/// Kleene's schemata in his numbering, as implication templates.
pub(crate) const KLEENE_SCHEMATA: [&str; 10] = [
    "a -> (b -> a)",
    "(a -> b) -> ((a -> (b -> c)) -> (a -> c))",
    "a -> (b -> (a & b))",
    "(a & b) -> a",
    "(a & b) -> b",
    "a -> (a | b)",
    "b -> (a | b)",
    "(a -> c) -> ((b -> c) -> ((a | b) -> c))",
    "(a -> b) -> ((a -> ~b) -> ~a)",
    "~~a -> a",
];

pub type MetaBinding = BTreeMap<Symbol, Statement>;

impl MetaAxiom {
    pub fn all() -> impl Iterator<Item = MetaAxiom> {
        (1..=10).map(MetaAxiom::K).chain([MetaAxiom::Top, MetaAxiom::Bot])
    }

    pub(crate) fn template(self) -> &'static Formula {
        static TEMPLATES: OnceLock<Vec<Formula>> = OnceLock::new();
        let all = TEMPLATES.get_or_init(|| {
            let a = Formula::var("a");
            let mut v: Vec<Formula> =
                KLEENE_SCHEMATA.iter().map(|s| parse_formula(s).expect("valid schema")).collect();
            v.push(Formula::imp(Formula::imp(top_template(), a.clone()), a.clone()));
            v.push(Formula::imp(bot_template(), a));
            v
        });
        match self {
            MetaAxiom::K(n) => &all[n as usize - 1],
            MetaAxiom::Top => &all[10],
            MetaAxiom::Bot => &all[11],
        }
    }

    /// Placeholder names the schema uses.
    pub fn placeholders(self) -> Vec<Symbol> {
        self.template().vars()
    }

    /// The instance under `binding`; `None` if a placeholder is unbound.
    pub fn instance(self, binding: &MetaBinding) -> Option<Statement> {
        instantiate(self.template(), binding, None)
    }

    /// Matches the statement against this schema.
    pub fn matches(self, a: &Statement) -> Option<MetaBinding> {
        let mut args = Args::new();
        match_template(self.template(), a, &mut args).then_some(args)
    }
}

impl fmt::Display for MetaAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetaAxiom::K(n) => write!(f, "K{n}"),
            MetaAxiom::Top => f.write_str("AxTop"),
            MetaAxiom::Bot => f.write_str("AxBot"),
        }
    }
}

impl FromStr for MetaAxiom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "AxTop" => Ok(MetaAxiom::Top),
            "AxBot" => Ok(MetaAxiom::Bot),
            _ => s
                .strip_prefix('K')
                .and_then(|n| n.parse::<u8>().ok())
                .filter(|n| (1..=10).contains(n))
                .map(MetaAxiom::K)
                .ok_or_else(|| format!("unknown meta-axiom `{s}`")),
        }
    }
}

/// Recognizes an instance of one of the meta-axiom schemata.
pub fn is_meta_axiom(a: &Statement) -> Option<(MetaAxiom, MetaBinding)> {
    MetaAxiom::all().find_map(|m| m.matches(a).map(|b| (m, b)))
}
