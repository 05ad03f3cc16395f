//! Propositional formulas over a declared connective signature, substitutions
//! and one-sided matching.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

/// An interned-by-value name used for propositional variables, metavariables
/// and connective symbols.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Object-level connectives. The five classical ones have dedicated infix
/// syntax; anything else is written as `name(arg, ...)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Connective {
    Not,
    And,
    Or,
    Imp,
    Eqv,
    Named(Symbol, usize),
}

/// Names that belong to the meta-language and can never be object connectives.
pub const RESERVED_SYMBOLS: &[&str] = &[
    "⩓", "⩔", "⟹", "¬ₘ", "⊤", "⊥", "⊕", "⊖", "TOP", "BOT", "AND", "OR", "NOT", "+", "-", "=>",
];

impl Connective {
    pub fn arity(&self) -> usize {
        match self {
            Connective::Not => 1,
            Connective::And | Connective::Or | Connective::Imp | Connective::Eqv => 2,
            Connective::Named(_, n) => *n,
        }
    }

    /// The ASCII symbol used by the file formats.
    pub fn symbol(&self) -> &str {
        match self {
            Connective::Not => "~",
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Imp => "->",
            Connective::Eqv => "<->",
            Connective::Named(s, _) => s.as_str(),
        }
    }

    pub fn from_symbol(sym: &str) -> Option<Connective> {
        Some(match sym {
            "~" | "¬" => Connective::Not,
            "&" | "∧" => Connective::And,
            "|" | "∨" => Connective::Or,
            "->" | "→" => Connective::Imp,
            "<->" | "≡" => Connective::Eqv,
            _ => return None,
        })
    }

    /// Binding strength for infix printing: larger binds tighter.
    pub(crate) fn precedence(&self) -> u8 {
        match self {
            Connective::Eqv => 1,
            Connective::Imp => 2,
            Connective::Or => 3,
            Connective::And => 4,
            Connective::Not | Connective::Named(..) => 5,
        }
    }

    pub(crate) fn is_infix(&self) -> bool {
        matches!(self, Connective::And | Connective::Or | Connective::Imp | Connective::Eqv)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("connective `{0}` declared twice")]
    Duplicate(String),
    #[error("`{0}` is reserved for the meta-language")]
    Reserved(String),
    #[error("connective `{0}` is not in the signature")]
    Undeclared(String),
    #[error("connective `{name}` expects {expected} arguments, got {got}")]
    Arity { name: String, expected: usize, got: usize },
}

/// A finite set of connectives with their arities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    connectives: Vec<Connective>,
}

impl Default for Signature {
    /// `{→:2, ¬:1, ∨:2, ∧:2, ≡:2}`
    fn default() -> Self {
        Signature {
            connectives: vec![
                Connective::Imp,
                Connective::Not,
                Connective::Or,
                Connective::And,
                Connective::Eqv,
            ],
        }
    }
}

impl Signature {
    pub fn new(connectives: Vec<Connective>) -> Result<Self, SignatureError> {
        let mut seen = BTreeSet::new();
        for c in &connectives {
            let name = c.symbol().to_string();
            if RESERVED_SYMBOLS.contains(&name.as_str()) {
                return Err(SignatureError::Reserved(name));
            }
            if !seen.insert(name.clone()) {
                return Err(SignatureError::Duplicate(name));
            }
        }
        Ok(Signature { connectives })
    }

    /// The `{→, ¬}` fragment.
    pub fn implicational() -> Self {
        Signature { connectives: vec![Connective::Imp, Connective::Not] }
    }

    pub fn connectives(&self) -> &[Connective] {
        &self.connectives
    }

    pub fn contains(&self, c: &Connective) -> bool {
        self.connectives.contains(c)
    }

    /// Checks that every connective of `f` is declared with a matching arity.
    pub fn check(&self, f: &Formula) -> Result<(), SignatureError> {
        let declared = self.connectives.iter().fold(0, |acc, c| acc | connective_bit(c));
        if f.0.flags & !HAS_META & !declared == 0 && f.0.flags & HAS_NAMED == 0 {
            return Ok(());
        }
        match f.node() {
            FormulaNode::Var(_) | FormulaNode::Meta(_) => Ok(()),
            FormulaNode::App(c, args) => {
                let declared = self.connectives.iter().find(|d| d.symbol() == c.symbol());
                match declared {
                    None => Err(SignatureError::Undeclared(c.symbol().to_string())),
                    Some(d) if d.arity() != args.len() => Err(SignatureError::Arity {
                        name: c.symbol().to_string(),
                        expected: d.arity(),
                        got: args.len(),
                    }),
                    Some(_) => args.iter().try_for_each(|a| self.check(a)),
                }
            }
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .connectives
            .iter()
            .map(|c| match c {
                Connective::Named(s, n) => format!("{s}/{n}"),
                other => other.symbol().to_string(),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FormulaNode {
    /// A propositional variable (`p`, `q1`, ...).
    Var(Symbol),
    /// A formula metavariable (`X`, `Y`, ...), only meaningful inside schemata.
    Meta(Symbol),
    App(Connective, Vec<Formula>),
}

/// A node with its structural hash and summary flags, computed once at
/// construction.
#[derive(Debug)]
pub(crate) struct Hashed<N> {
    pub(crate) node: N,
    pub(crate) hash: u64,
    pub(crate) flags: u8,
}

impl<N: Hash> Hashed<N> {
    pub(crate) fn new(node: N, flags: u8) -> Self {
        let mut h = std::hash::DefaultHasher::new();
        node.hash(&mut h);
        Hashed { hash: h.finish(), node, flags }
    }
}

/// Formula flags: one bit per classical connective occurring, and bits for
/// named connectives and metavariables.
const HAS_NAMED: u8 = 1 << 5;
const HAS_META: u8 = 1 << 6;

fn connective_bit(c: &Connective) -> u8 {
    match c {
        Connective::Not => 1,
        Connective::And => 1 << 1,
        Connective::Or => 1 << 2,
        Connective::Imp => 1 << 3,
        Connective::Eqv => 1 << 4,
        Connective::Named(..) => HAS_NAMED,
    }
}

/// An immutable, cheaply clonable formula tree.
#[derive(Clone)]
pub struct Formula(Arc<Hashed<FormulaNode>>);

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.node == other.0.node)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash)
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return std::cmp::Ordering::Equal;
        }
        self.0.node.cmp(&other.0.node)
    }
}

impl Formula {
    pub fn from_node(node: FormulaNode) -> Self {
        let flags = match &node {
            FormulaNode::Var(_) => 0,
            FormulaNode::Meta(_) => HAS_META,
            FormulaNode::App(c, args) => args.iter().fold(connective_bit(c), |acc, a| acc | a.0.flags),
        };
        Formula(Arc::new(Hashed::new(node, flags)))
    }

    pub fn var(name: &str) -> Self {
        Formula::from_node(FormulaNode::Var(Symbol::new(name)))
    }

    pub fn var_sym(name: Symbol) -> Self {
        Formula::from_node(FormulaNode::Var(name))
    }

    pub fn meta(name: &str) -> Self {
        Formula::from_node(FormulaNode::Meta(Symbol::new(name)))
    }

    pub fn app(c: Connective, args: Vec<Formula>) -> Self {
        debug_assert_eq!(c.arity(), args.len());
        Formula::from_node(FormulaNode::App(c, args))
    }

    pub fn not(a: Formula) -> Self {
        Formula::app(Connective::Not, vec![a])
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::app(Connective::And, vec![a, b])
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::app(Connective::Or, vec![a, b])
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::app(Connective::Imp, vec![a, b])
    }

    pub fn eqv(a: Formula, b: Formula) -> Self {
        Formula::app(Connective::Eqv, vec![a, b])
    }

    pub fn node(&self) -> &FormulaNode {
        &self.0.node
    }

    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn as_var(&self) -> Option<&Symbol> {
        match self.node() {
            FormulaNode::Var(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_meta(&self) -> Option<&Symbol> {
        match self.node() {
            FormulaNode::Meta(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_not(&self) -> Option<&Formula> {
        match self.node() {
            FormulaNode::App(Connective::Not, args) => Some(&args[0]),
            _ => None,
        }
    }

    pub fn as_binary(&self, c: &Connective) -> Option<(&Formula, &Formula)> {
        match self.node() {
            FormulaNode::App(d, args) if d == c && args.len() == 2 => Some((&args[0], &args[1])),
            _ => None,
        }
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        self.as_binary(&Connective::Imp)
    }

    /// Number of symbol occurrences (variables plus connectives).
    pub fn size(&self) -> usize {
        match self.node() {
            FormulaNode::Var(_) | FormulaNode::Meta(_) => 1,
            FormulaNode::App(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    pub fn connective_count(&self) -> usize {
        match self.node() {
            FormulaNode::Var(_) | FormulaNode::Meta(_) => 0,
            FormulaNode::App(_, args) => 1 + args.iter().map(Formula::connective_count).sum::<usize>(),
        }
    }

    /// Propositional variables, in order of first occurrence.
    pub fn vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_leaves(false, &mut out);
        out
    }

    /// Metavariables, in order of first occurrence.
    pub fn metas(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_leaves(true, &mut out);
        out
    }

    fn collect_leaves(&self, metas: bool, out: &mut Vec<Symbol>) {
        match self.node() {
            FormulaNode::Var(s) if !metas => {
                if !out.contains(s) {
                    out.push(s.clone())
                }
            }
            FormulaNode::Meta(s) if metas => {
                if !out.contains(s) {
                    out.push(s.clone())
                }
            }
            FormulaNode::App(_, args) => args.iter().for_each(|a| a.collect_leaves(metas, out)),
            _ => {}
        }
    }

    pub fn is_ground(&self) -> bool {
        self.0.flags & HAS_META == 0
    }

    /// All subformulas, children before parents, without duplicates.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = Vec::new();
        fn go(f: &Formula, out: &mut Vec<Formula>) {
            if let FormulaNode::App(_, args) = f.node() {
                args.iter().for_each(|a| go(a, out));
            }
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
        go(self, &mut out);
        out
    }

    /// Two-valued evaluation; metavariables are treated like variables.
    pub fn eval(&self, val: &impl Fn(&Symbol) -> bool) -> bool {
        match self.node() {
            FormulaNode::Var(s) | FormulaNode::Meta(s) => val(s),
            FormulaNode::App(c, args) => match c {
                Connective::Not => !args[0].eval(val),
                Connective::And => args[0].eval(val) && args[1].eval(val),
                Connective::Or => args[0].eval(val) || args[1].eval(val),
                Connective::Imp => !args[0].eval(val) || args[1].eval(val),
                Connective::Eqv => args[0].eval(val) == args[1].eval(val),
                Connective::Named(name, _) => {
                    panic!("no two-valued semantics for connective `{name}`")
                }
            },
        }
    }

    /// Simultaneous substitution for propositional variables.
    pub fn subst(&self, s: &Substitution) -> Formula {
        if s.is_identity() {
            return self.clone();
        }
        self.rewrite(&|node| match node {
            FormulaNode::Var(v) => s.get(v).cloned(),
            _ => None,
        })
        .unwrap_or_else(|| self.clone())
    }

    /// Simultaneous replacement of metavariables.
    pub fn instantiate(&self, inst: &Instantiation) -> Formula {
        if inst.is_empty() {
            return self.clone();
        }
        self.rewrite(&|node| match node {
            FormulaNode::Meta(v) => inst.get(v).cloned(),
            _ => None,
        })
        .unwrap_or_else(|| self.clone())
    }

    /// Rebuilds the tree replacing leaves; `None` means nothing changed, so
    /// untouched subtrees stay shared.
    fn rewrite(&self, leaf: &impl Fn(&FormulaNode) -> Option<Formula>) -> Option<Formula> {
        match self.node() {
            FormulaNode::App(c, args) => {
                let mut changed = false;
                let new_args: Vec<Formula> = args
                    .iter()
                    .map(|a| match a.rewrite(leaf) {
                        Some(n) => {
                            changed = true;
                            n
                        }
                        None => a.clone(),
                    })
                    .collect();
                changed.then(|| Formula::app(c.clone(), new_args))
            }
            node => leaf(node),
        }
    }

    /// One-sided matching binding propositional variables of `self`.
    pub fn match_vars(&self, target: &Formula, binding: &mut BTreeMap<Symbol, Formula>) -> bool {
        match_leaves(self, target, LeafKind::Var, binding)
    }

    /// One-sided matching binding metavariables of `self`.
    pub fn match_metas(&self, target: &Formula, binding: &mut BTreeMap<Symbol, Formula>) -> bool {
        match_leaves(self, target, LeafKind::Meta, binding)
    }

    /// Replaces metavariables by the propositional variable of the same
    /// name lower-cased; used when a schema is read as a concrete formula.
    pub fn metas_to_vars(&self) -> Formula {
        self.rewrite(&|node| match node {
            FormulaNode::Meta(v) => Some(Formula::var(&v.as_str().to_lowercase())),
            _ => None,
        })
        .unwrap_or_else(|| self.clone())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LeafKind {
    Var,
    Meta,
}

fn match_leaves(
    pattern: &Formula,
    target: &Formula,
    kind: LeafKind,
    binding: &mut BTreeMap<Symbol, Formula>,
) -> bool {
    match (pattern.node(), kind) {
        (FormulaNode::Var(v), LeafKind::Var) | (FormulaNode::Meta(v), LeafKind::Meta) => {
            match binding.get(v) {
                Some(bound) => bound == target,
                None => {
                    binding.insert(v.clone(), target.clone());
                    true
                }
            }
        }
        (FormulaNode::App(c, args), _) => match target.node() {
            FormulaNode::App(d, targs) if c == d && args.len() == targs.len() => args
                .iter()
                .zip(targs)
                .all(|(a, t)| match_leaves(a, t, kind, binding)),
            _ => false,
        },
        (leaf, _) => leaf == target.node(),
    }
}

/// Finite map from variables to formulas; identity elsewhere.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Substitution(BTreeMap<Symbol, Formula>);

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    /// Builds a substitution, dropping trivial bindings `p ↦ p`.
    pub fn from_pairs<I: IntoIterator<Item = (Symbol, Formula)>>(pairs: I) -> Self {
        Substitution(
            pairs
                .into_iter()
                .filter(|(k, v)| v.as_var() != Some(k))
                .collect(),
        )
    }

    pub fn single(var: &str, f: Formula) -> Self {
        Substitution::from_pairs([(Symbol::new(var), f)])
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: &Symbol) -> Option<&Formula> {
        self.0.get(v)
    }

    pub fn bindings(&self) -> &BTreeMap<Symbol, Formula> {
        &self.0
    }

    pub fn image(&self, v: &Symbol) -> Formula {
        self.0.get(v).cloned().unwrap_or_else(|| Formula::var_sym(v.clone()))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bindings(f, self.0.iter())
    }
}

pub(crate) fn write_bindings<'a, T: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = (&'a Symbol, &'a T)>,
) -> fmt::Result {
    f.write_str("{")?;
    for (i, (k, v)) in items.enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{k}:={v}")?;
    }
    f.write_str("}")
}

/// Finite map from metavariables to formulas.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Instantiation(BTreeMap<Symbol, Formula>);

impl Instantiation {
    pub fn new(map: BTreeMap<Symbol, Formula>) -> Self {
        Instantiation(map)
    }

    pub fn from_pairs<'a, I: IntoIterator<Item = (&'a str, Formula)>>(pairs: I) -> Self {
        Instantiation(pairs.into_iter().map(|(k, v)| (Symbol::new(k), v)).collect())
    }

    pub fn get(&self, v: &Symbol) -> Option<&Formula> {
        self.0.get(v)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bindings(&self) -> &BTreeMap<Symbol, Formula> {
        &self.0
    }
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bindings(f, self.0.iter())
    }
}

/// `apply_subst(s, a)`: every occurrence of each variable replaced simultaneously.
pub fn apply_subst(s: &Substitution, a: &Formula) -> Formula {
    a.subst(s)
}

/// The substitution `s1 ∘ s2`, i.e. apply `s2` first and then `s1`.
pub fn compose_subst(s1: &Substitution, s2: &Substitution) -> Substitution {
    let mut out: BTreeMap<Symbol, Formula> =
        s2.0.iter().map(|(k, v)| (k.clone(), v.subst(s1))).collect();
    for (k, v) in &s1.0 {
        out.entry(k.clone()).or_insert_with(|| v.clone());
    }
    Substitution::from_pairs(out)
}

/// The unique substitution with domain `vars(pattern)` mapping `pattern` onto
/// `target`, if any. Metavariables in the pattern must occur identically.
pub fn match_formula(pattern: &Formula, target: &Formula) -> Option<Substitution> {
    let mut binding = BTreeMap::new();
    pattern
        .match_vars(target, &mut binding)
        .then(|| Substitution::from_pairs(binding))
}

/// `s(G) ⊆ G`
pub fn closed_under_subst(g: &BTreeSet<Formula>, s: &Substitution) -> bool {
    g.iter().all(|a| g.contains(&a.subst(s)))
}

/// `G ⊆ s(G)`
pub fn closed_under_reverse(g: &BTreeSet<Formula>, s: &Substitution) -> bool {
    let image: BTreeSet<Formula> = g.iter().map(|a| a.subst(s)).collect();
    g.is_subset(&image)
}

/// `s(A) ∈ G ⇒ A ∈ G` for every `A` in `universe`: closure under the
/// inferences reverse substitution licenses, relative to a finite universe.
/// A set is closed under `s` exactly when its complement in a universe
/// that `s` maps into itself is closed in this sense.
pub fn closed_under_reverse_in(g: &BTreeSet<Formula>, universe: &BTreeSet<Formula>, s: &Substitution) -> bool {
    universe.iter().all(|a| !g.contains(&a.subst(s)) || g.contains(a))
}

fn fmt_formula(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f.node() {
        FormulaNode::Var(s) | FormulaNode::Meta(s) => write!(out, "{s}"),
        FormulaNode::App(Connective::Not, args) => {
            out.write_str("~")?;
            fmt_child(&args[0], 5, out)
        }
        FormulaNode::App(Connective::Named(name, _), args) => {
            write!(out, "{name}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.write_str(", ")?;
                }
                fmt_formula(a, out)?;
            }
            out.write_str(")")
        }
        FormulaNode::App(c, args) => {
            let p = c.precedence();
            // `->` groups to the right, the other infix connectives to the left.
            let (lp, rp) = if *c == Connective::Imp { (p + 1, p) } else { (p, p + 1) };
            fmt_child(&args[0], lp, out)?;
            write!(out, " {} ", c.symbol())?;
            fmt_child(&args[1], rp, out)
        }
    }
}

fn fmt_child(f: &Formula, min_prec: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let needs_parens = match f.node() {
        FormulaNode::App(c, _) => c.is_infix() && c.precedence() < min_prec,
        _ => false,
    };
    if needs_parens {
        out.write_str("(")?;
        fmt_formula(f, out)?;
        out.write_str(")")
    } else {
        fmt_formula(f, out)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// Canonical names for the `n`-th generic variable: `p, q, r, s, t, u, v, w`,
/// then `x8, x9, ...`.
pub fn generic_var_name(n: usize) -> String {
    const NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];
    NAMES.get(n).map(|s| s.to_string()).unwrap_or_else(|| format!("x{n}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn subst(pairs: &[(&str, &str)]) -> Substitution {
        Substitution::from_pairs(pairs.iter().map(|(k, v)| (Symbol::new(k), f(v))))
    }

    #[test]
    fn apply_subst_examples() {
        assert_eq!(apply_subst(&subst(&[("p", "p -> p")]), &f("~p")), f("~(p -> p)"));
        assert_eq!(apply_subst(&Substitution::identity(), &f("p -> q")), f("p -> q"));
        assert_eq!(apply_subst(&subst(&[("p", "q"), ("q", "p")]), &f("p -> q")), f("q -> p"));
    }

    #[test]
    fn compose_examples() {
        let c = compose_subst(&subst(&[("q", "r")]), &subst(&[("p", "q")]));
        assert_eq!(c, subst(&[("p", "r"), ("q", "r")]));
        for a in ["p", "q"] {
            assert_eq!(
                apply_subst(&c, &f(a)),
                apply_subst(&subst(&[("q", "r")]), &apply_subst(&subst(&[("p", "q")]), &f(a)))
            );
        }
        let c = compose_subst(&Substitution::identity(), &subst(&[("p", "q")]));
        assert_eq!(c, subst(&[("p", "q")]));
        let c = compose_subst(&subst(&[("p", "~p")]), &subst(&[("p", "~p")]));
        assert_eq!(c, subst(&[("p", "~~p")]));
    }

    #[test]
    fn match_examples() {
        assert_eq!(match_formula(&f("~p"), &f("~(p -> p)")), Some(subst(&[("p", "p -> p")])));
        assert_eq!(match_formula(&f("p -> p"), &f("p -> q")), None);
        let m = match_formula(&f("p -> q"), &f("(r & s) -> ~r")).unwrap();
        assert_eq!(m, subst(&[("p", "r & s"), ("q", "~r")]));
        assert_eq!(apply_subst(&m, &f("p -> q")), f("(r & s) -> ~r"));
    }

    #[test]
    fn closure_examples() {
        let g: BTreeSet<Formula> = [f("p"), f("p -> p")].into_iter().collect();
        assert!(closed_under_subst(&g, &Substitution::identity()));
        assert!(closed_under_reverse(&g, &Substitution::identity()));
        let single: BTreeSet<Formula> = [f("p")].into_iter().collect();
        let s = subst(&[("p", "p -> p")]);
        assert!(!closed_under_subst(&single, &s));
        assert!(!closed_under_reverse(&single, &s));
    }

    #[test]
    fn reverse_closure_readings() {
        let set = |items: &[&str]| -> BTreeSet<Formula> { items.iter().map(|s| f(s)).collect() };
        let universe = set(&["p", "q"]);
        let s = subst(&[("p", "q")]);
        let g = set(&["q"]);
        let complement = set(&["p"]);
        assert!(closed_under_subst(&g, &s));
        assert!(closed_under_reverse_in(&complement, &universe, &s));
        assert!(!closed_under_reverse(&complement, &s));
    }

    #[test]
    fn signature_checks() {
        let sig = Signature::implicational();
        assert!(sig.check(&f("~p -> q")).is_ok());
        assert_eq!(sig.check(&f("p & q")), Err(SignatureError::Undeclared("&".into())));
        assert!(Signature::new(vec![Connective::Not, Connective::Not]).is_err());
        assert!(matches!(
            Signature::new(vec![Connective::Named(Symbol::new("AND"), 2)]),
            Err(SignatureError::Reserved(_))
        ));
    }

    #[test]
    fn subst_shares_untouched_subtrees() {
        let a = f("(q -> q) -> p");
        let b = a.subst(&subst(&[("p", "r")]));
        let (l1, _) = a.as_imp().unwrap();
        let (l2, _) = b.as_imp().unwrap();
        assert!(l1.ptr_eq(l2));
    }
}
