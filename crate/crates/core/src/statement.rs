//! Signed atomic statements, the meta-language built over them, polarity,
//! substitution and schema instantiation, and the rule-form normalizer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::formula::{Formula, Hashed, Instantiation, Substitution, Symbol};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    /// `⊕`, written `+`.
    Asserted,
    /// `⊖`, written `-`.
    Rejected,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Asserted => Sign::Rejected,
            Sign::Rejected => Sign::Asserted,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Asserted => '+',
            Sign::Rejected => '-',
        }
    }
}

/// `⊕A` or `⊖A`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub sign: Sign,
    pub body: Formula,
}

impl Atom {
    pub fn new(sign: Sign, body: Formula) -> Self {
        Atom { sign, body }
    }

    pub fn asserted(body: Formula) -> Self {
        Atom::new(Sign::Asserted, body)
    }

    pub fn rejected(body: Formula) -> Self {
        Atom::new(Sign::Rejected, body)
    }

    pub fn flip(&self) -> Atom {
        Atom::new(self.sign.flip(), self.body.clone())
    }

    pub fn subst(&self, s: &Substitution) -> Atom {
        Atom::new(self.sign, self.body.subst(s))
    }

    pub fn instantiate(&self, inst: &Instantiation) -> Atom {
        Atom::new(self.sign, self.body.instantiate(inst))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sign.symbol())?;
        if self.body.node_is_infix() {
            write!(f, "({})", self.body)
        } else {
            write!(f, "{}", self.body)
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl Formula {
    fn node_is_infix(&self) -> bool {
        matches!(self.node(), crate::formula::FormulaNode::App(c, _) if c.is_infix())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum StatementNode {
    Atom(Atom),
    Top,
    Bot,
    And(Statement, Statement),
    Or(Statement, Statement),
    Imp(Statement, Statement),
    Not(Statement),
}

/// A meta-level statement; schemata are statements whose formulas contain
/// metavariables.
#[derive(Clone)]
pub struct Statement(Arc<Hashed<StatementNode>>);

impl PartialEq for Statement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.node == other.0.node)
    }
}

impl Eq for Statement {}

impl Hash for Statement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash)
    }
}

impl PartialOrd for Statement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Statement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return std::cmp::Ordering::Equal;
        }
        self.0.node.cmp(&other.0.node)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Polarity {
    Positive,
    Negative,
    Mixed,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetaEvalError {
    #[error("no truth value assigned to atom {0}")]
    Unassigned(String),
}

impl Statement {
    fn from_node(node: StatementNode) -> Self {
        Statement(Arc::new(Hashed::new(node, 0)))
    }

    pub fn node(&self) -> &StatementNode {
        &self.0.node
    }

    pub fn atom(a: Atom) -> Self {
        Statement::from_node(StatementNode::Atom(a))
    }

    pub fn asserted(body: Formula) -> Self {
        Statement::atom(Atom::asserted(body))
    }

    pub fn rejected(body: Formula) -> Self {
        Statement::atom(Atom::rejected(body))
    }

    pub fn top() -> Self {
        Statement::from_node(StatementNode::Top)
    }

    pub fn bot() -> Self {
        Statement::from_node(StatementNode::Bot)
    }

    pub fn and(a: Statement, b: Statement) -> Self {
        Statement::from_node(StatementNode::And(a, b))
    }

    pub fn or(a: Statement, b: Statement) -> Self {
        Statement::from_node(StatementNode::Or(a, b))
    }

    pub fn imp(a: Statement, b: Statement) -> Self {
        Statement::from_node(StatementNode::Imp(a, b))
    }

    pub fn not(a: Statement) -> Self {
        Statement::from_node(StatementNode::Not(a))
    }

    /// Left-nested conjunction; `⊤` when empty.
    pub fn conj(items: impl IntoIterator<Item = Statement>) -> Self {
        items.into_iter().reduce(Statement::and).unwrap_or_else(Statement::top)
    }

    /// Left-nested disjunction; `⊥` when empty.
    pub fn disj(items: impl IntoIterator<Item = Statement>) -> Self {
        items.into_iter().reduce(Statement::or).unwrap_or_else(Statement::bot)
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self.node() {
            StatementNode::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_imp(&self) -> Option<(&Statement, &Statement)> {
        match self.node() {
            StatementNode::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn ptr_eq(&self, other: &Statement) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Atoms in order of first occurrence, without duplicates.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| {
            if !out.contains(a) {
                out.push(a.clone());
            }
        });
        out
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self.node() {
            StatementNode::Atom(a) => f(a),
            StatementNode::Top | StatementNode::Bot => {}
            StatementNode::And(a, b) | StatementNode::Or(a, b) | StatementNode::Imp(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            StatementNode::Not(a) => a.visit_atoms(f),
        }
    }

    fn any_leaf(&self, pred: &impl Fn(&StatementNode) -> bool) -> bool {
        match self.node() {
            StatementNode::And(a, b) | StatementNode::Or(a, b) | StatementNode::Imp(a, b) => {
                a.any_leaf(pred) || b.any_leaf(pred)
            }
            StatementNode::Not(a) => a.any_leaf(pred),
            leaf => pred(leaf),
        }
    }

    /// Positive: no `⊥` and no rejected atoms. Negative: no `⊤` and no
    /// asserted atoms.
    pub fn polarity(&self) -> Polarity {
        let has_bot_or_rejected = self.any_leaf(&|n| match n {
            StatementNode::Bot => true,
            StatementNode::Atom(a) => a.sign == Sign::Rejected,
            _ => false,
        });
        let has_top_or_asserted = self.any_leaf(&|n| match n {
            StatementNode::Top => true,
            StatementNode::Atom(a) => a.sign == Sign::Asserted,
            _ => false,
        });
        match (has_bot_or_rejected, has_top_or_asserted) {
            (false, true) => Polarity::Positive,
            (true, false) => Polarity::Negative,
            _ => Polarity::Mixed,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity() == Polarity::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.polarity() == Polarity::Negative
    }

    /// Rewrites every atom, sharing untouched subtrees.
    pub fn map_atoms(&self, f: &impl Fn(&Atom) -> Atom) -> Statement {
        match self.node() {
            StatementNode::Atom(a) => {
                let b = f(a);
                if b.body.ptr_eq(&a.body) && b.sign == a.sign {
                    self.clone()
                } else {
                    Statement::atom(b)
                }
            }
            StatementNode::Top | StatementNode::Bot => self.clone(),
            StatementNode::And(a, b) => Statement::and(a.map_atoms(f), b.map_atoms(f)),
            StatementNode::Or(a, b) => Statement::or(a.map_atoms(f), b.map_atoms(f)),
            StatementNode::Imp(a, b) => Statement::imp(a.map_atoms(f), b.map_atoms(f)),
            StatementNode::Not(a) => Statement::not(a.map_atoms(f)),
        }
    }

    pub fn subst(&self, s: &Substitution) -> Statement {
        if s.is_identity() {
            return self.clone();
        }
        self.map_atoms(&|a| a.subst(s))
    }

    pub fn instantiate(&self, inst: &Instantiation) -> Statement {
        if inst.is_empty() {
            return self.clone();
        }
        self.map_atoms(&|a| a.instantiate(inst))
    }

    /// Metavariables occurring in the statement's formulas.
    pub fn metas(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::new();
        self.visit_atoms(&mut |a| {
            for m in a.body.metas() {
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        });
        out
    }

    /// Propositional variables occurring in the statement's formulas.
    pub fn vars(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::new();
        self.visit_atoms(&mut |a| {
            for m in a.body.vars() {
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        });
        out
    }

    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.visit_atoms(&mut |a| ground &= a.body.is_ground());
        ground
    }

    pub fn size(&self) -> usize {
        match self.node() {
            StatementNode::Atom(a) => a.body.size(),
            StatementNode::Top | StatementNode::Bot => 1,
            StatementNode::And(a, b) | StatementNode::Or(a, b) | StatementNode::Imp(a, b) => {
                1 + a.size() + b.size()
            }
            StatementNode::Not(a) => 1 + a.size(),
        }
    }

    /// Classical evaluation with atoms looked up in `v`.
    pub fn meta_eval(&self, v: &impl Fn(&Atom) -> Option<bool>) -> Result<bool, MetaEvalError> {
        Ok(match self.node() {
            StatementNode::Atom(a) => v(a).ok_or_else(|| MetaEvalError::Unassigned(a.to_string()))?,
            StatementNode::Top => true,
            StatementNode::Bot => false,
            StatementNode::And(a, b) => a.meta_eval(v)? & b.meta_eval(v)?,
            StatementNode::Or(a, b) => a.meta_eval(v)? | b.meta_eval(v)?,
            StatementNode::Imp(a, b) => !a.meta_eval(v)? | b.meta_eval(v)?,
            StatementNode::Not(a) => !a.meta_eval(v)?,
        })
    }

    /// Whether the statement is a classical tautology when atoms are read as
    /// independent propositional letters.
    pub fn is_meta_tautology(&self) -> bool {
        let atoms = self.atoms();
        assert!(atoms.len() < 24, "too many atoms for exhaustive meta evaluation");
        (0u32..1 << atoms.len()).all(|bits| {
            self.meta_eval(&|a| atoms.iter().position(|b| b == a).map(|i| bits >> i & 1 == 1))
                .expect("all atoms assigned")
        })
    }

    /// Matches this schema against `target`, binding metavariables.
    pub fn match_schema(&self, target: &Statement, binding: &mut BTreeMap<Symbol, Formula>) -> bool {
        match (self.node(), target.node()) {
            (StatementNode::Atom(a), StatementNode::Atom(b)) => {
                a.sign == b.sign && a.body.match_metas(&b.body, binding)
            }
            (StatementNode::Top, StatementNode::Top) | (StatementNode::Bot, StatementNode::Bot) => true,
            (StatementNode::And(a1, b1), StatementNode::And(a2, b2))
            | (StatementNode::Or(a1, b1), StatementNode::Or(a2, b2))
            | (StatementNode::Imp(a1, b1), StatementNode::Imp(a2, b2)) => {
                a1.match_schema(a2, binding) && b1.match_schema(b2, binding)
            }
            (StatementNode::Not(a1), StatementNode::Not(a2)) => a1.match_schema(a2, binding),
            _ => false,
        }
    }
}

/// `polarity(a)`
pub fn polarity(a: &Statement) -> Polarity {
    a.polarity()
}

/// `subst_statement(s, a)`: the homomorphic extension of `s` to statements.
pub fn subst_statement(s: &Substitution, a: &Statement) -> Statement {
    a.subst(s)
}

/// The unique metavariable binding turning `schema` into `a`, if any.
pub fn instance_of(schema: &Statement, a: &Statement) -> Option<Instantiation> {
    let mut binding = BTreeMap::new();
    schema
        .match_schema(a, &mut binding)
        .then(|| Instantiation::new(binding))
}

/// Builds the instance of `schema` under `inst`.
pub fn build_instance(schema: &Statement, inst: &Instantiation) -> Statement {
    schema.instantiate(inst)
}

/// Classical evaluation under a finite valuation of atoms.
pub fn meta_eval(a: &Statement, v: &BTreeMap<Atom, bool>) -> Result<bool, MetaEvalError> {
    a.meta_eval(&|atom| v.get(atom).copied())
}

fn fmt_statement(s: &Statement, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = match s.node() {
        StatementNode::Imp(..) => 1,
        StatementNode::Or(..) => 2,
        StatementNode::And(..) => 3,
        _ => 4,
    };
    let paren = prec < min_prec;
    if paren {
        f.write_str("(")?;
    }
    match s.node() {
        StatementNode::Atom(a) => write!(f, "{a}")?,
        StatementNode::Top => f.write_str("TOP")?,
        StatementNode::Bot => f.write_str("BOT")?,
        StatementNode::Not(a) => {
            f.write_str("NOT ")?;
            fmt_statement(a, 4, f)?;
        }
        StatementNode::And(a, b) => {
            fmt_statement(a, 3, f)?;
            f.write_str(" AND ")?;
            fmt_statement(b, 4, f)?;
        }
        StatementNode::Or(a, b) => {
            fmt_statement(a, 2, f)?;
            f.write_str(" OR ")?;
            fmt_statement(b, 3, f)?;
        }
        StatementNode::Imp(a, b) => {
            fmt_statement(a, 2, f)?;
            f.write_str(" => ")?;
            fmt_statement(b, 1, f)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_statement(self, 0, f)
    }
}

impl fmt::Debug for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// `(⩓ premises) ⟹ (⩔ conclusions)` over atomic statements.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct RuleForm {
    pub premises: BTreeSet<Atom>,
    pub conclusions: BTreeSet<Atom>,
}

impl RuleForm {
    pub fn new(
        premises: impl IntoIterator<Item = Atom>,
        conclusions: impl IntoIterator<Item = Atom>,
    ) -> Self {
        RuleForm {
            premises: premises.into_iter().collect(),
            conclusions: conclusions.into_iter().collect(),
        }
    }

    /// Re-encodes the rule as a statement; empty sides become `⊤` and `⊥`.
    pub fn to_statement(&self) -> Statement {
        let prem = Statement::conj(self.premises.iter().cloned().map(Statement::atom));
        let concl = Statement::disj(self.conclusions.iter().cloned().map(Statement::atom));
        Statement::imp(prem, concl)
    }

    fn subsumes(&self, other: &RuleForm) -> bool {
        self.premises.is_subset(&other.premises) && self.conclusions.is_subset(&other.conclusions)
    }

    fn sort_key(&self) -> (Vec<&Atom>, &BTreeSet<Atom>) {
        let mut all: Vec<&Atom> = self.premises.iter().chain(&self.conclusions).collect();
        all.sort();
        (all, &self.premises)
    }
}

fn fmt_atom_set(set: &BTreeSet<Atom>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    f.write_str("{")?;
    for (i, a) in set.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str("}")
}

impl fmt::Display for RuleForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_atom_set(&self.premises, f)?;
        f.write_str(" / ")?;
        fmt_atom_set(&self.conclusions, f)
    }
}

/// A literal of the clausal form: an atom or its meta-negation.
type Literal = (Atom, bool);

/// Conjunctive normal form as a list of clauses; `None` marks a clause that
/// became a tautology.
fn cnf(s: &Statement, positive: bool) -> Vec<Vec<Literal>> {
    match (s.node(), positive) {
        (StatementNode::Atom(a), pol) => vec![vec![(a.clone(), pol)]],
        (StatementNode::Top, true) | (StatementNode::Bot, false) => vec![],
        (StatementNode::Top, false) | (StatementNode::Bot, true) => vec![vec![]],
        (StatementNode::Not(a), pol) => cnf(a, !pol),
        (StatementNode::And(a, b), true) => {
            let mut out = cnf(a, true);
            out.extend(cnf(b, true));
            out
        }
        (StatementNode::Or(a, b), false) => {
            let mut out = cnf(a, false);
            out.extend(cnf(b, false));
            out
        }
        (StatementNode::Imp(a, b), false) => {
            let mut out = cnf(a, true);
            out.extend(cnf(b, false));
            out
        }
        (StatementNode::Or(a, b), true) => distribute(cnf(a, true), cnf(b, true)),
        (StatementNode::And(a, b), false) => distribute(cnf(a, false), cnf(b, false)),
        (StatementNode::Imp(a, b), true) => distribute(cnf(a, false), cnf(b, true)),
    }
}

fn distribute(left: Vec<Vec<Literal>>, right: Vec<Vec<Literal>>) -> Vec<Vec<Literal>> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for l in &left {
        for r in &right {
            let mut c = l.clone();
            c.extend(r.iter().cloned());
            out.push(c);
        }
    }
    out
}

/// Normalizes a statement into a meta-conjunction of rule forms.
///
/// Tautological and subsumed clauses are dropped and the result is sorted,
/// so equal inputs up to meta-equivalence of clause sets give equal output.
pub fn to_rule_form(a: &Statement) -> Vec<RuleForm> {
    let mut rules: Vec<RuleForm> = Vec::new();
    for clause in cnf(a, true) {
        let mut rule = RuleForm::default();
        for (atom, pol) in clause {
            if pol {
                rule.conclusions.insert(atom);
            } else {
                rule.premises.insert(atom);
            }
        }
        if rule.premises.intersection(&rule.conclusions).next().is_none() {
            rules.push(rule);
        }
    }
    rules.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    rules.dedup();
    let kept: Vec<RuleForm> = rules
        .iter()
        .filter(|r| !rules.iter().any(|o| o != *r && o.subsumes(r)))
        .cloned()
        .collect();
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_statement;

    fn st(s: &str) -> Statement {
        parse_statement(s).unwrap()
    }

    #[test]
    fn polarity_examples() {
        assert_eq!(st("+A => +B").polarity(), Polarity::Positive);
        assert_eq!(st("-B").polarity(), Polarity::Negative);
        assert_eq!(st("(+A => +B) AND -B").polarity(), Polarity::Mixed);
        assert_eq!(st("BOT => -q").polarity(), Polarity::Negative);
        assert_eq!(st("TOP").polarity(), Polarity::Positive);
    }

    #[test]
    fn substitution_examples() {
        let s = crate::syntax::parse_substitution("{p:=q}").unwrap();
        assert_eq!(subst_statement(&s, &st("+p => -p")), st("+q => -q"));
        let s = crate::syntax::parse_substitution("{p:=p -> p}").unwrap();
        assert_eq!(subst_statement(&s, &st("-~p")), st("-~(p -> p)"));
    }

    #[test]
    fn instance_examples() {
        let mp = st("(+X AND +(X -> Y)) => +Y");
        let m = instance_of(&mp, &st("(+p AND +(p -> q)) => +q")).unwrap();
        assert_eq!(m.to_string(), "{X:=p, Y:=q}");
        assert!(instance_of(&st("+X"), &st("-p")).is_none());
        let mt = st("(-Y AND +(X -> Y)) => -X");
        let m = instance_of(&mt, &st("(-p AND +(~(p -> p) -> p)) => -~(p -> p)")).unwrap();
        assert_eq!(m.to_string(), "{X:=~(p -> p), Y:=p}");
        assert!(instance_of(&mp, &st("(+p AND +(q -> q)) => +q")).is_none());
    }

    #[test]
    fn meta_eval_examples() {
        let v = BTreeMap::from([(Atom::asserted(Formula::var("p")), true), (Atom::rejected(Formula::var("q")), false)]);
        assert!(meta_eval(&st("+p => +p"), &v).unwrap());
        assert!(meta_eval(&st("BOT => -q"), &v).unwrap());
        assert!(!meta_eval(&st("NOT +p OR -q"), &v).unwrap());
        assert!(meta_eval(&st("+r"), &v).is_err());
    }

    #[test]
    fn rule_form_examples() {
        let show = |s: &str| {
            to_rule_form(&st(s)).iter().map(|r| r.to_string()).collect::<Vec<_>>()
        };
        assert_eq!(show("NOT +A OR -B"), vec!["{+A} / {-B}"]);
        assert_eq!(show("+A"), vec!["{} / {+A}"]);
        assert_eq!(show("(+A => +B) AND -C"), vec!["{+A} / {+B}", "{} / {-C}"]);
        assert_eq!(show("NOT(+A AND -B) OR +C"), vec!["{+A, -B} / {+C}"]);
        assert!(show("TOP").is_empty());
        assert_eq!(show("BOT"), vec!["{} / {}"]);
        assert!(show("+A => +A").is_empty());
        assert_eq!(show("+A AND (+A OR +B)"), vec!["{} / {+A}"]);
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "(+p AND +(p -> q)) => +q",
            "+p => +q => +r",
            "(+p => +q) => +r",
            "NOT (+p OR -q) AND TOP",
            "NOT NOT -~~p",
            "+p OR (+q OR +r)",
        ] {
            let a = st(s);
            assert_eq!(st(&a.to_string()), a, "{s}");
        }
        assert_eq!(st("(+p AND +(p -> q)) => +q").to_string(), "+p AND +(p -> q) => +q");
    }
}
