//! Semantic back end: two-valued truth tables, finite Boolean-algebra
//! matrices, bounded admissibility search, and the saturation audit of a
//! calculus.

mod admissible;
mod audit;
mod matrix;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{Connective, Formula, FormulaNode, Symbol};
use crate::statement::{Atom, Sign, Statement};

pub use admissible::{check_admissible_bounded, contrapose_rule, pigeonhole_rule, rk_verbatim_rule, Admissibility};
pub use audit::{saturate_and_audit, AuditReport, Finding, FindingKind};
pub use matrix::{local_counterexample, local_valid, MatrixModel};

/// Rules at the object level are rule forms over atomic statements.
pub type SignedRule = crate::statement::RuleForm;

/// Most variables a truth table is built for.
pub const MAX_TAUTOLOGY_VARS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{found} variables exceed the limit of {limit}")]
    TooManyVariables { found: usize, limit: usize },
    #[error("no two-valued semantics for connective `{0}`")]
    NoSemantics(Symbol),
    #[error("{0} contains metavariables")]
    NotGround(String),
    #[error("matrix validity covers asserted atoms only; {0} is rejected (use check_admissible_bounded)")]
    RejectedAtom(Atom),
    #[error("a matrix needs between 1 and {max} bits, not {found}")]
    MatrixBits { found: u32, max: u32 },
    #[error("only single-conclusion rules over asserted atoms can be contraposed")]
    NotContraposable,
    #[error("search space of {0} cases exceeds the cap")]
    TooLarge(u128),
}

/// A two-valued valuation in the order variables first occur.
pub type Valuation = Vec<(Symbol, bool)>;

/// Postfix program evaluating a formula on 64 valuations at once.
enum Op {
    Var(usize),
    Not,
    And,
    Or,
    Imp,
    Eqv,
}

struct Compiled {
    vars: Vec<Symbol>,
    ops: Vec<Op>,
}

/// Bit patterns for the first six variables.
const PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl Compiled {
    fn new(a: &Formula) -> Result<Self, OracleError> {
        let mut c = Compiled { vars: Vec::new(), ops: Vec::new() };
        c.push(a)?;
        if c.vars.len() > MAX_TAUTOLOGY_VARS {
            return Err(OracleError::TooManyVariables { found: c.vars.len(), limit: MAX_TAUTOLOGY_VARS });
        }
        Ok(c)
    }

    fn push(&mut self, a: &Formula) -> Result<(), OracleError> {
        match a.node() {
            FormulaNode::Var(s) | FormulaNode::Meta(s) => {
                let i = match self.vars.iter().position(|v| v == s) {
                    Some(i) => i,
                    None => {
                        self.vars.push(s.clone());
                        self.vars.len() - 1
                    }
                };
                self.ops.push(Op::Var(i));
            }
            FormulaNode::App(c, args) => {
                for x in args {
                    self.push(x)?;
                }
                self.ops.push(match c {
                    Connective::Not => Op::Not,
                    Connective::And => Op::And,
                    Connective::Or => Op::Or,
                    Connective::Imp => Op::Imp,
                    Connective::Eqv => Op::Eqv,
                    Connective::Named(name, _) => return Err(OracleError::NoSemantics(name.clone())),
                });
            }
        }
        Ok(())
    }

    /// Number of 64-valuation words; valuation `b` sets variable `i` to bit
    /// `i` of `b`.
    fn words(&self) -> usize {
        1 << self.vars.len().saturating_sub(6)
    }

    /// Mask of meaningful bits in each word.
    fn mask(&self) -> u64 {
        match self.vars.len() {
            n if n >= 6 => u64::MAX,
            n => (1u64 << (1 << n)) - 1,
        }
    }

    fn eval_word(&self, w: usize, stack: &mut Vec<u64>) -> u64 {
        stack.clear();
        for op in &self.ops {
            let v = match op {
                Op::Var(i) if *i < 6 => PATTERNS[*i],
                Op::Var(i) => {
                    if w >> (i - 6) & 1 == 1 {
                        u64::MAX
                    } else {
                        0
                    }
                }
                Op::Not => !stack.pop().expect("operand"),
                bin => {
                    let y = stack.pop().expect("operand");
                    let x = stack.pop().expect("operand");
                    match bin {
                        Op::And => x & y,
                        Op::Or => x | y,
                        Op::Imp => !x | y,
                        Op::Eqv => !(x ^ y),
                        _ => unreachable!(),
                    }
                }
            };
            stack.push(v);
        }
        stack.pop().expect("result") & self.mask()
    }

    fn is_tautology(&self) -> bool {
        let mask = self.mask();
        let mut stack = Vec::with_capacity(self.ops.len());
        (0..self.words()).all(|w| self.eval_word(w, &mut stack) == mask)
    }

    /// The first falsifying valuation, trying valuations lexicographically
    /// in variable order with `true` before `false`.
    fn falsifier(&self) -> Option<Valuation> {
        let n = self.vars.len();
        let mut stack = Vec::with_capacity(self.ops.len());
        let table: Vec<u64> = (0..self.words()).map(|w| self.eval_word(w, &mut stack)).collect();
        (0u64..1 << n).find_map(|t| {
            let vals: Vec<bool> = (0..n).map(|j| t >> (n - 1 - j) & 1 == 0).collect();
            let b = vals.iter().enumerate().fold(0u64, |acc, (j, &v)| acc | (v as u64) << j);
            let bit = table[(b >> 6) as usize] >> (b & 63) & 1;
            (bit == 0).then(|| self.vars.iter().cloned().zip(vals).collect())
        })
    }
}

/// Whether `a` is true under every two-valued valuation.
pub fn is_tautology(a: &Formula) -> Result<bool, OracleError> {
    Ok(Compiled::new(a)?.is_tautology())
}

/// A valuation falsifying `a`, if any; see [`is_tautology`] for limits.
pub fn falsifying_valuation(a: &Formula) -> Result<Option<Valuation>, OracleError> {
    let c = Compiled::new(a)?;
    if c.is_tautology() {
        return Ok(None);
    }
    Ok(c.falsifier())
}

/// The standard reading of an atomic statement: `⊕A` holds iff `A` is a
/// tautology, `⊖A` iff it is not.
pub fn interpret_atom(a: &Atom) -> Result<bool, OracleError> {
    if !a.body.is_ground() {
        return Err(OracleError::NotGround(a.to_string()));
    }
    let t = is_tautology(&a.body)?;
    Ok(match a.sign {
        Sign::Asserted => t,
        Sign::Rejected => !t,
    })
}

/// Evaluates a ground statement under the standard reading of its atoms
/// with classical meta-connectives.
pub fn interpret_statement(a: &Statement) -> Result<bool, OracleError> {
    let mut values = BTreeMap::new();
    let mut err = None;
    a.visit_atoms(&mut |atom| {
        if err.is_none() && !values.contains_key(atom) {
            match interpret_atom(atom) {
                Ok(v) => {
                    values.insert(atom.clone(), v);
                }
                Err(e) => err = Some(e),
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(a.meta_eval(&|atom| values.get(atom).copied()).expect("every atom evaluated"))
}

/// The variables `p, q, r, s, t, u` and then `p7, p8, …`.
pub fn standard_vars(n: usize) -> Vec<Symbol> {
    const NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];
    (0..n)
        .map(|i| match NAMES.get(i) {
            Some(name) => Symbol::new(name),
            None => Symbol::new(&format!("p{}", i + 1)),
        })
        .collect()
}

/// The classical connectives in canonical order.
pub fn classical_connectives() -> Vec<Connective> {
    vec![Connective::Not, Connective::Imp, Connective::And, Connective::Or, Connective::Eqv]
}

/// All formulas over `vars` and `connectives` with at most
/// `max_connectives` connectives, in canonical order: by number of
/// connectives, then by connective in the given order, then by the
/// canonical positions of the arguments.
pub fn enumerate_formulas(vars: &[Symbol], connectives: &[Connective], max_connectives: usize) -> Vec<Formula> {
    let mut levels: Vec<Vec<Formula>> = vec![vars.iter().cloned().map(Formula::var_sym).collect()];
    for n in 1..=max_connectives {
        let mut level = Vec::new();
        for c in connectives {
            match c.arity() {
                1 => level.extend(levels[n - 1].iter().map(|a| Formula::app(c.clone(), vec![a.clone()]))),
                2 => {
                    for i in 0..n {
                        for a in &levels[i] {
                            for b in &levels[n - 1 - i] {
                                level.push(Formula::app(c.clone(), vec![a.clone(), b.clone()]));
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        levels.push(level);
    }
    levels.into_iter().flatten().collect()
}

/// Number of formulas [`enumerate_formulas`] would return.
pub fn count_formulas(vars: usize, connectives: &[Connective], max_connectives: usize) -> u128 {
    let mut levels: Vec<u128> = vec![vars as u128];
    for n in 1..=max_connectives {
        let mut count = 0u128;
        for c in connectives {
            match c.arity() {
                1 => count = count.saturating_add(levels[n - 1]),
                2 => {
                    for i in 0..n {
                        count = count.saturating_add(levels[i].saturating_mul(levels[n - 1 - i]));
                    }
                }
                _ => {}
            }
        }
        levels.push(count);
    }
    levels.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

/// All formulas over `vars` and `connectives` with at most `max_size`
/// symbols, ordered by size and then as in [`enumerate_formulas`].
pub fn enumerate_by_size(vars: &[Symbol], connectives: &[Connective], max_size: usize) -> Vec<Formula> {
    let mut levels: Vec<Vec<Formula>> = vec![Vec::new()];
    for n in 1..=max_size {
        let mut level = Vec::new();
        if n == 1 {
            level.extend(vars.iter().cloned().map(Formula::var_sym));
        }
        for c in connectives {
            match c.arity() {
                1 => level.extend(levels[n - 1].iter().map(|a| Formula::app(c.clone(), vec![a.clone()]))),
                2 if n >= 3 => {
                    for i in 1..n - 1 {
                        for a in &levels[i] {
                            for b in &levels[n - 1 - i] {
                                level.push(Formula::app(c.clone(), vec![a.clone(), b.clone()]));
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        levels.push(level);
    }
    levels.into_iter().flatten().collect()
}

/// Number of formulas [`enumerate_by_size`] would return, saturating at
/// `u128::MAX`.
pub fn count_by_size(vars: usize, connectives: &[Connective], max_size: usize) -> u128 {
    let mut levels: Vec<u128> = vec![0];
    for n in 1..=max_size {
        let mut count = if n == 1 { vars as u128 } else { 0 };
        for c in connectives {
            match c.arity() {
                1 => count = count.saturating_add(levels[n - 1]),
                2 if n >= 3 => {
                    for i in 1..n - 1 {
                        count = count.saturating_add(levels[i].saturating_mul(levels[n - 1 - i]));
                    }
                }
                _ => {}
            }
        }
        levels.push(count);
    }
    levels.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_statement};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn tautologies() {
        assert!(is_tautology(&f("p -> p")).unwrap());
        assert!(is_tautology(&f("~(p -> p) -> p")).unwrap());
        assert!(!is_tautology(&f("p | q")).unwrap());
        assert!(is_tautology(&f("(a & b & c & d & e & f & g & h) -> h")).unwrap());
        assert!(!is_tautology(&f("(a & b & c & d & e & f & g) -> h")).unwrap());
    }

    #[test]
    fn falsifier_order_prefers_true() {
        let v = falsifying_valuation(&f("p -> q")).unwrap().unwrap();
        assert_eq!(v, vec![(Symbol::new("p"), true), (Symbol::new("q"), false)]);
        let v = falsifying_valuation(&f("p")).unwrap().unwrap();
        assert_eq!(v, vec![(Symbol::new("p"), false)]);
        let v = falsifying_valuation(&f("a1 | a2 | a3 | a4 | a5 | a6 | a7 | ~a8")).unwrap().unwrap();
        assert!(v.iter().take(7).all(|(_, b)| !b) && v[7].1);
        assert_eq!(falsifying_valuation(&f("p | ~p")).unwrap(), None);
    }

    #[test]
    fn variable_cap() {
        let big = (1..=21).map(|i| format!("x{i}")).collect::<Vec<_>>().join(" | ");
        assert!(matches!(is_tautology(&f(&big)), Err(OracleError::TooManyVariables { found: 21, .. })));
    }

    #[test]
    fn standard_interpretation() {
        assert!(interpret_statement(&parse_statement("+(p -> p)").unwrap()).unwrap());
        assert!(interpret_statement(&parse_statement("-p").unwrap()).unwrap());
        assert!(!interpret_statement(&parse_statement("+(p | ~p) => +p OR +~p").unwrap()).unwrap());
    }

    #[test]
    fn enumeration_counts() {
        let imp_not = [Connective::Not, Connective::Imp];
        let vars = standard_vars(2);
        for n in 0..=4 {
            assert_eq!(enumerate_formulas(&vars, &imp_not, n).len() as u128, count_formulas(2, &imp_not, n));
        }
        assert_eq!(count_formulas(2, &imp_not, 7), 685_376);
        for n in 0..=6 {
            assert_eq!(enumerate_by_size(&vars, &imp_not, n).len() as u128, count_by_size(2, &imp_not, n));
        }
        assert_eq!(count_by_size(9, &imp_not, 400), u128::MAX);
        assert!(enumerate_by_size(&vars, &imp_not, 4).iter().all(|f| f.size() <= 4));
        let first: Vec<String> = enumerate_formulas(&vars, &imp_not, 1).iter().map(|f| f.to_string()).collect();
        assert_eq!(first, ["p", "q", "~p", "~q", "p -> p", "p -> q", "q -> p", "q -> q"]);
    }
}
