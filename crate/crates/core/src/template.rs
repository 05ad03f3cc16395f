//! Formula-shaped templates instantiated into either object formulas or
//! meta-level statements.
//!
//! A template is an ordinary [`Formula`] whose propositional variables are
//! placeholders. The same template, e.g. `p -> (q -> p)`, denotes an object
//! theorem schema when placeholders range over formulas and a meta-axiom
//! schema when they range over statements (with `->` read as `⟹`).

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use crate::formula::{Connective, Formula, FormulaNode, Symbol};
use crate::statement::{Statement, StatementNode};

/// The meta-constants have no object counterpart; templates spell them as
/// nullary named connectives.
pub(crate) fn top_template() -> Formula {
    Formula::app(Connective::Named(Symbol::new("TOP"), 0), vec![])
}

pub(crate) fn bot_template() -> Formula {
    Formula::app(Connective::Named(Symbol::new("BOT"), 0), vec![])
}

/// One layer of a term in a language with classical connectives.
pub(crate) enum View<L> {
    Not(L),
    Imp(L, L),
    And(L, L),
    Or(L, L),
    Eqv(L, L),
    Top,
    Bot,
    /// Anything the templates treat as opaque: variables, atoms, or
    /// applications of connectives outside the classical set.
    Leaf,
}

pub(crate) trait Lang: Clone + Eq + Hash + Ord + fmt::Display + fmt::Debug {
    fn view(&self) -> View<Self>;
    /// Builds one layer; `None` when the language lacks the construct.
    fn build(view: View<Self>) -> Option<Self>;

    fn imp(a: Self, b: Self) -> Self {
        Self::build(View::Imp(a, b)).expect("every language has implication")
    }

    fn not(a: Self) -> Self {
        Self::build(View::Not(a)).expect("every language has negation")
    }
}

impl Lang for Formula {
    fn view(&self) -> View<Self> {
        match self.node() {
            FormulaNode::App(c, args) => match c {
                Connective::Not => View::Not(args[0].clone()),
                Connective::Imp => View::Imp(args[0].clone(), args[1].clone()),
                Connective::And => View::And(args[0].clone(), args[1].clone()),
                Connective::Or => View::Or(args[0].clone(), args[1].clone()),
                Connective::Eqv => View::Eqv(args[0].clone(), args[1].clone()),
                Connective::Named(..) if *self == top_template() => View::Top,
                Connective::Named(..) if *self == bot_template() => View::Bot,
                Connective::Named(..) => View::Leaf,
            },
            _ => View::Leaf,
        }
    }

    fn build(view: View<Self>) -> Option<Self> {
        Some(match view {
            View::Not(a) => Formula::not(a),
            View::Imp(a, b) => Formula::imp(a, b),
            View::And(a, b) => Formula::and(a, b),
            View::Or(a, b) => Formula::or(a, b),
            View::Eqv(a, b) => Formula::eqv(a, b),
            View::Top => top_template(),
            View::Bot => bot_template(),
            View::Leaf => return None,
        })
    }
}

impl Lang for Statement {
    fn view(&self) -> View<Self> {
        match self.node() {
            StatementNode::Atom(_) => View::Leaf,
            StatementNode::Top => View::Top,
            StatementNode::Bot => View::Bot,
            StatementNode::And(a, b) => View::And(a.clone(), b.clone()),
            StatementNode::Or(a, b) => View::Or(a.clone(), b.clone()),
            StatementNode::Imp(a, b) => View::Imp(a.clone(), b.clone()),
            StatementNode::Not(a) => View::Not(a.clone()),
        }
    }

    fn build(view: View<Self>) -> Option<Self> {
        Some(match view {
            View::Not(a) => Statement::not(a),
            View::Imp(a, b) => Statement::imp(a, b),
            View::And(a, b) => Statement::and(a, b),
            View::Or(a, b) => Statement::or(a, b),
            View::Top => Statement::top(),
            View::Bot => Statement::bot(),
            View::Eqv(..) | View::Leaf => return None,
        })
    }
}

pub(crate) type Args<L> = BTreeMap<Symbol, L>;

/// Replaces every placeholder of `t` by its binding. Placeholders without a
/// binding take the value of `fallback`; `None` is returned if there is none
/// or the target language lacks one of the template's connectives.
pub(crate) fn instantiate<L: Lang>(t: &Formula, args: &Args<L>, fallback: Option<&L>) -> Option<L> {
    match t.node() {
        FormulaNode::Var(v) => args.get(v).or(fallback).cloned(),
        FormulaNode::Meta(_) => None,
        FormulaNode::App(..) => {
            let view = match t.view() {
                View::Not(a) => View::Not(instantiate(&a, args, fallback)?),
                View::Imp(a, b) => {
                    View::Imp(instantiate(&a, args, fallback)?, instantiate(&b, args, fallback)?)
                }
                View::And(a, b) => {
                    View::And(instantiate(&a, args, fallback)?, instantiate(&b, args, fallback)?)
                }
                View::Or(a, b) => {
                    View::Or(instantiate(&a, args, fallback)?, instantiate(&b, args, fallback)?)
                }
                View::Eqv(a, b) => {
                    View::Eqv(instantiate(&a, args, fallback)?, instantiate(&b, args, fallback)?)
                }
                View::Top => View::Top,
                View::Bot => View::Bot,
                View::Leaf => return None,
            };
            L::build(view)
        }
    }
}

/// One-sided matching of a template against a value.
pub(crate) fn match_template<L: Lang>(t: &Formula, value: &L, args: &mut Args<L>) -> bool {
    if let FormulaNode::Var(v) = t.node() {
        return match args.get(v) {
            Some(bound) => bound == value,
            None => {
                args.insert(v.clone(), value.clone());
                true
            }
        };
    }
    match (t.view(), value.view()) {
        (View::Not(a), View::Not(x)) => match_template(&a, &x, args),
        (View::Imp(a, b), View::Imp(x, y))
        | (View::And(a, b), View::And(x, y))
        | (View::Or(a, b), View::Or(x, y))
        | (View::Eqv(a, b), View::Eqv(x, y)) => {
            match_template(&a, &x, args) && match_template(&b, &y, args)
        }
        (View::Top, View::Top) | (View::Bot, View::Bot) => true,
        _ => false,
    }
}

/// Classical evaluation with leaves looked up by `leaf`.
pub(crate) fn eval<L: Lang>(x: &L, leaf: &impl Fn(&L) -> bool) -> bool {
    match x.view() {
        View::Not(a) => !eval(&a, leaf),
        View::Imp(a, b) => !eval(&a, leaf) || eval(&b, leaf),
        View::And(a, b) => eval(&a, leaf) && eval(&b, leaf),
        View::Or(a, b) => eval(&a, leaf) || eval(&b, leaf),
        View::Eqv(a, b) => eval(&a, leaf) == eval(&b, leaf),
        View::Top => true,
        View::Bot => false,
        View::Leaf => leaf(x),
    }
}

/// Leaves in order of first occurrence.
pub(crate) fn leaves<L: Lang>(x: &L, out: &mut Vec<L>) {
    match x.view() {
        View::Not(a) => leaves(&a, out),
        View::Imp(a, b) | View::And(a, b) | View::Or(a, b) | View::Eqv(a, b) => {
            leaves(&a, out);
            leaves(&b, out);
        }
        View::Top | View::Bot => {}
        View::Leaf => {
            if !out.contains(x) {
                out.push(x.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_statement};

    #[test]
    fn instantiate_into_statements() {
        let k1 = parse_formula("a -> (b -> a)").unwrap();
        let args = Args::from([
            (Symbol::new("a"), parse_statement("+p").unwrap()),
            (Symbol::new("b"), parse_statement("-q").unwrap()),
        ]);
        let s = instantiate(&k1, &args, None).unwrap();
        assert_eq!(s, parse_statement("+p => (-q => +p)").unwrap());
        let mut back = Args::new();
        assert!(match_template(&k1, &s, &mut back));
        assert_eq!(back, args);
        let eqv = parse_formula("a <-> b").unwrap();
        assert!(instantiate(&eqv, &args, None).is_none());
    }

    #[test]
    fn meta_constants() {
        let t = Formula::imp(bot_template(), Formula::var("a"));
        let args = Args::from([(Symbol::new("a"), parse_statement("-r").unwrap())]);
        let s: Statement = instantiate(&t, &args, None).unwrap();
        assert_eq!(s, parse_statement("BOT => -r").unwrap());
    }
}
