//! A kernel for meta-logics of inference rules with assertion and rejection.
//!
//! Formulas are signed with `⊕` (asserted) or `⊖` (rejected) to form atomic
//! statements, which are combined with classical meta-connectives. Deductive
//! systems over such statements are checked step by step, and the built-in
//! Łukasiewicz refutation calculus decides classical propositional logic with
//! a checkable certificate for every answer.

pub mod consequence;
pub mod cpl;
pub mod deduction;
pub mod formula;
pub mod oracle;
pub(crate) mod hilbert;
pub mod statement;
pub mod syntax;
pub(crate) mod template;

pub use formula::{
    apply_subst, closed_under_reverse, closed_under_reverse_in, closed_under_subst, compose_subst, match_formula,
    Connective, Formula, FormulaNode, Instantiation, Signature, SignatureError, Substitution,
    Symbol,
};
pub use statement::{
    build_instance, instance_of, meta_eval, polarity, subst_statement, to_rule_form, Atom,
    MetaEvalError, Polarity, RuleForm, Sign, Statement, StatementNode,
};
pub use syntax::{parse_atom, parse_formula, parse_statement, parse_substitution, ParseError};
