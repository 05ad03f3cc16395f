//! Generators shared by the property tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use metalogic::{Atom, Formula, Sign, Statement, Substitution, Symbol};
use proptest::prelude::*;
use proptest::sample::select;

pub const VARS: &[&str] = &["p", "q", "r"];

/// Formulas over `vars` with every classical connective.
pub fn formula(vars: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    select(vars).prop_map(Formula::var).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::eqv(a, b)),
        ]
    })
}

/// Formulas over `vars` in `{→, ¬}`.
pub fn implicational(vars: &'static [&'static str], depth: u32) -> impl Strategy<Value = Formula> {
    select(vars).prop_map(Formula::var).prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

pub fn substitution(vars: &'static [&'static str]) -> impl Strategy<Value = Substitution> {
    prop::collection::btree_map(select(vars), formula(vars), 0..=3)
        .prop_map(|m| Substitution::from_pairs(m.into_iter().map(|(k, v)| (Symbol::new(k), v))))
}

pub fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Asserted), Just(Sign::Rejected)]
}

pub fn atom(vars: &'static [&'static str]) -> impl Strategy<Value = Atom> {
    (sign(), formula(vars)).prop_map(|(s, f)| Atom::new(s, f))
}

/// Statements built from the given atoms with every meta-connective.
pub fn statement_over(atoms: Vec<Atom>) -> impl Strategy<Value = Statement> {
    let leaf = prop_oneof![
        1 => Just(Statement::top()),
        1 => Just(Statement::bot()),
        8 => select(atoms).prop_map(Statement::atom),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Statement::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Statement::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Statement::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Statement::imp(a, b)),
        ]
    })
}

/// A statement over at most `max_atoms` distinct random atoms.
pub fn statement(max_atoms: usize) -> impl Strategy<Value = Statement> {
    prop::collection::vec(atom(&["p", "q"]), 1..=max_atoms).prop_flat_map(statement_over)
}

/// All valuations of `atoms`.
pub fn valuations(atoms: &[Atom]) -> impl Iterator<Item = BTreeMap<Atom, bool>> + '_ {
    (0u32..1 << atoms.len())
        .map(move |bits| atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits >> i & 1 == 1)).collect())
}
