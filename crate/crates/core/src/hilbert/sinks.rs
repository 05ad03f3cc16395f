//! The two proof targets: object-level derivations inside a calculus with a
//! modus ponens rule, and meta-level derivations over statements.

use std::collections::BTreeSet;

use sha2::{Digest, Sha256};

use super::library::{library, Basis, Library, AX_BOT, AX_TOP};
use super::{lemma_args, replay, ProofError, Sink};
use crate::deduction::{DeductiveSystem, DerivationBuilder, LemmaStore, MetaAxiom};
use crate::formula::{match_formula, Formula, Instantiation};
use crate::statement::{Statement, StatementNode};
use crate::template::Args;

/// Emits object-level proofs as derivations of `⊕A` statements: axiom and
/// lemma instances via `Sb`, modus ponens via the rule macro for the
/// calculus' rule `mp`.
pub(crate) struct ObjectSink<'a> {
    pub ds: &'a DeductiveSystem,
    pub store: &'a mut LemmaStore,
    pub builder: DerivationBuilder,
    lib: &'static Library,
    /// Calculus axiom ids by basis axiom number (1-based).
    axiom_ids: &'static [&'static str],
    /// Whether proper subformula facts are certified as lemmas of their own.
    pub cache_facts: bool,
}

/// A lemma name derived from the statement it proves.
pub(crate) fn fact_name(a: &Statement) -> String {
    let digest = Sha256::digest(a.to_string().as_bytes());
    format!("f-{}", &hex::encode(digest)[..20])
}

impl<'a> ObjectSink<'a> {
    pub fn new(
        ds: &'a DeductiveSystem,
        store: &'a mut LemmaStore,
        basis: Basis,
        axiom_ids: &'static [&'static str],
    ) -> Self {
        ObjectSink {
            ds,
            store,
            builder: DerivationBuilder::new(Vec::new()),
            lib: library(basis),
            axiom_ids,
            cache_facts: false,
        }
    }

    fn asserted(&self, r: usize) -> &Formula {
        match self.builder.statement(r).node() {
            StatementNode::Atom(a) => &a.body,
            _ => panic!("object proofs only contain asserted atoms"),
        }
    }

    /// Runs `build` on a fresh derivation, then restores the current one.
    fn detached<T>(
        &mut self,
        build: impl FnOnce(&mut Self) -> Result<T, ProofError>,
    ) -> (Result<T, ProofError>, DerivationBuilder) {
        let saved = std::mem::take(&mut self.builder);
        let r = build(self);
        let sub = std::mem::replace(&mut self.builder, saved);
        (r, sub)
    }

    /// Certifies library lemma `name` in the store if needed; returns the
    /// stored statement.
    pub fn ensure_lemma(&mut self, name: &str) -> Result<Statement, ProofError> {
        if let Some(a) = self.store.get(&self.ds.name, name) {
            return Ok(a.clone());
        }
        let lemma = self.lib.lemma(name).ok_or_else(|| ProofError::MissingLemma(name.to_string()))?;
        let mut vars = BTreeSet::new();
        for line in &lemma.proof {
            vars.extend(line.formula.vars());
        }
        let args: Args<Formula> = vars.into_iter().map(|v| (v.clone(), Formula::var_sym(v))).collect();
        let (r, sub) = self.detached(|s| replay(s, name, &args));
        let d = sub.extract(r?);
        self.store.certify(self.ds, name, d)?;
        Ok(Statement::asserted(lemma.statement.clone()))
    }

    /// The step proving `⊕f`, from step `general` by `Sb` if needed.
    fn specialize(&mut self, general: usize, f: &Formula) -> Result<usize, ProofError> {
        let body = self.asserted(general).clone();
        let s = match_formula(&body, f)
            .ok_or_else(|| ProofError::Unsupported(format!("{f} as an instance of {body}")))?;
        Ok(self.builder.sb(general, s))
    }
}

impl Sink for ObjectSink<'_> {
    type L = Formula;
    type Ref = usize;

    fn library(&self) -> &'static Library {
        self.lib
    }

    fn axiom(&mut self, n: usize, f: Formula) -> Result<usize, ProofError> {
        if let Some(r) = self.builder.find(&Statement::asserted(f.clone())) {
            return Ok(r);
        }
        let id = n
            .checked_sub(1)
            .and_then(|i| self.axiom_ids.get(i))
            .filter(|id| self.ds.axiom(id).is_some())
            .ok_or_else(|| ProofError::Unsupported(format!("axiom {n} in `{}`", self.ds.name)))?;
        let step = self.builder.axiom(self.ds, id).expect("axiom exists");
        self.specialize(step, &f)
    }

    fn lemma(&mut self, name: &str, f: Formula) -> Result<usize, ProofError> {
        if let Some(r) = self.builder.find(&Statement::asserted(f.clone())) {
            return Ok(r);
        }
        let stmt = self.ensure_lemma(name)?;
        let step = self.builder.lemma(name, stmt);
        self.specialize(step, &f)
    }

    fn mp(&mut self, major: usize, minor: usize) -> Result<usize, ProofError> {
        let (x, y) = match self.asserted(major).as_imp() {
            Some((x, y)) if x == self.asserted(minor) => (x.clone(), y.clone()),
            _ => panic!("modus ponens mismatch"),
        };
        if let Some(r) = self.builder.find(&Statement::asserted(y.clone())) {
            return Ok(r);
        }
        let inst = Instantiation::from_pairs([("X", x), ("Y", y)]);
        Ok(self.builder.rule_macro(self.ds, "mp", &inst, &[minor, major])?)
    }

    fn subproof(
        &mut self,
        goal: &Formula,
        build: &mut dyn FnMut(&mut Self) -> Result<usize, ProofError>,
    ) -> Result<usize, ProofError> {
        let stmt = Statement::asserted(goal.clone());
        if let Some(r) = self.builder.find(&stmt) {
            return Ok(r);
        }
        if let Some(name) = self.store.find(&self.ds.name, &stmt) {
            let name = name.to_string();
            return Ok(self.builder.lemma(&name, stmt));
        }
        if !self.cache_facts {
            return build(self);
        }
        let (r, sub) = self.detached(|s| build(s));
        let d = sub.extract(r?);
        let name = fact_name(&stmt);
        self.store.certify(self.ds, &name, d)?;
        Ok(self.builder.lemma(&name, stmt))
    }
}

/// Emits meta-level proofs: axioms become meta-axiom instances, modus
/// ponens becomes MMP, and lemmas are replayed inline.
#[derive(Default)]
pub(crate) struct MetaSink {
    pub builder: DerivationBuilder,
}

impl MetaSink {
    pub fn new(builder: DerivationBuilder) -> Self {
        MetaSink { builder }
    }
}

impl Sink for MetaSink {
    type L = Statement;
    type Ref = usize;

    fn library(&self) -> &'static Library {
        library(Basis::Kleene)
    }

    fn axiom(&mut self, n: usize, f: Statement) -> Result<usize, ProofError> {
        if let Some(r) = self.builder.find(&f) {
            return Ok(r);
        }
        let m = match n {
            1..=10 => MetaAxiom::K(n as u8),
            AX_TOP => MetaAxiom::Top,
            AX_BOT => MetaAxiom::Bot,
            _ => return Err(ProofError::Unsupported(format!("axiom {n} at the meta-level"))),
        };
        let binding = m
            .matches(&f)
            .ok_or_else(|| ProofError::Unsupported(format!("{f} as an instance of {m}")))?;
        Ok(self.builder.meta_axiom(m, binding))
    }

    fn lemma(&mut self, name: &str, f: Statement) -> Result<usize, ProofError> {
        if let Some(r) = self.builder.find(&f) {
            return Ok(r);
        }
        let args = lemma_args(self.library(), name, &f)?;
        replay(self, name, &args)
    }

    fn mp(&mut self, major: usize, minor: usize) -> Result<usize, ProofError> {
        Ok(self.builder.mmp(major, minor))
    }
}
