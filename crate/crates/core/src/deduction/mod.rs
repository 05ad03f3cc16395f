//! Deductive systems over statements, derivations and their checker.
//!
//! A derivation is a list of statements, each justified by a meta-axiom
//! instance, an axiom or rule instance of the system, a substitution step
//! (`Sb`, positive statements only), a reverse substitution step (`RS`,
//! negative statements only), meta modus ponens, membership in the premise
//! set, or a previously certified lemma.

mod builder;
mod format;
mod meta_axioms;
mod search;
mod store;

use std::fmt;

use thiserror::Error;

use crate::formula::{Instantiation, Signature, SignatureError, Substitution};
use crate::statement::Statement;

pub use builder::{apply_rule_macro, DerivationBuilder, MacroError};
pub(crate) use format::{content_lines, fragment};
pub use format::{
    parse_calculus, parse_derivation, print_calculus, print_derivation, DerivationFile,
};
pub use meta_axioms::{is_meta_axiom, MetaAxiom, MetaBinding};
pub use search::{derivable_signed, search_proof, AtomicProver, Budget, NoProver};
pub use store::{LemmaStore, StoreError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("axiom `{0}` contains metavariables")]
    NonGroundAxiom(String),
    #[error("`{0}`: {1}")]
    Signature(String, SignatureError),
}

/// Axioms are ground statements; rules are schemata over metavariables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeductiveSystem {
    pub name: String,
    pub signature: Signature,
    pub axioms: Vec<(String, Statement)>,
    pub rules: Vec<(String, Statement)>,
    /// Whether the reverse substitution meta-rule may be used.
    pub reverse_substitution: bool,
}

impl DeductiveSystem {
    /// A system without axioms or rules.
    pub fn new(name: &str, signature: Signature) -> Self {
        DeductiveSystem {
            name: name.to_string(),
            signature,
            axioms: Vec::new(),
            rules: Vec::new(),
            reverse_substitution: true,
        }
    }

    /// The zero-system over the default signature.
    pub fn zero() -> Self {
        DeductiveSystem::new("zero", Signature::default())
    }

    fn check_fresh(&self, id: &str, a: &Statement) -> Result<(), SystemError> {
        if self.axioms.iter().chain(&self.rules).any(|(n, _)| n == id) {
            return Err(SystemError::DuplicateId(id.to_string()));
        }
        for atom in a.atoms() {
            self.signature
                .check(&atom.body)
                .map_err(|e| SystemError::Signature(id.to_string(), e))?;
        }
        Ok(())
    }

    pub fn add_axiom(&mut self, id: &str, a: Statement) -> Result<(), SystemError> {
        self.check_fresh(id, &a)?;
        if !a.is_ground() {
            return Err(SystemError::NonGroundAxiom(id.to_string()));
        }
        self.axioms.push((id.to_string(), a));
        Ok(())
    }

    pub fn add_rule(&mut self, id: &str, schema: Statement) -> Result<(), SystemError> {
        self.check_fresh(id, &schema)?;
        self.rules.push((id.to_string(), schema));
        Ok(())
    }

    pub fn with_axiom(mut self, id: &str, a: Statement) -> Result<Self, SystemError> {
        self.add_axiom(id, a)?;
        Ok(self)
    }

    pub fn with_rule(mut self, id: &str, schema: Statement) -> Result<Self, SystemError> {
        self.add_rule(id, schema)?;
        Ok(self)
    }

    pub fn remove(&mut self, id: &str) {
        self.axioms.retain(|(n, _)| n != id);
        self.rules.retain(|(n, _)| n != id);
    }

    pub fn axiom(&self, id: &str) -> Option<&Statement> {
        self.axioms.iter().find(|(n, _)| n == id).map(|(_, a)| a)
    }

    pub fn rule(&self, id: &str) -> Option<&Statement> {
        self.rules.iter().find(|(n, _)| n == id).map(|(_, a)| a)
    }
}

/// Why a step holds. Step references are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// An instance of a meta-axiom; the binding may be partial or empty.
    MetaAxiom(MetaAxiom, MetaBinding),
    Axiom(String),
    /// An instance of a rule; the binding may be partial or empty.
    Rule(String, Instantiation),
    Sb(usize, Substitution),
    Rs(usize, Substitution),
    /// Meta modus ponens from `major = α ⟹ β` and `minor = α`.
    Mmp(usize, usize),
    Premise,
    Lemma(String),
}

impl Justification {
    /// Earlier steps this justification refers to.
    pub fn references(&self) -> Vec<usize> {
        match self {
            Justification::Sb(n, _) | Justification::Rs(n, _) => vec![*n],
            Justification::Mmp(a, b) => vec![*a, *b],
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub statement: Statement,
    pub justification: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Derivation {
    pub premises: Vec<Statement>,
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn new(premises: Vec<Statement>) -> Self {
        Derivation { premises, steps: Vec::new() }
    }

    /// The derived statement.
    pub fn conclusion(&self) -> Option<&Statement> {
        self.steps.last().map(|s| &s.statement)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Appends a step and returns its 1-based index.
    pub fn push(&mut self, statement: Statement, justification: Justification) -> usize {
        self.steps.push(Step { statement, justification });
        self.steps.len()
    }

    /// The step with 1-based index `n`.
    pub fn step(&self, n: usize) -> Option<&Step> {
        n.checked_sub(1).and_then(|i| self.steps.get(i))
    }

    /// Names of the lemmas the derivation relies on.
    pub fn lemmas(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for s in &self.steps {
            if let Justification::Lemma(name) = &s.justification {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
        }
        out
    }
}

/// Machine-readable rejection reasons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    EmptyDerivation,
    NotGround,
    Signature,
    NotMetaAxiom,
    UnknownAxiom,
    AxiomMismatch,
    UnknownRule,
    BadInstance,
    DanglingReference,
    SbOnNegative,
    RsOnPositive,
    RsDisabled,
    WrongSubstitution,
    MmpMismatch,
    NotAPremise,
    UnknownLemma,
    LemmaMismatch,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::EmptyDerivation => "empty-derivation",
            Reason::NotGround => "not-ground",
            Reason::Signature => "signature",
            Reason::NotMetaAxiom => "not-meta-axiom",
            Reason::UnknownAxiom => "unknown-axiom",
            Reason::AxiomMismatch => "axiom-mismatch",
            Reason::UnknownRule => "unknown-rule",
            Reason::BadInstance => "bad-instance",
            Reason::DanglingReference => "dangling-reference",
            Reason::SbOnNegative => "sb-on-negative",
            Reason::RsOnPositive => "rs-on-positive",
            Reason::RsDisabled => "rs-disabled",
            Reason::WrongSubstitution => "wrong-substitution",
            Reason::MmpMismatch => "mmp-mismatch",
            Reason::NotAPremise => "not-a-premise",
            Reason::UnknownLemma => "unknown-lemma",
            Reason::LemmaMismatch => "lemma-mismatch",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// The first failing step of a rejected derivation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("step {step}: {reason}: {detail}")]
pub struct Rejection {
    /// 1-based; 0 for an empty derivation.
    pub step: usize,
    pub reason: Reason,
    pub detail: String,
}

/// `Ok(())` if the derivation is accepted.
pub type Verdict = Result<(), Rejection>;

/// Checks every step of `d` against `ds`, looking lemmas up in `lemmas`.
pub fn check_derivation(ds: &DeductiveSystem, d: &Derivation, lemmas: &LemmaStore) -> Verdict {
    if d.steps.is_empty() {
        return Err(Rejection {
            step: 0,
            reason: Reason::EmptyDerivation,
            detail: "no steps".into(),
        });
    }
    for (i, step) in d.steps.iter().enumerate() {
        check_step(ds, d, i + 1, step, lemmas).map_err(|(reason, detail)| Rejection {
            step: i + 1,
            reason,
            detail,
        })?;
    }
    Ok(())
}

fn check_step(
    ds: &DeductiveSystem,
    d: &Derivation,
    n: usize,
    step: &Step,
    lemmas: &LemmaStore,
) -> Result<(), (Reason, String)> {
    let a = &step.statement;
    if !a.is_ground() {
        return Err((Reason::NotGround, format!("{a} contains metavariables")));
    }
    let mut bad_signature = None;
    a.visit_atoms(&mut |atom| {
        if bad_signature.is_none() {
            bad_signature = ds.signature.check(&atom.body).err();
        }
    });
    if let Some(e) = bad_signature {
        return Err((Reason::Signature, e.to_string()));
    }
    let earlier = |k: usize| -> Result<&Statement, (Reason, String)> {
        if k == 0 || k >= n {
            Err((Reason::DanglingReference, format!("step {k} is not an earlier step")))
        } else {
            Ok(&d.steps[k - 1].statement)
        }
    };
    match &step.justification {
        Justification::MetaAxiom(m, given) => {
            let found = m
                .matches(a)
                .ok_or_else(|| (Reason::NotMetaAxiom, format!("not an instance of {m}")))?;
            for (k, v) in given {
                if found.get(k) != Some(v) {
                    return Err((Reason::BadInstance, format!("{m} does not bind {k} to {v}")));
                }
            }
        }
        Justification::Axiom(id) => {
            let ax = ds
                .axiom(id)
                .ok_or_else(|| (Reason::UnknownAxiom, format!("no axiom `{id}`")))?;
            if ax != a {
                return Err((Reason::AxiomMismatch, format!("axiom `{id}` is {ax}")));
            }
        }
        Justification::Rule(id, given) => {
            let schema = ds
                .rule(id)
                .ok_or_else(|| (Reason::UnknownRule, format!("no rule `{id}`")))?;
            let found = crate::statement::instance_of(schema, a)
                .ok_or_else(|| (Reason::BadInstance, format!("not an instance of rule `{id}`")))?;
            for (k, v) in given.bindings() {
                if found.get(k) != Some(v) {
                    return Err((Reason::BadInstance, format!("rule `{id}` does not bind {k} to {v}")));
                }
            }
        }
        Justification::Sb(k, s) => {
            let src = earlier(*k)?;
            if !src.is_positive() {
                return Err((Reason::SbOnNegative, format!("step {k} is not positive")));
            }
            if src.subst(s) != *a {
                return Err((Reason::WrongSubstitution, format!("{s} does not map step {k} here")));
            }
        }
        Justification::Rs(k, s) => {
            let src = earlier(*k)?;
            if !ds.reverse_substitution {
                return Err((Reason::RsDisabled, format!("`{}` has no reverse substitution", ds.name)));
            }
            if !a.is_negative() {
                return Err((Reason::RsOnPositive, "the derived statement is not negative".into()));
            }
            if a.subst(s) != *src {
                return Err((Reason::WrongSubstitution, format!("{s} does not map this to step {k}")));
            }
        }
        Justification::Mmp(major, minor) => {
            let (m, mi) = (earlier(*major)?, earlier(*minor)?);
            match m.as_imp() {
                Some((x, y)) if x == mi && y == a => {}
                _ => {
                    return Err((
                        Reason::MmpMismatch,
                        format!("step {major} is not step {minor} => this statement"),
                    ))
                }
            }
        }
        Justification::Premise => {
            if !d.premises.contains(a) {
                return Err((Reason::NotAPremise, "not among the premises".into()));
            }
        }
        Justification::Lemma(name) => {
            let stored = lemmas
                .get(&ds.name, name)
                .ok_or_else(|| (Reason::UnknownLemma, format!("no certified lemma `{name}`")))?;
            if stored != a {
                return Err((Reason::LemmaMismatch, format!("lemma `{name}` is {stored}")));
            }
        }
    }
    Ok(())
}
