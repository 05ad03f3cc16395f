//! The built-in refutation calculi for classical propositional logic: proof
//! generation for tautologies, refutation of non-tautologies through the
//! anti-axiom `⊖p`, a certificate-producing decision procedure, indirect
//! refutation from an assumed formula, and the trivialization of the
//! Smiley calculus by `⊖p`.

mod builtins;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::deduction::{
    check_derivation, search_proof, AtomicProver, Budget, DeductiveSystem, Derivation, DerivationBuilder,
    LemmaStore, MacroError, NoProver, Rejection, StoreError,
};
use crate::formula::{Formula, Instantiation, SignatureError, Substitution};
use crate::hilbert::library::Basis;
use crate::hilbert::{self, fact, Context, Leaf, ObjectSink, ProofError, Sink};
use crate::oracle::{falsifying_valuation, is_tautology, OracleError, Valuation};
use crate::statement::{Atom, Sign, Statement};

pub use builtins::{pigeonhole_schema, BuiltinCalculus, MAX_RK};

#[derive(Debug, Error)]
pub enum CplError {
    #[error("{formula}: {error}")]
    Signature { formula: Formula, error: SignatureError },
    #[error("{0} contains metavariables")]
    NotGround(Formula),
    #[error("{formula} is not a tautology (falsified by {})", show_valuation(.valuation))]
    NotTautology { formula: Formula, valuation: Valuation },
    #[error("{formula} is a tautology and cannot be refuted")]
    IsTautology { formula: Formula, proof: Box<Derivation> },
    #[error("calculus `{0}` has no axiom basis proofs can be generated in")]
    NoBasis(String),
    #[error("calculus `{0}` lacks the anti-axiom -p, the rule `mt` or reverse substitution")]
    NoRefutation(String),
    #[error("calculus `{0}` lacks the rules `r1` and `r2`")]
    NotSmiley(String),
    #[error("generated certificate rejected: {0}")]
    Rejected(Rejection),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Macro(#[from] MacroError),
}

fn show_valuation(v: &Valuation) -> String {
    let items: Vec<String> = v.iter().map(|(s, b)| format!("{s}={}", u8::from(*b))).collect();
    items.join(", ")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProofOptions {
    /// Certify the facts proved for proper subformulas as lemmas of their
    /// own, so later proofs reuse them instead of re-deriving them.
    pub cache_facts: bool,
}

/// A decision with its derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub sign: Sign,
    pub formula: Formula,
    pub derivation: Derivation,
}

impl Certificate {
    pub fn atom(&self) -> Atom {
        Atom::new(self.sign, self.formula.clone())
    }

    /// Re-checks the derivation and that it ends in the claimed atom.
    pub fn check(&self, calc: &DeductiveSystem, store: &LemmaStore) -> Result<(), Rejection> {
        check_derivation(calc, &self.derivation, store)?;
        let claimed = Statement::atom(self.atom());
        match self.derivation.conclusion() {
            Some(c) if *c == claimed => Ok(()),
            other => Err(Rejection {
                step: self.derivation.len(),
                reason: crate::deduction::Reason::LemmaMismatch,
                detail: format!(
                    "certificate claims {claimed} but the derivation ends in {}",
                    other.map_or_else(|| "nothing".to_string(), Statement::to_string)
                ),
            }),
        }
    }
}

/// The library basis of `calc` and its axiom ids by basis number, read off
/// the axioms it has.
fn basis_of(calc: &DeductiveSystem) -> Result<(Basis, &'static [&'static str]), CplError> {
    const LUK_IDS: [&str; 3] = ["ax1", "ax2", "ax3"];
    const KLEENE_IDS: [&str; 13] =
        ["k1", "k2", "k3", "k4", "k5", "k6", "k7", "k8", "k9", "k10", "eq1", "eq2", "eq3"];
    let has = |table: &[(&str, &str)]| {
        table.iter().all(|(id, src)| calc.axiom(id) == Some(&crate::parse_statement(src).expect("built-in axiom")))
    };
    let mp = calc.rule("mp").is_some_and(|r| *r == crate::parse_statement(builtins::MP).unwrap());
    if !mp {
        return Err(CplError::NoBasis(calc.name.clone()));
    }
    if has(&builtins::LUKASIEWICZ_AXIOMS[..3]) {
        Ok((Basis::Lukasiewicz, &LUK_IDS))
    } else if has(&builtins::KLEENE_AXIOMS[..10]) {
        Ok((Basis::Kleene, &KLEENE_IDS))
    } else {
        Err(CplError::NoBasis(calc.name.clone()))
    }
}

fn check_formula(a: &Formula, calc: &DeductiveSystem) -> Result<(), CplError> {
    calc.signature
        .check(a)
        .map_err(|error| CplError::Signature { formula: a.clone(), error })?;
    if !a.is_ground() {
        return Err(CplError::NotGround(a.clone()));
    }
    Ok(())
}

fn sink<'a>(calc: &'a DeductiveSystem, store: &'a mut LemmaStore, opts: ProofOptions) -> Result<ObjectSink<'a>, CplError> {
    let (basis, ids) = basis_of(calc)?;
    let mut s = ObjectSink::new(calc, store, basis, ids);
    s.cache_facts = opts.cache_facts;
    Ok(s)
}

/// A derivation of `⊕A` without premises, for a two-valued tautology `A`.
/// Lemmas it uses are certified in `store` first.
pub fn prove_tautology(
    a: &Formula,
    calc: &DeductiveSystem,
    store: &mut LemmaStore,
    opts: ProofOptions,
) -> Result<Derivation, CplError> {
    check_formula(a, calc)?;
    if let Some(valuation) = falsifying_valuation(a)? {
        return Err(CplError::NotTautology { formula: a.clone(), valuation });
    }
    let mut s = sink(calc, store, opts)?;
    let r = hilbert::prove_tautology(&mut s, a)?;
    Ok(s.builder.extract(r))
}

fn anti_id(calc: &DeductiveSystem) -> Option<&str> {
    let anti = Statement::rejected(p());
    calc.axioms.iter().find(|(_, a)| *a == anti).map(|(id, _)| id.as_str())
}

fn p() -> Formula {
    Formula::var("p")
}

fn p_imp_p() -> Formula {
    Formula::imp(p(), p())
}

/// Maps each variable to `p→p` if the valuation makes it true and to
/// `¬(p→p)` otherwise.
fn closing_substitution(valuation: &Valuation) -> Substitution {
    Substitution::from_pairs(valuation.iter().map(|(v, b)| {
        let image = if *b { p_imp_p() } else { Formula::not(p_imp_p()) };
        (v.clone(), image)
    }))
}

/// The closing substitution for a falsifying valuation of `a`, with
/// `σ(a)` checked false under every valuation.
fn falsify(a: &Formula, valuation: &Valuation) -> Result<(Substitution, Formula), CplError> {
    let sigma = closing_substitution(valuation);
    let closed = a.subst(&sigma);
    if !is_tautology(&Formula::not(closed.clone()))? {
        return Err(ProofError::Unsupported(format!("{closed} is not false under every valuation")).into());
    }
    Ok((sigma, closed))
}

/// Certifies `⊕(closed → p)` for a closed formula built from `p→p` that is
/// false under every valuation, and returns the lemma name and statement.
fn certify_closing_lemma(
    closed: &Formula,
    calc: &DeductiveSystem,
    store: &mut LemmaStore,
    opts: ProofOptions,
) -> Result<(String, Statement), CplError> {
    let stmt = Statement::asserted(Formula::imp(closed.clone(), p()));
    if let Some(name) = store.find(&calc.name, &stmt) {
        return Ok((name.to_string(), stmt));
    }
    let d = {
        let mut s = sink(calc, store, opts)?;
        let ctx = Context {
            hyps: Vec::new(),
            leaves: BTreeMap::from([
                (p_imp_p(), Leaf::Closed { value: true, lemma: "id" }),
                (Formula::not(p_imp_p()), Leaf::Closed { value: false, lemma: "dni_id" }),
            ]),
        };
        let negated = fact(&mut s, &ctx, closed)?;
        let efq = Formula::imp(Formula::not(closed.clone()), Formula::imp(closed.clone(), p()));
        let efq = s.lemma("efq", efq)?;
        let r = s.mp(efq, negated)?;
        s.builder.extract(r)
    };
    let name = hilbert::fact_name(&stmt);
    store.certify(calc, &name, d)?;
    Ok((name, stmt))
}

/// A derivation of `⊖A` without premises for a formula `A` that is not a
/// tautology: with a falsifying valuation turned into a substitution `σ`
/// onto closed formulas, `⊕(σ(A)→p)` is a certified lemma, modus tollens
/// against `⊖p` gives `⊖σ(A)`, and reverse substitution gives `⊖A`.
pub fn refute(
    a: &Formula,
    calc: &DeductiveSystem,
    store: &mut LemmaStore,
    opts: ProofOptions,
) -> Result<Derivation, CplError> {
    check_formula(a, calc)?;
    let Some(valuation) = falsifying_valuation(a)? else {
        let proof = prove_tautology(a, calc, store, opts)?;
        return Err(CplError::IsTautology { formula: a.clone(), proof: Box::new(proof) });
    };
    let no_refutation = || CplError::NoRefutation(calc.name.clone());
    let anti = anti_id(calc).ok_or_else(no_refutation)?;
    let mut b = DerivationBuilder::new(Vec::new());
    let ax = b.axiom(calc, anti).expect("anti-axiom exists");
    if *a == p() {
        return Ok(b.build());
    }
    if !calc.reverse_substitution {
        return Err(no_refutation());
    }
    let target = Statement::rejected(a.clone());
    if let Some(v) = a.as_var() {
        let r = b.rs(ax, target, Substitution::single(v.as_str(), p()));
        return Ok(b.extract(r));
    }
    if calc.rule("mt").is_none() {
        return Err(no_refutation());
    }
    let (sigma, closed) = falsify(a, &valuation)?;
    let (name, stmt) = certify_closing_lemma(&closed, calc, store, opts)?;
    let lemma = b.lemma(&name, stmt);
    let inst = Instantiation::from_pairs([("X", closed), ("Y", p())]);
    let mt = b.rule_macro(calc, "mt", &inst, &[ax, lemma])?;
    let r = b.rs(mt, target, sigma);
    Ok(b.extract(r))
}

/// Proves or refutes `A`, whichever holds classically.
pub fn decide(
    a: &Formula,
    calc: &DeductiveSystem,
    store: &mut LemmaStore,
    opts: ProofOptions,
) -> Result<Certificate, CplError> {
    check_formula(a, calc)?;
    let (sign, derivation) = if is_tautology(a)? {
        (Sign::Asserted, prove_tautology(a, calc, store, opts)?)
    } else {
        (Sign::Rejected, refute(a, calc, store, opts)?)
    };
    Ok(Certificate { sign, formula: a.clone(), derivation })
}

/// A derivation of `⊕p` from the premise `⊕A`: `A` is refuted indirectly
/// when the anti-axiom's body follows from it. For a non-tautology the
/// derivation substitutes a closing substitution into the premise and
/// detaches `p` with a certified lemma. For a tautology no such derivation
/// exists in a sound calculus; the bounded search is run and its result
/// returned.
pub fn c_refute(
    a: &Formula,
    calc: &DeductiveSystem,
    budget: &Budget,
    store: &mut LemmaStore,
    opts: ProofOptions,
) -> Result<Option<Derivation>, CplError> {
    check_formula(a, calc)?;
    let premise = Statement::asserted(a.clone());
    let goal = Statement::asserted(p());
    let Some(valuation) = falsifying_valuation(a)? else {
        return Ok(search_proof(calc, &[premise], &goal, budget, store, &mut NoProver));
    };
    let mut b = DerivationBuilder::new(Vec::new());
    let first = b.premise(premise);
    if let Some(v) = a.as_var() {
        let r = b.sb(first, Substitution::single(v.as_str(), p()));
        return Ok(Some(b.extract(r)));
    }
    if calc.rule("mp").is_none() {
        return Err(CplError::NoBasis(calc.name.clone()));
    }
    let (sigma, closed) = falsify(a, &valuation)?;
    let instance = b.sb(first, sigma);
    let (name, stmt) = certify_closing_lemma(&closed, calc, store, opts)?;
    let lemma = b.lemma(&name, stmt);
    let inst = Instantiation::from_pairs([("X", closed), ("Y", p())]);
    let r = b.rule_macro(calc, "mp", &inst, &[instance, lemma])?;
    Ok(Some(b.extract(r)))
}

/// A derivation of `⊖A` in a calculus with `⊖p` and the rules
/// `r1: ⊖X ⟹ ⊕¬X` and `r2: ⊕¬X ⟹ ⊖X`: from `⊖p`, `r1` gives `⊕¬p`,
/// substitution gives `⊕¬A`, and `r2` gives `⊖A`.
pub fn smiley_trivialize(a: &Formula, calc: &DeductiveSystem) -> Result<Derivation, CplError> {
    check_formula(a, calc)?;
    let anti = anti_id(calc).ok_or_else(|| CplError::NoRefutation(calc.name.clone()))?;
    if calc.rule("r1").is_none() || calc.rule("r2").is_none() {
        return Err(CplError::NotSmiley(calc.name.clone()));
    }
    let mut b = DerivationBuilder::new(Vec::new());
    let ax = b.axiom(calc, anti).expect("anti-axiom exists");
    if *a == p() {
        return Ok(b.build());
    }
    let neg = b.rule_macro(calc, "r1", &Instantiation::from_pairs([("X", p())]), &[ax])?;
    let neg_a = b.sb(neg, Substitution::single("p", a.clone()));
    let r = b.rule_macro(calc, "r2", &Instantiation::from_pairs([("X", a.clone())]), &[neg_a])?;
    Ok(b.extract(r))
}

/// Proves tautologies and refutes non-tautologies for the saturation audit
/// and the proof search, in calculi this module can generate proofs for.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClassicalProver {
    pub opts: ProofOptions,
}

impl AtomicProver for ClassicalProver {
    fn prove_atom(&mut self, ds: &DeductiveSystem, a: &Atom, store: &mut LemmaStore) -> Option<Derivation> {
        if check_formula(&a.body, ds).is_err() {
            return None;
        }
        match (a.sign, is_tautology(&a.body).ok()?) {
            (Sign::Asserted, true) => prove_tautology(&a.body, ds, store, self.opts).ok(),
            (Sign::Rejected, false) => refute(&a.body, ds, store, self.opts).ok(),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deduction::Justification;
    use crate::formula::Symbol;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn luk() -> DeductiveSystem {
        BuiltinCalculus::LukasiewiczCore.system()
    }

    #[test]
    fn proves_tautologies() {
        let ds = luk();
        let mut store = LemmaStore::new();
        for a in ["p -> p", "~(p -> p) -> p", "(~p -> p) -> p"] {
            let d = prove_tautology(&f(a), &ds, &mut store, ProofOptions::default()).unwrap();
            assert_eq!(check_derivation(&ds, &d, &store), Ok(()));
            assert_eq!(d.conclusion(), Some(&Statement::asserted(f(a))));
        }
        match prove_tautology(&f("p"), &ds, &mut store, ProofOptions::default()) {
            Err(CplError::NotTautology { valuation, .. }) => assert_eq!(valuation, vec![(Symbol::new("p"), false)]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn refutes_with_table_shape() {
        let ds = luk();
        let mut store = LemmaStore::new();
        let d = refute(&f("~p"), &ds, &mut store, ProofOptions::default()).unwrap();
        assert_eq!(check_derivation(&ds, &d, &store), Ok(()));
        assert_eq!(d.steps[0].justification, Justification::Axiom("anti".into()));
        assert_eq!(d.steps[1].statement, Statement::asserted(f("~(p -> p) -> p")));
        assert!(matches!(d.steps[1].justification, Justification::Lemma(_)));
        let last = d.steps.last().unwrap();
        assert_eq!(last.statement, Statement::rejected(f("~p")));
        assert_eq!(last.justification, Justification::Rs(d.len() - 1, Substitution::single("p", f("p -> p"))));
        assert_eq!(refute(&f("p"), &ds, &mut store, ProofOptions::default()).unwrap().len(), 1);
    }

    #[test]
    fn refutation_substitution() {
        let ds = luk();
        let mut store = LemmaStore::new();
        let d = refute(&f("p -> q"), &ds, &mut store, ProofOptions::default()).unwrap();
        assert_eq!(check_derivation(&ds, &d, &store), Ok(()));
        let expected = Substitution::from_pairs([
            (Symbol::new("p"), f("p -> p")),
            (Symbol::new("q"), f("~(p -> p)")),
        ]);
        assert!(matches!(&d.steps.last().unwrap().justification, Justification::Rs(_, s) if *s == expected));
        assert!(matches!(
            refute(&f("p -> p"), &ds, &mut store, ProofOptions::default()),
            Err(CplError::IsTautology { .. })
        ));
    }

    #[test]
    fn decides_and_refuses_foreign_connectives() {
        let ds = luk();
        let mut store = LemmaStore::new();
        let c = decide(&f("(~p -> p) -> p"), &ds, &mut store, ProofOptions::default()).unwrap();
        assert_eq!(c.sign, Sign::Asserted);
        assert_eq!(c.check(&ds, &store), Ok(()));
        assert!(matches!(
            decide(&f("p | ~p"), &ds, &mut store, ProofOptions::default()),
            Err(CplError::Signature { .. })
        ));
        let ext = BuiltinCalculus::ClassicalExtended.system();
        for (a, sign) in [("p | ~p", Sign::Asserted), ("(p <-> q) -> (p & q)", Sign::Rejected)] {
            let c = decide(&f(a), &ext, &mut store, ProofOptions::default()).unwrap();
            assert_eq!(c.sign, sign);
            assert_eq!(c.check(&ext, &store), Ok(()));
        }
    }

    #[test]
    fn cached_facts_give_the_same_verdicts() {
        let ds = luk();
        let mut store = LemmaStore::new();
        let opts = ProofOptions { cache_facts: true };
        for a in ["(p -> q) -> (~q -> ~p)", "~(p -> ~q)", "((p -> q) -> p) -> p"] {
            let c = decide(&f(a), &ds, &mut store, opts).unwrap();
            assert_eq!(c.check(&ds, &store), Ok(()));
        }
    }

    #[test]
    fn indirect_refutation() {
        let ds = luk();
        let mut store = LemmaStore::new();
        let budget = Budget::default();
        let d = c_refute(&f("~p"), &ds, &budget, &mut store, ProofOptions::default()).unwrap().unwrap();
        assert_eq!(check_derivation(&ds, &d, &store), Ok(()));
        assert_eq!(d.premises, vec![Statement::asserted(f("~p"))]);
        assert_eq!(d.steps[1].statement, Statement::asserted(f("~(p -> p)")));
        assert_eq!(d.conclusion(), Some(&Statement::asserted(f("p"))));
        let one = c_refute(&f("p"), &ds, &budget, &mut store, ProofOptions::default()).unwrap().unwrap();
        assert_eq!(one.len(), 1);
        let small = Budget { max_steps: 2_000, rounds: 2, ..Budget::default() };
        assert_eq!(c_refute(&f("p -> p"), &ds, &small, &mut store, ProofOptions::default()).unwrap(), None);
    }

    #[test]
    fn smiley_collapse() {
        let ds = BuiltinCalculus::SmileyAnti.system();
        let store = LemmaStore::new();
        for a in ["q -> q", "p", "~p & q"] {
            let d = smiley_trivialize(&f(a), &ds).unwrap();
            assert_eq!(check_derivation(&ds, &d, &store), Ok(()));
            assert_eq!(d.conclusion(), Some(&Statement::rejected(f(a))));
        }
        assert!(smiley_trivialize(&f("p"), &BuiltinCalculus::Smiley.system()).is_err());
    }

    #[test]
    fn prover_serves_both_signs() {
        let ds = BuiltinCalculus::ClassicalExtended.system();
        let mut store = LemmaStore::new();
        let mut prover = ClassicalProver::default();
        assert!(prover.prove_atom(&ds, &Atom::asserted(f("p -> p")), &mut store).is_some());
        assert!(prover.prove_atom(&ds, &Atom::rejected(f("p & q")), &mut store).is_some());
        assert!(prover.prove_atom(&ds, &Atom::rejected(f("p -> p")), &mut store).is_none());
        let smiley = BuiltinCalculus::Smiley.system();
        assert!(prover.prove_atom(&smiley, &Atom::rejected(f("q")), &mut store).is_none());
    }
}
