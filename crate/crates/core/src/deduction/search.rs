//! Bounded, deterministic proof search.
//!
//! The search first tries one-step proofs of the goal. Otherwise it chains
//! forward over atomic facts: premises, atomic axioms, atoms an
//! [`AtomicProver`] can settle, substitution instances of positive facts,
//! and rule applications whose premises are facts or atoms of the goal.
//! The goal is finally glued to a small set of relevant facts by a
//! meta-level proof of the tautology `(⩓ facts) ⟹ goal`.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    check_derivation, is_meta_axiom, DeductiveSystem, Derivation, DerivationBuilder, Justification,
    LemmaStore, MetaAxiom, MetaBinding,
};
use crate::formula::{match_formula, Formula, Instantiation, Symbol};
use crate::hilbert::{prove_tautology, MetaSink};
use crate::statement::{build_instance, instance_of, Atom, Statement, StatementNode};

/// Limits on a search. Results are deterministic for a given budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Longest derivation built or returned.
    pub max_steps: usize,
    /// Largest formula a rule metavariable may be bound to.
    pub max_size: usize,
    /// Rounds of forward chaining.
    pub rounds: usize,
    /// Most distinct atoms the final propositional glue may range over.
    pub max_atoms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_steps: 200_000, max_size: 12, rounds: 4, max_atoms: 6 }
    }
}

/// A decision procedure for single atomic statements of some systems.
pub trait AtomicProver {
    /// A premise-free derivation of `a` in `ds`, if one is found.
    fn prove_atom(&mut self, ds: &DeductiveSystem, a: &Atom, store: &mut LemmaStore) -> Option<Derivation>;
}

/// The prover that never finds anything.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoProver;

impl AtomicProver for NoProver {
    fn prove_atom(&mut self, _: &DeductiveSystem, _: &Atom, _: &mut LemmaStore) -> Option<Derivation> {
        None
    }
}

/// Most atoms the glue step evaluates exhaustively when picking facts.
const GLUE_EVAL_ATOMS: usize = 20;

struct Search<'a> {
    ds: &'a DeductiveSystem,
    budget: &'a Budget,
    store: &'a mut LemmaStore,
    prover: &'a mut dyn AtomicProver,
    b: DerivationBuilder,
    /// Derived atomic statements.
    facts: BTreeMap<Atom, usize>,
    /// Derived non-atomic statements usable by the glue.
    clauses: Vec<usize>,
    goal_atoms: BTreeSet<Atom>,
}

/// Searches for a derivation of `goal` from premises `gamma` in `ds`.
/// `None` means nothing was found within the budget.
pub fn search_proof(
    ds: &DeductiveSystem,
    gamma: &[Statement],
    goal: &Statement,
    budget: &Budget,
    store: &mut LemmaStore,
    prover: &mut dyn AtomicProver,
) -> Option<Derivation> {
    if !goal.is_ground() || gamma.iter().any(|g| !g.is_ground()) {
        return None;
    }
    let mut goal_atoms = BTreeSet::new();
    goal.visit_atoms(&mut |a| {
        goal_atoms.insert(a.clone());
    });
    let mut s = Search {
        ds,
        budget,
        store,
        prover,
        b: DerivationBuilder::new(gamma.to_vec()),
        facts: BTreeMap::new(),
        clauses: Vec::new(),
        goal_atoms,
    };
    let n = s.run(gamma, goal)?;
    let d = s.b.extract(n);
    if d.len() > budget.max_steps {
        return None;
    }
    debug_assert!(check_derivation(ds, &d, s.store).is_ok(), "search produced a rejected derivation");
    Some(d)
}

/// Searches for `⊢ (⩓ premises) ⟹ (⩔ conclusions)`; with no premises the
/// goal is the disjunction alone, and with no conclusions it is `⊥`.
pub fn derivable_signed(
    ds: &DeductiveSystem,
    premises: &[Atom],
    conclusions: &[Atom],
    budget: &Budget,
    store: &mut LemmaStore,
    prover: &mut dyn AtomicProver,
) -> Option<Derivation> {
    let concl = Statement::disj(conclusions.iter().cloned().map(Statement::atom));
    let goal = if premises.is_empty() {
        concl
    } else {
        Statement::imp(Statement::conj(premises.iter().cloned().map(Statement::atom)), concl)
    };
    search_proof(ds, &[], &goal, budget, store, prover)
}

impl Search<'_> {
    fn run(&mut self, gamma: &[Statement], goal: &Statement) -> Option<usize> {
        if let Some(n) = self.direct(gamma, goal) {
            return Some(n);
        }
        for g in gamma {
            let n = self.b.premise(g.clone());
            self.record(n);
        }
        for (id, a) in &self.ds.axioms {
            if a.as_atom().is_some() {
                let n = self.b.axiom(self.ds, id).expect("axiom exists");
                self.record(n);
            }
        }
        let wanted: Vec<Atom> = self.goal_atoms.iter().cloned().collect();
        for a in &wanted {
            if self.facts.contains_key(a) {
                continue;
            }
            if let Some(d) = self.prover.prove_atom(self.ds, a, self.store) {
                let n = self.b.splice(&d);
                self.record(n);
            }
        }
        for _ in 0..self.budget.rounds {
            if let Some(n) = self.b.find(goal) {
                return Some(n);
            }
            if self.b.len() > self.budget.max_steps {
                return None;
            }
            let before = (self.facts.len(), self.clauses.len());
            self.instantiate_toward_goal();
            self.apply_rules();
            if (self.facts.len(), self.clauses.len()) == before {
                break;
            }
        }
        if let Some(n) = self.b.find(goal) {
            return Some(n);
        }
        self.glue(goal)
    }

    /// One-step proofs: premise, meta-axiom, axiom, stored lemma or rule
    /// instance.
    fn direct(&mut self, gamma: &[Statement], goal: &Statement) -> Option<usize> {
        if gamma.contains(goal) {
            return Some(self.b.premise(goal.clone()));
        }
        if let Some((m, binding)) = is_meta_axiom(goal) {
            return Some(self.b.meta_axiom(m, binding));
        }
        if let Some((id, _)) = self.ds.axioms.iter().find(|(_, a)| a == goal) {
            return self.b.axiom(self.ds, id);
        }
        if let Some(name) = self.store.find(&self.ds.name, goal) {
            return Some(self.b.lemma(name, goal.clone()));
        }
        for (id, schema) in &self.ds.rules {
            if let Some(inst) = instance_of(schema, goal) {
                return Some(self.b.add(goal.clone(), Justification::Rule(id.clone(), inst)));
            }
        }
        None
    }

    /// Files step `n` as a fact, splitting conjunctions.
    fn record(&mut self, n: usize) {
        let a = self.b.statement(n).clone();
        match a.node() {
            StatementNode::Atom(atom) => {
                self.facts.entry(atom.clone()).or_insert(n);
            }
            StatementNode::And(l, r) => {
                let binding = MetaBinding::from([(Symbol::new("a"), l.clone()), (Symbol::new("b"), r.clone())]);
                for (k, part) in [(4, l), (5, r)] {
                    if self.b.find(part).is_none() {
                        let ax = self.b.meta_axiom(MetaAxiom::K(k), binding.clone());
                        let m = self.b.mmp(ax, n);
                        self.record(m);
                    }
                }
            }
            StatementNode::Top => {}
            _ => {
                if !self.clauses.contains(&n) {
                    self.clauses.push(n);
                }
            }
        }
    }

    /// Substitution instances of positive facts that are goal atoms.
    fn instantiate_toward_goal(&mut self) {
        let wanted: Vec<Atom> = self.goal_atoms.iter().filter(|a| !self.facts.contains_key(*a)).cloned().collect();
        for a in wanted {
            let found = self
                .facts
                .iter()
                .filter(|(f, _)| f.sign == a.sign)
                .find_map(|(f, &n)| match_formula(&f.body, &a.body).map(|s| (n, s)));
            if let Some((n, s)) = found {
                if self.b.statement(n).is_positive() {
                    let m = self.b.sb(n, s);
                    self.record(m);
                }
            }
        }
    }

    /// Applies each rule under every binding of its premises to facts, goal
    /// atoms or atoms of derived clauses. Instances whose premises are all facts are applied
    /// through the rule macro; the others are recorded as rule-instance
    /// steps for the glue.
    fn apply_rules(&mut self) {
        let mut available: BTreeSet<Atom> = self.facts.keys().chain(&self.goal_atoms).cloned().collect();
        for &n in &self.clauses {
            available.extend(self.b.statement(n).atoms());
        }
        let available: Vec<Atom> = available.into_iter().collect();
        let ds = self.ds;
        for (id, schema) in &ds.rules {
            let (antecedent, consequent) = match schema.as_imp() {
                Some((a, c)) => (conjuncts(a), c.clone()),
                None => (Vec::new(), schema.clone()),
            };
            let premise_atoms: Vec<Atom> = antecedent.iter().filter_map(|p| p.as_atom().cloned()).collect();
            if premise_atoms.len() + antecedent.iter().filter(|p| **p == Statement::top()).count() != antecedent.len() {
                continue;
            }
            let mut bindings = Vec::new();
            self.bind_premises(&premise_atoms, &available, BTreeMap::new(), &mut bindings);
            let mut complete = Vec::new();
            for binding in bindings {
                self.bind_consequent(&consequent, binding, &mut complete);
            }
            for binding in complete {
                if self.b.len() > self.budget.max_steps {
                    return;
                }
                let inst = Instantiation::new(binding);
                let instance = build_instance(schema, &inst);
                if self.b.find(&instance).is_some() {
                    continue;
                }
                let steps: Option<Vec<usize>> = premise_atoms
                    .iter()
                    .map(|p| self.facts.get(&p.instantiate(&inst)).copied())
                    .collect();
                let n = match steps {
                    Some(steps) => match self.b.rule_macro(ds, id, &inst, &steps) {
                        Ok(n) => n,
                        Err(_) => continue,
                    },
                    None => self.b.add(instance, Justification::Rule(id.clone(), inst)),
                };
                self.record(n);
            }
        }
    }

    fn bind_premises(
        &self,
        premises: &[Atom],
        available: &[Atom],
        binding: BTreeMap<Symbol, Formula>,
        out: &mut Vec<BTreeMap<Symbol, Formula>>,
    ) {
        let Some((first, rest)) = premises.split_first() else {
            out.push(binding);
            return;
        };
        for a in available {
            if a.sign != first.sign {
                continue;
            }
            let mut b = binding.clone();
            if first.body.match_metas(&a.body, &mut b) && self.small(&b) {
                self.bind_premises(rest, available, b, out);
            }
        }
    }

    /// Completes a binding by matching consequent atoms against goal atoms
    /// when metavariables are left over.
    fn bind_consequent(
        &self,
        consequent: &Statement,
        binding: BTreeMap<Symbol, Formula>,
        out: &mut Vec<BTreeMap<Symbol, Formula>>,
    ) {
        let metas = consequent.metas();
        if metas.iter().all(|m| binding.contains_key(m)) {
            out.push(binding);
            return;
        }
        for c in consequent.atoms() {
            for g in &self.goal_atoms {
                if g.sign != c.sign {
                    continue;
                }
                let mut b = binding.clone();
                if c.body.match_metas(&g.body, &mut b) && self.small(&b) && metas.iter().all(|m| b.contains_key(m)) && !out.contains(&b) {
                    out.push(b);
                }
            }
        }
    }

    fn small(&self, b: &BTreeMap<Symbol, Formula>) -> bool {
        b.values().all(|f| f.size() <= self.budget.max_size)
    }

    /// Proves the goal from the fewest relevant facts by a meta-level
    /// tautology.
    fn glue(&mut self, goal: &Statement) -> Option<usize> {
        let mut relevant: BTreeSet<Atom> = self.goal_atoms.clone();
        let candidates: Vec<usize> = self.facts.values().copied().chain(self.clauses.iter().copied()).collect();
        let mut chosen: Vec<usize> = Vec::new();
        loop {
            let before = chosen.len();
            for &n in &candidates {
                if chosen.contains(&n) {
                    continue;
                }
                let atoms = self.b.statement(n).atoms();
                if atoms.iter().any(|a| relevant.contains(a)) {
                    relevant.extend(atoms);
                    chosen.push(n);
                }
            }
            if chosen.len() == before {
                break;
            }
        }
        chosen.sort_unstable();
        if relevant.len() > GLUE_EVAL_ATOMS {
            return None;
        }
        let entails = |steps: &[usize]| {
            let hyp = Statement::conj(steps.iter().map(|&n| self.b.statement(n).clone()));
            Statement::imp(hyp, goal.clone()).is_meta_tautology()
        };
        if !entails(&chosen) {
            return None;
        }
        let mut i = 0;
        while i < chosen.len() {
            let mut fewer = chosen.clone();
            fewer.remove(i);
            if entails(&fewer) {
                chosen = fewer;
            } else {
                i += 1;
            }
        }
        let mut atoms: BTreeSet<Atom> = goal.atoms().into_iter().collect();
        for &n in &chosen {
            atoms.extend(self.b.statement(n).atoms());
        }
        if atoms.len() > self.budget.max_atoms {
            return None;
        }
        let mut sink = MetaSink::new(std::mem::take(&mut self.b));
        let result = match chosen.split_first() {
            None => prove_tautology(&mut sink, goal).ok(),
            Some((&first, rest)) => {
                let hyp = rest.iter().fold(first, |acc, &n| sink.builder.conjoin(acc, n));
                let imp = Statement::imp(sink.builder.statement(hyp).clone(), goal.clone());
                prove_tautology(&mut sink, &imp).ok().map(|t| sink.builder.mmp(t, hyp))
            }
        };
        self.b = sink.builder;
        result
    }
}

fn conjuncts(a: &Statement) -> Vec<Statement> {
    match a.node() {
        StatementNode::And(l, r) => {
            let mut v = conjuncts(l);
            v.extend(conjuncts(r));
            v
        }
        _ => vec![a.clone()],
    }
}
