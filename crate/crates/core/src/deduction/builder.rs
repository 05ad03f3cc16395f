//! Incremental construction of derivations.

use std::collections::HashMap;

use thiserror::Error;

use super::{DeductiveSystem, Derivation, Justification, MetaAxiom, MetaBinding, Step};
use crate::formula::{Instantiation, Substitution, Symbol};
use crate::statement::{build_instance, Statement, StatementNode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MacroError {
    #[error("no rule `{0}`")]
    UnknownRule(String),
    #[error("the binding leaves metavariables of `{0}` unassigned")]
    Unbound(String),
    #[error("rule `{rule}` needs {expected} premises, {given} given")]
    PremiseCount { rule: String, expected: usize, given: usize },
    #[error("step {step} is {found}, rule `{rule}` needs {wanted}")]
    PremiseMismatch { rule: String, step: usize, found: Statement, wanted: Statement },
    #[error("step {0} does not exist")]
    Dangling(usize),
}

/// A derivation under construction. Every statement is recorded once;
/// adding a statement that is already derived returns the earlier step.
#[derive(Clone, Debug, Default)]
pub struct DerivationBuilder {
    d: Derivation,
    memo: HashMap<Statement, usize>,
}

impl DerivationBuilder {
    pub fn new(premises: Vec<Statement>) -> Self {
        DerivationBuilder { d: Derivation::new(premises), memo: HashMap::new() }
    }

    /// Continues an existing derivation.
    pub fn from_derivation(d: Derivation) -> Self {
        let mut memo = HashMap::new();
        for (i, s) in d.steps.iter().enumerate() {
            memo.entry(s.statement.clone()).or_insert(i + 1);
        }
        DerivationBuilder { d, memo }
    }

    pub fn derivation(&self) -> &Derivation {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn find(&self, a: &Statement) -> Option<usize> {
        self.memo.get(a).copied()
    }

    /// The statement of step `n` (1-based).
    pub fn statement(&self, n: usize) -> &Statement {
        &self.d.steps[n - 1].statement
    }

    pub fn add(&mut self, a: Statement, j: Justification) -> usize {
        if let Some(&n) = self.memo.get(&a) {
            return n;
        }
        let n = self.d.push(a.clone(), j);
        self.memo.insert(a, n);
        n
    }

    pub fn premise(&mut self, a: Statement) -> usize {
        if !self.d.premises.contains(&a) {
            self.d.premises.push(a.clone());
        }
        self.add(a, Justification::Premise)
    }

    pub fn axiom(&mut self, ds: &DeductiveSystem, id: &str) -> Option<usize> {
        let a = ds.axiom(id)?.clone();
        Some(self.add(a, Justification::Axiom(id.to_string())))
    }

    pub fn lemma(&mut self, name: &str, a: Statement) -> usize {
        self.add(a, Justification::Lemma(name.to_string()))
    }

    pub fn meta_axiom(&mut self, m: MetaAxiom, binding: MetaBinding) -> usize {
        let a = m.instance(&binding).expect("complete meta-axiom binding");
        self.add(a, Justification::MetaAxiom(m, binding))
    }

    /// `Sb`; the identity substitution returns `n` itself.
    pub fn sb(&mut self, n: usize, s: Substitution) -> usize {
        if s.is_identity() {
            return n;
        }
        let a = self.statement(n).subst(&s);
        if let Some(&m) = self.memo.get(&a) {
            return m;
        }
        self.add(a, Justification::Sb(n, s))
    }

    /// `RS`, deriving `a` from step `n = σ(a)`.
    pub fn rs(&mut self, n: usize, a: Statement, s: Substitution) -> usize {
        if s.is_identity() {
            return n;
        }
        self.add(a, Justification::Rs(n, s))
    }

    /// MMP; panics unless step `major` is `minor ⟹ β`.
    pub fn mmp(&mut self, major: usize, minor: usize) -> usize {
        let b = match self.statement(major).node() {
            StatementNode::Imp(a, b) if a == self.statement(minor) => b.clone(),
            _ => panic!(
                "MMP mismatch: {} does not start with {}",
                self.statement(major),
                self.statement(minor)
            ),
        };
        self.add(b, Justification::Mmp(major, minor))
    }

    /// Proves `α ⩓ β` from steps `α` and `β` with the K3 instance.
    pub fn conjoin(&mut self, left: usize, right: usize) -> usize {
        let binding = MetaBinding::from([
            (Symbol::new("a"), self.statement(left).clone()),
            (Symbol::new("b"), self.statement(right).clone()),
        ]);
        let k3 = self.meta_axiom(MetaAxiom::K(3), binding);
        let half = self.mmp(k3, left);
        self.mmp(half, right)
    }

    /// Applies rule `id` under `binding` to the premise steps; see
    /// [`apply_rule_macro`].
    pub fn rule_macro(
        &mut self,
        ds: &DeductiveSystem,
        id: &str,
        binding: &Instantiation,
        premises: &[usize],
    ) -> Result<usize, MacroError> {
        let schema = ds.rule(id).ok_or_else(|| MacroError::UnknownRule(id.to_string()))?;
        let instance = build_instance(schema, binding);
        if !instance.is_ground() {
            return Err(MacroError::Unbound(id.to_string()));
        }
        let (antecedent, _) = match instance.as_imp() {
            Some(parts) => parts,
            None => {
                return expect_count(id, 0, premises.len())
                    .map(|_| self.add(instance.clone(), Justification::Rule(id.to_string(), binding.clone())))
            }
        };
        let wanted = conjuncts(antecedent);
        if let [only] = wanted.as_slice() {
            if **only == Statement::top() {
                expect_count(id, 0, premises.len())?;
                let rule = self.add(instance.clone(), Justification::Rule(id.to_string(), binding.clone()));
                let c = instance.as_imp().expect("implication").1.clone();
                let ax = self.meta_axiom(MetaAxiom::Top, MetaBinding::from([(Symbol::new("a"), c)]));
                return Ok(self.mmp(ax, rule));
            }
        }
        expect_count(id, wanted.len(), premises.len())?;
        for (&n, w) in premises.iter().zip(&wanted) {
            if n == 0 || n > self.len() {
                return Err(MacroError::Dangling(n));
            }
            if self.statement(n) != *w {
                return Err(MacroError::PremiseMismatch {
                    rule: id.to_string(),
                    step: n,
                    found: self.statement(n).clone(),
                    wanted: (*w).clone(),
                });
            }
        }
        let joined = self.join(antecedent, &mut premises.iter().copied());
        let rule = self.add(instance.clone(), Justification::Rule(id.to_string(), binding.clone()));
        Ok(self.mmp(rule, joined))
    }

    /// Builds the (left-nested) conjunction `shape` from premise steps
    /// consumed in order.
    fn join(&mut self, shape: &Statement, steps: &mut impl Iterator<Item = usize>) -> usize {
        match shape.node() {
            StatementNode::And(a, b) => {
                let l = self.join(a, steps);
                let r = self.join(b, steps);
                self.conjoin(l, r)
            }
            _ => steps.next().expect("premise count checked"),
        }
    }

    /// Appends the steps of `d`, reusing statements already derived, and
    /// returns the step of its conclusion. Premises of `d` become premises
    /// here.
    pub fn splice(&mut self, d: &Derivation) -> usize {
        let mut map = vec![0; d.len() + 1];
        for (i, step) in d.steps.iter().enumerate() {
            let j = match &step.justification {
                Justification::Sb(k, s) => Justification::Sb(map[*k], s.clone()),
                Justification::Rs(k, s) => Justification::Rs(map[*k], s.clone()),
                Justification::Mmp(a, b) => Justification::Mmp(map[*a], map[*b]),
                Justification::Premise => {
                    map[i + 1] = self.premise(step.statement.clone());
                    continue;
                }
                other => other.clone(),
            };
            map[i + 1] = self.add(step.statement.clone(), j);
        }
        map[d.len()]
    }

    /// The derivation as built.
    pub fn build(self) -> Derivation {
        self.d
    }

    /// The steps step `goal` depends on, renumbered, ending with `goal`.
    pub fn extract(&self, goal: usize) -> Derivation {
        extract(&self.d, goal)
    }
}

fn expect_count(rule: &str, expected: usize, given: usize) -> Result<(), MacroError> {
    if expected == given {
        Ok(())
    } else {
        Err(MacroError::PremiseCount { rule: rule.to_string(), expected, given })
    }
}

fn conjuncts(a: &Statement) -> Vec<&Statement> {
    match a.node() {
        StatementNode::And(l, r) => {
            let mut v = conjuncts(l);
            v.extend(conjuncts(r));
            v
        }
        _ => vec![a],
    }
}

/// The sub-derivation of `d` needed for step `goal`, renumbered and ending
/// with `goal`; premises are kept.
pub(crate) fn extract(d: &Derivation, goal: usize) -> Derivation {
    let mut needed = vec![false; d.len() + 1];
    needed[goal] = true;
    for n in (1..=goal).rev() {
        if needed[n] {
            for r in d.steps[n - 1].justification.references() {
                needed[r] = true;
            }
        }
    }
    let mut renumber = vec![0; d.len() + 1];
    let mut out = Derivation::new(d.premises.clone());
    for n in 1..=goal {
        if !needed[n] {
            continue;
        }
        let step = &d.steps[n - 1];
        let j = match &step.justification {
            Justification::Sb(k, s) => Justification::Sb(renumber[*k], s.clone()),
            Justification::Rs(k, s) => Justification::Rs(renumber[*k], s.clone()),
            Justification::Mmp(a, b) => Justification::Mmp(renumber[*a], renumber[*b]),
            other => other.clone(),
        };
        renumber[n] = out.push(step.statement.clone(), j);
    }
    out
}

/// Expands one application of a rule of `ds` into steps appended after the
/// last step of `d`: for each pair of premises the K3 instance
/// `α ⟹ (β ⟹ α ⩓ β)` and two MMP steps building the conjunction, then the
/// rule instance and a final MMP. A single-premise rule needs only the
/// instance and one MMP.
pub fn apply_rule_macro(
    ds: &DeductiveSystem,
    d: &Derivation,
    rule: &str,
    binding: &Instantiation,
    premises: &[usize],
) -> Result<Vec<Step>, MacroError> {
    let start = d.len();
    let mut b = DerivationBuilder::from_derivation(d.clone());
    b.rule_macro(ds, rule, binding, premises)?;
    Ok(b.build().steps.split_off(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deduction::{check_derivation, LemmaStore};
    use crate::formula::Signature;
    use crate::syntax::{parse_formula, parse_statement};

    fn st(s: &str) -> Statement {
        parse_statement(s).unwrap()
    }

    fn system() -> DeductiveSystem {
        DeductiveSystem::new("t", Signature::default())
            .with_rule("mp", st("+X AND +(X -> Y) => +Y"))
            .unwrap()
            .with_rule("mt", st("-Y AND +(X -> Y) => -X"))
            .unwrap()
            .with_rule("r1", st("-X => +~X"))
            .unwrap()
            .with_rule("rk", st("TOP => +(p <-> q)"))
            .unwrap()
    }

    #[test]
    fn modus_ponens_macro() {
        let ds = system();
        let mut d = Derivation::new(vec![st("+a"), st("+(a -> b)")]);
        d.push(st("+a"), Justification::Premise);
        d.push(st("+(a -> b)"), Justification::Premise);
        let inst = Instantiation::from_pairs([
            ("X", parse_formula("a").unwrap()),
            ("Y", parse_formula("b").unwrap()),
        ]);
        let steps = apply_rule_macro(&ds, &d, "mp", &inst, &[1, 2]).unwrap();
        assert_eq!(steps.len(), 5);
        assert_eq!(steps.last().unwrap().statement, st("+b"));
        d.steps.extend(steps);
        assert_eq!(check_derivation(&ds, &d, &LemmaStore::new()), Ok(()));
        assert!(matches!(
            apply_rule_macro(&ds, &d, "mp", &inst, &[2, 1]),
            Err(MacroError::PremiseMismatch { .. })
        ));
    }

    #[test]
    fn single_and_zero_premise_rules() {
        let ds = system();
        let mut d = Derivation::new(vec![st("-p")]);
        d.push(st("-p"), Justification::Premise);
        let inst = Instantiation::from_pairs([("X", parse_formula("p").unwrap())]);
        let steps = apply_rule_macro(&ds, &d, "r1", &inst, &[1]).unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[1].statement, st("+~p"));
        d.steps.extend(steps);
        let steps = apply_rule_macro(&ds, &d, "rk", &Instantiation::default(), &[]).unwrap();
        assert_eq!(steps.last().unwrap().statement, st("+(p <-> q)"));
        d.steps.extend(steps);
        assert_eq!(check_derivation(&ds, &d, &LemmaStore::new()), Ok(()));
    }

    #[test]
    fn extract_keeps_only_dependencies() {
        let mut b = DerivationBuilder::new(vec![st("+a"), st("+b"), st("+c")]);
        let a = b.premise(st("+a"));
        let _ = b.premise(st("+b"));
        let c = b.premise(st("+c"));
        let ac = b.conjoin(a, c);
        let d = b.extract(ac);
        assert_eq!(d.len(), 5);
        assert_eq!(d.conclusion(), Some(&st("+a AND +c")));
        assert_eq!(check_derivation(&system(), &d, &LemmaStore::new()), Ok(()));
    }
}
