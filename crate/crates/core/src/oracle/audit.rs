//! Bounded saturation of a calculus over a finite formula universe and an
//! audit of what it derives against the standard reading.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use super::{count_by_size, enumerate_by_size, is_tautology, standard_vars, OracleError};
use crate::deduction::{check_derivation, AtomicProver, DeductiveSystem, LemmaStore};
use crate::formula::{match_formula, Connective, Formula, Symbol};
use crate::statement::{Atom, Sign, Statement, StatementNode};

/// Largest universe the audit accepts.
const MAX_UNIVERSE: u128 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingKind {
    /// Both `⊕A` and `⊖A` derived.
    Ambivalent,
    /// `⊕A` derived for a non-tautology.
    AssertedNonTautology,
    /// `⊖A` derived for a tautology.
    RejectedTautology,
}

impl FindingKind {
    pub fn code(self) -> &'static str {
        match self {
            FindingKind::Ambivalent => "ambivalent",
            FindingKind::AssertedNonTautology => "asserted-non-tautology",
            FindingKind::RejectedTautology => "rejected-tautology",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    pub kind: FindingKind,
    pub formula: Formula,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.code(), self.formula)
    }
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    /// Number of formulas in the universe.
    pub universe: usize,
    pub asserted: BTreeSet<Formula>,
    pub rejected: BTreeSet<Formula>,
    /// Multiple-conclusion rule instances applied; they add no atoms.
    pub disjunctions: usize,
    pub findings: Vec<Finding>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

/// A rule schema split into atomic premises and conclusions.
struct RuleShape {
    premises: Vec<Atom>,
    conclusions: Vec<Atom>,
}

fn atoms_of(s: &Statement, joiner: fn(&StatementNode) -> Option<(&Statement, &Statement)>) -> Option<Vec<Atom>> {
    match s.node() {
        StatementNode::Atom(a) => Some(vec![a.clone()]),
        StatementNode::Top | StatementNode::Bot => Some(Vec::new()),
        node => {
            let (l, r) = joiner(node)?;
            let mut out = atoms_of(l, joiner)?;
            out.extend(atoms_of(r, joiner)?);
            Some(out)
        }
    }
}

fn shape(schema: &Statement) -> Option<RuleShape> {
    let (antecedent, consequent) = match schema.as_imp() {
        Some((a, c)) => (a.clone(), c.clone()),
        None => (Statement::top(), schema.clone()),
    };
    let premises = atoms_of(&antecedent, |n| match n {
        StatementNode::And(l, r) => Some((l, r)),
        _ => None,
    })?;
    let conclusions = atoms_of(&consequent, |n| match n {
        StatementNode::Or(l, r) => Some((l, r)),
        _ => None,
    })?;
    Some(RuleShape { premises, conclusions })
}

/// Saturates `calc` over the formulas with at most `size_cap` symbols over
/// `var_cap` variables and audits the atomic statements it derives.
///
/// Seeds are the atomic axioms and whatever `prover` certifies for atoms
/// of the universe; each certificate is re-checked before use. Saturation
/// then applies `Sb` to asserted facts, `RS` to rejected ones (unless the
/// calculus disables it), and rule instances whose premises are facts.
/// A rule instance with several conclusions derives no atom and is only
/// counted.
pub fn saturate_and_audit(
    calc: &DeductiveSystem,
    size_cap: usize,
    var_cap: usize,
    prover: &mut dyn AtomicProver,
    store: &mut LemmaStore,
) -> Result<AuditReport, OracleError> {
    let connectives: Vec<Connective> = calc
        .signature
        .connectives()
        .iter()
        .filter(|c| !matches!(c, Connective::Named(..)))
        .cloned()
        .collect();
    let bound = count_by_size(var_cap, &connectives, size_cap);
    if bound > MAX_UNIVERSE {
        return Err(OracleError::TooLarge(bound));
    }
    let universe = enumerate_by_size(&standard_vars(var_cap), &connectives, size_cap);
    let in_universe: HashSet<&Formula> = universe.iter().collect();

    let mut facts: BTreeSet<Atom> = BTreeSet::new();
    for (_, a) in &calc.axioms {
        if let Some(atom) = a.as_atom() {
            facts.insert(atom.clone());
        }
    }
    for f in &universe {
        for sign in [Sign::Asserted, Sign::Rejected] {
            let atom = Atom::new(sign, f.clone());
            if facts.contains(&atom) {
                continue;
            }
            if let Some(d) = prover.prove_atom(calc, &atom, store) {
                if d.conclusion() == Some(&Statement::atom(atom.clone())) && check_derivation(calc, &d, store).is_ok() {
                    facts.insert(atom);
                }
            }
        }
    }

    let rules: Vec<(&String, RuleShape)> =
        calc.rules.iter().filter_map(|(id, s)| shape(s).map(|sh| (id, sh))).collect();
    let mut disjunctions: HashSet<(String, Vec<Atom>)> = HashSet::new();
    let mut done: BTreeSet<Atom> = BTreeSet::new();
    loop {
        let mut new: BTreeSet<Atom> = BTreeSet::new();
        for a in facts.iter().filter(|a| !done.contains(*a)) {
            match a.sign {
                Sign::Asserted => {
                    for f in &universe {
                        if match_formula(&a.body, f).is_some() {
                            new.insert(Atom::asserted(f.clone()));
                        }
                    }
                }
                Sign::Rejected if calc.reverse_substitution => {
                    for f in &universe {
                        if match_formula(f, &a.body).is_some() {
                            new.insert(Atom::rejected(f.clone()));
                        }
                    }
                }
                Sign::Rejected => {}
            }
        }
        done.extend(facts.iter().cloned());
        for (id, rule) in &rules {
            let mut bindings = Vec::new();
            bind(&rule.premises, &facts, BTreeMap::new(), &mut bindings);
            for binding in bindings {
                let inst = crate::formula::Instantiation::new(binding);
                let concl: Vec<Atom> = rule.conclusions.iter().map(|c| c.instantiate(&inst)).collect();
                if concl.iter().any(|c| !c.body.is_ground()) {
                    continue;
                }
                match concl.as_slice() {
                    [single] => {
                        if in_universe.contains(&single.body) {
                            new.insert(single.clone());
                        }
                    }
                    _ => {
                        disjunctions.insert((id.to_string(), concl));
                    }
                }
            }
        }
        let before = facts.len();
        facts.extend(new);
        if facts.len() == before && done.len() == facts.len() {
            break;
        }
    }

    let mut report = AuditReport { universe: universe.len(), disjunctions: disjunctions.len(), ..Default::default() };
    for a in &facts {
        match a.sign {
            Sign::Asserted => report.asserted.insert(a.body.clone()),
            Sign::Rejected => report.rejected.insert(a.body.clone()),
        };
    }
    for f in report.asserted.intersection(&report.rejected) {
        report.findings.push(Finding { kind: FindingKind::Ambivalent, formula: f.clone() });
    }
    for f in &report.asserted {
        if f.is_ground() && !is_tautology(f)? {
            report.findings.push(Finding { kind: FindingKind::AssertedNonTautology, formula: f.clone() });
        }
    }
    for f in &report.rejected {
        if f.is_ground() && is_tautology(f)? {
            report.findings.push(Finding { kind: FindingKind::RejectedTautology, formula: f.clone() });
        }
    }
    report.findings.sort();
    Ok(report)
}

/// All bindings of the premises' metavariables to facts. Premises whose
/// bodies are already determined are looked up rather than scanned.
fn bind(premises: &[Atom], facts: &BTreeSet<Atom>, binding: BTreeMap<Symbol, Formula>, out: &mut Vec<BTreeMap<Symbol, Formula>>) {
    if premises.is_empty() {
        out.push(binding);
        return;
    }
    let inst = crate::formula::Instantiation::new(binding.clone());
    let determined = premises.iter().position(|p| p.body.instantiate(&inst).is_ground());
    if let Some(i) = determined {
        if facts.contains(&premises[i].instantiate(&inst)) {
            let mut rest = premises.to_vec();
            rest.remove(i);
            bind(&rest, facts, binding, out);
        }
        return;
    }
    let i = (0..premises.len()).max_by_key(|&i| premises[i].body.size()).expect("non-empty");
    let mut rest = premises.to_vec();
    let p = rest.remove(i);
    for f in facts.iter().filter(|f| f.sign == p.sign) {
        let mut b = binding.clone();
        if p.body.match_metas(&f.body, &mut b) {
            bind(&rest, facts, b, out);
        }
    }
}
