//! Bounded admissibility search for signed rules, contraposition, and the
//! pigeonhole rule family.

use std::collections::BTreeMap;

use super::{classical_connectives, count_formulas, enumerate_formulas, is_tautology, standard_vars, OracleError, SignedRule};
use crate::formula::{Formula, FormulaNode, Substitution, Symbol};
use crate::statement::{Atom, RuleForm, Sign};

/// Most substitutions a bounded admissibility check enumerates.
const MAX_SUBSTITUTIONS: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissibility {
    NoCounterexample,
    /// A substitution making every premise hold and every conclusion fail.
    Counterexample(Substitution),
}

/// Replaces variables and metavariables named in `map` simultaneously.
fn replace(f: &Formula, map: &BTreeMap<Symbol, Formula>) -> Formula {
    match f.node() {
        FormulaNode::Var(s) | FormulaNode::Meta(s) => map.get(s).cloned().unwrap_or_else(|| f.clone()),
        FormulaNode::App(c, args) => Formula::app(c.clone(), args.iter().map(|a| replace(a, map)).collect()),
    }
}

/// Letters of a rule: its metavariables and variables in order of first
/// occurrence, premises first.
fn letters(rule: &SignedRule) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = Vec::new();
    for a in rule.premises.iter().chain(&rule.conclusions) {
        for s in a.body.metas().into_iter().chain(a.body.vars()) {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

fn holds(a: &Atom, map: &BTreeMap<Symbol, Formula>) -> Result<bool, OracleError> {
    let t = is_tautology(&replace(&a.body, map))?;
    Ok(match a.sign {
        Sign::Asserted => t,
        Sign::Rejected => !t,
    })
}

/// Looks for a substitution of formulas with at most `depth` connectives
/// over the first `vars` standard variables for the rule's letters that
/// makes every premise hold and every conclusion fail under the standard
/// reading (`⊕A`: `A` is a tautology, `⊖A`: it is not). Substitutions are
/// enumerated in canonical order, the first letter slowest, so the first
/// counterexample found is reproducible.
pub fn check_admissible_bounded(rule: &SignedRule, depth: usize, vars: usize) -> Result<Admissibility, OracleError> {
    let letters = letters(rule);
    let connectives = classical_connectives();
    let per_letter = count_formulas(vars, &connectives, depth);
    let total = per_letter.checked_pow(letters.len() as u32).unwrap_or(u128::MAX);
    if total > MAX_SUBSTITUTIONS {
        return Err(OracleError::TooLarge(total));
    }
    let candidates = enumerate_formulas(&standard_vars(vars), &connectives, depth);
    if candidates.is_empty() {
        return Ok(Admissibility::NoCounterexample);
    }
    let mut digits = vec![0usize; letters.len()];
    loop {
        let map: BTreeMap<Symbol, Formula> =
            letters.iter().cloned().zip(digits.iter().map(|&i| candidates[i].clone())).collect();
        let mut premises = true;
        for p in &rule.premises {
            if !holds(p, &map)? {
                premises = false;
                break;
            }
        }
        if premises {
            let mut concluded = false;
            for c in &rule.conclusions {
                if holds(c, &map)? {
                    concluded = true;
                    break;
                }
            }
            if !concluded {
                return Ok(Admissibility::Counterexample(Substitution::from_pairs(map)));
            }
        }
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(Admissibility::NoCounterexample);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < candidates.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Turns `A1, …, An / B` over asserted atoms into the refutation rule
/// `⊖B / ⊖A1, …, ⊖An`.
pub fn contrapose_rule(rule: &SignedRule) -> Result<SignedRule, OracleError> {
    let all_asserted = rule.premises.iter().chain(&rule.conclusions).all(|a| a.sign == Sign::Asserted);
    if !all_asserted || rule.conclusions.len() != 1 {
        return Err(OracleError::NotContraposable);
    }
    Ok(RuleForm::new(
        rule.conclusions.iter().map(Atom::flip),
        rule.premises.iter().map(Atom::flip),
    ))
}

fn indexed(i: usize) -> Formula {
    Formula::var(&format!("p{i}"))
}

/// `⊤ / {⊕(p_i ≡ p_j) : 1 ≤ i < j ≤ n}`: valid in a Boolean algebra exactly
/// when it has fewer than `n` elements.
pub fn pigeonhole_rule(n: usize) -> SignedRule {
    let mut conclusions = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            conclusions.push(Atom::asserted(Formula::eqv(indexed(i), indexed(j))));
        }
    }
    RuleForm::new([], conclusions)
}

/// The rule family as literally indexed: `⊤ / {⊕(p_i ≡ p_j) : i ≠ j,
/// 1 ≤ i, j ≤ 2^k}`, over `2^k` variables.
pub fn rk_verbatim_rule(k: u32) -> SignedRule {
    let n = 1usize << k;
    let mut conclusions = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                conclusions.push(Atom::asserted(Formula::eqv(indexed(i), indexed(j))));
            }
        }
    }
    RuleForm::new([], conclusions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_atom, parse_formula};

    fn atom(s: &str) -> Atom {
        parse_atom(s).unwrap()
    }

    #[test]
    fn disjunction_rule_counterexample() {
        let r = RuleForm::new([atom("+(A | B)")], [atom("+A"), atom("+B")]);
        let found = check_admissible_bounded(&r, 1, 2).unwrap();
        let expected = Substitution::from_pairs([
            (Symbol::new("A"), parse_formula("p").unwrap()),
            (Symbol::new("B"), parse_formula("~p").unwrap()),
        ]);
        assert_eq!(found, Admissibility::Counterexample(expected));
    }

    #[test]
    fn contraposition() {
        let mp = RuleForm::new([atom("+p"), atom("+(p -> q)")], [atom("+q")]);
        let c = contrapose_rule(&mp).unwrap();
        assert_eq!(c, RuleForm::new([atom("-q")], [atom("-p"), atom("-(p -> q)")]));
        let twice = RuleForm::new([atom("+p")], [atom("+p"), atom("+q")]);
        assert_eq!(contrapose_rule(&twice), Err(OracleError::NotContraposable));
        let same = RuleForm::new([atom("+p")], [atom("+p")]);
        assert_eq!(contrapose_rule(&same).unwrap(), RuleForm::new([atom("-p")], [atom("-p")]));
    }

    #[test]
    fn rule_families() {
        assert_eq!(pigeonhole_rule(3).conclusions.len(), 3);
        assert_eq!(rk_verbatim_rule(1).conclusions.len(), 2);
        assert_eq!(rk_verbatim_rule(2).conclusions.len(), 12);
    }

    #[test]
    fn cap_is_enforced() {
        let r = RuleForm::new([atom("+(A | B | C | D)")], [atom("+A")]);
        assert!(matches!(check_admissible_bounded(&r, 3, 3), Err(OracleError::TooLarge(_))));
    }
}
