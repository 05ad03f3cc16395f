//! Boolean algebras of bit-vectors as logical matrices.

use std::collections::BTreeMap;

use super::{OracleError, SignedRule};
use crate::formula::{Connective, Formula, FormulaNode, Symbol};
use crate::statement::Sign;

/// Most valuations a local validity check enumerates.
const MAX_VALUATIONS: u128 = 1 << 26;

/// The Boolean algebra of bit-vectors of length `bits`, with componentwise
/// operations and the all-ones vector designated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixModel {
    bits: u32,
}

impl MatrixModel {
    pub const MAX_BITS: u32 = 16;

    pub fn new(bits: u32) -> Result<Self, OracleError> {
        if bits == 0 || bits > Self::MAX_BITS {
            return Err(OracleError::MatrixBits { found: bits, max: Self::MAX_BITS });
        }
        let m = MatrixModel { bits };
        m.self_check();
        Ok(m)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Number of elements of the carrier.
    pub fn size(&self) -> u64 {
        1 << self.bits
    }

    pub fn top(&self) -> u64 {
        self.size() - 1
    }

    pub fn not(&self, x: u64) -> u64 {
        !x & self.top()
    }

    pub fn and(&self, x: u64, y: u64) -> u64 {
        x & y
    }

    pub fn or(&self, x: u64, y: u64) -> u64 {
        x | y
    }

    pub fn imp(&self, x: u64, y: u64) -> u64 {
        self.or(self.not(x), y)
    }

    pub fn eqv(&self, x: u64, y: u64) -> u64 {
        self.not(x ^ y)
    }

    /// Checks the Boolean laws tying the operations together on small
    /// carriers.
    fn self_check(&self) {
        if self.bits > 3 {
            return;
        }
        for x in 0..self.size() {
            assert_eq!(self.not(self.not(x)), x);
            assert_eq!(self.or(x, self.not(x)), self.top());
            for y in 0..self.size() {
                assert_eq!(self.not(self.and(x, y)), self.or(self.not(x), self.not(y)));
                assert_eq!(self.eqv(x, y), self.and(self.imp(x, y), self.imp(y, x)));
            }
        }
    }

    /// Value of `f` with variables and metavariables read from `val`.
    pub fn eval(&self, f: &Formula, val: &BTreeMap<Symbol, u64>) -> Result<u64, OracleError> {
        Ok(match f.node() {
            FormulaNode::Var(s) | FormulaNode::Meta(s) => val.get(s).copied().unwrap_or(0) & self.top(),
            FormulaNode::App(c, args) => {
                let x = self.eval(&args[0], val)?;
                match c {
                    Connective::Not => self.not(x),
                    Connective::Named(name, _) => return Err(OracleError::NoSemantics(name.clone())),
                    c => {
                        let y = self.eval(&args[1], val)?;
                        match c {
                            Connective::And => self.and(x, y),
                            Connective::Or => self.or(x, y),
                            Connective::Imp => self.imp(x, y),
                            _ => self.eqv(x, y),
                        }
                    }
                }
            }
        })
    }
}

fn letters(rule: &SignedRule) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = Vec::new();
    for a in rule.premises.iter().chain(&rule.conclusions) {
        for s in a.body.vars().into_iter().chain(a.body.metas()) {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// A valuation under which every premise body is designated and no
/// conclusion body is, if one exists. Valuations are tried in
/// lexicographic order of the letters' values.
pub fn local_counterexample(
    rule: &SignedRule,
    model: &MatrixModel,
) -> Result<Option<Vec<(Symbol, u64)>>, OracleError> {
    if let Some(a) = rule.premises.iter().chain(&rule.conclusions).find(|a| a.sign == Sign::Rejected) {
        return Err(OracleError::RejectedAtom(a.clone()));
    }
    let letters = letters(rule);
    let total = (model.size() as u128).checked_pow(letters.len() as u32).unwrap_or(u128::MAX);
    if total > MAX_VALUATIONS {
        return Err(OracleError::TooLarge(total));
    }
    let top = model.top();
    let mut digits = vec![0u64; letters.len()];
    loop {
        let val: BTreeMap<Symbol, u64> = letters.iter().cloned().zip(digits.iter().copied()).collect();
        let mut holds = true;
        for p in &rule.premises {
            if model.eval(&p.body, &val)? != top {
                holds = false;
                break;
            }
        }
        if holds {
            let mut some = false;
            for c in &rule.conclusions {
                if model.eval(&c.body, &val)? == top {
                    some = true;
                    break;
                }
            }
            if !some {
                return Ok(Some(letters.iter().cloned().zip(digits).collect()));
            }
        }
        // Advance the odometer, last letter fastest.
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < model.size() {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Whether the rule is valid in the matrix valuation by valuation.
pub fn local_valid(rule: &SignedRule, model: &MatrixModel) -> Result<bool, OracleError> {
    Ok(local_counterexample(rule, model)?.is_none())
}
