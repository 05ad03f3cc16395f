mod common;

use common::{formula, implicational};
use metalogic::cpl::{c_refute, decide, refute, BuiltinCalculus, ClassicalProver, CplError, ProofOptions};
use metalogic::deduction::{check_derivation, Budget, Justification, LemmaStore};
use metalogic::oracle::{enumerate_by_size, is_tautology, saturate_and_audit, standard_vars};
use metalogic::{parse_formula, Formula, Sign, Statement, Symbol};
use proptest::prelude::*;

/// Whether `f` is false under every valuation of its variables.
fn contradiction(f: &Formula) -> bool {
    let vars = f.vars();
    (0u32..1 << vars.len()).all(|bits| {
        let value = |s: &Symbol| bits >> vars.iter().position(|v| v == s).unwrap() & 1 == 1;
        !f.eval(&value)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refutations_go_through_a_contradiction(a in implicational(&["p", "q", "r"], 4)) {
        prop_assume!(!is_tautology(&a).unwrap() && a.as_var().is_none());
        let ds = BuiltinCalculus::LukasiewiczCore.system();
        let mut store = LemmaStore::new();
        let d = refute(&a, &ds, &mut store, ProofOptions::default()).unwrap();
        prop_assert_eq!(check_derivation(&ds, &d, &store), Ok(()));
        let last = d.steps.last().unwrap();
        let Justification::Rs(n, sigma) = &last.justification else { panic!("refutation ends with {:?}", last.justification) };
        prop_assert_eq!(&d.steps[n - 1].statement, &Statement::rejected(a.subst(sigma)));
        prop_assert!(contradiction(&a.subst(sigma)));
    }

    #[test]
    fn indirect_refutations_check(a in implicational(&["p", "q"], 3)) {
        prop_assume!(!is_tautology(&a).unwrap());
        let ds = BuiltinCalculus::LukasiewiczCore.system();
        let mut store = LemmaStore::new();
        let d = c_refute(&a, &ds, &Budget::default(), &mut store, ProofOptions::default()).unwrap().unwrap();
        prop_assert_eq!(check_derivation(&ds, &d, &store), Ok(()));
        prop_assert_eq!(&d.premises, &vec![Statement::asserted(a)]);
        prop_assert_eq!(d.conclusion(), Some(&Statement::asserted(Formula::var("p"))));
    }

    #[test]
    fn extended_calculus_decides(a in formula(&["p", "q"])) {
        let ds = BuiltinCalculus::ClassicalExtended.system();
        let mut store = LemmaStore::new();
        let cert = decide(&a, &ds, &mut store, ProofOptions::default()).unwrap();
        let expected = if is_tautology(&a).unwrap() { Sign::Asserted } else { Sign::Rejected };
        prop_assert_eq!(cert.sign, expected);
        prop_assert_eq!(cert.check(&ds, &store), Ok(()));
    }
}

#[test]
fn core_refuses_other_connectives() {
    let ds = BuiltinCalculus::LukasiewiczCore.system();
    let mut store = LemmaStore::new();
    let a = parse_formula("p | ~p").unwrap();
    assert!(matches!(decide(&a, &ds, &mut store, ProofOptions::default()), Err(CplError::Signature { .. })));
}

/// On its saturation universe the core calculus is coherent and full, and
/// its verdicts agree with the decision procedure.
#[test]
fn core_is_standard_on_its_universe() {
    let ds = BuiltinCalculus::LukasiewiczCore.system();
    let mut store = LemmaStore::new();
    let report = saturate_and_audit(&ds, 5, 2, &mut ClassicalProver::default(), &mut store).unwrap();
    assert!(report.is_clean());
    let universe = enumerate_by_size(&standard_vars(2), ds.signature.connectives(), 5);
    assert_eq!(universe.len(), report.universe);
    for a in &universe {
        let pos = report.asserted.contains(a);
        let neg = report.rejected.contains(a);
        assert!(pos != neg, "{a}: asserted {pos}, rejected {neg}");
        let cert = decide(a, &ds, &mut store, ProofOptions::default()).unwrap();
        assert_eq!(cert.sign == Sign::Asserted, pos, "{a}");
    }
}
