mod common;

use common::formula;
use metalogic::deduction::{MetaAxiom, MetaBinding};
use metalogic::oracle::{check_admissible_bounded, interpret_statement, local_valid, Admissibility, MatrixModel};
use metalogic::{parse_atom, parse_statement, Atom, RuleForm, Statement};
use proptest::prelude::*;
use proptest::sample::select;

fn ground_statement() -> impl Strategy<Value = Statement> {
    let atom = (common::sign(), formula(&["p", "q"])).prop_map(|(s, f)| Statement::atom(Atom::new(s, f)));
    atom.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Statement::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Statement::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Statement::imp(a, b)),
        ]
    })
}

fn small_rule() -> impl Strategy<Value = RuleForm> {
    let atoms: Vec<Atom> =
        ["+A", "-A", "+B", "-B", "+(A | B)", "-(A | B)", "+(A -> B)", "-(A -> B)", "+~A", "-~B"]
            .iter()
            .map(|s| parse_atom(s).unwrap())
            .collect();
    (prop::collection::vec(select(atoms.clone()), 0..=2), prop::collection::vec(select(atoms), 0..=2))
        .prop_map(|(p, c)| RuleForm::new(p, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn meta_axioms_hold(
        which in select(MetaAxiom::all().collect::<Vec<_>>()),
        parts in prop::collection::vec(ground_statement(), 3),
    ) {
        let binding: MetaBinding = which.placeholders().into_iter().zip(parts).collect();
        let instance = which.instance(&binding).unwrap();
        prop_assert!(interpret_statement(&instance).unwrap(), "{}", instance);
    }

    /// A counterexample found within some bounds is found within larger ones.
    #[test]
    fn admissibility_is_monotone(rule in small_rule()) {
        if let Admissibility::Counterexample(_) = check_admissible_bounded(&rule, 0, 1).unwrap() {
            prop_assert!(matches!(check_admissible_bounded(&rule, 1, 1).unwrap(), Admissibility::Counterexample(_)));
            prop_assert!(matches!(check_admissible_bounded(&rule, 0, 2).unwrap(), Admissibility::Counterexample(_)));
        }
        if let Admissibility::Counterexample(_) = check_admissible_bounded(&rule, 1, 1).unwrap() {
            prop_assert!(matches!(check_admissible_bounded(&rule, 1, 2).unwrap(), Admissibility::Counterexample(_)));
        }
    }
}

#[test]
fn modus_ponens_is_locally_valid() {
    let mp = RuleForm::new([parse_atom("+p").unwrap(), parse_atom("+(p -> q)").unwrap()], [parse_atom("+q").unwrap()]);
    for bits in 1..=3 {
        assert!(local_valid(&mp, &MatrixModel::new(bits).unwrap()).unwrap());
    }
}

#[test]
fn standard_reading() {
    let holds = |s: &str| interpret_statement(&parse_statement(s).unwrap()).unwrap();
    assert!(holds("+(p -> p)"));
    assert!(holds("-p"));
    assert!(!holds("+(p | ~p) => +p OR +~p"));
    assert!(holds("-p AND +(p | ~p) => +~p OR -~p"));
    assert!(!holds("-(p -> p)"));
}
