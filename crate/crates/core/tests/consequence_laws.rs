use metalogic::consequence::{
    check_rmt, generate_relation, logic_of_relation, min_relation_for_logic, parse_relation, print_relation,
    AtomUniverse, LogicPair, RelationFile, SetPair,
};
use metalogic::{parse_atom, parse_formula, Atom, Formula};
use proptest::prelude::*;

fn pool() -> Vec<Atom> {
    ["+p", "-p", "+(p -> q)", "-q"].iter().map(|s| parse_atom(s).unwrap()).collect()
}

/// A universe of one to four atoms and up to four seed pairs over it.
fn seeded() -> impl Strategy<Value = (AtomUniverse, Vec<SetPair>)> {
    (1..=4usize).prop_flat_map(|n| {
        let atoms = pool()[..n].to_vec();
        let side = prop::collection::vec(any::<bool>(), n);
        let pair = (side.clone(), side);
        prop::collection::vec(pair, 0..=4).prop_map(move |masks| {
            let pick = |m: &[bool]| -> Vec<Atom> {
                atoms.iter().zip(m).filter(|(_, on)| **on).map(|(a, _)| a.clone()).collect()
            };
            let seeds = masks.iter().map(|(g, d)| (pick(g), pick(d))).collect();
            (AtomUniverse::new(atoms.clone()).unwrap(), seeds)
        })
    })
}

fn logic() -> impl Strategy<Value = LogicPair> {
    let formulas: Vec<Formula> = ["p", "q", "p -> q"].iter().map(|s| parse_formula(s).unwrap()).collect();
    let n = formulas.len();
    (prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n)).prop_map(move |(a, r)| {
        let pick = |m: &[bool]| formulas.iter().zip(m).filter(|(_, on)| **on).map(|(f, _)| f.clone()).collect::<Vec<_>>();
        LogicPair::new(pick(&a), pick(&r))
    })
}

fn full_universe() -> AtomUniverse {
    let atoms = ["p", "q", "p -> q"]
        .iter()
        .flat_map(|s| {
            let f = parse_formula(s).unwrap();
            [Atom::asserted(f.clone()), Atom::rejected(f)]
        })
        .collect();
    AtomUniverse::new(atoms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_relations_are_least((universe, seeds) in seeded()) {
        let rel = generate_relation(&seeds, universe).unwrap();
        prop_assert!(check_rmt(&rel).is_empty());
        for (g, d) in rel.pairs() {
            if g.iter().any(|a| d.contains(a)) || seeds.iter().any(|(sg, sd)| sets_eq(sg, &g) && sets_eq(sd, &d)) {
                continue;
            }
            let mut smaller = rel.clone();
            smaller.remove(&g, &d).unwrap();
            prop_assert!(!check_rmt(&smaller).is_empty(), "{:?} |- {:?} is removable", g, d);
        }
    }

    #[test]
    fn meets_keep_the_laws((universe, a) in seeded(), b in prop::collection::vec(any::<bool>(), 0..4)) {
        let r1 = generate_relation(&a, universe.clone()).unwrap();
        let atoms = universe.atoms().to_vec();
        let seeds: Vec<SetPair> = b.chunks(2).map(|c| {
            let pick = |on: bool, i: usize| if on { vec![atoms[i % atoms.len()].clone()] } else { Vec::new() };
            (pick(c[0], 0), pick(*c.last().unwrap(), 1))
        }).collect();
        let r2 = generate_relation(&seeds, universe).unwrap();
        let meet = r1.meet(&r2).unwrap();
        prop_assert!(check_rmt(&meet).is_empty());
        prop_assert!(meet.is_subset(&r1) && meet.is_subset(&r2));
    }

    #[test]
    fn minimal_relation_round_trips(l in logic()) {
        let rel = min_relation_for_logic(&l, full_universe());
        prop_assert!(check_rmt(&rel).is_empty());
        prop_assert_eq!(logic_of_relation(&rel), l);
    }

    #[test]
    fn relation_files_round_trip((universe, seeds) in seeded()) {
        let file = RelationFile { universe, pairs: seeds };
        prop_assert_eq!(parse_relation(&print_relation(&file)).unwrap(), file);
    }
}

fn sets_eq(a: &[Atom], b: &[Atom]) -> bool {
    a.iter().all(|x| b.contains(x)) && b.iter().all(|x| a.contains(x))
}
