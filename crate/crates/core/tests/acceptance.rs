//! The acceptance suite. Each criterion prints one PASS or FAIL line with
//! its measured runtime; the test fails if any criterion does.
//!
//! Run with `cargo test -p metalogic --test acceptance -- --nocapture`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use metalogic::consequence::{
    check_rmt, generate_relation, logic_of_relation, min_relation_for_logic, AtomUniverse, LogicPair, RelationTable,
    SetPair,
};
use metalogic::cpl::{decide, smiley_trivialize, BuiltinCalculus, ClassicalProver, ProofOptions};
use metalogic::deduction::{
    check_derivation, parse_calculus, parse_derivation, Derivation, Justification, LemmaStore, Reason,
};
use metalogic::oracle::{
    check_admissible_bounded, classical_connectives, contrapose_rule, enumerate_by_size, enumerate_formulas,
    is_tautology, local_valid, pigeonhole_rule, rk_verbatim_rule, saturate_and_audit, standard_vars, Admissibility,
    FindingKind, MatrixModel,
};
use metalogic::{
    parse_atom, parse_formula, parse_statement, to_rule_form, Atom, Connective, Formula, RuleForm, Sign, Statement,
    StatementNode, Substitution, Symbol,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/lukasiewicz")
}

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn atom(s: &str) -> Atom {
    parse_atom(s).unwrap()
}

fn rule(premises: &[&str], conclusions: &[&str]) -> RuleForm {
    RuleForm::new(premises.iter().map(|s| atom(s)), conclusions.iter().map(|s| atom(s)))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lukasiewicz_mutations() -> Outcome {
    let calc = parse_calculus(&fs::read_to_string(fixtures().join("lukasiewicz.mlc")).unwrap()).unwrap();
    let mut store = LemmaStore::new();
    store.load(&fixtures().join("lemmas"), &[&calc]).map_err(|e| e.to_string())?;
    let load = |name: &str| parse_derivation(&fs::read_to_string(fixtures().join(name)).unwrap()).unwrap().derivation;
    let l = load("reject-negation.mld");
    let c = load("negated-premise.mld");
    for (name, d, goal) in [("L", &l, "-~p"), ("C", &c, "+p")] {
        check_derivation(&calc, d, &store).map_err(|r| format!("{name}-derivation rejected: {r}"))?;
        ensure(d.conclusion() == Some(&parse_statement(goal).unwrap()), || format!("{name}-derivation ends elsewhere"))?;
    }
    ensure(c.premises == vec![parse_statement("+~p").unwrap()], || "C-derivation premise".into())?;

    let last = l.len() - 1;
    let (rs_step, rs_subst) = match &l.steps[last].justification {
        Justification::Rs(n, s) => (*n, s.clone()),
        other => return Err(format!("L-derivation ends with {other:?}, not RS")),
    };
    let rule_step = l.steps.iter().position(|s| matches!(s.justification, Justification::Rule(..))).unwrap();
    let lemma_step = l.steps.iter().position(|s| matches!(s.justification, Justification::Lemma(..))).unwrap();
    let sb_step = c.steps.iter().position(|s| matches!(s.justification, Justification::Sb(..))).unwrap();

    let mutate = |d: &Derivation, i: usize, edit: &dyn Fn(&mut Derivation, usize)| {
        let mut m = d.clone();
        edit(&mut m, i);
        m
    };
    let cases: Vec<(&str, Derivation, &[Reason])> = vec![
        (
            "sb on a negative statement",
            mutate(&l, last, &|m, i| m.steps[i].justification = Justification::Sb(rs_step, rs_subst.clone())),
            &[Reason::SbOnNegative],
        ),
        (
            "rs on a positive statement",
            mutate(&c, sb_step, &|m, i| {
                let Justification::Sb(n, s) = m.steps[i].justification.clone() else { unreachable!() };
                m.steps[i].justification = Justification::Rs(n, s);
            }),
            &[Reason::RsOnPositive],
        ),
        (
            "wrong substitution",
            mutate(&l, last, &|m, i| {
                m.steps[i].justification = Justification::Rs(rs_step, Substitution::single("p", f("q -> q")))
            }),
            &[Reason::WrongSubstitution],
        ),
        (
            "dangling reference",
            mutate(&l, last, &|m, i| m.steps[i].justification = Justification::Rs(i + 5, rs_subst.clone())),
            &[Reason::DanglingReference],
        ),
        (
            "bad rule instance",
            mutate(&l, rule_step, &|m, i| {
                m.steps[i].statement = parse_statement("-p AND +(~(p -> p) -> p) => -(p -> p)").unwrap()
            }),
            &[Reason::BadInstance],
        ),
        (
            "wrong lemma",
            mutate(&l, lemma_step, &|m, i| m.steps[i].statement = parse_statement("+(~(p -> p) -> q)").unwrap()),
            &[Reason::LemmaMismatch, Reason::UnknownLemma],
        ),
    ];
    let mut codes = Vec::new();
    for (what, d, expected) in &cases {
        match check_derivation(&calc, d, &store) {
            Ok(()) => return Err(format!("{what}: accepted")),
            Err(r) if expected.contains(&r.reason) => codes.push(r.reason.code()),
            Err(r) => return Err(format!("{what}: rejected with {} ({r})", r.reason.code())),
        }
    }
    Ok(format!("both fixtures accepted; mutations rejected as {}", codes.join(", ")))
}

fn decide_exhaustive() -> Outcome {
    let calc = BuiltinCalculus::LukasiewiczCore.system();
    let vars = standard_vars(2);
    let formulas = enumerate_formulas(&vars, &[Connective::Imp, Connective::Not], 7);
    ensure(formulas.len() == 685_376, || format!("enumerated {} formulas", formulas.len()))?;
    let mut store = LemmaStore::new();
    store.set_retain(false);
    let opts = ProofOptions { cache_facts: true };
    let (mut asserted, mut rejected) = (0usize, 0usize);
    for a in &formulas {
        let cert = decide(a, &calc, &mut store, opts).map_err(|e| format!("{a}: {e}"))?;
        let expected = if is_tautology(a).unwrap() { Sign::Asserted } else { Sign::Rejected };
        ensure(cert.sign == expected, || format!("{a}: decided {:?}", cert.sign))?;
        cert.check(&calc, &store).map_err(|r| format!("{a}: certificate rejected: {r}"))?;
        match cert.sign {
            Sign::Asserted => asserted += 1,
            Sign::Rejected => rejected += 1,
        }
    }
    Ok(format!("{} formulas, {asserted} asserted, {rejected} rejected, all certificates re-checked", formulas.len()))
}

/// Classical evaluation of a statement, written independently of the
/// library's evaluator.
fn eval(s: &Statement, v: &BTreeMap<Atom, bool>) -> bool {
    match s.node() {
        StatementNode::Atom(a) => v[a],
        StatementNode::Top => true,
        StatementNode::Bot => false,
        StatementNode::Not(a) => !eval(a, v),
        StatementNode::And(a, b) => eval(a, v) && eval(b, v),
        StatementNode::Or(a, b) => eval(a, v) || eval(b, v),
        StatementNode::Imp(a, b) => !eval(a, v) || eval(b, v),
    }
}

fn random_statement(rng: &mut ChaCha8Rng, pool: &[Atom], depth: u32) -> Statement {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Statement::top(),
            1 => Statement::bot(),
            _ => Statement::atom(pool.choose(rng).unwrap().clone()),
        };
    }
    let op = rng.gen_range(0..4);
    let mut sub = || random_statement(rng, pool, depth - 1);
    match op {
        0 => Statement::not(sub()),
        1 => Statement::and(sub(), sub()),
        2 => Statement::or(sub(), sub()),
        _ => Statement::imp(sub(), sub()),
    }
}

/// Whether `s` is `⩓ atoms ⟹ ⩔ atoms` with `⊤`/`⊥` for empty sides.
fn is_clause(s: &Statement) -> bool {
    fn flat(s: &Statement, and: bool) -> bool {
        match s.node() {
            StatementNode::Atom(_) => true,
            StatementNode::Top => and,
            StatementNode::Bot => !and,
            StatementNode::And(a, b) if and => flat(a, and) && flat(b, and),
            StatementNode::Or(a, b) if !and => flat(a, and) && flat(b, and),
            _ => false,
        }
    }
    matches!(s.node(), StatementNode::Imp(a, b) if flat(a, true) && flat(b, false))
}

fn rule_form_equivalence() -> Outcome {
    let pool: Vec<Atom> = ["+p", "-p", "+(p -> q)", "-q"].iter().map(|s| atom(s)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut clauses = 0;
    for n in 0..1000 {
        let k = rng.gen_range(1..=pool.len());
        let chosen: Vec<Atom> = pool.choose_multiple(&mut rng, k).cloned().collect();
        let s = random_statement(&mut rng, &chosen, 5);
        let forms = to_rule_form(&s);
        clauses += forms.len();
        for form in &forms {
            let c = form.to_statement();
            ensure(is_clause(&c), || format!("statement {n}: clause {c} is not in rule form"))?;
        }
        for bits in 0u32..1 << chosen.len() {
            let v: BTreeMap<Atom, bool> =
                chosen.iter().enumerate().map(|(i, a)| (a.clone(), bits >> i & 1 == 1)).collect();
            let normal = forms.iter().all(|form| eval(&form.to_statement(), &v));
            ensure(normal == eval(&s, &v), || format!("statement {n} `{s}` differs under {v:?}"))?;
        }
    }
    Ok(format!("1000 statements, {clauses} clauses, all equivalent"))
}

fn pigeonhole_boundary() -> Outcome {
    let mut seen = Vec::new();
    for m in 1..=2u32 {
        let model = MatrixModel::new(m).unwrap();
        for n in 2..=5usize {
            let valid = local_valid(&pigeonhole_rule(n), &model).unwrap();
            ensure(valid == (n > 1 << m), || format!("n={n}, m={m}: valid={valid}"))?;
            seen.push(format!("{n}/{m}:{}", if valid { "valid" } else { "invalid" }));
        }
    }
    for k in 1..=2u32 {
        let model = MatrixModel::new(k).unwrap();
        let valid = local_valid(&rk_verbatim_rule(k), &model).unwrap();
        println!("  verbatim rk{k} (2^{k} variables, i != j) in the 2^{k}-element algebra: {}", if valid { "valid" } else { "invalid" });
    }
    Ok(seen.join(" "))
}

fn disjunction_rule() -> Outcome {
    let disjunction = rule(&["+(A | B)"], &["+A", "+B"]);
    match check_admissible_bounded(&disjunction, 1, 2).unwrap() {
        Admissibility::Counterexample(s)
            if s.get(&Symbol::new("A")) == Some(&f("p")) && s.get(&Symbol::new("B")) == Some(&f("~p")) => {}
        other => return Err(format!("disjunction rule: {other:?}")),
    }
    let calc = BuiltinCalculus::WithDisjunctionRule.system();
    let report = saturate_and_audit(&calc, 5, 2, &mut ClassicalProver::default(), &mut LemmaStore::new())
        .map_err(|e| e.to_string())?;
    ensure(report.is_clean(), || format!("findings: {:?}", report.findings))?;
    Ok(format!(
        "counterexample {{A:=p, B:=~p}}; audit of {} formulas clean ({} asserted, {} rejected, {} multiple-conclusion instances)",
        report.universe,
        report.asserted.len(),
        report.rejected.len(),
        report.disjunctions
    ))
}

fn contraposed_rules() -> Outcome {
    let mp = rule(&["+p", "+(p -> q)"], &["+q"]);
    let contra = contrapose_rule(&mp).unwrap();
    ensure(contra == rule(&["-q"], &["-p", "-(p -> q)"]), || format!("contraposed MP is {contra}"))?;
    ensure(check_admissible_bounded(&contra, 2, 2).unwrap() == Admissibility::NoCounterexample, || {
        "contraposed MP has a counterexample".into()
    })?;
    let second = rule(&["-A", "+(A | B)"], &["+B"]);
    if let Admissibility::Counterexample(s) = check_admissible_bounded(&second, 2, 2).unwrap() {
        let image = |x: &str| s.get(&Symbol::new(x)).cloned().unwrap_or_else(|| f(x));
        let (a, b) = (image("A"), image("B"));
        let genuine = !is_tautology(&a).unwrap()
            && is_tautology(&Formula::or(a.clone(), b.clone())).unwrap()
            && !is_tautology(&b).unwrap();
        return Err(format!(
            "contraposed MP {contra} has no counterexample, but {second} has {s} ({})",
            if genuine { "re-checked by truth tables" } else { "NOT confirmed by truth tables" }
        ));
    }
    Ok(format!("{contra} and {second}: no counterexample at depth 2 over 2 variables"))
}

fn smiley() -> Outcome {
    let anti = BuiltinCalculus::SmileyAnti.system();
    let base = BuiltinCalculus::Smiley.system();
    let store = LemmaStore::new();
    let formulas: Vec<Formula> =
        enumerate_by_size(&standard_vars(2), &classical_connectives(), 4).into_iter().take(20).collect();
    for a in &formulas {
        let d = smiley_trivialize(a, &anti).map_err(|e| format!("{a}: {e}"))?;
        check_derivation(&anti, &d, &store).map_err(|r| format!("{a}: {r}"))?;
        ensure(d.conclusion() == Some(&Statement::rejected(a.clone())), || format!("{a}: wrong conclusion"))?;
    }
    let audit = |calc| saturate_and_audit(calc, 5, 2, &mut ClassicalProver::default(), &mut LemmaStore::new());
    let with_anti = audit(&anti).map_err(|e| e.to_string())?;
    let ambivalent = with_anti.findings.iter().filter(|f| f.kind == FindingKind::Ambivalent).count();
    ensure(ambivalent > 0, || "no ambivalence with -p".into())?;
    ensure(with_anti.findings.iter().any(|x| x.kind == FindingKind::Ambivalent && x.formula == f("p -> p")), || {
        "p -> p is not ambivalent".into()
    })?;
    let clean = audit(&base).map_err(|e| e.to_string())?;
    ensure(clean.is_clean(), || format!("base smiley findings: {:?}", clean.findings))?;
    Ok(format!(
        "20 trivializations accepted; with -p {ambivalent} ambivalent formulas of {}; base system clean",
        with_anti.universe
    ))
}

/// All pairs `Γ ⊢ Δ` such that every subset of the universe closed under
/// the seeds that contains `Γ` meets `Δ`.
fn semantic_relation(seeds: &[SetPair], universe: &AtomUniverse) -> BTreeSet<(Vec<Atom>, Vec<Atom>)> {
    let atoms = universe.atoms();
    let n = atoms.len();
    let set = |mask: u32| -> Vec<Atom> { (0..n).filter(|i| mask >> i & 1 == 1).map(|i| atoms[i].clone()).collect() };
    let mask = |s: &[Atom]| s.iter().fold(0u32, |m, a| m | 1 << atoms.iter().position(|x| x == a).unwrap());
    let seed_masks: Vec<(u32, u32)> = seeds.iter().map(|(g, d)| (mask(g), mask(d))).collect();
    let models: Vec<u32> = (0..1u32 << n)
        .filter(|&t| seed_masks.iter().all(|&(g, d)| g & !t != 0 || d & t != 0))
        .collect();
    let mut out = BTreeSet::new();
    for g in 0..1u32 << n {
        for d in 0..1u32 << n {
            if models.iter().all(|&t| g & !t != 0 || d & t != 0) {
                out.insert((set(g), set(d)));
            }
        }
    }
    out
}

fn random_seeds(rng: &mut ChaCha8Rng, atoms: &[Atom]) -> Vec<SetPair> {
    let n = atoms.len();
    let count = rng.gen_range(0..=4);
    (0..count)
        .map(|_| {
            let pick = |rng: &mut ChaCha8Rng| -> Vec<Atom> {
                (0..n).filter(|_| rng.gen_bool(0.35)).map(|i| atoms[i].clone()).collect()
            };
            (pick(rng), pick(rng))
        })
        .collect()
}

fn consequence_laws() -> Outcome {
    let pool: Vec<Atom> = ["+p", "-p", "+q", "-(p -> q)"].iter().map(|s| atom(s)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut relations = 0;
    for size in 1..=pool.len() {
        let universe = AtomUniverse::new(pool[..size].to_vec()).unwrap();
        let mut previous: Option<RelationTable> = None;
        for _ in 0..50 {
            let seeds = random_seeds(&mut rng, universe.atoms());
            let rel = generate_relation(&seeds, universe.clone()).unwrap();
            let violations = check_rmt(&rel);
            ensure(violations.is_empty(), || format!("generated relation violates {}", violations[0]))?;
            let pairs: BTreeSet<_> = rel.pairs().into_iter().collect();
            ensure(pairs == semantic_relation(&seeds, &universe), || {
                format!("seeds {seeds:?}: relation differs from the semantic one")
            })?;
            if let Some(prev) = &previous {
                let meet = rel.meet(prev).unwrap();
                let v = check_rmt(&meet);
                ensure(v.is_empty(), || format!("meet violates {}", v[0]))?;
            }
            previous = Some(rel);
            relations += 1;
        }
    }

    let formulas: Vec<Formula> = ["p", "q", "p -> q", "~p"].iter().map(|s| f(s)).collect();
    let universe_atoms: Vec<Atom> = formulas
        .iter()
        .flat_map(|a| [Atom::asserted(a.clone()), Atom::rejected(a.clone())])
        .collect();
    let universe = AtomUniverse::new(universe_atoms).unwrap();
    for _ in 0..50 {
        let asserted: Vec<Formula> = formulas.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let rejected: Vec<Formula> = formulas.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let logic = LogicPair::new(asserted, rejected);
        let rel = min_relation_for_logic(&logic, universe.clone());
        let v = check_rmt(&rel);
        ensure(v.is_empty(), || format!("minimal relation violates {}", v[0]))?;
        ensure(logic_of_relation(&rel) == logic, || format!("round trip changed {logic:?}"))?;
    }
    Ok(format!("{relations} generated relations match the semantic closure; 50 logics round-trip"))
}

/// `⊖A, ⊕(A∨B) / ⊕B` is not admissible under the standard reading:
/// `A:=p, B:=~p` makes both premises hold and the conclusion fail. The
/// criterion reports the counterexample and fails.
const EXPECTED_FAILURES: [&str; 1] = ["6 contraposed rules"];

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 lukasiewicz fixtures and mutations", lukasiewicz_mutations, Duration::from_secs(1)),
        ("2 decide agrees with truth tables", decide_exhaustive, Duration::from_secs(60)),
        ("3 rule-form normalization", rule_form_equivalence, Duration::MAX),
        ("4 pigeonhole boundary", pigeonhole_boundary, Duration::from_secs(5)),
        ("5 disjunction rule", disjunction_rule, Duration::from_secs(120)),
        ("6 contraposed rules", contraposed_rules, Duration::MAX),
        ("7 smiley trivialization", smiley, Duration::MAX),
        ("8 consequence-relation laws", consequence_laws, Duration::MAX),
    ];
    let mut failed = Vec::new();
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let verdict = match &outcome {
            Ok(_) if took <= limit => "PASS",
            _ => "FAIL",
        };
        let detail = match outcome {
            Ok(msg) => msg,
            Err(msg) => msg,
        };
        let limit = if limit == Duration::MAX { String::new() } else { format!(", limit {:.0?}", limit) };
        println!("{verdict} criterion {name}: {detail} ({:.2?}{limit})", took);
        if verdict == "FAIL" {
            failed.push(name);
        }
    }
    assert_eq!(failed, EXPECTED_FAILURES, "unexpected set of failed criteria");
}

