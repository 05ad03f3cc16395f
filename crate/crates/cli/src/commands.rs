use std::fs;
use std::path::{Path, PathBuf};

use metalogic::consequence::{
    check_rmt, classify, classify_with, generate_relation, logic_of_relation, parse_relation, Classification,
};
use metalogic::cpl::{self, BuiltinCalculus, ClassicalProver, CplError, ProofOptions, MAX_RK};
use metalogic::deduction::{
    check_derivation, parse_calculus, parse_derivation, print_derivation, search_proof, AtomicProver, Budget,
    DeductiveSystem, Derivation, LemmaStore, NoProver,
};
use metalogic::oracle::{
    check_admissible_bounded, enumerate_by_size, local_counterexample, pigeonhole_rule, rk_verbatim_rule,
    saturate_and_audit, standard_vars, Admissibility, MatrixModel, SignedRule,
};
use metalogic::{parse_formula, parse_statement, to_rule_form, Connective, Formula, Sign, Statement};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::{Cli, Command, Method, Outcome, RuleArgs, SystemArg, UniverseArgs};

const ARG: &str = "<argument>";

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let lemmas = cli.lemmas;
    match cli.command {
        Command::Check { system, derivation } => check(&system, &derivation, &lemmas),
        Command::Prove { system, goal, search, premises, rounds, max_size, max_steps, seed, output } => {
            let calc = load_system(&system, None)?;
            let mut store = load_store(&lemmas, &calc)?;
            if search {
                let budget = Budget { max_steps, max_size, rounds, ..Budget::default() };
                prove_search(&calc, &mut store, &lemmas, &goal, &premises, &budget, seed, &output)
            } else {
                prove(&calc, &mut store, &lemmas, &goal, &output)
            }
        }
        Command::Refute { system, formula, method, output } => {
            let calc = load_system(&system, None)?;
            let mut store = load_store(&lemmas, &calc)?;
            refute(&calc, &mut store, &lemmas, &formula, method, &output)
        }
        Command::Decide { system, formula, output } => {
            let calc = load_system(&system, None)?;
            let mut store = load_store(&lemmas, &calc)?;
            decide(&calc, &mut store, &lemmas, &formula, &output)
        }
        Command::Normalize { statement } => normalize(&statement),
        Command::Admissible { rule, depth, vars } => admissible(&load_rule(&rule)?, depth, vars),
        Command::Matrix { rule, pigeonhole, rk, bits } => {
            let rule = match (pigeonhole, rk) {
                (Some(n), _) => pigeonhole_rule(n),
                (None, Some(k)) => rk_verbatim_rule(k),
                (None, None) => load_rule(&rule)?,
            };
            matrix(&rule, bits)
        }
        Command::Saturate { system, universe } => {
            let calc = load_system(&system, None)?;
            let mut store = load_store(&lemmas, &calc)?;
            saturate(&calc, &mut store, &universe)
        }
        Command::Classify { system, relation, universe } => match relation {
            Some(path) => classify_relation(&path),
            None => {
                let calc = load_system(&system, None)?;
                let mut store = load_store(&lemmas, &calc)?;
                classify_system(&calc, &mut store, &universe)
            }
        },
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|error| CliError::Io { path: path.to_path_buf(), error })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|error| CliError::Io { path: path.to_path_buf(), error })
}

fn builtin_systems() -> Vec<DeductiveSystem> {
    BuiltinCalculus::FIXED
        .into_iter()
        .chain((1..=MAX_RK).map(BuiltinCalculus::Rk))
        .map(|b| b.system())
        .collect()
}

/// A calculus from a `.mlc` path or a built-in name; `fallback` is used
/// when no `-s` was given.
fn load_system(arg: &SystemArg, fallback: Option<&str>) -> Result<DeductiveSystem, CliError> {
    let name = arg
        .system
        .as_deref()
        .or(fallback)
        .ok_or_else(|| CliError::Other("no calculus given; use -s NAME or -s FILE.mlc".into()))?;
    let path = Path::new(name);
    if path.is_file() {
        return parse_calculus(&read(path)?).map_err(|e| CliError::parse(name, e));
    }
    name.parse::<BuiltinCalculus>().map(|b| b.system()).map_err(CliError::Other)
}

/// The lemma store under `dir`, re-certified against the built-in calculi
/// and `calc`.
fn load_store(dir: &Path, calc: &DeductiveSystem) -> Result<LemmaStore, CliError> {
    let mut systems: Vec<DeductiveSystem> = builtin_systems().into_iter().filter(|s| s.name != calc.name).collect();
    systems.push(calc.clone());
    let refs: Vec<&DeductiveSystem> = systems.iter().collect();
    let mut store = LemmaStore::new();
    store.load(dir, &refs)?;
    Ok(store)
}

fn formula_arg(src: &str) -> Result<Formula, CliError> {
    parse_formula(src).map_err(|e| CliError::parse(ARG, e))
}

fn statement_arg(src: &str) -> Result<Statement, CliError> {
    parse_statement(src).map_err(|e| CliError::parse(ARG, e))
}

/// Writes the derivation and the lemma store; with output `-` the
/// derivation is returned for printing instead.
fn emit(
    calc: &DeductiveSystem,
    store: &LemmaStore,
    lemmas: &Path,
    d: &Derivation,
    output: &Path,
) -> Result<String, CliError> {
    let text = print_derivation(&calc.name, d);
    if !d.lemmas().is_empty() {
        store.save(lemmas)?;
    }
    if output == Path::new("-") {
        return Ok(text);
    }
    write(output, &text)?;
    Ok(format!("certificate {} ({} steps)\n", output.display(), d.len()))
}

fn certificate_json(d: &Derivation, output: &Path) -> Value {
    json!({
        "steps": d.len(),
        "conclusion": d.conclusion().map(|c| c.to_string()),
        "certificate": output.display().to_string(),
    })
}

fn negative(text: String, json: Value) -> Outcome {
    Outcome { text, json, positive: false }
}

fn check(arg: &SystemArg, path: &Path, lemmas: &Path) -> Result<Outcome, CliError> {
    let src = read(path)?;
    let file = parse_derivation(&src).map_err(|e| CliError::parse(path.display().to_string(), e))?;
    let calc = load_system(arg, Some(&file.system))?;
    if calc.name != file.system {
        return Err(CliError::Other(format!(
            "{} is a derivation in `{}`, not `{}`",
            path.display(),
            file.system,
            calc.name
        )));
    }
    let store = load_store(lemmas, &calc)?;
    let d = &file.derivation;
    Ok(match check_derivation(&calc, d, &store) {
        Ok(()) => {
            let conclusion = d.conclusion().expect("accepted derivations are non-empty").to_string();
            Outcome {
                text: format!("ACCEPTED {} steps: {conclusion}\n", d.len()),
                json: json!({ "verdict": "accepted", "steps": d.len(), "conclusion": conclusion }),
                positive: true,
            }
        }
        Err(r) => negative(
            format!("REJECTED step {}: {}: {}\n", r.step, r.reason.code(), r.detail),
            json!({ "verdict": "rejected", "step": r.step, "reason": r.reason.code(), "detail": r.detail }),
        ),
    })
}

fn prove(
    calc: &DeductiveSystem,
    store: &mut LemmaStore,
    lemmas: &Path,
    goal: &str,
    output: &Path,
) -> Result<Outcome, CliError> {
    let a = formula_arg(goal)?;
    match cpl::prove_tautology(&a, calc, store, ProofOptions::default()) {
        Ok(d) => {
            let text = format!("ASSERTED {a}\n{}", emit(calc, store, lemmas, &d, output)?);
            Ok(Outcome { text, json: certificate_json(&d, output), positive: true })
        }
        Err(e @ CplError::NotTautology { .. }) => Ok(negative(
            format!("NOT PROVABLE: {e}\n"),
            json!({ "verdict": "not-provable", "detail": e.to_string() }),
        )),
        Err(e) => Err(e.into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn prove_search(
    calc: &DeductiveSystem,
    store: &mut LemmaStore,
    lemmas: &Path,
    goal: &str,
    premises: &[String],
    budget: &Budget,
    seed: Option<u64>,
    output: &Path,
) -> Result<Outcome, CliError> {
    let goal = statement_arg(goal)?;
    let mut gamma = premises.iter().map(|p| statement_arg(p)).collect::<Result<Vec<_>, _>>()?;
    if let Some(seed) = seed {
        gamma.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut prover: Box<dyn AtomicProver> = Box::new(ClassicalProver::default());
    match search_proof(calc, &gamma, &goal, budget, store, prover.as_mut()) {
        Some(d) => {
            let text = format!("PROVED {goal}\n{}", emit(calc, store, lemmas, &d, output)?);
            Ok(Outcome { text, json: certificate_json(&d, output), positive: true })
        }
        None => Ok(negative(
            format!("NOT FOUND {goal} within the budget\n"),
            json!({ "verdict": "not-found", "goal": goal.to_string() }),
        )),
    }
}

fn refute(
    calc: &DeductiveSystem,
    store: &mut LemmaStore,
    lemmas: &Path,
    src: &str,
    method: Method,
    output: &Path,
) -> Result<Outcome, CliError> {
    let a = formula_arg(src)?;
    let opts = ProofOptions::default();
    let result = match method {
        Method::Direct => cpl::refute(&a, calc, store, opts).map(Some),
        Method::Indirect => cpl::c_refute(&a, calc, &Budget::default(), store, opts),
        Method::Trivialize => cpl::smiley_trivialize(&a, calc).map(Some),
    };
    let d = match result {
        Ok(Some(d)) => d,
        Ok(None) => {
            return Ok(negative(
                format!("NOT REFUTED {a}: no derivation of +p from +{a} within the budget\n"),
                json!({ "verdict": "not-refuted", "formula": a.to_string() }),
            ))
        }
        Err(CplError::IsTautology { .. }) => {
            return Ok(negative(
                format!("TAUTOLOGY {a} cannot be refuted\n"),
                json!({ "verdict": "tautology", "formula": a.to_string() }),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let head = match method {
        Method::Indirect => format!("REFUTED {a} (derives +p from +{a})\n"),
        _ => format!("REJECTED {a}\n"),
    };
    let text = format!("{head}{}", emit(calc, store, lemmas, &d, output)?);
    Ok(Outcome { text, json: certificate_json(&d, output), positive: true })
}

fn decide(
    calc: &DeductiveSystem,
    store: &mut LemmaStore,
    lemmas: &Path,
    src: &str,
    output: &Path,
) -> Result<Outcome, CliError> {
    let a = formula_arg(src)?;
    let cert = cpl::decide(&a, calc, store, ProofOptions::default())?;
    let sign = match cert.sign {
        Sign::Asserted => "ASSERTED",
        Sign::Rejected => "REJECTED",
    };
    let text = format!("{sign} {a}\n{}", emit(calc, store, lemmas, &cert.derivation, output)?);
    let mut json = certificate_json(&cert.derivation, output);
    json["sign"] = json!(sign);
    Ok(Outcome { text, json, positive: true })
}

fn normalize(src: &str) -> Result<Outcome, CliError> {
    let clauses: Vec<String> = to_rule_form(&statement_arg(src)?).iter().map(|c| c.to_string()).collect();
    let text = clauses.iter().map(|c| format!("{c}\n")).collect();
    Ok(Outcome { text, json: json!({ "clauses": clauses }), positive: true })
}

fn load_rule(args: &RuleArgs) -> Result<SignedRule, CliError> {
    let (source, text) = match (&args.rule, &args.schema) {
        (Some(path), _) => (path.display().to_string(), read(path)?),
        (None, Some(s)) => (ARG.to_string(), s.clone()),
        (None, None) => return Err(CliError::Other("give the rule with --rule FILE or --schema STATEMENT".into())),
    };
    let stmt = parse_statement(text.trim()).map_err(|e| CliError::parse(source, e))?;
    let mut clauses = to_rule_form(&stmt);
    if clauses.len() != 1 {
        return Err(CliError::Other(format!(
            "a rule must normalize to one clause; `{stmt}` gives {}",
            clauses.len()
        )));
    }
    Ok(clauses.remove(0))
}

fn admissible(rule: &SignedRule, depth: usize, vars: usize) -> Result<Outcome, CliError> {
    Ok(match check_admissible_bounded(rule, depth, vars)? {
        Admissibility::NoCounterexample => Outcome {
            text: format!("NO COUNTEREXAMPLE for {rule} (depth {depth}, {vars} variables)\n"),
            json: json!({ "verdict": "no-counterexample", "rule": rule.to_string(), "depth": depth, "vars": vars }),
            positive: true,
        },
        Admissibility::Counterexample(s) => negative(
            format!("COUNTEREXAMPLE for {rule}: {s}\n"),
            json!({ "verdict": "counterexample", "rule": rule.to_string(), "substitution": s.to_string() }),
        ),
    })
}

fn matrix(rule: &SignedRule, bits: u32) -> Result<Outcome, CliError> {
    let model = MatrixModel::new(bits)?;
    let width = bits as usize;
    Ok(match local_counterexample(rule, &model)? {
        None => Outcome {
            text: format!("VALID in the {}-element algebra\n", model.size()),
            json: json!({ "verdict": "valid", "bits": bits }),
            positive: true,
        },
        Some(val) => {
            let shown: Vec<String> = val.iter().map(|(s, v)| format!("{s}={v:0width$b}")).collect();
            negative(
                format!("INVALID in the {}-element algebra: {}\n", model.size(), shown.join(", ")),
                json!({ "verdict": "invalid", "bits": bits, "valuation": shown }),
            )
        }
    })
}

fn universe_formulas(calc: &DeductiveSystem, args: &UniverseArgs) -> Vec<Formula> {
    let connectives: Vec<Connective> = calc
        .signature
        .connectives()
        .iter()
        .filter(|c| !matches!(c, Connective::Named(..)))
        .cloned()
        .collect();
    enumerate_by_size(&standard_vars(args.vars), &connectives, args.size)
}

fn audit(
    calc: &DeductiveSystem,
    store: &mut LemmaStore,
    args: &UniverseArgs,
) -> Result<metalogic::oracle::AuditReport, CliError> {
    let mut prover: Box<dyn AtomicProver> =
        if args.no_prover { Box::new(NoProver) } else { Box::new(ClassicalProver::default()) };
    Ok(saturate_and_audit(calc, args.size, args.vars, prover.as_mut(), store)?)
}

fn saturate(calc: &DeductiveSystem, store: &mut LemmaStore, args: &UniverseArgs) -> Result<Outcome, CliError> {
    let report = audit(calc, store, args)?;
    let mut text = format!(
        "universe {} formulas\nasserted {}\nrejected {}\nmultiple-conclusion instances {}\n",
        report.universe,
        report.asserted.len(),
        report.rejected.len(),
        report.disjunctions
    );
    for f in &report.findings {
        text.push_str(&format!("{f}\n"));
    }
    if report.is_clean() {
        text.push_str("CLEAN\n");
    } else {
        text.push_str(&format!("{} FINDINGS\n", report.findings.len()));
    }
    let findings: Vec<Value> = report
        .findings
        .iter()
        .map(|f| json!({ "kind": f.kind.code(), "formula": f.formula.to_string() }))
        .collect();
    let json = json!({
        "universe": report.universe,
        "asserted": report.asserted.len(),
        "rejected": report.rejected.len(),
        "multiple_conclusion_instances": report.disjunctions,
        "findings": findings,
        "clean": report.is_clean(),
    });
    Ok(Outcome { text, json, positive: report.is_clean() })
}

fn classification_outcome(c: &Classification, mut text: String, mut json: Value) -> Outcome {
    let labels = c.labels();
    text.push_str(&format!("classes {}\n", labels.join(" ")));
    json["classes"] = json!(labels);
    Outcome { text, json, positive: true }
}

fn classify_system(calc: &DeductiveSystem, store: &mut LemmaStore, args: &UniverseArgs) -> Result<Outcome, CliError> {
    let report = audit(calc, store, args)?;
    let universe = universe_formulas(calc, args);
    let c = classify_with(&universe, |f| report.asserted.contains(f), |f| report.rejected.contains(f));
    let text = format!(
        "universe {} formulas\nasserted {}\nrejected {}\n",
        universe.len(),
        report.asserted.len(),
        report.rejected.len()
    );
    let json = json!({
        "universe": universe.len(),
        "asserted": report.asserted.len(),
        "rejected": report.rejected.len(),
    });
    Ok(classification_outcome(&c, text, json))
}

fn classify_relation(path: &PathBuf) -> Result<Outcome, CliError> {
    let file = parse_relation(&read(path)?).map_err(|e| CliError::parse(path.display().to_string(), e))?;
    let formulas = file.universe.formulas();
    let rel = generate_relation(&file.pairs, file.universe)?;
    let violations = check_rmt(&rel);
    if let Some(v) = violations.first() {
        return Err(CliError::Other(format!("generated relation violates a law: {v}")));
    }
    let logic = logic_of_relation(&rel);
    let show = |set: &std::collections::BTreeSet<Formula>| {
        set.iter().map(|f| f.to_string()).collect::<Vec<_>>()
    };
    let (asserted, rejected) = (show(&logic.asserted), show(&logic.rejected));
    let text = format!(
        "pairs {}\nasserted {{{}}}\nrejected {{{}}}\n",
        rel.len(),
        asserted.join(", "),
        rejected.join(", ")
    );
    let json = json!({ "pairs": rel.len(), "asserted": asserted, "rejected": rejected });
    Ok(classification_outcome(&classify(&logic, &formulas), text, json))
}
