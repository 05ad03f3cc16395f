//! `metalogic`: check derivations, decide classical formulas with
//! certificates, and run the semantic audits from the command line.
//!
//! Exit codes: 0 success, 1 other error, 2 negative verdict (rejected
//! derivation, counterexample, invalid rule, unclean audit, unprovable
//! goal), 3 parse error, 4 resource cap exceeded. Usage errors exit with 1.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "metalogic", version, about = "Signed-statement deductive systems and a refutation calculus for classical logic")]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Lemma store directory.
    #[arg(long = "lemmas", global = true, env = "METALOGIC_LEMMA_DIR", default_value = "lemmas")]
    lemmas: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SystemArg {
    /// Built-in calculus name or path to a `.mlc` file.
    #[arg(short = 's', long = "system")]
    system: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct UniverseArgs {
    /// Largest formula size (symbols) in the universe.
    #[arg(long, default_value_t = 5)]
    size: usize,
    /// Number of variables in the universe.
    #[arg(long, default_value_t = 2)]
    vars: usize,
    /// Seed the audit with axioms only, without generated proofs.
    #[arg(long)]
    no_prover: bool,
}

#[derive(Args, Debug, Clone)]
struct RuleArgs {
    /// File holding the rule as a statement.
    #[arg(long, conflicts_with = "schema")]
    rule: Option<PathBuf>,
    /// The rule as a statement on the command line.
    #[arg(long, allow_hyphen_values = true)]
    schema: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// `⊖A` from the anti-axiom by modus tollens and reverse substitution.
    Direct,
    /// `⊕p` from the premise `⊕A`.
    Indirect,
    /// `⊖A` from `⊖p` with the rules `r1` and `r2`.
    Trivialize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a derivation file.
    Check {
        #[command(flatten)]
        system: SystemArg,
        /// The `.mld` derivation.
        #[arg(short = 'd', long = "derivation")]
        derivation: PathBuf,
    },
    /// Prove a tautology, or search for a derivation of a statement.
    Prove {
        #[command(flatten)]
        system: SystemArg,
        /// A formula, or a statement with `--search`.
        #[arg(allow_hyphen_values = true)]
        goal: String,
        /// Run the bounded proof search instead of the tautology prover.
        #[arg(long)]
        search: bool,
        /// Premises for the search.
        #[arg(long = "premise", allow_hyphen_values = true)]
        premises: Vec<String>,
        #[arg(long, default_value_t = 4)]
        rounds: usize,
        #[arg(long, default_value_t = 12)]
        max_size: usize,
        #[arg(long, default_value_t = 200_000)]
        max_steps: usize,
        /// Shuffles the order the search considers premises in.
        #[arg(long)]
        seed: Option<u64>,
        /// Where to write the derivation; `-` for standard output.
        #[arg(short = 'o', long = "output", default_value = "certificate.mld")]
        output: PathBuf,
    },
    /// Refute a formula that is not a tautology.
    Refute {
        #[command(flatten)]
        system: SystemArg,
        formula: String,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        #[arg(short = 'o', long = "output", default_value = "certificate.mld")]
        output: PathBuf,
    },
    /// Prove or refute a formula and write the certificate.
    Decide {
        #[command(flatten)]
        system: SystemArg,
        formula: String,
        #[arg(short = 'o', long = "output", default_value = "certificate.mld")]
        output: PathBuf,
    },
    /// Print the rule form of a statement.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        statement: String,
    },
    /// Bounded search for a substitution refuting a rule's admissibility.
    Admissible {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        vars: usize,
    },
    /// Check a rule over asserted atoms in a finite Boolean algebra.
    Matrix {
        #[command(flatten)]
        rule: RuleArgs,
        /// The pigeonhole rule over this many variables.
        #[arg(long, conflicts_with_all = ["rule", "schema", "rk"])]
        pigeonhole: Option<usize>,
        /// The verbatim `rk` index range for this `k`.
        #[arg(long, conflicts_with_all = ["rule", "schema"])]
        rk: Option<u32>,
        /// The algebra has `2^bits` elements.
        #[arg(long)]
        bits: u32,
    },
    /// Saturate a calculus over a finite universe and audit the result.
    Saturate {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        universe: UniverseArgs,
    },
    /// Classify a logic given by a relation file or a saturated calculus.
    Classify {
        #[command(flatten)]
        system: SystemArg,
        /// Relation file whose pairs seed the generated relation.
        #[arg(long, conflicts_with = "system")]
        relation: Option<PathBuf>,
        #[command(flatten)]
        universe: UniverseArgs,
    },
}

/// Output of a command and whether its verdict was positive.
pub struct Outcome {
    pub text: String,
    pub json: serde_json::Value,
    pub positive: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            return ExitCode::from(if ok { 0 } else { 1 });
        }
    };
    let json = cli.json;
    match commands::run(cli) {
        Ok(out) => {
            if json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.positive { 0 } else { 2 })
        }
        Err(e) => {
            if json {
                println!("{}", serde_json::json!({ "error": e.kind(), "message": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
