//! Command-line surface: load groups, systems, rings, actions, and
//! presentations from JSON, run the divisibility verdicts, emit versioned
//! JSON reports, and drive the seeded counterexample search.
//!
//! Exit codes: 0 = every asserted divisibility holds; 1 = a theorem-backed
//! divisibility failed (a bug, not a discovery); 2 = input error;
//! 3 = an enumeration cap was exceeded.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use divisor_lab::crossed::{crossed_hom_verdict, small_generating_set, ActionError};
use divisor_lab::explore::{explore, ExplorationConfig, Question};
use divisor_lab::group::{catalog, FiniteGroup, GroupError};
use divisor_lab::homs::{
    closure_check, enumerate_homs, twist_extension_check, HomError, IndexedHom,
};
use divisor_lab::io::{self, LoadError};
use divisor_lab::ring::{homogeneity_verdict, RingError};
use divisor_lab::solver::{
    generalized_system_verdict, one_unknown_verdict, plain_system_verdict, SolveError,
    SolveOptions, DEFAULT_ENUMERATION_CAP,
};
use divisor_lab::REPORT_SCHEMA;

const EXIT_DIVISIBILITY_FAILED: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;
const EXIT_CAP_EXCEEDED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "divisor-lab",
    about = "Exact solution counting over finite groups and rings, with divisibility verdicts",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GroupSource {
    /// Group file (JSON multiplication table).
    #[arg(long, value_name = "FILE", conflicts_with = "catalog")]
    group: Option<PathBuf>,
    /// Catalog spec such as S4, Z6, D4, Q8, A5, or Z2xZ3.
    #[arg(long, value_name = "SPEC")]
    catalog: Option<String>,
}

impl GroupSource {
    fn load(&self) -> Result<FiniteGroup, CliError> {
        match (&self.group, &self.catalog) {
            (Some(path), None) => Ok(io::load_group_file(path)?),
            (None, Some(spec)) => {
                let kind = catalog::parse_spec(spec).map_err(LoadError::from)?;
                Ok(catalog::build(&kind).map_err(LoadError::from)?)
            }
            _ => Err(CliError::input("pass exactly one of --group or --catalog")),
        }
    }
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Enumeration cap on the assignment space.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Compute group/integer GCDs by exhaustive subgroup enumeration.
    #[arg(long)]
    oracle: bool,
    /// Write the JSON report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl CommonOpts {
    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            cap: self.cap,
            oracle_gcd: self.oracle,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate or describe a group.
    Group {
        #[command(subcommand)]
        action: GroupCommand,
    },
    /// Count solutions of a (generalized) equation system and check bounds.
    Solve {
        /// System file (JSON).
        #[arg(long, value_name = "FILE")]
        system: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Count unit-subgroup solutions of a ring system and check the bound.
    RingSolve {
        /// Ring system file (JSON).
        #[arg(long, value_name = "FILE")]
        ring: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Count crossed homomorphisms for an action and check every bound.
    Crossed {
        /// Action file (JSON).
        #[arg(long, value_name = "FILE")]
        action: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Check homomorphism-set closure and twist-extension agreement.
    HomCheck {
        /// Presentation file (JSON).
        #[arg(long, value_name = "FILE")]
        presentation: PathBuf,
        #[command(flatten)]
        source: GroupSource,
        /// Comma-separated element names generating the subgroup H.
        #[arg(long, value_name = "NAMES")]
        subgroup: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Seeded search for counterexamples to the strengthened bounds.
    Explore {
        /// One of q1, q2, q3, q4.
        #[arg(long)]
        question: Question,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest catalog group order in the instance corpus.
        #[arg(long, default_value_t = 12, value_name = "N")]
        max_order: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Load and fully validate a group, reporting basic facts.
    Validate {
        #[command(flatten)]
        source: GroupSource,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Validate plus element orders and (for small groups) subgroup counts.
    Info {
        #[command(flatten)]
        source: GroupSource,
        #[command(flatten)]
        common: CommonOpts,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT_ERROR,
            message: message.into(),
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        let code = match &e {
            LoadError::Ring(r) => return r_into(r, e.to_string()),
            LoadError::Group(GroupError::SizeCapExceeded { .. }) => EXIT_CAP_EXCEEDED,
            _ => EXIT_INPUT_ERROR,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn r_into(r: &RingError, message: String) -> CliError {
    let code = match r {
        RingError::SearchSpaceTooLarge { .. } | RingError::EnumerationTooLarge { .. } => {
            EXIT_CAP_EXCEEDED
        }
        _ => EXIT_INPUT_ERROR,
    };
    CliError { code, message }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        let code = match &e {
            SolveError::SearchSpaceTooLarge { .. } => EXIT_CAP_EXCEEDED,
            SolveError::Group(GroupError::SizeCapExceeded { .. }) => EXIT_CAP_EXCEEDED,
            _ => EXIT_INPUT_ERROR,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        r_into(&e, e.to_string())
    }
}

impl From<ActionError> for CliError {
    fn from(e: ActionError) -> Self {
        let code = match &e {
            ActionError::SearchSpaceTooLarge { .. } => EXIT_CAP_EXCEEDED,
            _ => EXIT_INPUT_ERROR,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<HomError> for CliError {
    fn from(e: HomError) -> Self {
        let code = match &e {
            HomError::SearchSpaceTooLarge { .. } => EXIT_CAP_EXCEEDED,
            _ => EXIT_INPUT_ERROR,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        let code = match &e {
            GroupError::SizeCapExceeded { .. } => EXIT_CAP_EXCEEDED,
            _ => EXIT_INPUT_ERROR,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<divisor_lab::explore::ExploreError> for CliError {
    fn from(e: divisor_lab::explore::ExploreError) -> Self {
        use divisor_lab::explore::ExploreError as E;
        match e {
            E::Solve(s) => s.into(),
            E::Ring(r) => r.into(),
            E::Action(a) => a.into(),
            E::Load(l) => l.into(),
        }
    }
}

fn emit_report(report: &serde_json::Value, out: &Option<PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::input(format!("report serialization failed: {e}")))?;
    match out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn group_report(group: &FiniteGroup, detailed: bool) -> serde_json::Value {
    let mut value = json!({
        "schema": REPORT_SCHEMA,
        "command": if detailed { "group info" } else { "group validate" },
        "label": group.label(),
        "order": group.order(),
        "abelian": group.is_abelian(),
        "valid": true,
    });
    if detailed {
        let orders: Vec<usize> = group.elements().map(|x| group.element_order(x)).collect();
        value["element_names"] = json!(group.names());
        value["element_orders"] = json!(orders);
        if let Ok(subs) = group.all_subgroups() {
            value["subgroup_count"] = json!(subs.len());
            value["subgroup_orders"] = json!(subs.iter().map(|s| s.order()).collect::<Vec<_>>());
        }
    }
    value
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Group { action } => {
            let (source, common, detailed) = match action {
                GroupCommand::Validate { source, common } => (source, common, false),
                GroupCommand::Info { source, common } => (source, common, true),
            };
            let group = source.load()?;
            emit_report(&group_report(&group, detailed), &common.out)?;
            Ok(0)
        }
        Command::Solve { system, common } => {
            let sys = io::load_system_file(&system)?;
            let opts = common.solve_options();
            let mut reports = Vec::new();
            let general = generalized_system_verdict(&sys, &opts)?;
            reports.push(("generalized", general));
            if sys.is_plain() {
                reports.push(("plain", plain_system_verdict(&sys, &opts)?));
                if sys.arity() == 1 {
                    reports.push(("one-unknown", one_unknown_verdict(&sys, &opts)?));
                }
            }
            let all_divide = reports.iter().all(|(_, r)| r.divides);
            let value = json!({
                "schema": REPORT_SCHEMA,
                "command": "solve",
                "group": sys.group().label(),
                "unknowns": sys.arity(),
                "equations": sys.equations().len(),
                "verdicts": reports
                    .iter()
                    .map(|(kind, r)| json!({"kind": kind, "report": r}))
                    .collect::<Vec<_>>(),
                "all_divide": all_divide,
            });
            emit_report(&value, &common.out)?;
            Ok(if all_divide {
                0
            } else {
                EXIT_DIVISIBILITY_FAILED
            })
        }
        Command::RingSolve { ring, common } => {
            let sys = io::load_ring_system_file(&ring)?;
            let opts = common.solve_options();
            let verdict = homogeneity_verdict(&sys, &opts)?;
            let value = json!({
                "schema": REPORT_SCHEMA,
                "command": "ring-solve",
                "ring": sys.ring().describe(),
                "unit_group_order": sys.units().order(),
                "unknowns": sys.arity(),
                "equations": sys.equations().len(),
                "verdict": verdict,
            });
            let ok = verdict.divides;
            emit_report(&value, &common.out)?;
            Ok(if ok { 0 } else { EXIT_DIVISIBILITY_FAILED })
        }
        Command::Crossed { action, common } => {
            let act = io::load_action_file(&action)?;
            let gens = small_generating_set(act.actor());
            let reports = crossed_hom_verdict(&act, Some(&gens), common.cap)?;
            let all_divide = reports.iter().all(|r| r.divides);
            let value = json!({
                "schema": REPORT_SCHEMA,
                "command": "crossed",
                "actor": act.actor().label(),
                "target": act.target().label(),
                "count": reports.first().map(|r| r.solution_count),
                "verdicts": reports,
                "all_divide": all_divide,
            });
            emit_report(&value, &common.out)?;
            Ok(if all_divide {
                0
            } else {
                EXIT_DIVISIBILITY_FAILED
            })
        }
        Command::HomCheck {
            presentation,
            source,
            subgroup,
            common,
        } => {
            let group = source.load()?;
            let (pres, indexing) = io::load_presentation_file(&presentation, &group)?;
            let homs = enumerate_homs(&pres, &group, common.cap)?;
            let phi_set: BTreeSet<Vec<usize>> = homs.iter().cloned().collect();

            // Twist-extension agreement sweep over every hom and twist.
            let f1 = indexing.first_degree_one_word(pres.generator_count());
            let mut disagreements = 0u64;
            for images in &homs {
                let phi = IndexedHom::new(&pres, &group, &indexing, images.clone())?;
                for g in group.elements() {
                    if !twist_extension_check(&phi, &f1, g)?.agree() {
                        disagreements += 1;
                    }
                }
            }

            // Closure and divisibility for the chosen subgroups.
            let subgroups = match &subgroup {
                Some(names) => {
                    let ids = names
                        .split(',')
                        .map(|n| {
                            group
                                .element_by_name(n.trim())
                                .ok_or_else(|| CliError::input(format!("unknown element {n:?}")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    vec![group.subgroup_generated(&ids)]
                }
                None => group
                    .all_subgroups()?
                    .into_iter()
                    .filter(|h| indexing.modulus() % h.order() as u64 == 0)
                    .collect(),
            };
            let mut checks = Vec::new();
            let mut failed = disagreements > 0;
            for h in &subgroups {
                if indexing.modulus() % h.order() as u64 != 0 {
                    return Err(CliError::input(format!(
                        "subgroup order {} does not divide the modulus {}",
                        h.order(),
                        indexing.modulus()
                    )));
                }
                let verdict = closure_check(&pres, &group, &indexing, &phi_set, h)?;
                if verdict.closed && verdict.divisible != Some(true) {
                    failed = true;
                }
                checks.push(json!({
                    "subgroup_order": verdict.subgroup_order,
                    "closed": verdict.closed,
                    "twist_stays_in_coset": verdict.twist_stays_in_coset,
                    "divisible": verdict.divisible,
                }));
            }
            let value = json!({
                "schema": REPORT_SCHEMA,
                "command": "hom-check",
                "group": group.label(),
                "homomorphisms": homs.len(),
                "modulus": indexing.modulus(),
                "twist_disagreements": disagreements,
                "closure_checks": checks,
            });
            emit_report(&value, &common.out)?;
            Ok(if failed { EXIT_DIVISIBILITY_FAILED } else { 0 })
        }
        Command::Explore {
            question,
            trials,
            seed,
            max_order,
            common,
        } => {
            let config = ExplorationConfig {
                question,
                max_group_order: max_order,
                trials,
                seed,
                enumeration_cap: common.cap,
                oracle_gcd: common.oracle,
            };
            let report = explore(&config)?;
            let weak_failed = report.summary.weak_violations > 0;
            let value = serde_json::to_value(&report)
                .map_err(|e| CliError::input(format!("report serialization failed: {e}")))?;
            emit_report(&value, &common.out)?;
            // Strengthened-bound violations are findings, not failures; a
            // weak-bound violation means the build itself is broken.
            Ok(if weak_failed {
                EXIT_DIVISIBILITY_FAILED
            } else {
                0
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
