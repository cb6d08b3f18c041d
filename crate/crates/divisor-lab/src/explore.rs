//! Seeded counterexample search for the four strengthened-bound questions:
//! can the invariant-factor ratio (or the homogeneity modulus, or the
//! abelianization exponent) be replaced by its numerator (or the
//! abelianization order)? Every trial records the instance in replayable
//! form; a clean run is evidence of nothing and is reported as such.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crossed::{
    abelianization_exponent, abelianization_order, all_actions, count_crossed_homs,
    small_generating_set, ActionError, GroupAction,
};
use crate::group::{catalog, gcd_u64, ElementId, FiniteGroup};
use crate::io::{ActionDoc, EquationDoc, GroupDoc, GroupRef, RingDoc, SystemDoc, UnitGroupDoc};
use crate::report::REPORT_SCHEMA;
use crate::ring::{homogeneity_verdict, RingEquationSystem, RingError};
use crate::solver::{
    constraint_subgroup, generalized_system_verdict, plain_system_verdict, SolveError, SolveOptions,
};
use crate::words::{Letter, Word};

#[derive(Debug, Error)]
pub enum ExploreError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Load(#[from] crate::io::LoadError),
}

/// Which strengthened bound to probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Question {
    /// Replace Δ_m/Δ_{m-1} by Δ_m for plain systems.
    Q1,
    /// Replace Δ_m/Δ_{m-1} by Δ_m for generalized systems.
    Q2,
    /// Replace the homogeneity modulus by Δ_{m+s} for ring systems.
    Q3,
    /// Replace exp(F/F') by |F/F'| for crossed homomorphisms.
    Q4,
}

impl std::str::FromStr for Question {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "q1" => Ok(Question::Q1),
            "q2" => Ok(Question::Q2),
            "q3" => Ok(Question::Q3),
            "q4" => Ok(Question::Q4),
            other => Err(format!("unknown question {other:?} (expected q1..q4)")),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExplorationConfig {
    pub question: Question,
    pub max_group_order: usize,
    pub trials: u64,
    pub seed: u64,
    pub enumeration_cap: u64,
    pub oracle_gcd: bool,
}

impl ExplorationConfig {
    pub fn new(question: Question, trials: u64, seed: u64) -> Self {
        ExplorationConfig {
            question,
            max_group_order: 12,
            trials,
            seed,
            enumeration_cap: crate::solver::DEFAULT_ENUMERATION_CAP,
            oracle_gcd: false,
        }
    }
}

/// One seeded instance with both bounds evaluated against the exact count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: u64,
    /// Replayable instance document (system, ring system, or action).
    pub instance: serde_json::Value,
    pub count: u64,
    pub weak_bound: u64,
    pub weak_divides: bool,
    pub strengthened_bound: u64,
    pub strengthened_divides: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExplorationSummary {
    pub trials: u64,
    /// Strengthened-bound failures: candidate counterexamples to the open
    /// question, recorded in full below.
    pub violations: u64,
    /// Weak-bound failures: these indicate a broken build, never a
    /// mathematical discovery.
    pub weak_violations: u64,
    pub violating: Vec<TrialRecord>,
    pub conclusion: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExplorationReport {
    pub schema: String,
    pub config: ExplorationConfig,
    pub records: Vec<TrialRecord>,
    pub summary: ExplorationSummary,
}

/// Runs the seeded search. Each trial draws its randomness from an
/// independent stream of the seed, so trial i is reproducible in isolation
/// and the whole report is byte-stable for a fixed config.
pub fn explore(config: &ExplorationConfig) -> Result<ExplorationReport, ExploreError> {
    let corpus: Vec<FiniteGroup> = catalog::corpus(config.max_group_order)
        .into_iter()
        .filter(|g| g.order() >= 2)
        .collect();
    let opts = SolveOptions {
        cap: config.enumeration_cap,
        oracle_gcd: config.oracle_gcd,
    };
    let mut records = Vec::with_capacity(config.trials as usize);
    // Q4 enumerates the actions of a pair once and reuses them.
    let mut action_cache: Vec<((String, String), Vec<GroupAction>)> = Vec::new();
    for index in 0..config.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index.wrapping_add(1));
        let record = match config.question {
            Question::Q1 => q1_trial(index, &corpus, &opts, &mut rng)?,
            Question::Q2 => q2_trial(index, &corpus, &opts, &mut rng)?,
            Question::Q3 => q3_trial(index, &opts, &mut rng)?,
            Question::Q4 => q4_trial(index, &corpus, &opts, &mut rng, &mut action_cache)?,
        };
        records.push(record);
    }
    let violating: Vec<TrialRecord> = records
        .iter()
        .filter(|r| !r.strengthened_divides)
        .cloned()
        .collect();
    let weak_violations = records.iter().filter(|r| !r.weak_divides).count() as u64;
    let conclusion = if violating.is_empty() {
        format!(
            "no counterexample found in {} trials; this proves nothing beyond the trials run",
            config.trials
        )
    } else {
        format!(
            "{} candidate counterexample(s) found; replay the recorded instances to confirm",
            violating.len()
        )
    };
    let summary = ExplorationSummary {
        trials: config.trials,
        violations: violating.len() as u64,
        weak_violations,
        violating,
        conclusion,
    };
    Ok(ExplorationReport {
        schema: REPORT_SCHEMA.to_string(),
        config: config.clone(),
        records,
        summary,
    })
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.random_range(0..items.len())]
}

fn group_ref(group: &FiniteGroup) -> GroupRef {
    // Corpus groups carry parseable labels; anything else inlines its table.
    match catalog::parse_spec(group.label()) {
        Ok(kind) if kind.order() == group.order() => GroupRef::Spec(group.label().to_string()),
        _ => GroupRef::Inline(GroupDoc::from_group(group)),
    }
}

const UNKNOWN_NAMES: [&str; 3] = ["x", "y", "z"];

/// Random word as letters, rendered through the DSL for the instance doc.
fn random_word(
    rng: &mut ChaCha8Rng,
    group: &FiniteGroup,
    arity: usize,
    max_len: usize,
    allow_coefficients: bool,
) -> Word {
    let len = rng.random_range(1..=max_len);
    let letters = (0..len)
        .map(|_| {
            if allow_coefficients && rng.random_range(0..10) < 3 {
                Letter::Coeff(rng.random_range(0..group.order()))
            } else {
                Letter::Var {
                    index: rng.random_range(1..=arity),
                    inverse: rng.random_range(0..2) == 1,
                }
            }
        })
        .collect();
    Word::new(arity, letters).expect("indices in range")
}

/// Repetition factor for word systems. Repeating every word d times scales
/// the whole exponent-sum matrix by d, which pushes Δ_{m-1} above 1 — the
/// only regime where the strengthened bound differs from the weak one.
fn repetition_factor(rng: &mut ChaCha8Rng) -> usize {
    match rng.random_range(0..4) {
        0 => 2,
        1 => 3,
        _ => 1,
    }
}

fn repeat_word(word: &Word, times: usize) -> Word {
    let mut out = word.clone();
    for _ in 1..times {
        out = out.concat(word);
    }
    out
}

/// Renders words and coefficient bindings into a system document.
fn system_doc(
    group: &FiniteGroup,
    unknowns: &[String],
    equations: Vec<EquationDoc>,
    coefficient_ids: &[ElementId],
    subsystem: Vec<usize>,
) -> SystemDoc {
    let coefficients = coefficient_ids
        .iter()
        .enumerate()
        .map(|(i, &id)| (format!("c{i}"), group.name(id).to_string()))
        .collect();
    SystemDoc {
        group: group_ref(group),
        unknowns: unknowns.to_vec(),
        coefficients,
        equations,
        subsystem,
    }
}

fn render_word(word: &Word, coefficient_ids: &[ElementId]) -> String {
    let unknowns: Vec<String> = UNKNOWN_NAMES[..word.arity()]
        .iter()
        .map(|s| s.to_string())
        .collect();
    word.to_dsl(&unknowns, &|id| {
        let pos = coefficient_ids
            .iter()
            .position(|&c| c == id)
            .expect("coefficient was registered");
        format!("c{pos}")
    })
}

fn collect_coefficients(words: &[Word]) -> Vec<ElementId> {
    let mut ids: Vec<ElementId> = words.iter().flat_map(|w| w.coefficients()).collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

fn q1_trial(
    index: u64,
    corpus: &[FiniteGroup],
    opts: &SolveOptions,
    rng: &mut ChaCha8Rng,
) -> Result<TrialRecord, ExploreError> {
    let group = pick(rng, corpus).clone();
    let arity = rng.random_range(1..=2);
    let eq_count = rng.random_range(1..=3);
    let reps = repetition_factor(rng);
    let words: Vec<Word> = (0..eq_count)
        .map(|_| repeat_word(&random_word(rng, &group, arity, 8, true), reps))
        .collect();
    let coefficient_ids = collect_coefficients(&words);
    let unknowns: Vec<String> = UNKNOWN_NAMES[..arity]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let equations = words
        .iter()
        .map(|w| EquationDoc::plain(render_word(w, &coefficient_ids)))
        .collect();
    let doc = system_doc(
        &group,
        &unknowns,
        equations,
        &coefficient_ids,
        (0..eq_count).collect(),
    );
    // Load through the document so the recorded instance is exactly what ran.
    let sys = crate::io::system_from_doc(&doc, std::path::Path::new("."))?;
    let weak = plain_system_verdict(&sys, opts)?;
    let centralizer = sys.group().centralizer(&sys.coefficient_set());
    let delta_m = sys.full_matrix().minors_gcd(arity);
    let strengthened_bound = opts
        .group_gcd(&centralizer, &delta_m)
        .map_err(SolveError::from)?;
    Ok(TrialRecord {
        index,
        instance: serde_json::to_value(&doc).expect("doc serializes"),
        count: weak.solution_count,
        weak_bound: weak.bound,
        weak_divides: weak.divides,
        strengthened_bound,
        strengthened_divides: weak.solution_count % strengthened_bound == 0,
    })
}

fn q2_trial(
    index: u64,
    corpus: &[FiniteGroup],
    opts: &SolveOptions,
    rng: &mut ChaCha8Rng,
) -> Result<TrialRecord, ExploreError> {
    let group = pick(rng, corpus).clone();
    let arity = rng.random_range(1..=2);
    let eq_count = rng.random_range(1..=2);
    let reps = repetition_factor(rng);
    let words: Vec<Word> = (0..eq_count)
        .map(|_| repeat_word(&random_word(rng, &group, arity, 6, true), reps))
        .collect();
    let coefficient_ids = collect_coefficients(&words);
    let unknowns: Vec<String> = UNKNOWN_NAMES[..arity]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut equations = Vec::new();
    for w in &words {
        let text = render_word(w, &coefficient_ids);
        if rng.random_range(0..2) == 0 {
            equations.push(EquationDoc::plain(text));
        } else {
            let gen_count = rng.random_range(0..=2);
            let gens: Vec<String> = (0..gen_count)
                .map(|_| group.name(rng.random_range(0..group.order())).to_string())
                .collect();
            let rep = group.name(rng.random_range(0..group.order())).to_string();
            equations.push(EquationDoc {
                word: text,
                subgroup_generators: Some(gens),
                g: Some(rep),
                eq1: None,
            });
        }
    }
    let subsystem: Vec<usize> = (0..eq_count)
        .filter(|_| rng.random_range(0..2) == 0)
        .collect();
    let doc = system_doc(&group, &unknowns, equations, &coefficient_ids, subsystem);
    let sys = crate::io::system_from_doc(&doc, std::path::Path::new("."))?;
    let weak = generalized_system_verdict(&sys, opts)?;
    let h_tilde = constraint_subgroup(&sys);
    let delta_m = sys.subsystem_matrix().minors_gcd(arity);
    let strengthened_bound = opts
        .group_gcd(&h_tilde, &delta_m)
        .map_err(SolveError::from)?;
    Ok(TrialRecord {
        index,
        instance: serde_json::to_value(&doc).expect("doc serializes"),
        count: weak.solution_count,
        weak_bound: weak.bound,
        weak_divides: weak.divides,
        strengthened_bound,
        strengthened_divides: weak.solution_count % strengthened_bound == 0,
    })
}

fn q3_trial(
    index: u64,
    opts: &SolveOptions,
    rng: &mut ChaCha8Rng,
) -> Result<TrialRecord, ExploreError> {
    let ring_doc = match rng.random_range(0..3) {
        0 => RingDoc::Modint {
            k: rng.random_range(2..=9),
        },
        1 => RingDoc::Matrix {
            k: if rng.random_range(0..2) == 0 { 2 } else { 3 },
            d: 2,
        },
        _ => RingDoc::Groupring {
            k: if rng.random_range(0..2) == 0 { 2 } else { 3 },
            group: GroupRef::Spec(pick(rng, &["Z2", "Z3", "Z4"]).to_string()),
        },
    };
    let arity = rng.random_range(1..=2);
    let unknowns: Vec<String> = UNKNOWN_NAMES[..arity]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let eq_count = rng.random_range(1..=2);
    let mut equations = Vec::new();
    for _ in 0..eq_count {
        let term_count = rng.random_range(1..=3);
        let mut terms = Vec::new();
        for _ in 0..term_count {
            let factor_count = rng.random_range(1..=3);
            let mut factors = Vec::new();
            for _ in 0..factor_count {
                if rng.random_range(0..4) == 0 {
                    factors.push(crate::io::FactorDoc::Scalar {
                        scalar: serde_json::json!(rng.random_range(-4i64..=4)),
                    });
                } else {
                    let exp = loop {
                        let e = rng.random_range(-3i64..=3);
                        if e != 0 {
                            break e;
                        }
                    };
                    factors.push(crate::io::FactorDoc::VarPow {
                        var: unknowns[rng.random_range(0..arity)].clone(),
                        exp,
                    });
                }
            }
            terms.push(crate::io::RingTermDoc { factors });
        }
        equations.push(terms);
    }
    let doc = crate::io::RingSystemDoc {
        ring: ring_doc,
        unknowns,
        unit_group: UnitGroupDoc::Discover("units".to_string()),
        equations,
    };
    let sys: RingEquationSystem = crate::io::ring_system_from_doc(&doc, std::path::Path::new("."))?;
    let weak = homogeneity_verdict(&sys, opts)?;
    let g0 = sys.coefficient_centralizer();
    let top = sys.arity() + sys.equations().len();
    let delta_top = sys.homogeneity_matrix().minors_gcd(top);
    let strengthened_bound = opts.group_gcd(&g0, &delta_top).map_err(SolveError::from)?;
    Ok(TrialRecord {
        index,
        instance: serde_json::to_value(&doc).expect("doc serializes"),
        count: weak.solution_count,
        weak_bound: weak.bound,
        weak_divides: weak.divides,
        strengthened_bound,
        strengthened_divides: weak.solution_count % strengthened_bound == 0,
    })
}

fn q4_trial(
    index: u64,
    corpus: &[FiniteGroup],
    opts: &SolveOptions,
    rng: &mut ChaCha8Rng,
    cache: &mut Vec<((String, String), Vec<GroupAction>)>,
) -> Result<TrialRecord, ExploreError> {
    let small: Vec<&FiniteGroup> = corpus.iter().filter(|g| g.order() <= 8).collect();
    let actor = (*pick(rng, &small)).clone();
    let target = (*pick(rng, &small)).clone();
    let key = (actor.label().to_string(), target.label().to_string());
    let actions = match cache.iter().find(|(k, _)| *k == key) {
        Some((_, actions)) => actions.clone(),
        None => {
            let actions = all_actions(&actor, &target);
            cache.push((key.clone(), actions.clone()));
            actions
        }
    };
    let action = pick(rng, &actions).clone();
    let doc = ActionDoc::from_action(&action);
    let action = crate::io::action_from_doc(&doc, std::path::Path::new("."))?;
    let gens = small_generating_set(&actor);
    let count = count_crossed_homs(&action, Some(&gens), opts.cap)?;
    let b_ord = target.order() as u64;
    let weak_bound = gcd_u64(b_ord, abelianization_exponent(&actor));
    let strengthened_bound = gcd_u64(b_ord, abelianization_order(&actor));
    Ok(TrialRecord {
        index,
        instance: serde_json::to_value(&doc).expect("doc serializes"),
        count,
        weak_bound,
        weak_divides: count % weak_bound == 0,
        strengthened_bound,
        strengthened_divides: count % strengthened_bound == 0,
    })
}
