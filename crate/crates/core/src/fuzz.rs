//! Property fuzzing of the theorem statements over generated situations.
//!
//! Each instance is generated from a seed derived from the master seed and the
//! instance index, so the comparable part of the report is a pure function of
//! the configuration. Timing lives in a separate metadata block.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::agent::{Agent, Policy};
use crate::conditions::{check_cac, efficiency, lemma_suite};
use crate::dialogue::{run_validation_dialogue, DialogueVerdict};
use crate::error::{CoreError, Result};
use crate::generate::{derive_seed, gen_random, GenParams, Profile};
use crate::ids::{Arg, ArgSet, Prop, PropSet};
use crate::io::{parse_instance, serialize_instance};
use crate::model::{
    extract_cac_subset, gamma_operational_validity, model_claims, synthesize_model, Extraction,
    Model,
};
use crate::situation::{DecisionSituation, Status};

pub const FUZZ_REPORT_FORMAT: &str = "dj-fuzz-report/1";

/// Largest instance size used by the harness.
pub const MAX_ARGS: usize = 12;
pub const MAX_PROPS: usize = 6;
pub const MAX_PERSPECTIVES: usize = 4;

/// Argument counts up to this bound have every subset examined.
const EXHAUSTIVE_ARGS: usize = 6;
const SAMPLED_SUBSETS: usize = 32;
const MUTATIONS: usize = 20;
const RANDOM_MODELS: usize = 20;
const DIALOGUE_MODELS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    /// No proposition is both justifiable and untenable.
    MutualExclusion,
    /// Direct and perspective encodings, and the document round trip, agree.
    EncodingEquivalence,
    /// CAC subsets are efficient.
    CacEfficiency,
    /// CAC subsets make the situation clear-cut, the synthesized model passes
    /// the gamma check, and every sampled model passing it is valid.
    CacBundle,
    /// Efficient subsets: every sampled model passing the gamma check is valid.
    ValidModelJudgment,
    /// Efficient sets yield a CAC extraction; sets holding a CAC subset are efficient.
    CacExtraction,
    /// The derived-class inclusions hold whenever their hypotheses do.
    Lemmas,
    /// Under CAC, the inclusion chain pinning the judgment holds.
    ProofChain,
    /// Single-perspective static dialogues agree with the gamma check.
    StaticDialogue,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::MutualExclusion,
        Check::EncodingEquivalence,
        Check::CacEfficiency,
        Check::CacBundle,
        Check::ValidModelJudgment,
        Check::CacExtraction,
        Check::Lemmas,
        Check::ProofChain,
        Check::StaticDialogue,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Check::MutualExclusion => "mutual-exclusion",
            Check::EncodingEquivalence => "encoding-equivalence",
            Check::CacEfficiency => "cac-efficiency",
            Check::CacBundle => "cac-bundle",
            Check::ValidModelJudgment => "valid-model-judgment",
            Check::CacExtraction => "cac-extraction",
            Check::Lemmas => "lemmas",
            Check::ProofChain => "proof-chain",
            Check::StaticDialogue => "static-dialogue",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| CoreError::Parameter(format!("unknown check {name:?}")))
    }
}

/// Which profiles instances are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileMix {
    /// Rotate through free, layered and cac-enforced by instance index.
    Mixed,
    Only(Profile),
}

impl ProfileMix {
    pub fn parse(text: &str) -> Result<Self> {
        if text == "mixed" {
            Ok(ProfileMix::Mixed)
        } else {
            Profile::parse(text).map(ProfileMix::Only)
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProfileMix::Mixed => "mixed",
            ProfileMix::Only(p) => p.as_str(),
        }
    }

    fn for_index(&self, index: usize) -> Profile {
        match self {
            ProfileMix::Mixed => [Profile::Free, Profile::Layered, Profile::CacEnforced][index % 3],
            ProfileMix::Only(p) => *p,
        }
    }
}

/// Deliberate defects for checking that the harness notices broken code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sabotage {
    /// Judgments are computed as if no proposition were justifiable.
    EmptyJudgment,
    /// The CAC check ignores answerability.
    IgnoreAnswerability,
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub count: usize,
    pub seed: u64,
    pub profiles: ProfileMix,
    pub checks: Vec<Check>,
    pub sabotage: Option<Sabotage>,
}

impl FuzzConfig {
    pub fn new(count: usize, seed: u64) -> Self {
        FuzzConfig {
            count,
            seed,
            profiles: ProfileMix::Mixed,
            checks: Check::ALL.to_vec(),
            sabotage: None,
        }
    }
}

/// Generation parameters of instance `index`, drawn from its derived seed.
pub fn instance_params(master_seed: u64, index: usize, profiles: ProfileMix) -> GenParams {
    let seed = derive_seed(master_seed, index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_perspectives = rng.random_range(1..=MAX_PERSPECTIVES);
    GenParams {
        seed,
        n_args: rng.random_range(1..=MAX_ARGS),
        n_props: rng.random_range(1..=MAX_PROPS),
        n_perspectives,
        support_density: rng.random_range(0.15..0.5),
        trump_density: rng.random_range(0.1..0.4),
        ambivalence_rate: if n_perspectives == 1 {
            0.0
        } else {
            rng.random_range(0.0..0.35)
        },
        profile: profiles.for_index(index),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub instance: usize,
    /// Seed of the instance (regenerate with [`instance_params`]).
    pub seed: u64,
    pub profile: &'static str,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HitRate {
    /// Cases examined.
    pub evaluated: u64,
    /// Cases whose hypotheses held, so the conclusion was tested.
    pub hypothesis_held: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparable {
    pub count: usize,
    pub seed: u64,
    pub profile: &'static str,
    pub checks: Vec<&'static str>,
    pub sabotage: Option<String>,
    pub instances_by_profile: BTreeMap<&'static str, usize>,
    pub generation_failures: Vec<u64>,
    pub hit_rates: BTreeMap<&'static str, HitRate>,
    pub violation_counts: BTreeMap<&'static str, usize>,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub elapsed_ms: u128,
    pub engine_version: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzReport {
    pub format: &'static str,
    pub comparable: Comparable,
    pub metadata: Metadata,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.comparable.violations.is_empty() && self.comparable.generation_failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn comparable_json(&self) -> String {
        serde_json::to_string_pretty(&self.comparable).expect("report serializes")
    }
}

struct Outcome {
    profile: Profile,
    failed_seed: Option<u64>,
    hits: BTreeMap<Check, HitRate>,
    violations: Vec<Violation>,
}

pub fn fuzz_theorems(config: &FuzzConfig) -> FuzzReport {
    let started = Instant::now();
    let outcomes: Vec<Outcome> = (0..config.count)
        .into_par_iter()
        .map(|index| fuzz_instance(config, index))
        .collect();

    let mut instances_by_profile = BTreeMap::new();
    let mut hit_rates: BTreeMap<&'static str, HitRate> = BTreeMap::new();
    let mut violation_counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut generation_failures = Vec::new();
    let mut violations = Vec::new();
    for check in &config.checks {
        hit_rates.insert(check.name(), HitRate::default());
        violation_counts.insert(check.name(), 0);
    }
    for outcome in outcomes {
        *instances_by_profile.entry(outcome.profile.as_str()).or_insert(0) += 1;
        generation_failures.extend(outcome.failed_seed);
        for (check, hit) in outcome.hits {
            let total = hit_rates.entry(check.name()).or_default();
            total.evaluated += hit.evaluated;
            total.hypothesis_held += hit.hypothesis_held;
        }
        for v in outcome.violations {
            *violation_counts.entry(v.check).or_insert(0) += 1;
            violations.push(v);
        }
    }
    FuzzReport {
        format: FUZZ_REPORT_FORMAT,
        comparable: Comparable {
            count: config.count,
            seed: config.seed,
            profile: config.profiles.name(),
            checks: config.checks.iter().map(Check::name).collect(),
            sabotage: config.sabotage.map(|s| format!("{s:?}")),
            instances_by_profile,
            generation_failures,
            hit_rates,
            violation_counts,
            violations,
        },
        metadata: Metadata {
            elapsed_ms: started.elapsed().as_millis(),
            engine_version: env!("CARGO_PKG_VERSION"),
        },
    }
}

/// Evaluates the selected checks on one situation, with sabotage applied.
struct Probe<'a> {
    sit: &'a DecisionSituation,
    sabotage: Option<Sabotage>,
    judgment: PropSet,
    hits: BTreeMap<Check, HitRate>,
    violations: Vec<(Check, String)>,
}

impl Probe<'_> {
    fn record(
        &mut self,
        check: Check,
        hypothesis: bool,
        conclusion: bool,
        detail: impl FnOnce(&DecisionSituation) -> String,
    ) {
        let hit = self.hits.entry(check).or_default();
        hit.evaluated += 1;
        if hypothesis {
            hit.hypothesis_held += 1;
            if !conclusion {
                self.violations.push((check, detail(self.sit)));
            }
        }
    }

    fn is_cac(&self, gamma: &ArgSet) -> bool {
        let report = check_cac(self.sit, gamma);
        match self.sabotage {
            Some(Sabotage::IgnoreAnswerability) => {
                report.reinstatement.holds() && report.length.is_some() && report.covering.holds()
            }
            _ => report.is_cac(),
        }
    }

    fn is_valid(&self, model: &Model) -> bool {
        model_claims(self.sit, model) == self.judgment
    }

}

fn names(sit: &DecisionSituation, set: &ArgSet) -> String {
    format!("{{{}}}", sit.arg_set_names(set).join(","))
}

fn fuzz_instance(config: &FuzzConfig, index: usize) -> Outcome {
    let params = instance_params(config.seed, index, config.profiles);
    let mut outcome = Outcome {
        profile: params.profile,
        failed_seed: None,
        hits: BTreeMap::new(),
        violations: Vec::new(),
    };
    let sit = match gen_random(&params) {
        Ok(sit) => sit,
        Err(_) => {
            outcome.failed_seed = Some(params.seed);
            return outcome;
        }
    };
    let judgment = match config.sabotage {
        Some(Sabotage::EmptyJudgment) => PropSet::empty(sit.n_props()),
        _ => sit.deliberated_judgment(),
    };
    let mut probe = Probe {
        sit: &sit,
        sabotage: config.sabotage,
        judgment,
        hits: BTreeMap::new(),
        violations: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, u64::MAX));
    let subsets = sample_subsets(&sit, &mut rng);
    let models = sample_models(&sit, &mut rng);
    let enabled = |c: Check| config.checks.contains(&c);

    if enabled(Check::MutualExclusion) {
        check_mutual_exclusion(&mut probe);
    }
    if enabled(Check::EncodingEquivalence) {
        check_encodings(&mut probe);
    }

    let cac: Vec<bool> = subsets.iter().map(|g| probe.is_cac(g)).collect();
    let efficient: Vec<bool> = subsets
        .iter()
        .map(|g| efficiency(&sit, g).holds())
        .collect();

    for (i, gamma) in subsets.iter().enumerate() {
        if enabled(Check::CacEfficiency) {
            probe.record(Check::CacEfficiency, cac[i], efficient[i], |s| {
                format!("CAC gamma {} is not efficient", names(s, gamma))
            });
        }
        if enabled(Check::CacBundle) {
            check_bundle(&mut probe, gamma, cac[i], &models);
        }
        if enabled(Check::ValidModelJudgment) && efficient[i] {
            for (label, model) in &models {
                let passes = gamma_operational_validity(&sit, gamma, model).is_valid();
                probe.record(Check::ValidModelJudgment, passes, probe.is_valid(model), |s| {
                    format!("{label} model passes gamma {} but is not valid", names(s, gamma))
                });
            }
        }
        if enabled(Check::CacExtraction) {
            check_extraction(&mut probe, gamma, efficient[i], &subsets, &cac);
        }
        if enabled(Check::Lemmas) || enabled(Check::ProofChain) {
            let report = lemma_suite(&sit, gamma);
            for (name, lemma) in report.checks() {
                let check = if name == "judgment_chain" {
                    Check::ProofChain
                } else {
                    Check::Lemmas
                };
                if enabled(check) {
                    probe.record(check, lemma.hypotheses, lemma.conclusion, |s| {
                        format!("{name} fails for gamma {}", names(s, gamma))
                    });
                }
            }
        }
    }

    if enabled(Check::StaticDialogue) && sit.perspectives().is_some_and(|p| p.len() == 1) {
        check_static_dialogues(&mut probe, &subsets, &models, params.seed);
    }

    outcome.hits = std::mem::take(&mut probe.hits);
    outcome.violations = probe
        .violations
        .into_iter()
        .map(|(check, detail)| Violation {
            check: check.name(),
            instance: index,
            seed: params.seed,
            profile: params.profile.as_str(),
            detail,
        })
        .collect();
    outcome
}

fn sample_subsets(sit: &DecisionSituation, rng: &mut ChaCha8Rng) -> Vec<ArgSet> {
    let n = sit.n_args();
    let from_mask = |mask: u64| ArgSet::from_iter_in(n, (0..n).filter(|i| mask >> i & 1 == 1).map(Arg));
    let mut subsets: Vec<ArgSet> = if n <= EXHAUSTIVE_ARGS {
        (0..1u64 << n).map(from_mask).collect()
    } else {
        let mut v = vec![sit.no_args(), sit.all_args()];
        for _ in 0..SAMPLED_SUBSETS {
            v.push(from_mask(rng.random::<u64>()));
        }
        v
    };
    if let Extraction::Built { gamma, .. } = extract_cac_subset(sit, &sit.all_args()) {
        subsets.push(gamma);
    }
    subsets.sort_by_key(|s| s.iter().map(|a| a.0).collect::<Vec<_>>());
    subsets.dedup();
    subsets
}

fn random_model(sit: &DecisionSituation, rng: &mut ChaCha8Rng) -> Model {
    let (n, m) = (sit.n_args(), sit.n_props());
    let mut support = Vec::new();
    let mut counters = Vec::new();
    for a in 0..n {
        for t in 0..m {
            if rng.random_bool(0.3) {
                support.push((Arg(a), Prop(t)));
            }
        }
        for b in 0..n {
            if a != b && rng.random_bool(0.2) {
                counters.push((Arg(a), Arg(b)));
            }
        }
    }
    Model::new(support, counters).expect("no self counters")
}

fn mutate(sit: &DecisionSituation, base: &Model, rng: &mut ChaCha8Rng) -> Model {
    let mut model = base.clone();
    let (n, m) = (sit.n_args(), sit.n_props());
    for _ in 0..rng.random_range(1..=2) {
        if rng.random_bool(0.5) {
            let pair = (Arg(rng.random_range(0..n)), Prop(rng.random_range(0..m)));
            if !model.support_claims.remove(&pair) {
                model.support_claims.insert(pair);
            }
        } else if n > 1 {
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            let pair = (Arg(a), Arg(b));
            if !model.counter_claims.remove(&pair) {
                model.counter_claims.insert(pair);
            }
        }
    }
    model
}

/// The synthesized model (when the situation is clear-cut), mutations of it,
/// and random models.
fn sample_models(sit: &DecisionSituation, rng: &mut ChaCha8Rng) -> Vec<(String, Model)> {
    let mut models = Vec::new();
    if let Ok(base) = synthesize_model(sit) {
        for i in 0..MUTATIONS {
            models.push((format!("mutation {i}"), mutate(sit, &base, rng)));
        }
        models.insert(0, ("synthesized".to_string(), base));
    }
    for i in 0..RANDOM_MODELS {
        models.push((format!("random {i}"), random_model(sit, rng)));
    }
    models
}

fn check_mutual_exclusion(probe: &mut Probe<'_>) {
    let sit = probe.sit;
    let report = sit.clear_cut();
    for t in sit.props() {
        let both = sit.is_justifiable(t) && sit.is_untenable(t);
        let consistent = report.statuses[t.0].1
            == match (sit.is_justifiable(t), sit.is_untenable(t)) {
                (true, _) => Status::Justifiable,
                (false, true) => Status::Untenable,
                (false, false) => Status::Neither,
            };
        probe.record(Check::MutualExclusion, true, !both && consistent, |s| {
            format!("proposition {} is both justifiable and untenable", s.prop_name(t))
        });
    }
}

fn check_encodings(probe: &mut Probe<'_>) {
    let sit = probe.sit;
    let direct = sit.to_direct();
    let same_relations = direct.derived() == sit.derived();
    let same_judgment = direct.deliberated_judgment() == sit.deliberated_judgment()
        && direct.clear_cut() == sit.clear_cut();
    let round_trip = parse_instance(&serialize_instance(sit)).ok().as_ref() == Some(sit)
        && parse_instance(&serialize_instance(&direct)).ok().as_ref() == Some(&direct);
    probe.record(Check::EncodingEquivalence, true, same_relations && same_judgment && round_trip, |_| {
        format!(
            "relations equal: {same_relations}, judgments equal: {same_judgment}, round trip: {round_trip}"
        )
    });
}

fn check_bundle(probe: &mut Probe<'_>, gamma: &ArgSet, cac: bool, models: &[(String, Model)]) {
    let sit = probe.sit;
    let synthesized = synthesize_model(sit).ok();
    let synthesized_passes = synthesized
        .as_ref()
        .is_some_and(|m| gamma_operational_validity(sit, gamma, m).is_valid());
    probe.record(Check::CacBundle, cac, sit.is_clear_cut() && synthesized_passes, |s| {
        format!(
            "CAC gamma {}: clear-cut {}, synthesized model passes {}",
            names(s, gamma),
            sit.is_clear_cut(),
            synthesized_passes
        )
    });
    if !cac {
        return;
    }
    for (label, model) in models {
        let passes = gamma_operational_validity(sit, gamma, model).is_valid();
        probe.record(Check::CacBundle, passes, probe.is_valid(model), |s| {
            format!("{label} model passes CAC gamma {} but is not valid", names(s, gamma))
        });
    }
}

fn check_extraction(
    probe: &mut Probe<'_>,
    set: &ArgSet,
    efficient: bool,
    subsets: &[ArgSet],
    cac: &[bool],
) {
    let sit = probe.sit;
    let extraction = extract_cac_subset(sit, set);
    let extracted = match &extraction {
        Extraction::Built { gamma, .. } => Some(gamma.clone()),
        Extraction::NotEfficient { .. } => None,
    };
    let forward = extracted
        .as_ref()
        .is_some_and(|g| g.is_subset(set) && probe.is_cac(g));
    probe.record(Check::CacExtraction, efficient, forward, |s| {
        format!(
            "efficient set {} has no CAC extraction (extracted {})",
            names(s, set),
            extracted.as_ref().map_or("nothing".into(), |g| names(s, g))
        )
    });
    let inner = subsets
        .iter()
        .zip(cac)
        .find(|(g, &c)| c && g.is_subset(set))
        .map(|(g, _)| g);
    probe.record(Check::CacExtraction, inner.is_some(), efficient, |s| {
        format!(
            "set {} contains CAC subset {} but is not efficient",
            names(s, set),
            inner.map_or(String::new(), |g| names(s, g))
        )
    });
}

fn check_static_dialogues(
    probe: &mut Probe<'_>,
    subsets: &[ArgSet],
    models: &[(String, Model)],
    seed: u64,
) {
    let sit = probe.sit;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let gammas = [
        sit.all_args(),
        subsets[rng.random_range(0..subsets.len())].clone(),
    ];
    for gamma in &gammas {
        for (label, model) in models.iter().take(DIALOGUE_MODELS) {
            let budget = rng.random_range(1..=3);
            let mut agent = Agent::new(sit.clone(), Policy::Static, None).expect("perspective encoding");
            let transcript = run_validation_dialogue(&mut agent, model, gamma, budget)
                .expect("budget is positive");
            let truth = gamma_operational_validity(sit, gamma, model).is_valid();
            let agrees = transcript.verdict != DialogueVerdict::Inconclusive
                && (transcript.verdict == DialogueVerdict::Valid) == truth;
            probe.record(Check::StaticDialogue, true, agrees, |s| {
                format!(
                    "{label} model on gamma {}: dialogue {} but gamma check valid = {truth}",
                    names(s, gamma),
                    transcript.verdict.as_str()
                )
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(count: usize, seed: u64) -> FuzzConfig {
        FuzzConfig::new(count, seed)
    }

    #[test]
    fn reports_are_reproducible() {
        let a = fuzz_theorems(&small(12, 5));
        let b = fuzz_theorems(&small(12, 5));
        assert_eq!(a.comparable_json(), b.comparable_json());
        assert_eq!(a.comparable.instances_by_profile.values().sum::<usize>(), 12);
    }

    #[test]
    fn cac_enforced_profile_has_no_violations() {
        let mut config = small(30, 11);
        config.profiles = ProfileMix::Only(Profile::CacEnforced);
        let report = fuzz_theorems(&config);
        assert!(report.passed(), "{}", report.comparable_json());
        assert!(report.comparable.hit_rates["cac-bundle"].hypothesis_held > 0);
    }

    #[test]
    fn sabotaged_judgment_is_caught() {
        let mut config = small(30, 11);
        config.profiles = ProfileMix::Only(Profile::CacEnforced);
        config.sabotage = Some(Sabotage::EmptyJudgment);
        let report = fuzz_theorems(&config);
        assert!(!report.comparable.violations.is_empty());
        assert!(report.comparable.violations.iter().all(|v| v.seed != 0));
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(Check::parse(c.name()).unwrap(), c);
        }
        assert!(Check::parse("nope").is_err());
    }

    #[test]
    fn instance_parameters_within_bounds() {
        for i in 0..200 {
            let p = instance_params(7, i, ProfileMix::Mixed);
            assert!(p.n_args <= MAX_ARGS && p.n_props <= MAX_PROPS);
            assert!(p.n_perspectives <= MAX_PERSPECTIVES);
            p.validate().unwrap();
        }
    }
}
