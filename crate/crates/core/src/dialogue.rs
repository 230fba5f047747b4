//! Validation dialogues: checking a model against a decision-maker using only
//! trump and support queries.
//!
//! The dialogue is a pure function of the answers it receives, so a session
//! can be resumed by replaying the recorded answers: when the answer source
//! has nothing more to offer, the run stops with the pending query.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::agent::{Agent, Policy, Query, QueryAnswer};
use crate::error::{CoreError, Result};
use crate::ids::{Arg, ArgSet, Prop};
use crate::io::{check_format, malformed, ModelDoc, TRANSCRIPT_FORMAT};
use crate::model::{model_claims, Failure, Model};
use crate::situation::DecisionSituation;

/// Supplies answers to dialogue queries.
pub trait AnswerSource {
    /// The answer to `query`, or `None` when it is not available yet.
    fn answer(&mut self, query: Query) -> Option<QueryAnswer>;
}

impl AnswerSource for Agent {
    fn answer(&mut self, query: Query) -> Option<QueryAnswer> {
        Some(self.ask(query))
    }
}

/// Replays previously recorded answers, in order. Stops (and flags a
/// mismatch) if the dialogue asks something other than the next record.
#[derive(Debug)]
pub struct Recorded<'a> {
    answers: &'a [QueryAnswer],
    position: usize,
    mismatch: bool,
}

impl<'a> Recorded<'a> {
    pub fn new(answers: &'a [QueryAnswer]) -> Self {
        Recorded {
            answers,
            position: 0,
            mismatch: false,
        }
    }

    pub fn consumed(&self) -> usize {
        self.position
    }

    pub fn mismatch(&self) -> bool {
        self.mismatch
    }
}

impl AnswerSource for Recorded<'_> {
    fn answer(&mut self, query: Query) -> Option<QueryAnswer> {
        let next = self.answers.get(self.position)?;
        if next.query != query {
            self.mismatch = true;
            return None;
        }
        self.position += 1;
        Some(next.clone())
    }
}

/// Parameters of one dialogue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DialogueConfig {
    pub gamma: ArgSet,
    /// Number of retry rounds for unresolved obligations; at least 1.
    pub budget: u32,
    /// The decision-maker declares a fixed disposition: every answer is
    /// definitive and no retry can change it.
    pub stable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DialogueVerdict {
    Valid,
    Invalid,
    Inconclusive,
}

impl DialogueVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            DialogueVerdict::Valid => "valid",
            DialogueVerdict::Invalid => "invalid",
            DialogueVerdict::Inconclusive => "inconclusive",
        }
    }

    fn parse(text: &str) -> Result<Self> {
        match text {
            "valid" => Ok(DialogueVerdict::Valid),
            "invalid" => Ok(DialogueVerdict::Invalid),
            "inconclusive" => Ok(DialogueVerdict::Inconclusive),
            other => Err(CoreError::Format(format!("unknown verdict {other:?}"))),
        }
    }
}

/// A finished dialogue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub records: Vec<QueryAnswer>,
    pub verdict: DialogueVerdict,
    /// The failure that ended an invalid dialogue.
    pub failures: Vec<Failure>,
    /// Obligations left open when the retry budget ran out.
    pub unresolved: Vec<Failure>,
}

impl Transcript {
    /// Queries asked more than once, with the number of repeats.
    pub fn retries(&self) -> Vec<(Query, usize)> {
        let mut counts: BTreeMap<Query, usize> = BTreeMap::new();
        for r in &self.records {
            *counts.entry(r.query).or_default() += 1;
        }
        counts
            .into_iter()
            .filter(|&(_, n)| n > 1)
            .map(|(q, n)| (q, n - 1))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DialogueState {
    /// Waiting for the answer to `query`; `records` are the answers so far.
    Pending {
        query: Query,
        records: Vec<QueryAnswer>,
    },
    Done(Transcript),
}

enum Stop {
    Pending(Query),
    Invalid(Failure),
}

struct Run<'a, S: AnswerSource + ?Sized> {
    source: &'a mut S,
    records: Vec<QueryAnswer>,
    supports: HashMap<(Arg, Prop), bool>,
}

impl<S: AnswerSource + ?Sized> Run<'_, S> {
    fn ask(&mut self, query: Query) -> std::result::Result<bool, Stop> {
        let answer = self.source.answer(query).ok_or(Stop::Pending(query))?;
        let yes = answer.answer;
        self.records.push(answer);
        Ok(yes)
    }

    fn support(&mut self, s: Arg, t: Prop) -> std::result::Result<bool, Stop> {
        if let Some(&known) = self.supports.get(&(s, t)) {
            return Ok(known);
        }
        let yes = self.ask(Query::Support(s, t))?;
        self.supports.insert((s, t), yes);
        Ok(yes)
    }

    /// Asks each counter whether it trumps `target`, for `rounds` rounds.
    fn countered(&mut self, counters: &[Arg], target: Arg, rounds: u32) -> std::result::Result<bool, Stop> {
        for _ in 0..rounds {
            for &c in counters {
                if self.ask(Query::Trump(c, target))? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Runs the dialogue as far as the answer source allows.
///
/// Order: every support claim `(s, t)` of the model is confirmed, then every
/// member `s_c` of gamma is probed as a trumper of `s`; a trumper must be
/// trumped by one of the model's counters. Afterwards every member of gamma
/// supporting an unclaimed proposition must be trumped by a model counter.
pub fn drive<S: AnswerSource + ?Sized>(
    sit: &DecisionSituation,
    model: &Model,
    config: &DialogueConfig,
    source: &mut S,
) -> DialogueState {
    let mut run = Run {
        source,
        records: Vec::new(),
        supports: HashMap::new(),
    };
    let mut unresolved = Vec::new();
    let outcome = obligations(sit, model, config, &mut run, &mut unresolved);
    let records = run.records;
    match outcome {
        Err(Stop::Pending(query)) => DialogueState::Pending { query, records },
        Err(Stop::Invalid(failure)) => DialogueState::Done(Transcript {
            records,
            verdict: DialogueVerdict::Invalid,
            failures: vec![failure],
            unresolved,
        }),
        Ok(()) => DialogueState::Done(Transcript {
            records,
            verdict: if unresolved.is_empty() {
                DialogueVerdict::Valid
            } else {
                DialogueVerdict::Inconclusive
            },
            failures: Vec::new(),
            unresolved,
        }),
    }
}

fn obligations<S: AnswerSource + ?Sized>(
    sit: &DecisionSituation,
    model: &Model,
    config: &DialogueConfig,
    run: &mut Run<'_, S>,
    unresolved: &mut Vec<Failure>,
) -> std::result::Result<(), Stop> {
    let rounds = if config.stable { 1 } else { config.budget };
    let mut settled: Vec<(Arg, Arg)> = Vec::new();

    for &(s, t) in &model.support_claims {
        if !run.support(s, t)? {
            return Err(Stop::Invalid(Failure::UnsupportedClaim { arg: s, prop: t }));
        }
        for c in config.gamma.iter().filter(|&c| c != s) {
            if settled.contains(&(c, s)) {
                continue;
            }
            settled.push((c, s));
            if !run.ask(Query::Trump(c, s))? {
                continue;
            }
            let failure = Failure::UncounteredTrumper {
                supporter: s,
                trumper: c,
            };
            let counters = model.counters_of(c);
            let discharged = if counters.is_empty() {
                if config.stable {
                    return Err(Stop::Invalid(failure));
                }
                // Without a counter the only way out is a "no" on the same probe.
                let mut refuted = false;
                for _ in 0..config.budget {
                    if !run.ask(Query::Trump(c, s))? {
                        refuted = true;
                        break;
                    }
                }
                refuted
            } else {
                run.countered(&counters, c, rounds)?
            };
            if !discharged {
                if config.stable {
                    return Err(Stop::Invalid(failure));
                }
                unresolved.push(failure);
            }
        }
    }

    let claimed = model_claims(sit, model);
    for t in sit.props().filter(|&t| !claimed.contains(t)) {
        for s in config.gamma.iter() {
            if !run.support(s, t)? {
                continue;
            }
            let failure = Failure::MissingCounter {
                prop: t,
                supporter: s,
            };
            let counters = model.counters_of(s);
            if counters.is_empty() {
                return Err(Stop::Invalid(failure));
            }
            if !run.countered(&counters, s, rounds)? {
                if config.stable {
                    return Err(Stop::Invalid(failure));
                }
                unresolved.push(failure);
            }
        }
    }
    Ok(())
}

/// Runs a full dialogue against a simulated agent. Static agents are treated
/// as stable.
pub fn run_validation_dialogue(
    agent: &mut Agent,
    model: &Model,
    gamma: &ArgSet,
    budget: u32,
) -> Result<Transcript> {
    if budget == 0 {
        return Err(CoreError::Parameter("budget must be at least 1".into()));
    }
    let config = DialogueConfig {
        gamma: gamma.clone(),
        budget,
        stable: agent.policy() == Policy::Static,
    };
    let sit = agent.situation().clone();
    match drive(&sit, model, &config, agent) {
        DialogueState::Done(transcript) => Ok(transcript),
        DialogueState::Pending { .. } => unreachable!("agents always answer"),
    }
}

/// Upper bound on the number of queries of any dialogue.
pub fn query_bound(sit: &DecisionSituation, model: &Model, gamma: &ArgSet, budget: u32) -> usize {
    let claims = model.support_claims.len();
    let counters = model.counter_claims.len();
    let g = gamma.len();
    let b = budget as usize;
    let unclaimed = sit.n_props() - model_claims(sit, model).len();
    claims * (1 + g * (1 + b * counters.max(1))) + unclaimed * g * (1 + b * counters)
}

/// String-level transcript document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscriptDoc {
    pub format: String,
    pub model: ModelDoc,
    pub gamma: Vec<String>,
    pub budget: u32,
    pub stable: bool,
    pub records: Vec<RecordDoc>,
    pub verdict: VerdictDoc,
    pub retries: Vec<RetryDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordDoc {
    pub kind: String,
    pub pair: (String, String),
    pub answer: String,
    pub perspective: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictDoc {
    pub status: String,
    pub failures: Vec<FailureDoc>,
    pub unresolved: Vec<FailureDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureDoc {
    pub kind: String,
    pub pair: (String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RetryDoc {
    pub kind: String,
    pub pair: (String, String),
    pub count: usize,
}

pub fn failure_doc(sit: &DecisionSituation, failure: &Failure) -> FailureDoc {
    FailureDoc {
        kind: failure.kind().to_string(),
        pair: failure.subjects(sit),
    }
}

fn parse_failure(sit: &DecisionSituation, doc: &FailureDoc) -> Result<Failure> {
    let (a, b) = (&doc.pair.0, &doc.pair.1);
    match doc.kind.as_str() {
        "unsupported-claim" => Ok(Failure::UnsupportedClaim {
            arg: sit.arg(a)?,
            prop: sit.prop(b)?,
        }),
        "uncountered-trumper" => Ok(Failure::UncounteredTrumper {
            supporter: sit.arg(a)?,
            trumper: sit.arg(b)?,
        }),
        "missing-counter" => Ok(Failure::MissingCounter {
            prop: sit.prop(a)?,
            supporter: sit.arg(b)?,
        }),
        other => Err(CoreError::Format(format!("unknown failure kind {other:?}"))),
    }
}

pub fn record_doc(sit: &DecisionSituation, record: &QueryAnswer) -> RecordDoc {
    RecordDoc {
        kind: record.query.kind().to_string(),
        pair: record.query.names(sit),
        answer: if record.answer { "yes" } else { "no" }.to_string(),
        perspective: record.perspective.clone(),
    }
}

pub fn parse_record(sit: &DecisionSituation, doc: &RecordDoc) -> Result<QueryAnswer> {
    let answer = match doc.answer.as_str() {
        "yes" => true,
        "no" => false,
        other => return Err(CoreError::Format(format!("answer must be yes or no, got {other:?}"))),
    };
    Ok(QueryAnswer {
        query: Query::from_names(sit, &doc.kind, (&doc.pair.0, &doc.pair.1))?,
        answer,
        perspective: doc.perspective.clone(),
    })
}

impl TranscriptDoc {
    pub fn new(
        sit: &DecisionSituation,
        model: &Model,
        config: &DialogueConfig,
        transcript: &Transcript,
    ) -> Self {
        TranscriptDoc {
            format: TRANSCRIPT_FORMAT.to_string(),
            model: model.to_doc(sit),
            gamma: sit.arg_set_names(&config.gamma),
            budget: config.budget,
            stable: config.stable,
            records: transcript.records.iter().map(|r| record_doc(sit, r)).collect(),
            verdict: VerdictDoc {
                status: transcript.verdict.as_str().to_string(),
                failures: transcript.failures.iter().map(|f| failure_doc(sit, f)).collect(),
                unresolved: transcript.unresolved.iter().map(|f| failure_doc(sit, f)).collect(),
            },
            retries: transcript
                .retries()
                .into_iter()
                .map(|(q, count)| RetryDoc {
                    kind: q.kind().to_string(),
                    pair: q.names(sit),
                    count,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("transcript serializes");
        text.push('\n');
        text
    }

    pub fn parse(text: &str) -> Result<Self> {
        check_format(text, TRANSCRIPT_FORMAT)?;
        serde_json::from_str(text).map_err(|e| malformed("transcript", &e))
    }

    /// Re-indexes the document against a situation.
    pub fn resolve(
        &self,
        sit: &DecisionSituation,
    ) -> Result<(Model, DialogueConfig, Transcript)> {
        let model = Model::from_doc(sit, &self.model)?;
        let config = DialogueConfig {
            gamma: sit.arg_set(&self.gamma)?,
            budget: self.budget,
            stable: self.stable,
        };
        let records = self
            .records
            .iter()
            .map(|r| parse_record(sit, r))
            .collect::<Result<Vec<_>>>()?;
        let failures = self
            .verdict
            .failures
            .iter()
            .map(|f| parse_failure(sit, f))
            .collect::<Result<Vec<_>>>()?;
        let unresolved = self
            .verdict
            .unresolved
            .iter()
            .map(|f| parse_failure(sit, f))
            .collect::<Result<Vec<_>>>()?;
        let transcript = Transcript {
            records,
            verdict: DialogueVerdict::parse(&self.verdict.status)?,
            failures,
            unresolved,
        };
        Ok((model, config, transcript))
    }
}

/// Checks a transcript against a situation: every answer agrees with the
/// situation's relations (and with the named perspective, when there is one),
/// and re-running the dialogue on the recorded answers asks exactly the
/// recorded queries and reaches the recorded verdict.
pub fn replay_transcript(sit: &DecisionSituation, doc: &TranscriptDoc) -> bool {
    let Ok((model, config, transcript)) = doc.resolve(sit) else {
        return false;
    };
    if config.budget == 0 {
        return false;
    }
    let consistent = transcript.records.iter().all(|r| {
        let sound = if r.answer {
            r.query.yes_is_sound(sit)
        } else {
            r.query.no_is_sound(sit)
        };
        sound && matches_perspective(sit, r)
    });
    if !consistent {
        return false;
    }
    let mut source = Recorded::new(&transcript.records);
    let replayed = drive(sit, &model, &config, &mut source);
    !source.mismatch()
        && source.consumed() == transcript.records.len()
        && replayed == DialogueState::Done(transcript)
}

fn matches_perspective(sit: &DecisionSituation, record: &QueryAnswer) -> bool {
    let (Some(name), Query::Trump(a, b)) = (&record.perspective, record.query) else {
        return true;
    };
    match sit.perspectives() {
        Some(perspectives) => perspectives
            .iter()
            .find(|(p, _)| p == name)
            .is_some_and(|(_, rel)| rel.contains(a, b) == record.answer),
        None => false,
    }
}
