//! Session state: a dialogue driven either by a simulated agent at creation
//! time or by answers posted one at a time.

use dj_core::agent::{Agent, Policy, Query, QueryAnswer};
use dj_core::dialogue::{drive, DialogueConfig, DialogueState, Recorded, TranscriptDoc};
use dj_core::model::{model_claims, Model};
use dj_core::report::{verify_certificate, CheckReportDoc};
use dj_core::{DecisionSituation, DialogueVerdict, Transcript};

#[derive(Clone, Debug)]
pub enum Oracle {
    Simulated {
        policy: Policy,
        start: Option<String>,
    },
    Human,
}

#[derive(Debug)]
pub struct Session {
    pub id: String,
    pub sit: DecisionSituation,
    pub model: Model,
    pub config: DialogueConfig,
    pub oracle: Oracle,
    pub certificate: Option<CheckReportDoc>,
    answers: Vec<QueryAnswer>,
    state: DialogueState,
}

/// Why an answer was not accepted.
#[derive(Debug, PartialEq, Eq)]
pub enum AnswerError {
    NotHuman,
    Finished,
    Stale { expected: usize },
}

impl Session {
    pub fn new(
        id: String,
        sit: DecisionSituation,
        model: Model,
        config: DialogueConfig,
        oracle: Oracle,
        certificate: Option<CheckReportDoc>,
    ) -> dj_core::Result<Self> {
        let state = match &oracle {
            Oracle::Simulated { policy, start } => {
                let mut agent = Agent::new(sit.clone(), *policy, start.as_deref())?;
                drive(&sit, &model, &config, &mut agent)
            }
            Oracle::Human => drive(&sit, &model, &config, &mut Recorded::new(&[])),
        };
        Ok(Session {
            id,
            sit,
            model,
            config,
            oracle,
            certificate,
            answers: Vec::new(),
            state,
        })
    }

    pub fn state(&self) -> &DialogueState {
        &self.state
    }

    /// The pending query and its id (its position in the transcript).
    pub fn pending(&self) -> Option<(usize, Query)> {
        match &self.state {
            DialogueState::Pending { query, records } => Some((records.len(), *query)),
            DialogueState::Done(_) => None,
        }
    }

    pub fn records(&self) -> &[QueryAnswer] {
        match &self.state {
            DialogueState::Pending { records, .. } => records,
            DialogueState::Done(t) => &t.records,
        }
    }

    pub fn transcript(&self) -> Option<&Transcript> {
        match &self.state {
            DialogueState::Done(t) => Some(t),
            DialogueState::Pending { .. } => None,
        }
    }

    pub fn answer(&mut self, query_id: usize, yes: bool) -> Result<(), AnswerError> {
        if !matches!(self.oracle, Oracle::Human) {
            return Err(AnswerError::NotHuman);
        }
        let (expected, query) = self.pending().ok_or(AnswerError::Finished)?;
        if query_id != expected {
            return Err(AnswerError::Stale { expected });
        }
        self.answers.push(QueryAnswer {
            query,
            answer: yes,
            perspective: None,
        });
        self.state = drive(
            &self.sit,
            &self.model,
            &self.config,
            &mut Recorded::new(&self.answers),
        );
        Ok(())
    }

    pub fn transcript_doc(&self) -> Option<TranscriptDoc> {
        self.transcript()
            .map(|t| TranscriptDoc::new(&self.sit, &self.model, &self.config, t))
    }

    /// With a valid verdict and a certificate that re-verifies for this
    /// situation and gamma, the judgment equals the model's claims.
    pub fn conclusion(&self) -> Option<Result<Vec<String>, String>> {
        let certificate = self.certificate.as_ref()?;
        let transcript = self.transcript()?;
        if transcript.verdict != DialogueVerdict::Valid {
            return None;
        }
        Some(
            verify_certificate(&self.sit, &self.config.gamma, certificate)
                .map(|()| self.sit.prop_set_names(&model_claims(&self.sit, &self.model)))
                .map_err(|e| e.to_string()),
        )
    }
}
