//! Deliberated-judgment engine.
//!
//! A [`DecisionSituation`] holds arguments, propositions, a support relation and
//! trump relations (one per perspective, or given directly). From it the crate
//! derives decisive arguments and the deliberated judgment, checks the
//! sufficiency conditions over argument subsets, validates argumentative
//! models, simulates agents answering elicitation queries, runs validation
//! dialogues, generates random instances and fuzzes the theorem statements.

pub mod agent;
pub mod conditions;
pub mod dialogue;
pub mod error;
pub mod fixtures;
pub mod fuzz;
pub mod generate;
pub mod ids;
pub mod io;
pub mod model;
pub mod relation;
pub mod report;
pub mod situation;

#[cfg(test)]
mod testing;

pub use error::{CoreError, Result};
pub use ids::{Arg, ArgSet, Prop, PropSet};
pub use relation::{Relation, Support};
pub use situation::{DecisionSituation, SituationDraft, Status};
pub use agent::{Agent, Policy, Query, QueryAnswer};
pub use conditions::{check_cac, ConditionReport, GammaAnalysis, Verdict};
pub use dialogue::{DialogueConfig, DialogueState, DialogueVerdict, Transcript, TranscriptDoc};
pub use generate::{GenParams, Profile};
pub use io::ModelDoc;
pub use model::{Failure, Model, ValidationVerdict};
pub use report::CheckReportDoc;
