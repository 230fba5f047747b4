//! Request and response bodies.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use dj_core::dialogue::{FailureDoc, RecordDoc, TranscriptDoc};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    /// An instance document, or the name of a bundled fixture.
    pub instance: Option<Value>,
    pub fixture: Option<String>,
    pub model: Value,
    /// Argument identifiers; all arguments when absent.
    pub gamma: Option<Vec<String>>,
    pub oracle: OracleSpec,
    #[serde(default = "one")]
    pub budget: u32,
    /// A check report for `gamma`, cited by the session report.
    pub certificate: Option<Value>,
}

fn one() -> u32 {
    1
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum OracleSpec {
    Simulated {
        policy: String,
        #[serde(default)]
        seed: u64,
        start: Option<String>,
    },
    /// Human answers are taken as stable unless declared otherwise.
    Human {
        #[serde(default = "yes")]
        stable: bool,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PostAnswer {
    pub query_id: usize,
    pub answer: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct QueryView {
    pub id: usize,
    pub kind: String,
    pub pair: (String, String),
    pub question: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum StateView {
    Running { query: QueryView },
    Done { verdict: String },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Created {
    pub id: String,
    pub state: StateView,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Conclusion {
    /// The judgment concluded from the valid verdict and the certificate.
    pub judgment: Vec<String>,
    pub certificate_digest: String,
    pub j: Option<usize>,
    pub k: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Report {
    pub id: String,
    pub state: StateView,
    pub records: Vec<RecordDoc>,
    pub transcript: Option<TranscriptDoc>,
    pub unresolved: Vec<FailureDoc>,
    pub conclusion: Option<Conclusion>,
    pub certificate_error: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: ErrorDetail,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorDetail {
    pub kind: String,
    pub message: String,
}
