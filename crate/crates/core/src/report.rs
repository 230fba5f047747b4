//! Structured documents for condition checks; a passing check report serves
//! as the CAC certificate a session report can cite.

use serde::{Deserialize, Serialize};

use crate::conditions::{check_cac, global_conditions, ConditionReport, GlobalReport};
use crate::error::{CoreError, Result};
use crate::ids::ArgSet;
use crate::io::{check_format, instance_digest, malformed};
use crate::situation::DecisionSituation;

pub const CHECK_REPORT_FORMAT: &str = "dj-check-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReportDoc {
    pub format: String,
    /// SHA-256 of the canonical instance document.
    pub instance_digest: String,
    pub gamma: Vec<String>,
    pub cac: bool,
    /// Smallest width bound; `None` when a defense search hit its cap.
    pub j: Option<usize>,
    /// Smallest length bound; `None` when gamma has a cycle.
    pub k: Option<usize>,
    pub conditions: ConditionsDoc,
    pub global: GlobalDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionsDoc {
    pub reinstatement: PairsVerdict,
    pub answerability: PairsVerdict,
    pub width: WidthDoc,
    pub length: LengthDoc,
    pub covering: ArgsVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairsVerdict {
    pub holds: bool,
    pub witnesses: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgsVerdict {
    pub holds: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthDoc {
    pub j: Option<usize>,
    pub cap_exceeded: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthDoc {
    pub k: Option<usize>,
    pub cycle: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalDoc {
    pub answerability: PairsVerdict,
    pub reinstatement: TriplesVerdict,
    pub max_trumper_indegree: usize,
    pub acyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriplesVerdict {
    pub holds: bool,
    pub witnesses: Vec<(String, String, String)>,
}

fn pairs(sit: &DecisionSituation, pairs: &[(crate::Arg, crate::Arg)]) -> PairsVerdict {
    PairsVerdict {
        holds: pairs.is_empty(),
        witnesses: pairs
            .iter()
            .map(|&(a, b)| (sit.arg_name(a).to_string(), sit.arg_name(b).to_string()))
            .collect(),
    }
}

fn args(sit: &DecisionSituation, args: &[crate::Arg]) -> Vec<String> {
    args.iter().map(|&a| sit.arg_name(a).to_string()).collect()
}

impl CheckReportDoc {
    pub fn new(sit: &DecisionSituation, report: &ConditionReport, global: &GlobalReport) -> Self {
        CheckReportDoc {
            format: CHECK_REPORT_FORMAT.to_string(),
            instance_digest: instance_digest(sit),
            gamma: sit.arg_set_names(&report.gamma),
            cac: report.is_cac(),
            j: report.width.j,
            k: report.length,
            conditions: ConditionsDoc {
                reinstatement: pairs(sit, &report.reinstatement.witnesses),
                answerability: pairs(sit, &report.answerability.witnesses),
                width: WidthDoc {
                    j: report.width.j,
                    cap_exceeded: args(sit, &report.width.cap_exceeded),
                },
                length: LengthDoc {
                    k: report.length,
                    cycle: pairs(sit, &report.length_cycle).witnesses,
                },
                covering: ArgsVerdict {
                    holds: report.covering.holds(),
                    witnesses: args(sit, &report.covering.witnesses),
                },
            },
            global: GlobalDoc {
                answerability: pairs(sit, &global.answerability.witnesses),
                reinstatement: TriplesVerdict {
                    holds: global.reinstatement.holds(),
                    witnesses: global
                        .reinstatement
                        .witnesses
                        .iter()
                        .map(|&(a, b, c)| {
                            (
                                sit.arg_name(a).to_string(),
                                sit.arg_name(b).to_string(),
                                sit.arg_name(c).to_string(),
                            )
                        })
                        .collect(),
                },
                max_trumper_indegree: global.max_trumper_indegree,
                acyclic: global.acyclic,
            },
        }
    }

    /// Checks `gamma` and builds the report.
    pub fn compute(sit: &DecisionSituation, gamma: &ArgSet) -> Self {
        CheckReportDoc::new(sit, &check_cac(sit, gamma), &global_conditions(sit))
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn parse(text: &str) -> Result<Self> {
        check_format(text, CHECK_REPORT_FORMAT)?;
        serde_json::from_str(text).map_err(|e| malformed("check report", &e))
    }
}

/// Confirms that `certificate` is a passing check of `gamma` on this exact
/// situation by recomputing it.
pub fn verify_certificate(
    sit: &DecisionSituation,
    gamma: &ArgSet,
    certificate: &CheckReportDoc,
) -> Result<()> {
    let reject = |why: &str| Err(CoreError::Parameter(format!("certificate rejected: {why}")));
    if certificate.instance_digest != instance_digest(sit) {
        return reject("instance digest differs");
    }
    if certificate.gamma != sit.arg_set_names(gamma) {
        return reject("gamma differs");
    }
    if !certificate.cac {
        return reject("gamma is not CAC according to the certificate");
    }
    if CheckReportDoc::compute(sit, gamma) != *certificate {
        return reject("recomputed check does not match");
    }
    Ok(())
}
