//! Canonical JSON documents: situations (`dj-situation/1`), models
//! (`dj-model/1`) and dialogue transcripts (`dj-transcript/1`).
//!
//! Serializers emit keys in a fixed order and sort every identifier list, so
//! `serialize(parse(x))` is the canonical form of `x`.

use std::fmt::{self, Write as _};

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{CoreError, Result};
use crate::situation::{DecisionSituation, DraftRelations, Pair, SituationDraft};

pub const SITUATION_FORMAT: &str = "dj-situation/1";
pub const MODEL_FORMAT: &str = "dj-model/1";
pub const TRANSCRIPT_FORMAT: &str = "dj-transcript/1";

#[derive(Deserialize)]
struct FormatTag {
    format: Option<String>,
}

pub(crate) fn check_format(text: &str, expected: &str) -> Result<()> {
    let tag: FormatTag = serde_json::from_str(text).map_err(|e| malformed(expected, &e))?;
    match tag.format.as_deref() {
        Some(f) if f == expected => Ok(()),
        Some(f) => Err(CoreError::Format(format!(
            "unknown format \"{f}\" (expected \"{expected}\")"
        ))),
        None => Err(CoreError::Format(format!(
            "missing \"format\" tag (expected \"{expected}\")"
        ))),
    }
}

pub(crate) fn malformed(kind: &str, err: &serde_json::Error) -> CoreError {
    CoreError::Format(format!(
        "malformed {kind} document at line {} column {}: {err}",
        err.line(),
        err.column()
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    #[allow(dead_code)]
    format: String,
    propositions: Vec<String>,
    arguments: Vec<String>,
    support: Vec<Pair>,
    relations: RelationsDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationsDoc {
    mode: Mode,
    #[serde(default, deserialize_with = "ordered_map")]
    perspectives: Option<Vec<(String, Vec<Pair>)>>,
    trumps_exists: Option<Vec<Pair>>,
    ambivalent: Option<Vec<Pair>>,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Perspectives,
    Direct,
}

/// Reads a JSON object as an ordered list of entries so duplicate keys survive
/// to validation.
type Entries = Vec<(String, Vec<Pair>)>;

fn ordered_map<'de, D>(deserializer: D) -> std::result::Result<Option<Entries>, D::Error>
where
    D: Deserializer<'de>,
{
    struct EntriesVisitor;

    impl<'de> Visitor<'de> for EntriesVisitor {
        type Value = Vec<(String, Vec<Pair>)>;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an object mapping perspective ids to trump pairs")
        }

        fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Self::Value, A::Error> {
            let mut out = Vec::new();
            while let Some((k, v)) = map.next_entry::<String, Vec<Pair>>()? {
                out.push((k, v));
            }
            Ok(out)
        }
    }

    deserializer.deserialize_map(EntriesVisitor).map(Some)
}

/// Parses an instance document into a draft without validating it.
pub fn parse_instance_draft(text: &str) -> Result<SituationDraft> {
    check_format(text, SITUATION_FORMAT)?;
    let doc: InstanceDoc =
        serde_json::from_str(text).map_err(|e| malformed("situation", &e))?;
    let relations = match doc.relations.mode {
        Mode::Perspectives => {
            if doc.relations.trumps_exists.is_some() || doc.relations.ambivalent.is_some() {
                return Err(CoreError::Format(
                    "mode \"perspectives\" does not take trumps_exists/ambivalent".into(),
                ));
            }
            DraftRelations::Perspectives(doc.relations.perspectives.ok_or_else(|| {
                CoreError::Format("mode \"perspectives\" requires \"perspectives\"".into())
            })?)
        }
        Mode::Direct => {
            if doc.relations.perspectives.is_some() {
                return Err(CoreError::Format(
                    "mode \"direct\" does not take \"perspectives\"".into(),
                ));
            }
            DraftRelations::Direct {
                trumps_exists: doc.relations.trumps_exists.ok_or_else(|| {
                    CoreError::Format("mode \"direct\" requires \"trumps_exists\"".into())
                })?,
                ambivalent: doc.relations.ambivalent.unwrap_or_default(),
            }
        }
    };
    Ok(SituationDraft {
        propositions: doc.propositions,
        arguments: doc.arguments,
        support: doc.support,
        relations,
    })
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<DecisionSituation> {
    DecisionSituation::from_draft(&parse_instance_draft(text)?)
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn write_ids(out: &mut String, ids: &[String]) {
    let items: Vec<String> = ids.iter().map(|s| json_str(s)).collect();
    let _ = write!(out, "[{}]", items.join(", "));
}

fn write_pairs(out: &mut String, pairs: &[Pair], indent: &str) {
    if pairs.is_empty() {
        out.push_str("[]");
        return;
    }
    out.push_str("[\n");
    for (i, (a, b)) in pairs.iter().enumerate() {
        let sep = if i + 1 < pairs.len() { "," } else { "" };
        let _ = writeln!(out, "{indent}  [{}, {}]{sep}", json_str(a), json_str(b));
    }
    let _ = write!(out, "{indent}]");
}

/// Canonical text of a situation.
pub fn serialize_instance(sit: &DecisionSituation) -> String {
    let draft = sit.to_draft();
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"format\": {},", json_str(SITUATION_FORMAT));
    out.push_str("  \"propositions\": ");
    write_ids(&mut out, &draft.propositions);
    out.push_str(",\n  \"arguments\": ");
    write_ids(&mut out, &draft.arguments);
    out.push_str(",\n  \"support\": ");
    write_pairs(&mut out, &draft.support, "  ");
    out.push_str(",\n  \"relations\": {\n");
    match &draft.relations {
        DraftRelations::Perspectives(ps) => {
            out.push_str("    \"mode\": \"perspectives\",\n    \"perspectives\": {\n");
            for (i, (name, pairs)) in ps.iter().enumerate() {
                let _ = write!(out, "      {}: ", json_str(name));
                write_pairs(&mut out, pairs, "      ");
                out.push_str(if i + 1 < ps.len() { ",\n" } else { "\n" });
            }
            out.push_str("    }\n");
        }
        DraftRelations::Direct {
            trumps_exists,
            ambivalent,
        } => {
            out.push_str("    \"mode\": \"direct\",\n    \"trumps_exists\": ");
            write_pairs(&mut out, trumps_exists, "    ");
            out.push_str(",\n    \"ambivalent\": ");
            write_pairs(&mut out, ambivalent, "    ");
            out.push('\n');
        }
    }
    out.push_str("  }\n}\n");
    out
}

/// Hex SHA-256 of the canonical serialization; identifies an instance in certificates.
pub fn instance_digest(sit: &DecisionSituation) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(serialize_instance(sit).as_bytes()))
}

/// String-level model document.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub support: Vec<Pair>,
    pub counters: Vec<Pair>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TaggedModelDoc {
    #[allow(dead_code)]
    format: String,
    support: Vec<Pair>,
    counters: Vec<Pair>,
}

pub fn parse_model_doc(text: &str) -> Result<ModelDoc> {
    check_format(text, MODEL_FORMAT)?;
    let doc: TaggedModelDoc = serde_json::from_str(text).map_err(|e| malformed("model", &e))?;
    Ok(ModelDoc {
        support: doc.support,
        counters: doc.counters,
    })
}

pub fn serialize_model_doc(doc: &ModelDoc) -> String {
    let mut support = doc.support.clone();
    support.sort();
    support.dedup();
    let mut counters = doc.counters.clone();
    counters.sort();
    counters.dedup();
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"format\": {},", json_str(MODEL_FORMAT));
    out.push_str("  \"support\": ");
    write_pairs(&mut out, &support, "  ");
    out.push_str(",\n  \"counters\": ");
    write_pairs(&mut out, &counters, "  ");
    out.push_str("\n}\n");
    out
}
