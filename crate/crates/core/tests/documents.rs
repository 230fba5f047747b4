use dj_core::agent::{Agent, Policy};
use dj_core::dialogue::{replay_transcript, run_validation_dialogue};
use dj_core::fixtures;
use dj_core::io::{
    instance_digest, parse_instance, parse_model_doc, serialize_instance, serialize_model_doc,
};
use dj_core::report::verify_certificate;
use dj_core::{CheckReportDoc, DialogueConfig, Model, TranscriptDoc};

#[test]
fn fixtures_are_canonical() {
    for (name, text) in fixtures::ALL {
        let sit = parse_instance(text).unwrap();
        assert_eq!(serialize_instance(&sit), *text, "{name}");
    }
    let doc = parse_model_doc(fixtures::BUDGET_MODEL).unwrap();
    assert_eq!(serialize_model_doc(&doc), fixtures::BUDGET_MODEL);
}

#[test]
fn canonical_form_is_a_fixed_point() {
    let messy = r#"{"relations": {"perspectives": {"q": [["b","a"]], "p": [["b","a"]]}, "mode": "perspectives"},
        "support": [["b","u"],["a","t"]], "arguments": ["b","a"], "propositions": ["u","t"],
        "format": "dj-situation/1"}"#;
    let once = serialize_instance(&parse_instance(messy).unwrap());
    let twice = serialize_instance(&parse_instance(&once).unwrap());
    assert_eq!(once, twice);
    assert!(once.find("\"propositions\"") < once.find("\"arguments\""));
    assert!(once.contains(r#""arguments": ["a", "b"]"#), "{once}");
}

#[test]
fn digest_ignores_formatting() {
    let sit = fixtures::weather();
    let compact: serde_json::Value = serde_json::from_str(fixtures::WEATHER).unwrap();
    let reparsed = parse_instance(&compact.to_string()).unwrap();
    assert_eq!(instance_digest(&sit), instance_digest(&reparsed));
    assert_ne!(instance_digest(&sit), instance_digest(&fixtures::budget()));
}

#[test]
fn direct_document_with_stray_ambivalence_rejected() {
    let text = r#"{"format": "dj-situation/1", "propositions": ["t"], "arguments": ["a", "b"],
        "support": [["a", "t"]],
        "relations": {"mode": "direct", "trumps_exists": [], "ambivalent": [["b", "a"]]}}"#;
    assert!(parse_instance(text).is_err());
}

#[test]
fn certificate_round_trip_and_tamper() {
    let sit = fixtures::budget();
    let gamma = sit.all_args();
    let doc = CheckReportDoc::compute(&sit, &gamma);
    let parsed = CheckReportDoc::parse(&doc.to_json()).unwrap();
    verify_certificate(&sit, &gamma, &parsed).unwrap();

    let mut forged = parsed.clone();
    forged.j = Some(1);
    assert!(verify_certificate(&sit, &gamma, &forged).is_err());
    assert!(verify_certificate(&fixtures::weather(), &fixtures::weather().all_args(), &parsed).is_err());
}

#[test]
fn transcript_round_trip() {
    let sit = fixtures::budget();
    let model = Model::from_doc(&sit, &fixtures::budget_model_doc()).unwrap();
    let mut agent = Agent::new(sit.clone(), Policy::Cyclic, None).unwrap();
    let t = run_validation_dialogue(&mut agent, &model, &sit.all_args(), 2).unwrap();
    let config = DialogueConfig {
        gamma: sit.all_args(),
        budget: 2,
        stable: false,
    };
    let doc = TranscriptDoc::new(&sit, &model, &config, &t);
    let text = doc.to_json();
    let parsed = TranscriptDoc::parse(&text).unwrap();
    assert_eq!(parsed, doc);
    assert_eq!(parsed.to_json(), text);
    assert!(replay_transcript(&sit, &parsed));
}
