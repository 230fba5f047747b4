use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use dj_core::agent::{Agent, Policy};
use dj_core::conditions::{check_cac, global_conditions, ConditionReport, GlobalReport};
use dj_core::dialogue::{run_validation_dialogue, TranscriptDoc};
use dj_core::fuzz::{fuzz_theorems, Check, FuzzConfig, ProfileMix};
use dj_core::io::{parse_instance, parse_model_doc, serialize_model_doc};
use dj_core::model::{
    extract_cac_subset, gamma_operational_validity, model_claims, synthesize_model, Extraction,
};
use dj_core::report::CheckReportDoc;
use dj_core::{ArgSet, DecisionSituation, DialogueConfig, DialogueVerdict, Failure, Model};
use dj_service::ServiceConfig;

use crate::output::{set, verdict, yes_no, Text};
use crate::{AgentKind, Cli, Command, GammaArgs};

/// Runs a subcommand; `Ok(false)` means a failing or invalid result.
pub fn run(cli: Cli) -> Result<bool> {
    let json = cli.json;
    match cli.command {
        Command::Judge { file } => judge(&load(&file)?, json),
        Command::Check { file, gamma } => {
            let sit = load(&file)?;
            let gamma = resolve_gamma(&sit, &gamma)?;
            check(&sit, &gamma, json)
        }
        Command::Validate { file, model, gamma } => {
            let sit = load(&file)?;
            let model = load_model(&sit, &model)?;
            let gamma = resolve_gamma(&sit, &gamma)?;
            validate(&sit, &model, &gamma, json)
        }
        Command::Synth { file } => synth(&load(&file)?),
        Command::Extract { file, set } => {
            let sit = load(&file)?;
            let chosen = match set {
                Some(names) => sit.arg_set(&names)?,
                None => sit.all_args(),
            };
            extract(&sit, &chosen, json)
        }
        Command::Fuzz {
            count,
            seed,
            profile,
            checks,
            output,
        } => {
            let mut config = FuzzConfig::new(count, seed);
            config.profiles = ProfileMix::parse(&profile)?;
            if let Some(names) = checks {
                config.checks = names
                    .iter()
                    .map(|n| Check::parse(n))
                    .collect::<dj_core::Result<_>>()?;
            }
            fuzz(&config, output.as_deref(), json)
        }
        Command::Dialogue {
            file,
            model,
            agent,
            agent_seed,
            start,
            budget,
            gamma,
        } => {
            let sit = load(&file)?;
            let model = load_model(&sit, &model)?;
            let gamma = resolve_gamma(&sit, &gamma)?;
            let policy = match agent {
                AgentKind::Static => Policy::Static,
                AgentKind::Cyclic => Policy::Cyclic,
                AgentKind::Drift => Policy::SeededDrift { seed: agent_seed },
            };
            dialogue(&sit, &model, &gamma, policy, start.as_deref(), budget, json)
        }
        Command::Serve {
            port,
            cors_origins,
            journal,
        } => {
            if let Some(dir) = &journal {
                fs::create_dir_all(dir)
                    .with_context(|| format!("creating journal directory {}", dir.display()))?;
            }
            let config = ServiceConfig {
                cors_origins,
                journal_dir: journal,
            };
            let addr = std::net::SocketAddr::from(([127, 0, 0, 1], port));
            let runtime = tokio::runtime::Runtime::new()?;
            eprintln!("listening on http://{addr}");
            runtime.block_on(dj_service::serve(addr, config))?;
            Ok(true)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<DecisionSituation> {
    parse_instance(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_model(sit: &DecisionSituation, path: &Path) -> Result<Model> {
    let doc = parse_model_doc(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Model::from_doc(sit, &doc).with_context(|| format!("resolving {}", path.display()))
}

fn resolve_gamma(sit: &DecisionSituation, args: &GammaArgs) -> Result<ArgSet> {
    if let Some(names) = &args.gamma {
        return Ok(sit.arg_set(names)?);
    }
    if let Some(path) = &args.gamma_file {
        let text = read(path)?;
        let names: Vec<String> = match serde_json::from_str(&text) {
            Ok(names) => names,
            Err(_) => text
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect(),
        };
        return Ok(sit.arg_set(&names)?);
    }
    Ok(sit.all_args())
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON value serializes"));
}

fn arg_pairs(sit: &DecisionSituation, pairs: &[(dj_core::Arg, dj_core::Arg)]) -> String {
    pairs
        .iter()
        .map(|&(a, b)| format!("({}, {})", sit.arg_name(a), sit.arg_name(b)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn with_witnesses(holds: bool, witnesses: String) -> String {
    if holds {
        verdict(true).to_string()
    } else {
        format!("{} {witnesses}", verdict(false))
    }
}

fn judge(sit: &DecisionSituation, json: bool) -> Result<bool> {
    let judgment = sit.prop_set_names(&sit.deliberated_judgment());
    let decisive = sit.arg_set_names(sit.decisive());
    let statuses: Vec<(String, String)> = sit
        .props()
        .map(|p| (sit.prop_name(p).to_string(), sit.status(p).to_string()))
        .collect();
    if json {
        print_json(&json!({
            "judgment": judgment,
            "decisive": decisive,
            "statuses": statuses.iter().map(|(p, s)| (p.clone(), json!(s))).collect::<serde_json::Map<String, Value>>(),
            "clear_cut": sit.is_clear_cut(),
        }));
    } else {
        let mut out = Text::new();
        out.line("T_i", set(&judgment));
        for (p, status) in &statuses {
            out.line(format!("status {p}"), status.as_str());
        }
        out.line("decisive", set(&decisive));
        out.line("clear-cut", yes_no(sit.is_clear_cut()));
        out.print();
    }
    Ok(true)
}

fn condition_lines(out: &mut Text, sit: &DecisionSituation, report: &ConditionReport, global: &GlobalReport) {
    out.line("gamma", set(&sit.arg_set_names(&report.gamma)));
    out.line("cac", verdict(report.is_cac()));
    out.line("j", report.width.j.map_or("unbounded".into(), |j| j.to_string()));
    out.line("k", report.length.map_or("unbounded".into(), |k| k.to_string()));
    out.line(
        "reinstatement",
        with_witnesses(report.reinstatement.holds(), arg_pairs(sit, &report.reinstatement.witnesses)),
    );
    out.line(
        "answerability",
        with_witnesses(report.answerability.holds(), arg_pairs(sit, &report.answerability.witnesses)),
    );
    let width = if report.width.cap_exceeded.is_empty() {
        verdict(true).to_string()
    } else {
        let names: Vec<&str> = report.width.cap_exceeded.iter().map(|&a| sit.arg_name(a)).collect();
        format!("pass defense search capped for {}", set(&names))
    };
    out.line("width", width);
    out.line(
        "length",
        with_witnesses(report.length.is_some(), arg_pairs(sit, &report.length_cycle)),
    );
    let uncovered: Vec<&str> = report.covering.witnesses.iter().map(|&a| sit.arg_name(a)).collect();
    out.line("covering", with_witnesses(report.covering.holds(), set(&uncovered)));
    out.line("global-answerability", verdict(global.answerability.holds()));
    out.line("global-reinstatement", verdict(global.reinstatement.holds()));
    out.line("max-trumper-indegree", global.max_trumper_indegree.to_string());
    out.line("acyclic", yes_no(global.acyclic));
}

fn check(sit: &DecisionSituation, gamma: &ArgSet, json: bool) -> Result<bool> {
    let report = check_cac(sit, gamma);
    let global = global_conditions(sit);
    if json {
        print!("{}", CheckReportDoc::new(sit, &report, &global).to_json());
    } else {
        let mut out = Text::new();
        condition_lines(&mut out, sit, &report, &global);
        out.print();
    }
    Ok(report.is_cac())
}

fn failure_json(sit: &DecisionSituation, f: &Failure) -> Value {
    let (a, b) = f.subjects(sit);
    json!({"kind": f.kind(), "pair": [a, b]})
}

fn validate(sit: &DecisionSituation, model: &Model, gamma: &ArgSet, json: bool) -> Result<bool> {
    let v = gamma_operational_validity(sit, gamma, model);
    let claims = sit.prop_set_names(&model_claims(sit, model));
    let outside: Vec<Value> = v
        .outside_counters
        .iter()
        .map(|&(c, s)| json!([sit.arg_name(c), sit.arg_name(s)]))
        .collect();
    if json {
        print_json(&json!({
            "gamma": sit.arg_set_names(gamma),
            "validity": if v.is_valid() { "valid" } else { "invalid" },
            "claims": claims,
            "failures": v.failures.iter().map(|f| failure_json(sit, f)).collect::<Vec<_>>(),
            "outside_counters": outside,
        }));
    } else {
        let mut out = Text::new();
        out.line("gamma", set(&sit.arg_set_names(gamma)));
        out.line("validity", if v.is_valid() { "valid" } else { "invalid" });
        out.line("claims", set(&claims));
        for f in &v.failures {
            out.line("failure", f.describe(sit));
        }
        for &(c, s) in &v.outside_counters {
            out.line("outside-counter", format!("({}, {})", sit.arg_name(c), sit.arg_name(s)));
        }
        out.print();
    }
    Ok(v.is_valid())
}

fn synth(sit: &DecisionSituation) -> Result<bool> {
    match synthesize_model(sit) {
        Ok(model) => {
            print!("{}", serialize_model_doc(&model.to_doc(sit)));
            Ok(true)
        }
        Err(e @ dj_core::CoreError::NotClearCut(_)) => {
            eprintln!("{e}");
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

fn extract(sit: &DecisionSituation, chosen: &ArgSet, json: bool) -> Result<bool> {
    match extract_cac_subset(sit, chosen) {
        Extraction::Built { report, .. } => {
            let global = global_conditions(sit);
            if json {
                print!("{}", CheckReportDoc::new(sit, &report, &global).to_json());
            } else {
                let mut out = Text::new();
                out.line("efficient", "yes");
                condition_lines(&mut out, sit, &report, &global);
                out.print();
            }
            Ok(report.is_cac())
        }
        Extraction::NotEfficient { witnesses } => {
            let names: Vec<&str> = witnesses.iter().map(|&p| sit.prop_name(p)).collect();
            if json {
                print_json(&json!({"efficient": false, "witnesses": names}));
            } else {
                let mut out = Text::new();
                out.line("efficient", "no");
                out.line("witnesses", set(&names));
                out.print();
            }
            Ok(false)
        }
    }
}

fn fuzz(config: &FuzzConfig, output: Option<&Path>, json: bool) -> Result<bool> {
    let report = fuzz_theorems(config);
    if let Some(path) = output {
        fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    if json {
        print!("{}", report.to_json());
    } else {
        let c = &report.comparable;
        let mut out = Text::new();
        out.line("count", c.count.to_string());
        out.line("seed", c.seed.to_string());
        out.line("profile", c.profile);
        out.line("result", verdict(report.passed()));
        for (profile, n) in &c.instances_by_profile {
            out.line(format!("instances {profile}"), n.to_string());
        }
        if !c.generation_failures.is_empty() {
            out.line("generation-failures", c.generation_failures.len().to_string());
        }
        for check in &c.checks {
            let rate = c.hit_rates.get(check).copied().unwrap_or_default();
            let violations = c.violation_counts.get(check).copied().unwrap_or(0);
            out.line(
                format!("check {check}"),
                format!(
                    "{} violations={violations} evaluated={} hypothesis-held={}",
                    verdict(violations == 0),
                    rate.evaluated,
                    rate.hypothesis_held
                ),
            );
        }
        out.line("elapsed-ms", report.metadata.elapsed_ms.to_string());
        out.print();
    }
    Ok(report.passed())
}

fn dialogue(
    sit: &DecisionSituation,
    model: &Model,
    gamma: &ArgSet,
    policy: Policy,
    start: Option<&str>,
    budget: u32,
    json: bool,
) -> Result<bool> {
    if budget == 0 {
        bail!("--budget must be at least 1");
    }
    let mut agent = Agent::new(sit.clone(), policy, start)?;
    let transcript = run_validation_dialogue(&mut agent, model, gamma, budget)?;
    let config = DialogueConfig {
        gamma: gamma.clone(),
        budget,
        stable: policy == Policy::Static,
    };
    let doc = TranscriptDoc::new(sit, model, &config, &transcript);
    if json {
        print!("{}", doc.to_json());
    } else {
        let mut out = Text::new();
        for r in &doc.records {
            let perspective = r.perspective.as_deref().map(|p| format!(" [{p}]")).unwrap_or_default();
            out.line(
                "query",
                format!("{} ({}, {}) -> {}{perspective}", r.kind, r.pair.0, r.pair.1, r.answer),
            );
        }
        out.line("verdict", transcript.verdict.as_str());
        for f in &transcript.failures {
            out.line("failure", f.describe(sit));
        }
        for f in &transcript.unresolved {
            out.line("unresolved", f.describe(sit));
        }
        out.line("queries", transcript.records.len().to_string());
        out.print();
    }
    Ok(transcript.verdict == DialogueVerdict::Valid)
}
