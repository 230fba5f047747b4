//! Argumentative models: claimed supports and counter-arguments, their
//! validity, operational validity, and construction from efficient sets.

use std::collections::BTreeSet;

use crate::conditions::{check_cac, efficiency, ConditionReport};
use crate::error::{CoreError, Result};
use crate::ids::{Arg, ArgSet, Prop, PropSet};
use crate::io::ModelDoc;
use crate::situation::DecisionSituation;

/// Claimed supports `(s, t)` and counters `(s_cc, s_c)` ("`s_cc` counters `s_c`").
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub support_claims: BTreeSet<(Arg, Prop)>,
    pub counter_claims: BTreeSet<(Arg, Arg)>,
}

impl Model {
    pub fn new(
        support_claims: impl IntoIterator<Item = (Arg, Prop)>,
        counter_claims: impl IntoIterator<Item = (Arg, Arg)>,
    ) -> Result<Self> {
        let model = Model {
            support_claims: support_claims.into_iter().collect(),
            counter_claims: counter_claims.into_iter().collect(),
        };
        if let Some((a, _)) = model.counter_claims.iter().find(|(a, b)| a == b) {
            return Err(CoreError::InvalidModel(format!(
                "argument #{} counters itself",
                a.0
            )));
        }
        Ok(model)
    }

    pub fn from_doc(sit: &DecisionSituation, doc: &ModelDoc) -> Result<Self> {
        let mut support = Vec::new();
        for (s, t) in &doc.support {
            support.push((sit.arg(s)?, sit.prop(t)?));
        }
        let mut counters = Vec::new();
        for (a, b) in &doc.counters {
            if a == b {
                return Err(CoreError::InvalidModel(format!("{a} counters itself")));
            }
            counters.push((sit.arg(a)?, sit.arg(b)?));
        }
        Model::new(support, counters)
    }

    pub fn to_doc(&self, sit: &DecisionSituation) -> ModelDoc {
        ModelDoc {
            support: self
                .support_claims
                .iter()
                .map(|&(s, t)| (sit.arg_name(s).to_string(), sit.prop_name(t).to_string()))
                .collect(),
            counters: self
                .counter_claims
                .iter()
                .map(|&(a, b)| (sit.arg_name(a).to_string(), sit.arg_name(b).to_string()))
                .collect(),
        }
    }

    /// Arguments the model offers as counters of `s`, in identifier order.
    pub fn counters_of(&self, s: Arg) -> Vec<Arg> {
        self.counter_claims
            .iter()
            .filter(|(_, b)| *b == s)
            .map(|(a, _)| *a)
            .collect()
    }
}

/// `T_η`: the propositions the model claims are supported.
pub fn model_claims(sit: &DecisionSituation, model: &Model) -> PropSet {
    PropSet::from_iter_in(sit.n_props(), model.support_claims.iter().map(|&(_, t)| t))
}

/// The model's claims equal the deliberated judgment.
pub fn is_valid(sit: &DecisionSituation, model: &Model) -> bool {
    model_claims(sit, model) == sit.deliberated_judgment()
}

/// One violated obligation of operational validity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Failure {
    /// The model claims `arg` supports `prop`, but it does not.
    UnsupportedClaim { arg: Arg, prop: Prop },
    /// `trumper` trumps the claimed supporter in every perspective and the
    /// model offers no counter that trumps it.
    UncounteredTrumper { supporter: Arg, trumper: Arg },
    /// `prop` is not claimed, `supporter` supports it, and the model offers no
    /// counter that trumps `supporter`.
    MissingCounter { prop: Prop, supporter: Arg },
}

impl Failure {
    pub fn kind(&self) -> &'static str {
        match self {
            Failure::UnsupportedClaim { .. } => "unsupported-claim",
            Failure::UncounteredTrumper { .. } => "uncountered-trumper",
            Failure::MissingCounter { .. } => "missing-counter",
        }
    }

    /// Identifiers involved, in the order the kind names them.
    pub fn subjects(&self, sit: &DecisionSituation) -> (String, String) {
        match *self {
            Failure::UnsupportedClaim { arg, prop } => {
                (sit.arg_name(arg).into(), sit.prop_name(prop).into())
            }
            Failure::UncounteredTrumper { supporter, trumper } => {
                (sit.arg_name(supporter).into(), sit.arg_name(trumper).into())
            }
            Failure::MissingCounter { prop, supporter } => {
                (sit.prop_name(prop).into(), sit.arg_name(supporter).into())
            }
        }
    }

    pub fn describe(&self, sit: &DecisionSituation) -> String {
        let (a, b) = self.subjects(sit);
        format!("{} ({a}, {b})", self.kind())
    }

    /// Re-evaluates the failure against the situation's relations.
    pub fn holds(&self, sit: &DecisionSituation, model: &Model) -> bool {
        match *self {
            Failure::UnsupportedClaim { arg, prop } => {
                model.support_claims.contains(&(arg, prop)) && !sit.supports(arg, prop)
            }
            Failure::UncounteredTrumper { supporter, trumper } => {
                sit.always_trumps().contains(trumper, supporter)
                    && !has_effective_counter(sit, model, trumper)
            }
            Failure::MissingCounter { prop, supporter } => {
                !model_claims(sit, model).contains(prop)
                    && sit.supports(supporter, prop)
                    && !has_effective_counter(sit, model, supporter)
            }
        }
    }
}

fn has_effective_counter(sit: &DecisionSituation, model: &Model, target: Arg) -> bool {
    model
        .counters_of(target)
        .into_iter()
        .any(|c| sit.trumps().contains(c, target))
}

/// Outcome of an operational-validity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationVerdict {
    pub failures: Vec<Failure>,
    /// Counter claims `(s_cc, s_c)` that discharged an obligation although
    /// `s_cc` lies outside gamma.
    pub outside_counters: Vec<(Arg, Arg)>,
}

impl ValidationVerdict {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Operational validity with every argument in scope.
pub fn operational_validity(sit: &DecisionSituation, model: &Model) -> ValidationVerdict {
    gamma_operational_validity(sit, &sit.all_args(), model)
}

/// Operational validity with trumpers of claimed supporters and supporters of
/// unclaimed propositions restricted to gamma. Counter witnesses range over
/// all arguments.
pub fn gamma_operational_validity(
    sit: &DecisionSituation,
    gamma: &ArgSet,
    model: &Model,
) -> ValidationVerdict {
    let mut failures = Vec::new();
    let mut outside = BTreeSet::new();
    let mut discharge = |target: Arg, failures: &mut Vec<Failure>, failure: Failure| {
        let counters: Vec<Arg> = model
            .counters_of(target)
            .into_iter()
            .filter(|&c| sit.trumps().contains(c, target))
            .collect();
        match counters.first() {
            Some(&c) => {
                if !gamma.contains(c) {
                    outside.insert((c, target));
                }
            }
            None => failures.push(failure),
        }
    };

    for &(s, t) in &model.support_claims {
        if !sit.supports(s, t) {
            failures.push(Failure::UnsupportedClaim { arg: s, prop: t });
        }
        for c in sit.always_trumps().preimage(s).intersection(gamma).iter() {
            let failure = Failure::UncounteredTrumper {
                supporter: s,
                trumper: c,
            };
            if !failures.contains(&failure) {
                discharge(c, &mut failures, failure);
            }
        }
    }
    let claimed = model_claims(sit, model);
    for t in sit.props().filter(|&t| !claimed.contains(t)) {
        for s in sit.support().supporters(t).intersection(gamma).iter() {
            discharge(s, &mut failures, Failure::MissingCounter { prop: t, supporter: s });
        }
    }
    ValidationVerdict {
        failures,
        outside_counters: outside.into_iter().collect(),
    }
}

/// Builds a model from the clear-cut structure of the situation: the lowest
/// decisive supporter of each justifiable proposition, and for each supporter of
/// an untenable proposition the lowest decisive argument trumping it in every
/// perspective.
pub fn synthesize_model(sit: &DecisionSituation) -> Result<Model> {
    let report = sit.clear_cut();
    if !report.clear_cut {
        return Err(CoreError::NotClearCut(
            report
                .undecided()
                .map(|t| sit.prop_name(t).to_string())
                .collect(),
        ));
    }
    let (support, counters) = construction(sit, sit.decisive());
    Model::new(support, counters)
}

type Construction = (Vec<(Arg, Prop)>, Vec<(Arg, Arg)>);

/// The supports and counters chosen from the decisive members of `pool`.
/// Assumes every proposition is decided by `pool`.
fn construction(sit: &DecisionSituation, pool: &ArgSet) -> Construction {
    let dec = pool.intersection(sit.decisive());
    let mut support = Vec::new();
    let mut counters = Vec::new();
    let judgment = sit.deliberated_judgment();
    for t in sit.props() {
        let supporters = sit.support().supporters(t);
        if judgment.contains(t) {
            if let Some(s) = supporters.intersection(&dec).first() {
                support.push((s, t));
            }
        } else {
            for s in supporters.iter() {
                if let Some(c) = sit.always_trumps().preimage(s).intersection(&dec).first() {
                    counters.push((c, s));
                }
            }
        }
    }
    (support, counters)
}

/// Largest number of decisive arguments whose subsets the extraction searches
/// when the direct construction is not CAC.
pub const EXTRACTION_SEARCH_CAP: usize = 16;

/// Result of extracting a candidate CAC subset from a set of arguments.
#[derive(Clone, Debug)]
pub enum Extraction {
    /// The set is efficient; `gamma` is the extracted subset and `report`
    /// its condition check. When no CAC subset was found, `gamma` is the
    /// direct construction and `report` shows which conditions fail.
    Built {
        gamma: ArgSet,
        report: ConditionReport,
    },
    /// The set is not efficient; the offending propositions.
    NotEfficient { witnesses: Vec<Prop> },
}

/// Builds the subset of `set` made of the decisive supporters of justifiable
/// propositions and the decisive trumpers of supporters of untenable ones.
/// If that subset is not CAC, the subsets of the decisive members of `set`
/// are searched, smallest first, up to [`EXTRACTION_SEARCH_CAP`] members.
pub fn extract_cac_subset(sit: &DecisionSituation, set: &ArgSet) -> Extraction {
    let verdict = efficiency(sit, set);
    if !verdict.holds() {
        return Extraction::NotEfficient {
            witnesses: verdict.witnesses,
        };
    }
    let (support, counters) = construction(sit, set);
    let gamma = ArgSet::from_iter_in(
        sit.n_args(),
        support
            .iter()
            .map(|&(s, _)| s)
            .chain(counters.iter().map(|&(c, _)| c)),
    );
    let report = check_cac(sit, &gamma);
    if report.is_cac() {
        return Extraction::Built { gamma, report };
    }
    match search_decisive_subsets(sit, set) {
        Some((gamma, report)) => Extraction::Built { gamma, report },
        None => Extraction::Built { gamma, report },
    }
}

fn search_decisive_subsets(
    sit: &DecisionSituation,
    set: &ArgSet,
) -> Option<(ArgSet, ConditionReport)> {
    let pool: Vec<Arg> = sit.decisive().intersection(set).iter().collect();
    if pool.len() > EXTRACTION_SEARCH_CAP {
        return None;
    }
    let mut masks: Vec<u32> = (0..1u32 << pool.len()).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks.into_iter().find_map(|mask| {
        let gamma = ArgSet::from_iter_in(
            sit.n_args(),
            pool.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a),
        );
        let report = check_cac(sit, &gamma);
        report.is_cac().then_some((gamma, report))
    })
}

/// Why a stored verdict cannot be carried over to an extended situation.
#[derive(Clone, Debug)]
pub enum CarryOverFailure {
    MissingIdentifier(String),
    /// A support or trump fact among the original arguments differs.
    RelationChanged(String),
    /// Gamma is not CAC in the extended situation.
    NotCac(Box<ConditionReport>),
}

/// What the stored verdict yields in the extended situation.
#[derive(Clone, Debug)]
pub struct CarryOver {
    /// Gamma re-indexed in the extended situation.
    pub gamma: ArgSet,
    pub model: Model,
    pub new_args: Vec<Arg>,
    /// The judgment concluded from the certificate: `T_η`.
    pub judgment: PropSet,
}

/// Carries a gamma-operationally valid model and a CAC gamma over to a
/// situation that only adds arguments. Gamma must still be CAC there (so every
/// new argument is unnecessary), and every fact among the original arguments
/// must be unchanged; then the stored verdict still applies and the judgment
/// equals the model's claims, with no new queries.
pub fn carry_over(
    before: &DecisionSituation,
    after: &DecisionSituation,
    gamma: &ArgSet,
    model: &Model,
) -> std::result::Result<CarryOver, CarryOverFailure> {
    let map_arg = |a: Arg| {
        after
            .arg(before.arg_name(a))
            .map_err(|_| CarryOverFailure::MissingIdentifier(before.arg_name(a).into()))
    };
    let map_prop = |t: Prop| {
        after
            .prop(before.prop_name(t))
            .map_err(|_| CarryOverFailure::MissingIdentifier(before.prop_name(t).into()))
    };
    let args: Vec<Arg> = before.args().map(map_arg).collect::<std::result::Result<_, _>>()?;
    let props: Vec<Prop> = before.props().map(map_prop).collect::<std::result::Result<_, _>>()?;
    if after.n_props() != before.n_props() {
        return Err(CarryOverFailure::RelationChanged(
            "propositions differ".into(),
        ));
    }
    for a in before.args() {
        for t in before.props() {
            if before.supports(a, t) != after.supports(args[a.0], props[t.0]) {
                return Err(CarryOverFailure::RelationChanged(format!(
                    "support ({}, {})",
                    before.arg_name(a),
                    before.prop_name(t)
                )));
            }
        }
        for b in before.args() {
            let (x, y) = (args[a.0], args[b.0]);
            if before.trumps().contains(a, b) != after.trumps().contains(x, y)
                || before.not_trumps().contains(a, b) != after.not_trumps().contains(x, y)
            {
                return Err(CarryOverFailure::RelationChanged(format!(
                    "trump ({}, {})",
                    before.arg_name(a),
                    before.arg_name(b)
                )));
            }
        }
    }
    let new_gamma = ArgSet::from_iter_in(after.n_args(), gamma.iter().map(|a| args[a.0]));
    let report = check_cac(after, &new_gamma);
    if !report.is_cac() {
        return Err(CarryOverFailure::NotCac(Box::new(report)));
    }
    let model = Model::new(
        model.support_claims.iter().map(|&(s, t)| (args[s.0], props[t.0])),
        model.counter_claims.iter().map(|&(a, b)| (args[a.0], args[b.0])),
    )
    .expect("re-indexing preserves well-formedness");
    let old: ArgSet = ArgSet::from_iter_in(after.n_args(), args.iter().copied());
    Ok(CarryOver {
        gamma: new_gamma,
        judgment: model_claims(after, &model),
        model,
        new_args: old.complement().iter().collect(),
    })
}
