//! Finite decision situations and their base semantics.
//!
//! A situation is built from a [`SituationDraft`] (string identifiers, as read
//! from a document) which is validated and then indexed. Identifiers are sorted
//! so that every output is in canonical order.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::{CoreError, Result};
use crate::ids::{Arg, ArgSet, Prop, PropSet};
use crate::relation::{Relation, Support};

pub type Pair = (String, String);

/// How the trump relations are given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DraftRelations {
    /// One trump relation per perspective; each pair reads "first trumps second".
    Perspectives(Vec<(String, Vec<Pair>)>),
    /// `▷∃` directly, plus the pairs that are also in `⋫∃`.
    Direct {
        trumps_exists: Vec<Pair>,
        ambivalent: Vec<Pair>,
    },
}

/// Unvalidated situation with string identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SituationDraft {
    pub propositions: Vec<String>,
    pub arguments: Vec<String>,
    pub support: Vec<Pair>,
    pub relations: DraftRelations,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    EmptyIdentifier,
    DuplicateArgument(String),
    DuplicateProposition(String),
    DuplicatePerspective(String),
    SharedIdentifier(String),
    UnknownArgument(String),
    UnknownProposition(String),
    SelfTrump(String),
    AmbivalentNotTrump(String, String),
    NoPerspectives,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyIdentifier => write!(f, "empty identifier"),
            Violation::DuplicateArgument(a) => write!(f, "duplicate argument {a}"),
            Violation::DuplicateProposition(p) => write!(f, "duplicate proposition {p}"),
            Violation::DuplicatePerspective(p) => write!(f, "duplicate perspective {p}"),
            Violation::SharedIdentifier(x) => {
                write!(f, "identifier {x} is both an argument and a proposition")
            }
            Violation::UnknownArgument(a) => write!(f, "unknown argument {a}"),
            Violation::UnknownProposition(p) => write!(f, "unknown proposition {p}"),
            Violation::SelfTrump(a) => write!(f, "self-trump pair ({a}, {a})"),
            Violation::AmbivalentNotTrump(a, b) => {
                write!(f, "ambivalent pair ({a}, {b}) is not in trumps_exists")
            }
            Violation::NoPerspectives => write!(f, "perspective map is empty"),
        }
    }
}

/// Result of [`validate_situation`]; empty means well-formed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Lists every well-formedness violation of a draft.
pub fn validate_situation(draft: &SituationDraft) -> ValidationReport {
    let mut violations = BTreeSet::new();
    let mut args = HashSet::new();
    for a in &draft.arguments {
        if a.is_empty() {
            violations.insert(Violation::EmptyIdentifier);
        }
        if !args.insert(a.as_str()) {
            violations.insert(Violation::DuplicateArgument(a.clone()));
        }
    }
    let mut props = HashSet::new();
    for p in &draft.propositions {
        if p.is_empty() {
            violations.insert(Violation::EmptyIdentifier);
        }
        if !props.insert(p.as_str()) {
            violations.insert(Violation::DuplicateProposition(p.clone()));
        }
        if args.contains(p.as_str()) {
            violations.insert(Violation::SharedIdentifier(p.clone()));
        }
    }
    let check_arg = |a: &str, violations: &mut BTreeSet<Violation>| {
        if !args.contains(a) {
            violations.insert(Violation::UnknownArgument(a.to_string()));
        }
    };
    for (a, p) in &draft.support {
        check_arg(a, &mut violations);
        if !props.contains(p.as_str()) {
            violations.insert(Violation::UnknownProposition(p.clone()));
        }
    }
    let check_pairs = |pairs: &[Pair], violations: &mut BTreeSet<Violation>| {
        for (a, b) in pairs {
            check_arg(a, violations);
            check_arg(b, violations);
            if a == b {
                violations.insert(Violation::SelfTrump(a.clone()));
            }
        }
    };
    match &draft.relations {
        DraftRelations::Perspectives(perspectives) => {
            if perspectives.is_empty() {
                violations.insert(Violation::NoPerspectives);
            }
            let mut names = HashSet::new();
            for (name, pairs) in perspectives {
                if name.is_empty() {
                    violations.insert(Violation::EmptyIdentifier);
                }
                if !names.insert(name.as_str()) {
                    violations.insert(Violation::DuplicatePerspective(name.clone()));
                }
                check_pairs(pairs, &mut violations);
            }
        }
        DraftRelations::Direct {
            trumps_exists,
            ambivalent,
        } => {
            check_pairs(trumps_exists, &mut violations);
            check_pairs(ambivalent, &mut violations);
            let exists: HashSet<&Pair> = trumps_exists.iter().collect();
            for pair in ambivalent {
                if !exists.contains(pair) {
                    violations.insert(Violation::AmbivalentNotTrump(
                        pair.0.clone(),
                        pair.1.clone(),
                    ));
                }
            }
        }
    }
    ValidationReport {
        violations: violations.into_iter().collect(),
    }
}

/// Indexed trump relations, in the encoding the situation was given in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrumpEncoding {
    Perspectives(Vec<(String, Relation)>),
    Direct {
        trumps_exists: Relation,
        ambivalent: Relation,
    },
}

/// `▷∃`, `⋫∃`, `▷∀`, `⋫∀` and the decisive arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedRelations {
    pub trumps_exists: Relation,
    pub not_trumps_exists: Relation,
    pub trumps_forall: Relation,
    pub not_trumps_forall: Relation,
    pub decisive: ArgSet,
}

impl DerivedRelations {
    fn derive(n: usize, encoding: &TrumpEncoding) -> Self {
        let (trumps_exists, not_trumps_exists) = match encoding {
            TrumpEncoding::Perspectives(perspectives) => {
                let mut exists = Relation::empty(n);
                let mut not_exists = Relation::empty(n);
                for (_, rel) in perspectives {
                    exists = exists.union(rel);
                    not_exists = not_exists.union(&rel.complement());
                }
                (exists, not_exists)
            }
            TrumpEncoding::Direct {
                trumps_exists,
                ambivalent,
            } => (
                trumps_exists.clone(),
                trumps_exists.complement().union(ambivalent),
            ),
        };
        let trumps_forall = not_trumps_exists.complement();
        let not_trumps_forall = trumps_exists.complement();
        let decisive = ArgSet::from_iter_in(
            n,
            (0..n).map(Arg).filter(|&a| trumps_exists.preimage(a).is_empty()),
        );
        DerivedRelations {
            trumps_exists,
            not_trumps_exists,
            trumps_forall,
            not_trumps_forall,
            decisive,
        }
    }
}

/// Status of a proposition in a situation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Justifiable,
    Untenable,
    Neither,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Justifiable => "justifiable",
            Status::Untenable => "untenable",
            Status::Neither => "neither",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClearCutReport {
    pub clear_cut: bool,
    pub statuses: Vec<(Prop, Status)>,
}

impl ClearCutReport {
    pub fn undecided(&self) -> impl Iterator<Item = Prop> + '_ {
        self.statuses
            .iter()
            .filter(|(_, s)| *s == Status::Neither)
            .map(|(p, _)| *p)
    }
}

/// A validated, indexed decision situation. Immutable.
#[derive(Clone, Debug)]
pub struct DecisionSituation {
    propositions: Vec<String>,
    arguments: Vec<String>,
    support: Support,
    encoding: TrumpEncoding,
    derived: DerivedRelations,
}

impl PartialEq for DecisionSituation {
    fn eq(&self, other: &Self) -> bool {
        self.propositions == other.propositions
            && self.arguments == other.arguments
            && self.support == other.support
            && self.encoding == other.encoding
    }
}

impl DecisionSituation {
    pub fn from_draft(draft: &SituationDraft) -> Result<Self> {
        let report = validate_situation(draft);
        if !report.is_ok() {
            return Err(CoreError::InvalidSituation(report));
        }
        let mut arguments = draft.arguments.clone();
        arguments.sort();
        let mut propositions = draft.propositions.clone();
        propositions.sort();
        let n = arguments.len();
        let arg_index: BTreeMap<&str, Arg> = arguments
            .iter()
            .enumerate()
            .map(|(i, a)| (a.as_str(), Arg(i)))
            .collect();
        let prop_index: BTreeMap<&str, Prop> = propositions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_str(), Prop(i)))
            .collect();
        let rel = |pairs: &[Pair]| {
            Relation::from_pairs(
                n,
                pairs
                    .iter()
                    .map(|(a, b)| (arg_index[a.as_str()], arg_index[b.as_str()])),
            )
        };
        let support = Support::from_pairs(
            n,
            propositions.len(),
            draft
                .support
                .iter()
                .map(|(a, p)| (arg_index[a.as_str()], prop_index[p.as_str()])),
        );
        let encoding = match &draft.relations {
            DraftRelations::Perspectives(ps) => {
                let mut ps: Vec<(String, Relation)> =
                    ps.iter().map(|(name, pairs)| (name.clone(), rel(pairs))).collect();
                ps.sort_by(|a, b| a.0.cmp(&b.0));
                TrumpEncoding::Perspectives(ps)
            }
            DraftRelations::Direct {
                trumps_exists,
                ambivalent,
            } => TrumpEncoding::Direct {
                trumps_exists: rel(trumps_exists),
                ambivalent: rel(ambivalent),
            },
        };
        let derived = DerivedRelations::derive(n, &encoding);
        Ok(DecisionSituation {
            propositions,
            arguments,
            support,
            encoding,
            derived,
        })
    }

    /// Canonical draft: sorted identifiers and pairs.
    pub fn to_draft(&self) -> SituationDraft {
        let pairs = |rel: &Relation| -> Vec<Pair> {
            let mut v: Vec<Pair> = rel
                .pairs()
                .map(|(a, b)| (self.arg_name(a).to_string(), self.arg_name(b).to_string()))
                .collect();
            v.sort();
            v
        };
        let mut support: Vec<Pair> = self
            .support
            .pairs()
            .map(|(a, p)| (self.arg_name(a).to_string(), self.prop_name(p).to_string()))
            .collect();
        support.sort();
        let relations = match &self.encoding {
            TrumpEncoding::Perspectives(ps) => DraftRelations::Perspectives(
                ps.iter().map(|(name, rel)| (name.clone(), pairs(rel))).collect(),
            ),
            TrumpEncoding::Direct {
                trumps_exists,
                ambivalent,
            } => DraftRelations::Direct {
                trumps_exists: pairs(trumps_exists),
                ambivalent: pairs(ambivalent),
            },
        };
        SituationDraft {
            propositions: self.propositions.clone(),
            arguments: self.arguments.clone(),
            support,
            relations,
        }
    }

    /// The direct encoding with `▷∃` and `ambivalent = ▷∃ ∩ ⋫∃`.
    pub fn to_direct(&self) -> DecisionSituation {
        let trumps_exists = self.derived.trumps_exists.clone();
        let ambivalent = trumps_exists.intersection(&self.derived.not_trumps_exists);
        DecisionSituation {
            propositions: self.propositions.clone(),
            arguments: self.arguments.clone(),
            support: self.support.clone(),
            derived: DerivedRelations::derive(
                self.arguments.len(),
                &TrumpEncoding::Direct {
                    trumps_exists: trumps_exists.clone(),
                    ambivalent: ambivalent.clone(),
                },
            ),
            encoding: TrumpEncoding::Direct {
                trumps_exists,
                ambivalent,
            },
        }
    }

    pub fn n_args(&self) -> usize {
        self.arguments.len()
    }

    pub fn n_props(&self) -> usize {
        self.propositions.len()
    }

    pub fn args(&self) -> impl Iterator<Item = Arg> {
        (0..self.arguments.len()).map(Arg)
    }

    pub fn props(&self) -> impl Iterator<Item = Prop> {
        (0..self.propositions.len()).map(Prop)
    }

    pub fn all_args(&self) -> ArgSet {
        ArgSet::full(self.n_args())
    }

    pub fn no_args(&self) -> ArgSet {
        ArgSet::empty(self.n_args())
    }

    pub fn arg_names(&self) -> &[String] {
        &self.arguments
    }

    pub fn prop_names(&self) -> &[String] {
        &self.propositions
    }

    pub fn arg_name(&self, arg: Arg) -> &str {
        &self.arguments[arg.0]
    }

    pub fn prop_name(&self, prop: Prop) -> &str {
        &self.propositions[prop.0]
    }

    pub fn arg(&self, name: &str) -> Result<Arg> {
        self.arguments
            .binary_search_by(|a| a.as_str().cmp(name))
            .map(Arg)
            .map_err(|_| CoreError::UnknownArgument(name.to_string()))
    }

    pub fn prop(&self, name: &str) -> Result<Prop> {
        self.propositions
            .binary_search_by(|p| p.as_str().cmp(name))
            .map(Prop)
            .map_err(|_| CoreError::UnknownProposition(name.to_string()))
    }

    pub fn arg_set<S: AsRef<str>>(&self, names: &[S]) -> Result<ArgSet> {
        let mut set = self.no_args();
        for name in names {
            set.insert(self.arg(name.as_ref())?);
        }
        Ok(set)
    }

    pub fn arg_set_names(&self, set: &ArgSet) -> Vec<String> {
        set.iter().map(|a| self.arg_name(a).to_string()).collect()
    }

    pub fn prop_set_names(&self, set: &PropSet) -> Vec<String> {
        set.iter().map(|p| self.prop_name(p).to_string()).collect()
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn supports(&self, arg: Arg, prop: Prop) -> bool {
        self.support.contains(arg, prop)
    }

    pub fn encoding(&self) -> &TrumpEncoding {
        &self.encoding
    }

    /// Per-perspective relations, when the situation uses the perspective encoding.
    pub fn perspectives(&self) -> Option<&[(String, Relation)]> {
        match &self.encoding {
            TrumpEncoding::Perspectives(ps) => Some(ps),
            TrumpEncoding::Direct { .. } => None,
        }
    }

    pub fn derived(&self) -> &DerivedRelations {
        &self.derived
    }

    /// `▷∃`
    pub fn trumps(&self) -> &Relation {
        &self.derived.trumps_exists
    }

    /// `⋫∃`
    pub fn not_trumps(&self) -> &Relation {
        &self.derived.not_trumps_exists
    }

    /// `▷∀`
    pub fn always_trumps(&self) -> &Relation {
        &self.derived.trumps_forall
    }

    pub fn decisive(&self) -> &ArgSet {
        &self.derived.decisive
    }

    pub fn is_decisive(&self, arg: Arg) -> bool {
        self.derived.decisive.contains(arg)
    }

    /// Some supporter of `prop` is decisive.
    pub fn is_justifiable(&self, prop: Prop) -> bool {
        !self.support.supporters(prop).is_disjoint(self.decisive())
    }

    /// Every supporter of `prop` is always trumped by some decisive argument.
    pub fn is_untenable(&self, prop: Prop) -> bool {
        let beaten = self.always_trumps().image_of(self.decisive());
        self.support.supporters(prop).is_subset(&beaten)
    }

    pub fn status(&self, prop: Prop) -> Status {
        if self.is_justifiable(prop) {
            Status::Justifiable
        } else if self.is_untenable(prop) {
            Status::Untenable
        } else {
            Status::Neither
        }
    }

    /// `T_i`: the justifiable propositions.
    pub fn deliberated_judgment(&self) -> PropSet {
        PropSet::from_iter_in(self.n_props(), self.props().filter(|&p| self.is_justifiable(p)))
    }

    pub fn clear_cut(&self) -> ClearCutReport {
        let statuses: Vec<(Prop, Status)> = self.props().map(|p| (p, self.status(p))).collect();
        ClearCutReport {
            clear_cut: statuses.iter().all(|(_, s)| *s != Status::Neither),
            statuses,
        }
    }

    pub fn is_clear_cut(&self) -> bool {
        self.clear_cut().clear_cut
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn weather_relations() {
        let sit = fixtures::weather();
        let pairs: Vec<_> = sit
            .trumps()
            .pairs()
            .map(|(a, b)| (sit.arg_name(a), sit.arg_name(b)))
            .collect();
        assert_eq!(pairs, vec![("s2", "s1"), ("s3", "s2")]);
        assert_eq!(sit.arg_set_names(sit.decisive()), vec!["s", "s3"]);
    }

    #[test]
    fn empty_relations_make_everything_decisive() {
        let sit = fixtures::variant();
        assert_eq!(sit.decisive().len(), sit.n_args());
        assert!(sit.always_trumps().is_empty());
    }

    #[test]
    fn flicker_pair_is_ambivalent() {
        let sit = fixtures::flicker();
        let (s1, s2) = (sit.arg("s1").unwrap(), sit.arg("s2").unwrap());
        assert!(sit.trumps().contains(s2, s1));
        assert!(sit.not_trumps().contains(s2, s1));
        assert!(!sit.always_trumps().contains(s2, s1));
    }

    #[test]
    fn validation_reports_unknown_argument() {
        let mut draft = fixtures::weather().to_draft();
        draft.support.push(("x".into(), "t".into()));
        let report = validate_situation(&draft);
        assert_eq!(report.violations, vec![Violation::UnknownArgument("x".into())]);
        assert_eq!(report.to_string(), "unknown argument x");
        assert!(DecisionSituation::from_draft(&draft).is_err());
    }

    #[test]
    fn validation_rejects_ambivalent_outside_trumps() {
        let draft = SituationDraft {
            propositions: vec!["t".into()],
            arguments: vec!["a".into(), "b".into()],
            support: vec![],
            relations: DraftRelations::Direct {
                trumps_exists: vec![],
                ambivalent: vec![("a".into(), "b".into())],
            },
        };
        let report = validate_situation(&draft);
        assert_eq!(
            report.violations,
            vec![Violation::AmbivalentNotTrump("a".into(), "b".into())]
        );
    }

    #[test]
    fn validation_collects_every_violation() {
        let draft = SituationDraft {
            propositions: vec!["t".into(), "a".into()],
            arguments: vec!["a".into(), "a".into()],
            support: vec![("a".into(), "u".into())],
            relations: DraftRelations::Perspectives(vec![]),
        };
        let report = validate_situation(&draft);
        assert!(report.violations.contains(&Violation::DuplicateArgument("a".into())));
        assert!(report.violations.contains(&Violation::SharedIdentifier("a".into())));
        assert!(report.violations.contains(&Violation::UnknownProposition("u".into())));
        assert!(report.violations.contains(&Violation::NoPerspectives));
    }

    #[test]
    fn self_trump_rejected() {
        let draft = SituationDraft {
            propositions: vec![],
            arguments: vec!["a".into()],
            support: vec![],
            relations: DraftRelations::Perspectives(vec![(
                "p".into(),
                vec![("a".into(), "a".into())],
            )]),
        };
        assert_eq!(
            validate_situation(&draft).violations,
            vec![Violation::SelfTrump("a".into())]
        );
    }

    #[test]
    fn statuses() {
        let weather = fixtures::weather();
        let t = weather.prop("t").unwrap();
        assert!(weather.is_justifiable(t));
        assert!(!weather.is_untenable(t));
        assert!(weather.is_clear_cut());

        let flicker = fixtures::flicker();
        let t = flicker.prop("t").unwrap();
        assert!(!flicker.is_justifiable(t));
        assert!(!flicker.is_untenable(t));
        let report = flicker.clear_cut();
        assert!(!report.clear_cut);
        assert_eq!(report.statuses, vec![(t, Status::Neither)]);

        let variant = fixtures::variant();
        assert_eq!(variant.prop_set_names(&variant.deliberated_judgment()), vec!["t1", "t2"]);
    }

    #[test]
    fn unsupported_proposition_is_untenable() {
        let draft = SituationDraft {
            propositions: vec!["t".into()],
            arguments: vec!["a".into()],
            support: vec![],
            relations: DraftRelations::Perspectives(vec![("p".into(), vec![])]),
        };
        let sit = DecisionSituation::from_draft(&draft).unwrap();
        assert!(sit.is_untenable(Prop(0)));
        assert_eq!(sit.status(Prop(0)), Status::Untenable);
    }

    #[test]
    fn empty_topic_is_clear_cut() {
        let draft = SituationDraft {
            propositions: vec![],
            arguments: vec!["a".into()],
            support: vec![],
            relations: DraftRelations::Perspectives(vec![("p".into(), vec![])]),
        };
        assert!(DecisionSituation::from_draft(&draft).unwrap().is_clear_cut());
    }

    #[test]
    fn unknown_proposition_lookup_fails() {
        let sit = fixtures::weather();
        assert!(matches!(sit.prop("zz"), Err(CoreError::UnknownProposition(_))));
    }
}
