//! Sufficiency conditions over a chosen argument subset `gamma`, their
//! whole-situation counterparts, and the derived argument classes.
//!
//! Every check returns a [`Verdict`] whose witnesses are the violating tuples;
//! an empty witness list means the condition holds.

mod defense;
mod lemmas;

pub use defense::{
    defense_search, is_defended, is_finitely_defended, is_j_defended, max_trumper_indegree,
    min_width, width_bound, DefenseSearch, WidthWitness, DEFENSE_CAP,
};
pub use lemmas::{lemma_suite, LemmaCheck, LemmaReport};

use crate::ids::{Arg, ArgSet, Prop};
use crate::relation::Relation;
use crate::situation::DecisionSituation;

/// Outcome of a condition check: holds iff there are no witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<W> {
    pub witnesses: Vec<W>,
}

impl<W> Verdict<W> {
    pub fn from_witnesses(witnesses: Vec<W>) -> Self {
        Verdict { witnesses }
    }

    pub fn holds(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// `S` replaces `s`: `▷∃(s) ⊆ ▷∃(S)` and `⇝(s) ⊆ ⇝(S)`.
pub fn replaces(sit: &DecisionSituation, set: &ArgSet, s: Arg) -> bool {
    sit.trumps().image(s).is_subset(&sit.trumps().image_of(set))
        && sit
            .support()
            .supported_by(s)
            .is_subset(&sit.support().supported_by_set(set))
}

/// `S` essentially replaces `s` relative to `gamma`: only the trumps landing in
/// `gamma` need to be matched.
pub fn essentially_replaces(sit: &DecisionSituation, gamma: &ArgSet, set: &ArgSet, s: Arg) -> bool {
    sit.trumps()
        .image(s)
        .intersection(gamma)
        .is_subset(&sit.trumps().image_of(set))
        && sit
            .support()
            .supported_by(s)
            .is_subset(&sit.support().supported_by_set(set))
}

/// `S_γdec`: decisive members of gamma.
pub fn gamma_decisive(sit: &DecisionSituation, gamma: &ArgSet) -> ArgSet {
    gamma.intersection(sit.decisive())
}

/// `S_γres`: members of gamma not trumped by any decisive member of gamma.
pub fn gamma_resistant(sit: &DecisionSituation, gamma: &ArgSet) -> ArgSet {
    gamma.difference(&sit.trumps().image_of(&gamma_decisive(sit, gamma)))
}

/// `Q = (▷∃ ∪ ▷∃∘▷∃) ∩ (gamma × gamma)`.
pub fn q_relation(sit: &DecisionSituation, gamma: &ArgSet) -> Relation {
    let e = sit.trumps();
    e.union(&e.then(e)).restrict(gamma)
}

/// All argument classes derived from a chosen subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaAnalysis {
    pub gamma: ArgSet,
    /// `S_γdec`
    pub decisive: ArgSet,
    /// `S_γres`
    pub resistant: ArgSet,
    /// `S_γdef`: members of gamma whose trumpers are all trumped by `S_γdec`.
    pub finitely_defended: ArgSet,
    /// Members of gamma that are gamma-defended in the `▷∀`-with-decisive sense.
    pub defended: ArgSet,
    /// `R_γdec`
    pub replaceable_by_decisive: ArgSet,
    /// `E_γres`
    pub essentially_replaceable_by_resistant: ArgSet,
    /// `E_γdec`
    pub essentially_replaceable_by_decisive: ArgSet,
    pub q: Relation,
    pub width: WidthWitness,
    /// Smallest `k` with `Q^(k+1) = ∅`, or `None` when `Q` has a cycle.
    pub length: Option<usize>,
}

pub fn gamma_analysis(sit: &DecisionSituation, gamma: &ArgSet) -> GammaAnalysis {
    let decisive = gamma_decisive(sit, gamma);
    let resistant = gamma_resistant(sit, gamma);
    let finitely_defended = ArgSet::from_iter_in(
        sit.n_args(),
        gamma.iter().filter(|&s| is_finitely_defended(sit, gamma, s)),
    );
    let defended = ArgSet::from_iter_in(
        sit.n_args(),
        gamma.iter().filter(|&s| is_defended(sit, gamma, s)),
    );
    let all = sit.all_args();
    let select = |pred: &dyn Fn(Arg) -> bool| ArgSet::from_iter_in(sit.n_args(), all.iter().filter(|&s| pred(s)));
    let replaceable_by_decisive = select(&|s| replaces(sit, &decisive, s));
    let essentially_replaceable_by_resistant =
        select(&|s| essentially_replaces(sit, gamma, &resistant, s));
    let essentially_replaceable_by_decisive =
        select(&|s| essentially_replaces(sit, gamma, &decisive, s));
    let q = q_relation(sit, gamma);
    let length = min_length_of(&q);
    GammaAnalysis {
        gamma: gamma.clone(),
        decisive,
        resistant,
        finitely_defended,
        defended,
        replaceable_by_decisive,
        essentially_replaceable_by_resistant,
        essentially_replaceable_by_decisive,
        q,
        width: min_width(sit, gamma),
        length,
    }
}

/// `s` is trumped by a resistant member of gamma, or essentially replaceable by them.
pub fn is_unnecessary(sit: &DecisionSituation, gamma: &ArgSet, s: Arg) -> bool {
    let resistant = gamma_resistant(sit, gamma);
    !sit.trumps().preimage(s).is_disjoint(&resistant)
        || essentially_replaces(sit, gamma, &resistant, s)
}

/// Every argument outside gamma is unnecessary. Witnesses: the necessary outsiders.
pub fn covering(sit: &DecisionSituation, gamma: &ArgSet) -> Verdict<Arg> {
    Verdict::from_witnesses(
        gamma
            .complement()
            .iter()
            .filter(|&s| !is_unnecessary(sit, gamma, s))
            .collect(),
    )
}

/// Whether a check ranges over the whole argument set or a chosen subset.
#[derive(Clone, Copy, Debug)]
pub enum Scope<'a> {
    Whole,
    Gamma(&'a ArgSet),
}

/// Ambivalent trumps `(s', s)` (in both `▷∃` and `⋫∃`) require a trumper of `s'`.
/// In gamma scope only `s' ∈ gamma` is constrained. Witnesses: `(s', s)`.
pub fn answerability(sit: &DecisionSituation, scope: Scope<'_>) -> Verdict<(Arg, Arg)> {
    let ambivalent = sit.trumps().intersection(sit.not_trumps());
    Verdict::from_witnesses(
        ambivalent
            .pairs()
            .filter(|(s_prime, _)| match scope {
                Scope::Whole => true,
                Scope::Gamma(gamma) => gamma.contains(*s_prime),
            })
            .filter(|(s_prime, _)| sit.trumps().preimage(*s_prime).is_empty())
            .collect(),
    )
}

/// Whole-situation reinstatement: for distinct `s1, s2, s3` with
/// `s3 ▷∀ s2 ▷∃ s1` and `s3` decisive, some argument replaces `s1` while being
/// trumped only by trumpers of `s1` other than `s2`. Witnesses: `(s1, s2, s3)`.
pub fn closed_under_reinstatement(sit: &DecisionSituation) -> Verdict<(Arg, Arg, Arg)> {
    let e = sit.trumps();
    let mut witnesses = Vec::new();
    for s3 in sit.decisive().iter() {
        for s2 in sit.always_trumps().image(s3).iter() {
            for s1 in e.image(s2).iter() {
                if s1 == s3 || s1 == s2 || s2 == s3 {
                    continue;
                }
                let mut allowed = e.preimage(s1).clone();
                allowed.remove(s2);
                let found = sit.args().any(|s| {
                    e.preimage(s).is_subset(&allowed)
                        && replaces(sit, &ArgSet::from_iter_in(sit.n_args(), [s]), s1)
                });
                if !found {
                    witnesses.push((s1, s2, s3));
                }
            }
        }
    }
    witnesses.sort();
    Verdict::from_witnesses(witnesses)
}

/// Gamma reinstatement: for `s1 ≠ s3` in gamma, `s3` decisive and not trumping
/// `s1`, some member of gamma replaces `s1` and is trumped only by trumpers of
/// `s1` outside `▷∀(s3)`. Witnesses: `(s1, s3)`.
pub fn gamma_closed_under_reinstatement(
    sit: &DecisionSituation,
    gamma: &ArgSet,
) -> Verdict<(Arg, Arg)> {
    let e = sit.trumps();
    let mut witnesses = Vec::new();
    for s1 in gamma.iter() {
        let replacers: Vec<Arg> = gamma
            .iter()
            .filter(|&s| replaces(sit, &ArgSet::from_iter_in(sit.n_args(), [s]), s1))
            .collect();
        for s3 in gamma_decisive(sit, gamma).iter() {
            if s3 == s1 || e.contains(s3, s1) {
                continue;
            }
            let allowed = e.preimage(s1).difference(sit.always_trumps().image(s3));
            let found = replacers
                .iter()
                .any(|&s| e.preimage(s).is_subset(&allowed));
            if !found {
                witnesses.push((s1, s3));
            }
        }
    }
    Verdict::from_witnesses(witnesses)
}

fn min_length_of(q: &Relation) -> Option<usize> {
    q.longest_path().map(|edges| edges.max(1))
}

/// `Q^(k+1) = ∅`, computed by repeated composition. Witnesses: pairs of `Q^(k+1)`.
pub fn length_bound(sit: &DecisionSituation, gamma: &ArgSet, k: usize) -> Verdict<(Arg, Arg)> {
    let q = q_relation(sit, gamma);
    let mut power = q.clone();
    for _ in 0..k {
        if power.is_empty() {
            break;
        }
        power = power.then(&q);
    }
    Verdict::from_witnesses(power.pairs().collect())
}

/// Smallest `k ≥ 1` such that the gamma length is bounded by `k`; `None` on a `Q`-cycle.
pub fn min_length(sit: &DecisionSituation, gamma: &ArgSet) -> Option<usize> {
    min_length_of(&q_relation(sit, gamma))
}

/// Whole-situation bounded length: `▷∃` has no cycle.
pub fn globally_acyclic(sit: &DecisionSituation) -> bool {
    sit.trumps().is_acyclic()
}

/// The whole-situation conditions, as reported for transparency.
#[derive(Clone, Debug)]
pub struct GlobalReport {
    pub answerability: Verdict<(Arg, Arg)>,
    pub reinstatement: Verdict<(Arg, Arg, Arg)>,
    pub max_trumper_indegree: usize,
    pub acyclic: bool,
}

impl GlobalReport {
    pub fn all_hold(&self) -> bool {
        self.answerability.holds() && self.reinstatement.holds() && self.acyclic
    }
}

pub fn global_conditions(sit: &DecisionSituation) -> GlobalReport {
    GlobalReport {
        answerability: answerability(sit, Scope::Whole),
        reinstatement: closed_under_reinstatement(sit),
        max_trumper_indegree: max_trumper_indegree(sit),
        acyclic: globally_acyclic(sit),
    }
}

/// Every sub-verdict of the CAC check for one gamma.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub gamma: ArgSet,
    pub reinstatement: Verdict<(Arg, Arg)>,
    pub answerability: Verdict<(Arg, Arg)>,
    pub width: WidthWitness,
    pub length: Option<usize>,
    /// A path of `Q`-edges that closes a cycle, when `length` is `None`.
    pub length_cycle: Vec<(Arg, Arg)>,
    pub covering: Verdict<Arg>,
}

impl ConditionReport {
    pub fn is_cac(&self) -> bool {
        self.reinstatement.holds()
            && self.answerability.holds()
            && self.length.is_some()
            && self.covering.holds()
    }
}

pub fn check_cac(sit: &DecisionSituation, gamma: &ArgSet) -> ConditionReport {
    let q = q_relation(sit, gamma);
    let length = min_length_of(&q);
    let length_cycle = if length.is_none() {
        cycle_pairs(&q)
    } else {
        Vec::new()
    };
    ConditionReport {
        gamma: gamma.clone(),
        reinstatement: gamma_closed_under_reinstatement(sit, gamma),
        answerability: answerability(sit, Scope::Gamma(gamma)),
        width: min_width(sit, gamma),
        length,
        length_cycle,
        covering: covering(sit, gamma),
    }
}

/// Pairs of the relation lying on some cycle.
fn cycle_pairs(rel: &Relation) -> Vec<(Arg, Arg)> {
    // (a, b) is on a cycle iff a is reachable from b.
    let n = rel.size();
    let mut reach: Vec<ArgSet> = (0..n).map(|a| rel.image(Arg(a)).clone()).collect();
    loop {
        let mut changed = false;
        for row in reach.iter_mut() {
            let next = rel.image_of(row).union(row);
            if next != *row {
                *row = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    rel.pairs().filter(|(a, b)| reach[b.0].contains(*a)).collect()
}

/// `S` is efficient: `T_i = ⇝(S ∩ decisive)` and, for every `t`,
/// `t ∉ T_i ⟺ ⇝⁻¹(t) ⊆ ▷∀(S ∩ decisive)`. Witnesses: offending propositions.
pub fn efficiency(sit: &DecisionSituation, set: &ArgSet) -> Verdict<Prop> {
    let judgment = sit.deliberated_judgment();
    let dec = set.intersection(sit.decisive());
    let supported = sit.support().supported_by_set(&dec);
    let beaten = sit.always_trumps().image_of(&dec);
    Verdict::from_witnesses(
        sit.props()
            .filter(|&t| {
                let in_judgment = judgment.contains(t);
                in_judgment != supported.contains(t)
                    || (!in_judgment) != sit.support().supporters(t).is_subset(&beaten)
            })
            .collect(),
    )
}

pub fn is_efficient(sit: &DecisionSituation, set: &ArgSet) -> bool {
    efficiency(sit, set).holds()
}
