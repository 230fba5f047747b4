use std::collections::HashMap;

use super::{gamma_decisive, Verdict};
use crate::ids::{Arg, ArgSet};
use crate::situation::DecisionSituation;

/// Largest trumper count for which the exact minimal-defender search runs.
pub const DEFENSE_CAP: usize = 20;

/// Every trumper of `s` is always-trumped by some decisive member of gamma.
pub fn is_defended(sit: &DecisionSituation, gamma: &ArgSet, s: Arg) -> bool {
    let defenders = gamma_decisive(sit, gamma);
    sit.trumps()
        .preimage(s)
        .iter()
        .all(|c| !sit.always_trumps().preimage(c).is_disjoint(&defenders))
}

/// Every trumper of `s` is trumped by some decisive member of gamma.
pub fn is_finitely_defended(sit: &DecisionSituation, gamma: &ArgSet, s: Arg) -> bool {
    sit.trumps()
        .preimage(s)
        .is_subset(&sit.trumps().image_of(&gamma_decisive(sit, gamma)))
}

/// Result of the smallest-defender search for one argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefenseSearch {
    Undefended,
    /// A smallest set of decisive gamma members defending the argument.
    Defended { defenders: ArgSet },
    CapExceeded { trumpers: usize },
}

impl DefenseSearch {
    pub fn size(&self) -> Option<usize> {
        match self {
            DefenseSearch::Defended { defenders } => Some(defenders.len()),
            _ => None,
        }
    }
}

/// Finds a smallest `S ⊆ gamma` of decisive arguments such that every trumper of
/// `s` is always-trumped by a member of `S`.
pub fn defense_search(sit: &DecisionSituation, gamma: &ArgSet, s: Arg) -> DefenseSearch {
    let trumpers: Vec<Arg> = sit.trumps().preimage(s).iter().collect();
    if trumpers.len() > DEFENSE_CAP {
        return DefenseSearch::CapExceeded {
            trumpers: trumpers.len(),
        };
    }
    let full: u32 = if trumpers.is_empty() {
        0
    } else {
        u32::MAX >> (32 - trumpers.len())
    };
    let candidates: Vec<(Arg, u32)> = gamma_decisive(sit, gamma)
        .iter()
        .map(|d| {
            let beaten = sit.always_trumps().image(d);
            let mask = trumpers
                .iter()
                .enumerate()
                .filter(|(_, c)| beaten.contains(**c))
                .fold(0u32, |m, (i, _)| m | (1 << i));
            (d, mask)
        })
        .filter(|(_, mask)| *mask != 0)
        .collect();
    let reachable = candidates.iter().fold(0u32, |m, (_, c)| m | c);
    if reachable & full != full {
        return DefenseSearch::Undefended;
    }

    // Greedy cover gives an upper bound for the exact breadth-first search.
    let mut covered = 0u32;
    let mut greedy = Vec::new();
    while covered != full {
        let &(d, mask) = candidates
            .iter()
            .max_by_key(|(d, mask)| ((mask & !covered).count_ones(), std::cmp::Reverse(d.0)))
            .expect("coverage is reachable");
        covered |= mask;
        greedy.push(d);
    }

    let mut parent: HashMap<u32, (u32, Arg)> = HashMap::new();
    let mut frontier = vec![0u32];
    let mut found = covered == 0 && full == 0;
    let mut depth = 0;
    while !found && depth + 1 < greedy.len() {
        depth += 1;
        let mut next = Vec::new();
        for &state in &frontier {
            for &(d, mask) in &candidates {
                let after = state | mask;
                if after == state || after == 0 || parent.contains_key(&after) {
                    continue;
                }
                parent.insert(after, (state, d));
                next.push(after);
                if after == full {
                    found = true;
                }
            }
            if found {
                break;
            }
        }
        frontier = next;
    }

    let defenders = if found && full != 0 {
        let mut chosen = Vec::new();
        let mut state = full;
        while state != 0 {
            let (prev, d) = parent[&state];
            chosen.push(d);
            state = prev;
        }
        chosen
    } else {
        greedy
    };
    DefenseSearch::Defended {
        defenders: ArgSet::from_iter_in(sit.n_args(), defenders),
    }
}

/// Some `S ⊆ gamma` with `|S| ≤ j` defends `s`. Errors with the trumper count
/// when the search cap is exceeded.
pub fn is_j_defended(
    sit: &DecisionSituation,
    gamma: &ArgSet,
    s: Arg,
    j: usize,
) -> Result<bool, usize> {
    match defense_search(sit, gamma, s) {
        DefenseSearch::Undefended => Ok(false),
        DefenseSearch::Defended { defenders } => Ok(defenders.len() <= j),
        DefenseSearch::CapExceeded { trumpers } => Err(trumpers),
    }
}

/// Every defended member of gamma is `j`-defended. Witnesses: members that are
/// defended but need more than `j` defenders, or whose search exceeded the cap.
pub fn width_bound(sit: &DecisionSituation, gamma: &ArgSet, j: usize) -> Verdict<Arg> {
    Verdict::from_witnesses(
        gamma
            .iter()
            .filter(|&s| is_defended(sit, gamma, s))
            .filter(|&s| !matches!(is_j_defended(sit, gamma, s, j), Ok(true)))
            .collect(),
    )
}

/// Smallest width bound for gamma, with the members whose search was capped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthWitness {
    /// `None` only when some search exceeded the cap.
    pub j: Option<usize>,
    pub cap_exceeded: Vec<Arg>,
}

pub fn min_width(sit: &DecisionSituation, gamma: &ArgSet) -> WidthWitness {
    let mut j = 0;
    let mut cap_exceeded = Vec::new();
    for s in gamma.iter() {
        match defense_search(sit, gamma, s) {
            DefenseSearch::Undefended => {}
            DefenseSearch::Defended { defenders } => j = j.max(defenders.len()),
            DefenseSearch::CapExceeded { .. } => cap_exceeded.push(s),
        }
    }
    WidthWitness {
        j: cap_exceeded.is_empty().then_some(j),
        cap_exceeded,
    }
}

/// Largest number of trumpers of a single argument.
pub fn max_trumper_indegree(sit: &DecisionSituation) -> usize {
    sit.args()
        .map(|s| sit.trumps().preimage(s).len())
        .max()
        .unwrap_or(0)
}
