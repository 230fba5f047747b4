//! Test-only helpers: random small situations and a brute-force oracle that
//! recomputes everything from the perspective pairs with plain boolean matrices.

use proptest::prelude::*;

use crate::ids::{Arg, ArgSet};
use crate::situation::{DecisionSituation, DraftRelations, SituationDraft};

pub fn situation_from(
    n_args: usize,
    n_props: usize,
    support: &[(usize, usize)],
    perspectives: &[Vec<(usize, usize)>],
) -> DecisionSituation {
    let arg = |i: usize| format!("a{i}");
    let prop = |i: usize| format!("t{i}");
    let draft = SituationDraft {
        propositions: (0..n_props).map(prop).collect(),
        arguments: (0..n_args).map(arg).collect(),
        support: support.iter().map(|&(a, t)| (arg(a), prop(t))).collect(),
        relations: DraftRelations::Perspectives(
            perspectives
                .iter()
                .enumerate()
                .map(|(i, pairs)| {
                    (
                        format!("p{i}"),
                        pairs.iter().map(|&(a, b)| (arg(a), arg(b))).collect(),
                    )
                })
                .collect(),
        ),
    };
    DecisionSituation::from_draft(&draft).expect("generated draft is valid")
}

/// Situations with up to `max_args` (< 10, so names sort numerically) arguments.
pub fn arb_situation(
    max_args: usize,
    max_props: usize,
    max_perspectives: usize,
) -> impl Strategy<Value = DecisionSituation> {
    assert!(max_args < 10);
    (1..=max_args, 1..=max_props, 1..=max_perspectives).prop_flat_map(|(n, m, k)| {
        let support = proptest::collection::vec(proptest::bool::weighted(0.35), n * m);
        let trumps = proptest::collection::vec(
            proptest::collection::vec(proptest::bool::weighted(0.25), n * n),
            k,
        );
        (support, trumps).prop_map(move |(support, trumps)| {
            let support: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (0..m).map(move |t| (a, t)))
                .filter(|&(a, t)| support[a * m + t])
                .collect();
            let perspectives: Vec<Vec<(usize, usize)>> = trumps
                .iter()
                .map(|bits| {
                    (0..n)
                        .flat_map(|a| (0..n).map(move |b| (a, b)))
                        .filter(|&(a, b)| a != b && bits[a * n + b])
                        .collect()
                })
                .collect();
            situation_from(n, m, &support, &perspectives)
        })
    })
}

pub fn arb_situation_with_subset(
    max_args: usize,
    max_props: usize,
    max_perspectives: usize,
) -> impl Strategy<Value = (DecisionSituation, ArgSet)> {
    arb_situation(max_args, max_props, max_perspectives).prop_flat_map(|sit| {
        let n = sit.n_args();
        proptest::collection::vec(any::<bool>(), n).prop_map(move |bits| {
            let set = ArgSet::from_iter_in(n, (0..n).filter(|&i| bits[i]).map(Arg));
            (sit.clone(), set)
        })
    })
}

/// Definitions evaluated literally on boolean matrices.
pub struct Brute {
    pub n: usize,
    pub m: usize,
    pub sup: Vec<Vec<bool>>,
    pub e: Vec<Vec<bool>>,
    pub ne: Vec<Vec<bool>>,
    pub all: Vec<Vec<bool>>,
}

impl Brute {
    pub fn new(sit: &DecisionSituation) -> Self {
        let n = sit.n_args();
        let m = sit.n_props();
        let persp = sit.perspectives().expect("oracle needs perspectives");
        let mut e = vec![vec![false; n]; n];
        let mut ne = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                e[a][b] = persp.iter().any(|(_, r)| r.contains(Arg(a), Arg(b)));
                ne[a][b] = persp.iter().any(|(_, r)| !r.contains(Arg(a), Arg(b)));
            }
        }
        let all = ne.iter().map(|row| row.iter().map(|x| !x).collect()).collect();
        let sup = (0..n)
            .map(|a| {
                (0..m)
                    .map(|t| sit.supports(Arg(a), crate::ids::Prop(t)))
                    .collect()
            })
            .collect();
        Brute { n, m, sup, e, ne, all }
    }

    pub fn decisive(&self, s: usize) -> bool {
        (0..self.n).all(|c| !self.e[c][s])
    }

    pub fn justifiable(&self, t: usize) -> bool {
        (0..self.n).any(|s| self.sup[s][t] && self.decisive(s))
    }

    /// `set` (as bool vector) replaces `s`.
    pub fn replaces(&self, set: &[bool], s: usize) -> bool {
        (0..self.n).all(|x| !self.e[s][x] || (0..self.n).any(|y| set[y] && self.e[y][x]))
            && (0..self.m).all(|t| !self.sup[s][t] || (0..self.n).any(|y| set[y] && self.sup[y][t]))
    }

    pub fn essentially_replaces(&self, gamma: &[bool], set: &[bool], s: usize) -> bool {
        (0..self.n).all(|x| {
            !(self.e[s][x] && gamma[x]) || (0..self.n).any(|y| set[y] && self.e[y][x])
        }) && (0..self.m)
            .all(|t| !self.sup[s][t] || (0..self.n).any(|y| set[y] && self.sup[y][t]))
    }

    pub fn gamma_dec(&self, gamma: &[bool]) -> Vec<bool> {
        (0..self.n).map(|s| gamma[s] && self.decisive(s)).collect()
    }

    pub fn gamma_res(&self, gamma: &[bool]) -> Vec<bool> {
        let dec = self.gamma_dec(gamma);
        (0..self.n)
            .map(|s| gamma[s] && !(0..self.n).any(|d| dec[d] && self.e[d][s]))
            .collect()
    }

    pub fn unnecessary(&self, gamma: &[bool], s: usize) -> bool {
        let res = self.gamma_res(gamma);
        (0..self.n).any(|r| res[r] && self.e[r][s]) || self.essentially_replaces(gamma, &res, s)
    }

    pub fn covering(&self, gamma: &[bool]) -> bool {
        (0..self.n).all(|s| gamma[s] || self.unnecessary(gamma, s))
    }

    pub fn answerable(&self, gamma: Option<&[bool]>) -> bool {
        (0..self.n).all(|sp| {
            gamma.is_some_and(|g| !g[sp])
                || (0..self.n).all(|s| {
                    !(self.e[sp][s] && self.ne[sp][s]) || (0..self.n).any(|c| self.e[c][sp])
                })
        })
    }

    pub fn gamma_reinstatement(&self, gamma: &[bool]) -> bool {
        let n = self.n;
        (0..n).all(|s1| {
            (0..n).all(|s3| {
                if !gamma[s1] || !gamma[s3] || s1 == s3 || !self.decisive(s3) || self.e[s3][s1] {
                    return true;
                }
                (0..n).any(|s| {
                    let single: Vec<bool> = (0..n).map(|x| x == s).collect();
                    gamma[s]
                        && self.replaces(&single, s1)
                        && (0..n).all(|c| !self.e[c][s] || (self.e[c][s1] && !self.all[s3][c]))
                })
            })
        })
    }

    pub fn global_reinstatement(&self) -> bool {
        let n = self.n;
        (0..n).all(|s1| {
            (0..n).all(|s2| {
                (0..n).all(|s3| {
                    let distinct = s1 != s2 && s2 != s3 && s1 != s3;
                    if !distinct || !self.decisive(s3) || !self.all[s3][s2] || !self.e[s2][s1] {
                        return true;
                    }
                    (0..n).any(|s| {
                        let single: Vec<bool> = (0..n).map(|x| x == s).collect();
                        self.replaces(&single, s1)
                            && (0..n).all(|c| !self.e[c][s] || (self.e[c][s1] && c != s2))
                    })
                })
            })
        })
    }

    /// `defenders` defends `s` (all decisive, always-trumping every trumper).
    pub fn set_defends(&self, defenders: &[usize], s: usize) -> bool {
        (0..self.n).all(|c| !self.e[c][s] || defenders.iter().any(|&d| self.all[d][c]))
    }

    /// Smallest defender set size among decisive gamma members, by subset enumeration.
    pub fn min_defenders(&self, gamma: &[bool], s: usize) -> Option<usize> {
        let cands: Vec<usize> = (0..self.n).filter(|&d| gamma[d] && self.decisive(d)).collect();
        (0u32..(1 << cands.len()))
            .filter(|mask| {
                let chosen: Vec<usize> = cands
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &d)| d)
                    .collect();
                self.set_defends(&chosen, s)
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
    }

    pub fn finitely_defended(&self, gamma: &[bool], s: usize) -> bool {
        let dec = self.gamma_dec(gamma);
        (0..self.n).all(|c| !self.e[c][s] || (0..self.n).any(|d| dec[d] && self.e[d][c]))
    }

    /// `Q` on gamma as a matrix.
    pub fn q(&self, gamma: &[bool]) -> Vec<Vec<bool>> {
        let n = self.n;
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        gamma[a]
                            && gamma[b]
                            && (self.e[a][b] || (0..n).any(|c| self.e[a][c] && self.e[c][b]))
                    })
                    .collect()
            })
            .collect()
    }

    /// Smallest k in 1..=n+1 with `Q^(k+1)` empty, by matrix powers.
    pub fn min_length(&self, gamma: &[bool]) -> Option<usize> {
        let q = self.q(gamma);
        let n = self.n;
        let compose = |a: &Vec<Vec<bool>>, b: &Vec<Vec<bool>>| -> Vec<Vec<bool>> {
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
                .collect()
        };
        let mut power = q.clone();
        for k in 1..=n + 1 {
            power = compose(&power, &q);
            if power.iter().flatten().all(|x| !x) {
                return Some(k);
            }
        }
        None
    }

    pub fn efficient(&self, set: &[bool]) -> bool {
        let dec: Vec<bool> = (0..self.n).map(|s| set[s] && self.decisive(s)).collect();
        (0..self.m).all(|t| {
            let ti = self.justifiable(t);
            let supported = (0..self.n).any(|s| dec[s] && self.sup[s][t]);
            let beaten = (0..self.n)
                .all(|s| !self.sup[s][t] || (0..self.n).any(|d| dec[d] && self.all[d][s]));
            ti == supported && (!ti) == beaten
        })
    }
}

pub fn bools(set: &ArgSet) -> Vec<bool> {
    (0..set.universe()).map(|i| set.contains(Arg(i))).collect()
}

/// Random models over a situation: arbitrary support and counter claims.
pub fn arb_model(sit: &DecisionSituation) -> impl Strategy<Value = crate::model::Model> {
    let n = sit.n_args();
    let m = sit.n_props();
    (
        proptest::collection::vec(proptest::bool::weighted(0.3), n * m),
        proptest::collection::vec(proptest::bool::weighted(0.2), n * n),
    )
        .prop_map(move |(sup, cnt)| {
            crate::model::Model::new(
                (0..n * m)
                    .filter(|&i| sup[i])
                    .map(|i| (Arg(i / m), crate::ids::Prop(i % m))),
                (0..n * n)
                    .filter(|&i| cnt[i] && i / n != i % n)
                    .map(|i| (Arg(i / n), Arg(i % n))),
            )
            .expect("no self counters")
        })
}

pub fn arb_case(
    max_args: usize,
    max_props: usize,
    max_perspectives: usize,
) -> impl Strategy<Value = (DecisionSituation, ArgSet, crate::model::Model)> {
    arb_situation_with_subset(max_args, max_props, max_perspectives).prop_flat_map(
        |(sit, gamma)| {
            let model = arb_model(&sit);
            (Just(sit), Just(gamma), model)
        },
    )
}

impl Brute {
    /// Literal operational validity restricted to `gamma`.
    pub fn gamma_operationally_valid(&self, gamma: &[bool], model: &crate::model::Model) -> bool {
        let n = self.n;
        let counters = |x: usize| {
            (0..n).any(|cc| model.counter_claims.contains(&(Arg(cc), Arg(x))) && self.e[cc][x])
        };
        let clause_a = model.support_claims.iter().all(|&(s, t)| {
            self.sup[s.0][t.0]
                && (0..n).all(|c| !gamma[c] || self.ne[c][s.0] || counters(c))
        });
        let claimed: Vec<bool> = (0..self.m)
            .map(|t| model.support_claims.iter().any(|&(_, u)| u.0 == t))
            .collect();
        let clause_b = (0..self.m).all(|t| {
            claimed[t] || (0..n).all(|s| !gamma[s] || !self.sup[s][t] || counters(s))
        });
        clause_a && clause_b
    }
}
