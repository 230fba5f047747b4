//! Binary relations over arguments and the support relation.
//!
//! Conventions: for a relation `R` and argument `s`, `R.image(s)` is the forward
//! image `{x : s R x}` and `R.preimage(s)` the preimage `{x : x R s}`; for a set,
//! the image is the union of member images.

use crate::ids::{Arg, ArgSet, Prop, PropSet};

/// A relation over `n` arguments, stored as forward and backward adjacency bitsets.
#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    forward: Vec<ArgSet>,
    backward: Vec<ArgSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            forward: vec![ArgSet::empty(n); n],
            backward: vec![ArgSet::empty(n); n],
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (Arg, Arg)>) -> Self {
        let mut rel = Relation::empty(n);
        for (a, b) in pairs {
            rel.insert(a, b);
        }
        rel
    }

    pub fn size(&self) -> usize {
        self.forward.len()
    }

    pub fn insert(&mut self, from: Arg, to: Arg) {
        self.forward[from.0].insert(to);
        self.backward[to.0].insert(from);
    }

    pub fn contains(&self, from: Arg, to: Arg) -> bool {
        self.forward[from.0].contains(to)
    }

    pub fn image(&self, from: Arg) -> &ArgSet {
        &self.forward[from.0]
    }

    pub fn preimage(&self, to: Arg) -> &ArgSet {
        &self.backward[to.0]
    }

    pub fn image_of(&self, set: &ArgSet) -> ArgSet {
        let mut out = ArgSet::empty(self.size());
        for a in set.iter() {
            out.union_with(&self.forward[a.0]);
        }
        out
    }

    pub fn preimage_of(&self, set: &ArgSet) -> ArgSet {
        let mut out = ArgSet::empty(self.size());
        for a in set.iter() {
            out.union_with(&self.backward[a.0]);
        }
        out
    }

    /// All pairs in lexicographic index order.
    pub fn pairs(&self) -> impl Iterator<Item = (Arg, Arg)> + '_ {
        self.forward
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |j| (Arg(i), j)))
    }

    pub fn len(&self) -> usize {
        self.forward.iter().map(ArgSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.iter().all(ArgSet::is_empty)
    }

    /// Complement over the full square, diagonal included.
    pub fn complement(&self) -> Self {
        let n = self.size();
        let forward: Vec<ArgSet> = self.forward.iter().map(ArgSet::complement).collect();
        let backward = self.backward.iter().map(ArgSet::complement).collect();
        debug_assert_eq!(forward.len(), n);
        Relation { forward, backward }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation {
            forward: zip_with(&self.forward, &other.forward, ArgSet::union),
            backward: zip_with(&self.backward, &other.backward, ArgSet::union),
        }
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        Relation {
            forward: zip_with(&self.forward, &other.forward, ArgSet::intersection),
            backward: zip_with(&self.backward, &other.backward, ArgSet::intersection),
        }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.forward
            .iter()
            .zip(&other.forward)
            .all(|(a, b)| a.is_subset(b))
    }

    /// `a (self ∘ next) c` iff `a self b` and `b next c` for some `b`.
    pub fn then(&self, next: &Relation) -> Relation {
        let n = self.size();
        let mut out = Relation::empty(n);
        for a in 0..n {
            let reach = next.image_of(&self.forward[a]);
            for c in reach.iter() {
                out.insert(Arg(a), c);
            }
        }
        out
    }

    /// Keeps only pairs whose both ends lie in `set`.
    pub fn restrict(&self, set: &ArgSet) -> Relation {
        Relation::from_pairs(
            self.size(),
            self.pairs().filter(|(a, b)| set.contains(*a) && set.contains(*b)),
        )
    }

    /// True when the relation, read as a directed graph, has no cycle.
    pub fn is_acyclic(&self) -> bool {
        self.longest_path().is_some()
    }

    /// Number of edges on the longest path, or `None` if a cycle exists.
    pub fn longest_path(&self) -> Option<usize> {
        let n = self.size();
        let mut indegree: Vec<usize> = self.backward.iter().map(ArgSet::len).collect();
        let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut depth = vec![0usize; n];
        let mut seen = 0;
        while let Some(a) = queue.pop() {
            seen += 1;
            for b in self.forward[a].iter() {
                depth[b.0] = depth[b.0].max(depth[a] + 1);
                indegree[b.0] -= 1;
                if indegree[b.0] == 0 {
                    queue.push(b.0);
                }
            }
        }
        (seen == n).then(|| depth.into_iter().max().unwrap_or(0))
    }
}

fn zip_with(a: &[ArgSet], b: &[ArgSet], f: fn(&ArgSet, &ArgSet) -> ArgSet) -> Vec<ArgSet> {
    a.iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

impl std::fmt::Debug for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// The support relation `⇝` from arguments to propositions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    forward: Vec<PropSet>,
    backward: Vec<ArgSet>,
}

impl Support {
    pub fn from_pairs(
        n_args: usize,
        n_props: usize,
        pairs: impl IntoIterator<Item = (Arg, Prop)>,
    ) -> Self {
        let mut forward = vec![PropSet::empty(n_props); n_args];
        let mut backward = vec![ArgSet::empty(n_args); n_props];
        for (a, p) in pairs {
            forward[a.0].insert(p);
            backward[p.0].insert(a);
        }
        Support { forward, backward }
    }

    pub fn contains(&self, arg: Arg, prop: Prop) -> bool {
        self.forward[arg.0].contains(prop)
    }

    /// `⇝(s)`
    pub fn supported_by(&self, arg: Arg) -> &PropSet {
        &self.forward[arg.0]
    }

    /// `⇝⁻¹(t)`
    pub fn supporters(&self, prop: Prop) -> &ArgSet {
        &self.backward[prop.0]
    }

    /// `⇝(S)`
    pub fn supported_by_set(&self, set: &ArgSet) -> PropSet {
        let n_props = self.backward.len();
        let mut out = PropSet::empty(n_props);
        for a in set.iter() {
            out.union_with(&self.forward[a.0]);
        }
        out
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Arg, Prop)> + '_ {
        self.forward
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |p| (Arg(i), p)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_and_paths() {
        let r = Relation::from_pairs(3, [(Arg(2), Arg(1)), (Arg(1), Arg(0))]);
        let sq = r.then(&r);
        assert_eq!(sq.pairs().collect::<Vec<_>>(), vec![(Arg(2), Arg(0))]);
        assert_eq!(r.longest_path(), Some(2));
        let cyc = Relation::from_pairs(2, [(Arg(0), Arg(1)), (Arg(1), Arg(0))]);
        assert!(!cyc.is_acyclic());
    }

    #[test]
    fn complement_includes_diagonal() {
        let r = Relation::from_pairs(2, [(Arg(0), Arg(1))]);
        let c = r.complement();
        assert!(c.contains(Arg(0), Arg(0)));
        assert!(!c.contains(Arg(0), Arg(1)));
        assert_eq!(c.len(), 3);
        assert!(c.preimage(Arg(0)).contains(Arg(1)));
    }
}
