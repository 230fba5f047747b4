//! Simulated decision-makers answering trump and support queries from their
//! current perspective.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::ids::{Arg, Prop};
use crate::situation::DecisionSituation;

/// A question put to the decision-maker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Query {
    /// Does the first argument trump the second?
    Trump(Arg, Arg),
    /// Does the argument support the proposition?
    Support(Arg, Prop),
}

impl Query {
    pub fn kind(&self) -> &'static str {
        match self {
            Query::Trump(..) => "trump",
            Query::Support(..) => "support",
        }
    }

    pub fn names(&self, sit: &DecisionSituation) -> (String, String) {
        match *self {
            Query::Trump(a, b) => (sit.arg_name(a).into(), sit.arg_name(b).into()),
            Query::Support(a, t) => (sit.arg_name(a).into(), sit.prop_name(t).into()),
        }
    }

    pub fn from_names(sit: &DecisionSituation, kind: &str, pair: (&str, &str)) -> Result<Self> {
        match kind {
            "trump" => Ok(Query::Trump(sit.arg(pair.0)?, sit.arg(pair.1)?)),
            "support" => Ok(Query::Support(sit.arg(pair.0)?, sit.prop(pair.1)?)),
            other => Err(CoreError::Format(format!("unknown query kind {other:?}"))),
        }
    }

    /// Ground truth for a "yes": trump pairs must be in `▷∃`, support pairs in `⇝`.
    pub fn yes_is_sound(&self, sit: &DecisionSituation) -> bool {
        match *self {
            Query::Trump(a, b) => sit.trumps().contains(a, b),
            Query::Support(a, t) => sit.supports(a, t),
        }
    }

    /// Ground truth for a "no": trump pairs must be in `⋫∃`, support pairs outside `⇝`.
    pub fn no_is_sound(&self, sit: &DecisionSituation) -> bool {
        match *self {
            Query::Trump(a, b) => sit.not_trumps().contains(a, b),
            Query::Support(a, t) => !sit.supports(a, t),
        }
    }
}

/// A recorded answer. `perspective` is the perspective the agent answered
/// from, or `None` for answers given by a person.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryAnswer {
    pub query: Query,
    pub answer: bool,
    pub perspective: Option<String>,
}

/// How the current perspective evolves after each query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    Static,
    /// Advance to the next perspective in identifier order.
    Cyclic,
    /// Jump to a perspective drawn from `(seed, query_count)`.
    SeededDrift { seed: u64 },
}

/// A decision-maker with a fixed perspective family.
#[derive(Clone, Debug)]
pub struct Agent {
    sit: DecisionSituation,
    current: usize,
    policy: Policy,
    query_count: u64,
}

impl Agent {
    /// Starts in `start`, or the first perspective when `None`.
    pub fn new(sit: DecisionSituation, policy: Policy, start: Option<&str>) -> Result<Self> {
        if sit.perspectives().is_none() {
            return Err(CoreError::NeedsPerspectives);
        }
        let mut agent = Agent {
            sit,
            current: 0,
            policy,
            query_count: 0,
        };
        if let Some(name) = start {
            agent.reset(name)?;
        }
        Ok(agent)
    }

    pub fn situation(&self) -> &DecisionSituation {
        &self.sit
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    pub fn query_count(&self) -> u64 {
        self.query_count
    }

    fn perspectives(&self) -> &[(String, crate::relation::Relation)] {
        self.sit.perspectives().expect("checked at construction")
    }

    pub fn current(&self) -> &str {
        &self.perspectives()[self.current].0
    }

    /// Sets the current perspective and zeroes the query counter.
    pub fn reset(&mut self, perspective: &str) -> Result<()> {
        self.current = self
            .perspectives()
            .iter()
            .position(|(name, _)| name == perspective)
            .ok_or_else(|| CoreError::UnknownPerspective(perspective.to_string()))?;
        self.query_count = 0;
        Ok(())
    }

    pub fn ask_trump(&mut self, s2: Arg, s1: Arg) -> QueryAnswer {
        let answer = self.perspectives()[self.current].1.contains(s2, s1);
        self.record(Query::Trump(s2, s1), answer)
    }

    pub fn ask_support(&mut self, s: Arg, t: Prop) -> QueryAnswer {
        let answer = self.sit.supports(s, t);
        self.record(Query::Support(s, t), answer)
    }

    pub fn ask(&mut self, query: Query) -> QueryAnswer {
        match query {
            Query::Trump(a, b) => self.ask_trump(a, b),
            Query::Support(a, t) => self.ask_support(a, t),
        }
    }

    fn record(&mut self, query: Query, answer: bool) -> QueryAnswer {
        let perspective = Some(self.current().to_string());
        self.query_count += 1;
        let k = self.perspectives().len();
        self.current = match self.policy {
            Policy::Static => self.current,
            Policy::Cyclic => (self.current + 1) % k,
            Policy::SeededDrift { seed } => drift_index(seed, self.query_count, k),
        };
        QueryAnswer {
            query,
            answer,
            perspective,
        }
    }
}

/// Perspective index after `count` queries under seeded drift.
fn drift_index(seed: u64, count: u64, k: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(count);
    rng.random_range(0..k)
}
