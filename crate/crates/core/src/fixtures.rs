//! Bundled reference situations.
//!
//! - `weather`: a forecast argument `s1` trumped by `s2`, itself trumped by the
//!   decisive `s3`; the composite `s` supports `t` and is decisive.
//! - `variant`: two untrumped forecasts supporting contrary propositions.
//! - `budget`: the budget-reform situation with two counter-arguments, their
//!   counter-counter-arguments and three reinstated variants of `s`.
//! - `flicker`: `s2` trumps `s1` in one perspective only, so `t` is neither
//!   justifiable nor untenable.

use crate::io::{parse_instance, parse_model_doc, ModelDoc};
use crate::situation::DecisionSituation;

pub const WEATHER: &str = include_str!("../fixtures/weather.json");
pub const VARIANT: &str = include_str!("../fixtures/variant.json");
pub const BUDGET: &str = include_str!("../fixtures/budget.json");
pub const FLICKER: &str = include_str!("../fixtures/flicker.json");
pub const BUDGET_MODEL: &str = include_str!("../fixtures/budget_model.json");

/// Named fixtures, in listing order.
pub const ALL: &[(&str, &str)] = &[
    ("budget", BUDGET),
    ("flicker", FLICKER),
    ("variant", VARIANT),
    ("weather", WEATHER),
];

pub fn by_name(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

fn load(text: &str) -> DecisionSituation {
    parse_instance(text).expect("bundled fixture is valid")
}

pub fn weather() -> DecisionSituation {
    load(WEATHER)
}

pub fn variant() -> DecisionSituation {
    load(VARIANT)
}

pub fn budget() -> DecisionSituation {
    load(BUDGET)
}

pub fn flicker() -> DecisionSituation {
    load(FLICKER)
}

pub fn budget_model_doc() -> ModelDoc {
    parse_model_doc(BUDGET_MODEL).expect("bundled model is valid")
}
