//! Shared inputs for the benchmarks.

use dj_core::generate::{derive_seed, gen_random};
use dj_core::model::synthesize_model;
use dj_core::{DecisionSituation, GenParams, Model, Profile};

/// Generated situations of the given size, one per seed in `0..count`.
pub fn situations(n_args: usize, profile: Profile, count: usize) -> Vec<DecisionSituation> {
    (0..count as u64)
        .filter_map(|i| {
            let params = GenParams {
                seed: derive_seed(0xbe7c, i),
                n_props: 3,
                n_args,
                n_perspectives: 3,
                support_density: 0.3,
                trump_density: 0.25,
                ambivalence_rate: 0.2,
                profile,
            };
            gen_random(&params).ok()
        })
        .collect()
}

/// Clear-cut situations paired with their synthesized models.
pub fn with_models(sits: Vec<DecisionSituation>) -> Vec<(DecisionSituation, Model)> {
    sits.into_iter()
        .filter_map(|s| synthesize_model(&s).ok().map(|m| (s, m)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_nonempty() {
        let sits = situations(8, Profile::CacEnforced, 8);
        assert!(!sits.is_empty());
        assert!(!with_models(sits).is_empty());
    }
}
