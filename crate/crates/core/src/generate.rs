//! Deterministic random situations and the reinstatement/answerability repair.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conditions::{answerability, check_cac, gamma_closed_under_reinstatement, Scope};
use crate::error::{CoreError, Result};
use crate::ids::Arg;
use crate::situation::{DecisionSituation, DraftRelations, SituationDraft, TrumpEncoding};

/// Prefix of arguments added by [`enforce_cac`].
pub const SYNTHETIC_PREFIX: &str = "~r";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// Trumps between any two distinct arguments.
    Free,
    /// Trumps only from a higher layer to a lower one, so `▷∃` is acyclic.
    Layered,
    /// Layered, then repaired until the whole argument set is CAC.
    CacEnforced,
}

impl Profile {
    pub fn as_str(&self) -> &'static str {
        match self {
            Profile::Free => "free",
            Profile::Layered => "layered",
            Profile::CacEnforced => "cac-enforced",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "free" => Ok(Profile::Free),
            "layered" => Ok(Profile::Layered),
            "cac-enforced" => Ok(Profile::CacEnforced),
            other => Err(CoreError::Parameter(format!("unknown profile {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub seed: u64,
    pub n_props: usize,
    pub n_args: usize,
    pub n_perspectives: usize,
    pub support_density: f64,
    pub trump_density: f64,
    /// Probability that a trump pair is removed from some, but not all, perspectives.
    pub ambivalence_rate: f64,
    pub profile: Profile,
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("n_props", self.n_props),
            ("n_args", self.n_args),
            ("n_perspectives", self.n_perspectives),
        ] {
            if value == 0 {
                return Err(CoreError::Parameter(format!("{name} must be positive")));
            }
        }
        for (name, value) in [
            ("support_density", self.support_density),
            ("trump_density", self.trump_density),
            ("ambivalence_rate", self.ambivalence_rate),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(CoreError::Parameter(format!("{name} must lie in [0, 1]")));
            }
        }
        Ok(())
    }
}

fn pad(n: usize) -> usize {
    n.saturating_sub(1).to_string().len()
}

/// Per-perspective trump pairs over indexed arguments.
struct Layout {
    args: Vec<String>,
    props: Vec<String>,
    support: Vec<(usize, usize)>,
    perspectives: Vec<(String, Vec<Vec<bool>>)>,
}

impl Layout {
    fn draft(&self) -> SituationDraft {
        let mut perspectives = Vec::new();
        for (name, m) in &self.perspectives {
            let mut pairs = Vec::new();
            for (a, row) in m.iter().enumerate() {
                for (b, &on) in row.iter().enumerate() {
                    if on {
                        pairs.push((self.args[a].clone(), self.args[b].clone()));
                    }
                }
            }
            perspectives.push((name.clone(), pairs));
        }
        SituationDraft {
            propositions: self.props.clone(),
            arguments: self.args.clone(),
            support: self
                .support
                .iter()
                .map(|&(a, t)| (self.args[a].clone(), self.props[t].clone()))
                .collect(),
            relations: DraftRelations::Perspectives(perspectives),
        }
    }

    fn from_situation(sit: &DecisionSituation) -> Self {
        let n = sit.n_args();
        let matrix = |rel: &crate::relation::Relation| -> Vec<Vec<bool>> {
            (0..n)
                .map(|a| (0..n).map(|b| rel.contains(Arg(a), Arg(b))).collect())
                .collect()
        };
        let perspectives = match sit.encoding() {
            TrumpEncoding::Perspectives(ps) => ps
                .iter()
                .map(|(name, rel)| (name.clone(), matrix(rel)))
                .collect(),
            TrumpEncoding::Direct {
                trumps_exists,
                ambivalent,
            } => {
                let partial = trumps_exists.intersection(&ambivalent.complement());
                vec![
                    ("all".to_string(), matrix(trumps_exists)),
                    ("partial".to_string(), matrix(&partial)),
                ]
            }
        };
        Layout {
            args: sit.arg_names().to_vec(),
            props: sit.prop_names().to_vec(),
            support: sit.support().pairs().map(|(a, t)| (a.0, t.0)).collect(),
            perspectives,
        }
    }

    fn add_arg(&mut self, name: String) -> usize {
        self.args.push(name);
        let n = self.args.len();
        for (_, m) in &mut self.perspectives {
            for row in m.iter_mut() {
                row.push(false);
            }
            m.push(vec![false; n]);
        }
        n - 1
    }
}

/// Generates a situation. With the cac-enforced profile the result may use
/// fewer original arguments so that, after repair, it has at most `n_args`.
pub fn gen_random(params: &GenParams) -> Result<DecisionSituation> {
    params.validate()?;
    match params.profile {
        Profile::Free | Profile::Layered => Ok(generate(params, params.n_args, params.seed)),
        Profile::CacEnforced => {
            let mut base = (params.n_args * 2).div_ceil(3).max(1);
            loop {
                for attempt in 0..16u64 {
                    let seed = derive_seed(params.seed, attempt);
                    let sit = generate(params, base, seed);
                    if let Ok(repaired) = enforce_cac(&sit) {
                        if repaired.n_args() <= params.n_args {
                            return Ok(repaired);
                        }
                    }
                }
                if base == 1 {
                    return Err(CoreError::NonConvergence { added: 0 });
                }
                base -= 1;
            }
        }
    }
}

/// SplitMix64 step of `seed` offset by `index`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn generate(params: &GenParams, n: usize, seed: u64) -> DecisionSituation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = params.n_perspectives;
    let args: Vec<String> = (0..n).map(|i| format!("a{i:0w$}", w = pad(n))).collect();
    let props: Vec<String> = (0..params.n_props)
        .map(|i| format!("t{i:0w$}", w = pad(params.n_props)))
        .collect();
    let mut support = Vec::new();
    for a in 0..n {
        for t in 0..params.n_props {
            if rng.random_bool(params.support_density) {
                support.push((a, t));
            }
        }
    }
    let layered = params.profile != Profile::Free;
    let layers = ((n as f64).sqrt().ceil() as usize).max(2);
    let layer: Vec<usize> = (0..n).map(|_| rng.random_range(0..layers)).collect();
    let mut perspectives: Vec<(String, Vec<Vec<bool>>)> = (0..k)
        .map(|i| (format!("p{i}"), vec![vec![false; n]; n]))
        .collect();
    for a in 0..n {
        for b in 0..n {
            let allowed = a != b && (!layered || layer[a] > layer[b]);
            if !allowed || !rng.random_bool(params.trump_density) {
                continue;
            }
            for (_, m) in perspectives.iter_mut() {
                m[a][b] = true;
            }
            if k > 1 && rng.random_bool(params.ambivalence_rate) {
                let mut order: Vec<usize> = (0..k).collect();
                order.shuffle(&mut rng);
                let removed = rng.random_range(1..k);
                for &p in &order[..removed] {
                    perspectives[p].1[a][b] = false;
                }
            }
        }
    }
    let layout = Layout {
        args,
        props,
        support,
        perspectives,
    };
    DecisionSituation::from_draft(&layout.draft()).expect("generated situation is valid")
}

/// Adds synthetic arguments until the whole argument set is CAC.
///
/// A reinstatement failure `(s1, s3)` gets a copy of `s1` with the same
/// supports and trumps, trumped only by those trumpers of `s1` that `s3` does
/// not always trump. An answerability failure gets a new argument trumping the
/// ambivalent trumper in every perspective. Direct encodings are repaired on
/// their two-perspective form and returned in direct form.
pub fn enforce_cac(sit: &DecisionSituation) -> Result<DecisionSituation> {
    if !sit.trumps().is_acyclic() {
        return Err(CoreError::Cyclic);
    }
    let direct = matches!(sit.encoding(), TrumpEncoding::Direct { .. });
    let limit = sit.n_args() * 4;
    let mut layout = Layout::from_situation(sit);
    let mut current = sit.clone();
    let mut added = 0;
    loop {
        if check_cac(&current, &current.all_args()).is_cac() {
            break;
        }
        if added >= limit {
            return Err(CoreError::NonConvergence { added });
        }
        let name = format!("{SYNTHETIC_PREFIX}{added}");
        let all = current.all_args();
        if let Some(&(trumper, _)) = answerability(&current, Scope::Gamma(&all)).witnesses.first() {
            let r = layout.add_arg(name);
            for (_, m) in &mut layout.perspectives {
                m[r][trumper.0] = true;
            }
        } else if let Some(&(s1, s3)) = gamma_closed_under_reinstatement(&current, &all)
            .witnesses
            .first()
        {
            let r = layout.add_arg(name);
            let supports: Vec<usize> = current.support().supported_by(s1).iter().map(|t| t.0).collect();
            for t in supports {
                layout.support.push((r, t));
            }
            let keep = current
                .trumps()
                .preimage(s1)
                .difference(current.always_trumps().image(s3));
            for (_, m) in &mut layout.perspectives {
                for x in 0..r {
                    m[r][x] = m[s1.0][x];
                    m[x][r] = keep.contains(Arg(x)) && m[x][s1.0];
                }
            }
        } else {
            unreachable!("acyclic situations only fail reinstatement or answerability on the whole set");
        }
        added += 1;
        current = DecisionSituation::from_draft(&layout.draft())?;
    }
    Ok(if direct { current.to_direct() } else { current })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::global_conditions;
    use crate::fixtures::{budget, flicker, weather};
    use proptest::prelude::*;

    fn params(profile: Profile, seed: u64) -> GenParams {
        GenParams {
            seed,
            n_props: 3,
            n_args: 9,
            n_perspectives: 3,
            support_density: 0.35,
            trump_density: 0.3,
            ambivalence_rate: 0.3,
            profile,
        }
    }

    #[test]
    fn deterministic() {
        for profile in [Profile::Free, Profile::Layered, Profile::CacEnforced] {
            let p = params(profile, 42);
            assert_eq!(gen_random(&p).unwrap(), gen_random(&p).unwrap());
        }
    }

    #[test]
    fn zero_density_is_all_decisive() {
        let mut p = params(Profile::Free, 1);
        p.trump_density = 0.0;
        let sit = gen_random(&p).unwrap();
        assert_eq!(sit.decisive().len(), sit.n_args());
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut p = params(Profile::Free, 1);
        p.n_args = 0;
        assert!(gen_random(&p).is_err());
        let mut p = params(Profile::Free, 1);
        p.trump_density = 1.5;
        assert!(gen_random(&p).is_err());
    }

    #[test]
    fn identifiers_sort_numerically() {
        let mut p = params(Profile::Free, 3);
        p.n_args = 12;
        let sit = gen_random(&p).unwrap();
        assert_eq!(sit.arg_names()[2], "a02");
        assert_eq!(sit.arg_names()[11], "a11");
    }

    #[test]
    fn repairs_weather_without_s() {
        let mut draft = weather().to_draft();
        draft.arguments.retain(|a| a != "s");
        draft.support.retain(|(a, _)| a != "s");
        let sit = DecisionSituation::from_draft(&draft).unwrap();
        let repaired = enforce_cac(&sit).unwrap();
        assert_eq!(repaired.n_args(), 4);
        let r = repaired.arg("~r0").unwrap();
        let s1 = repaired.arg("s1").unwrap();
        assert!(repaired.trumps().preimage(r).is_empty());
        assert_eq!(repaired.support().supported_by(r), repaired.support().supported_by(s1));
        assert!(check_cac(&repaired, &repaired.all_args()).is_cac());
    }

    #[test]
    fn cac_input_unchanged() {
        let sit = budget();
        assert_eq!(enforce_cac(&sit).unwrap(), sit);
    }

    #[test]
    fn flicker_gets_a_trumper_of_s2() {
        let repaired = enforce_cac(&flicker()).unwrap();
        let s2 = repaired.arg("s2").unwrap();
        let r = repaired.arg("~r0").unwrap();
        assert!(repaired.always_trumps().contains(r, s2));
        assert!(check_cac(&repaired, &repaired.all_args()).is_cac());
    }

    #[test]
    fn direct_encoding_preserved() {
        let repaired = enforce_cac(&flicker().to_direct()).unwrap();
        assert!(matches!(repaired.encoding(), TrumpEncoding::Direct { .. }));
        assert!(check_cac(&repaired, &repaired.all_args()).is_cac());
    }

    #[test]
    fn cyclic_input_rejected() {
        let sit = crate::testing::situation_from(2, 1, &[], &[vec![(0, 1), (1, 0)]]);
        assert!(matches!(enforce_cac(&sit), Err(CoreError::Cyclic)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn generated_instances_respect_profile(seed in any::<u64>(), k in 1usize..5, amb in 0.0f64..0.6) {
            for profile in [Profile::Free, Profile::Layered, Profile::CacEnforced] {
                let mut p = params(profile, seed);
                p.n_perspectives = k;
                p.ambivalence_rate = amb;
                let sit = gen_random(&p).unwrap();
                prop_assert!(sit.n_args() <= p.n_args);
                prop_assert_eq!(sit.perspectives().unwrap().len(), k);
                if profile != Profile::Free {
                    prop_assert!(global_conditions(&sit).acyclic);
                }
                if profile == Profile::CacEnforced {
                    prop_assert!(check_cac(&sit, &sit.all_args()).is_cac());
                    prop_assert_eq!(enforce_cac(&sit).unwrap(), sit.clone());
                }
            }
        }

        #[test]
        fn repair_is_idempotent(seed in any::<u64>()) {
            let sit = gen_random(&params(Profile::Layered, seed)).unwrap();
            if let Ok(once) = enforce_cac(&sit) {
                prop_assert!(check_cac(&once, &once.all_args()).is_cac());
                prop_assert_eq!(enforce_cac(&once).unwrap(), once);
            }
        }
    }
}
