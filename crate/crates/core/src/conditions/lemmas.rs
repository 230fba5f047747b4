use super::{
    answerability, check_cac, covering, gamma_analysis, gamma_closed_under_reinstatement,
    is_defended, GammaAnalysis, Scope,
};
use crate::ids::ArgSet;
use crate::situation::DecisionSituation;

/// One implication: whether its hypotheses hold and, if so, its conclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub hypotheses: bool,
    pub conclusion: bool,
}

impl LemmaCheck {
    fn new(hypotheses: bool, conclusion: bool) -> Self {
        LemmaCheck {
            hypotheses,
            conclusion,
        }
    }

    /// The implication is not violated.
    pub fn holds(&self) -> bool {
        !self.hypotheses || self.conclusion
    }
}

/// The set identities linking the derived classes of a gamma to the deliberated
/// judgment.
#[derive(Clone, Debug)]
pub struct LemmaReport {
    /// Answerable and reinstatement-closed: `S_γdef ⊆ R_γdec`.
    pub defended_replaceable: LemmaCheck,
    /// Covering: every argument is essentially replaceable by `S_γres` or trumped by it.
    pub resistant_cover: LemmaCheck,
    /// CAC: `S_γres ⊆ S_γdef`.
    pub resistant_defended: LemmaCheck,
    /// CAC: every argument is essentially replaceable by `S_γdec` or trumped by it.
    pub decisive_cover: LemmaCheck,
    /// CAC: `⇝(E_γdec) ⊆ ⇝(S_γdec) ⊆ T_i ⊆ ⇝(S* ∖ ▷∀(S_γdec)) ⊆ ⇝(E_γdec)`.
    pub judgment_chain: LemmaCheck,
    /// Answerable: both defense notions agree on every member of gamma.
    pub defense_agreement: LemmaCheck,
}

impl LemmaReport {
    pub fn checks(&self) -> [(&'static str, LemmaCheck); 6] {
        [
            ("defended_replaceable", self.defended_replaceable),
            ("resistant_cover", self.resistant_cover),
            ("resistant_defended", self.resistant_defended),
            ("decisive_cover", self.decisive_cover),
            ("judgment_chain", self.judgment_chain),
            ("defense_agreement", self.defense_agreement),
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.holds())
    }
}

pub fn lemma_suite(sit: &DecisionSituation, gamma: &ArgSet) -> LemmaReport {
    let a: GammaAnalysis = gamma_analysis(sit, gamma);
    let answerable = answerability(sit, Scope::Gamma(gamma)).holds();
    let reinstated = gamma_closed_under_reinstatement(sit, gamma).holds();
    let covers = covering(sit, gamma).holds();
    let cac = check_cac(sit, gamma).is_cac();
    let all = sit.all_args();
    let e = sit.trumps();
    let supp = |set: &ArgSet| sit.support().supported_by_set(set);

    let defended_replaceable = LemmaCheck::new(
        answerable && reinstated,
        a.finitely_defended.is_subset(&a.replaceable_by_decisive),
    );
    let resistant_cover = LemmaCheck::new(
        covers,
        a.essentially_replaceable_by_resistant
            .union(&e.image_of(&a.resistant))
            == all,
    );
    let resistant_defended =
        LemmaCheck::new(cac, a.resistant.is_subset(&a.finitely_defended));
    let decisive_cover = LemmaCheck::new(
        cac,
        a.essentially_replaceable_by_decisive
            .union(&e.image_of(&a.decisive))
            == all,
    );
    let chain = [
        supp(&a.essentially_replaceable_by_decisive),
        supp(&a.decisive),
        sit.deliberated_judgment(),
        supp(&sit.always_trumps().image_of(&a.decisive).complement()),
        supp(&a.essentially_replaceable_by_decisive),
    ];
    let judgment_chain = LemmaCheck::new(cac, chain.windows(2).all(|w| w[0].is_subset(&w[1])));
    let defense_agreement = LemmaCheck::new(
        answerable,
        gamma
            .iter()
            .all(|s| is_defended(sit, gamma, s) == a.finitely_defended.contains(s)),
    );
    LemmaReport {
        defended_replaceable,
        resistant_cover,
        resistant_defended,
        decisive_cover,
        judgment_chain,
        defense_agreement,
    }
}
