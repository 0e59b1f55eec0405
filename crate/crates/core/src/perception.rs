//! Stochastic stand-ins for the evidential classifier and the human analyst.
//!
//! The AI produces a subjective-logic opinion (belief vector plus vacuity);
//! when vacuity exceeds `tau_u` the analyst contributes a base-rate prior and
//! the two are fused into the expected belief `P = b + a·u`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{argmax, MemberStatus, Opinion};

/// Mass left on each non-chosen class of an analyst prior.
pub const BASE_RATE_SMOOTHING: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierModel {
    pub p_correct_clean: f64,
    /// Accuracy of a compromised AI on inputs of the mission's target class.
    pub p_correct_compromised: f64,
    pub u_mean_clean: f64,
    pub u_mean_high: f64,
    pub p_ambiguous: f64,
    pub p_human_correct_clean: f64,
    pub p_human_correct_compromised: f64,
    /// Accuracy lost on an upload that a compromised UGV tampered with.
    pub corrupt_accuracy_penalty: f64,
}

impl Default for ClassifierModel {
    fn default() -> Self {
        Self {
            p_correct_clean: 0.90,
            p_correct_compromised: 0.40,
            u_mean_clean: 0.10,
            u_mean_high: 0.40,
            p_ambiguous: 0.20,
            p_human_correct_clean: 0.98,
            p_human_correct_compromised: 0.50,
            corrupt_accuracy_penalty: 0.20,
        }
    }
}

impl ClassifierModel {
    /// A model that always ranks the presented class first with low vacuity.
    pub fn perfect() -> Self {
        Self {
            p_correct_clean: 1.0,
            p_correct_compromised: 1.0,
            p_ambiguous: 0.0,
            p_human_correct_clean: 1.0,
            p_human_correct_compromised: 1.0,
            corrupt_accuracy_penalty: 0.0,
            ..Self::default()
        }
    }

    pub(crate) fn probabilities(&self) -> [(&'static str, f64); 8] {
        [
            ("p_correct_clean", self.p_correct_clean),
            ("p_correct_compromised", self.p_correct_compromised),
            ("u_mean_clean", self.u_mean_clean),
            ("u_mean_high", self.u_mean_high),
            ("p_ambiguous", self.p_ambiguous),
            ("p_human_correct_clean", self.p_human_correct_clean),
            ("p_human_correct_compromised", self.p_human_correct_compromised),
            ("corrupt_accuracy_penalty", self.corrupt_accuracy_penalty),
        ]
    }
}

/// What the AI is shown in one classification request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stimulus {
    /// Class actually depicted by the uploaded image.
    pub class: usize,
    /// Target class of the running mission; a backdoored model attacks it.
    pub mission_target: Option<usize>,
    /// The upload passed through a compromised UGV's tampering.
    pub corrupted: bool,
}

impl Stimulus {
    pub fn plain(class: usize) -> Self {
        Self { class, mission_target: None, corrupted: false }
    }
}

/// Uniformly picks a class other than `exclude`.
pub(crate) fn other_class<R: Rng + ?Sized>(exclude: usize, n_classes: usize, rng: &mut R) -> usize {
    debug_assert!(n_classes >= 2);
    let k = rng.random_range(0..n_classes - 1);
    if k >= exclude {
        k + 1
    } else {
        k
    }
}

pub fn ai_classify<R: Rng + ?Sized>(
    stimulus: Stimulus,
    n_classes: usize,
    status: MemberStatus,
    model: &ClassifierModel,
    rng: &mut R,
) -> Opinion {
    assert!(stimulus.class < n_classes, "class {} out of range", stimulus.class);

    let targeted = status.is_compromised() && stimulus.mission_target == Some(stimulus.class);
    let mut accuracy = if targeted { model.p_correct_compromised } else { model.p_correct_clean };
    if stimulus.corrupted {
        accuracy = (accuracy - model.corrupt_accuracy_penalty).max(0.0);
    }
    let winner = if n_classes < 2 || rng.random::<f64>() < accuracy {
        stimulus.class
    } else {
        other_class(stimulus.class, n_classes, rng)
    };

    let u_mean = if rng.random::<f64>() < model.p_ambiguous { model.u_mean_high } else { model.u_mean_clean };
    let vacuity = (u_mean * rng.random_range(0.5..=1.5)).clamp(0.0, 1.0);

    let evidence = 1.0 - vacuity;
    let w = rng.random_range(0.7..0.95);
    let mut belief = vec![0.0; n_classes];
    belief[winner] = evidence * w;
    if n_classes > 1 {
        let weights: Vec<f64> = (0..n_classes - 1).map(|_| rng.random::<f64>() + 1e-6).collect();
        let total: f64 = weights.iter().sum();
        let rest = evidence * (1.0 - w);
        let mut k = 0;
        for (i, b) in belief.iter_mut().enumerate() {
            if i != winner {
                *b = rest * weights[k] / total;
                k += 1;
            }
        }
    } else {
        belief[winner] = evidence;
    }
    // absorb rounding so the simplex constraint holds to machine precision
    let drift = 1.0 - vacuity - belief.iter().sum::<f64>();
    belief[winner] += drift;

    Opinion::with_uniform_prior(belief, vacuity).expect("generated opinion satisfies the simplex")
}

pub fn needs_human(opinion: &Opinion, tau_u: f64) -> bool {
    opinion.vacuity() > tau_u
}

/// Smoothed one-hot prior centred on the class the analyst believes.
pub fn human_base_rate<R: Rng + ?Sized>(
    true_class: usize,
    n_classes: usize,
    status: MemberStatus,
    model: &ClassifierModel,
    rng: &mut R,
) -> Vec<f64> {
    let accuracy = if status.is_compromised() {
        model.p_human_correct_compromised
    } else {
        model.p_human_correct_clean
    };
    let chosen = if n_classes < 2 || rng.random::<f64>() < accuracy {
        true_class
    } else {
        other_class(true_class, n_classes, rng)
    };
    smoothed_one_hot(chosen, n_classes)
}

pub fn smoothed_one_hot(chosen: usize, n_classes: usize) -> Vec<f64> {
    if n_classes == 1 {
        return vec![1.0];
    }
    let eps = BASE_RATE_SMOOTHING.min(0.5 / n_classes as f64);
    let mut a = vec![eps; n_classes];
    a[chosen] = 1.0 - eps * (n_classes - 1) as f64;
    a
}

/// Expected belief `P_i = b_i + a_i · u`.
pub fn fuse(opinion: &Opinion, base_rate: &[f64]) -> Result<Vec<f64>> {
    if base_rate.len() != opinion.n_classes() {
        return Err(Error::DimensionMismatch { expected: opinion.n_classes(), got: base_rate.len() });
    }
    let u = opinion.vacuity();
    Ok(opinion.belief().iter().zip(base_rate).map(|(b, a)| b + a * u).collect())
}

pub fn classify(expected_belief: &[f64]) -> usize {
    argmax(expected_belief)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const C: usize = 5;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn opinions_satisfy_simplex() {
        let mut r = rng(3);
        let m = ClassifierModel::default();
        for i in 0..2000 {
            let op = ai_classify(Stimulus::plain(i % C), C, MemberStatus::Active, &m, &mut r);
            let mass: f64 = op.belief().iter().sum::<f64>() + op.vacuity();
            assert!((mass - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn perfect_model_always_ranks_true_class_first() {
        let mut r = rng(4);
        let m = ClassifierModel { p_correct_clean: 1.0, p_ambiguous: 0.0, ..Default::default() };
        for i in 0..1000 {
            let op = ai_classify(Stimulus::plain(i % C), C, MemberStatus::Active, &m, &mut r);
            assert_eq!(op.top_class(), i % C);
        }
    }

    #[test]
    fn clean_accuracy_matches_model() {
        let mut r = rng(5);
        let m = ClassifierModel::default();
        let n = 10_000;
        let hits = (0..n)
            .filter(|i| {
                let op = ai_classify(Stimulus::plain(i % C), C, MemberStatus::Active, &m, &mut r);
                op.top_class() == i % C
            })
            .count();
        let acc = hits as f64 / n as f64;
        assert!((acc - 0.90).abs() < 0.01, "{acc}");
    }

    #[test]
    fn compromised_model_attacks_only_the_target_class() {
        let mut r = rng(6);
        let m = ClassifierModel::default();
        let n = 10_000;
        let on_target = Stimulus { class: 2, mission_target: Some(2), corrupted: false };
        let off_target = Stimulus { class: 1, mission_target: Some(2), corrupted: false };
        let acc = |s: Stimulus, r: &mut ChaCha8Rng| {
            (0..n).filter(|_| ai_classify(s, C, MemberStatus::Compromised, &m, r).top_class() == s.class).count()
                as f64
                / n as f64
        };
        let a_on = acc(on_target, &mut r);
        let a_off = acc(off_target, &mut r);
        assert!((a_on - 0.40).abs() < 0.015, "{a_on}");
        assert!((a_off - 0.90).abs() < 0.01, "{a_off}");
    }

    #[test]
    fn escalation_threshold_is_strict() {
        let at = Opinion::with_uniform_prior(vec![0.75, 0.0, 0.0, 0.0, 0.0], 0.25).unwrap();
        assert!(!needs_human(&at, 0.25));
        let above = Opinion::with_uniform_prior(vec![0.74, 0.0, 0.0, 0.0, 0.0], 0.26).unwrap();
        assert!(needs_human(&above, 0.25));
        let tiny = Opinion::with_uniform_prior(vec![0.999, 0.0, 0.0, 0.0, 0.0], 0.001).unwrap();
        assert!(needs_human(&tiny, 0.0));
    }

    #[test]
    fn escalation_rate_matches_vacuity_mass() {
        // vacuity is U(0.2, 0.6) on ambiguous draws, U(0.05, 0.15) otherwise,
        // so P(u > 0.25) = p_ambiguous * 0.35 / 0.4
        let mut r = rng(8);
        let m = ClassifierModel::default();
        let n = 20_000;
        let esc = (0..n)
            .filter(|_| needs_human(&ai_classify(Stimulus::plain(0), C, MemberStatus::Active, &m, &mut r), 0.25))
            .count() as f64
            / n as f64;
        let expected = 0.2 * 0.35 / 0.4;
        let sigma = (expected * (1.0 - expected) / n as f64).sqrt();
        assert!((esc - expected).abs() < 4.0 * sigma, "{esc} vs {expected}");
    }

    #[test]
    fn perfect_analyst_prior_peaks_on_truth() {
        let mut r = rng(9);
        let m = ClassifierModel { p_human_correct_clean: 1.0, ..Default::default() };
        for c in 0..C {
            let a = human_base_rate(c, C, MemberStatus::Active, &m, &mut r);
            assert_eq!(argmax(&a), c);
            assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn compromised_analyst_hit_rate() {
        let mut r = rng(10);
        let m = ClassifierModel::default();
        let n = 10_000;
        let hits = (0..n)
            .filter(|_| argmax(&human_base_rate(3, C, MemberStatus::Compromised, &m, &mut r)) == 3)
            .count() as f64
            / n as f64;
        assert!((hits - 0.5).abs() < 0.015, "{hits}");
    }

    #[test]
    fn fuse_hand_example() {
        let op = Opinion::with_uniform_prior(vec![0.2, 0.3, 0.1, 0.1, 0.05], 0.25).unwrap();
        let p = fuse(&op, &[0.2; 5]).unwrap();
        let expected = [0.25, 0.35, 0.15, 0.15, 0.10];
        for (x, e) in p.iter().zip(expected) {
            assert!((x - e).abs() < 1e-12);
        }
        assert_eq!(classify(&p), 1);
    }

    #[test]
    fn fuse_degenerate_cases() {
        let b = vec![0.1, 0.6, 0.3];
        let op = Opinion::with_uniform_prior(b.clone(), 0.0).unwrap();
        assert_eq!(fuse(&op, &[0.5, 0.25, 0.25]).unwrap(), b);

        let a = vec![0.5, 0.25, 0.25];
        let op = Opinion::with_uniform_prior(vec![0.0; 3], 1.0).unwrap();
        assert_eq!(fuse(&op, &a).unwrap(), a);

        assert!(matches!(fuse(&op, &[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    fn arb_opinion_and_prior() -> impl Strategy<Value = (Vec<f64>, f64, Vec<f64>)> {
        (2usize..8).prop_flat_map(|n| {
            (
                proptest::collection::vec(0.0f64..1.0, n),
                0.0f64..=1.0,
                proptest::collection::vec(0.001f64..1.0, n),
            )
        })
        .prop_map(|(raw_b, u, raw_a)| {
            let sb: f64 = raw_b.iter().sum::<f64>().max(1e-12);
            let b: Vec<f64> = raw_b.iter().map(|x| x / sb * (1.0 - u)).collect();
            let sa: f64 = raw_a.iter().sum();
            let a: Vec<f64> = raw_a.iter().map(|x| x / sa).collect();
            (b, u, a)
        })
    }

    proptest! {
        #[test]
        fn fuse_preserves_mass((b, u, a) in arb_opinion_and_prior()) {
            let op = Opinion::with_uniform_prior(b, u).unwrap();
            let p = fuse(&op, &a).unwrap();
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn fuse_commutes_with_class_permutation((b, u, a) in arb_opinion_and_prior(), shift in 0usize..8) {
            let n = b.len();
            let rot = |v: &[f64]| -> Vec<f64> { (0..n).map(|i| v[(i + shift) % n]).collect() };
            let p = fuse(&Opinion::with_uniform_prior(b.clone(), u).unwrap(), &a).unwrap();
            let p_rot = fuse(&Opinion::with_uniform_prior(rot(&b), u).unwrap(), &rot(&a)).unwrap();
            prop_assert_eq!(rot(&p), p_rot.clone());
            // argmax moves with the permutation (ties aside)
            let best = p.iter().cloned().fold(f64::MIN, f64::max);
            prop_assert!((p_rot[classify(&p_rot)] - best).abs() < 1e-15);
        }
    }
}
