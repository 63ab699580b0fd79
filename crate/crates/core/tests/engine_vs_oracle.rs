mod oracle;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use venue_core::similarity::correlation;
use venue_core::{pearson, recommend, recommend_for, ParticipantRecommendations, RecommendationSet, SimilarityScore};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn recommend_matches_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (conf, cut) = oracle::random_instance(&mut rng, 20, 10);
        let got = recommend(&conf).unwrap();
        if let Err(e) = oracle::check_set(&got, &oracle::brute_force(&conf, &cut)) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn per_participant_calls_rebuild_the_full_set(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (conf, _) = oracle::random_instance(&mut rng, 20, 10);
        let mut union = RecommendationSet::default();
        for p in &conf.roster {
            let lists: ParticipantRecommendations = recommend_for(&conf, p).unwrap();
            union.insert(p.clone(), lists);
        }
        prop_assert_eq!(union, recommend(&conf).unwrap());
    }

    #[test]
    fn pearson_matches_direct_formula(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (conf, _) = oracle::random_instance(&mut rng, 10, 3);
        for a in &conf.roster {
            for b in conf.roster.iter().filter(|b| *b != a) {
                let (ra, rb) = (conf.ratings.of(a).unwrap(), conf.ratings.of(b).unwrap());
                let (xs, ys): (Vec<f64>, Vec<f64>) = ra
                    .iter()
                    .filter_map(|(t, &x)| rb.get(t).map(|&y| (x as f64, y as f64)))
                    .unzip();
                let direct = oracle::pearson_float(&xs, &ys);
                match (pearson(&conf.ratings, a, b).unwrap(), direct) {
                    (SimilarityScore::Defined(r), Some(d)) => prop_assert!((r - d).abs() <= 1e-9, "{} vs {}", r, d),
                    (SimilarityScore::Undefined, None) => {}
                    (got, want) => prop_assert!(false, "{:?} vs {:?}", got, want),
                }
            }
        }
    }
}

#[test]
fn perfect_agreement_and_disagreement_are_exact() {
    let up = [1i64, 2, 3, 4, 5];
    let agree = correlation(up.iter().map(|&x| (x, x)));
    let affine = correlation(up.iter().map(|&x| (x, 2 * x - 1)));
    let disagree = correlation(up.iter().map(|&x| (x, 6 - x)));
    assert_eq!(agree, SimilarityScore::Defined(1.0));
    assert_eq!(affine, SimilarityScore::Defined(1.0));
    assert_eq!(disagree, SimilarityScore::Defined(-1.0));
}
