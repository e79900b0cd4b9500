mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{mixed_signature, random_graph, random_morphism, same_class};
use ugts::graph::isomorphic;
use ugts::oracle::complement_oracle;
use ugts::order::minimize;
use ugts::pushout::{is_pushout, minimal_pushout_complements, pushout, PushoutResult};

proptest! {
    #[test]
    fn pushout_is_symmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = mixed_signature();
        let g0 = random_graph(&mut rng, &sig, 4);
        let (g1, phi) = random_morphism(&mut rng, &sig, &g0, 6, false);
        let (g2, psi) = random_morphism(&mut rng, &sig, &g0, 6, false);
        let a = pushout(&phi, &g1, &psi, &g2);
        let b = pushout(&psi, &g2, &phi, &g1);
        prop_assert!(is_pushout(&phi, &g1, &psi, &g2, &a));
        prop_assert!(is_pushout(&psi, &g2, &phi, &g1, &b));
        let swapped = PushoutResult { object: b.object.clone(), left: b.right.clone(), right: b.left.clone() };
        prop_assert!(is_pushout(&phi, &g1, &psi, &g2, &swapped));
        prop_assert!(isomorphic(&a.object, &b.object).is_some());
    }

    #[test]
    fn total_injective_legs_are_preserved(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = mixed_signature();
        let g0 = random_graph(&mut rng, &sig, 4);
        let (g1, phi) = random_morphism(&mut rng, &sig, &g0, 6, true);
        let (g2, psi) = random_morphism(&mut rng, &sig, &g0, 6, false);
        let po = pushout(&phi, &g1, &psi, &g2);
        prop_assert!(po.right.is_match());
    }

    #[test]
    fn complements_glue_back_to_the_host(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = mixed_signature();
        let a = random_graph(&mut rng, &sig, 3);
        let (b, delta) = random_morphism(&mut rng, &sig, &a, 4, false);
        let (g, comatch) = random_morphism(&mut rng, &sig, &b, 6, true);
        let found = minimal_pushout_complements(&a, &delta, &b, &comatch, &g, None);
        for poc in &found {
            let square = PushoutResult { object: g.clone(), left: comatch.clone(), right: poc.glue.clone() };
            prop_assert!(is_pushout(&delta, &b, &poc.matching, &poc.complement, &square));
            let again = pushout(&delta, &b, &poc.matching, &poc.complement);
            prop_assert!(isomorphic(&again.object, &g).is_some());
        }
        let ours = minimize(found.into_iter().map(|p| p.complement));
        let brute = minimize(complement_oracle(&a, &delta, &b, &comatch, &g));
        prop_assert!(same_class(
            &ours.graphs().cloned().collect::<Vec<_>>(),
            &brute.graphs().cloned().collect::<Vec<_>>()
        ));
    }
}
