use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cubetorus::analysis::{moments, window_counts};
use cubetorus::packing::free_codes;
use cubetorus::stochastic::{random_packing, SearchConfig};
use cubetorus::{are_isomorphic, canonical_form, CanonicalKey, LabelCodes, LabelSet, Packing, Symmetry};

fn packing(d: usize, seed: u64) -> Packing {
    random_packing(d, &SearchConfig { seed, ..Default::default() }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_packings_are_maximal(d in 1usize..=5, seed in any::<u64>()) {
        let p = packing(d, seed);
        prop_assert!(free_codes(d, p.codes()).is_empty());
        prop_assert!(Packing::from_codes(d, p.codes().to_vec()).is_ok());
    }

    #[test]
    fn keys_are_symmetry_invariant(d in 1usize..=5, seed in any::<u64>(), gseed in any::<u64>()) {
        let p = packing(d, seed);
        let g = Symmetry::random(d, &mut ChaCha8Rng::seed_from_u64(gseed));
        let q = g.apply(&p).unwrap();
        prop_assert_eq!(canonical_form(&p), canonical_form(&q));
        prop_assert!(are_isomorphic(&p, &q).unwrap());
        let key = canonical_form(&p);
        prop_assert_eq!(canonical_form(&key.to_set()), key.clone());
        prop_assert_eq!(key.to_string().parse::<CanonicalKey>().unwrap(), key);
    }

    #[test]
    fn arbitrary_sets_have_invariant_keys(d in 1usize..=4, codes in prop::collection::btree_set(0u16..256, 1..10), gseed in any::<u64>()) {
        let codes: Vec<u16> = codes.into_iter().filter(|&c| (c as usize) < 1 << (2 * d)).collect();
        let s = LabelSet::from_codes(d, codes).unwrap();
        let g = Symmetry::random(d, &mut ChaCha8Rng::seed_from_u64(gseed));
        prop_assert_eq!(canonical_form(&s), canonical_form(&g.apply_set(&s).unwrap()));
    }

    #[test]
    fn window_identities(d in 1usize..=5, seed in any::<u64>()) {
        let p = packing(d, seed);
        let total: u64 = window_counts(&p).iter().map(|&c| c as u64).sum();
        prop_assert_eq!(total, 3u64.pow(d as u32) * p.len() as u64);
        prop_assert!(moments(&p).satisfies_bound());
    }
}
