mod common;

use common::*;
use opgraph::graph::enumerate_flags;
use opgraph::spectral::{a1_check, a2_check, classify_pairs, geometric_adjacency, random_flag};
use opgraph::starfield::GaussianRationals;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn exhaustive_equivalence_lines() {
    let gf = gf9();
    let flags = enumerate_flags(&gf, &gf9_signature(&[0, 1, 2], &[1, 1, 1])).unwrap();
    let c = classify_pairs(&gf, &flags).unwrap();
    assert_eq!(c.pairs, 71_253);
    assert!(c.discrepancies.is_empty());
    assert_eq!(c.a1_a2, c.geometric);
    assert_eq!(c.not_a1 + c.a1_a2 + c.a1_not_a2, c.pairs);
}

#[test]
fn exhaustive_equivalence_two_slots() {
    let gf = gf9();
    let flags = enumerate_flags(&gf, &gf9_signature(&[0, 1], &[1, 2])).unwrap();
    let c = classify_pairs(&gf, &flags).unwrap();
    assert_eq!((c.vertices, c.pairs), (63, 1953));
    assert!(c.discrepancies.is_empty());
    assert_eq!(c.a1_not_a2, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Random flags and their images under reflections, either in a line of
    /// `Xᵢ + Xⱼ` (giving adjacent pairs) or in an arbitrary line.
    #[test]
    fn equivalence_over_gaussian_rationals(seed in any::<u64>(), four in any::<bool>(), local in any::<bool>()) {
        let f = GaussianRationals;
        let dims: &[usize] = if four { &[1, 2, 1] } else { &[1, 1, 1] };
        let sig = qi_signature(dims);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_flag(&f, &sig, &mut rng, 2).unwrap();
        let v = if local {
            let i = rng.gen_range(0..3);
            let j = (i + rng.gen_range(1..3)) % 3;
            random_in(&f, &a.space(i).sum(&f, a.space(j)).unwrap(), &mut rng, 2)
        } else {
            random_vector(&f, sig.ambient(), &mut rng, 2)
        };
        let b = reflect_flag(&f, &a, &v);
        let both = a1_check(&f, &a, &b).unwrap() && a2_check(&f, &a, &b).unwrap();
        prop_assert_eq!(both, geometric_adjacency(&f, &a, &b).unwrap().is_some());
        let c = random_flag(&f, &sig, &mut rng, 2).unwrap();
        let both = a1_check(&f, &a, &c).unwrap() && a2_check(&f, &a, &c).unwrap();
        prop_assert_eq!(both, geometric_adjacency(&f, &a, &c).unwrap().is_some());
    }
}

#[test]
fn local_reflections_are_adjacent() {
    let f = GaussianRationals;
    let sig = qi_signature(&[1, 1, 1, 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut adjacent = 0;
    for _ in 0..20 {
        let a = random_flag(&f, &sig, &mut rng, 2).unwrap();
        let v = random_in(&f, &a.space(1).sum(&f, a.space(3)).unwrap(), &mut rng, 2);
        let b = reflect_flag(&f, &a, &v);
        if b != a {
            let t = geometric_adjacency(&f, &a, &b).unwrap().expect("a local reflection moves two slots");
            assert_eq!((t.first(), t.second()), (1, 3));
            assert!(a1_check(&f, &a, &b).unwrap() && a2_check(&f, &a, &b).unwrap());
            adjacent += 1;
        }
    }
    assert!(adjacent > 0);
}
