mod common;

use common::*;
use opgraph::constructions::{
    breaks_orthogonality, chow_flag, conjugate_flag, conjugation_automorphism, delta_automorphism, induced_subgroup,
    isometry_group_order, obstruction_witness, sd_group, swap_construction, unitary_generators, unitary_group_order,
    SemilinearMap, UnitaryMap,
};
use opgraph::graph::{
    automorphism_group, extract_component_maps, is_automorphism, orthogonality_compatible, SearchLimits, TauClass,
};
use opgraph::linalg::Matrix;
use opgraph::spectral::{adjacent, random_flag, EigenFlag, IndexPair, SdPermutation};
use opgraph::starfield::{GaussianRationals, StarField};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn induced_generators_on_flagship() {
    let gf = gf9();
    let g = gf9_graph(&[1, 1, 1]);
    let gens = unitary_generators(&gf, 3).unwrap();
    assert_eq!(isometry_group_order(&gf, &gens, 3).unwrap(), unitary_group_order(3, 3));
    for u in &gens {
        for antilinear in [false, true] {
            assert!(is_automorphism(g.graph(), &conjugation_automorphism(&gf, &g, u, antilinear).unwrap()));
        }
    }
    let sig = g.signature().unwrap().clone();
    let deltas = sd_group(&sig);
    assert_eq!(deltas.len(), 6);
    for d in &deltas {
        assert!(is_automorphism(g.graph(), &delta_automorphism(&g, d).unwrap()));
    }
    let induced = induced_subgroup(&gf, &g, &gens).unwrap();
    let aut = automorphism_group(g.graph(), SearchLimits::default()).unwrap();
    assert!(induced.generators.iter().all(|x| aut.contains(&x.perm)));
    assert!(induced.generators.iter().all(|x| matches!(x.tau, TauClass::PermutationInduced(_))));
    assert_eq!(induced.order(), &aut.order);
    assert_eq!(induced.index_in(&aut.order), Some(1u32.into()));

    for x in &induced.generators {
        let maps: Vec<_> = (0..3).map(|i| extract_component_maps(&g, &x.perm, i).unwrap()).collect();
        for (i, m) in maps.iter().enumerate() {
            assert!(m.is_injective() && m.preserves_adjacency(&gf), "{} at {}", x.label, i + 1);
            for (k, other) in maps.iter().enumerate() {
                if k != i {
                    assert!(orthogonality_compatible(&gf, m, other));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Applying `U` to every slot commutes with permuting the slots.
    #[test]
    fn conjugation_commutes_with_slot_permutation(seed in any::<u64>(), antilinear in any::<bool>()) {
        let f = GaussianRationals;
        let sig = qi_signature(&[1, 1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_flag(&f, &sig, &mut rng, 3).unwrap();
        let v = random_vector(&f, 3, &mut rng, 3);
        let u = UnitaryMap::new(&f, reflection(&f, &v)).unwrap();
        let deltas = sd_group(&sig);
        let d = &deltas[rng.gen_range(0..deltas.len())];
        let left = conjugate_flag(&f, &u, antilinear, &a.permute_slots(d).unwrap()).unwrap();
        let right = conjugate_flag(&f, &u, antilinear, &a).unwrap().permute_slots(d).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn composition_on_flagship_vertices() {
    let gf = gf9();
    let g = gf9_graph(&[1, 1, 1]);
    let sig = g.signature().unwrap().clone();
    let d = SdPermutation::new(&sig, vec![1, 2, 0]).unwrap();
    for u in unitary_generators(&gf, 3).unwrap() {
        let pu = conjugation_automorphism(&gf, &g, &u, false).unwrap();
        let pd = delta_automorphism(&g, &d).unwrap();
        let ud: Vec<usize> = (0..g.len()).map(|v| pu[pd[v]]).collect();
        let du: Vec<usize> = (0..g.len()).map(|v| pd[pu[v]]).collect();
        assert_eq!(ud, du);
    }
}

/// Random pairs and reflected pairs keep their adjacency status under the
/// map `(X₁, X₂) ↦ (S X₁, (S X₁)^⊥)` for a non-isometric `S`, although `S`
/// itself does not preserve orthogonality.
#[test]
fn chow_map_beyond_isometries() {
    let f = GaussianRationals;
    for (dims, diag) in [(vec![1, 2], vec![1, 1, 2]), (vec![2, 2], vec![1, 1, 1, 2])] {
        let sig = qi_signature(&dims);
        let s = SemilinearMap::linear(&f, Matrix::diagonal(&f, &diag.iter().map(|&x| q(x, 0)).collect::<Vec<_>>()))
            .unwrap();
        assert!(!s.matrix().is_isometry(&f));
        let transposed_ok = dims[0] == dims[1];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut broken = 0;
        let (mut adjacent_pairs, mut other_pairs) = (0, 0);
        for _ in 0..25 {
            let a = random_flag(&f, &sig, &mut rng, 2).unwrap();
            let b = reflect_flag(&f, &a, &random_vector(&f, sig.ambient(), &mut rng, 2));
            let c = random_flag(&f, &sig, &mut rng, 2).unwrap();
            if breaks_orthogonality(&f, &s, &a).unwrap() {
                broken += 1;
            }
            for transposed in [false, true] {
                if transposed && !transposed_ok {
                    continue;
                }
                let image = |x: &EigenFlag<_>| chow_flag(&f, &s, transposed, x).unwrap();
                for other in [&b, &c] {
                    let before = adjacent(&f, &a, other).unwrap();
                    assert_eq!(before, adjacent(&f, &image(&a), &image(other)).unwrap());
                    if before { adjacent_pairs += 1 } else { other_pairs += 1 }
                }
            }
        }
        assert!(broken > 0 && adjacent_pairs > 0);
        // Distinct lines are always adjacent, so only the (2,2) class has non-adjacent pairs.
        assert_eq!(other_pairs > 0, dims[0] == 2);
    }
}

#[test]
fn swap_and_obstruction_bundles() {
    let f = GaussianRationals;
    let a = EigenFlag::coordinate(&f, qi_signature(&[1, 1, 1, 1]));
    let sig = a.signature().clone();
    let b = EigenFlag::new(
        &f,
        sig.clone(),
        vec![line(&[1, 1, 0, 0]), line(&[1, -1, 0, 0]), line(&[0, 0, 1, 1]), line(&[0, 0, 1, -1])],
    )
    .unwrap();
    let c = EigenFlag::new(
        &f,
        sig,
        vec![line(&[1, 1, 0, 0]), line(&[1, -1, 0, 0]), line(&[0, 0, 1, 0]), line(&[0, 0, 0, 1])],
    )
    .unwrap();
    let (p12, p34) = (IndexPair::new(0, 1).unwrap(), IndexPair::new(2, 3).unwrap());
    let c2 = swap_construction(&f, &a, &b, &c, p12, p34).unwrap();
    assert_eq!(c2.spaces()[2], line(&[0, 0, 1, 1]));
    assert_eq!(swap_construction(&f, &a, &b, &c2, p34, p12).unwrap(), c);

    for (i, j, t) in [(0, 1, 2), (3, 2, 0), (1, 3, 2)] {
        let w = obstruction_witness(&f, &a, i, j, t).unwrap();
        assert!(w.all_claims_hold());
        let json = w.to_json(&f);
        assert_eq!(json["indices"][0], i + 1);
        assert!(json["claims"].as_array().unwrap().iter().all(|c| c["holds"] == true));
    }
    let gf = gf9();
    let g = gf9_graph(&[1, 1, 1]);
    for v in [0, 100, 377] {
        let w = obstruction_witness(&gf, g.vertex(v), 2, 0, 1).unwrap();
        assert_eq!(w.nonexistence.1, Some(378));
    }
}

#[test]
fn finite_field_chow_needs_similitudes() {
    let gf = gf9();
    let g = gf9_graph(&[1, 2]);
    let s = SemilinearMap::linear(&gf, Matrix::diagonal(&gf, &[gf.one(), gf.one(), gf.generator()])).unwrap();
    assert!(g.vertices().iter().any(|a| chow_flag(&gf, &s, false, a).is_err()));
    // The graph is complete, so every bijection of its vertices is an automorphism.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut perm: Vec<usize> = (0..g.len()).collect();
    rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
    assert!(is_automorphism(g.graph(), &perm));
}
