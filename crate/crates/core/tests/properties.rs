use itertools::Itertools;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use upsilon_core::abw::enumerate_for_rank;
use upsilon_core::karea::{smooth_random_connection, DualityOptions};
use upsilon_core::quantum::basis_product;
use upsilon_core::schubert::pieri_product;
use upsilon_core::unitary::{class_distance, haar_sample_with, minimal_lift, upsilon_estimate_with, UpsilonOptions};
use upsilon_core::*;

fn alcove_point(n: usize) -> impl Strategy<Value = AlcovePoint> {
    // Angles summing to zero, reduced to the alcove.
    prop::collection::vec(0.0f64..1.0, n - 1).prop_map(move |mut t| {
        let s: f64 = t.iter().sum();
        t.push(-s);
        upsilon_core::alcove::alcove_from_angles(&t).unwrap()
    })
}

fn subset(n: usize) -> impl Strategy<Value = SchubertIndex> {
    (1..n).prop_flat_map(move |r| {
        prop::sample::subsequence((1..=n).collect::<Vec<_>>(), r).prop_map(move |v| SchubertIndex::new(&v, n).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_partition_round_trip(idx in (2usize..=8).prop_flat_map(subset)) {
        let p = index_to_partition(&idx);
        prop_assert_eq!(partition_to_index(&p), idx.clone());
        let dual = dual_index(&idx);
        prop_assert_eq!(dual_index(&dual), idx.clone());
        prop_assert_eq!(p.size() + index_to_partition(&dual).size(), idx.r() * (idx.n() - idx.r()));
    }

    #[test]
    fn lr_coefficients_are_symmetric_and_graded(
        (lambda, mu) in (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| {
            let parts = Partition::all(r, c);
            (prop::sample::select(parts.clone()), prop::sample::select(parts))
        })
    ) {
        let (r, c) = (lambda.rows(), lambda.cols());
        for nu in Partition::all(r, 2 * c) {
            let a = lr_raw(&lambda, &mu, &nu);
            let b = lr_raw(&mu, &lambda, &nu);
            prop_assert_eq!(a, b);
            if a > 0 {
                prop_assert_eq!(nu.size(), lambda.size() + mu.size());
            }
        }
    }

    #[test]
    fn pieri_rows_match_lr(lambda in (1usize..=3, 1usize..=4).prop_flat_map(|(r, c)| prop::sample::select(Partition::all(r, c)))) {
        let (r, c) = (lambda.rows(), lambda.cols());
        let box1 = Partition::new(&[1], r, c).unwrap();
        let via_pieri: Vec<Partition> = pieri_product(1, &lambda);
        for nu in Partition::all(r, c) {
            let expected = u64::from(via_pieri.contains(&nu));
            prop_assert_eq!(lr_coefficient(&box1, &lambda, &nu), expected);
        }
    }

    #[test]
    fn quantum_product_commutes(
        (lambda, mu) in prop::sample::select(vec![(2usize, 5usize), (3, 6), (2, 6)]).prop_flat_map(|(r, n)| {
            let parts = Partition::all(r, n - r);
            (prop::sample::select(parts.clone()), prop::sample::select(parts))
        })
    ) {
        let mut a = basis_product(&lambda, &mu);
        let mut b = basis_product(&mu, &lambda);
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn alcove_of_random_matrix_is_valid(seed in any::<u64>(), n in 2usize..=5) {
        let u = haar_sample(n, seed);
        let a = alcove_of(&u).unwrap();
        prop_assert!(a.coords().iter().sum::<f64>().abs() < 1e-9);
        prop_assert!(a.coords().windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(a.coords()[n - 1] >= a.coords()[0] - 1.0 - 1e-9);
        prop_assert!(a.max_abs() <= 1.0);
        // Same class after conjugation.
        let v = haar_sample(n, seed.wrapping_add(1));
        let b = alcove_of(&u.conjugate_by(&v)).unwrap();
        for (x, y) in a.coords().iter().zip(b.coords()) {
            prop_assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn minimal_lift_beats_small_shifts(raw in prop::collection::vec(-1.5f64..1.5, 2..=4)) {
        let mean = raw.iter().sum::<f64>() / raw.len() as f64;
        let a: Vec<f64> = raw.iter().map(|x| x - mean).collect();
        let lift = minimal_lift(&a);
        let norm = lift.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        prop_assert!(lift.iter().sum::<f64>().abs() < 1e-9);
        for k in (0..a.len()).map(|_| -2i32..=2).multi_cartesian_product() {
            if k.iter().sum::<i32>() != 0 {
                continue;
            }
            let m = a.iter().zip(&k).map(|(x, &k)| (x + k as f64).abs()).fold(0.0, f64::max);
            prop_assert!(norm <= m + 1e-12);
        }
    }

    #[test]
    fn finsler_distance_is_bi_invariant(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = haar_sample_with(n, &mut rng);
        let v = haar_sample_with(n, &mut rng);
        let a = finsler_distance_to_id(&u).unwrap();
        let b = finsler_distance_to_id(&u.conjugate_by(&v)).unwrap();
        prop_assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn class_distance_is_a_metric(
        (a, b, c) in (2usize..=3).prop_flat_map(|n| (alcove_point(n), alcove_point(n), alcove_point(n)))
    ) {
        let ab = class_distance(&a, &b).unwrap();
        let ba = class_distance(&b, &a).unwrap();
        let bc = class_distance(&b, &c).unwrap();
        let ac = class_distance(&a, &c).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert!(class_distance(&a, &a).unwrap() < 1e-12);
    }

    #[test]
    fn closed_form_is_order_free(z in prop::collection::vec(0.0f64..=0.5, 3)) {
        let v = su2_upsilon3_closed_form(z[0], z[1], z[2]).unwrap();
        for p in z.iter().permutations(3) {
            prop_assert_eq!(v, su2_upsilon3_closed_form(*p[0], *p[1], *p[2]).unwrap());
        }
    }

    #[test]
    fn hamiltonian_stays_in_moment_polytope(seed in any::<u64>(), alpha in alcove_point(4), r in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = Frame::haar(4, r, &mut rng);
        let h = hamiltonian_value(&frame, &alpha).unwrap();
        let sums: Vec<f64> = (1..=4).combinations(r).map(|i| -i.iter().map(|&j| alpha.at(j)).sum::<f64>()).collect();
        let lo = sums.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = sums.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(h >= lo - 1e-12 && h <= hi + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn length_never_exceeds_coarse_length(seed in any::<u64>(), k in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = haar_sample_with(3, &mut rng);
        let b = haar_sample_with(3, &mut rng);
        let path = GroupPath::from_fn(k, |s| a.geodesic_to(&b, s * s).unwrap());
        if let Ok(path) = path {
            prop_assert!(path.length().unwrap() <= coarse_length(&path).unwrap());
        }
    }

    #[test]
    fn curvature_is_gauge_invariant(seed in any::<u64>()) {
        let c = smooth_random_connection(2, 16, 16, 0.5, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let g: Vec<UnitaryMatrix> = (0..17 * 16).map(|_| haar_sample_with(2, &mut rng)).collect();
        let a = curvature_norm(&c).unwrap();
        let b = curvature_norm(&c.gauge_transform(&g).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * a.max(1.0));
    }

    #[test]
    fn estimate_upper_bounds_certified_bound(z in prop::collection::vec(0.0f64..=0.5, 3), seed in any::<u64>()) {
        let classes: Vec<AlcovePoint> = z.iter().map(|&x| AlcovePoint::su2(x).unwrap()).collect();
        let ineqs = enumerate_inequalities(2, 3, 1).unwrap();
        let bound = upsilon_lower_bound(&classes, &ineqs).unwrap();
        let est = upsilon_estimate_with(&classes, UpsilonOptions::with_budget(2000), seed).unwrap();
        prop_assert!(est.value >= bound - 1e-9);
    }
}

fn lr_raw(l: &Partition, m: &Partition, n: &Partition) -> u64 {
    upsilon_core::schubert::lr_coefficient_raw(l.parts(), m.parts(), n.parts())
}

#[test]
fn gw_invariant_is_symmetric_on_gr24() {
    for l in [3, 4] {
        for d in 0..=2 {
            for classes in (0..l).map(|_| SchubertIndex::all(4, 2)).multi_cartesian_product() {
                let base = gw_invariant(&GwQuery::new(classes.clone(), d)).unwrap();
                for perm in (0..l).permutations(l) {
                    let permuted: Vec<SchubertIndex> = perm.iter().map(|&i| classes[i].clone()).collect();
                    assert_eq!(gw_invariant(&GwQuery::new(permuted, d)).unwrap(), base);
                }
            }
        }
    }
}

#[test]
fn inequality_lists_are_permutation_invariant() {
    let ineqs = enumerate_for_rank(3, 1, 3, 1).unwrap();
    let keys: std::collections::BTreeSet<(Vec<Vec<usize>>, usize)> = ineqs
        .iter()
        .map(|i| (i.subsets.iter().map(|s| s.indices().to_vec()).collect(), i.d))
        .collect();
    for (subsets, d) in &keys {
        for perm in (0..3).permutations(3) {
            let permuted: Vec<Vec<usize>> = perm.iter().map(|&i| subsets[i].clone()).collect();
            assert!(keys.contains(&(permuted, *d)));
        }
    }
}

#[test]
fn estimates_ignore_order_and_inversion() {
    let classes = vec![
        AlcovePoint::new(vec![0.3, 0.0, -0.3]).unwrap(),
        AlcovePoint::new(vec![0.2, 0.1, -0.3]).unwrap(),
        AlcovePoint::new(vec![0.4, -0.1, -0.3]).unwrap(),
    ];
    let options = UpsilonOptions::with_budget(8000);
    let base = upsilon_estimate_with(&classes, options, 7).unwrap().value;
    let reversed: Vec<AlcovePoint> = classes.iter().rev().cloned().collect();
    let inverse: Vec<AlcovePoint> = classes.iter().map(AlcovePoint::inverse).collect();
    for other in [reversed, inverse] {
        let v = upsilon_estimate_with(&other, options, 7).unwrap().value;
        assert!((v - base).abs() < 1e-2, "{v} vs {base}");
    }
}

#[test]
fn duality_options_default_is_desk_scale() {
    let o = DualityOptions::default();
    assert_eq!(o.mesh, (200, 200));
    assert_eq!(o.epsilon, 0.05);
}
