mod common;

use proptest::prelude::*;
use reinhardt_core::{
    count_of_degree, enumerate_degree, nearest_index_of_degree, project, Direction, MultiIndex,
};

use common::brute_enumerate;

fn direction(n: usize) -> impl Strategy<Value = Direction> {
    prop::collection::vec(0.0f64..1.0, n)
        .prop_filter("nonzero weights", |w| w.iter().sum::<f64>() > 1e-3)
        .prop_map(|w| Direction::normalized(w).unwrap())
}

fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[test]
fn enumeration_matches_stars_and_bars() {
    for n in 1..=4usize {
        for k in 0..=30u64 {
            let fast: Vec<Vec<u64>> = enumerate_degree(n, k).into_iter().map(Vec::from).collect();
            let slow = brute_enumerate(n, k);
            assert_eq!(fast, slow, "n={n} k={k}");
            let expected = binomial(k + n as u64 - 1, n as u64 - 1);
            assert_eq!(count_of_degree(n, k), expected);
            assert_eq!(fast.len() as u128, expected);
        }
    }
}

proptest! {
    #[test]
    fn nearest_index_converges(n in 2usize..=4, k in 8u64..200, seed in any::<u64>()) {
        let alpha = {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0) + 1e-3).collect();
            Direction::normalized(w).unwrap()
        };
        let j = nearest_index_of_degree(&alpha, k);
        prop_assert_eq!(j.degree(), k);
        let d = project::<f64>(&j).unwrap().l1_distance(&alpha);
        prop_assert!(d <= 2.0 * n as f64 / k as f64, "distance {} at k={}", d, k);
    }

    #[test]
    fn nearest_index_is_optimal_in_two_dimensions(alpha in direction(2), k in 1u64..60) {
        let j = nearest_index_of_degree(&alpha, k);
        let best = enumerate_degree(2, k)
            .iter()
            .map(|c| project::<f64>(c).unwrap().l1_distance(&alpha))
            .fold(f64::INFINITY, f64::min);
        let d = project::<f64>(&j).unwrap().l1_distance(&alpha);
        prop_assert!(d <= best + 1e-12);
    }

    #[test]
    fn projection_is_constant_on_rays(entries in prop::collection::vec(0u64..1000, 1..5), m in prop::sample::select(vec![2u64, 3, 5])) {
        prop_assume!(entries.iter().any(|&e| e > 0));
        let j = MultiIndex::new(entries).unwrap();
        let scaled = j.scaled(m).unwrap();
        prop_assert_eq!(project::<f64>(&j).unwrap(), project::<f64>(&scaled).unwrap());
        prop_assert_eq!(scaled.multiple_of(&j), Some(m));
    }

    #[test]
    fn projections_live_on_the_simplex(entries in prop::collection::vec(0u64..1_000_000, 1..6)) {
        prop_assume!(entries.iter().any(|&e| e > 0));
        let p = project::<f64>(&MultiIndex::new(entries).unwrap()).unwrap();
        let sum: f64 = p.coords().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert!(p.coords().iter().all(|&c| c >= 0.0));
    }

    #[test]
    fn single_precision_projection(entries in prop::collection::vec(0u64..10_000, 2..4)) {
        prop_assume!(entries.iter().any(|&e| e > 0));
        let j = MultiIndex::new(entries).unwrap();
        let p32 = project::<f32>(&j).unwrap();
        let p64 = project::<f64>(&j).unwrap();
        for (a, b) in p32.coords().iter().zip(p64.coords()) {
            prop_assert!((*a as f64 - b).abs() < 1e-6);
        }
    }
}
