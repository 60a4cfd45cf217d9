mod common;

use proptest::prelude::*;
use reinhardt_core::lp::{maximize, LpOutcome};
use reinhardt_core::{
    convex_closure_value, reduce_to_dense_subset, support_value, Direction, Domain, Half, Samples,
};

use common::vertex_max;

fn simplex_point(n: usize) -> impl Strategy<Value = Direction> {
    prop::collection::vec(0.0f64..1.0, n)
        .prop_filter("nonzero", |w| w.iter().sum::<f64>() > 1e-3)
        .prop_map(|w| Direction::normalized(w).unwrap())
}

/// Random domain with every coordinate bounded above, so support values in
/// simplex directions are finite.
fn bounded_domain(n: usize) -> impl Strategy<Value = Domain> {
    (
        prop::collection::vec(-1.0f64..1.0, n),
        prop::collection::vec((simplex_point(n), 0.05f64..2.0), 0..6),
        prop::collection::vec(0.05f64..2.0, n),
    )
        .prop_map(move |(center, extra, slack)| {
            let mut hs: Vec<Half> = (0..n)
                .map(|i| Half::new(Direction::vertex(n, i), center[i] + slack[i]))
                .collect();
            for (a, gap) in extra {
                let v: f64 = a.coords().iter().zip(&center).map(|(p, q)| p * q).sum();
                hs.push(Half::new(a, v + gap));
            }
            Domain::new(n, hs).unwrap()
        })
}

fn samples(n: usize) -> impl Strategy<Value = Samples> {
    prop::collection::vec(-2.0f64..2.0, n + 1).prop_map(move |values| {
        let m = values.len() as u64 - 1;
        Samples::new(Direction::lattice(2, m), values).unwrap()
    })
}

fn rows_of(d: &Domain) -> (Vec<Vec<f64>>, Vec<f64>) {
    (
        d.halfspaces()
            .iter()
            .map(|h| h.normal.coords().to_vec())
            .collect(),
        d.halfspaces().iter().map(|h| h.offset).collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_matches_vertex_enumeration(
        (d, alpha) in (2usize..=4).prop_flat_map(|n| (bounded_domain(n), simplex_point(n)))
    ) {
        let (rows, rhs) = rows_of(&d);
        let oracle = vertex_max(alpha.coords(), &rows, &rhs).unwrap();
        let h = support_value(&d, &alpha).unwrap();
        prop_assert!((h - oracle).abs() < 1e-7, "{} vs {}", h, oracle);
    }

    #[test]
    fn support_is_subadditive(d in bounded_domain(3), a in simplex_point(3), b in simplex_point(3)) {
        let mid = Direction::normalized(a.coords().iter().zip(b.coords()).map(|(x, y)| (x + y) / 2.0).collect()).unwrap();
        // the midpoint already lies on the simplex, so no rescaling is needed
        let lhs = support_value(&d, &mid).unwrap();
        let rhs = (support_value(&d, &a).unwrap() + support_value(&d, &b).unwrap()) / 2.0;
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn closure_is_a_minorant(f in samples(10)) {
        for (alpha, &v) in f.directions().iter().zip(f.values()) {
            prop_assert!(convex_closure_value(&f, alpha).unwrap() <= v + 1e-9);
        }
    }

    #[test]
    fn closure_dominates_every_convex_minorant(f in samples(10), slopes in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..4)) {
        // homogeneous linear pieces, each shifted down to touch f from below
        let pieces: Vec<[f64; 2]> = slopes
            .iter()
            .map(|&(p, q)| {
                let lift = f
                    .directions()
                    .iter()
                    .zip(f.values())
                    .map(|(a, v)| p * a.coords()[0] + q * a.coords()[1] - v)
                    .fold(f64::NEG_INFINITY, f64::max);
                [p - lift, q - lift]
            })
            .collect();
        for k in 0..20 {
            let t = (k as f64 + 0.5) / 20.0;
            let beta = Direction::new(vec![t, 1.0 - t]).unwrap();
            let p = pieces.iter().map(|w| w[0] * t + w[1] * (1.0 - t)).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(p <= convex_closure_value(&f, &beta).unwrap() + 1e-9);
        }
    }

    #[test]
    fn closure_is_idempotent(f in samples(10)) {
        let once: Vec<f64> = f.directions().iter().map(|a| convex_closure_value(&f, a).unwrap()).collect();
        let g = Samples::new(f.directions().to_vec(), once.clone()).unwrap();
        for (a, v) in f.directions().iter().zip(&once) {
            prop_assert!((convex_closure_value(&g, a).unwrap() - v).abs() < 1e-7);
        }
    }

    #[test]
    fn reduction_contains_the_domain(d in bounded_domain(2), m in 2u64..30, probes in prop::collection::vec(prop::collection::vec(-4.0f64..3.0, 2), 40)) {
        let reduced = reduce_to_dense_subset(&d, &Direction::lattice(2, m)).unwrap();
        for s in probes {
            if d.contains_closed(&s) {
                prop_assert!(reduced.halfspaces().iter().all(|h| h.value(&s) <= 1e-9));
            }
        }
    }
}

#[test]
fn zero_samples_close_to_exactly_zero() {
    let f = Samples::new(Direction::lattice(2, 10), vec![0.0; 11]).unwrap();
    for k in 0..=20 {
        let t = k as f64 / 20.0;
        assert_eq!(
            convex_closure_value(&f, &Direction::new(vec![t, 1.0 - t]).unwrap()).unwrap(),
            0.0
        );
    }
}

#[test]
fn unbounded_and_infeasible_programs() {
    let unbounded = maximize(&[1.0, 1.0], &[vec![1.0, -1.0]], &[0.0]).unwrap();
    assert_eq!(unbounded, LpOutcome::Unbounded);
    let infeasible = maximize(&[1.0], &[vec![1.0], vec![-1.0]], &[-1.0, -1.0]).unwrap();
    assert_eq!(infeasible, LpOutcome::Infeasible);
}
