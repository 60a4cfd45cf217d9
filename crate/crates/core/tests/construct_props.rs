mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use reinhardt_core::{
    build_family, c_hat, classify, elementary_halfspace, mainthm_series, realize_c_sequence,
    support_value, Direction, Domain, Half, Membership, Window,
};

use common::*;

fn direction_set() -> impl Strategy<Value = Vec<Direction>> {
    (2usize..=3).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0.0f64..1.0, n), 1..12).prop_filter_map(
            "distinct",
            move |ws| {
                let dirs: Vec<Direction> = ws
                    .into_iter()
                    .filter(|w| w.iter().sum::<f64>() > 1e-3)
                    .map(|w| Direction::normalized(w).unwrap())
                    .collect();
                let distinct = dirs
                    .iter()
                    .enumerate()
                    .all(|(i, a)| dirs[..i].iter().all(|b| a.l1_distance(b) > 1e-6));
                (distinct && !dirs.is_empty()).then_some(dirs)
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn families_are_distinct_and_climb_in_degree(dirs in direction_set(), per_row in 1u64..20) {
        let family = build_family(&dirs, per_row).unwrap();
        let mut seen = BTreeSet::new();
        for row in family.rows() {
            prop_assert_eq!(row.len() as u64, per_row);
            for pair in row.windows(2) {
                prop_assert!(pair[0].degree() < pair[1].degree());
            }
            for j in row {
                prop_assert!(seen.insert(j.clone()), "{} repeated", j);
            }
        }
    }

    #[test]
    fn every_row_is_elementary_with_the_prescribed_halfspace(
        offsets in prop::collection::vec(-1.0f64..0.0, 3),
        m in 8u64..30,
    ) {
        let domain = Domain::from_pairs(
            2,
            &[
                (vec![1.0, 0.0], offsets[0]),
                (vec![0.0, 1.0], offsets[1]),
                (vec![0.5, 0.5], offsets[2]),
            ],
        )
        .unwrap();
        let dirs = Direction::lattice(2, m);
        let series = mainthm_series(&domain, &dirs, 8).unwrap();
        for (alpha, row) in family_rows(&series) {
            let h = support_value(&domain, &alpha).unwrap();
            let est = elementary_halfspace(&row, 64).unwrap();
            prop_assert!(est.normal.l1_distance(&alpha) <= 2.0 * 2.0 / 8.0);
            // the estimated offset is -d̂ and d̂ = -h
            prop_assert!((est.offset - h).abs() <= 1e-9, "{} vs {}", est.offset, h);
        }
    }
}

#[test]
fn constructed_quadrant_series_reproduces_the_quadrant() {
    let dirs = Direction::lattice(2, 24);
    let series = mainthm_series(&quadrant(), &dirs, 8).unwrap();
    for s in grid_points(-1.0, 1.0, 11) {
        let exact = s[0].max(s[1]);
        let class = classify(&series, &s, 64, 0.1).unwrap().class;
        if exact < -0.15 {
            assert_eq!(class, Membership::Inside, "{s:?}");
        } else if exact > 0.15 {
            assert_eq!(class, Membership::Outside, "{s:?}");
        }
    }
}

#[test]
fn realized_sequence_reaches_the_direction_functional() {
    let alpha = dir(&[0.5, 0.5]);
    let seq = realize_c_sequence(&f0(), &alpha, 64).unwrap();
    let last = seq.last().unwrap();
    let value = f0().log_abs_coefficient(last).unwrap() / last.degree() as f64;
    let c = c_hat(&f0(), &Window::tail(alpha, 0.02, 64).unwrap()).unwrap();
    assert!((value + c).abs() <= 0.02);
}

#[test]
fn rows_may_not_point_where_the_support_is_infinite() {
    let half = Domain::new(2, vec![Half::new(dir(&[1.0, 0.0]), 0.0)]).unwrap();
    assert!(mainthm_series(&half, &[dir(&[1.0, 0.0]), dir(&[0.5, 0.5])], 4).is_err());
    assert!(mainthm_series(&half, &[dir(&[1.0, 0.0])], 4).is_ok());
}
