mod common;

use proptest::prelude::*;
use reinhardt_core::{classify, probe, Membership, ProbeClass, Series};

use common::*;

#[test]
fn oracle_never_contradicts_the_estimator() {
    for series in corpus() {
        for s in grid_points(-1.0, 1.0, 11) {
            let class = classify(&series, &s, 64, 0.05).unwrap().class;
            let r: Vec<f64> = s.iter().map(|x| x.exp()).collect();
            let p = probe(&series, &r, 64, 0.1).unwrap().class;
            let contradiction = matches!(
                (class, p),
                (Membership::Inside, ProbeClass::Diverges)
                    | (Membership::Outside, ProbeClass::Converges)
            );
            assert!(
                !contradiction,
                "{} at {s:?}: {class:?} vs {p:?}",
                series.label()
            );
        }
    }
}

fn series_choice() -> impl Strategy<Value = Series> {
    prop::sample::select(vec![geometric(), diagonal(), f0(), ray21()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probe_is_monotone(
        series in series_choice(),
        r in prop::collection::vec(0.0f64..2.0, 2),
        bump in prop::collection::vec(0.0f64..1.0, 2),
    ) {
        let p = probe(&series, &r, 64, 0.1).unwrap();
        if p.class == ProbeClass::Diverges {
            let q: Vec<f64> = r.iter().zip(&bump).map(|(a, b)| a + b).collect();
            prop_assert_ne!(probe(&series, &q, 64, 0.1).unwrap().class, ProbeClass::Converges);
        }
    }

    #[test]
    fn geometric_partial_sum_has_a_closed_form(x in 0.0f64..0.9, y in 0.0f64..0.9) {
        let p = probe(&geometric(), &[x, y], 64, 0.1).unwrap();
        // Σ_{|J|≤K} x^a y^b summed directly
        let mut direct = 0.0;
        for k in 0..=64 {
            for a in 0..=k {
                direct += x.powi(a) * y.powi(k - a);
            }
        }
        prop_assert!((p.partial - direct).abs() <= 1e-9 * direct.max(1.0));
    }
}
