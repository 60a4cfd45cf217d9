//! Truncated Cauchy-Hadamard estimators.
//!
//! The limsup over degrees is replaced by a maximum over the tail window of
//! degrees `[⌈K/2⌉, K]`. Low-degree transients are discarded and nothing is
//! extrapolated, so every estimate here is a finite-`K` approximation.

use serde::{Deserialize, Serialize};

use crate::convex::HalfSpace;
use crate::error::{Error, Result};
use crate::index::{project, projection_distance, MultiIndex, SimplexDirection};
use crate::scalar::{l1_distance, Real};
use crate::series::{log_monomial, SeriesSpec};

/// Default truncation degree.
pub const DEFAULT_DEGREE: u64 = 64;
/// Default half-width of the undecided band around `ψ = 0`.
pub const DEFAULT_EPSILON: f64 = 0.05;
/// Largest l1 diameter of tail projections accepted as a single direction.
pub const ELEMENTARY_DIAMETER: f64 = 0.2;

/// Tail window `[⌈K/2⌉, K]`.
pub fn tail_window(max_degree: u64) -> (u64, u64) {
    (max_degree.div_ceil(2), max_degree)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Inside,
    Outside,
    Unknown,
}

/// Three-way verdict for a point of the logarithmic image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct MembershipVerdict<T: Real> {
    pub class: Membership,
    /// Estimated defining function `ψ̂`.
    pub value: T,
    pub margin: T,
}

/// Finite stand-in for all index sequences whose projections tend to `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionWindow<T: Real> {
    center: SimplexDirection<T>,
    radius: T,
    degree_lo: u64,
    degree_hi: u64,
}

impl<T: Real> DirectionWindow<T> {
    pub fn new(
        center: SimplexDirection<T>,
        radius: T,
        degree_lo: u64,
        degree_hi: u64,
    ) -> Result<Self> {
        if !(radius > T::zero() && radius <= T::lit(2.0)) {
            return Err(Error::InvalidInput(format!(
                "window radius {radius} must lie in (0, 2]"
            )));
        }
        if degree_lo < 1 || degree_lo > degree_hi {
            return Err(Error::InvalidInput(format!(
                "degree range [{degree_lo}, {degree_hi}] must satisfy 1 ≤ lo ≤ hi"
            )));
        }
        Ok(Self {
            center,
            radius,
            degree_lo,
            degree_hi,
        })
    }

    /// Window over the tail `[⌈K/2⌉, K]` with radius `max(0.02, 2N/√K)`.
    pub fn with_defaults(center: SimplexDirection<T>, max_degree: u64) -> Result<Self> {
        let radius = default_radius(center.dimension(), max_degree);
        let (lo, hi) = tail_window(max_degree);
        Self::new(center, radius, lo.max(1), hi)
    }

    /// Tail window `[⌈K/2⌉, K]` with an explicit radius.
    pub fn tail(center: SimplexDirection<T>, radius: T, max_degree: u64) -> Result<Self> {
        let (lo, hi) = tail_window(max_degree);
        Self::new(center, radius, lo.max(1), hi)
    }

    pub fn center(&self) -> &SimplexDirection<T> {
        &self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn degree_range(&self) -> (u64, u64) {
        (self.degree_lo, self.degree_hi)
    }

    pub fn contains(&self, j: &MultiIndex) -> bool {
        let k = j.degree();
        k >= self.degree_lo
            && k <= self.degree_hi
            && projection_distance(j, &self.center) <= self.radius + T::SIMPLEX_TOL
    }
}

/// `max(0.02, 2N/√K)`, clipped to the admissible range `(0, 2]`.
pub fn default_radius<T: Real>(dimension: usize, max_degree: u64) -> T {
    let k = (max_degree.max(1)) as f64;
    let r = (2.0 * dimension as f64 / k.sqrt()).clamp(0.02, 2.0);
    T::lit(r)
}

/// `ψ̂(s) = max over the tail window of ⟨π(J), s⟩ + ln|c_J|/|J|`.
/// `-inf` when the rule has no support in the window.
pub fn psi_hat<T: Real>(series: &SeriesSpec<T>, point: &[T], max_degree: u64) -> Result<T> {
    if point.len() != series.dimension() {
        return Err(Error::DimensionMismatch {
            expected: series.dimension(),
            found: point.len(),
        });
    }
    let (lo, hi) = tail_window(max_degree);
    let mut best = T::neg_infinity();
    for k in lo.max(1)..=hi {
        let kf = T::from_count(k);
        for (j, _, log_c) in series.terms_of_degree(k) {
            let v = (log_monomial(&j, point) + log_c) / kf;
            if v > best {
                best = v;
            }
        }
    }
    Ok(best)
}

/// Verdict from the sign of `ψ̂` with an undecided band of half-width `epsilon`.
pub fn classify<T: Real>(
    series: &SeriesSpec<T>,
    point: &[T],
    max_degree: u64,
    epsilon: T,
) -> Result<MembershipVerdict<T>> {
    if epsilon.is_nan() || epsilon <= T::zero() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let value = psi_hat(series, point, max_degree)?;
    Ok(MembershipVerdict {
        class: verdict_class(value, epsilon),
        value,
        margin: epsilon,
    })
}

pub(crate) fn verdict_class<T: Real>(value: T, epsilon: T) -> Membership {
    if value < -epsilon {
        Membership::Inside
    } else if value > epsilon {
        Membership::Outside
    } else {
        Membership::Unknown
    }
}

/// `ĉ(α) = -max{ln|c_J|/|J| : J supported in the window}`; `+inf` for an empty window.
pub fn c_hat<T: Real>(series: &SeriesSpec<T>, window: &DirectionWindow<T>) -> Result<T> {
    Ok(window_maximizer(series, window)?
        .map(|(_, v)| T::zero() - v)
        .unwrap_or_else(T::infinity))
}

/// The supported index in `window` with the largest `ln|c_J|/|J|`. Ties go
/// to the index whose projection is closest to the window center, then to
/// the lexicographically smallest.
pub fn window_maximizer<T: Real>(
    series: &SeriesSpec<T>,
    window: &DirectionWindow<T>,
) -> Result<Option<(MultiIndex, T)>> {
    if window.center.dimension() != series.dimension() {
        return Err(Error::DimensionMismatch {
            expected: series.dimension(),
            found: window.center.dimension(),
        });
    }
    let mut best: Option<(MultiIndex, T, T)> = None;
    for k in window.degree_lo..=window.degree_hi {
        let kf = T::from_count(k);
        for (j, _, log_c) in series.terms_of_degree(k) {
            if !window.contains(&j) {
                continue;
            }
            let v = log_c / kf;
            let dist = projection_distance(&j, &window.center);
            let better = match &best {
                None => true,
                Some((bj, bv, bd)) => v > *bv || v == *bv && (dist < *bd || dist == *bd && j < *bj),
            };
            if better {
                best = Some((j, v, dist));
            }
        }
    }
    Ok(best.map(|(j, v, _)| (j, v)))
}

/// Half-space `{s : ⟨α̂, s⟩ + d̂ < 0}` of a series whose tail support clusters
/// around one direction: `α̂` is the degree-weighted mean projection and `d̂`
/// the tail maximum of `ln|c_J|/|J|`. Returned with `offset = -d̂`.
pub fn elementary_halfspace<T: Real>(
    series: &SeriesSpec<T>,
    max_degree: u64,
) -> Result<HalfSpace<T>> {
    let (lo, hi) = tail_window(max_degree);
    let terms: Vec<(MultiIndex, T)> = (lo.max(1)..=hi)
        .flat_map(|k| series.terms_of_degree(k))
        .map(|(j, _, log_c)| {
            let v = log_c / T::from_count(j.degree());
            (j, v)
        })
        .collect();
    if terms.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let projections: Vec<SimplexDirection<T>> = terms
        .iter()
        .map(|(j, _)| project(j))
        .collect::<Result<_>>()?;
    let limit = T::lit(ELEMENTARY_DIAMETER);
    let mut diameter = T::zero();
    for (i, a) in projections.iter().enumerate() {
        for b in &projections[i + 1..] {
            diameter = diameter.max(l1_distance(a.coords(), b.coords()));
        }
        if diameter > limit {
            return Err(Error::NotElementary {
                diameter: diameter.as_f64(),
            });
        }
    }
    let normal = degree_weighted_mean(terms.iter().map(|(j, _)| j), series.dimension())?;
    let growth = terms.iter().map(|t| t.1).fold(T::neg_infinity(), T::max);
    Ok(HalfSpace::new(normal, -growth))
}

/// `Σ J / Σ |J|` accumulated in the given (ascending-degree) order.
pub(crate) fn degree_weighted_mean<'a, T: Real>(
    indices: impl Iterator<Item = &'a MultiIndex>,
    dimension: usize,
) -> Result<SimplexDirection<T>> {
    let mut sums = vec![0u128; dimension];
    let mut total: u128 = 0;
    for j in indices {
        for (s, &e) in sums.iter_mut().zip(j.entries()) {
            *s += u128::from(e);
        }
        total += u128::from(j.degree());
    }
    if total == 0 {
        return Err(Error::EmptyWindow);
    }
    let total = T::from_u128(total).expect("representable");
    SimplexDirection::new(
        sums.into_iter()
            .map(|s| T::from_u128(s).expect("representable") / total)
            .collect(),
    )
}

/// Cauchy-Hadamard radius `1 / max_k |a_k|^{1/k}` of the slice series
/// `ζ ↦ Σ_k a_k ζ^k` over the tail window; `+inf` if every `a_k` vanishes there.
pub fn slice_radius<T: Real>(series: &SeriesSpec<T>, r: &[T], max_degree: u64) -> Result<T> {
    let (lo, hi) = tail_window(max_degree);
    let mut best = T::neg_infinity();
    for k in lo.max(1)..=hi {
        let v = series.slice_log_abs(r, k)? / T::from_count(k);
        if v > best {
            best = v;
        }
    }
    Ok((-best).exp())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use num_complex::Complex;

    use super::*;
    use crate::series::CoefficientRule;

    fn mi(v: &[u64]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn dir(c: &[f64]) -> SimplexDirection<f64> {
        SimplexDirection::new(c.to_vec()).unwrap()
    }

    fn ray(d: &[u64], ratio: f64) -> CoefficientRule<f64> {
        CoefficientRule::RayGeometric {
            direction: mi(d),
            ratio: Complex::new(ratio, 0.0),
        }
    }

    fn geo() -> SeriesSpec<f64> {
        SeriesSpec::full_geometric(2)
    }

    fn f2() -> SeriesSpec<f64> {
        SeriesSpec::new(2, ray(&[1, 1], 2.0), "f2").unwrap()
    }

    fn f0() -> SeriesSpec<f64> {
        SeriesSpec::new(
            2,
            CoefficientRule::Sum(vec![CoefficientRule::FullGeometric, ray(&[1, 1], 2.0)]),
            "f0",
        )
        .unwrap()
    }

    #[test]
    fn psi_hat_examples() {
        assert!((psi_hat(&geo(), &[-0.1, -0.1], 64).unwrap() + 0.1).abs() < 1e-12);
        let v = psi_hat(&geo(), &[0.05, -3.0], 64).unwrap();
        assert!((v - 0.05).abs() < 3.0 / 64.0);
        assert!((v - 0.05).abs() < 1e-15);
        let v = psi_hat(&f2(), &[0.0, 0.0], 64).unwrap();
        assert!((v - 2f64.ln() / 2.0).abs() < 1e-12);
        let empty =
            SeriesSpec::new(2, CoefficientRule::ExplicitTable(BTreeMap::new()), "").unwrap();
        assert_eq!(psi_hat(&empty, &[0.0, 0.0], 64).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn classify_examples() {
        let v = classify(&geo(), &[-0.5, -0.5], 64, 0.05).unwrap();
        assert_eq!(v.class, Membership::Inside);
        let v = classify(&geo(), &[0.5, 0.5], 64, 0.05).unwrap();
        assert_eq!(v.class, Membership::Outside);
        let v = classify(&geo(), &[0.01, -0.01], 64, 0.05).unwrap();
        assert_eq!(v.class, Membership::Unknown);
        assert!(classify(&geo(), &[0.0, 0.0], 64, 0.0).is_err());
    }

    #[test]
    fn c_hat_examples() {
        for t in [0.0, 0.3, 0.5, 0.9, 1.0] {
            let w = DirectionWindow::tail(dir(&[t, 1.0 - t]), 0.1, 64).unwrap();
            assert_eq!(c_hat(&geo(), &w).unwrap(), 0.0);
        }
        let w = DirectionWindow::tail(dir(&[0.5, 0.5]), 0.02, 64).unwrap();
        let v = c_hat(&f0(), &w).unwrap();
        // brute force: diagonal terms ln(1 + 2^j)/(2j) for 2j in [32, 64], max at j = 16
        let brute = (16..=32)
            .map(|j| (1.0 + 2f64.powi(j)).ln() / (2.0 * j as f64))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((v + brute).abs() < 1e-12);
        assert!((v + 2f64.ln() / 2.0).abs() < 1e-4);
        let w = DirectionWindow::tail(dir(&[0.7, 0.3]), 0.05, 64).unwrap();
        assert_eq!(c_hat(&f0(), &w).unwrap(), 0.0);
        let w = DirectionWindow::tail(dir(&[1.0, 0.0]), 0.05, 64).unwrap();
        assert_eq!(c_hat(&f2(), &w).unwrap(), f64::INFINITY);
    }

    #[test]
    fn window_validation() {
        assert!(DirectionWindow::new(dir(&[1.0, 0.0]), 0.0, 1, 2).is_err());
        assert!(DirectionWindow::new(dir(&[1.0, 0.0]), 2.5, 1, 2).is_err());
        assert!(DirectionWindow::new(dir(&[1.0, 0.0]), 0.5, 0, 2).is_err());
        assert!(DirectionWindow::new(dir(&[1.0, 0.0]), 0.5, 3, 2).is_err());
        let w = DirectionWindow::with_defaults(dir(&[1.0, 0.0]), 64).unwrap();
        assert_eq!(w.radius(), 0.5);
        assert_eq!(w.degree_range(), (32, 64));
    }

    #[test]
    fn elementary_examples() {
        let h = elementary_halfspace(&f2(), 64).unwrap();
        assert_eq!(h.normal.coords(), &[0.5, 0.5]);
        assert!((h.offset + 2f64.ln() / 2.0).abs() < 1e-12);
        let third = SeriesSpec::new(2, ray(&[2, 1], 1.0 / 3.0), "").unwrap();
        let h = elementary_halfspace(&third, 64).unwrap();
        assert!((h.normal.coords()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((h.offset - 3f64.ln() / 3.0).abs() < 1e-12);
        assert!(matches!(
            elementary_halfspace(&geo(), 64),
            Err(Error::NotElementary { .. })
        ));
    }

    #[test]
    fn slice_radius_examples() {
        // a_k = (k+1) r^k: the window maximum sits at k = 32
        let bias = 33f64.powf(1.0 / 32.0);
        assert!((slice_radius(&geo(), &[1.0, 1.0], 64).unwrap() - 1.0 / bias).abs() < 1e-12);
        assert!((slice_radius(&geo(), &[0.5, 0.5], 64).unwrap() - 2.0 / bias).abs() < 1e-12);
        assert!((slice_radius(&geo(), &[1.0, 1.0], 1024).unwrap() - 1.0).abs() < 0.05);
        let r = slice_radius(&f2(), &[1.0, 1.0], 64).unwrap();
        assert!((r - 0.5f64.sqrt()).abs() < 0.02);
        let empty =
            SeriesSpec::new(2, CoefficientRule::ExplicitTable(BTreeMap::new()), "").unwrap();
        assert_eq!(
            slice_radius(&empty, &[1.0, 1.0], 64).unwrap(),
            f64::INFINITY
        );
    }
}
