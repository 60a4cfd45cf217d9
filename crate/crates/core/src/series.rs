//! Power series described by closed coefficient rules.
//!
//! A [`SeriesSpec`] pairs a dimension with a [`CoefficientRule`]. Every rule is
//! total: it yields a (possibly zero) complex coefficient for each multi-index.
//! Wherever possible the evaluators work with `ln|c_J|` instead of `c_J`, so a
//! rule such as [`SupportWeighted`] never has to exponentiate `-|J|·h` just to
//! take its logarithm again.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::construct::{FamilyParams, IndexFamily};
use crate::convex::SampledFunction;
use crate::error::{Error, Result};
use crate::index::{enumerate_degree, MultiIndex};
use crate::scalar::Real;

/// Coefficient rule of a power series `Σ c_J z^J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRule<T>", into = "RawRule<T>")]
#[serde(bound = "T: Real")]
pub enum CoefficientRule<T: Real> {
    /// Finitely many nonzero coefficients.
    ExplicitTable(BTreeMap<MultiIndex, Complex<T>>),
    /// `c_J = 1` for every `J`.
    FullGeometric,
    /// `c_{kJ₀} = ρ^k` for `k ≥ 1`, zero elsewhere.
    RayGeometric {
        direction: MultiIndex,
        ratio: Complex<T>,
    },
    /// `c_J = exp(-|J|·h(αⁿ))` on row `n` of an index family.
    SupportWeighted(SupportWeighted<T>),
    /// Index-wise sum of the members; like terms are combined.
    Sum(Vec<CoefficientRule<T>>),
}

/// Rule `c_J = exp(-|J| h̃(αⁿ))` for `J` in row `n` of an [`IndexFamily`].
#[derive(Debug, Clone)]
pub struct SupportWeighted<T: Real> {
    weights: SampledFunction<T>,
    family: IndexFamily<T>,
    row_of: HashMap<MultiIndex, usize>,
    by_degree: BTreeMap<u64, Vec<MultiIndex>>,
}

impl<T: Real> PartialEq for SupportWeighted<T> {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights && self.family.params() == other.family.params()
    }
}

impl<T: Real> SupportWeighted<T> {
    /// `weights` must be sampled at exactly the family directions, with finite values.
    pub fn new(weights: SampledFunction<T>, family: IndexFamily<T>) -> Result<Self> {
        if weights.directions() != family.directions() {
            return Err(Error::InvalidInput(
                "support weights must be sampled at the family directions".into(),
            ));
        }
        if let Some(i) = weights.values().iter().position(|v| !v.is_finite()) {
            return Err(Error::InfiniteSupport {
                direction: weights.directions()[i]
                    .coords()
                    .iter()
                    .map(|c| c.as_f64())
                    .collect(),
            });
        }
        let mut row_of = HashMap::new();
        let mut by_degree: BTreeMap<u64, Vec<MultiIndex>> = BTreeMap::new();
        for (n, row) in family.rows().iter().enumerate() {
            for j in row {
                if row_of.insert(j.clone(), n).is_some() {
                    return Err(Error::InvalidInput(format!(
                        "index family repeats index {j}"
                    )));
                }
                by_degree.entry(j.degree()).or_default().push(j.clone());
            }
        }
        for list in by_degree.values_mut() {
            list.sort();
        }
        Ok(Self {
            weights,
            family,
            row_of,
            by_degree,
        })
    }

    pub fn weights(&self) -> &SampledFunction<T> {
        &self.weights
    }

    pub fn family(&self) -> &IndexFamily<T> {
        &self.family
    }

    /// Row of the family containing `j`, if any.
    pub fn row_of(&self, j: &MultiIndex) -> Option<usize> {
        self.row_of.get(j).copied()
    }

    fn log_abs(&self, j: &MultiIndex) -> T {
        match self.row_of.get(j) {
            Some(&n) => -T::from_count(j.degree()) * self.weights.values()[n],
            None => T::neg_infinity(),
        }
    }

    fn dimension(&self) -> usize {
        self.family.dimension()
    }
}

impl<T: Real> CoefficientRule<T> {
    /// `(c_J, ln|c_J|)` for `j`; the logarithm is `-inf` for a zero coefficient.
    fn term(&self, j: &MultiIndex) -> (Complex<T>, T) {
        match self {
            Self::SupportWeighted(sw) => {
                let log = sw.log_abs(j);
                (Complex::new(log.exp(), T::zero()), log)
            }
            Self::RayGeometric { direction, ratio } => match j.multiple_of(direction) {
                Some(m) => (ray_power(*ratio, m), T::from_count(m) * ratio.norm().ln()),
                None => (Complex::new(T::zero(), T::zero()), T::neg_infinity()),
            },
            _ => {
                let c = self.value(j);
                (c, c.norm().ln())
            }
        }
    }

    fn value(&self, j: &MultiIndex) -> Complex<T> {
        let zero = Complex::new(T::zero(), T::zero());
        match self {
            Self::ExplicitTable(table) => table.get(j).copied().unwrap_or(zero),
            Self::FullGeometric => Complex::new(T::one(), T::zero()),
            Self::RayGeometric { .. } | Self::SupportWeighted(_) => self.term(j).0,
            Self::Sum(members) => members.iter().fold(zero, |acc, m| acc + m.value(j)),
        }
    }

    /// Whether `c_J` may be nonzero.
    pub fn is_supported(&self, j: &MultiIndex) -> bool {
        match self {
            Self::ExplicitTable(table) => table.contains_key(j),
            Self::FullGeometric => true,
            Self::RayGeometric { direction, .. } => j.multiple_of(direction).is_some(),
            Self::SupportWeighted(sw) => sw.row_of.contains_key(j),
            Self::Sum(members) => members.iter().any(|m| m.is_supported(j)),
        }
    }

    /// Indices of degree `k` that may carry a nonzero coefficient, sorted.
    fn supported_of_degree(&self, dimension: usize, k: u64) -> Vec<MultiIndex> {
        match self {
            Self::ExplicitTable(table) => {
                table.keys().filter(|j| j.degree() == k).cloned().collect()
            }
            Self::FullGeometric => enumerate_degree(dimension, k),
            Self::RayGeometric { direction, .. } => {
                if k == 0 || direction.is_zero() || !k.is_multiple_of(direction.degree()) {
                    Vec::new()
                } else {
                    direction
                        .scaled(k / direction.degree())
                        .map(|j| vec![j])
                        .unwrap_or_default()
                }
            }
            Self::SupportWeighted(sw) => sw.by_degree.get(&k).cloned().unwrap_or_default(),
            Self::Sum(members) => {
                if members.iter().any(|m| matches!(m, Self::FullGeometric)) {
                    return enumerate_degree(dimension, k);
                }
                let set: BTreeSet<MultiIndex> = members
                    .iter()
                    .flat_map(|m| m.supported_of_degree(dimension, k))
                    .collect();
                set.into_iter().collect()
            }
        }
    }

    /// Largest degree carrying a possibly nonzero coefficient; `None` when unbounded.
    pub fn max_support_degree(&self) -> Option<u64> {
        match self {
            Self::ExplicitTable(table) => Some(table.keys().map(|j| j.degree()).max().unwrap_or(0)),
            Self::FullGeometric => None,
            Self::RayGeometric { direction, ratio } => {
                if direction.is_zero() || ratio.norm() == T::zero() {
                    Some(0)
                } else {
                    None
                }
            }
            Self::SupportWeighted(sw) => {
                Some(sw.by_degree.keys().next_back().copied().unwrap_or(0))
            }
            Self::Sum(members) => members
                .iter()
                .try_fold(0, |acc, m| m.max_support_degree().map(|d| acc.max(d))),
        }
    }

    /// Dimension fixed by the rule's own data, if any.
    fn intrinsic_dimensions(&self, out: &mut Vec<usize>) {
        match self {
            Self::ExplicitTable(table) => out.extend(table.keys().map(|j| j.dimension())),
            Self::FullGeometric => {}
            Self::RayGeometric { direction, .. } => out.push(direction.dimension()),
            Self::SupportWeighted(sw) => out.push(sw.dimension()),
            Self::Sum(members) => members.iter().for_each(|m| m.intrinsic_dimensions(out)),
        }
    }

    /// Multiplies every coefficient by a real scalar.
    ///
    /// Only tables and sums of tables are closed under scaling inside the rule
    /// language; other rules are materialized as a table up to `max_degree`.
    pub fn scaled_table(&self, dimension: usize, factor: T, max_degree: u64) -> Self {
        if let Self::ExplicitTable(t) = self {
            return Self::ExplicitTable(
                t.iter()
                    .filter(|(j, _)| j.degree() <= max_degree)
                    .map(|(j, c)| (j.clone(), *c * factor))
                    .collect(),
            );
        }
        let top = self
            .max_support_degree()
            .map_or(max_degree, |d| d.min(max_degree));
        let mut table = BTreeMap::new();
        for k in 0..=top {
            for j in self.supported_of_degree(dimension, k) {
                let c = self.value(&j);
                if c.norm() != T::zero() {
                    table.insert(j, c * factor);
                }
            }
        }
        Self::ExplicitTable(table)
    }
}

fn ray_power<T: Real>(ratio: Complex<T>, m: u64) -> Complex<T> {
    match u32::try_from(m) {
        Ok(m32) => ratio.powu(m32),
        Err(_) => {
            let mf = T::from_count(m);
            Complex::from_polar((mf * ratio.norm().ln()).exp(), mf * ratio.arg())
        }
    }
}

/// A power series: dimension, coefficient rule, and a free-text label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries<T>", into = "RawSeries<T>")]
#[serde(bound = "T: Real")]
pub struct SeriesSpec<T: Real> {
    dimension: usize,
    label: String,
    rule: CoefficientRule<T>,
}

impl<T: Real> SeriesSpec<T> {
    pub fn new(
        dimension: usize,
        rule: CoefficientRule<T>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInput(
                "series dimension must be at least 1".into(),
            ));
        }
        let mut dims = Vec::new();
        rule.intrinsic_dimensions(&mut dims);
        if let Some(&found) = dims.iter().find(|&&d| d != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found,
            });
        }
        if let CoefficientRule::RayGeometric { direction, .. } = &rule {
            if direction.is_zero() {
                return Err(Error::ZeroIndexNotProjectable);
            }
        }
        Ok(Self {
            dimension,
            label: label.into(),
            rule,
        })
    }

    pub fn full_geometric(dimension: usize) -> Self {
        Self::new(dimension, CoefficientRule::FullGeometric, "full geometric")
            .expect("positive dimension")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rule(&self) -> &CoefficientRule<T> {
        &self.rule
    }

    fn check(&self, j: &MultiIndex) -> Result<()> {
        if j.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: j.dimension(),
            });
        }
        Ok(())
    }

    fn check_point(&self, r: &[T], strictly_positive: bool) -> Result<()> {
        if r.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: r.len(),
            });
        }
        let bad = r
            .iter()
            .any(|&x| !x.is_finite() || x < T::zero() || (strictly_positive && x == T::zero()));
        if bad {
            let what = if strictly_positive {
                "positive"
            } else {
                "non-negative"
            };
            return Err(Error::InvalidInput(format!(
                "point coordinates must be finite and {what}"
            )));
        }
        Ok(())
    }

    pub fn coefficient(&self, j: &MultiIndex) -> Result<Complex<T>> {
        self.check(j)?;
        Ok(self.rule.value(j))
    }

    /// `ln|c_J|`, `-inf` for a zero coefficient.
    pub fn log_abs_coefficient(&self, j: &MultiIndex) -> Result<T> {
        self.check(j)?;
        Ok(self.rule.term(j).1)
    }

    /// `ln|c_J| / |J|`, `-inf` for a zero coefficient.
    pub fn log_abs_coeff_normalized(&self, j: &MultiIndex) -> Result<T> {
        self.check(j)?;
        if j.is_zero() {
            return Err(Error::ZeroIndexNotProjectable);
        }
        Ok(self.rule.term(j).1 / T::from_count(j.degree()))
    }

    pub fn is_supported(&self, j: &MultiIndex) -> bool {
        j.dimension() == self.dimension && self.rule.is_supported(j)
    }

    /// Indices of degree `k` that may carry a nonzero coefficient, lexicographic.
    pub fn supported_of_degree(&self, k: u64) -> Vec<MultiIndex> {
        self.rule.supported_of_degree(self.dimension, k)
    }

    /// `(J, c_J, ln|c_J|)` for every nonzero coefficient of degree `k`.
    pub fn terms_of_degree(&self, k: u64) -> Vec<(MultiIndex, Complex<T>, T)> {
        self.supported_of_degree(k)
            .into_iter()
            .filter_map(|j| {
                let (c, log) = self.rule.term(&j);
                (log > T::neg_infinity()).then_some((j, c, log))
            })
            .collect()
    }

    pub fn max_support_degree(&self) -> Option<u64> {
        self.rule.max_support_degree()
    }

    /// `Σ_{|J| ≤ K} |c_J| r^J`, summed by ascending degree.
    pub fn partial_sum_abs(&self, r: &[T], max_degree: u64) -> Result<T> {
        self.check_point(r, false)?;
        let log_r: Vec<T> = r.iter().map(|x| x.ln()).collect();
        let mut total = T::zero();
        for k in 0..=max_degree {
            for (j, _, log_c) in self.terms_of_degree(k) {
                total = total + (log_c + log_monomial(&j, &log_r)).exp();
            }
        }
        Ok(total)
    }

    /// `Σ_{|J| ≤ K} c_J r^J` at a point with non-negative real coordinates.
    pub fn partial_sum(&self, r: &[T], max_degree: u64) -> Result<Complex<T>> {
        self.check_point(r, false)?;
        let log_r: Vec<T> = r.iter().map(|x| x.ln()).collect();
        let mut total = Complex::new(T::zero(), T::zero());
        for k in 0..=max_degree {
            for (j, c, log_c) in self.terms_of_degree(k) {
                total = total + scaled_term(c, log_c, log_monomial(&j, &log_r));
            }
        }
        Ok(total)
    }

    /// Coefficients `a_k = Σ_{|J|=k} c_J r^J` of the one-variable slice
    /// `ζ ↦ Σ_J c_J (ζ r)^J`, for `k = 0..=K`.
    pub fn slice_coefficients(&self, r: &[T], max_degree: u64) -> Result<Vec<Complex<T>>> {
        self.check_point(r, true)?;
        let log_r: Vec<T> = r.iter().map(|x| x.ln()).collect();
        Ok((0..=max_degree)
            .map(|k| {
                self.terms_of_degree(k)
                    .into_iter()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (j, c, log_c)| {
                        acc + scaled_term(c, log_c, log_monomial(&j, &log_r))
                    })
            })
            .collect())
    }

    /// `ln|a_k|` for the slice coefficient of degree `k`, computed with a
    /// per-degree rescaling so that tiny or huge terms neither underflow nor
    /// overflow before they are combined.
    pub fn slice_log_abs(&self, r: &[T], k: u64) -> Result<T> {
        self.check_point(r, true)?;
        let log_r: Vec<T> = r.iter().map(|x| x.ln()).collect();
        let terms: Vec<(Complex<T>, T)> = self
            .terms_of_degree(k)
            .into_iter()
            .map(|(j, c, log_c)| {
                let phase = c / c.norm();
                (phase, log_c + log_monomial(&j, &log_r))
            })
            .collect();
        let peak = terms.iter().map(|t| t.1).fold(T::neg_infinity(), T::max);
        if peak == T::neg_infinity() {
            return Ok(T::neg_infinity());
        }
        let sum = terms
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (phase, log)| {
                acc + phase * (*log - peak).exp()
            });
        Ok(sum.norm().ln() + peak)
    }
}

/// `⟨J, ln r⟩`, treating `0 · ln 0` as `0`.
pub(crate) fn log_monomial<T: Real>(j: &MultiIndex, log_r: &[T]) -> T {
    j.entries()
        .iter()
        .zip(log_r)
        .filter(|(&e, _)| e > 0)
        .fold(T::zero(), |acc, (&e, &l)| acc + T::from_count(e) * l)
}

fn scaled_term<T: Real>(c: Complex<T>, log_c: T, log_mono: T) -> Complex<T> {
    let magnitude = (log_c + log_mono).exp();
    if magnitude == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    c / c.norm() * magnitude
}

// ---------------------------------------------------------------------------
// serialized forms

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct RawSeries<T: Real> {
    dimension: usize,
    #[serde(default)]
    label: String,
    rule: CoefficientRule<T>,
}

impl<T: Real> TryFrom<RawSeries<T>> for SeriesSpec<T> {
    type Error = Error;

    fn try_from(raw: RawSeries<T>) -> Result<Self> {
        Self::new(raw.dimension, raw.rule, raw.label)
    }
}

impl<T: Real> From<SeriesSpec<T>> for RawSeries<T> {
    fn from(s: SeriesSpec<T>) -> Self {
        Self {
            dimension: s.dimension,
            label: s.label,
            rule: s.rule,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct TableEntry<T: Real> {
    index: MultiIndex,
    value: Complex<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Real")]
enum RawRule<T: Real> {
    ExplicitTable {
        entries: Vec<TableEntry<T>>,
    },
    FullGeometric,
    RayGeometric {
        direction: MultiIndex,
        ratio: Complex<T>,
    },
    SupportWeighted {
        weights: SampledFunction<T>,
        family: FamilyParams<T>,
    },
    Sum {
        members: Vec<CoefficientRule<T>>,
    },
}

impl<T: Real> TryFrom<RawRule<T>> for CoefficientRule<T> {
    type Error = Error;

    fn try_from(raw: RawRule<T>) -> Result<Self> {
        Ok(match raw {
            RawRule::ExplicitTable { entries } => {
                let mut table = BTreeMap::new();
                for e in entries {
                    if table.insert(e.index.clone(), e.value).is_some() {
                        return Err(Error::InvalidInput(format!(
                            "explicit table lists index {} twice",
                            e.index
                        )));
                    }
                }
                Self::ExplicitTable(table)
            }
            RawRule::FullGeometric => Self::FullGeometric,
            RawRule::RayGeometric { direction, ratio } => Self::RayGeometric { direction, ratio },
            RawRule::SupportWeighted { weights, family } => {
                let family = IndexFamily::generate(family)?;
                Self::SupportWeighted(SupportWeighted::new(weights, family)?)
            }
            RawRule::Sum { members } => Self::Sum(members),
        })
    }
}

impl<T: Real> From<CoefficientRule<T>> for RawRule<T> {
    fn from(rule: CoefficientRule<T>) -> Self {
        match rule {
            CoefficientRule::ExplicitTable(table) => RawRule::ExplicitTable {
                entries: table
                    .into_iter()
                    .map(|(index, value)| TableEntry { index, value })
                    .collect(),
            },
            CoefficientRule::FullGeometric => RawRule::FullGeometric,
            CoefficientRule::RayGeometric { direction, ratio } => {
                RawRule::RayGeometric { direction, ratio }
            }
            CoefficientRule::SupportWeighted(sw) => RawRule::SupportWeighted {
                family: sw.family.params().clone(),
                weights: sw.weights,
            },
            CoefficientRule::Sum(members) => RawRule::Sum { members },
        }
    }
}
