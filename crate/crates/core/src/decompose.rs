//! Decompositions of a series into elementary (half-space) sub-series and into
//! simple (wedge) summands.
//!
//! Elementary rows are formed by nearest-direction routing: every supported
//! index of degree `1..=K` goes to the row whose prescribed direction is
//! l1-closest to its projection, ties to the lower row. Coefficients are
//! copied, never recomputed, so the partition is exact bit for bit.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::Serialize;

use crate::construct::{build_family, finite_support_values};
use crate::convex::{
    convex_closure_value, reduce_to_dense_subset, HDomain, HalfSpace, SampledFunction,
};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::hadamard::{
    c_hat, classify, degree_weighted_mean, tail_window, DirectionWindow, Membership,
};
use crate::index::{projection_distance, MultiIndex, SimplexDirection};
use crate::scalar::Real;
use crate::series::{CoefficientRule, SeriesSpec};

/// One routed row `g_n` with its half-space estimate.
#[derive(Debug, Clone)]
pub struct ElementaryRow<T: Real> {
    pub direction: SimplexDirection<T>,
    pub series: SeriesSpec<T>,
    /// Tail maximum of `ln|c_J|/|J|` over the row; `-inf` when the tail is empty.
    pub growth: T,
    /// `{⟨αⁿ, s⟩ + growth < 0}`; `None` marks a row without tail support.
    pub halfspace: Option<HalfSpace<T>>,
    /// Degree-weighted mean projection of the row's tail indices.
    pub mean_direction: Option<SimplexDirection<T>>,
}

#[derive(Debug, Clone)]
pub struct ElementaryDecomposition<T: Real> {
    pub rows: Vec<ElementaryRow<T>>,
    /// Constant term `g₀`, kept apart from the rows.
    pub constant: Complex<T>,
    /// Row of every supported index with degree in `1..=K`.
    pub assignment: BTreeMap<MultiIndex, usize>,
    pub max_degree: u64,
}

fn table_of<T: Real>(series: &SeriesSpec<T>) -> &BTreeMap<MultiIndex, Complex<T>> {
    match series.rule() {
        CoefficientRule::ExplicitTable(t) => t,
        _ => unreachable!("rows are explicit tables"),
    }
}

impl<T: Real> ElementaryDecomposition<T> {
    /// Moves `g₀` into the first row.
    pub fn absorb_constant(&mut self) -> Result<()> {
        if self.constant.norm() == T::zero() {
            return Ok(());
        }
        let row = &mut self.rows[0];
        let mut table = table_of(&row.series).clone();
        let n = row.series.dimension();
        table.insert(MultiIndex::zero(n), self.constant);
        row.series = SeriesSpec::new(n, CoefficientRule::ExplicitTable(table), row.series.label())?;
        self.constant = Complex::new(T::zero(), T::zero());
        Ok(())
    }

    /// Checks that the rows reproduce `series` coefficient for coefficient
    /// (bitwise) on every supported index of degree `1..=K`, with no index
    /// in two rows.
    pub fn partition_is_exact(&self, series: &SeriesSpec<T>) -> Result<bool> {
        let mut seen = 0usize;
        for k in 1..=self.max_degree {
            for (j, c, _) in series.terms_of_degree(k) {
                let Some(&row) = self.assignment.get(&j) else {
                    return Ok(false);
                };
                let routed = table_of(&self.rows[row].series).get(&j);
                if routed.map(|r| bits(*r)) != Some(bits(c)) {
                    return Ok(false);
                }
                let elsewhere = self
                    .rows
                    .iter()
                    .enumerate()
                    .any(|(i, r)| i != row && table_of(&r.series).contains_key(&j));
                if elsewhere {
                    return Ok(false);
                }
                seen += 1;
            }
        }
        let routed_total: usize = self.rows.iter().map(|r| table_of(&r.series).len()).sum();
        let constant_ok = bits(self.constant)
            == bits(series.coefficient(&MultiIndex::zero(series.dimension()))?)
            || self.constant.norm() == T::zero();
        Ok(seen == routed_total && seen == self.assignment.len() && constant_ok)
    }

    /// `(Σ_n |g_n|-partial sums + |g₀|, |g|-partial sum)` at `r`, both summed
    /// term by term in ascending degree and lexicographic order.
    pub fn partial_sum_pair(&self, series: &SeriesSpec<T>, r: &[T]) -> Result<(T, T)> {
        let reassembled = self.reassembled(series.dimension())?;
        Ok((
            reassembled.partial_sum_abs(r, self.max_degree)?,
            series.partial_sum_abs(r, self.max_degree)?,
        ))
    }

    /// Union of the rows and the constant as one explicit table.
    pub fn reassembled(&self, dimension: usize) -> Result<SeriesSpec<T>> {
        let mut table = BTreeMap::new();
        if self.constant.norm() != T::zero() {
            table.insert(MultiIndex::zero(dimension), self.constant);
        }
        for row in &self.rows {
            for (j, c) in table_of(&row.series) {
                if table.insert(j.clone(), *c).is_some() {
                    return Err(Error::SupportsOverlap { index: j.clone() });
                }
            }
        }
        SeriesSpec::new(
            dimension,
            CoefficientRule::ExplicitTable(table),
            "reassembled",
        )
    }
}

fn bits<T: Real>(c: Complex<T>) -> (u64, u64) {
    (c.re.as_f64().to_bits(), c.im.as_f64().to_bits())
}

fn check_directions<T: Real>(dimension: usize, directions: &[SimplexDirection<T>]) -> Result<()> {
    if directions.is_empty() {
        return Err(Error::InvalidInput(
            "at least one direction is required".into(),
        ));
    }
    for (i, a) in directions.iter().enumerate() {
        if a.dimension() != dimension {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: a.dimension(),
            });
        }
        if directions[..i]
            .iter()
            .any(|b| a.l1_distance(b) <= T::DISTINCT_TOL)
        {
            return Err(Error::InvalidInput(format!(
                "repeated direction {:?}",
                a.coords()
            )));
        }
    }
    Ok(())
}

/// Routes the coefficients of `series` up to degree `K` into elementary rows.
pub fn decompose_elementary<T: Real>(
    series: &SeriesSpec<T>,
    directions: &[SimplexDirection<T>],
    max_degree: u64,
) -> Result<ElementaryDecomposition<T>> {
    let n = series.dimension();
    check_directions(n, directions)?;
    let mut tables: Vec<BTreeMap<MultiIndex, Complex<T>>> = vec![BTreeMap::new(); directions.len()];
    let mut tails: Vec<Vec<(MultiIndex, T)>> = vec![Vec::new(); directions.len()];
    let mut assignment = BTreeMap::new();
    let (lo, hi) = tail_window(max_degree);
    for k in 1..=max_degree {
        for (j, c, log_c) in series.terms_of_degree(k) {
            let row = nearest_row(&j, directions);
            if k >= lo && k <= hi {
                tails[row].push((j.clone(), log_c / T::from_count(k)));
            }
            tables[row].insert(j.clone(), c);
            assignment.insert(j, row);
        }
    }
    let constant = series.coefficient(&MultiIndex::zero(n))?;
    let rows = directions
        .iter()
        .zip(tables)
        .zip(tails)
        .enumerate()
        .map(|(i, ((alpha, table), tail))| {
            let growth = tail.iter().map(|t| t.1).fold(T::neg_infinity(), T::max);
            let (halfspace, mean_direction) = if tail.is_empty() {
                (None, None)
            } else {
                (
                    Some(HalfSpace::new(alpha.clone(), -growth)),
                    Some(degree_weighted_mean(tail.iter().map(|t| &t.0), n)?),
                )
            };
            Ok(ElementaryRow {
                direction: alpha.clone(),
                series: SeriesSpec::new(
                    n,
                    CoefficientRule::ExplicitTable(table),
                    format!("{} / elementary row {}", series.label(), i + 1),
                )?,
                growth,
                halfspace,
                mean_direction,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ElementaryDecomposition {
        rows,
        constant,
        assignment,
        max_degree,
    })
}

fn nearest_row<T: Real>(j: &MultiIndex, directions: &[SimplexDirection<T>]) -> usize {
    let mut best = 0;
    let mut best_dist = T::infinity();
    for (i, alpha) in directions.iter().enumerate() {
        let d = projection_distance(j, alpha);
        if d < best_dist {
            best = i;
            best_dist = d;
        }
    }
    best
}

/// One simple summand `σ_n` and its wedge.
#[derive(Debug, Clone)]
pub struct SimplePart<T: Real> {
    pub series: SeriesSpec<T>,
    /// Supporting half-space `Hₙ = {⟨αⁿ, s⟩ - h(αⁿ) < 0}`.
    pub supporting: HalfSpace<T>,
    /// `(Hₙ, Hₙ₋₁)` for `n ≥ 2`; the first summand has the single half-space `H₁`.
    pub wedge: Option<(HalfSpace<T>, HalfSpace<T>)>,
}

#[derive(Debug, Clone)]
pub struct SimpleDecomposition<T: Real> {
    pub parts: Vec<SimplePart<T>>,
    pub elementary: ElementaryDecomposition<T>,
    /// Rows `f_n` with coefficients `exp(-|J| h(αⁿ))`.
    pub auxiliary: Vec<SeriesSpec<T>>,
}

impl<T: Real> SimpleDecomposition<T> {
    pub fn wedges(&self) -> Vec<(HalfSpace<T>, HalfSpace<T>)> {
        self.parts.iter().filter_map(|p| p.wedge.clone()).collect()
    }

    /// Membership in the intersection of all wedges.
    pub fn wedge_intersection_contains(&self, s: &[T]) -> bool {
        self.wedges()
            .iter()
            .all(|(a, b)| a.contains(s) && b.contains(s))
    }

    /// Relative gap between `Σ σ_n` and `Σ g_n + f_M/M`, compared through the
    /// degree-`K` partial sums at the real point `r`.
    pub fn telescoping_error(&self, r: &[T]) -> Result<T> {
        let k = self.elementary.max_degree;
        let m = self.parts.len();
        let mut lhs = Complex::new(T::zero(), T::zero());
        for p in &self.parts {
            lhs = lhs + p.series.partial_sum(r, k)?;
        }
        let mut rhs = Complex::new(T::zero(), T::zero());
        for row in &self.elementary.rows {
            rhs = rhs + row.series.partial_sum(r, k)?;
        }
        rhs = rhs + self.auxiliary[m - 1].partial_sum(r, k)? / T::from_count(m as u64);
        let scale = rhs.norm().max(T::min_positive_value());
        Ok((lhs - rhs).norm() / scale)
    }
}

/// Telescoping wedge decomposition
/// `σ₁ = g₁ + f₁`, `σₙ₊₁ = (gₙ₊₁ + fₙ₊₁/(n+1)) - fₙ/n`.
pub fn decompose_simple<T: Real>(
    series: &SeriesSpec<T>,
    domain: &HDomain<T>,
    directions: &[SimplexDirection<T>],
    max_degree: u64,
) -> Result<SimpleDecomposition<T>> {
    if directions.len() < 2 {
        return Err(Error::NeedTwoDirections);
    }
    if domain.dimension() != series.dimension() {
        return Err(Error::DimensionMismatch {
            expected: series.dimension(),
            found: domain.dimension(),
        });
    }
    let n = series.dimension();
    let support = finite_support_values(domain, directions)?;
    let elementary = decompose_elementary(series, directions, max_degree)?;
    let family = build_family(directions, max_degree)?;

    let auxiliary = family
        .rows()
        .iter()
        .zip(&support)
        .enumerate()
        .map(|(i, (row, &h))| {
            let table = row
                .iter()
                .map(|j| {
                    let c = (-T::from_count(j.degree()) * h).exp();
                    (j.clone(), Complex::new(c, T::zero()))
                })
                .collect();
            SeriesSpec::new(
                n,
                CoefficientRule::ExplicitTable(table),
                format!("f_{}", i + 1),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let supporting: Vec<HalfSpace<T>> = directions
        .iter()
        .zip(&support)
        .map(|(a, &h)| HalfSpace::new(a.clone(), h))
        .collect();

    let mut parts = Vec::with_capacity(directions.len());
    for i in 0..directions.len() {
        let g = elementary.rows[i].series.rule().clone();
        let this_f =
            auxiliary[i]
                .rule()
                .scaled_table(n, T::one() / T::from_count(i as u64 + 1), u64::MAX);
        let mut members = vec![g, this_f];
        let wedge = if i == 0 {
            None
        } else {
            let prev = auxiliary[i - 1].rule().scaled_table(
                n,
                -T::one() / T::from_count(i as u64),
                u64::MAX,
            );
            members.push(prev);
            Some((supporting[i].clone(), supporting[i - 1].clone()))
        };
        parts.push(SimplePart {
            series: SeriesSpec::new(n, CoefficientRule::Sum(members), format!("sigma_{}", i + 1))?,
            supporting: supporting[i].clone(),
            wedge,
        });
    }
    Ok(SimpleDecomposition {
        parts,
        elementary,
        auxiliary,
    })
}

/// Domain estimate `c_hat → cl conv → supporting half-spaces` at `directions`.
pub fn estimate_domain<T: Real>(
    series: &SeriesSpec<T>,
    directions: &[SimplexDirection<T>],
    max_degree: u64,
    radius: T,
) -> Result<HDomain<T>> {
    check_directions(series.dimension(), directions)?;
    let values = directions
        .iter()
        .map(|a| {
            c_hat(
                series,
                &DirectionWindow::tail(a.clone(), radius, max_degree)?,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let samples = SampledFunction::new(directions.to_vec(), values)?;
    let closure = directions
        .iter()
        .map(|a| convex_closure_value(&samples, a))
        .collect::<Result<Vec<_>>>()?;
    let carved = HDomain::new(
        series.dimension(),
        directions
            .iter()
            .zip(closure)
            .filter(|(_, v)| v.is_finite())
            .map(|(a, v)| HalfSpace::new(a.clone(), v))
            .collect(),
    )?;
    reduce_to_dense_subset(&carved, directions)
}

/// A grid point where the sum and the intersection of the parts disagree.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SumDisagreement<T: Real> {
    pub point: Vec<T>,
    pub sum: Membership,
    pub intersection: Membership,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SumDomainReport<T: Real> {
    pub points: usize,
    /// Points where both verdicts are decisive.
    pub compared: usize,
    pub agreements: usize,
    pub agreement: f64,
    pub disagreements: Vec<SumDisagreement<T>>,
    /// True when every disagreement has the sum outside while all parts are
    /// inside: the intersection strictly contains the sum's domain.
    pub containment_only: bool,
}

/// Compares the domain of `Σ parts` with the intersection of the parts' domains.
pub fn sum_domain_check<T: Real>(
    parts: &[SeriesSpec<T>],
    max_degree: u64,
    grid: &Grid<T>,
    epsilon: T,
) -> Result<SumDomainReport<T>> {
    let first = parts
        .first()
        .ok_or_else(|| Error::InvalidInput("no parts given".into()))?;
    let total = SeriesSpec::new(
        first.dimension(),
        CoefficientRule::Sum(parts.iter().map(|p| p.rule().clone()).collect()),
        "sum of parts",
    )?;
    sum_domain_check_against(parts, &total, max_degree, grid, epsilon)
}

/// Like [`sum_domain_check`] with the combined series supplied explicitly.
/// `total` must agree with the parts on their supports up to degree `K`; it
/// stands for the limit of an infinite family whose first members are `parts`.
pub fn sum_domain_check_against<T: Real>(
    parts: &[SeriesSpec<T>],
    total: &SeriesSpec<T>,
    max_degree: u64,
    grid: &Grid<T>,
    epsilon: T,
) -> Result<SumDomainReport<T>> {
    let n = total.dimension();
    if let Some(p) = parts.iter().find(|p| p.dimension() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.dimension(),
        });
    }
    if grid.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: grid.dimension(),
        });
    }
    for k in 0..=max_degree {
        let mut owner: BTreeMap<MultiIndex, Complex<T>> = BTreeMap::new();
        for p in parts {
            for (j, c, _) in p.terms_of_degree(k) {
                if owner.insert(j.clone(), c).is_some() {
                    return Err(Error::SupportsOverlap { index: j });
                }
            }
        }
        for (j, c) in owner {
            if total.coefficient(&j)? != c {
                return Err(Error::InvalidInput(format!(
                    "combined series differs from its parts at {j}"
                )));
            }
        }
    }

    let mut report = SumDomainReport {
        points: 0,
        compared: 0,
        agreements: 0,
        agreement: 1.0,
        disagreements: Vec::new(),
        containment_only: false,
    };
    for point in grid.points() {
        report.points += 1;
        let sum = classify(total, &point, max_degree, epsilon)?.class;
        let mut intersection = Membership::Inside;
        for p in parts {
            match classify(p, &point, max_degree, epsilon)?.class {
                Membership::Outside => {
                    intersection = Membership::Outside;
                    break;
                }
                Membership::Unknown => intersection = Membership::Unknown,
                Membership::Inside => {}
            }
        }
        if sum == Membership::Unknown || intersection == Membership::Unknown {
            continue;
        }
        report.compared += 1;
        if sum == intersection {
            report.agreements += 1;
        } else {
            report.disagreements.push(SumDisagreement {
                point,
                sum,
                intersection,
            });
        }
    }
    if report.compared > 0 {
        report.agreement = report.agreements as f64 / report.compared as f64;
    }
    report.containment_only = !report.disagreements.is_empty()
        && report
            .disagreements
            .iter()
            .all(|d| d.sum == Membership::Outside && d.intersection == Membership::Inside);
    Ok(report)
}
