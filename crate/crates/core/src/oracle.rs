//! Brute-force convergence probe at a point of the absolute space, independent
//! of the Cauchy–Hadamard estimators.
//!
//! Degree blocks `B_k = Σ_{|J|=k} |c_J| r^J` are accumulated in the log
//! domain. The growth rate is read off the two half-windows
//! `W_lo = Σ_{k ≤ K/2} B_k` and `W_hi = Σ_{K/2 < k ≤ K} B_k` as
//! `ρ̂ = (W_hi / W_lo)^{2/K}`; summing whole half-windows keeps series whose
//! support is spread unevenly across degrees from flickering between blocks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::hadamard::{classify, Membership};
use crate::scalar::Real;
use crate::series::{log_monomial, SeriesSpec};

pub const DEFAULT_MARGIN: f64 = 0.1;
pub const MIN_PROBE_DEGREE: u64 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeClass {
    Converges,
    Diverges,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct ProbeVerdict<T: Real> {
    pub class: ProbeClass,
    /// `ρ̂`; `NaN` when there are too few nonzero blocks to fit it.
    pub tail_ratio: T,
    /// `Σ_{|J| ≤ K} |c_J| r^J`, possibly `+inf`.
    pub partial: T,
}

fn log_add<T: Real>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Classifies absolute convergence of `series` at the non-negative point `r`.
pub fn probe<T: Real>(
    series: &SeriesSpec<T>,
    r: &[T],
    max_degree: u64,
    margin: T,
) -> Result<ProbeVerdict<T>> {
    if max_degree < MIN_PROBE_DEGREE {
        return Err(Error::InvalidInput(format!(
            "probe needs K ≥ {MIN_PROBE_DEGREE}, got {max_degree}"
        )));
    }
    if !(margin > T::zero() && margin < T::lit(0.5)) {
        return Err(Error::InvalidInput(format!(
            "probe margin {margin} is outside (0, 0.5)"
        )));
    }
    if r.len() != series.dimension() {
        return Err(Error::DimensionMismatch {
            expected: series.dimension(),
            found: r.len(),
        });
    }
    if r.iter().any(|x| !(x.is_finite() && *x >= T::zero())) {
        return Err(Error::InvalidInput(format!(
            "probe point {:?} must be finite and non-negative",
            r
        )));
    }
    let log_r: Vec<T> = r.iter().map(|x| x.ln()).collect();
    let half = max_degree / 2;
    let mut blocks = Vec::with_capacity(max_degree as usize + 1);
    for k in 0..=max_degree {
        let b = series
            .terms_of_degree(k)
            .iter()
            .fold(T::neg_infinity(), |acc, (j, _, log_c)| {
                log_add(acc, *log_c + log_monomial(j, &log_r))
            });
        blocks.push(b);
    }
    let partial = blocks
        .iter()
        .fold(T::neg_infinity(), |acc, &b| log_add(acc, b))
        .exp();

    let nonzero = |range: &[T]| range.iter().filter(|b| **b > T::neg_infinity()).count();
    let (lo_blocks, hi_blocks) = blocks[1..].split_at(half as usize);
    let verdict = |class, tail_ratio| ProbeVerdict {
        class,
        tail_ratio,
        partial,
    };
    if !partial.is_finite() {
        return Ok(verdict(ProbeClass::Diverges, T::infinity()));
    }
    if nonzero(&blocks[1..]) < 2 || nonzero(lo_blocks) == 0 {
        return Ok(verdict(ProbeClass::Inconclusive, T::nan()));
    }
    if nonzero(hi_blocks) == 0 {
        return Ok(verdict(ProbeClass::Converges, T::zero()));
    }
    let w_lo = lo_blocks
        .iter()
        .fold(T::neg_infinity(), |acc, &b| log_add(acc, b));
    let w_hi = hi_blocks
        .iter()
        .fold(T::neg_infinity(), |acc, &b| log_add(acc, b));
    let ratio = ((w_hi - w_lo) / T::from_count(half)).exp();
    let class = if ratio < T::one() - margin {
        ProbeClass::Converges
    } else if ratio > T::one() + margin {
        ProbeClass::Diverges
    } else {
        ProbeClass::Inconclusive
    };
    Ok(verdict(class, ratio))
}

/// Estimator and oracle verdicts at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct AgreementRow<T: Real> {
    pub s: Vec<T>,
    pub class: Membership,
    pub psi_hat: T,
    pub probe: ProbeClass,
    pub tail_ratio: T,
}

impl<T: Real> AgreementRow<T> {
    pub fn is_decisive(&self) -> bool {
        self.class != Membership::Unknown && self.probe != ProbeClass::Inconclusive
    }

    pub fn agrees(&self) -> bool {
        matches!(
            (self.class, self.probe),
            (Membership::Inside, ProbeClass::Converges)
                | (Membership::Outside, ProbeClass::Diverges)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct AgreementReport<T: Real> {
    pub degree: u64,
    pub epsilon: T,
    pub margin: T,
    pub points: usize,
    pub decisive: usize,
    pub agreements: usize,
    /// Fraction of decisive points that agree; `1.0` when none are decisive.
    pub agreement: f64,
    pub rows: Vec<AgreementRow<T>>,
}

/// Compares `classify` at each log-point `s` with `probe` at `r = exp(s)`.
pub fn agreement_grid<T: Real>(
    series: &SeriesSpec<T>,
    grid: &Grid<T>,
    max_degree: u64,
    epsilon: T,
    margin: T,
) -> Result<AgreementReport<T>> {
    if grid.dimension() != series.dimension() {
        return Err(Error::DimensionMismatch {
            expected: series.dimension(),
            found: grid.dimension(),
        });
    }
    let mut rows = Vec::with_capacity(grid.len());
    for s in grid.points() {
        let verdict = classify(series, &s, max_degree, epsilon)?;
        let r: Vec<T> = s.iter().map(|x| x.exp()).collect();
        let p = probe(series, &r, max_degree, margin)?;
        rows.push(AgreementRow {
            s,
            class: verdict.class,
            psi_hat: verdict.value,
            probe: p.class,
            tail_ratio: p.tail_ratio,
        });
    }
    let decisive = rows.iter().filter(|r| r.is_decisive()).count();
    let agreements = rows
        .iter()
        .filter(|r| r.is_decisive() && r.agrees())
        .count();
    Ok(AgreementReport {
        degree: max_degree,
        epsilon,
        margin,
        points: rows.len(),
        decisive,
        agreements,
        agreement: if decisive == 0 {
            1.0
        } else {
            agreements as f64 / decisive as f64
        },
        rows,
    })
}
