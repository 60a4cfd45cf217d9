//! Constructive side: doubly-indexed families of distinct multi-indices whose
//! rows converge to prescribed directions, concrete sequences realizing the
//! direction functional, and the series whose domain of convergence is a
//! prescribed H-domain.
//!
//! Slot `k` of row `n` (both 1-based) sits at degree
//! `base + (k-1)·M·stride + (n-1)·stride`. Every slot gets its own degree, so
//! the family is pairwise distinct without any search.

use serde::{Deserialize, Serialize};

use crate::convex::{support_value, HDomain, SampledFunction};
use crate::error::{Error, Result};
use crate::hadamard::{default_radius, window_maximizer, DirectionWindow};
use crate::index::{nearest_index_of_degree, MultiIndex, SimplexDirection};
use crate::scalar::Real;
use crate::series::{CoefficientRule, SeriesSpec, SupportWeighted};

pub const DEFAULT_BASE_DEGREE: u64 = 8;
pub const DEFAULT_STRIDE: u64 = 1;

/// Generator parameters of an [`IndexFamily`]; this is its serialized form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FamilyParams<T: Real> {
    pub base: u64,
    pub stride: u64,
    pub per_row: u64,
    pub directions: Vec<SimplexDirection<T>>,
}

/// Rows `{J^{n1}, …, J^{nK}}` with `π(J^{nk}) → αⁿ`, all indices distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexFamily<T: Real> {
    params: FamilyParams<T>,
    rows: Vec<Vec<MultiIndex>>,
}

impl<T: Real> IndexFamily<T> {
    pub fn generate(params: FamilyParams<T>) -> Result<Self> {
        let m = params.directions.len() as u64;
        if m == 0 || params.per_row == 0 {
            return Err(Error::InvalidInput(
                "an index family needs at least one direction and one slot per row".into(),
            ));
        }
        if params.base == 0 || params.stride == 0 {
            return Err(Error::InvalidInput(
                "base and stride must be positive".into(),
            ));
        }
        let n = params.directions[0].dimension();
        for (i, a) in params.directions.iter().enumerate() {
            if a.dimension() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: a.dimension(),
                });
            }
            if params.directions[..i]
                .iter()
                .any(|b| a.l1_distance(b) <= T::DISTINCT_TOL)
            {
                return Err(Error::InvalidInput(format!(
                    "repeated family direction {:?}",
                    a.coords()
                )));
            }
        }
        let rows = params
            .directions
            .iter()
            .enumerate()
            .map(|(row, alpha)| {
                (0..params.per_row)
                    .map(|slot| {
                        let degree = slot_degree(&params, m, row as u64, slot)?;
                        Ok(nearest_index_of_degree(alpha, degree))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, rows })
    }

    pub fn params(&self) -> &FamilyParams<T> {
        &self.params
    }

    pub fn directions(&self) -> &[SimplexDirection<T>] {
        &self.params.directions
    }

    pub fn rows(&self) -> &[Vec<MultiIndex>] {
        &self.rows
    }

    pub fn dimension(&self) -> usize {
        self.params.directions[0].dimension()
    }
}

fn slot_degree<T: Real>(params: &FamilyParams<T>, m: u64, row: u64, slot: u64) -> Result<u64> {
    slot.checked_mul(m)
        .and_then(|v| v.checked_add(row))
        .and_then(|v| v.checked_mul(params.stride))
        .and_then(|v| v.checked_add(params.base))
        .ok_or(Error::DegreeOverflow)
}

/// Family with the default base degree 8 and stride 1.
pub fn build_family<T: Real>(
    directions: &[SimplexDirection<T>],
    per_row: u64,
) -> Result<IndexFamily<T>> {
    IndexFamily::generate(FamilyParams {
        base: DEFAULT_BASE_DEGREE,
        stride: DEFAULT_STRIDE,
        per_row,
        directions: directions.to_vec(),
    })
}

/// One index per degree band `b = 8, 16, 32, … ≤ K`: the supported index of
/// degree `b` within `max(0.02, 2N/√b)` of `alpha` maximizing `ln|c_J|/|J|`.
/// Ties go to the projection closest to `alpha`, then lexicographically.
pub fn realize_c_sequence<T: Real>(
    series: &SeriesSpec<T>,
    alpha: &SimplexDirection<T>,
    max_degree: u64,
) -> Result<Vec<MultiIndex>> {
    if max_degree < 8 {
        return Err(Error::InvalidInput("realize_c_sequence needs K ≥ 8".into()));
    }
    let mut out = Vec::new();
    let mut band = DEFAULT_BASE_DEGREE;
    while band <= max_degree {
        let radius = default_radius(series.dimension(), band);
        let window = DirectionWindow::new(alpha.clone(), radius, band, band)?;
        if let Some((j, _)) = window_maximizer(series, &window)? {
            out.push(j);
        }
        band = match band.checked_mul(2) {
            Some(b) => b,
            None => break,
        };
    }
    if out.is_empty() {
        return Err(Error::EmptyWindow);
    }
    Ok(out)
}

/// Support values of `domain` at `directions`, rejecting `+inf`.
pub(crate) fn finite_support_values<T: Real>(
    domain: &HDomain<T>,
    directions: &[SimplexDirection<T>],
) -> Result<Vec<T>> {
    directions
        .iter()
        .map(|alpha| {
            let h = support_value(domain, alpha)?;
            if h.is_finite() {
                Ok(h)
            } else {
                Err(Error::InfiniteSupport {
                    direction: alpha.coords().iter().map(|c| c.as_f64()).collect(),
                })
            }
        })
        .collect()
}

/// Series `Σ_{n,k} exp(-|J^{nk}| h(αⁿ)) z^{J^{nk}}` where `h` is the support
/// function of `domain`. Each row alone is elementary with logarithmic image
/// the supporting half-space `{⟨αⁿ, s⟩ < h(αⁿ)}`.
pub fn mainthm_series<T: Real>(
    domain: &HDomain<T>,
    directions: &[SimplexDirection<T>],
    per_row: u64,
) -> Result<SeriesSpec<T>> {
    if let Some(d) = directions
        .iter()
        .find(|d| d.dimension() != domain.dimension())
    {
        return Err(Error::DimensionMismatch {
            expected: domain.dimension(),
            found: d.dimension(),
        });
    }
    let values = finite_support_values(domain, directions)?;
    let family = build_family(directions, per_row)?;
    let weights = SampledFunction::new(directions.to_vec(), values)?;
    let rule = CoefficientRule::SupportWeighted(SupportWeighted::new(weights, family)?);
    SeriesSpec::new(
        domain.dimension(),
        rule,
        "support-weighted series for a prescribed domain",
    )
}
