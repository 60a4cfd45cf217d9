use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest number of points a grid may hold.
pub const MAX_GRID_POINTS: usize = 10_000;

/// Uniform samples `lo, …, hi` along one axis; a single sample sits at `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Axis<T: Real> {
    pub lo: T,
    pub hi: T,
    pub count: usize,
}

impl<T: Real> Axis<T> {
    pub fn new(lo: T, hi: T, count: usize) -> Result<Self> {
        if count == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
            return Err(Error::InvalidInput(format!(
                "axis [{lo}, {hi}] with {count} samples is malformed"
            )));
        }
        Ok(Self { lo, hi, count })
    }

    pub fn value(&self, i: usize) -> T {
        if self.count == 1 {
            return self.lo;
        }
        let step = (self.hi - self.lo) / T::from_count((self.count - 1) as u64);
        self.lo + step * T::from_count(i as u64)
    }
}

/// Cartesian product of axes, enumerated row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Grid<T: Real> {
    axes: Vec<Axis<T>>,
}

impl<T: Real> Grid<T> {
    pub fn new(axes: Vec<Axis<T>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidInput("grid needs at least one axis".into()));
        }
        let total = axes
            .iter()
            .try_fold(1usize, |acc, a| acc.checked_mul(a.count))
            .filter(|&t| t <= MAX_GRID_POINTS)
            .ok_or_else(|| Error::InvalidInput(format!("grid exceeds {MAX_GRID_POINTS} points")))?;
        debug_assert!(total > 0);
        Ok(Self { axes })
    }

    /// The same axis repeated in every coordinate.
    pub fn square(dimension: usize, lo: T, hi: T, count: usize) -> Result<Self> {
        Self::new(vec![Axis::new(lo, hi, count)?; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis<T>] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<Vec<T>> {
        let mut out = Vec::with_capacity(self.len());
        let mut idx = vec![0usize; self.axes.len()];
        loop {
            out.push(
                idx.iter()
                    .zip(&self.axes)
                    .map(|(&i, a)| a.value(i))
                    .collect(),
            );
            let mut d = self.axes.len();
            loop {
                if d == 0 {
                    return out;
                }
                d -= 1;
                idx[d] += 1;
                if idx[d] < self.axes[d].count {
                    break;
                }
                idx[d] = 0;
            }
        }
    }
}
