//! Multi-index arithmetic, degree-ordered enumeration of the lattice, and
//! radial projection onto the probability simplex.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{l1_distance, Real};

/// Lattice exponent `J` with cached l1 degree `|J|`.
///
/// Ordering is lexicographic on the entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct MultiIndex {
    entries: Vec<u64>,
    degree: u64,
}

impl MultiIndex {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        let degree = entries
            .iter()
            .try_fold(0u64, |acc, &e| acc.checked_add(e))
            .ok_or(Error::DegreeOverflow)?;
        Ok(Self { entries, degree })
    }

    pub fn zero(dimension: usize) -> Self {
        Self {
            entries: vec![0; dimension],
            degree: 0,
        }
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.degree == 0
    }

    /// `m·J`, failing on overflow.
    pub fn scaled(&self, m: u64) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|&e| e.checked_mul(m))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::DegreeOverflow)?;
        Self::new(entries)
    }

    /// If `self = m·base` for some integer `m ≥ 1`, returns `m`.
    pub fn multiple_of(&self, base: &MultiIndex) -> Option<u64> {
        if base.dimension() != self.dimension() || base.is_zero() || self.is_zero() {
            return None;
        }
        if !self.degree.is_multiple_of(base.degree) {
            return None;
        }
        let m = self.degree / base.degree;
        let matches = self
            .entries
            .iter()
            .zip(&base.entries)
            .all(|(&e, &b)| b.checked_mul(m) == Some(e));
        matches.then_some(m)
    }
}

impl TryFrom<Vec<u64>> for MultiIndex {
    type Error = Error;

    fn try_from(entries: Vec<u64>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<MultiIndex> for Vec<u64> {
    fn from(j: MultiIndex) -> Self {
        j.entries
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A point of the probability simplex `PS_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>")]
#[serde(bound = "T: Real")]
pub struct SimplexDirection<T> {
    coords: Vec<T>,
}

impl<T: Real> SimplexDirection<T> {
    /// Validates non-negativity and unit l1 mass.
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidDirection("empty coordinate vector".into()));
        }
        if coords.iter().any(|c| !c.is_finite() || *c < T::zero()) {
            return Err(Error::InvalidDirection(format!(
                "coordinates must be finite and non-negative: {coords:?}"
            )));
        }
        let total = coords.iter().fold(T::zero(), |a, &c| a + c);
        if (total - T::one()).abs() > T::SIMPLEX_TOL {
            return Err(Error::InvalidDirection(format!(
                "coordinates sum to {total}, not 1"
            )));
        }
        Ok(Self { coords })
    }

    /// Radially rescales a non-negative, nonzero vector onto the simplex.
    pub fn normalized(weights: Vec<T>) -> Result<Self> {
        if weights.iter().any(|c| !c.is_finite() || *c < T::zero()) {
            return Err(Error::InvalidDirection(format!(
                "weights must be finite and non-negative: {weights:?}"
            )));
        }
        let total = weights.iter().fold(T::zero(), |a, &c| a + c);
        if total <= T::zero() {
            return Err(Error::InvalidDirection("all weights are zero".into()));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    /// Vertex `e_axis` of the simplex.
    pub fn vertex(dimension: usize, axis: usize) -> Self {
        let mut coords = vec![T::zero(); dimension];
        coords[axis] = T::one();
        Self { coords }
    }

    /// All directions `J/m` with `|J| = m`, in lexicographic order of `J`.
    /// For `N = 2` this is the uniform grid `(k/m, 1 - k/m)` read from `k = 0`.
    pub fn lattice(dimension: usize, subdivisions: u64) -> Vec<Self> {
        enumerate_degree(dimension, subdivisions)
            .iter()
            .map(|j| project(j).expect("positive degree"))
            .collect()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn l1_distance(&self, other: &Self) -> T {
        l1_distance(&self.coords, &other.coords)
    }
}

impl<T: Real> TryFrom<Vec<T>> for SimplexDirection<T> {
    type Error = Error;

    fn try_from(coords: Vec<T>) -> Result<Self> {
        Self::new(coords)
    }
}

impl<T: Real> From<SimplexDirection<T>> for Vec<T> {
    fn from(d: SimplexDirection<T>) -> Self {
        d.coords
    }
}

/// Radial projection `π(J) = J/|J|`.
pub fn project<T: Real>(j: &MultiIndex) -> Result<SimplexDirection<T>> {
    if j.is_zero() {
        return Err(Error::ZeroIndexNotProjectable);
    }
    let degree = T::from_count(j.degree());
    let coords = j
        .entries()
        .iter()
        .map(|&e| T::from_count(e) / degree)
        .collect();
    Ok(SimplexDirection { coords })
}

/// l1 distance `|π(J) - α|` without materializing the projection.
pub fn projection_distance<T: Real>(j: &MultiIndex, alpha: &SimplexDirection<T>) -> T {
    let degree = T::from_count(j.degree());
    j.entries()
        .iter()
        .zip(alpha.coords())
        .fold(T::zero(), |acc, (&e, &a)| {
            acc + (T::from_count(e) / degree - a).abs()
        })
}

/// Number of multi-indices of dimension `n` and degree `k`: `C(k+n-1, n-1)`.
pub fn count_of_degree(n: usize, k: u64) -> u128 {
    if n == 0 {
        return u128::from(k == 0);
    }
    let r = (n - 1) as u128;
    let mut acc: u128 = 1;
    for i in 1..=r {
        acc = acc * (u128::from(k) + i) / i;
    }
    acc
}

/// All multi-indices of dimension `n` with degree exactly `k`, lexicographically.
pub fn enumerate_degree(n: usize, k: u64) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut current = vec![0u64; n];
    fill(&mut current, 0, k, &mut out);
    out
}

fn fill(current: &mut Vec<u64>, pos: usize, remaining: u64, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        let entries = current.clone();
        out.push(MultiIndex {
            degree: entries.iter().sum(),
            entries,
        });
        return;
    }
    for e in 0..=remaining {
        current[pos] = e;
        fill(current, pos + 1, remaining - e, out);
    }
}

/// The index of degree `k` whose projection is l1-closest to `alpha`, ties
/// broken towards the lexicographically smallest index.
///
/// Rounds `k·α` down and hands the leftover units to the coordinates with the
/// largest fractional parts. Among equal fractional parts the later
/// coordinates win, which yields the lexicographically smallest optimum.
pub fn nearest_index_of_degree<T: Real>(alpha: &SimplexDirection<T>, k: u64) -> MultiIndex {
    let n = alpha.dimension();
    let kf = T::from_count(k);
    let snap = T::lit(1e-9);
    let mut base = Vec::with_capacity(n);
    let mut frac = Vec::with_capacity(n);
    for &a in alpha.coords() {
        let x = a * kf;
        let nearest = x.round();
        let x = if (x - nearest).abs() <= snap {
            nearest
        } else {
            x
        };
        let fl = x.floor().max(T::zero());
        base.push(fl.to_u64().unwrap_or(0));
        frac.push(x - fl);
    }
    let assigned: u64 = base.iter().sum();
    let mut order: Vec<usize> = (0..n).collect();
    if assigned <= k {
        // larger fractional part first; ties prefer the later coordinate
        order.sort_by(|&a, &b| match cmp_tol(frac[b], frac[a], snap) {
            Ordering::Equal => b.cmp(&a),
            o => o,
        });
        let mut leftover = k - assigned;
        let mut i = 0;
        while leftover > 0 {
            base[order[i % n]] += 1;
            leftover -= 1;
            i += 1;
        }
    } else {
        // only reachable through rounding of an unnormalized direction
        order.sort_by(|&a, &b| match cmp_tol(frac[a], frac[b], snap) {
            Ordering::Equal => a.cmp(&b),
            o => o,
        });
        let mut excess = assigned - k;
        let mut i = 0;
        while excess > 0 {
            let c = order[i % n];
            if base[c] > 0 {
                base[c] -= 1;
                excess -= 1;
            }
            i += 1;
        }
    }
    MultiIndex::new(base).expect("degree bounded by k")
}

fn cmp_tol<T: Real>(a: T, b: T, tol: T) -> Ordering {
    if (a - b).abs() <= tol {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}
