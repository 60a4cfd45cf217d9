//! Half-space geometry over the probability simplex: H-represented domains,
//! support functions, and convex closures of sampled positively homogeneous
//! functions.
//!
//! All LP work uses closed regions `⟨α, s⟩ ≤ c`. The supremum of a linear
//! functional is the same over an open polyhedron and its closure, so the
//! open/closed distinction only matters for membership tests, which live in
//! [`HalfSpace::contains`] and [`HDomain::contains`].

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::index::SimplexDirection;
use crate::lp::{self, LpOutcome};
use crate::scalar::{dot, Real};

/// Open half-space `{s : ⟨normal, s⟩ - offset < 0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct HalfSpace<T: Real> {
    pub normal: SimplexDirection<T>,
    pub offset: T,
}

impl<T: Real> HalfSpace<T> {
    pub fn new(normal: SimplexDirection<T>, offset: T) -> Self {
        Self { normal, offset }
    }

    /// Affine defining function `⟨normal, s⟩ - offset`.
    pub fn value(&self, s: &[T]) -> T {
        dot(self.normal.coords(), s) - self.offset
    }

    pub fn contains(&self, s: &[T]) -> bool {
        self.value(s) < T::zero()
    }

    pub fn dimension(&self) -> usize {
        self.normal.dimension()
    }
}

/// Finite intersection of half-spaces with simplex normals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDomain<T>", into = "RawDomain<T>")]
#[serde(bound = "T: Real")]
pub struct HDomain<T: Real> {
    dimension: usize,
    halfspaces: Vec<HalfSpace<T>>,
}

impl<T: Real> HDomain<T> {
    pub fn new(dimension: usize, halfspaces: Vec<HalfSpace<T>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInput(
                "domain dimension must be at least 1".into(),
            ));
        }
        for h in &halfspaces {
            if h.dimension() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: h.dimension(),
                });
            }
            if !h.offset.is_finite() {
                return Err(Error::InvalidInput(
                    "half-space offsets must be finite".into(),
                ));
            }
        }
        Ok(Self {
            dimension,
            halfspaces,
        })
    }

    /// Builds a domain from `(normal, offset)` pairs.
    pub fn from_pairs(dimension: usize, pairs: &[(Vec<T>, T)]) -> Result<Self> {
        let halfspaces = pairs
            .iter()
            .map(|(n, c)| Ok(HalfSpace::new(SimplexDirection::new(n.clone())?, *c)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dimension, halfspaces)
    }

    /// `{s : s_i < 0}`, the logarithmic image of the unit polydisc.
    pub fn negative_orthant(dimension: usize) -> Self {
        let halfspaces = (0..dimension)
            .map(|i| HalfSpace::new(SimplexDirection::vertex(dimension, i), T::zero()))
            .collect();
        Self {
            dimension,
            halfspaces,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn halfspaces(&self) -> &[HalfSpace<T>] {
        &self.halfspaces
    }

    /// `max_i (⟨α_i, s⟩ - c_i)`; negative exactly on the open domain.
    /// `-inf` for an empty half-space list.
    pub fn defining_value(&self, s: &[T]) -> T {
        self.halfspaces
            .iter()
            .map(|h| h.value(s))
            .fold(T::neg_infinity(), T::max)
    }

    /// Membership in the open domain.
    pub fn contains(&self, s: &[T]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(s))
    }

    /// Membership in the closed domain.
    pub fn contains_closed(&self, s: &[T]) -> bool {
        self.halfspaces.iter().all(|h| h.value(s) <= T::zero())
    }

    fn lp_rows(&self) -> (Vec<Vec<T>>, Vec<T>) {
        self.halfspaces
            .iter()
            .map(|h| (h.normal.coords().to_vec(), h.offset))
            .unzip()
    }

    pub fn is_empty(&self) -> Result<bool> {
        let (rows, rhs) = self.lp_rows();
        let zero = vec![T::zero(); self.dimension];
        Ok(matches!(
            lp::maximize(&zero, &rows, &rhs)?,
            LpOutcome::Infeasible
        ))
    }

    /// l1 distance from `s` to the boundary of the closed domain.
    pub fn l1_distance_to_boundary(&self, s: &[T]) -> Result<T> {
        self.check_len(s.len())?;
        if self.contains_closed(s) {
            // distance to {⟨a, x⟩ ≥ c} is the slack over ‖a‖∞
            return Ok(self
                .halfspaces
                .iter()
                .map(|h| {
                    let inf_norm = h.normal.coords().iter().fold(T::zero(), |a, &c| a.max(c));
                    -h.value(s) / inf_norm
                })
                .fold(T::infinity(), T::min));
        }
        // min Σ t subject to |x - s| ≤ t, x in the domain
        let n = self.dimension;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            let mut up = vec![T::zero(); 2 * n];
            up[i] = T::one();
            up[n + i] = -T::one();
            rows.push(up);
            rhs.push(s[i]);
            let mut down = vec![T::zero(); 2 * n];
            down[i] = -T::one();
            down[n + i] = -T::one();
            rows.push(down);
            rhs.push(-s[i]);
        }
        for h in &self.halfspaces {
            let mut row = vec![T::zero(); 2 * n];
            row[..n].copy_from_slice(h.normal.coords());
            rows.push(row);
            rhs.push(h.offset);
        }
        let mut objective = vec![T::zero(); 2 * n];
        for v in objective[n..].iter_mut() {
            *v = -T::one();
        }
        match lp::maximize(&objective, &rows, &rhs)? {
            LpOutcome::Optimal { value, .. } => Ok(-value),
            LpOutcome::Infeasible => Err(Error::EmptyDomain),
            LpOutcome::Unbounded => unreachable!("distance is bounded below by zero"),
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: len,
            });
        }
        Ok(())
    }
}

/// Supremum of `⟨objective, s⟩` over the closed domain.
pub fn lp_maximize<T: Real>(objective: &[T], constraints: &HDomain<T>) -> Result<LpOutcome<T>> {
    constraints.check_len(objective.len())?;
    let (rows, rhs) = constraints.lp_rows();
    lp::maximize(objective, &rows, &rhs)
}

/// Support function `h(α) = sup{⟨α, s⟩ : s ∈ domain}`; `+inf` off the effective domain.
pub fn support_value<T: Real>(domain: &HDomain<T>, alpha: &SimplexDirection<T>) -> Result<T> {
    match lp_maximize(alpha.coords(), domain)? {
        LpOutcome::Infeasible => Err(Error::EmptyDomain),
        out => Ok(out.value()),
    }
}

/// Finite table of direction/value pairs of a positively homogeneous
/// function restricted to the simplex. `+inf` marks directions outside the
/// effective domain; `-inf` is rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction<T: Real> {
    directions: Vec<SimplexDirection<T>>,
    values: Vec<T>,
}

impl<T: Real> SampledFunction<T> {
    pub fn new(directions: Vec<SimplexDirection<T>>, values: Vec<T>) -> Result<Self> {
        if directions.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} directions but {} values",
                directions.len(),
                values.len()
            )));
        }
        if let Some(d) = directions.first() {
            let n = d.dimension();
            if let Some(bad) = directions.iter().find(|d| d.dimension() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: bad.dimension(),
                });
            }
        }
        if values.iter().any(|v| v.is_nan() || *v == T::neg_infinity()) {
            return Err(Error::InvalidInput(
                "sample values must be finite or +inf".into(),
            ));
        }
        for (i, a) in directions.iter().enumerate() {
            if directions[..i]
                .iter()
                .any(|b| a.l1_distance(b) <= T::DISTINCT_TOL)
            {
                return Err(Error::InvalidInput(format!(
                    "duplicate sample direction {:?}",
                    a.coords()
                )));
            }
        }
        Ok(Self { directions, values })
    }

    pub fn directions(&self) -> &[SimplexDirection<T>] {
        &self.directions
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.directions.first().map(|d| d.dimension())
    }
}

/// `cl(conv f)(α)`: the support function, at `α`, of the polyhedron cut out by
/// the homogeneous minorant constraints `⟨β_i, s⟩ ≤ v_i`.
pub fn convex_closure_value<T: Real>(
    f: &SampledFunction<T>,
    alpha: &SimplexDirection<T>,
) -> Result<T> {
    let n = f
        .dimension()
        .ok_or_else(|| Error::InvalidInput("empty sampled function".into()))?;
    if alpha.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: alpha.dimension(),
        });
    }
    let (rows, rhs): (Vec<Vec<T>>, Vec<T>) = f
        .directions
        .iter()
        .zip(&f.values)
        .filter(|(_, v)| v.is_finite())
        .map(|(d, &v)| (d.coords().to_vec(), v))
        .unzip();
    match lp::maximize(alpha.coords(), &rows, &rhs)? {
        LpOutcome::Infeasible => Err(Error::EmptyDomain),
        out => Ok(out.value()),
    }
}

/// Re-expresses `domain` through its supporting half-spaces at the given
/// directions; directions with infinite support value are dropped.
pub fn reduce_to_dense_subset<T: Real>(
    domain: &HDomain<T>,
    dense: &[SimplexDirection<T>],
) -> Result<HDomain<T>> {
    let mut halfspaces = Vec::with_capacity(dense.len());
    for alpha in dense {
        let h = support_value(domain, alpha)?;
        if h.is_finite() {
            halfspaces.push(HalfSpace::new(alpha.clone(), h));
        }
    }
    HDomain::new(domain.dimension(), halfspaces)
}

// ---------------------------------------------------------------------------
// serialized forms

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct RawDomain<T: Real> {
    dimension: usize,
    halfspaces: Vec<HalfSpace<T>>,
}

impl<T: Real> TryFrom<RawDomain<T>> for HDomain<T> {
    type Error = Error;

    fn try_from(raw: RawDomain<T>) -> Result<Self> {
        Self::new(raw.dimension, raw.halfspaces)
    }
}

impl<T: Real> From<HDomain<T>> for RawDomain<T> {
    fn from(d: HDomain<T>) -> Self {
        Self {
            dimension: d.dimension,
            halfspaces: d.halfspaces,
        }
    }
}

/// JSON number, or the string `"inf"` for `+inf`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExtendedValue {
    Number(f64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct RawSamples<T: Real> {
    directions: Vec<SimplexDirection<T>>,
    values: Vec<ExtendedValue>,
}

impl<T: Real> Serialize for SampledFunction<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let values = self
            .values
            .iter()
            .map(|v| {
                if *v == T::infinity() {
                    ExtendedValue::Text("inf".into())
                } else {
                    ExtendedValue::Number(v.as_f64())
                }
            })
            .collect();
        RawSamples {
            directions: self.directions.clone(),
            values,
        }
        .serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for SampledFunction<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawSamples::<T>::deserialize(deserializer)?;
        let values = raw
            .values
            .into_iter()
            .map(|v| match v {
                ExtendedValue::Number(x) => Ok(T::lit(x)),
                ExtendedValue::Text(t) if matches!(t.as_str(), "inf" | "+inf" | "Infinity") => {
                    Ok(T::infinity())
                }
                ExtendedValue::Text(t) => Err(D::Error::custom(format!(
                    "sample value {t:?} is neither a number nor \"inf\""
                ))),
            })
            .collect::<std::result::Result<Vec<T>, _>>()?;
        Self::new(raw.directions, values).map_err(D::Error::custom)
    }
}
