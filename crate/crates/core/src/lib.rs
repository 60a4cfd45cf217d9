//! Convergence domains of multivariate power series.
//!
//! A power series `Σ c_J z^J` in `N` variables converges absolutely on a
//! complete Reinhardt domain whose logarithmic image is an open convex set.
//! This crate estimates that set from finitely many coefficients, recovers it
//! as an intersection of half-spaces, builds series with a prescribed domain,
//! and splits a series into elementary and simple summands.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases below fix it to `f64`.

mod error;
mod scalar;

pub mod construct;
pub mod convex;
pub mod decompose;
pub mod grid;
pub mod hadamard;
pub mod index;
pub mod lp;
pub mod oracle;
pub mod series;

pub use construct::{build_family, mainthm_series, realize_c_sequence, FamilyParams, IndexFamily};
pub use convex::{
    convex_closure_value, lp_maximize, reduce_to_dense_subset, support_value, HDomain, HalfSpace,
    SampledFunction,
};
pub use decompose::{
    decompose_elementary, decompose_simple, estimate_domain, sum_domain_check,
    sum_domain_check_against, ElementaryDecomposition, ElementaryRow, SimpleDecomposition,
    SimplePart, SumDisagreement, SumDomainReport,
};
pub use error::{Error, Result};
pub use grid::{Axis, Grid};
pub use hadamard::{
    c_hat, classify, default_radius, elementary_halfspace, psi_hat, slice_radius, tail_window,
    window_maximizer, DirectionWindow, Membership, MembershipVerdict,
};
pub use index::{
    count_of_degree, enumerate_degree, nearest_index_of_degree, project, projection_distance,
    MultiIndex, SimplexDirection,
};
pub use lp::LpOutcome;
pub use oracle::{agreement_grid, probe, AgreementReport, AgreementRow, ProbeClass, ProbeVerdict};
pub use scalar::Real;
pub use series::{CoefficientRule, SeriesSpec, SupportWeighted};

pub use num_complex::Complex;

pub type Series = SeriesSpec<f64>;
pub type Rule = CoefficientRule<f64>;
pub type Direction = SimplexDirection<f64>;
pub type Domain = HDomain<f64>;
pub type Half = HalfSpace<f64>;
pub type Samples = SampledFunction<f64>;
pub type Family = IndexFamily<f64>;
pub type Window = DirectionWindow<f64>;
pub type GridF64 = Grid<f64>;

pub type Series32 = SeriesSpec<f32>;
pub type Direction32 = SimplexDirection<f32>;
pub type Domain32 = HDomain<f32>;
