//! Framed configurations of points on long knots.
//!
//! A configuration carries positions, a unit direction `u_ab` for every pair
//! (meaningful also after points collide) and an orthonormal frame per point.
//! [`InfConfig`] is the infinitesimal part alone; [`FramedConfig`] adds
//! positions and the two boundary points `y0 = (-1,0,0)`, `y1 = (1,0,0)`.
//!
//! Both carry cosimplicial structure (cofaces double a point along its
//! frame, codegeneracies forget one) and operadic insertion. [`FramedKnot`]
//! evaluates to configurations, and [`IntervalFamily`] acts on knots and on
//! sampled evaluation maps. [`run_checks`] exercises all of these identities
//! numerically.

mod action;
mod checks;
mod framed;
mod knot;

pub use action::{act_on_knots, act_on_samples, restriction_projection, AlignedMap, Interval, IntervalFamily};
pub use checks::{
    random_config, random_family, random_inf, random_times, run_checks, CheckOptions, CheckReport, CheckRow,
    LIMIT_TOLERANCE,
};
pub use framed::{y0, y1, FramedConfig, InfConfig, M3, V3};
pub use knot::{CubicSegment, FramedKnot, FramingChart, SAMPLE_RESOLUTION};

/// Points closer than this count as collided.
pub const DELTA: f64 = 1e-8;

/// Largest accepted deviation of a frame from orthonormality, and of a
/// direction from unit length. Composed frames drifting past it are
/// re-orthonormalized.
pub const ORTHO_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("index {index} out of range for {n} points")]
    Index { index: usize, n: usize },
    #[error("frame {0} is not orthonormal")]
    NotOrthogonal(usize),
    #[error("direction u_{a}{b} is not a unit vector")]
    NotUnit { a: usize, b: usize },
    #[error("points {a} and {b} collide")]
    Collided { a: usize, b: usize },
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("direction u_{a}{b} disagrees with the positions")]
    Inconsistent { a: usize, b: usize },
    #[error("evaluation times must be weakly increasing in [-1, 1]")]
    NonMonotone,
    #[error("invalid knot: {0}")]
    Knot(String),
    #[error("intervals must be disjoint, ordered and inside [-1, 1]")]
    Intervals,
    #[error("expected {expected} inputs, got {got}")]
    Mismatch { expected: usize, got: usize },
}
