//! Exact computations in the homotopy spectral sequence of the
//! Goodwillie–Weiss tower for classical long knots, together with numeric
//! models of the configuration-space operations behind it.
//!
//! * [`linalg`]: Smith/Hermite normal forms, kernels and cokernels over `Z`.
//! * [`lie`]: free Lie rings in the Lyndon basis.
//! * [`braid`]: infinitesimal-braid presentations of homotopy groups of
//!   configuration spaces and the maps induced by doubling and forgetting
//!   points.
//! * [`tower`]: the `E¹` page in total degrees 0 and 1, `d¹`, and the
//!   0-line of `E²`.
//! * [`chords`]: chord diagrams on an interval modulo 4T and SEP.
//! * [`config`]: framed configurations, insertion maps, evaluation maps of
//!   framed long knots and the little-intervals action.
//! * [`cli`]: report generation and on-disk caching behind the `gwtower`
//!   binary.

pub mod braid;
pub mod chords;
pub mod cli;
pub mod config;
pub mod counters;
pub mod lie;
pub mod linalg;
pub mod tower;
