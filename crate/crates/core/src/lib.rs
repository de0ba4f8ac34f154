//! Bounded one-dimensional solutions of the p-Laplacian equation
//! `-(|u'|^{p-2} u')' = f(u)` on the half line with `u(0) = 0`, and
//! variational checks of the associated ball and half-space results.
//!
//! The pipeline runs bottom-up:
//!
//! * [`nonlinearity`]: piecewise-polynomial `f`, its exact primitive `F`,
//!   zero isolation with one-sided vanishing orders, hypothesis checks.
//! * [`classification`]: the special zero sets and the catalog of all
//!   bounded nonnegative solutions (monotone heteroclinics and the periodic
//!   solution).
//! * [`profile`]: the time-of-level map, its inversion into sampled
//!   profiles, residual diagnostics and an independent ODE oracle.
//! * [`ball`]: radial minimizers of the truncated energy on large balls.
//! * [`strip`]: two-dimensional strip solutions and their deviation from
//!   one-dimensional symmetry.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod classification;
pub mod descent;
pub mod error;
pub mod io;
pub mod nonlinearity;
pub mod poly;
pub mod profile;
pub mod quadrature;
pub mod strip;

pub use classification::{
    catalog, special_zero_sets, Catalog, ProfileEntry, ProfileKind, ZeroSetReport,
};
pub use error::{Error, Result};
pub use nonlinearity::{
    check_no_zero_left_of, check_smp, check_thm13, HypothesisReport, NonlinearitySpec, OneSided,
    SmpVerdict, Status, ZeroInfo,
};
pub use profile::{build_profile, oracle_integrate, time_of_level, Profile, TimeMap};
