//! Local second-order geometry of surfaces in R⁴ written in Monge form
//! `(x, y) ↦ (x, y, φ(x, y), ψ(x, y))`.
//!
//! The crate is organized bottom-up:
//!
//! - [`jetexpr`]: expression parser and exact order-3 jet evaluation.
//! - [`localgeom`]: fundamental forms, second fundamental form coefficients,
//!   Gaussian, normal and mean curvature, and the resultant Δ.
//! - [`conics`]: the curvature ellipse, the characteristic conic and the
//!   polarity that relates them.
//! - [`classify`]: point taxonomy, asymptotic directions and binormals.
//! - [`locus`]: tracing of the parabolic curve Δ = 0 and inflection search.
//! - [`heightfn`]: singularities of height functions.
//! - [`cli`]: command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod cli;
pub mod conics;
pub mod heightfn;
pub mod jetexpr;
pub mod localgeom;
pub mod locus;
mod quadratic;
