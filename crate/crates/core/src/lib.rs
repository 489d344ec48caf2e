//! Numerical toolkit for Dirichlet eigenvalues of k-Hessian operators
//! `S_k(D^2 u) = lambda (-u)^k` on convex bodies.
//!
//! Modules:
//! - [`geometry`]: convex bodies, quermassintegrals, inner parallel bodies.
//! - [`radial`]: exact eigenvalues and eigenfunctions on balls by shooting.
//! - [`web`]: Rayleigh quotients of web functions `u = -f(d)`.
//! - [`pderef`]: finite-difference references on polygons (viscous distance,
//!   Laplacian eigenvalue).
//! - [`bounds`]: upper and lower bounds and the assembled [`BoundReport`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod error;
pub mod fmt;
pub mod geometry;
pub mod ode;
pub mod pderef;
pub mod quad;
pub mod radial;
pub mod web;

pub use bounds::{
    faber_krahn_lower, inclusion_chain, makai_bound, newton_check, report, stability_bound,
    BoundReport, ReportOptions,
};
pub use error::{Error, Result};
pub use geometry::{
    af_check, equiv_ball_radius, inner_parallel, inradius, quermass, random_polygon, steiner_outer,
    sweep, ConvexBody, InnerParallelSweep, Polygon, Polytope, QuermassVector,
};
pub use pderef::{exact_distance, fd_laplace_eigen, solve_deps, GridDomain, GridFunction};
pub use radial::{profile_norms, shoot, sk_radial, solve_ball_eigenvalue, RadialProfile};
pub use web::{
    lemd_verify, optimize_profile, rayleigh_denominator, rayleigh_numerator, rayleigh_quotient,
    ProfileFamily, RayleighResult, WebProfile,
};
