//! Symmetric supercharacters on `(Z/nZ)^d`.
//!
//! The symmetric group `S_d` permutes coordinates of `(Z/nZ)^d`; its orbits are
//! the superclasses, and each orbit `X` induces the exponential sum
//!
//! ```text
//! sigma_X(y) = sum_{x in X} e(x . y / n),      e(t) = exp(2 pi i t)
//! ```
//!
//! which is constant on superclasses. This crate evaluates these sums exactly
//! (as integer multiplicities over the `n`-th roots of unity, see
//! [`CountsVector`]) and numerically, checks the symmetry identities they
//! satisfy, row-reduces orbit matrices over `Z/nZ` to obtain torus-map
//! approximations, builds the normalized supercharacter table, and rasterizes
//! images to grayscale bitmaps.
//!
//! Floating-point code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below are what the rest of the crate and the CLI use.

pub mod asymptotic;
pub mod error;
pub mod eval;
pub mod identities;
pub mod modring;
pub mod orbits;
pub mod render;
pub mod table;

use num_traits::{Float, FloatConst, FromPrimitive};

pub use asymptotic::{ExponentMatrix, Hypocycloid, OrbitMatrix, ReductionCertificate, ReductionOutcome};
pub use error::{Error, Result};
pub use eval::{CountsVector, ImageOptions, PointCloud, RootTable};
pub use identities::IdentityReport;
pub use modring::Modulus;
pub use orbits::OrbitRep;
pub use table::{SuperTable, UnitaryTable};

/// Floating-point scalar used by the numeric side of the crate.
pub trait Real: Float + FloatConst + FromPrimitive + Send + Sync + std::fmt::Debug + 'static {}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Send + Sync + std::fmt::Debug + 'static {}

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
pub type RootTable64 = RootTable<f64>;
pub type Hypocycloid64 = Hypocycloid<f64>;

/// Default cap on the number of superclass evaluations a single job may request.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

/// Tolerance used for point-set comparisons and geometric checks.
pub const POINT_TOL: f64 = 1e-9;
