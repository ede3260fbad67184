//! Closed-form convex envelopes of ray-concave functions over polytopes.
//!
//! For a function `f` that is concave along every ray from the origin and
//! convex on the facets of a polytope `P`, the convex envelope is the secant
//! interpolant
//!
//! ```text
//! g(v) = α_v f(v⁻) + (1 − α_v) f(v⁺),    v = α_v v⁻ + (1 − α_v) v⁺
//! ```
//!
//! where `v⁻`, `v⁺` are the points where the ray through `v` enters and
//! leaves `P`, provided `g` is positively homogeneous.
//!
//! The crate is organised as:
//!
//! * [`geometry`]: halfspace polytopes, ray tracing, region identification.
//! * [`functions`]: scalar fields, finite differences, the example catalog.
//! * [`envelope`]: [`EnvelopeModel`] construction, evaluation and gradients.
//! * [`verify`]: sampling certifiers for the envelope hypotheses and a
//!   convex-hull oracle backed by the dense simplex solver in [`lp`].
//! * [`descriptor`]: JSON documents for polytopes, models and regions.

pub mod descriptor;
pub mod envelope;
pub mod error;
pub mod functions;
pub mod geometry;
pub mod lp;
pub mod verify;

mod linalg;

pub use envelope::{AnchorPolicy, EnvelopeModel, EnvelopeValue, Sense};
pub use error::{Error, Result};
pub use functions::{catalog, CatalogEntry, ScalarField};
pub use geometry::{Halfspace, OriginPosition, Polytope, RayTrace, RegionId};
pub use verify::{CertificationReport, CertifyConfig, CheckResult, CheckStatus};

/// A point or direction in ℝⁿ.
pub type Point = Vec<f64>;
