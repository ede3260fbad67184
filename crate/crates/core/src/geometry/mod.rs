//! Halfspace polytopes and the rays through them.
//!
//! Every halfspace reads `aᵀx ≤ b`. A ray `{αv : α ≥ 0}` meets the polytope
//! in the interval `[α⁻, α⁺]`, whose endpoints are the near point `v⁻` and
//! the far point `v⁺`. Points sharing the same entering and leaving facets
//! form a region.

mod polytope;
mod ray;
mod regions;
mod sampling;

pub use polytope::{
    validate, Halfspace, OriginPosition, Polytope, ValidationReport, VertexEnumeration,
};
pub use ray::{normalize_facet, ray_intersect, region_of, NormalizedFacet, RayTrace, RegionId};
pub use regions::{enumerate_regions_2d, polygon_area, Region};
pub use sampling::{sample_boundary, sample_interior, BoundaryPoint, InteriorSampler, INTERIOR_MARGIN};

/// Activity and containment tolerance, in units of distance.
pub const GEOMETRIC_TOL: f64 = 1e-9;
/// Tolerance for exact algebraic identities such as ties between ray parameters.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
