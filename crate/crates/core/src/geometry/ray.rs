use serde::{Deserialize, Serialize};

use super::{Polytope, ALGEBRAIC_TOL, GEOMETRIC_TOL};
use crate::error::{Error, Result};
use crate::linalg::{dot, is_zero, lerp, norm, scale};
use crate::Point;

/// Identifies the region `B_ij` (or `B_0j` when the origin is in `P`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionId {
    pub in_facet: Option<usize>,
    pub out_facet: usize,
}

/// A facet hyperplane rescaled to read `aᵀx = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizedFacet {
    pub index: usize,
    pub a: Vec<f64>,
}

/// Intersection of the ray `{αv : α ≥ 0}` with the polytope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayTrace {
    pub v: Point,
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    pub v_minus: Point,
    pub v_plus: Point,
    /// Absent when the origin lies in the polytope.
    pub in_facet: Option<usize>,
    pub out_facet: usize,
    pub alpha_v: f64,
    /// `α⁻ = α⁺`; the ray only touches the polytope at `v`.
    pub degenerate: bool,
}

impl RayTrace {
    pub fn region(&self) -> RegionId {
        RegionId {
            in_facet: self.in_facet,
            out_facet: self.out_facet,
        }
    }

    /// `α_v v⁻ + (1 − α_v) v⁺`, which should give back `v`.
    pub fn reconstruct(&self) -> Point {
        lerp(&self.v_plus, &self.v_minus, self.alpha_v)
    }
}

pub fn ray_intersect(p: &Polytope, v: &[f64]) -> Result<RayTrace> {
    if v.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: v.len(),
        });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput {
            what: format!("ray direction {v:?}"),
        });
    }
    if is_zero(v) {
        return Err(Error::ZeroDirection);
    }

    let origin_in = p.contains_origin();
    let vnorm = norm(v);
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    let mut ratios = Vec::with_capacity(p.halfspaces().len());
    for h in p.halfspaces() {
        let d = dot(&h.a, v);
        let parallel = d.abs() <= 1e-14 * norm(&h.a) * vnorm;
        if parallel {
            // the whole ray lies on one side of this hyperplane
            if h.b < -GEOMETRIC_TOL * norm(&h.a) {
                return Err(Error::RayMissesPolytope);
            }
            ratios.push(None);
            continue;
        }
        let r = h.b / d;
        if d > 0.0 {
            hi = hi.min(r);
        } else {
            lo = lo.max(r);
        }
        ratios.push(Some((d, r)));
    }
    if origin_in {
        lo = 0.0;
    }
    if !hi.is_finite() || hi <= 0.0 || lo > hi * (1.0 + ALGEBRAIC_TOL) + ALGEBRAIC_TOL {
        return Err(Error::RayMissesPolytope);
    }
    let lo = lo.min(hi);

    let tied = |target: f64, r: f64| (r - target).abs() <= ALGEBRAIC_TOL * target.abs().max(1.0);
    let out_facet = ratios
        .iter()
        .position(|e| matches!(e, Some((d, r)) if *d > 0.0 && tied(hi, *r)))
        .expect("α⁺ is attained by some facet");
    let in_facet = if origin_in {
        None
    } else {
        let i = ratios
            .iter()
            .position(|e| matches!(e, Some((d, r)) if *d < 0.0 && tied(lo, *r)))
            .ok_or(Error::RayMissesPolytope)?;
        Some(i)
    };

    let degenerate = hi - lo <= ALGEBRAIC_TOL * hi.max(1.0);
    let (v_minus, v_plus, alpha_v) = if degenerate {
        (v.to_vec(), v.to_vec(), 1.0)
    } else {
        let alpha_v = ((hi - 1.0) / (hi - lo)).clamp(0.0, 1.0);
        (scale(v, lo), scale(v, hi), alpha_v)
    };

    Ok(RayTrace {
        v: v.to_vec(),
        alpha_minus: lo,
        alpha_plus: hi,
        v_minus,
        v_plus,
        in_facet,
        out_facet,
        alpha_v,
        degenerate,
    })
}

pub fn normalize_facet(p: &Polytope, index: usize) -> Result<NormalizedFacet> {
    let h = p.halfspace(index);
    if h.b.abs() <= GEOMETRIC_TOL * norm(&h.a) {
        return Err(Error::HyperplaneThroughOrigin { facet: index });
    }
    Ok(NormalizedFacet {
        index,
        a: scale(&h.a, 1.0 / h.b),
    })
}

pub fn region_of(p: &Polytope, v: &[f64]) -> Result<RegionId> {
    if v.len() == p.dim() && !p.contains(v) {
        return Err(Error::PointOutsidePolytope { point: v.to_vec() });
    }
    Ok(ray_intersect(p, v)?.region())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Halfspace;
    use crate::linalg::max_abs_diff;

    fn unit_square() -> Polytope {
        Polytope::from_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
    }

    fn band() -> Polytope {
        // x, y >= 0, 1 <= x + y <= 2
        Polytope::new(
            2,
            vec![
                Halfspace::new(vec![-1.0, 0.0], 0.0),
                Halfspace::new(vec![0.0, -1.0], 0.0),
                Halfspace::new(vec![-1.0, -1.0], -1.0),
                Halfspace::new(vec![1.0, 1.0], 2.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn box_trace() {
        let t = ray_intersect(&unit_square(), &[0.5, 0.25]).unwrap();
        assert_eq!(t.alpha_minus, 0.0);
        assert_eq!(t.alpha_plus, 2.0);
        assert_eq!(t.v_minus, vec![0.0, 0.0]);
        assert_eq!(t.v_plus, vec![1.0, 0.5]);
        assert_eq!(t.out_facet, 1);
        assert_eq!(t.in_facet, None);
        assert_eq!(t.alpha_v, 0.5);
        assert!(!t.degenerate);
    }

    #[test]
    fn band_trace() {
        let p = band();
        let t = ray_intersect(&p, &[0.75, 0.75]).unwrap();
        assert!((t.alpha_minus - 2.0 / 3.0).abs() < 1e-15);
        assert!((t.alpha_plus - 4.0 / 3.0).abs() < 1e-15);
        assert!(max_abs_diff(&t.v_minus, &[0.5, 0.5]) < 1e-15);
        assert!(max_abs_diff(&t.v_plus, &[1.0, 1.0]) < 1e-15);
        assert!((t.alpha_v - 0.5).abs() < 1e-15);
        assert_eq!(t.region(), RegionId { in_facet: Some(2), out_facet: 3 });

        let am = normalize_facet(&p, 2).unwrap().a;
        let ap = normalize_facet(&p, 3).unwrap().a;
        let identity = t.alpha_v / dot(&am, &t.v) + (1.0 - t.alpha_v) / dot(&ap, &t.v);
        assert!((identity - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn zero_direction() {
        assert!(matches!(
            ray_intersect(&unit_square(), &[0.0, 0.0]),
            Err(Error::ZeroDirection)
        ));
    }

    #[test]
    fn ray_missing_the_polytope() {
        let p = Polytope::from_box(&[1.0, 1.0], &[2.0, 2.0]).unwrap();
        assert!(matches!(ray_intersect(&p, &[1.0, -1.0]), Err(Error::RayMissesPolytope)));
        assert!(matches!(ray_intersect(&p, &[-1.0, -1.0]), Err(Error::RayMissesPolytope)));
        assert!(matches!(ray_intersect(&p, &[1.0, 10.0]), Err(Error::RayMissesPolytope)));
    }

    #[test]
    fn vertex_ties_take_the_smallest_index() {
        let t = ray_intersect(&unit_square(), &[0.5, 0.5]).unwrap();
        assert_eq!(t.out_facet, 1);
        assert_eq!(t.v_plus, vec![1.0, 1.0]);
    }

    #[test]
    fn tangent_ray_is_degenerate() {
        // the ray through (1, 1) only touches the triangle at that vertex
        let p = Polytope::new(
            2,
            vec![
                Halfspace::new(vec![-1.0, -1.0], -2.0),
                Halfspace::new(vec![1.0, 0.0], 1.0),
                Halfspace::new(vec![0.0, 1.0], 2.0),
            ],
        )
        .unwrap();
        let t = ray_intersect(&p, &[1.0, 1.0]).unwrap();
        assert!(t.degenerate);
        assert_eq!(t.alpha_v, 1.0);
        assert_eq!(t.v_minus, t.v_plus);
        assert_eq!(t.v_plus, vec![1.0, 1.0]);
    }

    #[test]
    fn ray_along_an_origin_facet() {
        let t = ray_intersect(&unit_square(), &[0.5, 0.0]).unwrap();
        assert_eq!(t.out_facet, 1);
        assert_eq!(t.v_plus, vec![1.0, 0.0]);
        assert_eq!(t.alpha_v, 0.5);
    }

    #[test]
    fn facet_normalization() {
        let p = unit_square();
        assert_eq!(normalize_facet(&p, 1).unwrap().a, vec![1.0, 0.0]);
        assert!(matches!(
            normalize_facet(&p, 0),
            Err(Error::HyperplaneThroughOrigin { facet: 0 })
        ));
        assert_eq!(normalize_facet(&band(), 3).unwrap().a, vec![0.5, 0.5]);
    }

    #[test]
    fn regions_of_points() {
        let p = unit_square();
        assert_eq!(region_of(&p, &[0.5, 0.25]).unwrap(), RegionId { in_facet: None, out_facet: 1 });
        assert_eq!(region_of(&p, &[0.25, 0.5]).unwrap(), RegionId { in_facet: None, out_facet: 3 });
        assert!(matches!(
            region_of(&p, &[2.0, 0.5]),
            Err(Error::PointOutsidePolytope { .. })
        ));
    }
}
