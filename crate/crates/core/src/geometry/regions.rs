use std::f64::consts::PI;

use serde::Serialize;

use super::{ray_intersect, OriginPosition, Polytope, RegionId, ALGEBRAIC_TOL};
use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, norm};
use crate::Point;

/// One full-dimensional cell of the ray subdivision, as a counter-clockwise polygon.
#[derive(Debug, Clone, Serialize)]
pub struct Region {
    pub id: RegionId,
    pub polygon: Vec<Point>,
}

/// Shoelace area of a simple polygon; positive for counter-clockwise order.
pub fn polygon_area(polygon: &[Point]) -> f64 {
    let n = polygon.len();
    if n < 3 {
        return 0.0;
    }
    let twice: f64 = (0..n)
        .map(|k| {
            let (p, q) = (&polygon[k], &polygon[(k + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum();
    0.5 * twice
}

/// Splits a planar polytope into the sectors between consecutive rays through
/// its vertices. Each sector has a single (in, out) facet pair.
pub fn enumerate_regions_2d(p: &Polytope) -> Result<Vec<Region>> {
    if p.dim() != 2 {
        return Err(Error::DimensionNotSupported { dim: p.dim() });
    }
    let c = p.interior_point();
    let phi0 = if norm(c) > 0.0 { c[1].atan2(c[0]) } else { 0.0 };
    let relative = |w: &[f64]| {
        let mut t = w[1].atan2(w[0]) - phi0;
        while t <= -PI {
            t += 2.0 * PI;
        }
        while t > PI {
            t -= 2.0 * PI;
        }
        t
    };

    let mut rays: Vec<(f64, Point)> = p
        .vertices()
        .iter()
        .filter(|w| norm(w) > 1e-12)
        .map(|w| (relative(w), w.clone()))
        .collect();
    rays.sort_by(|a, b| a.0.total_cmp(&b.0));
    rays.dedup_by(|b, a| (b.0 - a.0).abs() <= ALGEBRAIC_TOL);

    let mut sectors: Vec<(&Point, &Point)> = rays.windows(2).map(|w| (&w[0].1, &w[1].1)).collect();
    if *p.origin() == OriginPosition::Interior {
        if let (Some(first), Some(last)) = (rays.first(), rays.last()) {
            sectors.push((&last.1, &first.1));
        }
    }

    let mut regions = Vec::new();
    for (ua, ub) in sectors {
        let ta = ray_intersect(p, ua)?;
        let tb = ray_intersect(p, ub)?;
        let mut polygon: Vec<Point> = Vec::with_capacity(4);
        for q in [&ta.v_minus, &ta.v_plus, &tb.v_plus, &tb.v_minus] {
            if polygon.last().is_none_or(|last| max_abs_diff(last, q) > 1e-12) {
                polygon.push(q.clone());
            }
        }
        if polygon.len() > 1 && max_abs_diff(&polygon[0], polygon.last().unwrap()) <= 1e-12 {
            polygon.pop();
        }
        if polygon_area(&polygon) <= 1e-14 {
            continue;
        }
        // the bisector of the two unit directions is strictly inside the sector
        let (na, nb) = (norm(ua), norm(ub));
        let mid = [ua[0] / na + ub[0] / nb, ua[1] / na + ub[1] / nb];
        let id = ray_intersect(p, &mid)?.region();
        regions.push(Region { id, polygon });
    }
    Ok(regions)
}
