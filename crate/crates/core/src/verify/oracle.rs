use std::collections::HashSet;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::ScalarField;
use crate::geometry::{sample_interior, Polytope, GEOMETRIC_TOL};
use crate::lp::{solve_lp, LpStatus};
use crate::linalg::lerp;
use crate::Point;

/// Graph points of `f` whose lower convex hull approximates the envelope.
#[derive(Debug, Clone, Serialize)]
pub struct SampledOracle {
    pub points: Vec<Point>,
    pub values: Vec<f64>,
    /// Candidate points dropped because `f` was not finite there.
    pub skipped: usize,
}

impl SampledOracle {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Vertices, points on edges, a bounding-box lattice and `density` random
/// interior points. Lattice and edge coordinates are computed as `i/d` so the
/// sample set for density `2d` contains the one for `d`.
pub fn oracle_build(field: &ScalarField, polytope: &Polytope, density: usize, seed: u64) -> Result<SampledOracle> {
    let n = polytope.dim();
    let vertices = polytope.vertices();
    let mut candidates: Vec<Point> = vertices.to_vec();

    if density > 0 {
        let d = density as f64;
        let active: Vec<Vec<usize>> = vertices
            .iter()
            .map(|w| polytope.active_set(w, GEOMETRIC_TOL))
            .collect();
        for (i, j) in (0..vertices.len()).tuple_combinations() {
            let shared = active[i].iter().filter(|k| active[j].contains(k)).count();
            if shared + 1 < n {
                continue;
            }
            for k in 1..density {
                candidates.push(lerp(&vertices[i], &vertices[j], k as f64 / d));
            }
        }

        let bounds = polytope.bounds();
        let axes: Vec<Vec<f64>> = bounds
            .iter()
            .map(|[lo, hi]| (0..=density).map(|i| lo + (hi - lo) * (i as f64 / d)).collect())
            .collect();
        for x in axes.iter().multi_cartesian_product() {
            let x: Point = x.into_iter().copied().collect();
            if polytope.contains(&x) {
                candidates.push(x);
            }
        }

        candidates.extend(sample_interior(polytope, seed, density)?);
    }

    let mut seen = HashSet::new();
    let mut points = Vec::with_capacity(candidates.len());
    let mut values = Vec::with_capacity(candidates.len());
    let mut skipped = 0;
    for x in candidates {
        let key: Vec<u64> = x.iter().map(|c| c.to_bits()).collect();
        if !seen.insert(key) {
            continue;
        }
        let value = field.eval(&x);
        if value.is_finite() {
            points.push(x);
            values.push(value);
        } else {
            skipped += 1;
        }
    }
    if skipped > 0 {
        log::warn!("oracle skipped {skipped} points where `{}` is not finite", field.name());
    }
    Ok(SampledOracle {
        points,
        values,
        skipped,
    })
}

/// `min Σλₖ f(xₖ)` over convex combinations with `Σλₖ xₖ = x`.
pub fn oracle_eval(oracle: &SampledOracle, x: &[f64]) -> Result<f64> {
    let n = x.len();
    if let Some(p) = oracle.points.first() {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: p.len(),
                found: n,
            });
        }
    }
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|k| oracle.points.iter().map(|p| p[k]).collect())
        .collect();
    rows.push(vec![1.0; oracle.points.len()]);
    let mut rhs = x.to_vec();
    rhs.push(1.0);
    let sol = solve_lp(&oracle.values, &rows, &rhs)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.objective),
        _ => Err(Error::InfeasibleLp),
    }
}
