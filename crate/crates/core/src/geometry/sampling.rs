use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ray_intersect, Polytope};
use crate::error::{Error, Result};
use crate::Point;

/// Minimum slack of an accepted interior sample.
pub const INTERIOR_MARGIN: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub point: Point,
    pub facet: usize,
}

/// Rejection sampler over the bounding box, yielding strictly interior points.
pub struct InteriorSampler<'a> {
    polytope: &'a Polytope,
    rng: ChaCha8Rng,
    axes: Vec<Uniform<f64>>,
    draws: usize,
}

impl<'a> InteriorSampler<'a> {
    pub fn new(polytope: &'a Polytope, seed: u64) -> Self {
        let axes = polytope
            .bounds()
            .iter()
            .map(|[lo, hi]| Uniform::new_inclusive(*lo, *hi))
            .collect();
        Self {
            polytope,
            rng: ChaCha8Rng::seed_from_u64(seed),
            axes,
            draws: 0,
        }
    }

    /// Total candidates drawn so far, accepted or not.
    pub fn draws(&self) -> usize {
        self.draws
    }

    /// Draws until a point is accepted or `budget` total draws are used.
    pub fn next_within(&mut self, budget: usize) -> Option<Point> {
        while self.draws < budget {
            self.draws += 1;
            let x: Point = self.axes.iter().map(|u| u.sample(&mut self.rng)).collect();
            let inside = self
                .polytope
                .halfspaces()
                .iter()
                .all(|h| h.slack(&x) >= INTERIOR_MARGIN);
            if inside {
                return Some(x);
            }
        }
        None
    }
}

pub fn sample_interior(p: &Polytope, seed: u64, count: usize) -> Result<Vec<Point>> {
    let budget = count.saturating_mul(1000);
    let mut sampler = InteriorSampler::new(p, seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        match sampler.next_within(budget) {
            Some(x) => out.push(x),
            None => {
                return Err(Error::SamplingBudgetExceeded {
                    requested: count,
                    accepted: out.len(),
                    budget,
                })
            }
        }
    }
    Ok(out)
}

/// Boundary points collected as the far (and, when defined, near) ends of
/// rays through interior samples, tagged with the facet they lie on.
pub fn sample_boundary(p: &Polytope, seed: u64, count: usize) -> Result<Vec<BoundaryPoint>> {
    let budget = count.saturating_mul(1000);
    let mut sampler = InteriorSampler::new(p, seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let Some(x) = sampler.next_within(budget) else {
            return Err(Error::SamplingBudgetExceeded {
                requested: count,
                accepted: out.len(),
                budget,
            });
        };
        let Ok(t) = ray_intersect(p, &x) else {
            continue;
        };
        out.push(BoundaryPoint {
            point: t.v_plus,
            facet: t.out_facet,
        });
        if let (Some(facet), true) = (t.in_facet, out.len() < count) {
            out.push(BoundaryPoint {
                point: t.v_minus,
                facet,
            });
        }
    }
    Ok(out)
}
