use std::sync::OnceLock;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::GEOMETRIC_TOL;
use crate::error::{Error, Result};
use crate::linalg::{dot, max_abs_diff, norm};
use crate::lp::{solve_lp, LpStatus};
use crate::Point;

/// The closed halfspace `aᵀx ≤ b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub a: Vec<f64>,
    pub b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Halfspace {
    pub fn new(a: Vec<f64>, b: f64) -> Self {
        Self { a, b, label: None }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Signed Euclidean distance of `x` outside the halfspace (negative inside).
    pub fn violation(&self, x: &[f64]) -> f64 {
        (dot(&self.a, x) - self.b) / norm(&self.a)
    }

    /// `b − aᵀx`
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.b - dot(&self.a, x)
    }
}

/// Where the origin sits relative to a polytope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "position")]
pub enum OriginPosition {
    Interior,
    /// On the boundary; `vertex` is true when the active normals span ℝⁿ.
    Boundary { active: Vec<usize>, vertex: bool },
    Outside,
}

impl OriginPosition {
    /// Boundary origins count as contained.
    pub fn contains_origin(&self) -> bool {
        !matches!(self, OriginPosition::Outside)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub bounded: bool,
    /// Per-coordinate `[min, max]` over the polytope.
    pub coordinate_bounds: Vec<[f64; 2]>,
    /// Center of the largest inscribed ball.
    pub interior_point: Point,
    pub inradius: f64,
    pub origin: OriginPosition,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexEnumeration {
    pub vertices: Vec<Point>,
    /// Active sets whose normals were linearly dependent.
    pub singular_subsets: usize,
}

/// A bounded polyhedron `{x : aᵢᵀx ≤ bᵢ}` with nonempty interior.
///
/// Boundedness and interior are checked on construction, so any `Polytope`
/// value satisfies both.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    report: ValidationReport,
    vertices: OnceLock<VertexEnumeration>,
}

impl Polytope {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        let report = validate(dim, &halfspaces)?;
        Ok(Self {
            dim,
            halfspaces,
            report,
            vertices: OnceLock::new(),
        })
    }

    /// The box `∏ [lowerᵢ, upperᵢ]`, listing `xᵢ ≥ lᵢ` then `xᵢ ≤ uᵢ` per coordinate.
    pub fn from_box(lower: &[f64], upper: &[f64]) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        let n = lower.len();
        let mut hs = Vec::with_capacity(2 * n);
        for k in 0..n {
            let mut e = vec![0.0; n];
            e[k] = -1.0;
            hs.push(Halfspace::new(e.clone(), -lower[k]).labeled(format!("x{} >= {}", k + 1, lower[k])));
            e[k] = 1.0;
            hs.push(Halfspace::new(e, upper[k]).labeled(format!("x{} <= {}", k + 1, upper[k])));
        }
        Self::new(n, hs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn halfspace(&self, index: usize) -> &Halfspace {
        &self.halfspaces[index]
    }

    pub fn validation(&self) -> &ValidationReport {
        &self.report
    }

    pub fn origin(&self) -> &OriginPosition {
        &self.report.origin
    }

    pub fn contains_origin(&self) -> bool {
        self.report.origin.contains_origin()
    }

    pub fn interior_point(&self) -> &[f64] {
        &self.report.interior_point
    }

    pub fn bounds(&self) -> &[[f64; 2]] {
        &self.report.coordinate_bounds
    }

    /// Largest signed distance from `x` to any halfspace (≤ 0 inside).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| h.violation(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Distance from `x` to the nearest facet hyperplane, for `x` inside.
    pub fn interior_margin(&self, x: &[f64]) -> f64 {
        -self.max_violation(x)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_within(x, GEOMETRIC_TOL)
    }

    pub fn contains_within(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim && self.max_violation(x) <= tol
    }

    /// Indices of halfspaces active at `x` within `tol`.
    pub fn active_set(&self, x: &[f64], tol: f64) -> Vec<usize> {
        self.halfspaces
            .iter()
            .enumerate()
            .filter(|(_, h)| h.violation(x).abs() <= tol)
            .map(|(i, _)| i)
            .collect()
    }

    /// `P − t = {x : x + t ∈ P}`.
    pub fn translated(&self, t: &[f64]) -> Result<Polytope> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: t.len(),
            });
        }
        let hs = self
            .halfspaces
            .iter()
            .map(|h| Halfspace {
                a: h.a.clone(),
                b: h.b - dot(&h.a, t),
                label: h.label.clone(),
            })
            .collect();
        Polytope::new(self.dim, hs)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertex_enumeration().vertices
    }

    pub fn vertex_enumeration(&self) -> &VertexEnumeration {
        self.vertices.get_or_init(|| enumerate_vertices(self))
    }
}

/// Structural checks plus boundedness, interior and origin classification.
pub fn validate(dim: usize, halfspaces: &[Halfspace]) -> Result<ValidationReport> {
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    if halfspaces.is_empty() {
        return Err(Error::NoHalfspaces);
    }
    for (index, h) in halfspaces.iter().enumerate() {
        if h.a.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: h.a.len(),
            });
        }
        if !h.b.is_finite() || h.a.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput {
                what: format!("halfspace {index}"),
            });
        }
        if h.a.iter().all(|v| *v == 0.0) {
            return Err(Error::ZeroNormal { index });
        }
    }

    let coordinate_bounds = coordinate_bounds(dim, halfspaces)?;
    let span = coordinate_bounds
        .iter()
        .map(|[lo, hi]| hi - lo)
        .fold(0.0f64, f64::max);
    let (interior_point, inradius) = chebyshev_center(dim, halfspaces, span.max(GEOMETRIC_TOL))?;
    if inradius <= GEOMETRIC_TOL {
        return Err(Error::EmptyInterior);
    }

    let origin = classify_origin(dim, halfspaces);
    let mut warnings = Vec::new();
    if let OriginPosition::Boundary { vertex: false, .. } = &origin {
        warnings.push(
            "origin lies on the boundary but is not a vertex; treated as contained".to_string(),
        );
    }

    Ok(ValidationReport {
        bounded: true,
        coordinate_bounds,
        interior_point,
        inradius,
        origin,
        warnings,
    })
}

/// Free variables are split as `x = x⁺ − x⁻`; columns are `[x⁺, x⁻, extra…, slack]`.
fn split_rows(dim: usize, halfspaces: &[Halfspace], extra: impl Fn(usize) -> Vec<f64>) -> Vec<Vec<f64>> {
    let m = halfspaces.len();
    halfspaces
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let mut row = Vec::with_capacity(2 * dim + m + 2);
            row.extend_from_slice(&h.a);
            row.extend(h.a.iter().map(|v| -v));
            row.extend(extra(i));
            let mut slack = vec![0.0; m];
            slack[i] = 1.0;
            row.extend(slack);
            row
        })
        .collect()
}

fn coordinate_bounds(dim: usize, halfspaces: &[Halfspace]) -> Result<Vec<[f64; 2]>> {
    let m = halfspaces.len();
    let rows = split_rows(dim, halfspaces, |_| Vec::new());
    let b: Vec<f64> = halfspaces.iter().map(|h| h.b).collect();
    let mut bounds = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut range = [0.0; 2];
        for (slot, sign) in [(0usize, 1.0), (1usize, -1.0)] {
            let mut c = vec![0.0; 2 * dim + m];
            c[k] = sign;
            c[dim + k] = -sign;
            let sol = solve_lp(&c, &rows, &b)?;
            match sol.status {
                LpStatus::Optimal => range[slot] = sign * sol.objective,
                LpStatus::Unbounded => return Err(Error::UnboundedPolytope { coordinate: k }),
                LpStatus::Infeasible => return Err(Error::EmptyInterior),
            }
        }
        bounds.push(range);
    }
    Ok(bounds)
}

/// Maximizes `t` subject to `aᵢᵀx + ‖aᵢ‖ t ≤ bᵢ`, `t ≤ cap`.
fn chebyshev_center(dim: usize, halfspaces: &[Halfspace], cap: f64) -> Result<(Point, f64)> {
    let m = halfspaces.len();
    let mut rows = split_rows(dim, halfspaces, |i| vec![norm(&halfspaces[i].a), 0.0]);
    let mut cap_row = vec![0.0; 2 * dim + 2 + m];
    cap_row[2 * dim] = 1.0;
    cap_row[2 * dim + 1] = 1.0;
    rows.push(cap_row);
    let mut b: Vec<f64> = halfspaces.iter().map(|h| h.b).collect();
    b.push(cap);
    let mut c = vec![0.0; 2 * dim + 2 + m];
    c[2 * dim] = -1.0;
    let sol = solve_lp(&c, &rows, &b)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::EmptyInterior);
    }
    let x = (0..dim).map(|k| sol.x[k] - sol.x[dim + k]).collect();
    Ok((x, sol.x[2 * dim]))
}

fn classify_origin(dim: usize, halfspaces: &[Halfspace]) -> OriginPosition {
    let zero = vec![0.0; dim];
    let mut active = Vec::new();
    for (i, h) in halfspaces.iter().enumerate() {
        let v = h.violation(&zero);
        if v > GEOMETRIC_TOL {
            return OriginPosition::Outside;
        }
        if v.abs() <= GEOMETRIC_TOL {
            active.push(i);
        }
    }
    if active.is_empty() {
        return OriginPosition::Interior;
    }
    let normals = DMatrix::from_fn(active.len(), dim, |r, k| halfspaces[active[r]].a[k]);
    let vertex = normals.rank(1e-9) == dim;
    OriginPosition::Boundary { active, vertex }
}

/// Brute force over all `n`-subsets of halfspaces.
fn enumerate_vertices(p: &Polytope) -> VertexEnumeration {
    let n = p.dim;
    let mut vertices: Vec<Point> = Vec::new();
    let mut singular_subsets = 0;
    for subset in (0..p.halfspaces.len()).combinations(n) {
        let a = DMatrix::from_fn(n, n, |r, k| p.halfspaces[subset[r]].a[k]);
        let sv = a.clone().svd(false, false).singular_values;
        let (smin, smax) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), s| (lo.min(*s), hi.max(*s)));
        if smax == 0.0 || smin / smax < 1e-12 {
            singular_subsets += 1;
            continue;
        }
        let b = DVector::from_iterator(n, subset.iter().map(|&i| p.halfspaces[i].b));
        let Some(x) = a.lu().solve(&b) else {
            singular_subsets += 1;
            continue;
        };
        let x: Point = x.iter().copied().collect();
        if p.max_violation(&x) > GEOMETRIC_TOL {
            continue;
        }
        if vertices.iter().all(|w| max_abs_diff(w, &x) > 1e-8) {
            vertices.push(x);
        }
    }
    vertices.sort_by(|u, w| {
        u.iter()
            .zip(w)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    if singular_subsets > 0 {
        log::debug!("vertex enumeration skipped {singular_subsets} singular active sets");
    }
    VertexEnumeration {
        vertices,
        singular_subsets,
    }
}
