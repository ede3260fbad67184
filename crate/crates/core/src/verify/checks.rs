use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{CheckResult, CheckStatus, Worst, DEFAULT_BUDGET};
use crate::envelope::{secant_value, EnvelopeModel, Sense};
use crate::error::Result;
use crate::functions::ScalarField;
use crate::geometry::{normalize_facet, ray_intersect, sample_boundary, sample_interior, Polytope, GEOMETRIC_TOL};
use crate::linalg::{dot, lerp, midpoint, scale};
use crate::Point;

/// Scalings used for the `g(λv) = λ g(v)` spot checks.
pub const HOMOGENEITY_LAMBDAS: [f64; 3] = [0.25, 0.5, 0.75];

const COROLLARY_LAMBDAS: [f64; 5] = [0.25, 0.5, 0.75, 1.5, 2.0];

fn stream(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Midpoint concavity along `[v⁻, v⁺]` for rays through interior samples.
pub fn check_ray_concavity(
    field: &ScalarField,
    polytope: &Polytope,
    n_rays: usize,
    n_per_ray: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckResult> {
    let directions = sample_interior(polytope, seed, n_rays)?;
    let mut rng = stream(seed, 1);
    let mut worst = Worst::new();
    for v in &directions {
        let t = ray_intersect(polytope, v)?;
        for _ in 0..n_per_ray {
            let (s, u): (f64, f64) = (rng.gen(), rng.gen());
            let p = lerp(&t.v_minus, &t.v_plus, s);
            let q = lerp(&t.v_minus, &t.v_plus, u);
            let m = midpoint(&p, &q);
            let violation = 0.5 * (field.eval_finite(&p)? + field.eval_finite(&q)?) - field.eval_finite(&m)?;
            worst.record(violation, || vec![p.clone(), q.clone()]);
        }
    }
    Ok(worst.finish(tol, seed, Vec::new()))
}

/// Midpoint convexity on each facet, using ray endpoints (and vertices) as facet points.
pub fn check_facet_convexity(
    field: &ScalarField,
    polytope: &Polytope,
    n_pairs_per_facet: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckResult> {
    let m = polytope.halfspaces().len();
    let mut groups: Vec<Vec<(Point, f64)>> = vec![Vec::new(); m];
    let mut notes = Vec::new();

    let mut skipped = 0;
    for w in polytope.vertices() {
        let value = field.eval(w);
        if !value.is_finite() {
            skipped += 1;
            continue;
        }
        for i in polytope.active_set(w, GEOMETRIC_TOL) {
            groups[i].push((w.clone(), value));
        }
    }
    if skipped > 0 {
        notes.push(format!("{skipped} vertices with non-finite values skipped"));
    }
    for bp in sample_boundary(polytope, seed, (2 * n_pairs_per_facet).max(16))? {
        let value = field.eval_finite(&bp.point)?;
        groups[bp.facet].push((bp.point, value));
    }

    let mut rng = stream(seed, 2);
    let mut worst = Worst::new();
    for (facet, group) in groups.iter().enumerate() {
        if group.len() < 2 {
            notes.push(format!("facet {facet}: insufficient samples ({})", group.len()));
            continue;
        }
        for _ in 0..n_pairs_per_facet {
            let (p, fp) = &group[rng.gen_range(0..group.len())];
            let (q, fq) = &group[rng.gen_range(0..group.len())];
            let mid = midpoint(p, q);
            let violation = field.eval_finite(&mid)? - 0.5 * (fp + fq);
            worst.record(violation, || vec![p.clone(), q.clone()]);
        }
    }
    Ok(worst.finish(tol, seed, notes))
}

/// Positive homogeneity of the secant interpolant of `field` over `polytope`.
///
/// With the origin in the polytope this requires `f(0) = 0` and checks
/// `g(λv) = λg(v)`; otherwise it compares the two product forms
/// `(a⁻ᵀv) f(v⁻)` and `(a⁺ᵀv) f(v⁺)`.
pub fn check_positive_homogeneity_parts(
    field: &ScalarField,
    polytope: &Polytope,
    budget: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckResult> {
    let mut worst = Worst::new();
    if polytope.contains_origin() {
        let zero = vec![0.0; polytope.dim()];
        let f0 = field.eval(&zero);
        worst.record(f0.abs(), || vec![zero.clone()]);
        let per = HOMOGENEITY_LAMBDAS.len();
        for v in sample_interior(polytope, seed, (budget / per).max(1))? {
            let g = secant_value(field, &ray_intersect(polytope, &v)?);
            for lambda in HOMOGENEITY_LAMBDAS {
                let w = scale(&v, lambda);
                let gw = secant_value(field, &ray_intersect(polytope, &w)?);
                let violation = (gw - lambda * g).abs() / (1.0 + (lambda * g).abs());
                worst.record(violation, || vec![v.clone(), w.clone()]);
            }
        }
    } else {
        for v in sample_interior(polytope, seed, budget.max(1))? {
            let t = ray_intersect(polytope, &v)?;
            let (Some(i), false) = (t.in_facet, t.degenerate) else {
                continue;
            };
            let am = normalize_facet(polytope, i)?.a;
            let ap = normalize_facet(polytope, t.out_facet)?.a;
            let lower = dot(&am, &v) * field.eval(&t.v_minus);
            let upper = dot(&ap, &v) * field.eval(&t.v_plus);
            let violation = (lower - upper).abs() / (1.0 + lower.abs().max(upper.abs()));
            worst.record(violation, || vec![v.clone()]);
        }
    }
    Ok(worst.finish(tol, seed, Vec::new()))
}

pub fn check_positive_homogeneity(model: &EnvelopeModel, budget: usize, seed: u64) -> Result<CheckResult> {
    let tol = model.certification().tolerance;
    check_positive_homogeneity_parts(model.field(), model.polytope(), budget, tol, seed)
}

/// Outcome of the homogeneity-implies-convexity workflow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryReport {
    /// `f(λv) = λ f(v)` for `f` itself.
    pub homogeneity: CheckResult,
    /// Facet convexity (concavity for concave sense).
    pub facet: CheckResult,
    /// Global midpoint convexity (concavity) of `f` on `P`.
    pub global: CheckResult,
    /// Pass or fail of the conclusion, or inapplicable when a hypothesis fails.
    pub status: CheckStatus,
}

pub fn check_corollary_convexity(
    field: &ScalarField,
    polytope: &Polytope,
    sense: Sense,
    tol: f64,
    seed: u64,
) -> Result<CorollaryReport> {
    let h = match sense {
        Sense::Convex => field.clone(),
        Sense::Concave => field.negated(),
    };
    let n = DEFAULT_BUDGET;

    let mut worst = Worst::new();
    let mut off_domain = 0;
    for v in sample_interior(polytope, seed, (n / COROLLARY_LAMBDAS.len()).max(1))? {
        let fv = field.eval_finite(&v)?;
        for lambda in COROLLARY_LAMBDAS {
            let w = scale(&v, lambda);
            let fw = field.eval(&w);
            if !fw.is_finite() {
                off_domain += 1;
                continue;
            }
            let violation = (fw - lambda * fv).abs() / (1.0 + (lambda * fv).abs());
            worst.record(violation, || vec![v.clone(), w.clone()]);
        }
    }
    let notes = if off_domain > 0 {
        vec![format!("{off_domain} scaled points outside the field's domain skipped")]
    } else {
        Vec::new()
    };
    let homogeneity = worst.finish(tol, seed, notes);

    let m = polytope.halfspaces().len();
    let facet = check_facet_convexity(&h, polytope, (n / m).max(1), tol, seed)?;

    let points = sample_interior(polytope, seed.wrapping_add(1), 2 * n)?;
    let mut worst = Worst::new();
    for pair in points.chunks_exact(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let mid = midpoint(a, b);
        let violation = h.eval_finite(&mid)? - 0.5 * (h.eval_finite(a)? + h.eval_finite(b)?);
        worst.record(violation, || vec![a.clone(), b.clone()]);
    }
    let global = worst.finish(tol, seed.wrapping_add(1), Vec::new());

    let status = if !homogeneity.passed() || !facet.passed() {
        CheckStatus::Inapplicable
    } else {
        global.status
    };
    Ok(CorollaryReport {
        homogeneity,
        facet,
        global,
        status,
    })
}
