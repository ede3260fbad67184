//! Sampling certifiers for the envelope hypotheses, and the hull oracle.
//!
//! Each check draws its samples from a seeded stream, processes them in
//! order and keeps the first worst violation, so reports are reproducible
//! bit for bit.

mod checks;
mod oracle;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::envelope::EnvelopeModel;
use crate::error::Result;
use crate::functions::ScalarField;
use crate::geometry::Polytope;
use crate::Point;

pub use checks::{
    check_corollary_convexity, check_facet_convexity, check_positive_homogeneity,
    check_positive_homogeneity_parts, check_ray_concavity, CorollaryReport, HOMOGENEITY_LAMBDAS,
};
pub use oracle::{oracle_build, oracle_eval, SampledOracle};

pub const DEFAULT_TOLERANCE: f64 = 1e-7;
pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check's own hypotheses do not hold.
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub status: CheckStatus,
    /// Largest observed violation, floored at zero.
    pub worst_violation: f64,
    /// Sample points behind the worst violation, recorded on failure.
    pub witness: Option<Vec<Point>>,
    pub samples: usize,
    pub tolerance: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Running maximum of violations that remembers the first worst witness.
#[derive(Debug)]
pub(crate) struct Worst {
    value: f64,
    witness: Option<Vec<Point>>,
    samples: usize,
}

impl Worst {
    pub(crate) fn new() -> Self {
        Self {
            value: 0.0,
            witness: None,
            samples: 0,
        }
    }

    pub(crate) fn record(&mut self, violation: f64, witness: impl FnOnce() -> Vec<Point>) {
        self.samples += 1;
        if violation > self.value || (violation.is_nan() && !self.value.is_nan()) {
            self.value = violation;
            self.witness = Some(witness());
        }
    }

    pub(crate) fn finish(self, tol: f64, seed: u64, notes: Vec<String>) -> CheckResult {
        let failed = self.value > tol || self.value.is_nan();
        CheckResult {
            status: if failed { CheckStatus::Fail } else { CheckStatus::Pass },
            worst_violation: self.value,
            witness: if failed { self.witness } else { None },
            samples: self.samples,
            tolerance: tol,
            seed,
            notes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyConfig {
    pub tolerance: f64,
    /// Approximate number of function-level samples per check.
    pub budget: usize,
    pub seed: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            budget: DEFAULT_BUDGET,
            seed: 0,
        }
    }
}

impl CertifyConfig {
    pub(crate) fn rays(&self) -> (usize, usize) {
        ((self.budget / 10).max(1), 10)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub ray_concave: CheckResult,
    pub facet_convex: CheckResult,
    pub positively_homogeneous: CheckResult,
    pub sample_counts: BTreeMap<String, usize>,
    pub seed: u64,
    pub tolerance: f64,
    pub budget: usize,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.ray_concave.passed() && self.facet_convex.passed() && self.positively_homogeneous.passed()
    }

    /// Names of the checks that did not pass.
    pub fn failures(&self) -> Vec<&'static str> {
        [
            ("ray_concave", &self.ray_concave),
            ("facet_convex", &self.facet_convex),
            ("positively_homogeneous", &self.positively_homogeneous),
        ]
        .into_iter()
        .filter(|(_, c)| !c.passed())
        .map(|(n, _)| n)
        .collect()
    }
}

/// Certifies a working field and polytope, as used while building a model.
pub fn certify_parts(field: &ScalarField, polytope: &Polytope, config: &CertifyConfig) -> Result<CertificationReport> {
    let (n_rays, n_per_ray) = config.rays();
    let tol = config.tolerance;
    let seed = config.seed;
    let ray_concave = check_ray_concavity(field, polytope, n_rays, n_per_ray, tol, seed)?;
    let facet_convex = check_facet_convexity(field, polytope, config.budget, tol, seed)?;
    let positively_homogeneous = check_positive_homogeneity_parts(field, polytope, config.budget, tol, seed)?;
    let sample_counts = [
        ("ray_concave", ray_concave.samples),
        ("facet_convex", facet_convex.samples),
        ("positively_homogeneous", positively_homogeneous.samples),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    Ok(CertificationReport {
        ray_concave,
        facet_convex,
        positively_homogeneous,
        sample_counts,
        seed,
        tolerance: tol,
        budget: config.budget,
    })
}

/// Re-certifies a built model with the given budget and seed.
pub fn certify(model: &EnvelopeModel, budget: usize, seed: u64) -> Result<CertificationReport> {
    let config = CertifyConfig {
        tolerance: model.certification().tolerance,
        budget,
        seed,
    };
    certify_parts(model.field(), model.polytope(), &config)
}
