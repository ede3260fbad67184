//! Building and evaluating envelope models.
//!
//! A model stores a working field `f̂` and working polytope `P̂` obtained from
//! the user's `f` and `P` by an optional translation and shift, so that
//!
//! ```text
//! vex f(x) = vex f̂(x − anchor) + offset
//! ```
//!
//! Concave envelopes are computed as `−vex(−f)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::ScalarField;
use crate::geometry::{normalize_facet, ray_intersect, Polytope, RayTrace, RegionId};
use crate::linalg::{axpy_into, dot, is_zero, sub};
use crate::verify::{certify_parts, CertificationReport, CertifyConfig, CheckStatus};
use crate::Point;

/// Relative tolerance for reporting an envelope value as tight.
pub const TIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    #[default]
    Convex,
    Concave,
}

impl Sense {
    /// `+1` for convex, `−1` for concave.
    pub fn sign(self) -> f64 {
        match self {
            Sense::Convex => 1.0,
            Sense::Concave => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum AnchorPolicy {
    /// Use `f` and `P` as given.
    #[default]
    None,
    /// Replace `f` by `f − f(0)` when the origin lies in `P`.
    OriginShift,
    /// Replace `P` by `P − t` and `f` by `f(· + t) − f(t)`.
    TranslateTo(Point),
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeValue {
    pub value: f64,
    /// Absent when the query is the anchor itself.
    pub trace: Option<RayTrace>,
    pub region: Option<RegionId>,
    pub tight: bool,
}

#[derive(Debug, Clone)]
pub struct EnvelopeModel {
    original_field: ScalarField,
    original_polytope: Polytope,
    field: ScalarField,
    polytope: Polytope,
    anchor: Point,
    offset: f64,
    sense: Sense,
    policy: AnchorPolicy,
    certification: CertificationReport,
}

/// `α_v f(v⁻) + (1 − α_v) f(v⁺)`, skipping zero-weight terms.
pub fn secant_value(field: &ScalarField, trace: &RayTrace) -> f64 {
    if trace.degenerate {
        return field.eval(&trace.v);
    }
    let mut g = 0.0;
    if trace.alpha_v > 0.0 {
        g += trace.alpha_v * field.eval(&trace.v_minus);
    }
    if trace.alpha_v < 1.0 {
        g += (1.0 - trace.alpha_v) * field.eval(&trace.v_plus);
    }
    g
}

/// Gradient of the secant interpolant by the chain rule through `α⁻(v)`, `α⁺(v)`.
pub fn secant_gradient(field: &ScalarField, polytope: &Polytope, trace: &RayTrace) -> Result<Point> {
    if trace.degenerate {
        return field.gradient_or_fd(&trace.v);
    }
    let v = &trace.v;
    let ap = normalize_facet(polytope, trace.out_facet)?.a;
    let (a, b) = (trace.alpha_plus, trace.alpha_minus);
    let gp = field.gradient_or_fd(&trace.v_plus)?;
    let fp = field.eval(&trace.v_plus);
    let sp = dot(&ap, v);

    // ∇ f(v⁺(v)) = (∇f − a⁺ (v⁺ᵀ∇f)) / (a⁺ᵀv)
    let mut d_plus = gp.clone();
    axpy_into(&mut d_plus, -dot(&trace.v_plus, &gp), &ap);
    d_plus.iter_mut().for_each(|c| *c /= sp);

    let denom = (a - b) * (a - b);
    let mut d_alpha: Point = ap.iter().map(|c| -(1.0 - b) * a * a * c / denom).collect();
    let mut out = vec![0.0; v.len()];
    let fm = match trace.in_facet {
        Some(i) => {
            let am = normalize_facet(polytope, i)?.a;
            axpy_into(&mut d_alpha, -(a - 1.0) * b * b / denom, &am);
            let gm = field.gradient_or_fd(&trace.v_minus)?;
            let sm = dot(&am, v);
            let mut d_minus = gm.clone();
            axpy_into(&mut d_minus, -dot(&trace.v_minus, &gm), &am);
            axpy_into(&mut out, trace.alpha_v / sm, &d_minus);
            field.eval(&trace.v_minus)
        }
        None => field.eval(&trace.v_minus),
    };
    axpy_into(&mut out, fm - fp, &d_alpha);
    axpy_into(&mut out, 1.0 - trace.alpha_v, &d_plus);
    Ok(out)
}

impl EnvelopeModel {
    pub fn build(field: ScalarField, polytope: Polytope, sense: Sense, policy: AnchorPolicy) -> Result<Self> {
        Self::build_with(field, polytope, sense, policy, &CertifyConfig::default())
    }

    pub fn build_with(
        field: ScalarField,
        polytope: Polytope,
        sense: Sense,
        policy: AnchorPolicy,
        config: &CertifyConfig,
    ) -> Result<Self> {
        let n = polytope.dim();
        if field.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: field.dim(),
            });
        }
        let signed = match sense {
            Sense::Convex => field.clone(),
            Sense::Concave => field.negated(),
        };
        let zero = vec![0.0; n];
        let (anchor, shift, working_polytope) = match &policy {
            AnchorPolicy::None => (zero, false, polytope.clone()),
            AnchorPolicy::OriginShift => {
                let shift = polytope.contains_origin();
                (zero, shift, polytope.clone())
            }
            AnchorPolicy::TranslateTo(t) => {
                if t.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: t.len(),
                    });
                }
                if !polytope.contains(t) {
                    return Err(Error::InvalidAnchor { anchor: t.clone() });
                }
                (t.clone(), true, polytope.translated(t)?)
            }
        };
        let (working, offset) = if shift {
            let base = field.eval_finite(&anchor)?;
            (signed.shifted(&anchor), base)
        } else {
            (signed, 0.0)
        };

        let certification = certify_parts(&working, &working_polytope, config)?;
        if !certification.passed() {
            log::warn!(
                "model for `{}` is not certified; evaluating the secant interpolant",
                field.name()
            );
        }
        Ok(Self {
            original_field: field,
            original_polytope: polytope,
            field: working,
            polytope: working_polytope,
            anchor,
            offset,
            sense,
            policy,
            certification,
        })
    }

    /// The working field `f̂`, already negated for concave sense.
    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    /// The working polytope `P − anchor`.
    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn original_field(&self) -> &ScalarField {
        &self.original_field
    }

    pub fn original_polytope(&self) -> &Polytope {
        &self.original_polytope
    }

    pub fn anchor(&self) -> &[f64] {
        &self.anchor
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn anchor_policy(&self) -> &AnchorPolicy {
        &self.policy
    }

    pub fn origin_in_p(&self) -> bool {
        self.polytope.contains_origin()
    }

    pub fn certification(&self) -> &CertificationReport {
        &self.certification
    }

    /// Whether the secant interpolant is certified to be the envelope.
    pub fn is_certified(&self) -> bool {
        self.certification.passed()
    }

    pub fn status_label(&self) -> &'static str {
        if self.is_certified() {
            "envelope"
        } else {
            "secant interpolant"
        }
    }

    /// Working coordinates `x − anchor`, checked against the working polytope.
    pub fn to_working(&self, x: &[f64]) -> Result<Point> {
        if x.len() != self.polytope.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.polytope.dim(),
                found: x.len(),
            });
        }
        let v = sub(x, &self.anchor);
        if !self.polytope.contains(&v) {
            return Err(Error::PointOutsideDomain { point: x.to_vec() });
        }
        Ok(v)
    }

    fn finish(&self, working_value: f64) -> f64 {
        self.sense.sign() * working_value + self.offset
    }

    pub fn eval(&self, x: &[f64]) -> Result<EnvelopeValue> {
        let v = self.to_working(x)?;
        let f = self.original_field.eval(x);
        let (value, trace) = if is_zero(&v) {
            (self.finish(self.field.eval(&v)), None)
        } else {
            let trace = ray_intersect(&self.polytope, &v)?;
            let value = if trace.degenerate {
                f
            } else {
                self.finish(secant_value(&self.field, &trace))
            };
            (value, Some(trace))
        };
        let tight = value == f || (value - f).abs() <= TIGHT_TOL * (1.0 + f.abs());
        Ok(EnvelopeValue {
            value,
            region: trace.as_ref().map(RayTrace::region),
            trace,
            tight,
        })
    }

    /// Shorthand for `eval(x)?.value`.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.eval(x)?.value)
    }

    /// The product form `(a⁺ᵀv) f̂(v⁺)`, or `(a⁻ᵀv) f̂(v⁻)` when the origin is outside.
    pub fn eval_homogeneous(&self, x: &[f64]) -> Result<f64> {
        if self.certification.positively_homogeneous.status != CheckStatus::Pass {
            return Err(Error::NotCertifiedHomogeneous);
        }
        let v = self.to_working(x)?;
        let trace = ray_intersect(&self.polytope, &v)?;
        let (facet, point) = match trace.in_facet {
            Some(i) => (i, &trace.v_minus),
            None => (trace.out_facet, &trace.v_plus),
        };
        let a = normalize_facet(&self.polytope, facet)?.a;
        Ok(self.finish(dot(&a, &v) * self.field.eval(point)))
    }

    /// Gradient of the envelope at `x`, using the tie-broken region on boundaries.
    pub fn gradient(&self, x: &[f64]) -> Result<Point> {
        let v = self.to_working(x)?;
        if is_zero(&v) {
            return Err(Error::GradientAtAnchor);
        }
        let trace = ray_intersect(&self.polytope, &v)?;
        let working = if self.certification.positively_homogeneous.status == CheckStatus::Pass
            && !trace.degenerate
        {
            self.homogeneous_gradient(&trace)?
        } else {
            secant_gradient(&self.field, &self.polytope, &trace)?
        };
        let s = self.sense.sign();
        let out: Point = working.into_iter().map(|g| s * g).collect();
        if out.iter().any(|g| !g.is_finite()) {
            return Err(Error::GradientUnavailable {
                reason: format!("non-finite gradient at {x:?}"),
            });
        }
        Ok(out)
    }

    /// `∇g = f̂(w) a + ∇f̂(w) − (∇f̂(w)ᵀw) a` with `(a, w)` the normalized facet and its point.
    fn homogeneous_gradient(&self, trace: &RayTrace) -> Result<Point> {
        let (facet, w) = match trace.in_facet {
            Some(i) => (i, &trace.v_minus),
            None => (trace.out_facet, &trace.v_plus),
        };
        let a = normalize_facet(&self.polytope, facet)?.a;
        let gw = self.field.gradient_or_fd(w).map_err(|e| Error::GradientUnavailable {
            reason: e.to_string(),
        })?;
        let mut out = gw.clone();
        axpy_into(&mut out, self.field.eval(w) - dot(&gw, w), &a);
        Ok(out)
    }
}
