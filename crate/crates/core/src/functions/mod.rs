//! Scalar fields and the catalog of worked examples.

mod catalog;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::add;
use crate::Point;

pub use catalog::{
    bilinear_neg, catalog, catalog_entry, cobb_douglas, cubic_rational, fractional, reliability, CatalogEntry, CATALOG_NAMES,
};

type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Point + Send + Sync>;

/// A function `ℝⁿ → ℝ` with an optional analytic gradient.
#[derive(Clone)]
pub struct ScalarField {
    name: String,
    dim: usize,
    eval: EvalFn,
    grad: Option<GradFn>,
    domain_note: String,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("has_gradient", &self.grad.is_some())
            .field("domain_note", &self.domain_note)
            .finish()
    }
}

impl ScalarField {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            dim,
            eval: Arc::new(eval),
            grad: None,
            domain_note: String::new(),
        }
    }

    pub fn with_gradient(mut self, grad: impl Fn(&[f64]) -> Point + Send + Sync + 'static) -> Self {
        self.grad = Some(Arc::new(grad));
        self
    }

    pub fn with_domain_note(mut self, note: impl Into<String>) -> Self {
        self.domain_note = note.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain_note(&self) -> &str {
        &self.domain_note
    }

    pub fn has_gradient(&self) -> bool {
        self.grad.is_some()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    pub fn gradient(&self, x: &[f64]) -> Option<Point> {
        self.grad.as_ref().map(|g| g(x))
    }

    /// Evaluates and rejects non-finite values.
    pub fn eval_finite(&self, x: &[f64]) -> Result<f64> {
        let value = self.eval(x);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFiniteEvaluation {
                point: x.to_vec(),
                value,
            })
        }
    }

    /// Analytic gradient when available, central differences otherwise.
    pub fn gradient_or_fd(&self, x: &[f64]) -> Result<Point> {
        match self.gradient(x) {
            Some(g) if g.iter().all(|v| v.is_finite()) => Ok(g),
            _ => fd_gradient(self, x, None),
        }
    }

    /// `−f`
    pub fn negated(&self) -> ScalarField {
        let eval = self.eval.clone();
        let mut out = ScalarField::new(format!("-({})", self.name), self.dim, move |x| -eval(x))
            .with_domain_note(self.domain_note.clone());
        if let Some(grad) = self.grad.clone() {
            out = out.with_gradient(move |x| grad(x).into_iter().map(|g| -g).collect());
        }
        out
    }

    /// `f(x + anchor) − f(anchor)`
    pub fn shifted(&self, anchor: &[f64]) -> ScalarField {
        shift_field(self, anchor)
    }
}

pub fn shift_field(field: &ScalarField, anchor: &[f64]) -> ScalarField {
    let base = field.eval(anchor);
    let t = anchor.to_vec();
    let eval = field.eval.clone();
    let te = t.clone();
    let mut out = ScalarField::new(format!("{}~shift", field.name), field.dim, move |x| {
        eval(&add(x, &te)) - base
    })
    .with_domain_note(field.domain_note.clone());
    if let Some(grad) = field.grad.clone() {
        out = out.with_gradient(move |x| grad(&add(x, &t)));
    }
    out
}

/// Default central-difference step for coordinate value `xi`.
pub fn default_fd_step(xi: f64) -> f64 {
    f64::EPSILON.cbrt() * xi.abs().max(1.0)
}

/// Central differences; `h` overrides the per-coordinate default step.
pub fn fd_gradient(field: &ScalarField, x: &[f64], h: Option<f64>) -> Result<Point> {
    if x.len() != field.dim {
        return Err(Error::DimensionMismatch {
            expected: field.dim,
            found: x.len(),
        });
    }
    let mut probe = x.to_vec();
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let step = h.unwrap_or_else(|| default_fd_step(x[i]));
        probe[i] = x[i] + step;
        let up = field.eval_finite(&probe)?;
        probe[i] = x[i] - step;
        let down = field.eval_finite(&probe)?;
        probe[i] = x[i];
        out.push((up - down) / (2.0 * step));
    }
    Ok(out)
}
