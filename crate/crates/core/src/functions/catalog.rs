use super::ScalarField;
use crate::envelope::{AnchorPolicy, Sense};
use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Polytope};

pub const CATALOG_NAMES: [&str; 5] = ["bilinear", "fractional", "reliability", "cubic", "cobb-douglas"];

/// A worked example: the function, its usual domain and, where known, its envelope.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// Parameter values the entry was built with, in canonical order.
    pub params: Vec<(String, f64)>,
    pub field: ScalarField,
    pub default_polytope: Polytope,
    pub expected_envelope: Option<ScalarField>,
    pub envelope_sense: Sense,
    /// The anchor under which the envelope hypotheses hold.
    pub anchor: AnchorPolicy,
}

/// All entries with default parameters.
pub fn catalog() -> Vec<CatalogEntry> {
    CATALOG_NAMES
        .iter()
        .map(|name| catalog_entry(name, &[]).expect("catalog defaults are valid"))
        .collect()
}

fn defaults(name: &str) -> Option<&'static [(&'static str, f64)]> {
    const THIRD: f64 = 1.0 / 3.0;
    Some(match name {
        "bilinear" => &[("lx", 0.0), ("ly", 0.0), ("ux", 1.0), ("uy", 1.0)],
        "fractional" | "cubic" => &[],
        "reliability" => &[("ux", 1.0), ("uy", 1.0)],
        "cobb-douglas" => &[
            ("A", 1.0),
            ("a1", THIRD),
            ("a2", THIRD),
            ("a3", THIRD),
            ("l1", 1.0),
            ("l2", 1.0),
            ("l3", 1.0),
            ("u1", 2.0),
            ("u2", 2.0),
            ("u3", 2.0),
        ],
        _ => return None,
    })
}

/// Looks up an entry by name, overriding default parameters.
pub fn catalog_entry(name: &str, overrides: &[(String, f64)]) -> Result<CatalogEntry> {
    let table = defaults(name).ok_or_else(|| Error::UnknownFunction { name: name.to_string() })?;
    let mut values: Vec<(String, f64)> = table.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    for (key, value) in overrides {
        let slot = values
            .iter_mut()
            .find(|(k, _)| k == key)
            .ok_or_else(|| Error::UnknownParameter {
                function: name.to_string(),
                name: key.clone(),
            })?;
        if !value.is_finite() {
            return Err(Error::InvalidParameter {
                reason: format!("{key} must be finite"),
            });
        }
        slot.1 = *value;
    }
    let p = |k: &str| values.iter().find(|(n, _)| n == k).map(|(_, v)| *v).unwrap();
    match name {
        "bilinear" => bilinear_neg(p("lx"), p("ly"), p("ux"), p("uy")),
        "fractional" => fractional(),
        "reliability" => reliability(p("ux"), p("uy")),
        "cubic" => cubic_rational(),
        "cobb-douglas" => cobb_douglas(
            p("A"),
            [p("a1"), p("a2"), p("a3")],
            [p("l1"), p("l2"), p("l3")],
            [p("u1"), p("u2"), p("u3")],
        ),
        _ => unreachable!(),
    }
}

fn named(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn hs(a: [f64; 2], b: f64, label: &str) -> Halfspace {
    Halfspace::new(a.to_vec(), b).labeled(label)
}

/// `−xy` on a box, whose envelope is the McCormick underestimator.
pub fn bilinear_neg(lx: f64, ly: f64, ux: f64, uy: f64) -> Result<CatalogEntry> {
    if !(lx < ux && ly < uy) {
        return Err(Error::InvalidParameter {
            reason: format!("bilinear needs lx < ux and ly < uy, got [{lx}, {ux}] x [{ly}, {uy}]"),
        });
    }
    let field = ScalarField::new("bilinear", 2, |x| -x[0] * x[1])
        .with_gradient(|x| vec![-x[1], -x[0]])
        .with_domain_note("all of R^2");
    let expected = ScalarField::new("mccormick", 2, move |x| {
        let (x, y) = (x[0], x[1]);
        if (y - ly) * (ux - lx) >= (uy - ly) * (x - lx) {
            -uy * x - lx * y + lx * uy
        } else {
            -ly * x - ux * y + ly * ux
        }
    });
    Ok(CatalogEntry {
        name: "bilinear",
        params: named(&[("lx", lx), ("ly", ly), ("ux", ux), ("uy", uy)]),
        field,
        default_polytope: Polytope::from_box(&[lx, ly], &[ux, uy])?,
        expected_envelope: Some(expected),
        envelope_sense: Sense::Convex,
        anchor: AnchorPolicy::TranslateTo(vec![lx, ly]),
    })
}

/// `y/x` on `{−x + 2y ≤ 2, 1 ≤ x ≤ 2, 0 ≤ y ≤ 2}`.
pub fn fractional() -> Result<CatalogEntry> {
    let field = ScalarField::new("fractional", 2, |x| x[1] / x[0])
        .with_gradient(|x| vec![-x[1] / (x[0] * x[0]), 1.0 / x[0]])
        .with_domain_note("x > 0");
    let expected = ScalarField::new("fractional envelope", 2, |x| {
        let (x, y) = (x[0], x[1]);
        if y > 2.0 * (x - 1.0) {
            y * (1.0 - x + 2.0 * y) / (2.0 * (x + y - 1.0))
        } else {
            0.5 * y
        }
    });
    let polytope = Polytope::new(
        2,
        vec![
            hs([-1.0, 2.0], 2.0, "-x + 2y <= 2"),
            hs([-1.0, 0.0], -1.0, "x >= 1"),
            hs([1.0, 0.0], 2.0, "x <= 2"),
            hs([0.0, -1.0], 0.0, "y >= 0"),
            hs([0.0, 1.0], 2.0, "y <= 2"),
        ],
    )?;
    Ok(CatalogEntry {
        name: "fractional",
        params: Vec::new(),
        field,
        default_polytope: polytope,
        expected_envelope: Some(expected),
        envelope_sense: Sense::Convex,
        anchor: AnchorPolicy::TranslateTo(vec![1.0, 0.0]),
    })
}

fn reliability_value(x: f64, y: f64) -> f64 {
    if x == 0.0 && y == 0.0 {
        return 0.0;
    }
    x * y / (x + y - x * y)
}

/// `xy/(x + y − xy)` on `[0, u_x] × [0, u_y]`, taken in the concave sense.
pub fn reliability(ux: f64, uy: f64) -> Result<CatalogEntry> {
    if !(ux > 0.0 && uy > 0.0) {
        return Err(Error::InvalidParameter {
            reason: format!("reliability needs positive upper bounds, got ({ux}, {uy})"),
        });
    }
    let field = ScalarField::new("reliability", 2, |x| reliability_value(x[0], x[1]))
        .with_gradient(|x| {
            let d = x[0] + x[1] - x[0] * x[1];
            vec![x[1] * x[1] / (d * d), x[0] * x[0] / (d * d)]
        })
        .with_domain_note("[0,1]^2, with f(0,0) = 0");
    let expected = ScalarField::new("reliability envelope", 2, move |x| {
        let (x, y) = (x[0], x[1]);
        if x == 0.0 && y == 0.0 {
            0.0
        } else if y * ux >= uy * x {
            x * y / (x + y - x * uy)
        } else {
            x * y / (x + y - ux * y)
        }
    });
    Ok(CatalogEntry {
        name: "reliability",
        params: named(&[("ux", ux), ("uy", uy)]),
        field,
        default_polytope: Polytope::from_box(&[0.0, 0.0], &[ux, uy])?,
        expected_envelope: Some(expected),
        envelope_sense: Sense::Concave,
        anchor: AnchorPolicy::OriginShift,
    })
}

/// `y²/x − x²y(s − 1)(s − 2)/s²` with `s = x + y`, on `{x, y ≥ 0, 1 ≤ x + y ≤ 2}`.
pub fn cubic_rational() -> Result<CatalogEntry> {
    let field = ScalarField::new("cubic", 2, |p| {
        let (x, y) = (p[0], p[1]);
        let s = x + y;
        y * y / x - x * x * y * (s - 1.0) * (s - 2.0) / (s * s)
    })
    .with_gradient(|p| {
        let (x, y) = (p[0], p[1]);
        let s = x + y;
        let q = (s - 1.0) * (s - 2.0) / (s * s);
        let dq = 3.0 / (s * s) - 4.0 / (s * s * s);
        vec![
            -y * y / (x * x) - 2.0 * x * y * q - x * x * y * dq,
            2.0 * y / x - x * x * q - x * x * y * dq,
        ]
    })
    .with_domain_note("x > 0; +inf on x = 0 for y > 0");
    let expected = ScalarField::new("y^2/x", 2, |p| p[1] * p[1] / p[0]);
    let polytope = Polytope::new(
        2,
        vec![
            hs([-1.0, 0.0], 0.0, "x >= 0"),
            hs([0.0, -1.0], 0.0, "y >= 0"),
            hs([-1.0, -1.0], -1.0, "x + y >= 1"),
            hs([1.0, 1.0], 2.0, "x + y <= 2"),
        ],
    )?;
    Ok(CatalogEntry {
        name: "cubic",
        params: Vec::new(),
        field,
        default_polytope: polytope,
        expected_envelope: Some(expected),
        envelope_sense: Sense::Convex,
        anchor: AnchorPolicy::None,
    })
}

/// `A x₁^α₁ x₂^α₂ x₃^α₃` on a positive box.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn cobb_douglas(a: f64, alpha: [f64; 3], lower: [f64; 3], upper: [f64; 3]) -> Result<CatalogEntry> {
    if !(a > 0.0) || alpha.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter {
            reason: "cobb-douglas needs A > 0 and positive exponents".into(),
        });
    }
    if (0..3).any(|i| !(lower[i] > 0.0 && lower[i] < upper[i])) {
        return Err(Error::InvalidParameter {
            reason: "cobb-douglas needs a box with 0 < l < u".into(),
        });
    }
    let value = move |x: &[f64]| a * (0..3).map(|i| x[i].powf(alpha[i])).product::<f64>();
    let field = ScalarField::new("cobb-douglas", 3, value)
        .with_gradient(move |x| {
            let f = value(x);
            (0..3).map(|i| alpha[i] * f / x[i]).collect()
        })
        .with_domain_note("positive orthant");
    let mut params = vec![("A".to_string(), a)];
    for (prefix, vals) in [("a", alpha), ("l", lower), ("u", upper)] {
        params.extend((0..3).map(|i| (format!("{prefix}{}", i + 1), vals[i])));
    }
    Ok(CatalogEntry {
        name: "cobb-douglas",
        params,
        field,
        default_polytope: Polytope::from_box(&lower, &upper)?,
        expected_envelope: None,
        envelope_sense: Sense::Concave,
        anchor: AnchorPolicy::None,
    })
}
