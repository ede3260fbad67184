//! Closed forms transcribed independently of the library, plus helpers.
#![allow(dead_code)]

use rayvex::envelope::Sense;
use rayvex::functions::{bilinear_neg, catalog, reliability, CatalogEntry};
use rayvex::geometry::Polytope;
use rayvex::verify::CertifyConfig;
use rayvex::EnvelopeModel;

/// McCormick underestimator of −xy on [lx, ux] × [ly, uy].
pub fn mccormick(l: [f64; 2], u: [f64; 2], x: f64, y: f64) -> f64 {
    let upper = -u[1] * x - l[0] * y + l[0] * u[1];
    let lower = -l[1] * x - u[0] * y + l[1] * u[0];
    if (y - l[1]) * (u[0] - l[0]) >= (u[1] - l[1]) * (x - l[0]) {
        upper
    } else {
        lower
    }
}

pub fn fractional_branch_upper(x: f64, y: f64) -> f64 {
    y * (1.0 - x + 2.0 * y) / (2.0 * (x + y - 1.0))
}

pub fn fractional_branch_lower(_x: f64, y: f64) -> f64 {
    y / 2.0
}

pub fn fractional_closed(x: f64, y: f64) -> f64 {
    if y > 2.0 * (x - 1.0) {
        fractional_branch_upper(x, y)
    } else {
        fractional_branch_lower(x, y)
    }
}

/// Concave envelope of xy/(x + y − xy) on [0, ux] × [0, uy].
pub fn reliability_cave(u: [f64; 2], x: f64, y: f64) -> f64 {
    if x == 0.0 && y == 0.0 {
        return 0.0;
    }
    if y * u[0] >= u[1] * x {
        x * y / (x + y - x * u[1])
    } else {
        x * y / (x + y - u[0] * y)
    }
}

/// The rational function of the cubic example in its original expanded form.
pub fn cubic_long(x: f64, y: f64) -> f64 {
    let num = x.powi(3) * y * y + 2.0 * x.powi(4) * y - 3.0 * x.powi(3) * y - x * x * y + x.powi(5)
        - 3.0 * x.powi(4)
        + 2.0 * x.powi(3)
        - 2.0 * x * y * y
        - y.powi(3);
    -y * num / (x * (x + y).powi(2))
}

pub fn cubic_envelope(x: f64, y: f64) -> f64 {
    y * y / x
}

/// `|a − b| / max(1, |b|)`
pub fn mixed_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

pub fn mixed_err_vec(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.abs()).fold(1.0, f64::max);
    diff / scale
}

/// Area of a 2-D polytope from its vertices, sorted by angle around their centroid.
pub fn convex_area(vertices: &[Vec<f64>]) -> f64 {
    let n = vertices.len() as f64;
    let cx = vertices.iter().map(|v| v[0]).sum::<f64>() / n;
    let cy = vertices.iter().map(|v| v[1]).sum::<f64>() / n;
    let mut pts: Vec<&Vec<f64>> = vertices.iter().collect();
    pts.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.total_cmp(&tb)
    });
    let k = pts.len();
    0.5 * (0..k)
        .map(|i| {
            let (p, q) = (pts[i], pts[(i + 1) % k]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
        .abs()
}

pub fn build(entry: &CatalogEntry) -> EnvelopeModel {
    EnvelopeModel::build_with(
        entry.field.clone(),
        entry.default_polytope.clone(),
        entry.envelope_sense,
        entry.anchor.clone(),
        &CertifyConfig::default(),
    )
    .expect("catalog model builds")
}

/// Catalog defaults plus the shifted box and the smaller reliability box.
pub fn certified_models() -> Vec<(String, EnvelopeModel)> {
    let mut entries: Vec<(String, CatalogEntry)> =
        catalog().into_iter().map(|e| (e.name.to_string(), e)).collect();
    entries.push(("bilinear[-1,2]x[0.5,3]".into(), bilinear_neg(-1.0, 0.5, 2.0, 3.0).unwrap()));
    entries.push(("reliability(0.8,0.6)".into(), reliability(0.8, 0.6).unwrap()));
    entries.into_iter().map(|(n, e)| (n, build(&e))).collect()
}

pub fn signed(sense: Sense, v: f64) -> f64 {
    sense.sign() * v
}

pub fn unit_square() -> Polytope {
    Polytope::from_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
}
