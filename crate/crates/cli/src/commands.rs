use anyhow::Result;
use rayvex::descriptor::{region_records, AnchorSpec, PolytopeDocument};
use rayvex::functions::CATALOG_NAMES;
use rayvex::verify::{oracle_build, oracle_eval};
use rayvex::{catalog, EnvelopeModel, Error, Point, Sense};
use serde::Serialize;

use crate::args::{Format, ModelArgs, OutputArgs};
use crate::model;
use crate::output::{num, opt_index, write_json, Csv};

/// Largest tolerated violation of `g ≤ oracle` and `g ≤ f` in `compare`.
pub const SANDWICH_TOL: f64 = 1e-8;

/// Whether the run completed with every hypothesis or bound satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Violated,
}

pub fn certify(args: &ModelArgs) -> Result<Verdict> {
    let (resolved, model) = model::build(args)?;
    let report = model.certification();
    match args.output.format {
        Format::Json => write_json(&args.output, report)?,
        Format::Csv => {
            let header = ["check", "status", "worst_violation", "samples", "tolerance", "witness"];
            let mut csv = Csv::new(&args.output, &header.map(String::from))?;
            for (name, check) in [
                ("ray_concave", &report.ray_concave),
                ("facet_convex", &report.facet_convex),
                ("positively_homogeneous", &report.positively_homogeneous),
            ] {
                let witness = check
                    .witness
                    .iter()
                    .flatten()
                    .map(|p| p.iter().map(|c| num(*c)).collect::<Vec<_>>().join(" "))
                    .collect::<Vec<_>>()
                    .join(";");
                csv.row(&[
                    name.to_string(),
                    serde_json::to_value(check.status)?.as_str().unwrap_or_default().to_string(),
                    num(check.worst_violation),
                    check.samples.to_string(),
                    num(check.tolerance),
                    witness,
                ])?;
            }
            csv.finish()?;
        }
    }
    if report.passed() {
        eprintln!("{}: all checks pass", resolved.entry.name);
        Ok(Verdict::Ok)
    } else {
        eprintln!("{}: failed {}", resolved.entry.name, report.failures().join(", "));
        Ok(Verdict::Violated)
    }
}

#[derive(Debug, Serialize)]
struct EvalRecord {
    x: Point,
    f: f64,
    g: f64,
    tight: bool,
    region_in: Option<usize>,
    region_out: Option<usize>,
    alpha_v: Option<f64>,
    v_minus: Option<Point>,
    v_plus: Option<Point>,
    gradient: Option<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gradient_error: Option<String>,
}

pub fn eval(args: &ModelArgs, points: &[Point]) -> Result<Verdict> {
    let (_, model) = model::build(args)?;
    let mut records = Vec::with_capacity(points.len());
    for x in points {
        let e = model.eval(x)?;
        let (gradient, gradient_error) = match model.gradient(x) {
            Ok(g) => (Some(g), None),
            Err(err) => (None, Some(err.to_string())),
        };
        records.push(EvalRecord {
            x: x.clone(),
            f: model.original_field().eval(x),
            g: e.value,
            tight: e.tight,
            region_in: e.region.and_then(|r| r.in_facet),
            region_out: e.region.map(|r| r.out_facet),
            alpha_v: e.trace.as_ref().map(|t| t.alpha_v),
            v_minus: e.trace.as_ref().map(|t| add(&t.v_minus, model.anchor())),
            v_plus: e.trace.as_ref().map(|t| add(&t.v_plus, model.anchor())),
            gradient,
            gradient_error,
        });
    }
    match args.output.format {
        Format::Json => write_json(&args.output, &records)?,
        Format::Csv => {
            let n = model.polytope().dim();
            let mut header = coord_header(n);
            header.extend(["f", "g", "tight", "region_in", "region_out"].map(String::from));
            header.extend((1..=n).map(|i| format!("grad{i}")));
            let mut csv = Csv::new(&args.output, &header)?;
            for r in &records {
                let mut row: Vec<String> = r.x.iter().map(|c| num(*c)).collect();
                row.extend([num(r.f), num(r.g), r.tight.to_string(), opt_index(r.region_in), opt_index(r.region_out)]);
                match &r.gradient {
                    Some(g) => row.extend(g.iter().map(|c| num(*c))),
                    None => row.extend((0..n).map(|_| String::new())),
                }
                csv.row(&row)?;
            }
            csv.finish()?;
        }
    }
    Ok(Verdict::Ok)
}

fn add(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn coord_header(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Lattice points of the bounding box, ordered lexicographically by index.
pub fn lattice(bounds: &[[f64; 2]], resolution: usize) -> Vec<Point> {
    let steps = (resolution - 1) as f64;
    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|[lo, hi]| (0..resolution).map(|i| lo + (hi - lo) * (i as f64 / steps)).collect())
        .collect();
    let total = resolution.pow(bounds.len() as u32);
    let mut points = Vec::with_capacity(total);
    let mut idx = vec![0usize; bounds.len()];
    for _ in 0..total {
        points.push(idx.iter().enumerate().map(|(k, &i)| axes[k][i]).collect());
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < resolution {
                break;
            }
            idx[k] = 0;
        }
    }
    points
}

#[derive(Debug, Serialize)]
struct GridRow {
    x: Point,
    f: f64,
    g: f64,
    tight: bool,
    region_in: Option<usize>,
    region_out: Option<usize>,
}

#[derive(Debug, Serialize)]
struct GridDocument<'a> {
    function: &'a str,
    sense: Sense,
    status: &'a str,
    resolution: usize,
    rows: Vec<GridRow>,
    omitted: usize,
}

fn grid_rows(model: &EnvelopeModel, resolution: usize) -> Result<(Vec<GridRow>, usize)> {
    let mut rows = Vec::new();
    let mut omitted = 0;
    for x in lattice(model.original_polytope().bounds(), resolution) {
        match model.eval(&x) {
            Ok(e) => rows.push(GridRow {
                f: model.original_field().eval(&x),
                g: e.value,
                tight: e.tight,
                region_in: e.region.and_then(|r| r.in_facet),
                region_out: e.region.map(|r| r.out_facet),
                x,
            }),
            Err(Error::PointOutsideDomain { .. }) => omitted += 1,
            Err(e) => return Err(e.into()),
        }
    }
    Ok((rows, omitted))
}

pub fn grid(args: &ModelArgs, resolution: usize) -> Result<Verdict> {
    let (resolved, model) = model::build(args)?;
    let (rows, omitted) = grid_rows(&model, resolution)?;
    log::info!("grid: {} rows, {omitted} lattice points outside P", rows.len());
    match args.output.format {
        Format::Json => write_json(
            &args.output,
            &GridDocument {
                function: resolved.entry.name,
                sense: model.sense(),
                status: model.status_label(),
                resolution,
                rows,
                omitted,
            },
        )?,
        Format::Csv => {
            let mut header = coord_header(model.polytope().dim());
            header.extend(["f", "g", "tight", "region_in", "region_out"].map(String::from));
            let mut csv = Csv::new(&args.output, &header)?;
            for r in &rows {
                let mut row: Vec<String> = r.x.iter().map(|c| num(*c)).collect();
                row.extend([num(r.f), num(r.g), r.tight.to_string(), opt_index(r.region_in), opt_index(r.region_out)]);
                csv.row(&row)?;
            }
            csv.comment("omitted", omitted)?;
            csv.finish()?;
        }
    }
    Ok(Verdict::Ok)
}

#[derive(Debug, Serialize)]
struct RegionsDocument {
    /// Region polygons are in working coordinates, `x − anchor`.
    anchor: Point,
    regions: Vec<rayvex::descriptor::RegionRecord>,
}

pub fn regions(args: &ModelArgs) -> Result<Verdict> {
    let (_, model) = model::build(args)?;
    let records = region_records(model.polytope())?;
    match args.output.format {
        Format::Json => write_json(
            &args.output,
            &RegionsDocument {
                anchor: model.anchor().to_vec(),
                regions: records,
            },
        )?,
        Format::Csv => {
            let header = ["region", "in_facet", "out_facet", "vertex", "x1", "x2"];
            let mut csv = Csv::new(&args.output, &header.map(String::from))?;
            for (k, r) in records.iter().enumerate() {
                for (j, w) in r.polygon.iter().enumerate() {
                    csv.row(&[
                        k.to_string(),
                        opt_index(r.in_facet),
                        r.out_facet.to_string(),
                        j.to_string(),
                        num(w[0]),
                        num(w[1]),
                    ])?;
                }
            }
            csv.finish()?;
        }
    }
    Ok(Verdict::Ok)
}

#[derive(Debug, Default, Serialize)]
pub struct CompareSummary {
    pub function: String,
    pub status: String,
    pub density: usize,
    pub resolution: usize,
    pub oracle_points: usize,
    pub oracle_skipped: usize,
    pub queries: usize,
    /// Query points skipped because `f` or `g` is not finite, or the oracle LP failed.
    pub skipped_queries: usize,
    pub max_gap: f64,
    pub mean_gap: f64,
    pub min_gap: f64,
    pub max_abs_gap: f64,
    pub min_f_minus_g: f64,
    pub sandwich_ok: bool,
}

#[derive(Debug)]
struct CompareRow {
    x: Point,
    f: f64,
    g: f64,
    oracle: f64,
}

pub fn compare(args: &ModelArgs, resolution: usize, density: usize) -> Result<Verdict> {
    let (resolved, model) = model::build(args)?;
    let s = model.sense().sign();
    let signed = match model.sense() {
        Sense::Convex => model.original_field().clone(),
        Sense::Concave => model.original_field().negated(),
    };
    let oracle = oracle_build(&signed, model.original_polytope(), density, args.seed)?;
    let (grid, _) = grid_rows(&model, resolution)?;

    let mut rows = Vec::new();
    let mut skipped = 0;
    for r in grid {
        let (f, g) = (s * r.f, s * r.g);
        if !f.is_finite() || !g.is_finite() {
            skipped += 1;
            continue;
        }
        match oracle_eval(&oracle, &r.x) {
            Ok(o) => rows.push(CompareRow { x: r.x, f, g, oracle: o }),
            Err(Error::InfeasibleLp) => skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }

    let gaps: Vec<f64> = rows.iter().map(|r| r.oracle - r.g).collect();
    let mut summary = CompareSummary {
        function: resolved.entry.name.to_string(),
        status: model.status_label().to_string(),
        density,
        resolution,
        oracle_points: oracle.len(),
        oracle_skipped: oracle.skipped,
        queries: rows.len(),
        skipped_queries: skipped,
        ..Default::default()
    };
    if !gaps.is_empty() {
        summary.max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        summary.min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
        summary.mean_gap = gaps.iter().sum::<f64>() / gaps.len() as f64;
        summary.max_abs_gap = gaps.iter().fold(0.0, |a, b| a.max(b.abs()));
        summary.min_f_minus_g = rows.iter().map(|r| r.f - r.g).fold(f64::INFINITY, f64::min);
    }
    summary.sandwich_ok = summary.min_gap >= -SANDWICH_TOL && summary.min_f_minus_g >= -SANDWICH_TOL;

    match args.output.format {
        Format::Json => write_json(&args.output, &summary)?,
        Format::Csv => {
            let mut header = coord_header(model.polytope().dim());
            header.extend(["f", "g", "oracle", "gap"].map(String::from));
            let mut csv = Csv::new(&args.output, &header)?;
            for (r, gap) in rows.iter().zip(&gaps) {
                let mut row: Vec<String> = r.x.iter().map(|c| num(*c)).collect();
                row.extend([num(r.f), num(r.g), num(r.oracle), num(*gap)]);
                csv.row(&row)?;
            }
            csv.comment("max_gap", num(summary.max_gap))?;
            csv.comment("mean_gap", num(summary.mean_gap))?;
            csv.comment("min_gap", num(summary.min_gap))?;
            csv.comment("min_f_minus_g", num(summary.min_f_minus_g))?;
            csv.comment("skipped", skipped)?;
            csv.finish()?;
        }
    }
    if summary.sandwich_ok {
        Ok(Verdict::Ok)
    } else {
        eprintln!(
            "sandwich violated: min(oracle - g) = {:e}, min(f - g) = {:e}",
            summary.min_gap, summary.min_f_minus_g
        );
        Ok(Verdict::Violated)
    }
}

#[derive(Debug, Serialize)]
struct CatalogRecord {
    name: &'static str,
    dim: usize,
    params: Vec<(String, f64)>,
    sense: Sense,
    anchor: AnchorSpec,
    domain: String,
    closed_form_envelope: bool,
    polytope: PolytopeDocument,
}

pub fn catalog_listing(out: &OutputArgs) -> Result<Verdict> {
    let records: Vec<CatalogRecord> = catalog()
        .into_iter()
        .map(|e| CatalogRecord {
            name: e.name,
            dim: e.field.dim(),
            params: e.params.clone(),
            sense: e.envelope_sense,
            anchor: AnchorSpec::from_policy(&e.anchor),
            domain: e.field.domain_note().to_string(),
            closed_form_envelope: e.expected_envelope.is_some(),
            polytope: PolytopeDocument::from_polytope(&e.default_polytope),
        })
        .collect();
    debug_assert_eq!(records.len(), CATALOG_NAMES.len());
    match out.format {
        Format::Json => write_json(out, &records)?,
        Format::Csv => {
            let header = ["name", "dim", "sense", "params"];
            let mut csv = Csv::new(out, &header.map(String::from))?;
            for r in &records {
                let params = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
                let sense = serde_json::to_value(r.sense)?.as_str().unwrap_or_default().to_string();
                csv.row(&[r.name.to_string(), r.dim.to_string(), sense, params])?;
            }
            csv.finish()?;
        }
    }
    Ok(Verdict::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_order_and_endpoints() {
        let pts = lattice(&[[0.0, 1.0], [2.0, 4.0]], 3);
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], vec![0.0, 2.0]);
        assert_eq!(pts[1], vec![0.0, 3.0]);
        assert_eq!(pts[3], vec![0.5, 2.0]);
        assert_eq!(pts[8], vec![1.0, 4.0]);
    }

    #[test]
    fn lattice_in_three_dimensions() {
        let pts = lattice(&[[0.0, 1.0]; 3], 2);
        assert_eq!(pts.len(), 8);
        assert_eq!(pts[1], vec![0.0, 0.0, 1.0]);
        assert_eq!(pts[7], vec![1.0, 1.0, 1.0]);
    }
}
