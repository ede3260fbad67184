mod common;

use common::{cubic_long, mixed_err_vec};
use proptest::prelude::*;
use rayvex::functions::{
    bilinear_neg, catalog_entry, cubic_rational, default_fd_step, fd_gradient, fractional, reliability, shift_field, CatalogEntry,
};
use rayvex::geometry::sample_interior;
use rayvex::{catalog, Error, Sense};

fn entries() -> Vec<CatalogEntry> {
    let mut all = catalog();
    all.push(bilinear_neg(-1.0, 0.5, 2.0, 3.0).unwrap());
    all.push(reliability(0.8, 0.6).unwrap());
    all
}

#[test]
fn expected_envelopes_bound_their_functions() {
    for e in entries() {
        let Some(env) = &e.expected_envelope else { continue };
        let mut worst = 0.0f64;
        for x in sample_interior(&e.default_polytope, 7, 10_000).unwrap() {
            let (f, g) = (e.field.eval(&x), env.eval(&x));
            let excess = match e.envelope_sense {
                Sense::Convex => g - f,
                Sense::Concave => f - g,
            };
            worst = worst.max(excess);
        }
        assert!(worst <= 1e-9, "{}: {worst:e}", e.name);
    }
}

#[test]
fn expected_envelopes_are_tight_at_vertices() {
    for e in entries() {
        let Some(env) = &e.expected_envelope else { continue };
        for v in e.default_polytope.vertices() {
            let (f, g) = (e.field.eval(v), env.eval(v));
            assert!(f == g || (f - g).abs() <= 1e-9, "{} at {v:?}: {f} vs {g}", e.name);
        }
    }
}

#[test]
fn fields_are_finite_inside_their_domains() {
    for e in entries() {
        for x in sample_interior(&e.default_polytope, 3, 2000).unwrap() {
            assert!(e.field.eval(&x).is_finite(), "{} at {x:?}", e.name);
        }
    }
}

#[test]
fn analytic_gradients_match_differences() {
    for e in entries() {
        assert!(e.field.has_gradient(), "{}", e.name);
        let mut worst = 0.0f64;
        for x in sample_interior(&e.default_polytope, 11, 1000).unwrap() {
            let g = e.field.gradient(&x).unwrap();
            // steps shrink with the distance to the boundary so the probe stays well conditioned
            let h = default_fd_step(x.iter().fold(0.0f64, |a, c| a.max(c.abs()))) * e.default_polytope.interior_margin(&x).min(1.0);
            let fd = fd_gradient(&e.field, &x, Some(h)).unwrap();
            worst = worst.max(mixed_err_vec(&g, &fd));
        }
        assert!(worst <= 1e-6, "{}: {worst:e}", e.name);
    }
}

#[test]
fn cubic_simplified_form_matches_the_long_form() {
    let e = cubic_rational().unwrap();
    for x in sample_interior(&e.default_polytope, 5, 5000).unwrap() {
        let (a, b) = (e.field.eval(&x), cubic_long(x[0], x[1]));
        assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{x:?}: {a} vs {b}");
    }
}

#[test]
fn shift_examples() {
    let (lx, ly) = (-1.0, 0.5);
    let e = bilinear_neg(lx, ly, 2.0, 3.0).unwrap();
    let fh = shift_field(&e.field, &[lx, ly]);
    assert_eq!(fh.eval(&[0.0, 0.0]), 0.0);
    for (x, y) in [(0.3, 1.2), (3.0, 2.5), (1.0, 0.0)] {
        let want = -(x + lx) * (y + ly) + lx * ly;
        assert!((fh.eval(&[x, y]) - want).abs() <= 1e-12);
    }

    let fh = shift_field(&fractional().unwrap().field, &[1.0, 0.0]);
    assert_eq!(fh.eval(&[0.0, 0.0]), 0.0);
    for (x, y) in [(0.0, 1.5), (1.0, 2.0), (0.4, 0.7)] {
        assert!((fh.eval(&[x, y]) - y / (x + 1.0)).abs() <= 1e-15);
    }
}

#[test]
fn expected_envelope_values() {
    let mc = bilinear_neg(0.0, 0.0, 1.0, 1.0).unwrap().expected_envelope.unwrap();
    assert_eq!(mc.eval(&[0.5, 0.25]), -0.25);
    let cave = reliability(1.0, 1.0).unwrap().expected_envelope.unwrap();
    assert!((cave.eval(&[0.5, 0.5]) - 0.5).abs() <= 1e-15);
}

#[test]
fn difference_gradient_examples() {
    let e = bilinear_neg(0.0, 0.0, 1.0, 1.0).unwrap();
    let g = fd_gradient(&e.field, &[0.5, 0.25], None).unwrap();
    assert!((g[0] + 0.25).abs() <= 1e-8 && (g[1] + 0.5).abs() <= 1e-8, "{g:?}");
    let g = fd_gradient(&fractional().unwrap().field, &[1.0, 2.0], None).unwrap();
    assert!((g[0] + 2.0).abs() <= 1e-6 && (g[1] - 1.0).abs() <= 1e-6, "{g:?}");

    let sqrt = rayvex::ScalarField::new("sqrt", 1, |x| x[0].sqrt());
    assert!(matches!(
        fd_gradient(&sqrt, &[1e-9], None),
        Err(Error::NonFiniteEvaluation { .. })
    ));
}

#[test]
fn catalog_lookup() {
    let e = catalog_entry("bilinear", &[("ux".into(), 2.0)]).unwrap();
    assert_eq!(e.default_polytope.bounds()[0], [0.0, 2.0]);
    assert!(matches!(catalog_entry("nope", &[]), Err(Error::UnknownFunction { .. })));
    assert!(matches!(
        catalog_entry("cubic", &[("ux".into(), 1.0)]),
        Err(Error::UnknownParameter { .. })
    ));
    assert!(matches!(
        catalog_entry("bilinear", &[("ux".into(), -1.0)]),
        Err(Error::InvalidParameter { .. })
    ));
    assert!(matches!(
        catalog_entry("reliability", &[("uy".into(), 0.0)]),
        Err(Error::InvalidParameter { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shifting_back_restores_the_field(
        which in 0usize..3,
        t in (0.0..1.0f64, 0.0..1.0f64),
        x in (0.0..1.0f64, 0.0..1.0f64),
    ) {
        // fields defined at the origin, so both shifts have finite offsets
        let e = match which {
            0 => bilinear_neg(-1.0, 0.5, 2.0, 3.0).unwrap(),
            1 => reliability(1.0, 1.0).unwrap(),
            _ => catalog_entry("cobb-douglas", &[]).unwrap(),
        };
        let b = e.default_polytope.bounds().to_vec();
        let at = |u: (f64, f64)| -> Vec<f64> {
            let mut p: Vec<f64> = vec![b[0][0] + u.0 * (b[0][1] - b[0][0]), b[1][0] + u.1 * (b[1][1] - b[1][0])];
            p.extend(b.iter().skip(2).map(|r| 0.5 * (r[0] + r[1])));
            p
        };
        let (a, x) = (at(t), at(x));
        let minus: Vec<f64> = a.iter().map(|c| -c).collect();
        let back = shift_field(&shift_field(&e.field, &a), &minus);
        let f0 = e.field.eval(&vec![0.0; a.len()]);
        let (want, got) = (e.field.eval(&x), back.eval(&x) + f0);
        prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()), "{got} vs {want}");
        prop_assert_eq!(shift_field(&e.field, &a).eval(&vec![0.0; a.len()]), 0.0);
    }

    #[test]
    fn negation_flips_values_and_gradients(x in 1.0..2.0f64, y in 0.0..1.0f64) {
        let f = fractional().unwrap().field;
        let n = f.negated();
        prop_assert_eq!(n.eval(&[x, y]), -f.eval(&[x, y]));
        let (g, ng) = (f.gradient(&[x, y]).unwrap(), n.gradient(&[x, y]).unwrap());
        prop_assert!(g.iter().zip(&ng).all(|(a, b)| *a == -*b));
    }
}
