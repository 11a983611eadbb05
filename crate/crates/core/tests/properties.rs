use proptest::prelude::*;

use tricomi::field::{apply_o, apply_x, weighted_gradient_of_jet, ScalarField};
use tricomi::geometry::{flow, BoundaryCurveId, BoundaryPolygon, DomainSpec, Point, Variant};
use tricomi::identities::{covariance_residual, fixture_domain};
use tricomi::params::OperatorParams;
use tricomi::quad::{integrate_domain, integrate_region_fixed, QuadConfig};

const P14: OperatorParams = OperatorParams::new(1, 4);

fn x() -> ScalarField {
    ScalarField::x()
}

fn y() -> ScalarField {
    ScalarField::y()
}

fn expr() -> impl Strategy<Value = ScalarField> {
    let leaf = prop_oneof![
        (-2.0..2.0f64).prop_map(ScalarField::constant),
        Just(x()),
        Just(y()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), 2..4i32).prop_map(|(a, n)| a.powi(n)),
            inner.clone().prop_map(|a| -a),
            // denominator bounded away from zero
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / (b.powi(2) + 1.0)),
            (inner.clone(), 3.0..4.0f64).prop_map(|(a, g)| ScalarField::abs_pow(a, g).unwrap()),
        ]
    })
}

fn cubic() -> impl Strategy<Value = ScalarField> {
    prop::collection::vec(-1.0..1.0f64, 10).prop_map(|c| {
        let monomials = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)];
        monomials
            .iter()
            .zip(c)
            .fold(ScalarField::zero(), |acc, (&(i, j), k)| acc + x().powi(i) * y().powi(j) * k)
    })
}

fn point() -> impl Strategy<Value = Point> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Point::new(a, b))
}

/// Richardson-extrapolated central difference of `g` along `dir`.
fn fd(g: &dyn Fn(Point) -> f64, p: Point, dir: (f64, f64), h: f64) -> f64 {
    let d = |h: f64| {
        let plus = g(Point::new(p.x + h * dir.0, p.y + h * dir.1));
        let minus = g(Point::new(p.x - h * dir.0, p.y - h * dir.1));
        (plus - minus) / (2.0 * h)
    };
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jets_match_finite_differences(u in expr(), p in point()) {
        let j = u.jet2(p).unwrap();
        let h = 1e-3;
        let val = |q: Point| u.value(q).unwrap();
        let ux = |q: Point| u.jet2(q).unwrap().ux;
        let uy = |q: Point| u.jet2(q).unwrap().uy;
        prop_assert!(close(j.u, val(p), 1e-12));
        prop_assert!(close(j.ux, fd(&val, p, (1.0, 0.0), h), 1e-6), "ux {} vs {}", j.ux, fd(&val, p, (1.0, 0.0), h));
        prop_assert!(close(j.uy, fd(&val, p, (0.0, 1.0), h), 1e-6));
        prop_assert!(close(j.uxx, fd(&ux, p, (1.0, 0.0), h), 1e-6));
        prop_assert!(close(j.uxy, fd(&ux, p, (0.0, 1.0), h), 1e-6));
        prop_assert!(close(j.uxy, fd(&uy, p, (1.0, 0.0), h), 1e-6));
        prop_assert!(close(j.uyy, fd(&uy, p, (0.0, 1.0), h), 1e-6));
    }

    #[test]
    fn operator_is_divergence_of_x(u in cubic(), p in point()) {
        let x1 = |q: Point| apply_x(P14, &u, q).unwrap().x;
        let x2 = |q: Point| apply_x(P14, &u, q).unwrap().y;
        let div = fd(&x1, p, (1.0, 0.0), 1e-3) + fd(&x2, p, (0.0, 1.0), 1e-3);
        let o = apply_o(P14, &u, p).unwrap();
        prop_assert!(close(div, o, 1e-10), "{div} vs {o}");
    }

    #[test]
    fn bc_is_a_flow_trajectory(v in 0..4usize, s in 0.01..0.99f64, t in 0.0..3.0f64) {
        let d = fixture_domain(Variant::ALL[v], P14, 0.5).unwrap();
        let (lo, hi) = d.param_range(BoundaryCurveId::BC);
        let p = d.curve_point(BoundaryCurveId::BC, lo + (hi - lo) * s).unwrap();
        let q = flow(p, t, &d.coefficients());
        let sq = if Variant::ALL[v].sliced_in_y() { q.y } else { q.x };
        let on_curve = d.curve_point(BoundaryCurveId::BC, sq).unwrap();
        prop_assert!(on_curve.dist(q) <= 1e-10, "{q:?} vs {on_curve:?}");
    }

    #[test]
    fn normals_are_orthogonal_to_tangents(v in 0..4usize, piece in 0..3usize, s in 0.001..0.999f64) {
        let d = fixture_domain(Variant::ALL[v], P14, 0.5).unwrap();
        let id = BoundaryCurveId::ALL[piece];
        let (lo, hi) = d.param_range(id);
        let s = lo + (hi - lo) * s;
        let n = d.outward_normal(id, s).unwrap();
        let t = d.unit_tangent(id, s).unwrap();
        prop_assert!(n.dot(t).abs() <= 1e-12);
        prop_assert!((n.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn covariance_holds_pointwise(u in cubic(), p in point(), lambda in 0.5..2.0f64) {
        let r = covariance_residual(&u, lambda, P14, &[p]).unwrap();
        prop_assert!(r <= 1e-10, "{r}");
    }
}

fn h1_norm(domain: &DomainSpec, u: &ScalarField) -> f64 {
    let cfg = QuadConfig { panels_per_axis: 8, ..QuadConfig::default() };
    integrate_domain(
        |p| {
            let j = u.jet2(p).unwrap();
            let g = weighted_gradient_of_jet(P14, &j, p);
            g.dot(g) + j.u * j.u
        },
        domain,
        &cfg,
    )
    .unwrap()
    .sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn weighted_norm_axioms(u in cubic(), v in cubic(), a in -3.0..3.0f64) {
        let d = fixture_domain(Variant::Omega1, P14, 0.5).unwrap();
        let (nu, nv) = (h1_norm(&d, &u), h1_norm(&d, &v));
        let scaled = h1_norm(&d, &(u.clone() * a));
        prop_assert!((scaled - a.abs() * nu).abs() <= 1e-9 * (1.0 + scaled));
        let sum = h1_norm(&d, &(u + v));
        prop_assert!(sum <= nu + nv + 1e-9);
    }

    #[test]
    fn flow_containment_is_monotone(v in 0..4usize, piece in 0..3usize, s in 0.01..0.99f64, t1 in 0.0..2.0f64, dt in 0.0..2.0f64) {
        let d = fixture_domain(Variant::ALL[v], P14, 0.5).unwrap();
        let poly = BoundaryPolygon::from_region(&d, 1024);
        let id = BoundaryCurveId::ALL[piece];
        let (lo, hi) = d.param_range(id);
        let p = d.curve_point(id, lo + (hi - lo) * s).unwrap();
        let c = d.coefficients();
        if poly.contains(flow(p, t1, &c), 1e-6) {
            prop_assert!(poly.contains(flow(p, t1 + dt, &c), 1e-6));
        }
    }
}

#[test]
fn weighted_divergence_differs_from_operator() {
    // u = x^2 at (0.3, 0.25): -div(grad_w u) = -2 |y|^(1/2) = -1, while O u = -2 y = -0.5
    let u = x().powi(2);
    let p = Point::new(0.3, 0.25);
    let g1 = |q: Point| weighted_gradient_of_jet(P14, &u.jet2(q).unwrap(), q).x;
    let g2 = |q: Point| weighted_gradient_of_jet(P14, &u.jet2(q).unwrap(), q).y;
    let minus_div = -(fd(&g1, p, (1.0, 0.0), 1e-3) + fd(&g2, p, (0.0, 1.0), 1e-3));
    let o = apply_o(P14, &u, p).unwrap();
    assert!((minus_div + 1.0).abs() < 1e-9 && (o + 0.5).abs() < 1e-15);
    assert!((minus_div - o).abs() > 0.4);
}

#[test]
fn refinement_never_moves_away_from_the_limit() {
    for v in Variant::ALL {
        let d = fixture_domain(v, P14, 0.5).unwrap();
        let g = |p: Point| Ok([(p.x * 3.0).sin() * (p.y * 2.0).cos() + p.x * p.x]);
        let levels: Vec<f64> =
            [1, 2, 4, 8, 16].iter().map(|&n| integrate_region_fixed(&d, &g, 4, n, true).unwrap()[0]).collect();
        let limit = integrate_region_fixed(&d, &g, 16, 32, true).unwrap()[0];
        for w in levels.windows(2) {
            assert!((w[1] - limit).abs() <= (w[0] - limit).abs() + 1e-15, "{v}: {levels:?} limit {limit}");
        }
    }
}
