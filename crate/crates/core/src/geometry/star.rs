//! Dilation flow, the starlike boundary form and star-shapedness checks.

use serde::{Deserialize, Serialize};

use super::patch::Region;
use super::{BoundaryCurveId, DomainSpec, Point, Vec2};
use crate::params::{Coefficients, OperatorParams};

/// Flow of `D = -c1 x d_x - c2 y d_y`: `(x e^(-c1 t), y e^(-c2 t))`.
pub fn flow(p: Point, t: f64, coeffs: &Coefficients) -> Point {
    Point::new(p.x * (-(coeffs.c1 as f64) * t).exp(), p.y * (-(coeffs.c2 as f64) * t).exp())
}

/// `c1 x dy - c2 y dx` for a boundary differential `dp`.
pub fn starlike_form(p: Point, dp: Vec2, coeffs: &Coefficients) -> f64 {
    coeffs.c1 as f64 * p.x * dp.y - coeffs.c2 as f64 * p.y * dp.x
}

/// `-y^m1 t_y^2 - x^m2 t_x^2` for a direction `t` at `p`; zero exactly on characteristics.
pub fn char_ode_residual_along(params: OperatorParams, p: Point, t: Vec2) -> f64 {
    -p.y.powi(params.m1 as i32) * t.y * t.y - p.x.powi(params.m2 as i32) * t.x * t.x
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarlikeReport {
    /// Minimum of the form over all samples, using unit tangents.
    pub min_form: f64,
    pub worst_point: Point,
    pub worst_piece: BoundaryCurveId,
    /// Per-piece minimum, in the order AC, BC, Sigma.
    pub piece_min: Vec<(BoundaryCurveId, f64)>,
    /// Whether every flowed boundary sample stayed in the closed domain.
    pub flow_contained: bool,
    pub is_starlike: bool,
}

/// Closed polygon approximating a region boundary, for containment tests.
#[derive(Debug, Clone)]
pub struct BoundaryPolygon {
    vertices: Vec<Point>,
}

impl BoundaryPolygon {
    pub fn from_region(region: &dyn Region, per_piece: usize) -> Self {
        Self::assemble(region, per_piece)
    }

    fn assemble(region: &dyn Region, per_piece: usize) -> Self {
        let mut vertices = Vec::new();
        for piece in region.pieces(true) {
            let mut pts: Vec<Point> = (0..=per_piece).map(|i| piece.eval(i as f64 / per_piece as f64).0).collect();
            // a piece's parameter need not run counterclockwise; its tangent does
            let (p0, tan) = piece.eval(0.5);
            let p1 = piece.eval(0.5 + 1e-6).0;
            if (p1 - p0).dot(tan) < 0.0 {
                pts.reverse();
            }
            vertices.extend(pts);
        }
        order_pieces(&mut vertices, per_piece + 1);
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    fn distance(&self, p: Point) -> f64 {
        let n = self.vertices.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let ab = b - a;
            let len2 = ab.dot(ab);
            let t = if len2 > 0.0 { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
            best = best.min(p.dist(a + ab * t));
        }
        best
    }

    /// Even-odd containment, counting points within `tol` of the boundary as inside.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside || self.distance(p) <= tol
    }
}

/// Chains the per-piece vertex runs so that each run starts where the previous ended.
fn order_pieces(vertices: &mut Vec<Point>, run: usize) {
    let runs: Vec<Vec<Point>> = vertices.chunks(run).map(|c| c.to_vec()).collect();
    let mut used = vec![false; runs.len()];
    let mut out: Vec<Point> = Vec::with_capacity(vertices.len());
    used[0] = true;
    out.extend(&runs[0]);
    for _ in 1..runs.len() {
        let end = *out.last().unwrap_or(&Point::default());
        let next = (0..runs.len())
            .filter(|&j| !used[j])
            .min_by(|&i, &j| runs[i][0].dist(end).total_cmp(&runs[j][0].dist(end)));
        if let Some(j) = next {
            used[j] = true;
            out.extend(&runs[j]);
        }
    }
    *vertices = out;
}

/// Samples the starlike form on every boundary piece and flows boundary
/// samples forward, checking that they stay in the closed domain.
pub fn check_starshaped(domain: &DomainSpec, n_samples: usize) -> StarlikeReport {
    let n = n_samples.max(8);
    let coeffs = domain.coefficients();
    let scale = 1.0 + domain.corner_a().norm().max(domain.apex().norm());
    let tol = 1e-10 * scale * scale;

    let mut min_form = f64::INFINITY;
    let mut worst_point = domain.corner_b();
    let mut worst_piece = BoundaryCurveId::AC;
    let mut piece_min = Vec::new();
    let mut samples = Vec::with_capacity(3 * n);
    for id in BoundaryCurveId::ALL {
        let (lo, hi) = domain.param_range(id);
        let mut local = f64::INFINITY;
        for i in 0..n {
            let s = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
            let (Ok(p), Ok(t)) = (domain.curve_point(id, s), domain.unit_tangent(id, s)) else {
                continue;
            };
            let form = starlike_form(p, t, &coeffs);
            samples.push(p);
            local = local.min(form);
            if form < min_form {
                min_form = form;
                worst_point = p;
                worst_piece = id;
            }
        }
        piece_min.push((id, local));
    }

    let polygon = BoundaryPolygon::assemble(domain, 2048);
    let contain_tol = 1e-6 * scale;
    let times = [0.003, 0.01, 0.03, 0.1, 0.3, 1.0, 3.0];
    let flow_contained = samples
        .iter()
        .all(|&p| times.iter().all(|&t| polygon.contains(flow(p, t, &coeffs), contain_tol)));

    StarlikeReport {
        min_form,
        worst_point,
        worst_piece,
        piece_min,
        flow_contained,
        is_starlike: min_form >= -tol && flow_contained,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ParametricArc, Sigma, Variant};

    const P14: OperatorParams = OperatorParams::new(1, 4);

    #[test]
    fn flow_examples() {
        let c = OperatorParams::new(1, 0).coefficients();
        assert_eq!(flow(Point::new(1.0, 2.0), 0.0, &c), Point::new(1.0, 2.0));
        let q = flow(Point::new(1.0, 1.0), 2f64.ln(), &c);
        assert!((q.x - 0.125).abs() < 1e-15 && (q.y - 0.25).abs() < 1e-15);
        let far = flow(Point::new(-3.0, 5.0), 50.0, &c);
        assert!(far.norm() < 1e-30);
    }

    #[test]
    fn form_vanishes_on_bc() {
        let d = DomainSpec::new(Variant::Omega1, P14, -0.5).unwrap();
        let c = d.coefficients();
        assert_eq!(starlike_form(Point::new(0.0, 0.0), Vec2::new(0.3, -2.0), &c), 0.0);
        let (lo, hi) = d.param_range(BoundaryCurveId::BC);
        for i in 1..100 {
            let s = lo + (hi - lo) * i as f64 / 100.0;
            let p = d.curve_point(BoundaryCurveId::BC, s).unwrap();
            let t = d.unit_tangent(BoundaryCurveId::BC, s).unwrap();
            assert!(starlike_form(p, t, &c).abs() < 1e-12);
        }
    }

    #[test]
    fn fixture_is_starlike() {
        let d = DomainSpec::new(Variant::Omega1, P14, -0.5).unwrap();
        let r = check_starshaped(&d, 1000);
        assert!(r.is_starlike, "{r:?}");
        assert!(r.flow_contained);
        let sigma_min = r.piece_min.iter().find(|(id, _)| *id == BoundaryCurveId::Sigma).unwrap().1;
        assert!(sigma_min >= 0.0);
    }

    #[test]
    fn flat_top_has_zero_form() {
        let d = DomainSpec::new(Variant::Omega1, P14, -0.5).unwrap();
        let flat = Sigma::Segment { from: Point::new(0.0, 0.0), to: Point::new(-1.0, 0.0) };
        let d = d.with_sigma(flat).unwrap();
        let r = check_starshaped(&d, 64);
        let sigma_min = r.piece_min.iter().find(|(id, _)| *id == BoundaryCurveId::Sigma).unwrap().1;
        assert_eq!(sigma_min, 0.0);
        for i in 1..20 {
            let s = i as f64 / 20.0;
            let p = d.curve_point(BoundaryCurveId::Sigma, s).unwrap();
            let t = d.unit_tangent(BoundaryCurveId::Sigma, s).unwrap();
            assert_eq!(starlike_form(p, t, &d.coefficients()), 0.0);
        }
    }

    #[test]
    fn dented_arc_is_flagged() {
        let d = DomainSpec::new(Variant::Omega1, P14, -0.5).unwrap();
        let base = match d.sigma() {
            Sigma::Ellipse(e) => *e,
            _ => unreachable!(),
        };
        let dented = ParametricArc::dented(base, 0.6, 0.5, 0.25);
        let d = d.with_sigma(Sigma::Parametric(dented)).unwrap();
        let r = check_starshaped(&d, 1000);
        assert!(!r.is_starlike, "{r:?}");
        assert_eq!(r.worst_piece, BoundaryCurveId::Sigma);
    }

    #[test]
    fn all_default_fixtures_are_starlike() {
        for (v, params, anchor) in [
            (Variant::Omega1, OperatorParams::new(1, 0), -0.5),
            (Variant::Omega2, P14, 0.5),
            (Variant::Omega2, OperatorParams::new(1, 0), 0.5),
            (Variant::Omega3, P14, -0.5),
            (Variant::Omega3, OperatorParams::new(1, 0), -0.5),
            (Variant::Omega4, P14, -0.5),
        ] {
            let d = DomainSpec::new(v, params, anchor).unwrap();
            let r = check_starshaped(&d, 400);
            assert!(r.is_starlike, "{v} {params:?}: {r:?}");
        }
    }

    #[test]
    fn polygon_containment() {
        let d = DomainSpec::new(Variant::Omega1, P14, -0.5).unwrap();
        let poly = BoundaryPolygon::from_region(&d, 256);
        assert!(poly.contains(Point::new(-0.5, 0.2), 0.0));
        assert!(poly.contains(Point::new(-0.7, -0.2), 0.0));
        assert!(!poly.contains(Point::new(0.3, 0.1), 0.0));
        assert!(!poly.contains(Point::new(-0.5, 0.6), 0.0));
    }
}
