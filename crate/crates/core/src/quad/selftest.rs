//! Divergence-theorem self-test of the orientation and normal conventions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{integrate_piece_vec, integrate_region_vec, reduce, QuadConfig, Residual};
use crate::error::Result;
use crate::geometry::{Point, Region, Vec2};

const MONOMIALS: [(i32, i32); 10] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)];

/// Vector field `(P, Q)` with cubic polynomial components.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomCubicField {
    pub p: [f64; 10],
    pub q: [f64; 10],
}

impl RandomCubicField {
    pub fn sample(rng: &mut impl Rng) -> Self {
        let mut p = [0.0; 10];
        let mut q = [0.0; 10];
        for k in 0..10 {
            p[k] = rng.gen_range(-1.0..1.0);
            q[k] = rng.gen_range(-1.0..1.0);
        }
        Self { p, q }
    }

    pub fn value(&self, pt: Point) -> Vec2 {
        let mut v = Vec2::default();
        for (k, &(i, j)) in MONOMIALS.iter().enumerate() {
            let m = pt.x.powi(i) * pt.y.powi(j);
            v.x += self.p[k] * m;
            v.y += self.q[k] * m;
        }
        v
    }

    pub fn divergence(&self, pt: Point) -> f64 {
        let mut d = 0.0;
        for (k, &(i, j)) in MONOMIALS.iter().enumerate() {
            if i > 0 {
                d += self.p[k] * i as f64 * pt.x.powi(i - 1) * pt.y.powi(j);
            }
            if j > 0 {
                d += self.q[k] * j as f64 * pt.x.powi(i) * pt.y.powi(j - 1);
            }
        }
        d
    }
}

/// Worst residual of `div F` against the outward flux, over `F = (x, y)` and
/// three seeded random cubic fields.
pub fn divergence_selftest_seeded(region: &dyn Region, cfg: &QuadConfig, seed: u64) -> Result<Residual> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields: Vec<RandomCubicField> = (0..3).map(|_| RandomCubicField::sample(&mut rng)).collect();
    let area = integrate_region_vec(
        region,
        &|p| Ok([2.0, fields[0].divergence(p), fields[1].divergence(p), fields[2].divergence(p)]),
        cfg,
    )?;
    let mut parts = Vec::new();
    for piece in region.pieces(cfg.grade_endpoints) {
        parts.push(integrate_piece_vec(
            &piece,
            &|p, n| Ok([p.dot(n), fields[0].value(p).dot(n), fields[1].value(p).dot(n), fields[2].value(p).dot(n)]),
            cfg,
        )?);
    }
    let flux = reduce(&parts);
    let worst = (0..4)
        .map(|k| Residual::new(area[k], flux[k]))
        .max_by(|a, b| a.rel_err.total_cmp(&b.rel_err))
        .unwrap_or_else(|| Residual::new(0.0, 0.0));
    Ok(worst)
}

pub fn divergence_selftest(region: &dyn Region, cfg: &QuadConfig) -> Result<Residual> {
    divergence_selftest_seeded(region, cfg, 42)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DomainSpec, Rectangle, Variant};
    use crate::params::OperatorParams;

    #[test]
    fn unit_square() {
        let r = divergence_selftest(&Rectangle::unit(), &QuadConfig::default()).unwrap();
        assert!(r.rel_err <= 1e-12, "{r:?}");
    }

    #[test]
    fn all_fixtures() {
        for m2 in [0, 4] {
            for v in Variant::ALL {
                let anchor = if v == Variant::Omega2 { 0.5 } else { -0.5 };
                let d = DomainSpec::new(v, OperatorParams::new(1, m2), anchor).unwrap();
                let r = divergence_selftest(&d, &QuadConfig::default()).unwrap();
                assert!(r.rel_err <= 1e-9, "{v} m2={m2}: {r:?}");
            }
        }
    }

    #[test]
    fn reversed_orientation_would_fail() {
        // flux computed with the inward normal disagrees: guards the sign convention
        let d = DomainSpec::new(Variant::Omega3, OperatorParams::new(1, 4), -0.5).unwrap();
        let cfg = QuadConfig::default();
        let area = super::super::integrate_domain(|_| 2.0, &d, &cfg).unwrap();
        let inward = super::super::integrate_boundary(|p, n| -p.dot(n), &d, &cfg).unwrap();
        assert!(Residual::new(area, inward).rel_err > 0.1);
    }

    #[test]
    fn divergence_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = RandomCubicField::sample(&mut rng);
        let p = Point::new(0.3, -0.7);
        let h = 1e-6;
        let fd = (f.value(Point::new(p.x + h, p.y)).x - f.value(Point::new(p.x - h, p.y)).x) / (2.0 * h)
            + (f.value(Point::new(p.x, p.y + h)).y - f.value(Point::new(p.x, p.y - h)).y) / (2.0 * h);
        assert!((fd - f.divergence(p)).abs() < 1e-8);
    }
}
