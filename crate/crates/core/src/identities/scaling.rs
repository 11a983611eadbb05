//! Dilation scaling laws of the `L^p` norm and the weighted gradient norm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{dilate, norm_of_jet, o_of_jet, ScalarField};
use crate::geometry::{Point, Rectangle};
use crate::params::OperatorParams;
use crate::quad::{integrate_region_vec, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRatios {
    pub lambda: f64,
    pub p: f64,
    /// `||u_lambda||_p^p / ||u||_p^p`.
    pub lp_ratio: f64,
    /// Ratio of the squared weighted gradient norms.
    pub grad_ratio: f64,
    /// `lambda^kappa`.
    pub lp_expected: f64,
    /// `lambda^mu`.
    pub grad_expected: f64,
}

impl ScalingRatios {
    pub fn lp_rel_err(&self) -> f64 {
        (self.lp_ratio - self.lp_expected).abs() / self.lp_expected.abs()
    }

    pub fn grad_rel_err(&self) -> f64 {
        (self.grad_ratio - self.grad_expected).abs() / self.grad_expected.abs()
    }
}

/// `((1 - x^2)(1 - y^2))^3` on `[-1, 1]^2`, extended by zero.
pub fn bump_field() -> ScalarField {
    let one = ScalarField::constant(1.0);
    ((one.clone() - ScalarField::x().powi(2)) * (one - ScalarField::y().powi(2))).powi(3)
}

fn norms(params: OperatorParams, u: &ScalarField, p: f64, bx: f64, by: f64, cfg: &QuadConfig) -> Result<[f64; 2]> {
    let region = Rectangle::new(-bx, bx, -by, by);
    integrate_region_vec(
        &region,
        &|pt: Point| {
            let j = u.jet2(pt)?;
            Ok([j.u.abs().powf(p), norm_of_jet(params, &j, pt)])
        },
        cfg,
    )
}

/// Measures both scaling laws for `u_lambda = u o phi_lambda`, with `u`
/// supported in the box `[-1, 1]^2`, whose image under the dilation carries `u_lambda`.
pub fn scaling_ratios(
    u: &ScalarField,
    lambda: f64,
    p: f64,
    params: OperatorParams,
    cfg: &QuadConfig,
) -> Result<ScalingRatios> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidConfig(format!("L^p exponent must be >= 1, got {p}")));
    }
    let co = params.coefficients();
    let ul = dilate(u, lambda, &co)?;
    let base = norms(params, u, p, 1.0, 1.0, cfg)?;
    let scaled = norms(params, &ul, p, lambda.powi(co.c1 as i32), lambda.powi(co.c2 as i32), cfg)?;
    if base[0] == 0.0 || base[1] == 0.0 {
        return Err(Error::PreconditionViolated("scaling ratios need a field with nonzero norms".into()));
    }
    Ok(ScalingRatios {
        lambda,
        p,
        lp_ratio: scaled[0] / base[0],
        grad_ratio: scaled[1] / base[1],
        lp_expected: lambda.powi(co.kappa as i32),
        grad_expected: lambda.powi(co.mu as i32),
    })
}

/// Worst `|O(u_lambda)(p) - lambda^(m1 m2 - 4) (O u)(phi_lambda(p))| / (1 + |O(u_lambda)(p)|)` over the points.
pub fn covariance_residual(u: &ScalarField, lambda: f64, params: OperatorParams, points: &[Point]) -> Result<f64> {
    let co = params.coefficients();
    let ul = dilate(u, lambda, &co)?;
    let factor = lambda.powi(params.m1 as i32 * params.m2 as i32 - 4);
    let mut worst = 0.0f64;
    for &pt in points {
        let lhs = o_of_jet(params, &ul.jet2(pt)?, pt);
        let q = Point::new(pt.x * lambda.powi(-(co.c1 as i32)), pt.y * lambda.powi(-(co.c2 as i32)));
        let rhs = factor * o_of_jet(params, &u.jet2(q)?, q);
        worst = worst.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_lambda_gives_unit_ratios() {
        let r = scaling_ratios(&bump_field(), 1.0, 2.0, OperatorParams::new(1, 4), &QuadConfig::default()).unwrap();
        assert!((r.lp_ratio - 1.0).abs() < 1e-14 && (r.grad_ratio - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fixture_ratios() {
        let cfg = QuadConfig::default();
        let r = scaling_ratios(&bump_field(), 0.5, 3.0, OperatorParams::new(1, 4), &cfg).unwrap();
        assert!((r.lp_expected - 2f64.powi(-9)).abs() < 1e-18);
        assert!(r.lp_rel_err() < 1e-9 && r.grad_rel_err() < 1e-9, "{r:?}");
        let r = scaling_ratios(&bump_field(), 2.0, 2.0, OperatorParams::new(1, 0), &cfg).unwrap();
        assert_eq!((r.lp_expected, r.grad_expected), (32.0, 2.0));
        assert!(r.lp_rel_err() < 1e-9 && r.grad_rel_err() < 1e-9, "{r:?}");
    }

    #[test]
    fn covariance_at_samples() {
        let u = ScalarField::x().powi(3) * ScalarField::y() - ScalarField::y().powi(4) + ScalarField::x() * 2.0;
        let pts: Vec<Point> = (0..20).map(|i| Point::new(-1.0 + 0.1 * i as f64, 0.7 - 0.06 * i as f64)).collect();
        for lambda in [0.5, 2.0, 1.3] {
            assert!(covariance_residual(&u, lambda, OperatorParams::new(1, 4), &pts).unwrap() < 1e-10);
        }
    }
}
