//! Manufactured test fields that vanish exactly on chosen boundary pieces.

use serde::{Deserialize, Serialize};

use super::ScalarField;
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishOn {
    AcOnly,
    AcAndSigma,
}

/// Polynomial vanishing on the characteristic `AC`, obtained by squaring its equation.
///
/// For y-sliced domains `(2/c2)^2 [x^k - (2 x0)^k]^2 + (2/c1)^2 y^c1` with
/// `k = c2/2`; for x-sliced ones `((2/c1)(-2 y0)^(c1/2) - (2/c2) x^k)^2 + (2/c1)^2 y^c1`.
/// Both rely on `c1` odd, so that `y^c1 = -(-y)^c1`.
pub fn ac_defining_field(domain: &DomainSpec) -> Result<ScalarField> {
    let params = domain.params();
    params.check_parity(domain.variant())?;
    let c = params.coefficients();
    let (c1, c2) = (c.c1 as f64, c.c2 as f64);
    let k = (c.c2 / 2) as i32;
    let x = ScalarField::x();
    let y = ScalarField::y();
    let y_term = y.powi(c.c1 as i32) * (2.0 / c1).powi(2);
    let g = match domain.variant() {
        Variant::Omega1 | Variant::Omega2 => {
            let shift = (2.0 * domain.anchor()).powi(k);
            (x.powi(k) - shift).powi(2) * (2.0 / c2).powi(2) + y_term
        }
        Variant::Omega3 | Variant::Omega4 => {
            let lead = (2.0 / c1) * (-2.0 * domain.anchor()).powf(c1 / 2.0);
            (ScalarField::constant(lead) - x.powi(k) * (2.0 / c2)).powi(2) + y_term
        }
    };
    Ok(g)
}

/// `G_AC * seed` or `G_AC * S_sigma * seed`, where `S_sigma` vanishes on the arc.
pub fn manufactured(domain: &DomainSpec, vanish_on: VanishOn, seed: &ScalarField) -> Result<ScalarField> {
    let g = ac_defining_field(domain)?;
    Ok(match vanish_on {
        VanishOn::AcOnly => g * seed.clone(),
        VanishOn::AcAndSigma => {
            let s = domain.sigma().defining_field().ok_or_else(|| {
                Error::PreconditionViolated("no defining polynomial is known for a parametric arc".into())
            })?;
            g * s * seed.clone()
        }
    })
}

/// A one-variable function on `[a, b]` with `phi(a) = 0`, stored as a field in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleFn1D {
    pub expr: ScalarField,
    pub a: f64,
    pub b: f64,
}

impl SampleFn1D {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(expr: ScalarField, a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidConfig(format!("interval needs a < b, got [{a}, {b}]")));
        }
        let f = Self { expr, a, b };
        let at_a = f.value(a)?;
        if at_a.abs() > 1e-12 {
            return Err(Error::PreconditionViolated(format!("phi(a) = {at_a} but must vanish at a = {a}")));
        }
        Ok(f)
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        self.expr.value(Point::new(t, 0.0))
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        Ok(self.expr.jet2(Point::new(t, 0.0))?.ux)
    }

    /// Value and derivative together.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        let j = self.expr.jet2(Point::new(t, 0.0))?;
        Ok((j.u, j.ux))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundaryCurveId;
    use crate::params::OperatorParams;

    const P14: OperatorParams = OperatorParams::new(1, 4);

    #[test]
    fn omega1_defining_polynomial() {
        let d = DomainSpec::new(Variant::Omega1, P14, -0.5).unwrap();
        let g = ac_defining_field(&d).unwrap();
        let x = ScalarField::x();
        let y = ScalarField::y();
        let expected = (x.powi(3) + 1.0).powi(2) * (1.0 / 9.0) + y.powi(3) * (4.0 / 9.0);
        for p in [Point::new(0.3, -0.2), Point::new(-1.1, 0.4)] {
            assert!((g.value(p).unwrap() - expected.value(p).unwrap()).abs() < 1e-14);
        }
        assert_eq!(g.value(Point::new(-1.0, 0.0)).unwrap(), 0.0);
        assert!(g.value(d.apex()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn full_vanishing_on_ac_and_sigma() {
        for v in Variant::ALL {
            let anchor = if v == Variant::Omega2 { 0.5 } else { -0.5 };
            let d = DomainSpec::new(v, P14, anchor).unwrap();
            let seed = ScalarField::constant(1.0) + ScalarField::x() * 0.5 - ScalarField::y();
            let u = manufactured(&d, VanishOn::AcAndSigma, &seed).unwrap();
            for id in [BoundaryCurveId::AC, BoundaryCurveId::Sigma] {
                let (lo, hi) = d.param_range(id);
                for i in 0..=100 {
                    let p = d.curve_point(id, lo + (hi - lo) * i as f64 / 100.0).unwrap();
                    assert!(u.value(p).unwrap().abs() <= 1e-12, "{v} {id}");
                }
            }
        }
    }

    #[test]
    fn ac_only_does_not_vanish_on_sigma() {
        let d = DomainSpec::new(Variant::Omega1, P14, -0.5).unwrap();
        let u = manufactured(&d, VanishOn::AcOnly, &ScalarField::constant(1.0)).unwrap();
        let top = d.curve_point(BoundaryCurveId::Sigma, 0.5).unwrap();
        assert!(u.value(top).unwrap() > 0.01);
    }

    #[test]
    fn sample_fn_requires_left_zero() {
        let t = ScalarField::x();
        let yc = -0.4;
        let phi = SampleFn1D::new((ScalarField::constant(0.0) - t.clone()) * (t.clone() - yc), yc, 0.0).unwrap();
        assert!((phi.derivative(-0.2).unwrap() - 0.0).abs() < 1e-15);
        assert!(SampleFn1D::new(t + 1.0, yc, 0.0).is_err());
    }
}
