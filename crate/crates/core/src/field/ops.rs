//! Pointwise differential operators of the Gellerstedt-type operator family.
//!
//! Each operator has a jet-level form (used by the quadrature loops, where the
//! jet is computed once per node) and a field-level convenience wrapper.

use super::{Jet2, ScalarField};
use crate::error::{Error, Result};
use crate::geometry::{Point, Vec2};
use crate::params::{Coefficients, OperatorParams};
use crate::real::signed_pow;

/// Signed integer power of a coordinate.
#[inline]
pub(crate) fn ipow(v: f64, n: u32) -> f64 {
    v.powi(n as i32)
}

/// `O u = -y^m1 u_xx - x^m2 u_yy`.
#[inline]
pub fn o_of_jet(params: OperatorParams, j: &Jet2, p: Point) -> f64 {
    -ipow(p.y, params.m1) * j.uxx - ipow(p.x, params.m2) * j.uyy
}

/// `X u = (-y^m1 u_x, -x^m2 u_y)`.
#[inline]
pub fn x_of_jet(params: OperatorParams, j: &Jet2, p: Point) -> Vec2 {
    Vec2::new(-ipow(p.y, params.m1) * j.ux, -ipow(p.x, params.m2) * j.uy)
}

/// `D u = -c1 x u_x - c2 y u_y`.
#[inline]
pub fn d_of_jet(coeffs: &Coefficients, j: &Jet2, p: Point) -> f64 {
    -(coeffs.c1 as f64) * p.x * j.ux - (coeffs.c2 as f64) * p.y * j.uy
}

/// Signed form `y^m1 u_x^2 + x^m2 u_y^2`.
#[inline]
pub fn energy_of_jet(params: OperatorParams, j: &Jet2, p: Point) -> f64 {
    ipow(p.y, params.m1) * j.ux * j.ux + ipow(p.x, params.m2) * j.uy * j.uy
}

/// `|y|^m1 u_x^2 + |x|^m2 u_y^2`, the squared weighted gradient.
#[inline]
pub fn norm_of_jet(params: OperatorParams, j: &Jet2, p: Point) -> f64 {
    ipow(p.y.abs(), params.m1) * j.ux * j.ux + ipow(p.x.abs(), params.m2) * j.uy * j.uy
}

/// Weighted gradient `(|y|^(m1/2) u_x, |x|^(m2/2) u_y)`.
pub fn weighted_gradient_of_jet(params: OperatorParams, j: &Jet2, p: Point) -> Vec2 {
    Vec2::new(
        p.y.abs().powf(params.m1 as f64 / 2.0) * j.ux,
        p.x.abs().powf(params.m2 as f64 / 2.0) * j.uy,
    )
}

/// Dilation field `V = (-c1 x, -c2 y)`, so that `D u = V . grad u`.
#[inline]
pub fn dilation_field(coeffs: &Coefficients, p: Point) -> Vec2 {
    Vec2::new(-(coeffs.c1 as f64) * p.x, -(coeffs.c2 as f64) * p.y)
}

pub fn apply_o(params: OperatorParams, u: &ScalarField, p: Point) -> Result<f64> {
    Ok(o_of_jet(params, &u.jet2(p)?, p))
}

pub fn apply_x(params: OperatorParams, u: &ScalarField, p: Point) -> Result<Vec2> {
    Ok(x_of_jet(params, &u.jet2(p)?, p))
}

pub fn apply_d(coeffs: &Coefficients, u: &ScalarField, p: Point) -> Result<f64> {
    Ok(d_of_jet(coeffs, &u.jet2(p)?, p))
}

pub fn energy_density(params: OperatorParams, u: &ScalarField, p: Point) -> Result<f64> {
    Ok(energy_of_jet(params, &u.jet2(p)?, p))
}

pub fn norm_density(params: OperatorParams, u: &ScalarField, p: Point) -> Result<f64> {
    Ok(norm_of_jet(params, &u.jet2(p)?, p))
}

/// Derivatives `d+ u`, `d- u` along the two characteristic families,
/// `x^(-m2/2) [x^(m2/2) u_y +- (-y)^(m1/2) u_x]`.
///
/// Defined on the closed hyperbolic region `y <= 0` away from `x = 0`; for
/// `x < 0` the factor `x^(m2/2)` needs `m2` even.
pub fn directional_pm_of_jet(params: OperatorParams, j: &Jet2, p: Point) -> Result<(f64, f64)> {
    if p.y > 0.0 {
        return Err(Error::NotHyperbolic { x: p.x, y: p.y });
    }
    if p.x == 0.0 {
        return Err(Error::DegeneracyLine { x: p.x, y: p.y });
    }
    let xh = signed_pow(p.x, params.m2 as i64, 2)
        .ok_or_else(|| Error::Domain(format!("x^(m2/2) undefined at x = {} for m2 = {}", p.x, params.m2)))?;
    let yh = (-p.y).powf(params.m1 as f64 / 2.0);
    let plus = (xh * j.uy + yh * j.ux) / xh;
    let minus = (xh * j.uy - yh * j.ux) / xh;
    Ok((plus, minus))
}

pub fn directional_pm(params: OperatorParams, u: &ScalarField, p: Point) -> Result<(f64, f64)> {
    directional_pm_of_jet(params, &u.jet2(p)?, p)
}

/// `u o phi_lambda` with `phi_lambda(x, y) = (lambda^-c1 x, lambda^-c2 y)`.
pub fn dilate(u: &ScalarField, lambda: f64, coeffs: &Coefficients) -> Result<ScalarField> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidConfig(format!("dilation parameter must be positive, got {lambda}")));
    }
    let sx = lambda.powi(-(coeffs.c1 as i32));
    let sy = lambda.powi(-(coeffs.c2 as i32));
    Ok(u.substitute(&(ScalarField::x() * sx), &(ScalarField::y() * sy)))
}
