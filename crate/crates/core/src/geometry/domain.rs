//! The four Tricomi domains with closed-form characteristic boundaries.
//!
//! Characteristics are parameterized by their natural coordinate: `y in [y_c, 0]`
//! for `Omega1`/`Omega2` and `x in [0, x_c]` for `Omega3`/`Omega4`. The arc `sigma`
//! is parameterized by `s in [0, 1]` in the counterclockwise direction, which
//! runs from `B` to `A` except on `Omega2`, where it runs from `A` to `B`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::patch::{Patch, Piece, Region};
use super::{BoundaryCurveId, Point, Variant, Vec2};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::params::{Coefficients, OperatorParams, ParityRule};
use crate::real::signed_pow;

/// Half of an ellipse traversed over angles `[start_angle, start_angle + pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticArc {
    pub center: Point,
    pub semi_axes: (f64, f64),
    pub start_angle: f64,
}

impl EllipticArc {
    pub fn new(center: Point, a: f64, b: f64, start_angle: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidConfig(format!("ellipse semi-axes must be positive, got ({a}, {b})")));
        }
        Ok(Self { center, semi_axes: (a, b), start_angle })
    }

    pub fn point(&self, s: f64) -> Point {
        let t = self.start_angle + PI * s;
        let (a, b) = self.semi_axes;
        Point::new(self.center.x + a * t.cos(), self.center.y + b * t.sin())
    }

    pub fn derivative(&self, s: f64) -> Vec2 {
        let t = self.start_angle + PI * s;
        let (a, b) = self.semi_axes;
        Vec2::new(-PI * a * t.sin(), PI * b * t.cos())
    }

    /// `1 - ((x - cx)/a)^2 - ((y - cy)/b)^2`, zero on the ellipse.
    pub fn defining_field(&self) -> ScalarField {
        let (a, b) = self.semi_axes;
        let dx = (ScalarField::x() - self.center.x) * (1.0 / a);
        let dy = (ScalarField::y() - self.center.y) * (1.0 / b);
        ScalarField::constant(1.0) - dx.powi(2) - dy.powi(2)
    }
}

type ArcFn = dyn Fn(f64) -> (Point, Vec2) + Send + Sync;

/// A user-supplied arc `s -> (point, d point / ds)` on `[0, 1]`, counterclockwise.
#[derive(Clone)]
pub struct ParametricArc {
    pub label: String,
    map: Arc<ArcFn>,
}

impl ParametricArc {
    pub fn new(label: impl Into<String>, map: impl Fn(f64) -> (Point, Vec2) + Send + Sync + 'static) -> Self {
        Self { label: label.into(), map: Arc::new(map) }
    }

    pub fn eval(&self, s: f64) -> (Point, Vec2) {
        (self.map)(s)
    }

    /// The ellipse `base` pulled toward its center by the factor
    /// `1 - depth * (1 - ((s - at)/width)^2)^3` near `s = at`.
    pub fn dented(base: EllipticArc, depth: f64, at: f64, width: f64) -> Self {
        let c = base.center;
        let label = format!("ellipse dented by {depth} at s = {at} (width {width})");
        Self::new(label, move |s| {
            let z = (s - at) / width;
            let (bump, dbump) = if z.abs() < 1.0 {
                let q = 1.0 - z * z;
                (q * q * q, -6.0 * z * q * q / width)
            } else {
                (0.0, 0.0)
            };
            let rho = 1.0 - depth * bump;
            let drho = -depth * dbump;
            let e = base.point(s) - c;
            let de = base.derivative(s);
            (c + e * rho, e * drho + de * rho)
        })
    }
}

impl fmt::Debug for ParametricArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricArc").field("label", &self.label).finish()
    }
}

/// The non-characteristic boundary piece.
#[derive(Debug, Clone)]
pub enum Sigma {
    Ellipse(EllipticArc),
    Segment { from: Point, to: Point },
    Parametric(ParametricArc),
}

impl Sigma {
    pub fn point(&self, s: f64) -> Point {
        match self {
            Sigma::Ellipse(e) => e.point(s),
            Sigma::Segment { from, to } => *from + (*to - *from) * s,
            Sigma::Parametric(p) => p.eval(s).0,
        }
    }

    pub fn derivative(&self, s: f64) -> Vec2 {
        match self {
            Sigma::Ellipse(e) => e.derivative(s),
            Sigma::Segment { from, to } => *to - *from,
            Sigma::Parametric(p) => p.eval(s).1,
        }
    }

    /// A polynomial vanishing on the arc, when one is known.
    pub fn defining_field(&self) -> Option<ScalarField> {
        match self {
            Sigma::Ellipse(e) => Some(e.defining_field()),
            Sigma::Segment { from, to } => {
                let d = *to - *from;
                // cross(d, p - from), positive on the left of the segment
                Some((ScalarField::y() - from.y) * d.x - (ScalarField::x() - from.x) * d.y)
            }
            Sigma::Parametric(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Sigma::Ellipse(e) => format!(
                "half-ellipse center ({}, {}) semi-axes ({}, {})",
                e.center.x, e.center.y, e.semi_axes.0, e.semi_axes.1
            ),
            Sigma::Segment { from, to } => format!("segment ({}, {}) -> ({}, {})", from.x, from.y, to.x, to.y),
            Sigma::Parametric(p) => p.label.clone(),
        }
    }
}

/// Closed-form characteristic, either `x = (alpha + beta (-y)^(c1/2))^(1/k)`
/// or `y = -(alpha + beta x^k)^(2/c1)`.
#[derive(Debug, Clone, Copy)]
struct CharCurve {
    x_of_y: bool,
    alpha: f64,
    beta: f64,
    k: i64,
    c1: f64,
}

impl CharCurve {
    fn point(&self, s: f64) -> Point {
        if self.x_of_y {
            let w = self.alpha + self.beta * (-s).max(0.0).powf(self.c1 / 2.0);
            Point::new(signed_pow(w, 1, self.k).unwrap_or(f64::NAN), s)
        } else {
            let w = self.alpha + self.beta * s.powi(self.k as i32);
            Point::new(s, -w.max(0.0).powf(2.0 / self.c1))
        }
    }

    /// Derivative with respect to the natural parameter.
    fn derivative(&self, s: f64) -> Vec2 {
        if self.x_of_y {
            let t = (-s).max(0.0);
            let w = self.alpha + self.beta * t.powf(self.c1 / 2.0);
            let dw = -self.beta * (self.c1 / 2.0) * t.powf(self.c1 / 2.0 - 1.0);
            let dx_dw = if self.k == 1 {
                1.0
            } else {
                signed_pow(w, 1, self.k).unwrap_or(f64::NAN) / (self.k as f64 * w)
            };
            Vec2::new(dx_dw * dw, 1.0)
        } else {
            let w = self.alpha + self.beta * s.powi(self.k as i32);
            let dw = self.beta * self.k as f64 * s.powi(self.k as i32 - 1);
            let dy_dw = -(2.0 / self.c1) * w.max(0.0).powf(2.0 / self.c1 - 1.0);
            Vec2::new(1.0, dy_dw * dw)
        }
    }
}

/// One of the four domains, immutable after construction.
#[derive(Debug, Clone)]
pub struct DomainSpec {
    variant: Variant,
    params: OperatorParams,
    anchor: f64,
    sigma: Sigma,
    apex: Point,
    rule: ParityRule,
}

/// Serializable description of a domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSummary {
    pub variant: Variant,
    pub m1: u32,
    pub m2: u32,
    pub anchor: f64,
    pub sigma: String,
    pub parity_rule: String,
}

fn closed_form_apex(variant: Variant, params: OperatorParams, anchor: f64) -> Point {
    let c = params.coefficients();
    let (c1, c2) = (c.c1 as f64, c.c2 as f64);
    let k = (c.c2 / 2) as i32;
    match variant {
        Variant::Omega1 | Variant::Omega2 => {
            let sign = if variant == Variant::Omega1 { -1.0 } else { 1.0 };
            let inner = sign * 0.5 * (c1 / c2) * (2.0 * anchor).powi(k);
            let yc = -inner.powf(2.0 / c1);
            Point::new(0.5f64.powf(2.0 / c2) * 2.0 * anchor, yc)
        }
        Variant::Omega3 | Variant::Omega4 => {
            let xc = (0.5 * (c2 / c1) * (-2.0 * anchor).powf(c1 / 2.0)).powf(2.0 / c2);
            Point::new(xc, 0.5f64.powf(2.0 / c1) * 2.0 * anchor)
        }
    }
}

/// Apex of the characteristic triangle, validating parity and anchor sign.
pub(crate) fn apex_of(variant: Variant, params: OperatorParams, anchor: f64) -> Result<Point> {
    params.check_parity(variant)?;
    check_anchor(variant, anchor)?;
    Ok(closed_form_apex(variant, params, anchor))
}

fn check_anchor(variant: Variant, anchor: f64) -> Result<()> {
    let (ok, expected) = match variant {
        Variant::Omega1 => (anchor < 0.0, "x0 < 0"),
        Variant::Omega2 => (anchor > 0.0, "x0 > 0"),
        Variant::Omega3 | Variant::Omega4 => (anchor < 0.0, "y0 < 0"),
    };
    if ok && anchor.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidAnchor { variant, anchor, expected })
    }
}

impl DomainSpec {
    /// Domain with the default arc: the half-circle on the chord `AB`
    /// (`Omega4` gets the segment `x = 0`).
    pub fn new(variant: Variant, params: OperatorParams, anchor: f64) -> Result<Self> {
        Self::with_semi_axis(variant, params, anchor, anchor.abs())
    }

    /// Domain whose arc is the half-ellipse on the chord `AB` with the given
    /// semi-axis perpendicular to the chord.
    pub fn with_semi_axis(variant: Variant, params: OperatorParams, anchor: f64, free_axis: f64) -> Result<Self> {
        let apex = apex_of(variant, params, anchor)?;
        let h = anchor.abs();
        let sigma = match variant {
            Variant::Omega1 | Variant::Omega2 => {
                Sigma::Ellipse(EllipticArc::new(Point::new(anchor, 0.0), h, free_axis, 0.0)?)
            }
            Variant::Omega3 => Sigma::Ellipse(EllipticArc::new(Point::new(0.0, anchor), free_axis, h, PI / 2.0)?),
            Variant::Omega4 => Sigma::Segment { from: Point::new(0.0, 0.0), to: Point::new(0.0, 2.0 * anchor) },
        };
        Ok(Self { variant, params, anchor, sigma, apex, rule: ParityRule::for_variant(variant) })
    }

    /// Start and end of the counterclockwise arc.
    pub fn sigma_endpoints(&self) -> (Point, Point) {
        if self.variant == Variant::Omega2 {
            (self.corner_a(), self.corner_b())
        } else {
            (self.corner_b(), self.corner_a())
        }
    }

    /// Replaces the arc, checking its endpoints.
    pub fn with_sigma(mut self, sigma: Sigma) -> Result<Self> {
        if self.variant == Variant::Omega4 && !matches!(sigma, Sigma::Segment { .. }) {
            return Err(Error::InvalidConfig("Omega4 is closed by the segment x = 0".into()));
        }
        let scale = 1.0 + self.anchor.abs();
        let (p0, p1) = (sigma.point(0.0), sigma.point(1.0));
        let (b, a) = self.sigma_endpoints();
        if p0.dist(b) > 1e-12 * scale || p1.dist(a) > 1e-12 * scale {
            return Err(Error::InvalidConfig(format!(
                "arc must run counterclockwise from ({}, {}) to ({}, {}); got ({}, {}) -> ({}, {})",
                b.x, b.y, a.x, a.y, p0.x, p0.y, p1.x, p1.y
            )));
        }
        self.sigma = sigma;
        Ok(self)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn params(&self) -> OperatorParams {
        self.params
    }

    pub fn coefficients(&self) -> Coefficients {
        self.params.coefficients()
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn sigma(&self) -> &Sigma {
        &self.sigma
    }

    /// The parity hypothesis this domain was validated against.
    pub fn parity_rule(&self) -> ParityRule {
        self.rule
    }

    pub fn corner_a(&self) -> Point {
        if self.variant.sliced_in_y() {
            Point::new(2.0 * self.anchor, 0.0)
        } else {
            Point::new(0.0, 2.0 * self.anchor)
        }
    }

    pub fn corner_b(&self) -> Point {
        Point::new(0.0, 0.0)
    }

    /// The apex `C` where the two characteristics meet.
    pub fn apex(&self) -> Point {
        let fresh = closed_form_apex(self.variant, self.params, self.anchor);
        debug_assert!(fresh.dist(self.apex) <= 1e-14 * (1.0 + self.apex.norm()));
        fresh
    }

    pub fn summary(&self) -> DomainSummary {
        DomainSummary {
            variant: self.variant,
            m1: self.params.m1,
            m2: self.params.m2,
            anchor: self.anchor,
            sigma: self.sigma.label(),
            parity_rule: self.rule.to_string(),
        }
    }

    fn char_curve(&self, id: BoundaryCurveId) -> CharCurve {
        let c = self.coefficients();
        let (c1, c2) = (c.c1 as f64, c.c2 as f64);
        let k = c.c2 / 2;
        let on_ac = id == BoundaryCurveId::AC;
        match self.variant {
            Variant::Omega1 | Variant::Omega2 => {
                let p = (2.0 * self.anchor).powi(k as i32);
                let r = c2 / c1;
                let dir = if self.variant == Variant::Omega1 { 1.0 } else { -1.0 };
                let (alpha, beta) = if on_ac { (p, dir * r) } else { (0.0, -dir * r) };
                CharCurve { x_of_y: true, alpha, beta, k, c1 }
            }
            Variant::Omega3 | Variant::Omega4 => {
                let a0 = (-2.0 * self.anchor).powf(c1 / 2.0);
                let rho = c1 / c2;
                let (alpha, beta) = if on_ac { (a0, -rho) } else { (0.0, rho) };
                CharCurve { x_of_y: false, alpha, beta, k, c1 }
            }
        }
    }

    /// Natural parameter interval of a boundary piece.
    pub fn param_range(&self, id: BoundaryCurveId) -> (f64, f64) {
        match id {
            BoundaryCurveId::Sigma => (0.0, 1.0),
            _ if self.variant.sliced_in_y() => (self.apex.y, 0.0),
            _ => (0.0, self.apex.x),
        }
    }

    /// Natural parameter of the apex on `AC` and `BC`.
    pub fn apex_param(&self) -> f64 {
        if self.variant.sliced_in_y() {
            self.apex.y
        } else {
            self.apex.x
        }
    }

    fn check_range(&self, id: BoundaryCurveId, s: f64) -> Result<f64> {
        let (lo, hi) = self.param_range(id);
        let slack = 1e-14 * (1.0 + lo.abs() + hi.abs());
        if !(s.is_finite() && s >= lo - slack && s <= hi + slack) {
            return Err(Error::OutOfRange { what: format!("{id} parameter on {}", self.variant), value: s, lo, hi });
        }
        Ok(s.clamp(lo, hi))
    }

    pub fn curve_point(&self, id: BoundaryCurveId, s: f64) -> Result<Point> {
        let s = self.check_range(id, s)?;
        Ok(match id {
            BoundaryCurveId::Sigma => self.sigma.point(s),
            _ => self.char_curve(id).point(s),
        })
    }

    /// Derivative of [`curve_point`](Self::curve_point) in the natural parameter.
    pub fn curve_derivative(&self, id: BoundaryCurveId, s: f64) -> Result<Vec2> {
        let s = self.check_range(id, s)?;
        Ok(match id {
            BoundaryCurveId::Sigma => self.sigma.derivative(s),
            _ => self.char_curve(id).derivative(s),
        })
    }

    /// `+1` when increasing the natural parameter moves counterclockwise.
    fn natural_orientation(&self, id: BoundaryCurveId) -> f64 {
        use BoundaryCurveId::*;
        match (self.variant, id) {
            (_, Sigma) => 1.0,
            (Variant::Omega1, AC) => -1.0,
            (Variant::Omega1, BC) => 1.0,
            (Variant::Omega2, AC) => 1.0,
            (Variant::Omega2, BC) => -1.0,
            (_, AC) => 1.0,
            (_, BC) => -1.0,
        }
    }

    fn check_interior(&self, id: BoundaryCurveId, s: f64) -> Result<f64> {
        let s = self.check_range(id, s)?;
        let (lo, hi) = self.param_range(id);
        let eps = 1e-13 * (1.0 + lo.abs() + hi.abs());
        if s - lo <= eps || hi - s <= eps {
            return Err(Error::CornerPoint { id, s });
        }
        Ok(s)
    }

    /// Unit tangent in the counterclockwise direction.
    pub fn unit_tangent(&self, id: BoundaryCurveId, s: f64) -> Result<Vec2> {
        let s = self.check_interior(id, s)?;
        Ok((self.curve_derivative(id, s)? * self.natural_orientation(id)).normalized())
    }

    /// Unit outward normal, the counterclockwise tangent rotated by -90 degrees.
    pub fn outward_normal(&self, id: BoundaryCurveId, s: f64) -> Result<Vec2> {
        Ok(self.unit_tangent(id, s)?.rot_cw())
    }

    /// Residual of `-y^m1 dy^2 - x^m2 dx^2 = 0` along a characteristic, using the unit tangent.
    pub fn char_ode_residual(&self, id: BoundaryCurveId, s: f64) -> Result<f64> {
        if id == BoundaryCurveId::Sigma {
            return Err(Error::InvalidConfig("the characteristic equation applies to AC and BC only".into()));
        }
        let t = self.unit_tangent(id, s)?;
        let p = self.curve_point(id, s)?;
        Ok(super::char_ode_residual_along(self.params, p, t))
    }

    /// Boundary piece on `[0, 1]` for quadrature.
    ///
    /// Characteristics run from `A` or `B` (t = 0) to `C` (t = 1). With grading
    /// on, the natural parameter is `s_c t^g` with `g = c2` (y-sliced) or
    /// `g = c1` (x-sliced), which turns the fractional powers along `BC` into
    /// polynomials in `t`.
    pub fn piece(&self, id: BoundaryCurveId, graded: bool) -> Piece {
        if id == BoundaryCurveId::Sigma {
            let sigma = self.sigma.clone();
            return Piece::new("Sigma", Some(id), move |t| (sigma.point(t), sigma.derivative(t)));
        }
        let curve = self.char_curve(id);
        let g = self.grade_exponent(graded);
        let sc = self.apex_param();
        let orient = self.natural_orientation(id);
        Piece::new(id.to_string(), Some(id), move |t| {
            let s = sc * t.powi(g);
            let ds = (sc * g as f64 * t.powi(g - 1)).abs();
            (curve.point(s), curve.derivative(s) * (ds * orient))
        })
    }

    fn grade_exponent(&self, graded: bool) -> i32 {
        if !graded {
            1
        } else if self.variant.sliced_in_y() {
            self.coefficients().c2 as i32
        } else {
            self.coefficients().c1 as i32
        }
    }

    /// Patch over the hyperbolic triangle `A C B`, sliced along the natural axis.
    pub fn triangle_patch(&self, graded: bool) -> Patch {
        let ac = self.char_curve(BoundaryCurveId::AC);
        let bc = self.char_curve(BoundaryCurveId::BC);
        let g = self.grade_exponent(graded);
        let sc = self.apex_param();
        let in_y = self.variant.sliced_in_y();
        Patch::new("triangle", move |u, v| {
            let s = sc * u.powi(g);
            let ds = (sc * g as f64 * u.powi(g - 1)).abs();
            let (pa, pb) = (ac.point(s), bc.point(s));
            if in_y {
                let w = pb.x - pa.x;
                (Point::new(pa.x + v * w, s), w.abs() * ds)
            } else {
                let w = pb.y - pa.y;
                (Point::new(s, pa.y + v * w), w.abs() * ds)
            }
        })
    }

    /// Center of the fan used to integrate the cap between the chord `AB` and `sigma`.
    pub fn cap_center(&self) -> Point {
        match &self.sigma {
            Sigma::Ellipse(e) => e.center,
            _ => (self.corner_a() + self.corner_b()) * 0.5,
        }
    }

    /// Patch over the cap, as a fan `c + rho (sigma(s) - c)`; `None` for `Omega4`.
    pub fn cap_patch(&self) -> Option<Patch> {
        if self.variant == Variant::Omega4 {
            return None;
        }
        let c = self.cap_center();
        let sigma = self.sigma.clone();
        Some(Patch::new("cap", move |rho, s| {
            let r = sigma.point(s) - c;
            let dr = sigma.derivative(s);
            (c + r * rho, rho * r.cross(dr))
        }))
    }
}

impl Region for DomainSpec {
    fn patches(&self, graded: bool) -> Vec<Patch> {
        let mut out = vec![self.triangle_patch(graded)];
        out.extend(self.cap_patch());
        out
    }

    fn pieces(&self, graded: bool) -> Vec<Piece> {
        BoundaryCurveId::ALL.iter().map(|&id| self.piece(id, graded)).collect()
    }

    fn label(&self) -> String {
        format!(
            "{} (m1 = {}, m2 = {}, anchor = {})",
            self.variant, self.params.m1, self.params.m2, self.anchor
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BoundaryCurveId::{AC, BC};

    const P14: OperatorParams = OperatorParams::new(1, 4);

    fn omega1() -> DomainSpec {
        DomainSpec::new(Variant::Omega1, P14, -0.5).unwrap()
    }

    #[test]
    fn apex_examples() {
        let c = omega1().apex();
        assert!((c.x + 0.793_700_525_984_099_7).abs() < 1e-12);
        assert!((c.y + 0.396_850_262_992_049_9).abs() < 1e-12);
        let c3 = DomainSpec::new(Variant::Omega3, P14, -0.5).unwrap().apex();
        assert!((c3.x - 1.0).abs() < 1e-12 && (c3.y + 0.629_960_524_947_436_6).abs() < 1e-12);
        assert!(matches!(
            DomainSpec::new(Variant::Omega1, OperatorParams::new(1, 2), -0.5),
            Err(Error::ParityViolation { .. })
        ));
        assert!(matches!(DomainSpec::new(Variant::Omega2, P14, -0.5), Err(Error::InvalidAnchor { .. })));
    }

    #[test]
    fn curve_point_examples() {
        let d = omega1();
        let p = d.curve_point(BC, -0.25).unwrap();
        assert!((p.x + 0.629_960_524_947_436_6).abs() < 1e-12);
        assert_eq!(d.curve_point(AC, 0.0).unwrap(), Point::new(-1.0, 0.0));
        let yc = d.apex().y;
        assert!(d.curve_point(AC, yc).unwrap().dist(d.apex()) < 1e-12);
        assert!(d.curve_point(BC, yc).unwrap().dist(d.apex()) < 1e-12);
        assert!(matches!(d.curve_point(BC, 0.1), Err(Error::OutOfRange { .. })));
        assert!(matches!(d.curve_point(BoundaryCurveId::Sigma, 1.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn normal_examples() {
        let d = omega1();
        let n = d.outward_normal(BC, -0.25).unwrap();
        // un-normalized (1, -x^(-m2/2) (-y)^(m1/2)) with x^(-2) computed on the real branch
        let x = d.curve_point(BC, -0.25).unwrap().x;
        let raw = Vec2::new(1.0, -x.powi(-2) * 0.25f64.sqrt()).normalized();
        assert!(n.dist(raw) < 1e-12);
        assert!((n.x - 0.6214).abs() < 5e-4 && (n.y + 0.7835).abs() < 5e-4);
        for y in [-0.05, -0.2, -0.35] {
            assert!(d.outward_normal(AC, y).unwrap().x < 0.0);
        }
        let top = d.outward_normal(BoundaryCurveId::Sigma, 0.5).unwrap();
        assert!(top.dist(Vec2::new(0.0, 1.0)) < 1e-12);
        assert!(matches!(d.outward_normal(BC, 0.0), Err(Error::CornerPoint { .. })));
        assert!(matches!(d.outward_normal(AC, d.apex().y), Err(Error::CornerPoint { .. })));
    }

    #[test]
    fn characteristic_residuals_vanish() {
        for v in Variant::ALL {
            let anchor = if v == Variant::Omega2 { 0.5 } else { -0.5 };
            let d = DomainSpec::new(v, P14, anchor).unwrap();
            let (lo, hi) = d.param_range(AC);
            for i in 1..50 {
                let s = lo + (hi - lo) * i as f64 / 50.0;
                for id in [AC, BC] {
                    assert!(d.char_ode_residual(id, s).unwrap().abs() < 1e-12, "{v} {id} {s}");
                }
            }
        }
    }

    #[test]
    fn endpoints_interpolate_corners() {
        for (v, params, anchor) in [
            (Variant::Omega1, P14, -0.5),
            (Variant::Omega1, OperatorParams::new(1, 0), -0.7),
            (Variant::Omega2, OperatorParams::new(1, 2), 0.5),
            (Variant::Omega3, OperatorParams::new(3, 2), -0.4),
            (Variant::Omega4, P14, -0.5),
        ] {
            let d = DomainSpec::new(v, params, anchor).unwrap();
            assert!(d.curve_point(AC, 0.0).unwrap().dist(d.corner_a()) < 1e-12);
            assert!(d.curve_point(BC, 0.0).unwrap().dist(d.corner_b()) < 1e-12);
            let sc = d.apex_param();
            assert!(d.curve_point(AC, sc).unwrap().dist(d.apex()) < 1e-12);
            assert!(d.curve_point(BC, sc).unwrap().dist(d.apex()) < 1e-12);
            let (start, end) = d.sigma_endpoints();
            assert!(d.curve_point(BoundaryCurveId::Sigma, 0.0).unwrap().dist(start) < 1e-14);
            assert!(d.curve_point(BoundaryCurveId::Sigma, 1.0).unwrap().dist(end) < 1e-14);
        }
    }

    #[test]
    fn pieces_are_counterclockwise_and_continuous() {
        for v in Variant::ALL {
            let anchor = if v == Variant::Omega2 { 0.5 } else { -0.5 };
            let d = DomainSpec::new(v, P14, anchor).unwrap();
            for graded in [false, true] {
                let pieces = d.pieces(graded);
                // signed area via the shoelace form of (1/2) x dy - y dx on a fine sampling
                let mut area = 0.0;
                for piece in &pieces {
                    let n = 4000;
                    for i in 0..n {
                        let t = (i as f64 + 0.5) / n as f64;
                        let (p, tan) = piece.eval(t);
                        area += 0.5 * p.cross(tan) / n as f64;
                    }
                }
                assert!(area > 0.0, "{v} graded={graded} area {area}");
            }
        }
    }

    #[test]
    fn rejects_misplaced_arc() {
        let d = omega1();
        let bad = Sigma::Segment { from: Point::new(0.0, 0.0), to: Point::new(-0.9, 0.0) };
        assert!(d.clone().with_sigma(bad).is_err());
        let flat = Sigma::Segment { from: Point::new(0.0, 0.0), to: Point::new(-1.0, 0.0) };
        assert!(d.with_sigma(flat).is_ok());
    }
}
