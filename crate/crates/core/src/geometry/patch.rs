//! Parameterized area patches and boundary pieces consumed by the quadrature module.

use std::fmt;
use std::sync::Arc;

use super::{BoundaryCurveId, Point, Vec2};

type PatchFn = dyn Fn(f64, f64) -> (Point, f64) + Send + Sync;
type PieceFn = dyn Fn(f64) -> (Point, Vec2) + Send + Sync;

/// A map from the unit square onto part of a region, returning the image point
/// and the (nonnegative) area Jacobian.
#[derive(Clone)]
pub struct Patch {
    pub label: String,
    map: Arc<PatchFn>,
}

impl Patch {
    pub fn new(label: impl Into<String>, map: impl Fn(f64, f64) -> (Point, f64) + Send + Sync + 'static) -> Self {
        Self { label: label.into(), map: Arc::new(map) }
    }

    #[inline]
    pub fn eval(&self, u: f64, v: f64) -> (Point, f64) {
        (self.map)(u, v)
    }
}

impl fmt::Debug for Patch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Patch").field("label", &self.label).finish()
    }
}

/// A boundary curve parameterized over `[0, 1]`, returning the point and the
/// tangent `dP/dt` in the counterclockwise direction of the enclosing region.
///
/// The outward normal differential is `eta ds = (dy, -dx) = tangent.rot_cw() dt`.
#[derive(Clone)]
pub struct Piece {
    pub label: String,
    pub id: Option<BoundaryCurveId>,
    map: Arc<PieceFn>,
}

impl Piece {
    pub fn new(
        label: impl Into<String>,
        id: Option<BoundaryCurveId>,
        map: impl Fn(f64) -> (Point, Vec2) + Send + Sync + 'static,
    ) -> Self {
        Self { label: label.into(), id, map: Arc::new(map) }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> (Point, Vec2) {
        (self.map)(t)
    }

    /// Point and `eta ds / dt`.
    #[inline]
    pub fn eval_normal(&self, t: f64) -> (Point, Vec2) {
        let (p, tan) = (self.map)(t);
        (p, tan.rot_cw())
    }
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Piece").field("label", &self.label).field("id", &self.id).finish()
    }
}

/// Anything the quadrature module can integrate over.
pub trait Region: Sync {
    /// Patches covering the region without overlap.
    fn patches(&self, graded: bool) -> Vec<Patch>;
    /// Pieces forming the counterclockwise boundary.
    fn pieces(&self, graded: bool) -> Vec<Piece>;
    fn label(&self) -> String;
}

/// Axis-aligned rectangle; patches are split at the coordinate axes so that
/// weights like `|y|^m` stay smooth on each patch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rectangle {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        assert!(x0 < x1 && y0 < y1, "rectangle needs x0 < x1 and y0 < y1");
        Self { x0, x1, y0, y1 }
    }

    pub fn unit() -> Self {
        Self::new(0.0, 1.0, 0.0, 1.0)
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    fn breaks(lo: f64, hi: f64) -> Vec<f64> {
        if lo < 0.0 && hi > 0.0 {
            vec![lo, 0.0, hi]
        } else {
            vec![lo, hi]
        }
    }
}

impl Region for Rectangle {
    fn patches(&self, _graded: bool) -> Vec<Patch> {
        let xs = Self::breaks(self.x0, self.x1);
        let ys = Self::breaks(self.y0, self.y1);
        let mut out = Vec::new();
        for wx in xs.windows(2) {
            for wy in ys.windows(2) {
                let (a, b, c, d) = (wx[0], wx[1], wy[0], wy[1]);
                let jac = (b - a) * (d - c);
                out.push(Patch::new("box", move |u, v| (Point::new(a + (b - a) * u, c + (d - c) * v), jac)));
            }
        }
        out
    }

    fn pieces(&self, _graded: bool) -> Vec<Piece> {
        let c = [
            Point::new(self.x0, self.y0),
            Point::new(self.x1, self.y0),
            Point::new(self.x1, self.y1),
            Point::new(self.x0, self.y1),
        ];
        (0..4)
            .map(|i| {
                let (p, q) = (c[i], c[(i + 1) % 4]);
                Piece::new(format!("edge{i}"), None, move |t| (p + (q - p) * t, q - p))
            })
            .collect()
    }

    fn label(&self) -> String {
        format!("[{}, {}] x [{}, {}]", self.x0, self.x1, self.y0, self.y1)
    }
}
