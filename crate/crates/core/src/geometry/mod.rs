//! Tricomi domains, their characteristic boundary curves and the dilation flow.

mod domain;
mod export;
mod patch;
mod star;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub use domain::{DomainSpec, DomainSummary, EllipticArc, ParametricArc, Sigma};
pub use export::{boundary_csv, boundary_samples, boundary_svg, BoundarySample};
pub use patch::{Patch, Piece, Rectangle, Region};
pub use star::{
    char_ode_residual_along, check_starshaped, flow, starlike_form, BoundaryPolygon, StarlikeReport,
};

/// A point or vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

pub type Point = Vec2;

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(self) -> Self {
        self * (1.0 / self.norm())
    }

    /// Rotation by -90 degrees: maps a counterclockwise tangent to the outward normal.
    pub fn rot_cw(self) -> Self {
        Self::new(self.y, -self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }
}

impl Add for Vec2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(k * self.x, k * self.y)
    }
}

/// The four domain families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    /// Anchor `x0 < 0`; corners `A = (2 x0, 0)`, `B = (0, 0)`, elliptic cap above `y = 0`.
    Omega1,
    /// Mirror image of `Omega1` with `x0 > 0`.
    Omega2,
    /// Anchor `y0 < 0`; corners `A = (0, 2 y0)`, `B = (0, 0)`, arc to the left of `x = 0`.
    Omega3,
    /// The characteristic triangle of `Omega3`, closed by the segment `x = 0`.
    Omega4,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Omega1, Variant::Omega2, Variant::Omega3, Variant::Omega4];

    /// Whether characteristics are parameterized by `y` (true) or by `x`.
    pub fn sliced_in_y(&self) -> bool {
        matches!(self, Variant::Omega1 | Variant::Omega2)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::Omega1 => "Omega1",
            Variant::Omega2 => "Omega2",
            Variant::Omega3 => "Omega3",
            Variant::Omega4 => "Omega4",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "omega1" | "1" => Ok(Variant::Omega1),
            "omega2" | "2" => Ok(Variant::Omega2),
            "omega3" | "3" => Ok(Variant::Omega3),
            "omega4" | "4" => Ok(Variant::Omega4),
            _ => Err(format!("unknown domain variant '{s}' (expected omega1..omega4)")),
        }
    }
}

/// The three boundary pieces: two characteristics meeting at the apex, and the closing arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum BoundaryCurveId {
    AC,
    BC,
    Sigma,
}

impl BoundaryCurveId {
    pub const ALL: [BoundaryCurveId; 3] = [BoundaryCurveId::AC, BoundaryCurveId::BC, BoundaryCurveId::Sigma];
}

impl fmt::Display for BoundaryCurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundaryCurveId::AC => "AC",
            BoundaryCurveId::BC => "BC",
            BoundaryCurveId::Sigma => "Sigma",
        };
        f.write_str(s)
    }
}
