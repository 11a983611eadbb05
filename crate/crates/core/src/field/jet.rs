//! Second-order bivariate jets (truncated Taylor arithmetic).

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Value and all partial derivatives through order two of a function of `(x, y)`.
///
/// The mixed partial is stored once, so symmetry holds by construction.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Jet2 {
    pub u: f64,
    pub ux: f64,
    pub uy: f64,
    pub uxx: f64,
    pub uxy: f64,
    pub uyy: f64,
}

impl Jet2 {
    pub const fn constant(c: f64) -> Self {
        Self { u: c, ux: 0.0, uy: 0.0, uxx: 0.0, uxy: 0.0, uyy: 0.0 }
    }

    /// The coordinate function `x` seeded at `x`.
    pub const fn var_x(x: f64) -> Self {
        Self { u: x, ux: 1.0, uy: 0.0, uxx: 0.0, uxy: 0.0, uyy: 0.0 }
    }

    pub const fn var_y(y: f64) -> Self {
        Self { u: y, ux: 0.0, uy: 1.0, uxx: 0.0, uxy: 0.0, uyy: 0.0 }
    }

    /// Composes a scalar function `g` (given by `g(u)`, `g'(u)`, `g''(u)`) with this jet.
    #[inline]
    pub fn chain(self, g: f64, g1: f64, g2: f64) -> Self {
        Self {
            u: g,
            ux: g1 * self.ux,
            uy: g1 * self.uy,
            uxx: g2 * self.ux * self.ux + g1 * self.uxx,
            uxy: g2 * self.ux * self.uy + g1 * self.uxy,
            uyy: g2 * self.uy * self.uy + g1 * self.uyy,
        }
    }

    pub fn scale(self, k: f64) -> Self {
        Self {
            u: k * self.u,
            ux: k * self.ux,
            uy: k * self.uy,
            uxx: k * self.uxx,
            uxy: k * self.uxy,
            uyy: k * self.uyy,
        }
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(1.0),
            1 => self,
            2 => self * self,
            _ => {
                let v = self.u;
                let n_f = n as f64;
                self.chain(v.powi(n), n_f * v.powi(n - 1), n_f * (n_f - 1.0) * v.powi(n - 2))
            }
        }
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.u;
        self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }

    /// Entries as an array in the order `u, ux, uy, uxx, uxy, uyy`.
    pub fn to_array(self) -> [f64; 6] {
        [self.u, self.ux, self.uy, self.uxx, self.uxy, self.uyy]
    }
}

impl Add for Jet2 {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self {
            u: self.u + o.u,
            ux: self.ux + o.ux,
            uy: self.uy + o.uy,
            uxx: self.uxx + o.uxx,
            uxy: self.uxy + o.uxy,
            uyy: self.uyy + o.uyy,
        }
    }
}

impl Sub for Jet2 {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Jet2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for Jet2 {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self {
            u: self.u * o.u,
            ux: self.ux * o.u + self.u * o.ux,
            uy: self.uy * o.u + self.u * o.uy,
            uxx: self.uxx * o.u + 2.0 * self.ux * o.ux + self.u * o.uxx,
            uxy: self.uxy * o.u + self.ux * o.uy + self.uy * o.ux + self.u * o.uxy,
            uyy: self.uyy * o.u + 2.0 * self.uy * o.uy + self.u * o.uyy,
        }
    }
}

impl Div for Jet2 {
    type Output = Self;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Add<f64> for Jet2 {
    type Output = Self;
    fn add(mut self, c: f64) -> Self {
        self.u += c;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}
