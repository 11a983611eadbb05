//! Numerical verification toolkit for the degenerate mixed-type operator
//! `O u = -y^m1 u_xx - x^m2 u_yy` on Tricomi domains.
//!
//! The crate is organised bottom-up: [`params`] holds the exponent pair and
//! its exact coefficients, [`geometry`] the four domain families, [`field`] the
//! differentiable scalar fields and pointwise operators, [`quad`] the area and
//! boundary quadrature, and [`identities`] the integral identities and
//! inequalities checked on manufactured fields.

pub mod error;
pub mod field;
pub mod geometry;
pub mod identities;
pub mod params;
pub mod quad;
pub mod real;

pub use error::{Error, Result};
