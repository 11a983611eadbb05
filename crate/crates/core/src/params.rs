//! Exponent pair, derived coefficients and the critical exponent.
//!
//! All coefficient arithmetic is exact: integers or [`Rational`], converted to
//! `f64` only at the use sites.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::Variant;

pub type Rational = Ratio<i64>;

/// Exponents of the operator `-y^m1 d_xx - x^m2 d_yy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OperatorParams {
    pub m1: u32,
    pub m2: u32,
}

/// Integer coefficients derived from `(m1, m2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coefficients {
    /// x-weight of the dilation generator, `m1 + 2`.
    pub c1: i64,
    /// y-weight of the dilation generator, `m2 + 2`.
    pub c2: i64,
    /// Scaling exponent of the weighted gradient norm, `m1 + m2 + m1*m2`.
    pub mu: i64,
    /// Scaling exponent of volume, `m1 + m2 + 4`.
    pub kappa: i64,
}

impl Coefficients {
    /// Pohozaev multiplier `mu / 2`.
    pub fn c(&self) -> Rational {
        Rational::new(self.mu, 2)
    }

    pub fn c_f64(&self) -> f64 {
        self.mu as f64 / 2.0
    }
}

impl OperatorParams {
    pub const fn new(m1: u32, m2: u32) -> Self {
        Self { m1, m2 }
    }

    pub fn coefficients(&self) -> Coefficients {
        let (m1, m2) = (self.m1 as i64, self.m2 as i64);
        Coefficients {
            c1: m1 + 2,
            c2: m2 + 2,
            mu: m1 + m2 + m1 * m2,
            kappa: m1 + m2 + 4,
        }
    }

    fn mu_checked(&self) -> Result<i64> {
        let mu = self.coefficients().mu;
        if mu == 0 {
            Err(Error::DegenerateDenominator { m1: self.m1, m2: self.m2 })
        } else {
            Ok(mu)
        }
    }

    /// `2*(m1, m2) = (2(m1 + m2) + 8) / (m1 + m2 + m1*m2)`.
    pub fn critical_exponent(&self) -> Result<Rational> {
        let mu = self.mu_checked()?;
        let (m1, m2) = (self.m1 as i64, self.m2 as i64);
        Ok(Rational::new(2 * (m1 + m2) + 8, mu))
    }

    /// Power-nonlinearity threshold `(m1 + m2 - m1*m2 + 8) / (m1 + m2 + m1*m2)`,
    /// equal to `critical_exponent - 1`.
    pub fn supercritical_threshold(&self) -> Result<Rational> {
        let mu = self.mu_checked()?;
        let (m1, m2) = (self.m1 as i64, self.m2 as i64);
        Ok(Rational::new(m1 + m2 - m1 * m2 + 8, mu))
    }

    pub fn check_parity(&self, variant: Variant) -> Result<ParityRule> {
        let rule = ParityRule::for_variant(variant);
        if rule.admits(*self) {
            Ok(rule)
        } else {
            Err(Error::ParityViolation { variant, rule, m1: self.m1, m2: self.m2 })
        }
    }
}

/// Admissibility rule on `(m1, m2)`; the strictest published condition per domain variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParityRule {
    /// `m1` odd and `m2 / 2` an even integer.
    OddM1M2MultipleOfFour,
    /// `m1` odd and `m2 / 2` an integer.
    OddM1EvenM2,
}

impl ParityRule {
    pub fn for_variant(variant: Variant) -> Self {
        match variant {
            Variant::Omega1 => Self::OddM1M2MultipleOfFour,
            Variant::Omega2 | Variant::Omega3 | Variant::Omega4 => Self::OddM1EvenM2,
        }
    }

    pub fn admits(&self, p: OperatorParams) -> bool {
        let odd_m1 = p.m1 % 2 == 1;
        match self {
            Self::OddM1M2MultipleOfFour => odd_m1 && p.m2.is_multiple_of(4),
            Self::OddM1EvenM2 => odd_m1 && p.m2.is_multiple_of(2),
        }
    }
}

impl fmt::Display for ParityRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OddM1M2MultipleOfFour => write!(f, "m1 odd and m2/2 even (m2 divisible by 4)"),
            Self::OddM1EvenM2 => write!(f, "m1 odd and m2/2 a natural number (m2 even)"),
        }
    }
}

/// Nonlinearity `f` together with its primitive `F`, `F(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Nonlinearity {
    /// `f(s) = s`.
    Linear,
    /// `f(s) = s^3`.
    Cubic,
    /// `f(s) = s |s|^(alpha - 1)`, `F(s) = |s|^(alpha + 1) / (alpha + 1)`.
    Power { alpha: f64 },
}

impl Nonlinearity {
    pub fn f(&self, s: f64) -> f64 {
        match *self {
            Self::Linear => s,
            Self::Cubic => s * s * s,
            Self::Power { alpha } => s * s.abs().powf(alpha - 1.0),
        }
    }

    /// Primitive `F` with `F(0) = 0`.
    pub fn primitive(&self, s: f64) -> f64 {
        match *self {
            Self::Linear => 0.5 * s * s,
            Self::Cubic => 0.25 * s.powi(4),
            Self::Power { alpha } => s.abs().powf(alpha + 1.0) / (alpha + 1.0),
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            Self::Linear => Some(1.0),
            Self::Cubic => Some(3.0),
            Self::Power { alpha } => Some(alpha),
        }
    }

    /// `F(u)` as an expression tree; the power form goes through an `|.|^gamma` node.
    pub fn primitive_field(&self, u: &ScalarField) -> Result<ScalarField> {
        Ok(match *self {
            Self::Linear => u.powi(2) * 0.5,
            Self::Cubic => u.powi(4) * 0.25,
            Self::Power { alpha } => ScalarField::abs_pow(u.clone(), alpha + 1.0)? * (1.0 / (alpha + 1.0)),
        })
    }

    pub fn label(&self) -> String {
        match *self {
            Self::Linear => "s".into(),
            Self::Cubic => "s^3".into(),
            Self::Power { alpha } => format!("s|s|^{}", alpha - 1.0),
        }
    }

    /// Checks `F(0) = 0` and `F' = f` by central differences at the given samples.
    pub fn validate(&self, samples: &[f64]) -> Result<()> {
        if let Self::Power { alpha } = *self {
            if !(alpha >= 1.0 && alpha.is_finite()) {
                return Err(Error::InvalidConfig(format!("power nonlinearity needs alpha >= 1, got {alpha}")));
            }
        }
        if self.primitive(0.0) != 0.0 {
            return Err(Error::PreconditionViolated("F(0) != 0".into()));
        }
        let h = 1e-5;
        for &s in samples {
            let fd = (self.primitive(s + h) - self.primitive(s - h)) / (2.0 * h);
            let exact = self.f(s);
            if (fd - exact).abs() > 1e-6 * (1.0 + exact.abs()) {
                return Err(Error::PreconditionViolated(format!(
                    "F' != f at s = {s}: finite difference {fd}, f = {exact}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
