use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::jet::Jet2;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::real::signed_pow;

/// Node of a scalar expression tree over `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    X,
    Y,
    Add(ScalarField, ScalarField),
    Sub(ScalarField, ScalarField),
    Mul(ScalarField, ScalarField),
    Div(ScalarField, ScalarField),
    Neg(ScalarField),
    PowI(ScalarField, i32),
    /// Real-branch rational power `e^(p/q)`; `q` odd whenever `e` may be negative.
    Root(ScalarField, i64, i64),
    /// `|e|^gamma` with `gamma > 2`, twice differentiable everywhere.
    AbsPow(ScalarField, f64),
}

/// Immutable, cheaply clonable expression tree for a scalar function of `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField(Arc<Node>);

impl ScalarField {
    fn node(n: Node) -> Self {
        Self(Arc::new(n))
    }

    pub fn constant(c: f64) -> Self {
        Self::node(Node::Const(c))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn x() -> Self {
        Self::node(Node::X)
    }

    pub fn y() -> Self {
        Self::node(Node::Y)
    }

    pub fn kind(&self) -> &Node {
        &self.0
    }

    pub fn as_constant(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn powi(&self, n: i32) -> Self {
        match (n, self.as_constant()) {
            (0, _) => Self::constant(1.0),
            (1, _) => self.clone(),
            (_, Some(c)) => Self::constant(c.powi(n)),
            _ => Self::node(Node::PowI(self.clone(), n)),
        }
    }

    /// Real-branch power `self^(p/q)`.
    pub fn root_pow(&self, p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(Error::Domain(format!("root exponent denominator must be positive, got {q}")));
        }
        let g = gcd(p.unsigned_abs(), q as u64) as i64;
        let (p, q) = (p / g, q / g);
        if q == 1 {
            return Ok(self.powi(p as i32));
        }
        Ok(Self::node(Node::Root(self.clone(), p, q)))
    }

    /// `|e|^gamma`; requires `gamma > 2` so the second-order jet exists at `e = 0`.
    pub fn abs_pow(e: Self, gamma: f64) -> Result<Self> {
        if !(gamma > 2.0 && gamma.is_finite()) {
            return Err(Error::Domain(format!("|.|^gamma node needs gamma > 2, got {gamma}")));
        }
        Ok(Self::node(Node::AbsPow(e, gamma)))
    }

    pub fn value(&self, p: Point) -> Result<f64> {
        let v = match &*self.0 {
            Node::Const(c) => *c,
            Node::X => p.x,
            Node::Y => p.y,
            Node::Add(a, b) => a.value(p)? + b.value(p)?,
            Node::Sub(a, b) => a.value(p)? - b.value(p)?,
            Node::Mul(a, b) => a.value(p)? * b.value(p)?,
            Node::Div(a, b) => {
                let den = b.value(p)?;
                if den == 0.0 {
                    return Err(Error::Domain(format!("division by zero at ({}, {})", p.x, p.y)));
                }
                a.value(p)? / den
            }
            Node::Neg(a) => -a.value(p)?,
            Node::PowI(a, n) => {
                let s = a.value(p)?;
                if s == 0.0 && *n < 0 {
                    return Err(Error::Domain(format!("0^{n} at ({}, {})", p.x, p.y)));
                }
                s.powi(*n)
            }
            Node::Root(a, num, den) => {
                let s = a.value(p)?;
                signed_pow(s, *num, *den)
                    .ok_or_else(|| Error::Domain(format!("({s})^({num}/{den}) has no real value")))?
            }
            Node::AbsPow(a, g) => a.value(p)?.abs().powf(*g),
        };
        Ok(v)
    }

    /// Value and derivatives through order two at `p`.
    pub fn jet2(&self, p: Point) -> Result<Jet2> {
        self.jet_at(Jet2::var_x(p.x), Jet2::var_y(p.y))
    }

    /// Evaluates the tree with `x` and `y` replaced by the given jets.
    ///
    /// This composes the field with an arbitrary twice-differentiable map.
    pub fn jet_at(&self, x: Jet2, y: Jet2) -> Result<Jet2> {
        let j = match &*self.0 {
            Node::Const(c) => Jet2::constant(*c),
            Node::X => x,
            Node::Y => y,
            Node::Add(a, b) => a.jet_at(x, y)? + b.jet_at(x, y)?,
            Node::Sub(a, b) => a.jet_at(x, y)? - b.jet_at(x, y)?,
            Node::Mul(a, b) => a.jet_at(x, y)? * b.jet_at(x, y)?,
            Node::Div(a, b) => {
                let den = b.jet_at(x, y)?;
                if den.u == 0.0 {
                    return Err(Error::Domain(format!("division by zero at ({}, {})", x.u, y.u)));
                }
                a.jet_at(x, y)? / den
            }
            Node::Neg(a) => -a.jet_at(x, y)?,
            Node::PowI(a, n) => {
                let s = a.jet_at(x, y)?;
                if s.u == 0.0 && *n < 0 {
                    return Err(Error::Domain(format!("0^{n} at ({}, {})", x.u, y.u)));
                }
                s.powi(*n)
            }
            Node::Root(a, num, den) => {
                let s = a.jet_at(x, y)?;
                let e = *num as f64 / *den as f64;
                let g = signed_pow(s.u, *num, *den)
                    .ok_or_else(|| Error::Domain(format!("({})^({num}/{den}) has no real value", s.u)))?;
                if s.u == 0.0 {
                    if e < 2.0 {
                        return Err(Error::Domain(format!(
                            "({num}/{den}) power is not twice differentiable at 0"
                        )));
                    }
                    s.chain(0.0, 0.0, 0.0)
                } else {
                    s.chain(g, e * g / s.u, e * (e - 1.0) * g / (s.u * s.u))
                }
            }
            Node::AbsPow(a, gamma) => {
                let s = a.jet_at(x, y)?;
                let m = s.u.abs();
                let g = m.powf(*gamma);
                let g1 = gamma * s.u.signum() * m.powf(gamma - 1.0);
                let g2 = gamma * (gamma - 1.0) * m.powf(gamma - 2.0);
                if s.u == 0.0 {
                    s.chain(0.0, 0.0, 0.0)
                } else {
                    s.chain(g, g1, g2)
                }
            }
        };
        Ok(j)
    }

    /// New tree with `x` and `y` replaced by the given expressions.
    pub fn substitute(&self, xs: &ScalarField, ys: &ScalarField) -> ScalarField {
        match &*self.0 {
            Node::Const(_) => self.clone(),
            Node::X => xs.clone(),
            Node::Y => ys.clone(),
            Node::Add(a, b) => a.substitute(xs, ys) + b.substitute(xs, ys),
            Node::Sub(a, b) => a.substitute(xs, ys) - b.substitute(xs, ys),
            Node::Mul(a, b) => a.substitute(xs, ys) * b.substitute(xs, ys),
            Node::Div(a, b) => a.substitute(xs, ys) / b.substitute(xs, ys),
            Node::Neg(a) => -a.substitute(xs, ys),
            Node::PowI(a, n) => a.substitute(xs, ys).powi(*n),
            Node::Root(a, p, q) => Self::node(Node::Root(a.substitute(xs, ys), *p, *q)),
            Node::AbsPow(a, g) => Self::node(Node::AbsPow(a.substitute(xs, ys), *g)),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match &*self.0 {
            Node::Const(_) | Node::X | Node::Y => 1,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => 1 + a.size() + b.size(),
            Node::Neg(a) | Node::PowI(a, _) | Node::Root(a, _, _) | Node::AbsPow(a, _) => 1 + a.size(),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl From<f64> for ScalarField {
    fn from(c: f64) -> Self {
        Self::constant(c)
    }
}

impl Add for ScalarField {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        match (self.as_constant(), o.as_constant()) {
            (Some(a), Some(b)) => Self::constant(a + b),
            (Some(0.0), _) => o,
            (_, Some(0.0)) => self,
            _ => Self::node(Node::Add(self, o)),
        }
    }
}

impl Sub for ScalarField {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        match (self.as_constant(), o.as_constant()) {
            (Some(a), Some(b)) => Self::constant(a - b),
            (_, Some(0.0)) => self,
            _ => Self::node(Node::Sub(self, o)),
        }
    }
}

impl Mul for ScalarField {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        match (self.as_constant(), o.as_constant()) {
            (Some(a), Some(b)) => Self::constant(a * b),
            (Some(1.0), _) => o,
            (_, Some(1.0)) => self,
            _ => Self::node(Node::Mul(self, o)),
        }
    }
}

impl Div for ScalarField {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        match (self.as_constant(), o.as_constant()) {
            (Some(a), Some(b)) if b != 0.0 => Self::constant(a / b),
            (_, Some(1.0)) => self,
            _ => Self::node(Node::Div(self, o)),
        }
    }
}

impl Neg for ScalarField {
    type Output = Self;
    fn neg(self) -> Self {
        match self.as_constant() {
            Some(c) => Self::constant(-c),
            None => Self::node(Node::Neg(self)),
        }
    }
}

impl Add<f64> for ScalarField {
    type Output = Self;
    fn add(self, c: f64) -> Self {
        self + Self::constant(c)
    }
}

impl Sub<f64> for ScalarField {
    type Output = Self;
    fn sub(self, c: f64) -> Self {
        self - Self::constant(c)
    }
}

impl Mul<f64> for ScalarField {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Self::constant(c) * self
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => write!(f, "{c:?}"),
            Node::X => f.write_str("x"),
            Node::Y => f.write_str("y"),
            Node::Add(a, b) => write!(f, "(+ {a} {b})"),
            Node::Sub(a, b) => write!(f, "(- {a} {b})"),
            Node::Mul(a, b) => write!(f, "(* {a} {b})"),
            Node::Div(a, b) => write!(f, "(/ {a} {b})"),
            Node::Neg(a) => write!(f, "(- {a})"),
            Node::PowI(a, n) => write!(f, "(^ {a} {n})"),
            Node::Root(a, p, q) => write!(f, "(root {a} {p} {q})"),
            Node::AbsPow(a, g) => write!(f, "(abspow {a} {g:?})"),
        }
    }
}
