//! One-dimensional Hardy–Sobolev machinery on the characteristic `BC`.
//!
//! With `e1 = (m1 + 2 m2 + m1 m2 + 2)/(m2 + 2)` and `e2 = (m1 + m1 m2 - 2)/(m2 + 2)`
//! the weights on `(y_c, 0)` are `v(t) = (-t)^e1` and `w(t) = (-t)^e2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{SampleFn1D, ScalarField};
use crate::params::{OperatorParams, Rational};
use crate::quad::{integrate_interval, Grading, QuadConfig};

const GRID_POINTS: usize = 10_000;
/// Decades spanned by the logarithmic grid toward `x = 0`.
const GRID_DECADES: f64 = 32.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyParams {
    pub params: OperatorParams,
    pub p: f64,
    pub q: f64,
    pub p_conj: f64,
    pub q_conj: f64,
    /// Interval `(a, b) = (y_c, 0)`.
    pub a: f64,
    pub b: f64,
}

fn mu_of(params: OperatorParams) -> Result<f64> {
    let mu = params.coefficients().mu;
    if mu == 0 {
        return Err(Error::DegenerateDenominator { m1: params.m1, m2: params.m2 });
    }
    Ok(mu as f64)
}

fn exponents(params: OperatorParams) -> (f64, f64) {
    let (m1, m2) = (params.m1 as f64, params.m2 as f64);
    let c2 = m2 + 2.0;
    ((m1 + 2.0 * m2 + m1 * m2 + 2.0) / c2, (m1 + m1 * m2 - 2.0) / c2)
}

impl HardyParams {
    pub fn new(params: OperatorParams, p: f64, q: f64, y_c: f64) -> Result<Self> {
        if !(p > 1.0 && p <= q && q.is_finite()) {
            return Err(Error::InvalidConfig(format!("Hardy exponents need 1 < p <= q < inf, got p = {p}, q = {q}")));
        }
        if !(y_c < 0.0 && y_c.is_finite()) {
            return Err(Error::InvalidConfig(format!("Hardy interval needs y_c < 0, got {y_c}")));
        }
        Ok(Self { params, p, q, p_conj: p / (p - 1.0), q_conj: q / (q - 1.0), a: y_c, b: 0.0 })
    }

    /// `p = q = 2` on `(y_c, 0)`.
    pub fn quadratic(params: OperatorParams, y_c: f64) -> Result<Self> {
        Self::new(params, 2.0, 2.0, y_c)
    }

    pub fn v(&self, t: f64) -> f64 {
        (-t).powf(exponents(self.params).0)
    }

    pub fn w(&self, t: f64) -> f64 {
        (-t).powf(exponents(self.params).1)
    }

    fn is_quadratic(&self) -> bool {
        self.p == 2.0 && self.q == 2.0
    }

    fn require_quadratic(&self) -> Result<()> {
        if self.is_quadratic() {
            Ok(())
        } else {
            Err(Error::InvalidConfig("closed-form Hardy constants are available for p = q = 2 only".into()))
        }
    }
}

fn check_x(y_c: f64, x: f64) -> Result<()> {
    if !(y_c < 0.0 && x >= y_c && x <= 0.0) {
        return Err(Error::OutOfRange { what: "G_L argument".into(), value: x, lo: y_c, hi: 0.0 });
    }
    Ok(())
}

/// Closed form `(c2/mu) [1 - (-y_c)^(-mu/c2) (-x)^(mu/c2)]^(1/2)` for `p = q = 2`.
pub fn hardy_gl(params: OperatorParams, y_c: f64, x: f64) -> Result<f64> {
    check_x(y_c, x)?;
    let mu = mu_of(params)?;
    let c2 = params.coefficients().c2 as f64;
    let ratio = (-x / -y_c).powf(mu / c2);
    Ok(c2 / mu * (1.0 - ratio).max(0.0).sqrt())
}

/// `G_L(x) = (∫_x^0 w)^(1/q) (∫_{y_c}^x v^(1 - p'))^(1/p')` by quadrature.
pub fn hardy_gl_numeric(hp: &HardyParams, x: f64, cfg: &QuadConfig) -> Result<f64> {
    check_x(hp.a, x)?;
    if x == hp.a || x == hp.b {
        return Ok(0.0);
    }
    let (e1, e2) = exponents(hp.params);
    let c2 = hp.params.coefficients().c2 as u32;
    let w_int = integrate_interval(|t| Ok((-t).powf(e2)), x, hp.b, Grading::Right(c2), cfg)?;
    let v_pow = e1 * (1.0 - hp.p_conj);
    let v_int = integrate_interval(|t| Ok((-t).powf(v_pow)), hp.a, x, Grading::None, cfg)?;
    Ok(w_int.powf(1.0 / hp.q) * v_int.powf(1.0 / hp.p_conj))
}

/// `(x, G_L(x))` on `n` equally spaced interior points of `(y_c, 0)`.
pub fn hardy_gl_table(params: OperatorParams, y_c: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    (1..=n)
        .map(|i| {
            let x = y_c * (1.0 - i as f64 / (n + 1) as f64);
            Ok((x, hardy_gl(params, y_c, x)?))
        })
        .collect()
}

/// `r(p, q) = (1 + q/p')^(1/q) (1 + p'/q)^(1/q')`, evaluated in log space.
pub fn hardy_r(p: f64, q: f64) -> f64 {
    let pc = p / (p - 1.0);
    let qc = q / (q - 1.0);
    ((q / pc).ln_1p() / q + (pc / q).ln_1p() / qc).exp()
}

/// Exact value of `r(p, q)` when `q = p'`, where it equals `2^(1/q + 1/q') = 2`.
pub fn hardy_r_exact(p: Rational, q: Rational) -> Option<Rational> {
    let one = Rational::from_integer(1);
    if p <= one || q < p {
        return None;
    }
    (q == p / (p - one)).then(|| Rational::from_integer(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyConstants {
    /// `sup G_L = c2/mu`.
    pub m_l: f64,
    pub r: f64,
    /// Bounds `M_L <= C_L <= r M_L` on the best constant.
    pub c_l_low: f64,
    pub c_l_high: f64,
    /// Constant used in the argument, `2 c2/mu`.
    pub c_l: f64,
    /// Maximum of the closed-form `G_L` over a logarithmic grid reaching toward 0.
    pub grid_sup: f64,
}

pub fn hardy_constants(hp: &HardyParams) -> Result<HardyConstants> {
    hp.require_quadratic()?;
    let mu = mu_of(hp.params)?;
    let c2 = hp.params.coefficients().c2 as f64;
    let m_l = c2 / mu;
    let r = hardy_r(hp.p, hp.q);
    let mut grid_sup = 0.0f64;
    for i in 0..GRID_POINTS {
        let x = hp.a * 10f64.powf(-GRID_DECADES * i as f64 / (GRID_POINTS - 1) as f64);
        grid_sup = grid_sup.max(hardy_gl(hp.params, hp.a, x)?);
    }
    Ok(HardyConstants { m_l, r, c_l_low: m_l, c_l_high: r * m_l, c_l: 2.0 * c2 / mu, grid_sup })
}

/// Checks `M_L <= 2 c2/mu = r(2,2) M_L` in exact rationals; false when `mu = 0`.
pub fn equivalence_chain(params: OperatorParams) -> bool {
    let c = params.coefficients();
    if c.mu == 0 {
        return false;
    }
    let two = Rational::from_integer(2);
    let Some(r) = hardy_r_exact(two, two) else {
        return false;
    };
    let m_l = Rational::new(c.c2, c.mu);
    let c_l = Rational::new(2 * c.c2, c.mu);
    m_l <= c_l && c_l == r * m_l
}

fn require_zero(phi: &SampleFn1D, t: f64, what: &str) -> Result<()> {
    let v = phi.value(t)?;
    if v.abs() > 1e-12 {
        return Err(Error::PreconditionViolated(format!("phi({t}) = {v} but must vanish at {what}")));
    }
    Ok(())
}

/// `I = 2 c2 A ∫ v (phi')^2 - (mu^2 / (2 c2)) A ∫ w phi^2` on `(y_c, 0)`, with `A = |c2/c1|^(m2/(m2+2))`.
pub fn boundary_energy_i(params: OperatorParams, y_c: f64, phi: &SampleFn1D, cfg: &QuadConfig) -> Result<f64> {
    require_zero(phi, y_c, "the apex end y_c")?;
    require_zero(phi, 0.0, "the origin")?;
    let co = params.coefficients();
    let (c1, c2, mu) = (co.c1 as f64, co.c2 as f64, co.mu as f64);
    let a = (c2 / c1).powf(params.m2 as f64 / c2);
    let (e1, e2) = exponents(params);
    let grading = Grading::Right(co.c2 as u32);
    let dv = integrate_interval(|t| Ok((-t).powf(e1) * phi.derivative(t)?.powi(2)), y_c, 0.0, grading, cfg)?;
    let w = integrate_interval(|t| Ok((-t).powf(e2) * phi.value(t)?.powi(2)), y_c, 0.0, grading, cfg)?;
    Ok(2.0 * c2 * a * dv - mu * mu / (2.0 * c2) * a * w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyCheck {
    /// `[∫ w |phi|^q]^(1/q)`.
    pub lhs: f64,
    /// `C_L [∫ v |phi'|^p]^(1/p)`.
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Verifies the weighted inequality with `C_L = 2 c2/mu`; `holds` tolerates `1e-10`.
pub fn hardy_inequality_check(hp: &HardyParams, phi: &SampleFn1D, cfg: &QuadConfig) -> Result<HardyCheck> {
    hp.require_quadratic()?;
    require_zero(phi, hp.a, "the left end y_c")?;
    let mu = mu_of(hp.params)?;
    let co = hp.params.coefficients();
    let c_l = 2.0 * co.c2 as f64 / mu;
    let (e1, e2) = exponents(hp.params);
    let grading = Grading::Right(co.c2 as u32);
    let w = integrate_interval(|t| Ok((-t).powf(e2) * phi.value(t)?.abs().powf(hp.q)), hp.a, hp.b, grading, cfg)?;
    let v =
        integrate_interval(|t| Ok((-t).powf(e1) * phi.derivative(t)?.abs().powf(hp.p)), hp.a, hp.b, grading, cfg)?;
    let lhs = w.powf(1.0 / hp.q);
    let rhs = c_l * v.powf(1.0 / hp.p);
    Ok(HardyCheck { lhs, rhs, slack: rhs - lhs, holds: lhs - rhs <= 1e-10 })
}

/// Seeded random trial functions `(t - y_c) [(-t)] P(t)` with `P` a cubic with
/// coefficients in `[-1, 1]`; the factor `(-t)` is included when `both_ends`.
pub fn random_trial_functions(y_c: f64, n: usize, seed: u64, both_ends: bool) -> Result<Vec<SampleFn1D>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = ScalarField::x();
    (0..n)
        .map(|_| {
            let mut poly = ScalarField::constant(rng.gen_range(-1.0..1.0));
            for k in 1..=3 {
                poly = poly + t.powi(k) * rng.gen_range(-1.0..1.0);
            }
            let mut phi = (t.clone() - y_c) * poly;
            if both_ends {
                phi = phi * (-t.clone());
            }
            SampleFn1D::new(phi, y_c, 0.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const P14: OperatorParams = OperatorParams::new(1, 4);

    fn yc14() -> f64 {
        -(0.25f64).powf(2.0 / 3.0)
    }

    #[test]
    fn gl_limits() {
        let yc = yc14();
        assert!(hardy_gl(P14, yc, yc * (1.0 - 1e-15)).unwrap() < 1e-6);
        assert_eq!(hardy_gl(P14, yc, yc).unwrap(), 0.0);
        assert!((hardy_gl(P14, yc, -1e-300).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(hardy_gl(P14, yc, 0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn gl_closed_form_matches_integral_product() {
        let yc = yc14();
        let hp = HardyParams::quadratic(P14, yc).unwrap();
        let x = yc / 2.0;
        let closed = hardy_gl(P14, yc, x).unwrap();
        let numeric = hardy_gl_numeric(&hp, x, &QuadConfig::default()).unwrap();
        assert!((closed - numeric).abs() < 1e-9, "{closed} vs {numeric}");
        let p10 = OperatorParams::new(1, 0);
        let hp = HardyParams::quadratic(p10, -0.4).unwrap();
        let closed = hardy_gl(p10, -0.4, -0.1).unwrap();
        let numeric = hardy_gl_numeric(&hp, -0.1, &QuadConfig::default()).unwrap();
        assert!((closed - numeric).abs() < 1e-9, "{closed} vs {numeric}");
    }

    #[test]
    fn constants_for_fixture() {
        let hp = HardyParams::quadratic(P14, yc14()).unwrap();
        let k = hardy_constants(&hp).unwrap();
        assert!((k.m_l - 2.0 / 3.0).abs() < 1e-15);
        assert!((k.r - 2.0).abs() < 1e-15);
        assert!((k.c_l_high - 4.0 / 3.0).abs() < 1e-15);
        assert!((k.grid_sup - 2.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn r_values() {
        assert_eq!(hardy_r_exact(Rational::from_integer(2), Rational::from_integer(2)), Some(Rational::from_integer(2)));
        assert_eq!(hardy_r_exact(Rational::new(3, 2), Rational::from_integer(3)), Some(Rational::from_integer(2)));
        assert_eq!(hardy_r_exact(Rational::from_integer(2), Rational::from_integer(3)), None);
        assert!((hardy_r(1.5, 3.0) - 2.0).abs() < 1e-14);
        // p = q = 3: p' = 3/2, r = 3^(1/3) (3/2)^(2/3)
        let expected = 3f64.powf(1.0 / 3.0) * 1.5f64.powf(2.0 / 3.0);
        assert!((hardy_r(3.0, 3.0) - expected).abs() < 1e-14);
    }

    #[test]
    fn chain_examples() {
        assert!(equivalence_chain(P14));
        assert!(equivalence_chain(OperatorParams::new(1, 0)));
        assert!(equivalence_chain(OperatorParams::new(3, 8)));
        assert!(!equivalence_chain(OperatorParams::new(0, 0)));
    }

    #[test]
    fn energy_of_quadratic_trial() {
        let yc = yc14();
        let t = ScalarField::x();
        let phi = SampleFn1D::new(-t.clone() * (t - yc), yc, 0.0).unwrap();
        let i = boundary_energy_i(P14, yc, &phi, &QuadConfig::default()).unwrap();
        assert!(i > 0.0, "{i}");
        let zero = SampleFn1D::new(ScalarField::zero(), yc, 0.0).unwrap();
        assert_eq!(boundary_energy_i(P14, yc, &zero, &QuadConfig::default()).unwrap(), 0.0);
    }

    #[test]
    fn energy_requires_both_zeros() {
        let yc = yc14();
        let phi = SampleFn1D::new(ScalarField::x() - yc, yc, 0.0).unwrap();
        let r = boundary_energy_i(P14, yc, &phi, &QuadConfig::default());
        assert!(matches!(r, Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn inequality_with_root_trial() {
        let yc = yc14();
        let t = ScalarField::x();
        let phi = SampleFn1D::new((-t.clone()).root_pow(3, 2).unwrap() * (t - yc), yc, 0.0).unwrap();
        let hp = HardyParams::quadratic(P14, yc).unwrap();
        let chk = hardy_inequality_check(&hp, &phi, &QuadConfig::default()).unwrap();
        assert!(chk.holds && chk.slack > 0.0, "{chk:?}");
        let zero = SampleFn1D::new(ScalarField::zero(), yc, 0.0).unwrap();
        let chk = hardy_inequality_check(&hp, &zero, &QuadConfig::default()).unwrap();
        assert_eq!((chk.lhs, chk.rhs), (0.0, 0.0));
    }

    #[test]
    fn random_trials_are_deterministic() {
        let a = random_trial_functions(-0.4, 3, 42, true).unwrap();
        let b = random_trial_functions(-0.4, 3, 42, true).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|f| f.value(0.0).unwrap().abs() < 1e-15));
    }
}
