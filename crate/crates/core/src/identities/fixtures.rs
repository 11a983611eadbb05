//! Standard verification fixtures: the four domains with manufactured fields.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{manufactured, ScalarField, VanishOn};
use crate::geometry::{DomainSpec, Variant};
use crate::params::OperatorParams;

/// Sort key of a fixture; reports are ordered by it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FixtureKey {
    pub variant: Variant,
    pub m1: u32,
    pub m2: u32,
    pub seed: usize,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub key: FixtureKey,
    pub domain: DomainSpec,
    pub u: ScalarField,
    pub label: String,
}

/// Default domain with anchor magnitude `scale`; the sign follows the variant.
pub fn fixture_domain(variant: Variant, params: OperatorParams, scale: f64) -> Result<DomainSpec> {
    let anchor = if variant == Variant::Omega2 { scale.abs() } else { -scale.abs() };
    DomainSpec::new(variant, params, anchor)
}

/// The seed polynomials multiplying the vanishing factors.
pub fn fixture_seeds() -> Vec<(&'static str, ScalarField)> {
    let (x, y) = (ScalarField::x(), ScalarField::y());
    vec![
        ("1", ScalarField::constant(1.0)),
        ("1 + x/2 - y + x*y", ScalarField::constant(1.0) + x.clone() * 0.5 - y.clone() + x * y),
    ]
}

impl Fixture {
    /// `G_AC * S_sigma * seed`, vanishing on `AC` and on sigma.
    pub fn manufactured(variant: Variant, params: OperatorParams, scale: f64, seed: usize) -> Result<Self> {
        let domain = fixture_domain(variant, params, scale)?;
        let seeds = fixture_seeds();
        let (name, s) = &seeds[seed % seeds.len()];
        let u = manufactured(&domain, VanishOn::AcAndSigma, s)?;
        Ok(Self {
            key: FixtureKey { variant, m1: params.m1, m2: params.m2, seed: seed % seeds.len() },
            domain,
            u,
            label: format!("G_AC*S_sigma*({name})"),
        })
    }

    /// The full matrix for one parameter pair: every variant times every seed.
    pub fn matrix(params: OperatorParams, scale: f64) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for v in Variant::ALL {
            for seed in 0..fixture_seeds().len() {
                out.push(Self::manufactured(v, params, scale, seed)?);
            }
        }
        out.sort_by_key(|f| f.key);
        Ok(out)
    }
}
