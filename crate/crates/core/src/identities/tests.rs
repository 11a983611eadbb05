use super::*;
use crate::field::{manufactured, SampleFn1D, VanishOn};
use crate::params::OperatorParams;

const P14: OperatorParams = OperatorParams::new(1, 4);
const CUBIC: Nonlinearity = Nonlinearity::Cubic;
const POWER3: Nonlinearity = Nonlinearity::Power { alpha: 3.0 };

fn domain(v: Variant) -> DomainSpec {
    fixture_domain(v, P14, 0.5).unwrap()
}

fn seed() -> ScalarField {
    ScalarField::constant(1.0) + ScalarField::x() * 0.5 - ScalarField::y()
}

#[test]
fn omega_forms_zero_field() {
    let r = omega_forms(P14, &ScalarField::zero(), CUBIC, Point::new(-0.3, 0.2), Vec2::new(0.6, 0.8)).unwrap();
    assert_eq!(r, (0.0, 0.0));
}

#[test]
fn omega1_vanishes_on_ac() {
    let d = domain(Variant::Omega1);
    let u = manufactured(&d, VanishOn::AcOnly, &seed()).unwrap();
    let (lo, hi) = d.param_range(BoundaryCurveId::AC);
    for i in 1..20 {
        let s = lo + (hi - lo) * i as f64 / 20.0;
        let p = d.curve_point(BoundaryCurveId::AC, s).unwrap();
        let eta = d.outward_normal(BoundaryCurveId::AC, s).unwrap();
        let (w1, _) = omega_forms(P14, &u, CUBIC, p, eta).unwrap();
        assert!(w1.abs() < 1e-10, "{w1}");
    }
}

#[test]
fn omega_forms_hand_expansion() {
    // u = x + y: u_x = u_y = 1, Xu = (-y, -x^4), Du = -3x - 6y, E = y + x^4
    let (x, y) = (-0.4, 0.3);
    let eta = Vec2::new(0.28, -0.96);
    let u = ScalarField::x() + ScalarField::y();
    let (w1, w2) = omega_forms(P14, &u, CUBIC, Point::new(x, y), eta).unwrap();
    let du = -3.0 * x - 6.0 * y;
    let e = y + x.powi(4);
    let (vx, vy) = (-3.0 * x, -6.0 * y);
    let (xx, xy) = (-y, -x.powi(4));
    let uu: f64 = x + y;
    let big_f = uu.powi(4) / 4.0;
    let c = 4.5;
    let e1 = (2.0 * du * xx + e * vx) * eta.x + (2.0 * du * xy + e * vy) * eta.y;
    let e2 = (-2.0 * big_f * vx - 2.0 * c * uu * xx) * eta.x + (-2.0 * big_f * vy - 2.0 * c * uu * xy) * eta.y;
    assert!((w1 - e1).abs() < 1e-15 && (w2 - e2).abs() < 1e-15);
}

#[test]
fn zero_field_gives_exact_zeros() {
    for v in Variant::ALL {
        let d = domain(v);
        let ctx = IdentityContext::new(&d, &ScalarField::zero(), &[CUBIC]).unwrap();
        let cfg = QuadConfig::default();
        for r in [ctx.step1(&cfg).unwrap(), ctx.step2(CUBIC, &cfg).unwrap(), ctx.step3(&cfg).unwrap()] {
            assert_eq!((r.lhs, r.rhs, r.abs_err), (0.0, 0.0, 0.0));
            assert!(r.pass);
        }
        let p = ctx.pohozaev(CUBIC, &cfg).unwrap();
        assert_eq!((p.lhs, p.rhs, p.defect), (0.0, 0.0, Some(0.0)));
        assert_eq!(ctx.sigma_sign(&cfg).unwrap(), 0.0);
    }
}

#[test]
fn step1_on_ac_vanishing_field() {
    let d = domain(Variant::Omega1);
    let u = manufactured(&d, VanishOn::AcOnly, &seed()).unwrap();
    let r = step1_residual(&u, &d, &QuadConfig::default()).unwrap();
    assert!(r.rel_err <= 1e-6 && r.pass, "{r:?}");
    assert!(r.terms["omega1_sigma"].abs() > 1e-6);
}

#[test]
fn step1_rejects_non_vanishing_field() {
    let d = domain(Variant::Omega1);
    let r = step1_residual(&ScalarField::x(), &d, &QuadConfig::default());
    assert!(matches!(r, Err(Error::PreconditionViolated(_))));
}

#[test]
fn step2_both_nonlinearities() {
    let d = domain(Variant::Omega1);
    let u = manufactured(&d, VanishOn::AcAndSigma, &seed()).unwrap();
    let ctx = IdentityContext::new(&d, &u, &[CUBIC, POWER3]).unwrap();
    for nl in [CUBIC, POWER3] {
        let r = ctx.step2(nl, &QuadConfig::default()).unwrap();
        assert!(r.rel_err <= 1e-6, "{r:?}");
    }
    assert!(matches!(ctx.step2(Nonlinearity::Linear, &QuadConfig::default()), Err(Error::InvalidConfig(_))));
}

#[test]
fn step2_needs_sigma_vanishing() {
    let d = domain(Variant::Omega1);
    let u = manufactured(&d, VanishOn::AcOnly, &seed()).unwrap();
    let r = step2_residual(&u, CUBIC, &d, &QuadConfig::default());
    assert!(matches!(r, Err(Error::PreconditionViolated(_))));
}

#[test]
fn step3_on_omega1_and_omega3() {
    for v in [Variant::Omega1, Variant::Omega3] {
        let d = domain(v);
        let u = manufactured(&d, VanishOn::AcAndSigma, &seed()).unwrap();
        let r = step3_residual(&u, &d, &QuadConfig::default()).unwrap();
        assert!(r.rel_err <= 1e-6, "{v}: {r:?}");
        assert!(r.terms["uXu_bc"].abs() > 0.0);
    }
}

#[test]
fn pohozaev_defect_form() {
    let d = domain(Variant::Omega1);
    let u = manufactured(&d, VanishOn::AcAndSigma, &seed()).unwrap();
    let r = pohozaev_residual(&u, CUBIC, &d, &QuadConfig::default()).unwrap();
    assert!(r.rel_err <= 1e-6, "{r:?}");
    assert!(r.defect.unwrap().abs() > 1e-8, "defect should be nontrivial for a non-solution");
    let d4 = domain(Variant::Omega4);
    let u4 = manufactured(&d4, VanishOn::AcAndSigma, &seed()).unwrap();
    let r = pohozaev_residual(&u4, Nonlinearity::Linear, &d4, &QuadConfig::default()).unwrap();
    assert!(r.rel_err <= 1e-6, "{r:?}");
    assert!(r.note.is_some());
}

#[test]
fn sigma_sign_examples() {
    let cfg = QuadConfig::default();
    let d1 = domain(Variant::Omega1);
    let u1 = manufactured(&d1, VanishOn::AcAndSigma, &seed()).unwrap();
    assert!(sigma_boundary_sign(&u1, &d1, &cfg).unwrap() >= -1e-9);
    let d4 = domain(Variant::Omega4);
    let u4 = manufactured(&d4, VanishOn::AcAndSigma, &seed()).unwrap();
    assert_eq!(sigma_boundary_sign(&u4, &d4, &cfg).unwrap(), 0.0);
}

#[test]
fn sigma_form_equals_omega1_on_sigma() {
    let d = domain(Variant::Omega2);
    let u = manufactured(&d, VanishOn::AcAndSigma, &seed()).unwrap();
    let ctx = IdentityContext::new(&d, &u, &[CUBIC]).unwrap();
    let cfg = QuadConfig::default();
    let s = ctx.sigma_sign(&cfg).unwrap();
    let w = ctx.step1(&cfg).unwrap().terms["omega1_sigma"];
    assert!((s - w).abs() <= 1e-9 * (1.0 + s.abs()), "{s} vs {w}");
}

#[test]
fn bc_energy_matches_parameterized_functional() {
    let d = domain(Variant::Omega1);
    let u = manufactured(&d, VanishOn::AcAndSigma, &seed()).unwrap();
    let cfg = QuadConfig::default();
    let ctx = IdentityContext::new(&d, &u, &[]).unwrap();
    let curve = ctx.bc_energy(&cfg).unwrap();
    // Gamma(t) = ((-(c2/c1) (-t)^(c1/2))^(2/c2), t) with c1 = 3, c2 = 6
    let t = ScalarField::x();
    let xs = ((-t.clone()).root_pow(3, 2).unwrap() * -2.0).root_pow(1, 3).unwrap();
    let phi = SampleFn1D::new(u.substitute(&xs, &t), d.apex().y, 0.0).unwrap();
    let functional = boundary_energy_i(P14, d.apex().y, &phi, &cfg).unwrap();
    assert!((curve - functional).abs() <= 1e-7 * (1.0 + functional.abs()), "{curve} vs {functional}");
}

#[test]
fn ac_annihilation_on_fixture() {
    let d = domain(Variant::Omega3);
    let u = manufactured(&d, VanishOn::AcOnly, &seed()).unwrap();
    let (flux, energy) = ac_annihilation(&u, &d, 100).unwrap();
    assert!(flux <= 1e-10 && energy <= 1e-10, "{flux} {energy}");
}

#[test]
fn report_round_trips() {
    let d = domain(Variant::Omega4);
    let u = manufactured(&d, VanishOn::AcAndSigma, &seed()).unwrap();
    let r = pohozaev_residual(&u, CUBIC, &d, &QuadConfig::default()).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    let back: IdentityReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    for key in ["identity", "variant", "m1", "m2", "anchor", "field", "f", "lhs", "rhs", "defect", "quad", "pass"] {
        assert!(json.contains(&format!("\"{key}\"")), "{key}");
    }
}
