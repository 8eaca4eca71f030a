use rug::ops::Pow;

use super::*;
use crate::numerics::set_precision;

fn ctx(d: u32) -> Ctx {
    set_precision(Precision::new(d).unwrap()).unwrap()
}

fn check(case: IdentityCase, c: &Ctx, max_rel: f64) -> VerificationRecord {
    let r = verify(&case, &Tolerances::for_ctx(c), c);
    assert_eq!(r.status, Status::Pass, "{case}: {:?}", r.reason);
    let rel = r.rel_err.as_ref().unwrap().to_f64();
    let abs = r.abs_err.as_ref().unwrap().to_f64();
    assert!(rel < max_rel || abs < max_rel, "{case}: rel {rel:e} abs {abs:e}");
    r
}

fn grid(id: IdentityId, c: &Ctx, max_rel: f64) {
    for case in describe(id).default_grid() {
        check(case, c, max_rel);
    }
}

#[test]
fn catalog_lists_every_id_once() {
    let cat = catalog();
    assert_eq!(cat.len(), 29);
    for (d, id) in cat.iter().zip(IdentityId::ALL) {
        assert_eq!(d.id, *id);
        assert!(!d.name.is_empty());
        assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), *id);
    }
    assert_eq!("t2".parse::<IdentityId>().unwrap(), IdentityId::T2);
    assert!("T10".parse::<IdentityId>().is_err());
    assert!("".parse::<IdentityId>().is_err());
}

#[test]
fn lambert_identities() {
    let c = ctx(30);
    for id in [IdentityId::R1, IdentityId::R2, IdentityId::R3, IdentityId::R4, IdentityId::R5, IdentityId::R6, IdentityId::R7] {
        grid(id, &c, 1e-30);
    }
}

#[test]
fn n_relation_for_lambert_series() {
    let c = ctx(30);
    grid(IdentityId::R8, &c, 1e-30);
}

#[test]
fn koshliakov_evaluations() {
    let c = ctx(30);
    grid(IdentityId::K1, &c, 1e-30);
    grid(IdentityId::K2, &c, 1e-30);
}

#[test]
fn footnote_value_is_rejected() {
    let c = ctx(30);
    let r = verify(&IdentityCase::new(IdentityId::K2).form(Form::Footnote), &Tolerances::for_ctx(&c), &c);
    assert_eq!(r.status, Status::Fail);
    assert!(r.rel_err.unwrap() > 1e-3);
}

#[test]
fn squared_zeta_transformations() {
    let c = ctx(30);
    for id in [IdentityId::T1, IdentityId::L1, IdentityId::T4, IdentityId::T5, IdentityId::T6] {
        grid(id, &c, 1e-28);
    }
}

#[test]
fn shifted_transformations() {
    let c = ctx(30);
    for id in [IdentityId::T2, IdentityId::T3] {
        grid(id, &c, 1e-28);
    }
}

#[test]
fn limiting_corollaries() {
    let c = ctx(30);
    for id in [
        IdentityId::C1,
        IdentityId::C2,
        IdentityId::C3,
        IdentityId::C4,
        IdentityId::C5,
        IdentityId::C6,
        IdentityId::C7,
        IdentityId::C8,
        IdentityId::C9,
    ] {
        grid(id, &c, 1e-25);
    }
}

#[test]
fn c5_overlap_uses_zero_branch() {
    let c = ctx(30);
    check(IdentityCase::new(IdentityId::C5).m(-3).ell(1), &c, 1e-28);
    let r = verify(&IdentityCase::new(IdentityId::C5).m(1).ell(1), &Tolerances::for_ctx(&c), &c);
    assert_eq!(r.status, Status::Skipped);
}

#[test]
fn general_n_h_and_even_relation() {
    let c = ctx(30);
    check(higher::balanced_case(IdentityCase::new(IdentityId::T8).n(2).h(3)), &c, 1e-28);
    check(higher::balanced_case(IdentityCase::new(IdentityId::T9).n(2).m(1)), &c, 1e-28);
    let r = verify(&IdentityCase::new(IdentityId::T8).n(3).h(2), &Tolerances::for_ctx(&c), &c);
    assert_eq!(r.status, Status::Skipped);
}

#[test]
fn odd_relation_at_n_one_is_t1() {
    let c = ctx(30);
    let tol = Tolerances::for_ctx(&c);
    for m in [1, -2] {
        let t7 = evaluate(&IdentityCase::new(IdentityId::T7).n(1).m(m).t(1.3), &tol, &c).unwrap();
        let t1 = evaluate(&IdentityCase::new(IdentityId::T1).m(m).t(1.3), &tol, &c).unwrap();
        let gap = Complex::with_val(c.bits(), &t7.lhs - &t1.lhs).abs().real().to_f64();
        assert!(gap < 1e-28, "m = {m}: {gap:e}");
        let gap = Complex::with_val(c.bits(), &t7.rhs - &t1.rhs).abs().real().to_f64();
        assert!(gap < 1e-28, "m = {m}: {gap:e}");
    }
}

#[test]
fn symmetry_defect_is_small() {
    let c = ctx(30);
    let case = IdentityCase::new(IdentityId::T2).t(1.3).m(-2).z(0.5, 0.25);
    let s = alpha_beta_symmetry_check(&case, &Tolerances::for_ctx(&c), &c).unwrap();
    assert!(s.defect < 1e-28);
    assert!(alpha_beta_symmetry_check(&IdentityCase::new(IdentityId::T1), &Tolerances::for_ctx(&c), &c).is_err());
}

#[test]
fn t2_approaches_t1_as_z_shrinks() {
    let c = ctx(30);
    let (t1_res, steps) = t1_limit_trend(1.3, 1, &[2, 4, 6], &Tolerances::for_ctx(&c), &c).unwrap();
    assert!(t1_res < 1e-28);
    for w in steps.windows(2) {
        assert!(w[1].lhs_gap < w[0].lhs_gap);
    }
    assert!(steps.iter().all(|s| s.t2_residual < 1e-25));
}

#[test]
fn excluded_parameters_are_skipped() {
    let c = ctx(30);
    let tol = Tolerances::for_ctx(&c);
    for case in [
        IdentityCase::new(IdentityId::T2).m(1).z(3.0, 0.0),
        IdentityCase::new(IdentityId::T2).m(1).z(2.0, 0.0),
        IdentityCase::new(IdentityId::T2).m(1),
        IdentityCase::new(IdentityId::R1).m(0),
        IdentityCase::new(IdentityId::R5).m(2),
        IdentityCase::new(IdentityId::T7).n(2).m(1),
    ] {
        let r = verify(&case, &tol, &c);
        assert_eq!(r.status, Status::Skipped, "{case}");
        assert!(r.reason.is_some());
    }
}

#[test]
fn balanced_scale_keeps_product_constraint() {
    let c = ctx(20);
    let case = higher::balanced_case(IdentityCase::new(IdentityId::T7).n(3).m(1));
    assert!(case.t < 1.0);
    let (a, b) = case.alpha_beta(&c).unwrap();
    let prod = a * b.pow(3u32) / c.pi().pow(4u32);
    assert!((prod.to_f64() - 1.0).abs() < 1e-15);
}

#[test]
fn t4_at_pi_reduces_to_k1() {
    // m = 2k+1 at alpha = beta = pi: both terms on each side add, giving 2 pi^(2m) times K1 at k.
    let c = ctx(30);
    let tol = Tolerances::for_ctx(&c);
    let t4 = evaluate(&IdentityCase::new(IdentityId::T4).m(3).t(1.0), &tol, &c).unwrap();
    let k1 = evaluate(&IdentityCase::new(IdentityId::K1).m(1), &tol, &c).unwrap();
    let scale = Complex::with_val(c.bits(), (c.pi().pow(6u32) * 2u32, 0));
    for (a, b) in [(&t4.lhs, &k1.lhs), (&t4.rhs, &k1.rhs)] {
        let gap = Complex::with_val(c.bits(), a - Complex::with_val(c.bits(), b * &scale)).abs().real().to_f64();
        let size = Complex::with_val(c.bits(), a.abs_ref()).real().to_f64();
        assert!(gap < 1e-28 * size, "{gap:e} vs {size:e}");
    }
}
