//! Acceptance run: one PASS/FAIL line per criterion on stderr, then a single
//! assertion over all of them. The criteria run sequentially in one test so
//! their wall-clock limits are not distorted by sibling tests.

use std::io::Write;
use std::time::{Duration, Instant};

use rug::ops::Pow;
use rug::{Complex, Float};
use zeta_omega::arith::sigma;
use zeta_omega::identities::{
    alpha_beta_symmetry_check, describe, verify, Form, IdentityCase, IdentityId, Status, Tolerances, VerificationRecord,
};
use zeta_omega::mellin::{closed_form, line_integral, Kernel, LineIntegralSpec};
use zeta_omega::omega::{
    convolution_omega_sum, lambda_pm, omega, omega_pf_oracle, weighted_omega_sum_double, OmegaParams, SeriesBudget,
    Sign, Weight, XMap,
};
use zeta_omega::special::bessel::bessel_k;
use zeta_omega::special::zeta::{functional_equation_rhs, zeta, zeta_prime};
use zeta_omega::{set_precision, Ctx, Precision};

fn ctx(d: u32) -> Ctx {
    set_precision(Precision::new(d).unwrap()).unwrap()
}

fn say(line: &str) {
    // Written past the harness capture so the lines show on a passing run.
    let mut e = std::io::stderr().lock();
    let _ = writeln!(e, "{line}");
}

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { ok: true, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, note: String) {
        if !ok {
            self.ok = false;
            say(&format!("    miss: {note}"));
        }
        self.notes.push(note);
    }

    fn record(&mut self, r: &VerificationRecord, max_abs: Option<f64>, max_rel: Option<f64>) {
        let abs = r.abs_err.as_ref().map_or(f64::NAN, Float::to_f64);
        let rel = r.rel_err.as_ref().map_or(f64::NAN, Float::to_f64);
        let ok = r.status == Status::Pass && max_abs.is_none_or(|t| abs < t) && max_rel.is_none_or(|t| rel < t);
        self.check(ok, format!("{} {:?} abs {abs:.2e} rel {rel:.2e} {} ms", r.case, r.status, r.runtime_ms));
    }

    fn time(&mut self, label: &str, spent: Duration, limit: Duration) {
        self.check(spent < limit, format!("{label} {:.2} s (limit {} s)", spent.as_secs_f64(), limit.as_secs()));
    }
}

fn run(n: u32, title: &str, body: impl FnOnce(&mut Outcome)) -> bool {
    let start = Instant::now();
    let mut o = Outcome::new();
    body(&mut o);
    say(&format!(
        "criterion {n:>2} {}: {title} ({} checks, {:.1} s)",
        if o.ok { "PASS" } else { "FAIL" },
        o.notes.len(),
        start.elapsed().as_secs_f64()
    ));
    o.ok
}

fn check_case(o: &mut Outcome, case: IdentityCase, c: &Ctx, max_abs: Option<f64>, max_rel: Option<f64>) -> VerificationRecord {
    let r = verify(&case, &Tolerances::for_ctx(c), c);
    o.record(&r, max_abs, max_rel);
    r
}

fn dist(a: &Complex, b: &Complex) -> f64 {
    Complex::with_val(a.prec().0, a - b).abs().real().to_f64()
}

fn modulus(a: &Complex) -> f64 {
    Float::with_val(a.prec().0, a.abs_ref()).to_f64()
}

/// |alpha^{-m} zeta(2m+1) / 2|, the size of the terms that cancel on the
/// left-hand side of R1 when its value is zero.
fn cancelling_scale(alpha: &Float, m: i64, c: &Ctx) -> f64 {
    let b = c.bits();
    let z = zeta(&c.cx((2 * m + 1) as f64, 0.0), c).unwrap();
    let a = Float::with_val(b, alpha.pow(-m as i32));
    (modulus(&z) / 2.0) * a.to_f64()
}

fn closed_form_baselines() -> bool {
    run(1, "R6, R7 closed forms, abs < 1e-45 at 50 digits, < 1 s each", |o| {
        let c = ctx(50);
        for case in [IdentityCase::new(IdentityId::R6).m(1), IdentityCase::new(IdentityId::R7)] {
            let start = Instant::now();
            check_case(o, case, &c, Some(1e-45), None);
            o.time("  case", start.elapsed(), Duration::from_secs(1));
        }
    })
}

fn ramanujan_grid() -> bool {
    run(2, "R1 over m in {1, 2, -2, -3} x t in {1, 1.3, 2}, rel < 1e-35 at 50 digits, < 5 s", |o| {
        let c = ctx(50);
        let start = Instant::now();
        let tol = Tolerances::for_ctx(&c);
        for m in [1, 2, -2, -3] {
            for t in [1.0, 1.3, 2.0] {
                let case = IdentityCase::new(IdentityId::R1).m(m).t(t);
                let r = verify(&case, &tol, &c);
                let (lhs, rhs) = (r.lhs.as_ref().map_or(f64::NAN, modulus), r.rhs.as_ref().map_or(f64::NAN, modulus));
                if lhs.max(rhs) < tol.abs.to_f64() {
                    // Both sides vanish identically (m = -3 at alpha = beta = pi is
                    // Glaisher's 1/504 cancelling zeta(-5)/2), so the residual is
                    // measured against the cancelling terms instead.
                    let alpha = r.alpha.clone().unwrap();
                    let scale = cancelling_scale(&alpha, m, &c);
                    let abs = r.abs_err.as_ref().map_or(f64::NAN, Float::to_f64);
                    let rel = abs / scale;
                    o.check(
                        r.status == Status::Pass && rel < 1e-35,
                        format!("{case} exact value 0, abs {abs:.2e}, relative to cancelling terms {rel:.2e}"),
                    );
                } else {
                    o.record(&r, None, Some(1e-35));
                }
            }
        }
        o.time("total", start.elapsed(), Duration::from_secs(5));
    })
}

fn koshliakov() -> bool {
    run(3, "K1 (m = 1), K2 rel < 1e-30; footnote value fails by > 1e-3", |o| {
        let c = ctx(50);
        check_case(o, IdentityCase::new(IdentityId::K1).m(1), &c, None, Some(1e-30));
        check_case(o, IdentityCase::new(IdentityId::K2), &c, None, Some(1e-30));
        let r = verify(&IdentityCase::new(IdentityId::K2).form(Form::Footnote), &Tolerances::for_ctx(&c), &c);
        let rel = r.rel_err.as_ref().map_or(0.0, Float::to_f64);
        o.check(r.status == Status::Fail && rel > 1e-3, format!("footnote {:?} rel {rel:.3e}", r.status));
    })
}

fn squared_zeta() -> bool {
    run(4, "T1 over m in {1, 2, -2} x t in {1, 1.3}, rel < 1e-30 at 50 digits, < 60 s", |o| {
        let c = ctx(50);
        let start = Instant::now();
        for m in [1, 2, -2] {
            for t in [1.0, 1.3] {
                check_case(o, IdentityCase::new(IdentityId::T1).m(m).t(t), &c, None, Some(1e-30));
            }
        }
        o.time("total", start.elapsed(), Duration::from_secs(60));
    })
}

fn main_transformation() -> bool {
    run(5, "T2 over z x m in {1, -2} x t in {1, 1.3}, rel < 1e-25; symmetry defect < 1e-25", |o| {
        let c = ctx(50);
        let tol = Tolerances::for_ctx(&c);
        for (re, im) in [(1.0 / 3.0, 0.0), (0.5, 0.25), (-0.7, 0.0)] {
            for m in [1, -2] {
                for t in [1.0, 1.3] {
                    let case = IdentityCase::new(IdentityId::T2).m(m).t(t).z(re, im);
                    check_case(o, case.clone(), &c, None, Some(1e-25));
                    match alpha_beta_symmetry_check(&case, &tol, &c) {
                        Ok(s) => {
                            let d = s.defect.to_f64();
                            o.check(d < 1e-25, format!("{case} symmetry defect {d:.2e}"));
                        }
                        Err(e) => o.check(false, format!("{case} symmetry: {e}")),
                    }
                }
            }
        }
    })
}

fn named_constants() -> bool {
    run(6, "C2, C3, C6 special value, T5, T6, rel < 1e-25", |o| {
        let c = ctx(50);
        let mut cases = vec![
            IdentityCase::new(IdentityId::C2),
            IdentityCase::new(IdentityId::C3),
            IdentityCase::new(IdentityId::C6).form(Form::Special).m(2),
        ];
        cases.extend(describe(IdentityId::T5).default_grid());
        cases.extend(describe(IdentityId::T6).default_grid());
        for case in cases {
            check_case(o, case, &c, None, Some(1e-25));
        }
    })
}

fn zero_specialization() -> bool {
    run(7, "C1(i), C9(i) residual < 1e-20 at 40 digits; C1(ii), C9(ii) k = 1 below 1e-25", |o| {
        let c = ctx(40);
        for id in [IdentityId::C1, IdentityId::C9] {
            check_case(o, IdentityCase::new(id).form(Form::Zero), &c, Some(1e-20), None);
            let r = verify(&IdentityCase::new(id).form(Form::Integer).m(1), &Tolerances::for_ctx(&c), &c);
            let abs = r.abs_err.as_ref().map_or(f64::NAN, Float::to_f64);
            let rel = r.rel_err.as_ref().map_or(f64::NAN, Float::to_f64);
            o.check(
                r.status == Status::Pass && (abs < 1e-25 || rel < 1e-25),
                format!("{} {:?} abs {abs:.2e} rel {rel:.2e}", r.case, r.status),
            );
        }
    })
}

fn n_generalizations() -> bool {
    run(8, "T7 (3,1), (3,-2); T8 (3,4); T9 (2,1); rel < 1e-20 at 30 digits, < 5 min", |o| {
        let c = ctx(30);
        let start = Instant::now();
        let cases = [
            IdentityCase::new(IdentityId::T7).n(3).m(1),
            IdentityCase::new(IdentityId::T7).n(3).m(-2),
            IdentityCase::new(IdentityId::T8).n(3).h(4),
            IdentityCase::new(IdentityId::T9).n(2).m(1),
        ];
        for case in cases {
            check_case(o, zeta_omega::identities::rebalance(case), &c, None, Some(1e-20));
        }
        o.time("total", start.elapsed(), Duration::from_secs(300));
    })
}

fn oracle_suites() -> bool {
    run(9, "Omega vs partial fractions, contour vs series, Mellin K, single vs double series", |o| {
        let c = ctx(30);
        let pi = std::f64::consts::PI;
        let budget = SeriesBudget::for_ctx(&c);

        let pf_budget = SeriesBudget { max_terms: 1_000_000, ..budget.clone() };
        for x in [0.5, 1.0, 2.0, 5.0, 10.0] {
            let p = OmegaParams { rho: c.pi(), x: c.cx(x, 0.0), z: c.czero() };
            let series = omega(&p, &budget, &c).unwrap().value;
            let pf = omega_pf_oracle(&c.real(x), &pf_budget, &c).unwrap();
            let d = Float::with_val(c.bits(), series.real() - &pf).abs().to_f64();
            o.check(d < 1e-8, format!("Omega({x}) vs partial fractions {d:.2e}"));
        }

        let lc = ctx(25);
        for x in [1.0, 2.0] {
            for z in [(0.0, 0.0), (0.5, 0.0), (1.0, 0.5)] {
                let k = Kernel::Omega { rho: pi, x, z };
                let want = closed_form(&k, &lc).unwrap();
                let got = line_integral(&LineIntegralSpec::new(1.75 + z.0 / 2.0, k), &lc);
                match got {
                    Ok(r) => {
                        let d = dist(&r.value, &want) / modulus(&want);
                        o.check(d < 1e-8, format!("contour x = {x} z = {z:?} rel {d:.2e}"));
                    }
                    Err(e) => o.check(false, format!("contour x = {x} z = {z:?}: {e}")),
                }
            }
        }

        // mpmath: quad(t**2 * besselk(1/3, 2t), [0, inf]) at 30 digits.
        let mellin_ref = Float::with_val(lc.bits(), Float::parse("0.201533262692690872288230917516").unwrap());
        let k = Kernel::MellinK { s: 3.0, z: (1.0 / 3.0, 0.0), a: 2.0 };
        let r = line_integral(&LineIntegralSpec::new(0.0, k.clone()), &lc).unwrap();
        let d_ref = Float::with_val(lc.bits(), r.value.real() - &mellin_ref).abs().to_f64();
        let d_cf = dist(&r.value, &closed_form(&k, &lc).unwrap());
        o.check(d_ref < 1e-10 && d_cf < 1e-10, format!("Mellin K_(1/3) vs reference {d_ref:.2e}, vs closed form {d_cf:.2e}"));

        for m in [0i64, 1, -2] {
            let w = Weight::new(c.czero(), c.cx((2 * m + 1) as f64, 0.0));
            let single = convolution_omega_sum(&c.pi(), m, &budget, &c).unwrap().value;
            let double = weighted_omega_sum_double(&c.pi(), &c.czero(), &w, &XMap::linear(), &budget, &c).unwrap().value;
            let d = dist(&single, &double) / modulus(&single);
            o.check(d < 1e-25, format!("single vs double m = {m} rel {d:.2e}"));
        }
    })
}

fn property_suites() -> bool {
    run(10, "functional equation, K even in order, Lambda parity, sigma reflection, recurrence, zeta', < 10 min", |o| {
        let start = Instant::now();
        let c = ctx(30);
        let b = c.bits();
        let rel = |a: &Complex, w: &Complex| dist(a, w) / modulus(w);

        for (re, im) in [(-2.5, 3.0), (0.5, 14.0), (2.5, -7.0), (-1.3, 0.0), (3.7, 19.0)] {
            let s = c.cx(re, im);
            let d = rel(&zeta(&s, &c).unwrap(), &functional_equation_rhs(&s, &c).unwrap());
            o.check(d < 1e-25, format!("functional equation at {re}+{im}i rel {d:.2e}"));
        }

        for (z, w) in [((0.4, 0.0), (1.0, 0.0)), ((2.2, 1.1), (6.0, -3.0)), ((1.0, 0.0), (25.0, 4.0))] {
            let w = c.cx(w.0, w.1);
            let a = bessel_k(&c.cx(z.0, z.1), &w, &c).unwrap();
            let m = bessel_k(&c.cx(-z.0, -z.1), &w, &c).unwrap();
            o.check(rel(&a, &m) < 1e-26, format!("K_(-z) = K_z at z = {z:?}"));
            let zc = c.cx(z.0, z.1);
            let km = bessel_k(&Complex::with_val(b, &zc - 1u32), &w, &c).unwrap();
            let kp = bessel_k(&Complex::with_val(b, &zc + 1u32), &w, &c).unwrap();
            let lhs = Complex::with_val(b, &km - &kp);
            let rhs = -Complex::with_val(b, &zc * 2u32) / &w * &a;
            let d = dist(&lhs, &rhs) / modulus(&kp);
            o.check(d < 1e-25, format!("Bessel recurrence at z = {z:?} {d:.2e}"));
        }

        let budget = SeriesBudget::for_ctx(&c);
        for (x, z) in [(1.0, (1.0, 0.0)), (2.5, (0.3, 0.6))] {
            let xf = c.real(x);
            let zp = c.cx(z.0, z.1);
            let zn = c.cx(-z.0, -z.1);
            let pp = lambda_pm(Sign::Plus, &xf, &zp, &budget, &c).unwrap().value;
            let pn = lambda_pm(Sign::Plus, &xf, &zn, &budget, &c).unwrap().value;
            let mp = lambda_pm(Sign::Minus, &xf, &zp, &budget, &c).unwrap().value;
            let mn = lambda_pm(Sign::Minus, &xf, &zn, &budget, &c).unwrap().value;
            let scale = modulus(&pp).max(modulus(&mp));
            let d = dist(&pp, &pn).max(dist(&mp, &-mn)) / scale;
            o.check(d < 1e-25, format!("Lambda parity at x = {x} z = {z:?} {d:.2e}"));
        }
        let m0 = lambda_pm(Sign::Minus, &c.real(1.0), &c.czero(), &budget, &c).unwrap().value;
        o.check(modulus(&m0) < 1e-28, format!("Lambda-(1, 0) = {:.2e}", modulus(&m0)));

        for (n, z) in [(360u64, (1.5, -0.5)), (4097, (-3.0, 2.0)), (1, (0.7, 0.0))] {
            let zc = c.cx(z.0, z.1);
            let lhs = sigma(&Complex::with_val(b, -&zc), n, &c);
            let n_pow = (-Complex::with_val(b, &zc * Float::with_val(b, n).ln())).exp();
            let d = rel(&lhs, &(n_pow * sigma(&zc, n, &c)));
            o.check(d < 1e-27, format!("sigma reflection n = {n} {d:.2e}"));
        }

        let hi = ctx(60);
        for (re, im) in [(-1.5, 2.0), (0.5, 10.0), (3.0, 0.0)] {
            let d = zeta_prime(&c.cx(re, im), &c).unwrap();
            let h = Float::with_val(hi.bits(), 1e-15);
            let sp = Complex::with_val(hi.bits(), hi.cx(re, im) + &h);
            let sm = Complex::with_val(hi.bits(), hi.cx(re, im) - &h);
            let fd = Complex::with_val(b, (zeta(&sp, &hi).unwrap() - zeta(&sm, &hi).unwrap()) / (h * 2u32));
            let r = rel(&d, &fd);
            o.check(r < 1e-24, format!("zeta' finite difference at {re}+{im}i {r:.2e}"));
        }
        o.time("total", start.elapsed(), Duration::from_secs(600));
    })
}

#[test]
fn acceptance() {
    let results = [
        closed_form_baselines(),
        ramanujan_grid(),
        koshliakov(),
        squared_zeta(),
        main_transformation(),
        named_constants(),
        zero_specialization(),
        n_generalizations(),
        oracle_suites(),
        property_suites(),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
