//! Identities for Σ d(n) n^{−s} Ω_ρ(n): Koshliakov's two evaluations and the
//! transformation formulas for ζ²(2m+1) built on them.

use rug::{Complex, Float, Rational};

use super::classical::horner;
use super::env::Env;
use super::{Form, IdentityCase, IdentityId};
use crate::error::{Error, Result};

pub(super) fn evaluate(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    match case.id {
        IdentityId::K1 => first(case, env),
        IdentityId::K2 => second(case, env),
        IdentityId::T1 => squared(case, env),
        IdentityId::L1 => squared_lerch(case, env),
        IdentityId::T4 => large_m(case, env),
        IdentityId::T5 => minus_one(case, env),
        IdentityId::T6 => eta(case, env),
        _ => unreachable!("not a divisor-weighted Omega identity"),
    }
}

fn log_two_pi(env: &Env) -> Float {
    (env.pi() * 2u32).ln()
}

/// ζ′(s)/ζ(s) at an integer s > 1.
fn log_deriv(s: i64, env: &Env) -> Result<Complex> {
    let (z, d) = env.zeta_d(&env.ci(s))?;
    Ok(d / z)
}

fn first(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let m = case.m;
    if m <= 0 {
        return Err(Error::Constraint("K1 needs m > 0".into()));
    }
    let lhs = env.divisor_omega(&env.pi(), &env.ci(-(4 * m + 1)))?;
    let b = env.bern(4 * m + 2)?;
    let coeff = Rational::from(b.square_ref()) / Rational::from((4 * m + 2) * (4 * m + 2));
    let brace = env.cf(&(log_two_pi(env) - env.rat(&Env::harmonic(4 * m + 1)))) - log_deriv(4 * m + 2, env)?;
    Ok((lhs, brace * env.rat(&coeff)))
}

fn second(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let pi = env.pi();
    let lhs = env.divisor_omega(&pi, &env.ci(-1))?;
    let zp2 = env.zeta_d(&env.ci(2))?.1;
    let pi2 = Float::with_val(env.bits, pi.square_ref());
    let log_term = env.cf(&log_two_pi(env)) - zp2 * 6u32 / &pi2;
    let rhs = match case.form {
        Form::Footnote => (log_term - env.c(9.0 / 8.0)) / 4u32,
        _ => (log_term - env.c(1.0)) / 144u32 - env.cf(&(pi * 32u32).recip()),
    };
    Ok((lhs, rhs))
}

/// (x²)^{−m} {ζ²(2m+1)(γ + log(x/π) − ζ′/ζ(2m+1)) + Σ d(n) Ω_x(n)/n^{2m+1}}
fn squared_side(x: &Float, m: i64, env: &Env) -> Result<Complex> {
    let (z, zp) = env.zeta_d(&env.ci(2 * m + 1))?;
    let log = env.cf(&env.ln(&Float::with_val(env.bits, x / env.pi())));
    let zeta_part = Complex::with_val(env.bits, &z * (z.clone() * (env.gamma() + log) - zp));
    let series = env.divisor_omega(x, &env.ci(2 * m + 1))?;
    let x2 = Float::with_val(env.bits, x.square_ref());
    Ok((zeta_part + series) * env.powi(&x2, -m))
}

/// (−1)^j B²_{2j} B²_{2m+2−2j} / ((2j)! (2m+2−2j)!)² for j = 0..=m+1.
fn squared_coeffs(m: i64, env: &Env) -> Result<Vec<Rational>> {
    (0..=m + 1)
        .map(|j| {
            let k = 2 * m + 2 - 2 * j;
            let r = (env.bern(2 * j)? * env.bern(k)?) / (Env::fact(2 * j) * Env::fact(k));
            let r = r.square();
            Ok(if j % 2 == 0 { r } else { -r })
        })
        .collect()
}

fn squared(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let m = case.m;
    if m == 0 {
        return Err(Error::Constraint("T1 needs m != 0".into()));
    }
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let lhs = squared_side(&a, m, env)?;
    let a2 = Float::with_val(bits, a.square_ref());
    let b2 = Float::with_val(bits, b.square_ref());
    let finite = horner(&squared_coeffs(m, env)?, &Float::with_val(bits, &a2 / &b2), env)
        * env.powi(&b2, m + 1)
        * env.pi()
        * env.two_pow(4 * m);
    let rhs = squared_side(&b, m, env)? * Env::sign(m) - finite;
    Ok((lhs, rhs))
}

fn squared_lerch(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let m = case.m;
    if m.rem_euclid(2) != 1 {
        return Err(Error::Constraint("L1 needs m odd".into()));
    }
    let pi = env.pi();
    let (z, zp) = env.zeta_d(&env.ci(2 * m + 1))?;
    let lhs = Complex::with_val(env.bits, &z * (z.clone() * env.gamma() - zp)) + env.divisor_omega(&pi, &env.ci(2 * m + 1))?;
    let sum: Rational = squared_coeffs(m, env)?.into_iter().fold(Rational::new(), |acc, c| acc - c);
    let rhs = env.rat(&sum) * env.powi(&pi, 4 * m + 3) * env.two_pow(4 * m - 1);
    Ok((lhs, env.cf(&rhs)))
}

fn large_m(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let m = case.m;
    if m <= 1 {
        return Err(Error::Constraint("T4 needs m > 1".into()));
    }
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let a2m = env.powi(&Float::with_val(bits, a.square_ref()), m);
    let b2m = env.powi(&Float::with_val(bits, b.square_ref()), m) * Env::sign(m);
    let e = env.ci(-(2 * m - 1));
    let lhs = env.divisor_omega(&a, &e)? * &a2m - env.divisor_omega(&b, &e)? * &b2m;

    let h = env.cf(&env.rat(&Env::harmonic(2 * m - 1)));
    let ld = log_deriv(2 * m, env)?;
    let two_pi2 = Float::with_val(bits, env.pi().square_ref()) * 2u32;
    let brace = |x: &Float| -> Complex {
        env.cf(&env.ln(&Float::with_val(bits, x / &two_pi2))) + &h + &ld
    };
    let bm = env.bern(2 * m)?;
    let coeff = env.rat(&(Rational::from(bm.square_ref()) / Rational::from(4 * m * m)));
    let rhs = (brace(&a) * &a2m - brace(&b) * &b2m) * coeff * -1i32;
    Ok((lhs, rhs))
}

fn minus_one(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let pi = env.pi();
    let e = env.ci(-1);
    let a2 = Float::with_val(bits, a.square_ref());
    let b2 = Float::with_val(bits, b.square_ref());
    let lhs = env.divisor_omega(&a, &e)? * &a2 + env.divisor_omega(&b, &e)? * &b2;
    let constant = env.ctx.euler_gamma() + 1u32 - env.ctx.log_glaisher() * 12u32;
    let brace = |x: &Float| env.ln(&Float::with_val(bits, x / &pi)) + &constant;
    let rhs = -Float::with_val(bits, &pi / 16u32) - (brace(&a) * &a2 + brace(&b) * &b2) / 144u32;
    Ok((lhs, env.cf(&rhs)))
}

fn eta(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let pi = env.pi();
    let e = env.ci(1);
    let lhs = env.divisor_omega(&a, &e)? - env.divisor_omega(&b, &e)?;
    let l = env.ln(&Float::with_val(bits, &a / &b));
    let g = env.ctx.euler_gamma();
    let brace = Float::with_val(bits, g.square_ref()) * 48u32 + env.ctx.stieltjes1() * 96u32
        - Float::with_val(bits, pi.square_ref()) * 3u32
        - Float::with_val(bits, l.square_ref()) * 4u32;
    let diff_sq = Float::with_val(bits, a.square_ref()) - Float::with_val(bits, b.square_ref());
    let rhs = pi * diff_sq / 144u32 + l * brace / 48u32;
    Ok((lhs, env.cf(&rhs)))
}
