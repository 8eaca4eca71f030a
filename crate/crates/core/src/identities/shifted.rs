//! Identities for the σ-weighted series in Ω_ρ(n, z) and Λ±(n, z): the
//! transformation with an extra variable z, its specialisations at zeros
//! of ζ, and its limiting cases at the excluded points.

use rug::{Complex, Float, Rational};

use super::env::Env;
use super::{check_exclusion, first_zero, Form, IdentityCase, IdentityId};
use crate::error::{Error, Result};
use crate::omega::{Sign, XMap};

pub(super) fn evaluate(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    match case.id {
        IdentityId::T2 => main(case, env),
        IdentityId::T3 => zeta_product(case, env),
        IdentityId::C1 => zeros_plus(case, env),
        IdentityId::C2 => apery(env),
        IdentityId::C3 => glaisher_kinkelin(env),
        IdentityId::C4 => limit_even(case, env),
        IdentityId::C5 => limit_odd(case, env),
        IdentityId::C6 => limit_odd_negative(case, env),
        IdentityId::C7 => limit_minus_one(case, env),
        IdentityId::C8 => eta_z(case, env),
        IdentityId::C9 => zeros_minus(case, env),
        _ => unreachable!("not a sigma-weighted Omega identity"),
    }
}

/// Σ σ_s(n) n^{−e} Ω_ρ(n, z)
fn sigma_omega(rho: &Float, z: &Complex, s: &Complex, e: &Complex, env: &Env) -> Result<Complex> {
    let w = env.weight(s.clone(), e.clone());
    env.omega_sum(rho, z, &w, &XMap::linear())
}

/// Σ σ_s(n) n^{−e} Λ±(n, z)
fn sigma_lambda(sign: Sign, z: &Complex, s: &Complex, e: &Complex, env: &Env) -> Result<Complex> {
    let w = env.weight(s.clone(), e.clone());
    env.lambda_sum(sign, z, &w)
}

fn neg(z: &Complex, env: &Env) -> Complex {
    Complex::with_val(env.bits, -z)
}

fn add(z: &Complex, k: i64, env: &Env) -> Complex {
    Complex::with_val(env.bits, z + k)
}

fn sec_half_pi(z: &Complex, env: &Env) -> Complex {
    env.cos_half_pi(z).recip()
}

/// (−1)^j B_{2j} B_{2m+2−2j} / ((2j)! (2m+2−2j)!)
fn bernoulli_pair(m: i64, j: i64, env: &Env) -> Result<Rational> {
    let k = 2 * m + 2 - 2 * j;
    let r = (env.bern(2 * j)? * env.bern(k)?) / (Env::fact(2 * j) * Env::fact(k));
    Ok(if j % 2 == 0 { r } else { -r })
}

/// ½ζ(2m+1)[(x/π)^z ζ(2m+1−z) ζ(1+z) + (x/π)^{−z} ζ(2m+1+z) ζ(1−z)/cos(πz/2)]
///   + Σ σ_{−z}(n) n^{z/2} Ω_x(n, z)/n^{2m+1}
fn main_bracket(x: &Float, z: &Complex, m: i64, env: &Env) -> Result<Complex> {
    let bits = env.bits;
    let r = Float::with_val(bits, x / env.pi());
    let first = env.pow(&r, z) * env.zeta(&Complex::with_val(bits, (2 * m + 1) - z))? * env.zeta(&add(z, 1, env))?;
    let second = env.pow(&r, &neg(z, env)) * env.zeta(&add(z, 2 * m + 1, env))? * env.zeta(&Complex::with_val(bits, 1 - z))?
        / env.cos_half_pi(z);
    let zeta_part = (first + second) * env.zeta_i(2 * m + 1)? / 2u32;
    let e = Complex::with_val(bits, (2 * m + 1) - Complex::with_val(bits, z / 2u32));
    Ok(zeta_part + sigma_omega(x, z, &neg(z, env), &e, env)?)
}

fn main(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let m = case.m;
    let z = case.required_z(env.ctx)?;
    check_exclusion(&z, &[0, 2 * m, -2 * m], true, "𝔅", env.ctx)?;
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let a2 = Float::with_val(bits, a.square_ref());
    let b2 = Float::with_val(bits, b.square_ref());
    let lhs = main_bracket(&a, &z, m, env)? * env.powi(&a2, -m);
    let mut rhs = main_bracket(&b, &neg(&z, env), m, env)? * env.powi(&b2, -m) * Env::sign(m);

    let ratio = Float::with_val(bits, &a / &b);
    let mut finite = env.ci(0);
    for j in 0..=m + 1 {
        let c = env.rat(&bernoulli_pair(m, j, env)?);
        let z1 = env.zeta(&Complex::with_val(bits, (2 * m + 2 - 2 * j) - &z))?;
        let z2 = env.zeta(&add(&z, 2 * j, env))?;
        let e = Complex::with_val(bits, Complex::with_val(bits, &z / 2u32) + (2 * j - 1 - m));
        finite += z1 * z2 * env.pow(&ratio, &e) * c;
    }
    rhs += finite * env.pi() * env.two_pow(2 * m) * Env::sign(m);
    Ok((lhs, rhs))
}

fn zeta_product(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let z = case.required_z(env.ctx)?;
    check_exclusion(&z, &[0, 2, -2], true, "{0, 2, -2} and the odd integers", env.ctx)?;
    let bits = env.bits;
    let e = Complex::with_val(bits, -1i32 - Complex::with_val(bits, &z / 2u32));
    let lhs = sigma_lambda(Sign::Plus, &z, &neg(&z, env), &e, env)?;
    let p1 = env.zeta(&Complex::with_val(bits, -1i32 - &z))? * env.zeta(&add(&z, 1, env))?;
    let p2 = env.zeta(&add(&z, -1, env))? * env.zeta(&Complex::with_val(bits, 1 - &z))?;
    let sec = sec_half_pi(&z, env) + 1u32;
    let last = env.zeta(&neg(&z, env))? * env.zeta(&z)? / (env.pi() * 4u32);
    let rhs = sec * (p1 + p2) / 24u32 - last;
    Ok((lhs, rhs))
}

fn zeros_plus(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let bits = env.bits;
    match case.form {
        Form::Zero => {
            let w = first_zero(env.ctx)?;
            let e = Complex::with_val(bits, -1i32 - Complex::with_val(bits, &w / 2u32));
            let lhs = sigma_lambda(Sign::Plus, &w, &neg(&w, env), &e, env)?;
            let rhs = (sec_half_pi(&w, env) + 1u32)
                * env.zeta(&Complex::with_val(bits, -1i32 - &w))?
                * env.zeta(&add(&w, 1, env))?
                / 24u32;
            Ok((lhs, rhs))
        }
        Form::Integer => {
            let k = case.m;
            if k < 1 {
                return Err(Error::Constraint("C1 (ii) needs k >= 1".into()));
            }
            let lhs = sigma_lambda(Sign::Plus, &env.ci(-4 * k), &env.ci(4 * k), &env.ci(2 * k - 1), env)?;
            let t1 = env.bern(4 * k)? / Rational::from(4 * k);
            let t2 = env.bern(4 * k + 2)? / Rational::from(4 * k + 2);
            let rhs = (env.zeta_i(4 * k - 1)? * env.rat(&t1) + env.zeta_i(4 * k + 1)? * env.rat(&t2)) / -12i32;
            Ok((lhs, rhs))
        }
        _ => Err(Error::InvalidArgument("C1 has forms zero and integer".into())),
    }
}

fn apery(env: &Env) -> Result<(Complex, Complex)> {
    let lhs = sigma_lambda(Sign::Plus, &env.ci(-4), &env.ci(4), &env.ci(1), env)?;
    let rhs = (env.zeta_i(3)? / 120u32 - env.zeta_i(5)? / 252u32) / 12u32;
    Ok((lhs, rhs))
}

fn glaisher_kinkelin(env: &Env) -> Result<(Complex, Complex)> {
    let lhs = sigma_lambda(Sign::Plus, &env.ci(1), &env.ci(1), &env.c(-0.5), env)?;
    let pi = env.pi();
    let num = env.cf(
        &(env.ctx.euler_gamma() * 6u32 + 6u32 + Float::with_val(env.bits, &pi * 3u32)
            - env.ctx.log_glaisher() * 72u32),
    ) - env.zeta_i(3)?;
    let rhs = num / (pi * 288u32);
    Ok((lhs, rhs))
}

fn limit_even(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let m = case.m;
    if m < 1 {
        return Err(Error::Constraint("C4 needs m >= 1".into()));
    }
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let pi = env.pi();
    let s = env.ci(-2 * m);
    let e = env.ci(m + 1);
    let a2 = Float::with_val(bits, a.square_ref());
    let b2 = Float::with_val(bits, b.square_ref());
    let lhs = sigma_omega(&a, &env.ci(2 * m), &s, &e, env)? * env.powi(&a2, -m)
        - sigma_omega(&b, &env.ci(-2 * m), &s, &e, env)? * env.powi(&b2, -m) * Env::sign(m);

    let z1 = env.zeta_i(2 * m + 1)?;
    let log = env.ln(&Float::with_val(bits, &a / &b));
    let pi2m = env.powi(&pi, 2 * m);
    let t1 = Complex::with_val(bits, z1.square_ref()) * log / (Float::with_val(bits, &pi2m) * 2u32);
    let diff = env.powi(&a, -4 * m) - env.powi(&b, -4 * m);
    let t2 = z1 * env.zeta_i(4 * m + 1)? * env.zeta_i(1 - 2 * m)? * diff * &pi2m * Env::sign(m + 1) / 2u32;
    let c = (env.bern(2 * m)? * env.bern(2 * m + 2)?) / (Env::fact(2 * m) * Env::fact(2 * m + 2));
    let r = Float::with_val(bits, &a / &b);
    let t3 = env.rat(&c) * env.powi(&pi, 2 * m + 3) * env.two_pow(4 * m - 1) * (Float::with_val(bits, &r - r.clone().recip()))
        / 6u32;
    Ok((lhs, t1 + t2 + env.cf(&t3)))
}

fn limit_odd(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let m = case.m;
    let l = case.ell.ok_or_else(|| Error::InvalidArgument("C5 needs l".into()))?;
    // The two ranges overlap when m < −2; there B_{2m+2l+2} has negative
    // index and the ζ(2m+1+z) factor vanishes, so the zero branch applies.
    let lower_branch = 1 <= l && l < -m - 1;
    let upper_branch = l >= 1.max(m + 1) && !lower_branch;
    if !upper_branch && !lower_branch {
        return Err(Error::Constraint(format!("C5 needs l >= max(1, m+1) or 1 <= l < -m-1; got m = {m}, l = {l}")));
    }
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let pi = env.pi();
    let s = env.ci(-2 * l - 1);
    let e = Complex::with_val(bits, env.ci(2 * m - l) + 0.5f64);
    let a2 = Float::with_val(bits, a.square_ref());
    let b2 = Float::with_val(bits, b.square_ref());
    let lhs = sigma_omega(&a, &env.ci(2 * l + 1), &s, &e, env)? * env.powi(&a2, -m)
        - sigma_omega(&b, &env.ci(-2 * l - 1), &s, &e, env)? * env.powi(&b2, -m) * Env::sign(m);

    let ratio = Float::with_val(bits, &a / &b);
    let mut finite = env.ci(0);
    for j in 0..=m + 1 {
        let c = env.rat(&bernoulli_pair(m, j, env)?);
        let z = env.zeta_i(2 * m - 2 * l - 2 * j + 1)? * env.zeta_i(2 * j + 2 * l + 1)?;
        let p = env.powr(&ratio, &(Float::with_val(bits, 2 * j + l - m) - 0.5f64));
        finite += z * p * c;
    }
    let mut rhs = finite * &pi * env.two_pow(2 * m) * Env::sign(m);

    let common = env.zeta_i(2 * m + 1)? * &pi * env.two_pow(2 * m) * Env::sign(l);
    let c2 = Env::fact(2 * l - 2 * m) * env.bern(2 * l + 2)? / Env::fact(2 * l + 2);
    let b_pi = Float::with_val(bits, &b / &pi);
    rhs += common.clone() * env.powi(&b_pi, 2 * l - 2 * m + 1) * env.rat(&c2) * env.zeta_i(2 * l - 2 * m + 1)?;
    if upper_branch {
        let c3 = Env::fact(2 * l) * env.bern(2 * m + 2 * l + 2)? / Env::fact(2 * m + 2 * l + 2);
        let a_pi = Float::with_val(bits, &a / &pi);
        rhs -= common
            * env.powi(&a_pi, -2 * l - 2 * m - 1)
            * env.rat(&c3)
            * env.zeta_i(2 * l + 1)?
            * Env::sign(m);
    }
    Ok((lhs, rhs))
}

fn limit_odd_negative(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let bits = env.bits;
    let pi = env.pi();
    if case.form == Form::Special {
        let lhs = sigma_lambda(Sign::Minus, &env.ci(3), &env.ci(3), &env.c(-1.5), env)?;
        let rhs = (env.zeta_i(3)? + env.zeta_i(7)? / 2u32) / (env.powi(&pi, 3) * 960u32);
        return Ok((lhs, rhs));
    }
    let m = case.m;
    if m <= 1 {
        return Err(Error::Constraint("C6 needs m > 1".into()));
    }
    let (a, b) = case.alpha_beta(env.ctx)?;
    let s = env.ci(2 * m - 1);
    let e = Complex::with_val(bits, env.ci(-m) + 0.5f64);
    let a2m = env.powi(&Float::with_val(bits, a.square_ref()), m);
    let b2m = env.powi(&Float::with_val(bits, b.square_ref()), m) * Env::sign(m);
    let lhs = sigma_omega(&a, &env.ci(2 * m - 1), &s, &e, env)? * &a2m
        - sigma_omega(&b, &env.ci(1 - 2 * m), &s, &e, env)? * &b2m;

    let b2m_rat = env.bern(2 * m)?;
    let first = env.zeta_i(2 * m - 1)? * &a * env.rat(&Env::fact(2 * m - 2)) / env.two_pow(2 * m);
    let c = (&b2m_rat * Env::fact(4 * m - 2)) / Env::fact(2 * m);
    let b_2pi = Float::with_val(bits, &b / Float::with_val(bits, &pi * 2u32));
    let second = env.zeta_i(4 * m - 1)? * env.rat(&c) * &pi * env.two_pow(2 * m - 1) * env.powi(&b_2pi, 4 * m - 1)
        * Env::sign(m + 1);
    let lead = env.rat(&(b2m_rat / Rational::from(2 * m)));
    let rhs = (first + second) * lead * -1i32;
    Ok((lhs, rhs))
}

fn limit_minus_one(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let pi = env.pi();
    let s = env.ci(1);
    let e = env.c(-0.5);
    let a2 = Float::with_val(bits, a.square_ref());
    let b2 = Float::with_val(bits, b.square_ref());
    let lhs = sigma_omega(&a, &env.ci(-1), &s, &e, env)? * &a2 + sigma_omega(&b, &env.ci(1), &s, &e, env)? * &b2;

    let log = env.ln(&Float::with_val(bits, &a / &b));
    let zp = env.zeta_d(&env.ci(-1))?.1;
    let real = Float::with_val(bits, &pi * &a) / 96u32 - Float::with_val(bits, &b * &log) / 48u32
        + Float::with_val(bits, &b * env.ctx.euler_gamma()) / 48u32;
    let a3 = env.powi(&a, 3);
    let rhs = env.cf(&real) - env.zeta_i(3)? * a3 / (Float::with_val(bits, pi.square_ref()) * 288u32)
        + zp * Float::with_val(bits, &b / 4u32);
    Ok((lhs, rhs))
}

fn eta_z(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let z = case.required_z(env.ctx)?;
    check_exclusion(&z, &[0, 1, -1], true, "{0, 1, -1} and the odd integers", env.ctx)?;
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let pi = env.pi();
    let half_z = Complex::with_val(bits, &z / 2u32);
    let lhs = sigma_omega(&a, &z, &neg(&z, env), &Complex::with_val(bits, 1 - &half_z), env)?
        - sigma_omega(&b, &neg(&z, env), &z, &Complex::with_val(bits, 1 + &half_z), env)?;

    let r = Float::with_val(bits, &a / &b);
    let l = env.ln(&r);
    let r_half = env.pow(&r, &half_z);
    let first = (env.zeta(&neg(&z, env))? * env.zeta(&add(&z, 2, env))? * &r
        - env.zeta(&z)? * env.zeta(&Complex::with_val(bits, 2 - &z))? / &r)
        * &r_half
        * &pi
        / -12i32;

    let (zm, zpm) = env.zeta_d(&Complex::with_val(bits, 1 - &z))?;
    let (zp, zpp) = env.zeta_d(&add(&z, 1, env))?;
    let g = Complex::with_val(bits, &zm * &zp);
    let dg = Complex::with_val(bits, &zm * &zpp) - Complex::with_val(bits, &zpm * &zp);
    let sec = sec_half_pi(&z, env);
    let tan = {
        let arg = Complex::with_val(bits, &z * &pi) / 2u32;
        arg.tan()
    };
    let dsec = Complex::with_val(bits, &sec * &tan) * &pi / 2u32;
    let rz = env.pow(&r, &z);
    let df = (Complex::with_val(bits, &rz * &l) - dsec) * &g + (rz - &sec) * dg;
    let second = (df + sec * g * &l) / r_half / 2u32;
    Ok((lhs, first + second))
}

fn zeros_minus(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let bits = env.bits;
    match case.form {
        Form::Zero => {
            let w = first_zero(env.ctx)?;
            let e = Complex::with_val(bits, 1 - Complex::with_val(bits, &w / 2u32));
            let lhs = sigma_lambda(Sign::Minus, &w, &neg(&w, env), &e, env)?;
            let first = env.zeta(&neg(&w, env))? * env.zeta(&add(&w, 2, env))? * env.pi() / -12i32;
            let zp = env.zeta_d(&Complex::with_val(bits, 1 - &w))?.1;
            let second = (1 - sec_half_pi(&w, env)) * env.zeta(&add(&w, 1, env))? * zp / 2u32;
            Ok((lhs, first - second))
        }
        Form::Integer => {
            let k = case.m;
            if k < 1 {
                return Err(Error::Constraint("C9 (ii) needs k >= 1".into()));
            }
            let lhs = sigma_lambda(Sign::Minus, &env.ci(-4 * k - 2), &env.ci(4 * k + 2), &env.ci(2 * k + 2), env)?;
            let (za, zpa) = env.zeta_d(&env.ci(4 * k + 3))?;
            let (zb, zpb) = env.zeta_d(&env.ci(-4 * k - 1))?;
            Ok((lhs, za * zpb - zpa * zb))
        }
        _ => Err(Error::InvalidArgument("C9 has forms zero and integer".into())),
    }
}
