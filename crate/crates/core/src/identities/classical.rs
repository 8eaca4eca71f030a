//! Lambert-series identities: Ramanujan's formula for ζ(2m+1) and its
//! special cases, and the N-generalisation relating ζ(2m+1) to ζ(2Nm+1).

use rug::{Complex, Float, Rational};

use super::env::{floor_div, Env};
use super::{IdentityCase, IdentityId};
use crate::error::{Error, Result};

pub(super) fn evaluate(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    match case.id {
        IdentityId::R1 => ramanujan(case, env),
        IdentityId::R2 => eisenstein(case, env),
        IdentityId::R3 => minus_one(case, env),
        IdentityId::R4 => eta(case, env),
        IdentityId::R5 => lerch(case, env),
        IdentityId::R6 => glaisher(case, env),
        IdentityId::R7 => schlomilch(env),
        IdentityId::R8 => n_relation(case, env),
        _ => unreachable!("not a Lambert-series identity"),
    }
}

/// Σ_j c_j x^j by Horner's rule; the coefficients are exact.
pub(super) fn horner(coeffs: &[Rational], x: &Float, env: &Env) -> Float {
    let mut acc = Float::with_val(env.bits, 0);
    for c in coeffs.iter().rev() {
        acc *= x;
        acc += env.rat(c);
    }
    acc
}

/// (−1)^j B_{2j} B_{2m+2−2j} / ((2j)! (2m+2−2j)!) for j = 0..=m+1.
fn ramanujan_coeffs(m: i64, env: &Env) -> Result<Vec<Rational>> {
    (0..=m + 1)
        .map(|j| {
            let k = 2 * m + 2 - 2 * j;
            let r = (env.bern(2 * j)? * env.bern(k)?) / (Env::fact(2 * j) * Env::fact(k));
            Ok(if j % 2 == 0 { r } else { -r })
        })
        .collect()
}

fn ramanujan(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let m = case.m;
    if m == 0 {
        return Err(Error::Constraint("R1 needs m != 0".into()));
    }
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let half_zeta = env.zeta_i(2 * m + 1)? / 2u32;
    let side = |x: &Float| -> Result<Complex> {
        let s = Complex::with_val(bits, &half_zeta + env.lambert(-2 * m - 1, x)?);
        Ok(s * env.powi(x, -m))
    };
    let lhs = side(&a)?;
    let coeffs = ramanujan_coeffs(m, env)?;
    let ratio = Float::with_val(bits, &b / &a);
    let finite = horner(&coeffs, &ratio, env) * env.powi(&a, m + 1) * env.two_pow(2 * m);
    let rhs = side(&b)? * Env::sign(m) - finite;
    Ok((lhs, rhs))
}

fn eisenstein(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let m = case.m;
    if m <= 1 {
        return Err(Error::Constraint("R2 needs m > 1".into()));
    }
    let (a, b) = case.alpha_beta(env.ctx)?;
    let am = env.powi(&a, m);
    let bm = env.powi(&b, m) * Env::sign(m);
    let lhs = env.lambert(2 * m - 1, &a)? * &am - env.lambert(2 * m - 1, &b)? * &bm;
    let c = env.rat(&(env.bern(2 * m)? / Rational::from(4 * m)));
    let rhs = env.cf(&(Float::with_val(env.bits, &am - &bm) * c));
    Ok((lhs, rhs))
}

fn minus_one(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let (a, b) = case.alpha_beta(env.ctx)?;
    let lhs = env.lambert(1, &a)? * &a + env.lambert(1, &b)? * &b;
    let rhs = Float::with_val(env.bits, &a + &b) / 24u32 - Float::with_val(env.bits, 0.25);
    Ok((lhs, env.cf(&rhs)))
}

fn eta(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let (a, b) = case.alpha_beta(env.ctx)?;
    let lhs = env.lambert(-1, &a)? - env.lambert(-1, &b)?;
    let log = env.ln(&Float::with_val(env.bits, &a / &b));
    let rhs = Float::with_val(env.bits, &b - &a) / 12u32 + log / 4u32;
    Ok((lhs, env.cf(&rhs)))
}

fn lerch(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let m = case.m;
    if m.rem_euclid(2) != 1 {
        return Err(Error::Constraint("R5 needs m odd".into()));
    }
    let pi = env.pi();
    let lhs = env.zeta_i(2 * m + 1)? + env.lambert(-2 * m - 1, &pi)? * 2u32;
    let sum: Rational = ramanujan_coeffs(m, env)?.into_iter().fold(Rational::new(), |acc, c| acc - c);
    let rhs = env.rat(&sum) * env.powi(&pi, 2 * m + 1) * env.two_pow(2 * m);
    Ok((lhs, env.cf(&rhs)))
}

fn glaisher(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let m = case.m;
    if m <= 0 {
        return Err(Error::Constraint("R6 needs m > 0".into()));
    }
    let lhs = env.lambert(4 * m + 1, &env.pi())?;
    let rhs = env.bern(4 * m + 2)? / Rational::from(2 * (4 * m + 2));
    Ok((lhs, env.crat(&rhs)))
}

fn schlomilch(env: &Env) -> Result<(Complex, Complex)> {
    let pi = env.pi();
    let lhs = env.lambert(1, &pi)?;
    let rhs = Float::with_val(env.bits, 1) / 24u32 - (pi * 8u32).recip();
    Ok((lhs, env.cf(&rhs)))
}

/// Sets t = b^{−N} for R8 so that α = πb^{−N}, β = πb, choosing b to
/// minimise the cutoffs of the LHS series and the slowest rotated series.
pub(super) fn balanced_case(case: IdentityCase) -> IdentityCase {
    const TARGET: f64 = 90.0;
    let n = f64::from(case.n.unwrap_or(1));
    let pi = std::f64::consts::PI;
    let slowest = (pi * (n - 1.0) / (2.0 * n)).cos() * 2f64.powf(1.0 / n);
    let cost = |b: f64| {
        let alpha = pi / b.powf(n);
        let lhs = (TARGET / alpha).powf(1.0 / n) / 2.0;
        let rhs = (TARGET / (pi * b * slowest)).powf(n);
        lhs + rhs * (n + 1.0) / 2.0
    };
    let b = (0..=800).map(|i| 1.0 + 0.05 * f64::from(i)).min_by(|x, y| cost(*x).total_cmp(&cost(*y))).unwrap_or(1.0);
    case.t(b.powf(-n))
}

fn n_relation(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let n = i64::from(case.required_n()?);
    let m = case.m;
    if n % 2 == 0 || m == 0 {
        return Err(Error::Constraint("R8 needs N odd and m != 0".into()));
    }
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let (ln_a, ln_b) = (env.ln(&a), env.ln(&b));
    let np1 = Float::with_val(bits, n + 1);

    // α^{−2Nm/(N+1)} (½ζ(2Nm+1) + Σ n^{−2Nm−1}/(exp((2n)^N α) − 1))
    let c_lhs = env.cf(&(Float::with_val(bits, &a) * env.two_pow(n)));
    let lhs_series = env.lambert_general(-2 * n * m - 1, &c_lhs, n as u32, 1)?;
    let lhs_scale = (Float::with_val(bits, &ln_a * (-2 * n * m)) / &np1).exp();
    let lhs = (env.zeta_i(2 * n * m + 1)? / 2u32 + lhs_series) * &lhs_scale;

    // Rotated series; j and −j are complex conjugates.
    let two_root = (Float::with_val(bits, 2).ln() / n).exp();
    let mut rotated = env.ci(0);
    let half = (n - 1) / 2;
    for j in 0..=half {
        let phase = Float::with_val(bits, env.pi() * j) / n;
        let dir = Complex::with_val(bits, (Float::with_val(bits, phase.cos_ref()), Float::with_val(bits, phase.sin_ref())));
        let c = dir * &b * &two_root;
        let s = env.lambert_general(-2 * m - 1, &c, 1, n as u32)?;
        let s = if j == 0 { s } else { Complex::with_val(bits, s.real() * 2u32) };
        rotated += s * Env::sign(j);
    }
    let sign_n3 = Env::sign((n + 3) / 2);
    let inner = env.zeta_i(2 * m + 1)? / 2u32 + rotated * sign_n3;
    let rhs_scale = (Float::with_val(bits, &ln_b * (-2 * n * m)) / &np1).exp() * Env::sign(m) * env.two_pow(2 * m * (n - 1))
        / n;
    let mut rhs = inner * rhs_scale;

    let top = floor_div(n + 1 + 2 * n * m, 2 * n);
    let mut finite = Float::with_val(bits, 0);
    for j in 0..=top {
        let k = n + 1 + 2 * n * (m - j);
        let c = (env.bern(2 * j)? * env.bern(k)?) / (Env::fact(2 * j) * Env::fact(k));
        let ea = Float::with_val(bits, 2 * j) / &np1;
        let eb = Float::with_val(bits, n) + Float::with_val(bits, 2 * n * n * (m - j)) / &np1;
        let mono = (ea * &ln_a + eb * &ln_b).exp();
        finite += env.rat(&c) * mono * Env::sign(j);
    }
    rhs += finite * env.two_pow(2 * n * m) * Env::sign(m + (n + 3) / 2);
    Ok((lhs, rhs))
}
