//! The N-families: Σ d(n) n^{−e} Ω_α(n^N) against sums of Ω_β at rotated
//! roots e^{iθ} n^{1/N}, tied by αβ^N = π^{N+1}.
//!
//! The rotated arguments decay like exp(−c M^{1/(2N)}) while the left side
//! decays like exp(−c′ M^{1/2}), so the split between α and β decides the
//! cost. `balanced_scale` picks it by equalising a model of both cutoffs.

use rug::{Complex, Float};

use super::env::{floor_div, Env};
use super::{IdentityCase, IdentityId};
use crate::error::{Error, Result};
use crate::omega::{Weight, XMap};

const DELTA: f64 = 0.25;
/// Log of the relative truncation target used when choosing the split.
const MODEL_TARGET: f64 = 75.0;

pub(super) fn evaluate(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    match case.id {
        IdentityId::T7 => odd_relation(case, env),
        IdentityId::T8 => general(case, env),
        IdentityId::T9 => even_relation(case, env),
        _ => unreachable!("not an N-family identity"),
    }
}

/// Smallest r = M^{1/(2q)} past which the tail model drops below e^{−target}.
fn model_cutoff(c: f64, q: f64, tau: f64, target: f64) -> f64 {
    let tail = |r: f64| {
        let m_ln = 2.0 * q * r.ln();
        4f64.ln() + (tau + DELTA - 0.25 / q) * m_ln - c * (r - 1.0)
            + (1.0 + 2.0 * q * (m_ln * (1.0 - 0.5 / q)).exp() / c).ln()
    };
    let mut hi = 2.0;
    while tail(hi) > -target {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > -target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Half-angles θ/2 of the distinct rotated arguments, up to conjugation.
fn half_angles(n: u32) -> Vec<f64> {
    let nf = f64::from(n);
    let pi = std::f64::consts::PI;
    if n % 2 == 1 {
        (0..=(n - 1) / 2).map(|j| f64::from(j) * pi / (2.0 * nf)).collect()
    } else {
        (0..n / 2).map(|j| f64::from(2 * j + 1) * pi / (4.0 * nf)).collect()
    }
}

/// Scale t = α/π that balances the number of kernel terms on the two sides
/// for weights n^{−e_lhs} (outer argument n^N) and n^{−e_rhs} (outer
/// argument e^{iθ} n^{1/N}).
pub fn balanced_scale(n: u32, e_lhs: f64, e_rhs: f64) -> f64 {
    let nf = f64::from(n);
    let pi = std::f64::consts::PI;
    let quarter = std::f64::consts::FRAC_PI_4;
    let tau_l = (-e_lhs).max(0.0) / nf;
    let tau_r = (-e_rhs).max(0.0);
    let cost = |b: f64| {
        let alpha = pi / b.powf(nf);
        let beta = pi * b;
        let r_l = model_cutoff(4.0 * alpha * quarter.cos(), 1.0, tau_l, MODEL_TARGET);
        let mut total = r_l * r_l;
        for th in half_angles(n) {
            let c = 4.0 * beta * (th + quarter).cos();
            total += model_cutoff(c, nf, tau_r, MODEL_TARGET).powf(2.0 * nf);
        }
        total
    };
    let mut best = (f64::INFINITY, 1.0);
    for i in 0..=200 {
        let b = 1.0 + 0.05 * f64::from(i);
        let c = cost(b);
        if c < best.0 {
            best = (c, b);
        }
    }
    best.1.powf(-nf)
}

/// Sets t on a T7/T8/T9 case from `balanced_scale`.
pub(super) fn balanced_case(case: IdentityCase) -> IdentityCase {
    let n = case.n.unwrap_or(1);
    let nf = f64::from(n);
    let m = case.m as f64;
    let (e_l, e_r) = match case.id {
        IdentityId::T7 => (2.0 * nf * m + 1.0, 2.0 * m + 1.0),
        IdentityId::T8 => {
            let h = case.h.unwrap_or(0) as f64;
            (2.0 * h - nf, (2.0 * h - 1.0) / nf)
        }
        _ => (2.0 * nf * m, 2.0 * m + 1.0 - 1.0 / nf),
    };
    let t = balanced_scale(n, e_l, e_r);
    case.t(t)
}

/// Σ_j coeff(j) Σ_n d(n) n^{−e} Ω_β(x_j(n)) over the rotations of the
/// family, with conjugate pairs folded into twice the real part.
fn rotated_sum(n: u32, beta: &Float, e: &Complex, coeff: impl Fn(i64) -> Complex, env: &Env) -> Result<Complex> {
    let w = Weight::new(env.ci(0), e.clone());
    let z = env.ci(0);
    let mut acc = env.ci(0);
    let ni = i64::from(n);
    if n % 2 == 1 {
        for j in 0..=(ni - 1) / 2 {
            let s = env.omega_sum(beta, &z, &w, &XMap::rotated_root(n, j))? * coeff(j);
            acc += if j == 0 { s } else { Complex::with_val(env.bits, s.real() * 2u32) };
        }
    } else {
        for j in 0..ni / 2 {
            let s = env.omega_sum(beta, &z, &w, &XMap::half_rotated_root(n, j))? * coeff(j);
            acc += Complex::with_val(env.bits, s.real() * 2u32);
        }
    }
    Ok(acc)
}

fn unit(angle: Float, env: &Env) -> Complex {
    Complex::with_val(env.bits, (Float::with_val(env.bits, angle.cos_ref()), Float::with_val(env.bits, angle.sin_ref())))
}

/// ζ(s)(ζ(s)(γ + ℓ) − k ζ′(s))
fn zeta_square_term(s: &Complex, ell: &Complex, k: &Float, env: &Env) -> Result<Complex> {
    let (z, zp) = env.zeta_d(s)?;
    Ok(Complex::with_val(env.bits, &z * (z.clone() * (env.gamma() + ell) - zp * k)))
}

/// Σ_j (−1)^j 2^{4j(1−N)} B²_{2j} B²_{k_j} / ((2j)! k_j!)² α^{4j/(N+1)} β^{b_j}
fn squared_bernoulli_sum(
    n: i64,
    top: i64,
    index: impl Fn(i64) -> i64,
    beta_exp: impl Fn(i64) -> Float,
    a: &Float,
    b: &Float,
    env: &Env,
) -> Result<Float> {
    let bits = env.bits;
    let (ln_a, ln_b) = (env.ln(a), env.ln(b));
    let np1 = Float::with_val(bits, n + 1);
    let mut acc = Float::with_val(bits, 0);
    for j in 0..=top {
        let k = index(j);
        let c = (env.bern(2 * j)? * env.bern(k)?) / (Env::fact(2 * j) * Env::fact(k));
        let c = c.square();
        let mono = (Float::with_val(bits, &ln_a * (4 * j)) / &np1 + beta_exp(j) * &ln_b).exp();
        acc += env.rat(&c) * mono * env.two_pow(4 * j * (1 - n)) * Env::sign(j);
    }
    Ok(acc)
}

fn odd_relation(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let n = case.required_n()?;
    let m = case.m;
    if n % 2 == 0 || m == 0 {
        return Err(Error::Constraint("T7 needs N odd and m != 0".into()));
    }
    let ni = i64::from(n);
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let pi = env.pi();
    let np1 = Float::with_val(bits, ni + 1);
    let nf = Float::with_val(bits, ni);
    let (ln_a, ln_b) = (env.ln(&a), env.ln(&b));

    let s_l = env.ci(2 * ni * m + 1);
    let ell_a = env.cf(&env.ln(&Float::with_val(bits, &a / &pi)));
    let w = Weight::new(env.ci(0), s_l.clone());
    let series_l = env.omega_sum(&a, &env.ci(0), &w, &XMap::power(n))?;
    let scale_l = (Float::with_val(bits, &ln_a * (-4 * ni * m)) / &np1).exp();
    let lhs = (zeta_square_term(&s_l, &ell_a, &nf, env)? + series_l) * scale_l;

    let s_r = env.ci(2 * m + 1);
    let ell_b = env.cf(&env.ln(&Float::with_val(bits, &b / &pi)));
    let rotated = rotated_sum(n, &b, &s_r, |j| env.ci(i64::from(Env::sign(j))), env)?;
    let inner = zeta_square_term(&s_r, &ell_b, &nf.clone().recip(), env)? + rotated * Env::sign((ni + 3) / 2);
    let scale_r = (Float::with_val(bits, &ln_b * (-4 * ni * m)) / &np1).exp() * Env::sign(m) / &nf;
    let top = floor_div(ni + 1 + 2 * ni * m, 2 * ni);
    let finite = squared_bernoulli_sum(
        ni,
        top,
        |j| ni + 1 + 2 * ni * (m - j),
        |j| Float::with_val(bits, 2 * ni) + Float::with_val(bits, 4 * ni * ni * (m - j)) / &np1,
        &a,
        &b,
        env,
    )?;
    let rhs = inner * scale_r - env.cf(&(finite * &pi * env.two_pow(2 * ni - 2 + 4 * ni * m)));
    Ok((lhs, rhs))
}

fn general(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let n = case.required_n()?;
    let h = case.h.ok_or_else(|| Error::InvalidArgument("T8 needs h".into()))?;
    let ni = i64::from(n);
    if 2 * h == ni + 1 {
        return Err(Error::Constraint("T8 needs h != (N+1)/2".into()));
    }
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let pi = env.pi();
    let nf = Float::with_val(bits, ni);

    let w = Weight::new(env.ci(0), env.ci(2 * h - ni));
    let lhs = env.omega_sum(&a, &env.ci(0), &w, &XMap::power(n))?;

    // P(α)
    let log_a = env.ln(&Float::with_val(bits, &a / &pi));
    let (z0, zp0) = env.zeta_d(&env.ci(2 * h - ni))?;
    let mut p = Complex::with_val(bits, &z0 * (zp0 * &nf - z0.clone() * (env.ctx.euler_gamma() + &log_a)));

    let frac = Float::with_val(bits, 2 * h - 1) / &nf;
    let (zf, zpf) = env.zeta_d(&env.cf(&frac))?;
    let angle = Float::with_val(bits, &frac * &pi) / 2u32;
    let csc = Float::with_val(bits, angle.sin_ref()).recip();
    let cot = Float::with_val(bits, angle.tan_ref()).recip();
    let pi_a = Float::with_val(bits, &pi / &a);
    let pref = env.powr(&pi_a, &(Float::with_val(bits, 2 * (ni - 2 * h + 1)) / &nf));
    let real_part = Float::with_val(bits, &pi * &cot) / 4u32 + env.ctx.euler_gamma() * &nf - &log_a;
    let brace = Complex::with_val(bits, &zf * env.cf(&real_part)) - zpf;
    p += zf * brace * csc * &pref / Float::with_val(bits, nf.square_ref());

    for k in 0..=floor_div(h, ni) {
        let zk = env.zeta_i(2 * k)? * env.zeta_i(2 * h - 2 * ni * k)?;
        let mono = env.powi(&pi, 1 - 4 * k) * env.powi(&a, 4 * k - 2);
        p += Complex::with_val(bits, zk.square_ref()) * mono * Env::sign(k + 1);
    }

    // S(α)
    let e = env.cf(&frac);
    let phase_step = Float::with_val(bits, &pi * (2 * h - 1)) / &nf;
    let rotated = if n % 2 == 1 {
        rotated_sum(n, &b, &e, |j| unit(Float::with_val(bits, &phase_step * j), env), env)?
    } else {
        rotated_sum(n, &b, &e, |j| unit(Float::with_val(bits, &phase_step * (2 * j + 1)) / 2u32, env), env)?
    };
    let s = rotated * &pref * Env::sign(h + 1) / &nf;
    Ok((lhs, p + s))
}

fn even_relation(case: &IdentityCase, env: &Env) -> Result<(Complex, Complex)> {
    let n = case.required_n()?;
    let m = case.m;
    if n % 2 == 1 || m < 1 {
        return Err(Error::Constraint("T9 needs N even and m >= 1".into()));
    }
    let ni = i64::from(n);
    let (a, b) = case.alpha_beta(env.ctx)?;
    let bits = env.bits;
    let pi = env.pi();
    let np1 = Float::with_val(bits, ni + 1);
    let nf = Float::with_val(bits, ni);
    let (ln_a, ln_b) = (env.ln(&a), env.ln(&b));

    let s_l = env.ci(2 * ni * m);
    let ell_a = env.cf(&env.ln(&Float::with_val(bits, &a / &pi)));
    let w = Weight::new(env.ci(0), s_l.clone());
    let series_l = env.omega_sum(&a, &env.ci(0), &w, &XMap::power(n))?;
    let scale_l = (Float::with_val(bits, &ln_a * -(4 * ni * m - 2)) / &np1).exp();
    let lhs = (zeta_square_term(&s_l, &ell_a, &nf, env)? + series_l) * scale_l;

    let s_r = env.cf(&(Float::with_val(bits, 2 * m + 1) - nf.clone().recip()));
    let angle = Float::with_val(bits, &pi / &nf) / 2u32;
    let tan_term = Float::with_val(bits, &pi * Float::with_val(bits, angle.tan_ref())) / Float::with_val(bits, &nf * 4u32);
    let ell_b = env.cf(&(env.ln(&Float::with_val(bits, &b / &pi)) + tan_term));
    let cos = Float::with_val(bits, angle.cos_ref());
    let zeta_part = zeta_square_term(&s_r, &ell_b, &nf.clone().recip(), env)? * Env::sign(m) / cos;
    // (−1)^j i e^{−i(2j+1)π/(2N)}
    let step = Float::with_val(bits, -&pi) / Float::with_val(bits, 2 * ni);
    let coeff = |j: i64| {
        let u = unit(Float::with_val(bits, &step * (2 * j + 1)), env) * Env::sign(j);
        Complex::with_val(bits, (Float::with_val(bits, -u.imag()), Float::with_val(bits, u.real())))
    };
    let rotated = rotated_sum(n, &b, &s_r, coeff, env)?;
    let inner = zeta_part + rotated * Env::sign(ni / 2 + 1 + m);
    let scale_r = (Float::with_val(bits, &ln_b * -(4 * ni * m - 2)) / &np1).exp() / &nf;
    let finite = squared_bernoulli_sum(
        ni,
        m,
        |j| ni + 2 * ni * (m - j),
        |j| Float::with_val(bits, 2 * ni) + Float::with_val(bits, 4 * ni * ni * (m - j) - 2 * ni) / &np1,
        &a,
        &b,
        env,
    )?;
    let rhs = inner * scale_r - env.cf(&(finite * &pi * env.two_pow(2 * ni + 4 * ni * m - 4)));
    Ok((lhs, rhs))
}
