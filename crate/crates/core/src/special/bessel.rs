//! Modified Bessel functions I_z(w) and K_z(w) for complex order and argument.
//!
//! K is evaluated by one of three paths: the defining combination
//! (π/2)(I_{−z} − I_z)/sin(πz) for non-integer order, the logarithmic
//! series for integer order, or the large-argument asymptotic expansion.
//! Orders within 10^{−digits/4} of an integer use the integer value plus a
//! first-order correction in the order.

use rug::ops::Pow;
use rug::{Complex, Float};

use super::gamma::recip_gamma;
use crate::error::{Error, Result};
use crate::numerics::Ctx;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KStrategy {
    Series,
    IntegerSeries,
    NearInteger,
    Asymptotic,
}

const LN10: f64 = std::f64::consts::LN_10;

fn abs_f64(z: &Complex) -> f64 {
    let (re, im) = (z.real().to_f64(), z.imag().to_f64());
    re.hypot(im)
}

fn mag(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// Argument modulus above which the asymptotic expansion is used.
pub fn crossover(ctx: &Ctx) -> f64 {
    (1.1 * f64::from(ctx.effective_digits()) * LN10 / 2.0).max(25.0)
}

/// Returns Some(n) when z is exactly the integer n.
fn exact_integer(z: &Complex) -> Option<i64> {
    if !z.imag().is_zero() {
        return None;
    }
    let re = z.real();
    if re.is_integer() {
        re.to_i32_saturating().map(i64::from)
    } else {
        None
    }
}

/// Power series Σ (w/2)^{z+2k} / (k! Γ(z+k+1)) at the precision of `ctx`.
fn i_series(z: &Complex, w: &Complex, ctx: &Ctx) -> Complex {
    let b = ctx.bits();
    let half_w = Complex::with_val(b, w / 2u32);
    let q = Complex::with_val(b, half_w.square_ref());
    let mut z = Complex::with_val(b, z);
    if let Some(n) = exact_integer(&z) {
        if n < 0 {
            z = -z;
        }
    }
    let lead = Complex::with_val(b, (&half_w).pow(&z));
    let zp1 = Complex::with_val(b, &z + 1u32);
    let mut term = lead * recip_gamma(&zp1, ctx);
    let mut acc = term.clone();
    let eps = ctx.eps();
    let peak = abs_f64(&half_w) + abs_f64(&z);
    let mut k = 0u64;
    loop {
        k += 1;
        let denom = Complex::with_val(b, &z + k) * k;
        term *= &q;
        term /= denom;
        acc += &term;
        if k as f64 > peak && mag(&term) < Float::with_val(b, mag(&acc) * &eps) {
            break;
        }
        if k > 100_000 {
            break;
        }
    }
    acc
}

/// Digits lost to cancellation when K ~ e^{−w} is recovered from I-type
/// series whose terms reach e^{|w|}.
fn cancellation_digits(w: &Complex) -> u32 {
    let r = abs_f64(w);
    let re = w.real().to_f64();
    ((r + re.max(0.0)) / LN10).ceil() as u32 + 5
}

pub fn bessel_i(z: &Complex, w: &Complex, ctx: &Ctx) -> Result<Complex> {
    let r = abs_f64(w);
    if !r.is_finite() || r > 1e8 {
        return Err(Error::InvalidArgument("bessel_i argument beyond exponent range".into()));
    }
    if w.is_zero() {
        return Ok(if z.is_zero() { Complex::with_val(ctx.bits(), 1) } else { ctx.czero() });
    }
    let loss = ((r - w.real().to_f64().abs()) / LN10).ceil() as u32 + 5;
    let work = ctx.extended(loss);
    Ok(Complex::with_val(ctx.bits(), i_series(z, w, &work)))
}

fn k_noninteger_series(z: &Complex, w: &Complex, ctx: &Ctx) -> Complex {
    let pz = Complex::with_val(53, z * std::f64::consts::PI).sin();
    let sin_loss = (-abs_f64(&pz).max(1e-300).log10()).max(0.0).ceil() as u32;
    let work = ctx.extended(cancellation_digits(w) + sin_loss);
    let b = work.bits();
    let neg = Complex::with_val(b, -z);
    let diff = i_series(&neg, w, &work) - i_series(z, w, &work);
    let s = Complex::with_val(b, z * work.pi()).sin();
    let k = diff / s * work.pi() / 2u32;
    Complex::with_val(ctx.bits(), k)
}

/// K_n(w) for integer n ≥ 0 by the logarithmic series.
fn k_integer_series(n: u32, w: &Complex, ctx: &Ctx) -> Complex {
    let work = ctx.extended(cancellation_digits(w));
    let b = work.bits();
    let half_w = Complex::with_val(b, w / 2u32);
    let q = Complex::with_val(b, half_w.square_ref());
    let gamma = work.euler_gamma();
    let sign = if n.is_multiple_of(2) { 1i32 } else { -1 };

    // ½(w/2)^{−n} Σ_{k<n} (n−k−1)!/k! (−q)^k
    let mut finite = Complex::with_val(b, 0);
    if n > 0 {
        let neg_q = Complex::with_val(b, -&q);
        let mut pw = Complex::with_val(b, 1);
        for k in 0..n {
            let c = Float::with_val(b, Float::factorial(n - k - 1))
                / Float::with_val(b, Float::factorial(k));
            finite += Complex::with_val(b, &pw * &c);
            pw *= &neg_q;
        }
        finite /= Complex::with_val(b, (&half_w).pow(n)) * 2u32;
    }

    // Series Σ_k (ψ(k+1) + ψ(n+k+1)) q^k / (k!(n+k)!) together with I_n.
    let mut pw = Complex::with_val(b, 1);
    let mut inv_fact = Float::with_val(b, Float::factorial(n)).recip();
    let mut h_k = Float::with_val(b, 0);
    let mut h_nk = Float::with_val(b, 0);
    for j in 1..=n {
        h_nk += Float::with_val(b, 1) / j;
    }
    let mut psi_sum = Complex::with_val(b, 0);
    let mut i_sum = Complex::with_val(b, 0);
    let eps = work.eps();
    let peak = abs_f64(&half_w) + f64::from(n);
    let mut k = 0u64;
    loop {
        let t = Complex::with_val(b, &pw * &inv_fact);
        let psi = Float::with_val(b, &h_k + &h_nk) - Float::with_val(b, &gamma * 2u32);
        let pt = Complex::with_val(b, &t * &psi);
        i_sum += &t;
        psi_sum += &pt;
        if k as f64 > peak && mag(&pt).max(&mag(&t)) < Float::with_val(b, mag(&psi_sum).max(&mag(&i_sum)) * &eps) {
            break;
        }
        k += 1;
        pw *= &q;
        inv_fact /= k * (k + u64::from(n));
        h_k += Float::with_val(b, 1) / k;
        h_nk += Float::with_val(b, 1) / (k + u64::from(n));
        if k > 100_000 {
            break;
        }
    }
    let half_w_n = Complex::with_val(b, (&half_w).pow(n));
    let i_n = Complex::with_val(b, &i_sum * &half_w_n);
    let log_part = Complex::with_val(b, half_w.ln_ref()) * i_n * (-sign);
    let psi_part = psi_sum * half_w_n * sign / 2u32;
    Complex::with_val(ctx.bits(), finite + log_part + psi_part)
}

/// √(π/(2w)) e^{−w} Σ a_k(z)/w^k with a_k = Π_{i≤k}(4z² − (2i−1)²)/(k! 8^k).
fn k_asymptotic(z: &Complex, w: &Complex, ctx: &Ctx) -> Result<Complex> {
    let work = ctx.extended(3);
    let b = work.bits();
    let mu = Complex::with_val(b, z.square_ref()) * 4u32;
    let w_inv = Complex::with_val(b, w.recip_ref());
    let eps = work.eps();
    let mut term = Complex::with_val(b, 1);
    let mut acc = Complex::with_val(b, 1);
    let mut prev = Float::with_val(b, 1);
    let mut converged = false;
    for k in 1..10_000u64 {
        let odd = (2 * k - 1) * (2 * k - 1);
        let factor = Complex::with_val(b, &mu - odd) / (8 * k);
        term *= factor;
        term *= &w_inv;
        let m = mag(&term);
        acc += &term;
        if m < Float::with_val(b, mag(&acc) * &eps) {
            converged = true;
            break;
        }
        if m > prev && k > 2 {
            break;
        }
        prev = m;
    }
    if !converged {
        return Err(Error::Convergence("asymptotic K expansion diverged before reaching tolerance".into()));
    }
    let pref = (Complex::with_val(b, work.pi() / Complex::with_val(b, w * 2u32))).sqrt();
    let e = Complex::with_val(b, -w).exp();
    Ok(Complex::with_val(ctx.bits(), pref * e * acc))
}

/// ∂K_ν(w)/∂ν at ν = n ≥ 0:
/// (n!(w/2)^{−n}/2) Σ_{k<n} (w/2)^k K_k(w) / ((n−k) k!).
fn k_order_derivative(n: u32, w: &Complex, ctx: &Ctx) -> Result<Complex> {
    let b = ctx.bits();
    if n == 0 {
        return Ok(ctx.czero());
    }
    let half_w = Complex::with_val(b, w / 2u32);
    let mut acc = ctx.czero();
    for k in 0..n {
        let kk = bessel_k(&ctx.cx(f64::from(k), 0.0), w, ctx)?;
        let c = Float::with_val(b, Float::factorial(k)) * (n - k);
        acc += Complex::with_val(b, (&half_w).pow(k)) * kk / c;
    }
    let pref = Float::with_val(b, Float::factorial(n)) / 2u32;
    Ok(acc * pref / Complex::with_val(b, (&half_w).pow(n)))
}

/// The path [`bessel_k`] takes for (z, w).
pub fn k_strategy(z: &Complex, w: &Complex, ctx: &Ctx) -> KStrategy {
    let large = abs_f64(w) >= crossover(ctx);
    if exact_integer(z).is_some() {
        return if large { KStrategy::Asymptotic } else { KStrategy::IntegerSeries };
    }
    if large {
        return KStrategy::Asymptotic;
    }
    let n = z.real().to_f64().round();
    let dist = (z.real().to_f64() - n).hypot(z.imag().to_f64());
    // The first-order expansion in the order is off by O(dist²).
    if dist < 10f64.powf(-f64::from(ctx.effective_digits()) / 2.0) {
        KStrategy::NearInteger
    } else {
        KStrategy::Series
    }
}

fn check_arg(w: &Complex) -> Result<()> {
    if !(*w.real() > 0) {
        return Err(Error::InvalidArgument("K_z(w) requires Re w > 0".into()));
    }
    Ok(())
}

/// K_z(w) for |arg w| < π/2.
pub fn bessel_k(z: &Complex, w: &Complex, ctx: &Ctx) -> Result<Complex> {
    check_arg(w)?;
    // K_{−z} = K_z: work with Re z ≥ 0.
    let z = if *z.real() < 0 || (z.real().is_zero() && *z.imag() < 0) {
        Complex::with_val(ctx.bits(), -z)
    } else {
        Complex::with_val(ctx.bits(), z)
    };
    bessel_k_with(&z, w, ctx, k_strategy(&z, w, ctx))
}

/// K_z(w) along a specific path. Used directly by consistency checks.
pub fn bessel_k_with(z: &Complex, w: &Complex, ctx: &Ctx, strategy: KStrategy) -> Result<Complex> {
    check_arg(w)?;
    match strategy {
        KStrategy::Asymptotic => match k_asymptotic(z, w, ctx) {
            Ok(v) => Ok(v),
            Err(_) => {
                let fallback = if exact_integer(z).is_some() { KStrategy::IntegerSeries } else { KStrategy::Series };
                bessel_k_with(z, w, ctx, fallback)
            }
        },
        KStrategy::IntegerSeries => {
            let n = exact_integer(z)
                .ok_or_else(|| Error::InvalidArgument("integer-order path needs an integer order".into()))?;
            Ok(k_integer_series(n.unsigned_abs() as u32, w, ctx))
        }
        KStrategy::Series => Ok(k_noninteger_series(z, w, ctx)),
        KStrategy::NearInteger => {
            let n = z.real().to_f64().round();
            let delta = Complex::with_val(ctx.bits(), z - n);
            let (n, delta) = if n < 0.0 { (-n, -delta) } else { (n, delta) };
            let base = k_integer_series(n as u32, w, ctx);
            let d = k_order_derivative(n as u32, w, ctx)?;
            Ok(base + d * delta)
        }
    }
}

/// Evaluates K_z(w) by both the series path and the asymptotic path and
/// returns their relative disagreement. Errors if it exceeds 10^{−digits+10}.
pub fn bessel_k_agreement(z: &Complex, w: &Complex, ctx: &Ctx) -> Result<Float> {
    let series = if exact_integer(z).is_some() { KStrategy::IntegerSeries } else { KStrategy::Series };
    let a = bessel_k_with(z, w, ctx, series)?;
    let b = k_asymptotic(z, w, ctx)?;
    let d = Complex::with_val(ctx.bits(), &a - &b);
    let rel = mag(&d) / mag(&a);
    if rel > ctx.pow10(-(ctx.digits() as i32) + 10) {
        return Err(Error::Disagreement(format!("K series vs asymptotic differ by {:e}", rel.to_f64())));
    }
    Ok(rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{set_precision, Precision};

    fn ctx() -> Ctx {
        set_precision(Precision::new(40).unwrap()).unwrap()
    }

    fn rel(a: &Complex, b: &Complex) -> f64 {
        let d = Complex::with_val(a.prec().0, a - b);
        (mag(&d) / mag(b)).to_f64()
    }

    #[test]
    fn i_closed_forms() {
        let c = ctx();
        let one = bessel_i(&c.cx(0.0, 0.0), &c.cx(0.0, 0.0), &c).unwrap();
        assert_eq!(one, Complex::with_val(c.bits(), 1));
        // I_{1/2}(1) = √(2/π) sinh 1
        let v = bessel_i(&c.cx(0.5, 0.0), &c.cx(1.0, 0.0), &c).unwrap();
        let want = c.cx_real(&((c.int(2) / c.pi()).sqrt() * c.int(1).sinh()));
        assert!(rel(&v, &want) < 1e-39);
    }

    #[test]
    fn i_complex_order_matches_doubled_precision() {
        let c = ctx();
        let hi = c.extended(40);
        let (z, w) = (c.cx(0.3, 0.2), c.cx(1.0, 1.0));
        let a = bessel_i(&z, &w, &c).unwrap();
        let b = bessel_i(&hi.cx(0.3, 0.2), &hi.cx(1.0, 1.0), &hi).unwrap();
        assert!(rel(&a, &b) < 1e-39);
    }

    #[test]
    fn k_half_order_closed_form() {
        let c = ctx();
        // K_{1/2}(2) = √(π/4) e^{−2}
        let v = bessel_k(&c.cx(0.5, 0.0), &c.cx(2.0, 0.0), &c).unwrap();
        let want = c.cx_real(&((c.pi() / 4u32).sqrt() * c.int(-2).exp()));
        assert!(rel(&v, &want) < 1e-39);
        let far = bessel_k(&c.cx(0.5, 0.0), &c.cx(120.0, 30.0), &c).unwrap();
        let w = c.cx(120.0, 30.0);
        let want = (Complex::with_val(c.bits(), c.pi() / Complex::with_val(c.bits(), &w * 2u32))).sqrt()
            * Complex::with_val(c.bits(), -&w).exp();
        assert!(rel(&far, &want) < 1e-39);
    }

    #[test]
    fn k0_at_one_matches_quadrature_oracle() {
        // ∫₀^∞ e^{−cosh t} dt by the trapezoid rule, which converges
        // geometrically for this analytic, doubly decaying integrand.
        let c = ctx();
        let b = c.bits();
        let h = c.ratio(1, 64);
        let mut acc = Float::with_val(b, 0.5) * c.int(-1).exp();
        let cutoff = Float::with_val(b, 10).pow(-45);
        for j in 1.. {
            let t = Float::with_val(b, &h * j);
            let v = (-t.cosh()).exp();
            if v < cutoff {
                break;
            }
            acc += v;
        }
        acc *= &h;
        let k = bessel_k(&c.cx(0.0, 0.0), &c.cx(1.0, 0.0), &c).unwrap();
        assert!(rel(&k, &c.cx_real(&acc)) < 1e-39);
        assert!((k.real().to_f64() - 0.421_024_438_240_708_3).abs() < 1e-15);
    }

    #[test]
    fn integer_order_satisfies_wronskian() {
        // For real positive x, MPFR has no K_n, so check the integer series
        // against the Wronskian I_n K_{n+1} + I_{n+1} K_n = 1/x.
        let c = ctx();
        for &x in &[0.5, 3.0, 17.0, 60.0] {
            for n in 0..3 {
                let w = c.cx(x, 0.0);
                let i_n = bessel_i(&c.cx(f64::from(n), 0.0), &w, &c).unwrap();
                let i_n1 = bessel_i(&c.cx(f64::from(n + 1), 0.0), &w, &c).unwrap();
                let k_n = bessel_k(&c.cx(f64::from(n), 0.0), &w, &c).unwrap();
                let k_n1 = bessel_k(&c.cx(f64::from(n + 1), 0.0), &w, &c).unwrap();
                let lhs = i_n * k_n1 + i_n1 * k_n;
                let want = c.cx_real(&(c.int(1) / c.real(x)));
                assert!(rel(&lhs, &want) < 1e-37, "x = {x}, n = {n}");
            }
        }
    }

    #[test]
    fn strategies_agree_in_crossover_annulus() {
        let c = ctx();
        let r = crossover(&c);
        for (z, arg) in [((0.0, 0.0), 0.3f64), ((0.3, 0.0), 0.785), ((0.5, 0.25), -0.785), ((2.0, 0.0), 0.1), ((1.0, 0.5), 0.6)] {
            let w = Complex::with_val(c.bits(), (r * arg.cos(), r * arg.sin()));
            let d = bessel_k_agreement(&c.cx(z.0, z.1), &w, &c).unwrap();
            assert!(d < 1e-30, "z = {z:?}");
        }
    }

    #[test]
    fn near_integer_order_continuous() {
        let c = ctx();
        let w = c.cx(3.0, 2.0);
        let tiny = c.cx(1.0, 1e-40);
        assert_eq!(k_strategy(&tiny, &w, &c), KStrategy::NearInteger);
        let a = bessel_k(&tiny, &w, &c).unwrap();
        let b = bessel_k(&c.cx(1.0, 0.0), &w, &c).unwrap();
        assert!(rel(&a, &b) < 1e-39);
        // Series with extra precision against the expansion, which is good to O(δ²).
        let z = c.cx(1.0 + 1e-12, 0.0);
        assert_eq!(k_strategy(&z, &w, &c), KStrategy::Series);
        let series = bessel_k(&z, &w, &c).unwrap();
        let near = bessel_k_with(&z, &w, &c, KStrategy::NearInteger).unwrap();
        assert!(rel(&near, &series) < 1e-22);
        assert!(rel(&series, &b) > 1e-14);
    }

    #[test]
    fn negative_real_part_rejected() {
        let c = ctx();
        assert!(bessel_k(&c.cx(0.0, 0.0), &c.cx(-1.0, 0.5), &c).is_err());
    }
}
