//! Complex Γ and digamma by upward shift into the Stirling region.

use rug::ops::Pow;
use rug::{Complex, Float};

use super::bernoulli::bernoulli_float;
use crate::error::{Error, Result};
use crate::numerics::Ctx;

fn check_pole(s: &Complex, ctx: &Ctx) -> Result<()> {
    let re = s.real();
    if *re <= 0.0 {
        let nearest = Float::with_val(ctx.bits(), re.round_ref());
        let d = Complex::with_val(ctx.bits(), s - &nearest);
        if Float::with_val(ctx.bits(), d.abs_ref()) < ctx.eps() {
            return Err(Error::Pole(format!("gamma at non-positive integer {}", nearest.to_f64())));
        }
    }
    Ok(())
}

/// Distance to shift `s` so that Stirling's series reaches working precision.
fn shift_for(s: &Complex, ctx: &Ctx) -> u32 {
    let r = 0.5 * f64::from(ctx.effective_digits()) + 5.0;
    let re = s.real().to_f64();
    let im = s.imag().to_f64();
    if re > 0.0 && re.hypot(im) >= r {
        return 0;
    }
    (r - re).max(0.0).ceil() as u32
}

/// Stirling's series for log Γ(w), valid once |w| is large and Re w > 0.
fn stirling_ln(w: &Complex, ctx: &Ctx) -> Complex {
    let b = ctx.bits();
    let eps = ctx.eps() / 1000;
    let ln_w = Complex::with_val(b, w.ln_ref());
    let half_ln_2pi = Float::with_val(b, ctx.pi() * 2u32).ln() / 2u32;
    let mut acc = Complex::with_val(b, w - 0.5f64) * &ln_w - w + &half_ln_2pi;
    let w_inv = Complex::with_val(b, w.recip_ref());
    let w_inv2 = Complex::with_val(b, w_inv.square_ref());
    let mut pw = w_inv;
    for k in 1..500usize {
        let c = bernoulli_float(2 * k, b) / ((2 * k * (2 * k - 1)) as u64);
        let t = Complex::with_val(b, &pw * &c);
        let mag = Float::with_val(b, t.abs_ref());
        acc += t;
        if mag < eps {
            break;
        }
        pw *= &w_inv2;
    }
    acc
}

/// Γ(s) for complex s off the poles.
pub fn gamma(s: &Complex, ctx: &Ctx) -> Result<Complex> {
    check_pole(s, ctx)?;
    let work = ctx.extended(6);
    let b = work.bits();
    let shift = shift_for(s, &work);
    let mut prod = Complex::with_val(b, 1);
    let mut w = Complex::with_val(b, s);
    for _ in 0..shift {
        prod *= &w;
        w += 1u32;
    }
    let g = stirling_ln(&w, &work).exp() / prod;
    Ok(Complex::with_val(ctx.bits(), g))
}

/// 1/Γ(s), which is entire; returns exact zero at the poles of Γ.
pub fn recip_gamma(s: &Complex, ctx: &Ctx) -> Complex {
    match gamma(s, ctx) {
        Ok(g) => g.recip(),
        Err(_) => ctx.czero(),
    }
}

/// ψ(s) = Γ′(s)/Γ(s).
pub fn digamma(s: &Complex, ctx: &Ctx) -> Result<Complex> {
    check_pole(s, ctx)?;
    let work = ctx.extended(4);
    let b = work.bits();
    let shift = shift_for(s, &work);
    let mut acc = Complex::with_val(b, 0);
    let mut w = Complex::with_val(b, s);
    for _ in 0..shift {
        acc -= Complex::with_val(b, w.recip_ref());
        w += 1u32;
    }
    let eps = work.eps() / 1000;
    acc += Complex::with_val(b, w.ln_ref());
    acc -= Complex::with_val(b, w.recip_ref()) / 2u32;
    let w_inv2 = Complex::with_val(b, w.square_ref()).recip();
    let mut pw = w_inv2.clone();
    for k in 1..500usize {
        let c = bernoulli_float(2 * k, b) / (2 * k as u64);
        let t = Complex::with_val(b, &pw * &c);
        let mag = Float::with_val(b, t.abs_ref());
        acc -= t;
        if mag < eps {
            break;
        }
        pw *= &w_inv2;
    }
    Ok(Complex::with_val(ctx.bits(), acc))
}

/// n! as a float.
pub fn factorial(n: u32, bits: u32) -> Float {
    Float::with_val(bits, Float::factorial(n))
}

/// x^n for integer n, complex base.
pub fn cpowi(x: &Complex, n: i32, bits: u32) -> Complex {
    Complex::with_val(bits, x.pow(n))
}
