//! The first nontrivial zero of ζ on the critical line.

use rug::ops::Pow;
use rug::{Complex, Float};

use super::gamma::gamma;
use super::zeta::{zeta, zeta_eval};
use crate::error::{Error, Result};
use crate::numerics::{set_precision, Ctx, Precision};

/// Hardy's Z(t) = e^{iθ(t)} ζ(1/2 + it), real for real t.
pub fn hardy_z(t: &Float, ctx: &Ctx) -> Result<Float> {
    let b = ctx.bits();
    let g = gamma(&Complex::with_val(b, (0.25, Float::with_val(b, t / 2u32))), ctx)?;
    let unit = Complex::with_val(b, &g / Float::with_val(b, g.abs_ref()));
    let pi_pow = Complex::with_val(b, (ctx.pi(), 0)).pow(Complex::with_val(b, (0, Float::with_val(b, t / 2u32) * -1i32)));
    let z = zeta(&Complex::with_val(b, (0.5, t)), ctx)?;
    Ok((unit * pi_pow * z).real().clone())
}

/// ω = 1/2 + i t₁ with t₁ the smallest positive ordinate of a zero.
pub fn find_first_nontrivial_zero(p: Precision) -> Result<Complex> {
    let ctx = set_precision(p)?;
    let coarse = Ctx::raw(20);
    let mut lo = coarse.real(14.0);
    let mut hi = coarse.real(15.0);
    let z_lo = hardy_z(&lo, &coarse)?;
    let z_hi = hardy_z(&hi, &coarse)?;
    if z_lo.is_sign_negative() == z_hi.is_sign_negative() {
        return Err(Error::Convergence("no sign change of Z(t) on [14, 15]".into()));
    }
    let lo_neg = z_lo.is_sign_negative();
    for _ in 0..24 {
        let mid = Float::with_val(coarse.bits(), &lo + &hi) / 2u32;
        let zm = hardy_z(&mid, &coarse)?;
        if zm.is_sign_negative() == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b = ctx.bits();
    let mut t = Float::with_val(b, &lo + &hi) / 2u32;
    let stop = ctx.eps() * 100u32;
    for _ in 0..60 {
        let s = Complex::with_val(b, (0.5, &t));
        let ev = zeta_eval(&s, &ctx)?;
        let d = ev.derivative.expect("derivative requested");
        // d/dt ζ(1/2 + it) = i ζ′(s)
        let step = ev.value / (d * Complex::with_val(b, (0, 1)));
        let dt = step.real().clone();
        t -= &dt;
        if dt.abs() < stop {
            let omega = Complex::with_val(b, (0.5, &t));
            let residual = Float::with_val(b, zeta(&omega, &ctx)?.abs_ref());
            if residual > ctx.pow10(-(p.digits as i32) + 5) {
                return Err(Error::Convergence("Newton converged to a point where zeta is not small".into()));
            }
            return Ok(omega);
        }
    }
    Err(Error::Convergence("Newton iteration for the first zero did not settle".into()))
}
