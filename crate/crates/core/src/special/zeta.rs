//! Riemann ζ and ζ′ on the whole plane by Euler–Maclaurin summation.

use rug::ops::Pow;
use rug::{Complex, Float};

use super::bernoulli::bernoulli_float;
use crate::error::{Error, Result};
use crate::numerics::Ctx;

#[derive(Clone, Debug)]
pub struct ZetaEval {
    pub s: Complex,
    pub value: Complex,
    pub derivative: Option<Complex>,
}

fn check_pole(s: &Complex, ctx: &Ctx) -> Result<()> {
    let d = Complex::with_val(ctx.bits(), s - 1u32);
    let r = Float::with_val(ctx.bits(), d.abs_ref());
    if r < ctx.pow10(-(ctx.digits() as i32) / 2) {
        return Err(Error::Pole(
            "zeta too close to s = 1; use the Laurent expansion".into(),
        ));
    }
    Ok(())
}

fn cutoff(s: &Complex, ctx: &Ctx) -> (u64, u32) {
    let sigma = s.real().to_f64();
    let t = s.imag().to_f64().abs();
    let n = (1.3 * f64::from(ctx.effective_digits()) + t).ceil().max(10.0);
    // Terms n^{-s} grow like n^{-σ} for σ < 0, and the leading terms are
    // then much larger than ζ itself.
    let mut extra = 6.0;
    if sigma < 0.5 {
        extra += (0.5 - sigma) * n.log10() + (1.0 + s.real().to_f64().abs() + t).log10();
    }
    (n as u64, extra.ceil() as u32)
}

fn euler_maclaurin(s: &Complex, ctx: &Ctx, deriv: bool) -> Result<ZetaEval> {
    check_pole(s, ctx)?;
    let (n, extra) = cutoff(s, ctx);
    let work = ctx.extended(extra);
    let b = work.bits();
    let s = Complex::with_val(b, s);
    let neg_s = Complex::with_val(b, -&s);

    let mut val = Complex::with_val(b, 1);
    let mut der = Complex::with_val(b, 0);
    for k in 2..n {
        let ln_k = Float::with_val(b, k).ln();
        let p = Complex::with_val(b, &neg_s * &ln_k).exp();
        if deriv {
            der -= Complex::with_val(b, &p * &ln_k);
        }
        val += p;
    }

    let nf = Float::with_val(b, n);
    let ln_n = Float::with_val(b, nf.ln_ref());
    let n_neg_s = Complex::with_val(b, &neg_s * &ln_n).exp();
    let s_minus_1 = Complex::with_val(b, &s - 1u32);
    let tail_int = Complex::with_val(b, &n_neg_s * &nf) / &s_minus_1;
    val += &tail_int;
    val += Complex::with_val(b, &n_neg_s / 2u32);
    if deriv {
        der -= Complex::with_val(b, &tail_int * &ln_n);
        der -= Complex::with_val(b, &tail_int / &s_minus_1);
        der -= Complex::with_val(b, &n_neg_s * &ln_n) / 2u32;
    }

    // Correction terms B_{2k}/(2k)! · P_k(s) · N^{−s−2k+1} with
    // P_k(s) = s(s+1)…(s+2k−2); P_k′ is carried along by the product rule.
    let eps = work.eps();
    let n_inv2 = Float::with_val(b, nf.square_ref()).recip();
    let mut pow_n = Complex::with_val(b, &n_neg_s / &nf);
    let mut poly = s.clone();
    let mut dpoly = Complex::with_val(b, 1);
    let mut fact = Float::with_val(b, 2);
    let max_k = (std::f64::consts::PI * n as f64) as usize;
    let mut converged = false;
    for k in 1..max_k {
        let coeff = bernoulli_float(2 * k, b) / &fact;
        let t = Complex::with_val(b, &poly * &pow_n) * &coeff;
        let mut mag = Float::with_val(b, t.abs_ref());
        val += &t;
        if deriv {
            let dt = (Complex::with_val(b, &dpoly * &pow_n) - Complex::with_val(b, &t / &coeff) * &ln_n) * &coeff;
            let dmag = Float::with_val(b, dt.abs_ref());
            if dmag > mag {
                mag = dmag;
            }
            der += dt;
        }
        let scale = Float::with_val(b, val.abs_ref()).max(&Float::with_val(b, 1));
        if mag < Float::with_val(b, &eps * &scale) {
            converged = true;
            break;
        }
        // advance P by the two factors (s + 2k − 1)(s + 2k)
        for shift in [2 * k - 1, 2 * k] {
            let f = Complex::with_val(b, &s + shift as u64);
            dpoly = dpoly * &f + &poly;
            poly *= f;
        }
        pow_n *= &n_inv2;
        fact *= ((2 * k + 1) * (2 * k + 2)) as u64;
    }
    if !converged {
        return Err(Error::Convergence("zeta Euler-Maclaurin corrections did not converge".into()));
    }
    let out = |z: Complex| Complex::with_val(ctx.bits(), z);
    Ok(ZetaEval {
        s: out(s),
        value: out(val),
        derivative: if deriv { Some(out(der)) } else { None },
    })
}

pub fn zeta(s: &Complex, ctx: &Ctx) -> Result<Complex> {
    Ok(euler_maclaurin(s, ctx, false)?.value)
}

pub fn zeta_prime(s: &Complex, ctx: &Ctx) -> Result<Complex> {
    Ok(euler_maclaurin(s, ctx, true)?.derivative.expect("derivative requested"))
}

pub fn zeta_eval(s: &Complex, ctx: &Ctx) -> Result<ZetaEval> {
    euler_maclaurin(s, ctx, true)
}

/// Real-argument convenience wrappers.
pub fn zeta_real(x: &Float, ctx: &Ctx) -> Result<Float> {
    Ok(zeta(&ctx.cx_real(x), ctx)?.real().clone())
}

pub fn zeta_prime_real(x: &Float, ctx: &Ctx) -> Result<Float> {
    Ok(zeta_prime(&ctx.cx_real(x), ctx)?.real().clone())
}

/// ζ(n) for integer n ≠ 1.
pub fn zeta_int(n: i64, ctx: &Ctx) -> Result<Float> {
    zeta_real(&ctx.int(n), ctx)
}

/// Right-hand side of the functional equation,
/// 2^s π^{s−1} Γ(1−s) ζ(1−s) sin(πs/2).
pub fn functional_equation_rhs(s: &Complex, ctx: &Ctx) -> Result<Complex> {
    let b = ctx.bits();
    let one_minus = Complex::with_val(b, 1u32 - s);
    let g = super::gamma::gamma(&one_minus, ctx)?;
    let z = zeta(&one_minus, ctx)?;
    let two_s = Complex::with_val(b, Complex::with_val(b, (2, 0)).pow(s));
    let pi = ctx.pi();
    let pi_pow = Complex::with_val(b, Complex::with_val(b, (&pi, 0)).pow(Complex::with_val(b, s - 1u32)));
    let sin = (Complex::with_val(b, s * &pi) / 2u32).sin();
    Ok(two_s * pi_pow * g * z * sin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{set_precision, Precision};

    fn ctx() -> Ctx {
        set_precision(Precision::new(50).unwrap()).unwrap()
    }

    fn rel(a: &Complex, b: &Complex) -> f64 {
        let d = Complex::with_val(a.prec().0, a - b);
        (Float::with_val(a.prec().0, d.abs_ref()) / Float::with_val(a.prec().0, b.abs_ref())).to_f64()
    }

    #[test]
    fn even_values() {
        let c = ctx();
        let z2 = zeta(&c.cx(2.0, 0.0), &c).unwrap();
        let want = c.cx_real(&(c.pi().square() / 6u32));
        assert!(rel(&z2, &want) < 1e-49);
        let z0 = zeta(&c.cx(0.0, 0.0), &c).unwrap();
        assert!(rel(&z0, &c.cx(-0.5, 0.0)) < 1e-49);
        let zm1 = zeta(&c.cx(-1.0, 0.0), &c).unwrap();
        assert!(rel(&zm1, &c.cx_real(&c.ratio(-1, 12))) < 1e-49);
    }

    #[test]
    fn matches_mpfr_real_zeta() {
        let c = ctx();
        for &x in &[3.0, 1.5, 0.25, -2.5, -7.0 - 0.5, 5.75, 1.0001] {
            let z = zeta(&c.cx(x, 0.0), &c).unwrap();
            let want = c.cx_real(&c.real(x).zeta());
            assert!(rel(&z, &want) < 1e-48, "x = {x}");
        }
    }

    #[test]
    fn derivative_special_values() {
        let c = ctx();
        // ζ′(−2) = −ζ(3)/(4π²)
        let d = zeta_prime(&c.cx(-2.0, 0.0), &c).unwrap();
        let z3 = c.int(3).zeta();
        let want = c.cx_real(&(-z3 / (c.pi().square() * 4u32)));
        assert!(rel(&d, &want) < 1e-48);
        // ζ′(0) = −log(2π)/2
        let d0 = zeta_prime(&c.cx(0.0, 0.0), &c).unwrap();
        let want0 = c.cx_real(&(-(c.pi() * 2u32).ln() / 2u32));
        assert!(rel(&d0, &want0) < 1e-48);
    }

    #[test]
    fn derivative_at_two() {
        let c = ctx();
        let d = zeta_prime(&c.cx(2.0, 0.0), &c).unwrap();
        let want = Float::with_val(c.bits(), Float::parse("-0.93754825431584375370257409456786497789786028861482992588").unwrap());
        assert!((d.real().clone() - want).abs() < 1e-48);
    }

    #[test]
    fn pole_rejected() {
        let c = ctx();
        assert!(zeta(&c.cx(1.0, 0.0), &c).is_err());
        assert!(zeta(&c.cx(1.0, 1e-30), &c).is_err());
        assert!(zeta(&c.cx(1.0, 1e-20), &c).is_ok());
    }
}
