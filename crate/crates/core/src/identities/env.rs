//! Shared evaluation helpers for the identity evaluators: complex constants,
//! zeta values, exact Bernoulli coefficients and the series backends, with
//! a running count of series terms.

use std::cell::Cell;

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numerics::Ctx;
use crate::omega::{lambert_series, weighted_lambda_sum, weighted_omega_sum, SeriesBudget, Sign, Weight, XMap};
use crate::special::bernoulli::bernoulli;
use crate::special::zeta::{zeta, zeta_eval};

pub(crate) struct Env<'a> {
    pub ctx: &'a Ctx,
    pub bits: u32,
    pub budget: SeriesBudget,
    terms: Cell<usize>,
}

impl<'a> Env<'a> {
    pub fn new(ctx: &'a Ctx, budget: SeriesBudget) -> Self {
        Self { ctx, bits: ctx.bits(), budget, terms: Cell::new(0) }
    }

    pub fn terms(&self) -> usize {
        self.terms.get()
    }

    fn count(&self, n: usize) {
        self.terms.set(self.terms.get() + n);
    }

    pub fn c(&self, re: f64) -> Complex {
        self.ctx.cx(re, 0.0)
    }

    pub fn ci(&self, n: i64) -> Complex {
        Complex::with_val(self.bits, n)
    }

    pub fn cf(&self, x: &Float) -> Complex {
        Complex::with_val(self.bits, x)
    }

    pub fn pi(&self) -> Float {
        self.ctx.pi()
    }

    pub fn gamma(&self) -> Complex {
        self.cf(&self.ctx.euler_gamma())
    }

    /// x^e for real x > 0 and complex e.
    pub fn pow(&self, x: &Float, e: &Complex) -> Complex {
        let ln = Float::with_val(self.bits, x.ln_ref());
        Complex::with_val(self.bits, e * ln).exp()
    }

    pub fn powr(&self, x: &Float, e: &Float) -> Float {
        Float::with_val(self.bits, x.pow(e))
    }

    pub fn powi(&self, x: &Float, e: i64) -> Float {
        Float::with_val(self.bits, x.pow(e as i32))
    }

    pub fn ln(&self, x: &Float) -> Float {
        Float::with_val(self.bits, x.ln_ref())
    }

    /// cos(πz/2)
    pub fn cos_half_pi(&self, z: &Complex) -> Complex {
        let a = Complex::with_val(self.bits, z * self.pi()) / 2u32;
        a.cos()
    }

    pub fn zeta(&self, s: &Complex) -> Result<Complex> {
        zeta(s, self.ctx)
    }

    pub fn zeta_i(&self, n: i64) -> Result<Complex> {
        self.zeta(&self.ci(n))
    }

    /// (ζ(s), ζ′(s))
    pub fn zeta_d(&self, s: &Complex) -> Result<(Complex, Complex)> {
        let e = zeta_eval(s, self.ctx)?;
        let d = e.derivative.ok_or_else(|| Error::Convergence("missing zeta derivative".into()))?;
        Ok((e.value, d))
    }

    pub fn bern(&self, n: i64) -> Result<Rational> {
        if n < 0 {
            return Err(Error::InvalidArgument(format!("Bernoulli index {n}")));
        }
        bernoulli(n as usize)
    }

    pub fn rat(&self, r: &Rational) -> Float {
        Float::with_val(self.bits, r)
    }

    pub fn crat(&self, r: &Rational) -> Complex {
        Complex::with_val(self.bits, self.rat(r))
    }

    /// 2^e for any integer e.
    pub fn two_pow(&self, e: i64) -> Float {
        Float::with_val(self.bits, 1) << (e as i32)
    }

    /// (−1)^e
    pub fn sign(e: i64) -> i32 {
        if e.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn weight(&self, sigma_order: Complex, exponent: Complex) -> Weight {
        Weight::new(sigma_order, exponent)
    }

    pub fn omega_sum(&self, rho: &Float, z: &Complex, w: &Weight, x_map: &XMap) -> Result<Complex> {
        let s = weighted_omega_sum(rho, z, w, x_map, &self.budget, self.ctx)?;
        self.count(s.terms);
        Ok(s.value)
    }

    /// Σ d(n) n^{−e} Ω_ρ(n).
    pub fn divisor_omega(&self, rho: &Float, e: &Complex) -> Result<Complex> {
        let w = self.weight(self.ci(0), e.clone());
        self.omega_sum(rho, &self.ci(0), &w, &XMap::linear())
    }

    pub fn lambda_sum(&self, sign: Sign, z: &Complex, w: &Weight) -> Result<Complex> {
        let s = weighted_lambda_sum(sign, z, w, &self.budget, self.ctx)?;
        self.count(s.terms);
        Ok(s.value)
    }

    /// Σ n^e / (e^{2an} − 1)
    pub fn lambert(&self, e: i64, a: &Float) -> Result<Complex> {
        let s = lambert_series(&self.ci(e), a, &self.lambert_budget(), self.ctx)?;
        self.count(s.terms);
        Ok(s.value)
    }

    /// Lambert sums are cheap; they always run at the full working target
    /// so that closed-form identities are checked to the last digit.
    fn lambert_budget(&self) -> SeriesBudget {
        let full = SeriesBudget::for_ctx(self.ctx);
        if full.tol < self.budget.tol {
            SeriesBudget { max_terms: self.budget.max_terms, ..full }
        } else {
            self.budget.clone()
        }
    }

    /// Σ n^e / (exp(c n^κ) − 1) for complex c with Re c > 0 and κ = p/q > 0.
    pub fn lambert_general(&self, e: i64, c: &Complex, p: u32, q: u32) -> Result<Complex> {
        let b = self.bits;
        let a = c.real().to_f64();
        if !(a > 0.0) {
            return Err(Error::InvalidArgument("Lambert series needs Re c > 0".into()));
        }
        let kappa = f64::from(p) / f64::from(q);
        let budget = self.lambert_budget();
        let mut acc = self.ctx.czero();
        let mut first: Option<f64> = None;
        let log_tol = budget.tol.to_f64().ln();
        // Past the peak of n^e e^{−a n^κ} the tail is bounded by the current
        // term times the integral ratio n^{1−κ}/(aκ) plus one.
        let peak = ((e as f64).max(0.0) / (a * kappa)).powf(1.0 / kappa);
        for n in 1..=budget.max_terms as u64 {
            let nf = Float::with_val(b, n);
            let ln_n = Float::with_val(b, nf.ln_ref());
            let np = (Float::with_val(b, &ln_n * p) / q).exp();
            let arg = Complex::with_val(b, c * &np);
            let den = Complex::with_val(b, arg.exp_ref()) - 1u32;
            let num = if e == 0 { self.c(1.0) } else { self.cf(&Float::with_val(b, &ln_n * e).exp()) };
            acc += num / den;
            let nn = n as f64;
            let log_term = e as f64 * nn.ln() - a * nn.powf(kappa) - (1.0 - (-a * nn.powf(kappa)).exp()).ln();
            let f = *first.get_or_insert(log_term);
            let target = if budget.relative { log_tol + f } else { log_tol };
            let log_tail = log_term + (1.0 + nn.powf(1.0 - kappa) / (a * kappa)).ln();
            if nn > peak && log_tail < target {
                self.count(n as usize);
                return Ok(acc);
            }
        }
        Err(Error::BudgetExhausted { terms: budget.max_terms, last: 0.0 })
    }

    /// n! as an exact rational.
    pub fn fact(n: i64) -> Rational {
        Rational::from(Integer::from(Integer::factorial(n as u32)))
    }

    /// H_n = 1 + 1/2 + … + 1/n, exactly.
    pub fn harmonic(n: i64) -> Rational {
        let mut h = Rational::new();
        for k in 1..=n {
            h += Rational::from((1, k));
        }
        h
    }
}

/// Floor division for the upper limits of the finite Bernoulli sums.
pub(crate) fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}
