//! Vertical-line Mellin–Barnes integrals for cross-checking the Bessel-series
//! kernels against their inverse Mellin representations.
//!
//! The line integrals are computed with the trapezoid rule on s = c + it,
//! halving the step until the estimate settles. The integrands are analytic
//! in a strip around the contour, so the rule converges geometrically. The
//! Mellin transform of K_z runs along the positive axis after t = e^u.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::numerics::Ctx;
use crate::omega::{omega, OmegaParams, SeriesBudget};
use crate::special::bessel::bessel_k;
use crate::special::gamma::gamma;
use crate::special::zeta::zeta;

#[derive(Clone, Debug, PartialEq)]
pub enum Kernel {
    /// ζ(1−s+z/2) ζ(1−s−z/2) / (2cos(π(s+z/2)/2)) · (ρ²x/π²)^{−s}, which
    /// integrates to Ω_ρ(x, z).
    Omega { rho: f64, x: f64, z: (f64, f64) },
    /// Γ²(s) cos(πs/2) (2π)^{−2s} w^{−s}, which integrates to
    /// K_0(4πε√w) + K_0(4πε̄√w) for |arg w| < π/2.
    K0Pair { w: (f64, f64) },
    /// ∫₀^∞ t^{s−1} K_z(at) dt along the positive axis; the contour
    /// abscissa is unused.
    MellinK { s: f64, z: (f64, f64), a: f64 },
}

#[derive(Clone, Debug)]
pub struct LineIntegralSpec {
    pub c: f64,
    pub kernel: Kernel,
    /// Truncation height; chosen from the decay bound when `None`.
    pub t_max: Option<f64>,
    /// Initial quadrature step.
    pub step: f64,
    /// Absolute target for the tail and for the step-halving change.
    pub tol: f64,
}

impl LineIntegralSpec {
    pub fn new(c: f64, kernel: Kernel) -> Self {
        Self { c, kernel, t_max: None, step: 0.25, tol: 1e-14 }
    }

    pub fn t_max(mut self, t: f64) -> Self {
        self.t_max = Some(t);
        self
    }

    pub fn step(mut self, h: f64) -> Self {
        self.step = h;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.tol > 0.0) {
            return Err(Error::InvalidArgument("step and tol must be positive".into()));
        }
        match self.kernel {
            Kernel::Omega { rho, x, z } => {
                if !(rho > 0.0 && x > 0.0) {
                    return Err(Error::InvalidArgument("omega kernel needs rho > 0 and x > 0".into()));
                }
                if self.c <= 1.0 + z.0.abs() / 2.0 {
                    return Err(Error::Constraint(format!("c = {} must exceed 1 + |Re z|/2", self.c)));
                }
                // The zeros of the cosine off the strip are cancelled by
                // trivial zeros of ζ, but a node sitting on one is 0/0.
                let w = self.c + z.0 / 2.0;
                if ((w - 1.0) / 2.0 - ((w - 1.0) / 2.0).round()).abs() < 1e-9 {
                    return Err(Error::Constraint(format!("contour c = {} passes through a zero of the cosine", self.c)));
                }
            }
            Kernel::K0Pair { w } => {
                if self.c <= 0.0 {
                    return Err(Error::Constraint("k0 pair needs c > 0".into()));
                }
                if w.0 <= 0.0 {
                    return Err(Error::InvalidArgument("k0 pair needs Re w > 0".into()));
                }
            }
            Kernel::MellinK { s, z, a } => {
                if a <= 0.0 || s <= z.0.abs() {
                    return Err(Error::Constraint("Mellin transform of K_z needs a > 0 and s > |Re z|".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct LineIntegral {
    pub value: Complex,
    pub t_max: f64,
    /// Final step after halving.
    pub step: f64,
    pub nodes: usize,
    /// |I_h − I_{2h}| at the last halving.
    pub halving_change: f64,
}

const MAX_HALVINGS: u32 = 10;

/// Evaluates the integral described by `spec`.
pub fn line_integral(spec: &LineIntegralSpec, ctx: &Ctx) -> Result<LineIntegral> {
    spec.validate()?;
    let rule = Rule::new(spec, ctx)?;
    let b = ctx.bits();
    let mut h = spec.step;
    let mut nodes = 0usize;
    // Trapezoid sum on the grid kh, kept unscaled so halving reuses it.
    let mut sum = rule.sum(h, 0, 1, &mut nodes)?;
    let mut prev = Complex::with_val(b, &sum * h);
    let mut change = f64::INFINITY;
    for _ in 0..MAX_HALVINGS {
        h /= 2.0;
        sum += rule.sum(h, 1, 2, &mut nodes)?;
        let next = Complex::with_val(b, &sum * h);
        change = Complex::with_val(b, &next - &prev).abs().real().to_f64();
        prev = next;
        if change < spec.tol {
            break;
        }
    }
    if change >= spec.tol {
        return Err(Error::Convergence(format!("step halving still changes the result by {change:e}")));
    }
    Ok(LineIntegral { value: rule.scale(prev), t_max: rule.t_max, step: h, nodes, halving_change: change })
}

/// The value the integral should reproduce, from the series, Bessel or
/// Gamma side as appropriate.
pub fn closed_form(kernel: &Kernel, ctx: &Ctx) -> Result<Complex> {
    let b = ctx.bits();
    match *kernel {
        Kernel::Omega { rho, x, z } => {
            let params = OmegaParams { rho: ctx.real(rho), x: ctx.cx(x, 0.0), z: ctx.cx(z.0, z.1) };
            Ok(omega(&params, &SeriesBudget::for_ctx(ctx), ctx)?.value)
        }
        Kernel::K0Pair { w } => {
            let pi4 = Float::with_val(b, ctx.pi() / 4u32);
            let eps = Complex::with_val(b, (Float::with_val(b, pi4.cos_ref()), Float::with_val(b, pi4.sin_ref())));
            let root = ctx.cx(w.0, w.1).sqrt() * ctx.pi() * 4u32;
            let zero = ctx.czero();
            let a = bessel_k(&zero, &Complex::with_val(b, &eps * &root), ctx)?;
            let c = bessel_k(&zero, &(eps.conj() * root), ctx)?;
            Ok(a + c)
        }
        Kernel::MellinK { s, z, a } => {
            let z = ctx.cx(z.0, z.1);
            let s = ctx.cx(s, 0.0);
            let g1 = gamma(&(Complex::with_val(b, &s - &z) / 2u32), ctx)?;
            let g2 = gamma(&(Complex::with_val(b, &s + &z) / 2u32), ctx)?;
            let two = ctx.real(2.0);
            let pre = Complex::with_val(b, (Complex::with_val(b, &s - 2u32) * two.ln()).exp_ref())
                * Complex::with_val(b, (-s * ctx.real(a).ln()).exp_ref());
            Ok(pre * g1 * g2)
        }
    }
}

struct Rule<'a> {
    kernel: &'a Kernel,
    c: f64,
    ctx: &'a Ctx,
    /// Integration range in the quadrature variable.
    lo: f64,
    hi: f64,
    t_max: f64,
    tol: f64,
}

impl<'a> Rule<'a> {
    fn new(spec: &'a LineIntegralSpec, ctx: &'a Ctx) -> Result<Self> {
        let (lo, hi) = match spec.kernel {
            Kernel::Omega { rho, x, z } => {
                let pi = std::f64::consts::PI;
                let pre = ((rho * rho * x) / (pi * pi)).powf(-spec.c).max(1.0);
                let power = 3f64.max(2.0 * spec.c + z.0.abs());
                let shift = z.1 / 2.0;
                let t = spec.t_max.unwrap_or_else(|| decay_height(pi / 2.0, power, pre, spec.tol) + shift.abs());
                (-t, t)
            }
            Kernel::K0Pair { w } => {
                let arg = w.1.atan2(w.0);
                let rate = std::f64::consts::FRAC_PI_2 - arg.abs();
                let pre = (w.0.hypot(w.1) * 4.0 * std::f64::consts::PI * std::f64::consts::PI).powf(-spec.c).max(1.0);
                let t = spec.t_max.unwrap_or_else(|| decay_height(rate, 2.0 * spec.c, pre * 10.0, spec.tol));
                (-t, t)
            }
            Kernel::MellinK { s, z, a } => {
                // t^s K_z(at) ≈ C t^{s−|Re z|} near 0 and t^s e^{−at} at infinity.
                let ln_tol = spec.tol.ln() - 5.0;
                let lo = ln_tol / (s - z.0.abs());
                let hi = match spec.t_max {
                    Some(t) => t.ln(),
                    None => {
                        let mut u = 0f64;
                        while u * s - a * u.exp() > ln_tol {
                            u += 0.125;
                        }
                        u
                    }
                };
                (lo, hi)
            }
        };
        let t_max = match spec.kernel {
            Kernel::MellinK { .. } => hi.exp(),
            _ => hi,
        };
        Ok(Self { kernel: &spec.kernel, c: spec.c, ctx, lo, hi, t_max, tol: spec.tol })
    }

    /// Σ f(kh) over k ≡ offset (mod stride) with kh in [lo, hi].
    fn sum(&self, h: f64, offset: i64, stride: i64, nodes: &mut usize) -> Result<Complex> {
        let b = self.ctx.bits();
        let k_lo = (self.lo / h).ceil() as i64;
        let k_hi = (self.hi / h).floor() as i64;
        let mut acc = self.ctx.czero();
        let mut k = k_lo + (offset - k_lo).rem_euclid(stride);
        let mut edge = 0f64;
        while k <= k_hi {
            let v = self.eval(k as f64 * h)?;
            if k - stride < k_lo || k + stride > k_hi {
                edge = edge.max(v.clone().abs().real().to_f64());
            }
            acc += v;
            *nodes += 1;
            k += stride;
        }
        if edge * h > self.tol {
            return Err(Error::Convergence(format!(
                "integrand is still {edge:e} at the truncation point; raise t_max"
            )));
        }
        Ok(Complex::with_val(b, acc))
    }

    fn eval(&self, t: f64) -> Result<Complex> {
        let ctx = self.ctx;
        let b = ctx.bits();
        match *self.kernel {
            Kernel::Omega { rho, x, z } => {
                let s = ctx.cx(self.c, t);
                let half_z = ctx.cx(z.0 / 2.0, z.1 / 2.0);
                let one_minus_s = Complex::with_val(b, 1 - &s);
                let z1 = zeta(&Complex::with_val(b, &one_minus_s + &half_z), ctx)?;
                let z2 = zeta(&Complex::with_val(b, &one_minus_s - &half_z), ctx)?;
                let arg = Complex::with_val(b, &s + &half_z) * ctx.pi() / 2u32;
                let den = arg.cos() * 2u32;
                let pi = ctx.pi();
                let base = ctx.real(rho).square() * ctx.real(x) / pi.square();
                let power = (-s * base.ln()).exp();
                Ok(z1 * z2 / den * power)
            }
            Kernel::K0Pair { w } => {
                let s = ctx.cx(self.c, t);
                let g = gamma(&s, ctx)?;
                let cos = (Complex::with_val(b, &s * ctx.pi()) / 2u32).cos();
                let ln_w = ctx.cx(w.0, w.1).ln() + (ctx.pi() * 2u32).ln() * 2u32;
                let power = (-Complex::with_val(b, &s * ln_w)).exp();
                Ok(g.square() * cos * power)
            }
            Kernel::MellinK { s, z, a } => {
                let arg = ctx.cx(a * t.exp(), 0.0);
                let k = bessel_k(&ctx.cx(z.0, z.1), &arg, ctx)?;
                Ok(k * ctx.real(s * t).exp())
            }
        }
    }

    /// Maps the raw trapezoid value to the integral: ds = i dt over 2πi for
    /// the line integrals, dt = e^u du for the Mellin transform.
    fn scale(&self, v: Complex) -> Complex {
        match self.kernel {
            Kernel::MellinK { .. } => v,
            _ => v / (self.ctx.pi() * 2u32),
        }
    }
}

/// Smallest t with pre · (1+t)^power · e^{−rate t} below tol.
fn decay_height(rate: f64, power: f64, pre: f64, tol: f64) -> f64 {
    let bound = |t: f64| pre.ln() + power * (1.0 + t).ln() - rate * t;
    let mut t = 1.0;
    while bound(t) > tol.ln() {
        t += 0.5;
    }
    t
}
