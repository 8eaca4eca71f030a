//! The Bessel-series kernels Ω_ρ(x, z) and Λ±(x, z), weighted sums of them
//! over n, and the slowly convergent partial-fraction oracle for Ω(x).
//!
//! Every sum here has the shape Σ_M B(M) K_z(4ρ e^{±iπ/4} e^{iθ/2} s M^{1/(2q)}).
//! A weighted sum Σ_n c(n) Ω_ρ(x(n), z) with x(n) = e^{iθ} n^{p/q} is folded
//! into this single series by grouping the pairs (j, n) with j^q n^p = M.

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::arith::{divisor_count, sigma, sigma_balanced, DivisorSieve};
use crate::error::{Error, Result};
use crate::numerics::Ctx;
use crate::special::bessel::bessel_k;

const LN10: f64 = std::f64::consts::LN_10;
/// Exponent slack δ in the divisor bound d(n) ≪ n^δ.
const DELTA: f64 = 0.25;

#[derive(Clone, Debug)]
pub struct OmegaParams {
    pub rho: Float,
    pub x: Complex,
    pub z: Complex,
}

#[derive(Clone, Debug)]
pub struct SeriesBudget {
    /// Target for the discarded tail; absolute unless `relative` is set, in
    /// which case it is scaled by the magnitude of the leading term.
    pub tol: Float,
    pub relative: bool,
    pub max_terms: usize,
    /// Floor for the polynomial growth exponent of the coefficients.
    pub tau: f64,
}

impl SeriesBudget {
    pub fn absolute(tol: Float) -> Self {
        Self { tol, relative: false, max_terms: 4_000_000, tau: 0.0 }
    }

    pub fn relative(tol: Float) -> Self {
        Self { tol, relative: true, max_terms: 4_000_000, tau: 0.0 }
    }

    /// Relative target a few digits below the context's nominal precision.
    pub fn for_ctx(ctx: &Ctx) -> Self {
        Self::relative(ctx.pow10(-(ctx.digits() as i32) - 3))
    }
}

#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: Complex,
    pub terms: usize,
    pub tail_bound: Float,
}

/// Argument map n ↦ e^{iθ} n^{p/q} for the outer variable of a weighted sum.
#[derive(Clone, Debug, PartialEq)]
pub struct XMap {
    pub p: u32,
    pub q: u32,
    /// θ/π as a rational num/den.
    pub phase: (i64, i64),
}

impl XMap {
    /// x(n) = n
    pub fn linear() -> Self {
        Self { p: 1, q: 1, phase: (0, 1) }
    }

    /// x(n) = n^N
    pub fn power(n: u32) -> Self {
        Self { p: n, q: 1, phase: (0, 1) }
    }

    /// x(n) = e^{−ijπ/N} n^{1/N}
    pub fn rotated_root(n: u32, j: i64) -> Self {
        Self { p: 1, q: n, phase: (-j, i64::from(n)) }
    }

    /// x(n) = e^{−i(2j+1)π/(2N)} n^{1/N}
    pub fn half_rotated_root(n: u32, j: i64) -> Self {
        Self { p: 1, q: n, phase: (-(2 * j + 1), 2 * i64::from(n)) }
    }

    fn theta(&self, ctx: &Ctx) -> Float {
        ctx.pi() * self.phase.0 / self.phase.1
    }

    /// The map applied to n, for direct (unfolded) evaluation.
    pub fn apply(&self, n: u64, ctx: &Ctx) -> Complex {
        let b = ctx.bits();
        let r = (Float::with_val(b, n).ln() * self.p / self.q).exp();
        let th = self.theta(ctx);
        Complex::with_val(b, (Float::with_val(b, th.cos_ref()), Float::with_val(b, th.sin_ref()))) * r
    }
}

/// Outer weight c(n) = σ_s(n) n^{−e}.
#[derive(Clone, Debug)]
pub struct Weight {
    pub sigma_order: Complex,
    pub exponent: Complex,
}

impl Weight {
    pub fn new(sigma_order: Complex, exponent: Complex) -> Self {
        Self { sigma_order, exponent }
    }

    pub fn eval(&self, n: u64, ctx: &Ctx) -> Complex {
        let b = ctx.bits();
        let s = if self.sigma_order.is_zero() {
            Complex::with_val(b, divisor_count(n))
        } else {
            sigma(&self.sigma_order, n, ctx)
        };
        if self.exponent.is_zero() || n == 1 {
            return s;
        }
        let ln_n = Float::with_val(b, n).ln();
        s * (Complex::with_val(b, &self.exponent * &ln_n) * -1i32).exp()
    }

    /// Polynomial growth exponent of |c(n)| beyond the divisor factor.
    fn growth(&self) -> f64 {
        self.sigma_order.real().to_f64().max(0.0) - self.exponent.real().to_f64()
    }
}

/// Σ_M B(M) K_z(w₊(M)) and Σ_M B(M) K_z(w₋(M)) where
/// w±(M) = 4ρ s e^{i(θ/2 ± π/4)} M^{1/(2q)}.
struct KernelSums {
    plus: Complex,
    minus: Complex,
    terms: usize,
    tail: Float,
}

struct Kernel<'a> {
    rho: &'a Float,
    z: &'a Complex,
    theta: Float,
    scale: Float,
    q: u32,
    tau: f64,
}

impl Kernel<'_> {
    fn directions(&self, ctx: &Ctx) -> (Complex, Complex) {
        let b = ctx.bits();
        let quarter = ctx.pi() / 4u32;
        let half_theta = Float::with_val(b, &self.theta / 2u32);
        let unit = |a: Float| Complex::with_val(b, (Float::with_val(b, a.cos_ref()), Float::with_val(b, a.sin_ref())));
        let mag = Float::with_val(b, self.rho * &self.scale) * 4u32;
        (
            unit(Float::with_val(b, &half_theta + &quarter)) * &mag,
            unit(Float::with_val(b, &half_theta - &quarter)) * &mag,
        )
    }

    /// Worst-case exponential decay rate in M^{1/(2q)}.
    fn decay(&self) -> f64 {
        let th = self.theta.to_f64() / 2.0;
        let q = std::f64::consts::FRAC_PI_4;
        let c = (th + q).cos().min((th - q).cos());
        4.0 * self.rho.to_f64() * self.scale.to_f64() * c
    }

    /// Log of the tail bound after index M, relative to the leading term:
    /// log(4 M^{τ+δ−1/(4q)} e^{−c(M^{1/(2q)}−1)} (1 + 2q M^{1−1/(2q)}/c)).
    fn log_tail_ratio(&self, m: f64, c: f64) -> f64 {
        let q = f64::from(self.q);
        let r = m.powf(1.0 / (2.0 * q));
        let poly = (self.tau + DELTA - 0.25 / q) * m.ln();
        let count = (1.0 + 2.0 * q * m.powf(1.0 - 1.0 / (2.0 * q)) / c).ln();
        4f64.ln() + poly - c * (r - 1.0) + count
    }

    /// Smallest M whose tail bound drops below tol/|first|.
    fn cutoff(&self, log_target: f64, max_terms: usize) -> Result<usize> {
        let c = self.decay();
        if c <= 0.0 {
            return Err(Error::InvalidArgument("kernel arguments leave the half-plane Re w > 0".into()));
        }
        let mut lo = 1usize;
        if self.log_tail_ratio(1.0, c) < log_target {
            return Ok(1);
        }
        let mut hi = 2usize;
        while self.log_tail_ratio(hi as f64, c) >= log_target {
            lo = hi;
            hi *= 2;
            if hi > 4 * max_terms {
                return Err(Error::BudgetExhausted { terms: max_terms, last: log_target.exp() });
            }
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.log_tail_ratio(mid as f64, c) >= log_target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if hi > max_terms {
            return Err(Error::BudgetExhausted { terms: max_terms, last: log_target.exp() });
        }
        Ok(hi)
    }

    /// K_z at w = dir · M^{1/(2q)} evaluated at the working precision of `wctx`.
    fn k_at(&self, dir: &Complex, m: usize, wctx: &Ctx) -> Result<Complex> {
        let b = wctx.bits();
        let r = if self.q == 1 {
            Float::with_val(b, m).sqrt()
        } else {
            (Float::with_val(b, m).ln() / (2 * self.q)).exp()
        };
        let w = Complex::with_val(b, dir) * r;
        let z = Complex::with_val(b, self.z);
        bessel_k(&z, &w, wctx)
    }

    /// Sums the kernel against coefficients produced by `coeff` for M up to
    /// the cutoff implied by the budget. `coeff` receives the cutoff once
    /// and returns the whole coefficient table (index 0 unused).
    fn sum(
        &self,
        budget: &SeriesBudget,
        ctx: &Ctx,
        first_coeff: Complex,
        coeff: impl FnOnce(usize) -> Vec<Complex>,
    ) -> Result<KernelSums> {
        let b = ctx.bits();
        let (dp, dm) = self.directions(ctx);
        let conj_pair = self.z.imag().is_zero() && self.theta.is_zero();
        let pair = |m: usize, wctx: &Ctx| -> Result<(Complex, Complex)> {
            let kp = self.k_at(&dp, m, wctx)?;
            let km = if conj_pair { kp.clone().conj() } else { self.k_at(&dm, m, wctx)? };
            Ok((Complex::with_val(b, kp), Complex::with_val(b, km)))
        };

        let (k1p, k1m) = pair(1, ctx)?;
        let first = Float::with_val(b, Complex::with_val(b, &k1p * &first_coeff).abs_ref())
            .max(&Float::with_val(b, Complex::with_val(b, &k1m * &first_coeff).abs_ref()));
        let tol_abs = if budget.relative {
            Float::with_val(b, &budget.tol * &first)
        } else {
            budget.tol.clone()
        };
        if first.is_zero() {
            return Ok(KernelSums { plus: ctx.czero(), minus: ctx.czero(), terms: 1, tail: ctx.zero() });
        }
        let log_target = (Float::with_val(b, &tol_abs / &first)).ln().to_f64();
        let m_max = self.cutoff(log_target, budget.max_terms)?;
        let table = coeff(m_max);

        let log_tol = tol_abs.clone().ln().to_f64();
        let c = self.decay();
        let z_abs = {
            let (re, im) = (self.z.real().to_f64(), self.z.imag().to_f64());
            re.hypot(im)
        };
        let base_mag = 4.0 * self.rho.to_f64() * self.scale.to_f64();
        let eff = ctx.effective_digits();

        let mut plus = Complex::with_val(b, &first_coeff * &k1p);
        let mut minus = Complex::with_val(b, &first_coeff * &k1m);
        let mut terms = 1usize;
        for (m, bm) in table.iter().enumerate().skip(2) {
            if bm.is_zero() {
                continue;
            }
            // Leading asymptotic size of the larger of the two terms decides
            // how many digits this term can still contribute.
            let r = (m as f64).powf(1.0 / (2.0 * f64::from(self.q)));
            let wabs = base_mag * r;
            let (bre, bim) = (bm.real().to_f64(), bm.imag().to_f64());
            let log_est = bre.hypot(bim).ln() + 0.5 * (std::f64::consts::PI / (2.0 * wabs)).ln() - c * r
                + (1.0 + (4.0 * z_abs * z_abs + 1.0) / (8.0 * wabs)).ln()
                + std::f64::consts::PI * self.z.imag().to_f64().abs() / 4.0;
            let digits = ((log_est - log_tol) / LN10).ceil() as i64 + 4;
            if digits <= 0 {
                continue;
            }
            let wctx = if digits as u32 >= eff { ctx.clone() } else { Ctx::raw(digits as u32 + 4) };
            let (kp, km) = pair(m, &wctx)?;
            plus += Complex::with_val(b, bm * &kp);
            minus += Complex::with_val(b, bm * &km);
            terms += 1;
        }
        let tail = Float::with_val(b, self.log_tail_ratio(m_max as f64, c).exp()) * &first;
        Ok(KernelSums { plus, minus, terms, tail })
    }
}

fn phase_factors(z: &Complex, ctx: &Ctx) -> (Complex, Complex) {
    let b = ctx.bits();
    let i_pi_z4 = Complex::with_val(b, z * Complex::with_val(b, (0, ctx.pi()))) / 4u32;
    let ep = Complex::with_val(b, i_pi_z4.exp_ref());
    let em = Complex::with_val(b, (-i_pi_z4).exp_ref());
    (ep, em)
}

fn coefficient_tau(z: &Complex, q: u32) -> f64 {
    z.real().to_f64().abs() / (2.0 * f64::from(q))
}


/// Ω_ρ(x, z) = 2 Σ_j σ_{−z}(j) j^{z/2} (e^{iπz/4} K_z(4ρε√(jx)) + e^{−iπz/4} K_z(4ρε̄√(jx))).
pub fn omega(params: &OmegaParams, budget: &SeriesBudget, ctx: &Ctx) -> Result<SeriesValue> {
    let s = omega_sums(params, budget, ctx)?;
    let (ep, em) = phase_factors(&params.z, ctx);
    let v = (ep * s.plus + em * s.minus) * 2u32;
    Ok(SeriesValue { value: v, terms: s.terms, tail_bound: s.tail * 2u32 })
}

fn omega_sums(params: &OmegaParams, budget: &SeriesBudget, ctx: &Ctx) -> Result<KernelSums> {
    if !(*params.x.real() > 0) {
        return Err(Error::InvalidArgument("Omega needs Re x > 0".into()));
    }
    if !(params.rho > 0) {
        return Err(Error::InvalidArgument("Omega needs rho > 0".into()));
    }
    let b = ctx.bits();
    let abs_x = Float::with_val(b, params.x.abs_ref());
    let theta = Float::with_val(b, params.x.arg_ref());
    let kernel = Kernel {
        rho: &params.rho,
        z: &params.z,
        theta,
        scale: abs_x.sqrt(),
        q: 1,
        tau: budget.tau.max(coefficient_tau(&params.z, 1)),
    };
    let z = params.z.clone();
    kernel.sum(budget, ctx, ctx.cx(1.0, 0.0), |m_max| {
        let mut v = Vec::with_capacity(m_max + 1);
        v.push(ctx.czero());
        for j in 1..=m_max as u64 {
            v.push(sigma_balanced(&z, j, ctx));
        }
        v
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Λ±(x, z) from its defining series, with ρ = π.
fn lambda_direct(sign: Sign, x: &Float, z: &Complex, budget: &SeriesBudget, ctx: &Ctx) -> Result<SeriesValue> {
    let params = OmegaParams { rho: ctx.pi(), x: ctx.cx_real(x), z: z.clone() };
    let s = omega_sums(&params, budget, ctx)?;
    Ok(combine_lambda(sign, z, s, ctx))
}

fn combine_lambda(sign: Sign, z: &Complex, s: KernelSums, ctx: &Ctx) -> SeriesValue {
    let (ep, em) = phase_factors(z, ctx);
    let v = match sign {
        Sign::Plus => (ep + em) * (s.plus + s.minus),
        Sign::Minus => (ep - em) * (s.plus - s.minus),
    } * 2u32;
    SeriesValue { value: v, terms: s.terms, tail_bound: s.tail * 4u32 }
}

/// Λ±(x, z) = Ω(x, z) ± Ω(x, −z). Evaluated from the defining series and
/// cross-checked against the Ω combination; the two must agree within
/// ten times the tail bound.
pub fn lambda_pm(sign: Sign, x: &Float, z: &Complex, budget: &SeriesBudget, ctx: &Ctx) -> Result<SeriesValue> {
    let direct = lambda_direct(sign, x, z, budget, ctx)?;
    let b = ctx.bits();
    let p = OmegaParams { rho: ctx.pi(), x: ctx.cx_real(x), z: z.clone() };
    let pos = omega(&p, budget, ctx)?;
    let neg = omega(&OmegaParams { z: Complex::with_val(b, -z), ..p }, budget, ctx)?;
    let combo = match sign {
        Sign::Plus => Complex::with_val(b, &pos.value + &neg.value),
        Sign::Minus => Complex::with_val(b, &pos.value - &neg.value),
    };
    let diff = Float::with_val(b, Complex::with_val(b, &combo - &direct.value).abs_ref());
    let allowed = Float::with_val(b, &pos.tail_bound + &neg.tail_bound) * 10u32 + ctx.eps() * 100u32;
    if diff > allowed {
        return Err(Error::Disagreement(format!("Lambda direct vs Omega combination differ by {:e}", diff.to_f64())));
    }
    Ok(direct)
}

/// Builds B(M) = Σ_{j^q n^p = M} c(n) σ_{−z}(j) j^{z/2} for M ≤ m_max.
fn folded_coefficients(z: &Complex, weight: &Weight, x_map: &XMap, m_max: usize, ctx: &Ctx) -> Vec<Complex> {
    let b = ctx.bits();
    let mut table: Vec<Complex> = (0..=m_max).map(|_| Complex::new(b)).collect();
    let mut g_cache: Vec<Option<Complex>> = Vec::new();
    let pow_u = |x: u64, e: u32| -> Option<u64> { x.checked_pow(e) };
    let mut n = 1u64;
    while let Some(np) = pow_u(n, x_map.p) {
        if np as usize > m_max {
            break;
        }
        let c = weight.eval(n, ctx);
        let mut j = 1u64;
        while let Some(jq) = pow_u(j, x_map.q) {
            let idx = jq.saturating_mul(np);
            if idx as usize > m_max {
                break;
            }
            let ju = j as usize;
            if g_cache.len() <= ju {
                g_cache.resize(ju + 1, None);
            }
            let g = g_cache[ju].get_or_insert_with(|| sigma_balanced(z, j, ctx));
            table[idx as usize] += Complex::with_val(b, &c * &*g);
            j += 1;
        }
        n += 1;
    }
    table
}

fn weighted_sums(
    rho: &Float,
    z: &Complex,
    weight: &Weight,
    x_map: &XMap,
    budget: &SeriesBudget,
    ctx: &Ctx,
) -> Result<KernelSums> {
    let tau = weight.growth().max(0.0) / f64::from(x_map.p) + coefficient_tau(z, x_map.q);
    let kernel = Kernel {
        rho,
        z,
        theta: x_map.theta(ctx),
        scale: ctx.int(1),
        q: x_map.q,
        tau: budget.tau.max(tau),
    };
    let first = weight.eval(1, ctx);
    kernel.sum(budget, ctx, first, |m_max| folded_coefficients(z, weight, x_map, m_max, ctx))
}

/// Σ_n c(n) Ω_ρ(x(n), z), folded into a single series over M = j^q n^p.
pub fn weighted_omega_sum(
    rho: &Float,
    z: &Complex,
    weight: &Weight,
    x_map: &XMap,
    budget: &SeriesBudget,
    ctx: &Ctx,
) -> Result<SeriesValue> {
    let s = weighted_sums(rho, z, weight, x_map, budget, ctx)?;
    let (ep, em) = phase_factors(z, ctx);
    let v = (ep * s.plus + em * s.minus) * 2u32;
    Ok(SeriesValue { value: v, terms: s.terms, tail_bound: s.tail * 2u32 })
}

/// Σ_n c(n) Λ±(n, z), folded the same way, with ρ = π.
pub fn weighted_lambda_sum(sign: Sign, z: &Complex, weight: &Weight, budget: &SeriesBudget, ctx: &Ctx) -> Result<SeriesValue> {
    let s = weighted_sums(&ctx.pi(), z, weight, &XMap::linear(), budget, ctx)?;
    Ok(combine_lambda(sign, z, s, ctx))
}

/// The same sum evaluated as an explicit double series: Ω_ρ(x(n), z) is
/// computed for each n separately and the outer sum is truncated once the
/// terms fall below the budget. Used to cross-check the folded form.
pub fn weighted_omega_sum_double(
    rho: &Float,
    z: &Complex,
    weight: &Weight,
    x_map: &XMap,
    budget: &SeriesBudget,
    ctx: &Ctx,
) -> Result<SeriesValue> {
    let b = ctx.bits();
    let mut acc = ctx.czero();
    let mut terms = 0usize;
    let mut scale: Option<Float> = None;
    let mut small_run = 0;
    for n in 1..=budget.max_terms as u64 {
        let c = weight.eval(n, ctx);
        let params = OmegaParams { rho: rho.clone(), x: x_map.apply(n, ctx), z: z.clone() };
        let inner_budget = SeriesBudget {
            tol: match &scale {
                Some(s) => Float::with_val(b, &budget.tol * s) / Float::with_val(b, c.abs_ref()).max(&ctx.eps()),
                None => budget.tol.clone(),
            },
            relative: scale.is_none() && budget.relative,
            ..budget.clone()
        };
        let om = omega(&params, &inner_budget, ctx)?;
        terms += om.terms;
        let t = Complex::with_val(b, &c * &om.value);
        let mag = Float::with_val(b, t.abs_ref());
        if scale.is_none() {
            scale = Some(if budget.relative { mag.clone() } else { ctx.int(1) });
        }
        acc += t;
        let thresh = Float::with_val(b, &budget.tol * scale.as_ref().expect("set above"));
        if mag < thresh {
            small_run += 1;
            if small_run >= 3 {
                return Ok(SeriesValue { value: acc, terms, tail_bound: thresh });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::BudgetExhausted { terms, last: 0.0 })
}

/// Single-series form of Σ_n n^{−2m−1} d(n) Ω_ρ(n):
/// 2 Σ_k b_m(k) (K_0(4ρε√k) + K_0(4ρε̄√k)).
pub fn convolution_omega_sum(rho: &Float, m: i64, budget: &SeriesBudget, ctx: &Ctx) -> Result<SeriesValue> {
    let z = ctx.czero();
    let kernel = Kernel {
        rho,
        z: &z,
        theta: ctx.zero(),
        scale: ctx.int(1),
        q: 1,
        tau: budget.tau.max((-2 * m - 1).max(0) as f64),
    };
    let s = kernel.sum(budget, ctx, ctx.cx(1.0, 0.0), |m_max| {
        let mut v = vec![ctx.czero()];
        for k in 1..=m_max as u64 {
            v.push(ctx.cx_real(&crate::arith::convolution_b(m, k, ctx)));
        }
        v
    })?;
    Ok(SeriesValue { value: (s.plus + s.minus) * 2u32, terms: s.terms, tail_bound: s.tail * 2u32 })
}

/// Ω(x) = −γ − ½ log x − 1/(4πx) + (x/π) Σ d(j)/(x² + j²), with the sum cut
/// at J = budget.max_terms and the remainder replaced by
/// ∫_J^∞ (log t + 2γ) f(t) dt − f(J) Δ(J), f(t) = 1/(x² + t²) and Δ the
/// divisor-problem remainder at J.
pub fn omega_pf_oracle(x: &Float, budget: &SeriesBudget, ctx: &Ctx) -> Result<Float> {
    if !(*x > 0) {
        return Err(Error::InvalidArgument("oracle needs x > 0".into()));
    }
    let b = ctx.bits();
    let jmax = budget.max_terms.min(2_000_000) as u64;
    let sieve = DivisorSieve::global();
    let x2 = Float::with_val(b, x.square_ref());
    let mut s = ctx.zero();
    let mut d_sum = 0u64;
    for j in 1..=jmax {
        let d = sieve.divisor_count(j);
        d_sum += d;
        s += Float::with_val(b, d) / (Float::with_val(b, j * j) + &x2);
    }
    let gamma = ctx.euler_gamma();
    let jf = ctx.int(jmax as i64);
    let ln_j = Float::with_val(b, jf.ln_ref());
    // ∫_J^∞ (log t + 2γ)(1/t² − x²/t⁴ + x⁴/t⁶) dt
    let two_g = Float::with_val(b, &gamma * 2u32);
    let lead = (Float::with_val(b, &ln_j + 1u32) + &two_g) / &jf;
    let j3 = Float::with_val(b, jf.clone().pow(3u32));
    let second = (Float::with_val(b, &ln_j / 3u32) + ctx.ratio(1, 9) + Float::with_val(b, &two_g / 3u32)) / &j3 * &x2;
    let j5 = Float::with_val(b, jf.clone().pow(5u32));
    let third = (Float::with_val(b, &ln_j / 5u32) + ctx.ratio(1, 25) + Float::with_val(b, &two_g / 5u32)) / j5
        * Float::with_val(b, x2.square_ref());
    let main_count = Float::with_val(b, &jf * &ln_j) + Float::with_val(b, &two_g - 1u32) * &jf;
    let delta = ctx.int(d_sum as i64) - main_count;
    let f_j = (Float::with_val(b, jf.square_ref()) + &x2).recip();
    s += lead - second + third - delta * f_j;

    let pi = ctx.pi();
    let out = -gamma - Float::with_val(b, x.ln_ref()) / 2u32 - (Float::with_val(b, &pi * x) * 4u32).recip()
        + Float::with_val(b, x / &pi) * s;
    Ok(out)
}

/// Σ_n n^e / (e^{2an} − 1), summed until the geometric tail bound falls
/// below the budget.
pub fn lambert_series(exponent: &Complex, a: &Float, budget: &SeriesBudget, ctx: &Ctx) -> Result<SeriesValue> {
    if !(*a > 0) {
        return Err(Error::InvalidArgument("Lambert series needs a positive scale".into()));
    }
    let b = ctx.bits();
    let two_a = Float::with_val(b, a * 2u32);
    let ratio = Float::with_val(b, -&two_a).exp();
    let geo = (ctx.int(1) - &ratio).recip();
    let peak = (exponent.real().to_f64() / two_a.to_f64()).max(1.0);
    let mut acc = ctx.czero();
    let mut first: Option<Float> = None;
    for n in 1..=budget.max_terms as u64 {
        let nf = Float::with_val(b, n);
        let pow = if exponent.is_zero() {
            ctx.cx(1.0, 0.0)
        } else {
            Complex::with_val(b, exponent * nf.clone().ln()).exp()
        };
        let den = Float::with_val(b, &two_a * &nf).exp_m1();
        let t = pow / den;
        let mag = Float::with_val(b, t.abs_ref());
        let first_mag = first.get_or_insert_with(|| mag.clone()).clone();
        acc += t;
        let tol = if budget.relative { Float::with_val(b, &budget.tol * &first_mag) } else { budget.tol.clone() };
        let tail = Float::with_val(b, &mag * &geo);
        if n as f64 > peak && tail < tol {
            return Ok(SeriesValue { value: acc, terms: n as usize, tail_bound: tail });
        }
    }
    Err(Error::BudgetExhausted { terms: budget.max_terms, last: 0.0 })
}
