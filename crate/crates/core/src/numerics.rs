//! Working precision, the context handle threaded through every evaluator,
//! and the ledger of fundamental constants.

use std::sync::Mutex;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::special::bernoulli::bernoulli_float;

pub type Scalar = Float;
pub type CScalar = Complex;

pub const MIN_DIGITS: u32 = 15;
pub const DEFAULT_DIGITS: u32 = 50;
pub const DEFAULT_GUARD: u32 = 10;

const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    pub digits: u32,
    pub guard: u32,
}

impl Precision {
    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::PrecisionTooLow(digits));
        }
        Ok(Self { digits, guard })
    }

    pub fn effective(&self) -> u32 {
        self.digits + self.guard
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self { digits: DEFAULT_DIGITS, guard: DEFAULT_GUARD }
    }
}

/// Immutable evaluation context. Cheap to clone and safe to share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ctx {
    digits: u32,
    effective: u32,
    bits: u32,
}

/// Validates `p` and returns a handle evaluating at `p.digits + p.guard` digits.
pub fn set_precision(p: Precision) -> Result<Ctx> {
    if p.digits < MIN_DIGITS {
        return Err(Error::PrecisionTooLow(p.digits));
    }
    Ok(Ctx::from_digits(p.digits, p.effective()))
}

fn digits_to_bits(d: u32) -> u32 {
    (f64::from(d) * BITS_PER_DIGIT).ceil() as u32 + 4
}

impl Ctx {
    fn from_digits(digits: u32, effective: u32) -> Self {
        Self { digits, effective, bits: digits_to_bits(effective) }
    }

    /// Internal context with an explicit effective precision. Unlike
    /// [`set_precision`] this accepts low precisions; it is used for
    /// scratch evaluations whose result only needs a few digits.
    pub fn raw(effective_digits: u32) -> Self {
        let d = effective_digits.max(8);
        Self::from_digits(d, d)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn effective_digits(&self) -> u32 {
        self.effective
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Same nominal digits, `extra` more working digits.
    pub fn extended(&self, extra: u32) -> Self {
        Self::from_digits(self.digits, self.effective + extra)
    }

    /// Context whose nominal and working digits are both `effective`.
    pub fn at_effective(&self) -> Self {
        Self::raw(self.effective)
    }

    pub fn real(&self, x: f64) -> Float {
        Float::with_val(self.bits, x)
    }

    pub fn int(&self, n: i64) -> Float {
        Float::with_val(self.bits, n)
    }

    pub fn ratio(&self, num: i64, den: i64) -> Float {
        Float::with_val(self.bits, num) / den
    }

    pub fn cx(&self, re: f64, im: f64) -> Complex {
        Complex::with_val(self.bits, (re, im))
    }

    pub fn cx_real(&self, x: &Float) -> Complex {
        Complex::with_val(self.bits, (x, 0))
    }

    pub fn cx_of(&self, z: &Complex) -> Complex {
        Complex::with_val(self.bits, z)
    }

    pub fn zero(&self) -> Float {
        Float::with_val(self.bits, 0)
    }

    pub fn czero(&self) -> Complex {
        Complex::with_val(self.bits, 0)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits, Constant::Pi)
    }

    /// 10^e at this context's precision.
    pub fn pow10(&self, e: i32) -> Float {
        Float::with_val(self.bits, 10).pow(e)
    }

    /// Working epsilon, 10^-(effective digits).
    pub fn eps(&self) -> Float {
        self.pow10(-(self.effective as i32))
    }

    /// Nominal tolerance, 10^-(digits).
    pub fn tol(&self) -> Float {
        self.pow10(-(self.digits as i32))
    }

    pub fn euler_gamma(&self) -> Float {
        cached(&GAMMA_CACHE, self.bits, euler_gamma_em)
    }

    pub fn stieltjes1(&self) -> Float {
        cached(&GAMMA1_CACHE, self.bits, stieltjes1_em)
    }

    pub fn log_glaisher(&self) -> Float {
        cached(&LOG_A_CACHE, self.bits, log_glaisher_em)
    }
}

impl Default for Ctx {
    fn default() -> Self {
        set_precision(Precision::default()).expect("default precision is valid")
    }
}

static GAMMA_CACHE: Mutex<Option<Float>> = Mutex::new(None);
static GAMMA1_CACHE: Mutex<Option<Float>> = Mutex::new(None);
static LOG_A_CACHE: Mutex<Option<Float>> = Mutex::new(None);

fn cached(slot: &Mutex<Option<Float>>, bits: u32, f: fn(u32) -> Result<Float>) -> Float {
    let mut guard = slot.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(v) = guard.as_ref() {
        if v.prec() >= bits {
            return Float::with_val(bits, v);
        }
    }
    let target = bits.div_ceil(64) * 64 + 64;
    let v = f(target).expect("Euler-Maclaurin constant evaluation converges");
    let out = Float::with_val(bits, &v);
    *guard = Some(v);
    out
}

/// Shared driver for the three Euler–Maclaurin constant evaluations: adds
/// correction terms `term(i)` for i = 1, 2, ... until they drop below
/// 10^-(digits+5), failing if the asymptotic series starts to grow first.
/// `term` returns the correction and a monotone envelope for it; the
/// envelope drives both tests so sign changes in a factor don't stop early.
fn em_tail(bits: u32, n: u64, first: usize, term: impl Fn(usize) -> (Float, Float)) -> Result<Float> {
    let digits = (f64::from(bits) / BITS_PER_DIGIT) as i32;
    let tol = Float::with_val(bits, 10).pow(-(digits + 5));
    let mut acc = Float::with_val(bits, 0);
    let mut prev: Option<Float> = None;
    let max_i = (std::f64::consts::PI * n as f64) as usize;
    for i in first..max_i {
        let (t, mag) = term(i);
        acc += &t;
        if mag < tol {
            return Ok(acc);
        }
        if let Some(p) = &prev {
            if mag > *p {
                break;
            }
        }
        prev = Some(mag);
    }
    Err(Error::Convergence(format!(
        "Euler-Maclaurin correction did not shrink below 1e-{} with n = {n}",
        digits + 5
    )))
}

fn em_cutoff(bits: u32) -> u64 {
    let digits = f64::from(bits) / BITS_PER_DIGIT;
    (0.5 * digits).ceil() as u64 + 10
}

/// γ = H_n − log n − 1/(2n) + Σ B_{2i} / (2i n^{2i}).
pub fn euler_gamma_em(bits: u32) -> Result<Float> {
    let n = em_cutoff(bits);
    let nf = Float::with_val(bits, n);
    let mut h = Float::with_val(bits, 0);
    for k in 1..=n {
        h += Float::with_val(bits, 1) / k;
    }
    h -= nf.clone().ln();
    h -= Float::with_val(bits, 0.5) / &nf;
    let tail = em_tail(bits, n, 1, |i| {
        let b = bernoulli_float(2 * i, bits);
        let t = b / (2 * i as u64) / nf.clone().pow(2 * i as u32);
        let mag = Float::with_val(bits, t.abs_ref());
        (t, mag)
    })?;
    Ok(h + tail)
}

/// γ₁ = Σ_{k≤n} log k / k − (log n)²/2 − log n / (2n) − Σ B_{2i}/(2i)! f^{(2i−1)}(n),
/// with f(x) = log x / x and f^{(r)}(x) = (−1)^r r! (log x − H_r) / x^{r+1}.
pub fn stieltjes1_em(bits: u32) -> Result<Float> {
    let n = em_cutoff(bits);
    let nf = Float::with_val(bits, n);
    let ln_n = nf.clone().ln();
    let mut s = Float::with_val(bits, 0);
    for k in 2..=n {
        s += Float::with_val(bits, k).ln() / k;
    }
    s -= Float::with_val(bits, ln_n.square_ref()) / 2;
    s -= Float::with_val(bits, &ln_n / &nf) / 2;
    // H_r for odd r = 2i − 1, built incrementally inside the closure.
    let harmonic = |r: usize| {
        let mut h = Float::with_val(bits, 0);
        for j in 1..=r {
            h += Float::with_val(bits, 1) / j as u64;
        }
        h
    };
    let tail = em_tail(bits, n, 1, |i| {
        let r = 2 * i - 1;
        let b = bernoulli_float(2 * i, bits);
        // B_{2i}/(2i)! · (−1)^r r! = −B_{2i} / (2i)
        let coeff = -b / (2 * i as u64);
        let h = harmonic(r);
        let scale = coeff / nf.clone().pow(r as u32 + 1);
        let mag = Float::with_val(bits, scale.abs_ref()) * (Float::with_val(bits, &ln_n) + &h);
        (-(scale * (Float::with_val(bits, &ln_n) - h)), mag)
    })?;
    Ok(s + tail)
}

/// log A = Σ_{k≤n} k log k − (n²/2 + n/2 + 1/12) log n + n²/4
///         + Σ_{i≥2} B_{2i} / (2i(2i−1)(2i−2) n^{2i−2}).
pub fn log_glaisher_em(bits: u32) -> Result<Float> {
    let n = em_cutoff(bits);
    let nf = Float::with_val(bits, n);
    let ln_n = nf.clone().ln();
    let mut s = Float::with_val(bits, 0);
    for k in 2..=n {
        s += Float::with_val(bits, k).ln() * k;
    }
    let n2 = Float::with_val(bits, nf.square_ref());
    let poly = Float::with_val(bits, &n2 / 2) + Float::with_val(bits, &nf / 2) + Float::with_val(bits, 1) / 12;
    s -= poly * &ln_n;
    s += n2 / 4;
    let tail = em_tail(bits, n, 2, |i| {
        let b = bernoulli_float(2 * i, bits);
        let k = 2 * i as u64;
        let t = b / (k * (k - 1) * (k - 2)) / nf.clone().pow(k as u32 - 2);
        let mag = Float::with_val(bits, t.abs_ref());
        (t, mag)
    })?;
    Ok(s + tail)
}

#[derive(Clone, Debug)]
pub struct LedgerEntry {
    pub value: Scalar,
    pub provenance: &'static str,
    pub certified_digits: u32,
}

#[derive(Clone, Debug)]
pub struct ConstantsLedger {
    pub euler_gamma: LedgerEntry,
    pub stieltjes_1: LedgerEntry,
    pub log_glaisher: LedgerEntry,
    pub zeta_prime_minus1: LedgerEntry,
    pub zeta_prime_2: LedgerEntry,
    pub first_zero_im: LedgerEntry,
}

/// Evaluates every ledger constant from scratch at precision `p` and checks
/// ζ′(−1) = 1/12 − log A before returning.
pub fn compute_constants(p: Precision) -> Result<ConstantsLedger> {
    let ctx = set_precision(p)?;
    let bits = ctx.bits();
    let digits = p.digits;
    let entry = |value: Float, provenance| LedgerEntry { value, provenance, certified_digits: digits };

    let gamma = euler_gamma_em(bits)?;
    let gamma1 = stieltjes1_em(bits)?;
    let log_a = log_glaisher_em(bits)?;
    let zp_m1 = crate::special::zeta::zeta_prime(&ctx.cx(-1.0, 0.0), &ctx)?.real().clone();
    let zp_2 = crate::special::zeta::zeta_prime(&ctx.cx(2.0, 0.0), &ctx)?.real().clone();
    let zero = crate::special::zeros::find_first_nontrivial_zero(p)?;

    let defect = Float::with_val(bits, &zp_m1 - ctx.ratio(1, 12)) + &log_a;
    if defect.abs() > ctx.pow10(-(digits as i32) + 5) {
        return Err(Error::Convergence("zeta'(-1) and log A disagree".into()));
    }

    Ok(ConstantsLedger {
        euler_gamma: entry(gamma, "Euler-Maclaurin on H_n - log n"),
        stieltjes_1: entry(gamma1, "Euler-Maclaurin on sum log k / k - (log n)^2 / 2"),
        log_glaisher: entry(log_a, "Euler-Maclaurin on sum k log k"),
        zeta_prime_minus1: entry(zp_m1, "termwise differentiated Euler-Maclaurin zeta"),
        zeta_prime_2: entry(zp_2, "termwise differentiated Euler-Maclaurin zeta"),
        first_zero_im: entry(zero.imag().clone(), "bisection on Hardy Z, Newton polish"),
    })
}

/// Σ″ e^{ijz} over j = −(N−1), −(N−3), …, N−1, which equals sin(Nz)/sin(z).
pub fn chebyshev_ratio(n: u32, z: &Complex, ctx: &Ctx) -> Result<Complex> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let s = Complex::with_val(ctx.bits(), z.sin_ref());
    let threshold = ctx.pow10(-(ctx.digits() as i32) / 2);
    if Float::with_val(ctx.bits(), s.abs_ref()) < threshold {
        return Err(Error::Singular("sin z vanishes".into()));
    }
    let i_z = Complex::with_val(ctx.bits(), z * Complex::with_val(ctx.bits(), (0, 1)));
    let mut acc = ctx.czero();
    let top = i64::from(n) - 1;
    let mut j = -top;
    while j <= top {
        acc += Complex::with_val(ctx.bits(), &i_z * j).exp();
        j += 2;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference digits from an independent arbitrary-precision library.
    const GAMMA: &str = "0.577215664901532860606512090082402431042159335939923598805767";
    const GAMMA1: &str = "-0.0728158454836767248605863758749013191377363383343379525990066";
    const LOG_A: &str = "0.248754477033784262547252993576113976097369713668535116999856";
    const ZP_M1: &str = "-0.165421143700450929213919660242780642764036380335201783666522";

    fn parse(s: &str, bits: u32) -> Float {
        Float::with_val(bits, Float::parse(s).unwrap())
    }

    #[test]
    fn precision_contract() {
        let ctx = set_precision(Precision::new(50).unwrap()).unwrap();
        assert_eq!(ctx.effective_digits(), 60);
        assert!(set_precision(Precision::new(15).unwrap()).is_ok());
        assert_eq!(Precision::new(10), Err(Error::PrecisionTooLow(10)));
        assert!(set_precision(Precision { digits: 10, guard: 10 }).is_err());
    }

    #[test]
    fn em_constants_match_reference() {
        let bits = 200;
        let tol = Float::with_val(bits, 10).pow(-55);
        for (f, want) in [
            (euler_gamma_em as fn(u32) -> Result<Float>, GAMMA),
            (stieltjes1_em, GAMMA1),
            (log_glaisher_em, LOG_A),
        ] {
            let v = f(bits).unwrap();
            assert!((v - parse(want, bits)).abs() < tol, "{want}");
        }
    }

    #[test]
    fn ledger_is_consistent() {
        let p = Precision::new(40).unwrap();
        let ledger = compute_constants(p).unwrap();
        let bits = ledger.euler_gamma.value.prec();
        let tol = Float::with_val(bits, 10).pow(-38);
        assert!((ledger.zeta_prime_minus1.value.clone() - parse(ZP_M1, bits)).abs() < tol);
        let rel = Float::with_val(bits, 1) / 12u32 - &ledger.log_glaisher.value;
        assert!((rel - &ledger.zeta_prime_minus1.value).abs() < tol);
        assert!((ledger.first_zero_im.value.to_f64() - 14.134_725_141_734_694).abs() < 1e-12);
        assert!((ledger.zeta_prime_2.value.to_f64() + 0.937_548_254_315_843_8).abs() < 1e-15);
    }

    #[test]
    fn doubling_digits_changes_only_below_tolerance() {
        let a = compute_constants(Precision::new(20).unwrap()).unwrap();
        let b = compute_constants(Precision::new(40).unwrap()).unwrap();
        let tol = 1e-20;
        for (x, y) in [
            (&a.euler_gamma, &b.euler_gamma),
            (&a.stieltjes_1, &b.stieltjes_1),
            (&a.log_glaisher, &b.log_glaisher),
            (&a.zeta_prime_minus1, &b.zeta_prime_minus1),
            (&a.zeta_prime_2, &b.zeta_prime_2),
            (&a.first_zero_im, &b.first_zero_im),
        ] {
            let d = Float::with_val(y.value.prec(), &x.value - &y.value).abs();
            assert!(d < tol, "{}", x.provenance);
        }
    }

    #[test]
    fn chebyshev_ratio_examples() {
        let ctx = set_precision(Precision::new(30).unwrap()).unwrap();
        let one = chebyshev_ratio(1, &ctx.cx(0.7, -0.2), &ctx).unwrap();
        assert!(Float::with_val(ctx.bits(), (one - 1u32).abs_ref()) < 1e-30);
        let half_pi = Complex::with_val(ctx.bits(), (ctx.pi() / 2u32, 0));
        let v = chebyshev_ratio(3, &half_pi, &ctx).unwrap();
        assert!(Float::with_val(ctx.bits(), (v + 1u32).abs_ref()) < 1e-30);
        let z = ctx.cx(0.3, 0.1);
        let v = chebyshev_ratio(5, &z, &ctx).unwrap();
        let direct = Complex::with_val(ctx.bits(), &z * 5u32).sin() / Complex::with_val(ctx.bits(), z.sin_ref());
        assert!(Float::with_val(ctx.bits(), (v - direct).abs_ref()) < 1e-35);
        assert!(chebyshev_ratio(4, &ctx.czero(), &ctx).is_err());
    }
}
