//! Divisor counts, generalized divisor sums σ_z(n), and the Dirichlet
//! convolution coefficients b_m(k).

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::numerics::Ctx;

pub const DEFAULT_SIEVE_LIMIT: u64 = 1_000_000;

struct Tables {
    limit: u64,
    spf: Vec<u32>,
    d: Vec<u32>,
}

impl Tables {
    /// Linear sieve producing smallest prime factors and d(n) for n ≤ limit.
    fn build(limit: u64) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut d = vec![0u32; n + 1];
        // exponent of the smallest prime in n
        let mut e = vec![0u8; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        if n >= 1 {
            d[1] = 1;
        }
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                d[i] = 2;
                e[i] = 1;
                primes.push(i as u32);
            }
            for &p in &primes {
                let ip = i * p as usize;
                if p > spf[i] || ip > n {
                    break;
                }
                spf[ip] = p;
                if p == spf[i] {
                    e[ip] = e[i] + 1;
                    d[ip] = d[i] / (u32::from(e[i]) + 1) * (u32::from(e[ip]) + 1);
                } else {
                    e[ip] = 1;
                    d[ip] = d[i] * 2;
                }
            }
        }
        Self { limit, spf, d }
    }
}

/// Smallest-prime-factor sieve with a divisor-count table. Grows by
/// doubling; values already handed out never change.
pub struct DivisorSieve {
    tables: RwLock<Arc<Tables>>,
    divisors: RwLock<HashMap<u64, Arc<Vec<u64>>>>,
}

impl DivisorSieve {
    pub fn new(limit: u64) -> Self {
        Self {
            tables: RwLock::new(Arc::new(Tables::build(limit.max(16)))),
            divisors: RwLock::new(HashMap::new()),
        }
    }

    pub fn global() -> &'static DivisorSieve {
        static SIEVE: OnceLock<DivisorSieve> = OnceLock::new();
        SIEVE.get_or_init(|| DivisorSieve::new(DEFAULT_SIEVE_LIMIT))
    }

    pub fn limit(&self) -> u64 {
        self.snapshot().limit
    }

    fn snapshot(&self) -> Arc<Tables> {
        self.tables.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    fn covering(&self, n: u64) -> Arc<Tables> {
        let t = self.snapshot();
        if n <= t.limit {
            return t;
        }
        let mut guard = self.tables.write().unwrap_or_else(|e| e.into_inner());
        if n > guard.limit {
            let mut limit = guard.limit;
            while limit < n {
                limit *= 2;
            }
            *guard = Arc::new(Tables::build(limit));
        }
        guard.clone()
    }

    pub fn divisor_count(&self, n: u64) -> u64 {
        assert!(n >= 1, "divisor_count needs n >= 1");
        u64::from(self.covering(n).d[n as usize])
    }

    /// Prime factorization as (p, exponent) pairs in increasing p.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        assert!(n >= 1);
        let t = self.covering(n);
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = t.spf[m] as u64;
            let mut a = 0;
            while (m as u64).is_multiple_of(p) {
                m /= p as usize;
                a += 1;
            }
            out.push((p, a));
        }
        out
    }

    /// Sorted divisors of n, cached per n.
    pub fn divisors(&self, n: u64) -> Arc<Vec<u64>> {
        if let Some(v) = self.divisors.read().unwrap_or_else(|e| e.into_inner()).get(&n) {
            return v.clone();
        }
        let mut divs = vec![1u64];
        for (p, a) in self.factorize(n) {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..a {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        let v = Arc::new(divs);
        self.divisors.write().unwrap_or_else(|e| e.into_inner()).insert(n, v.clone());
        v
    }
}

pub fn divisor_count(n: u64) -> u64 {
    DivisorSieve::global().divisor_count(n)
}

/// σ_z(n) = Σ_{d|n} d^z.
pub fn sigma(z: &Complex, n: u64, ctx: &Ctx) -> Complex {
    let b = ctx.bits();
    let mut acc = ctx.czero();
    for &d in DivisorSieve::global().divisors(n).iter() {
        if d == 1 {
            acc += 1u32;
        } else {
            acc += Complex::with_val(b, z * Float::with_val(b, d).ln()).exp();
        }
    }
    acc
}

/// σ_{−z}(n) n^{z/2} = Σ_{d|n} (n/d²)^{z/2}, the coefficient attached to
/// every Bessel term of Ω(x, z).
pub fn sigma_balanced(z: &Complex, n: u64, ctx: &Ctx) -> Complex {
    let b = ctx.bits();
    if z.is_zero() {
        return Complex::with_val(b, divisor_count(n));
    }
    let half = Complex::with_val(b, z / 2u32);
    let ln_n = Float::with_val(b, n).ln();
    let mut acc = ctx.czero();
    for &d in DivisorSieve::global().divisors(n).iter() {
        let e = Float::with_val(b, &ln_n - Float::with_val(b, d).ln() * 2u32);
        acc += Complex::with_val(b, &half * &e).exp();
    }
    acc
}

/// b_m(k) = Σ_{n|k} n^{−2m−1} d(n) d(k/n).
pub fn convolution_b(m: i64, k: u64, ctx: &Ctx) -> Float {
    let b = ctx.bits();
    let sieve = DivisorSieve::global();
    let mut acc = ctx.zero();
    let e = -2 * m - 1;
    for &n in sieve.divisors(k).iter() {
        let w = sieve.divisor_count(n) * sieve.divisor_count(k / n);
        let pw = if e >= 0 {
            Float::with_val(b, rug::Integer::from(n).pow(e as u32))
        } else {
            Float::with_val(b, rug::Integer::from(n).pow((-e) as u32)).recip()
        };
        acc += pw * w;
    }
    acc
}

/// Partial sum Σ_{n≤terms} σ_b(n) n^{−s} and a bound on the discarded tail.
/// Only meant as an oracle for ζ(s)ζ(s−b).
pub fn dirichlet_sigma_series(s: &Complex, b: &Complex, terms: u64, ctx: &Ctx) -> Result<(Complex, f64)> {
    let re_s = s.real().to_f64();
    let re_b = b.real().to_f64();
    let excess = re_s - 1.0 - re_b.max(0.0);
    if excess <= 0.2 {
        return Err(Error::Convergence(format!(
            "Dirichlet series for sigma_b converges too slowly at Re s = {re_s}, Re b = {re_b}"
        )));
    }
    let bits = ctx.bits();
    let sieve = DivisorSieve::global();
    let mut prime_pow: HashMap<u64, Complex> = HashMap::new();
    let mut acc = ctx.czero();
    for n in 1..=terms {
        let mut sig = Complex::with_val(bits, 1);
        for (p, a) in sieve.factorize(n) {
            let pb = prime_pow
                .entry(p)
                .or_insert_with(|| Complex::with_val(bits, b * Float::with_val(bits, p).ln()).exp());
            // 1 + p^b + … + p^{ab}
            let mut geo = Complex::with_val(bits, 1);
            let mut pk = Complex::with_val(bits, 1);
            for _ in 0..a {
                pk *= &*pb;
                geo += &pk;
            }
            sig *= geo;
        }
        let ns = (Complex::with_val(bits, s * Float::with_val(bits, n).ln()) * -1i32).exp();
        acc += sig * ns;
    }
    let nt = terms as f64;
    let tail = nt.powf(-excess) * (nt.ln() + 2.0) / excess;
    Ok((acc, tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{set_precision, Precision};
    use crate::special::zeta::zeta;
    use rug::ops::Pow;

    fn ctx() -> Ctx {
        set_precision(Precision::new(30).unwrap()).unwrap()
    }

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        Float::with_val(a.prec().0, Complex::with_val(a.prec().0, a - b).abs_ref()) < tol
    }

    #[test]
    fn divisor_counts() {
        assert_eq!(divisor_count(1), 1);
        assert_eq!(divisor_count(6), 4);
        assert_eq!(divisor_count(360), 24);
        assert_eq!(divisor_count(999_983), 2);
    }

    #[test]
    fn sieve_grows_and_keeps_values() {
        let s = DivisorSieve::new(100);
        let before = s.divisor_count(96);
        assert_eq!(s.divisor_count(1000), 16);
        assert!(s.limit() >= 1000);
        assert_eq!(s.divisor_count(96), before);
    }

    #[test]
    fn sigma_examples() {
        let c = ctx();
        assert!(close(&sigma(&c.cx(4.0, 0.0), 2, &c), &c.cx(17.0, 0.0), 1e-28));
        let v = sigma(&c.cx(-2.0, 0.0), 6, &c);
        assert!(close(&v, &c.cx_real(&c.ratio(25, 18)), 1e-28));
    }

    #[test]
    fn sigma_at_first_zero_by_enumeration() {
        let c = ctx();
        let omega = crate::special::find_first_nontrivial_zero(Precision::new(30).unwrap()).unwrap();
        let v = sigma(&omega, 12, &c);
        let mut want = c.czero();
        for d in [1u32, 2, 3, 4, 6, 12] {
            want += Complex::with_val(c.bits(), (d, 0)).pow(&omega);
        }
        assert!(close(&v, &want, 1e-27));
    }

    #[test]
    fn convolution_examples() {
        let c = ctx();
        assert_eq!(convolution_b(0, 1, &c), 1);
        assert_eq!(convolution_b(0, 2, &c), 3);
        // brute force over divisors of 12 with d: 1→1, 2→2, 3→2, 4→3, 6→4, 12→6
        let d = |n: u32| -> u32 { [0, 1, 2, 2, 3, 0, 4, 0, 0, 0, 0, 0, 6][n as usize] };
        let mut want = c.zero();
        for n in [1u32, 2, 3, 4, 6, 12] {
            want += c.int(i64::from(d(n) * d(12 / n))) / c.int(i64::from(n).pow(3));
        }
        assert!((convolution_b(1, 12, &c) - want).abs() < 1e-28);
    }

    #[test]
    fn convolution_bounded_by_unweighted_sum() {
        // b_m(k) ≤ Σ_{n|k} d(n) d(k/n) for m ≥ 0. A k^{1/2} bound fails at k = 2.
        let c = ctx();
        for k in 1..=2000u64 {
            let plain: u64 = DivisorSieve::global().divisors(k).iter().map(|&n| divisor_count(n) * divisor_count(k / n)).sum();
            for m in [0, 1, 3] {
                assert!(convolution_b(m, k, &c) <= plain, "m = {m}, k = {k}");
            }
        }
        assert!(convolution_b(0, 2, &c) > c.real(2f64.sqrt()));
    }

    #[test]
    fn dirichlet_series_oracle() {
        let c = ctx();
        let (v, tail) = dirichlet_sigma_series(&c.cx(3.0, 0.0), &c.czero(), 20_000, &c).unwrap();
        let z3 = zeta(&c.cx(3.0, 0.0), &c).unwrap();
        let want = Complex::with_val(c.bits(), z3.square_ref());
        assert!(close(&v, &want, tail.max(1e-25) * 2.0));
        let (v, tail) = dirichlet_sigma_series(&c.cx(4.0, 0.0), &c.cx(1.0, 0.0), 20_000, &c).unwrap();
        let want = zeta(&c.cx(4.0, 0.0), &c).unwrap() * zeta(&c.cx(3.0, 0.0), &c).unwrap();
        assert!(close(&v, &want, tail * 2.0));
        assert!(dirichlet_sigma_series(&c.cx(1.5, 0.0), &c.cx(0.5, 0.0), 10, &c).is_err());
    }
}
