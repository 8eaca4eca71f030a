//! Exact Bernoulli numbers B_{2k}, cached as rationals.

use std::sync::RwLock;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

static TABLE: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Exact B_n. Odd n > 1 is rejected: those values vanish and a request for
/// one indicates an indexing mistake upstream.
pub fn bernoulli(n: usize) -> Result<Rational> {
    if n == 1 {
        return Ok(Rational::from((-1, 2)));
    }
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("B_{n}: odd index above 1")));
    }
    let k = n / 2;
    {
        let table = TABLE.read().unwrap_or_else(|e| e.into_inner());
        if let Some(b) = table.get(k) {
            return Ok(b.clone());
        }
    }
    let mut table = TABLE.write().unwrap_or_else(|e| e.into_inner());
    extend(&mut table, k);
    Ok(table[k].clone())
}

/// Grows the table through index `k` using
/// B_{2k} = −(Σ_{i<k} C(2k+1, 2i) B_{2i} − (2k+1)/2) / (2k+1).
fn extend(table: &mut Vec<Rational>, k: usize) {
    if table.is_empty() {
        table.push(Rational::from(1));
    }
    while table.len() <= k {
        let kk = table.len() as u32;
        let n1 = 2 * kk + 1;
        let mut acc = Rational::new();
        for (i, b) in table.iter().enumerate() {
            let c = Integer::from(Integer::binomial_u(n1, 2 * i as u32));
            acc += Rational::from(b * c);
        }
        acc -= Rational::from((n1, 2));
        acc /= n1;
        table.push(-acc);
    }
}

/// B_n rounded to `bits` of precision. Panics on odd n > 1.
pub fn bernoulli_float(n: usize, bits: u32) -> Float {
    let b = bernoulli(n).expect("even Bernoulli index");
    Float::with_val(bits, &b)
}
