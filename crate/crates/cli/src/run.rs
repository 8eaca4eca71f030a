//! Case expansion and the (optionally parallel) verification run.

use rayon::prelude::*;
use zeta_omega::identities::{describe, rebalance, verify, IdentityCase, IdentityId, Tolerances, VerificationRecord};
use zeta_omega::{set_precision, Ctx, Precision};

use crate::config::{GridOverrides, RunConfig};
use crate::report::Report;

/// Default grid of `id` with each overridden parameter replaced by every
/// value in its list. Duplicates are dropped, first occurrence wins.
pub fn expand(id: IdentityId, grid: &GridOverrides) -> Vec<IdentityCase> {
    let mut cases = describe(id).default_grid();
    if grid.is_empty() {
        return cases;
    }
    fn over<T: Copy>(cases: Vec<IdentityCase>, values: &[T], set: impl Fn(IdentityCase, T) -> IdentityCase) -> Vec<IdentityCase> {
        if values.is_empty() {
            return cases;
        }
        cases.into_iter().flat_map(|c| values.iter().map(|&v| set(c.clone(), v)).collect::<Vec<_>>()).collect()
    }
    cases = over(cases, &grid.m, |c, v| c.m(v));
    cases = over(cases, &grid.z, |c, v| c.z(v.re, v.im));
    cases = over(cases, &grid.n, |c, v| c.n(v));
    cases = over(cases, &grid.h, |c, v| c.h(v));
    cases = over(cases, &grid.ell, |c, v| c.ell(v));
    cases = if grid.t.is_empty() {
        // The balanced α/β split depends on (N, m, h).
        cases.into_iter().map(rebalance).collect()
    } else {
        over(cases, &grid.t, |c, v| c.t(v))
    };
    let mut seen = std::collections::HashSet::new();
    cases.retain(|c| seen.insert(c.to_string()));
    cases
}

pub fn tolerances(cfg: &RunConfig, ctx: &Ctx) -> Tolerances {
    let mut tol = Tolerances::for_ctx(ctx);
    let b = ctx.bits();
    if let Some(v) = cfg.tol.abs {
        tol.abs = rug::Float::with_val(b, v);
    }
    if let Some(v) = cfg.tol.rel {
        tol.rel = rug::Float::with_val(b, v);
    }
    if let Some(v) = cfg.tol.series {
        tol.series = rug::Float::with_val(b, v);
    }
    tol
}

/// Validates the config, expands every case and verifies them. Records
/// keep case order whatever the parallel width.
pub fn run(cfg: &RunConfig) -> anyhow::Result<Report> {
    let ids = cfg.resolve_ids()?;
    let digits = cfg.resolve_digits()?;
    let ctx = set_precision(Precision::new(digits)?)?;
    let tol = tolerances(cfg, &ctx);
    let cases: Vec<IdentityCase> = ids.iter().flat_map(|&id| expand(id, &cfg.grid)).collect();
    let jobs = cfg.jobs.max(1);
    let records: Vec<VerificationRecord> = if jobs == 1 {
        cases.iter().map(|c| verify(c, &tol, &ctx)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
        pool.install(|| cases.par_iter().map(|c| verify(c, &tol, &ctx)).collect())
    };
    Ok(Report::new(digits, &records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ZValue;

    #[test]
    fn overrides_replace_grid_values() {
        let grid = GridOverrides { z: vec![ZValue { re: 3.0, im: 0.0 }], t: vec![1.0], ..Default::default() };
        let cases = expand(IdentityId::T2, &grid);
        // m ∈ {1, −2} survive, t and z collapse to the override.
        assert_eq!(cases.len(), 2);
        assert!(cases.iter().all(|c| c.z == Some((3.0, 0.0)) && c.t == 1.0));
    }

    #[test]
    fn n_override_rebalances_t() {
        let base = expand(IdentityId::T7, &GridOverrides::default());
        let grid = GridOverrides { n: vec![3], m: vec![1], ..Default::default() };
        let cases = expand(IdentityId::T7, &grid);
        assert_eq!(cases.len(), 1);
        assert_eq!(cases[0], base[0]);
    }
}
