//! Machine-readable reports. Arbitrary-precision values are written as
//! decimal strings so nothing is lost to f64.

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};
use zeta_omega::identities::{Status, VerificationRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub digits: u32,
    pub timestamp: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CValue {
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub form: String,
    pub t: String,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub m: i64,
    pub z: Option<CValue>,
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub h: Option<i64>,
    pub ell: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub params: Params,
    pub lhs: Option<CValue>,
    pub rhs: Option<CValue>,
    pub abs_err: Option<String>,
    pub rel_err: Option<String>,
    pub tol_abs: String,
    pub tol_rel: String,
    pub terms_used: usize,
    pub runtime_ms: u64,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub records: Vec<Record>,
    pub summary: Summary,
}

/// Decimal string with `digits` significant digits.
pub fn decimal(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits as usize))
}

fn cvalue(z: &Complex, digits: u32) -> CValue {
    CValue { re: decimal(z.real(), digits), im: decimal(z.imag(), digits) }
}

fn record(r: &VerificationRecord, digits: u32) -> Record {
    let c = &r.case;
    let short = |x: &Float| decimal(x, 6);
    Record {
        id: c.id.to_string(),
        params: Params {
            form: c.form.as_str().into(),
            t: format!("{}", c.t),
            alpha: r.alpha.as_ref().map(|x| decimal(x, digits)),
            beta: r.beta.as_ref().map(|x| decimal(x, digits)),
            m: c.m,
            z: c.z.map(|(re, im)| CValue { re: format!("{re}"), im: format!("{im}") }),
            n: c.n,
            h: c.h,
            ell: c.ell,
        },
        lhs: r.lhs.as_ref().map(|z| cvalue(z, digits)),
        rhs: r.rhs.as_ref().map(|z| cvalue(z, digits)),
        abs_err: r.abs_err.as_ref().map(short),
        rel_err: r.rel_err.as_ref().map(short),
        tol_abs: short(&r.tol_abs),
        tol_rel: short(&r.tol_rel),
        terms_used: r.terms_used,
        runtime_ms: r.runtime_ms,
        status: r.status.as_str().into(),
        reason: r.reason.clone(),
    }
}

impl Report {
    pub fn new(digits: u32, records: &[VerificationRecord]) -> Self {
        let mut summary = Summary::default();
        for r in records {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        Self {
            meta: Meta {
                version: env!("CARGO_PKG_VERSION").into(),
                digits,
                timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            },
            records: records.iter().map(|r| record(r, digits)).collect(),
            summary,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "id", "form", "t", "alpha", "beta", "m", "z_re", "z_im", "N", "h", "ell", "lhs_re", "lhs_im", "rhs_re",
            "rhs_im", "abs_err", "rel_err", "terms_used", "runtime_ms", "status", "reason",
        ])?;
        for r in &self.records {
            let p = &r.params;
            let opt = |v: &Option<String>| v.clone().unwrap_or_default();
            let num = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
            let (zr, zi) = p.z.as_ref().map(|z| (z.re.clone(), z.im.clone())).unwrap_or_default();
            let (lr, li) = r.lhs.as_ref().map(|z| (z.re.clone(), z.im.clone())).unwrap_or_default();
            let (rr, ri) = r.rhs.as_ref().map(|z| (z.re.clone(), z.im.clone())).unwrap_or_default();
            w.write_record([
                r.id.clone(),
                p.form.clone(),
                p.t.clone(),
                opt(&p.alpha),
                opt(&p.beta),
                p.m.to_string(),
                zr,
                zi,
                num(p.n.map(i64::from)),
                num(p.h),
                num(p.ell),
                lr,
                li,
                rr,
                ri,
                opt(&r.abs_err),
                opt(&r.rel_err),
                r.terms_used.to_string(),
                r.runtime_ms.to_string(),
                r.status.clone(),
                opt(&r.reason),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    /// Writes to a temporary file next to `path` and renames it into place.
    pub fn write_atomic(text: &str, path: &Path) -> anyhow::Result<()> {
        let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
        tmp.write_all(text.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}
