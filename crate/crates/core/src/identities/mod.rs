//! The identity catalog: one evaluator per identity, returning both sides,
//! and the residual checker built on top of them.
//!
//! α and β are parameterised by the scale t = α/π. For identities tied by
//! αβ = π² this gives β = π/t; for the N-families tied by αβ^N = π^{N+1}
//! it gives β = π t^{−1/N}.

mod classical;
mod env;
mod higher;
mod koshliakov;
mod shifted;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::numerics::Ctx;
use crate::omega::SeriesBudget;
use crate::special::zeros::find_first_nontrivial_zero;
use crate::numerics::Precision;

use env::Env;
pub use higher::balanced_scale;

macro_rules! identity_ids {
    ($($v:ident),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum IdentityId { $($v),* }

        impl IdentityId {
            pub const ALL: &'static [IdentityId] = &[$(IdentityId::$v),*];

            pub fn as_str(self) -> &'static str {
                match self { $(IdentityId::$v => stringify!($v)),* }
            }
        }

        impl FromStr for IdentityId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_uppercase().as_str() {
                    $(stringify!($v) => Ok(IdentityId::$v),)*
                    _ => Err(Error::InvalidArgument(format!("unknown identity id {s:?}"))),
                }
            }
        }
    };
}

identity_ids!(
    R1, R2, R3, R4, R5, R6, R7, R8, K1, K2, T1, L1, T2, T3, C1, C2, C3, T4, T5, T6, C4, C5, C6, C7, C8, C9, T7, T8,
    T9,
);

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which statement of a catalog entry a case refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    General,
    /// z is the first nontrivial zero of ζ (C1, C9).
    Zero,
    /// z is a trivial zero, indexed by k = m (C1, C9).
    Integer,
    /// The α = β = π, m = 2 special case of C6.
    Special,
    /// The value Koshliakov originally gave for the K2 series, which is wrong.
    Footnote,
}

impl Form {
    pub fn as_str(self) -> &'static str {
        match self {
            Form::General => "general",
            Form::Zero => "zero",
            Form::Integer => "integer",
            Form::Special => "special",
            Form::Footnote => "footnote",
        }
    }
}

impl FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Form::General),
            "zero" => Ok(Form::Zero),
            "integer" => Ok(Form::Integer),
            "special" => Ok(Form::Special),
            "footnote" => Ok(Form::Footnote),
            _ => Err(Error::InvalidArgument(format!("unknown form {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCase {
    pub id: IdentityId,
    pub form: Form,
    /// α = π t.
    pub t: f64,
    /// Also k for the trivial-zero forms of C1 and C9.
    pub m: i64,
    pub z: Option<(f64, f64)>,
    pub n: Option<u32>,
    pub h: Option<i64>,
    pub ell: Option<i64>,
}

impl IdentityCase {
    pub fn new(id: IdentityId) -> Self {
        Self { id, form: Form::General, t: 1.0, m: 1, z: None, n: None, h: None, ell: None }
    }

    pub fn t(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn m(mut self, m: i64) -> Self {
        self.m = m;
        self
    }

    pub fn z(mut self, re: f64, im: f64) -> Self {
        self.z = Some((re, im));
        self
    }

    pub fn n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    pub fn h(mut self, h: i64) -> Self {
        self.h = Some(h);
        self
    }

    pub fn ell(mut self, ell: i64) -> Self {
        self.ell = Some(ell);
        self
    }

    pub fn form(mut self, form: Form) -> Self {
        self.form = form;
        self
    }

    /// (α, β) at the working precision.
    pub fn alpha_beta(&self, ctx: &Ctx) -> Result<(Float, Float)> {
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::Constraint(format!("alpha = pi*t needs t > 0, got {}", self.t)));
        }
        let b = ctx.bits();
        let pi = ctx.pi();
        let t = Float::with_val(b, self.t);
        let alpha = Float::with_val(b, &pi * &t);
        let beta = match self.id {
            IdentityId::R8 | IdentityId::T7 | IdentityId::T8 | IdentityId::T9 => {
                let n = self.required_n()?;
                Float::with_val(b, &pi / (t.ln() / n).exp())
            }
            _ => Float::with_val(b, &pi / &t),
        };
        Ok((alpha, beta))
    }

    fn required_n(&self) -> Result<u32> {
        match self.n {
            Some(n) if n >= 1 => Ok(n),
            _ => Err(Error::InvalidArgument(format!("{} needs N >= 1", self.id))),
        }
    }

    fn required_z(&self, ctx: &Ctx) -> Result<Complex> {
        match self.z {
            Some((re, im)) => Ok(ctx.cx(re, im)),
            None => Err(Error::InvalidArgument(format!("{} needs z", self.id))),
        }
    }
}

impl fmt::Display for IdentityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        if self.form != Form::General {
            write!(f, "[{}]", self.form.as_str())?;
        }
        write!(f, " t={} m={}", self.t, self.m)?;
        if let Some((re, im)) = self.z {
            write!(f, " z={re}{im:+}i")?;
        }
        if let Some(n) = self.n {
            write!(f, " N={n}")?;
        }
        if let Some(h) = self.h {
            write!(f, " h={h}")?;
        }
        if let Some(l) = self.ell {
            write!(f, " l={l}")?;
        }
        Ok(())
    }
}

/// Both sides of an identity and the number of series terms spent.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub lhs: Complex,
    pub rhs: Complex,
    pub terms: usize,
}

#[derive(Clone, Debug)]
pub struct Tolerances {
    pub abs: Float,
    pub rel: Float,
    /// Relative truncation target for the Ω series.
    pub series: Float,
    pub max_terms: usize,
}

impl Tolerances {
    /// rel = 10^{−digits+15}, abs = 10^{−digits+10}, series = 10^{−digits−3}.
    pub fn for_ctx(ctx: &Ctx) -> Self {
        let d = ctx.digits() as i32;
        Self { abs: ctx.pow10(-d + 10), rel: ctx.pow10(-d + 15), series: ctx.pow10(-d - 3), max_terms: 4_000_000 }
    }

    fn budget(&self) -> SeriesBudget {
        SeriesBudget { max_terms: self.max_terms, ..SeriesBudget::relative(self.series.clone()) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerificationRecord {
    pub case: IdentityCase,
    pub alpha: Option<Float>,
    pub beta: Option<Float>,
    pub lhs: Option<Complex>,
    pub rhs: Option<Complex>,
    pub abs_err: Option<Float>,
    pub rel_err: Option<Float>,
    pub tol_abs: Float,
    pub tol_rel: Float,
    pub terms_used: usize,
    pub runtime_ms: u64,
    pub status: Status,
    pub reason: Option<String>,
}

pub struct Descriptor {
    pub id: IdentityId,
    pub name: &'static str,
    pub statement: &'static str,
    pub constraints: &'static [&'static str],
    pub note: &'static str,
}

impl Descriptor {
    pub fn default_grid(&self) -> Vec<IdentityCase> {
        default_grid(self.id)
    }
}

const T_GRID: [f64; 3] = [1.0, 1.3, 2.0];
const Z_GRID: [(f64, f64); 3] = [(1.0 / 3.0, 0.0), (0.5, 0.25), (-0.7, 0.0)];

fn over_t(base: IdentityCase) -> Vec<IdentityCase> {
    T_GRID.iter().map(|&t| base.clone().t(t)).collect()
}

fn default_grid(id: IdentityId) -> Vec<IdentityCase> {
    use IdentityId::*;
    let c = IdentityCase::new(id);
    let over_m = |ms: &[i64]| -> Vec<IdentityCase> { ms.iter().flat_map(|&m| over_t(c.clone().m(m))).collect() };
    let over_z = |base: IdentityCase| -> Vec<IdentityCase> {
        Z_GRID.iter().flat_map(|&(re, im)| over_t(base.clone().z(re, im))).collect()
    };
    match id {
        R1 => over_m(&[1, 2, -2, -3]),
        R2 => over_m(&[2, 3]),
        R3 | R4 | T5 | T6 | C7 => over_t(c),
        R5 => [1, 3, -1].iter().map(|&m| c.clone().m(m)).collect(),
        R6 => [1, 2].iter().map(|&m| c.clone().m(m)).collect(),
        R7 | K2 | C2 | C3 => vec![c],
        R8 => [(3, 1), (3, -2), (5, 1)].iter().map(|&(n, m)| classical::balanced_case(c.clone().n(n).m(m))).collect(),
        K1 => [1, 2].iter().map(|&m| c.clone().m(m)).collect(),
        T1 => over_m(&[1, 2, -2]),
        L1 => [1, 3].iter().map(|&m| c.clone().m(m)).collect(),
        T2 => [1, -2].iter().flat_map(|&m| over_z(c.clone().m(m))).collect(),
        T3 => Z_GRID.iter().map(|&(re, im)| c.clone().z(re, im)).collect(),
        C1 | C9 => {
            let mut v = vec![c.clone().form(Form::Zero)];
            v.extend([1, 2].iter().map(|&k| c.clone().form(Form::Integer).m(k)));
            v
        }
        T4 => over_m(&[2, 3]),
        C4 => over_m(&[1, 2]),
        C5 => [(1, 2), (2, 3), (-3, 1)]
            .iter()
            .flat_map(|&(m, l)| over_t(c.clone().m(m).ell(l)))
            .collect(),
        C6 => {
            let mut v = over_m(&[2, 3]);
            v.push(c.clone().form(Form::Special).m(2));
            v
        }
        C8 => over_z(c),
        T7 => [(3, 1), (3, -2), (5, 1)].iter().map(|&(n, m)| higher::balanced_case(c.clone().n(n).m(m))).collect(),
        T8 => [(3, 4), (2, 3)].iter().map(|&(n, h)| higher::balanced_case(c.clone().n(n).h(h))).collect(),
        T9 => vec![higher::balanced_case(c.n(2).m(1))],
    }
}

/// Re-derives t for the families whose default α/β split is chosen to
/// balance series costs (R8, T7, T8, T9); other cases are returned as is.
pub fn rebalance(case: IdentityCase) -> IdentityCase {
    match case.id {
        IdentityId::R8 => classical::balanced_case(case),
        IdentityId::T7 | IdentityId::T8 | IdentityId::T9 => higher::balanced_case(case),
        _ => case,
    }
}

pub fn catalog() -> Vec<Descriptor> {
    IdentityId::ALL.iter().map(|&id| describe(id)).collect()
}

pub fn describe(id: IdentityId) -> Descriptor {
    use IdentityId::*;
    const AB: &str = "alpha, beta > 0 with alpha*beta = pi^2";
    const ABN: &str = "alpha, beta > 0 with alpha*beta^N = pi^(N+1)";
    let (name, statement, constraints, note): (&str, &str, &[&str], &str) = match id {
        R1 => ("Ramanujan's formula for zeta(2m+1)",
            "a^-m {zeta(2m+1)/2 + sum n^(-2m-1)/(e^(2an)-1)} = (-b)^-m {same at b} - 2^(2m) sum_j (-1)^j B_2j B_(2m+2-2j)/((2j)!(2m+2-2j)!) a^(m+1-j) b^j",
            &[AB, "m != 0"], ""),
        R2 => ("Ramanujan, Eisenstein case",
            "a^m sum n^(2m-1)/(e^(2an)-1) - (-b)^m sum n^(2m-1)/(e^(2bn)-1) = (a^m - (-b)^m) B_2m/(4m)",
            &[AB, "m > 1"], ""),
        R3 => ("Ramanujan, m = -1", "a sum n/(e^(2na)-1) + b sum n/(e^(2nb)-1) = (a+b)/24 - 1/4", &[AB], ""),
        R4 => ("Dedekind eta transformation",
            "sum 1/(n(e^(2na)-1)) - sum 1/(n(e^(2nb)-1)) = (b-a)/12 + log(a/b)/4", &[AB], ""),
        R5 => ("Lerch's formula",
            "zeta(2m+1) + 2 sum 1/(n^(2m+1)(e^(2 pi n)-1)) = pi^(2m+1) 2^(2m) sum_j (-1)^(j+1) B_2j B_(2m+2-2j)/((2j)!(2m+2-2j)!)",
            &["alpha = beta = pi", "m odd"], ""),
        R6 => ("Glaisher's formula", "sum n^(4m+1)/(e^(2 pi n)-1) = B_(4m+2)/(2(4m+2))", &["m > 0"], ""),
        R7 => ("Schloemilch's formula", "sum n/(e^(2 pi n)-1) = 1/24 - 1/(8 pi)", &[], ""),
        R8 => ("Relation between zeta(2m+1) and zeta(2Nm+1)",
            "Lambert series in exp((2n)^N a) against the rotated series in exp((2n)^(1/N) b e^(i pi j/N))",
            &[ABN, "N odd", "m != 0"], ""),
        K1 => ("Koshliakov's first identity",
            "sum n^(4m+1) d(n) Omega(n) = B_(4m+2)^2/(4m+2)^2 {log 2pi - H_(4m+1) - zeta'(4m+2)/zeta(4m+2)}",
            &["m > 0"], ""),
        K2 => ("Koshliakov's second identity, corrected",
            "sum n d(n) Omega(n) = {log 2pi - 1 - 6 zeta'(2)/pi^2}/144 - 1/(32 pi)",
            &[], "the footnote form checks the value Koshliakov originally stated, {log 2pi - 9/8 - 6 zeta'(2)/pi^2}/4, which is wrong"),
        T1 => ("Ramanujan-type formula for zeta(2m+1)^2",
            "(a^2)^-m {zeta(2m+1)^2 (gamma + log(a/pi) - zeta'/zeta(2m+1)) + sum d(n) Omega_a(n)/n^(2m+1)} = (-b^2)^-m {same at b} - pi 2^(4m) sum_j (-1)^j B_2j^2 B_(2m+2-2j)^2/((2j)!(2m+2-2j)!)^2 a^(2j) b^(2m+2-2j)",
            &[AB, "m != 0"], ""),
        L1 => ("Lerch-type formula for zeta(2m+1)^2",
            "zeta(2m+1)^2 (gamma - zeta'/zeta(2m+1)) + sum d(n) Omega(n)/n^(2m+1) = pi^(4m+3) 2^(4m-1) sum_j (-1)^(j+1) B_2j^2 B_(2m+2-2j)^2/((2j)!(2m+2-2j)!)^2",
            &["alpha = beta = pi", "m odd"], ""),
        T2 => ("Transformation with an extra variable z",
            "(a^2)^-m {zeta-product terms + sum sigma_-z(n) n^(z/2) Omega_a(n,z)/n^(2m+1)} = (-b^2)^-m {same at (b,-z)} + finite Bernoulli-zeta sum",
            &[AB, "z not in {0, 2m, -2m} or the odd integers"],
            "invariant under a <-> b together with z <-> -z"),
        T3 => ("Zeta-product evaluation of a Lambda+ series",
            "sum sigma_-z(n) n^(1+z/2) Lambda+(n,z) = (1 + sec(pi z/2))(zeta(-1-z)zeta(1+z) + zeta(-1+z)zeta(1-z))/24 - zeta(-z)zeta(z)/(4 pi)",
            &["z not 0, 2, -2 or an odd integer"], ""),
        C1 => ("Lambda+ series at zeros of zeta",
            "(i) z = omega: sum sigma_-w(n) n^(1+w/2) Lambda+(n,w) = (1 + sec(pi w/2)) zeta(-1-w) zeta(1+w)/24; (ii) z = -4k: sum sigma_4k(n) n^(1-2k) Lambda+(n,-4k) = -(B_4k zeta(4k-1)/(4k) + B_(4k+2) zeta(4k+1)/(4k+2))/12",
            &["omega the first nontrivial zero", "k >= 1"], ""),
        C2 => ("Apery-type relation", "sum sigma_4(n)/n Lambda+(n,-4) = (zeta(3)/120 - zeta(5)/252)/12", &[],
            "irrationality: the series and zeta(5) cannot both be rational"),
        C3 => ("Glaisher-Kinkelin evaluation",
            "sum sigma(n) sqrt(n) Lambda+(n,1) = (6 + 6 gamma + 3 pi - 72 log A - zeta(3))/(288 pi)", &[], ""),
        T4 => ("Koshliakov-type transformation for m > 1",
            "(a^2)^m sum n^(2m-1) d(n) Omega_a(n) - (-b^2)^m (same at b) = -B_2m^2/(4m^2) {(a^2)^m (log(a/(2pi^2)) + H_(2m-1) + zeta'/zeta(2m)) - (-b^2)^m (same at b)}",
            &[AB, "m > 1"], "at alpha = beta = pi with m -> 2m+1 this reduces to K1"),
        T5 => ("Koshliakov-type transformation for m = -1",
            "a^2 sum n d(n) Omega_a(n) + b^2 sum n d(n) Omega_b(n) = -pi/16 - {a^2 (gamma + log(a/pi) + 1 - 12 log A) + b^2 (same at b)}/144",
            &[AB], ""),
        T6 => ("Dedekind-eta analogue",
            "sum d(n) Omega_a(n)/n - sum d(n) Omega_b(n)/n = pi (a^2 - b^2)/144 + log(a/b) {48 gamma^2 + 96 gamma_1 - 3 pi^2 - 4 log^2(a/b)}/48",
            &[AB], ""),
        C4 => ("Limit z -> 2m",
            "(a^2)^-m sum sigma_-2m(n) Omega_a(n,2m)/n^(m+1) - (-b^2)^-m sum sigma_-2m(n) Omega_b(n,-2m)/n^(m+1) = zeta(2m+1)^2 log(a/b)/(2 pi^2m) + ...",
            &[AB, "m >= 1"], "alpha = beta = pi gives 0 = 0"),
        C5 => ("Limit z -> 2l+1",
            "(a^2)^-m sum sigma_(-2l-1)(n) Omega_a(n,2l+1)/n^(2m-l+1/2) - (-b^2)^-m (same at b, -2l-1) = Bernoulli-zeta sum + two boundary terms",
            &[AB, "l >= max(1, m+1), or 1 <= l < -m-1"],
            "stated for m in N, yet the second branch needs m <= -3; both branches are evaluated"),
        C6 => ("Limit z -> 2m-1 relating zeta(2m-1) and zeta(4m-1)",
            "a^2m sum sigma_(2m-1)(n) n^(m-1/2) Omega_a(n,2m-1) - (-b^2)^m (same at b, 1-2m) = -B_2m/(2m) {a (2m-2)! zeta(2m-1)/2^2m + (-1)^(m+1) pi 2^(2m-1) B_2m (4m-2)!/(2m)! (b/(2pi))^(4m-1) zeta(4m-1)}",
            &[AB, "m > 1"], "special form: sum sigma_3(n) n^(3/2) Lambda-(n,3) = (zeta(3) + zeta(7)/2)/(960 pi^3)"),
        C7 => ("Limit z -> -1 with m = -1",
            "a^2 sum sigma(n) sqrt(n) Omega_a(n,-1) + b^2 sum sigma(n) sqrt(n) Omega_b(n,1) = pi a/96 - a^3 zeta(3)/(288 pi^2) - b log(a/b)/48 + b gamma/48 + b zeta'(-1)/4",
            &[AB], ""),
        C8 => ("Dedekind-eta analogue with an extra variable z",
            "sum sigma_-z(n) n^(z/2) Omega_a(n,z)/n - sum sigma_z(n) n^(-z/2) Omega_b(n,-z)/n = zeta-product terms and a z-derivative",
            &[AB, "z not 0, 1, -1 (odd integers excluded as poles of sec)"], ""),
        C9 => ("Lambda- series at zeros of zeta",
            "(i) sum sigma_-w(n) n^(w/2-1) Lambda-(n,w) = -pi zeta(-w) zeta(2+w)/12 - (1 - sec(pi w/2)) zeta(1+w) zeta'(1-w)/2; (ii) sum sigma_(4k+2)(n) n^(-2k-2) Lambda-(n,-4k-2) = zeta(4k+3) zeta'(-4k-1) - zeta'(4k+3) zeta(-4k-1)",
            &["omega the first nontrivial zero", "k >= 1"], ""),
        T7 => ("Relation between zeta(2m+1)^2 and zeta(2Nm+1)^2, N odd",
            "series in Omega_a(n^N) against rotated series in Omega_b(e^(-i j pi/N) n^(1/N))",
            &[ABN, "N odd", "m != 0"],
            "N = 1 is T1; the b-side bracket uses gamma + log(b/pi), which is what the general (N, h) transformation gives at h = (N+1)/2 + Nm"),
        T8 => ("General Omega_a(n^N) transformation",
            "sum n^(N-2h) d(n) Omega_a(n^N) = P(a) + S(a)",
            &[ABN, "h != (N+1)/2"], ""),
        T9 => ("Relation for zeta(2Nm)^2, N even",
            "series in Omega_a(n^N) against half-rotated series in Omega_b(e^(-i(2j+1)pi/(2N)) n^(1/N))",
            &[ABN, "N even", "m >= 1"],
            "rotation weights (-1)^(N/2+1+m) (-1)^j i e^(-i(2j+1)pi/(2N)) and gamma + log(b/pi), both read off the general (N, h) transformation at h = N/2 + Nm"),
    };
    Descriptor { id, name, statement, constraints, note }
}

/// Both sides of the identity at the working precision of `ctx`.
pub fn evaluate(case: &IdentityCase, tol: &Tolerances, ctx: &Ctx) -> Result<Evaluation> {
    use IdentityId::*;
    let env = Env::new(ctx, tol.budget());
    let (lhs, rhs) = match case.id {
        R1 | R2 | R3 | R4 | R5 | R6 | R7 | R8 => classical::evaluate(case, &env)?,
        K1 | K2 | T1 | L1 | T4 | T5 | T6 => koshliakov::evaluate(case, &env)?,
        T2 | T3 | C1 | C2 | C3 | C4 | C5 | C6 | C7 | C8 | C9 => shifted::evaluate(case, &env)?,
        T7 | T8 | T9 => higher::evaluate(case, &env)?,
    };
    Ok(Evaluation { lhs, rhs, terms: env.terms() })
}

pub fn evaluate_lhs(case: &IdentityCase, ctx: &Ctx) -> Result<Complex> {
    Ok(evaluate(case, &Tolerances::for_ctx(ctx), ctx)?.lhs)
}

pub fn evaluate_rhs(case: &IdentityCase, ctx: &Ctx) -> Result<Complex> {
    Ok(evaluate(case, &Tolerances::for_ctx(ctx), ctx)?.rhs)
}

fn residual_errors(lhs: &Complex, rhs: &Complex, b: u32) -> (Float, Float) {
    let diff = Float::with_val(b, Complex::with_val(b, lhs - rhs).abs_ref());
    let scale = Float::with_val(b, lhs.abs_ref()).max(&Float::with_val(b, rhs.abs_ref()));
    let rel = if scale.is_zero() { Float::with_val(b, 0) } else { Float::with_val(b, &diff / &scale) };
    (diff, rel)
}

/// Evaluates both sides and classifies the residual. Evaluation errors
/// become `Skipped` records carrying the reason.
pub fn verify(case: &IdentityCase, tol: &Tolerances, ctx: &Ctx) -> VerificationRecord {
    let start = Instant::now();
    let b = ctx.bits();
    let ab = case.alpha_beta(ctx).ok();
    let mut rec = VerificationRecord {
        case: case.clone(),
        alpha: ab.as_ref().map(|p| p.0.clone()),
        beta: ab.as_ref().map(|p| p.1.clone()),
        lhs: None,
        rhs: None,
        abs_err: None,
        rel_err: None,
        tol_abs: tol.abs.clone(),
        tol_rel: tol.rel.clone(),
        terms_used: 0,
        runtime_ms: 0,
        status: Status::Skipped,
        reason: None,
    };
    match evaluate(case, tol, ctx) {
        Ok(ev) => {
            let (abs, rel) = residual_errors(&ev.lhs, &ev.rhs, b);
            rec.status = if abs < tol.abs || rel < tol.rel { Status::Pass } else { Status::Fail };
            rec.lhs = Some(ev.lhs);
            rec.rhs = Some(ev.rhs);
            rec.abs_err = Some(abs);
            rec.rel_err = Some(rel);
            rec.terms_used = ev.terms;
        }
        Err(e) => rec.reason = Some(e.to_string()),
    }
    rec.runtime_ms = start.elapsed().as_millis() as u64;
    rec
}

#[derive(Clone, Debug)]
pub struct SymmetryCheck {
    pub residual: Complex,
    pub swapped_residual: Complex,
    pub defect: Float,
}

/// Evaluates T2 at (α, β, z) and at (β, α, −z). The identity maps into
/// itself up to the factor −(−1)^m, so the defect is |r + (−1)^m r′|.
pub fn alpha_beta_symmetry_check(case: &IdentityCase, tol: &Tolerances, ctx: &Ctx) -> Result<SymmetryCheck> {
    if case.id != IdentityId::T2 {
        return Err(Error::InvalidArgument("the alpha/beta symmetry check applies to T2".into()));
    }
    let b = ctx.bits();
    let first = evaluate(case, tol, ctx)?;
    let z = case.required_z(ctx)?;
    let mut swapped = case.clone().t(1.0 / case.t);
    swapped.z = Some((-z.real().to_f64(), -z.imag().to_f64()));
    let second = evaluate(&swapped, tol, ctx)?;
    let r1 = Complex::with_val(b, &first.lhs - &first.rhs);
    let r2 = Complex::with_val(b, &second.lhs - &second.rhs);
    let combined = Complex::with_val(b, &r1 + Complex::with_val(b, &r2 * Env::sign(case.m)));
    Ok(SymmetryCheck { defect: Float::with_val(b, combined.abs_ref()), residual: r1, swapped_residual: r2 })
}

/// One step of the z → 0 trend from T2 towards T1.
#[derive(Clone, Debug)]
pub struct LimitStep {
    pub k: u32,
    /// |LHS of T2 at z_k − LHS of T1|
    pub lhs_gap: Float,
    pub t2_residual: Float,
}

/// Evaluates T2 at z_k = 10^{−k}(1+i)/√2 for each k and measures how far
/// its left side is from that of T1 at the same (t, m).
pub fn t1_limit_trend(t: f64, m: i64, ks: &[u32], tol: &Tolerances, ctx: &Ctx) -> Result<(Float, Vec<LimitStep>)> {
    let b = ctx.bits();
    let base = evaluate(&IdentityCase::new(IdentityId::T1).t(t).m(m), tol, ctx)?;
    let t1_res = Float::with_val(b, Complex::with_val(b, &base.lhs - &base.rhs).abs_ref());
    let mut steps = Vec::new();
    for &k in ks {
        let r = 10f64.powi(-(k as i32)) / std::f64::consts::SQRT_2;
        let case = IdentityCase::new(IdentityId::T2).t(t).m(m).z(r, r);
        let ev = evaluate(&case, tol, ctx)?;
        steps.push(LimitStep {
            k,
            lhs_gap: Float::with_val(b, Complex::with_val(b, &ev.lhs - &base.lhs).abs_ref()),
            t2_residual: Float::with_val(b, Complex::with_val(b, &ev.lhs - &ev.rhs).abs_ref()),
        });
    }
    Ok((t1_res, steps))
}

/// First nontrivial zero of ζ at the precision of `ctx`, cached per precision.
fn first_zero(ctx: &Ctx) -> Result<Complex> {
    use std::collections::HashMap;
    use std::sync::Mutex;
    static CACHE: Mutex<Option<HashMap<u32, Complex>>> = Mutex::new(None);
    let key = ctx.digits();
    if let Some(z) = CACHE.lock().expect("zero cache").get_or_insert_with(HashMap::new).get(&key) {
        return Ok(Complex::with_val(ctx.bits(), z));
    }
    let p = Precision::with_guard(ctx.digits(), ctx.effective_digits() - ctx.digits())?;
    let z = find_first_nontrivial_zero(p)?;
    CACHE.lock().expect("zero cache").get_or_insert_with(HashMap::new).insert(key, z.clone());
    Ok(Complex::with_val(ctx.bits(), z))
}

/// Rejects z within 10^{−digits/2} of any point of `bad`, or of an odd
/// integer when `odd` is set.
fn check_exclusion(z: &Complex, bad: &[i64], odd: bool, what: &str, ctx: &Ctx) -> Result<()> {
    let b = ctx.bits();
    let eps = ctx.pow10(-(ctx.digits() as i32) / 2);
    let near = |p: i64| Float::with_val(b, Complex::with_val(b, z - p).abs_ref()) < eps;
    let re = z.real().to_f64();
    let nearest_odd = 2.0 * ((re - 1.0) / 2.0).round() + 1.0;
    if bad.iter().any(|&p| near(p)) || (odd && near(nearest_odd as i64)) {
        return Err(Error::Singular(format!("z in exclusion set {what}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
