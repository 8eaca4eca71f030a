use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use rug::{Complex, Float};
use zeta_omega::identities::{catalog, describe, IdentityId};
use zeta_omega::omega::{omega, omega_pf_oracle, OmegaParams, SeriesBudget};
use zeta_omega::special::{bessel_k, zeta};
use zeta_omega::{set_precision, Ctx, Precision};
use zeta_omega_cli::config::{Format, RunConfig, ZValue};
use zeta_omega_cli::report::decimal;
use zeta_omega_cli::run::run;

#[derive(Parser)]
#[command(name = "zomega", version, about = "Numerical checks of Lambert-series and squared-zeta identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List catalog IDs with their names.
    List,
    /// Show the statement and parameter constraints of one identity.
    Explain { id: String },
    /// Verify identities over their default grids or an overridden grid.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Evaluate a single special function with an error estimate.
    #[command(subcommand)]
    Probe(Probe),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// JSON config; flags given here override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Catalog ID, or "all". Repeatable.
    #[arg(long = "identity", short = 'i')]
    identities: Vec<String>,
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    t: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    m: Vec<i64>,
    #[arg(long, value_delimiter = ',')]
    z: Vec<ZValue>,
    #[arg(long = "N", value_delimiter = ',')]
    n: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    h: Vec<i64>,
    #[arg(long, value_delimiter = ',')]
    ell: Vec<i64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
#[command(allow_negative_numbers = true)]
enum Probe {
    /// K_order(arg).
    BesselK {
        #[arg(long)]
        order: ZValue,
        #[arg(long)]
        arg: ZValue,
        #[arg(long)]
        digits: Option<u32>,
    },
    /// ζ(s).
    Zeta {
        #[arg(long)]
        s: ZValue,
        #[arg(long)]
        digits: Option<u32>,
    },
    /// Ω_ρ(x, z); ρ defaults to π.
    Omega {
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        x: ZValue,
        #[arg(long, default_value = "0")]
        z: ZValue,
        #[arg(long)]
        digits: Option<u32>,
    },
}

impl VerifyArgs {
    fn into_config(self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if !self.identities.is_empty() {
            cfg.identities = self.identities;
        }
        let g = &mut cfg.grid;
        macro_rules! overlay {
            ($($f:ident),*) => {$( if !self.$f.is_empty() { g.$f = self.$f; } )*};
        }
        overlay!(t, m, z, n, h, ell);
        cfg.digits = self.digits.or(cfg.digits);
        cfg.out = self.out.or(cfg.out);
        cfg.format = self.format.unwrap_or(cfg.format);
        cfg.jobs = self.jobs.unwrap_or(cfg.jobs);
        Ok(cfg)
    }
}

fn verify(args: VerifyArgs) -> anyhow::Result<bool> {
    let cfg = args.into_config()?;
    let report = run(&cfg)?;
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    match &cfg.out {
        Some(p) => zeta_omega_cli::report::Report::write_atomic(&text, p.as_ref())?,
        None => print!("{text}"),
    }
    let s = &report.summary;
    eprintln!("pass {} fail {} skipped {}", s.pass, s.fail, s.skipped);
    Ok(s.fail == 0)
}

fn probe_ctx(digits: Option<u32>) -> anyhow::Result<(Ctx, Ctx)> {
    let cfg = RunConfig { digits, ..Default::default() };
    let d = cfg.resolve_digits()?;
    Ok((set_precision(Precision::new(d)?)?, set_precision(Precision::new(d + 10)?)?))
}

fn cx(c: &Ctx, z: ZValue) -> Complex {
    c.cx(z.re, z.im)
}

fn show(label: &str, v: &Complex, digits: u32) {
    if v.imag().is_zero() {
        println!("{label} = {}", decimal(v.real(), digits));
    } else {
        let im = v.imag();
        let sign = if im.is_sign_negative() { '-' } else { '+' };
        println!("{label} = {} {sign} {} i", decimal(v.real(), digits), decimal(&Float::with_val(im.prec(), im.abs_ref()), digits));
    }
}

fn gap(a: &Complex, b: &Complex) -> Float {
    let d = Complex::with_val(b.prec().0, a - b);
    Float::with_val(b.prec().0, d.abs_ref())
}

fn probe(p: Probe) -> anyhow::Result<()> {
    match p {
        Probe::BesselK { order, arg, digits } => {
            let (c, hi) = probe_ctx(digits)?;
            let v = bessel_k(&cx(&c, order), &cx(&c, arg), &c)?;
            let w = bessel_k(&cx(&hi, order), &cx(&hi, arg), &hi)?;
            show(&format!("K_{order}({arg})"), &v, c.digits());
            println!("error estimate {}", decimal(&gap(&v, &w), 3));
        }
        Probe::Zeta { s, digits } => {
            let (c, hi) = probe_ctx(digits)?;
            let v = zeta(&cx(&c, s), &c)?;
            let w = zeta(&cx(&hi, s), &hi)?;
            show(&format!("zeta({s})"), &v, c.digits());
            println!("error estimate {}", decimal(&gap(&v, &w), 3));
        }
        Probe::Omega { rho, x, z, digits } => {
            let (c, hi) = probe_ctx(digits)?;
            let params = |c: &Ctx| OmegaParams {
                rho: rho.map_or_else(|| c.pi(), |r| c.real(r)),
                x: cx(c, x),
                z: cx(c, z),
            };
            let v = omega(&params(&c), &SeriesBudget::for_ctx(&c), &c)?;
            let w = omega(&params(&hi), &SeriesBudget::for_ctx(&hi), &hi)?;
            show(&format!("Omega({x}, {z})"), &v.value, c.digits());
            println!("terms {}", v.terms);
            println!("tail bound {}", decimal(&v.tail_bound, 3));
            println!("error estimate {}", decimal(&gap(&v.value, &w.value), 3));
            if rho.is_none() && z == (ZValue { re: 0.0, im: 0.0 }) && x.im == 0.0 {
                let budget = SeriesBudget { max_terms: 1_000_000, ..SeriesBudget::for_ctx(&c) };
                let pf = omega_pf_oracle(&c.real(x.re), &budget, &c)?;
                let d = Float::with_val(c.bits(), v.value.real() - &pf).abs();
                println!("partial-fraction oracle {} (difference {})", decimal(&pf, 15), decimal(&d, 3));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::List => {
            for d in catalog() {
                println!("{:<4} {}", d.id.as_str(), d.name);
            }
            Ok(true)
        }
        Cmd::Explain { id } => id
            .parse::<IdentityId>()
            .map_err(|e| anyhow!("{e}"))
            .map(|id| {
                let d = describe(id);
                println!("{}  {}\n\n{}\n", d.id, d.name, d.statement);
                for c in d.constraints {
                    println!("  - {c}");
                }
                if !d.note.is_empty() {
                    println!("\n{}", d.note);
                }
                true
            }),
        Cmd::Verify(args) => verify(args).context("verify"),
        Cmd::Probe(p) => probe(p).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
