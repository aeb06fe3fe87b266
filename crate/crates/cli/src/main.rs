mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use config::{FileConfig, Format, RunConfig};
use mertens_core::arith::{find_cached, save_table, sieve_mu_with, CACHE_ENV};
use mertens_core::bounds::{bootstrap, fmt_sig, run_plan, Context, Entry, Ledger, Plan, CHAINS};
use mertens_core::identities::{residual_bal2, residual_mchliss, residual_thm1_g, residual_thm1_h, IdentityReport};
use mertens_core::quadrature::{mellin_numeric, TailEnvelope};
use mertens_core::special::{
    h2_integral_bound, mellin_g1_closed, mellin_g1check_closed, mellin_h1_closed, SpecialValue,
};
use mertens_core::verify::{verify_range, Predicate, VerificationReport, VerifyOptions};
use mertens_core::weights::{CoeffWeight, WeightSpec};
use mertens_core::{Error, MuTable, SieveOptions, Tables};

const DIGITS: usize = 15;

#[derive(Parser)]
#[command(name = "mertens", version, about = "Möbius summatory functions, weight identities and explicit bounds")]
struct Cli {
    /// TOML config file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory of cached sieve tables
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve μ and M up to a limit and store the table in the cache
    Sieve {
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        block_size: Option<usize>,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Check a predicate on every x in [from, to)
    Verify {
        /// m4343, mlog, Msqrt05, Msqrt0571, msqrt05, m1log2, mchecklog2 or func:weight:bound
        #[arg(long)]
        pred: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Closed-form Mellin value with certified error
    Mellin {
        #[arg(long, value_enum)]
        form: MellinForm,
        /// s, or δ for h2bound
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
    },
    /// Quadrature bracket against the closed form
    MellinCheck {
        #[arg(long, value_enum)]
        weight: WeightName,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long = "X", default_value_t = 1e4)]
        x: f64,
        /// Use the pointwise envelope instead of the periodic expansion for the tail
        #[arg(long)]
        pointwise: bool,
    },
    /// Residual of an integral identity at x
    Identity {
        #[arg(long, value_enum)]
        name: IdentityName,
        #[arg(long)]
        x: f64,
        /// Coefficient weight file ("r c" per line) for thm1h
        #[arg(long)]
        weight: Option<PathBuf>,
    },
    /// Run a conversion plan file
    Convert {
        #[arg(long)]
        plan: PathBuf,
        /// Also write the ledger here
        #[arg(long)]
        ledger: Option<PathBuf>,
    },
    /// Replay one chain of the built-in plan
    Bootstrap {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(CHAINS))]
        chain: String,
        #[arg(long)]
        ledger: Option<PathBuf>,
    },
    /// Print a saved ledger
    Report {
        #[arg(long)]
        ledger: PathBuf,
    },
}

#[derive(Args)]
struct Jobs {
    /// Worker threads
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MellinForm {
    G1,
    H1,
    G1check,
    H2bound,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightName {
    G1,
    H1,
}

#[derive(Clone, Copy, ValueEnum)]
enum IdentityName {
    Thm1g,
    Thm1h,
    Bal2,
    Mchliss,
}

/// How a run ended.
enum Status {
    Ok,
    Violation,
    Accuracy,
}

fn num(v: f64) -> String {
    fmt_sig(v, DIGITS)
}

fn err(v: f64) -> String {
    fmt_sig(v, 3)
}

fn print_record<T: Serialize>(kind: &str, v: &T) -> Result<()> {
    let mut obj = serde_json::to_value(v)?;
    if let serde_json::Value::Object(m) = &mut obj {
        m.insert("record".into(), kind.into());
    }
    println!("{}", serde_json::to_string(&obj)?);
    Ok(())
}

fn load_tables(cfg: &RunConfig, limit: u64) -> Result<Tables> {
    if let Some(dir) = &cfg.cache_dir {
        if let Some(t) = find_cached(dir, limit)? {
            return Ok(Tables::new(t));
        }
    }
    Ok(Tables::new(sieve(cfg, limit, None)?))
}

fn sieve(cfg: &RunConfig, limit: u64, block: Option<usize>) -> Result<MuTable> {
    let mut opts = SieveOptions { jobs: cfg.jobs, ..SieveOptions::default() };
    if let Some(b) = block.or(cfg.block_size) {
        opts.block_size = b;
    }
    Ok(sieve_mu_with(limit, &opts)?)
}

fn cmd_sieve(cfg: &RunConfig, limit: u64, block: Option<usize>) -> Result<Status> {
    let t = sieve(cfg, limit, block)?;
    let path = match &cfg.cache_dir {
        Some(d) => Some(save_table(&t, d)?),
        None => None,
    };
    match cfg.format {
        Format::Human => {
            println!("sieved to {}: M({}) = {}", limit, limit, t.mertens(limit));
            match &path {
                Some(p) => println!("cache: {}", p.display()),
                None => println!("cache: none (use --cache-dir or {})", CACHE_ENV),
            }
        }
        Format::Records => {
            #[derive(Serialize)]
            struct Rec {
                limit: u64,
                mertens: i64,
                path: Option<String>,
            }
            print_record(
                "sieve",
                &Rec { limit, mertens: t.mertens(limit), path: path.map(|p| p.display().to_string()) },
            )?;
        }
    }
    Ok(Status::Ok)
}

fn cmd_verify(cfg: &RunConfig, pred: &str, from: f64, to: f64) -> Result<Status> {
    let p = Predicate::parse(pred)?;
    if !(from >= 1.0 && from < to && to.is_finite()) {
        bail!("range [{}, {}) must satisfy 1 ≤ from < to", from, to);
    }
    let limit = (to.ceil() as u64).saturating_sub(1).max(1);
    let t = load_tables(cfg, limit)?;
    let r = verify_range(&t, &p, from, to, &VerifyOptions { jobs: cfg.jobs })?;
    match cfg.format {
        Format::Human => print_verification(&r),
        Format::Records => {
            for v in &r.violations {
                print_record("violation", v)?;
            }
            for e in &r.indeterminate {
                print_record("escalation", e)?;
            }
            print_record("verification", &r)?;
        }
    }
    Ok(if r.violation_count > 0 {
        Status::Violation
    } else if r.unresolved > 0 {
        Status::Accuracy
    } else {
        Status::Ok
    })
}

fn print_verification(r: &VerificationReport) {
    println!("predicate {} on [{}, {}): {} intervals", r.predicate, num(r.lo), num(r.hi), r.intervals);
    println!(
        "sup = {} ± {} at x = {} (n = {}), {} of bound",
        num(r.sup),
        err(r.sup_radius),
        num(r.argmax),
        r.argmax_n,
        num(r.max_ratio)
    );
    for v in r.violations.iter().take(10) {
        println!("  violation at n = {}: value {} margin {}", v.n, num(v.value), num(v.margin));
    }
    if r.violation_count > 10 {
        println!("  ... {} violations in all", r.violation_count);
    }
    let exact = r.indeterminate.iter().filter(|e| e.resolved).count();
    println!(
        "violations: {}, escalated: {} ({} resolved), unresolved: {}",
        r.violation_count,
        r.indeterminate.len(),
        exact,
        r.unresolved
    );
    println!("{}", if r.pass { "PASS" } else { "FAIL" });
}

fn cmd_mellin(cfg: &RunConfig, form: MellinForm, s: f64) -> Result<Status> {
    let (name, v) = match form {
        MellinForm::G1 => ("g1", mellin_g1_closed(s)?),
        MellinForm::H1 => ("h1", mellin_h1_closed(s)?),
        MellinForm::G1check => ("g1check", mellin_g1check_closed(s)?),
        MellinForm::H2bound => ("h2bound", SpecialValue { value: h2_integral_bound(s)?, abs_error: 0.0 }),
    };
    match cfg.format {
        Format::Human => println!("{}({}) = {} ± {}", name, num(s), num(v.value), err(v.abs_error)),
        Format::Records => {
            #[derive(Serialize)]
            struct Rec<'a> {
                form: &'a str,
                s: f64,
                value: f64,
                abs_error: f64,
            }
            print_record("mellin", &Rec { form: name, s, value: v.value, abs_error: v.abs_error })?;
        }
    }
    Ok(Status::Ok)
}

fn cmd_mellin_check(cfg: &RunConfig, w: WeightName, s: f64, x: f64, pointwise: bool) -> Result<Status> {
    let (weight, closed, tail) = match w {
        WeightName::G1 => (WeightSpec::g1(), mellin_g1_closed(s)?, TailEnvelope::g1()),
        WeightName::H1 => (WeightSpec::h1(), mellin_h1_closed(s)?, TailEnvelope::h1()),
    };
    let tail = if pointwise { tail } else { TailEnvelope::Periodic };
    let b = mellin_numeric(&weight, s, x, &tail)?;
    let encloses = b.lo <= closed.value + closed.abs_error && closed.value - closed.abs_error <= b.hi;
    let narrow = cfg.tolerance.mellin_width.is_none_or(|w| b.width() <= w);
    match cfg.format {
        Format::Human => {
            println!("{} s = {} X = {} tail {}", weight.name(), num(s), num(x), b.tail_bound_used);
            println!("bracket [{}, {}] width {}", num(b.lo), num(b.hi), err(b.width()));
            println!("closed form {} ± {}", num(closed.value), err(closed.abs_error));
            println!("{}", if encloses && narrow { "PASS" } else { "FAIL" });
        }
        Format::Records => {
            #[derive(Serialize)]
            struct Rec<'a> {
                bracket: &'a mertens_core::quadrature::MellinBracket,
                closed: f64,
                closed_error: f64,
                encloses: bool,
            }
            print_record(
                "mellin-check",
                &Rec { bracket: &b, closed: closed.value, closed_error: closed.abs_error, encloses },
            )?;
        }
    }
    Ok(if !encloses {
        Status::Violation
    } else if !narrow {
        Status::Accuracy
    } else {
        Status::Ok
    })
}

fn cmd_identity(cfg: &RunConfig, name: IdentityName, x: f64, weight: Option<&Path>) -> Result<Status> {
    if !(x >= 1.0 && x.is_finite()) {
        bail!("x = {} must be ≥ 1", x);
    }
    let coeffs = match weight {
        Some(p) => {
            if !matches!(name, IdentityName::Thm1h) {
                bail!("--weight applies to thm1h only");
            }
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Some(WeightSpec::Coefficients(CoeffWeight::parse(&text)?))
        }
        None => None,
    };
    let t = load_tables(cfg, (x.floor() as u64).max(1))?;
    let r: IdentityReport = match name {
        IdentityName::Thm1g => residual_thm1_g(&t, x, &WeightSpec::g1())?,
        IdentityName::Thm1h => residual_thm1_h(&t, x, coeffs.as_ref().unwrap_or(&WeightSpec::h1()))?,
        IdentityName::Bal2 => residual_bal2(&t, x)?,
        IdentityName::Mchliss => residual_mchliss(&t, x, &WeightSpec::g1())?,
    };
    let within = cfg.tolerance.identity.is_none_or(|tol| r.residual.abs() <= tol);
    match cfg.format {
        Format::Human => {
            println!("{} at x = {}", r.name, num(r.x));
            println!("lhs = {}", num(r.lhs));
            println!("rhs = {}", num(r.rhs));
            println!("residual = {} (tolerance {})", err(r.residual), err(r.tolerance));
            println!("{}", if r.pass && within { "PASS" } else { "FAIL" });
        }
        Format::Records => print_record("identity", &r)?,
    }
    Ok(if r.pass && within { Status::Ok } else { Status::Violation })
}

fn context(cfg: &RunConfig) -> Context<'_> {
    let mut ctx = Context::with_provider(move |limit| {
        load_tables(cfg, limit).map(Arc::new).map_err(|e| match e.downcast::<Error>() {
            Ok(e) => e,
            Err(e) => Error::Cache(e.to_string()),
        })
    });
    ctx.verify = VerifyOptions { jobs: cfg.jobs };
    ctx
}

fn print_ledger(cfg: &RunConfig, ledger: &Ledger, entries: &[&Entry]) -> Result<()> {
    match cfg.format {
        Format::Human => {
            for e in entries {
                let tag = match e.form.provenance.citation.as_deref() {
                    Some(c) if e.form.provenance.is_axiom() => format!("axiom: {}", c),
                    _ => format!("{} from {}", e.form.provenance.step, e.form.provenance.inputs.join(", ")),
                };
                println!("{:<18} {}   [{}]", e.id, e.form, tag);
            }
        }
        Format::Records => print!("{}", ledger.to_jsonl()?),
    }
    Ok(())
}

fn save_ledger(ledger: &Ledger, path: Option<&Path>) -> Result<()> {
    if let Some(p) = path {
        ledger.save(p).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn cmd_convert(cfg: &RunConfig, plan: &Path, out: Option<&Path>) -> Result<Status> {
    let text = std::fs::read_to_string(plan).with_context(|| format!("reading {}", plan.display()))?;
    let plan = Plan::parse(&text)?;
    let mut ledger = Ledger::new();
    let mut ctx = context(cfg);
    run_plan(&plan, &mut ledger, &mut ctx)?;
    save_ledger(&ledger, out)?;
    let all: Vec<&Entry> = ledger.entries().iter().collect();
    print_ledger(cfg, &ledger, &all)?;
    Ok(Status::Ok)
}

fn cmd_bootstrap(cfg: &RunConfig, chain: &str, out: Option<&Path>) -> Result<Status> {
    let mut ctx = context(cfg);
    let (ledger, ids) = bootstrap(chain, &mut ctx)?;
    save_ledger(&ledger, out)?;
    match cfg.format {
        Format::Human => {
            let steps: Vec<&Entry> = ledger.entries().iter().filter(|e| ids.contains(&e.id)).collect();
            print_ledger(cfg, &ledger, &steps)?;
            if let Some(last) = ids.last() {
                println!("{}", ledger.get(last)?);
            }
        }
        Format::Records => print_ledger(cfg, &ledger, &[])?,
    }
    Ok(Status::Ok)
}

fn cmd_report(cfg: &RunConfig, path: &Path) -> Result<Status> {
    let ledger = Ledger::load(path).with_context(|| format!("reading {}", path.display()))?;
    ledger.validate()?;
    let all: Vec<&Entry> = ledger.entries().iter().collect();
    print_ledger(cfg, &ledger, &all)?;
    if cfg.format == Format::Human {
        println!("{} entries, {} axioms", ledger.len(), ledger.axioms().count());
    }
    Ok(Status::Ok)
}

fn run(cli: Cli) -> Result<Status> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let (jobs, inputs) = match &cli.command {
        Command::Sieve { jobs, .. } | Command::Verify { jobs, .. } => (jobs.jobs.map(|j| j as usize), vec![]),
        Command::Identity { weight, .. } => (None, weight.iter().cloned().collect()),
        Command::Convert { plan, .. } => (None, vec![plan.clone()]),
        Command::Report { ledger } => (None, vec![ledger.clone()]),
        _ => (None, vec![]),
    };
    let mut cfg = RunConfig::merge(file, cli.cache_dir, cli.format, jobs, inputs);
    // other commands stay single-threaded
    if !matches!(cli.command, Command::Sieve { .. } | Command::Verify { .. }) {
        cfg.jobs = Some(1);
    }
    cfg.validate(matches!(cli.command, Command::Sieve { .. }))?;
    match &cli.command {
        Command::Sieve { limit, block_size, .. } => {
            if *block_size == Some(0) {
                bail!("--block-size must be at least 1");
            }
            cmd_sieve(&cfg, *limit, *block_size)
        }
        Command::Verify { pred, from, to, .. } => cmd_verify(&cfg, pred, *from, *to),
        Command::Mellin { form, s } => cmd_mellin(&cfg, *form, *s),
        Command::MellinCheck { weight, s, x, pointwise } => cmd_mellin_check(&cfg, *weight, *s, *x, *pointwise),
        Command::Identity { name, x, weight } => cmd_identity(&cfg, *name, *x, weight.as_deref()),
        Command::Convert { plan, ledger } => cmd_convert(&cfg, plan, ledger.as_deref()),
        Command::Bootstrap { chain, ledger } => cmd_bootstrap(&cfg, chain, ledger.as_deref()),
        Command::Report { ledger } => cmd_report(&cfg, ledger),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Ok(Status::Accuracy) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {:#}", e);
            let accuracy = e.chain().any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Accuracy(_))));
            ExitCode::from(if accuracy { 3 } else { 2 })
        }
    }
}
