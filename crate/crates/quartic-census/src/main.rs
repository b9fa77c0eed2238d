use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quartic_core::arith::IntPoly;
use quartic_core::geodesic::check_correspondence;
use quartic_core::rep::{decompose_exterior, sigma_tilde_trace, verify_ak_identity, weyl_integral, Space};
use quartic_core::splitting::FieldClass;
use quartic_census::cache::Cache;
use quartic_census::config::{parse_prime_set, Config};
use quartic_census::csv_io::{cross_check, emit_csv, ingest_csv, recompute};
use quartic_census::error::{CensusError, Result};
use quartic_census::quadratic::{gauss_siegel_census, sarnak_census, Convention};
use quartic_census::quartic::{default_pi_checkpoints, invariants_for, pi_s_census, quartic_corpus, Corpus, CorpusConfig, PiKind};
use quartic_census::table::CensusTable;

#[derive(Parser)]
#[command(name = "quartic-census", version, about = "Class number and regulator censuses of quadratic and quartic orders")]
struct Cli {
    /// `key=value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long = "cache-dir", global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partial-sum tables against their comparison curves.
    #[command(subcommand)]
    Census(CensusCommand),
    /// Invariants of the maximal order of one quartic field.
    Invariants {
        #[arg(long)]
        minpoly: String,
        #[arg(long)]
        set: Option<String>,
        #[arg(long = "class-bound-ceiling")]
        ceiling: Option<f64>,
    },
    /// Structural self-checks.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Validates an invariants CSV and cross-checks it against recomputation.
    Ingest {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Builds the quartic corpus and writes its invariants CSV.
    Emit {
        #[command(flatten)]
        quartic: QuarticArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CensusCommand {
    /// Σ hR over discriminants D ≤ x.
    QuadraticGs {
        #[arg(long = "limit-x")]
        limit_x: Option<i64>,
        #[arg(long, value_enum, default_value = "wide")]
        convention: ConventionArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Σ h over orders with regulator ≤ x.
    QuadraticSarnak {
        #[arg(long = "limit-r")]
        limit_r: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// π_S or π̃_S over the quartic corpus.
    Quartic {
        #[command(flatten)]
        quartic: QuarticArgs,
        /// Weight each order by ν.
        #[arg(long)]
        tilde: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the corpus invariants CSV here.
        #[arg(long)]
        invariants: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Exterior power tables, the alternating identity and the Weyl integral.
    Rep {
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
}

#[derive(Args)]
struct QuarticArgs {
    #[arg(long = "coeff-bound")]
    coeff_bound: Option<i64>,
    #[arg(long)]
    set: Option<String>,
    #[arg(long = "class-bound-ceiling")]
    ceiling: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Wide,
    Narrow,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(t) = cli.threads {
        cfg.set("threads", &t.to_string())?;
    }
    if let Some(d) = &cli.cache_dir {
        cfg.cache_dir = Some(d.clone());
    }
    Ok(cfg)
}

fn apply_quartic(cfg: &mut Config, args: &QuarticArgs) -> Result<()> {
    if let Some(b) = args.coeff_bound {
        cfg.coeff_bound = b;
    }
    if let Some(s) = &args.set {
        cfg.set_s = parse_prime_set(s)?;
    }
    if let Some(c) = args.ceiling {
        cfg.class_bound_ceiling = c;
    }
    Ok(())
}

fn build_corpus(cfg: &Config) -> Result<Corpus> {
    let corpus_cfg = CorpusConfig {
        coeff_bound: cfg.coeff_bound,
        s: cfg.set_s.clone(),
        class_bound_ceiling: cfg.class_bound_ceiling,
        threads: cfg.threads,
    };
    let mut cache = match &cfg.cache_dir {
        Some(dir) => Some(Cache::open(dir, &cfg.set_s, cfg.class_bound_ceiling)?),
        None => None,
    };
    let corpus = quartic_corpus(&corpus_cfg, cache.as_mut())?;
    for q in &corpus.quarantine {
        eprintln!("quarantined {}: {}", q.field_key, q.reason);
    }
    Ok(corpus)
}

/// Exit status 4 when some field in `C(S)` has no class number or failed.
fn corpus_status(corpus: &Corpus) -> u8 {
    let blank = corpus.rows.iter().any(|r| r.class != Some(FieldClass::NotInC) && r.h.is_none());
    if blank || !corpus.quarantine.is_empty() {
        4
    } else {
        0
    }
}

fn write_table(table: &CensusTable, out: &Option<PathBuf>) -> Result<()> {
    table.write(output(out)?)
}

fn run(cli: Cli) -> Result<u8> {
    let mut cfg = load_config(&cli)?;
    match cli.command {
        Command::Census(CensusCommand::QuadraticGs { limit_x, convention, out }) => {
            let x = limit_x.unwrap_or(cfg.max_disc);
            if x > cfg.max_disc {
                return Err(CensusError::InvalidArgument(format!("limit_x = {x} exceeds max_disc = {}", cfg.max_disc)));
            }
            let conv = match convention {
                ConventionArg::Wide => Convention::Wide,
                ConventionArg::Narrow => Convention::Narrow,
            };
            write_table(&gauss_siegel_census(x, conv, cfg.threads)?, &out)?;
            Ok(0)
        }
        Command::Census(CensusCommand::QuadraticSarnak { limit_r, out }) => {
            let x = limit_r.unwrap_or(cfg.max_regulator);
            if x > cfg.max_regulator {
                return Err(CensusError::InvalidArgument(format!(
                    "limit_R = {x} exceeds max_regulator = {}",
                    cfg.max_regulator
                )));
            }
            write_table(&sarnak_census(x, cfg.threads)?, &out)?;
            Ok(0)
        }
        Command::Census(CensusCommand::Quartic { quartic, tilde, out, invariants }) => {
            apply_quartic(&mut cfg, &quartic)?;
            let corpus = build_corpus(&cfg)?;
            let kind = if tilde { PiKind::Tilde } else { PiKind::Plain };
            let table = pi_s_census(&corpus, &cfg.set_s, &default_pi_checkpoints(&corpus), kind)?;
            write_table(&table, &out)?;
            if let Some(p) = invariants {
                emit_csv(&corpus.rows, File::create(p)?)?;
            }
            Ok(corpus_status(&corpus))
        }
        Command::Emit { quartic, out } => {
            apply_quartic(&mut cfg, &quartic)?;
            let corpus = build_corpus(&cfg)?;
            emit_csv(&corpus.rows, output(&out)?)?;
            Ok(corpus_status(&corpus))
        }
        Command::Invariants { minpoly, set, ceiling } => {
            if let Some(s) = set {
                cfg.set_s = parse_prime_set(&s)?;
            }
            let poly = IntPoly::parse_key(&minpoly)?;
            let row = invariants_for(&poly, &cfg.set_s, ceiling.unwrap_or(cfg.class_bound_ceiling))?;
            emit_csv(std::slice::from_ref(&row), io::stdout().lock())?;
            if let Some(note) = row.detail.as_ref().and_then(|d| d.h_note.as_ref()) {
                eprintln!("h inconclusive: {note}");
            }
            if row.class == Some(FieldClass::Cc) {
                let report = check_correspondence(&row)?;
                let g = &report.geodesic;
                eprintln!("geodesic: a = {:.12}, θ = {:.12}, φ = {:.12}, length = {:.12}", g.a, g.theta, g.phi, g.length);
            }
            Ok(if row.class != Some(FieldClass::NotInC) && row.h.is_none() { 4 } else { 0 })
        }
        Command::Verify(VerifyCommand::Rep { grid }) => verify_rep(grid),
        Command::Ingest { path, out } => ingest(&path, &out, cfg.class_bound_ceiling),
    }
}

fn ingest(path: &Path, out: &Option<PathBuf>, ceiling: f64) -> Result<u8> {
    let ingested = ingest_csv(File::open(path)?)?;
    let computed = ingested.iter().map(|r| recompute(r, ceiling)).collect::<Result<Vec<_>>>()?;
    let merged = cross_check(&computed, &ingested)?;
    emit_csv(&merged, output(out)?)?;
    Ok(if merged.iter().any(|r| r.h.is_none()) { 4 } else { 0 })
}

fn verify_rep(grid: usize) -> Result<u8> {
    let mut ok = true;
    let mut stdout = io::stdout().lock();
    for space in [Space::PM, Space::M] {
        for n in 0..=space.dim() {
            let d = decompose_exterior(space, n)?;
            writeln!(stdout, "Λ^{n} {space:?} = {d}")?;
        }
    }
    let ak = verify_ak_identity()?;
    ok &= ak.holds();
    writeln!(stdout, "alternating identity: {}", if ak.holds() { "exact" } else { "FAILED" })?;
    let w = weyl_integral(grid)?;
    ok &= (w - 2.0).abs() < 1e-12;
    writeln!(stdout, "Weyl integral on {grid}×{grid} grid: {w:.15}")?;
    let mut traced = 0;
    for i in 0..grid {
        for j in 0..grid {
            let theta = std::f64::consts::PI * i as f64 / grid as f64;
            let phi = std::f64::consts::PI * j as f64 / grid as f64;
            sigma_tilde_trace(theta, phi)?;
            traced += 1;
        }
    }
    writeln!(stdout, "σ̃ trace: two methods agree at {traced} grid points")?;
    Ok(if ok { 0 } else { 1 })
}
