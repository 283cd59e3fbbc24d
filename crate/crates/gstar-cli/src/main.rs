//! Command-line interface for the exact bipartite coloring-coverage
//! toolkit: computing `g*(r)` with certificates, generating the profile
//! constructions, discretizing them into concrete coloring squares, and
//! verifying everything.
//!
//! Exit status: 0 on success, 1 on a domain error (the message names the
//! violated precondition), 2 when a search or oracle budget is exceeded.

use anyhow::{anyhow, Context};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use gstar::constructions;
use gstar::grid::{
    brute_force_g_with, extend_square, profile_to_square, square_to_profile, touched_counts,
    ColoringSquare, OracleOptions,
};
use gstar::profile::SolutionProfile;
use gstar::search::{certify, enumerate_gstar_with, CertMode, Certificate, SearchOptions};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gstar",
    about = "Exact monochromatic-coverage bounds for edge colorings of complete bipartite graphs",
    version
)]
struct Cli {
    /// Worker threads for the support-pair search and the brute-force
    /// oracle. Results are identical at any job count.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, ValueEnum)]
enum Family {
    #[default]
    Auto,
    Square,
    SquareMinusOne,
    Universal,
    Catalog,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute g*(r) and emit a verifiable certificate
    Compute {
        #[arg(long)]
        r: u16,
        /// Fail unless the result is provably exact (exhaustive search for
        /// r <= 3, the squared lower bound at perfect squares)
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a construction profile
    Construct {
        #[arg(long)]
        r: u16,
        #[arg(long, value_enum, default_value_t)]
        family: Family,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discretize a profile into an n x n coloring square, n = t * N
    Discretize {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extend a coloring square to a larger side by edge copying
    Extend {
        #[arg(long)]
        square: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report constraint violations, marginals, and the area/weight checks
    Verify {
        #[arg(long, conflicts_with = "square")]
        profile: Option<PathBuf>,
        #[arg(long)]
        square: Option<PathBuf>,
    },
    /// Exact g(n, r) by brute force
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u16,
    },
    /// Bound table rows r..=through as CSV (or aligned text)
    Bounds {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        through: Option<u32>,
        /// Column-aligned table instead of CSV
        #[arg(long)]
        text: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate file; prints true or false
    Certify {
        #[arg(long)]
        certificate: PathBuf,
    },
}

fn budget() -> anyhow::Result<u64> {
    match std::env::var("GSTAR_BUDGET") {
        Ok(v) => v
            .parse()
            .map_err(|_| anyhow!("GSTAR_BUDGET must be a nonnegative integer, got '{v}'")),
        Err(_) => Ok(gstar::DEFAULT_BUDGET),
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read(path: &PathBuf) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn build_family(r: u16, family: Family) -> gstar::Result<SolutionProfile> {
    let near_sqrt = |r: u16| (r as f64).sqrt().round() as u16;
    match family {
        Family::Auto => constructions::auto(r),
        Family::Catalog => constructions::small_catalog(r),
        Family::Universal => constructions::universal(r),
        Family::Square => {
            let t = near_sqrt(r);
            if t * t != r {
                return Err(gstar::Error::domain(format!(
                    "square family needs r to be a perfect square, got {r}"
                )));
            }
            Ok(constructions::square_grid(t))
        }
        Family::SquareMinusOne => {
            let t = near_sqrt(r + 1);
            if t * t != r + 1 {
                return Err(gstar::Error::domain(format!(
                    "square-minus-one family needs r = t^2 - 1, got {r}"
                )));
            }
            constructions::square_minus_one(t)
        }
    }
}

/// The `verify` report: violations (or "valid"), per-color marginals, the
/// objective, the covered-area check, and the weight identity.
fn profile_report(p: &SolutionProfile) -> String {
    let mut out = String::new();
    let report = p.validate();
    if report.is_valid() {
        out.push_str("profile: valid\n");
    } else {
        out.push_str("profile: INVALID\n");
        for v in &report.violations {
            let _ = writeln!(out, "violation: {v}");
        }
    }
    let m = p.marginals_unchecked();
    out.push_str("color,a_i,b_i,a_i+b_i\n");
    for i in 1..=p.r() {
        let _ = writeln!(out, "{},{},{},{}", i, m.a(i), m.b(i), m.coverage(i));
    }
    let _ = writeln!(out, "objective={}", m.objective());
    let (area, ok) = p.area_check();
    let _ = writeln!(
        out,
        "covered_area={area} (>= 1: {})",
        if ok { "yes" } else { "no" }
    );
    let _ = writeln!(
        out,
        "weight_identity={}",
        if p.weight_identity() {
            "ok"
        } else {
            "violated"
        }
    );
    out
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let jobs = if cli.jobs == 0 { 1 } else { cli.jobs };
    match cli.command {
        Cmd::Compute { r, exact, out } => {
            let cert = enumerate_gstar_with(
                r,
                SearchOptions {
                    budget: budget()?,
                    jobs,
                },
            )?;
            if exact && cert.mode != CertMode::Exact {
                return Err(anyhow!(
                    "g*({r}) is not provable exactly here (exhaustive search covers r <= 3, \
                     the squared lower bound covers perfect squares); rerun without --exact \
                     for the upper bound {}",
                    cert.value
                ));
            }
            emit(&out, &cert.to_file_string())
        }
        Cmd::Construct { r, family, out } => {
            let profile = build_family(r, family)?;
            emit(&out, &profile.to_file_string())
        }
        Cmd::Discretize { profile, t, out } => {
            let p = SolutionProfile::parse(&read(&profile)?)?;
            let sq = profile_to_square(&p, t)?;
            emit(&out, &sq.to_file_string())
        }
        Cmd::Extend { square, n, out } => {
            let sq = ColoringSquare::parse(&read(&square)?)?;
            let extended = extend_square(&sq, n)?;
            emit(&out, &extended.to_file_string())
        }
        Cmd::Verify { profile, square } => {
            let text = match (profile, square) {
                (Some(path), None) => profile_report(&SolutionProfile::parse(&read(&path)?)?),
                (None, Some(path)) => {
                    let sq = ColoringSquare::parse(&read(&path)?)?;
                    let touch = touched_counts(&sq);
                    let mut out = String::new();
                    let _ = writeln!(out, "square: n={} r={}", sq.n(), sq.r());
                    out.push_str("color,columns,rows,touched\n");
                    for (i, t) in touch.per_color.iter().enumerate() {
                        let _ = writeln!(out, "{},{},{},{}", i + 1, t.columns, t.rows, t.touched());
                    }
                    let _ = writeln!(out, "max_touched={}", touch.max_touched);
                    out.push_str(&profile_report(&square_to_profile(&sq)));
                    out
                }
                _ => return Err(anyhow!("pass exactly one of --profile or --square")),
            };
            print!("{text}");
            Ok(())
        }
        Cmd::Oracle { n, r } => {
            let g = brute_force_g_with(
                n,
                r,
                OracleOptions {
                    budget: budget()?,
                    prune: true,
                    jobs,
                },
            )?;
            println!("{g}");
            Ok(())
        }
        Cmd::Bounds {
            r,
            through,
            text,
            out,
        } => {
            let last = through.unwrap_or(r);
            if last < r {
                return Err(anyhow!("--through {last} is below --r {r}"));
            }
            let rows: Vec<_> = (r..=last)
                .map(constructions::bound_table)
                .collect::<gstar::Result<_>>()?;
            let rendered = if text {
                constructions::text_table(&rows)
            } else {
                let mut csv = String::from("r,lower_sq,upper,exact\n");
                for row in &rows {
                    let _ = writeln!(csv, "{}", row.csv_row());
                }
                csv
            };
            emit(&out, &rendered)
        }
        Cmd::Certify { certificate } => {
            let cert = Certificate::parse(&read(&certificate)?)?;
            println!("{}", if certify(&cert) { "true" } else { "false" });
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // clap's own usage errors default to status 2, which this tool
    // reserves for exceeded budgets; remap them to the domain status.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let budget_hit = err
                .downcast_ref::<gstar::Error>()
                .map(|e| matches!(e, gstar::Error::BudgetExceeded { .. }))
                .unwrap_or(false);
            ExitCode::from(if budget_hit { 2 } else { 1 })
        }
    }
}
