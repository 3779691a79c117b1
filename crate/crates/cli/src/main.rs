//! `unital`: batch certificates for unitals in PG(2,q²).
//!
//! Every command prints a JSON report. Exit status is 0 when every check
//! passed, 1 when some check failed and 2 on usage or I/O errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use unital_core::{make_tower, FieldTower};

use commands::{Case, CurveChoice, PairChoice};

#[derive(Parser)]
#[command(name = "unital", version, about = "Certificates for unitals in PG(2,q^2)")]
struct Cli {
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true, env = "UNITAL_THREADS")]
    threads: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TowerArgs {
    /// Characteristic.
    #[arg(long)]
    p: u32,
    /// q = p^r.
    #[arg(long)]
    r: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Write the curve H_b as a unital file.
    Hermitian {
        #[command(flatten)]
        tower: TowerArgs,
        /// Element code of b (nonzero).
        #[arg(long)]
        b: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a Buekenhout-Metz unital (odd q).
    Bm {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        beta: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply a seeded random projectivity to a unital file.
    Image {
        #[command(flatten)]
        tower: TowerArgs,
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// 2-point stabiliser of a pair, or order histogram over all pairs.
    Stabilizer {
        #[command(flatten)]
        tower: TowerArgs,
        file: PathBuf,
        /// First point, as x:y:z element codes.
        #[arg(requires = "q_point", conflicts_with = "all_pairs")]
        p_point: Option<String>,
        q_point: Option<String>,
        #[arg(long)]
        all_pairs: bool,
        /// Sample at most this many pairs (default: all pairs below q = 7, 500 from q = 7).
        #[arg(long, requires = "all_pairs")]
        max_pairs: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build and certify the quotient plane of order q.
    QuotientPlane {
        #[command(flatten)]
        tower: TowerArgs,
        /// Primitive element code for the group (default: the primitive root).
        #[arg(long)]
        lambda: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intersection multiplicities at O and Bezout totals.
    Multiplicity {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(value_enum)]
        case: Case,
        #[arg(long, default_value_t = 1)]
        b: u32,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        c: Option<u32>,
    },
    /// Check the stabiliser/classicality equivalence on a corpus directory.
    Theorem {
        #[command(flatten)]
        tower: TowerArgs,
        corpus: PathBuf,
        #[arg(long)]
        max_pairs: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn tower(a: &TowerArgs) -> anyhow::Result<Arc<FieldTower>> {
    Ok(Arc::new(make_tower(a.p, a.r)?))
}

fn run(cli: Cli, echo: String) -> anyhow::Result<report::RunReport> {
    use commands::parse_element as el;
    match cli.command {
        Command::Hermitian { tower: ta, b, out } => {
            let t = tower(&ta)?;
            let b = el(&t, b, "b")?;
            commands::hermitian(echo, &t, b, &out)
        }
        Command::Bm {
            tower: ta,
            alpha,
            beta,
            out,
        } => {
            let t = tower(&ta)?;
            let (a, b) = (el(&t, alpha, "alpha")?, el(&t, beta, "beta")?);
            commands::bm(echo, &t, a, b, &out)
        }
        Command::Image {
            tower: ta,
            input,
            seed,
            out,
        } => commands::image(echo, &tower(&ta)?, &input, seed, &out),
        Command::Stabilizer {
            tower: ta,
            file,
            p_point,
            q_point,
            all_pairs,
            max_pairs,
            seed,
        } => {
            let t = tower(&ta)?;
            let choice = match (p_point, q_point, all_pairs) {
                (Some(p), Some(q), false) => PairChoice::One(p, q),
                (None, None, true) => PairChoice::All { max_pairs, seed },
                _ => anyhow::bail!("give two points P Q or --all-pairs"),
            };
            commands::stabilizer(echo, &t, &file, choice)
        }
        Command::QuotientPlane {
            tower: ta,
            lambda,
            out,
        } => {
            let t = tower(&ta)?;
            let lambda = lambda.map(|l| el(&t, l, "lambda")).transpose()?;
            commands::quotient_plane(echo, &t, lambda, out.as_deref())
        }
        Command::Multiplicity {
            tower: ta,
            case,
            b,
            d,
            c,
        } => {
            let t = tower(&ta)?;
            let sel = CurveChoice {
                b: el(&t, b, "b")?,
                d: d.map(|d| el(&t, d, "d")).transpose()?,
                c: c.map(|c| el(&t, c, "c")).transpose()?,
            };
            commands::multiplicity(echo, &t, case, sel)
        }
        Command::Theorem {
            tower: ta,
            corpus,
            max_pairs,
            seed,
        } => commands::theorem(echo, &tower(&ta)?, &corpus, max_pairs, seed),
    }
}

fn main() -> ExitCode {
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = cli.report.clone();
    let report = match run(cli, echo) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
    let written = match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
