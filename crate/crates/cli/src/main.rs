//! Command-line front end: triple validation, curve construction, grid
//! sieving, rank certification, and the one-shot reproduction suite.

mod reproduce;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use trident_core::curve::{split_form, CurveQ, PointQ};
use trident_core::descent::independence_bound;
use trident_core::family_uv::{uv_curve, uv_to_triple, UVParams};
use trident_core::rat::Rat;
use trident_core::sieve::{sieve_grid, GridSpec, StageConfig};
use trident_core::triples::{cuboid_params, induced_curve, lasic, validate_triple, TripleParams};

#[derive(Parser)]
#[command(name = "trident", version, about = "elliptic curves induced by rational Diophantine triples: construction, sieving, and rank certification")]
struct Cli {
    /// Worker threads (overrides TRIDENT_THREADS; default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a rational Diophantine triple and print its witnesses
    Triple {
        #[command(subcommand)]
        action: TripleAction,
    },
    /// Construct the curve and points for given parameters (JSON to stdout)
    Build(BuildArgs),
    /// Sieve a parameter grid with the staged Mestre–Nagao filter (JSONL)
    Sieve(SieveArgs),
    /// Certify a rank lower bound for points on a full-2-torsion curve
    Certify(CertifyArgs),
    /// Re-run the built-in reproduction checks
    Reproduce {
        #[arg(value_enum)]
        target: ReproTarget,
        /// Emit the report as JSON instead of text lines
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum TripleAction {
    /// Check that ab+1, ac+1, bc+1 are rational squares
    Validate { a: Rat, b: Rat, c: Rat },
}

#[derive(Args)]
struct BuildArgs {
    /// Two-parameter family point: u v
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    uv: Option<Vec<Rat>>,
    /// Parametrization values: t1 t2 t3
    #[arg(long, num_args = 3, value_names = ["T1", "T2", "T3"], conflicts_with = "uv")]
    t: Option<Vec<Rat>>,
    /// Almost-perfect-cuboid parameter m
    #[arg(long, conflicts_with_all = ["uv", "t"])]
    cuboid: Option<Rat>,
}

#[derive(Args)]
struct SieveArgs {
    #[arg(long, default_value_t = 8)]
    u_num_max: i64,
    #[arg(long, default_value_t = 4)]
    u_den_max: i64,
    #[arg(long, default_value_t = 8)]
    v_num_max: i64,
    #[arg(long, default_value_t = 4)]
    v_den_max: i64,
    /// Restrict to the diagonal u = v
    #[arg(long)]
    diag: bool,
    /// First-stage prime cutoff
    #[arg(long, default_value_t = 100)]
    n1: u64,
    /// Second-stage prime cutoff
    #[arg(long, default_value_t = 1000)]
    n2: u64,
    /// First-stage threshold on S(N1, E)
    #[arg(long, default_value_t = 2.0)]
    s1_min: f64,
    /// Second-stage threshold on S(N2, E)
    #[arg(long, default_value_t = 8.0)]
    s2_min: f64,
    /// Run the descent certifier on cells passing both stages
    #[arg(long)]
    certify: bool,
    /// Write JSONL here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    /// JSON file with the curve {"a1": "...", ..., "a6": "..."}
    #[arg(long)]
    curve: PathBuf,
    /// JSON file with an array of points [{"x": "...", "y": "..."} | "O"]
    #[arg(long)]
    points: PathBuf,
    /// Write the certificate here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReproTarget {
    Uv21,
    Rank11,
    Rank12,
    Rank10,
    Family7,
    Family7b,
    Quartics,
    Identities,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("TRIDENT_THREADS").ok().and_then(|s| s.parse().ok()));
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.command) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Triple { action: TripleAction::Validate { a, b, c } } => {
            match validate_triple(a, b, c) {
                Ok(t) => {
                    println!(
                        "valid triple: witnesses r = {}, s = {}, t = {}",
                        t.r, t.s, t.t
                    );
                    Ok(true)
                }
                Err(e) => {
                    println!("invalid triple: {e}");
                    Ok(false)
                }
            }
        }
        Command::Build(args) => build(args),
        Command::Sieve(args) => sieve(args),
        Command::Certify(args) => certify(args),
        Command::Reproduce { target, json } => reproduce::run(target, json),
    }
}

fn build(args: BuildArgs) -> Result<bool> {
    let report = if let Some(uv) = args.uv {
        let params = UVParams::new(uv[0].clone(), uv[1].clone())?;
        let triple = uv_to_triple(&params)?;
        let fam = uv_curve(&params)?;
        let ind = induced_curve(&triple)?;
        serde_json::json!({
            "params": {"u": params.u, "v": params.v},
            "triple": triple,
            "family_model": fam.curve,
            "sections": {"p": fam.p, "r": fam.r, "t1": fam.t1, "t2": fam.t2, "t3": fam.t3},
            "induced": ind,
        })
    } else if let Some(t) = args.t {
        let params = TripleParams::new(t[0].clone(), t[1].clone(), t[2].clone())?;
        let triple = lasic(&params)?;
        let ind = induced_curve(&triple)?;
        serde_json::json!({
            "params": params,
            "triple": triple,
            "induced": ind,
        })
    } else if let Some(m) = args.cuboid {
        let params = cuboid_params(&m)?;
        let triple = lasic(&params)?;
        let ind = induced_curve(&triple)?;
        serde_json::json!({
            "cuboid_m": m,
            "params": params,
            "triple": triple,
            "induced": ind,
        })
    } else {
        bail!("one of --uv, --t, --cuboid is required");
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(true)
}

fn sieve(args: SieveArgs) -> Result<bool> {
    let grid = GridSpec {
        u_num_max: args.u_num_max,
        u_den_max: args.u_den_max,
        v_num_max: args.v_num_max,
        v_den_max: args.v_den_max,
        diagonal: args.diag,
    };
    let cfg = StageConfig {
        n1: args.n1,
        n2: args.n2,
        s1_min: args.s1_min,
        s2_min: args.s2_min,
        certify: args.certify,
        extra_stage: None,
    };
    let records = sieve_grid(&grid, &cfg);
    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(std::fs::File::create(path).context("creating output file")?),
        None => Box::new(std::io::stdout().lock()),
    };
    for rec in &records {
        writeln!(out, "{}", serde_json::to_string(rec)?)?;
    }
    Ok(true)
}

fn certify(args: CertifyArgs) -> Result<bool> {
    let curve: CurveQ = serde_json::from_str(
        &std::fs::read_to_string(&args.curve).context("reading curve file")?,
    )
    .context("parsing curve JSON")?;
    let points: Vec<PointQ> = serde_json::from_str(
        &std::fs::read_to_string(&args.points).context("reading points file")?,
    )
    .context("parsing points JSON")?;
    let (split, iso) = split_form(&curve)?;
    let mapped: Vec<PointQ> = points.iter().map(|p| iso.map(p)).collect();
    let cert = independence_bound(&split, &mapped)?;
    let js = serde_json::to_string_pretty(&cert)?;
    match &args.out {
        Some(path) => std::fs::write(path, js).context("writing certificate")?,
        None => println!("{js}"),
    }
    eprintln!("certified rank lower bound: {}", cert.bound);
    Ok(true)
}
