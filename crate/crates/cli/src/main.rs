//! `lrc`: build, analyze and exercise locally repairable codes stored as JSON.
//!
//! Exit status is 0 on success, 1 when a check or input fails validation and
//! 2 on malformed command lines. Every result is a JSON document on stdout.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "lrc",
    version,
    about = "Locally repairable codes from packings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the multiplication-table difference matrix over GF(k).
    BuildDm {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write the derived resolvable packing here.
        #[arg(long)]
        resolvable: Option<PathBuf>,
    },
    /// Build a code from a packing (a) or by splitting an MDS code (b).
    Construct {
        #[command(subcommand)]
        flavor: Flavor,
    },
    /// Check (r, delta) locality and classify the code against the bounds.
    Analyze {
        code: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        delta: usize,
        /// Largest number of messages to enumerate for the exact distance.
        #[arg(long = "exact-distance", env = "LRC_DISTANCE_BUDGET", default_value_t = lrc_core::DEFAULT_DISTANCE_BUDGET)]
        budget: u64,
        /// Square-minor budget when re-certifying a split code's MDS source.
        #[arg(long, default_value_t = lrc_core::DEFAULT_MDS_EFFORT)]
        mds_effort: u64,
    },
    /// Encode a message, erase symbols and repair them from the local groups.
    Repair(RepairArgs),
    /// Write a systematic Reed-Solomon (MDS) code.
    RsGen {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum Flavor {
    /// Binary code whose check columns are the block indicators.
    A {
        #[arg(long)]
        packing: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split MDS check columns along the classes of a resolvable packing.
    B {
        #[arg(long, required_unless_present = "rs", conflicts_with = "rs")]
        mds: Option<PathBuf>,
        /// Generate the MDS code as RS[N,K] over the field given by --p/--m/--modulus.
        #[arg(long, value_name = "N,K", value_parser = parse_pair)]
        rs: Option<(usize, usize)>,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        resolvable: PathBuf,
        /// 1-based MDS check columns to split, one per class.
        #[arg(long, value_delimiter = ',')]
        columns: Option<Vec<usize>>,
        #[arg(long, default_value_t = lrc_core::DEFAULT_MDS_EFFORT)]
        mds_effort: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 8)]
    m: u32,
    /// Modulus as a base-p encoded integer, decimal or 0x-prefixed hex.
    #[arg(long, value_parser = parse_int)]
    modulus: Option<u64>,
}

#[derive(Args)]
struct RepairArgs {
    code: PathBuf,
    /// Locality report from `analyze` (the full output or its "report" member).
    #[arg(long)]
    report: PathBuf,
    /// 1-based codeword positions to erase.
    #[arg(long, value_delimiter = ',', num_args = 0..=1, default_value = "")]
    erase: Vec<String>,
    /// Message file: {"symbols": [...]} with k symbols.
    #[arg(long, required_unless_present = "seed", conflicts_with = "seed")]
    message: Option<PathBuf>,
    /// Seed for a random message.
    #[arg(long, visible_alias = "random")]
    seed: Option<u64>,
}

fn parse_int(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected N,K")?;
    Ok((
        a.trim().parse().map_err(|e| format!("{e}"))?,
        b.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::BuildDm {
            k,
            r,
            u,
            out,
            resolvable,
        } => commands::build_dm(k, r, u, &out, resolvable.as_deref()),
        Command::Construct {
            flavor: Flavor::A { packing, out },
        } => commands::construct_a(&packing, &out),
        Command::Construct {
            flavor:
                Flavor::B {
                    mds,
                    rs,
                    field,
                    resolvable,
                    columns,
                    mds_effort,
                    out,
                },
        } => {
            let source = match (mds, rs) {
                (Some(path), _) => commands::MdsSource::File(path),
                (None, Some((n, k))) => commands::MdsSource::Rs {
                    p: field.p,
                    m: field.m,
                    modulus: field.modulus,
                    n,
                    k,
                },
                (None, None) => unreachable!("clap requires --mds or --rs"),
            };
            commands::construct_b(source, &resolvable, columns, mds_effort, &out)
        }
        Command::Analyze {
            code,
            r,
            delta,
            budget,
            mds_effort,
        } => commands::analyze(&code, r, delta, budget, mds_effort),
        Command::Repair(args) => match parse_erasures(&args.erase) {
            Ok(erase) => commands::repair(
                &args.code,
                &args.report,
                &erase,
                args.message.as_deref(),
                args.seed,
            ),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        Command::RsGen { field, n, k, out } => {
            commands::rs_gen(field.p, field.m, field.modulus, n, k, &out)
        }
    };
    match outcome {
        Ok(commands::Report { doc, passed }) => {
            emit(&doc);
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            emit(&serde_json::json!({ "ok": false, "error": format!("{e:#}") }));
            ExitCode::from(1)
        }
    }
}

/// Prints a document; a closed stdout is not worth a panic.
fn emit(doc: &serde_json::Value) {
    let text = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn parse_erasures(raw: &[String]) -> Result<Vec<usize>, String> {
    raw.iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| format!("invalid erasure position {s:?}"))
        })
        .collect()
}
