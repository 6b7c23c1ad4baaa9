use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use g2_curvature::canonical::reduce;
use g2_curvature::g2::{random_g2, G2Element};
use g2_curvature::io::{matrix_value, parse_matrix, read_input, to_json, to_json_of, write_output, write_scan_csv};
use g2_curvature::locus::{locus_check, scan, ScanConfig, DEFAULT_EDGE_TOL};
use g2_curvature::metric::CheegerParam;
use g2_curvature::par::Execution;
use g2_curvature::sampling::rng_for;
use g2_curvature::verify::{self, maps_suite, VerifyOptions};

/// Input matrices must pass the G2 membership test at this tolerance.
const INPUT_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "g2lab",
    version,
    about = "Octonions, G2 and the zero-curvature locus on G2/U(2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the self-check suites and print a JSON report.
    Verify(VerifyArgs),
    /// Minimize the curvature certificate over a grid of the canonical family.
    Scan(ScanArgs),
    /// Reduce a G2 matrix to the canonical family.
    Reduce(InputArgs),
    /// Print random G2 matrices.
    Sample(SampleArgs),
    /// Compare the entry conditions for a zero plane with the reduced angles.
    LocusCheck(InputArgs),
    /// Check the identities of the maps to the sphere and to SU(3).
    MapsCheck(MapsArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random inputs per suite.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true)]
    corrupt_table: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Cheeger parameter.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Grid points per axis on [0, pi/2].
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u64).range(2..))]
    grid: u64,
    /// Random restarts per cell.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    restarts: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Width in radians of the band counted as the edge of the parameter square.
    #[arg(long, default_value_t = DEFAULT_EDGE_TOL)]
    edge_tol: f64,
    /// CSV destination; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluate cells on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct InputArgs {
    /// Matrix JSON `{"rows": [[..7], ..7]}`; standard input if omitted.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MapsArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cheeger(t: f64) -> anyhow::Result<CheegerParam> {
    CheegerParam::new(t).context("--t")
}

fn read_g2(args: &InputArgs) -> anyhow::Result<G2Element> {
    let text = read_input(args.input.as_deref())?;
    let m = parse_matrix(&text)?;
    Ok(G2Element::try_new(m, INPUT_TOL)?)
}

/// Writes the output; the returned flag is whether every internal check passed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Verify(a) => {
            let report = verify::run(&VerifyOptions {
                seed: a.seed,
                samples: a.samples as usize,
                corrupt_table: a.corrupt_table,
            })?;
            write_output(a.out.as_deref(), to_json_of(&report)?.as_bytes())?;
            if let Some(name) = report.first_failure {
                eprintln!("verification failed in suite {name}");
            }
            Ok(report.passed)
        }
        Command::Scan(a) => {
            if a.edge_tol.is_nan() || a.edge_tol < 0.0 {
                bail!("--edge-tol must be non-negative");
            }
            let cfg = ScanConfig {
                grid_n: a.grid as usize,
                t: cheeger(a.t)?,
                restarts: a.restarts as usize,
                seed: a.seed,
                edge_tol: a.edge_tol,
                exec: if a.sequential {
                    Execution::Sequential
                } else {
                    Execution::Parallel
                },
            };
            let rows = scan(&cfg)?;
            let mut buf = Vec::new();
            write_scan_csv(&rows, &mut buf)?;
            write_output(a.out.as_deref(), &buf)?;
            let disagree = rows.iter().filter(|r| !r.agree).count();
            if disagree > 0 {
                eprintln!(
                    "{disagree} of {} cells disagree with the closed-form classification",
                    rows.len()
                );
            }
            Ok(disagree == 0)
        }
        Command::Reduce(a) => {
            let g = read_g2(&a)?;
            let r = reduce(&g)?;
            let out = json!({
                "theta": r.point.theta(),
                "phi": r.point.phi(),
                "h": matrix_value(r.h.matrix()),
                "k": matrix_value(r.k.matrix()),
                "residual": r.residual,
            });
            write_output(a.out.as_deref(), to_json(&out).as_bytes())?;
            Ok(true)
        }
        Command::Sample(a) => {
            let mut rng = rng_for(a.seed, 0);
            let list: Vec<Value> = (0..a.count)
                .map(|_| matrix_value(random_g2(&mut rng).matrix()))
                .collect();
            write_output(a.out.as_deref(), to_json(&Value::Array(list)).as_bytes())?;
            Ok(true)
        }
        Command::LocusCheck(a) => {
            let g = read_g2(&a)?;
            let c = locus_check(&g, cheeger(a.t)?);
            write_output(a.out.as_deref(), to_json_of(&c)?.as_bytes())?;
            Ok(c.consistent)
        }
        Command::MapsCheck(a) => {
            let report = maps_suite(&mut rng_for(a.seed, 0), a.samples as usize)?;
            write_output(a.out.as_deref(), to_json_of(&report)?.as_bytes())?;
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
