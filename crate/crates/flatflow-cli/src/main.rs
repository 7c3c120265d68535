//! `flatflow` — construct potentials, extract coefficient tables, assemble
//! flows, and machine-verify the identities they satisfy.
//!
//! Exit codes: `0` all checks passed (or data emitted), `1` a verification
//! failed, `2` usage error, `3` internal invariant breach.

mod report;
mod verify;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use flatflow::family::Family;
use flatflow::frobenius::metric_from_potential;
use flatflow::hierarchy::{assemble_equation, extract_r};
use flatflow::potentials::potential;
use flatflow::Error as LibError;

use report::RunReport;

#[derive(Parser)]
#[command(
    name = "flatflow",
    version,
    about = "Exact potentials, coefficient tables, and hierarchy verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for verification scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for the randomized algebra spot-checks in `verify all`.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct FamilyN {
    /// Potential family: A, B, or D.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Dimension (number of flat coordinates).
    #[arg(long)]
    n: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Print a potential with its metric, weights, and charge.
    Potential(FamilyN),
    /// Print the constant flat metric of a potential.
    Metric(FamilyN),
    /// Print extracted coefficient-table rows.
    Rtable {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Include rows with alpha + beta up to this bound.
        #[arg(long, default_value_t = 8)]
        max_order: u32,
    },
    /// Print one assembled flow equation.
    Hierarchy {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Left-hand side indices, e.g. `2,2` (D second flow: `0,3`).
        #[arg(long)]
        lhs: String,
    },
    /// Combinatorial oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCmd,
    },
    /// Machine verification of the implemented theorems.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Count composition pairs with prescribed blockwise sums.
    Phat {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        /// Comma-separated block bounds, e.g. `2,3`.
        #[arg(long, value_delimiter = ',')]
        gammas: Vec<u32>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Associativity residuals vanish for all index quadruples.
    Wdvv(FamilyN),
    /// Relabeled second derivatives agree across two dimensions.
    Stabilization {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        n2: u32,
    },
    /// Cross-differentiation consistency of assembled flows.
    Compatibility {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// One triple `alpha,beta,gamma`; omitted: bounded scan.
        #[arg(long)]
        triple: Option<String>,
        #[arg(long)]
        n: u32,
    },
    /// Derivatives at the origin equal signed composition counts.
    Enumerative(FamilyN),
    /// Generating-series identities (cleared form, log form, reduction).
    Fay {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: u32,
        /// Truncation order override (refused beyond the exactness margin).
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Every check above across the full supported ranges.
    All {
        /// Clip all dimension ranges to this bound.
        #[arg(long, default_value_t = 8)]
        max_n: u32,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

enum CliError {
    Usage(String),
    Internal(String),
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        match e {
            LibError::InvalidDimension { .. }
            | LibError::OutOfStabilizationRange { .. }
            | LibError::CapTooLarge { .. } => CliError::Usage(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

fn parse_u32_list(s: &str, expect: usize, what: &str) -> Result<Vec<u32>, CliError> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("{what} must be {expect} comma-separated integers")))?;
    if parts.len() != expect {
        return Err(CliError::Usage(format!(
            "{what} must have exactly {expect} components"
        )));
    }
    Ok(parts)
}

enum Output {
    /// Payload of a data verb; printed as-is.
    Data(String),
    /// Result of a verify verb; exit code follows `passed()`.
    Report(Box<RunReport>),
}

fn run(cli: &Cli, format: Format) -> Result<Output, CliError> {
    match &cli.command {
        Command::Potential(FamilyN { family, n }) => {
            let p = potential(*family, *n)?;
            Ok(Output::Data(match format {
                Format::Json => serde_json::to_string_pretty(&p.to_repr()).unwrap(),
                Format::Text => {
                    let weights: Vec<String> =
                        p.weights.iter().map(|w| w.to_string()).collect();
                    format!(
                        "family: {family}\nN: {n}\ndelta: {}\nweights: {}\nF = {}",
                        p.delta,
                        weights.join(", "),
                        p.f.render("t")
                    )
                }
            }))
        }
        Command::Metric(FamilyN { family, n }) => {
            let p = potential(*family, *n)?;
            let m = metric_from_potential(&p)?;
            Ok(Output::Data(match format {
                Format::Json => {
                    let rows: Vec<Vec<String>> = (1..=*n)
                        .map(|a| (1..=*n).map(|b| m.entry(a, b).to_string()).collect())
                        .collect();
                    serde_json::to_string_pretty(&json!({
                        "family": family.to_string(),
                        "N": n,
                        "eta": rows,
                    }))
                    .unwrap()
                }
                Format::Text => (1..=*n)
                    .map(|a| {
                        (1..=*n)
                            .map(|b| m.entry(a, b).to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect::<Vec<_>>()
                    .join("\n"),
            }))
        }
        Command::Rtable { family, max_order } => {
            let mut rows = Vec::new();
            for a in 1..=*max_order {
                for b in a..=*max_order {
                    if a + b > *max_order {
                        continue;
                    }
                    rows.push(extract_r(*family, a, b, None)?);
                }
            }
            if *family == Family::D {
                for b in 1..*max_order {
                    rows.push(extract_r(*family, 0, b, None)?);
                }
            }
            Ok(Output::Data(match format {
                Format::Json => serde_json::to_string_pretty(
                    &rows.iter().map(|r| r.to_repr()).collect::<Vec<_>>(),
                )
                .unwrap(),
                Format::Text => {
                    let mut lines = Vec::new();
                    for r in &rows {
                        for (gs, v) in &r.entries {
                            let gammas = gs
                                .iter()
                                .map(|g| g.to_string())
                                .collect::<Vec<_>>()
                                .join(",");
                            lines.push(format!(
                                "({},{}) {{{gammas}}} -> {v}  [N={}]",
                                r.lhs.0, r.lhs.1, r.extracted_at
                            ));
                        }
                    }
                    lines.join("\n")
                }
            }))
        }
        Command::Hierarchy { family, lhs } => {
            let parts = parse_u32_list(lhs, 2, "--lhs")?;
            if parts[0] == 0 && *family != Family::D {
                return Err(CliError::Usage(
                    "left-hand index 0 denotes the D second flow; use --family D".into(),
                ));
            }
            let eq = assemble_equation(*family, parts[0], parts[1])?;
            Ok(Output::Data(match format {
                Format::Json => serde_json::to_string_pretty(&eq.to_repr()).unwrap(),
                Format::Text => eq.rhs_text(),
            }))
        }
        Command::Oracle {
            which: OracleCmd::Phat { i, j, gammas },
        } => {
            let count = flatflow::combinatorics::count_p_hat(*i, *j, gammas);
            Ok(Output::Data(match format {
                Format::Json => serde_json::to_string_pretty(&json!({
                    "i": i, "j": j, "gammas": gammas, "count": count,
                }))
                .unwrap(),
                Format::Text => count.to_string(),
            }))
        }
        Command::Verify { what } => {
            let started = Instant::now();
            let mut report;
            match what {
                VerifyCmd::Wdvv(FamilyN { family, n }) => {
                    report = RunReport::new("verify wdvv");
                    report.family = Some(family.to_string());
                    report.n = Some(*n);
                    verify::verify_wdvv(*family, *n, &mut report)?;
                }
                VerifyCmd::Stabilization { family, n1, n2 } => {
                    report = RunReport::new("verify stabilization");
                    report.family = Some(family.to_string());
                    report.range = Some((*n1.min(n2), *n1.max(n2)));
                    verify::verify_stabilization(*family, *n1, *n2, &mut report)?;
                }
                VerifyCmd::Compatibility { family, triple, n } => {
                    report = RunReport::new("verify compatibility");
                    report.family = Some(family.to_string());
                    report.n = Some(*n);
                    let triple = triple
                        .as_ref()
                        .map(|t| parse_u32_list(t, 3, "--triple"))
                        .transpose()?
                        .map(|v| (v[0], v[1], v[2]));
                    verify::verify_compatibility(*family, triple, *n, &mut report)?;
                }
                VerifyCmd::Enumerative(FamilyN { family, n }) => {
                    if *family == Family::B {
                        return Err(CliError::Usage(
                            "the enumerative oracle applies to families A and D \
                             (B rows follow from A by the odd-index restriction)"
                                .into(),
                        ));
                    }
                    report = RunReport::new("verify enumerative");
                    report.family = Some(family.to_string());
                    report.n = Some(*n);
                    verify::verify_enumerative(*family, *n, &mut report)?;
                }
                VerifyCmd::Fay { family, n, cap } => {
                    report = RunReport::new("verify fay");
                    report.family = Some(family.to_string());
                    report.n = Some(*n);
                    verify::verify_fay(*family, *n, *cap, &mut report)?;
                }
                VerifyCmd::All { max_n } => {
                    if *max_n < 1 {
                        return Err(CliError::Usage("--max-n must be at least 1".into()));
                    }
                    report = RunReport::new("verify all");
                    report.range = Some((1, *max_n));
                    verify::verify_all(*max_n, cli.seed.unwrap_or(0), &mut report)?;
                }
            }
            report.finalize();
            report.wall_time_ms = started.elapsed().as_millis();
            Ok(Output::Report(Box::new(report)))
        }
    }
}

/// Write to stdout, exiting quietly if the reader has gone away (e.g.
/// `flatflow rtable ... | head`); any other I/O failure is an internal error.
fn emit(payload: &str) -> std::io::Result<()> {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    lock.write_all(payload.as_bytes())?;
    lock.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        // Ignore the error if a pool already exists (e.g. repeated init in tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let format = if cli.json { Format::Json } else { cli.format };
    let (written, code) = match run(&cli, format) {
        Ok(Output::Data(payload)) => (emit(&format!("{payload}\n")), ExitCode::SUCCESS),
        Ok(Output::Report(report)) => {
            let text = match format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&*report).unwrap()),
                Format::Text => report.render_text(),
            };
            let code = if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
            (emit(&text), code)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            return ExitCode::from(3);
        }
    };
    match written {
        Ok(()) => code,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => code,
        Err(e) => {
            eprintln!("internal error: cannot write to stdout: {e}");
            ExitCode::from(3)
        }
    }
}
