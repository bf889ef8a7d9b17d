//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal verification failure,
//! 3 enumeration budget exceeded, 4 allocation rejected by `verify`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::bounds::{gen_lower_bound_instance, min_cuts};
use crate::config::SolverConfig;
use crate::error::Error;
use crate::io::{allocation_to_json, certificate_to_json, instance_to_json, parse_allocation, parse_instance};
use crate::model::Instance;
use crate::protocols::{auto_solve, run_algorithm, AlgorithmKind, AlgorithmReport};
use crate::random::{random_instance, RandomSpec};
use crate::rational::format_rational;
use crate::verify::{verify_allocation, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "entitled-cuts",
    version,
    about = "Exact cake-cutting with unequal entitlements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Divide the cake and write the allocation.
    Solve {
        instance: PathBuf,
        /// auto, recursive, clone, special3a, special3b or near-equal.
        #[arg(long, default_value = "auto")]
        algorithm: String,
        /// Allocation file; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check an allocation against an instance.
    Verify { instance: PathBuf, allocation: PathBuf },
    /// Search for the fewest cuts admitting a proportional allocation.
    MinCuts {
        instance: PathBuf,
        #[arg(long)]
        k_max: usize,
        /// Certificate file; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate an instance.
    Gen(GenArgs),
    /// Run recursive and clone on random instances and print CSV.
    Bench {
        /// Inclusive range `a..b`; empty when `a > b`.
        #[arg(long)]
        n_range: String,
        #[arg(long)]
        seeds: u64,
        #[arg(long, default_value_t = 3)]
        max_cells: usize,
        #[arg(long, default_value_t = 6)]
        denom_bound: u64,
        /// Report 0 in the runtime column so output is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Lower-bound family with this many agents.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    lower_bound: Option<usize>,
    /// Random instance with this many agents.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    max_cells: usize,
    #[arg(long, default_value_t = 6)]
    denom_bound: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// A failure with its exit code and message.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::NoSplitFound | Error::MalformedSystem(_) | Error::UnboundedLexMin { .. } => EXIT_INTERNAL,
            _ => EXIT_INVALID_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INVALID_INPUT } else { EXIT_OK };
        }
    };
    let result = SolverConfig::from_env()
        .map_err(Failure::from)
        .and_then(|config| match cli.command {
            Command::Solve {
                instance,
                algorithm,
                output,
            } => cmd_solve(&instance, &algorithm, output.as_deref(), &config, out, err),
            Command::Verify { instance, allocation } => cmd_verify(&instance, &allocation, out),
            Command::MinCuts {
                instance,
                k_max,
                output,
            } => cmd_min_cuts(&instance, k_max, output.as_deref(), &config, out, err),
            Command::Gen(args) => cmd_gen(&args, out),
            Command::Bench {
                n_range,
                seeds,
                max_cells,
                denom_bound,
                no_timing,
            } => cmd_bench(&n_range, seeds, max_cells, denom_bound, no_timing, &config, out),
        });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INVALID_INPUT,
        message: format!("{}: {e}", path.display()),
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn load_instance(path: &Path) -> std::result::Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure {
        code: EXIT_INVALID_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

/// Writes `doc` to `output`, or to `out` when no file is given. Returns the
/// stream the human summary should go to: `out` when the document went to a
/// file, `err` otherwise, so standard output stays machine-readable.
fn emit<'a>(
    doc: &str,
    output: Option<&Path>,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
) -> std::result::Result<&'a mut dyn Write, Failure> {
    match output {
        Some(path) => {
            std::fs::write(path, doc).map_err(|e| io_failure(path, e))?;
            Ok(out)
        }
        None => {
            let _ = out.write_all(doc.as_bytes());
            Ok(err)
        }
    }
}

fn print_report(w: &mut dyn Write, inst: &Instance, rep: &VerificationReport) {
    for a in &rep.agents {
        let _ = writeln!(
            w,
            "agent {} ({}): value {} threshold {} {}",
            a.agent + 1,
            inst.names()[a.agent],
            format_rational(&a.value),
            format_rational(&a.threshold),
            if a.pass { "ok" } else { "FAIL" }
        );
    }
    let cuts: Vec<String> = rep.cuts.iter().map(format_rational).collect();
    let _ = writeln!(w, "cuts: [{}]", cuts.join(", "));
    let _ = writeln!(w, "cut count: {}", rep.cut_count());
}

fn cmd_solve(
    path: &Path,
    algorithm: &str,
    output: Option<&Path>,
    config: &SolverConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let inst = load_instance(path)?;
    let report: AlgorithmReport = if algorithm == "auto" {
        auto_solve(&inst, config)?
    } else {
        run_algorithm(algorithm.parse::<AlgorithmKind>()?, &inst, config)?
    };
    let check = verify_allocation(&inst, &report.allocation);
    if !check.pass || report.cut_count() as u64 > report.bound {
        let mut problems = check.failures();
        if report.cut_count() as u64 > report.bound {
            problems.push(format!(
                "cut count {} exceeds bound {}",
                report.cut_count(),
                report.bound
            ));
        }
        return Err(Failure {
            code: EXIT_INTERNAL,
            message: format!("internal verification failed: {}", problems.join("; ")),
        });
    }
    let doc = allocation_to_json(&report.allocation, &report.cuts, Some(report.algorithm.as_str()));
    let w = emit(&doc, output, out, err)?;
    let _ = writeln!(w, "algorithm: {}", report.algorithm);
    print_report(w, &inst, &check);
    let _ = writeln!(w, "bound: {}", report.bound);
    Ok(())
}

fn cmd_verify(instance: &Path, allocation: &Path, out: &mut dyn Write) -> CmdResult {
    let inst = load_instance(instance)?;
    let file = parse_allocation(&read(allocation)?).map_err(|e| Failure {
        code: EXIT_INVALID_INPUT,
        message: format!("{}: {e}", allocation.display()),
    })?;
    let rep = verify_allocation(&inst, &file.allocation);
    print_report(out, &inst, &rep);
    if rep.pass {
        let _ = writeln!(out, "verification: pass");
        Ok(())
    } else {
        let _ = writeln!(out, "verification: FAIL");
        Err(Failure {
            code: EXIT_VERIFY_FAILED,
            message: rep.failures().join("; "),
        })
    }
}

fn cmd_min_cuts(
    path: &Path,
    k_max: usize,
    output: Option<&Path>,
    config: &SolverConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let inst = load_instance(path)?;
    let outcome = min_cuts(&inst, k_max, config)?;
    if let Some(a) = outcome.certificate.allocation() {
        let check = verify_allocation(&inst, a);
        if !check.pass || check.cut_count() > outcome.certificate.k {
            return Err(Failure {
                code: EXIT_INTERNAL,
                message: format!("internal verification failed: {}", check.failures().join("; ")),
            });
        }
    }
    let doc = certificate_to_json(&outcome.certificate, inst.topology());
    let w = emit(&doc, output, out, err)?;
    match outcome.min_cuts {
        Some(k) => {
            let _ = writeln!(w, "min cuts = {k}");
        }
        None => {
            let _ = writeln!(w, "NotFoundWithin({k_max})");
        }
    }
    let _ = writeln!(w, "systems examined: {}", outcome.systems_examined);
    let _ = writeln!(w, "note: instance evidence only; no general claim is made");
    Ok(())
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> CmdResult {
    let inst = match (args.lower_bound, args.random) {
        (Some(n), None) => gen_lower_bound_instance(n)?,
        (None, Some(n)) => random_instance(&RandomSpec::new(n, args.max_cells, args.denom_bound), args.seed)?,
        _ => unreachable!("clap enforces exactly one mode"),
    };
    let doc = instance_to_json(&inst);
    let mut sink = std::io::sink();
    emit(&doc, args.output.as_deref(), out, &mut sink)?;
    Ok(())
}

fn parse_range(raw: &str) -> std::result::Result<(usize, usize), Failure> {
    let bad = || Failure {
        code: EXIT_INVALID_INPUT,
        message: format!("n-range must look like a..b, got {raw:?}"),
    };
    let (a, b) = raw.split_once("..").ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn cmd_bench(
    n_range: &str,
    seeds: u64,
    max_cells: usize,
    denom_bound: u64,
    no_timing: bool,
    config: &SolverConfig,
    out: &mut dyn Write,
) -> CmdResult {
    let (lo, hi) = parse_range(n_range)?;
    let _ = writeln!(out, "n,seed,algorithm,cuts,paper_bound,proportional,runtime_ms");
    for n in lo..=hi {
        for seed in 0..seeds {
            let inst = random_instance(&RandomSpec::new(n, max_cells, denom_bound), seed)?;
            for kind in [AlgorithmKind::Recursive, AlgorithmKind::Clone] {
                let start = Instant::now();
                let report = run_algorithm(kind, &inst, config)?;
                let elapsed = if no_timing { 0 } else { start.elapsed().as_millis() };
                let check = verify_allocation(&inst, &report.allocation);
                if !check.pass || report.cut_count() as u64 > report.bound {
                    return Err(Failure {
                        code: EXIT_INTERNAL,
                        message: format!("internal verification failed for n={n} seed={seed} algorithm={kind}"),
                    });
                }
                let _ = writeln!(
                    out,
                    "{n},{seed},{kind},{},{},{},{elapsed}",
                    report.cut_count(),
                    report.bound,
                    u8::from(check.pass)
                );
            }
        }
    }
    Ok(())
}
