//! Command-line surface for the permutation toolkit: p-th roots, relation
//! defect reports, repair of near-solutions, representation checks, and
//! seeded experiment grids with CSV output.
//!
//! Exit statuses: 0 success, 1 usage or I/O error, 2 no exact root exists,
//! 3 repair exhausted its radius budget.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use permeq::equations::{EquationSystem, PermTuple};
use permeq::experiment::{roots_csv, run_roots, run_stability, stability_csv, Preset};
use permeq::frac::{sig6, Frac};
use permeq::io::{
    parse_permutation, parse_phi, parse_system, parse_table, parse_tuple, render_permutation,
    render_tuple, PermFormat,
};
use permeq::perm::Permutation;
use permeq::roots::{approx_root, exact_root, is_prime, RootBound, RootError};
use permeq::sofic::check_representation;
use permeq::stability::{repair_auto, RepairError};

#[derive(Parser)]
#[command(
    name = "permeq",
    version,
    about = "Permutation roots, relation-system defects, repair, and representation checks",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and approximate p-th roots of a permutation
    #[command(subcommand)]
    Root(RootCommand),
    /// Evaluate a relation system on a tuple and report its defect
    Check(CheckArgs),
    /// Convert a near-solution of a relation system into an exact solution
    Repair(RepairArgs),
    /// Check an approximate permutation representation of a partial group table
    Sofic(SoficArgs),
    /// Seeded experiment grids; CSV rows on standard output
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Subcommand)]
enum RootCommand {
    /// Exact p-th root for prime p; exits with status 2 if none exists
    Exact(RootExactArgs),
    /// Approximate p-th root: writes g and the nearby target f~ with g^p = f~
    Approx(RootApproxArgs),
}

#[derive(Args)]
struct RootExactArgs {
    /// Input permutation file
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Root exponent (must be prime; use `root approx` otherwise)
    #[arg(long)]
    p: u64,
    /// Where to write the root
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Output convention for permutations
    #[arg(long, value_parser = parse_format_arg, default_value = "oneline")]
    format: PermFormat,
}

#[derive(Args)]
struct RootApproxArgs {
    /// Input permutation file
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Root exponent (any positive integer; composite p is factored)
    #[arg(long)]
    p: u64,
    /// Where to write the root g
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Where to write the rooted target f~ (defaults to OUT.tilde)
    #[arg(long = "out-tilde", value_name = "FILE")]
    out_tilde: Option<PathBuf>,
    /// Output convention for permutations
    #[arg(long, value_parser = parse_format_arg, default_value = "oneline")]
    format: PermFormat,
}

#[derive(Args)]
struct CheckArgs {
    /// Relation-system file (`LHS = RHS` lines over x1, x2, …)
    #[arg(long, value_name = "FILE")]
    system: PathBuf,
    /// Tuple file assigning a permutation to each generator
    #[arg(long, value_name = "FILE")]
    perms: PathBuf,
}

#[derive(Args)]
struct RepairArgs {
    /// Relation-system file
    #[arg(long, value_name = "FILE")]
    system: PathBuf,
    /// Tuple file with the near-solution
    #[arg(long, value_name = "FILE")]
    perms: PathBuf,
    /// Largest closure radius to try before giving up (status 3)
    #[arg(long = "m-max", value_name = "M", default_value_t = 12)]
    m_max: u32,
    /// Where to write the repaired tuple
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Output convention for permutations
    #[arg(long, value_parser = parse_format_arg, default_value = "oneline")]
    format: PermFormat,
}

#[derive(Args)]
struct SoficArgs {
    /// Partial group table file (`a * b = c`, `unit e`, `element x` lines)
    #[arg(long, value_name = "FILE")]
    table: PathBuf,
    /// Image file: a degree line, then `label: oneline: …` lines
    #[arg(long, value_name = "FILE")]
    phi: PathBuf,
    /// Multiplicativity tolerance (defect must stay below it)
    #[arg(long, value_parser = parse_frac_arg)]
    eps: Frac,
    /// Separation threshold (non-unit images must stay above it)
    #[arg(long, value_parser = parse_frac_arg)]
    alpha: Frac,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Approximate-root defect statistics over random permutations
    Roots(RootsArgs),
    /// Corrupt planted preset solutions and measure repair distances
    Stability(StabilityArgs),
}

#[derive(Args)]
struct RootsArgs {
    /// Root exponent
    #[arg(long)]
    p: u64,
    /// Comma-separated degrees, one CSV row each
    #[arg(long, value_name = "LIST", value_delimiter = ',', required = true)]
    n: Vec<u64>,
    /// Random permutations per degree
    #[arg(long)]
    samples: u64,
    /// RNG seed (mandatory, for bitwise-reproducible output)
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct StabilityArgs {
    /// Preset system: `s3` or `cyclicM` (e.g. `cyclic3`)
    #[arg(long)]
    preset: String,
    /// Degree of the planted regular action
    #[arg(long)]
    n: u64,
    /// Comma-separated corruption rates (`1/100` or `0.01`), one row each
    #[arg(long, value_name = "LIST", value_delimiter = ',', value_parser = parse_frac_arg, required = true)]
    eps: Vec<Frac>,
    /// Corruption-and-repair trials per rate
    #[arg(long)]
    samples: u64,
    /// RNG seed (mandatory, for bitwise-reproducible output)
    #[arg(long)]
    seed: u64,
    /// Largest repair radius to try per trial
    #[arg(long = "m-max", value_name = "M", default_value_t = 12)]
    m_max: u32,
}

fn parse_format_arg(text: &str) -> Result<PermFormat, String> {
    text.parse().map_err(|e| format!("{e}"))
}

fn parse_frac_arg(text: &str) -> Result<Frac, String> {
    Frac::parse(text).map_err(|e| format!("{e}"))
}

/// Failures after argument parsing, keyed to the exit-status contract.
enum CliError {
    /// Bad input file, bad value, or I/O failure → status 1.
    Usage(String),
    /// `root exact` on a permutation with no exact root → status 2.
    NoRoot,
    /// Repair exhausted its radius budget → status 3.
    Exhausted(u32),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let ok = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            e.print().expect("console write");
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::NoRoot) => {
            eprintln!("error: no exact root exists");
            ExitCode::from(2)
        }
        Err(CliError::Exhausted(m_max)) => {
            eprintln!("error: repair failed at every radius up to {m_max}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Root(RootCommand::Exact(args)) => cmd_root_exact(args),
        Command::Root(RootCommand::Approx(args)) => cmd_root_approx(args),
        Command::Check(args) => cmd_check(args),
        Command::Repair(args) => cmd_repair(args),
        Command::Sofic(args) => cmd_sofic(args),
        Command::Experiment(ExperimentCommand::Roots(args)) => cmd_experiment_roots(args),
        Command::Experiment(ExperimentCommand::Stability(args)) => cmd_experiment_stability(args),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_permutation(path: &Path) -> Result<Permutation, CliError> {
    parse_permutation(&read_file(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_tuple(path: &Path) -> Result<PermTuple, CliError> {
    parse_tuple(&read_file(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<EquationSystem, CliError> {
    parse_system(&read_file(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// `num/den = decimal`, the standard way every rational is reported.
fn rat(x: Frac) -> String {
    format!("{x} = {}", sig6(x.to_f64()))
}

/// The defect bound as an explicit formula plus its decimal value.
fn bound_line(bound: &RootBound) -> String {
    let n = bound.degree();
    let formula: Vec<String> = bound
        .terms()
        .iter()
        .map(|&(prefix, q)| {
            if prefix == 1 {
                format!("2*sqrt(2)*({q}-1)/sqrt({q}*{n})")
            } else {
                format!("{prefix}*2*sqrt(2)*({q}-1)/sqrt({q}*{n})")
            }
        })
        .collect();
    format!("{} = {}", formula.join(" + "), sig6(bound.to_f64()))
}

fn cmd_root_exact(args: RootExactArgs) -> Result<(), CliError> {
    let f = load_permutation(&args.input)?;
    if !is_prime(args.p) {
        return Err(CliError::Usage(format!(
            "--p {} is not prime; `root approx` handles composite exponents",
            args.p
        )));
    }
    let g = match exact_root(&f, args.p) {
        Ok(g) => g,
        Err(RootError::NoExactRoot) => return Err(CliError::NoRoot),
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    write_file(&args.out, &render_permutation(&g, args.format))?;
    println!("root: {g}");
    println!("wrote {}", args.out.display());
    Ok(())
}

/// `OUT.tilde` next to `OUT`, the default target path for `root approx`.
fn tilde_path(out: &Path) -> PathBuf {
    let mut name = OsString::from(out.as_os_str());
    name.push(".tilde");
    PathBuf::from(name)
}

fn cmd_root_approx(args: RootApproxArgs) -> Result<(), CliError> {
    let f = load_permutation(&args.input)?;
    let result = approx_root(&f, args.p).map_err(|e| CliError::Usage(e.to_string()))?;
    let out_tilde = args.out_tilde.unwrap_or_else(|| tilde_path(&args.out));
    write_file(&args.out, &render_permutation(&result.g, args.format))?;
    write_file(&out_tilde, &render_permutation(&result.f_tilde, args.format))?;
    println!("defect: {}", rat(result.defect));
    println!("chain bound: {}", rat(result.chain_bound()));
    println!("a-priori bound: {}", bound_line(&result.bound));
    println!("within bound: {}", result.defect_within_bound());
    println!("wrote root to {}", args.out.display());
    println!("wrote target to {}", out_tilde.display());
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<(), CliError> {
    let sys = load_system(&args.system)?;
    let t = load_tuple(&args.perms)?;
    let defects = sys
        .relation_defects(&t)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut overall = Frac::ZERO;
    for (i, ((lhs, rhs), defect)) in sys.relations().iter().zip(&defects).enumerate() {
        println!("relation {} ({lhs} = {rhs}): defect {}", i + 1, rat(*defect));
        overall = overall.max(*defect);
    }
    println!("defect: {}", rat(overall));
    Ok(())
}

fn cmd_repair(args: RepairArgs) -> Result<(), CliError> {
    let sys = load_system(&args.system)?;
    let t = load_tuple(&args.perms)?;
    let n = t.degree();
    let result = match repair_auto(&sys, &t, args.m_max) {
        Ok(result) => result,
        Err(RepairError::Exhausted { m_max }) => return Err(CliError::Exhausted(m_max)),
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    write_file(&args.out, &render_tuple(&result.repaired, args.format))?;
    println!("radius: {}", result.radius_used);
    println!("failing vertices: {} of {n}", result.failing_count);
    println!("bad vertices: {} of {n}", result.bad_count);
    for (i, distance) in result.distances.iter().enumerate() {
        println!("distance x{}: {}", i + 1, rat(*distance));
    }
    println!("max distance: {}", rat(result.max_distance));
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_sofic(args: SoficArgs) -> Result<(), CliError> {
    let table = parse_table(&read_file(&args.table)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.table.display())))?;
    let phi: BTreeMap<String, Permutation> = parse_phi(&read_file(&args.phi)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.phi.display())))?;
    let report = check_representation(&table, &phi, args.eps, args.alpha)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    println!("mult defect: {}", rat(report.mult_defect));
    println!("unit ok: {}", report.unit_ok);
    println!("separation: {}", rat(report.separation));
    println!(
        "passes (eps {}, alpha {}): {}",
        report.eps, report.alpha, report.passes
    );
    Ok(())
}

fn cmd_experiment_roots(args: RootsArgs) -> Result<(), CliError> {
    let rows = run_roots(args.p, &args.n, args.samples, args.seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    print!("{}", roots_csv(&rows));
    Ok(())
}

fn cmd_experiment_stability(args: StabilityArgs) -> Result<(), CliError> {
    let preset = Preset::parse(&args.preset).map_err(|e| CliError::Usage(e.to_string()))?;
    let rows = run_stability(
        &preset,
        args.n,
        &args.eps,
        args.samples,
        args.seed,
        args.m_max,
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;
    print!("{}", stability_csv(&rows));
    Ok(())
}
