//! lincsp: generate, solve, check, convert and measure ell-disjoint
//! (k,d)-CSP instances from the command line.
//!
//! Exit codes: 0 on success or a SAT verdict, 10 on UNSAT verdicts, 20 when a
//! budget (resampling, search nodes or generator trials) runs out, 1 on a
//! failed check verdict or I/O trouble, 2 on usage errors.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lincsp::bounds;
use lincsp::enumerate::experiment_min_linear_2cnf;
use lincsp::generator::{search_unsat, GenParams, VerifyMode};
use lincsp::io::{from_dimacs, parse, serialize, to_dimacs};
use lincsp::solver::{
    exhaustive_solve, resample_solve, solve_sparse_frequent, two_sat_solve, DEFAULT_NODE_BUDGET,
    DEFAULT_RESAMPLE_BUDGET,
};
use lincsp::{Csp, Error, SolveOutcome};

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNSAT: u8 = 10;
const EXIT_BUDGET: u8 = 20;

#[derive(Parser)]
#[command(name = "lincsp", version, about = "ell-disjoint (k,d)-CSP toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random instance and verify it unsatisfiable
    Gen(GenArgs),
    /// Decide an instance file
    Solve(SolveArgs),
    /// Check ell-disjointness of an instance file
    Check(CheckArgs),
    /// Print the bound calculators for given parameters
    Bounds(BoundsArgs),
    /// Convert between the native format and DIMACS CNF
    Convert(ConvertArgs),
    /// Packaged experiments
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(short)]
    k: usize,
    #[arg(short)]
    d: u32,
    #[arg(short = 'l')]
    ell: usize,
    /// Vertex count (default: the closed-form choice for k, d, ell)
    #[arg(long)]
    n: Option<u64>,
    /// Constraint count (default: the first-moment requirement times --overshoot)
    #[arg(long)]
    m: Option<u64>,
    /// Seed (default: $LINCSP_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Verification mode (default: two-sat when k=2 d=2, else oracle when
    /// feasible, else none)
    #[arg(long, value_enum)]
    verify: Option<VerifyArg>,
    /// Scales the automatic m
    #[arg(long, default_value_t = 1.0)]
    overshoot: f64,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Seed for the resampling methods (default: $LINCSP_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Resample budget, or node budget for the oracle
    #[arg(long)]
    budget: Option<u64>,
    /// ell for --method sparse-frequent
    #[arg(long, default_value_t = 2)]
    ell: usize,
    file: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(short = 'l')]
    ell: usize,
    file: PathBuf,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(short)]
    k: usize,
    #[arg(short)]
    d: u32,
    #[arg(short = 'l')]
    ell: usize,
    /// Also print the linear k-CNF specialization (needs d=2, l=2)
    #[arg(long)]
    linear: bool,
    /// Also print the recursive-construction size m(0)=1, m(k+1)=m(k)2^m(k)
    #[arg(long)]
    psz: bool,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long, value_enum)]
    to: FormatArg,
    file: PathBuf,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(subcommand)]
    which: ExperimentCmd,
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Census of linear 2-CNF formulas up to renaming and sign flips
    Min2cnf {
        #[arg(long, default_value_t = 5)]
        max_clauses: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Oracle,
    TwoSat,
    None,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum MethodArg {
    Resample,
    Oracle,
    SparseFrequent,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Dimacs,
    Csp,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// Parameter-shaped library errors come from flag values, so they count as
/// usage errors; verdicts carry their own codes and never land here.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parameter(_)
        | Error::EllOutOfRange { .. }
        | Error::DomainTooSmall(_)
        | Error::UnsupportedDomain(_)
        | Error::TooManyFrequent { .. } => EXIT_USAGE,
        Error::TrialsExhausted { .. } => EXIT_BUDGET,
        _ => EXIT_CHECK_FAILED,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Check(args) => cmd_check(args),
        Cmd::Bounds(args) => cmd_bounds(args),
        Cmd::Convert(args) => cmd_convert(args),
        Cmd::Experiment(args) => match args.which {
            ExperimentCmd::Min2cnf { max_clauses } => cmd_min2cnf(max_clauses),
        },
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Error> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("LINCSP_SEED") {
        Ok(text) => text
            .parse()
            .map_err(|_| Error::Parameter(format!("LINCSP_SEED is not a u64: `{text}`"))),
        Err(_) => Ok(0),
    }
}

fn read_instance(path: &Path) -> Result<Csp, Error> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::Parameter(format!("cannot read {}: {e}", path.display())))?;
    // Sniff the header: native `p csp` or DIMACS `p cnf`.
    let is_dimacs = text
        .lines()
        .find(|l| l.starts_with("p "))
        .is_some_and(|l| l.split_whitespace().nth(1) == Some("cnf"));
    if is_dimacs {
        from_dimacs(&text)
    } else {
        parse(&text)
    }
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Parameter(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<u8, Error> {
    let seed = resolve_seed(args.seed)?;
    let verify = match args.verify {
        Some(VerifyArg::Oracle) => VerifyMode::Oracle,
        Some(VerifyArg::TwoSat) => VerifyMode::TwoSat,
        Some(VerifyArg::None) => VerifyMode::None,
        None => pick_verify(args.k, args.d, args.n, args.ell)?,
    };
    let mut params = GenParams::new(args.k, args.d, args.ell, verify);
    params.n = args.n;
    params.m = args.m;
    params.seed = seed;
    params.trials = args.trials;
    params.overshoot = args.overshoot;
    let report = search_unsat(&params)?;

    let mut content = String::new();
    content.push_str(&format!(
        "c generated: k={} d={} l={} n={} m={} seed={} trial={}\n",
        args.k,
        args.d,
        args.ell,
        report.n,
        report.m,
        seed,
        report.trials_used - 1,
    ));
    content.push_str(&format!(
        "c expected satisfying assignments: {:.6e} (ln {:.6})\n",
        report.estimate.exact, report.estimate.ln_exact
    ));
    content.push_str(&format!(
        "c verified unsatisfiable: {}\n",
        if report.verified_unsat { "yes" } else { "no" }
    ));
    content.push_str(&serialize(&report.csp));
    write_output(args.out.as_deref(), &content)?;

    eprintln!(
        "n={} m={} trials={} E[#sat]={:.3e} verified={}",
        report.n,
        report.m,
        report.trials_used,
        report.estimate.exact,
        report.verified_unsat
    );
    Ok(EXIT_OK)
}

fn pick_verify(k: usize, d: u32, n: Option<u64>, ell: usize) -> Result<VerifyMode, Error> {
    if k == 2 && d == 2 {
        return Ok(VerifyMode::TwoSat);
    }
    let n = match n {
        Some(n) => n,
        None => lincsp::generator::choose_n(k, d, ell)?,
    };
    if n as f64 * (d as f64).ln() <= 20f64 * std::f64::consts::LN_2 {
        Ok(VerifyMode::Oracle)
    } else {
        Ok(VerifyMode::None)
    }
}

fn cmd_solve(args: SolveArgs) -> Result<u8, Error> {
    let csp = read_instance(&args.file)?;
    let seed = resolve_seed(args.seed)?;
    let method = match args.method {
        MethodArg::Auto => {
            if csp.k() == 2 && csp.d() == 2 {
                MethodArg::Oracle
            } else if (csp.n_vars() as f64) * (csp.d() as f64).ln() <= 20f64 * std::f64::consts::LN_2
            {
                MethodArg::Oracle
            } else {
                MethodArg::Resample
            }
        }
        m => m,
    };
    let outcome = match method {
        MethodArg::Resample => {
            resample_solve(&csp, seed, args.budget.unwrap_or(DEFAULT_RESAMPLE_BUDGET))
        }
        MethodArg::Oracle => {
            if csp.k() == 2 && csp.d() == 2 {
                two_sat_solve(&csp)?
            } else {
                exhaustive_solve(&csp, args.budget.unwrap_or(DEFAULT_NODE_BUDGET))
            }
        }
        MethodArg::SparseFrequent => solve_sparse_frequent(
            &csp,
            args.ell,
            seed,
            args.budget.unwrap_or(DEFAULT_RESAMPLE_BUDGET),
        )?,
        MethodArg::Auto => unreachable!("resolved above"),
    };
    match outcome {
        SolveOutcome::Satisfied {
            assignment,
            resamples,
        } => {
            println!("s SATISFIABLE");
            let pairs: Vec<String> = assignment
                .iter()
                .map(|(v, x)| format!("{v}={x}"))
                .collect();
            for chunk in pairs.chunks(16) {
                println!("v {}", chunk.join(" "));
            }
            if resamples > 0 {
                eprintln!("resamples: {resamples}");
            }
            Ok(EXIT_OK)
        }
        SolveOutcome::Unsatisfiable => {
            println!("s UNSATISFIABLE");
            Ok(EXIT_UNSAT)
        }
        SolveOutcome::BudgetExceeded { resamples } => {
            println!("s BUDGET-EXCEEDED");
            if resamples > 0 {
                eprintln!("resamples: {resamples}");
            }
            Ok(EXIT_BUDGET)
        }
    }
}

fn cmd_check(args: CheckArgs) -> Result<u8, Error> {
    let csp = read_instance(&args.file)?;
    let verdict = csp.check_l_disjoint(args.ell)?;
    match verdict.witness() {
        None => {
            println!("{}-disjoint: yes", args.ell);
            Ok(EXIT_OK)
        }
        Some((i, j)) => {
            println!(
                "{}-disjoint: no (constraints {i} and {j} share at least {} variables)",
                args.ell, args.ell
            );
            println!("  {i}: {}", csp.constraints()[i]);
            println!("  {j}: {}", csp.constraints()[j]);
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

fn cmd_bounds(args: BoundsArgs) -> Result<u8, Error> {
    let report = bounds::bound_ml(args.k, args.d, args.ell)?;
    println!(
        "bounds for ell-disjoint (k,d)-CSPs   k={} d={} l={}",
        args.k, args.d, args.ell
    );
    println!("  lower                {}", report.lower);
    println!("  upper                {}   (times an unspecified constant c)", report.upper);
    println!("  frequent-threshold   {}", report.frequent_threshold);
    println!("  max-frequent         {}", report.max_frequent);
    println!("  ln-lower             {}", report.ln_lower);
    println!("  ln-upper             {}", report.ln_upper);
    println!("lower={}", report.lower);
    println!("upper={}", report.upper);
    println!("frequent_threshold={}", report.frequent_threshold);
    println!("max_frequent={}", report.max_frequent);
    println!("ln_lower={}", report.ln_lower);
    println!("ln_upper={}", report.ln_upper);

    if args.linear {
        if args.d != 2 || args.ell != 2 {
            return Err(Error::Parameter(
                "--linear applies to d=2, l=2 only".into(),
            ));
        }
        let lin = bounds::linear_bounds(args.k)?;
        println!("linear k-CNF specialization   k={}", args.k);
        println!("  lower                {}", lin.lower);
        println!("  upper                {}", lin.upper);
        println!("linear_lower={}", lin.lower);
        println!("linear_upper={}", lin.upper);
    }
    if args.psz {
        let k: u32 = args
            .k
            .try_into()
            .map_err(|_| Error::Parameter("k too large for the recursion".into()))?;
        let psz = bounds::psz_size(k)?;
        println!("recursive construction size   k={k}");
        match &psz.exact {
            Some(v) => println!("  exact                {v}"),
            None => println!("  exact                (beyond k=3; see log2)"),
        }
        println!("  log2                 {}", psz.log2);
        if let Some(v) = &psz.exact {
            println!("psz_exact={v}");
        }
        println!("psz_log2={}", psz.log2);
    }
    Ok(EXIT_OK)
}

fn cmd_convert(args: ConvertArgs) -> Result<u8, Error> {
    let csp = read_instance(&args.file)?;
    let content = match args.to {
        FormatArg::Dimacs => to_dimacs(&csp)?,
        FormatArg::Csp => serialize(&csp),
    };
    write_output(args.out.as_deref(), &content)?;
    Ok(EXIT_OK)
}

fn cmd_min2cnf(max_clauses: usize) -> Result<u8, Error> {
    let report = experiment_min_linear_2cnf(max_clauses)?;
    println!(
        "linear 2-CNF census up to {} clauses (classes modulo renaming and sign flips)",
        report.max_clauses
    );
    for (i, count) in report.classes_by_size.iter().enumerate() {
        println!("  {} clause(s): {count} class(es)", i + 1);
    }
    println!("satisfiability checks: {}", report.checked);
    if report.all_satisfiable {
        println!("verdict: all enumerated formulas are satisfiable");
    } else {
        println!("verdict: found an unsatisfiable formula");
        if let Some(example) = &report.unsat_example {
            print!("{}", serialize(example));
        }
    }
    Ok(EXIT_OK)
}
