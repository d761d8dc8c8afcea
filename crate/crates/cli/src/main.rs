//! `heisvoc`: command-line front end for the M(1) engines and the axiom verifier.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use heisvoc_core::expr::parse_vector;
use heisvoc_core::verify::{self, Suite, VerificationConfig, VerificationReport};
use heisvoc_core::{basis_of_weight, bilinear_form, Error, Faults, Rank, VocContext};

#[derive(Parser)]
#[command(name = "heisvoc", version, about = "Exact computations in the Heisenberg VOA M(1) and its dual coalgebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the basis monomials of one weight.
    Basis {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        weight: usize,
    },
    /// Evaluate the bilinear form (U, V).
    Pair {
        #[arg(long)]
        dim: u32,
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(allow_hyphen_values = true)]
        v: String,
    },
    /// Compute the mode v_k w.
    Ycoeff {
        #[arg(long)]
        dim: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(allow_hyphen_values = true)]
        v: String,
        #[arg(allow_hyphen_values = true)]
        w: String,
    },
    /// Compute the coproduct component Δ_k(u), one tensor term per line.
    Coproduct {
        #[arg(long)]
        dim: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(allow_hyphen_values = true)]
        u: String,
    },
    /// Apply the Virasoro operator L(k).
    Lapply {
        #[arg(long)]
        dim: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(allow_hyphen_values = true)]
        v: String,
    },
    /// Check the axioms on all basis tuples up to a weight.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Voa,
    Voc,
    Adjoint,
    Virasoro,
    Preserving,
    Invariance,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    /// Negate the quadratic part of L(k) for k > 0.
    FlipVirasoroSign,
    /// Omit the 1/p(v) normalization of the coproduct.
    DropPNormalization,
}

#[derive(clap::Args)]
struct VerifyArgs {
    suite: SuiteArg,
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    max_weight: usize,
    /// Exponent window for the Jacobi identities and the invariance diagnostic.
    #[arg(long, value_name = "LO:HI", allow_hyphen_values = true, value_parser = parse_range)]
    window: Option<[i64; 2]>,
    /// Mode indices for checks quantified over all k.
    #[arg(long, value_name = "LO:HI", allow_hyphen_values = true, value_parser = parse_range)]
    index_range: Option<[i64; 2]>,
    /// Indices j, k for the Virasoro checks.
    #[arg(long, value_name = "LO:HI", allow_hyphen_values = true, value_parser = parse_range)]
    virasoro_range: Option<[i64; 2]>,
    /// Largest m in the creation and cocreation checks.
    #[arg(long)]
    creation_order: Option<u32>,
    /// Refuse runs whose estimated comparison count exceeds this.
    #[arg(long)]
    budget: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Switch on a deliberate defect (repeatable).
    #[arg(long, value_enum)]
    fault: Vec<FaultArg>,
}

fn parse_range(text: &str) -> Result<[i64; 2], String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got '{text}'"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok([lo, hi])
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn rank(dim: u32) -> Result<Rank, Error> {
    Rank::new(dim)
}

fn execute(command: Command) -> Result<ExitCode, String> {
    let fail = |e: Error| e.to_string();
    match command {
        Command::Basis { dim, weight } => {
            for m in basis_of_weight(rank(dim).map_err(fail)?, weight) {
                println!("{m}");
            }
        }
        Command::Pair { dim, u, v } => {
            let r = rank(dim).map_err(fail)?;
            let u = parse_vector(&u, r).map_err(fail)?;
            let v = parse_vector(&v, r).map_err(fail)?;
            println!("{}", bilinear_form(&u, &v));
        }
        Command::Ycoeff { dim, k, v, w } => {
            let ctx = VocContext::new(rank(dim).map_err(fail)?);
            let v = parse_vector(&v, ctx.rank()).map_err(fail)?;
            let w = parse_vector(&w, ctx.rank()).map_err(fail)?;
            println!("{}", ctx.voa().y_coefficient(&v, k, &w).map_err(fail)?);
        }
        Command::Coproduct { dim, k, u } => {
            let ctx = VocContext::new(rank(dim).map_err(fail)?);
            let u = parse_vector(&u, ctx.rank()).map_err(fail)?;
            let t = ctx.coproduct_coefficient(&u, k).map_err(fail)?;
            if t.is_zero() {
                println!("0");
            }
            for ((l, r), c) in t.terms() {
                println!("{c}\t{l}\t{r}");
            }
        }
        Command::Lapply { dim, k, v } => {
            let ctx = VocContext::new(rank(dim).map_err(fail)?);
            let v = parse_vector(&v, ctx.rank()).map_err(fail)?;
            println!("{}", ctx.voa().virasoro_apply(k, &v));
        }
        Command::Verify(args) => return run_verify(args),
    }
    Ok(ExitCode::SUCCESS)
}

fn config_of(args: &VerifyArgs) -> VerificationConfig {
    let mut config = VerificationConfig::new(args.dim, args.max_weight);
    config.suites = match args.suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Voa => vec![Suite::Voa],
        SuiteArg::Voc => vec![Suite::Voc],
        SuiteArg::Adjoint => vec![Suite::Adjoint],
        SuiteArg::Virasoro => vec![Suite::Virasoro],
        SuiteArg::Preserving => vec![Suite::Preserving],
        SuiteArg::Invariance => vec![Suite::Invariance],
    };
    if let Some(w) = args.window {
        config.window = w;
    }
    if let Some(r) = args.index_range {
        config.index_range = r;
    }
    if let Some(r) = args.virasoro_range {
        config.virasoro_range = r;
    }
    if let Some(m) = args.creation_order {
        config.creation_order = m;
    }
    if let Some(b) = args.budget {
        config.budget = b;
    }
    config.faults = Faults {
        flip_virasoro_sign: args.fault.contains(&FaultArg::FlipVirasoroSign),
        drop_p_normalization: args.fault.contains(&FaultArg::DropPNormalization),
    };
    config
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let config = config_of(&args);
    let report = match args.jobs {
        Some(jobs) => verify::run_with_jobs(&config, jobs),
        None => verify::run(&config),
    }
    .map_err(|e| e.to_string())?;
    print_summary(&report);
    if let Some(path) = &args.report {
        let json = verify::report_json(&report).map_err(|e| e.to_string())?;
        std::fs::write(path, json).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn print_summary(report: &VerificationReport) {
    let c = &report.config;
    println!(
        "d={} max-weight={} window={}:{} index-range={}:{} virasoro-range={}:{}",
        c.rank,
        c.max_weight,
        c.window[0],
        c.window[1],
        c.index_range[0],
        c.index_range[1],
        c.virasoro_range[0],
        c.virasoro_range[1]
    );
    for r in &report.records {
        let status = match (r.passed, r.diagnostic) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "DIAG",
        };
        let scope = match r.scope {
            verify::Scope::ExhaustiveByGrading => "exhaustive-by-grading",
            verify::Scope::Windowed => "windowed",
        };
        println!(
            "{status} {}/{} [{scope}] {} checks",
            r.suite.name(),
            r.axiom,
            r.checks
        );
        if let Some(w) = &r.witness {
            let probe = verify::probe_json(&w.probe);
            println!("     witness {probe}");
            println!("     lhs = {}", w.lhs);
            println!("     rhs = {}", w.rhs);
        }
    }
    let s = &report.summary;
    println!(
        "{} records: {} passed, {} failed, {} diagnostic failures; {} comparisons",
        s.records, s.passed, s.failed, s.diagnostic_failures, s.checks
    );
}
