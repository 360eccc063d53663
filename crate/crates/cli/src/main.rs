use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eqtoda_cli::{emit_report, run_compute, run_verify, Computation, ConfigError, Fault, Format, RunConfig};

/// Exit code for configuration and usage errors.
const EXIT_CONFIG: u8 = 2;
/// Exit code when a computation cannot be carried out.
const EXIT_COMPUTE: u8 = 3;

#[derive(Parser)]
#[command(name = "eqtoda", version, about = "Exact verification harness for the equivariant Toda hierarchy")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification checks and print a report.
    Verify {
        /// Check id; repeat to select several (default: all).
        #[arg(long = "check")]
        checks: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Compute and print one object.
    Compute {
        #[command(subcommand)]
        what: What,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum What {
    /// H_n over the reduced algebra.
    Hamiltonian { n: usize },
    /// A power of L, or one of its coefficients.
    Lax {
        #[arg(long, default_value_t = 1)]
        power: i32,
        #[arg(long)]
        coeff: Option<i32>,
    },
    /// The operator ell over the reduced algebra.
    Ell,
    /// The formal power L^s over the dressing algebra.
    FracPower,
    /// The coefficient a_k solved from the constraint.
    Constraint { k: usize },
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true)]
    eps_order: Option<u8>,
    #[arg(long, global = true)]
    lambda_depth: Option<usize>,
    #[arg(long, global = true)]
    n_max: Option<usize>,
    #[arg(long, global = true)]
    k_max: Option<usize>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    z_zero: bool,
    #[arg(long, global = true)]
    t_zero: bool,
    #[arg(long, global = true)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// A `key = value` config file (default: $EQTODA_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Record wall time per check (makes reports nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
    #[arg(long, global = true, hide = true)]
    inject_fault: Option<Fault>,
}

fn build_config(common: &Common, checks: Vec<String>) -> Result<RunConfig, ConfigError> {
    let mut c = RunConfig::default();
    if let Some(path) = std::env::var_os("EQTODA_CONFIG") {
        c.load_file(&PathBuf::from(path))?;
    }
    if let Some(path) = &common.config {
        c.load_file(path)?;
    }
    if let Some(v) = common.eps_order {
        c.eps_order = v;
    }
    if let Some(v) = common.lambda_depth {
        c.lambda_depth = v;
    }
    if let Some(v) = common.n_max {
        c.set_n_max(v);
    }
    if let Some(v) = common.k_max {
        c.k_max = v;
    }
    c.n = common.n.or(c.n);
    c.k = common.k.or(c.k);
    c.z_zero |= common.z_zero;
    c.t_zero |= common.t_zero;
    if let Some(f) = common.format {
        c.format = f;
    }
    if let Some(s) = common.seed {
        c.seed = s;
    }
    if !checks.is_empty() {
        c.checks = checks;
    }
    c.timings = common.timings;
    c.inject_fault = common.inject_fault;
    c.validate()?;
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, checks) = match &cli.cmd {
        Cmd::Verify { checks, common } => (common, checks.clone()),
        Cmd::Compute { common, .. } => (common, Vec::new()),
    };
    let config = match build_config(common, checks) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("eqtoda: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match cli.cmd {
        Cmd::Verify { .. } => {
            let report = run_verify(&config);
            print!("{}", emit_report(&report, config.format));
            ExitCode::from(report.exit_code() as u8)
        }
        Cmd::Compute { what, .. } => {
            let what = match what {
                What::Hamiltonian { n } => Computation::Hamiltonian(n),
                What::Lax { power, coeff } => Computation::Lax { power, coeff },
                What::Ell => Computation::Ell,
                What::FracPower => Computation::FracPower,
                What::Constraint { k } => Computation::Constraint(k),
            };
            match run_compute(&what, &config) {
                Ok(s) => {
                    print!("{s}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("eqtoda: {e}");
                    ExitCode::from(EXIT_COMPUTE)
                }
            }
        }
    }
}
