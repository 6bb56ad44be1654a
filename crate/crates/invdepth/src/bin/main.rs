use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use invdepth::invariants::dickson_invariants;
use invdepth::poly::GradingConvention;
use invdepth::report::{run_scenario, Report, RunOptions};
use invdepth::scenario::Scenario;
use invdepth::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GradingArg {
    Algebraic,
    Topological,
}

impl From<GradingArg> for GradingConvention {
    fn from(g: GradingArg) -> Self {
        match g {
            GradingArg::Algebraic => GradingConvention::Algebraic,
            GradingArg::Topological => GradingConvention::Topological,
        }
    }
}

/// Depth invariants of modular invariant rings F[V]^G, with executable
/// checks of the depth theorems they satisfy.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// maximum polynomial degree examined by every truncated computation
    #[arg(long, global = true)]
    cutoff: Option<u32>,
    /// RNG seed for the regular-sequence search
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// directory for cached invariant bases
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// write the full JSON report here
    #[arg(long, global = true)]
    report_out: Option<PathBuf>,
    /// degree convention used when displaying degrees
    #[arg(long, global = true, value_enum, default_value_t = GradingArg::Algebraic)]
    grading: GradingArg,
    /// include per-phase timings in the report (makes reports nondeterministic)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Minimal generators of the invariant ring up to the cutoff
    Invariants { scenario: PathBuf },
    /// Hilbert coefficients of the invariant ring up to the cutoff
    Hilbert { scenario: PathBuf },
    /// Dickson invariants for the scenario's (p, n)
    Dickson { scenario: PathBuf },
    /// Depth by Koszul homology plus a certified regular sequence
    Depth { scenario: PathBuf },
    /// Duflot bound (and lifting, when the scenario supplies sequences)
    Duflot { scenario: PathBuf },
    /// Detection by pointwise stabilizers of s-dimensional subspaces
    Carlson { scenario: PathBuf },
    /// Comodule identities of the Sylow-subgroup coaction
    Coaction { scenario: PathBuf },
    /// Full pipeline honoring the scenario's theorem selection
    Run { scenario: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode, Error> {
    let (path, theorems) = match &cli.cmd {
        Cmd::Invariants { scenario } | Cmd::Hilbert { scenario } => (scenario, Some(vec![])),
        Cmd::Dickson { scenario } => return dickson(cli, scenario),
        Cmd::Depth { scenario } => (scenario, Some(vec![])),
        Cmd::Duflot { scenario } => (scenario, None), // filled below
        Cmd::Carlson { scenario } => (scenario, Some(vec!["carlson".to_string()])),
        Cmd::Coaction { scenario } => (scenario, Some(vec!["coaction".to_string()])),
        Cmd::Run { scenario } => (scenario, None),
    };
    let mut scenario = Scenario::from_path(path)?;
    match &cli.cmd {
        Cmd::Duflot { .. } => {
            let mut list = vec!["duflot".to_string(), "es".to_string()];
            if scenario.sequences.is_some() {
                list.push("lifting".to_string());
            }
            scenario.theorems = Some(list);
        }
        Cmd::Run { .. } => {}
        _ => scenario.theorems = theorems,
    }
    let opts = RunOptions {
        cutoff: cli.cutoff,
        seed: cli.seed,
        cache_dir: cli.cache_dir.clone(),
        grading: cli.grading.into(),
        timings: cli.timings,
        force_depth: matches!(cli.cmd, Cmd::Depth { .. }),
    };
    let report = run_scenario(&scenario, &opts)?;
    print_report(&cli.cmd, &report);
    if let Some(out) = &cli.report_out {
        std::fs::write(out, report.to_json())?;
    }
    if report.any_theorem_failed() {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn dickson(cli: &Cli, path: &PathBuf) -> Result<ExitCode, Error> {
    let scenario = Scenario::from_path(path)?;
    let grading: GradingConvention = cli.grading.into();
    let ds = dickson_invariants(scenario.p, scenario.n)?;
    println!("Dickson invariants for p={} n={}:", scenario.p, scenario.n);
    for d in &ds {
        println!(
            "  degree {:>3}: {}",
            grading.display_degree(d.degree().unwrap()),
            d
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn print_report(cmd: &Cmd, report: &Report) {
    let grading = report.grading;
    match cmd {
        Cmd::Invariants { .. } => {
            println!(
                "minimal generator degrees up to cutoff {}: {:?}",
                report.cutoff, report.minimal_generator_degrees
            );
        }
        Cmd::Hilbert { .. } => {
            println!("Hilbert coefficients up to cutoff {}:", report.cutoff);
            for (d, c) in report.hilbert.iter().enumerate() {
                println!("  degree {:>3}: {c}", grading.display_degree(d as u32));
            }
        }
        Cmd::Depth { .. } => {
            let depth = report.depth.as_ref().expect("depth requested");
            println!("depth = {}", depth.depth);
            println!(
                "  certified regular sequence degrees: {:?}",
                depth
                    .certificate
                    .sequence
                    .iter()
                    .map(|f| grading.display_degree(f.degree().unwrap()))
                    .collect::<Vec<_>>()
            );
            println!(
                "  Koszul: hsop length {}, top nonvanishing H_{}, rechecked at cutoff {}",
                depth.koszul.hsop.len(),
                depth.koszul.top_nonvanishing,
                depth.koszul_recheck_cutoff
            );
        }
        _ => {
            if let Some(depth) = &report.depth {
                println!("depth = {}", depth.depth);
            }
        }
    }
    for v in &report.verdicts {
        println!("{}: {:?} ({})", v.theorem, v.status, v.instance);
    }
    if !report.verdicts.is_empty() {
        println!(
            "{}",
            if report.all_passed {
                "all checks passed"
            } else {
                "CHECK FAILED"
            }
        );
    }
}
