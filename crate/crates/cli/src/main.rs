use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use spinflux::flux::argmax;
use spinflux::oracle::{fidelity_with_spectrum, Spectrum};
use spinflux::{build_closure, export_dot, verify, FluxProblem};

mod run;

use run::{resolve, Correction, Run};

const EXIT_VALIDATION: u8 = 1;
const EXIT_COMPUTATION: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "spinflux", version, about = "Information flux and transfer fidelity of spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the commutator closure of the seed as a DOT graph.
    Graph(RunArgs),
    /// Write the `t,flux` series.
    Flux(RunArgs),
    /// Write the `t,fidelity` series (worst case, input |1>).
    Fidelity(RunArgs),
    /// Write `t,flux,fidelity` and report where each peaks.
    Compare(RunArgs),
    /// Run the reference checks.
    Verify {
        /// Print the check names without running them.
        #[arg(long)]
        list: bool,
    },
}

/// Flags mirror the config keys and take precedence over them.
#[derive(Args, Debug, Default, Clone)]
pub struct RunArgs {
    /// TOML file with chain keys and an optional [run] table.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Separate chain config file.
    #[arg(long)]
    pub chain: Option<PathBuf>,
    /// Number of sites.
    #[arg(long)]
    pub n: Option<usize>,
    /// xx, heisenberg or generic.
    #[arg(long)]
    pub model: Option<String>,
    /// Comma-separated J_1..J_{N-1}.
    #[arg(long, allow_hyphen_values = true)]
    pub couplings: Option<String>,
    /// Engineered couplings J sqrt(k (N - k)) with this J.
    #[arg(long)]
    pub christandl: Option<f64>,
    /// Comma-separated Z fields B_1..B_N.
    #[arg(long, allow_hyphen_values = true)]
    pub fields: Option<String>,
    #[arg(long)]
    pub output_site: Option<usize>,
    #[arg(long)]
    pub output_letter: Option<String>,
    #[arg(long)]
    pub input_letter: Option<String>,
    /// Sites 2..N: bits like `00`, or `;`-separated `0`, `1` or `x,y,z`.
    #[arg(long, allow_hyphen_values = true)]
    pub register: Option<String>,
    /// start:stop:points, e.g. `0:pi/2:201`.
    #[arg(long)]
    pub grid: Option<String>,
    /// exact or taylor.
    #[arg(long)]
    pub method: Option<String>,
    /// Series cutoff M for the taylor method.
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long)]
    pub max_nodes: Option<usize>,
    /// raw, corrected or both.
    #[arg(long)]
    pub correction: Option<String>,
    /// Seed string for `graph`, e.g. `X5` or `I`.
    #[arg(long)]
    pub seed: Option<String>,
    /// Output file; stdout when absent or `-`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn classify(error: anyhow::Error) -> Failure {
    let computation = error.chain().any(|e| e.downcast_ref::<spinflux::Error>().is_some_and(|e| e.is_computation()));
    Failure { code: if computation { EXIT_COMPUTATION } else { EXIT_VALIDATION }, error }
}

fn emit(run: &Run, body: &str) -> Result<()> {
    match &run.out {
        Some(path) if path.as_os_str() != "-" => {
            fs::write(path, body).with_context(|| format!("writing {}", path.display()))
        }
        _ => {
            print!("{body}");
            Ok(())
        }
    }
}

fn flux_problem(run: &Run, corrected: bool) -> FluxProblem {
    let mut p = FluxProblem::new(run.hamiltonian.clone(), run.output_site, run.output_letter, run.input_letter);
    p.state = run.register.clone();
    p.method = run.method;
    p.max_nodes = run.max_nodes;
    p.phase_corrected = corrected;
    p
}

fn cmd_graph(run: &Run) -> Result<()> {
    let g = build_closure(&run.hamiltonian, &run.seed, run.max_nodes)?;
    let dot = export_dot(&g, Some(&run.spec.term_symbols()));
    emit(run, &dot)?;
    let plural = |k: usize, word: &str| format!("{k} {word}{}", if k == 1 { "" } else { "s" });
    eprintln!("closure of {}: {}, {}", run.seed, plural(g.len(), "node"), plural(g.edges().len(), "edge"));
    Ok(())
}

fn cmd_flux(run: &Run) -> Result<()> {
    let times = run.require_grid()?.times();
    let body = match run.correction {
        Correction::Raw => flux_problem(run, false).series(&times)?.to_csv(),
        Correction::Corrected => flux_problem(run, true).series(&times)?.to_csv(),
        Correction::Both => {
            let raw = flux_problem(run, false).series(&times)?;
            let fixed = flux_problem(run, true).series(&times)?;
            let mut out = String::from("t,flux,flux_corrected\n");
            for ((t, a), b) in times.iter().zip(&raw.flux).zip(&fixed.flux) {
                let _ = writeln!(out, "{t:?},{a:?},{b:?}");
            }
            out
        }
    };
    emit(run, &body)
}

fn fidelity_series(run: &Run, times: &[f64]) -> Result<Vec<f64>> {
    let spectrum = Spectrum::of(&run.hamiltonian)?;
    Ok(times.iter().map(|&t| fidelity_with_spectrum(&spectrum, t)).collect())
}

fn cmd_fidelity(run: &Run) -> Result<()> {
    let times = run.require_grid()?.times();
    let fidelity = fidelity_series(run, &times)?;
    let mut out = String::from("t,fidelity\n");
    for (t, f) in times.iter().zip(&fidelity) {
        let _ = writeln!(out, "{t:?},{f:?}");
    }
    emit(run, &out)
}

fn cmd_compare(run: &Run) -> Result<()> {
    let times = run.require_grid()?.times();
    if run.correction == Correction::Both {
        anyhow::bail!("compare takes correction = raw or corrected");
    }
    let flux = flux_problem(run, run.correction == Correction::Corrected).series(&times)?.flux;
    let fidelity = fidelity_series(run, &times)?;
    let mut out = String::from("t,flux,fidelity\n");
    for ((t, f), q) in times.iter().zip(&flux).zip(&fidelity) {
        let _ = writeln!(out, "{t:?},{f:?},{q:?}");
    }
    let magnitude: Vec<f64> = flux.iter().map(|f| f.abs()).collect();
    let (kf, kq) = (argmax(&magnitude).unwrap_or(0), argmax(&fidelity).unwrap_or(0));
    emit(run, &out)?;
    eprintln!(
        "argmax |flux| at t = {:?} (index {kf}, |flux| = {:?}); argmax fidelity at t = {:?} (index {kq}, F = {:?}); distance {} grid steps",
        times[kf],
        magnitude[kf],
        times[kq],
        fidelity[kq],
        kf.abs_diff(kq)
    );
    Ok(())
}

fn cmd_verify(list: bool) -> ExitCode {
    if list {
        for c in verify::checks() {
            println!("{} {}", c.id, c.name);
        }
        return ExitCode::SUCCESS;
    }
    let mut all = true;
    for c in verify::checks() {
        let outcome = (c.run)();
        println!("{outcome}");
        all &= outcome.passed;
    }
    if all {
        println!("all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("some checks failed");
        ExitCode::from(EXIT_VERIFY)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (args, command): (&RunArgs, fn(&Run) -> Result<()>) = match &cli.command {
        Command::Verify { list } => return cmd_verify(*list),
        Command::Graph(a) => (a, cmd_graph),
        Command::Flux(a) => (a, cmd_flux),
        Command::Fidelity(a) => (a, cmd_fidelity),
        Command::Compare(a) => (a, cmd_compare),
    };
    let outcome = resolve(args).map_err(|e| Failure { code: EXIT_VALIDATION, error: e }).and_then(|run| {
        if matches!(cli.command, Command::Fidelity(_) | Command::Compare(_)) {
            run.check_dense_cap().map_err(classify)?;
            run.require_grid().map_err(|e| Failure { code: EXIT_VALIDATION, error: e })?;
        }
        if matches!(cli.command, Command::Flux(_)) {
            run.require_grid().map_err(|e| Failure { code: EXIT_VALIDATION, error: e })?;
        }
        command(&run).map_err(classify)
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
