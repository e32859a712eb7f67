use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use roughmass::bounds::{a_p, moser_bounds, moser_breakdown};
use roughmass::conformal::structural_constants;
use roughmass::pipeline::{check_config, emit_report, run_pipeline, summary, PipelineConfig};
use roughmass::scenarios::ScenarioKind;
use roughmass::Error;

const PASS: u8 = 0;
const FAIL: u8 = 1;
const CONFIG: u8 = 2;
const BREAKDOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "roughmass", version, about = "Conformal correction and ADM mass of rough metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline described by a TOML config and write the report.
    Run { config: PathBuf },
    /// List the built-in scenarios.
    ScenarioList,
    /// Validate a config without running it.
    Check { config: PathBuf },
    /// Moser bounds and breakdown for given constants.
    Bounds { n: usize, p: f64, c1: f64, fnorm: f64, vol: f64 },
}

fn error_code(e: &Error) -> u8 {
    if e.is_numerical() {
        BREAKDOWN
    } else {
        CONFIG
    }
}

fn run(path: PathBuf) -> u8 {
    let cfg = match PipelineConfig::load(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return CONFIG;
        }
    };
    let result = match run_pipeline(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return error_code(&e);
        }
    };
    if let Err(e) = emit_report(&result, &cfg.output.dir, cfg.output.plotdata) {
        eprintln!("cannot write report to {}: {e}", cfg.output.dir.display());
        return CONFIG;
    }
    print!("{}", summary(&result));
    println!("report written to {}", cfg.output.dir.display());
    result.exit_code() as u8
}

fn check(path: PathBuf) -> u8 {
    let cfg = match PipelineConfig::load(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return CONFIG;
        }
    };
    match check_config(&cfg) {
        Ok(sc) => {
            let disc = sc.metric.disc();
            println!(
                "ok: {} on {} nodes (n = {}, h = {}), {} smoothing scale(s)",
                sc.kind.name(),
                disc.len(),
                disc.dim(),
                disc.spacing(),
                cfg.mollify.eps.len()
            );
            PASS
        }
        Err(e) => {
            eprintln!("{e}");
            CONFIG
        }
    }
}

fn bounds(n: usize, p: f64, c1: f64, fnorm: f64, vol: f64) -> u8 {
    if n < 3 || !(c1 > 0.0) || !(fnorm >= 0.0) || !(vol > 0.0) {
        eprintln!("need n >= 3, c1 > 0, fnorm >= 0 and vol > 0");
        return CONFIG;
    }
    let sc = match structural_constants(n, p) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return CONFIG;
        }
    };
    println!("chi = {}", sc.chi);
    println!("sigma = {}", sc.sigma);
    println!("tau = {}", sc.tau);
    println!("chi^tau = {}", sc.chi_pow_tau());
    println!("A_p = {}", a_p(n, p, c1, fnorm, vol));
    let mut code = PASS;
    match moser_bounds(n, p, c1, fnorm, vol) {
        Ok((lo, hi)) => {
            println!("v >= {lo}");
            println!("v <= {hi}");
        }
        Err(e) => {
            println!("moser bounds unavailable: {e}");
            code = FAIL;
        }
    }
    if fnorm > 0.0 {
        if let Ok(b) = moser_breakdown(n, c1, fnorm) {
            println!("beta_max = {} (treating fnorm as the L^(n/2) norm)", b.beta_max);
            println!("p_max = {}", b.p_max);
        }
    }
    code
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config } => run(config),
        Command::ScenarioList => {
            for k in ScenarioKind::ALL {
                println!("{:<16} {}", k.name(), k.description());
            }
            PASS
        }
        Command::Check { config } => check(config),
        Command::Bounds { n, p, c1, fnorm, vol } => bounds(n, p, c1, fnorm, vol),
    };
    ExitCode::from(code)
}
