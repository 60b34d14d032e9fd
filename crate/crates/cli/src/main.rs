use clap::{Parser, Subcommand};
use spectra_cli::config::{parse_grid, parse_params, ExperimentConfig, Suite};
use spectra_cli::emit::{write_csv, write_table};
use spectra_cli::sample::{sample_table, Ensemble, SampleSpec};
use spectra_cli::theory::theory_value;
use spectra_cli::{run_suite, Result};
use spectra_core::planar::{parameter_sweep, SweepModel};
use spectra_core::randgen::RngState;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser, Debug)]
#[command(
    name = "spectra",
    version,
    about = "Rank-one perturbed random matrices: sampling, theory and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw spectra and write one CSV row per replica.
    Sample {
        #[arg(long)]
        ensemble: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        /// Wishart row count (default 2N).
        #[arg(long, default_value_t = 0)]
        rows: usize,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a closed-form or tabulated quantity; prints JSON.
    Theory {
        #[arg(long)]
        quantity: String,
        /// `k=v,k=v`.
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Run a figure suite (or `all`) and write `<suite>.csv` and `<suite>.json`.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Suite parameter overrides, `k=v,k=v`.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value = "spectra-out")]
        out: PathBuf,
        /// Wall-clock cap per suite.
        #[arg(long, default_value_t = 600.0)]
        cap_seconds: f64,
    },
    /// Follow one realization across a coupling grid; CSV to `--out` or stdout.
    Sweep {
        #[arg(long)]
        model: String,
        /// `lo:hi:step`.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Sample {
            ensemble,
            n,
            alpha,
            b,
            a,
            beta,
            rows,
            reps,
            seed,
            out,
        } => {
            let spec = SampleSpec {
                alpha,
                b,
                a,
                beta,
                rows,
                ..SampleSpec::new(ensemble.parse::<Ensemble>()?, n)
            };
            write_csv(&sample_table(&spec, reps, seed)?, &out)?;
            Ok(true)
        }
        Command::Theory { quantity, params } => {
            let params = parse_params(&params)?;
            let value = theory_value(&quantity, &params)?;
            let out = serde_json::json!({ "quantity": quantity, "params": params, "value": value });
            println!("{out}");
            Ok(true)
        }
        Command::Verify {
            suite,
            n,
            reps,
            seed,
            params,
            out,
            cap_seconds,
        } => {
            if !(cap_seconds > 0.0) {
                return Err(spectra_cli::CliError::Config(
                    "cap-seconds must be positive".into(),
                ));
            }
            let is_all = suite.eq_ignore_ascii_case("all");
            let suites: Vec<Suite> = if is_all {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse()?]
            };
            let overrides = parse_params(&params)?;
            let mut all_pass = true;
            for s in suites {
                let mut cfg = ExperimentConfig::new(s)
                    .with_seed(seed)
                    .with_output(&out)
                    .with_cap(Duration::from_secs_f64(cap_seconds));
                if let Some(n) = n {
                    cfg = cfg.with_n(n);
                }
                if let Some(r) = reps {
                    cfg = cfg.with_reps(r);
                }
                for (k, v) in &overrides {
                    // With `all`, apply each override only where it is meaningful.
                    if s.default_params().iter().any(|(name, _)| name == k) || !is_all {
                        cfg = cfg.with_param(k, *v);
                    }
                }
                let report = run_suite(&cfg)?.report;
                println!("{}", report.summary());
                all_pass &= report.pass;
            }
            Ok(all_pass)
        }
        Command::Sweep {
            model,
            grid,
            n,
            seed,
            out,
        } => {
            let model = match model.to_ascii_lowercase().as_str() {
                "antiherm" => SweepModel::Antiherm,
                "subunitary" => SweepModel::Subunitary,
                m => {
                    return Err(spectra_cli::CliError::Config(format!(
                        "unknown model `{m}` (antiherm, subunitary)"
                    )))
                }
            };
            let grid = parse_grid(&grid)?;
            let t = parameter_sweep(&mut RngState::new(seed).split(0).stream(), model, &grid, n)?;
            let table = spectra_cli::suites::sweep_table(&t);
            match out {
                Some(path) => write_csv(&table, &path)?,
                None => write_table(&table, std::io::stdout().lock()).map_err(|e| {
                    spectra_cli::CliError::Config(format!("writing to stdout: {e}"))
                })?,
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
