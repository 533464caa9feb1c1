use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use sturmjsr::surd::parse_rational;
use sturmjsr::*;

#[derive(Parser)]
#[command(
    name = "sturmjsr",
    version,
    about = "Joint spectral radius and Sturmian maximizing measures of positive 2x2 matrix pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify both matrices and the pair; thresholds when the pair is concave-convex.
    Classify { pair: PathBuf },
    /// Brute-force lower bound on log JSR of (A0, t A1), optionally with a norm upper bound.
    Jsr {
        pair: PathBuf,
        #[arg(long)]
        t: String,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        upper: bool,
    },
    /// Log spectral radius per letter of the Sturmian orbit with parameter p/q.
    SturmianValue {
        pair: PathBuf,
        #[arg(long)]
        t: String,
        #[arg(long)]
        param: RationalParameter,
    },
    /// CSV scan of the parameter map over geometrically spaced t.
    Staircase {
        pair: PathBuf,
        #[arg(long)]
        t_min: String,
        #[arg(long)]
        t_max: String,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        max_den: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numerical optimality certificate for the Sturmian interval at t.
    Certify {
        pair: PathBuf,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, default_value_t = 1e-12)]
        tail_tol: f64,
    },
    /// Range of t on which the parameter map equals p/q.
    Plateau {
        pair: PathBuf,
        #[arg(long)]
        param: RationalParameter,
        #[arg(long)]
        resolution: f64,
        #[arg(long)]
        max_den: u64,
    },
    /// Scaling t whose Sturmian parameter approximates an irrational target.
    Counterexample {
        pair: PathBuf,
        /// Decimal value or continued fraction `cf:a1,a2,...` meaning [0; a1, a2, ...].
        #[arg(long)]
        target: String,
        #[arg(long)]
        tol: f64,
        #[arg(long)]
        max_den: u64,
    },
}

enum Failure {
    Usage(String),
    /// Pair file rejected where a classification was requested.
    InvalidPairFile(String),
    Lib(Error),
    Inconclusive,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotInClassC | Error::NotInClassD | Error::NonPositiveMatrix | Error::OutOfInteriorRange { .. } => 2,
        Error::NoConvergence(_) => 4,
        _ => 1,
    }
}

#[derive(Serialize)]
struct ClassifyOutput {
    #[serde(rename = "A0")]
    a0: MatrixClassReport<Surd>,
    #[serde(rename = "A1")]
    a1: MatrixClassReport<Surd>,
    pair: PairClassReport<Surd>,
    thresholds: Option<ThresholdPair<Surd>>,
    extremal_plateau_edges: Option<ThresholdPair<Surd>>,
}

fn scalar(text: &str) -> Result<Surd> {
    Ok(Surd::rational(parse_rational(text)?))
}

fn positive_scalar(text: &str) -> Result<Surd> {
    let t = scalar(text)?;
    if t.to_f64() > 0.0 {
        Ok(t)
    } else {
        Err(Error::NonPositiveScale)
    }
}

fn print_json(value: &impl Serialize) -> std::result::Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

/// 17 significant digits, enough to round-trip an f64.
fn float_field(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(samples: &[StaircaseSample], out: Box<dyn Write>) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "parameter_num", "parameter_den", "value", "word"])?;
    for s in samples {
        w.write_record([
            float_field(s.t),
            s.parameter.numer().to_string(),
            s.parameter.denom().to_string(),
            float_field(s.value),
            s.word.to_string(),
        ])?;
    }
    w.flush()
}

fn load(path: &Path) -> std::result::Result<MatrixPair<Surd>, Failure> {
    read_pair(path).map_err(|e| Failure::Usage(e.to_string()))
}

fn run(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::Classify { pair } => {
            let p = read_pair(&pair).map_err(|e| Failure::InvalidPairFile(e.to_string()))?;
            let report = classify_pair(&p);
            let thresholds = if report.in_c { Some(thresholds(&p)?) } else { None };
            let edges = if report.in_c {
                Some(extremal_plateau_edges(&p)?)
            } else {
                None
            };
            print_json(&ClassifyOutput {
                a0: classify_matrix(&p.a0)?,
                a1: classify_matrix(&p.a1)?,
                pair: report,
                thresholds,
                extremal_plateau_edges: edges,
            })
        }
        Command::Jsr {
            pair,
            t,
            max_len,
            upper,
        } => {
            let p = load(&pair)?;
            let t = positive_scalar(&t)?.to_f64();
            let est = if upper {
                jsr_bounds(&p, t, max_len)?
            } else {
                jsr_lower_bruteforce(&p, t, max_len)?
            };
            print_json(&est)
        }
        Command::SturmianValue { pair, t, param } => {
            let p = load(&pair)?;
            let t = positive_scalar(&t)?.to_f64();
            println!("{}", sturmian_value(&p, t, param)?);
            Ok(())
        }
        Command::Staircase {
            pair,
            t_min,
            t_max,
            samples,
            max_den,
            out,
        } => {
            let p = load(&pair)?;
            let scan = staircase_scan(
                &p,
                positive_scalar(&t_min)?.to_f64(),
                positive_scalar(&t_max)?.to_f64(),
                samples,
                max_den,
            )?;
            let sink: Box<dyn Write> = match &out {
                Some(path) => {
                    Box::new(File::create(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?)
                }
                None => Box::new(io::stdout()),
            };
            write_csv(&scan, sink).map_err(|e| Failure::Usage(e.to_string()))
        }
        Command::Certify {
            pair,
            t,
            grid,
            tail_tol,
        } => {
            let p = load(&pair)?;
            let t = positive_scalar(&t)?;
            let cfg = TransferSeriesConfig {
                tail_tolerance: tail_tol,
                ..TransferSeriesConfig::default()
            };
            let report = certify(&p, &t, grid, &cfg)?;
            print_json(&report)?;
            match report.verdict {
                Verdict::Certified => Ok(()),
                Verdict::Inconclusive => Err(Failure::Inconclusive),
            }
        }
        Command::Plateau {
            pair,
            param,
            resolution,
            max_den,
        } => {
            let p = load(&pair)?;
            print_json(&plateau_bounds(&p, param, resolution, max_den)?)
        }
        Command::Counterexample {
            pair,
            target,
            tol,
            max_den,
        } => {
            let p = load(&pair)?;
            print_json(&counterexample_search(&p, parse_target(&target)?, tol, max_den)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Inconclusive) => ExitCode::from(3),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::InvalidPairFile(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
