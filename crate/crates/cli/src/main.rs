//! Command-line front door: file I/O, subcommand dispatch, config parsing
//! and report emission.
//!
//! Exit codes: 0 on success, 1 on validation or I/O errors, 2 when `verify`
//! finds a numerical check outside its tolerance.

mod expr;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cliffwave::cwt::{cwt_analyze, reconstruct, CwtGrid};
use cliffwave::fourier::{cft_forward, cft_inverse};
use cliffwave::grid::GridSpec;
use cliffwave::io;
use cliffwave::spin::haar_quadrature;
use cliffwave::suite::{
    build_corpus, build_wavelet, normalizer_for, run_verification_suite, RunConfig, SuiteSelection,
};
use cliffwave::uncertainty::{fourier_uncertainty, lemma_check, wavelet_uncertainty};
use cliffwave::wavelet::admissibility;
use cliffwave::CliffError;

#[derive(Parser)]
#[command(
    name = "cliffwave",
    about = "Clifford algebra arithmetic, Clifford-Fourier and continuous Clifford wavelet transforms on sampled fields, with a numerical verification suite",
    version
)]
struct Cli {
    /// Worker-thread cap (falls back to CLIFFWAVE_THREADS, then all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a Clifford expression and pretty-print the result
    Algebra(AlgebraArgs),
    /// Emit built-in wavelets or corpus test fields as CField files
    Gen(GenArgs),
    /// Clifford-Fourier transform of a CField file
    Cft(CftArgs),
    /// Admissibility report for a wavelet (JSON on stdout)
    Admissibility(AdmissibilityArgs),
    /// Continuous Clifford wavelet transform of a CField file
    Cwt(CwtArgs),
    /// Resynthesize a field from a CWTT coefficient tensor
    Reconstruct(ReconstructArgs),
    /// Heisenberg-type uncertainty checks for one field (JSON on stdout)
    Uncertainty(UncertaintyArgs),
    /// Run the numerical verification suite and write reports
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AlgebraArgs {
    /// Expression over blades e1..en, scalars, i, and rev/conj/ginv/herm
    expression: String,
    /// Algebra dimension; inferred from the largest generator if omitted
    #[arg(long)]
    n: Option<usize>,
    /// Also print the grade decomposition
    #[arg(long)]
    grades: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Built-in wavelet: vector-gaussian | mexican-hat | gaussian
    #[arg(long, conflicts_with = "corpus_field")]
    wavelet: Option<String>,
    /// Index into the deterministic verification corpus
    #[arg(long)]
    corpus_field: Option<usize>,
    /// Corpus seed (only with --corpus-field)
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Points per axis (odd)
    #[arg(long, default_value_t = 65)]
    shape: usize,
    /// Half-extent per axis: the grid spans [-span, span]
    #[arg(long, default_value_t = 8.0)]
    span: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CftArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Apply the inverse transform (input must be frequency-domain)
    #[arg(long)]
    inverse: bool,
}

#[derive(Args)]
struct AdmissibilityArgs {
    /// Built-in wavelet name or CField path
    #[arg(long)]
    wavelet: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Optional grid override (points per axis)
    #[arg(long)]
    shape: Option<usize>,
    /// Optional grid override (half-extent)
    #[arg(long)]
    span: Option<f64>,
    /// Write the radial integrand profile as CSV
    #[arg(long)]
    profile_csv: Option<PathBuf>,
}

#[derive(Args)]
struct CwtArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// vector-gaussian | mexican-hat | path to a CField wavelet
    #[arg(long)]
    wavelet: String,
    /// Scale grid as min:max:count (log-spaced)
    #[arg(long, default_value = "0.125:8:32")]
    scales: String,
    /// Spin quadrature node count
    #[arg(long, default_value_t = 16)]
    spins: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    wavelet: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct UncertaintyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// fourier | wavelet | lemma
    #[arg(long, default_value = "fourier")]
    kind: String,
    /// 1-based coordinate axis
    #[arg(long, default_value_t = 1)]
    axis: usize,
    #[arg(long, default_value = "vector-gaussian")]
    wavelet: String,
    #[arg(long, default_value = "0.125:8:32")]
    scales: String,
    #[arg(long, default_value_t = 16)]
    spins: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// algebra | fourier | wavelet | uncertainty | all
    #[arg(long, default_value = "all")]
    suite: String,
    /// RunConfig JSON; built-in reference settings when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for summary.json / summary.csv
    #[arg(long)]
    report_dir: Option<PathBuf>,
    /// Also write plain columnar summary.dat for gnuplot
    #[arg(long)]
    emit_gnuplot_ready: bool,
}

fn main() -> ExitCode {
    // usage errors exit 1 (validation); 2 is reserved for check failures
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    configure_threads(cli.threads);
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads(flag: Option<usize>) {
    let from_env = std::env::var("CLIFFWAVE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    if let Some(count) = flag.or(from_env) {
        // ignore failure: the global pool may already exist in tests
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(count.max(1))
            .build_global();
    }
}

fn parse_scales(text: &str) -> Result<(f64, f64, usize), CliffError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliffError::Config(format!(
            "--scales expects min:max:count, got '{text}'"
        )));
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|_| CliffError::Config(format!("bad scale minimum '{}'", parts[0])))?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|_| CliffError::Config(format!("bad scale maximum '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliffError::Config(format!("bad scale count '{}'", parts[2])))?;
    Ok((min, max, count))
}

fn run(command: Command) -> Result<ExitCode, CliffError> {
    match command {
        Command::Algebra(args) => {
            let n = match args.n {
                Some(n) => n,
                None => expr::max_generator(&args.expression).max(1),
            };
            let value = expr::evaluate(&args.expression, n)?;
            println!("{value}");
            if args.grades {
                for k in 0..=n as u32 {
                    let part = value.grade_part(k);
                    if !part.is_zero(0.0) {
                        println!("  grade {k}: {part}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen(args) => {
            let grid = GridSpec::centered_span(args.n, args.shape, args.span)?;
            let field = if let Some(idx) = args.corpus_field {
                let mut cfg = RunConfig::default().corpus;
                cfg.seed = args.seed;
                cfg.count = idx + 1;
                let corpus = build_corpus(&cfg, args.n);
                corpus
                    .get(idx)
                    .ok_or_else(|| CliffError::Config(format!("corpus index {idx} out of range")))?
                    .sample(&grid)
            } else {
                let name = args
                    .wavelet
                    .as_deref()
                    .ok_or_else(|| CliffError::Config("need --wavelet or --corpus-field".into()))?;
                build_wavelet(name, &grid)?.field().clone()
            };
            io::write_field(&args.out, &field)?;
            println!("wrote {}", args.out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Cft(args) => {
            let field = io::read_field(&args.input)?;
            let out = if args.inverse {
                cft_inverse(&field)?
            } else {
                cft_forward(&field)?
            };
            io::write_field(&args.out, &out)?;
            println!("wrote {}", args.out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Admissibility(args) => {
            let grid = match (&args.shape, &args.span) {
                (Some(shape), Some(span)) => GridSpec::centered_span(args.n, *shape, *span)?,
                (None, None) => default_admissibility_grid(args.n)?,
                _ => {
                    return Err(CliffError::Config(
                        "--shape and --span must be given together".into(),
                    ))
                }
            };
            let psi = build_wavelet(&args.wavelet, &grid)?;
            let report = admissibility(&psi)?;
            if let Some(path) = args.profile_csv {
                let mut csv = String::from("radius,integrand\n");
                for (r, v) in &report.integrand_profile {
                    csv.push_str(&format!("{r:.16e},{v:.16e}\n"));
                }
                io::atomic_write(&path, csv.as_bytes())?;
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Cwt(args) => {
            let field = io::read_field(&args.input)?;
            let psi = build_wavelet(&args.wavelet, field.grid())?;
            let (min, max, count) = parse_scales(&args.scales)?;
            let spins = haar_quadrature(field.dim(), args.spins)?;
            let grid = CwtGrid::log_spaced(min, max, count, spins, field.grid().clone())?;
            let tensor = cwt_analyze(&field, &psi, &grid)?;
            io::write_tensor(&args.out, &tensor)?;
            println!("wrote {}", args.out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Reconstruct(args) => {
            let tensor = io::read_tensor(&args.input)?;
            let psi = build_wavelet(&args.wavelet, tensor.grid().translations())?;
            let z = normalizer_for(&psi)?;
            let field = reconstruct(&tensor, &psi, z)?;
            io::write_field(&args.out, &field)?;
            println!("wrote {}", args.out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Uncertainty(args) => {
            let field = io::read_field(&args.input)?;
            match args.kind.as_str() {
                "fourier" => {
                    let report = fourier_uncertainty(&field, args.axis)?;
                    println!("{}", serde_json::to_string_pretty(&report)?);
                }
                kind @ ("wavelet" | "lemma") => {
                    let psi = build_wavelet(&args.wavelet, field.grid())?;
                    let z = normalizer_for(&psi)?;
                    let (min, max, count) = parse_scales(&args.scales)?;
                    let spins = haar_quadrature(field.dim(), args.spins)?;
                    let grid = CwtGrid::log_spaced(min, max, count, spins, field.grid().clone())?;
                    if kind == "wavelet" {
                        let report = wavelet_uncertainty(&field, &psi, &grid, z, args.axis)?;
                        println!("{}", serde_json::to_string_pretty(&report)?);
                    } else {
                        let report = lemma_check(&field, &psi, &grid, z, args.axis)?;
                        println!("{}", serde_json::to_string_pretty(&report)?);
                    }
                }
                other => {
                    return Err(CliffError::Config(format!(
                        "unknown uncertainty kind '{other}' (fourier|wavelet|lemma)"
                    )))
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let selection: SuiteSelection = args.suite.parse()?;
            let config = match args.config {
                Some(path) => RunConfig::from_json(&std::fs::read(path)?)?,
                None => RunConfig::default(),
            };
            let report = run_verification_suite(&config, selection)?;
            print!("{}", report.to_csv());
            if let Some(dir) = args.report_dir {
                std::fs::create_dir_all(&dir)?;
                io::atomic_write(&dir.join("summary.json"), report.to_json().as_bytes())?;
                io::atomic_write(&dir.join("summary.csv"), report.to_csv().as_bytes())?;
                if args.emit_gnuplot_ready {
                    io::atomic_write(&dir.join("summary.dat"), report.to_dat().as_bytes())?;
                }
            }
            if report.all_pass() {
                println!("all checks passed ({})", report.checks.len());
                Ok(ExitCode::SUCCESS)
            } else {
                let failed = report.checks.iter().filter(|c| !c.pass).count();
                eprintln!("{failed} of {} checks failed", report.checks.len());
                Ok(ExitCode::from(2))
            }
        }
    }
}

fn default_admissibility_grid(n: usize) -> Result<GridSpec, CliffError> {
    match n {
        2 => GridSpec::centered_span(2, 161, 20.0),
        3 => GridSpec::centered(3, 71, 0.6),
        other => Err(CliffError::UnsupportedDimension(other)),
    }
}
