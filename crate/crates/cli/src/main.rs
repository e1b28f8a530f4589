//! `cubic-kappa`: evaluate special cubics, tabulate and plot curvature, count
//! extrema, run the oracle sweep and the proof audit.
//!
//! Exit codes: 0 ok, 1 property violation, 2 usage or parse error, 3 I/O.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubic_kappa::audit::{run_full_audit, GridSpec};
use cubic_kappa::extrema::{count_extrema, oracle_count, ExtremaError, ExtremaKind};
use cubic_kappa::scalar::{fmt_rational, int, parse_rational};
use cubic_kappa::sweep::{run_sweep, SweepSpec};
use cubic_kappa::{Rational, RationalCubic, RationalPoint};

#[derive(Parser, Debug)]
#[command(
    name = "cubic-kappa",
    version,
    about = "Curvature extrema of special cubic Bézier curves"
)]
struct Cli {
    /// Worker threads for sweep and audit (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Points on the curve as CSV `t,x,y`.
    Eval {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Signed curvature as CSV `t,kappa`; kinks leave `kappa` empty.
    Curvature {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact extremum count and locations as JSON.
    Extrema {
        #[command(flatten)]
        curve: CurveArgs,
        /// Also run the sampling oracle with this many samples.
        #[arg(long)]
        oracle: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Random configurations checked against the sampling oracle; JSON summary.
    Sweep {
        /// Number of random configurations.
        #[arg(short = 'n', long, default_value_t = 10_000)]
        n: usize,
        /// Seed for the configuration generator.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Exclusive lower end of the blend range.
        #[arg(long, value_parser = parse_scalar, default_value = "2/3")]
        a_min: Rational,
        /// Inclusive upper end of the blend range.
        #[arg(long, value_parser = parse_scalar, default_value = "1")]
        a_max: Rational,
        /// Oracle samples per configuration.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Checks every identity and inequality of the bound.
    Audit {
        /// Seed for the random points of the exact identity checks.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = AuditFormat::Text)]
        format: AuditFormat,
        /// Comma-separated blend values replacing the default grid.
        #[arg(long, value_delimiter = ',', value_parser = parse_scalar)]
        a_values: Option<Vec<Rational>>,
        /// Comma-separated apex abscissae.
        #[arg(long, value_delimiter = ',', value_parser = parse_scalar)]
        b_values: Option<Vec<Rational>>,
        /// Comma-separated squared heights, all positive.
        #[arg(long, value_delimiter = ',', value_parser = parse_scalar)]
        h2_values: Option<Vec<Rational>>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// SVG with the curve and its curvature graph.
    Plot {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 400)]
        height: u32,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum AuditFormat {
    Text,
    Json,
}

/// Either a triangle `--q0 --q1 --q2` or canonical `--b --h`, plus `-a`.
#[derive(Args, Debug)]
struct CurveArgs {
    /// First control point as `x,y`; coordinates may be fractions like `1/3`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point, requires_all = ["q1", "q2"])]
    q0: Option<RationalPoint>,
    /// Apex of the control triangle.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point, requires_all = ["q0", "q2"])]
    q1: Option<RationalPoint>,
    /// Last control point.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point, requires_all = ["q0", "q1"])]
    q2: Option<RationalPoint>,
    /// Canonical apex abscissa; the triangle is (-1,0), (b,h), (1,0).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar, requires = "h", conflicts_with = "q0")]
    b: Option<Rational>,
    /// Canonical apex height.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar, requires = "b", conflicts_with = "q0")]
    h: Option<Rational>,
    /// Blend in (0, 1].
    #[arg(short = 'a', allow_hyphen_values = true, value_parser = parse_scalar)]
    a: Rational,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Output file (default: stdout).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn parse_scalar(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_point(s: &str) -> Result<RationalPoint, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    Ok(RationalPoint::new(parse_scalar(x)?, parse_scalar(y)?))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Violation(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl CurveArgs {
    fn cubic(&self) -> Result<RationalCubic, Failure> {
        let built = match (&self.q0, &self.q1, &self.q2, &self.b, &self.h) {
            (Some(q0), Some(q1), Some(q2), None, None) => {
                RationalCubic::new(q0.clone(), q1.clone(), q2.clone(), self.a.clone())
            }
            (None, None, None, Some(b), Some(h)) => RationalCubic::canonical(b.clone(), h.clone(), self.a.clone()),
            _ => return Err(Failure::Usage("give either --q0 --q1 --q2 or --b --h".into())),
        };
        built.map_err(|_| Failure::Usage(format!("blend a = {} is outside (0, 1]", fmt_rational(&self.a))))
    }
}

fn emit(out: &OutArgs, content: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => std::fs::write(path, content).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

fn need_samples(n: usize, min: usize) -> Result<(), Failure> {
    if n < min {
        return Err(Failure::Usage(format!("--samples must be at least {min}")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        // only fails when a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::Eval { curve, samples, out } => {
            need_samples(samples, 1)?;
            emit(&out, &render::points_csv(&curve.cubic()?, samples))
        }
        Command::Curvature { curve, samples, out } => {
            need_samples(samples, 1)?;
            let cubic = curve.cubic()?;
            let report = count_extrema(&cubic).map_err(extrema_failure)?;
            if report.kind != ExtremaKind::Regular {
                eprintln!("note: kind={:?}", report.kind);
            }
            let (csv, kinks) = render::curvature_csv(&cubic, samples);
            if kinks > 0 {
                eprintln!("note: {kinks} sample(s) at a kink, kappa left empty");
            }
            emit(&out, &csv)
        }
        Command::Extrema { curve, oracle, out } => {
            let cubic = curve.cubic()?;
            let report = count_extrema(&cubic).map_err(extrema_failure)?;
            let oracle = match oracle {
                Some(n) => Some(oracle_count(&cubic, n).map_err(|e| Failure::Usage(e.to_string()))?),
                None => None,
            };
            emit(&out, &render::extrema_json(&report, oracle))
        }
        Command::Sweep {
            n,
            seed,
            a_min,
            a_max,
            samples,
            out,
        } => {
            if n == 0 {
                return Err(Failure::Usage("-n must be at least 1".into()));
            }
            need_samples(samples, cubic_kappa::extrema::ORACLE_MIN_SAMPLES)?;
            if !(a_min >= int(0) && a_min < a_max && a_max <= int(1)) {
                return Err(Failure::Usage(
                    "blend range must satisfy 0 <= a-min < a-max <= 1".into(),
                ));
            }
            let spec = SweepSpec {
                a_lo: a_min,
                a_hi: a_max,
                samples,
                ..SweepSpec::new(n, seed)
            };
            let started = Instant::now();
            let summary = run_sweep(&spec);
            eprintln!("sweep: {n} configurations in {:.2} s", started.elapsed().as_secs_f64());
            if !summary.theorem_regime {
                eprintln!("note: blend range leaves (2/3, 1]; counts are informational");
            }
            let json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
            emit(&out, &json)?;
            if summary.property_violated() {
                return Err(Failure::Violation(format!(
                    "{} violation(s), {} oracle mismatch(es)",
                    summary.violations, summary.mismatches
                )));
            }
            Ok(())
        }
        Command::Audit {
            seed,
            format,
            a_values,
            b_values,
            h2_values,
            out,
        } => {
            let default = GridSpec::default();
            let grid = GridSpec {
                a: a_values.unwrap_or(default.a),
                b: b_values.unwrap_or(default.b),
                h2: h2_values.unwrap_or(default.h2),
            };
            let started = Instant::now();
            let report = run_full_audit(&grid, seed).map_err(|e| Failure::Usage(e.to_string()))?;
            eprintln!(
                "audit: {} checks in {:.2} s",
                report.entries.len(),
                started.elapsed().as_secs_f64()
            );
            let text = match format {
                AuditFormat::Text => report.summary(),
                AuditFormat::Json => report.to_json() + "\n",
            };
            emit(&out, &text)?;
            if !report.passed {
                return Err(Failure::Violation(format!(
                    "{} audit check(s) failed",
                    report.failures().count()
                )));
            }
            Ok(())
        }
        Command::Plot {
            curve,
            width,
            height,
            samples,
            out,
        } => {
            need_samples(samples, 2)?;
            if width < 100 || height < 100 {
                return Err(Failure::Usage("--width and --height must be at least 100".into()));
            }
            let cubic = curve.cubic()?;
            let report = count_extrema(&cubic).map_err(extrema_failure)?;
            emit(&out, &render::plot_svg(&cubic, &report, width, height, samples))
        }
    }
}

fn extrema_failure(e: ExtremaError) -> Failure {
    match e {
        ExtremaError::TheoremViolation { .. } => Failure::Violation(e.to_string()),
        other => Failure::Usage(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version print to stdout and succeed
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) | Failure::Violation(m) | Failure::Io(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
