//! Command-line front end.
//!
//! Exit statuses: 0 certified rigid, 1 inconclusive or wrong regime,
//! 2 input error.

pub mod file;
mod render;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use file::{Coordinate, FileError, FrameworkFile};

use crate::certify::{
    det_gradient_analytic_with, det_gradient_fd, equivalence_report_with, full_certification,
    full_certification_with_pins, CertificateReport, Equivalence, Settings, Verdict,
    DEFAULT_EQUIVALENCE_THRESHOLD, DEFAULT_FD_STEP, DEFAULT_MARGIN,
};
use crate::corpus::{canonical_entries, entry};
use crate::error::Error;
use crate::framework::{DofClass, Framework};
use crate::matrixlab::kernel::RankRule;
use crate::matrixlab::pinning::{select_pin_set, PinSet};

pub const EXIT_RIGID: i32 = 0;
pub const EXIT_NOT_CERTIFIED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

/// The exit status for a verdict.
pub fn exit_status(v: Verdict) -> i32 {
    if v.implies_rigidity() {
        EXIT_RIGID
    } else {
        EXIT_NOT_CERTIFIED
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rigcert",
    version,
    about = "Rigidity certificates for singular bar-and-joint frameworks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full certification on framework files.
    Analyze(AnalyzeArgs),
    /// Write a canonical framework file, or `list` the available names.
    Corpus(CorpusArgs),
    /// Compare the determinant gradient with the stress image (isostatic, one flex).
    CheckEquivalence(EquivalenceArgs),
}

#[derive(Clone, Copy, Debug, Args)]
pub struct Tuning {
    /// Relative rank tolerance: tol = REL·σ_max [default: max(rows, cols)·ε·σ_max]
    #[arg(long, value_name = "REL", value_parser = positive)]
    pub rank_tol: Option<f64>,
    /// Certification margin, relative to each test's natural scale
    #[arg(long, default_value_t = DEFAULT_MARGIN, value_parser = positive)]
    pub margin: f64,
    /// Finite-difference step for the gradient check, relative to the configuration scale
    #[arg(long, default_value_t = DEFAULT_FD_STEP, value_parser = positive)]
    pub fd_step: f64,
}

impl Tuning {
    pub fn settings(&self, equivalence_threshold: f64) -> Settings {
        Settings {
            rank_rule: match self.rank_tol {
                Some(factor) => RankRule::Relative { factor },
                None => RankRule::Standard,
            },
            margin: self.margin,
            fd_step: self.fd_step,
            equivalence_threshold,
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Framework files (JSON)
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[command(flatten)]
    pub tuning: Tuning,
    /// Largest equivalence residual reported as passing
    #[arg(long, default_value_t = DEFAULT_EQUIVALENCE_THRESHOLD, value_parser = positive)]
    pub threshold: f64,
    /// Write the structured report (JSON) to this path; an array for several inputs
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Print the structured report instead of text
    #[arg(long)]
    pub json: bool,
    /// Number of files analyzed concurrently
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Entry name, or `list`
    pub name: String,
    /// Write to this path instead of standard output
    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EquivalenceArgs {
    /// Framework file (JSON)
    pub file: PathBuf,
    #[command(flatten)]
    pub tuning: Tuning,
    /// Largest residual accepted as proportional
    #[arg(long, default_value_t = DEFAULT_EQUIVALENCE_THRESHOLD, value_parser = positive)]
    pub threshold: f64,
    /// Print JSON instead of text
    #[arg(long)]
    pub json: bool,
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` must be positive and finite"))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub rank_rule: RankRule,
    /// Absolute rank threshold applied to the pinned matrix.
    pub rank_tolerance: f64,
    pub margin: f64,
    pub fd_step: f64,
    pub equivalence_threshold: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub parse_ms: f64,
    pub certification_ms: f64,
    pub gradient_check_ms: f64,
}

/// Analytic gradient against central differences, square pinned matrices only.
#[derive(Clone, Debug, Serialize)]
pub struct GradientCheck {
    /// Absolute step: `fd_step` times the configuration scale.
    pub step: f64,
    pub analytic_norm: f64,
    /// `‖analytic − fd‖ / ‖analytic‖`, absolute when the analytic gradient is zero.
    pub relative_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportFile {
    pub tool: &'static str,
    pub version: &'static str,
    pub input: String,
    pub exit_status: i32,
    pub tolerances: Tolerances,
    pub timings: Timings,
    pub gradient_check: Option<GradientCheck>,
    #[serde(flatten)]
    pub report: CertificateReport,
}

/// Parses and validates a framework file from disk.
pub fn load(path: &Path) -> Result<(Framework, Option<PinSet>, Option<String>), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file = FrameworkFile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let (f, pins) = file
        .to_framework()
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((f, pins, file.name))
}

/// Runs the certification behind `analyze` for one file.
pub fn analyze_file(path: &Path, settings: Settings) -> Result<ReportFile, String> {
    let started = Instant::now();
    let (f, pins, name) = load(path)?;
    let parse_ms = ms(started);

    let started = Instant::now();
    let name = name.or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()));
    let report = match pins {
        Some(pin) => full_certification_with_pins(&f, pin, settings, name),
        None => full_certification(&f, settings).map(|mut r| {
            r.name = name;
            r
        }),
    }
    .map_err(|e| format!("{}: {e}", path.display()))?;
    let certification_ms = ms(started);

    let started = Instant::now();
    let gradient_check =
        gradient_check(&f, &report, settings).map_err(|e| format!("{}: {e}", path.display()))?;
    let gradient_check_ms = ms(started);

    Ok(ReportFile {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        input: path.display().to_string(),
        exit_status: exit_status(report.verdict),
        tolerances: Tolerances {
            rank_rule: settings.rank_rule,
            rank_tolerance: report.rank_tolerance,
            margin: settings.margin,
            fd_step: settings.fd_step,
            equivalence_threshold: settings.equivalence_threshold,
        },
        timings: Timings {
            parse_ms,
            certification_ms,
            gradient_check_ms,
        },
        gradient_check,
        report,
    })
}

fn gradient_check(
    f: &Framework,
    report: &CertificateReport,
    settings: Settings,
) -> crate::Result<Option<GradientCheck>> {
    if report.dof.class != DofClass::Isostatic {
        return Ok(None);
    }
    let pin = PinSet::from_dofs(f, &report.pins)?;
    let analytic = det_gradient_analytic_with(f, &pin, settings.rank_rule)?;
    let step = settings.fd_step * f.config.scale();
    let fd = det_gradient_fd(f, &pin, step)?;
    let norm = analytic.values.norm();
    let diff = (&analytic.values - &fd.values).norm();
    Ok(Some(GradientCheck {
        step,
        analytic_norm: norm,
        relative_error: if norm > 0.0 { diff / norm } else { diff },
    }))
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return if code == 0 { 0 } else { EXIT_INPUT_ERROR };
        }
    };
    let status = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a, out, err),
        Command::Corpus(c) => cmd_corpus(&c, out, err),
        Command::CheckEquivalence(c) => cmd_check_equivalence(&c, out, err),
    };
    let _ = out.flush();
    status
}

pub fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let settings = args.tuning.settings(args.threshold);
    let outcomes = analyze_batch(&args.files, settings, args.jobs as usize);

    let mut status = EXIT_RIGID;
    let mut reports = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => {
                status = status.max(r.exit_status);
                if args.json {
                    let _ = writeln!(out, "{}", to_json(&r));
                } else {
                    let _ = write!(out, "{}", render::report_text(&r));
                }
                reports.push(r);
            }
            Err(msg) => {
                status = EXIT_INPUT_ERROR;
                let _ = writeln!(err, "error: {msg}");
            }
        }
    }

    if let Some(path) = &args.report {
        let body = if args.files.len() == 1 {
            reports.first().map(to_json)
        } else {
            Some(to_json(&reports))
        };
        if let Some(body) = body {
            if let Err(e) = fs::write(path, body + "\n") {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return EXIT_INPUT_ERROR;
            }
        }
    }
    status
}

/// Analyzes files in input order, on up to `jobs` threads.
pub fn analyze_batch(
    files: &[PathBuf],
    settings: Settings,
    jobs: usize,
) -> Vec<Result<ReportFile, String>> {
    let jobs = jobs.clamp(1, files.len().max(1));
    if jobs == 1 {
        return files.iter().map(|p| analyze_file(p, settings)).collect();
    }
    let mut slots: Vec<Option<Result<ReportFile, String>>> = vec![None; files.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                s.spawn(move || {
                    (j..files.len())
                        .step_by(jobs)
                        .map(|i| (i, analyze_file(&files[i], settings)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("analysis thread panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every file analyzed"))
        .collect()
}

pub fn cmd_corpus(args: &CorpusArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let entries = canonical_entries();
    if args.name == "list" {
        let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
        for e in &entries {
            let _ = writeln!(out, "{:width$}  {}", e.name, e.description);
        }
        return 0;
    }
    let Some(e) = entry(&args.name) else {
        let nearest = entries
            .iter()
            .map(|e| e.name)
            .min_by_key(|n| strsim::levenshtein(n, &args.name))
            .unwrap_or_default();
        let _ = writeln!(
            err,
            "error: unknown corpus entry `{}`; did you mean `{nearest}`? (`rigcert corpus list` shows all)",
            args.name
        );
        return EXIT_INPUT_ERROR;
    };
    let body = FrameworkFile::from_corpus(&e).to_json() + "\n";
    match &args.output {
        Some(path) => {
            if let Err(e) = fs::write(path, body) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return EXIT_INPUT_ERROR;
            }
        }
        None => {
            let _ = out.write_all(body.as_bytes());
        }
    }
    0
}

#[derive(Serialize)]
struct EquivalenceOutput<'a> {
    input: String,
    threshold: f64,
    passes: bool,
    corollary_error: f64,
    #[serde(flatten)]
    equivalence: &'a Equivalence,
}

pub fn cmd_check_equivalence(
    args: &EquivalenceArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let settings = args.tuning.settings(args.threshold);
    let (f, pins, _) = match load(&args.file) {
        Ok(x) => x,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_INPUT_ERROR;
        }
    };
    let pin = match pins.map(Ok).unwrap_or_else(|| select_pin_set(&f)) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", args.file.display());
            return EXIT_INPUT_ERROR;
        }
    };
    let eq = match equivalence_report_with(&f, &pin, settings) {
        Ok(eq) => eq,
        Err(Error::Inapplicable(msg)) => {
            let _ = writeln!(out, "wrong regime: {msg}");
            return EXIT_NOT_CERTIFIED;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", args.file.display());
            return EXIT_INPUT_ERROR;
        }
    };
    let passes = eq.passes(args.threshold);
    if args.json {
        let body = EquivalenceOutput {
            input: args.file.display().to_string(),
            threshold: args.threshold,
            passes,
            corollary_error: eq.corollary_error(),
            equivalence: &eq,
        };
        let _ = writeln!(out, "{}", to_json(&body));
    } else {
        let _ = write!(out, "{}", render::equivalence_text(&eq, args.threshold));
    }
    if passes {
        EXIT_RIGID
    } else {
        EXIT_NOT_CERTIFIED
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statuses_are_a_function_of_the_verdict() {
        for v in Verdict::ALL {
            let s = exit_status(v);
            assert_eq!(s == 0, v.implies_rigidity(), "{v}");
            assert!(s == 0 || s == 1);
        }
    }

    #[test]
    fn settings_from_flags() {
        let t = Tuning {
            rank_tol: Some(1e-9),
            margin: 1e-4,
            fd_step: 1e-5,
        };
        let s = t.settings(1e-7);
        assert_eq!(s.rank_rule, RankRule::Relative { factor: 1e-9 });
        assert_eq!(
            (s.margin, s.fd_step, s.equivalence_threshold),
            (1e-4, 1e-5, 1e-7)
        );
    }

    #[test]
    fn flag_values_must_be_positive() {
        assert!(positive("0").is_err());
        assert!(positive("-1e-3").is_err());
        assert!(positive("nan").is_err());
        assert_eq!(positive("1e-3").unwrap(), 1e-3);
    }

    #[test]
    fn help_mentions_defaults() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["rigcert", "analyze", "--help"], &mut out, &mut err), 0);
        let help = String::from_utf8(out).unwrap();
        assert!(help.contains("[default: 0.000001]"), "{help}");
        assert!(help.contains("--rank-tol"));
        assert!(help.contains("--report"));
    }

    #[test]
    fn unknown_corpus_name_suggests() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let args = CorpusArgs {
            name: "colinear_brace".into(),
            output: None,
        };
        assert_eq!(cmd_corpus(&args, &mut out, &mut err), EXIT_INPUT_ERROR);
        assert!(String::from_utf8(err)
            .unwrap()
            .contains("did you mean `collinear_brace`"));
    }
}
