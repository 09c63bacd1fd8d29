//! Command implementations behind the `naimark` binary.
//!
//! Every command returns an [`Outcome`] (the bytes to write plus an exit code)
//! rather than printing, so the binary and the tests share one code path.
//! Exit codes: 0 when everything matched, 1 on a property deviation or an
//! infeasible request, 2 on malformed input or bad flags.

pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use naimark::extensions::{random_psd_member, MapKind, Property, Sampler};
use naimark::frames::{
    naimark_complement_parseval, naimark_gram, scalable_extension, Frame, ProjectionMember,
    PsdMember,
};
use naimark::io::{format_matrix, format_matroid, parse_matrix, Format};
use naimark::matroids::{gale_dual, matroid_from_columns};
use naimark::sampling::{gaussian_matrix, random_parseval, trial_rng};
use naimark::{check_property, CheckConfig, Error, Matrix};

pub use report::{verify_theorem, TheoremReport};

/// Largest `n` for which `extend` reports the Gale status.
const SUMMARY_GALE_MAX_N: usize = 10;
/// Accepted `||G^T G - (I - F^T F)||_F` before a complement is written.
const COMPLEMENT_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "naimark", version, about = "Naimark complements, their extensions, and Gale duality")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// d x n Parseval frame
    Parseval,
    /// d x n Gaussian frame
    Frame,
    /// n x n PSD matrix of rank d
    Psd,
    /// n x n orthogonal projection of rank d
    Projection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtendMap {
    Spectral,
    Kernel,
    Scalable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CliMap {
    Spectral,
    Kernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CliProperty {
    #[value(name = "extends_N", alias = "extends-n")]
    ExtendsN,
    Involutive,
    Gale,
    #[value(name = "dk_bound", alias = "dk-bound")]
    DkBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CliSampler {
    Stratified,
    Multi,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random frame or matrix.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Naimark complement of a Parseval frame (d x n) or of a projection (n x n).
    Complement {
        input: PathBuf,
        #[arg(long, default_value_t = naimark::DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply an extension of the Naimark complement.
    Extend {
        input: PathBuf,
        #[arg(long, value_enum)]
        map: ExtendMap,
        #[arg(long, default_value_t = naimark::DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Column matroid of a matrix.
    Matroid {
        input: PathBuf,
        #[arg(long, default_value_t = naimark::DEFAULT_TOL)]
        tol: f64,
        /// Print the Gale dual instead.
        #[arg(long)]
        dual: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check one property of one extension on random samples.
    Check {
        #[arg(value_enum)]
        map: CliMap,
        #[arg(value_enum)]
        property: CliProperty,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = naimark::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = CliSampler::Stratified)]
        sampler: CliSampler,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the full matrix of checks for every n up to --n-max.
    VerifyTheorem {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = naimark::DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    /// Main output, written to `--out` or stdout.
    pub stdout: String,
    /// Summary and diagnostics, always written to stderr.
    pub stderr: String,
    pub out: Option<PathBuf>,
}

impl Outcome {
    fn ok(stdout: String, output: &OutputArgs) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
            out: output.out.clone(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        stderr.push('\n');
        Self {
            code: 2,
            stdout: String::new(),
            stderr,
            out: None,
        }
    }

    fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }

    fn with_stderr(mut self, line: impl Into<String>) -> Self {
        self.stderr.push_str(&line.into());
        self.stderr.push('\n');
        self
    }
}

fn read_matrix(path: &PathBuf) -> Result<Matrix, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::usage(format!("error: cannot read {}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| Outcome::usage(format!("error: {}: {e}", path.display())))
}

fn usage_err(e: Error) -> Outcome {
    Outcome::usage(format!("error: {e}"))
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Gen {
            kind,
            d,
            n,
            seed,
            output,
        } => cmd_gen(kind, d, n, seed, &output),
        Command::Complement { input, tol, output } => cmd_complement(&input, tol, &output),
        Command::Extend {
            input,
            map,
            tol,
            output,
        } => cmd_extend(&input, map, tol, &output),
        Command::Matroid {
            input,
            tol,
            dual,
            output,
        } => cmd_matroid(&input, tol, dual, &output),
        Command::Check {
            map,
            property,
            n,
            trials,
            seed,
            tol,
            sampler,
            output,
        } => {
            let mut cfg = CheckConfig::new(
                match map {
                    CliMap::Spectral => MapKind::Spectral,
                    CliMap::Kernel => MapKind::Kernel,
                },
                match property {
                    CliProperty::ExtendsN => Property::ExtendsN,
                    CliProperty::Involutive => Property::Involutive,
                    CliProperty::Gale => Property::Gale,
                    CliProperty::DkBound => Property::DkBound,
                },
                n,
                trials,
                seed,
            );
            cfg.tol = tol;
            cfg.sampler = match sampler {
                CliSampler::Stratified => Sampler::Stratified,
                CliSampler::Multi => Sampler::MultiEigenvalue,
            };
            cmd_check(&cfg, &output)
        }
        Command::VerifyTheorem {
            n_max,
            trials,
            seed,
            tol,
            output,
        } => cmd_verify_theorem(n_max, trials, seed, tol, &output),
    };
    result.unwrap_or_else(|o| o)
}

pub fn cmd_gen(kind: GenKind, d: usize, n: usize, seed: u64, output: &OutputArgs) -> Result<Outcome, Outcome> {
    if d == 0 || n <= d {
        return Err(Outcome::usage(format!(
            "error: need n > d >= 1 (got d = {d}, n = {n})"
        )));
    }
    let mut rng = trial_rng(seed, 0);
    let tol = naimark::DEFAULT_TOL;
    let m = match kind {
        GenKind::Parseval => random_parseval(d, n, &mut rng),
        GenKind::Frame => loop {
            let f = gaussian_matrix(d, n, &mut rng);
            if Frame::new(f.clone(), tol).is_ok() {
                break f;
            }
        },
        GenKind::Psd => random_psd_member(n, d, &mut rng, tol).1.matrix().clone(),
        GenKind::Projection => random_parseval(d, n, &mut rng).gram(),
    };
    Ok(Outcome::ok(format_matrix(&m, output.format.into()), output))
}

pub fn cmd_complement(input: &PathBuf, tol: f64, output: &OutputArgs) -> Result<Outcome, Outcome> {
    let m = read_matrix(input)?;
    let (rows, cols) = m.shape();
    let format = output.format.into();
    if rows < cols {
        let frame = Frame::new(m, tol).map_err(usage_err)?;
        let g = naimark_complement_parseval(&frame, tol).map_err(usage_err)?;
        let expected = &Matrix::identity(cols) - &frame.gram_matrix();
        let residual = (&g.gram_matrix() - &expected).frobenius_norm();
        if residual > COMPLEMENT_CHECK_TOL {
            return Err(Outcome::usage(format!(
                "error: complement check failed, ||G^T G - (I - F^T F)||_F = {residual:e}"
            ))
            .with_code(1));
        }
        Ok(Outcome::ok(format_matrix(g.synthesis(), format), output).with_stderr(format!(
            "complement: {}x{} Parseval frame, Gram residual {residual:.3e}",
            g.d(),
            g.n()
        )))
    } else if rows == cols {
        let p = ProjectionMember::new(m).map_err(usage_err)?;
        let q = naimark_gram(&p);
        Ok(Outcome::ok(format_matrix(q.matrix(), format), output).with_stderr(format!(
            "complement: projection of rank {} -> rank {}",
            p.rank(),
            q.rank()
        )))
    } else {
        Err(Outcome::usage(format!(
            "error: a {rows}x{cols} matrix is neither a frame (d < n) nor a projection (square)"
        )))
    }
}

/// One-line summary of the ranks and Gale status of an extension.
pub fn extension_summary(input: &PsdMember, image: &PsdMember, tol: f64) -> String {
    let n = input.n();
    let need = n - input.rank();
    let mut line = format!("rank in: {}, rank out: {}", input.rank(), image.rank());
    if n <= SUMMARY_GALE_MAX_N {
        let gale = if image.rank() != need {
            format!("FAIL (rank {}, need {need})", image.rank())
        } else {
            match naimark::is_gale_pair(input, image, tol) {
                Ok(true) => "OK".to_string(),
                Ok(false) => "FAIL (matroid is not the Gale dual)".to_string(),
                Err(e) => format!("unknown ({e})"),
            }
        };
        line.push_str(&format!(", gale: {gale}"));
    }
    line
}

pub fn cmd_extend(input: &PathBuf, map: ExtendMap, tol: f64, output: &OutputArgs) -> Result<Outcome, Outcome> {
    let m = read_matrix(input)?;
    let format = output.format.into();
    let kind = match map {
        ExtendMap::Spectral => MapKind::Spectral,
        ExtendMap::Kernel => MapKind::Kernel,
        ExtendMap::Scalable => {
            let frame = Frame::new(m, tol).map_err(usage_err)?;
            return match scalable_extension(&frame, tol) {
                Ok(ext) => {
                    let scalars: Vec<String> = ext.scalars.iter().map(|c| format!("{c:.6}")).collect();
                    Ok(Outcome::ok(format_matrix(ext.frame.synthesis(), format), output)
                        .with_stderr(format!("scalars: [{}]", scalars.join(", "))))
                }
                Err(Error::NotScalable) => Err(Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: "Infeasible: no strictly positive scalars make this frame Parseval\n".into(),
                    out: None,
                }),
                Err(e) => Err(usage_err(e)),
            };
        }
    };
    let a = PsdMember::new(m, tol).map_err(usage_err)?;
    let image = kind.apply(&a, tol).map_err(usage_err)?;
    let summary = extension_summary(&a, &image, tol);
    Ok(Outcome::ok(format_matrix(image.matrix(), format), output).with_stderr(summary))
}

pub fn cmd_matroid(input: &PathBuf, tol: f64, dual: bool, output: &OutputArgs) -> Result<Outcome, Outcome> {
    let m = read_matrix(input)?;
    let matroid = matroid_from_columns(&m, tol).map_err(usage_err)?;
    let matroid = if dual { gale_dual(&matroid) } else { matroid };
    Ok(Outcome::ok(format_matroid(&matroid, output.format.into()), output))
}

pub fn cmd_check(cfg: &CheckConfig, output: &OutputArgs) -> Result<Outcome, Outcome> {
    let report = check_property(cfg).map_err(usage_err)?;
    let text = report::format_extension_report(&report, output.format.into());
    let verdict = if report.matches_prediction() {
        format!(
            "{} {} n={}: {} failures / {} trials, as predicted",
            report.map, report.property, report.n, report.failures, report.trials
        )
    } else {
        format!(
            "{} {} n={}: {} trials deviate from the prediction",
            report.map, report.property, report.n, report.mismatches
        )
    };
    let code = if report.matches_prediction() { 0 } else { 1 };
    Ok(Outcome::ok(text, output).with_stderr(verdict).with_code(code))
}

pub fn cmd_verify_theorem(
    n_max: usize,
    trials: usize,
    seed: u64,
    tol: f64,
    output: &OutputArgs,
) -> Result<Outcome, Outcome> {
    if !(2..=8).contains(&n_max) {
        return Err(Outcome::usage(format!(
            "error: --n-max must lie in 2..=8 (got {n_max})"
        )));
    }
    let report = verify_theorem(n_max, trials, seed, tol).map_err(usage_err)?;
    let text = report::format_theorem_report(&report, output.format.into());
    let code = if report.all_matched { 0 } else { 1 };
    let verdict = if report.all_matched {
        "all observations match the predicted outcomes"
    } else {
        "some observations deviate from the predicted outcomes"
    };
    Ok(Outcome::ok(text, output).with_stderr(verdict).with_code(code))
}
