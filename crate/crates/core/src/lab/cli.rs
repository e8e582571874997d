//! `fiolab` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use super::config::{ExperimentConfig, TheoremId, WindowKind};
use super::ensemble::make_window;
use super::experiment::{multiplication_experiment, run_experiment, MultiplicationConfig};
use super::report::Report;
use crate::error::{Error, Result};
use crate::frames::{analyze, canonical_tight_window, dual_window, frame_bounds, GaborSystem};
use crate::io::{read_array, read_operator, read_signal, write_json, ComplexArrayJson};
use crate::mixed::{mixed_modulation_norm, mixed_norm, Exponent, ExponentVector, Permutation};
use crate::schatten::{schatten_norm, singular_values};
use crate::signal::{stft, FiniteSignal};

#[derive(Debug, Parser)]
#[command(
    name = "fiolab",
    version,
    about = "Gabor frames, mixed modulation norms and Schatten-class FIO experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Short-time Fourier transform of a signal (or lattice coefficients with --a/--b).
    Dgt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        window: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
    },
    /// Optimal frame bounds of a Gabor system.
    Framebounds(SystemArgs),
    /// Canonical dual window.
    Dualwindow(WindowOutArgs),
    /// Canonical tight window.
    Tightwindow(WindowOutArgs),
    /// Mixed norm of an array, or mixed modulation norm with --window.
    Mixednorm {
        #[arg(long)]
        array: PathBuf,
        #[arg(long)]
        perm: Permutation,
        #[arg(long)]
        exps: ExponentVector,
        #[arg(long)]
        window: Option<PathBuf>,
    },
    /// Schatten norm of a matrix.
    Schatten {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value = "2")]
        p: Exponent,
        /// Print the singular values as JSON instead.
        #[arg(long)]
        spectrum: bool,
    },
    /// Ratio experiment for a theorem.
    Verify(ExperimentArgs),
    /// Sharpness (blow-up) experiment.
    Sharpness(ExperimentArgs),
    /// Multiplication-bound experiment.
    Multbound {
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1,3,2,4")]
        perm: Permutation,
        #[arg(long, default_value = "2,2,1.5,1.5")]
        exps: ExponentVector,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value = "gaussian-sampled")]
        window_kind: WindowKind,
        #[arg(long, default_value_t = 4.0)]
        ceiling: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Window as JSON; omit to use --window-kind with --n.
    #[arg(long)]
    window: Option<PathBuf>,
    #[arg(long)]
    window_kind: Option<WindowKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    a: usize,
    #[arg(long, default_value_t = 1)]
    b: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct WindowOutArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Write the window here instead of printing it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// JSON file with ExperimentConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    theorem: Option<TheoremId>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    perm: Option<Permutation>,
    #[arg(long)]
    window_kind: Option<WindowKind>,
    /// Exponent slot to raise (sharpness runs).
    #[arg(long)]
    slot: Option<usize>,
    /// Exponent placed in the raised slot (sharpness runs).
    #[arg(long)]
    raise: Option<Exponent>,
    #[arg(long)]
    ceiling: Option<f64>,
    #[arg(long)]
    floor: Option<f64>,
    /// CSV destination; the JSON summary goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn into_config(self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                serde_json::from_str::<ExperimentConfig>(&text)?
            }
            None => {
                let theorem = self
                    .theorem
                    .ok_or_else(|| Error::Config("--theorem or --config is required".into()))?;
                ExperimentConfig::new(
                    theorem,
                    self.n.clone().unwrap_or_else(|| vec![8, 12, 16]),
                    self.p.unwrap_or(1.5),
                    self.trials.unwrap_or(10),
                    self.seed.unwrap_or(0),
                )
            }
        };
        if let Some(t) = self.theorem {
            cfg.theorem_id = t;
        }
        if let Some(n) = self.n {
            cfg.n_values = n;
        }
        if let Some(p) = self.p {
            cfg.p = p;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.perm.is_some() {
            cfg.permutation = self.perm;
        }
        if let Some(w) = self.window_kind {
            cfg.window_kind = w;
        }
        if self.slot.is_some() {
            cfg.violation_slot = self.slot;
        }
        if self.raise.is_some() {
            cfg.violation_exponent = self.raise;
        }
        if let Some(c) = self.ceiling {
            cfg.ceiling = c;
        }
        if let Some(f) = self.floor {
            cfg.floor = f;
        }
        if self.out.is_some() {
            cfg.output_path = self.out;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn load_system(args: &SystemArgs) -> Result<GaborSystem> {
    let window = match (&args.window, args.window_kind) {
        (Some(path), None) => read_signal(path)?,
        (None, Some(kind)) => {
            let n = args
                .n
                .ok_or_else(|| Error::Config("--window-kind needs --n".into()))?;
            make_window(kind, n, args.seed)?
        }
        (None, None) => return Err(Error::Config("give --window or --window-kind".into())),
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "--window and --window-kind are exclusive".into(),
            ))
        }
    };
    if let Some(n) = args.n {
        if n != window.n() {
            return Err(Error::Config(format!(
                "--n {n} but the window lives on Z_{}",
                window.n()
            )));
        }
    }
    GaborSystem::new(window, args.a, args.b)
}

fn emit_window(out: &mut dyn Write, g: &FiniteSignal, path: Option<&Path>) -> Result<()> {
    let json = ComplexArrayJson::from(g);
    match path {
        Some(p) => write_json(p, &json),
        None => Ok(writeln!(out, "{}", serde_json::to_string_pretty(&json)?)?),
    }
}

fn emit_report(out: &mut dyn Write, report: &Report, path: Option<&Path>) -> Result<()> {
    if !report.all_finite() {
        return Err(Error::Numerical(format!(
            "{} produced non-finite values",
            report.theorem
        )));
    }
    match path {
        Some(p) => {
            let summary = report.write(p)?;
            for s in &report.per_n {
                writeln!(out, "n = {:>3}  max ratio = {:.6e}", s.n, s.max_ratio)?;
            }
            writeln!(
                out,
                "growth factor {:.4} ({} {}: {})",
                report.growth_factor,
                report.check.kind,
                report.check.threshold,
                if report.check.passed { "pass" } else { "fail" }
            )?;
            writeln!(out, "wrote {} and {}", p.display(), summary.display())?;
        }
        None => write!(out, "{}", report.csv_string()?)?,
    }
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Dgt {
            input,
            window,
            out: path,
            a,
            b,
        } => {
            let f = read_signal(&input)?;
            let g = read_signal(&window)?;
            let json = if a.is_some() || b.is_some() {
                let sys = GaborSystem::new(g, a.unwrap_or(1), b.unwrap_or(1))?;
                ComplexArrayJson::from(&analyze(&sys, &f)?)
            } else {
                ComplexArrayJson::from(&stft(&f, &g)?)
            };
            write_json(&path, &json)
        }
        Command::Framebounds(args) => {
            let bounds = frame_bounds(&load_system(&args)?);
            writeln!(out, "{}", serde_json::to_string(&bounds)?)?;
            Ok(())
        }
        Command::Dualwindow(args) => {
            let g = dual_window(&load_system(&args.system)?)?;
            emit_window(out, &g, args.out.as_deref())
        }
        Command::Tightwindow(args) => {
            let g = canonical_tight_window(&load_system(&args.system)?)?;
            emit_window(out, &g, args.out.as_deref())
        }
        Command::Mixednorm {
            array,
            perm,
            exps,
            window,
        } => {
            let value = match window {
                Some(w) => {
                    mixed_modulation_norm(&read_signal(&array)?, &read_signal(&w)?, &perm, &exps)?
                }
                None => {
                    let arr = read_array(&array)?;
                    mixed_norm(&arr.values()?, &arr.shape(), &perm, &exps)?
                }
            };
            writeln!(out, "{value}")?;
            Ok(())
        }
        Command::Schatten {
            matrix,
            p,
            spectrum,
        } => {
            let a = read_operator(&matrix)?;
            if spectrum {
                writeln!(out, "{}", serde_json::to_string(&singular_values(&a))?)?;
            } else {
                writeln!(out, "{}", schatten_norm(&a, p)?)?;
            }
            Ok(())
        }
        Command::Verify(args) => {
            let cfg = args.into_config()?;
            if cfg.theorem_id.is_sharpness() {
                return Err(Error::Config(format!(
                    "{} is a sharpness run; use the sharpness subcommand",
                    cfg.theorem_id
                )));
            }
            emit_report(out, &run_experiment(&cfg)?, cfg.output_path.as_deref())
        }
        Command::Sharpness(args) => {
            let cfg = args.into_config()?;
            if !cfg.theorem_id.is_sharpness() {
                return Err(Error::Config(format!(
                    "{} is not a sharpness theorem id (SHARP-T2.9, SHARP-T4.3, SHARP-T4.4)",
                    cfg.theorem_id
                )));
            }
            emit_report(out, &run_experiment(&cfg)?, cfg.output_path.as_deref())
        }
        Command::Multbound {
            n,
            seed,
            perm,
            exps,
            trials,
            window_kind,
            ceiling,
            out: path,
        } => {
            let cfg = MultiplicationConfig {
                n_values: if n.is_empty() { vec![8, 12, 16] } else { n },
                seed,
                permutation: perm,
                exponents: exps,
                trials,
                window_kind,
                ceiling,
            };
            emit_report(out, &multiplication_experiment(&cfg)?, path.as_deref())
        }
    }
}

/// Exit code for an error: 2 for numerical failures, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numerical(_) => 2,
        _ => 1,
    }
}

/// Runs the command line with `argv` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "fiolab: {e}");
            exit_code(&e)
        }
    }
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_cli_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}
