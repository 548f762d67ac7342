//! Command-line front end for `tpd-core`.
//!
//! Exit codes: 0 on success, 1 when an input is outside the mathematical
//! domain (not T-positive definite, not T-Hermitian), 2 on I/O, parse or
//! usage errors.

pub mod bench;
pub mod fmt;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use tpd_core::io::{read_tensor, write_tensor};
use tpd_core::means::weighted_geometric_mean;
use tpd_core::{check_tpd, distance, geometric_mean, t_eigenvalues, Error, MeanPath, Oracle, Tensor3, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tpd", version, about = "Geometric means and distances of T-positive definite tensors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathArg {
    Blocks,
    Dense,
}

impl From<PathArg> for MeanPath {
    fn from(p: PathArg) -> Self {
        match p {
            PathArg::Blocks => MeanPath::FourierBlocks,
            PathArg::Dense => MeanPath::DenseOracle,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify T-positive definiteness.
    Check { file: PathBuf },
    /// Weighted geometric mean `a #_t b`.
    Gmean {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "blocks")]
        path: PathArg,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        t: f64,
    },
    /// Riemannian distance.
    Dist { a: PathBuf, b: PathBuf },
    /// Sorted T-eigenvalues.
    Eig { file: PathBuf },
    /// Time both mean paths over a grid of sizes.
    Bench {
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        p_list: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        force_dense: bool,
    },
}

/// A failure with its exit code already decided.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

/// Classifies a core error raised while processing `file`.
fn fail(file: &Path, e: Error) -> Failure {
    let code = if e.is_domain() { EXIT_DOMAIN } else { EXIT_INPUT };
    Failure {
        code,
        message: format!("{}: {e}", file.display()),
    }
}

fn load(file: &Path) -> Result<Tensor3, Failure> {
    // read_tensor already prefixes the path
    read_tensor(file).map_err(|e| Failure::input(e.to_string()))
}

fn require_pd(t: &Tensor3, file: &Path) -> Result<(), Failure> {
    let cert = check_tpd(t, tpd_core::DEFAULT_TOL).map_err(|e| fail(file, e))?;
    if cert.is_pd() {
        return Ok(());
    }
    let e = if cert.verdict == Verdict::NotHermitian {
        Error::NotTHermitian {
            arg: file.display().to_string(),
            residual: cert.hermitian_residual,
        }
    } else {
        Error::NotTpd {
            arg: file.display().to_string(),
            verdict: cert.verdict,
            lambda_min: cert.lambda_min,
        }
    };
    Err(fail(file, e))
}

fn require_same_dims(a: &Tensor3, b: &Tensor3, fb: &Path) -> Result<(), Failure> {
    if a.dims() != b.dims() {
        return Err(Failure::input(format!(
            "{}: dimensions {:?} differ from first operand {:?}",
            fb.display(),
            b.dims(),
            a.dims()
        )));
    }
    Ok(())
}

fn w(out: &mut dyn Write, line: String) -> Result<(), Failure> {
    writeln!(out, "{line}").map_err(|e| Failure::input(format!("stdout: {e}")))
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Check { file } => {
            let t = load(&file)?;
            let cert = check_tpd(&t, tpd_core::DEFAULT_TOL).map_err(|e| fail(&file, e))?;
            w(out, format!("verdict: {:?}", cert.verdict))?;
            w(out, format!("lambda_min: {}", fmt::real(cert.lambda_min)))?;
            w(out, format!("lambda_max: {}", fmt::real(cert.lambda_max)))?;
            w(out, format!("hermitian_residual: {}", fmt::real(cert.hermitian_residual)))?;
            Ok(if cert.is_pd() { EXIT_OK } else { EXIT_DOMAIN })
        }
        Command::Gmean { a, b, out: dest, path, t } => {
            if !t.is_finite() {
                return Err(Failure::input(format!("--t must be finite, got {t}")));
            }
            let (ta, tb) = (load(&a)?, load(&b)?);
            require_same_dims(&ta, &tb, &b)?;
            require_pd(&ta, &a)?;
            require_pd(&tb, &b)?;
            let path = MeanPath::from(path);
            let mean = if t == 0.5 {
                let r = geometric_mean(&ta, &tb, path).map_err(|e| fail(&a, e))?;
                w(out, format!("riccati_residual: {}", fmt::real(r.riccati_residual)))?;
                r.mean
            } else {
                match path {
                    MeanPath::FourierBlocks => weighted_geometric_mean(&ta, &tb, t),
                    MeanPath::DenseOracle => Oracle::default().tensor_weighted_mean(&ta, &tb, t),
                }
                .map_err(|e| fail(&a, e))?
            };
            write_tensor(&dest, &mean).map_err(|e| Failure::input(e.to_string()))?;
            Ok(EXIT_OK)
        }
        Command::Dist { a, b } => {
            let (ta, tb) = (load(&a)?, load(&b)?);
            require_same_dims(&ta, &tb, &b)?;
            require_pd(&ta, &a)?;
            require_pd(&tb, &b)?;
            let d = distance(&ta, &tb).map_err(|e| fail(&a, e))?;
            w(out, fmt::real(d))?;
            Ok(EXIT_OK)
        }
        Command::Eig { file } => {
            let t = load(&file)?;
            let ev = t_eigenvalues(&t).map_err(|e| fail(&file, e))?;
            let scale = ev.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            let parts: Vec<String> = ev.iter().map(|&z| fmt::complex(z, scale)).collect();
            w(out, parts.join(" "))?;
            Ok(EXIT_OK)
        }
        Command::Bench {
            n_list,
            p_list,
            reps,
            csv,
            seed,
            force_dense,
        } => {
            if n_list.iter().chain(&p_list).any(|&v| v == 0) || reps == 0 {
                return Err(Failure::input("grid values and --reps must be positive"));
            }
            let cfg = bench::BenchConfig {
                n_list,
                p_list,
                reps,
                seed,
                force_dense,
            };
            let rows = bench::run(&cfg).map_err(|e| Failure::input(format!("bench: {e}")))?;
            let text = bench::to_csv(&rows);
            match csv {
                Some(dest) => std::fs::write(&dest, text)
                    .map_err(|e| Failure::input(format!("{}: {e}", dest.display())))?,
                None => out
                    .write_all(text.as_bytes())
                    .map_err(|e| Failure::input(format!("stdout: {e}")))?,
            }
            Ok(EXIT_OK)
        }
    }
}

/// Applies `TPD_THREADS` to the global rayon pool.
pub fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("TPD_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| Failure::input(format!("TPD_THREADS must be a positive integer, got `{raw}`")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::input(format!("TPD_THREADS: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}
