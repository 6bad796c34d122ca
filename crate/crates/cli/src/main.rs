//! `wigner-deco`: build states, transform, smooth, evolve and scan from a JSON
//! experiment config.
//!
//! Exit status: 0 on success, 1 for rejected input, 2 when a numerical
//! post-condition fails.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wigner_deco::evolution::{
    decoherence_scan, evolve_density_trotter, evolve_exact, evolve_fd_refined, evolve_montecarlo,
    fd_stability_limit_refined, scales,
};
use wigner_deco::export::{export_field, export_heatmap, write_density, write_scan, write_wavefunction};
use wigner_deco::smoothing::{coarse_grain, husimi_scaled, CovarianceMatrix2};
use wigner_deco::wigner::{min_value, wigner_transform};
use wigner_deco::WignerField;

use config::{Engine, ExperimentConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<wigner_deco::Error> for CliError {
    fn from(e: wigner_deco::Error) -> Self {
        if e.is_numerical_contract() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(name = "wigner-deco", version, about = "Wigner functions under position decoherence")]
struct Cli {
    /// JSON experiment config; defaults are used for anything it omits
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,
    /// Directory for the artifacts (overrides `output` in the config)
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the wavefunction (or density matrix, for mixtures) as CSV
    State,
    /// Wigner function as CSV and PGM heatmap
    Wigner,
    /// Husimi function as CSV and PGM heatmap
    Husimi {
        /// Reference length s of the coherent states
        #[arg(long)]
        scale: Option<f64>,
    },
    /// Gaussian coarse-graining with covariance [[cxx, cxp], [cxp, cpp]]
    Smooth {
        #[arg(long)]
        cxx: Option<f64>,
        #[arg(long)]
        cxp: Option<f64>,
        #[arg(long)]
        cpp: Option<f64>,
    },
    /// Evolve to time t
    Evolve {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, value_enum)]
        engine: Option<Engine>,
        #[arg(long)]
        dt: Option<f64>,
        /// x refinement of the finite-difference engine (power of two)
        #[arg(long)]
        refine: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Scan the negativity floor over [0, tmax]
    Scan {
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Print sigma0, t0 and tD
    Scales,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("WIGNER_DECO_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("WIGNER_DECO_THREADS={raw:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))
}

fn check_finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Validation(format!("{name} must be finite")))
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{}: {e}", path.display()))
}

fn write_field_pair(field: &WignerField, dir: &Path, stem: &str) -> Result<(), CliError> {
    let csv = dir.join(format!("{stem}.csv"));
    let pgm = dir.join(format!("{stem}.pgm"));
    export_field(field, &csv)?;
    export_heatmap(field, &pgm)?;
    let rep = min_value(field);
    println!("wrote {} {}", csv.display(), pgm.display());
    println!("min_W={:.9e} relative_floor={:.9e} norm={:.9}", rep.min_value, rep.relative_floor, field.normalization());
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let params = cfg.physical()?;
    if let Command::Scales = cli.command {
        let s = scales(&params);
        println!("sigma0={:.6} t0={:.6} tD={:.6}", s.sigma0, s.t0, s.t_d);
        return Ok(());
    }

    let dir = cli.out.clone().or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| io_error(&dir, e))?;
    let sc = scales(&params);

    match cli.command {
        Command::Scales => unreachable!(),
        Command::State => match cfg.wavefunction()? {
            Some(psi) => {
                let path = dir.join("state.csv");
                let file = fs::File::create(&path).map_err(|e| io_error(&path, e))?;
                write_wavefunction(&psi, std::io::BufWriter::new(file))?;
                println!("wrote {}", path.display());
            }
            None => {
                let path = dir.join("density.csv");
                let file = fs::File::create(&path).map_err(|e| io_error(&path, e))?;
                write_density(&cfg.density()?, std::io::BufWriter::new(file))?;
                println!("wrote {}", path.display());
            }
        },
        Command::Wigner => {
            let w = wigner_transform(&cfg.density()?, &params)?;
            write_field_pair(&w, &dir, "wigner")?;
        }
        Command::Husimi { scale } => {
            let s = check_finite("scale", scale.or(cfg.husimi_scale).unwrap_or(1.0))?;
            let w = wigner_transform(&cfg.density()?, &params)?;
            write_field_pair(&husimi_scaled(&w, s)?, &dir, "husimi")?;
        }
        Command::Smooth { cxx, cxp, cpp } => {
            let base = cfg.smoothing.unwrap_or(config::SmoothingSpec { cxx: 0.0, cxp: 0.0, cpp: 0.0 });
            let c = CovarianceMatrix2::new(
                check_finite("cxx", cxx.unwrap_or(base.cxx))?,
                check_finite("cxp", cxp.unwrap_or(base.cxp))?,
                check_finite("cpp", cpp.unwrap_or(base.cpp))?,
            )?;
            let w = wigner_transform(&cfg.density()?, &params)?;
            println!("det_C={:.9e} hbar2_over_4={:.9e}", c.det(), params.hbar().powi(2) / 4.0);
            write_field_pair(&coarse_grain(&w, &c)?, &dir, "smoothed")?;
        }
        Command::Evolve { t, engine, dt, refine, samples, seed } => {
            let t = check_finite("t", t.or(cfg.t).unwrap_or(sc.t0))?;
            let engine = engine.or(cfg.engine).unwrap_or(Engine::Exact);
            let dt = dt.or(cfg.dt).map(|v| check_finite("dt", v)).transpose()?;
            let rho = cfg.density()?;
            let field = match engine {
                Engine::Exact => evolve_exact(&wigner_transform(&rho, &params)?, t)?,
                Engine::Fd => {
                    let w0 = wigner_transform(&rho, &params)?;
                    let r = refine.or(cfg.refine).unwrap_or(1);
                    let dt = dt.unwrap_or_else(|| fd_stability_limit_refined(&w0, r));
                    evolve_fd_refined(&w0, t, dt, r)?
                }
                Engine::Trotter => {
                    let out = evolve_density_trotter(&rho, t, dt.unwrap_or(sc.t0 / 1000.0), &params)?;
                    wigner_transform(&out, &params)?
                }
                Engine::Mc => {
                    let psi = cfg.wavefunction()?.ok_or_else(|| {
                        CliError::Validation("the mc engine needs a pure initial state".into())
                    })?;
                    let n = samples.or(cfg.n_samples).unwrap_or(1000);
                    let seed = seed.or(cfg.seed).unwrap_or(0);
                    let out = evolve_montecarlo(&psi, t, dt.unwrap_or(sc.t0 / 200.0), &params, n, seed)?;
                    wigner_transform(&out, &params)?
                }
            };
            write_field_pair(&field, &dir, "evolved")?;
        }
        Command::Scan { tmax, steps } => {
            let t_max = check_finite("tmax", tmax.or(cfg.t_max).unwrap_or(1.25 * sc.t_d))?;
            let n_steps = steps.or(cfg.n_steps).unwrap_or(50);
            let w = wigner_transform(&cfg.density()?, &params)?;
            let res = decoherence_scan(&w, t_max, n_steps)?;
            let path = dir.join("scan.csv");
            let file = fs::File::create(&path).map_err(|e| io_error(&path, e))?;
            write_scan(&res.trace, std::io::BufWriter::new(file))?;
            println!("wrote {}", path.display());
            if res.multiple_crossings {
                println!("multiple_crossings=true");
            }
            println!("first_nonneg_time={:.6} tD={:.6}", res.first_nonneg_time, sc.t_d);
        }
    }
    Ok(())
}
