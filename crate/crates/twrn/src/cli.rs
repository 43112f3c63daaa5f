//! Command-line front end: TOML configuration, the `mse` / `ser` / `theory`
//! / `replay` subcommands, and plot-ready CSV plus a replay manifest.
//!
//! Exit codes: 0 success, 2 configuration problems, 3 I/O failures. Floats
//! are printed with 17 significant digits so every CSV value round-trips to
//! the in-memory double; files are written atomically (temp then rename).

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{envelope_variance_theory, gml_error_floor, gml_mse_theory, mcrb, p_unique};
use crate::error::{Error, Result};
use crate::harness::{
    replay_cell, run_mse_sweep, run_ser_sweep, Estimator, SweepCell, SweepConfig, SweepResult,
    TrialRecord,
};
use crate::model::amplification_factor;

/// Environment variable overriding the worker count when `--workers` is not
/// given.
pub const WORKERS_ENV: &str = "TWRN_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "twrn", version, about = "Relay-network channel estimation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run an MSE sweep and write mse.csv + manifest.json.
    Mse {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run an SER sweep and write ser.csv + manifest.json.
    Ser {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Tabulate a closed form (envelope_variance, gml_mse, p_unique, mcrb).
    Theory {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate every trial of one sweep cell and write replay.csv.
    Replay {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        estimator: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        snr_db: f64,
        /// Replay the SER framing instead of the MSE framing.
        #[arg(long, default_value_t = false)]
        ser: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "DML" => Ok(Estimator::Dml),
            "MCML" => Ok(Estimator::Mcml),
            "GML" => Ok(Estimator::Gml),
            "LS" => Ok(Estimator::Ls),
            "PERFECT_CSI" => Ok(Estimator::PerfectCsi),
            other => Err(Error::config(format!(
                "unknown estimator '{other}' (expected DML, MCML, GML, LS, or PERFECT_CSI)"
            ))),
        }
    }
}

/// 17-significant-digit float formatting, round-trippable to f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Loads and validates a sweep config, applying an optional seed override.
pub fn load_sweep_config(path: &Path, seed: Option<u64>) -> Result<SweepConfig> {
    let text = fs::read_to_string(path)?;
    let mut config: SweepConfig = toml::from_str(&text)
        .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
    if let Some(s) = seed {
        config.master_seed = s;
    }
    config.validate()?;
    Ok(config)
}

/// SHA-256 of the canonical JSON serialization of the resolved config.
/// Canonicalization goes through the typed struct, so key order in the
/// config file cannot change the hash.
pub fn config_hash(config: &SweepConfig) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub artifact_version: String,
    pub timestamp: String,
    pub output_paths: Vec<String>,
    /// The fully resolved config, sufficient to replay the run bit-exactly.
    pub config: SweepConfig,
}

/// Writes `bytes` via a temporary file in the same directory plus a rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp_name = path
        .file_name()
        .ok_or_else(|| Error::invalid(format!("not a file path: {}", path.display())))?
        .to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn opt_f64(v: Option<f64>, absent: &str) -> String {
    v.map(fmt_f64).unwrap_or_else(|| absent.to_string())
}

/// Renders `mse.csv`.
pub fn mse_csv(result: &SweepResult) -> String {
    let mut out = String::from("estimator,M,N,snr_db,mse_a,mse_b_mag,crb_a_avg,n_trials,seed_base\n");
    for c in &result.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            c.estimator,
            c.m,
            c.n,
            fmt_f64(c.snr_db),
            fmt_f64(c.mse_a),
            opt_f64(c.mse_b_mag, ""),
            opt_f64(c.crb_a_avg, "SINGULAR"),
            c.n_trials,
            c.seed_base,
        ));
    }
    out
}

/// Renders `ser.csv`.
pub fn ser_csv(result: &SweepResult) -> String {
    let mut out =
        String::from("estimator,M,N_block,J_pilots,snr_db,ser,n_symbols,n_errors,seed_base\n");
    for c in &result.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            c.estimator,
            c.m,
            c.n,
            c.j_pilots,
            fmt_f64(c.snr_db),
            opt_f64(c.ser, ""),
            c.n_symbols,
            c.n_errors,
            c.seed_base,
        ));
    }
    out
}

/// Renders `replay.csv` (one row per regenerated trial).
pub fn replay_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(
        "channel_index,trial_index,a_true_re,a_true_im,b_true_re,b_true_im,\
         a_hat_re,a_hat_im,sq_err_a,sq_err_b_mag,n_data_symbols,n_symbol_errors\n",
    );
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.channel_index,
            r.trial_index,
            fmt_f64(r.a_true.re),
            fmt_f64(r.a_true.im),
            fmt_f64(r.b_true.re),
            fmt_f64(r.b_true.im),
            fmt_f64(r.a_hat.re),
            fmt_f64(r.a_hat.im),
            fmt_f64(r.sq_err_a),
            opt_f64(r.sq_err_b_mag, ""),
            r.n_data_symbols,
            r.n_symbol_errors,
        ));
    }
    out
}

fn write_outputs(out_dir: &Path, files: &[(&str, String)], config: &SweepConfig) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let mut paths = Vec::new();
    for (name, body) in files {
        let path = out_dir.join(name);
        atomic_write(&path, body.as_bytes())?;
        paths.push(path.display().to_string());
    }
    let manifest_path = out_dir.join("manifest.json");
    paths.push(manifest_path.display().to_string());
    let manifest = RunManifest {
        config_hash: config_hash(config),
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        output_paths: paths,
        config: config.clone(),
    };
    let body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    atomic_write(&manifest_path, body.as_bytes())?;
    Ok(())
}

fn resolve_workers(flag: Option<usize>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => {
            let n: usize = v
                .parse()
                .map_err(|_| Error::config(format!("{WORKERS_ENV} must be an integer, got '{v}'")))?;
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match resolve_workers(workers)? {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config(format!("cannot build a {n}-worker pool: {e}")))?
            .install(f),
        _ => f(),
    }
}

pub fn cmd_mse(
    config_path: &Path,
    out_dir: &Path,
    seed: Option<u64>,
    workers: Option<usize>,
) -> Result<()> {
    let config = load_sweep_config(config_path, seed)?;
    let result = with_pool(workers, || run_mse_sweep(&config))?;
    write_outputs(out_dir, &[("mse.csv", mse_csv(&result))], &config)
}

pub fn cmd_ser(
    config_path: &Path,
    out_dir: &Path,
    seed: Option<u64>,
    workers: Option<usize>,
) -> Result<()> {
    let config = load_sweep_config(config_path, seed)?;
    let result = with_pool(workers, || run_ser_sweep(&config))?;
    write_outputs(out_dir, &[("ser.csv", ser_csv(&result))], &config)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_replay(
    config_path: &Path,
    out_dir: &Path,
    estimator: &str,
    n: usize,
    snr_db: f64,
    ser: bool,
    seed: Option<u64>,
    workers: Option<usize>,
) -> Result<()> {
    let estimator: Estimator = estimator.parse()?;
    let mut config = load_sweep_config(config_path, seed)?;
    // Narrow to the requested cell; seeds depend only on (m, n, snr).
    config.estimators = vec![estimator];
    config.n_values = vec![n];
    config.snr_db_values = vec![snr_db];
    config.validate()?;
    let records = with_pool(workers, || {
        let result =
            if ser { run_ser_sweep(&config)? } else { run_mse_sweep(&config)? };
        let cell: &SweepCell = result
            .cells
            .first()
            .ok_or_else(|| Error::invalid("sweep produced no cells"))?;
        replay_cell(cell, &config)
    })?;
    write_outputs(out_dir, &[("replay.csv", replay_csv(&records))], &config)
}

/// Uniform grid of one real axis.
#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count == 0 {
            return Err(Error::config("axis 'count' must be >= 1"));
        }
        if self.count == 1 {
            return Ok(vec![self.min]);
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        Ok((0..self.count).map(|i| self.min + i as f64 * step).collect())
    }
}

/// Closed-form tabulation requests.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TheoryConfig {
    /// Probability of a unique high-SNR blind minimum over a range of N.
    PUnique { m: usize, n_min: usize, n_max: usize },
    /// Envelope variance V(v) over a 2-D grid of residual interference v.
    EnvelopeVariance {
        m: usize,
        p1: f64,
        p2: f64,
        pr: f64,
        /// `sigma_r^2 = sigma_t^2 = sigma^2`.
        sigma2: f64,
        /// Relay downlink coefficient, as `[re, im]`.
        h2: [f64; 2],
        /// Cascaded channel b, as `[re, im]`.
        b: [f64; 2],
        v_re: AxisSpec,
        v_im: AxisSpec,
    },
    /// GML MSE and its error floor over an SNR grid.
    GmlMse {
        p1: f64,
        p2: f64,
        pr: f64,
        n: usize,
        h2: [f64; 2],
        b: [f64; 2],
        snr_db: Vec<f64>,
    },
    /// Modified CRBs over an SNR grid.
    Mcrb { p1: f64, p2: f64, pr: f64, n: usize, h2: [f64; 2], snr_db: Vec<f64> },
}

/// Renders the requested tabulation as CSV.
pub fn theory_csv(config: &TheoryConfig) -> Result<String> {
    match *config {
        TheoryConfig::PUnique { m, n_min, n_max } => {
            if m < 2 {
                return Err(Error::config("field 'm' must be >= 2"));
            }
            if n_min == 0 || n_min > n_max {
                return Err(Error::config("need 1 <= n_min <= n_max"));
            }
            let mut out = String::from("n,p_unique\n");
            for n in n_min..=n_max {
                out.push_str(&format!("{n},{}\n", fmt_f64(p_unique(m, n))));
            }
            Ok(out)
        }
        TheoryConfig::EnvelopeVariance { m, p1, p2, pr, sigma2, h2, b, v_re, v_im } => {
            let a_amp = amplification_factor(p1, p2, pr, sigma2)?;
            let h2 = Complex64::new(h2[0], h2[1]);
            let b = Complex64::new(b[0], b[1]);
            let sigma_o2 = a_amp * a_amp * h2.norm_sqr() * sigma2 + sigma2;
            let mut out = String::from("v_re,v_im,variance\n");
            for &re in &v_re.values()? {
                for &im in &v_im.values()? {
                    let v = Complex64::new(re, im);
                    let var = envelope_variance_theory(v, b, a_amp, p1, p2, sigma_o2, m)?;
                    out.push_str(&format!(
                        "{},{},{}\n",
                        fmt_f64(re),
                        fmt_f64(im),
                        fmt_f64(var)
                    ));
                }
            }
            Ok(out)
        }
        TheoryConfig::GmlMse { p1, p2, pr, n, h2, b, snr_db: ref snrs } => {
            if n == 0 {
                return Err(Error::config("field 'n' must be >= 1"));
            }
            let h2 = Complex64::new(h2[0], h2[1]);
            let b = Complex64::new(b[0], b[1]);
            let alpha = p1 / p2;
            let mut out = String::from("snr_db,mse,floor\n");
            for &snr in snrs {
                let sigma2 = p2 * 10f64.powf(-snr / 10.0);
                let a_amp = amplification_factor(p1, p2, pr, sigma2)?;
                let mse = gml_mse_theory(b, h2, a_amp, n, alpha, p2, sigma2);
                let floor = gml_error_floor(b, n, alpha);
                out.push_str(&format!("{},{},{}\n", fmt_f64(snr), fmt_f64(mse), fmt_f64(floor)));
            }
            Ok(out)
        }
        TheoryConfig::Mcrb { p1, p2, pr, n, h2, snr_db: ref snrs } => {
            if n == 0 {
                return Err(Error::config("field 'n' must be >= 1"));
            }
            let h2 = Complex64::new(h2[0], h2[1]);
            let mut out = String::from("snr_db,mcrb_a,mcrb_b_mag\n");
            for &snr in snrs {
                let sigma2 = p2 * 10f64.powf(-snr / 10.0);
                let a_amp = amplification_factor(p1, p2, pr, sigma2)?;
                let sigma_o2 = a_amp * a_amp * h2.norm_sqr() * sigma2 + sigma2;
                let r = mcrb(a_amp, n, p1, p2, sigma_o2);
                out.push_str(&format!(
                    "{},{},{}\n",
                    fmt_f64(snr),
                    fmt_f64(r.mcrb_a),
                    fmt_f64(r.mcrb_b_mag)
                ));
            }
            Ok(out)
        }
    }
}

pub fn cmd_theory(config_path: &Path, out_path: &Path) -> Result<()> {
    let text = fs::read_to_string(config_path)?;
    let config: TheoryConfig = toml::from_str(&text)
        .map_err(|e| Error::config(format!("{}: {e}", config_path.display())))?;
    let body = theory_csv(&config)?;
    if let Some(parent) = out_path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    atomic_write(out_path, body.as_bytes())
}

/// Maps an error to the documented exit code (2 config, 3 I/O).
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 3,
        _ => 2,
    }
}

/// Parses arguments and dispatches; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/version output.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Mse { config, out, seed, workers } => cmd_mse(&config, &out, seed, workers),
        Command::Ser { config, out, seed, workers } => cmd_ser(&config, &out, seed, workers),
        Command::Theory { config, out } => cmd_theory(&config, &out),
        Command::Replay { config, out, estimator, n, snr_db, ser, seed, workers } => {
            cmd_replay(&config, &out, &estimator, n, snr_db, ser, seed, workers)
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
