//! Seeded Monte-Carlo experiment engine: MSE-vs-SNR/N and SER-vs-SNR sweeps
//! over channel, symbol, and noise realizations.
//!
//! Every trial draws from streams keyed by `(master_seed, cell coordinates,
//! trial index, role)`; the estimator identity is deliberately excluded so
//! that all estimators in a cell face identical realizations. Cells and
//! trials fan out across a thread pool but reduce in fixed trial order, so
//! output is byte-identical regardless of worker count and any single cell
//! can be replayed in isolation.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{crb, fim_blocks, CrbValue};
use crate::error::{Error, Result};
use crate::estimators::{
    detect_symbols, dml_estimate, estimate_b_mag, gml_estimate, ls_estimate, mcml_estimate,
    phase_candidates, resolve_ambiguity, vv_phase_estimate, EstimationResult, GridSpec,
    PilotBlock,
};
use crate::model::{
    derive_channels, generate_channels, mcml_pilots, orthogonal_pilots, synthesize_block,
    ChannelSet, DerivedChannels, PilotSpec, PskAlphabet, SystemParams,
};
use crate::rng::{mix, stream, StreamRole};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Estimator {
    #[serde(rename = "DML")]
    Dml,
    #[serde(rename = "MCML")]
    Mcml,
    #[serde(rename = "GML")]
    Gml,
    #[serde(rename = "LS")]
    Ls,
    #[serde(rename = "PERFECT_CSI")]
    PerfectCsi,
}

impl Estimator {
    pub fn label(self) -> &'static str {
        match self {
            Estimator::Dml => "DML",
            Estimator::Mcml => "MCML",
            Estimator::Gml => "GML",
            Estimator::Ls => "LS",
            Estimator::PerfectCsi => "PERFECT_CSI",
        }
    }
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Transmit powers, either the equal-power default (`Pr = P1 = P2 = 1`) or
/// explicit ratios `alpha = P1/P2`, `beta = Pr/(P1+P2)` with `P2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerPolicy {
    Equal,
    Ratios { alpha: f64, beta: f64 },
}

impl Default for PowerPolicy {
    fn default() -> Self {
        PowerPolicy::Equal
    }
}

impl PowerPolicy {
    /// `(P1, P2, Pr)` in linear units.
    pub fn powers(self) -> (f64, f64, f64) {
        match self {
            PowerPolicy::Equal => (1.0, 1.0, 1.0),
            PowerPolicy::Ratios { alpha, beta } => (alpha, 1.0, beta * (alpha + 1.0)),
        }
    }
}

/// Pilot counts per estimator framing. In SER runs the blind estimators use
/// their pilots only for phase-ambiguity resolution; LS uses its pilots as
/// the entire training set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PilotPolicy {
    pub j_dml_ambiguity: usize,
    pub j_mcml: usize,
    pub j_ls: usize,
}

impl Default for PilotPolicy {
    fn default() -> Self {
        PilotPolicy { j_dml_ambiguity: 2, j_mcml: 2, j_ls: 4 }
    }
}

fn default_channels() -> usize {
    300
}
fn default_noise_trials() -> usize {
    10
}
fn default_rho() -> f64 {
    0.3
}
fn default_seed() -> u64 {
    1
}
fn default_final_step() -> f64 {
    1e-3
}
fn default_ser_target_errors() -> usize {
    100
}
fn default_ser_max_trials() -> usize {
    20_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub estimators: Vec<Estimator>,
    pub m: usize,
    pub n_values: Vec<usize>,
    /// `gamma = P2 / sigma^2` in dB.
    pub snr_db_values: Vec<f64>,
    #[serde(default = "default_channels")]
    pub n_channel_realizations: usize,
    #[serde(default = "default_noise_trials")]
    pub n_noise_trials_per_channel: usize,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default)]
    pub power_policy: PowerPolicy,
    #[serde(default)]
    pub pilot_policy: PilotPolicy,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    #[serde(default = "default_final_step")]
    pub grid_final_step: f64,
    /// SER cells add whole chunks of trials until this many symbol errors
    /// have accumulated...
    #[serde(default = "default_ser_target_errors")]
    pub ser_target_errors: usize,
    /// ...or this trial cap is reached, whichever comes first.
    #[serde(default = "default_ser_max_trials")]
    pub ser_max_trials_per_cell: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.estimators.is_empty() {
            return Err(Error::config("field 'estimators' must list at least one estimator"));
        }
        if self.m < 2 {
            return Err(Error::config("field 'm' must be >= 2"));
        }
        if self.n_values.is_empty() {
            return Err(Error::config("field 'n_values' must be nonempty"));
        }
        if self.n_values.iter().any(|&n| n < 2) {
            return Err(Error::config("field 'n_values' entries must be >= 2"));
        }
        if self.snr_db_values.is_empty() {
            return Err(Error::config("field 'snr_db_values' must be nonempty"));
        }
        if self.n_channel_realizations == 0 || self.n_noise_trials_per_channel == 0 {
            return Err(Error::config(
                "fields 'n_channel_realizations' and 'n_noise_trials_per_channel' must be >= 1",
            ));
        }
        if !self.rho.is_finite() || self.rho.abs() > 1.0 {
            return Err(Error::config("field 'rho' must satisfy |rho| <= 1"));
        }
        if !(self.grid_final_step > 0.0) {
            return Err(Error::config("field 'grid_final_step' must be positive"));
        }
        if self.ser_target_errors == 0 || self.ser_max_trials_per_cell == 0 {
            return Err(Error::config(
                "fields 'ser_target_errors' and 'ser_max_trials_per_cell' must be >= 1",
            ));
        }
        if self.estimators.contains(&Estimator::Mcml) && self.m != 2 {
            return Err(Error::config("MCML requires m = 2"));
        }
        let (p1, p2, pr) = self.power_policy.powers();
        if !(p1 > 0.0) || !(p2 > 0.0) || !(pr > 0.0) {
            return Err(Error::config("field 'power_policy' must yield positive powers"));
        }
        Ok(())
    }

    /// System parameters at one SNR point:
    /// `sigma_r^2 = sigma_t^2 = sigma^2 = P2 10^{-snr/10}`.
    pub fn params_at(&self, snr_db: f64) -> Result<SystemParams> {
        let (p1, p2, pr) = self.power_policy.powers();
        let sigma2 = p2 * 10f64.powf(-snr_db / 10.0);
        SystemParams::new(p1, p2, pr, sigma2, sigma2)
    }

    /// Replayable seed base of the `(N, snr)` cell.
    pub fn cell_seed(&self, n: usize, snr_db: f64) -> u64 {
        mix(self.master_seed, &[self.m as u64, n as u64, snr_db.to_bits()])
    }

    fn cell_path(&self, n: usize, snr_db: f64) -> [u64; 3] {
        [self.m as u64, n as u64, snr_db.to_bits()]
    }
}

/// Aggregated statistics of one `(estimator, N, snr)` cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepCell {
    pub estimator: Estimator,
    pub m: usize,
    pub n: usize,
    pub j_pilots: usize,
    pub snr_db: f64,
    pub mse_a: f64,
    pub mse_b_mag: Option<f64>,
    pub ser: Option<f64>,
    /// Mean CRB on `a` over the nonsingular draws of this cell; absent for
    /// M = 2 (every draw is singular) and for cells without any such draw.
    pub crb_a_avg: Option<f64>,
    pub crb_singular_count: usize,
    pub n_trials: usize,
    pub n_symbols: usize,
    pub n_errors: usize,
    pub seed_base: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
}

/// One regenerated trial of a cell.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub channel_index: usize,
    pub trial_index: usize,
    pub channels: ChannelSet,
    pub a_true: Complex64,
    pub b_true: Complex64,
    pub a_hat: Complex64,
    pub sq_err_a: f64,
    pub sq_err_b_mag: Option<f64>,
    pub n_data_symbols: usize,
    pub n_symbol_errors: usize,
}

/// Pilot framing of an estimator in an MSE run: the blind estimators run on
/// pure data blocks, the trained ones carry their pilots.
fn mse_pilots(est: Estimator, config: &SweepConfig, params: &SystemParams) -> Result<PilotSpec> {
    match est {
        Estimator::Dml | Estimator::Gml | Estimator::PerfectCsi => Ok(PilotSpec::none()),
        Estimator::Mcml => mcml_pilots(params.p1, params.p2, config.pilot_policy.j_mcml),
        Estimator::Ls => {
            orthogonal_pilots(config.m, params.p1, params.p2, config.pilot_policy.j_ls)
        }
    }
}

/// Pilot framing in an SER run, where every estimator except perfect CSI
/// needs pilots to pin down the cross-channel phase.
fn ser_pilots(est: Estimator, config: &SweepConfig, params: &SystemParams) -> Result<PilotSpec> {
    match est {
        Estimator::Dml | Estimator::Gml => {
            orthogonal_pilots(config.m, params.p1, params.p2, config.pilot_policy.j_dml_ambiguity)
        }
        Estimator::Mcml => mcml_pilots(params.p1, params.p2, config.pilot_policy.j_mcml),
        Estimator::Ls => {
            orthogonal_pilots(config.m, params.p1, params.p2, config.pilot_policy.j_ls)
        }
        Estimator::PerfectCsi => Ok(PilotSpec::none()),
    }
}

/// MCML's pilot-based phase plug-in at the winning channel estimate. Each
/// BPSK pilot contributes `x2^2 = -P2`, so the accumulated direction is
/// `phi_b + pi`.
fn mcml_phase(block: &crate::model::ReceivedBlock, a_hat: Complex64, a_amp: f64) -> f64 {
    let s = block.pilot_received();
    let x1 = block.pilot_x1();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..s.len() {
        acc += (s[j] - a_amp * a_hat * x1[j]) * block.x2_pilots[j];
    }
    (acc.arg() + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU)
}

/// Runs one estimator on one block. The blind estimators attach a phase
/// estimate whenever the block carries pilots to resolve the ambiguity.
fn run_estimator(
    est: Estimator,
    block: &crate::model::ReceivedBlock,
    config: &SweepConfig,
    params: &SystemParams,
    derived: &DerivedChannels,
) -> Result<EstimationResult> {
    match est {
        Estimator::Gml | Estimator::Dml => {
            let center = gml_estimate(block, params.a_amp, params.p1)?;
            let mut result = if est == Estimator::Gml {
                let mut r = center;
                r.b_mag_hat = Some(estimate_b_mag(r.a_hat, block, params.a_amp, params.p2));
                r
            } else {
                let grid = GridSpec::around(center.a_hat, config.grid_final_step)?;
                dml_estimate(block, params.a_amp, params.p2, &grid)?
            };
            if block.num_pilots() > 0 {
                let residuals: Vec<Complex64> = block
                    .z
                    .iter()
                    .zip(&block.t1)
                    .map(|(&z, &t1)| z - params.a_amp * result.a_hat * t1)
                    .collect();
                let base = vv_phase_estimate(&residuals, block.m)?;
                let candidates = phase_candidates(base, block.m);
                let phi = resolve_ambiguity(
                    &candidates,
                    &block.pilot_received(),
                    &block.pilot_x1(),
                    &block.x2_pilots,
                    result.a_hat,
                    result.b_mag_hat.unwrap_or(0.0),
                    params.a_amp,
                )?;
                result.phi_b_hat = Some(phi);
            }
            Ok(result)
        }
        Estimator::Mcml => {
            let center = gml_estimate(block, params.a_amp, params.p1)?;
            let grid = GridSpec::around(center.a_hat, config.grid_final_step)?;
            let mut result = mcml_estimate(block, params.a_amp, params.p2, &grid)?;
            result.phi_b_hat = Some(mcml_phase(block, result.a_hat, params.a_amp));
            Ok(result)
        }
        Estimator::Ls => {
            let ls = ls_estimate(&PilotBlock::from_block(block), params.a_amp)?;
            let mut result = EstimationResult::new(ls.a_hat);
            result.b_mag_hat = Some(ls.b_hat.norm());
            result.phi_b_hat = Some(ls.b_hat.arg().rem_euclid(std::f64::consts::TAU));
            Ok(result)
        }
        Estimator::PerfectCsi => {
            let mut result = EstimationResult::new(derived.a);
            result.b_mag_hat = Some(derived.b.norm());
            result.phi_b_hat = Some(derived.phi_b);
            Ok(result)
        }
    }
}

fn mse_trial_record(
    ci: usize,
    ti: usize,
    channels: ChannelSet,
    derived: &DerivedChannels,
    result: &EstimationResult,
) -> TrialRecord {
    let sq_err_a = (result.a_hat - derived.a).norm_sqr();
    let sq_err_b_mag = result.b_mag_hat.map(|bm| {
        let d = bm - derived.b.norm();
        d * d
    });
    TrialRecord {
        channel_index: ci,
        trial_index: ti,
        channels,
        a_true: derived.a,
        b_true: derived.b,
        a_hat: result.a_hat,
        sq_err_a,
        sq_err_b_mag,
        n_data_symbols: 0,
        n_symbol_errors: 0,
    }
}

/// Regenerates the trials of one MSE cell in deterministic order.
fn run_mse_cell_trials(
    config: &SweepConfig,
    est: Estimator,
    n: usize,
    snr_db: f64,
) -> Result<Vec<TrialRecord>> {
    let params = config.params_at(snr_db)?;
    let pilots = mse_pilots(est, config, &params)?;
    if pilots.len() > n {
        return Err(Error::invalid(format!(
            "{} pilots do not fit in a block of {n}",
            pilots.len()
        )));
    }
    let path = config.cell_path(n, snr_db);
    let per_channel: Vec<Vec<TrialRecord>> = (0..config.n_channel_realizations)
        .into_par_iter()
        .map(|ci| {
            let mut chan_path = path.to_vec();
            chan_path.push(ci as u64);
            let mut ch_rng = stream(config.master_seed, &chan_path, StreamRole::Channel);
            let channels = generate_channels(&mut ch_rng, config.rho)?;
            let derived = derive_channels(&channels, &params);
            (0..config.n_noise_trials_per_channel)
                .map(|ti| {
                    let mut trial_path = chan_path.clone();
                    trial_path.push(ti as u64);
                    let mut rng =
                        stream(config.master_seed, &trial_path, StreamRole::Symbols);
                    let block =
                        synthesize_block(&mut rng, &channels, &params, config.m, n, &pilots)?;
                    let result = run_estimator(est, &block, config, &params, &derived)?;
                    Ok(mse_trial_record(ci, ti, channels, &derived, &result))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_channel.into_iter().flatten().collect())
}

/// Mean CRB on `a` over the pilot-free symbol draws of one cell, plus the
/// number of singular draws skipped. `None` for BPSK, where every draw is
/// singular by construction.
fn average_crb_a(config: &SweepConfig, n: usize, snr_db: f64) -> Result<(Option<f64>, usize)> {
    if config.m == 2 {
        let trials = config.n_channel_realizations * config.n_noise_trials_per_channel;
        return Ok((None, trials));
    }
    let params = config.params_at(snr_db)?;
    let path = config.cell_path(n, snr_db);
    let per_channel: Vec<(f64, usize, usize)> = (0..config.n_channel_realizations)
        .into_par_iter()
        .map(|ci| {
            let mut chan_path = path.to_vec();
            chan_path.push(ci as u64);
            let mut ch_rng = stream(config.master_seed, &chan_path, StreamRole::Channel);
            let channels = generate_channels(&mut ch_rng, config.rho)?;
            let derived = derive_channels(&channels, &params);
            let mut sum = 0.0;
            let mut count = 0usize;
            let mut singular = 0usize;
            for ti in 0..config.n_noise_trials_per_channel {
                let mut trial_path = chan_path.clone();
                trial_path.push(ti as u64);
                let mut rng = stream(config.master_seed, &trial_path, StreamRole::Symbols);
                let block = synthesize_block(
                    &mut rng,
                    &channels,
                    &params,
                    config.m,
                    n,
                    &PilotSpec::none(),
                )?;
                let blocks = fim_blocks(
                    &block.t1,
                    &block.t2_true,
                    derived.b,
                    params.a_amp,
                    params.p1,
                    params.p2,
                    derived.sigma_o2,
                )?;
                match crb(&blocks)?.crb_a {
                    CrbValue::Value(v) => {
                        sum += v;
                        count += 1;
                    }
                    CrbValue::Singular => singular += 1,
                }
            }
            Ok((sum, count, singular))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut singular = 0usize;
    for (s, c, g) in per_channel {
        sum += s;
        count += c;
        singular += g;
    }
    let avg = if count > 0 { Some(sum / count as f64) } else { None };
    Ok((avg, singular))
}

fn aggregate_mse_cell(
    config: &SweepConfig,
    est: Estimator,
    n: usize,
    snr_db: f64,
    j_pilots: usize,
    records: &[TrialRecord],
    crb_a_avg: Option<f64>,
    crb_singular: usize,
) -> SweepCell {
    let trials = records.len();
    let mse_a = records.iter().map(|r| r.sq_err_a).sum::<f64>() / trials as f64;
    let b_errs: Vec<f64> = records.iter().filter_map(|r| r.sq_err_b_mag).collect();
    let mse_b_mag = if b_errs.len() == trials {
        Some(b_errs.iter().sum::<f64>() / trials as f64)
    } else {
        None
    };
    SweepCell {
        estimator: est,
        m: config.m,
        n,
        j_pilots,
        snr_db,
        mse_a,
        mse_b_mag,
        ser: None,
        crb_a_avg,
        crb_singular_count: crb_singular,
        n_trials: trials,
        n_symbols: 0,
        n_errors: 0,
        seed_base: config.cell_seed(n, snr_db),
    }
}

/// Runs the full MSE sweep: every `(N, snr)` pair for every estimator.
pub fn run_mse_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut cells = Vec::new();
    for &n in &config.n_values {
        for &snr_db in &config.snr_db_values {
            let (crb_a_avg, crb_singular) = average_crb_a(config, n, snr_db)?;
            for &est in &config.estimators {
                let params = config.params_at(snr_db)?;
                let j = mse_pilots(est, config, &params)?.len();
                let records = run_mse_cell_trials(config, est, n, snr_db)?;
                cells.push(aggregate_mse_cell(
                    config,
                    est,
                    n,
                    snr_db,
                    j,
                    &records,
                    crb_a_avg,
                    crb_singular,
                ));
            }
        }
    }
    Ok(SweepResult { cells })
}

/// One SER trial: fresh channel, fresh block, estimate, detect, count
/// errors on the data positions.
fn run_ser_trial(
    config: &SweepConfig,
    est: Estimator,
    n: usize,
    snr_db: f64,
    trial: usize,
    params: &SystemParams,
    pilots: &PilotSpec,
    alphabet: &PskAlphabet,
) -> Result<TrialRecord> {
    let mut trial_path = config.cell_path(n, snr_db).to_vec();
    trial_path.push(trial as u64);
    let mut ch_rng = stream(config.master_seed, &trial_path, StreamRole::Channel);
    let channels = generate_channels(&mut ch_rng, config.rho)?;
    let derived = derive_channels(&channels, params);
    let mut rng = stream(config.master_seed, &trial_path, StreamRole::Symbols);
    let block = synthesize_block(&mut rng, &channels, params, config.m, n, pilots)?;
    let result = run_estimator(est, &block, config, params, &derived)?;
    let phi = result
        .phi_b_hat
        .ok_or_else(|| Error::invalid("SER framing produced no phase estimate"))?;
    let detected = detect_symbols(&block, result.a_hat, phi, params.a_amp, alphabet);
    let data = block.data_indices();
    let errors = data
        .iter()
        .filter(|&&i| (detected[i] - block.t2_true[i]).norm() > 1e-6)
        .count();
    let mut record = mse_trial_record(trial, 0, channels, &derived, &result);
    record.n_data_symbols = data.len();
    record.n_symbol_errors = errors;
    Ok(record)
}

/// Runs one SER cell. Trials accumulate in whole chunks of
/// `n_channel_realizations` until either the error target or the trial cap
/// is hit; `fixed_trials` replays an exact recorded count instead.
fn run_ser_cell(
    config: &SweepConfig,
    est: Estimator,
    n: usize,
    snr_db: f64,
    fixed_trials: Option<usize>,
) -> Result<(SweepCell, Vec<TrialRecord>)> {
    let params = config.params_at(snr_db)?;
    let pilots = ser_pilots(est, config, &params)?;
    if pilots.len() >= n {
        return Err(Error::invalid(format!(
            "block of {n} is too short for {} pilots plus data",
            pilots.len()
        )));
    }
    let alphabet = PskAlphabet::new(config.m, params.p2)?;
    let mut records: Vec<TrialRecord> = Vec::new();
    let mut errors = 0usize;
    let chunk = config.n_channel_realizations;
    loop {
        let done = records.len();
        let remaining = match fixed_trials {
            Some(total) => total.saturating_sub(done),
            None => config.ser_max_trials_per_cell.saturating_sub(done),
        };
        if remaining == 0 {
            break;
        }
        let take = chunk.min(remaining);
        let batch: Vec<TrialRecord> = (done..done + take)
            .into_par_iter()
            .map(|t| run_ser_trial(config, est, n, snr_db, t, &params, &pilots, &alphabet))
            .collect::<Result<Vec<_>>>()?;
        errors += batch.iter().map(|r| r.n_symbol_errors).sum::<usize>();
        records.extend(batch);
        if fixed_trials.is_none() && errors >= config.ser_target_errors {
            break;
        }
    }
    let symbols: usize = records.iter().map(|r| r.n_data_symbols).sum();
    let mse_a = records.iter().map(|r| r.sq_err_a).sum::<f64>() / records.len() as f64;
    let cell = SweepCell {
        estimator: est,
        m: config.m,
        n,
        j_pilots: pilots.len(),
        snr_db,
        mse_a,
        mse_b_mag: None,
        ser: Some(errors as f64 / symbols as f64),
        crb_a_avg: None,
        crb_singular_count: 0,
        n_trials: records.len(),
        n_symbols: symbols,
        n_errors: errors,
        seed_base: config.cell_seed(n, snr_db),
    };
    Ok((cell, records))
}

/// Runs the full SER sweep.
pub fn run_ser_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut cells = Vec::new();
    for &n in &config.n_values {
        for &snr_db in &config.snr_db_values {
            for &est in &config.estimators {
                let (cell, _) = run_ser_cell(config, est, n, snr_db, None)?;
                cells.push(cell);
            }
        }
    }
    Ok(SweepResult { cells })
}

/// Regenerates every trial of a recorded cell from the master seed and the
/// cell coordinates alone.
pub fn replay_cell(cell: &SweepCell, config: &SweepConfig) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    if cell.m != config.m
        || !config.estimators.contains(&cell.estimator)
        || !config.n_values.contains(&cell.n)
        || !config.snr_db_values.contains(&cell.snr_db)
    {
        return Err(Error::invalid("cell coordinates do not match the config"));
    }
    if cell.seed_base != config.cell_seed(cell.n, cell.snr_db) {
        return Err(Error::invalid("cell seed_base does not match the config seed"));
    }
    if cell.ser.is_some() {
        let (replayed, records) =
            run_ser_cell(config, cell.estimator, cell.n, cell.snr_db, Some(cell.n_trials))?;
        if replayed.n_errors != cell.n_errors || replayed.n_symbols != cell.n_symbols {
            return Err(Error::invalid("replayed SER cell disagrees with the record"));
        }
        Ok(records)
    } else {
        let records = run_mse_cell_trials(config, cell.estimator, cell.n, cell.snr_db)?;
        if records.len() != cell.n_trials {
            return Err(Error::invalid("replayed trial count disagrees with the record"));
        }
        Ok(records)
    }
}
