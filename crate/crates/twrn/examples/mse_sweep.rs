//! A small reproducible MSE-vs-SNR sweep comparing the blind DML estimator
//! with the GML correlator at QPSK, printed as the same CSV the CLI writes.
//!
//! Seeds are fixed, so the output is identical on every run and on every
//! worker count. The full-size version of this experiment is the `mse`
//! subcommand of the `twrn` binary.

use twrn::cli::mse_csv;
use twrn::harness::{run_mse_sweep, Estimator, PilotPolicy, PowerPolicy, SweepConfig};

fn main() -> twrn::Result<()> {
    let config = SweepConfig {
        estimators: vec![Estimator::Dml, Estimator::Gml],
        m: 4,
        n_values: vec![45],
        snr_db_values: vec![0.0, 5.0, 10.0, 15.0, 20.0],
        n_channel_realizations: 100,
        n_noise_trials_per_channel: 4,
        rho: 0.3,
        power_policy: PowerPolicy::Equal,
        pilot_policy: PilotPolicy::default(),
        master_seed: 1,
        grid_final_step: 1e-3,
        ser_target_errors: 100,
        ser_max_trials_per_cell: 20_000,
    };
    let result = run_mse_sweep(&config)?;
    print!("{}", mse_csv(&result));

    // DML tracks the averaged CRB at high SNR; GML hits its floor instead.
    eprintln!();
    for cell in &result.cells {
        if let Some(crb) = cell.crb_a_avg {
            eprintln!(
                "{:>4} {:>5.1} dB: mse/crb = {:.2}",
                cell.estimator.label(),
                cell.snr_db,
                cell.mse_a / crb
            );
        }
    }
    Ok(())
}
