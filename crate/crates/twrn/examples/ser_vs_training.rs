//! Link-level symbol error rate: blind DML estimation with two
//! ambiguity-resolution pilots against training-based LS on four pilots,
//! over coherence blocks of 20 QPSK symbols. The blind estimator spends
//! its pilot budget on phase disambiguation only and uses every sample for
//! estimation, which is why it stays close to LS with half the overhead.

use twrn::cli::ser_csv;
use twrn::harness::{run_ser_sweep, Estimator, PilotPolicy, PowerPolicy, SweepConfig};

fn main() -> twrn::Result<()> {
    let config = SweepConfig {
        estimators: vec![Estimator::Dml, Estimator::Ls, Estimator::PerfectCsi],
        m: 4,
        n_values: vec![20],
        snr_db_values: vec![6.0, 9.0, 12.0, 15.0],
        n_channel_realizations: 500, // chunk size between stopping checks
        n_noise_trials_per_channel: 1,
        rho: 0.3,
        power_policy: PowerPolicy::Equal,
        pilot_policy: PilotPolicy { j_dml_ambiguity: 2, j_mcml: 2, j_ls: 4 },
        master_seed: 1,
        grid_final_step: 1e-3,
        ser_target_errors: 100,
        ser_max_trials_per_cell: 4_000,
    };
    let result = run_ser_sweep(&config)?;
    print!("{}", ser_csv(&result));
    Ok(())
}
