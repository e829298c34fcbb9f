//! Estimate beta with phase estimation, single runs and boosted.

use quantum_forest::circuit::compile_forest_op;
use quantum_forest::forest::{beta_classical, forecast_classical, generate_random_forest, ForestParams, InputObject};
use quantum_forest::qae::{
    error_bound, estimate_with_boosting, query_count, reconstruct_r, PhaseEstimation, QaeConfig,
};

fn main() -> quantum_forest::Result<()> {
    let forest = generate_random_forest(&ForestParams::small_binary((10.0, 20.0)), 11)?;
    let x = InputObject::new(vec![1.0, 1.0, 0.0]);
    let beta = beta_classical(&forest, &x)?;
    let circuit = compile_forest_op(&forest, &x)?;

    let t = 32;
    let run = PhaseEstimation::run(&circuit, t)?;
    println!("beta = {beta:.5}, bound at t={t}: {:.5}", error_bound(beta, t));
    for (value, p) in run.estimate_distribution()? {
        if p > 1e-3 {
            println!("  beta~ = {value:.5}  p = {p:.4}");
        }
    }

    let cfg = QaeConfig::new(t)?.with_delta(0.05)?.with_seed(1);
    let est = estimate_with_boosting(&circuit, &cfg)?;
    let r = reconstruct_r(est.beta_estimate, forest.y_min(), forest.y_max())?;
    println!(
        "median of {} runs: beta~ = {:.5}, R~ = {:.4} (classical {:.4}), {} queries",
        est.repetitions,
        est.beta_estimate,
        r,
        forecast_classical(&forest, &x)?,
        query_count(&est)
    );
    Ok(())
}
