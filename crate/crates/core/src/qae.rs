//! Amplitude estimation over the compiled forest circuit.
//!
//! Phase estimation runs on a `log2 t`-qubit register appended after the
//! circuit qubits. Phase qubit of weight `2^m` controls `Q^{2^m}` with
//! `Q = D·V`; an inverse Fourier transform and a single readout `k` give
//! `β̃ = sin²(πk/t)`. Repetitions take the median of independent readouts.
//!
//! Counting convention: one run prepares `|Ψ⟩` with one `U` and applies `Q`
//! `t - 1` times, each `Q` invoking `U` and `U⁻¹` once. Every `U` or `U⁻¹`
//! costs `h` queries, one per `+1` stage.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{grover_iterate, CompiledCircuit};
use crate::error::{Error, Result};
use crate::forest::beta_to_r;
use crate::statevector::{Control, Register, RegisterName, StateVector};
use crate::tolerance;

/// Chernoff-style constant for the repetition count: `r ≥ 12 ln(1/δ)`.
pub const POWERING_CONSTANT: f64 = 12.0;

/// What the estimate is reported in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    /// Normalized mean, accuracy `t`.
    Beta,
    /// Label units; phase precision is raised to `t (y_max - y_min)`.
    R,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaeConfig {
    /// Precision parameter, a power of two; the phase register has `log2 t` qubits.
    pub t: usize,
    /// Odd number of independent runs whose median is reported.
    pub repetitions: usize,
    /// Target failure probability the repetition count was derived from, if any.
    pub delta: Option<f64>,
    pub target: Target,
    pub seed: u64,
}

impl QaeConfig {
    pub fn new(t: usize) -> Result<Self> {
        if t < 2 || !t.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "t must be a power of two >= 2, got {t}"
            )));
        }
        Ok(QaeConfig {
            t,
            repetitions: 1,
            delta: None,
            target: Target::Beta,
            seed: 0,
        })
    }

    pub fn with_repetitions(mut self, r: usize) -> Result<Self> {
        if r.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "repetitions must be odd and positive, got {r}"
            )));
        }
        self.repetitions = r;
        self.delta = None;
        Ok(self)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        self.repetitions = repetitions_for_delta(delta)?;
        self.delta = Some(delta);
        Ok(self)
    }

    pub fn with_target(mut self, target: Target) -> Self {
        self.target = target;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Phase precision actually simulated for a forest with label range `y_range`.
    pub fn effective_t(&self, y_range: f64) -> usize {
        match self.target {
            Target::Beta => self.t,
            Target::R => {
                let scaled = (self.t as f64 * y_range.max(1.0)).ceil() as usize;
                scaled.next_power_of_two().max(self.t)
            }
        }
    }
}

/// Smallest odd `r ≥ 12 ln(1/δ)`.
pub fn repetitions_for_delta(delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidInput(format!("delta must lie in (0, 0.5), got {delta}")));
    }
    let r = (POWERING_CONSTANT * (1.0 / delta).ln()).ceil().max(1.0) as usize;
    Ok(r | 1)
}

/// `2π √(β(1-β)) / t + π² / t²`
pub fn error_bound(beta: f64, t: usize) -> f64 {
    let t = t as f64;
    let b = beta.clamp(0.0, 1.0);
    2.0 * PI * (b * (1.0 - b)).sqrt() / t + PI * PI / (t * t)
}

/// `2π / t + π² / t²`, valid for every `β ∈ [0, 1]`.
pub fn relaxed_error_bound(t: usize) -> f64 {
    let t = t as f64;
    2.0 * PI / t + PI * PI / (t * t)
}

/// Label-unit estimate from a normalized one.
pub fn reconstruct_r(beta_estimate: f64, y_min: f64, y_max: f64) -> Result<f64> {
    beta_to_r(beta_estimate, y_min, y_max)
}

/// `sin²(πk/t)`
pub fn grid_value(k: usize, t: usize) -> f64 {
    (PI * k as f64 / t as f64).sin().powi(2)
}

/// Pre-measurement state of one phase-estimation run.
#[derive(Clone, Debug)]
pub struct PhaseEstimation {
    state: StateVector,
    phase: Register,
    t: usize,
    grover_calls: usize,
}

impl PhaseEstimation {
    /// Prepares `|Ψ⟩`, applies the controlled powers of `Q`, then the inverse QFT.
    pub fn run(circuit: &CompiledCircuit, t: usize) -> Result<Self> {
        if t < 2 || !t.is_power_of_two() {
            return Err(Error::InvalidInput(format!("t must be a power of two >= 2, got {t}")));
        }
        let width = circuit.width();
        let m = t.trailing_zeros() as usize;
        let total = width + m;
        if total > tolerance::MAX_QUBITS {
            return Err(Error::Resource(format!(
                "{width} circuit qubits + {m} phase qubits exceeds the simulator limit of {}",
                tolerance::MAX_QUBITS
            )));
        }
        let q_gates = grover_iterate(circuit);
        let work = (t as u128 - 1) * q_gates.len() as u128 * (1u128 << total);
        if work > tolerance::MAX_AMPLITUDE_UPDATES {
            return Err(Error::Resource(format!(
                "t = {t} needs about {work:.3e} amplitude updates, over the budget of {:.3e}",
                tolerance::MAX_AMPLITUDE_UPDATES as f64
            )));
        }
        let phase = Register::new(RegisterName::Phase, width, m);
        let mut state = StateVector::new(total)?;
        state.apply_all(&circuit.gates)?;
        for q in phase.qubits() {
            state.apply(&crate::statevector::Gate::H(q))?;
        }

        let mut grover_calls = 0;
        for power in 0..m {
            // The register's least significant qubit carries weight 2^0.
            let control = [Control::one(phase.lsb() - power)];
            for _ in 0..(1usize << power) {
                for g in &q_gates {
                    state.apply_controlled(g, &control)?;
                }
                grover_calls += 1;
            }
        }
        state.apply_inverse_qft(&phase)?;
        Ok(PhaseEstimation {
            state,
            phase,
            t,
            grover_calls,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Applications of `Q` in this run (`t - 1`).
    pub fn grover_calls(&self) -> usize {
        self.grover_calls
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// Exact distribution of the phase readout `k`.
    pub fn outcome_distribution(&self) -> Result<Vec<f64>> {
        self.state.register_distribution(&self.phase)
    }

    /// Exact distribution of `β̃` over `k = 0..=t/2` (pairs `k`, `t-k` merged).
    pub fn estimate_distribution(&self) -> Result<Vec<(f64, f64)>> {
        let dist = self.outcome_distribution()?;
        let half = self.t / 2;
        Ok((0..=half)
            .map(|k| {
                let p = if k == 0 || k == half {
                    dist[k]
                } else {
                    dist[k] + dist[self.t - k]
                };
                (grid_value(k, self.t), p)
            })
            .collect())
    }

    /// Samples the full state once and returns the phase readout `k`.
    pub fn sample_k<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        let index = self.state.sample(rng)?;
        Ok(self.phase.value_of(index, self.state.num_qubits()))
    }

    pub fn sample_estimate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        Ok(grid_value(self.sample_k(rng)?, self.t))
    }
}

/// Readout generators for the repetitions of a run seeded with `seed`.
fn repetition_rngs(seed: u64) -> impl Iterator<Item = ChaCha8Rng> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    std::iter::repeat_with(move || ChaCha8Rng::seed_from_u64(master.gen()))
}

/// One amplitude-estimation run; the readout uses the first repetition stream of `config.seed`.
pub fn estimate_amplitude_once(circuit: &CompiledCircuit, config: &QaeConfig) -> Result<f64> {
    let t = config.effective_t(circuit.metadata.y_max - circuit.metadata.y_min);
    let run = PhaseEstimation::run(circuit, t)?;
    let mut rng = repetition_rngs(config.seed).next().expect("infinite iterator");
    run.sample_estimate(&mut rng)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    /// Median of the per-run estimates.
    pub beta_estimate: f64,
    /// Label-unit estimate; set for [`Target::R`].
    pub r_estimate: Option<f64>,
    /// Bound on `|β̃ - β|` at the simulated precision, evaluated at `β̃`.
    pub error_bound: f64,
    /// Phase precision actually simulated.
    pub t: usize,
    pub repetitions: usize,
    pub raw_estimates: Vec<f64>,
    /// Total applications of `Q` over all repetitions.
    pub grover_calls: usize,
    /// Total invocations of `U` or `U⁻¹` over all repetitions.
    pub unitary_calls: usize,
    /// Input queries per `U` invocation (the tree height).
    pub queries_per_unitary: usize,
}

/// Median of `config.repetitions` independent runs.
///
/// The pre-measurement state does not depend on the seed, so it is simulated
/// once and each repetition draws its own readout from it with a sub-seed.
pub fn estimate_with_boosting(
    circuit: &CompiledCircuit,
    config: &QaeConfig,
) -> Result<EstimationResult> {
    let (y_min, y_max) = (circuit.metadata.y_min, circuit.metadata.y_max);
    let t = config.effective_t(y_max - y_min);
    let run = PhaseEstimation::run(circuit, t)?;
    let raw_estimates = repetition_rngs(config.seed)
        .take(config.repetitions)
        .map(|mut rng| run.sample_estimate(&mut rng))
        .collect::<Result<Vec<f64>>>()?;
    let beta_estimate = median(&raw_estimates);
    let r_estimate = match config.target {
        Target::Beta => None,
        Target::R => Some(reconstruct_r(beta_estimate, y_min, y_max)?),
    };
    let per_run_q = run.grover_calls();
    Ok(EstimationResult {
        beta_estimate,
        r_estimate,
        error_bound: error_bound(beta_estimate, t),
        t,
        repetitions: config.repetitions,
        raw_estimates,
        grover_calls: per_run_q * config.repetitions,
        unitary_calls: (1 + 2 * per_run_q) * config.repetitions,
        queries_per_unitary: circuit.metadata.query_levels,
    })
}

/// Total input queries: `h` per `U`/`U⁻¹` invocation.
pub fn query_count(result: &EstimationResult) -> usize {
    result.queries_per_unitary * result.unitary_calls
}

/// Median of an odd-length slice; lower middle for even lengths.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[(v.len() - 1) / 2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(QaeConfig::new(1).is_err());
        assert!(QaeConfig::new(24).is_err());
        let c = QaeConfig::new(32).unwrap();
        assert!(c.clone().with_repetitions(4).is_err());
        assert!(c.clone().with_repetitions(0).is_err());
        assert_eq!(c.clone().with_repetitions(5).unwrap().repetitions, 5);
        assert!(c.clone().with_delta(0.5).is_err());
        assert!(c.with_delta(0.0).is_err());
    }

    #[test]
    fn repetition_count() {
        // 12 ln 10 = 27.63 -> 28 -> 29
        assert_eq!(repetitions_for_delta(0.1).unwrap(), 29);
        // 12 ln 2.5 = 10.995 -> 11
        assert_eq!(repetitions_for_delta(0.4).unwrap(), 11);
        for d in [0.01, 0.05, 0.2, 0.49] {
            let r = repetitions_for_delta(d).unwrap();
            assert_eq!(r % 2, 1);
            assert!(r as f64 >= POWERING_CONSTANT * (1.0 / d).ln());
            assert!(r as f64 - 2.0 < POWERING_CONSTANT * (1.0 / d).ln());
        }
    }

    #[test]
    fn bounds() {
        for t in [2usize, 8, 32, 1024] {
            assert_eq!(error_bound(0.0, t), PI * PI / (t * t) as f64);
            assert!(error_bound(0.5, t) <= relaxed_error_bound(t));
        }
        let relaxed = relaxed_error_bound(32);
        assert!((relaxed - 0.2059878).abs() < 1e-6, "{relaxed}");
    }

    #[test]
    fn median_of_values() {
        assert_eq!(median(&[3.0]), 3.0);
        assert_eq!(median(&[0.5, 0.1, 0.9]), 0.5);
        assert_eq!(median(&[0.2; 7]), 0.2);
    }

    #[test]
    fn effective_t_for_r() {
        let c = QaeConfig::new(32).unwrap().with_target(Target::R);
        assert_eq!(c.effective_t(10.0), 512);
        assert_eq!(c.effective_t(0.5), 32);
        assert_eq!(QaeConfig::new(32).unwrap().effective_t(10.0), 32);
    }

    #[test]
    fn reconstruct_endpoints() {
        assert_eq!(reconstruct_r(0.0, -1.0, 3.0).unwrap(), -1.0);
        assert_eq!(reconstruct_r(1.0, -1.0, 3.0).unwrap(), 3.0);
        assert!(reconstruct_r(0.3, 2.0, 2.0).is_err());
    }
}
