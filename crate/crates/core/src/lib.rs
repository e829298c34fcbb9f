//! Quantum forecasting for random forest regression, simulated.
//!
//! A trained forest and an input object are compiled into a state-preparation
//! circuit whose result qubit reads `1` with probability equal to the forest's
//! normalized mean prediction `β`. Amplitude estimation on a dense state-vector
//! simulator recovers `β` to additive error `O(1/t)`, and the mean prediction
//! follows as `R = β (y_max - y_min) + y_min`.
//!
//! - [`forest`]: trees, forests, classical walks, forest files.
//! - [`metrics`]: MAE, MSE, RMSE, MAPE, wMAPE, sMAPE.
//! - [`statevector`]: the simulator and its gate vocabulary.
//! - [`circuit`]: forest → circuit compilation and the two reflections.
//! - [`qae`]: phase-estimation amplitude estimation and median boosting.
//! - [`cli`]: the commands behind the `qforest` binary.

pub mod circuit;
pub mod cli;
pub mod error;
pub mod forest;
pub mod metrics;
pub mod qae;
pub mod statevector;
pub mod tolerance;

pub use error::{Error, Result};
