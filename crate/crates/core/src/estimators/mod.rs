//! Monte Carlo estimators of the DOS seen from λ_max, the first gap and the
//! global density, plus the rescalings, comparisons and small-N oracles
//! used to validate them.

mod curve;
mod histogram;
pub mod oracle;
mod stats;

pub use curve::{compare_curves, edge_to_raw, rescale_bulk, rescale_edge, unscaled, BinInfo, Curve, Metrics, Reference};
pub use histogram::{Histogram, Observable};
pub use oracle::{small_n_oracle, OracleObservable};
pub use stats::{cdf_from_density, condition_accept, fit_log_linear, fit_power_slope, ks_distance, ConditionWindow, PowerFit};
