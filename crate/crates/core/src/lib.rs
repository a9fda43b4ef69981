//! Random-access NOMA over p-persistent slotted ALOHA.
//!
//! Users transmit in a slot with high power (probability `tau1`) or low power
//! (probability `tau2`); channel inversion fixes the received powers at `v1`
//! and `v2`, and the access point separates concurrent signals by successive
//! interference cancellation against an SINR threshold `gamma`.
//!
//! - [`analytic`]: feasible regions, count distribution, success probability
//!   and average throughput in closed form.
//! - [`optimizer`]: coordinate ascent over `(tau1, tau2)` and an exhaustive
//!   grid oracle.
//! - [`simulator`]: slot-level Monte Carlo of the protocol.

pub mod analytic;
pub mod error;
pub mod model;
pub mod optimizer;
pub mod simulator;

pub use analytic::{
    average_throughput, baseline_optimum, baseline_success, baseline_throughput,
    cond_sum_rate_high, cond_sum_rate_low, decode_feasibility, joint_pmf, region_bounds,
    sinr_high, sinr_low, success_probability, DecodeFlags, RegionBounds,
};
pub use error::{NomaError, Result};
pub use model::{CountPair, PowerProfile, Scenario};
pub use optimizer::{
    coordinate_ascent, grid_search_oracle, maximize_over_tau1, maximize_over_tau2, AscentConfig,
    OptimizationResult, TraceRecord,
};
pub use simulator::{run_simulation, sic_decode, tx_power_for, PowerLevel, SimConfig, SimStats, SlotOutcome};
