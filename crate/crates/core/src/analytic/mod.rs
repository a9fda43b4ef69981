//! Closed-form performance model: feasible regions, count distribution,
//! success probability and throughput.

pub mod baseline;
pub mod pmf;
pub mod region;
pub mod throughput;

pub use baseline::{baseline_optimum, baseline_success, baseline_throughput};
pub use pmf::{count_pmf, joint_pmf, ln_factorial};
pub use region::{decode_feasibility, region_bounds, sinr_high, sinr_low, DecodeFlags, RegionBounds};
pub use throughput::{
    average_throughput, average_throughput_with, cond_sum_rate_high, cond_sum_rate_low,
    success_probability, success_probability_with,
};
