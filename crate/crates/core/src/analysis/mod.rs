//! Structural checks on diagrams and signals: diagonal periodicity and its
//! length envelopes, the gap probe, counter readouts and the two-state
//! search.

mod gap;
mod period;
mod readout;
mod search;

use alloc::string::String;

use thiserror::Error;

use crate::engine::EngineError;

pub use gap::{
    gap_probe, gap_probe_samples, lag, min_base_exceeding, GapClass, GapReport, Level,
    CONSTANT_TAIL_DIVISOR, SUSPECT_LEVELS,
};
pub use period::{
    diagonal_indices, divides_power, first_fit, lcm_upto, smallest_suffix_periods, ultimate_period,
    verify_period_bounds, DiagonalReport, PeriodDecomposition, PeriodOutcome,
};
pub use readout::{base_xy_readout, binary_readout, crt_digit};
pub use search::{
    exhaustive_two_state_search, required_values, two_state_candidate, SearchReport, REQUIRED_SITES,
    TWO_STATE_CANDIDATES,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("gcd({x},{y}) != 1")]
    NotCoprime { x: u32, y: u32 },
    #[error("digit indices ({p},{k}) out of range")]
    IndexOutOfRange { p: u32, k: u32 },
    #[error("state `{symbol}` found on plane l={l} at i={i}")]
    PlaneViolation { l: u8, i: u64, symbol: String },
    #[error("unexpected state `{0}` in a counter row")]
    UnexpectedState(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}
