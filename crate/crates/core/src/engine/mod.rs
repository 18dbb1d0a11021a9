//! Space-time simulation of impulse CAs.
//!
//! [`run`] keeps every slice of the diagram; [`Stepper`] and
//! [`record_region`] keep only the latest slice plus whatever sites a probe
//! asks for, which is what long horizons need. [`dense_run`] recomputes a
//! diagram over the full light-cone box and exists only as an oracle.

mod dense;
mod diagram;
mod slice;
mod stream;

use thiserror::Error;

use crate::automaton::AutomatonError;
use crate::lattice::{LatticeError, Site, Time};

pub use dense::dense_run;
pub use diagram::{run, run_bounded, run_with, DiagonalWord, SiteLookup, SpaceTimeDiagram};
pub use slice::Slice;
pub use stream::{record_region, RegionRecord, Stepper};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("site budget exceeded; last completed slice is {last_completed}")]
    OverflowHorizon { last_completed: Time },
    #[error("time {time} is beyond the horizon {horizon}")]
    BeyondHorizon { time: i64, horizon: Time },
    #[error("horizon {0} exceeds the supported maximum")]
    HorizonTooLarge(Time),
    #[error("expected a {expected}-dimensional coordinate, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the W transform is only defined for 2-D diagrams")]
    NotTwoDimensional,
    #[error("site {0} was not recorded by the probe")]
    NotRecorded(Site),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Default bound on stored sites.
pub const DEFAULT_BUDGET: usize = 1 << 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Maximum number of stored sites (all slices for [`run`], the live slice
    /// for streaming).
    pub budget: usize,
    /// Restrict evaluation to cells with `max_a (t - u_a) <= band`.
    pub band: Option<u32>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { budget: DEFAULT_BUDGET, band: None }
    }
}

impl RunOptions {
    pub fn with_budget(budget: usize) -> Self {
        RunOptions { budget, ..Default::default() }
    }

    pub fn with_band(band: u32) -> Self {
        RunOptions { band: Some(band), ..Default::default() }
    }
}

#[cfg(test)]
pub(crate) mod tests;
