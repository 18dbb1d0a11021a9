//! Signals: site paths through the space-time diagram and the ways a CA
//! can carry one (marking, move partitions, finite followers).

mod follower;
mod product;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::analysis::{first_fit, smallest_suffix_periods};
use crate::automaton::{AutomatonError, ImpulseCA, StateId, StateSet};
use crate::engine::{EngineError, SpaceTimeDiagram};
use crate::lattice::{Coord, LatticeError, Neighborhood, Site, Time};

pub use follower::{
    detect, detect_streaming, follow, follow_streaming, follower_for_xy, FollowTrace, Follower,
    FollowerEntry,
};
pub use product::{product_construct, product_symbol, ProductCA};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignalError {
    #[error("a signal must start at the origin")]
    NotAtOrigin,
    #[error("empty signal")]
    Empty,
    #[error("move {offset} at t={time} is not a neighborhood offset")]
    BadMove { time: Time, offset: Coord },
    #[error("partition has no class for state `{0}`")]
    PartitionNotTotal(usize),
    #[error("offset {0} is not in the neighborhood")]
    NotAnOffset(Coord),
    #[error("follower has no transition for (q{q}, s{s})")]
    FollowerNotTotal { q: usize, s: usize },
    #[error("unknown follower state `{0}`")]
    UnknownFollowerState(usize),
    #[error("follower reads {follower} input symbols but the automaton has {automaton}")]
    AlphabetMismatch { follower: usize, automaton: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// How an emitted offset `x` moves the signal: `u(t+1) = u(t) - x` for
/// [`MoveConvention::Negated`], `u(t) + x` for [`MoveConvention::AsWritten`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveConvention {
    AsWritten,
    Negated,
}

impl MoveConvention {
    pub fn name(self) -> &'static str {
        match self {
            MoveConvention::AsWritten => "aswritten",
            MoveConvention::Negated => "negated",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "aswritten" | "as-written" => Some(MoveConvention::AsWritten),
            "negated" => Some(MoveConvention::Negated),
            _ => None,
        }
    }

    /// The displacement `u(t+1) - u(t)` produced by emitting `x`.
    pub fn displacement(self, x: &Coord) -> Result<Coord, LatticeError> {
        match self {
            MoveConvention::AsWritten => Ok(*x),
            MoveConvention::Negated => x.checked_neg(),
        }
    }
}

/// A path `⟨u(t), t⟩`, `t = 0..=horizon`, starting at the origin and moving
/// by neighborhood offsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signal {
    cells: Vec<Coord>,
}

impl Signal {
    pub fn new(cells: Vec<Coord>, neighborhood: &Neighborhood) -> Result<Self, SignalError> {
        let first = cells.first().ok_or(SignalError::Empty)?;
        if *first != Coord::zero(neighborhood.dim()) {
            return Err(SignalError::NotAtOrigin);
        }
        for (t, w) in cells.windows(2).enumerate() {
            let step = w[1].checked_sub(&w[0])?;
            if !neighborhood.contains(&step) {
                return Err(SignalError::BadMove { time: t as Time, offset: step });
            }
        }
        Ok(Signal { cells })
    }

    /// A path without move validation, for synthetic probe inputs whose
    /// moves need not be local.
    pub fn unchecked(cells: Vec<Coord>) -> Self {
        Signal { cells }
    }

    pub fn horizon(&self) -> Time {
        (self.cells.len() - 1) as Time
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, t: Time) -> Option<&Coord> {
        self.cells.get(t as usize)
    }

    pub fn cells(&self) -> &[Coord] {
        &self.cells
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        self.cells.iter().enumerate().map(|(t, c)| Site::new(*c, t as Time))
    }

    /// `u(t+1) - u(t)` for every step.
    pub fn moves(&self) -> Vec<Coord> {
        self.cells.windows(2).map(|w| w[1].checked_sub(&w[0]).expect("validated path")).collect()
    }
}

/// A total map from states to offsets: the class `S_x` of each state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MovePartition {
    classes: Vec<Coord>,
}

impl MovePartition {
    /// `classes[s]` is the offset of state `s`; every state must be covered.
    pub fn new(
        ca: &ImpulseCA,
        entries: impl IntoIterator<Item = (StateId, Coord)>,
    ) -> Result<Self, SignalError> {
        let mut classes: Vec<Option<Coord>> = alloc::vec![None; ca.num_states()];
        for (s, x) in entries {
            if s.index() >= classes.len() {
                return Err(AutomatonError::UnknownState(alloc::format!("#{}", s.0)).into());
            }
            if !ca.neighborhood().contains(&x) {
                return Err(SignalError::NotAnOffset(x));
            }
            classes[s.index()] = Some(x);
        }
        let classes = classes
            .into_iter()
            .enumerate()
            .map(|(n, c)| c.ok_or(SignalError::PartitionNotTotal(n)))
            .collect::<Result<_, _>>()?;
        Ok(MovePartition { classes })
    }

    /// The partition forced on the binary slow-down: `0 ↦ (1,1)` and
    /// `1, λ ↦ (-1,-1)`.
    pub fn log2(ca: &ImpulseCA) -> Result<Self, SignalError> {
        let up = Coord::from_slice(&[1, 1]);
        let down = Coord::from_slice(&[-1, -1]);
        MovePartition::new(
            ca,
            [(ca.quiescent(), down), (ca.state("0")?, up), (ca.state("1")?, down)],
        )
    }

    pub fn class(&self, s: StateId) -> &Coord {
        &self.classes[s.index()]
    }

    pub fn classes(&self) -> &[Coord] {
        &self.classes
    }
}

/// `ℓ(t) = ⌊log_b(t+1)⌋` by repeated multiplication.
pub fn ilog(base: u64, t: u64) -> u32 {
    assert!(base >= 2, "logarithm base must be at least 2");
    let n = t + 1;
    let mut l = 0;
    let mut p = base;
    while p <= n {
        l += 1;
        match p.checked_mul(base) {
            Some(q) => p = q,
            None => break,
        }
    }
    l
}

/// `{⟨(t-ℓ(t))·1, t+ℓ(t)⟩ : t+ℓ(t) <= horizon}` with `ℓ(t) = ⌊log_b(t+1)⌋`,
/// in increasing time order.
pub fn log_anchor_signal(base: u64, horizon: Time) -> Vec<Site> {
    let mut out = Vec::new();
    for t in 0u64.. {
        let l = ilog(base, t) as u64;
        if t + l > horizon as u64 {
            break;
        }
        let c = (t - l) as i32;
        out.push(Site::new(Coord::from_slice(&[c, c]), (t + l) as Time));
    }
    out
}

/// Anchors the signal misses: sites whose time is within the signal but
/// whose cell differs from the signal's cell at that time.
pub fn anchor_mismatches(signal: &Signal, anchors: &[Site]) -> Vec<Site> {
    anchors
        .iter()
        .filter(|a| signal.cell(a.time).is_none_or(|c| *c != a.cell))
        .copied()
        .collect()
}

/// Sites with `t <= horizon` whose state is in `marked`.
pub fn marked_sites(d: &SpaceTimeDiagram, marked: &StateSet, horizon: Time) -> BTreeSet<Site> {
    d.sites().filter(|(site, s)| site.time <= horizon && marked.contains(*s)).map(|(site, _)| site).collect()
}

/// Outcome of [`is_basic`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basic {
    Periodic { preperiod: usize, period: usize },
    NotPeriodicWithin(usize),
}

/// Smallest `(p, q)` such that `moves[..h]` is `α·β^∞` with `|α| = p`,
/// `|β| = q` and `p + q <= h/2`, i.e. the period is seen repeating over at
/// least half the window.
pub fn is_basic(moves: &[Coord], horizon: usize) -> Basic {
    assert!(moves.len() >= horizon, "need at least `horizon` moves");
    let w = &moves[..horizon];
    match first_fit(&smallest_suffix_periods(w), |p, q| p + q <= horizon / 2) {
        Some((p, q)) => Basic::Periodic { preperiod: p, period: q },
        None => Basic::NotPeriodicWithin(horizon),
    }
}
