//! Impulse cellular automata on `Z^k`, the signals they draw, and the
//! machinery to check structural facts about their space-time diagrams.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, JSON and the
//! command-line front end live in the `ca-signals` crate.
//!
//! Module map:
//!
//! * [`lattice`]: coordinates, sites, neighborhoods, light cone and trellis parity.
//! * [`automaton`]: first-match wildcard rule tables, [`ImpulseCA`] and the built-in automata.
//! * [`engine`]: sparse frontier simulation, a dense oracle, streaming probes, diagonals and the W transform.
//! * [`signals`]: detection by move partition, support by a finite follower, the product construction.
//! * [`analysis`]: ultimate periodicity, diagonal length bounds, the gap probe, digit readouts
//!   and the exhaustive two-state search.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod automaton;
pub mod engine;
pub mod lattice;
pub mod signals;

pub use automaton::{Alphabet, ImpulseCA, Matcher, Pattern, Rule, RuleTable, StateId, StateSet};
pub use engine::{RunOptions, SpaceTimeDiagram};
pub use lattice::{Coord, Neighborhood, NeighborhoodKind, Site, Time};
pub use signals::{Follower, MoveConvention, MovePartition, Signal};
