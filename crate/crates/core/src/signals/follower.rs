use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{MoveConvention, MovePartition, Signal, SignalError};
use crate::automaton::{gcd, xy_pi, AutomatonError, ImpulseCA, StateId};
use crate::engine::{RunOptions, SiteLookup, Stepper};
use crate::lattice::{Coord, Site, Time};

/// One listed transition `δ(q, s) = (q2, x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FollowerEntry {
    pub q: usize,
    pub s: StateId,
    pub q2: usize,
    pub offset: Coord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cell {
    q2: usize,
    offset: Coord,
    listed: bool,
}

/// A finite automaton `(S, Q, δ, q_0)` walking the diagram: in state `q` on
/// a site holding `s` it switches to `q2` and emits the offset `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Follower {
    names: Vec<String>,
    inputs: usize,
    initial: usize,
    delta: Vec<Cell>,
}

impl Follower {
    /// Pairs not covered by `entries` go to `(q, default)` when a default is
    /// given and are rejected otherwise. Later entries overwrite earlier ones.
    pub fn new(
        names: Vec<String>,
        initial: usize,
        inputs: usize,
        entries: impl IntoIterator<Item = FollowerEntry>,
        default: Option<Coord>,
    ) -> Result<Self, SignalError> {
        let nq = names.len();
        if initial >= nq {
            return Err(SignalError::UnknownFollowerState(initial));
        }
        let mut slots: Vec<Option<Cell>> = vec![None; nq * inputs];
        for e in entries {
            if e.q >= nq {
                return Err(SignalError::UnknownFollowerState(e.q));
            }
            if e.q2 >= nq {
                return Err(SignalError::UnknownFollowerState(e.q2));
            }
            if e.s.index() >= inputs {
                return Err(AutomatonError::UnknownState(format!("#{}", e.s.0)).into());
            }
            slots[e.q * inputs + e.s.index()] = Some(Cell { q2: e.q2, offset: e.offset, listed: true });
        }
        let delta = slots
            .into_iter()
            .enumerate()
            .map(|(n, c)| match (c, default) {
                (Some(c), _) => Ok(c),
                (None, Some(offset)) => Ok(Cell { q2: n / inputs, offset, listed: false }),
                (None, None) => Err(SignalError::FollowerNotTotal { q: n / inputs, s: n % inputs }),
            })
            .collect::<Result<_, _>>()?;
        Ok(Follower { names, inputs, initial, delta })
    }

    /// The one-state follower that emits the class offset of each state.
    pub fn from_partition(p: &MovePartition) -> Self {
        let delta = p.classes().iter().map(|x| Cell { q2: 0, offset: *x, listed: true }).collect();
        Follower { names: vec![String::from("q0")], inputs: p.classes().len(), initial: 0, delta }
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `δ(q, s)`.
    pub fn delta(&self, q: usize, s: StateId) -> (usize, Coord) {
        let c = &self.delta[q * self.inputs + s.index()];
        (c.q2, c.offset)
    }

    /// Whether `δ(q, s)` was given explicitly rather than defaulted.
    pub fn is_listed(&self, q: usize, s: StateId) -> bool {
        self.delta[q * self.inputs + s.index()].listed
    }

    /// Every transition in `(q, s)` order.
    pub fn entries(&self) -> impl Iterator<Item = (FollowerEntry, bool)> + '_ {
        self.delta.iter().enumerate().map(move |(n, c)| {
            let e = FollowerEntry {
                q: n / self.inputs,
                s: StateId((n % self.inputs) as u16),
                q2: c.q2,
                offset: c.offset,
            };
            (e, c.listed)
        })
    }

    fn check_inputs(&self, ca: &ImpulseCA) -> Result<(), SignalError> {
        if self.inputs != ca.num_states() {
            return Err(SignalError::AlphabetMismatch { follower: self.inputs, automaton: ca.num_states() });
        }
        Ok(())
    }
}

/// The path of a follower together with its internal states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FollowTrace {
    pub signal: Signal,
    /// `q(t)` for every `t` of the signal.
    pub states: Vec<usize>,
    /// Times at which a defaulted transition was taken.
    pub unlisted: Vec<Time>,
}

struct Walk<'f> {
    f: &'f Follower,
    conv: MoveConvention,
    cells: Vec<Coord>,
    states: Vec<usize>,
    unlisted: Vec<Time>,
}

impl<'f> Walk<'f> {
    fn new(f: &'f Follower, conv: MoveConvention, dim: usize) -> Self {
        Walk { f, conv, cells: vec![Coord::zero(dim)], states: vec![f.initial], unlisted: Vec::new() }
    }

    fn here(&self) -> Coord {
        *self.cells.last().unwrap()
    }

    fn advance(&mut self, s: StateId) -> Result<(), SignalError> {
        let t = (self.cells.len() - 1) as Time;
        let q = *self.states.last().unwrap();
        if !self.f.is_listed(q, s) {
            self.unlisted.push(t);
        }
        let (q2, x) = self.f.delta(q, s);
        let next = self.here().checked_add(&self.conv.displacement(&x)?)?;
        self.cells.push(next);
        self.states.push(q2);
        Ok(())
    }

    fn finish(self, ca: &ImpulseCA) -> Result<FollowTrace, SignalError> {
        Ok(FollowTrace {
            signal: Signal::new(self.cells, ca.neighborhood())?,
            states: self.states,
            unlisted: self.unlisted,
        })
    }
}

/// Runs `f` over a stored diagram from `⟨0, 0⟩` up to time `horizon`.
pub fn follow<D: SiteLookup + ?Sized>(
    d: &D,
    f: &Follower,
    conv: MoveConvention,
    horizon: Time,
) -> Result<FollowTrace, SignalError> {
    f.check_inputs(d.ca())?;
    let mut walk = Walk::new(f, conv, d.ca().dim());
    for t in 0..horizon {
        let s = d.state_at(&Site::new(walk.here(), t))?;
        walk.advance(s)?;
    }
    walk.finish(d.ca())
}

/// Same path as [`follow`], evolving the automaton alongside the walk so only
/// one slice is ever held.
pub fn follow_streaming(
    ca: &ImpulseCA,
    f: &Follower,
    conv: MoveConvention,
    horizon: Time,
    opts: &RunOptions,
) -> Result<FollowTrace, SignalError> {
    f.check_inputs(ca)?;
    let mut stepper = Stepper::new(ca, *opts)?;
    let mut walk = Walk::new(f, conv, ca.dim());
    for _ in 0..horizon {
        walk.advance(stepper.state(&walk.here()))?;
        stepper.step()?;
    }
    walk.finish(ca)
}

/// The signal detected by a move partition: a one-state follower.
pub fn detect<D: SiteLookup + ?Sized>(
    d: &D,
    p: &MovePartition,
    conv: MoveConvention,
    horizon: Time,
) -> Result<Signal, SignalError> {
    Ok(follow(d, &Follower::from_partition(p), conv, horizon)?.signal)
}

pub fn detect_streaming(
    ca: &ImpulseCA,
    p: &MovePartition,
    conv: MoveConvention,
    horizon: Time,
    opts: &RunOptions,
) -> Result<Signal, SignalError> {
    Ok(follow_streaming(ca, &Follower::from_partition(p), conv, horizon, opts)?.signal)
}

/// The base-`xy` follower over the alphabet of `ca` (either the two-plane
/// or the merged automaton): states `a1..ay`, start `a1`,
/// `δ(a_y, π_x) = (a_1, (1,1))`, `δ(a_j, π_x) = (a_{j+1}, (-1,-1))`,
/// `δ(a_j, π_i) = (a_j, (-1,-1))` for `i != x`, and `(q, (-1,-1))` for every
/// other pair.
pub fn follower_for_xy(ca: &ImpulseCA, x: u32, y: u32) -> Result<Follower, SignalError> {
    if x == 0 || y == 0 {
        return Err(AutomatonError::ZeroParameter.into());
    }
    if gcd(x as u64, y as u64) != 1 {
        return Err(AutomatonError::NotCoprime { x, y }.into());
    }
    let up = Coord::from_slice(&[1, 1]);
    let down = Coord::from_slice(&[-1, -1]);
    let names = (1..=y).map(|j| format!("a{j}")).collect();
    let mut entries = Vec::new();
    for j in 0..y as usize {
        for i in 0..=x {
            let s = ca.state(&xy_pi(i))?;
            let (q2, offset) = match (i == x, j + 1 == y as usize) {
                (true, true) => (0, up),
                (true, false) => (j + 1, down),
                (false, _) => (j, down),
            };
            entries.push(FollowerEntry { q: j, s, q2, offset });
        }
    }
    Follower::new(names, 0, ca.num_states(), entries, Some(down))
}
