use alloc::vec;
use alloc::vec::Vec;

use super::slice::{step, CompiledTable, Slice};
use super::{EngineError, RunOptions};
use crate::automaton::{ImpulseCA, StateId};
use crate::lattice::{in_light_cone, parity_valid, Coord, Site, Time, MAX_HORIZON};

/// Read access to the states of a (possibly partially recorded) diagram.
pub trait SiteLookup {
    fn ca(&self) -> &ImpulseCA;

    fn horizon(&self) -> Time;

    /// State of a site; `λ` for unstored, parity-invalid or out-of-cone sites.
    fn state_at(&self, site: &Site) -> Result<StateId, EngineError>;

    /// `Dg_i` read from `⌈max(i)/2⌉` for `len` letters; all `λ` when
    /// `i ∉ N^k`, without touching the diagram.
    fn diagonal(&self, index: &Coord, len: usize) -> Result<DiagonalWord, EngineError> {
        let dim = self.ca().dim();
        if index.dim() != dim {
            return Err(EngineError::DimensionMismatch { expected: dim, found: index.dim() });
        }
        let start_time = diagonal_start(index);
        let lambda = self.ca().quiescent();
        if !index.is_natural() {
            return Ok(DiagonalWord { index: *index, start_time, letters: vec![lambda; len] });
        }
        let end = start_time as i64 + len as i64;
        if end > self.horizon() as i64 {
            return Err(EngineError::BeyondHorizon { time: end, horizon: self.horizon() });
        }
        let letters = (0..len as Time)
            .map(|j| {
                let t = start_time + j;
                let cell = index.diagonal_complement(t)?;
                self.state_at(&Site::new(cell, t))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DiagonalWord { index: *index, start_time, letters })
    }

    /// `W(k,l,i) = value(k-i+l, k-i-l, k+i+l)`, 2-D only. Sites at negative
    /// time read as `λ`.
    fn w_value(&self, k: i64, l: i64, i: i64) -> Result<StateId, EngineError> {
        if self.ca().dim() != 2 {
            return Err(EngineError::NotTwoDimensional);
        }
        let t = k + i + l;
        if t < 0 {
            return Ok(self.ca().quiescent());
        }
        if t > self.horizon() as i64 {
            return Err(EngineError::BeyondHorizon { time: t, horizon: self.horizon() });
        }
        let x = k - i + l;
        let y = k - i - l;
        if x.abs() > t || y.abs() > t {
            return Ok(self.ca().quiescent());
        }
        let cell = Coord::from_slice(&[x as i32, y as i32]);
        self.state_at(&Site::new(cell, t as Time))
    }
}

/// `⌈max(i)/2⌉`, clamped at zero.
pub(crate) fn diagonal_start(index: &Coord) -> Time {
    let m = index.max_component().max(0) as Time;
    m.div_ceil(2)
}

/// Letters of `Dg_i`: `letters[j]` is the state at `((start_time+j)·1 − i, start_time+j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalWord {
    pub index: Coord,
    pub start_time: Time,
    pub letters: Vec<StateId>,
}

/// A fully materialized diagram up to its horizon.
#[derive(Clone, Debug)]
pub struct SpaceTimeDiagram {
    ca: ImpulseCA,
    horizon: Time,
    slices: Vec<Slice>,
}

impl SpaceTimeDiagram {
    pub fn from_slices(ca: ImpulseCA, slices: Vec<Slice>) -> Self {
        assert!(!slices.is_empty(), "a diagram has at least slice 0");
        let horizon = (slices.len() - 1) as Time;
        SpaceTimeDiagram { ca, horizon, slices }
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn slice(&self, t: Time) -> Option<&Slice> {
        self.slices.get(t as usize)
    }

    pub fn stored_sites(&self) -> usize {
        self.slices.iter().map(Slice::len).sum()
    }

    /// All stored `(site, state)` pairs in time order.
    pub fn sites(&self) -> impl Iterator<Item = (Site, StateId)> + '_ {
        self.slices
            .iter()
            .enumerate()
            .flat_map(|(t, s)| s.iter().map(move |(c, st)| (Site::new(c, t as Time), st)))
    }

    /// Site-for-site equality of the stored states up to the common horizon.
    pub fn same_states(&self, other: &SpaceTimeDiagram) -> bool {
        self.horizon == other.horizon && self.slices == other.slices
    }
}

impl SiteLookup for SpaceTimeDiagram {
    fn ca(&self) -> &ImpulseCA {
        &self.ca
    }

    fn horizon(&self) -> Time {
        self.horizon
    }

    fn state_at(&self, site: &Site) -> Result<StateId, EngineError> {
        if site.cell.dim() != self.ca.dim() {
            return Err(EngineError::DimensionMismatch { expected: self.ca.dim(), found: site.cell.dim() });
        }
        if site.time > self.horizon {
            return Err(EngineError::BeyondHorizon { time: site.time as i64, horizon: self.horizon });
        }
        if !in_light_cone(site) || !parity_valid(site, self.ca.neighborhood()) {
            return Ok(self.ca.quiescent());
        }
        Ok(self.slices[site.time as usize].get(&site.cell).unwrap_or(self.ca.quiescent()))
    }
}

pub fn run(ca: &ImpulseCA, horizon: Time) -> Result<SpaceTimeDiagram, EngineError> {
    run_with(ca, horizon, &RunOptions::default())
}

pub fn run_with(ca: &ImpulseCA, horizon: Time, opts: &RunOptions) -> Result<SpaceTimeDiagram, EngineError> {
    match run_bounded(ca, horizon, opts) {
        (d, None) => Ok(d),
        (_, Some(e)) => Err(e),
    }
}

/// Like [`run_with`] but hands back the slices completed before a failure.
pub fn run_bounded(
    ca: &ImpulseCA,
    horizon: Time,
    opts: &RunOptions,
) -> (SpaceTimeDiagram, Option<EngineError>) {
    let first = Slice::initial(ca);
    let mut stored = first.len();
    let mut slices = vec![first];
    if horizon > MAX_HORIZON {
        return (SpaceTimeDiagram::from_slices(ca.clone(), slices), Some(EngineError::HorizonTooLarge(horizon)));
    }
    let mut table = match CompiledTable::new(ca) {
        Ok(t) => t,
        Err(e) => return (SpaceTimeDiagram::from_slices(ca.clone(), slices), Some(e.into())),
    };
    for t in 1..=horizon {
        let next = match step(slices.last().unwrap(), t, ca, &mut table, opts.band) {
            Ok(s) => s,
            Err(e) => return (SpaceTimeDiagram::from_slices(ca.clone(), slices), Some(e.into())),
        };
        stored += next.len();
        if stored > opts.budget {
            let err = EngineError::OverflowHorizon { last_completed: t - 1 };
            return (SpaceTimeDiagram::from_slices(ca.clone(), slices), Some(err));
        }
        slices.push(next);
    }
    (SpaceTimeDiagram::from_slices(ca.clone(), slices), None)
}
