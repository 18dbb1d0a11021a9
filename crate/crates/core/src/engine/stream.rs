use alloc::boxed::Box;
use alloc::collections::BTreeMap;

use super::slice::{step, CompiledTable, Slice};
use super::{EngineError, RunOptions, SiteLookup};
use crate::automaton::{ImpulseCA, StateId};
use crate::lattice::{in_light_cone, parity_valid, Coord, Site, Time, MAX_HORIZON};

/// Evolves a diagram one slice at a time, keeping only the live slice.
pub struct Stepper<'a> {
    ca: &'a ImpulseCA,
    table: CompiledTable<'a>,
    opts: RunOptions,
    time: Time,
    current: Slice,
}

impl<'a> Stepper<'a> {
    pub fn new(ca: &'a ImpulseCA, opts: RunOptions) -> Result<Self, EngineError> {
        Ok(Stepper {
            ca,
            table: CompiledTable::new(ca)?,
            opts,
            time: 0,
            current: Slice::initial(ca),
        })
    }

    pub fn ca(&self) -> &ImpulseCA {
        self.ca
    }

    pub fn time(&self) -> Time {
        self.time
    }

    pub fn slice(&self) -> &Slice {
        &self.current
    }

    /// State of a cell at the current time.
    pub fn state(&self, cell: &Coord) -> StateId {
        self.current.get(cell).unwrap_or(self.ca.quiescent())
    }

    pub fn step(&mut self) -> Result<(), EngineError> {
        if self.time >= MAX_HORIZON {
            return Err(EngineError::HorizonTooLarge(self.time + 1));
        }
        let next = step(&self.current, self.time + 1, self.ca, &mut self.table, self.opts.band)?;
        if next.len() > self.opts.budget {
            return Err(EngineError::OverflowHorizon { last_completed: self.time });
        }
        self.current = next;
        self.time += 1;
        Ok(())
    }
}

type Keep = Box<dyn Fn(&Coord, Time) -> bool>;

/// Sites of a streamed run restricted to a region.
///
/// Lookups inside the region answer like a full diagram; lookups outside it
/// fail with [`EngineError::NotRecorded`] rather than guessing.
pub struct RegionRecord {
    ca: ImpulseCA,
    horizon: Time,
    keep: Keep,
    sites: BTreeMap<Site, StateId>,
}

impl RegionRecord {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> impl Iterator<Item = (&Site, &StateId)> {
        self.sites.iter()
    }

    pub fn contains_region(&self, site: &Site) -> bool {
        (self.keep)(&site.cell, site.time)
    }
}

impl SiteLookup for RegionRecord {
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
        if !(self.keep)(&site.cell, site.time) {
            return Err(EngineError::NotRecorded(*site));
        }
        Ok(self.sites.get(site).copied().unwrap_or(self.ca.quiescent()))
    }
}

/// Streams `ca` to `horizon` and records the non-quiescent sites for which
/// `keep(cell, t)` holds.
pub fn record_region(
    ca: &ImpulseCA,
    horizon: Time,
    opts: &RunOptions,
    keep: impl Fn(&Coord, Time) -> bool + 'static,
) -> Result<RegionRecord, EngineError> {
    let mut stepper = Stepper::new(ca, *opts)?;
    let mut sites = BTreeMap::new();
    loop {
        let t = stepper.time();
        for (c, s) in stepper.slice().iter() {
            if keep(&c, t) {
                sites.insert(Site::new(c, t), s);
            }
        }
        if t >= horizon {
            break;
        }
        stepper.step()?;
    }
    Ok(RegionRecord { ca: ca.clone(), horizon, keep: Box::new(keep), sites })
}
