use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::lattice::{NeighborhoodKind, Time};
use crate::signals::Signal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GapClass {
    Constant,
    LogarithmicOrAbove,
    BelowLogSuspect,
}

impl GapClass {
    pub fn name(self) -> &'static str {
        match self {
            GapClass::Constant => "Constant",
            GapClass::LogarithmicOrAbove => "LogarithmicOrAbove",
            GapClass::BelowLogSuspect => "BelowLogSuspect",
        }
    }
}

/// A distance level `M` that the signal has left for good, with the last time
/// it held and the smallest integer `C` with `t_last < C^M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Level {
    pub m: u64,
    pub last_time: Time,
    pub c: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub classification: GapClass,
    /// `(t, m(t))` for every time of the signal.
    pub samples: Vec<(Time, u64)>,
    /// Smallest integer `C` with `t < C^{m(t)}` over all samples with `m >= 1`.
    pub fitted_c: Option<u64>,
    pub levels: Vec<Level>,
    /// Last time at which `m` changed (0 if never).
    pub last_change: Time,
}

/// Fraction of the signal after which `m` must not change for `Constant`.
pub const CONSTANT_TAIL_DIVISOR: usize = 8;
/// Number of trailing complete levels whose `C` must strictly increase for
/// `BelowLogSuspect`.
pub const SUSPECT_LEVELS: usize = 3;

/// Smallest `c >= 2` with `t < c^m`, for `m >= 1`.
pub fn min_base_exceeding(t: u64, m: u64) -> u64 {
    assert!(m >= 1);
    let exceeds = |c: u64| -> bool {
        let mut p: u64 = 1;
        for _ in 0..m {
            match p.checked_mul(c) {
                Some(q) if q > t => return true,
                Some(q) => p = q,
                None => return true,
            }
        }
        p > t
    };
    let (mut lo, mut hi) = (2u64, t.max(2) + 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if exceeds(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Distance of the signal behind the maximal-speed diagonal:
/// `m(t) = max_a (t - u_a(t))`, halved on the trellis where each lagging
/// step costs two units.
pub fn lag(t: Time, cell: &[i32], kind: NeighborhoodKind) -> u64 {
    let raw = cell.iter().map(|&u| t as i64 - u as i64).max().unwrap_or(0).max(0) as u64;
    match kind {
        NeighborhoodKind::Trellis => raw / 2,
        _ => raw,
    }
}

/// Classifies how far a signal trails the diagonal.
///
/// `Constant` when `m` stops changing within the first eighth of the signal;
/// `BelowLogSuspect` when the per-level bases `C_M` strictly increase over
/// the last three levels the signal has left (no single `C` with
/// `t < C^{m(t)}` is in sight); `LogarithmicOrAbove` otherwise.
pub fn gap_probe(signal: &Signal, kind: NeighborhoodKind) -> GapReport {
    let samples: Vec<(Time, u64)> =
        signal.sites().map(|s| (s.time, lag(s.time, s.cell.as_slice(), kind))).collect();
    gap_probe_samples(samples)
}

/// [`gap_probe`] on precomputed `(t, m(t))` samples.
pub fn gap_probe_samples(samples: Vec<(Time, u64)>) -> GapReport {
    let last_change = samples
        .windows(2)
        .rev()
        .find(|w| w[0].1 != w[1].1)
        .map(|w| w[1].0)
        .unwrap_or(0);

    let fitted_c = samples
        .iter()
        .filter(|(_, m)| *m >= 1)
        .map(|&(t, m)| min_base_exceeding(t as u64, m))
        .max();

    // A level is complete once a sample after its last occurrence exceeds it.
    let mut levels: Vec<Level> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut running_max: Option<u64> = None;
    for &(t, m) in samples.iter().rev() {
        if seen.insert(m) && m >= 1 && running_max.is_some_and(|r| r > m) {
            levels.push(Level { m, last_time: t, c: min_base_exceeding(t as u64, m) });
        }
        running_max = Some(running_max.map_or(m, |r| r.max(m)));
    }
    levels.sort_by_key(|l| l.m);

    let classification = if (last_change as usize) * CONSTANT_TAIL_DIVISOR <= samples.len() {
        GapClass::Constant
    } else if levels.len() >= SUSPECT_LEVELS
        && levels[levels.len() - SUSPECT_LEVELS..].windows(2).all(|w| w[0].c < w[1].c)
    {
        GapClass::BelowLogSuspect
    } else {
        GapClass::LogarithmicOrAbove
    };
    GapReport { classification, samples, fitted_c, levels, last_change }
}
