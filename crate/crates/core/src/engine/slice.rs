//! Sorted sparse time slices and the frontier step.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::automaton::{next_tuple, tuple_count, AutomatonError, ImpulseCA, RuleTable, StateId};
use crate::lattice::{Coord, Time, MAX_DIM};

/// Non-quiescent cells of one time step, sorted lexicographically by cell.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Slice {
    dim: usize,
    cells: Vec<i32>,
    states: Vec<StateId>,
}

impl Slice {
    pub fn empty(dim: usize) -> Self {
        Slice { dim, cells: Vec::new(), states: Vec::new() }
    }

    /// Slice 0 of an impulse CA: the seed at the origin unless it is quiescent.
    pub fn initial(ca: &ImpulseCA) -> Self {
        let mut s = Slice::empty(ca.dim());
        if ca.seed() != ca.quiescent() {
            s.push(Coord::zero(ca.dim()).as_slice(), ca.seed());
        }
        s
    }

    /// Builds a slice from `(cell, state)` pairs in any order. Later
    /// duplicates overwrite earlier ones; quiescent entries are kept, so
    /// callers filter them.
    pub fn from_cells(dim: usize, cells: impl IntoIterator<Item = (Coord, StateId)>) -> Self {
        let map: BTreeMap<Coord, StateId> = cells.into_iter().collect();
        let mut s = Slice::empty(dim);
        for (c, st) in map {
            debug_assert_eq!(c.dim(), dim);
            s.push(c.as_slice(), st);
        }
        s
    }

    pub(crate) fn push(&mut self, cell: &[i32], state: StateId) {
        debug_assert!(self.is_empty() || self.cell_slice(self.len() - 1) < cell);
        self.cells.extend_from_slice(cell);
        self.states.push(state);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    #[inline]
    fn cell_slice(&self, n: usize) -> &[i32] {
        &self.cells[n * self.dim..(n + 1) * self.dim]
    }

    pub fn cell(&self, n: usize) -> Coord {
        Coord::from_slice(self.cell_slice(n))
    }

    pub fn state(&self, n: usize) -> StateId {
        self.states[n]
    }

    pub fn get(&self, cell: &Coord) -> Option<StateId> {
        if cell.dim() != self.dim {
            return None;
        }
        let target = cell.as_slice();
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.cell_slice(mid).cmp(target) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(self.states[mid]),
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coord, StateId)> + '_ {
        (0..self.len()).map(move |n| (self.cell(n), self.states[n]))
    }

    /// Cells translated by `-x`, still sorted.
    fn translated(&self, x: &Coord) -> Vec<i32> {
        let mut out = Vec::with_capacity(self.cells.len());
        for chunk in self.cells.chunks_exact(self.dim) {
            out.extend(chunk.iter().zip(x.as_slice()).map(|(c, o)| c - o));
        }
        out
    }
}

fn merge_union(a: &[i32], b: &[i32], dim: usize) -> Vec<i32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (ca, cb) = (&a[i..i + dim], &b[j..j + dim]);
        match ca.cmp(cb) {
            Ordering::Less => {
                out.extend_from_slice(ca);
                i += dim;
            }
            Ordering::Greater => {
                out.extend_from_slice(cb);
                j += dim;
            }
            Ordering::Equal => {
                out.extend_from_slice(ca);
                i += dim;
                j += dim;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Transition lookup used by the sparse engine: a dense table indexed by the
/// neighbor tuple when `|S|^v` is small, otherwise a memo over the rule table.
pub(crate) enum CompiledTable<'a> {
    Dense { radix: usize, map: Vec<StateId> },
    Memo { table: &'a RuleTable, cache: BTreeMap<Vec<StateId>, StateId> },
}

const DENSE_LIMIT: u64 = 1 << 16;

impl<'a> CompiledTable<'a> {
    pub(crate) fn new(ca: &'a ImpulseCA) -> Result<Self, AutomatonError> {
        let radix = ca.num_states();
        let arity = ca.order().len();
        match tuple_count(radix, arity) {
            Some(n) if n <= DENSE_LIMIT => {
                let mut map = Vec::with_capacity(n as usize);
                let mut t = vec![StateId(0); arity];
                loop {
                    map.push(ca.apply(&t)?);
                    if !next_tuple(&mut t, radix) {
                        break;
                    }
                }
                Ok(CompiledTable::Dense { radix, map })
            }
            _ => Ok(CompiledTable::Memo { table: ca.table(), cache: BTreeMap::new() }),
        }
    }

    #[inline]
    pub(crate) fn lookup(&mut self, neighbors: &[StateId]) -> Result<StateId, AutomatonError> {
        match self {
            CompiledTable::Dense { radix, map } => {
                let idx = neighbors.iter().rev().fold(0usize, |acc, s| acc * *radix + s.index());
                Ok(map[idx])
            }
            CompiledTable::Memo { table, cache } => {
                if let Some(&r) = cache.get(neighbors) {
                    return Ok(r);
                }
                let r = table.apply(neighbors)?;
                cache.insert(neighbors.to_vec(), r);
                Ok(r)
            }
        }
    }
}

/// Computes slice `t + 1` from slice `t`.
///
/// Candidates are the cells with at least one non-quiescent neighbor, i.e.
/// the union of the support translated by each `-x`. Translation keeps
/// lexicographic order, so the candidates come out of a merge and every
/// neighbor lookup is a forward pointer scan. With `band = Some(b)` only
/// cells with `max_a (t+1 - u_a) <= b` are evaluated; that region only
/// depends on itself.
pub(crate) fn step(
    prev: &Slice,
    next_time: Time,
    ca: &ImpulseCA,
    table: &mut CompiledTable<'_>,
    band: Option<u32>,
) -> Result<Slice, AutomatonError> {
    let dim = prev.dim;
    let order = ca.order();
    let lambda = ca.quiescent();
    let mut next = Slice::empty(dim);
    if prev.is_empty() {
        return Ok(next);
    }
    let mut candidates = prev.translated(&order[0]);
    for x in &order[1..] {
        candidates = merge_union(&candidates, &prev.translated(x), dim);
    }
    let mut pointers = vec![0usize; order.len()];
    let mut neighbors = vec![lambda; order.len()];
    let mut target = [0i32; MAX_DIM];
    let t_next = next_time as i64;
    for u in candidates.chunks_exact(dim) {
        if let Some(b) = band {
            if u.iter().any(|&c| t_next - c as i64 > b as i64) {
                continue;
            }
        }
        for (slot, x) in order.iter().enumerate() {
            for (a, (c, o)) in u.iter().zip(x.as_slice()).enumerate() {
                target[a] = c + o;
            }
            let target = &target[..dim];
            let p = &mut pointers[slot];
            while *p < prev.len() && prev.cell_slice(*p) < target {
                *p += 1;
            }
            neighbors[slot] = if *p < prev.len() && prev.cell_slice(*p) == target {
                prev.states[*p]
            } else {
                lambda
            };
        }
        let s = table.lookup(&neighbors)?;
        if s != lambda {
            next.push(u, s);
        }
    }
    Ok(next)
}
