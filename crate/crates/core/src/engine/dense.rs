use alloc::vec;
use alloc::vec::Vec;

use super::slice::Slice;
use super::{EngineError, SpaceTimeDiagram};
use crate::automaton::{ImpulseCA, StateId};
use crate::lattice::{Coord, Time, MAX_DIM};

/// Brute-force simulation over the whole box `[-t, t]^k` at every step.
///
/// Every cell is evaluated with the rule table directly, including
/// parity-invalid trellis cells, so nothing here is shared with the sparse
/// engine. Memory is two dense boxes; the budget bounds their cell count.
pub fn dense_run(ca: &ImpulseCA, horizon: Time, budget: usize) -> Result<SpaceTimeDiagram, EngineError> {
    let k = ca.dim();
    let lambda = ca.quiescent();
    let side = |t: Time| 2 * t as usize + 1;
    let cells = |t: Time| side(t).checked_pow(k as u32);
    if cells(horizon).is_none_or(|c| c > budget) {
        return Err(EngineError::OverflowHorizon { last_completed: 0 });
    }

    // Row-major with the first coordinate most significant, so iteration
    // order is lexicographic.
    let index = |c: &[i32], t: Time| -> Option<usize> {
        let s = side(t) as i64;
        let mut idx = 0i64;
        for &v in c {
            let shifted = v as i64 + t as i64;
            if !(0..s).contains(&shifted) {
                return None;
            }
            idx = idx * s + shifted;
        }
        Some(idx as usize)
    };

    let mut grid = vec![lambda; 1];
    grid[0] = ca.seed();
    let mut slices = vec![Slice::initial(ca)];
    let mut neighbors = vec![lambda; ca.order().len()];
    for t in 1..=horizon {
        let n = cells(t).unwrap();
        let mut next: Vec<StateId> = Vec::with_capacity(n);
        let mut out = Slice::empty(k);
        let mut cur = [0i32; MAX_DIM];
        for c in cur[..k].iter_mut() {
            *c = -(t as i32);
        }
        for _ in 0..n {
            for (slot, x) in ca.order().iter().enumerate() {
                let mut nb = [0i32; MAX_DIM];
                for a in 0..k {
                    nb[a] = cur[a] + x[a];
                }
                neighbors[slot] = index(&nb[..k], t - 1).map_or(lambda, |i| grid[i]);
            }
            let s = ca.apply(&neighbors)?;
            next.push(s);
            if s != lambda {
                out.push(Coord::from_slice(&cur[..k]).as_slice(), s);
            }
            // odometer, last coordinate fastest
            for a in (0..k).rev() {
                if cur[a] < t as i32 {
                    cur[a] += 1;
                    break;
                }
                cur[a] = -(t as i32);
            }
        }
        grid = next;
        slices.push(out);
    }
    Ok(SpaceTimeDiagram::from_slices(ca.clone(), slices))
}
