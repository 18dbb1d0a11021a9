use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::{trellis_order, Alphabet, ImpulseCA, Matcher, Rule, RuleTable, StateId};
use crate::engine::{run, EngineError, SiteLookup};
use crate::lattice::{Coord, Neighborhood, Site};

/// Number of two-state trellis tables with `f(0,0,0,0) = 0`.
pub const TWO_STATE_CANDIDATES: usize = 1 << 15;

/// The four values the forced partition needs, in order:
/// `⟨(0,0),0⟩ = 1`, `⟨(1,1),1⟩ = 0`, `⟨(0,0),2⟩ = 1`, `⟨(1,1),3⟩ = 1`.
pub const REQUIRED_SITES: [((i32, i32), u32, u16); 4] =
    [((0, 0), 0, 1), ((1, 1), 1, 0), ((0, 0), 2, 1), ((1, 1), 3, 1)];

/// The two-state table with code `code`: bit `n` of `code << 1` is
/// `f(tuple n)`, tuples numbered with the first argument least significant.
pub fn two_state_candidate(code: u16) -> Result<ImpulseCA, EngineError> {
    let bits = (code as u32) << 1;
    let rules = (0..16u32)
        .map(|n| {
            let pattern = (0..4).map(|a| Matcher::Literal(StateId(((n >> a) & 1) as u16))).collect();
            Rule::new(pattern, StateId(((bits >> n) & 1) as u16))
        })
        .collect();
    Ok(ImpulseCA::new(
        Alphabet::new(["0", "1"])?,
        Neighborhood::trellis(2),
        trellis_order(),
        RuleTable::new(4, rules)?,
        StateId(0),
        StateId(1),
    )?)
}

/// Which required values a candidate produces correctly.
pub fn required_values(ca: &ImpulseCA) -> Result<[bool; 4], EngineError> {
    let d = run(ca, 3)?;
    let mut ok = [false; 4];
    for (n, ((x, y), t, want)) in REQUIRED_SITES.iter().enumerate() {
        let s = d.state_at(&Site::new(Coord::from_slice(&[*x, *y]), *t))?;
        ok[n] = s == StateId(*want);
    }
    Ok(ok)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub total_candidates: usize,
    pub passing: usize,
    /// Codes of passing tables.
    pub witnesses: Vec<u16>,
    /// Candidates failing `⟨(1,1),1⟩` or `⟨(1,1),3⟩`.
    pub fail_odd_pair: usize,
    /// Candidates failing `⟨(0,0),0⟩` or `⟨(0,0),2⟩`.
    pub fail_even_pair: usize,
    /// Candidates failing neither pair yet not passing (always 0).
    pub unlocalized: usize,
    /// Per required site, how many candidates get it wrong.
    pub per_site_failures: [usize; 4],
    /// Codes in enumeration order.
    pub order: Vec<u16>,
}

/// Enumerates every two-state table (or the first `limit`) and checks the
/// values the optimality argument requires.
pub fn exhaustive_two_state_search(limit: Option<usize>) -> Result<SearchReport, EngineError> {
    let total = limit.map_or(TWO_STATE_CANDIDATES, |l| l.min(TWO_STATE_CANDIDATES));
    let mut report = SearchReport {
        total_candidates: total,
        passing: 0,
        witnesses: Vec::new(),
        fail_odd_pair: 0,
        fail_even_pair: 0,
        unlocalized: 0,
        per_site_failures: [0; 4],
        order: vec![0; total],
    };
    for code in 0..total as u16 {
        report.order[code as usize] = code;
        let ok = required_values(&two_state_candidate(code)?)?;
        for (n, good) in ok.iter().enumerate() {
            if !good {
                report.per_site_failures[n] += 1;
            }
        }
        let odd = !(ok[1] && ok[3]);
        let even = !(ok[0] && ok[2]);
        if odd {
            report.fail_odd_pair += 1;
        }
        if even {
            report.fail_even_pair += 1;
        }
        if ok.iter().all(|b| *b) {
            report.passing += 1;
            report.witnesses.push(code);
        } else if !odd && !even {
            report.unlocalized += 1;
        }
    }
    Ok(report)
}
