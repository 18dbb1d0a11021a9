//! End-to-end checks with JSON reports. Each listing keeps at most
//! [`MAX_LISTED`] entries next to the full count.

use ca_signals_core::analysis::{
    base_xy_readout, binary_readout, exhaustive_two_state_search, lcm_upto, verify_period_bounds, AnalysisError,
    REQUIRED_SITES,
};
use ca_signals_core::automaton::{builtin_log2, builtin_quiescent, builtin_xy};
use ca_signals_core::engine::{record_region, EngineError, SiteLookup};
use ca_signals_core::signals::{
    anchor_mismatches, detect_streaming, follow_streaming, follower_for_xy, is_basic, log_anchor_signal, Basic,
    FollowerEntry, SignalError,
};
use ca_signals_core::{Follower, ImpulseCA, MoveConvention, MovePartition, Neighborhood, RunOptions, StateId, Time};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::formats::SiteRecord;

pub const MAX_LISTED: usize = 100;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Automaton(#[from] ca_signals_core::automaton::AutomatonError),
}

/// A capped list of findings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Findings<T> {
    pub count: usize,
    pub first: Vec<T>,
}

impl<T> Default for Findings<T> {
    fn default() -> Self {
        Findings { count: 0, first: Vec::new() }
    }
}

impl<T> Findings<T> {
    fn push(&mut self, x: T) {
        self.count += 1;
        if self.first.len() < MAX_LISTED {
            self.first.push(x);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowMismatch {
    pub k: u64,
    pub l: u64,
    pub got: Vec<String>,
    pub want: Vec<String>,
}

fn digits(mut n: u64, base: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % base);
        n /= base;
    }
    out
}

fn to_strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(T::to_string).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Log2Report {
    pub pass: bool,
    pub steps: Time,
    pub anchors: usize,
    pub anchor_mismatches: Findings<SiteRecord>,
    /// Counter rows read: `l = 0` for every `k`, plus `l = 1..=rows`.
    pub rows_checked: usize,
    pub row_mismatches: Findings<RowMismatch>,
}

/// Detection against the base-2 anchors, and the counter rows `W(k, l, ·)`
/// for `l <= rows` against integer arithmetic: `l = 0` spells `k+1` in
/// binary, `l > 0` is `1^ĩ 0^(len-ĩ)` with `ĩ` the trailing ones of `k+1`.
pub fn verify_log2(steps: Time, rows: u32, opts: &RunOptions) -> Result<Log2Report, VerifyError> {
    let ca = builtin_log2();
    let p = MovePartition::log2(&ca)?;
    let signal = detect_streaming(&ca, &p, MoveConvention::Negated, steps, opts)?;
    let anchors = log_anchor_signal(2, steps);
    let mut anchor_findings = Findings::default();
    for s in anchor_mismatches(&signal, &anchors) {
        anchor_findings.push(SiteRecord { t: s.time, u: s.cell.as_slice().to_vec() });
    }

    let band = 2 * rows as i32;
    let rec = record_region(&ca, steps, &RunOptions { band: None, ..*opts }, move |c, _| {
        (c[0] - c[1]).abs() <= band
    })?;
    let symbol = |s: StateId| ca.symbol(s).to_string();
    let mut rows_checked = 0;
    let mut row_findings = Findings::default();
    for k in 0u64.. {
        let n = k + 1;
        let len = 64 - n.leading_zeros() as u64;
        if k + len > steps as u64 {
            break;
        }
        rows_checked += 1;
        let got = binary_readout(&rec, k)?;
        let want = digits(n, 2);
        if got.iter().map(|&b| b as u64).ne(want.iter().copied()) {
            row_findings.push(RowMismatch { k, l: 0, got: to_strings(&got), want: to_strings(&want) });
        }
        let ones = n.trailing_ones() as u64;
        for l in 1..=rows as u64 {
            if k + l + len > steps as u64 {
                break;
            }
            rows_checked += 1;
            let got = (0..=len)
                .map(|i| rec.w_value(k as i64, l as i64, i as i64).map(symbol))
                .collect::<Result<Vec<_>, _>>()?;
            let mut want: Vec<String> = (0..len).map(|i| if i < ones { "1" } else { "0" }.to_string()).collect();
            want.push("λ".into());
            if got != want {
                row_findings.push(RowMismatch { k, l, got, want });
            }
        }
    }
    Ok(Log2Report {
        pass: anchor_findings.is_empty() && row_findings.is_empty(),
        steps,
        anchors: anchors.len(),
        anchor_mismatches: anchor_findings,
        rows_checked,
        row_mismatches: row_findings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XyReport {
    pub pass: bool,
    pub x: u32,
    pub y: u32,
    pub steps: Time,
    /// Symbols in the table as printed: `λ, π_0..π_x, κ_0..κ_y`.
    pub states_listed: usize,
    /// The count stated alongside the construction, `x + y + 2`.
    pub states_claimed: usize,
    pub anchors: usize,
    pub anchor_mismatches: Findings<SiteRecord>,
    /// Times at which the follower took a transition missing from its table.
    pub unlisted_transitions: Findings<Time>,
    pub readouts_checked: usize,
    pub readout_mismatches: Findings<RowMismatch>,
}

/// The base-`xy` follower against the anchors `⌊log_{xy}(t+1)⌋`, and the
/// two counter planes against the base-`xy` digits of `k+1`.
pub fn verify_xy(x: u32, y: u32, steps: Time, opts: &RunOptions) -> Result<XyReport, VerifyError> {
    let ca = builtin_xy(x, y)?;
    let f = follower_for_xy(&ca, x, y)?;
    let trace = follow_streaming(&ca, &f, MoveConvention::Negated, steps, opts)?;
    let base = x as u64 * y as u64;
    let anchors = log_anchor_signal(base, steps);
    let mut anchor_findings = Findings::default();
    for s in anchor_mismatches(&trace.signal, &anchors) {
        anchor_findings.push(SiteRecord { t: s.time, u: s.cell.as_slice().to_vec() });
    }
    let mut unlisted = Findings::default();
    for t in &trace.unlisted {
        unlisted.push(*t);
    }

    let rec = record_region(&ca, steps, opts, |c, _| matches!(c[0] - c[1], 0 | 2))?;
    let mut readouts_checked = 0;
    let mut readout_findings = Findings::default();
    for k in 0u64.. {
        let want = digits(k + 1, base);
        if k + want.len() as u64 + 1 > steps as u64 {
            break;
        }
        readouts_checked += 1;
        let got = base_xy_readout(&rec, k, x, y)?;
        if got != want {
            readout_findings.push(RowMismatch { k, l: 0, got: to_strings(&got), want: to_strings(&want) });
        }
    }
    Ok(XyReport {
        pass: anchor_findings.is_empty() && unlisted.is_empty() && readout_findings.is_empty(),
        x,
        y,
        steps,
        states_listed: ca.num_states(),
        states_claimed: (x + y + 2) as usize,
        anchors: anchors.len(),
        anchor_mismatches: anchor_findings,
        unlisted_transitions: unlisted,
        readouts_checked,
        readout_mismatches: readout_findings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalEntry {
    pub i: Vec<i32>,
    pub r: u32,
    pub alpha_len: Option<usize>,
    pub beta_len: Option<usize>,
    pub alpha_bound: Option<bool>,
    pub beta_divides: Option<bool>,
    pub recursive_beta: Option<bool>,
    pub recursive_alpha: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    /// Every diagonal confirmed ultimately periodic within the window.
    pub pass: bool,
    pub r_max: u32,
    pub window: usize,
    pub states: usize,
    pub lcm: u64,
    /// The envelope checked, reconstructed from an induction on `r`.
    pub envelope: &'static str,
    pub interpretive: bool,
    pub unconfirmed: usize,
    pub bound_violations: usize,
    pub diagonals: Vec<DiagonalEntry>,
}

/// Diagonals with `i_1 + … + i_k <= r_max` read from a band of width
/// `r_max` behind the front, which is all the sites they touch.
pub fn verify_bounds(ca: &ImpulseCA, r_max: u32, window: usize, opts: &RunOptions) -> Result<BoundsReport, VerifyError> {
    let horizon = r_max.div_ceil(2) + window as Time;
    let band = r_max as i64;
    let rec = record_region(ca, horizon, &RunOptions { band: Some(r_max), ..*opts }, move |c, t| {
        c.as_slice().iter().all(|&u| t as i64 - u as i64 <= band)
    })?;
    let reports = verify_period_bounds(&rec, r_max, window)?;
    let diagonals: Vec<DiagonalEntry> = reports
        .iter()
        .map(|r| DiagonalEntry {
            i: r.index.as_slice().to_vec(),
            r: r.r,
            alpha_len: r.lengths.map(|l| l.0),
            beta_len: r.lengths.map(|l| l.1),
            alpha_bound: r.alpha_bound,
            beta_divides: r.beta_divides,
            recursive_beta: r.recursive_beta,
            recursive_alpha: r.recursive_alpha,
        })
        .collect();
    let unconfirmed = reports.iter().filter(|r| !r.confirmed()).count();
    Ok(BoundsReport {
        pass: unconfirmed == 0,
        r_max,
        window,
        states: ca.num_states(),
        lcm: lcm_upto(ca.num_states() as u64),
        envelope: "|alpha| < |S|*L^r, |beta| divides L^(r+1), L = lcm(1..|S|)",
        interpretive: true,
        unconfirmed,
        bound_violations: reports.iter().filter(|r| !r.bounds_hold()).count(),
        diagonals,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FollowerCase {
    pub seed: u64,
    pub states: usize,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasicReport {
    pub pass: bool,
    pub window: usize,
    pub followers: Vec<FollowerCase>,
    pub log2_window: usize,
    /// `None` when the log2 move sequence shows no period within its window.
    pub log2_period: Option<(usize, usize)>,
}

/// A follower with `states` states and uniformly drawn transitions over the
/// alphabet of `ca`.
pub fn random_follower(ca: &ImpulseCA, states: usize, rng: &mut impl Rng) -> Follower {
    let offsets = ca.neighborhood().offsets();
    let mut entries = Vec::new();
    for q in 0..states {
        for s in ca.alphabet().ids() {
            let offset = offsets[rng.gen_range(0..offsets.len())];
            entries.push(FollowerEntry { q, s, q2: rng.gen_range(0..states), offset });
        }
    }
    let names = (0..states).map(|q| format!("q{q}")).collect();
    Follower::new(names, 0, ca.num_states(), entries, None).expect("every pair is listed")
}

/// Random followers on the blank trellis background must walk basic
/// signals with `p + q <= |Q| + 1`; the binary slow-down must not.
pub fn verify_basic(
    followers: usize,
    window: usize,
    log2_window: usize,
    seed: u64,
    opts: &RunOptions,
) -> Result<BasicReport, VerifyError> {
    let ca = builtin_quiescent(Neighborhood::trellis(2));
    let mut cases = Vec::with_capacity(followers);
    for n in 0..followers {
        let case_seed = seed.wrapping_add(n as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
        let states = rng.gen_range(1..=6);
        let f = random_follower(&ca, states, &mut rng);
        let trace = follow_streaming(&ca, &f, MoveConvention::Negated, window as Time, opts)?;
        let (preperiod, period) = match is_basic(&trace.signal.moves(), window) {
            Basic::Periodic { preperiod, period } => (Some(preperiod), Some(period)),
            Basic::NotPeriodicWithin(_) => (None, None),
        };
        let pass = matches!((preperiod, period), (Some(p), Some(q)) if p + q <= states + 1);
        cases.push(FollowerCase { seed: case_seed, states, preperiod, period, pass });
    }

    let log2 = builtin_log2();
    let p = MovePartition::log2(&log2)?;
    let s = detect_streaming(&log2, &p, MoveConvention::Negated, log2_window as Time, opts)?;
    let log2_period = match is_basic(&s.moves(), log2_window) {
        Basic::Periodic { preperiod, period } => Some((preperiod, period)),
        Basic::NotPeriodicWithin(_) => None,
    };
    Ok(BasicReport {
        pass: cases.iter().all(|c| c.pass) && log2_period.is_none(),
        window,
        followers: cases,
        log2_window,
        log2_period,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RequiredSite {
    pub u: [i32; 2],
    pub t: Time,
    pub s: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchJson {
    pub pass: bool,
    pub total: usize,
    pub passing: usize,
    pub witnesses: Vec<u16>,
    pub checked_sites: Vec<RequiredSite>,
    pub fail_odd_pair: usize,
    pub fail_even_pair: usize,
    pub unlocalized: usize,
    pub per_site_failures: [usize; 4],
    /// SHA-256 of the candidate codes in enumeration order, as little-endian `u16`s.
    pub order_sha256: String,
}

pub fn order_hash(order: &[u16]) -> String {
    let mut h = Sha256::new();
    for code in order {
        h.update(code.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn search_two_state(limit: Option<usize>) -> Result<SearchJson, VerifyError> {
    let r = exhaustive_two_state_search(limit)?;
    Ok(SearchJson {
        pass: r.passing == 0,
        total: r.total_candidates,
        passing: r.passing,
        witnesses: r.witnesses.clone(),
        checked_sites: REQUIRED_SITES
            .iter()
            .map(|((x, y), t, s)| RequiredSite { u: [*x, *y], t: *t, s: s.to_string() })
            .collect(),
        fail_odd_pair: r.fail_odd_pair,
        fail_even_pair: r.fail_even_pair,
        unlocalized: r.unlocalized,
        per_site_failures: r.per_site_failures,
        order_sha256: order_hash(&r.order),
    })
}

/// Serializes any report with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("reports serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_log2_run_passes() {
        let r = verify_log2(200, 4, &RunOptions::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.anchors, log_anchor_signal(2, 200).len());
        assert!(r.rows_checked > 900);
    }

    #[test]
    fn small_xy_run_passes() {
        let r = verify_xy(2, 3, 300, &RunOptions::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!((r.states_listed, r.states_claimed), (8, 7));
        assert!(r.readouts_checked > 290);
    }

    #[test]
    fn findings_are_capped() {
        let mut f = Findings::default();
        for n in 0..250 {
            f.push(n);
        }
        assert_eq!(f.count, 250);
        assert_eq!(f.first.len(), MAX_LISTED);
        assert_eq!(f.first[99], 99);
    }

    #[test]
    fn basic_small() {
        let r = verify_basic(10, 64, 200, 7, &RunOptions::default()).unwrap();
        assert!(r.followers.iter().all(|c| c.pass), "{r:?}");
        assert_eq!(r.log2_period, None);
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(order_hash(&[]), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
        let a = search_two_state(Some(16)).unwrap();
        let b = search_two_state(Some(16)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total, 16);
        assert_eq!(a.order_sha256, order_hash(&(0..16).collect::<Vec<u16>>()));
    }

    #[test]
    fn log2_bounds_small() {
        let r = verify_bounds(&builtin_log2(), 3, 256, &RunOptions::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.diagonals.len(), 10);
        assert_eq!(r.lcm, 6);
        assert_eq!((r.diagonals[0].alpha_len, r.diagonals[0].beta_len), (Some(0), Some(2)));
    }
}
