use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::engine::{EngineError, SiteLookup};
use crate::lattice::Coord;

/// `q[p]` is the smallest period of the suffix `w[p..]`.
///
/// A word and its reverse share their periods, so the prefix function of the
/// reversed word gives every suffix at once.
pub fn smallest_suffix_periods<T: Eq>(w: &[T]) -> Vec<usize> {
    let n = w.len();
    let rev = |j: usize| &w[n - 1 - j];
    let mut pi = vec![0usize; n];
    for j in 1..n {
        let mut k = pi[j - 1];
        while k > 0 && rev(j) != rev(k) {
            k = pi[k - 1];
        }
        if rev(j) == rev(k) {
            k += 1;
        }
        pi[j] = k;
    }
    (0..n).map(|p| (n - p) - pi[n - p - 1]).collect()
}

/// First `(p, q[p])` in increasing `p` that `accept` admits.
pub fn first_fit(periods: &[usize], accept: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
    periods.iter().enumerate().map(|(p, &q)| (p, q)).find(|&(p, q)| accept(p, q))
}

/// `w = α·β^∞` over the observed window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodDecomposition<T> {
    pub alpha: Vec<T>,
    pub beta: Vec<T>,
    pub horizon_used: usize,
    pub confirmed: bool,
}

impl<T: Clone> PeriodDecomposition<T> {
    /// Letter `j` of `α·β^∞`.
    pub fn letter(&self, j: usize) -> &T {
        if j < self.alpha.len() {
            &self.alpha[j]
        } else {
            &self.beta[(j - self.alpha.len()) % self.beta.len()]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeriodOutcome<T> {
    Periodic(PeriodDecomposition<T>),
    NotPeriodicWithin(usize),
}

impl<T> PeriodOutcome<T> {
    pub fn decomposition(&self) -> Option<&PeriodDecomposition<T>> {
        match self {
            PeriodOutcome::Periodic(d) => Some(d),
            PeriodOutcome::NotPeriodicWithin(_) => None,
        }
    }
}

/// Smallest `(|α|, |β|)` explaining `w[..h]` whose period is seen repeating
/// over at least `⌈h/3⌉` letters after its first occurrence.
pub fn ultimate_period<T: Eq + Clone>(w: &[T], h: usize) -> PeriodOutcome<T> {
    assert!(h >= 4 && w.len() >= h, "need a window of at least 4 letters");
    let w = &w[..h];
    let need = h.div_ceil(3);
    match first_fit(&smallest_suffix_periods(w), |p, q| h - p - q >= need) {
        Some((p, q)) => PeriodOutcome::Periodic(PeriodDecomposition {
            alpha: w[..p].to_vec(),
            beta: w[p..p + q].to_vec(),
            horizon_used: h,
            confirmed: true,
        }),
        None => PeriodOutcome::NotPeriodicWithin(h),
    }
}

pub fn lcm_upto(n: u64) -> u64 {
    (1..=n).fold(1, |acc, k| acc / crate::automaton::gcd(acc, k) * k)
}

/// `n | base^e` without computing the power.
pub fn divides_power(mut n: u64, base: u64, e: u32) -> bool {
    for _ in 0..e {
        let g = crate::automaton::gcd(n, base);
        if g == 1 {
            break;
        }
        n /= g;
    }
    n == 1
}

/// One diagonal's decomposition checked against the length envelopes
/// `|α| < |S|·L^r`, `|β| | L^(r+1)` (`L = lcm(1..|S|)`) and against the
/// diagonals it depends on: with `P` the lcm of their periods and `M` the
/// longest of their preperiods, `|β|` divides `v·P` for some `v <= |S|` and
/// `|α| <= M + |S|·P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalReport {
    pub index: Coord,
    pub r: u32,
    /// `(|α|, |β|)`, absent when no period was confirmed.
    pub lengths: Option<(usize, usize)>,
    pub alpha_bound: Option<bool>,
    pub beta_divides: Option<bool>,
    /// Absent when a lower diagonal is itself unconfirmed.
    pub recursive_beta: Option<bool>,
    pub recursive_alpha: Option<bool>,
}

impl DiagonalReport {
    pub fn confirmed(&self) -> bool {
        self.lengths.is_some()
    }

    /// All checks that could be evaluated passed.
    pub fn bounds_hold(&self) -> bool {
        [self.alpha_bound, self.beta_divides, self.recursive_beta, self.recursive_alpha]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

/// Natural indices with `i_1 + … + i_k <= r_max`, by `r` then lexicographically.
pub fn diagonal_indices(dim: usize, r_max: u32) -> Vec<Coord> {
    let mut out = Vec::new();
    for r in 0..=r_max {
        let mut c = vec![0i32; dim];
        compositions(&mut c, 0, r as i32, &mut out);
    }
    out
}

fn compositions(c: &mut [i32], at: usize, left: i32, out: &mut Vec<Coord>) {
    if at + 1 == c.len() {
        c[at] = left;
        out.push(Coord::from_slice(c));
        return;
    }
    for v in 0..=left {
        c[at] = v;
        compositions(c, at + 1, left - v, out);
    }
}

/// Decomposes every diagonal with `r <= r_max` over `h` letters and checks
/// the envelopes. The diagram (or recorded region) must reach
/// `⌈r_max/2⌉ + h`.
pub fn verify_period_bounds<D: SiteLookup + ?Sized>(
    d: &D,
    r_max: u32,
    h: usize,
) -> Result<Vec<DiagonalReport>, EngineError> {
    let ca = d.ca();
    let states = ca.num_states() as u64;
    let big_l = lcm_upto(states) as u128;
    let minus_one = Coord::splat(ca.dim(), -1);
    let ones = Coord::splat(ca.dim(), 1);
    let mut found: BTreeMap<Coord, Option<(usize, usize)>> = BTreeMap::new();
    let mut reports = Vec::new();
    for index in diagonal_indices(ca.dim(), r_max) {
        let r = index.component_sum() as u32;
        let word = d.diagonal(&index, h)?;
        let lengths = ultimate_period(&word.letters, h).decomposition().map(|p| (p.alpha.len(), p.beta.len()));
        found.insert(index, lengths);

        let mut lower: Option<(u128, u128)> = Some((1, 0));
        for x in ca.order() {
            if *x == minus_one {
                continue;
            }
            let j = index.checked_sub(&ones)?.checked_sub(x)?;
            let l = if j.is_natural() { found.get(&j).copied().flatten() } else { Some((0, 1)) };
            lower = match (lower, l) {
                (Some((p, m)), Some((a, b))) => {
                    let b = b as u128;
                    Some((p / gcd128(p, b) * b, m.max(a as u128)))
                }
                _ => None,
            };
        }

        let report = match lengths {
            None => DiagonalReport {
                index,
                r,
                lengths,
                alpha_bound: None,
                beta_divides: None,
                recursive_beta: None,
                recursive_alpha: None,
            },
            Some((a, b)) => {
                let envelope = big_l.checked_pow(r).map(|p| p.saturating_mul(states as u128));
                let (rb, ra) = match lower {
                    Some((p, m)) => (
                        Some((1..=states as u128).any(|v| (v * p) % b as u128 == 0)),
                        Some(a as u128 <= m + states as u128 * p),
                    ),
                    None => (None, None),
                };
                DiagonalReport {
                    index,
                    r,
                    lengths,
                    alpha_bound: Some(envelope.is_none_or(|e| (a as u128) < e)),
                    beta_divides: Some(divides_power(b as u64, big_l as u64, r + 1)),
                    recursive_beta: rb,
                    recursive_alpha: ra,
                }
            }
        };
        reports.push(report);
    }
    Ok(reports)
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
