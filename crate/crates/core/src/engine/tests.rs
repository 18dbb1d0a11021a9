use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::automaton::{
    builtin_log2, builtin_quiescent, builtin_xy, Alphabet, ImpulseCA, Matcher, Rule,
    RuleTable, StateId,
};
use crate::lattice::{in_light_cone, parity_valid, Coord, Neighborhood, NeighborhoodKind, Site};

fn at(d: &impl SiteLookup, x: i32, y: i32, t: u32) -> &str {
    let s = d.state_at(&Site::new(Coord::from_slice(&[x, y]), t)).unwrap();
    d.ca().symbol(s)
}

/// Random total table over `n` states for `nb`, one literal rule per tuple,
/// with `f(λ,…,λ) = λ` and a random non-quiescent seed.
pub(crate) fn random_ca(rng: &mut ChaCha8Rng, n: usize, nb: Neighborhood) -> ImpulseCA {
    let offsets = nb.offsets();
    let v = offsets.len();
    let symbols: Vec<alloc::string::String> = (0..n).map(|i| alloc::format!("s{i}")).collect();
    let mut rules = Vec::new();
    let mut tuple = vec![0usize; v];
    loop {
        let result = if tuple.iter().all(|&s| s == 0) { 0 } else { rng.gen_range(0..n) };
        let pattern = tuple.iter().map(|&s| Matcher::Literal(StateId(s as u16))).collect();
        rules.push(Rule::new(pattern, StateId(result as u16)));
        let mut a = 0;
        while a < v {
            tuple[a] += 1;
            if tuple[a] < n {
                break;
            }
            tuple[a] = 0;
            a += 1;
        }
        if a == v {
            break;
        }
    }
    let seed = StateId(rng.gen_range(1..n) as u16);
    ImpulseCA::new(
        Alphabet::new(symbols).unwrap(),
        nb,
        offsets,
        RuleTable::new(v, rules).unwrap(),
        StateId(0),
        seed,
    )
    .unwrap()
}

fn assert_sound(d: &SpaceTimeDiagram) {
    for (site, s) in d.sites() {
        assert!(in_light_cone(&site), "{site} outside the light cone");
        assert!(parity_valid(&site, d.ca().neighborhood()), "{site} breaks parity");
        assert_ne!(s, d.ca().quiescent());
    }
}

#[test]
fn log2_values_required_by_the_forced_partition() {
    let d = run(&builtin_log2(), 3).unwrap();
    assert_eq!(at(&d, 0, 0, 0), "1");
    assert_eq!(at(&d, 1, 1, 1), "0");
    assert_eq!(at(&d, 0, 0, 2), "1");
    assert_eq!(at(&d, 1, 1, 3), "1");
}

#[test]
fn log2_far_corner_matches_dense_oracle() {
    let ca = builtin_log2();
    let d = run(&ca, 5).unwrap();
    let o = dense_run(&ca, 5, 1 << 20).unwrap();
    assert_eq!(at(&d, 5, 5, 5), "0");
    assert_eq!(at(&o, 5, 5, 5), "0");
}

#[test]
fn quiescent_diagrams_are_empty() {
    for nb in [Neighborhood::trellis(2), Neighborhood::moore(1), Neighborhood::von_neumann(3)] {
        let ca = builtin_quiescent(nb);
        assert_eq!(run(&ca, 10).unwrap().stored_sites(), 0);
        assert_eq!(dense_run(&ca, 4, 1 << 20).unwrap().stored_sites(), 0);
    }
    let d = dense_run(&builtin_quiescent(Neighborhood::trellis(2)), 8, 1 << 20).unwrap();
    assert_eq!(d.stored_sites(), 0);
}

#[test]
fn slice_zero_is_the_seed() {
    let ca = builtin_xy(2, 3).unwrap();
    let d = run(&ca, 0).unwrap();
    let s0: Vec<_> = d.slice(0).unwrap().iter().collect();
    assert_eq!(s0, vec![(Coord::zero(2), ca.seed())]);
}

#[test]
fn dense_oracle_agrees_on_log2() {
    let ca = builtin_log2();
    let d = run(&ca, 16).unwrap();
    assert!(d.same_states(&dense_run(&ca, 16, 1 << 24).unwrap()));
    assert_sound(&d);
}

#[test]
fn dense_oracle_agrees_on_other_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for nb in [
        Neighborhood::moore(1),
        Neighborhood::von_neumann(1),
        Neighborhood::trellis(1),
        Neighborhood::von_neumann(2),
        Neighborhood::trellis(3),
        Neighborhood::von_neumann(3),
    ] {
        for _ in 0..5 {
            let ca = random_ca(&mut rng, 3, nb);
            let t = if nb.dim() == 3 { 6 } else { 12 };
            let d = run(&ca, t).unwrap();
            assert!(d.same_states(&dense_run(&ca, t, 1 << 24).unwrap()), "{nb}");
            assert_sound(&d);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dense_oracle_agrees_on_random_trellis_tables(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ca = random_ca(&mut rng, n, Neighborhood::trellis(2));
        let d = run(&ca, 12).unwrap();
        prop_assert!(d.same_states(&dense_run(&ca, 12, 1 << 24).unwrap()));
        assert_sound(&d);
    }

    #[test]
    fn banded_runs_agree_inside_the_band(seed in any::<u64>(), band in 0u32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ca = random_ca(&mut rng, 3, Neighborhood::trellis(2));
        let full = run(&ca, 20).unwrap();
        let banded = run_with(&ca, 20, &RunOptions::with_band(band)).unwrap();
        for (site, s) in full.sites() {
            let lag = site.cell.as_slice().iter().map(|&u| site.time as i64 - u as i64).max().unwrap();
            if lag <= band as i64 {
                prop_assert_eq!(banded.state_at(&site).unwrap(), s);
            }
        }
        for (site, _) in banded.sites() {
            prop_assert!(full.state_at(&site).unwrap() != ca.quiescent());
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let ca = builtin_xy(2, 3).unwrap();
    assert!(run(&ca, 80).unwrap().same_states(&run(&ca, 80).unwrap()));
}

#[test]
fn stepper_follows_run() {
    let ca = builtin_log2();
    let d = run(&ca, 64).unwrap();
    let mut st = Stepper::new(&ca, RunOptions::default()).unwrap();
    for t in 0..=64 {
        assert_eq!(st.slice(), d.slice(t).unwrap());
        if t < 64 {
            st.step().unwrap();
        }
    }
}

#[test]
fn log2_active_cells_stay_in_the_wedge() {
    let d = run(&builtin_log2(), 256).unwrap();
    for (site, _) in d.sites() {
        let (x, y, z) = (site.cell[0] as i64, site.cell[1] as i64, site.time as i64);
        assert!(-z <= y && y <= x && x <= z, "{site}");
        assert!((x + z) % 2 == 0 && (y + z) % 2 == 0, "{site}");
    }
}

fn bit_len(n: u64) -> u64 {
    64 - n.leading_zeros() as u64
}

/// The counter picture: `W(k,0,·)` is `k+1` in binary, low digit first, and
/// every row `l >= 1` is `1^ĩ 0^(len-ĩ)` with `ĩ` the trailing ones of `k+1`.
fn predicted(x: i64, y: i64, t: i64) -> Option<&'static str> {
    let l = (x - y) / 2;
    let s = (x + y) / 2;
    let (k, i) = ((s + t - l) / 2, (t - l - s) / 2);
    if l < 0 || k < 0 || i < 0 {
        return None;
    }
    let n = k as u64 + 1;
    if i as u64 >= bit_len(n) {
        return None;
    }
    let one = if l == 0 { (n >> i) & 1 == 1 } else { (i as u32) < n.trailing_ones() };
    Some(if one { "1" } else { "0" })
}

fn predicted_count(t: i64) -> usize {
    (0..=t).map(|k| bit_len(k as u64 + 1).min((t - k + 1) as u64) as usize).sum()
}

#[test]
fn log2_slices_are_exactly_the_counter_picture() {
    let ca = builtin_log2();
    let mut st = Stepper::new(&ca, RunOptions::default()).unwrap();
    for t in 0..=512i64 {
        let slice = st.slice();
        for (c, s) in slice.iter() {
            assert_eq!(predicted(c[0] as i64, c[1] as i64, t), Some(ca.symbol(s)), "at {c}, t={t}");
        }
        assert_eq!(slice.len(), predicted_count(t), "t={t}");
        st.step().unwrap();
    }
}

#[test]
fn diagonal_words() {
    let ca = builtin_log2();
    let d = run(&ca, 16).unwrap();
    let w = d.diagonal(&Coord::from_slice(&[0, 0]), 6).unwrap();
    let letters: Vec<&str> = w.letters.iter().map(|s| ca.symbol(*s)).collect();
    assert_eq!(letters, ["1", "0", "1", "0", "1", "0"]);
    assert_eq!(w.start_time, 0);

    let off = d.diagonal(&Coord::from_slice(&[-1, 0]), 40).unwrap();
    assert!(off.letters.iter().all(|s| *s == ca.quiescent()));

    let w = d.diagonal(&Coord::from_slice(&[3, 1]), 4).unwrap();
    assert_eq!(w.start_time, 2);
    assert!(d.diagonal(&Coord::from_slice(&[0, 0]), 17).is_err());

    let q = run(&builtin_quiescent(Neighborhood::trellis(2)), 8).unwrap();
    let w = q.diagonal(&Coord::from_slice(&[0, 0]), 8).unwrap();
    assert!(w.letters.iter().all(|s| *s == q.ca().quiescent()));
}

#[test]
fn w_transform_examples() {
    let ca = builtin_log2();
    let d = run(&ca, 16).unwrap();
    let row = |k: i64, l: i64, n: i64| -> Vec<&str> {
        (0..n).map(|i| ca.symbol(d.w_value(k, l, i).unwrap())).collect()
    };
    assert_eq!(row(0, 0, 1), ["1"]);
    assert_eq!(row(5, 0, 4), ["0", "1", "1", "λ"]);
    assert_eq!(row(2, 1, 3), ["1", "1", "λ"]);
    assert_eq!(d.w_value(-3, 0, 0).unwrap(), ca.quiescent());
    assert!(matches!(d.w_value(10, 0, 7), Err(EngineError::BeyondHorizon { .. })));
}

#[test]
fn state_lookup_edges() {
    let ca = builtin_log2();
    let d = run(&ca, 8).unwrap();
    assert_eq!(at(&d, -1, 0, 4), "λ");
    assert_eq!(at(&d, 0, 0, 0), "1");
    assert_eq!(at(&d, 5, 0, 2), "λ");
    assert!(matches!(
        d.state_at(&Site::new(Coord::zero(2), 9)),
        Err(EngineError::BeyondHorizon { time: 9, horizon: 8 })
    ));
    assert!(matches!(
        d.state_at(&Site::new(Coord::zero(3), 1)),
        Err(EngineError::DimensionMismatch { expected: 2, found: 3 })
    ));
    let one_d = run(&builtin_quiescent(Neighborhood::moore(1)), 2).unwrap();
    assert_eq!(one_d.w_value(0, 0, 0), Err(EngineError::NotTwoDimensional));
}

#[test]
fn budget_overflow_keeps_completed_slices() {
    let ca = builtin_log2();
    let (partial, err) = run_bounded(&ca, 100, &RunOptions::with_budget(50));
    let Some(EngineError::OverflowHorizon { last_completed }) = err else {
        panic!("expected overflow, got {err:?}");
    };
    assert_eq!(partial.horizon(), last_completed);
    assert!(partial.stored_sites() <= 50);
    assert!(run_with(&ca, 100, &RunOptions::with_budget(50)).is_err());
    assert!(dense_run(&ca, 100, 1000).is_err());

    let mut st = Stepper::new(&ca, RunOptions::with_budget(10)).unwrap();
    let err = (0..100).find_map(|_| st.step().err()).unwrap();
    assert!(matches!(err, EngineError::OverflowHorizon { .. }));
}

#[test]
fn recorded_regions_refuse_unrecorded_sites() {
    let ca = builtin_log2();
    let rec = record_region(&ca, 40, &RunOptions::with_band(2), |c, t| {
        c.as_slice().iter().all(|&u| t as i64 - u as i64 <= 2)
    })
    .unwrap();
    let full = run(&ca, 40).unwrap();
    for t in 0..40 {
        let site = Site::new(Coord::from_slice(&[t as i32, t as i32 - 2]), t);
        if t >= 2 {
            assert_eq!(rec.state_at(&site).unwrap(), full.state_at(&site).unwrap());
        }
    }
    let far = Site::new(Coord::from_slice(&[0, 0]), 20);
    assert_eq!(rec.state_at(&far), Err(EngineError::NotRecorded(far)));
    assert!(!rec.is_empty());
}

#[test]
fn moore_runs_stay_sound() {
    let ca = random_ca(&mut ChaCha8Rng::seed_from_u64(3), 2, Neighborhood::moore(2));
    let d = run(&ca, 6).unwrap();
    assert_eq!(d.ca().neighborhood().kind, NeighborhoodKind::Moore);
    assert_sound(&d);
}
