use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::lattice::NeighborhoodKind;

fn tuple(ca: &ImpulseCA, syms: &[&str]) -> Vec<StateId> {
    syms.iter().map(|s| ca.state(s).unwrap()).collect()
}

fn apply(ca: &ImpulseCA, syms: &[&str]) -> String {
    String::from(ca.symbol(ca.apply(&tuple(ca, syms)).unwrap()))
}

#[test]
fn log2_examples() {
    let ca = builtin_log2();
    assert_eq!(ca.num_states(), 3);
    assert_eq!(ca.table().rules().len(), 15);
    assert_eq!(apply(&ca, &["λ", "λ", "λ", "λ"]), "λ");
    assert_eq!(apply(&ca, &["1", "λ", "λ", "λ"]), "0");
    assert_eq!(apply(&ca, &["0", "λ", "0", "1"]), "1");
    assert_eq!(apply(&ca, &["λ", "λ", "0", "1"]), "1");
    for c in ["λ", "0", "1"] {
        for d in ["λ", "0", "1"] {
            assert_eq!(apply(&ca, &["0", "0", c, d]), "0");
        }
    }
    assert_eq!(ca.symbol(ca.seed()), "1");
    assert_eq!(ca.symbol(ca.quiescent()), "λ");
}

#[test]
fn log2_matches_first_rule_in_precedence() {
    let ca = builtin_log2();
    let mut t = vec![StateId(0); 4];
    let mut seen = 0;
    loop {
        let first = ca.table().matching_rule(&t).unwrap();
        let all: Vec<usize> = ca
            .table()
            .rules()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.pattern.matches(&t))
            .map(|(n, _)| n)
            .collect();
        assert!(all.iter().all(|&n| first <= n));
        assert_eq!(ca.apply(&t).unwrap(), ca.table().rules()[first].result);
        seen += 1;
        if !next_tuple(&mut t, 3) {
            break;
        }
    }
    assert_eq!(seen, 81);
}

#[test]
fn xy_alphabet_and_rule_8() {
    let ca = builtin_xy(2, 3).unwrap();
    assert_eq!(ca.num_states(), 8);
    let syms: Vec<&str> = ca.alphabet().symbols().iter().map(|s| s.as_str()).collect();
    assert_eq!(syms, ["λ", "π_0", "π_1", "π_2", "κ_0", "κ_1", "κ_2", "κ_3"]);
    assert_eq!(ca.symbol(ca.seed()), "π_1");
    assert_eq!(apply(&ca, &["κ_2", "π_2", "λ", "λ"]), "κ_3");
    assert_eq!(apply(&ca, &["κ_2", "π_1", "κ_3", "λ"]), "κ_0");
    assert_eq!(apply(&ca, &["π_2", "λ", "λ", "λ"]), "π_1");
    assert_eq!(apply(&ca, &["λ", "λ", "π_2", "κ_2"]), "π_1");
}

#[test]
fn xy_parameter_errors() {
    assert_eq!(builtin_xy(2, 4).unwrap_err(), AutomatonError::NotCoprime { x: 2, y: 4 });
    assert_eq!(builtin_xy(0, 3).unwrap_err(), AutomatonError::ZeroParameter);
    assert_eq!(merged_xy(3, 2).unwrap_err(), AutomatonError::XNotSmallest { x: 3, y: 2 });
    assert_eq!(merged_xy(2, 4).unwrap_err(), AutomatonError::NotCoprime { x: 2, y: 4 });
    assert_eq!(builtin_xy(3, 4).unwrap().num_states(), 10);
}

#[test]
fn merged_alphabet() {
    let ca = merged_xy(2, 3).unwrap();
    assert_eq!(ca.num_states(), 5);
    // d relaxed to a wildcard
    assert_eq!(apply(&ca, &["π_2", "π_2", "λ", "π_1"]), "π_3");
}

#[test]
fn quiescent_builtins() {
    let ca = builtin_quiescent(Neighborhood::trellis(2));
    assert_eq!(ca.num_states(), 1);
    let ca = builtin_quiescent(Neighborhood::moore(1));
    assert_eq!(ca.num_states(), 1);
    assert_eq!(ca.order().len(), 3);
}

#[test]
fn builtins_fix_lambda() {
    let mut cas = vec![builtin_log2(), builtin_xy(2, 3).unwrap(), merged_xy(2, 3).unwrap(), builtin_xy(3, 4).unwrap()];
    for kind in [NeighborhoodKind::Moore, NeighborhoodKind::VonNeumann, NeighborhoodKind::Trellis] {
        cas.push(builtin_quiescent(Neighborhood::new(kind, 3).unwrap()));
    }
    for ca in cas {
        let q = vec![ca.quiescent(); ca.order().len()];
        assert_eq!(ca.apply(&q).unwrap(), ca.quiescent());
    }
}

fn two_state_alphabet() -> Alphabet {
    Alphabet::new(["λ", "1"]).unwrap()
}

#[test]
fn validation_errors() {
    let a = two_state_alphabet();
    let n = Neighborhood::trellis(1);
    let order = n.offsets();
    let lam = StateId(0);
    let one = StateId(1);
    // Missing catch-all: (1,1) unmatched.
    let partial = RuleTable::new(
        2,
        vec![
            Rule::new(vec![Matcher::Literal(lam), Matcher::Wildcard], lam),
            Rule::new(vec![Matcher::Wildcard, Matcher::Literal(lam)], one),
        ],
    )
    .unwrap();
    assert!(matches!(
        ImpulseCA::new(a.clone(), n, order.clone(), partial, lam, one),
        Err(AutomatonError::NotTotal { witness: Some(_) })
    ));
    assert!(matches!(
        RuleTable::new(2, vec![Rule::new(vec![Matcher::Wildcard; 3], lam)]),
        Err(AutomatonError::ArityMismatch { .. })
    ));
    let bad_q = RuleTable::new(2, vec![Rule::new(vec![Matcher::Wildcard; 2], one)]).unwrap();
    assert_eq!(
        ImpulseCA::new(a.clone(), n, order.clone(), bad_q, lam, one),
        Err(AutomatonError::QuiescentViolation)
    );
    let ok = RuleTable::new(2, vec![Rule::new(vec![Matcher::Wildcard; 2], lam)]).unwrap();
    let wrong_order = vec![order[0], order[0]];
    assert!(matches!(
        ImpulseCA::new(a, n, wrong_order, ok, lam, one),
        Err(AutomatonError::BadOrder(_))
    ));
}

#[test]
fn exhaustive_totality_without_catch_all() {
    let a = two_state_alphabet();
    let n = Neighborhood::trellis(1);
    let lam = StateId(0);
    let one = StateId(1);
    let table = RuleTable::new(
        2,
        vec![
            Rule::new(vec![Matcher::Literal(lam), Matcher::Wildcard], lam),
            Rule::new(vec![Matcher::Literal(one), Matcher::any_of([lam, one])], one),
        ],
    )
    .unwrap();
    let ca = ImpulseCA::new(a, n, n.offsets(), table, lam, one).unwrap();
    assert_eq!(ca.apply(&[one, lam]).unwrap(), one);
}

#[test]
fn apply_rejects_wrong_arity() {
    let ca = builtin_log2();
    assert!(matches!(ca.apply(&[StateId(0); 3]), Err(AutomatonError::ArityMismatch { .. })));
}

#[test]
fn lambda_alias() {
    let ca = builtin_log2();
    assert_eq!(ca.state("lambda").unwrap(), ca.quiescent());
    assert!(matches!(ca.state("2"), Err(AutomatonError::UnknownState(_))));
}
