use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::table::LAMBDA;
use super::{Alphabet, AutomatonError, ImpulseCA, Matcher, Rule, RuleTable, StateId};
use crate::lattice::{Coord, Neighborhood};

/// Argument order `a, b, c, d` of the built-in 2-D tables:
/// `(-1,-1), (-1,1), (1,1), (1,-1)`.
pub fn trellis_order() -> Vec<Coord> {
    [[-1, -1], [-1, 1], [1, 1], [1, -1]]
        .iter()
        .map(|c| Coord::from_slice(c))
        .collect()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Three-state 2-D trellis automaton whose `W(k,0,·)` row is the binary
/// writing of `k+1`. Seed `1`, quiescent `λ`, rules `#0`–`#14` in order.
pub fn builtin_log2() -> ImpulseCA {
    let alphabet = Alphabet::new([LAMBDA, "0", "1"]).unwrap();
    const L: u8 = b'l';
    const W: u8 = b'*';
    let rows: [([u8; 4], u8); 15] = [
        (*b"llll", L),
        (*b"1lll", b'0'),
        (*b"0lll", b'1'),
        (*b"ll01", b'1'),
        (*b"1l01", b'0'),
        (*b"0l01", b'1'),
        (*b"1l10", b'1'),
        (*b"1l00", b'1'),
        (*b"0l10", b'0'),
        (*b"0l00", b'0'),
        (*b"*1l*", b'1'),
        (*b"*11*", b'1'),
        (*b"*10*", b'0'),
        (*b"*0**", b'0'),
        (*b"****", L),
    ];
    let state = |c: u8| match c {
        L => StateId(0),
        b'0' => StateId(1),
        b'1' => StateId(2),
        _ => unreachable!(),
    };
    let rules = rows
        .iter()
        .map(|(pat, res)| {
            let pattern = pat
                .iter()
                .map(|&c| if c == W { Matcher::Wildcard } else { Matcher::Literal(state(c)) })
                .collect();
            Rule::new(pattern, state(*res))
        })
        .collect();
    ImpulseCA::new(
        alphabet,
        Neighborhood::trellis(2),
        trellis_order(),
        RuleTable::new(4, rules).unwrap(),
        StateId(0),
        StateId(2),
    )
    .expect("built-in table is valid")
}

/// Symbol of `π_j`.
pub fn xy_pi(j: u32) -> String {
    format!("π_{j}")
}

/// Symbol of `κ_j`.
pub fn xy_kappa(j: u32) -> String {
    format!("κ_{j}")
}

fn check_xy(x: u32, y: u32) -> Result<(), AutomatonError> {
    if x == 0 || y == 0 {
        return Err(AutomatonError::ZeroParameter);
    }
    if gcd(x as u64, y as u64) != 1 {
        return Err(AutomatonError::NotCoprime { x, y });
    }
    Ok(())
}

/// The two-plane automaton supporting the `⌊log_{xy}(t+1)⌋` slow-down.
///
/// Alphabet `λ, π_0..π_x, κ_0..κ_y`, seed `π_1`. Indexed rules are expanded
/// into literal or `AnyOf` patterns; the counter wrap of rules `#1`/`#6` is
/// `π_x → π_1`.
pub fn builtin_xy(x: u32, y: u32) -> Result<ImpulseCA, AutomatonError> {
    check_xy(x, y)?;
    let mut symbols = vec![String::from(LAMBDA)];
    symbols.extend((0..=x).map(xy_pi));
    symbols.extend((0..=y).map(xy_kappa));
    let alphabet = Alphabet::new(symbols)?;
    let pi = |j: u32| StateId(1 + j as u16);
    let kappa = |j: u32| StateId((x + 2 + j) as u16);
    let rules = xy_rules(x, y, pi, kappa, false);
    ImpulseCA::new(
        alphabet,
        Neighborhood::trellis(2),
        trellis_order(),
        RuleTable::new(4, rules)?,
        StateId(0),
        pi(1),
    )
}

/// Single-plane-alphabet variant: every `κ_i` renamed `π_i` and every `λ` in
/// argument `d` relaxed to a wildcard. Requires `x <= y`.
pub fn merged_xy(x: u32, y: u32) -> Result<ImpulseCA, AutomatonError> {
    check_xy(x, y)?;
    if x > y {
        return Err(AutomatonError::XNotSmallest { x, y });
    }
    let mut symbols = vec![String::from(LAMBDA)];
    symbols.extend((0..=y).map(xy_pi));
    let alphabet = Alphabet::new(symbols)?;
    let pi = |j: u32| StateId(1 + j as u16);
    let rules = xy_rules(x, y, pi, pi, true);
    ImpulseCA::new(
        alphabet,
        Neighborhood::trellis(2),
        trellis_order(),
        RuleTable::new(4, rules)?,
        StateId(0),
        pi(1),
    )
}

fn xy_rules(
    x: u32,
    y: u32,
    pi: impl Fn(u32) -> StateId,
    kappa: impl Fn(u32) -> StateId,
    relax_d: bool,
) -> Vec<Rule> {
    let lam = StateId(0);
    let lit = Matcher::Literal;
    let l = || lit(lam);
    // Argument d where the table writes λ.
    let d_lambda = || if relax_d { Matcher::Wildcard } else { lit(lam) };
    let pi_where = |keep: &dyn Fn(u32) -> bool| Matcher::any_of((0..=x).filter(|&j| keep(j)).map(&pi));
    let kappa_where = |keep: &dyn Fn(u32) -> bool| Matcher::any_of((0..=y).filter(|&j| keep(j)).map(&kappa));
    let pi_any = || pi_where(&|_| true);
    let kappa_any = || kappa_where(&|_| true);
    let lambda_or_ky = || Matcher::any_of([lam, kappa(y)]);
    let bump = |j: u32| if j == x { pi(1) } else { pi(j + 1) };

    let mut rules = Vec::new();
    let mut push = |a: Matcher, b: Matcher, c: Matcher, d: Matcher, r: StateId| {
        rules.push(Rule::new(vec![a, b, c, d], r));
    };

    // #0
    push(l(), l(), l(), d_lambda(), lam);
    // Rules for l = 0.
    // #1
    for j in 0..=x {
        push(lit(pi(j)), l(), l(), d_lambda(), bump(j));
    }
    // #2
    push(lit(pi(x)), l(), pi_where(&|k| k != x), kappa_any(), pi(0));
    // #3
    for j in (0..=x).filter(|&j| j != x) {
        push(lit(pi(j)), l(), pi_where(&|k| k != x), kappa_any(), pi(j));
    }
    // #4
    push(lit(pi(x)), l(), lit(pi(x)), kappa_where(&|k| k + 1 != y), pi(0));
    // #5
    for j in (0..=x).filter(|&j| j != x) {
        push(lit(pi(j)), l(), lit(pi(x)), kappa_where(&|k| k + 1 != y), pi(j));
    }
    // #6
    for j in 0..=x {
        push(lit(pi(j)), l(), lit(pi(x)), lit(kappa(y - 1)), bump(j));
    }
    // #7
    push(l(), l(), lit(pi(x)), lit(kappa(y - 1)), pi(1));
    // Rules for l = 1.
    // #8
    push(lit(kappa(y - 1)), lit(pi(x)), lambda_or_ky(), d_lambda(), kappa(y));
    // #9
    push(lit(kappa(y - 1)), pi_where(&|k| k != x), lambda_or_ky(), d_lambda(), kappa(0));
    // #10
    push(lit(kappa(y)), pi_any(), lambda_or_ky(), d_lambda(), kappa(1));
    // #11
    for j in (0..=y).filter(|&j| j + 1 != y && j != y) {
        push(lit(kappa(j)), pi_any(), lambda_or_ky(), d_lambda(), kappa(j + 1));
    }
    // #12
    push(lit(kappa(y)), pi_any(), kappa_where(&|k| k != y), d_lambda(), kappa(0));
    // #13
    for j in (0..=y).filter(|&j| j != y) {
        push(lit(kappa(j)), pi_any(), kappa_where(&|k| k != y), d_lambda(), kappa(j));
    }
    // #14
    push(l(), lit(pi(1)), lambda_or_ky(), d_lambda(), kappa(1));
    // #15
    push(Matcher::Wildcard, Matcher::Wildcard, Matcher::Wildcard, Matcher::Wildcard, lam);
    rules
}

/// The one-state automaton `({λ}, V, f, λ, λ)`.
pub fn builtin_quiescent(neighborhood: Neighborhood) -> ImpulseCA {
    let alphabet = Alphabet::new([LAMBDA]).unwrap();
    let order = neighborhood.offsets();
    let v = order.len();
    let table = RuleTable::new(v, vec![Rule::new(vec![Matcher::Wildcard; v], StateId(0))]).unwrap();
    ImpulseCA::new(alphabet, neighborhood, order, table, StateId(0), StateId(0))
        .expect("constant table is valid")
}
