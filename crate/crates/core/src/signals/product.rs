use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Follower, MoveConvention, SignalError};
use crate::automaton::{Alphabet, ImpulseCA, Matcher, Rule, RuleTable, StateId, StateSet};

/// Symbol of the product state `(s, q)`; `q = None` is the empty second
/// component.
pub fn product_symbol(ca: &ImpulseCA, f: &Follower, s: StateId, q: Option<usize>) -> String {
    match q {
        Some(q) => format!("{}@{}", ca.symbol(s), f.name(q)),
        None => format!("{}@-", ca.symbol(s)),
    }
}

/// A product automaton together with the marked states `S × Q`.
#[derive(Clone, Debug)]
pub struct ProductCA {
    pub ca: ImpulseCA,
    pub marked: StateSet,
}

/// Builds the automaton over `S × ({0} ∪ Q)` whose first component evolves
/// like `ca` and whose second component carries the follower: a cell takes
/// `m ∈ Q` when the neighbor in slot `a` holds `(s_a, q_a)` with
/// `δ(q_a, s_a) = (m, x)` and the move produced by `x` lands on the cell.
///
/// State `(s, q)` has index `q' · |S| + s` with `q' = 0` for the empty
/// component and `q' = q + 1` otherwise, so `(λ, 0)` keeps index 0 whenever
/// `λ` does.
pub fn product_construct(ca: &ImpulseCA, f: &Follower, conv: MoveConvention) -> Result<ProductCA, SignalError> {
    if f.inputs() != ca.num_states() {
        return Err(SignalError::AlphabetMismatch { follower: f.inputs(), automaton: ca.num_states() });
    }
    let ns = ca.num_states();
    let nq = f.num_states();
    let id = |s: StateId, q: Option<usize>| StateId((q.map_or(0, |q| q + 1) * ns + s.index()) as u16);

    let mut symbols = Vec::with_capacity(ns * (nq + 1));
    for q in core::iter::once(None).chain((0..nq).map(Some)) {
        for s in ca.alphabet().ids() {
            symbols.push(product_symbol(ca, f, s, q));
        }
    }
    let alphabet = Alphabet::new(symbols)?;

    // Product states whose first component satisfies a base matcher.
    let lift = |m: &Matcher| -> Matcher {
        match m {
            Matcher::Wildcard => Matcher::Wildcard,
            _ => Matcher::any_of(
                ca.alphabet()
                    .ids()
                    .filter(|s| m.matches(*s))
                    .flat_map(|s| core::iter::once(None).chain((0..nq).map(Some)).map(move |q| (s, q)))
                    .map(|(s, q)| id(s, q)),
            ),
        }
    };

    let mut rules = Vec::new();
    let base = ca.table().rules();
    for (slot, x) in ca.order().iter().enumerate() {
        for (e, _) in f.entries() {
            // The follower sits at u + x and moves by d; it lands on u iff d = -x.
            let d = conv.displacement(&e.offset)?;
            if d.checked_add(x)?.as_slice().iter().any(|&c| c != 0) {
                continue;
            }
            for r in base {
                if !r.pattern.0[slot].matches(e.s) {
                    continue;
                }
                let pattern = r
                    .pattern
                    .0
                    .iter()
                    .enumerate()
                    .map(|(n, m)| if n == slot { Matcher::Literal(id(e.s, Some(e.q))) } else { lift(m) })
                    .collect();
                rules.push(Rule::new(pattern, id(r.result, Some(e.q2))));
            }
        }
    }
    for r in base {
        rules.push(Rule::new(r.pattern.0.iter().map(lift).collect(), id(r.result, None)));
    }

    let product = ImpulseCA::new(
        alphabet,
        *ca.neighborhood(),
        ca.order().to_vec(),
        RuleTable::new(ca.order().len(), rules)?,
        id(ca.quiescent(), None),
        id(ca.seed(), Some(f.initial())),
    )?;
    let marked = (0..nq).flat_map(|q| ca.alphabet().ids().map(move |s| id(s, Some(q)))).collect();
    Ok(ProductCA { ca: product, marked })
}
