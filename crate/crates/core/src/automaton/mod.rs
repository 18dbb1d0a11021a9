//! Rule tables with first-match wildcard precedence, the impulse-CA
//! definition and the built-in automata.

mod builtins;
mod table;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::lattice::{Coord, LatticeError, Neighborhood};

pub use builtins::{
    builtin_log2, builtin_quiescent, builtin_xy, gcd, merged_xy, trellis_order, xy_kappa, xy_pi,
};
pub use table::{
    Alphabet, Matcher, Pattern, Rule, RuleTable, StateId, StateSet, EXHAUSTIVE_LIMIT, LAMBDA,
};
pub(crate) use table::{next_tuple, tuple_count};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("no rule matches the neighbor tuple")]
    NoMatch,
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("invalid state symbol `{0}`")]
    BadSymbol(String),
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("{0} states exceed the supported alphabet size")]
    TooManyStates(usize),
    #[error("rule {rule} has {found} pattern slots, expected {expected}")]
    ArityMismatch { rule: usize, expected: usize, found: usize },
    #[error("f(λ,…,λ) must be the quiescent state")]
    QuiescentViolation,
    #[error("rule table is not total{}", if witness.is_some() { " (unmatched tuple found)" } else { " (no catch-all rule)" })]
    NotTotal { witness: Option<Vec<StateId>> },
    #[error("argument order must be a permutation of the neighborhood offsets: {0}")]
    BadOrder(String),
    #[error("gcd({x},{y}) != 1")]
    NotCoprime { x: u32, y: u32 },
    #[error("x = {x} must not exceed y = {y}")]
    XNotSmallest { x: u32, y: u32 },
    #[error("x and y must be positive")]
    ZeroParameter,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// An impulse cellular automaton `(S, V, f, G, λ)`.
///
/// The table reads its arguments in `order`, a permutation of the
/// neighborhood offsets: argument `n` is the state of cell `u + order[n]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ImpulseCA {
    alphabet: Alphabet,
    neighborhood: Neighborhood,
    order: Vec<Coord>,
    table: RuleTable,
    quiescent: StateId,
    seed: StateId,
}

impl ImpulseCA {
    /// Validates arity, argument order, totality and `f(λ,…,λ) = λ`.
    pub fn new(
        alphabet: Alphabet,
        neighborhood: Neighborhood,
        order: Vec<Coord>,
        table: RuleTable,
        quiescent: StateId,
        seed: StateId,
    ) -> Result<Self, AutomatonError> {
        let n = alphabet.len();
        for s in [quiescent, seed] {
            if s.index() >= n {
                return Err(AutomatonError::UnknownState(alloc::format!("#{}", s.0)));
            }
        }
        let mut sorted = order.clone();
        sorted.sort();
        if sorted != neighborhood.offsets() {
            return Err(AutomatonError::BadOrder(alloc::format!("{order:?}")));
        }
        if table.arity() != order.len() {
            return Err(AutomatonError::ArityMismatch { rule: 0, expected: order.len(), found: table.arity() });
        }
        for (r, rule) in table.rules().iter().enumerate() {
            let unknown = |s: StateId| s.index() >= n;
            let bad_slot = rule.pattern.0.iter().any(|m| match m {
                Matcher::Literal(s) => unknown(*s),
                Matcher::AnyOf(set) => set.iter().any(unknown),
                Matcher::Wildcard => false,
            });
            if bad_slot || unknown(rule.result) {
                return Err(AutomatonError::UnknownState(alloc::format!("in rule {r}")));
            }
        }
        table.check_total(n)?;
        if table.apply(&vec![quiescent; order.len()])? != quiescent {
            return Err(AutomatonError::QuiescentViolation);
        }
        Ok(ImpulseCA { alphabet, neighborhood, order, table, quiescent, seed })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn neighborhood(&self) -> &Neighborhood {
        &self.neighborhood
    }

    pub fn dim(&self) -> usize {
        self.neighborhood.dim()
    }

    /// Argument order of the transition function.
    pub fn order(&self) -> &[Coord] {
        &self.order
    }

    pub fn table(&self) -> &RuleTable {
        &self.table
    }

    pub fn quiescent(&self) -> StateId {
        self.quiescent
    }

    pub fn seed(&self) -> StateId {
        self.seed
    }

    pub fn num_states(&self) -> usize {
        self.alphabet.len()
    }

    /// `f` applied to a neighbor tuple given in argument order.
    pub fn apply(&self, neighbors: &[StateId]) -> Result<StateId, AutomatonError> {
        self.table.apply(neighbors)
    }

    pub fn symbol(&self, s: StateId) -> &str {
        self.alphabet.symbol(s)
    }

    pub fn state(&self, symbol: &str) -> Result<StateId, AutomatonError> {
        self.alphabet.lookup(symbol)
    }
}

#[cfg(test)]
mod tests;
