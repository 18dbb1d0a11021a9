use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::AutomatonError;

/// Index of a state inside its owning [`Alphabet`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StateId(pub u16);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Finite, ordered set of state symbols.
///
/// Symbols are arbitrary non-whitespace tokens. `lambda` is accepted as an
/// alias of `λ` on lookup.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    symbols: Vec<String>,
}

pub const LAMBDA: &str = "λ";

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, AutomatonError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(AutomatonError::EmptyAlphabet);
        }
        if symbols.len() > u16::MAX as usize {
            return Err(AutomatonError::TooManyStates(symbols.len()));
        }
        for (n, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(AutomatonError::BadSymbol(s.clone()));
            }
            if symbols[..n].contains(s) {
                return Err(AutomatonError::DuplicateState(s.clone()));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, s: StateId) -> &str {
        &self.symbols[s.index()]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn ids(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.symbols.len()).map(|i| StateId(i as u16))
    }

    pub fn get(&self, symbol: &str) -> Option<StateId> {
        let symbol = if symbol == "lambda" && !self.symbols.iter().any(|s| s == "lambda") {
            LAMBDA
        } else {
            symbol
        };
        self.symbols
            .iter()
            .position(|s| s == symbol)
            .map(|i| StateId(i as u16))
    }

    pub fn lookup(&self, symbol: &str) -> Result<StateId, AutomatonError> {
        self.get(symbol)
            .ok_or_else(|| AutomatonError::UnknownState(symbol.to_string()))
    }
}

/// Bit set of states.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct StateSet {
    words: Vec<u64>,
}

impl StateSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, s: StateId) {
        let (w, b) = (s.index() / 64, s.index() % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << b;
    }

    #[inline]
    pub fn contains(&self, s: StateId) -> bool {
        let (w, b) = (s.index() / 64, s.index() % 64);
        self.words.get(w).is_some_and(|word| word & (1 << b) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word & (1u64 << b) != 0)
                .map(move |b| StateId((w * 64 + b) as u16))
        })
    }
}

impl FromIterator<StateId> for StateSet {
    fn from_iter<I: IntoIterator<Item = StateId>>(iter: I) -> Self {
        let mut set = StateSet::new();
        for s in iter {
            set.insert(s);
        }
        set
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|s| s.0)).finish()
    }
}

/// Matcher for one neighbor position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Matcher {
    Literal(StateId),
    AnyOf(StateSet),
    Wildcard,
}

impl Matcher {
    #[inline]
    pub fn matches(&self, s: StateId) -> bool {
        match self {
            Matcher::Literal(l) => *l == s,
            Matcher::AnyOf(set) => set.contains(s),
            Matcher::Wildcard => true,
        }
    }

    /// Normalizes `AnyOf` sets with zero or one member; sets covering the
    /// whole alphabet are kept as written.
    pub fn any_of(states: impl IntoIterator<Item = StateId>) -> Matcher {
        let set: StateSet = states.into_iter().collect();
        match set.len() {
            1 => Matcher::Literal(set.iter().next().unwrap()),
            _ => Matcher::AnyOf(set),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pattern(pub Vec<Matcher>);

impl Pattern {
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn matches(&self, neighbors: &[StateId]) -> bool {
        self.0.len() == neighbors.len() && self.0.iter().zip(neighbors).all(|(m, &s)| m.matches(s))
    }

    pub fn is_catch_all(&self) -> bool {
        self.0.iter().all(|m| matches!(m, Matcher::Wildcard))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub pattern: Pattern,
    pub result: StateId,
}

impl Rule {
    pub fn new(pattern: Vec<Matcher>, result: StateId) -> Self {
        Rule { pattern: Pattern(pattern), result }
    }
}

/// Ordered transition rules; the first rule whose pattern matches wins.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleTable {
    arity: usize,
    rules: Vec<Rule>,
}

impl RuleTable {
    pub fn new(arity: usize, rules: Vec<Rule>) -> Result<Self, AutomatonError> {
        if let Some((n, r)) = rules.iter().enumerate().find(|(_, r)| r.pattern.arity() != arity) {
            return Err(AutomatonError::ArityMismatch { rule: n, expected: arity, found: r.pattern.arity() });
        }
        Ok(RuleTable { arity, rules })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Index of the first matching rule.
    pub fn matching_rule(&self, neighbors: &[StateId]) -> Option<usize> {
        self.rules.iter().position(|r| r.pattern.matches(neighbors))
    }

    pub fn apply(&self, neighbors: &[StateId]) -> Result<StateId, AutomatonError> {
        if neighbors.len() != self.arity {
            return Err(AutomatonError::ArityMismatch { rule: usize::MAX, expected: self.arity, found: neighbors.len() });
        }
        self.matching_rule(neighbors)
            .map(|n| self.rules[n].result)
            .ok_or(AutomatonError::NoMatch)
    }

    /// Totality over an alphabet of `n_states` symbols.
    ///
    /// A catch-all rule settles it immediately. Otherwise every tuple is
    /// enumerated when there are at most [`EXHAUSTIVE_LIMIT`] of them; larger
    /// tables must end in a catch-all.
    pub fn check_total(&self, n_states: usize) -> Result<(), AutomatonError> {
        if self.rules.iter().any(|r| r.pattern.is_catch_all()) {
            return Ok(());
        }
        let count = tuple_count(n_states, self.arity);
        if count.is_none_or(|c| c > EXHAUSTIVE_LIMIT) {
            return Err(AutomatonError::NotTotal { witness: None });
        }
        let mut tuple = vec![StateId(0); self.arity];
        loop {
            if self.matching_rule(&tuple).is_none() {
                return Err(AutomatonError::NotTotal { witness: Some(tuple) });
            }
            if !next_tuple(&mut tuple, n_states) {
                return Ok(());
            }
        }
    }
}

/// Largest `|S|^v` for which totality is checked by enumeration.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

pub(crate) fn tuple_count(n_states: usize, arity: usize) -> Option<u64> {
    (n_states as u64).checked_pow(u32::try_from(arity).ok()?)
}

/// Odometer step over `S^v`, first position fastest. Returns false after the last tuple.
pub(crate) fn next_tuple(tuple: &mut [StateId], n_states: usize) -> bool {
    for s in tuple.iter_mut() {
        if s.index() + 1 < n_states {
            s.0 += 1;
            return true;
        }
        *s = StateId(0);
    }
    false
}
