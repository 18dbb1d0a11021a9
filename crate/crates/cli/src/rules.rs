//! Text rule files.
//!
//! ```text
//! # comment lines start with '#'
//! states: λ 0 1            # first token is the quiescent state
//! seed: 1
//! neighborhood: trellis 2  # kind, dimension
//! order: (-1,-1) (-1,1) (1,1) (1,-1)
//! rule: 1 λ λ λ -> 0
//! rule: * 1 {λ,1} * -> 1
//! rule: * * * * -> λ
//! ```

use std::fmt::Write as _;

use ca_signals_core::automaton::{AutomatonError, LAMBDA};
use ca_signals_core::lattice::{LatticeError, NeighborhoodKind};
use ca_signals_core::{Alphabet, Coord, ImpulseCA, Matcher, Neighborhood, Rule, RuleTable, StateSet};
use thiserror::Error;

use crate::parse::parse_coord;

#[derive(Debug, Error)]
pub enum RulesError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown state `{symbol}`")]
    UnknownState { line: usize, symbol: String },
    #[error("line {line}: {found} pattern slots, expected {expected}")]
    ArityMismatch { line: usize, expected: usize, found: usize },
    #[error("f(λ,…,λ) must be the quiescent state")]
    QuiescentViolation,
    #[error("rule table is not total")]
    NotTotal,
    #[error(transparent)]
    Automaton(AutomatonError),
}

impl From<AutomatonError> for RulesError {
    fn from(e: AutomatonError) -> Self {
        match e {
            AutomatonError::QuiescentViolation => RulesError::QuiescentViolation,
            AutomatonError::NotTotal { .. } => RulesError::NotTotal,
            e => RulesError::Automaton(e),
        }
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> RulesError {
    RulesError::Syntax { line, msg: msg.into() }
}

fn canonical(symbol: &str) -> &str {
    if symbol == "lambda" {
        LAMBDA
    } else {
        symbol
    }
}

/// Drops a `#` comment that starts a token.
fn strip_comment(line: &str) -> &str {
    let mut prev_space = true;
    for (n, c) in line.char_indices() {
        if c == '#' && prev_space {
            return &line[..n];
        }
        prev_space = c.is_whitespace();
    }
    line
}

/// Whitespace-separated tokens, with `{…}` groups kept whole.
fn tokens(s: &str, line: usize) -> Result<Vec<String>, RulesError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for c in s.chars() {
        match c {
            '{' => {
                depth += 1;
                cur.push(c);
            }
            '}' => {
                if depth == 0 {
                    return Err(syntax(line, "unbalanced `}`"));
                }
                depth -= 1;
                cur.push(c);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return Err(syntax(line, "unbalanced `{`"));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

struct Header {
    states: Option<Alphabet>,
    seed: Option<(usize, String)>,
    neighborhood: Option<Neighborhood>,
    order: Option<Vec<Coord>>,
}

pub fn parse_rules(text: &str) -> Result<ImpulseCA, RulesError> {
    let mut h = Header { states: None, seed: None, neighborhood: None, order: None };
    let mut rules: Vec<(usize, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once(':').ok_or_else(|| syntax(line, "expected `key: value`"))?;
        let value = value.trim();
        match key.trim() {
            "states" => {
                if h.states.is_some() {
                    return Err(syntax(line, "duplicate `states`"));
                }
                let symbols: Vec<&str> = value.split_whitespace().map(canonical).collect();
                h.states = Some(Alphabet::new(symbols).map_err(|e| syntax(line, e.to_string()))?);
            }
            "seed" => {
                let t = tokens(value, line)?;
                let [s] = t.as_slice() else { return Err(syntax(line, "expected one seed state")) };
                h.seed = Some((line, s.clone()));
            }
            "neighborhood" => {
                let t: Vec<&str> = value.split_whitespace().collect();
                let [kind, dim] = t.as_slice() else {
                    return Err(syntax(line, "expected `kind dimension`"));
                };
                let kind = NeighborhoodKind::from_name(kind)
                    .ok_or_else(|| syntax(line, format!("unknown neighborhood `{kind}`")))?;
                let dim: usize = dim.parse().map_err(|_| syntax(line, format!("bad dimension `{dim}`")))?;
                h.neighborhood =
                    Some(Neighborhood::new(kind, dim).map_err(|e: LatticeError| syntax(line, e.to_string()))?);
            }
            "order" => {
                let order = value
                    .split_whitespace()
                    .map(|c| parse_coord(c).map_err(|e| syntax(line, e)))
                    .collect::<Result<Vec<_>, _>>()?;
                h.order = Some(order);
            }
            "rule" => rules.push((line, value.to_string())),
            other => return Err(syntax(line, format!("unknown key `{other}`"))),
        }
    }

    let alphabet = h.states.ok_or_else(|| syntax(0, "missing `states`"))?;
    let nb = h.neighborhood.ok_or_else(|| syntax(0, "missing `neighborhood`"))?;
    let order = h.order.unwrap_or_else(|| nb.offsets());
    let (seed_line, seed) = h.seed.ok_or_else(|| syntax(0, "missing `seed`"))?;
    let lookup = |line: usize, s: &str| {
        alphabet.get(canonical(s)).ok_or_else(|| RulesError::UnknownState { line, symbol: s.to_string() })
    };
    let seed = lookup(seed_line, &seed)?;

    let mut table = Vec::with_capacity(rules.len());
    for (line, body) in &rules {
        let (lhs, rhs) = body.split_once("->").ok_or_else(|| syntax(*line, "expected `->`"))?;
        let rhs = tokens(rhs, *line)?;
        let [result] = rhs.as_slice() else { return Err(syntax(*line, "expected one result state")) };
        let result = lookup(*line, result)?;
        let slots = tokens(lhs, *line)?;
        if slots.len() != order.len() {
            return Err(RulesError::ArityMismatch { line: *line, expected: order.len(), found: slots.len() });
        }
        let pattern = slots
            .iter()
            .map(|tok| {
                if tok == "*" {
                    Ok(Matcher::Wildcard)
                } else if let Some(inner) = tok.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
                    let mut set = StateSet::new();
                    for s in inner.split(',').filter(|s| !s.is_empty()) {
                        set.insert(lookup(*line, s)?);
                    }
                    Ok(Matcher::AnyOf(set))
                } else {
                    Ok(Matcher::Literal(lookup(*line, tok)?))
                }
            })
            .collect::<Result<Vec<_>, RulesError>>()?;
        table.push(Rule::new(pattern, result));
    }
    let table = RuleTable::new(order.len(), table)?;
    let quiescent = ca_signals_core::StateId(0);
    Ok(ImpulseCA::new(alphabet, nb, order, table, quiescent, seed)?)
}

/// The file text for `ca`.
///
/// # Panics
///
/// If the quiescent state is not the first symbol: the format has no other
/// way to name it.
pub fn serialize_rules(ca: &ImpulseCA) -> String {
    assert_eq!(ca.quiescent().index(), 0, "quiescent state must be listed first");
    let mut out = String::new();
    let sym = |s| ca.symbol(s);
    let states: Vec<&str> = ca.alphabet().symbols().iter().map(String::as_str).collect();
    writeln!(out, "states: {}", states.join(" ")).unwrap();
    writeln!(out, "seed: {}", sym(ca.seed())).unwrap();
    writeln!(out, "neighborhood: {}", ca.neighborhood()).unwrap();
    let order: Vec<String> = ca.order().iter().map(|c| c.to_string()).collect();
    writeln!(out, "order: {}", order.join(" ")).unwrap();
    for rule in ca.table().rules() {
        let slots: Vec<String> = rule
            .pattern
            .0
            .iter()
            .map(|m| match m {
                Matcher::Wildcard => "*".to_string(),
                Matcher::Literal(s) => sym(*s).to_string(),
                Matcher::AnyOf(set) => {
                    let members: Vec<&str> = set.iter().map(sym).collect();
                    format!("{{{}}}", members.join(","))
                }
            })
            .collect();
        writeln!(out, "rule: {} -> {}", slots.join(" "), sym(rule.result)).unwrap();
    }
    out
}
