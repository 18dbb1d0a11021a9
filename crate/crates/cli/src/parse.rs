//! Text syntax shared by the command line and the file formats.

use std::path::PathBuf;

use ca_signals_core::automaton::{builtin_log2, builtin_quiescent, builtin_xy, merged_xy, AutomatonError};
use ca_signals_core::{Coord, ImpulseCA, MovePartition, Neighborhood};
use ca_signals_core::signals::SignalError;
use thiserror::Error;

use crate::rules::{parse_rules, RulesError};

/// `(x,y,…)`; the parentheses are optional so `-1,0` works on the command line.
pub fn parse_coord(text: &str) -> Result<Coord, String> {
    let t = text.trim();
    let inner = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
    let parts = inner
        .split(',')
        .map(|p| p.trim().parse::<i32>().map_err(|_| format!("bad coordinate `{text}`")))
        .collect::<Result<Vec<_>, _>>()?;
    Coord::new(&parts).map_err(|e| format!("bad coordinate `{text}`: {e}"))
}

/// Where an automaton comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaSpec {
    Log2,
    Xy(u32, u32),
    Merged(u32, u32),
    /// The one-state automaton on the 2-D trellis.
    Quiescent,
    File(PathBuf),
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("unknown automaton `{0}` (expected log2, xy:X,Y, merged:X,Y, quiescent or file:PATH)")]
    Unknown(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("{path}: {source}")]
    Rules { path: String, source: RulesError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn pair(text: &str) -> Option<(u32, u32)> {
    let (x, y) = text.split_once(',')?;
    Some((x.trim().parse().ok()?, y.trim().parse().ok()?))
}

impl CaSpec {
    pub fn parse(text: &str) -> Result<CaSpec, SpecError> {
        let unknown = || SpecError::Unknown(text.to_string());
        match text.split_once(':') {
            None if text == "log2" => Ok(CaSpec::Log2),
            None if text == "quiescent" => Ok(CaSpec::Quiescent),
            Some(("xy", p)) => pair(p).map(|(x, y)| CaSpec::Xy(x, y)).ok_or_else(unknown),
            Some(("merged", p)) => pair(p).map(|(x, y)| CaSpec::Merged(x, y)).ok_or_else(unknown),
            Some(("file", p)) if !p.is_empty() => Ok(CaSpec::File(PathBuf::from(p))),
            _ => Err(unknown()),
        }
    }

    pub fn build(&self) -> Result<ImpulseCA, SpecError> {
        Ok(match self {
            CaSpec::Log2 => builtin_log2(),
            CaSpec::Xy(x, y) => builtin_xy(*x, *y)?,
            CaSpec::Merged(x, y) => merged_xy(*x, *y)?,
            CaSpec::Quiescent => builtin_quiescent(Neighborhood::trellis(2)),
            CaSpec::File(p) => {
                let path = p.display().to_string();
                let text = std::fs::read_to_string(p).map_err(|source| SpecError::Io { path: path.clone(), source })?;
                parse_rules(&text).map_err(|source| SpecError::Rules { path, source })?
            }
        })
    }
}

/// `"0:(1,1);1:(-1,-1);λ:(1,1)"`.
pub fn parse_partition(ca: &ImpulseCA, text: &str) -> Result<MovePartition, String> {
    let mut entries = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (sym, coord) = item.rsplit_once(':').ok_or_else(|| format!("expected `state:(offset)` in `{item}`"))?;
        let s = ca.state(sym.trim()).map_err(|e| e.to_string())?;
        entries.push((s, parse_coord(coord)?));
    }
    MovePartition::new(ca, entries).map_err(|e: SignalError| e.to_string())
}

pub fn format_partition(ca: &ImpulseCA, p: &MovePartition) -> String {
    let items: Vec<String> = ca.alphabet().ids().map(|s| format!("{}:{}", ca.symbol(s), p.class(s))).collect();
    items.join(";")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ca_signals_core::automaton::builtin_log2;

    #[test]
    fn coordinates() {
        assert_eq!(parse_coord("(-1,1)").unwrap(), Coord::from_slice(&[-1, 1]));
        assert_eq!(parse_coord("-1,0").unwrap(), Coord::from_slice(&[-1, 0]));
        assert_eq!(parse_coord(" ( 3 , 4 , 5 ) ").unwrap(), Coord::from_slice(&[3, 4, 5]));
        assert!(parse_coord("(1;2)").is_err());
        assert!(parse_coord("()").is_err());
        assert!(parse_coord("1,2,3,4,5").is_err());
    }

    #[test]
    fn specs() {
        assert_eq!(CaSpec::parse("log2").unwrap(), CaSpec::Log2);
        assert_eq!(CaSpec::parse("xy:2,3").unwrap(), CaSpec::Xy(2, 3));
        assert_eq!(CaSpec::parse("merged:1,3").unwrap(), CaSpec::Merged(1, 3));
        assert_eq!(CaSpec::parse("file:a/b.rules").unwrap(), CaSpec::File("a/b.rules".into()));
        for bad in ["xy:2", "xy", "log3", "file:", "merged:a,b"] {
            assert!(CaSpec::parse(bad).is_err(), "{bad}");
        }
        assert!(matches!(
            CaSpec::Xy(2, 4).build(),
            Err(SpecError::Automaton(AutomatonError::NotCoprime { x: 2, y: 4 }))
        ));
    }

    #[test]
    fn partitions_round_trip() {
        let ca = builtin_log2();
        let p = parse_partition(&ca, "0:(1,1);1:(-1,-1);λ:(-1,-1)").unwrap();
        assert_eq!(p, MovePartition::log2(&ca).unwrap());
        assert_eq!(parse_partition(&ca, &format_partition(&ca, &p)).unwrap(), p);
        assert_eq!(format_partition(&ca, &p), "λ:(-1,-1);0:(1,1);1:(-1,-1)");
        assert!(parse_partition(&ca, "0:(1,1);1:(-1,-1)").is_err());
        assert!(parse_partition(&ca, "0:(1,0);1:(-1,-1);λ:(1,1)").is_err());
        assert!(parse_partition(&ca, "2:(1,1)").is_err());
    }
}
